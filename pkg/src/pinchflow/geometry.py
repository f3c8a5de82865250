"""Curvature data of the supported hypersurface families and pinching classification.

Three families are supported: geodesic spheres (umbilic), product
hypersurfaces S^{n-1} x S^1 (two distinct principal curvatures), and
rotationally invariant hypersurfaces given by a torus-type profile curve
(curvature from the finite-difference engine in :mod:`pinchflow.axisym`).

Normal orientation: the product family carries H = (n-1) lam - c/lam with
lam > 0, and geodesic spheres use the inward normal, so H > 0 for radii below
the equator.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Union

import numpy as np

from . import axisym
from .errors import GeometryError
from .thresholds import PinchingParams, family

__all__ = [
    "GeodesicSphere",
    "ProductSn1S1",
    "Axisymmetric",
    "HypersurfaceState",
    "CurvatureData",
    "PinchingClass",
    "PinchingVerdict",
    "product_lambda_for_mean_curvature",
    "curvature_of",
    "simons_W",
    "ricci_lower_bound",
    "classify_pinching",
]

WEAK_EQUALITY_RTOL = 1e-8


@dataclass(frozen=True)
class GeodesicSphere:
    """Geodesic sphere of radius rho, 0 < rho < pi/sqrt(c)."""

    rho: float


@dataclass(frozen=True)
class ProductSn1S1:
    """Product hypersurface with (n-1)-fold principal curvature lam > 0.

    States built from a squared radius keep it verbatim so that flows started
    at the stationary minimal torus see an exact fixed point in floating
    point (the lam round-trip would perturb the last ulp, which the unstable
    mode then amplifies).
    """

    lam: float
    r1sq_exact: float | None = field(default=None, compare=False)

    def __post_init__(self):
        if not (self.lam > 0.0) or not np.isfinite(self.lam):
            raise GeometryError(f"product curvature lam must be positive, got {self.lam!r}")

    def radii(self, params: PinchingParams) -> tuple[float, float]:
        """(r1, r2) with r1^2 + r2^2 = 1/c."""
        c = params.c
        if self.r1sq_exact is not None:
            r1 = np.sqrt(self.r1sq_exact)
            return float(r1), float(np.sqrt(max(0.0, 1.0 / c - self.r1sq_exact)))
        r1 = 1.0 / np.sqrt(c + self.lam ** 2)
        r2 = self.lam / np.sqrt(c * c + c * self.lam ** 2)
        return r1, r2

    @staticmethod
    def from_r1sq(r1sq: float, params: PinchingParams) -> "ProductSn1S1":
        c = params.c
        if not 0.0 < r1sq < 1.0 / c:
            raise GeometryError(f"product state needs 0 < r1sq < 1/c, got {r1sq!r}")
        return ProductSn1S1(lam=float(np.sqrt(1.0 / r1sq - c)), r1sq_exact=float(r1sq))


@dataclass
class Axisymmetric:
    """Torus-type profile samples (phi, xi) in the orbit space."""

    profile: np.ndarray
    grid_size: int = 0

    def __post_init__(self):
        self.profile = np.atleast_2d(np.asarray(self.profile, dtype=float))
        if self.profile.shape[1] != 2:
            raise GeometryError("axisymmetric profile must have shape (N, 2)")
        if not self.grid_size:
            self.grid_size = self.profile.shape[0]

    @property
    def phi(self) -> np.ndarray:
        return self.profile[:, 0]

    @property
    def xi(self) -> np.ndarray:
        return self.profile[:, 1]


HypersurfaceState = Union[GeodesicSphere, ProductSn1S1, Axisymmetric]


@dataclass
class CurvatureData:
    """Pointwise curvature quantities.

    Scalar-valued for the homogeneous families; array-valued (one entry per
    profile sample) for axisymmetric states.  ``principal`` has the full
    multiset of principal curvatures along the last axis.
    """

    H: float | np.ndarray
    h_norm2: float | np.ndarray
    h0_norm2: float | np.ndarray
    principal: np.ndarray
    W: float | np.ndarray = field(default=np.nan)
    ricci_lb: float | np.ndarray = field(default=np.nan)
    grad_H2: float | np.ndarray = field(default=0.0)


class PinchingClass(enum.Enum):
    STRICT = "strict"
    WEAK_EQUALITY = "weak_equality"
    VIOLATED = "violated"


@dataclass(frozen=True)
class PinchingVerdict:
    kind: PinchingClass
    margin: float  # min over points of gamma(H^2) - |h|^2
    excess: float  # max(0, -margin)


def product_lambda_for_mean_curvature(params: PinchingParams, H: float) -> float:
    """Principal curvature of the product state with prescribed |H|.

    Positive root of (n-1) lam^2 - |H| lam - c = 0, always >= sqrt(c/(n-1)).
    """
    n, c = params.n, params.c
    return (abs(H) + np.sqrt(H * H + 4.0 * (n - 1.0) * c)) / (2.0 * (n - 1.0))


def _principal_to_data(params: PinchingParams, principal: np.ndarray, grad_H2=0.0) -> CurvatureData:
    n = params.n
    H = principal.sum(axis=-1)
    h2 = (principal ** 2).sum(axis=-1)
    h0_2 = np.maximum(h2 - H ** 2 / n, 0.0)
    data = CurvatureData(H=H, h_norm2=h2, h0_norm2=h0_2, principal=principal, grad_H2=grad_H2)
    data.W = simons_W(data, params)
    data.ricci_lb = ricci_lower_bound(data, params)
    return data


def curvature_of(state: HypersurfaceState, params: PinchingParams) -> CurvatureData:
    """Full curvature data of a hypersurface state."""
    n, c = params.n, params.c
    if isinstance(state, GeodesicSphere):
        if not 0.0 < state.rho < np.pi / np.sqrt(c):
            raise GeometryError(
                f"geodesic sphere radius must lie in (0, pi/sqrt(c)), got {state.rho!r}"
            )
        root_c = np.sqrt(c)
        k = root_c * np.cos(root_c * state.rho) / np.sin(root_c * state.rho)
        principal = np.full(n, k)
        return _principal_to_data(params, principal)
    if isinstance(state, ProductSn1S1):
        lam = state.lam
        principal = np.concatenate([np.full(n - 1, lam), [-c / lam]])
        return _principal_to_data(params, principal)
    if isinstance(state, Axisymmetric):
        axisym.validate_profile(state.phi, state.xi)
        geom = axisym.curvature_of_profile(state.phi, state.xi, params)
        principal = np.concatenate(
            [
                np.repeat(geom.kappa_orbit[:, None], n - 1, axis=1),
                geom.kappa_profile[:, None],
            ],
            axis=1,
        )
        return _principal_to_data(params, principal, grad_H2=geom.grad_H2)
    raise GeometryError(f"unsupported hypersurface state {state!r}")


def simons_W(data: CurvatureData, params: PinchingParams) -> float | np.ndarray:
    """Reaction term W = H * tr(h^3) - |h|^4 + n c |h0|^2 from the principal curvatures."""
    n, c = params.n, params.c
    cube_sum = (data.principal ** 3).sum(axis=-1)
    W = data.H * cube_sum - data.h_norm2 ** 2 + n * c * data.h0_norm2
    return float(W) if np.ndim(W) == 0 else W


def ricci_lower_bound(
    data: CurvatureData,
    params: PinchingParams,
    epsilon: float | None = None,
):
    """Lower bound for the Ricci curvature of the hypersurface.

    With epsilon given and the state strictly pinched below gamma - eps*omega,
    also returns the positivity witness (n-1)/n * eps * omega as a second
    value.
    """
    n, c = params.n, params.c
    okumura = (n - 2.0) / np.sqrt(n * (n - 1.0))
    bound = (n - 1.0) / n * (
        n * c
        + 2.0 / n * data.H ** 2
        - data.h_norm2
        - okumura * np.abs(data.H) * np.sqrt(data.h0_norm2)
    )
    bound = float(bound) if np.ndim(bound) == 0 else bound
    if epsilon is None:
        return bound
    fam = family(params)
    x = np.asarray(data.H, dtype=float) ** 2
    g, _, _, _ = fam.gamma(x)
    w, _, _ = fam.omega(x)
    if not np.all(data.h_norm2 < g - epsilon * w):
        return bound, None
    witness = (n - 1.0) / n * epsilon * w
    witness = float(witness) if np.ndim(witness) == 0 else witness
    return bound, witness


def classify_pinching(
    data: CurvatureData,
    params: PinchingParams,
    tol: float = WEAK_EQUALITY_RTOL,
) -> PinchingVerdict:
    """Compare |h|^2 with gamma(H^2); tolerance scales with H^2 + c."""
    fam = family(params)
    x = np.atleast_1d(np.asarray(data.H, dtype=float) ** 2)
    g, _, _, _ = fam.gamma(x)
    margin = g - np.atleast_1d(np.asarray(data.h_norm2, dtype=float))
    scale = tol * (x + params.c)
    m = float(margin.min())
    if np.any(margin < -scale):
        kind = PinchingClass.VIOLATED
    elif np.all(margin > scale):
        kind = PinchingClass.STRICT
    else:
        kind = PinchingClass.WEAK_EQUALITY
    return PinchingVerdict(kind=kind, margin=m, excess=max(0.0, -m))
