"""Curvature-pinching threshold functions for hypersurfaces in spherical space forms.

Everything here is a function of x = H^2 for a fixed ambient dimension n and
curvature c > 0.  The threshold gamma is the C^2 join of a radical branch
(alpha, active for x >= x0) and its second-order Taylor polynomial about x0
(beta, active below).  The weight omega enters the slack term of the pinching
monitor; its printed closed form only covers x >= x0 and is extended below x0
by its own second-order Taylor polynomial, with positivity verified at
construction.

The distinguished abscissa x0 = y_n * c comes from a trigonometric closed form
whose evaluation cancels badly in double precision, so y_n and the derived
constants are computed with mpmath and certified against an independent
bisection of the defining cubic.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np
from mpmath import mp, mpf
from mpmath import atan as _matan
from mpmath import cos as _mcos
from mpmath import sqrt as _msqrt
from scipy.optimize import brentq

from .errors import DerivativeAtZero, DomainError, RootMismatch
from .jets import Jet, variable

__all__ = [
    "Branch",
    "PinchingParams",
    "CriticalConstants",
    "ThresholdBundle",
    "ThresholdFamily",
    "family",
    "eval_alpha",
    "eval_beta",
    "eval_gamma",
    "eval_omega",
    "compute_y_n",
    "compute_k_n",
]

_MP_DPS = 50
_ROOT_SCAN_POINTS = 8192
_ROOT_AGREEMENT_RTOL = 1e-9
_EXTENSION_SCAN_POINTS = 4001


class Branch(enum.Enum):
    """Which branch of the threshold is active at a given x."""

    ALPHA = "alpha"
    BETA = "beta"


@dataclass(frozen=True)
class PinchingParams:
    """Ambient data: dimension n >= 3 and sectional curvature c > 0."""

    n: int
    c: float = 1.0

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 3:
            raise DomainError(f"dimension n must be an integer >= 3, got {self.n!r}")
        if not (self.c > 0.0) or not np.isfinite(self.c):
            raise DomainError(f"ambient curvature c must be positive, got {self.c!r}")
        object.__setattr__(self, "n", int(self.n))
        object.__setattr__(self, "c", float(self.c))


@dataclass(frozen=True)
class CriticalConstants:
    """Distinguished constants of the threshold family.

    y_n is the unique positive root of the defining cubic; x0 = y_n * c is the
    branch point of gamma; x1 is the minimizer of alpha; k_n * c is the sharp
    constant-pinching level.  k_n_branch records which of the two printed
    formulas produced k_n (Taylor value at zero for n = 3, parabola vertex for
    n >= 4).
    """

    y_n: float
    x0: float
    x1: float
    k_n: float
    k_n_branch: str
    bneq_residual: float


@dataclass(frozen=True)
class ThresholdBundle:
    """All threshold values and derivatives at a single x = H^2.

    alpha derivatives are NaN at x = 0, where the radical is singular.
    """

    x: float
    alpha: float
    beta: float
    gamma: float
    alpha_d1: float
    alpha_d2: float
    alpha_d3: float
    gamma_d1: float
    gamma_d2: float
    omega: float
    omega_d1: float
    omega_d2: float
    active_branch: Branch


def _y_n_closed_form(n: int) -> float:
    """Trigonometric closed form for y_n, evaluated in extended precision."""
    with mp.workdps(_MP_DPS):
        m = mpf(n)
        angle = _matan((m * m - 4 * m + 6) / (2 * (m - 1) * _msqrt(2 * m - 5))) / 3
        value = 4 * (1 - m) + (2 * (m * m - 4) / _msqrt(2 * m - 5)) * _mcos(angle)
        return float(value)


def _cubic_residual(n: int, y):
    """Defining cubic for y_n: vanishing identifies the branch point."""
    ratio = (n * n - 4.0 * n + 6.0) / (n * n - 4.0)
    lhs = y * (y + 6.0 * (n - 1.0)) ** 2
    rhs = ratio * ratio * (y + 4.0 * (n - 1.0)) ** 3
    return lhs - rhs


def _y_n_bisection(n: int) -> float:
    """Certify y_n by sign-change scan plus bisection on (0, sqrt(8) n^2)."""
    upper = np.sqrt(8.0) * n * n
    ys = np.linspace(1e-9, upper, _ROOT_SCAN_POINTS)
    vals = _cubic_residual(n, ys)
    sign_changes = np.nonzero(np.sign(vals[:-1]) * np.sign(vals[1:]) < 0)[0]
    if len(sign_changes) != 1:
        raise RootMismatch(
            f"expected exactly one positive root of the y_n cubic for n={n}, "
            f"found {len(sign_changes)} sign changes"
        )
    i = sign_changes[0]
    return brentq(lambda y: _cubic_residual(n, y), ys[i], ys[i + 1], xtol=1e-13, rtol=1e-15)


def _k_n_extended(n: int) -> tuple[float, str]:
    """k_n from the normalized (c = 1) threshold, in extended precision."""
    with mp.workdps(_MP_DPS):
        m = mpf(n)
        angle = _matan((m * m - 4 * m + 6) / (2 * (m - 1) * _msqrt(2 * m - 5))) / 3
        y = 4 * (1 - m) + (2 * (m * m - 4) / _msqrt(2 * m - 5)) * _mcos(angle)
        radical = _msqrt(y * y + 4 * (m - 1) * y)
        a = m + m / (2 * (m - 1)) * y - (m - 2) / (2 * (m - 1)) * radical
        d1 = m / (2 * (m - 1)) - (m - 2) / (2 * (m - 1)) * (y + 2 * (m - 1)) / radical
        d2 = 2 * (m - 2) * (m - 1) / (y * y + 4 * (m - 1) * y) ** mpf("1.5")
        if n == 3:
            value = a - d1 * y + d2 * y * y / 2
            branch = "taylor_at_zero"
        else:
            value = a - d1 * d1 / (2 * d2)
            branch = "vertex"
        return float(value), branch


class ThresholdFamily:
    """Threshold evaluations for one (n, c); constants are precomputed once.

    Array arguments are accepted everywhere and evaluated elementwise.
    """

    def __init__(self, params: PinchingParams):
        self.params = params
        n, c = params.n, params.c

        y_closed = _y_n_closed_form(n)
        y_root = _y_n_bisection(n)
        if abs(y_closed - y_root) > _ROOT_AGREEMENT_RTOL * max(1.0, abs(y_closed)):
            raise RootMismatch(
                f"closed-form y_n={y_closed!r} and bisection root {y_root!r} disagree for n={n}"
            )
        residual = _cubic_residual(n, y_closed)
        scale = abs(y_closed * (y_closed + 6.0 * (n - 1.0)) ** 2)
        k_n, k_branch = _k_n_extended(n)

        self.y_n = y_closed
        self.x0 = y_closed * c
        self.x1 = (n * np.sqrt(n - 1.0) - 2.0 * n + 2.0) * c
        self.k_n = k_n
        self.constants = CriticalConstants(
            y_n=y_closed,
            x0=self.x0,
            x1=self.x1,
            k_n=k_n,
            k_n_branch=k_branch,
            bneq_residual=abs(residual) / scale,
        )

        # Taylor data of alpha at x0; beta is determined by these three numbers.
        a0, a1, a2, _ = self.alpha(self.x0)
        self._beta_coeffs = (float(a0), float(a1), float(a2))

        # Taylor data of omega at x0 for the extension below x0.
        w = self._omega_closed(np.asarray(self.x0))
        self._omega_coeffs = (float(w.f), float(w.d1), float(w.d2))
        self._check_extension_positive()

    # ----------------------------------------------------------------- alpha

    def alpha(self, x, order: int = 3):
        """Radical threshold branch and derivatives up to the requested order.

        Returns (alpha, d1, d2, d3) truncated to order+1 entries.  Derivative
        entries at x = 0 are NaN.
        """
        x = np.asarray(x, dtype=float)
        if np.any(x < 0.0):
            raise DomainError("alpha is defined for x >= 0 only")
        n, c = self.params.n, self.params.c
        s = x * x + 4.0 * (n - 1.0) * c * x
        radical = np.sqrt(s)
        a = n * c + n / (2.0 * (n - 1.0)) * x - (n - 2.0) / (2.0 * (n - 1.0)) * radical
        out = [a]
        if order >= 1:
            with np.errstate(divide="ignore", invalid="ignore"):
                d1 = n / (2.0 * (n - 1.0)) - (n - 2.0) / (2.0 * (n - 1.0)) * (
                    x + 2.0 * (n - 1.0) * c
                ) / radical
                out.append(np.where(x > 0.0, d1, np.nan))
        if order >= 2:
            with np.errstate(divide="ignore", invalid="ignore"):
                d2 = 2.0 * (n - 2.0) * (n - 1.0) * c * c / s ** 1.5
                out.append(np.where(x > 0.0, d2, np.nan))
        if order >= 3:
            with np.errstate(divide="ignore", invalid="ignore"):
                d3 = -6.0 * (n - 2.0) * (n - 1.0) * (x + 2.0 * (n - 1.0) * c) * c * c / s ** 2.5
                out.append(np.where(x > 0.0, d3, np.nan))
        return tuple(out)

    # ------------------------------------------------------------------ beta

    def beta(self, x):
        """Taylor branch about x0: returns (beta, d1, d2)."""
        x = np.asarray(x, dtype=float)
        if np.any(x < 0.0):
            raise DomainError("beta is defined for x >= 0 only")
        a0, a1, a2 = self._beta_coeffs
        dx = x - self.x0
        return a0 + a1 * dx + 0.5 * a2 * dx * dx, a1 + a2 * dx, np.broadcast_to(a2, x.shape).copy()

    # ----------------------------------------------------------------- gamma

    def gamma(self, x):
        """Pinching threshold: alpha for x >= x0, beta below.

        Returns (gamma, d1, d2, alpha_mask).  First derivatives use the beta
        polynomial below x0, so they are finite at x = 0.
        """
        x = np.asarray(x, dtype=float)
        on_alpha = x >= self.x0
        a, a1, a2, _ = self.alpha(x)
        b, b1, b2 = self.beta(x)
        g = np.where(on_alpha, a, b)
        g1 = np.where(on_alpha, a1, b1)
        g2 = np.where(on_alpha, a2, b2)
        return g, g1, g2, on_alpha

    # ----------------------------------------------------------------- omega

    def _omega_closed(self, x) -> Jet:
        """Printed closed form of omega, valid for x >= x0, as a jet in x."""
        n, c = self.params.n, self.params.c
        xj = variable(x)
        radical = (xj * xj + 4.0 * (n - 1.0) * c * xj).sqrt()
        u = xj / radical
        ratio = n / (n - 2.0)
        bracket = (1.0 + (n * n * c) / xj) * ((ratio - u) / (ratio + u))
        return (xj * xj / radical) * bracket * bracket

    def omega(self, x):
        """Positive pinching weight: returns (omega, d1, d2).

        Closed form for x >= x0; second-order Taylor extension below.
        """
        x = np.asarray(x, dtype=float)
        if np.any(x < 0.0):
            raise DomainError("omega is defined for x >= 0 only")
        # Evaluate the closed form away from 0 to dodge the x -> 0 division.
        safe = np.where(x >= self.x0, x, self.x0)
        w = self._omega_closed(safe)
        w0, w1, w2 = self._omega_coeffs
        dx = x - self.x0
        ext_f = w0 + w1 * dx + 0.5 * w2 * dx * dx
        ext_d1 = w1 + w2 * dx
        on_closed = x >= self.x0
        return (
            np.where(on_closed, w.f, ext_f),
            np.where(on_closed, w.d1, ext_d1),
            np.where(on_closed, w.d2, w2),
        )

    def _check_extension_positive(self):
        xs = np.linspace(0.0, self.x0, _EXTENSION_SCAN_POINTS)
        w, _, _ = self.omega(xs)
        if not np.all(w > 0.0):
            raise DomainError(
                f"omega Taylor extension loses positivity on [0, x0] for "
                f"n={self.params.n}, c={self.params.c}"
            )

    # ---------------------------------------------------------------- bundle

    def bundle(self, x: float) -> ThresholdBundle:
        """Everything at one abscissa; alpha derivatives are NaN at x = 0."""
        xf = float(x)
        if xf < 0.0:
            raise DomainError("thresholds are defined for x >= 0 only")
        a, a1, a2, a3 = self.alpha(xf)
        b, _, _ = self.beta(xf)
        g, g1, g2, on_alpha = self.gamma(xf)
        w, w1, w2 = self.omega(xf)
        return ThresholdBundle(
            x=xf,
            alpha=float(a),
            beta=float(b),
            gamma=float(g),
            alpha_d1=float(a1),
            alpha_d2=float(a2),
            alpha_d3=float(a3),
            gamma_d1=float(g1),
            gamma_d2=float(g2),
            omega=float(w),
            omega_d1=float(w1),
            omega_d2=float(w2),
            active_branch=Branch.ALPHA if on_alpha else Branch.BETA,
        )

    def default_grid(self, points: int = 10_000, x_max_factor: float = 100.0):
        """Log-spaced below c, linear above, plus the distinguished abscissas."""
        n, c = self.params.n, self.params.c
        n_log = points // 3
        log_part = np.geomspace(1e-8 * c, c, n_log, endpoint=False)
        lin_part = np.linspace(c, x_max_factor * c, points - n_log)
        x2 = np.sqrt(2.0 * (n - 1.0)) * (np.sqrt(n - 1.0) - 1.0 / np.sqrt(2.0)) ** 2 * c
        marked = np.array([self.x0, self.x1, (n - 2.0) ** 2 * c, x2])
        marked = marked[(marked >= 1e-8 * c) & (marked <= x_max_factor * c)]
        return np.unique(np.concatenate([log_part, lin_part, marked]))


_FAMILY_CACHE: dict[tuple[int, float], ThresholdFamily] = {}


def family(params: PinchingParams) -> ThresholdFamily:
    """Cached ThresholdFamily for the given parameters."""
    key = (params.n, params.c)
    if key not in _FAMILY_CACHE:
        _FAMILY_CACHE[key] = ThresholdFamily(params)
    return _FAMILY_CACHE[key]


# ------------------------------------------------------------ operation API


def eval_alpha(params: PinchingParams, x: float, order: int = 3):
    """alpha(x) and its first `order` derivatives as a tuple of floats.

    Raises DerivativeAtZero when derivatives are requested at x = 0.
    """
    if x < 0.0:
        raise DomainError("alpha is defined for x >= 0 only")
    if x == 0.0 and order > 0:
        raise DerivativeAtZero("alpha derivatives are singular at x = 0")
    return tuple(float(v) for v in family(params).alpha(x, order=order))


def eval_beta(params: PinchingParams, x: float):
    """beta(x), beta'(x), beta''(x) as floats."""
    if x < 0.0:
        raise DomainError("beta is defined for x >= 0 only")
    return tuple(float(v) for v in family(params).beta(x))


def eval_gamma(params: PinchingParams, x: float) -> ThresholdBundle:
    """Full ThresholdBundle at x."""
    return family(params).bundle(x)


def eval_omega(params: PinchingParams, x: float):
    """omega(x), omega'(x), omega''(x) as floats."""
    if x < 0.0:
        raise DomainError("omega is defined for x >= 0 only")
    return tuple(float(v) for v in family(params).omega(x))


def compute_y_n(params: PinchingParams) -> CriticalConstants:
    """Certified constants (y_n, x0, x1, k_n) for the family."""
    return family(params).constants


def compute_k_n(params: PinchingParams) -> float:
    """Sharp constant-pinching level k_n (unitless multiple of c)."""
    return family(params).k_n
