"""CSV/JSON writers with provenance headers and round-trip-exact floats."""

from __future__ import annotations

import json
from dataclasses import asdict

import numpy as np

TOOL = "pinchflow"
VERSION = "0.1.0"


def fmt(x) -> str:
    """17 significant digits: repr-exact round trip for doubles."""
    return format(float(x), ".17g")


def provenance_lines(config: dict) -> list[str]:
    echo = json.dumps(config, sort_keys=True, default=str)
    return [f"# {TOOL} {VERSION}", f"# config: {echo}"]


def provenance_meta(config: dict) -> dict:
    return {"tool": TOOL, "version": VERSION, "config": config}


def write_threshold_csv(path, fam, xs, config: dict):
    """Threshold table: n,c,x,alpha,beta,gamma,gamma_d1,gamma_d2,omega,branch."""
    n, c = fam.params.n, fam.params.c
    xs = np.asarray(xs, dtype=float)
    a, _, _, _ = fam.alpha(xs)
    b, _, _ = fam.beta(xs)
    g, g1, g2, on_alpha = fam.gamma(xs)
    w, _, _ = fam.omega(xs)
    lines = provenance_lines(config)
    lines.append("n,c,x,alpha,beta,gamma,gamma_d1,gamma_d2,omega,branch")
    for i, x in enumerate(xs):
        branch = "alpha" if on_alpha[i] else "beta"
        lines.append(
            ",".join(
                [str(n), fmt(c), fmt(x), fmt(a[i]), fmt(b[i]), fmt(g[i]), fmt(g1[i]),
                 fmt(g2[i]), fmt(w[i]), branch]
            )
        )
    _write(path, "\n".join(lines) + "\n")


def write_constants_json(path, params, constants, config: dict):
    payload = {
        "n": params.n,
        "c": params.c,
        "y_n": constants.y_n,
        "x0": constants.x0,
        "x1": constants.x1,
        "k_n": constants.k_n,
        "k_n_branch": constants.k_n_branch,
        "bneq_residual": constants.bneq_residual,
        "meta": provenance_meta(config),
    }
    _write(path, json.dumps(payload, indent=2, sort_keys=True) + "\n")


def write_trace_csv(path, trace, config: dict):
    """Trace table: t,family,param,H_max,h2_max,h0_2_max,gamma_min,U_max,f_sigma,g_sigma."""
    lines = provenance_lines(config)
    lines.append("t,family,param,H_max,h2_max,h0_2_max,gamma_min,U_max,f_sigma,g_sigma")
    fam_name = trace.family
    by_time = {s.t: s for s in trace.samples}
    for m in trace.monitors:
        sample = by_time.get(m.t)
        param = ""
        if sample is not None:
            state = sample.state
            if hasattr(state, "rho"):
                param = fmt(state.rho)
            elif hasattr(state, "lam"):
                param = fmt(state.lam)
            else:
                param = str(state.grid_size)
        lines.append(
            ",".join(
                [fmt(m.t), fam_name, param, fmt(m.H_max), fmt(m.h2_max), fmt(m.h0_2_max),
                 fmt(m.gamma_min), fmt(m.U_max), fmt(m.f_sigma), fmt(m.g_sigma)]
            )
        )
    _write(path, "\n".join(lines) + "\n")


def write_terminal_json(path, trace, config: dict):
    payload = {
        "terminal": trace.terminal.kind.value,
        "T": trace.terminal.time,
        "meta": provenance_meta(config),
    }
    _write(path, json.dumps(payload, indent=2, sort_keys=True) + "\n")


def write_curvature_csv(path, state, params, config: dict):
    """Pointwise curvature report: s,H,h2,h0_2,gamma,margin."""
    from .geometry import curvature_of
    from .thresholds import family

    data = curvature_of(state, params)
    H = np.atleast_1d(np.asarray(data.H, dtype=float))
    h2 = np.atleast_1d(np.asarray(data.h_norm2, dtype=float))
    h0 = np.atleast_1d(np.asarray(data.h0_norm2, dtype=float))
    g, _, _, _ = family(params).gamma(H ** 2)
    g = np.atleast_1d(g)
    lines = provenance_lines(config)
    lines.append("s,H,h2,h0_2,gamma,margin")
    for i in range(len(H)):
        lines.append(
            ",".join(
                [str(i), fmt(H[i]), fmt(h2[i]), fmt(h0[i]), fmt(g[i]), fmt(g[i] - h2[i])]
            )
        )
    _write(path, "\n".join(lines) + "\n")


def write_reports_json(path, reports, config: dict):
    payload = {
        "reports": [asdict(r) for r in reports],
        "all_passed": all(r.passed for r in reports),
        "meta": provenance_meta(config),
    }
    _write(path, json.dumps(payload, indent=2, sort_keys=True, default=str) + "\n")


def render_report_table(reports) -> str:
    width = max(len(r.check_id) for r in reports) + 2
    rows = [f"{'check':<{width}} {'n':>3} {'c':>6} {'status':>7} {'worst margin':>14} {'worst x':>12}"]
    for r in reports:
        rows.append(
            f"{r.check_id:<{width}} {r.n:>3} {r.c:>6g} "
            f"{'pass' if r.passed else 'FAIL':>7} {r.worst_margin:>14.3e} {r.worst_x:>12.5g}"
        )
    return "\n".join(rows)


def _write(path, text: str):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text)
