"""Command-line front end.

Exit codes: 0 ok, 2 usage or invalid parameters, 3 numerical breakdown,
4 fit failure.  CSV and JSON numbers carry 17 significant digits.
"""
import argparse
import json
import math
import os
import sys

import numpy as np

from . import __version__
from ._backend import precision_bits
from .asymptotics import (
    Law,
    compare_phase_shift,
    envelope_exponent,
    fit_oscillation,
    synthetic_sequence,
)
from .closed_form import bound_spectrum
from .errors import FitError, ParameterError
from .recursion import GParams, HParams, SecondKind, eval_g_sequence, eval_h_sequence
from .spectral import classify_spectrum, spectrum_g, spectrum_h, zeros_g, zeros_h

SCHEMA_VERSION = 1

EXIT_OK, EXIT_USAGE, EXIT_BREAKDOWN, EXIT_FIT = 0, 2, 3, 4

# parameter sets behind the four reference figures
FIGURES = {
    1: dict(family="H", mu=2.0, nu=3.0, alpha=1.0, theta=0.7 * math.pi, order=500, order_b=750),
    2: dict(family="H", mu=2.0, nu=3.0, alpha=5.0, theta=0.2, x=1e-6, n_lo=400, n_hi=470),
    3: dict(family="G", mu=2.0, nu=3.0, sigma=-35.0, order=200, order_b=300),
    4: dict(family="G", mu=1.0, nu=2.0, sigma=3.0, z=10.0, n_lo=150, n_hi=1000),
}


# --------------------------------------------------------------------------
# serialisation
# --------------------------------------------------------------------------


def fmt(v):
    """17-significant-digit text for a number; empty for nan/inf."""
    v = float(v)
    return f"{v:.17g}" if math.isfinite(v) else ""


def to_json(obj):
    """Deterministic JSON with every float at 17 significant digits."""
    if isinstance(obj, dict):
        items = (f"{json.dumps(str(k))}: {to_json(v)}" for k, v in obj.items())
        return "{" + ", ".join(items) + "}"
    if isinstance(obj, (list, tuple, np.ndarray)):
        return "[" + ", ".join(to_json(v) for v in obj) + "]"
    if isinstance(obj, (bool, np.bool_)):
        return "true" if obj else "false"
    if obj is None:
        return "null"
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return fmt(obj) or "null"
    return json.dumps(str(obj))


def write_csv(out, header, rows):
    out.write(",".join(header) + "\n")
    for row in rows:
        out.write(",".join(c if isinstance(c, str) else fmt(c) for c in row) + "\n")


def _meta_base(name, params):
    return {
        "schema_version": SCHEMA_VERSION,
        "artifact": name,
        "trapoly_version": __version__,
        "precision_bits": precision_bits(),
        "params": params,
    }


# --------------------------------------------------------------------------
# argument handling
# --------------------------------------------------------------------------


class UsageError(Exception):
    pass


def _add_family(p, point=False):
    p.add_argument("--family", choices=("H", "G"), required=True)
    p.add_argument("--mu", type=float, required=True)
    p.add_argument("--nu", type=float, required=True)
    p.add_argument("--alpha", type=float, help="H family")
    th = p.add_mutually_exclusive_group()
    th.add_argument("--theta", type=float, help="H family, radians")
    th.add_argument("--theta-pi-frac", type=float, help="H family, theta as a fraction of pi")
    p.add_argument("--sigma", type=float, help="G family")
    if point:
        pt = p.add_mutually_exclusive_group()
        pt.add_argument("--x", type=float, help="H family argument x = 1/z")
        pt.add_argument("--zsq", type=float, help="G family argument z^2")
        pt.add_argument("--z", type=float, help="z (x = 1/z for H, z^2 for G)")


def _family_params(a):
    if a.family == "H":
        if a.alpha is None:
            raise UsageError("--alpha is required for --family H")
        if a.theta is None and a.theta_pi_frac is None:
            raise UsageError("--theta or --theta-pi-frac is required for --family H")
        if a.sigma is not None:
            raise UsageError("--sigma applies to --family G only")
        theta = a.theta if a.theta is not None else a.theta_pi_frac * math.pi
        try:
            return HParams(a.mu, a.nu, a.alpha, theta)
        except ParameterError as exc:
            raise UsageError(f"--mu/--nu/--theta: {exc}") from None
    if a.sigma is None:
        raise UsageError("--sigma is required for --family G")
    if a.alpha is not None or a.theta is not None or a.theta_pi_frac is not None:
        raise UsageError("--alpha/--theta apply to --family H only")
    try:
        return GParams(a.mu, a.nu, a.sigma)
    except ParameterError as exc:
        raise UsageError(f"--mu/--nu: {exc}") from None


def _point(a):
    """Argument in the family's variable: x for H, z^2 for G."""
    if a.family == "H":
        if a.zsq is not None:
            raise UsageError("--zsq applies to --family G; use --x or --z")
        if a.z is not None:
            if a.z == 0:
                raise UsageError("--z must be nonzero for --family H")
            return 1.0 / a.z
        if a.x is None:
            raise UsageError("--x or --z is required")
        return a.x
    if a.x is not None:
        raise UsageError("--x applies to --family H; use --zsq or --z")
    if a.z is not None:
        return a.z * a.z
    if a.zsq is None:
        raise UsageError("--zsq or --z is required")
    return a.zsq


def _params_dict(p):
    return {k: float(v) for k, v in vars(p).items()}


def _sequence(a, p, t, n_max, normalization):
    seed = None
    if a.seed_c0 is not None or a.seed_c1 is not None:
        if a.seed_c0 is None or a.seed_c1 is None:
            raise UsageError("--seed-c0 and --seed-c1 go together")
        seed = SecondKind(a.seed_c0, a.seed_c1)
    ev = eval_h_sequence if a.family == "H" else eval_g_sequence
    try:
        return ev(p, t, n_max, seed=seed, normalization=normalization)
    except ParameterError as exc:
        raise UsageError(str(exc)) from None


# --------------------------------------------------------------------------
# commands
# --------------------------------------------------------------------------


def cmd_eval(a, out):
    p = _family_params(a)
    t = _point(a)
    if a.nmax < 0:
        raise UsageError("--nmax must be >= 0")
    seq = _sequence(a, p, t, a.nmax, a.normalization)
    vals = seq.values()
    ok = seq.representable()
    rows = []
    for n in range(len(seq)):
        v = vals[n] if ok[n] else math.nan
        rows.append((str(n), seq.significand[n], str(int(seq.exponent10[n])), v))
    write_csv(out, ("n", "significand", "exponent10", "value_if_representable"), rows)
    return EXIT_OK


def _check_order(order, flag="--order"):
    if order is None or order < 1:
        raise UsageError(f"{flag} must be >= 1")


def cmd_zeros(a, out):
    p = _family_params(a)
    _check_order(a.order)
    zs = zeros_h(p, a.order) if a.family == "H" else zeros_g(p, a.order)
    write_csv(out, ("index", "zero"), ((str(i), v) for i, v in enumerate(zs)))
    return EXIT_OK


def cmd_spectrum(a, out):
    p = _family_params(a)
    _check_order(a.order)
    order_b = a.order_b or int(round(1.5 * a.order))
    _check_order(order_b, "--order-b")
    if not a.tol > 0:
        raise UsageError("--tol must be > 0")
    if a.family == "H":
        rep = spectrum_h(p, a.order, order_b, a.tol)
        variable = "z"
    else:
        rep = spectrum_g(p, a.order, order_b, a.tol)
        variable = "zsq"
    doc = {
        "schema_version": SCHEMA_VERSION,
        "family": a.family,
        "params": _params_dict(p),
        "order": a.order,
        "order_b": order_b,
        "stability_tol": rep.stability_tol,
        "variable": variable,
        "n_discrete": rep.n_discrete,
        "discrete_points": rep.discrete_points,
        "continuous_samples": rep.continuous_samples,
    }
    out.write(to_json(doc) + "\n")
    return EXIT_OK


def _selftest(out):
    cases = [
        (Law.LOG_N, dict(tau=0.5, freq=0.7, amplitude=3.0, phase=1.0)),
        (Law.LINEAR_N, dict(tau=0.5, freq=0.2, amplitude=2.0, phase=-0.4, log_coeff=0.3)),
    ]
    report, ok = [], True
    for law, c in cases:
        seq = synthetic_sequence(1200, law=law, **c)
        fit = fit_oscillation(seq, c["tau"], law, 200, 1200)
        good = (
            abs(fit.freq - c["freq"]) <= 1e-6
            and abs(fit.amplitude - c["amplitude"]) <= 1e-6 * c["amplitude"]
            and abs(math.remainder(fit.phase - c["phase"], 2 * math.pi)) <= 1e-6
            and fit.rms_residual < 1e-6
        )
        ok &= good
        report.append({"law": law.value, "passed": good, **fit.to_dict()})
    out.write(to_json({"schema_version": SCHEMA_VERSION, "selftest": report, "passed": ok}) + "\n")
    return EXIT_OK if ok else EXIT_FIT


def cmd_asymptotics(a, out):
    if a.selftest:
        return _selftest(out)
    if a.family is None or a.mu is None or a.nu is None:
        raise UsageError("--family, --mu and --nu are required unless --selftest")
    p = _family_params(a)
    t = _point(a)
    if a.n_lo is None or a.n_hi is None:
        raise UsageError("--n-lo and --n-hi are required")
    if a.n_lo < 1 or a.n_hi <= a.n_lo:
        raise UsageError("need 1 <= --n-lo < --n-hi")
    law = Law(a.law) if a.law else (Law.LINEAR_N if a.family == "H" else Law.LOG_N)
    seq = _sequence(a, p, t, a.n_hi, "orthonormal")
    try:
        tau = a.tau if a.tau is not None else envelope_exponent(seq, a.n_lo, a.n_hi)
        fit = fit_oscillation(seq, tau, law, a.n_lo, a.n_hi, a.freq_max)
    except ParameterError as exc:
        raise UsageError(str(exc)) from None
    doc = {"schema_version": SCHEMA_VERSION, "family": a.family, "params": _params_dict(p)}
    doc.update(fit.to_dict())
    out.write(to_json(doc) + "\n")
    return EXIT_OK


def _parse_grid(text):
    try:
        vals = [float(s) for s in text.split(",") if s.strip()]
    except ValueError:
        raise UsageError(f"--z-grid: cannot parse {text!r}") from None
    if not vals or any(not (v > 0 and math.isfinite(v)) for v in vals):
        raise UsageError("--z-grid entries must be positive and finite")
    return vals


def cmd_phaseshift(a, out):
    try:
        p = GParams(a.mu, a.nu, a.sigma)
    except ParameterError as exc:
        raise UsageError(f"--mu/--nu: {exc}") from None
    if not a.sigma < 0:
        raise UsageError("--sigma must be < 0 for the closed-form phase shift")
    if a.n_lo < 1 or a.n_hi <= a.n_lo:
        raise UsageError("need 1 <= --n-lo < --n-hi")
    cmp = compare_phase_shift(p, _parse_grid(a.z_grid), a.n_lo, a.n_hi)
    rows = zip(cmp.z, cmp.delta_fit, cmp.delta_closed_form, cmp.adjusted_diff)
    write_csv(out, ("z", "delta_fit", "delta_eq16", "offset_adjusted_diff"), rows)
    failed = [(z, e) for z, e in zip(cmp.z, cmp.errors) if e]
    for z, e in failed:
        print(f"fit failed at z={fmt(z)}: {e}", file=sys.stderr)
    return EXIT_FIT if failed else EXIT_OK


# --------------------------------------------------------------------------
# figures
# --------------------------------------------------------------------------


def _figure_1(cfg):
    p = HParams(cfg["mu"], cfg["nu"], cfg["alpha"], cfg["theta"])
    x = zeros_h(p, cfg["order"])
    with np.errstate(divide="ignore"):
        z = 1.0 / x
    rep = spectrum_h(p, cfg["order"], cfg["order_b"])
    gaps = np.diff(x)
    rows = [(str(i), xi, zi) for i, (xi, zi) in enumerate(zip(x, z))]
    meta = {
        "n_zeros": int(x.size),
        "min_gap_x": float(gaps.min()) if gaps.size else math.nan,
        "all_real_simple": bool(np.all(np.isfinite(x)) and np.all(gaps > 0)),
        "n_negative_z": int(np.sum(z < 0)),
        "n_positive_z": int(np.sum(z > 0)),
        "order_b": cfg["order_b"],
        "stability_tol": rep.stability_tol,
        "n_discrete": rep.n_discrete,
    }
    return ("index", "x", "z"), rows, _params_dict(p), meta


def _asymptotic_figure(cfg, law):
    if cfg["family"] == "H":
        p = HParams(cfg["mu"], cfg["nu"], cfg["alpha"], cfg["theta"])
        seq = eval_h_sequence(p, cfg["x"], cfg["n_hi"], normalization="orthonormal")
    else:
        p = GParams(cfg["mu"], cfg["nu"], cfg["sigma"])
        seq = eval_g_sequence(p, cfg["z"] ** 2, cfg["n_hi"], normalization="orthonormal")
    lo, hi = cfg["n_lo"], cfg["n_hi"]
    vals = seq.values()
    rows = [(str(n), vals[n]) for n in range(lo, hi + 1)]
    meta = {"n_lo": lo, "n_hi": hi}
    params = _params_dict(p)
    params.update({k: cfg[k] for k in ("x", "z") if k in cfg})
    try:
        tau = envelope_exponent(seq, lo, hi)
        meta["tau"] = tau
        meta.update(fit_oscillation(seq, tau, law, lo, hi).to_dict())
        meta["fit_error"] = ""
    except FitError as exc:
        meta["fit_error"] = str(exc)
    return ("n", "value"), rows, params, meta


def _figure_3(cfg):
    p = GParams(cfg["mu"], cfg["nu"], cfg["sigma"])
    za = zeros_g(p, cfg["order"])
    zb = zeros_g(p, cfg["order_b"])
    rep = classify_spectrum(za, zb, edge=0.0)
    levels = bound_spectrum(p.nu, p.sigma).levels
    meta = {
        "order_b": cfg["order_b"],
        "stability_tol": rep.stability_tol,
        "n_discrete": rep.n_discrete,
        "discrete_points": rep.discrete_points,
        "closed_form_levels": levels,
    }
    if rep.n_discrete == levels.size:
        meta["max_rel_diff_closed_form"] = float(
            np.max(np.abs(np.sort(rep.discrete_points) - levels) / np.abs(levels))
        )
    neg = za[za < 0]
    meta["negative_zeros"] = neg
    if neg.size == levels.size:
        meta["max_rel_diff_negative_zeros_closed_form"] = float(np.max(np.abs(neg - levels) / np.abs(levels)))
    rows = [(str(i), v) for i, v in enumerate(za)]
    return ("index", "zsq"), rows, _params_dict(p), meta


def build_figure(fig_id):
    """(header, rows, meta) for one of the four reference figures."""
    cfg = FIGURES[fig_id]
    if fig_id == 1:
        header, rows, params, meta = _figure_1(cfg)
    elif fig_id == 2:
        header, rows, params, meta = _asymptotic_figure(cfg, Law.LINEAR_N)
    elif fig_id == 3:
        header, rows, params, meta = _figure_3(cfg)
    else:
        header, rows, params, meta = _asymptotic_figure(cfg, Law.LOG_N)
    full = _meta_base(f"fig{fig_id}", params)
    full.update(meta)
    return header, rows, full


def cmd_figure(a, out):
    if a.id not in FIGURES:
        raise UsageError("figure id must be 1, 2, 3 or 4")
    header, rows, meta = build_figure(a.id)
    os.makedirs(a.out_dir, exist_ok=True)
    data_path = os.path.join(a.out_dir, f"fig{a.id}_data.csv")
    meta_path = os.path.join(a.out_dir, f"fig{a.id}_meta.json")
    with open(data_path, "w", newline="") as fh:
        write_csv(fh, header, rows)
    with open(meta_path, "w") as fh:
        fh.write(to_json(meta) + "\n")
    out.write(f"{data_path}\n{meta_path}\n")
    return EXIT_OK


# --------------------------------------------------------------------------
# entry point
# --------------------------------------------------------------------------


def build_parser():
    ap = argparse.ArgumentParser(prog="trapoly", description=__doc__.splitlines()[0])
    ap.add_argument("--version", action="version", version=f"trapoly {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    def seed_flags(p):
        p.add_argument("--seed-c0", type=float, help="second-kind seed P_1 = c0 + c1 t")
        p.add_argument("--seed-c1", type=float)

    p = sub.add_parser("eval", help="polynomial values P_0..P_nmax at one point")
    _add_family(p, point=True)
    p.add_argument("--nmax", type=int, required=True)
    p.add_argument("--normalization", choices=("standard", "orthonormal"), default="standard")
    seed_flags(p)
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("zeros", help="zeros of P_order (x for H, z^2 for G)")
    _add_family(p)
    p.add_argument("--order", type=int, required=True)
    p.set_defaults(func=cmd_zeros)

    p = sub.add_parser("spectrum", help="split zeros into discrete and continuous parts")
    _add_family(p)
    p.add_argument("--order", type=int, required=True)
    p.add_argument("--order-b", type=int, help="second order (default 1.5 * order)")
    p.add_argument("--tol", type=float, default=1e-6)
    p.set_defaults(func=cmd_spectrum)

    p = sub.add_parser("asymptotics", help="fit the large-n oscillation law")
    p.add_argument("--selftest", action="store_true", help="recover synthetic sequences")
    p.add_argument("--family", choices=("H", "G"))
    p.add_argument("--mu", type=float)
    p.add_argument("--nu", type=float)
    p.add_argument("--alpha", type=float)
    th = p.add_mutually_exclusive_group()
    th.add_argument("--theta", type=float)
    th.add_argument("--theta-pi-frac", type=float)
    p.add_argument("--sigma", type=float)
    pt = p.add_mutually_exclusive_group()
    pt.add_argument("--x", type=float)
    pt.add_argument("--zsq", type=float)
    pt.add_argument("--z", type=float)
    p.add_argument("--n-lo", type=int)
    p.add_argument("--n-hi", type=int)
    p.add_argument("--law", choices=[law.value for law in Law])
    p.add_argument("--tau", type=float, help="skip the envelope estimate")
    p.add_argument("--freq-max", type=float)
    seed_flags(p)
    p.set_defaults(func=cmd_asymptotics)

    p = sub.add_parser("phaseshift", help="fitted vs closed-form phase shift of the G family")
    p.add_argument("--mu", type=float, required=True)
    p.add_argument("--nu", type=float, required=True)
    p.add_argument("--sigma", type=float, required=True)
    p.add_argument("--z-grid", default="1,2,4,8")
    p.add_argument("--n-lo", type=int, default=200)
    p.add_argument("--n-hi", type=int, default=20000)
    p.set_defaults(func=cmd_phaseshift)

    p = sub.add_parser("figure", help="write figN_data.csv and figN_meta.json")
    p.add_argument("id", type=int, choices=sorted(FIGURES))
    p.add_argument("--out-dir", default=".")
    p.set_defaults(func=cmd_figure)
    return ap


def main(argv=None, out=None):
    out = out or sys.stdout
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        return args.func(args, out)
    except UsageError as exc:
        ap.exit(EXIT_USAGE, f"trapoly {args.command}: error: {exc}\n")
    except FitError as exc:
        print(f"trapoly {args.command}: fit failed: {exc}", file=sys.stderr)
        return EXIT_FIT
    except ParameterError as exc:
        ap.exit(EXIT_USAGE, f"trapoly {args.command}: error: {exc}\n")
    except ArithmeticError as exc:
        print(f"trapoly {args.command}: numerical breakdown: {exc}", file=sys.stderr)
        return EXIT_BREAKDOWN


if __name__ == "__main__":
    sys.exit(main())
