"""Command-line driver.

Subcommands: transfer, disks, schur, riccati, type, reflectionless, bp,
gauge.  Coefficient files are the JSON schemas documented in
``coefficients``; outputs are CSV tables (17 significant digits, stable row
order, a header comment carrying the config hash) or JSON reports.  Exit
codes: 0 ok, 1 compute budget, 2 parse, 3 validation.  The environment
variable ARVCANON_THREADS caps worker threads; results are identical for
every parallelism degree.
"""

import argparse
import hashlib
import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from . import coefficients as coeff
from . import propagate as prop
from . import riccati as ric
from . import spectral as spec
from . import weyl
from .errors import (ArvcanonError, BudgetError, CoefficientError,
                     DegenerateActionError, DomainError, GaugeError,
                     InconsistencyError, InputError, ParseError,
                     PreconditionError, StepUnderflowError)

EXIT_OK = 0
EXIT_BUDGET = 1
EXIT_PARSE = 2
EXIT_VALIDATION = 3

_VALIDATION_ERRORS = (InputError, CoefficientError, PreconditionError,
                      DomainError, GaugeError, InconsistencyError)
_BUDGET_ERRORS = (BudgetError, StepUnderflowError, DegenerateActionError)

UNITS = "z:spectral(dimensionless) l:system-length"


def _fmt(x):
    return format(float(x), ".17g")


def _parse_z(tok):
    tok = tok.strip()
    if tok in ("i", "1i", "j"):
        return 1j
    try:
        if "," in tok:
            re_s, im_s = tok.split(",")
            return complex(float(re_s), float(im_s))
        return complex(float(tok), 0.0)
    except ValueError:
        raise ParseError(f"cannot parse spectral point {tok!r}")


def parse_zgrid(specstr):
    """Grid specs: single token; linear 're1,im1:re2,im2:n'; imaginary-axis
    log grid 'iy:y1:y2:n:log'."""
    parts = specstr.split(":")
    if parts[0] == "iy":
        if len(parts) != 5 or parts[4] != "log":
            raise ParseError(f"bad imaginary-axis grid spec {specstr!r}")
        try:
            y1, y2, n = float(parts[1]), float(parts[2]), int(parts[3])
        except ValueError:
            raise ParseError(f"bad imaginary-axis grid spec {specstr!r}")
        if y1 <= 0 or y2 <= y1 or n < 2:
            raise ParseError(f"bad imaginary-axis grid spec {specstr!r}")
        return 1j * np.geomspace(y1, y2, n)
    if len(parts) == 1:
        return np.array([_parse_z(parts[0])])
    if len(parts) == 3:
        z1, z2 = _parse_z(parts[0]), _parse_z(parts[1])
        try:
            n = int(parts[2])
        except ValueError:
            raise ParseError(f"bad grid count in {specstr!r}")
        if n < 1:
            raise ParseError("grid must be nonempty")
        return np.linspace(z1, z2, n)
    raise ParseError(f"bad spectral grid spec {specstr!r}")


def parse_lgrid(specstr):
    """Length grids: single value or 'start:stop:step'."""
    parts = specstr.split(":")
    try:
        if len(parts) == 1:
            val = float(parts[0])
            if val < 0:
                raise ParseError(f"negative length {val}")
            return np.array([val])
        if len(parts) == 3:
            start, stop, step = map(float, parts)
            if step <= 0 or stop < start or start < 0:
                raise ParseError(f"bad length grid spec {specstr!r}")
            n = int(np.floor((stop - start) / step + 1e-9)) + 1
            return start + step * np.arange(n)
    except ValueError:
        pass
    raise ParseError(f"bad length grid spec {specstr!r}")


_HASH_EXCLUDED = ("func", "output", "summary", "params_out", "threads")


def _config_hash(ns):
    """Hash of the semantic configuration: identical computations get the
    same hash regardless of output destination or parallelism degree."""
    payload = {k: repr(v) for k, v in sorted(vars(ns).items())
               if k not in _HASH_EXCLUDED}
    return hashlib.sha256(json.dumps(payload, sort_keys=True).encode()).hexdigest()[:12]


def _threads(ns):
    requested = max(1, int(getattr(ns, "threads", 1)))
    cap = os.environ.get("ARVCANON_THREADS")
    if cap is not None:
        try:
            requested = min(requested, max(1, int(cap)))
        except ValueError:
            raise ParseError(f"ARVCANON_THREADS = {cap!r} is not an integer")
    return requested


def _zmap(ns, zs, worker):
    """Apply worker(z) over the grid, any parallelism degree, stable order."""
    n = _threads(ns)
    if n <= 1 or len(zs) <= 1:
        return [worker(z) for z in zs]
    with ThreadPoolExecutor(max_workers=n) as pool:
        return list(pool.map(worker, zs))


def _write_table(path, columns, rows, cfg):
    lines = [f"# arvcanon config={cfg} units={UNITS}"]
    lines.append(",".join(columns))
    for row in rows:
        lines.append(",".join(_fmt(v) if not isinstance(v, str) else v for v in row))
    text = "\n".join(lines) + "\n"
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w") as fh:
            fh.write(text)


def _write_json(path, payload):
    text = json.dumps(payload, indent=1, sort_keys=True) + "\n"
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w") as fh:
            fh.write(text)


def _load_single(ns):
    loaded = coeff.load_parameters(ns.input)
    if isinstance(loaded, tuple):
        raise InputError(f"{ns.input} is a full-line file; this command needs one half-line system")
    return loaded


def _load_fullline(ns):
    loaded = coeff.load_parameters(ns.input)
    if not isinstance(loaded, tuple):
        raise InputError(f"{ns.input} must be a full-line file with 'left' and 'right' halves")
    left, right = loaded
    if not isinstance(left, coeff.ArovParameters) or not isinstance(right, coeff.ArovParameters):
        raise InputError("full-line commands need disk-gauge halves")
    return left, right


# ---------------------------------------------------------------------------
# subcommands


def _cmd_transfer(ns):
    system = _load_single(ns)
    zs = parse_zgrid(ns.zgrid)
    ls = parse_lgrid(ns.lgrid)

    def worker(z):
        if isinstance(system, coeff.ArovParameters):
            return prop.transfer_prefix(z, system, ls)
        return np.array([prop.transfer_general(z, system, l) for l in ls])

    blocks = _zmap(ns, zs, worker)
    values = np.stack(blocks)
    fam = prop.TransferFamily(zs, ls, values, prop.GAUGE_RAW)
    _write_table(ns.output, prop.FAMILY_CSV_COLUMNS, prop.family_csv_rows(fam),
                 _config_hash(ns))
    return EXIT_OK


def _cmd_disks(ns):
    system = _load_single(ns)
    zs = parse_zgrid(ns.zgrid)
    if np.any(zs.imag <= 0):
        raise PreconditionError("Weyl disks need Im z > 0 at every grid point")
    ls = parse_lgrid(ns.lgrid)

    def worker(z):
        return [weyl.weyl_disk_at(system, z, l) for l in ls]

    rows = []
    for z, disks in zip(zs, _zmap(ns, zs, worker)):
        for l, d in zip(ls, disks):
            rows.append((z.real, z.imag, l, d.center.real, d.center.imag, d.radius))
    _write_table(ns.output,
                 ("z_re", "z_im", "l", "center_re", "center_im", "radius"),
                 rows, _config_hash(ns))
    return EXIT_OK


def _cmd_schur(ns):
    loaded = coeff.load_parameters(ns.input)
    zs = parse_zgrid(ns.zgrid)
    if isinstance(loaded, tuple):
        p_left, p_right = loaded
    else:
        p_left = p_right = loaded

    def worker(z):
        if ns.side == "minus":
            return weyl.schur_minus(z, p_left, tol=ns.tol, l_max=ns.lmax)
        return weyl.schur_plus(z, p_right, tol=ns.tol, l_max=ns.lmax)

    rows = []
    for z, sv in zip(zs, _zmap(ns, zs, worker)):
        rows.append((z.real, z.imag, sv.value.real, sv.value.imag,
                     sv.residual_radius, sv.l_stop))
    _write_table(ns.output,
                 ("z_re", "z_im", "s_re", "s_im", "residual_radius", "l_stop"),
                 rows, _config_hash(ns))
    return EXIT_OK


def _cmd_riccati(ns):
    system = _load_single(ns)
    if not isinstance(system, coeff.ArovParameters):
        raise InputError("riccati needs disk-gauge coefficients")
    z = _parse_z(ns.z)
    ls = parse_lgrid(ns.lgrid)
    if ns.s0 == "auto":
        s0 = weyl.schur_plus(z, system, tol=ns.tol).value
    else:
        s0 = _parse_z(ns.s0)
    rows = []
    for l in ls:
        state = ric.integrate_riccati(z, s0, system, l, step=ns.step)
        rows.append((z.real, z.imag, l, state.s.real, state.s.imag, state.status))
        if not state.valid:
            break
    _write_table(ns.output,
                 ("z_re", "z_im", "l", "s_re", "s_im", "status"),
                 rows, _config_hash(ns))
    return EXIT_OK


def _cmd_type(ns):
    system = _load_single(ns)
    report = spec.type_report(system, ns.l)
    if ns.format == "csv":
        _write_table(ns.output,
                     ("l", "sigma_integral", "sigma_numeric", "rel_gap"),
                     [(ns.l, report.sigma_integral, report.sigma_numeric,
                       report.rel_gap)],
                     _config_hash(ns))
    else:
        _write_json(ns.output, {
            "l": ns.l,
            "sigma_integral": report.sigma_integral,
            "sigma_numeric": report.sigma_numeric,
            "rel_gap": report.rel_gap,
            "y_samples": list(report.ys),
            "config": _config_hash(ns),
        })
    return EXIT_OK


def _cmd_reflectionless(ns):
    p_left, p_right = _load_fullline(ns)
    xs = parse_lgrid(ns.xgrid) if ":" in ns.xgrid else np.array([float(ns.xgrid)])
    try:
        ladder = tuple(float(e) for e in ns.eps.split(","))
    except ValueError:
        raise ParseError(f"bad eps ladder {ns.eps!r}")
    reports = spec.reflectionless_ladder(p_left, p_right, xs, ladder,
                                         delta=ns.delta, tol=ns.tol)
    rows = []
    for rep in reports:
        for i, x in enumerate(rep.xs):
            rows.append((x, rep.eps,
                         rep.s_plus[i].real, rep.s_plus[i].imag,
                         rep.s_minus[i].real, rep.s_minus[i].imag,
                         rep.defect[i], float(rep.ac[i]), float(rep.ok[i])))
    _write_table(ns.output,
                 ("x", "eps", "sp_re", "sp_im", "sm_re", "sm_im",
                  "defect", "ac", "ok"),
                 rows, _config_hash(ns))
    if ns.summary:
        max_def = []
        for rep in reports:
            band = rep.ac & rep.ok
            max_def.append(float(np.max(rep.defect[band])) if band.any() else None)
        trend = all(
            a is not None and b is not None and b <= a
            for a, b in zip(max_def, max_def[1:])
        )
        _write_json(ns.summary, {
            "eps_ladder": list(ladder),
            "max_defect_on_ac_band": max_def,
            "defect_decreasing": trend,
            "config": _config_hash(ns),
        })
    return EXIT_OK


def _cmd_bp(ns):
    p_left, p_right = _load_fullline(ns)
    try:
        intervals = [
            tuple(float(v) for v in piece.split(","))
            for piece in ns.e.split(";")
        ]
        t1, t2 = (float(v) for v in ns.arc.split(":"))
        l_values = tuple(float(v) for v in ns.lladder.split(","))
    except ValueError:
        raise ParseError("bad --e / --arc / --lladder spec")
    if any(len(iv) != 2 for iv in intervals):
        raise ParseError("band intervals must be 'lo,hi' pairs")
    report = spec.bp_defect(p_left, p_right, intervals, (t1, t2), l_values,
                            ns.xstep, ns.eps, tol=ns.tol)
    rows = [
        (l, report.defects[j], float(report.n_points), float(report.n_excluded[j]))
        for j, l in enumerate(report.l_values)
    ]
    _write_table(ns.output, ("l", "defect", "n_points", "n_excluded"),
                 rows, _config_hash(ns))
    return EXIT_OK


def _cmd_gauge(ns):
    system = _load_single(ns)
    zs = parse_zgrid(ns.zgrid)
    ls = parse_lgrid(ns.lgrid)
    if ns.params_out:
        if ns.to != "arov":
            raise InputError("--params-out needs --to arov")
        if not np.any(ls == 0.0):
            raise InputError("--params-out needs the length grid to start at 0")
    anchor = 1j if ns.to == "arov" else 0j
    if not np.any(np.abs(zs - anchor) <= 1e-12):
        zs = np.concatenate(([anchor], zs))
    fam = prop.transfer_family(system, zs, ls)
    if ns.to == "arov":
        out, _ = prop.to_arov_gauge(fam)
    else:
        out = prop.to_pdb_gauge(fam)
    _write_table(ns.output, prop.FAMILY_CSV_COLUMNS, prop.family_csv_rows(out),
                 _config_hash(ns))
    if ns.params_out:
        rec = prop.recover_parameters(out)
        payload = rec.params.to_dict()
        payload["kappa"] = [[k.real, k.imag] for k in rec.kappa]
        payload["mu"] = rec.mu.tolist()
        payload["config"] = _config_hash(ns)
        _write_json(ns.params_out, payload)
    return EXIT_OK


def build_parser():
    ap = argparse.ArgumentParser(
        prog="arvcanon",
        description="Canonical systems in Arov gauge: propagation, Weyl disks, "
                    "Schur functions, Riccati flow, exponential type, "
                    "reflectionless diagnostics.",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p, output=True):
        p.add_argument("--input", required=True, help="coefficient JSON file")
        if output:
            p.add_argument("--output", default=None, help="output path (default stdout)")
        p.add_argument("--threads", type=int, default=1,
                       help="worker threads (capped by ARVCANON_THREADS)")
        p.add_argument("--tol", type=float, default=weyl.SCHUR_TOL,
                       help="disk-shrinkage tolerance for Schur evaluation")

    p = sub.add_parser("transfer", help="transfer matrices over a (z, l) grid")
    common(p)
    p.add_argument("--zgrid", required=True)
    p.add_argument("--lgrid", required=True)
    p.set_defaults(func=_cmd_transfer)

    p = sub.add_parser("disks", help="Weyl disks over a (z, l) grid")
    common(p)
    p.add_argument("--zgrid", required=True)
    p.add_argument("--lgrid", required=True)
    p.set_defaults(func=_cmd_disks)

    p = sub.add_parser("schur", help="half-line Schur function on a z grid")
    common(p)
    p.add_argument("--zgrid", required=True)
    p.add_argument("--side", choices=("plus", "minus"), default="plus")
    p.add_argument("--lmax", type=float, default=None, help="disk-limit length budget")
    p.set_defaults(func=_cmd_schur)

    p = sub.add_parser("riccati", help="stripping-flow trajectory")
    common(p)
    p.add_argument("--z", required=True)
    p.add_argument("--s0", default="auto", help="'auto' or a complex token re,im")
    p.add_argument("--lgrid", required=True)
    p.add_argument("--step", type=float, default=ric.DEFAULT_STEP)
    p.set_defaults(func=_cmd_riccati)

    p = sub.add_parser("type", help="exponential type, both faces")
    common(p)
    p.add_argument("--l", type=float, required=True)
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.set_defaults(func=_cmd_type)

    p = sub.add_parser("reflectionless", help="boundary-value defect on an eps ladder")
    common(p)
    p.add_argument("--xgrid", required=True)
    p.add_argument("--eps", default="1e-2,1e-3,1e-4", help="comma-separated ladder")
    p.add_argument("--delta", type=float, default=spec.AC_DELTA)
    p.add_argument("--summary", default=None, help="JSON trend summary path")
    p.set_defaults(func=_cmd_reflectionless)

    p = sub.add_parser("bp", help="harmonic-measure defect on a length ladder")
    common(p)
    p.add_argument("--e", required=True, help="band intervals 'lo,hi[;lo,hi...]'")
    p.add_argument("--arc", required=True, help="circle arc 't1:t2'")
    p.add_argument("--lladder", default="1,2,4,8")
    p.add_argument("--xstep", type=float, default=0.05)
    p.add_argument("--eps", type=float, default=1e-3)
    p.set_defaults(func=_cmd_bp)

    p = sub.add_parser("gauge", help="regauge a sampled family")
    common(p)
    p.add_argument("--to", choices=("arov", "pdb"), required=True)
    p.add_argument("--zgrid", required=True)
    p.add_argument("--lgrid", required=True)
    p.add_argument("--params-out", default=None,
                   help="with --to arov: write recovered parameters JSON here")
    p.set_defaults(func=_cmd_gauge)

    return ap


def run(ns):
    """Execute a parsed configuration; returns the exit status."""
    try:
        return ns.func(ns)
    except ParseError as exc:
        _emit_error(exc)
        return EXIT_PARSE
    except _VALIDATION_ERRORS as exc:
        _emit_error(exc)
        return EXIT_VALIDATION
    except _BUDGET_ERRORS as exc:
        _emit_error(exc)
        return EXIT_BUDGET
    except ArvcanonError as exc:
        _emit_error(exc)
        return EXIT_BUDGET


def _emit_error(exc):
    detail = {"error": type(exc).__name__, "message": str(exc)}
    if isinstance(exc, BudgetError) and exc.last_disk is not None:
        detail["last_disk"] = {
            "center": [exc.last_disk.center.real, exc.last_disk.center.imag],
            "radius": exc.last_disk.radius,
            "l": exc.l_stop,
        }
    sys.stderr.write(json.dumps(detail) + "\n")


def main(argv=None):
    ns = build_parser().parse_args(argv)
    return run(ns)


if __name__ == "__main__":
    sys.exit(main())
