"""Command-line front end: stft | wavefront | propagate | frame-info.

Fixes every on-disk format.  CSV files are comma-separated with a header row,
'.' decimal separator, and LF line endings; JSON files are UTF-8 with keys in
stable sorted order, so identical configurations produce byte-identical
output.  Angles are printed in degrees for humans and stored in radians in
JSON.  Every error path emits a single-line JSON {code, message} on stderr;
validation failures exit 2, a failed frame gate exits 3.
"""

from __future__ import annotations

import argparse
import json
import math
import sys

import numpy as np

from . import frames, quadflow, tfcore, wavefront
from .errors import (
    BadPartition,
    DegenerateFit,
    DomainError,
    GabfrontError,
    GridMismatch,
    InsufficientLattice,
    NearSingularTime,
    NoConvergence,
    NotAFrame,
    NotSymplectic,
    UnsupportedAtom,
)

_VALIDATION_ERRORS = (
    DomainError,
    GridMismatch,
    UnsupportedAtom,
    BadPartition,
    InsufficientLattice,
    DegenerateFit,
    NotSymplectic,
    NearSingularTime,
    ValueError,
)


# ---------------------------------------------------------------------------
# atom / window mini-grammar
# ---------------------------------------------------------------------------

def parse_atom(spec: str) -> tfcore.Atom:
    """Parse `delta:<x0>`, `planewave:<xi0>`, `chirp:<c>`, `gaussian:<x0>,<sigma>`,
    `shift:<x0>,<xi0>:<inner>`, and `sum:` of `+`-separated `coeff*term` pieces."""
    spec = spec.strip()
    head, sep, rest = spec.partition(":")
    head = head.lower()
    if not sep:
        raise DomainError(f"atom spec {spec!r} is missing parameters")
    if head == "delta":
        return tfcore.Delta(_num(rest))
    if head == "planewave":
        return tfcore.PlaneWave(_num(rest))
    if head == "chirp":
        return tfcore.Chirp(_num(rest))
    if head == "gaussian":
        parts = rest.split(",")
        if len(parts) != 2:
            raise DomainError(f"gaussian spec needs <x0>,<sigma>, got {rest!r}")
        return tfcore.Gaussian(_num(parts[0]), _num(parts[1]))
    if head == "shift":
        params, sep2, inner = rest.partition(":")
        parts = params.split(",")
        if not sep2 or len(parts) != 2:
            raise DomainError(f"shift spec needs <x0>,<xi0>:<inner>, got {rest!r}")
        return tfcore.Shifted(parse_atom(inner), _num(parts[0]), _num(parts[1]))
    if head == "sum":
        terms = []
        for piece in rest.split("+"):
            coeff, sep3, atom_spec = piece.partition("*")
            if sep3:
                terms.append((complex(coeff), parse_atom(atom_spec)))
            else:
                terms.append((1.0 + 0j, parse_atom(piece)))
        return tfcore.Sum(tuple(terms))
    raise DomainError(f"unknown atom kind {head!r}")


def _num(s: str) -> float:
    try:
        return float(s)
    except ValueError as exc:
        raise DomainError(f"bad numeric literal {s!r}") from exc


def parse_window(spec: str, grid: tfcore.Grid1D):
    """`std` for the standard Gaussian; `gaussian:<sigma>` for a sampled one."""
    spec = spec.strip().lower()
    if spec in ("std", "standard", "gauss"):
        return tfcore.StandardGaussian()
    head, sep, rest = spec.partition(":")
    if head == "gaussian" and sep:
        sigma = _num(rest)
        sig = tfcore.eval_atom(tfcore.Gaussian(0.0, sigma), grid)
        return tfcore.CustomWindow(sig)
    raise DomainError(f"unknown window spec {spec!r}")


# ---------------------------------------------------------------------------
# serialization helpers
# ---------------------------------------------------------------------------

def dump_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2, allow_nan=False) + "\n"


def write_json(path, obj):
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(dump_json(obj))


def write_csv(path, header, rows):
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(_cell(c) for c in row) + "\n")


def _cell(c):
    if isinstance(c, float):
        return repr(c)
    return str(c)


def grid_meta(g: tfcore.Grid1D):
    return {"start": g.start, "step": g.step, "count": g.count}


def signal_to_json(s: tfcore.SampledSignal):
    return {
        "grid": grid_meta(s.grid),
        "values": [[float(v.real), float(v.imag)] for v in s.values],
    }


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------

def cmd_stft(args) -> int:
    grid = tfcore.default_grid()
    atom = parse_atom(args.atom)
    window = parse_window(args.window, grid)
    pg = tfcore.default_phase_grid(args.extent, args.step)
    if isinstance(window, tfcore.StandardGaussian):
        X, XI = np.meshgrid(pg.xgrid.points(), pg.xigrid.points(), indexing="ij")
        values = tfcore.stft_analytic(atom, X, XI)
    else:
        values = tfcore.stft_numeric(tfcore.eval_atom(atom, grid), window, pg)
    xs, xis = pg.xgrid.points(), pg.xigrid.points()
    rows = []
    for i in range(pg.xgrid.count):
        for j in range(pg.xigrid.count):
            v = values[i, j]
            rows.append(
                (i, j, float(xs[i]), float(xis[j]), float(v.real), float(v.imag), float(abs(v)))
            )
    out = args.out or "stft.csv"
    write_csv(out, ("ix", "ixi", "x", "xi", "re", "im", "mag"), rows)
    meta = {
        "atom": args.atom,
        "window": args.window,
        "xgrid": grid_meta(pg.xgrid),
        "xigrid": grid_meta(pg.xigrid),
        "csv": out,
    }
    write_json(_sibling(out, ".json"), meta)
    if args.json:
        sys.stdout.write(dump_json(meta))
    return 0


def cmd_wavefront(args) -> int:
    grid = tfcore.default_grid()
    atom = parse_atom(args.atom)
    window = parse_window(args.window, grid)
    L = frames.LatticeSpec(args.alpha, args.beta, args.K_lattice, args.K_lattice)
    if args.p is None:
        statistic = wavefront.SupStat()
    else:
        p = math.inf if args.p == "inf" else float(args.p)
        statistic = wavefront.LpStat(p=p, s=args.s)
    est = wavefront.estimate_wavefront(
        atom, window, L, K=args.sectors, r_min=args.r_min, r_max=args.r_max,
        statistic=statistic, grid=grid,
    )
    payload = est.to_json_dict()
    payload["atom"] = args.atom
    payload["window"] = args.window
    out = args.out or "wavefront.json"
    write_json(out, payload)
    code = {"rapid": 0, "polynomial": 1, "nondecaying": 2}
    rows = [
        (math.degrees(s["theta"]), code[s["class"]], s["order"] if s["order"] is not None else "")
        for s in payload["sectors"]
    ]
    write_csv(_sibling(out, ".csv"), ("theta_deg", "class_code", "order"), rows)
    if args.json:
        sys.stdout.write(dump_json(payload))
    else:
        degs = ", ".join(f"{math.degrees(t):.1f}" for t in est.flagged_angles())
        sys.stdout.write(f"flagged sectors (degrees): [{degs}]\n")
    return 0


def cmd_propagate(args) -> int:
    atom = parse_atom(args.atom)
    report = quadflow.verify_propagation(atom, args.ham, args.t, K=args.sectors)
    payload = report.to_json_dict()
    payload["atom"] = args.atom
    out = args.out or "propagation.json"
    write_json(out, payload)
    if args.json:
        sys.stdout.write(dump_json(payload))
    else:
        pred = ", ".join(f"{math.degrees(t):.1f}" for t in report.predicted)
        obs = ", ".join(f"{math.degrees(t):.1f}" for t in report.observed)
        sys.stdout.write(
            f"pass={report.passed} predicted=[{pred}] observed=[{obs}] "
            f"max_mismatch={math.degrees(report.max_mismatch):.2f} deg\n"
        )
    return 0


def cmd_frame_info(args) -> int:
    grid = tfcore.default_grid()
    window = parse_window(args.window, grid)
    L = frames.LatticeSpec(args.alpha, args.beta, args.K_lattice, args.K_lattice)
    report = frames.frame_bounds(window, L, grid=grid)
    dual = frames.dual_window(window, L, tol=args.tol, grid=grid)

    test_atoms = {
        "gaussian": tfcore.Gaussian(0.0, 1.0),
        "chirp-enveloped": tfcore.Sum(((1.0 + 0j, tfcore.Chirp(1.0)),)),
    }
    residuals = {}
    for name, atom in test_atoms.items():
        target = (
            tfcore.eval_atom(atom, grid)
            if name == "gaussian"
            else _enveloped_chirp(grid)
        )
        coeffs = frames.gabor_coefficients(target, window, L, grid=grid)
        rec = frames.reconstruct(coeffs, dual)
        err = np.linalg.norm(rec.values - target.values) / np.linalg.norm(target.values)
        residuals[name] = float(err)

    rng = np.random.default_rng(args.seed)
    quotients = []
    for _ in range(5):
        f = frames.random_localized_signal(rng, window, grid)
        sf = frames.frame_operator_apply(f, window, L)
        quotients.append(float(np.real(f.inner(sf)) / f.norm() ** 2))
    payload = {
        "frame_report": report.to_json_dict(),
        "dual_residual_tol": args.tol,
        "reconstruction_residuals": residuals,
        "rayleigh_quotients": quotients,
        "alpha": args.alpha,
        "beta": args.beta,
        "seed": args.seed,
    }
    out = args.out or "frame_info.json"
    write_json(out, payload)
    if args.json:
        sys.stdout.write(dump_json(payload))
    else:
        sys.stdout.write(
            f"A={report.lower:.6f} B={report.upper:.6f} residuals={residuals}\n"
        )
    return 0


def _enveloped_chirp(grid):
    chirp = tfcore.eval_atom(tfcore.Chirp(1.0), grid)
    env = tfcore.eval_atom(tfcore.Gaussian(0.0, 2.0), grid)
    return tfcore.SampledSignal(grid, chirp.values * env.values)


def _sibling(path, suffix):
    base = path
    for known in (".csv", ".json"):
        if base.endswith(known):
            base = base[: -len(known)]
            break
    return base + suffix


# ---------------------------------------------------------------------------
# parser and dispatch
# ---------------------------------------------------------------------------

class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise DomainError(message)


def build_parser() -> argparse.ArgumentParser:
    top = _Parser(prog="gabfront", description=__doc__)
    sub = top.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--out", help="output path")
        p.add_argument("--json", action="store_true", help="echo JSON to stdout")
        p.add_argument("--config", help="flat key=value config file")
        p.add_argument("--seed", type=int, default=0, help="seed for randomized checks")
        p.add_argument("--window", default="std", help="std | gaussian:<sigma>")

    p = sub.add_parser("stft", help="write an STFT magnitude grid")
    common(p)
    p.add_argument("--atom", required=True)
    p.add_argument("--extent", type=float, default=8.0)
    p.add_argument("--step", type=float, default=0.125)
    p.set_defaults(func=cmd_stft)

    p = sub.add_parser("wavefront", help="estimate singular directions")
    common(p)
    p.add_argument("--atom", required=True)
    p.add_argument("--alpha", type=float, default=0.5)
    p.add_argument("--beta", type=float, default=0.5)
    p.add_argument("--K-lattice", type=int, default=40, dest="K_lattice")
    p.add_argument("--sectors", type=int, default=72)
    p.add_argument("--r-min", type=float, default=4.0, dest="r_min")
    p.add_argument("--r-max", type=float, default=20.0, dest="r_max")
    p.add_argument("--p", default=None, help="Lp exponent (number or 'inf'); default sup")
    p.add_argument("--s", type=float, default=0.0, help="weight exponent")
    p.set_defaults(func=cmd_wavefront)

    p = sub.add_parser("propagate", help="verify singularity transport")
    common(p)
    p.add_argument("--atom", required=True)
    p.add_argument("--ham", required=True, choices=("free", "harmonic"))
    p.add_argument("--t", type=float, required=True)
    p.add_argument("--sectors", type=int, default=72)
    p.set_defaults(func=cmd_propagate)

    p = sub.add_parser("frame-info", help="frame bounds, dual window, reconstruction")
    common(p)
    p.add_argument("--alpha", type=float, default=0.5)
    p.add_argument("--beta", type=float, default=0.5)
    p.add_argument("--K-lattice", type=int, default=40, dest="K_lattice")
    p.add_argument("--tol", type=float, default=1e-8)
    p.set_defaults(func=cmd_frame_info)
    return top


def _apply_config(args, parser):
    if not getattr(args, "config", None):
        return args
    overrides = {}
    with open(args.config, encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            key, sep, value = line.partition("=")
            if not sep:
                raise DomainError(f"config line {line!r} is not key=value")
            overrides[key.strip().replace("-", "_")] = value.strip()
    for key, value in overrides.items():
        if not hasattr(args, key):
            raise DomainError(f"unknown config key {key!r}")
        current = getattr(args, key)
        if isinstance(current, bool):
            setattr(args, key, value.lower() in ("1", "true", "yes"))
        elif isinstance(current, int):
            setattr(args, key, int(value))
        elif isinstance(current, float):
            setattr(args, key, float(value))
        else:
            setattr(args, key, value)
    return args


def _fail(code_name, message, exit_code):
    sys.stderr.write(json.dumps({"code": code_name, "message": str(message)}) + "\n")
    return exit_code


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        args = _apply_config(args, parser)
        return args.func(args)
    except NotAFrame as exc:
        return _fail("NotAFrame", exc, 3)
    except NoConvergence as exc:
        return _fail("NoConvergence", exc, 4)
    except _VALIDATION_ERRORS as exc:
        return _fail(type(exc).__name__, exc, 2)
    except GabfrontError as exc:
        return _fail(type(exc).__name__, exc, 2)


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
