"""Command-line surface.

Every command is deterministic given its flags and emits text, JSON (with a
top-level ``schema_version``), or CSV.  Exit codes are a stable contract:
0 success, 2 input validation failure, 3 numerical/degeneracy failure; on
failure a single machine-parsable line ``ErrorName: reason`` goes to
stderr.

Matrix files are plain text: the first line holds the size n, followed by
n rows of n whitespace-separated decimal reals.  Floating-point output is
printed with 17 significant digits so values round-trip bit-faithfully.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from dataclasses import dataclass, field

import numpy as np

from . import bounds as bounds_mod
from . import repdim as repdim_mod
from .embed import EIG_TOL, embed, recover
from .errors import NumericalError, ValidationError
from .flagcore import (
    SPECTRUM_GAP_TOL,
    FlagPoint,
    Spectrum,
    SymmetricMatrix,
    default_traceless_spectrum,
    identity_flag,
    make_signature,
    random_flag_point,
)
from .geometry import default_step, gradient_descent, nearest_point

SCHEMA_VERSION = 1


@dataclass(frozen=True)
class RunConfig:
    """Parsed run options shared by every command."""

    command: str
    output_format: str = "text"
    seed: int = 0
    tolerances: dict = field(default_factory=dict)


def _fmt(x) -> str:
    return format(float(x), ".17g")


def _print(line: str = "") -> None:
    sys.stdout.write(line + "\n")


def _emit_json(payload: dict) -> None:
    _print(json.dumps(payload, indent=2))


def _emit_csv(rows) -> None:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    for row in rows:
        writer.writerow(row)
    sys.stdout.write(buf.getvalue())


def _print_matrix(a, indent: str = "  ") -> None:
    for row in np.asarray(a):
        _print(indent + " ".join(_fmt(v) for v in row))


def _matrix_csv_rows(a):
    return [[_fmt(v) for v in row] for row in np.asarray(a)]


def parse_int_list(text: str) -> list[int]:
    try:
        return [int(t) for t in text.split(",") if t.strip()]
    except ValueError as e:
        raise ValidationError(f"bad integer list {text!r}: {e}") from None


def parse_float_list(text: str) -> list[float]:
    try:
        return [float(t) for t in text.split(",") if t.strip()]
    except ValueError as e:
        raise ValidationError(f"bad number list {text!r}: {e}") from None


def read_matrix_file(path: str) -> np.ndarray:
    try:
        with open(path, encoding="utf-8") as fh:
            tokens = fh.read().split()
    except OSError as e:
        raise ValidationError(f"cannot read matrix file {path!r}: {e}") from None
    if not tokens:
        raise ValidationError(f"matrix file {path!r} is empty")
    try:
        n = int(tokens[0])
    except ValueError:
        raise ValidationError(f"matrix file {path!r}: first line must hold the size n") from None
    if n < 1:
        raise ValidationError(f"matrix file {path!r}: size must be positive, got {n}")
    if len(tokens) != 1 + n * n:
        raise ValidationError(
            f"matrix file {path!r}: expected {n * n} entries after the size, got {len(tokens) - 1}"
        )
    try:
        vals = [float(t) for t in tokens[1:]]
    except ValueError as e:
        raise ValidationError(f"matrix file {path!r}: {e}") from None
    return np.array(vals, dtype=float).reshape(n, n)


def format_matrix_file(a: np.ndarray) -> str:
    a = np.asarray(a)
    lines = [str(a.shape[0])]
    lines.extend(" ".join(_fmt(v) for v in row) for row in a)
    return "\n".join(lines) + "\n"


def _signature_spectrum(args, n: int):
    sig = make_signature(n, parse_int_list(args.ks))
    if getattr(args, "spectrum", None):
        spec = Spectrum(tuple(parse_float_list(args.spectrum)), sig)
    else:
        spec = default_traceless_spectrum(sig)
    return sig, spec


def _matrix_input(args, flag_name: str, path: str) -> np.ndarray:
    a = read_matrix_file(path)
    if args.n is not None and args.n != a.shape[0]:
        raise ValidationError(
            f"--n {args.n} disagrees with the {a.shape[0]}x{a.shape[0]} matrix in {flag_name}"
        )
    return a


def cmd_embed(args, cfg: RunConfig) -> int:
    sig, spec = _signature_spectrum(args, args.n)
    if args.identity:
        f = identity_flag(sig)
    elif args.q_file:
        f = FlagPoint(read_matrix_file(args.q_file), sig)
    else:
        f = random_flag_point(sig, cfg.seed)
    x = embed(f, spec).x.entries
    payload = {
        "schema_version": SCHEMA_VERSION,
        "command": "embed",
        "n": sig.n,
        "ks": list(sig.ks),
        "spectrum": [float(v) for v in spec.values],
        "matrix": x.tolist(),
        "eigenvalues": np.linalg.eigvalsh(x).tolist(),
        "trace": float(np.trace(x)),
    }
    if cfg.output_format == "json":
        _emit_json(payload)
    elif cfg.output_format == "csv":
        _emit_csv(_matrix_csv_rows(x))
    else:
        _print(f"n: {sig.n}")
        _print("ks: " + ",".join(map(str, sig.ks)))
        _print("spectrum: " + " ".join(_fmt(v) for v in spec.values))
        _print("trace: " + _fmt(payload["trace"]))
        _print("eigenvalues: " + " ".join(_fmt(v) for v in payload["eigenvalues"]))
        _print("matrix:")
        _print_matrix(x)
    return 0


def cmd_recover(args, cfg: RunConfig) -> int:
    a = _matrix_input(args, "--matrix-file", args.matrix_file)
    sig, spec = _signature_spectrum(args, a.shape[0])
    f = recover(SymmetricMatrix(a), spec, eig_tol=args.eig_tol)
    slices = sig.block_slices()
    blocks = [
        {
            "value": float(spec.values[i]),
            "size": int(sig.block_sizes[i]),
            "columns": [s.start, s.stop],
            "basis": f.q[:, s].tolist(),
        }
        for i, s in enumerate(slices)
    ]
    payload = {
        "schema_version": SCHEMA_VERSION,
        "command": "recover",
        "n": sig.n,
        "ks": list(sig.ks),
        "spectrum": [float(v) for v in spec.values],
        "q": f.q.tolist(),
        "blocks": blocks,
    }
    if cfg.output_format == "json":
        _emit_json(payload)
    elif cfg.output_format == "csv":
        _emit_csv(_matrix_csv_rows(f.q))
    else:
        _print(f"n: {sig.n}")
        _print("q:")
        _print_matrix(f.q)
        for b in blocks:
            lo, hi = b["columns"]
            _print(f"block value={_fmt(b['value'])} columns={lo}..{hi - 1}:")
            _print_matrix(np.asarray(b["basis"]))
    return 0


def cmd_project(args, cfg: RunConfig) -> int:
    a = _matrix_input(args, "--matrix-file", args.matrix_file)
    sig, spec = _signature_spectrum(args, a.shape[0])
    x = SymmetricMatrix(a)
    nearest = nearest_point(x, spec, gap_tol=args.gap_tol)
    dist = float(np.linalg.norm(a - nearest.x.entries))
    payload = {
        "schema_version": SCHEMA_VERSION,
        "command": "project",
        "n": sig.n,
        "ks": list(sig.ks),
        "spectrum": [float(v) for v in spec.values],
        "matrix": nearest.x.entries.tolist(),
        "distance": dist,
    }
    if cfg.output_format == "json":
        _emit_json(payload)
    elif cfg.output_format == "csv":
        _emit_csv(_matrix_csv_rows(nearest.x.entries))
    else:
        _print("distance: " + _fmt(dist))
        _print("matrix:")
        _print_matrix(nearest.x.entries)
    return 0


def cmd_optimize(args, cfg: RunConfig) -> int:
    a = _matrix_input(args, "--target-file", args.target_file)
    sig, spec = _signature_spectrum(args, a.shape[0])
    target = SymmetricMatrix(a)
    init = embed(random_flag_point(sig, cfg.seed), spec)
    step = args.step if args.step is not None else default_step(spec)
    result = gradient_descent(
        lambda x: x - target.entries,
        spec,
        init,
        step=step,
        max_iters=args.max_iters,
        grad_tol=args.grad_tol,
    )
    final = result.point.x.entries
    payload = {
        "schema_version": SCHEMA_VERSION,
        "command": "optimize",
        "n": sig.n,
        "ks": list(sig.ks),
        "spectrum": [float(v) for v in spec.values],
        "step": float(step),
        "iterations": result.iterations,
        "converged": result.converged,
        "final_grad_norm": float(result.final_grad_norm),
        "distance_to_target": float(np.linalg.norm(final - target.entries)),
        "grad_norms": [float(v) for v in result.grad_norms],
        "matrix": final.tolist(),
    }
    if cfg.output_format == "json":
        _emit_json(payload)
    elif cfg.output_format == "csv":
        _emit_csv(_matrix_csv_rows(final))
    else:
        _print(f"iterations: {result.iterations}")
        _print(f"converged: {result.converged}")
        _print("final_grad_norm: " + _fmt(result.final_grad_norm))
        _print("distance_to_target: " + _fmt(payload["distance_to_target"]))
        _print("grad_norms: " + " ".join(_fmt(v) for v in result.grad_norms))
        _print("matrix:")
        _print_matrix(final)
    return 0


def cmd_repdim_dim(args, cfg: RunConfig) -> int:
    w = repdim_mod.parse_weight(args.n, args.weight)
    dim = repdim_mod.weyl_dim(w)
    if cfg.output_format == "json":
        _emit_json(
            {
                "schema_version": SCHEMA_VERSION,
                "command": "repdim dim",
                "n": args.n,
                "weight": str(w),
                "dimension": dim,
            }
        )
    elif cfg.output_format == "csv":
        _emit_csv([["weight", "dimension"], [str(w), str(dim)]])
    else:
        _print(str(dim))
    return 0


def _hit_row(h: repdim_mod.EnumerationHit):
    return [str(h.weight), str(h.dimension), h.spin, h.real_form, h.sign_pair]


def cmd_repdim_enumerate(args, cfg: RunConfig) -> int:
    report = repdim_mod.enumerate_low_dim(args.n, args.max_dim, args.cap)
    if cfg.output_format == "json":
        _emit_json(
            {
                "schema_version": SCHEMA_VERSION,
                "command": "repdim enumerate",
                "n": report.n,
                "max_dim": report.max_dim,
                "mu1_cap": str(report.search_box.mu1_cap),
                "hits": [
                    {
                        "weight": str(h.weight),
                        "dimension": h.dimension,
                        "spin": h.spin,
                        "real_form": h.real_form,
                        "sign_pair": h.sign_pair,
                    }
                    for h in report.hits
                ],
            }
        )
    elif cfg.output_format == "csv":
        rows = [["weight", "dimension", "spin", "real_form", "sign_pair"]]
        rows.extend(_hit_row(h) for h in report.hits)
        _emit_csv(rows)
    else:
        _print(f"n={report.n} max_dim={report.max_dim} mu1_cap={report.search_box.mu1_cap}")
        for h in report.hits:
            flags = "".join(
                [" spin" if h.spin else "", " complexified" if not h.real_form else "",
                 " sign-pair" if h.sign_pair else ""]
            )
            _print(f"({h.weight}) -> {h.dimension}{flags}")
    return 0


def cmd_repdim_verify(args, cfg: RunConfig) -> int:
    report = repdim_mod.verify_classification(args.n, args.cap)
    if cfg.output_format == "json":
        _emit_json(
            {
                "schema_version": SCHEMA_VERSION,
                "command": "repdim verify",
                "n": report.n,
                "bound": report.bound,
                "passed": report.passed,
                "hits": [
                    {"weight": str(h.weight), "dimension": h.dimension} for h in report.hits
                ],
                "checks": [
                    {"name": c.name, "passed": c.passed, "detail": c.detail}
                    for c in report.checks
                ],
            }
        )
    elif cfg.output_format == "csv":
        rows = [["check", "passed", "detail"]]
        rows.extend([c.name, c.passed, c.detail] for c in report.checks)
        _emit_csv(rows)
    else:
        for c in report.checks:
            _print(f"{'PASS' if c.passed else 'FAIL'} {c.name}: {c.detail}")
        _print(f"{'VERIFIED' if report.passed else 'FAILED'} n={report.n} bound={report.bound}")
    return 0 if report.passed else 1


_BOUND_FIELDS = ("n", "ks", "flag_dim", "isospectral", "gunther", "whitney", "wang")


def _bound_payload(r: bounds_mod.BoundReport) -> dict:
    return {
        "n": r.signature.n,
        "ks": list(r.signature.ks),
        "flag_dim": r.flag_dim,
        "isospectral": r.isospectral,
        "gunther": r.gunther,
        "whitney": r.whitney,
        "wang": r.wang,
        "isospectral_label": r.isospectral_label,
        "comparisons": dict(r.comparisons),
    }


def _bound_csv_row(r: bounds_mod.BoundReport):
    return [
        r.signature.n,
        " ".join(map(str, r.signature.ks)),
        r.flag_dim,
        r.isospectral,
        r.gunther,
        r.whitney,
        "" if r.wang is None else r.wang,
        r.comparisons["isospectral_lt_gunther"],
        r.comparisons["whitney_condition"],
    ]


_BOUND_CSV_HEADER = [
    "n", "ks", "flag_dim", "isospectral", "gunther", "whitney", "wang",
    "isospectral_lt_gunther", "whitney_condition",
]


def cmd_bounds(args, cfg: RunConfig) -> int:
    if args.n is None or args.ks is None:
        raise ValidationError("bounds needs --n and --ks (or the `sweep` subcommand)")
    sig = make_signature(args.n, parse_int_list(args.ks))
    report = bounds_mod.bound_table(sig, args.group_order)
    if cfg.output_format == "json":
        payload = {"schema_version": SCHEMA_VERSION, "command": "bounds"}
        payload.update(_bound_payload(report))
        _emit_json(payload)
    elif cfg.output_format == "csv":
        _emit_csv([_BOUND_CSV_HEADER, _bound_csv_row(report)])
    else:
        _print(f"n: {report.signature.n}")
        _print("ks: " + ",".join(map(str, report.signature.ks)))
        _print(f"flag_dim: {report.flag_dim}")
        _print(f"isospectral: {report.isospectral} ({report.isospectral_label})")
        _print(f"gunther: {report.gunther}")
        _print(f"whitney: {report.whitney}")
        if report.wang is not None:
            _print(f"wang: {report.wang}")
        for name, value in report.comparisons.items():
            _print(f"{name}: {value}")
    return 0


def cmd_bounds_sweep(args, cfg: RunConfig) -> int:
    if args.max_n < 2:
        raise ValidationError(f"--max-n must be at least 2, got {args.max_n}")
    reports = []
    failures = 0
    for n in range(2, args.max_n + 1):
        for sig in bounds_mod.all_signatures(n):
            r = bounds_mod.bound_table(sig, args.group_order)
            if not r.comparisons["isospectral_lt_gunther"]:
                failures += 1
            reports.append(r)
    if cfg.output_format == "json":
        _emit_json(
            {
                "schema_version": SCHEMA_VERSION,
                "command": "bounds sweep",
                "max_n": args.max_n,
                "rows": [_bound_payload(r) for r in reports],
                "gunther_failures": failures,
            }
        )
    elif cfg.output_format == "csv":
        rows = [_BOUND_CSV_HEADER]
        rows.extend(_bound_csv_row(r) for r in reports)
        _emit_csv(rows)
    else:
        for r in reports:
            ks = ",".join(map(str, r.signature.ks))
            _print(
                f"n={r.signature.n} ks={ks} flag_dim={r.flag_dim} "
                f"isospectral={r.isospectral} gunther={r.gunther} whitney={r.whitney}"
            )
        _print(f"rows: {len(reports)}  gunther_failures: {failures}")
    return 0 if failures == 0 else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="isoflag",
        description="Flag manifolds as fixed-spectrum symmetric matrices.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_format(p):
        p.add_argument("--format", choices=("text", "json", "csv"), default="text")

    pe = sub.add_parser("embed", help="realize a flag as a symmetric matrix")
    pe.add_argument("--n", type=int, required=True, help="ambient dimension")
    pe.add_argument("--ks", required=True, help="comma-separated subspace dimensions")
    pe.add_argument("--spectrum", help="comma-separated block values (default: canonical traceless)")
    group = pe.add_mutually_exclusive_group()
    group.add_argument("--identity", action="store_true", help="use the coordinate flag")
    group.add_argument("--q-file", help="matrix file holding an explicit representative")
    pe.add_argument("--seed", type=int, default=0, help="seed for a random flag")
    add_format(pe)
    pe.set_defaults(func=cmd_embed)

    pr = sub.add_parser("recover", help="read the flag off a model matrix")
    pr.add_argument("--matrix-file", required=True)
    pr.add_argument("--n", type=int, help="cross-check against the matrix file")
    pr.add_argument("--ks", required=True)
    pr.add_argument("--spectrum")
    pr.add_argument("--eig-tol", type=float, default=EIG_TOL)
    add_format(pr)
    pr.set_defaults(func=cmd_recover)

    pp = sub.add_parser("project", help="nearest model point to a symmetric matrix")
    pp.add_argument("--matrix-file", required=True)
    pp.add_argument("--n", type=int)
    pp.add_argument("--ks", required=True)
    pp.add_argument("--spectrum")
    pp.add_argument("--gap-tol", type=float, default=SPECTRUM_GAP_TOL)
    add_format(pp)
    pp.set_defaults(func=cmd_project)

    po = sub.add_parser("optimize", help="gradient descent toward a target matrix")
    po.add_argument("--target-file", required=True)
    po.add_argument("--n", type=int)
    po.add_argument("--ks", required=True)
    po.add_argument("--spectrum")
    po.add_argument("--step", type=float, help="default: 0.1 / (max spectrum gap)^2")
    po.add_argument("--max-iters", type=int, default=500)
    po.add_argument("--grad-tol", type=float, default=1e-6)
    po.add_argument("--seed", type=int, default=0, help="seed for the starting flag")
    add_format(po)
    po.set_defaults(func=cmd_optimize)

    pd = sub.add_parser("repdim", help="exact SO(n) irreducible module dimensions")
    dsub = pd.add_subparsers(dest="repdim_command", required=True)

    pdd = dsub.add_parser("dim", help="dimension at one highest weight")
    pdd.add_argument("--n", type=int, required=True)
    pdd.add_argument("--weight", required=True, help='e.g. "2,0,0" or "1/2,1/2,1/2"')
    add_format(pdd)
    pdd.set_defaults(func=cmd_repdim_dim)

    pde = dsub.add_parser("enumerate", help="all dominant weights below a dimension cutoff")
    pde.add_argument("--n", type=int, required=True)
    pde.add_argument("--max-dim", type=int, required=True)
    pde.add_argument("--cap", default=4, help="first-entry cap of the search box")
    add_format(pde)
    pde.set_defaults(func=cmd_repdim_enumerate)

    pdv = dsub.add_parser("verify", help="verify the low-dimension classification")
    pdv.add_argument("--n", type=int, required=True)
    pdv.add_argument("--cap", default=4)
    add_format(pdv)
    pdv.set_defaults(func=cmd_repdim_verify)

    pb = sub.add_parser("bounds", help="ambient-dimension bound table")
    pb.add_argument("--n", type=int)
    pb.add_argument("--ks")
    pb.add_argument("--group-order", type=int)
    add_format(pb)
    pb.set_defaults(func=cmd_bounds)
    bsub = pb.add_subparsers(dest="bounds_command")
    pbs = bsub.add_parser("sweep", help="all signatures up to an ambient dimension")
    pbs.add_argument("--max-n", type=int, required=True)
    pbs.add_argument("--group-order", type=int)
    add_format(pbs)
    pbs.set_defaults(func=cmd_bounds_sweep)

    return parser


def run_config_from_args(args) -> RunConfig:
    tolerances = {
        key: getattr(args, key)
        for key in ("eig_tol", "gap_tol", "grad_tol")
        if getattr(args, key, None) is not None
    }
    return RunConfig(
        command=args.command,
        output_format=getattr(args, "format", "text"),
        seed=int(getattr(args, "seed", 0)),
        tolerances=tolerances,
    )


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    try:
        return args.func(args, run_config_from_args(args))
    except ValidationError as e:
        print(f"{type(e).__name__}: {e}", file=sys.stderr)
        return 2
    except NumericalError as e:
        print(f"{type(e).__name__}: {e}", file=sys.stderr)
        return 3


def entrypoint() -> None:
    sys.exit(main(sys.argv[1:]))


if __name__ == "__main__":
    entrypoint()
