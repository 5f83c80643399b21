"""Batch command-line interface.

Subcommands: ``oracle``, ``extract``, ``propagate``, ``compare``, ``dyck``.
Everything is file-driven and non-interactive; identical configs produce
byte-identical outputs.  Exit codes: 0 success, 1 validation error, 2
numerical error (quadrature failure or path-sum budget).

CSV conventions: every file has one header row; floats are printed with 17
significant digits (lossless double round trip); complex-valued tables carry
separate ``re_*`` / ``im_*`` columns; density-matrix and map elements are
ordered row-major in the flat forward-backward index.
"""

from __future__ import annotations

import argparse
import os
import sys

import numpy as np

from .bath import eta_table
from .combinatorics import catalan, enumerate_dyck
from .config import RunConfig, default_config_text, load_config
from .errors import NumericalError, ValidationError
from .kernel_io import load_kernels, save_kernels
from .kernels import (
    TrajectorySeq,
    compare,
    extract_kernels,
    gqme_kernel,
    liou_norm,
    propagate,
)
from .liouville import TimeGrid, apply_map, fb_propagator
from .pathsum import PathSumRequest, oracle_trajectory, rdm_exact


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def _write_csv(path, header, rows):
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(row) + "\n")


def _map_columns(dim, prefix):
    cols = []
    for i in range(dim):
        for j in range(dim):
            cols += [f"re_{prefix}_{i}_{j}", f"im_{prefix}_{i}_{j}"]
    return cols


def _map_fields(mat):
    out = []
    for v in np.asarray(mat).ravel():
        out += [_fmt(v.real), _fmt(v.imag)]
    return out


def _out_dir(args, cfg):
    return args.out if args.out is not None else cfg.output_dir


def _cmd_oracle(args) -> int:
    cfg = load_config(args.config)
    args.out = _out_dir(args, cfg)
    steps = args.steps if args.steps is not None else cfg.grid.r_max
    grid = cfg.grid
    if steps > grid.n_steps:
        raise ValidationError(f"--steps {steps} exceeds grid.n_steps {grid.n_steps}")
    budget = args.budget if args.budget is not None else cfg.pathsum_budget
    table = eta_table(cfg.bath, TimeGrid(grid.dt, steps, steps), cfg.splitting,
                      rtol=cfg.quadrature_rtol)
    os.makedirs(args.out, exist_ok=True)
    rows = []
    dim = cfg.system.dim
    ident = np.eye(dim, dtype=complex)
    rows.append(["0", _fmt(0.0)] + _map_fields(ident))
    for k in range(1, steps + 1):
        req = PathSumRequest(cfg.system, grid, cfg.splitting, "full_U", k, cfg.bath, budget)
        u = rdm_exact(req, eta=table)
        rows.append([str(k), _fmt(k * grid.dt)] + _map_fields(u))
    path = os.path.join(args.out, "oracle_maps.csv")
    _write_csv(path, ["step", "t"] + _map_columns(dim, "u"), rows)
    print(path)
    return 0


def _extraction(cfg: RunConfig, splitting: str, flavor: str, r_max: int):
    grid = TimeGrid(cfg.grid.dt, cfg.grid.n_steps, r_max)
    table_grid = TimeGrid(grid.dt, max(r_max, 1), max(r_max, 1))
    table = eta_table(cfg.bath, table_grid, splitting, rtol=cfg.quadrature_rtol)
    kset, seed, aux_seed = extract_kernels(
        cfg.system,
        grid,
        splitting,
        flavor,
        eta=table,
        budget=cfg.pathsum_budget,
        aux_zero_convention=cfg.aux_zero_convention,
    )
    return kset, seed, aux_seed


def _cmd_extract(args) -> int:
    cfg = load_config(args.config)
    args.out = _out_dir(args, cfg)
    splitting = args.splitting or cfg.splitting
    flavor = args.flavor or cfg.flavor
    r_max = args.rmax or cfg.grid.r_max
    kset, _, _ = _extraction(cfg, splitting, flavor, r_max)
    os.makedirs(args.out, exist_ok=True)

    kpath = os.path.join(args.out, "kernels.txt")
    metadata = {
        "system.n": str(cfg.system.n),
        "bath.kind": cfg.bath.spectral_density.kind,
        "bath.alpha": _fmt(cfg.bath.spectral_density.alpha),
        "bath.omega_c": _fmt(cfg.bath.spectral_density.omega_c),
        "bath.beta": "inf" if np.isinf(cfg.bath.beta) else _fmt(cfg.bath.beta),
        "pathsum_budget": str(cfg.pathsum_budget),
    }
    save_kernels(kset, kpath, metadata=metadata)

    rows = []
    for k in range(1, len(kset.midpoint) + 1):
        norm_m = _fmt(liou_norm(kset.midpoint[k - 1]))
        norm_t = (
            _fmt(liou_norm(kset.termination[k - 1]))
            if kset.termination is not None and k <= len(kset.termination)
            else ""
        )
        rows.append([str(k), norm_m, norm_t])
    npath = os.path.join(args.out, "kernel_norms.csv")
    _write_csv(npath, ["k", "norm_M", "norm_T"], rows)

    if flavor == "ttm" and len(kset.midpoint) >= 2:
        kern = gqme_kernel(list(kset.midpoint), kset.dt)
        grows = [
            [str(k), _fmt(liou_norm(kern[k - 1])), "same_formula_unverified" if k == 1 else ""]
            for k in range(1, len(kern) + 1)
        ]
        _write_csv(
            os.path.join(args.out, "gqme_kernel_norms.csv"), ["k", "norm_K", "note"], grows
        )

    print(kpath)
    print(npath)
    return 0


def _cmd_propagate(args) -> int:
    cfg = load_config(args.config)
    args.out = _out_dir(args, cfg)
    kset = load_kernels(args.kernels)
    if abs(kset.dt - cfg.grid.dt) > 1e-15:
        raise ValidationError(f"kernel file dt {kset.dt} differs from config dt {cfg.grid.dt}")
    if kset.dim != cfg.system.dim:
        raise ValidationError("kernel file dimension differs from configured system")

    grid = TimeGrid(cfg.grid.dt, cfg.grid.n_steps, min(kset.r_max, cfg.grid.n_steps))
    table_grid = TimeGrid(grid.dt, grid.r_max, grid.r_max)
    table = eta_table(cfg.bath, table_grid, kset.splitting, rtol=cfg.quadrature_rtol)
    full, _, aux = oracle_trajectory(
        cfg.system, grid, kset.splitting, grid.r_max, eta=table, budget=cfg.pathsum_budget
    )
    seed = TrajectorySeq(grid.dt, tuple(full), "oracle")
    aux_seed = TrajectorySeq(grid.dt, tuple(aux), "oracle")
    g_half = fb_propagator(cfg.system, 0.5 * grid.dt) if kset.splitting == "sym_sys" else None
    traj = propagate(kset, cfg.grid.n_steps, seed, aux_seed=aux_seed, g_half=g_half)

    os.makedirs(args.out, exist_ok=True)
    dim = cfg.system.dim
    n = cfg.system.n
    header = ["step", "t"]
    for i in range(n):
        for j in range(n):
            header += [f"re_rho_{i}_{j}", f"im_rho_{i}_{j}"]
    if args.with_maps:
        header += _map_columns(dim, "u")

    rows = []
    ident = np.eye(dim, dtype=complex)
    for step in range(0, cfg.grid.n_steps + 1):
        u = ident if step == 0 else traj.maps[step - 1]
        rho = apply_map(u, cfg.initial_state)
        row = [str(step), _fmt(step * grid.dt)]
        for v in rho.ravel():
            row += [_fmt(v.real), _fmt(v.imag)]
        if args.with_maps:
            row += _map_fields(u)
        rows.append(row)
    path = os.path.join(args.out, "trajectory.csv")
    _write_csv(path, header, rows)
    print(path)
    return 0


def _cmd_compare(args) -> int:
    set_a = load_kernels(args.kernels_a)
    set_b = load_kernels(args.kernels_b)
    report = compare(set_a, set_b, threshold=args.threshold)
    os.makedirs(args.out, exist_ok=True)

    def cell(v):
        return "" if v is None else _fmt(v)

    rows = [
        [str(k), cell(na), cell(ta), cell(nb), cell(tb), cell(d)]
        for (k, na, ta, nb, tb, d) in report.rows()
    ]
    path = os.path.join(args.out, "comparison.csv")
    _write_csv(
        path,
        ["k", "norm_a_mid", "norm_a_term", "norm_b_mid", "norm_b_term", "diff_mid"],
        rows,
    )
    spath = os.path.join(args.out, "comparison_summary.csv")
    _write_csv(
        spath,
        ["set", "first_k_below_threshold", "threshold"],
        [
            ["a", "" if report.first_below_a is None else str(report.first_below_a), _fmt(report.threshold)],
            ["b", "" if report.first_below_b is None else str(report.first_below_b), _fmt(report.threshold)],
        ],
    )
    print(path)
    print(spath)
    return 0


def _cmd_dyck(args) -> int:
    m = args.semilength
    count = catalan(m)
    if args.count_only:
        print(f"{m},{count}")
        return 0
    os.makedirs(args.out, exist_ok=True)
    rows = [[str(mm), str(catalan(mm))] for mm in range(0, m + 1)]
    cpath = os.path.join(args.out, "dyck_counts.csv")
    _write_csv(cpath, ["semilength", "count"], rows)
    print(cpath)
    if args.list_paths:
        paths = enumerate_dyck(m)
        prow = [
            [str(i), " ".join(f"{s:+d}" for s in p.steps)] for i, p in enumerate(paths)
        ]
        ppath = os.path.join(args.out, "dyck_paths.csv")
        _write_csv(ppath, ["index", "steps"], prow)
        print(ppath)
    return 0


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ifkernels",
        description="Discretized influence-functional path integrals and memory kernels.",
    )
    sub = parser.add_subparsers(dest="command")

    p = sub.add_parser("oracle", help="run the path-sum oracle and write map CSVs")
    p.add_argument("--config", required=True)
    p.add_argument("--out", default=None)
    p.add_argument("--steps", type=int, default=None)
    p.add_argument("--budget", type=int, default=None)

    p = sub.add_parser("extract", help="extract a kernel set and write it to disk")
    p.add_argument("--config", required=True)
    p.add_argument("--out", default=None)
    p.add_argument("--flavor", choices=("smatpi", "ttm"), default=None)
    p.add_argument("--splitting", choices=("sym_env", "sym_sys", "asym"), default=None)
    p.add_argument("--rmax", type=int, default=None)

    p = sub.add_parser("propagate", help="iterate a stored kernel set to long times")
    p.add_argument("--config", required=True)
    p.add_argument("--kernels", required=True)
    p.add_argument("--out", default=None)
    p.add_argument("--with-maps", action="store_true", dest="with_maps")

    p = sub.add_parser("compare", help="compare two stored kernel sets")
    p.add_argument("--kernels-a", required=True, dest="kernels_a")
    p.add_argument("--kernels-b", required=True, dest="kernels_b")
    p.add_argument("--out", required=True)
    p.add_argument("--threshold", type=float, default=1e-3)

    p = sub.add_parser("dyck", help="Dyck-path counts and listings")
    p.add_argument("--semilength", type=int, required=True)
    p.add_argument("--count-only", action="store_true", dest="count_only")
    p.add_argument("--list", action="store_true", dest="list_paths")
    p.add_argument("--out", default="out")

    p = sub.add_parser("init-config", help="print the default example config")
    return parser


_COMMANDS = {
    "oracle": _cmd_oracle,
    "extract": _cmd_extract,
    "propagate": _cmd_propagate,
    "compare": _cmd_compare,
    "dyck": _cmd_dyck,
}


def cli_main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code == 0 else 1
    if args.command is None:
        parser.print_usage(sys.stderr)
        return 1
    if args.command == "init-config":
        sys.stdout.write(default_config_text())
        return 0
    try:
        return _COMMANDS[args.command](args)
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except NumericalError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(cli_main(sys.argv[1:]))


if __name__ == "__main__":
    main()
