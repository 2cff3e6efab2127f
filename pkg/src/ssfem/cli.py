"""Command-line interface tying the pipeline stages together.

Subcommands: kle-report, grid-report, solve-det, solve-intrusive,
solve-nisp, compare, stats.  Exit codes: 0 success, 2 configuration error,
3 solver non-convergence, 4 I/O or file-format error.
"""

import argparse
import json
import sys

import numpy as np

from .config import build_config, load_config
from .errors import ConfigError, MeshFormatError, SolverError
from .fem import solve_deterministic
from .field import StochasticField, field_from_csv
from .intrusive import solve_intrusive
from .kle import eigen_1d, eigen_2d, gaussian_modes
from .lognormal import lognormal_pce
from .mesh import load_mesh, structured_mesh
from .nisp import nisp_solve, sample_count
from .pce import build_basis
from .postproc import compare_fields, export_vtk, field_stats
from .sparsegrid import smolyak

HALF_WIDTH = 0.5  # covariance kernel frame covering the unit square


def _add_run_arguments(parser):
    parser.add_argument("--config", help="flat key=value configuration file")
    parser.add_argument("--mesh", help="mesh file (overrides --nx/--ny)")
    parser.add_argument("--nx", type=int, help="structured mesh cells in x")
    parser.add_argument("--ny", type=int, help="structured mesh cells in y")
    parser.add_argument("--L", type=int, help="number of random variables")
    parser.add_argument("--p-u", dest="p_u", type=int, help="solution chaos order")
    parser.add_argument("--p-a", dest="p_a", type=int, help="input chaos order (default 2*p_u)")
    parser.add_argument("--sigma", type=float, help="std deviation of the Gaussian log field")
    parser.add_argument("--corr-length", dest="corr_length", type=float, help="correlation length")
    parser.add_argument("--mean-log", dest="mean_log", type=float, help="mean of the log field")
    parser.add_argument("--f", type=float, help="constant source term")
    parser.add_argument("--tol", type=float, help="solver relative residual tolerance")
    parser.add_argument("--out", help="output CSV path")
    parser.add_argument("--vtk", help="optional VTK output path")


def _config_from_args(args, extra_keys=()):
    file_values = load_config(args.config) if args.config else {}
    keys = [
        "mesh", "nx", "ny", "L", "p_u", "p_a", "sigma",
        "corr_length", "mean_log", "f", "tol", "out", "vtk",
    ]
    keys.extend(extra_keys)
    overrides = {k: getattr(args, k) for k in keys if getattr(args, k, None) is not None}
    return build_config(file_values, overrides)


def _load_domain(cfg):
    mesh = load_mesh(cfg.mesh) if cfg.mesh else structured_mesh(cfg.nx, cfg.ny)
    if cfg.sigma == 0.0:
        # deterministic limit: the log field degenerates to its mean
        modes = np.zeros((cfg.L + 1, mesh.n_nodes))
        modes[0] = cfg.mean_log
    else:
        expansion = eigen_2d(HALF_WIDTH, cfg.corr_length, cfg.sigma**2, cfg.L)
        modes = gaussian_modes(expansion, mesh.nodes, cfg.mean_log, cfg.L)
    return mesh, modes


def _write_solution(cfg, mesh, sol, label):
    if cfg.out:
        sol.to_csv(cfg.out)
        print(f"{label}: wrote {len(sol.basis)} coefficient fields to {cfg.out}")
    if cfg.vtk:
        mean, std = field_stats(sol)
        named = [("mean", mean), ("std", std)]
        named += [(f"c{j}", sol.coeffs[j]) for j in range(1, min(len(sol.basis), cfg.L + 1))]
        export_vtk(mesh, named, cfg.vtk, title=label)
        print(f"{label}: wrote VTK point data to {cfg.vtk}")


def _cmd_kle_report(args):
    count = args.n
    expansion = eigen_2d(args.a, args.b, args.sigma2, count)
    print(f"1D eigenpairs (a={args.a:g}, b={args.b:g}, sigma2={args.sigma2:g})")
    print(f"{'i':>3} {'omega':>10} {'lambda':>10}")
    for i, pair in enumerate(eigen_1d(args.a, args.b, args.sigma2, count), start=1):
        print(f"{i:>3} {pair.omega:>10.4f} {pair.eigenvalue:>10.4f}")
    print()
    print(f"2D eigenpairs (first {count})")
    print(f"{'n':>3} {'ix':>3} {'iy':>3} {'lambda':>10}")
    for n, (value, ix, iy) in enumerate(expansion.terms[:count], start=1):
        print(f"{n:>3} {ix:>3} {iy:>3} {value:>10.4f}")
    return 0


def _cmd_grid_report(args):
    grid = smolyak(args.dim, args.level)
    print(f"sparse grid: dim={args.dim} level={args.level} points={sample_count(grid)}")
    header = " ".join(f"{f'x{i + 1}':>9}" for i in range(args.dim))
    print(f"{header} {'weight':>9}")
    for point, weight in zip(grid.points, grid.weights):
        coords = " ".join(f"{x:>9.4f}" for x in point)
        print(f"{coords} {weight:>9.4f}")
    return 0


def _cmd_solve_det(args):
    cfg = _config_from_args(args)
    mesh, modes = _load_domain(cfg)
    mean_coeff = np.exp(modes[0] + 0.5 * np.sum(modes[1:] ** 2, axis=0))
    solution = solve_deterministic(mesh, mean_coeff, cfg.f, rtol=cfg.solver_tol(1e-10))
    sol = StochasticField(build_basis(cfg.L, 0), mesh.nodes, solution[None, :], kind="solution")
    print(f"solve-det: {mesh.n_nodes} nodes, max |u| = {np.abs(solution).max():.6g}")
    _write_solution(cfg, mesh, sol, "solve-det")
    return 0


def _cmd_solve_intrusive(args):
    cfg = _config_from_args(args)
    mesh, modes = _load_domain(cfg)
    basis_out = build_basis(cfg.L, cfg.p_u)
    basis_in = build_basis(cfg.L, cfg.input_order())
    l_field = lognormal_pce(modes, mesh.nodes, basis_in)
    sol = solve_intrusive(mesh, l_field, cfg.f, basis_out, rtol=cfg.solver_tol(1e-8))
    mean, std = field_stats(sol)
    print(
        f"solve-intrusive: {mesh.n_nodes} nodes x {len(basis_out)} chaos terms, "
        f"max mean = {mean.max():.6g}, max std = {std.max():.6g}"
    )
    _write_solution(cfg, mesh, sol, "solve-intrusive")
    return 0


def _cmd_solve_nisp(args):
    cfg = _config_from_args(args, extra_keys=("level",))
    mesh, modes = _load_domain(cfg)
    basis_out = build_basis(cfg.L, cfg.p_u)
    grid = smolyak(cfg.L, cfg.level)
    sol = nisp_solve(mesh, modes, basis_out, grid, cfg.f, rtol=cfg.solver_tol(1e-10))
    mean, std = field_stats(sol)
    print(
        f"solve-nisp: {sample_count(grid)} samples on level-{cfg.level} grid, "
        f"max mean = {mean.max():.6g}, max std = {std.max():.6g}"
    )
    _write_solution(cfg, mesh, sol, "solve-nisp")
    return 0


def _cmd_compare(args):
    field_a = field_from_csv(args.field_a)
    field_b = field_from_csv(args.field_b)
    report = compare_fields(field_a, field_b)
    text = json.dumps(report, indent=2)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text + "\n")
        print(f"compare: wrote report to {args.out}")
    else:
        print(text)
    return 0


def _cmd_stats(args):
    sol = field_from_csv(args.field)
    mean, std = field_stats(sol)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write("node,x,y,mean,std\n")
            for i in range(sol.n_nodes):
                fh.write(
                    f"{i},{sol.nodes[i, 0]:.15g},{sol.nodes[i, 1]:.15g},"
                    f"{mean[i]:.15g},{std[i]:.15g}\n"
                )
        print(f"stats: wrote per-node mean/std to {args.out}")
    else:
        print(f"mean: min={mean.min():.6g} max={mean.max():.6g}")
        print(f"std:  min={std.min():.6g} max={std.max():.6g}")
    return 0


def build_parser():
    parser = argparse.ArgumentParser(
        prog="ssfem",
        description="Stochastic diffusion on the unit square: coupled Galerkin and "
        "sparse-grid sampling solvers with shared KLE/chaos machinery.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("kle-report", help="print 1D/2D covariance eigenpairs")
    p.add_argument("--a", type=float, default=HALF_WIDTH, help="domain half width")
    p.add_argument("--b", type=float, default=1.0, help="correlation length")
    p.add_argument("--sigma2", type=float, default=1.0, help="process variance")
    p.add_argument("--n", type=int, default=7, help="number of eigenpairs")
    p.set_defaults(func=_cmd_kle_report)

    p = sub.add_parser("grid-report", help="print sparse-grid nodes and weights")
    p.add_argument("--dim", type=int, default=2)
    p.add_argument("--level", type=int, default=3)
    p.set_defaults(func=_cmd_grid_report)

    p = sub.add_parser("solve-det", help="deterministic solve at the mean coefficient")
    _add_run_arguments(p)
    p.set_defaults(func=_cmd_solve_det)

    p = sub.add_parser("solve-intrusive", help="coupled stochastic Galerkin solve")
    _add_run_arguments(p)
    p.set_defaults(func=_cmd_solve_intrusive)

    p = sub.add_parser("solve-nisp", help="sparse-grid sampling and spectral projection")
    _add_run_arguments(p)
    p.add_argument("--level", type=int, help="sparse grid level")
    p.set_defaults(func=_cmd_solve_nisp)

    p = sub.add_parser("compare", help="difference report between two coefficient fields")
    p.add_argument("field_a")
    p.add_argument("field_b")
    p.add_argument("--out", help="write the JSON report here instead of stdout")
    p.set_defaults(func=_cmd_compare)

    p = sub.add_parser("stats", help="per-node mean/std of a solution field")
    p.add_argument("field")
    p.add_argument("--out", help="output CSV path")
    p.set_defaults(func=_cmd_stats)

    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as err:
        print(f"configuration error: {err}", file=sys.stderr)
        return 2
    except SolverError as err:
        print(f"solver error: {err}", file=sys.stderr)
        return 3
    except (MeshFormatError, OSError, ValueError) as err:
        print(f"i/o error: {err}", file=sys.stderr)
        return 4


if __name__ == "__main__":
    sys.exit(main())
