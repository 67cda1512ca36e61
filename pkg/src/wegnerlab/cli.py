"""Command line front end.

Every subcommand writes ``report.json`` (and usually ``data.csv``) into
``--out``.  Exit codes: 0 all checks pass, 1 usage or config error, 2 a bound
or consistency check fails, 3 the symbol of ``alpha`` vanishes somewhere on
the torus.
"""
from __future__ import annotations

import argparse
import csv
import json
import platform
import sys
from datetime import datetime, timezone
from pathlib import Path

import numpy as np
import scipy

from . import __version__
from .circulant import (build_circulant, column_sum_norm, fold_laurent_inverse, invert_circulant,
                        verify_rectangle_condition, write_dense)
from .errors import (ConfigError, InvalidGeometry, InvalidInterval, NoConvergence,
                     SingularCirculant, SymbolVanishes)
from .experiments import (estimate_ids, estimate_wegner, lipschitz_check,
                          realization_hamiltonian, self_averaging_check)
from .model import DensityBV, lattice_hamiltonian, load_config, wegner_constant
from .spectral import spectral_averaging_check
from .symbols import (certify_nonvanishing, check_diagonal_dominance, read_coefficients,
                      wiener_inverse)

SCHEMA_VERSION = 1

EXIT_OK, EXIT_USAGE, EXIT_VIOLATION, EXIT_HYPOTHESIS = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _load(args):
    if not args.config:
        raise UsageError("--config is required")
    config, seed = load_config(args.config)
    if getattr(args, "seed", None) is None:
        args.seed = seed if seed is not None else 0
    return config


def _write_report(args, payload: dict) -> Path:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    payload = {
        "schema_version": SCHEMA_VERSION,
        "command": args.command,
        **payload,
        "versions": {"wegnerlab": __version__, "numpy": np.__version__,
                     "scipy": scipy.__version__, "python": platform.python_version()},
        "created": datetime.now(timezone.utc).isoformat(timespec="seconds"),
    }
    path = out / "report.json"
    path.write_text(json.dumps(payload, indent=2, sort_keys=False) + "\n")
    return path


def _write_csv(args, header, rows) -> Path:
    path = Path(args.out) / "data.csv"
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(header)
        w.writerows(rows)
    return path


def _alpha(args):
    if args.alpha:
        return read_coefficients(args.alpha)
    return _load(args).alpha


def cmd_symbol_check(args):
    alpha = _alpha(args)
    cert = certify_nonvanishing(alpha, args.grid)
    # refine an inconclusive certificate before giving up
    n = args.grid
    while not cert.nonvanishing and not cert.vanishes_on_grid and (2 * n) ** alpha.d <= 2 ** 22:
        n *= 2
        cert = certify_nonvanishing(alpha, n)
    payload = {
        "d": alpha.d,
        "alpha": [[*k, v] for k, v in alpha.items()],
        "diagonal_dominance": check_diagonal_dominance(alpha),
        "certificate": {
            "grid_points_per_axis": cert.grid_points_per_axis,
            "min_modulus_on_grid": cert.min_modulus_on_grid,
            "lipschitz_bound": cert.lipschitz_bound,
            "certified_lower_bound": cert.certified_lower_bound,
            "nonvanishing": cert.nonvanishing,
        },
    }
    if cert.vanishes_on_grid:
        payload["error"] = "symbol vanishes on the sampling grid"
        _write_report(args, payload)
        print("symbol of alpha vanishes on the torus; hypothesis violated", file=sys.stderr)
        return EXIT_HYPOTHESIS
    winv = wiener_inverse(alpha, args.tolerance)
    payload["wiener"] = {"column_sum_norm": winv.column_sum_norm, "tail_bound": winv.tail_bound,
                         "truncation_radius": winv.truncation_radius,
                         "grid_points_per_axis": winv.grid_points_per_axis}
    _write_report(args, payload)
    _write_csv(args, [f"k{i + 1}" for i in range(alpha.d)] + ["beta"],
               [[*k, v] for k, v in winv.as_field(threshold=args.tolerance).items()])
    return EXIT_OK


def cmd_circulant(args):
    config = _load(args)
    alpha, l = config.alpha, config.l
    r, R = config.r, config.R
    A = build_circulant(alpha, l, R)
    B = invert_circulant(A)
    winv = wiener_inverse(alpha, args.tolerance)
    F = fold_laurent_inverse(winv, l, R)
    residual = float(np.abs(A.matrix() @ B.matrix() - np.eye(A.size)).max())
    fold_gap = float(np.abs(F.coefficients - B.coefficients).max())
    checks = {
        "inverse": residual <= 1e-10,
        "rectangle": verify_rectangle_condition(A, alpha, l, r, R),
        "fold_agreement": fold_gap <= winv.tail_bound + 1e-12,
        "norm_bound": column_sum_norm(B) <= winv.column_sum_norm + winv.tail_bound + 1e-12,
    }
    payload = {
        "config_digest": config.digest(),
        "l": l, "r": r, "R": R, "D": config.D, "size": A.size,
        "inverse_residual": residual,
        "fold_max_difference": fold_gap,
        "tail_bound": winv.tail_bound,
        "norm_A": column_sum_norm(A),
        "norm_B_box": column_sum_norm(B),
        "norm_B_laurent": winv.column_sum_norm,
        "checks": checks,
        "pass": all(checks.values()),
    }
    if args.export:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        write_dense(A.matrix(), out / "A.txt")
        write_dense(B.matrix(), out / "B.txt")
    _write_report(args, payload)
    offsets = np.indices(A.coefficients.shape).reshape(A.d, -1).T - A.s
    _write_csv(args, [f"m{i + 1}" for i in range(A.d)] + ["a", "b_inverse", "b_folded"],
               [[*m.tolist(), a, b, f]
                for m, a, b, f in zip(offsets, A.coefficients.ravel(), B.coefficients.ravel(),
                                      F.coefficients.ravel())])
    return EXIT_OK if payload["pass"] else EXIT_VIOLATION


def cmd_wegner(args):
    config = _load(args)
    rep = estimate_wegner(config, args.e1, args.e2, args.M, args.seed,
                          tolerance=args.tolerance, workers=args.workers)
    _write_report(args, rep.to_dict())
    _write_csv(args, ["realization", "seed", "stream", "count"],
               [[i, args.seed, i, int(c)] for i, c in enumerate(rep.counts)])
    return EXIT_OK if rep.passed else EXIT_VIOLATION


def _energies(args):
    if args.energies:
        return np.array(args.energies, dtype=float)
    return np.linspace(args.emin, args.emax, args.points)


def cmd_ids(args):
    config = _load(args)
    winv = wiener_inverse(config.alpha, args.tolerance)
    c_w = wegner_constant(config, winv)
    curve = estimate_ids(config, _energies(args), args.M, args.seed, workers=args.workers)
    slopes = lipschitz_check(curve, c_w)
    payload = curve.to_dict()
    payload.update({
        "c_w": c_w,
        "in_unit_interval": curve.in_unit_interval(),
        "monotone": curve.monotone(),
        "slopes": [s.__dict__ for s in slopes],
    })
    ok = curve.in_unit_interval() and curve.monotone() and all(s.passed for s in slopes)
    payload["pass"] = ok
    _write_report(args, payload)
    _write_csv(args, ["energy", "mean", "std_error"],
               zip(curve.energies.tolist(), curve.mean.tolist(), curve.std_error.tolist()))
    return EXIT_OK if ok else EXIT_VIOLATION


def cmd_avg_check(args):
    config = _load(args)
    table = self_averaging_check(config, args.sizes, args.energy, args.M, args.seed,
                                 workers=args.workers)
    payload = {
        "config_digest": config.digest(),
        "seed": args.seed,
        "energy": table.energy,
        "realizations": args.M,
        "rows": [r.__dict__ for r in table.rows],
        "non_increasing": table.non_increasing,
        "pass": table.non_increasing,
    }
    _write_report(args, payload)
    _write_csv(args, ["l", "volume", "mean", "variance"],
               [[r.l, r.volume, r.mean, r.variance] for r in table.rows])
    return EXIT_OK if table.non_increasing else EXIT_VIOLATION


def cmd_averaging(args):
    if args.config:
        config = _load(args)
        H0 = realization_hamiltonian(config, args.seed, 0).toarray()
        digest = config.digest()
    else:
        if args.seed is None:
            args.seed = 0
        H0 = lattice_hamiltonian(np.zeros(args.sites), args.boundary).toarray()
        digest = None
    n = H0.shape[0]
    g = DensityBV.uniform(args.g_lo, args.g_hi)
    rng = np.random.default_rng(args.seed)
    rows = []
    for draw in range(args.draws):
        j = int(rng.integers(n)) if args.site is None else args.site
        phi = rng.normal(size=n)
        phi /= np.linalg.norm(phi)
        w = np.zeros(n)
        w[j] = 1.0
        res = spectral_averaging_check(H0, w, g, (args.e1, args.e2), j, phi)
        rows.append([draw, j, res.lhs, res.bound, res.error, res.passed])
    ok = all(r[-1] for r in rows)
    _write_report(args, {
        "config_digest": digest, "seed": args.seed, "sites": n,
        "interval": [args.e1, args.e2], "g_support": [args.g_lo, args.g_hi],
        "draws": args.draws, "max_lhs": max(r[2] for r in rows), "bound": rows[0][3],
        "pass": ok,
    })
    _write_csv(args, ["draw", "site", "lhs", "bound", "error", "pass"], rows)
    return EXIT_OK if ok else EXIT_VIOLATION


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="wegnerlab", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", parser_class=_Parser)

    def common(sp, seed=True, config_required=True):
        sp.add_argument("--config", required=False, help="model config file (INI)")
        sp.add_argument("--out", default=".", help="output directory")
        sp.add_argument("--tolerance", type=float, default=1e-12, help="Wiener inversion tolerance")
        if seed:
            sp.add_argument("--seed", type=int, default=None, help="overrides the config seed")
            sp.add_argument("--workers", type=int, default=None)

    s = sub.add_parser("symbol-check", help="non-vanishing certificate and ||B||_1")
    common(s, seed=False)
    s.add_argument("--alpha", help="coefficient file ('k_1 ... k_d value' per line)")
    s.add_argument("--grid", type=int, default=256)
    s.set_defaults(func=cmd_symbol_check)

    s = sub.add_parser("circulant", help="build, invert and verify the circulant A_Lambda")
    common(s, seed=False)
    s.add_argument("--export", action="store_true", help="write A.txt and B.txt")
    s.set_defaults(func=cmd_circulant)

    s = sub.add_parser("wegner", help="Monte Carlo Wegner bound check")
    common(s)
    s.add_argument("--e1", type=float, required=True)
    s.add_argument("--e2", type=float, required=True)
    s.add_argument("-M", type=int, default=1000, help="number of realizations")
    s.set_defaults(func=cmd_wegner)

    s = sub.add_parser("ids", help="integrated density of states with Lipschitz check")
    common(s)
    s.add_argument("--energies", type=float, nargs="+")
    s.add_argument("--emin", type=float, default=-3.0)
    s.add_argument("--emax", type=float, default=3.0)
    s.add_argument("--points", type=int, default=20)
    s.add_argument("-M", type=int, default=200)
    s.set_defaults(func=cmd_ids)

    s = sub.add_parser("avg-check", help="self-averaging: variance of N^l(E)/|Q_l| versus l")
    common(s)
    s.add_argument("--sizes", type=int, nargs="+", required=True)
    s.add_argument("--energy", type=float, required=True)
    s.add_argument("-M", type=int, default=200)
    s.set_defaults(func=cmd_avg_check)

    s = sub.add_parser("averaging", help="spectral averaging bound on random (phi, j) draws")
    common(s)
    s.add_argument("--sites", type=int, default=11)
    s.add_argument("--boundary", choices=("truncated", "periodic"), default="truncated")
    s.add_argument("--site", type=int, default=None, help="fixed site (default: random per draw)")
    s.add_argument("--e1", type=float, default=0.9)
    s.add_argument("--e2", type=float, default=1.1)
    s.add_argument("--g-lo", type=float, default=0.0)
    s.add_argument("--g-hi", type=float, default=4.0)
    s.add_argument("--draws", type=int, default=10)
    s.set_defaults(func=cmd_averaging)
    return p


def run_cli(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command is None:
            raise UsageError("a subcommand is required")
        return args.func(args)
    except UsageError as exc:
        print(f"wegnerlab: error: {exc}", file=sys.stderr)
        parser.print_usage(sys.stderr)
        return EXIT_USAGE
    except ConfigError as exc:
        print(f"wegnerlab: config error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (InvalidInterval, InvalidGeometry) as exc:
        print(f"wegnerlab: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (SymbolVanishes, NoConvergence, SingularCirculant) as exc:
        print(f"wegnerlab: hypothesis violated: {exc}", file=sys.stderr)
        return EXIT_HYPOTHESIS


def main():
    sys.exit(run_cli())
