"""Command line interface.

Exit codes: 0 success, 2 configuration error, 3 numeric failure, 4 I/O error.
"""

from __future__ import annotations

import argparse
import csv
import json
import logging
import sys

import numpy as np
from scipy.special import dawsn

from .exceptions import ConfigError, KKPhaseError
from .experiment import (
    emit_plot,
    estimation_config_from_dict,
    load_json_config,
    read_results,
    run_sweep,
    sweep_config_from_dict,
    write_results,
)
from .hilbert import HilbertConfig, hilbert_pv_oracle, hilbert_zhou
from .optics import AbsorptionModel, absorption_profile, phase_profile_exact, transmission_profile
from .pipeline import run_estimation
from .spectral import make_uniform_grid

log = logging.getLogger("kkphase")

EXIT_OK, EXIT_CONFIG, EXIT_NUMERIC, EXIT_IO = 0, 2, 3, 4


def _write_csv(path, header, rows):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow([format(float(v), ".17g") for v in row])


def cmd_profile(args):
    model = AbsorptionModel(args.alpha0l, args.omega0, args.sigma)
    grid = make_uniform_grid(args.interval[0], args.interval[1], args.n_points)
    w = grid.nodes
    _write_csv(
        args.out,
        ["omega", "alpha_l", "eta", "phi"],
        zip(w, absorption_profile(w, model), transmission_profile(w, model), phase_profile_exact(w, model)),
    )


# name -> (callable, domain, infinite-line transform or None, evaluation points)
_CHECK_FUNCTIONS = {
    "gaussian": (
        lambda t: np.exp(-((t - 0.5) ** 2) / (2 * 0.1**2)),
        (0.0, 1.0),
        lambda x: 2 / np.sqrt(np.pi) * dawsn((x - 0.5) / (np.sqrt(2) * 0.1)),
        np.linspace(0.1, 0.9, 17),
    ),
    "constant": (
        lambda t: np.ones_like(t),
        (0.0, 1.0),
        lambda x: np.zeros_like(x),
        np.linspace(0.1, 0.9, 17),
    ),
    "lorentzian": (
        lambda t: 1.0 / (1.0 + t**2),
        (-8.0, 8.0),
        lambda x: x / (1.0 + x**2),
        np.linspace(-2.0, 2.0, 17),
    ),
}


def cmd_hilbert_check(args):
    f, domain, exact, xs = _CHECK_FUNCTIONS[args.function]
    config = HilbertConfig(args.j, *domain)
    # a grid whose nodes are exactly the check points
    grid = make_uniform_grid(xs[0], xs[-1], xs.size)
    zhou = hilbert_zhou(f, config, grid).values
    oracle = np.array([hilbert_pv_oracle(f, x, domain) for x in grid.nodes])
    _write_csv(
        args.out,
        ["x", "zhou", "pv_oracle", "infinite_line", "abs_diff"],
        zip(grid.nodes, zhou, oracle, exact(grid.nodes), np.abs(zhou - oracle)),
    )
    log.info("max |zhou - oracle| = %.3e", np.max(np.abs(zhou - oracle)))


def cmd_simulate(args):
    config = estimation_config_from_dict(load_json_config(args.config))
    result = run_estimation(config, args.seed)
    payload = {k: getattr(result, k) for k in result.__dataclass_fields__}
    with open(args.out, "w") as fh:
        json.dump(payload, fh, indent=2)
        fh.write("\n")


def cmd_sweep(args):
    config = sweep_config_from_dict(load_json_config(args.config))
    result = run_sweep(config, workers=args.workers)
    write_results(result, args.out)
    if args.plot:
        emit_plot(result, args.plot)


def cmd_plot(args):
    emit_plot(read_results(args.inp), args.out)


def build_parser():
    p = argparse.ArgumentParser(prog="kkphase", description=__doc__.splitlines()[0])
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("profile", help="exact absorption, transmission and phase profiles as CSV")
    s.add_argument("--alpha0l", type=float, default=1.0)
    s.add_argument("--omega0", type=float, default=0.5)
    s.add_argument("--sigma", type=float, default=0.1)
    s.add_argument("--interval", type=float, nargs=2, default=(0.0, 1.0), metavar=("A", "B"))
    s.add_argument("--n-points", type=int, default=10_000)
    s.add_argument("--out", required=True)
    s.set_defaults(func=cmd_profile)

    s = sub.add_parser("hilbert-check", help="compare the dyadic transform with PV quadrature")
    s.add_argument("--j", type=int, default=17)
    s.add_argument("--function", choices=sorted(_CHECK_FUNCTIONS), default="gaussian")
    s.add_argument("--out", required=True)
    s.set_defaults(func=cmd_hilbert_check)

    s = sub.add_parser("simulate", help="one estimation run, JSON result")
    s.add_argument("--config", required=True)
    s.add_argument("--seed", type=int, required=True)
    s.add_argument("--out", required=True)
    s.set_defaults(func=cmd_simulate)

    s = sub.add_parser("sweep", help="Monte Carlo sweep over the resource split")
    s.add_argument("--config", required=True)
    s.add_argument("--out", required=True)
    s.add_argument("--plot")
    s.add_argument("--workers", type=int, default=1)
    s.set_defaults(func=cmd_sweep)

    s = sub.add_parser("plot", help="render a stored sweep result as SVG")
    s.add_argument("--in", dest="inp", required=True)
    s.add_argument("--out", required=True)
    s.set_defaults(func=cmd_plot)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    try:
        args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    except (KKPhaseError, ArithmeticError, ValueError) as exc:
        print(f"numeric failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
