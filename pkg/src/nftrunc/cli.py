"""Command-line entry points.

Subcommands mirror the library surface: synthesize a pulse from a discrete
spectrum, run the forward transform on a sampled signal, evaluate the
closed-form truncated spectrum, recover eigenvalues from continuous data,
and drive the random-phase truncation experiment.  Exit codes: 0 success,
2 argument/validation error, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .core import (
    ContinuousSpectrum,
    DiscreteSpectrum,
    NFTError,
    TimeSignal,
    uniform_time_grid,
)
from .experiment import ExperimentConfig, run_experiment
from .inversion import allpass, count_eigenvalues, fit_eigenvalues
from .scattering import (
    SCHEME_SPLIT,
    ScatterConfig,
    continuous_spectrum,
    discrete_amplitudes,
    find_eigenvalues,
)
from .synthesis import recommended_time_grid, synthesize
from .truncation import TruncationModel, analytic_b_values, analytic_eigenvalues, truncated_jost_real

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_NUMERICAL = 3


def _parse_seeds(text: str) -> np.ndarray:
    return np.array([complex(tok.replace(" ", "")) for tok in text.split(",")])


def _cmd_synthesize(args) -> int:
    ds = DiscreteSpectrum.from_json(args.spectrum)
    if args.t_max is not None:
        grid = uniform_time_grid(args.t_max, args.samples)
    else:
        grid = recommended_time_grid(ds, n=args.samples)
    sig = synthesize(ds, grid)
    sig.to_csv(args.out)
    print(f"wrote {len(sig)} samples to {args.out}")
    return EXIT_OK


def _cmd_nft(args) -> int:
    sig = TimeSignal.from_csv(args.signal)
    cfg = ScatterConfig.from_file(args.config) if args.config else ScatterConfig(scheme=SCHEME_SPLIT)
    omega = np.linspace(-args.omega_max, args.omega_max, args.omega_points)
    cs = continuous_spectrum(sig, omega, cfg)
    cs.to_csv(args.out_continuous)
    if args.seeds:
        seeds = _parse_seeds(args.seeds)
    else:
        # no seeds given: count eigenvalues by phase winding, then locate
        # them with the all-pass fit before the Newton refinement
        g = allpass(cs, edge_tol=1e-1)
        n_eig = count_eigenvalues(g)
        if n_eig == 0:
            seeds = np.array([], dtype=complex)
        else:
            seeds = np.asarray(fit_eigenvalues(omega, g, n_eig).eigenvalues)
    roots = find_eigenvalues(sig, seeds, cfg) if seeds.size else []
    amps = discrete_amplitudes(sig, roots, cfg)
    ds = DiscreteSpectrum(
        np.array([lam for lam, _, _ in amps]), np.array([b for _, b, _ in amps])
    ) if amps else DiscreteSpectrum(np.array([]), np.array([]))
    ds.to_json(args.out_discrete)
    print(f"wrote continuous spectrum ({len(cs)} points) to {args.out_continuous}")
    print(f"wrote {len(ds)} eigenvalue(s) to {args.out_discrete}")
    return EXIT_OK


def _cmd_truncate_analytic(args) -> int:
    model = TruncationModel.from_json(args.model)
    omega = np.linspace(-args.omega_max, args.omega_max, args.omega_points)
    a_t, b_t = truncated_jost_real(omega, model)
    ContinuousSpectrum(omega, a_t, b_t).to_csv(args.out_continuous)
    eigs = analytic_eigenvalues(model)
    b_vals = analytic_b_values(eigs, model)
    DiscreteSpectrum(np.array(eigs), np.array(b_vals)).to_json(args.out_discrete)
    print(f"wrote analytic continuous spectrum to {args.out_continuous}")
    print(f"wrote {len(eigs)} analytic eigenvalue(s) to {args.out_discrete}")
    return EXIT_OK


def _cmd_eigs_from_continuous(args) -> int:
    cs = ContinuousSpectrum.from_csv(args.continuous)
    g = allpass(cs, edge_tol=args.edge_tol)
    n_eig = count_eigenvalues(g)
    seeds = _parse_seeds(args.seeds) if args.seeds else None
    fit = fit_eigenvalues(cs.omega, g, n_eig, seeds=seeds)
    fit.to_json(args.out)
    print(f"winding count N = {n_eig}; fit residual {fit.residual:.3e}")
    print(f"wrote eigenvalue fit to {args.out}")
    return EXIT_OK


def _cmd_experiment(args) -> int:
    cfg = ExperimentConfig.from_file(args.config) if args.config else ExperimentConfig()
    overrides = {}
    if args.trials is not None:
        overrides["n_trials"] = args.trials
    if args.seed is not None:
        overrides["rng_seed"] = args.seed
    if args.out is not None:
        overrides["output_dir"] = args.out
    if overrides:
        from dataclasses import replace

        cfg = replace(cfg, **overrides)

    def progress(done, total):
        if done % 10 == 0 or done == total:
            print(f"  trial {done}/{total}", flush=True)

    report = run_experiment(cfg, progress=progress)
    report.write(cfg.output_dir)
    print(f"wrote report to {Path(cfg.output_dir).resolve()}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="nftrunc", description=__doc__)
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("synthesize", help="discrete spectrum JSON -> signal CSV")
    s.add_argument("--spectrum", required=True)
    s.add_argument("--out", required=True)
    s.add_argument("--samples", type=int, default=10000)
    s.add_argument("--t-max", type=float, default=None)
    s.set_defaults(func=_cmd_synthesize)

    s = sub.add_parser("nft", help="signal CSV -> spectrum JSON + continuous CSV")
    s.add_argument("--signal", required=True)
    s.add_argument("--out-discrete", required=True)
    s.add_argument("--out-continuous", required=True)
    s.add_argument("--omega-max", type=float, default=20.0)
    s.add_argument("--omega-points", type=int, default=4096)
    s.add_argument("--seeds", help="comma-separated complex seeds, e.g. '0.4+0.5j,1j'")
    s.add_argument("--config", help="TOML/JSON file with a [scattering] section")
    s.set_defaults(func=_cmd_nft)

    s = sub.add_parser("truncate-analytic", help="model JSON -> analytic spectrum JSON/CSV")
    s.add_argument("--model", required=True)
    s.add_argument("--out-discrete", required=True)
    s.add_argument("--out-continuous", required=True)
    s.add_argument("--omega-max", type=float, default=20.0)
    s.add_argument("--omega-points", type=int, default=4096)
    s.set_defaults(func=_cmd_truncate_analytic)

    s = sub.add_parser("eigs-from-continuous", help="continuous CSV -> eigenvalue JSON")
    s.add_argument("--continuous", required=True)
    s.add_argument("--out", required=True)
    s.add_argument("--seeds", help="comma-separated complex seeds")
    s.add_argument("--edge-tol", type=float, default=1e-1)
    s.set_defaults(func=_cmd_eigs_from_continuous)

    s = sub.add_parser("experiment", help="config TOML -> report directory")
    s.add_argument("--config", help="TOML/JSON file with an [experiment] section")
    s.add_argument("--trials", type=int, default=None)
    s.add_argument("--seed", type=int, default=None)
    s.add_argument("--out", default=None)
    s.set_defaults(func=_cmd_experiment)

    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (NFTError, RuntimeError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except (ValueError, OSError, KeyError) as exc:
        print(f"invalid input: {exc}", file=sys.stderr)
        return EXIT_VALIDATION


if __name__ == "__main__":
    sys.exit(main())
