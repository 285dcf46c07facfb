"""Command-line interface.

Subcommands::

    mzsim predict      --config FILE [--out PATH] [--format csv|json]
    mzsim simulate     --config FILE [--seed N] [--out PATH] [--format ...]
    mzsim fringes      --config FILE [--out PATH] [--format ...]
    mzsim discriminate --config FILE [--seed N] [--out PATH]
    mzsim plan         --config FILE [--seed N] [--out PATH]
    mzsim sectors-demo [--out PATH]

``predict`` emits the expected count table for the configured
experiment and hypothesis.  ``simulate`` emits three rows under the
same header: the sampled tallies, the prediction they are compared to,
and the per-category z-scores.  ``fringes`` emits a two-column
position/intensity profile.  ``discriminate`` and ``plan`` emit flat
JSON reports.  ``sectors-demo`` prints a worked superselection
example (a cross-sector cat state losing its coherences).

Exit codes: 0 success, 2 configuration error, 3 runtime error.  Data
goes to stdout or ``--out``; diagnostics go to stderr.  Floats are
emitted with 17 significant digits so identical configurations yield
byte-identical output.
"""

import argparse
import json
import sys
from dataclasses import replace

import numpy as np

from . import sectors
from .config import RunConfig, parse_config
from .core import DecayParams, Hypothesis
from .errors import ConfigError, DomainError, MzsimError, UnsupportedHypothesisError
from .fringes import coherent_pattern, incoherent_pattern
from .montecarlo import simulate_decay, simulate_excitation, simulate_photon
from .predict import predict_decay, predict_excitation, predict_photon
from .stats import build_model, discriminate, min_sample_size

__all__ = ["main"]

_PREDICTORS = {
    "excitation": predict_excitation,
    "decay": predict_decay,
    "photon": predict_photon,
}
_SIMULATORS = {
    "excitation": simulate_excitation,
    "decay": simulate_decay,
    "photon": simulate_photon,
}


def _fmt(value) -> str:
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return format(float(value), ".17g")


def _csv(header: tuple[str, ...], rows) -> str:
    lines = [",".join(header)]
    lines.extend(",".join(_fmt(v) for v in row) for row in rows)
    return "\n".join(lines) + "\n"


def _json(payload) -> str:
    return json.dumps(payload, allow_nan=False) + "\n"


def _finite(x: float):
    return float(x) if np.isfinite(x) else None


def _require(condition: bool, message: str) -> None:
    if not condition:
        raise ConfigError(message)


def _experiment_inputs(cfg: RunConfig):
    """Validated (kind, params) with any source impurity folded into t1."""
    _require(cfg.params is not None, "this subcommand needs an [experiment] section")
    params = cfg.params
    if isinstance(params, DecayParams):
        params = params.with_purity_folded()
    return cfg.experiment, params


def _tables_for(kind: str, params, hypothesis: Hypothesis, cfg: RunConfig, simulate: bool):
    """Prediction (and optionally a sampled run); config-induced mismatches exit as config errors."""
    try:
        predicted = _PREDICTORS[kind](params, hypothesis)
        sampled = _SIMULATORS[kind](params, hypothesis, cfg.sim) if simulate else None
    except (DomainError, UnsupportedHypothesisError) as exc:
        raise ConfigError(str(exc)) from None
    return predicted, sampled


def _cmd_predict(cfg: RunConfig) -> str:
    kind, params = _experiment_inputs(cfg)
    _require(cfg.hypothesis is not None, "predict needs a hypothesis")
    table, _ = _tables_for(kind, params, cfg.hypothesis, cfg, simulate=False)
    if (cfg.output_format or "csv") == "json":
        return _json(table.as_dict())
    return _csv(table.labels, [table.values()])


def _z_scores(tallies: np.ndarray, probs: np.ndarray, n0: int) -> np.ndarray:
    expected = probs * n0
    variance = n0 * probs * (1.0 - probs)
    z = np.zeros(len(probs))
    spread = variance > 0
    z[spread] = (tallies[spread] - expected[spread]) / np.sqrt(variance[spread])
    deviation = tallies[~spread] - expected[~spread]
    z[~spread] = np.where(
        deviation == 0, 0.0, np.where(deviation > 0, np.inf, -np.inf)
    )
    return z


def _cmd_simulate(cfg: RunConfig) -> str:
    kind, params = _experiment_inputs(cfg)
    _require(cfg.hypothesis is not None, "simulate needs a hypothesis")
    predicted, sampled = _tables_for(kind, params, cfg.hypothesis, cfg, simulate=True)
    probs = np.array(predicted.values(), dtype=float)
    probs = probs / params.n0 if params.n0 else probs
    z = _z_scores(np.array(sampled.values(), dtype=float), probs, params.n0)
    if (cfg.output_format or "csv") == "json":
        return _json(
            {
                "simulated": sampled.as_dict(),
                "predicted": predicted.as_dict(),
                "z_scores": dict(zip(sampled.labels, (_finite(v) for v in z))),
            }
        )
    # row order: simulated tallies, predicted expectations, z-scores
    return _csv(sampled.labels, [sampled.values(), predicted.values(), z])


def _cmd_fringes(cfg: RunConfig) -> str:
    _require(cfg.geometry is not None, "fringes needs a [fringes] section")
    pattern = coherent_pattern if cfg.fringe_pattern == "coherent" else incoherent_pattern
    profile = pattern(cfg.geometry)
    if (cfg.output_format or "csv") == "json":
        return _json(
            {
                "position": [float(x) for x in profile.positions],
                "intensity": [float(y) for y in profile.intensity],
            }
        )
    return _csv(("position", "intensity"), zip(profile.positions, profile.intensity))


def _stats_models(cfg: RunConfig):
    kind, params = _experiment_inputs(cfg)
    background = cfg.stats.background
    if background is not None and len(background) == 1:
        background = background[0]
    try:
        if cfg.stats.visibility is not None:
            model_h0 = build_model(
                kind, params, background=background, visibility=cfg.stats.visibility
            )
        else:
            model_h0 = build_model(kind, params, cfg.stats.h0, background=background)
        model_h1 = build_model(kind, params, cfg.stats.h1, background=background)
    except (DomainError, UnsupportedHypothesisError) as exc:
        raise ConfigError(str(exc)) from None
    return model_h0, model_h1


def _cmd_discriminate(cfg: RunConfig) -> str:
    _require(cfg.output_format != "csv", "discriminate emits JSON; remove format = csv")
    _require(cfg.stats.counts is not None, "discriminate needs counts in [stats]")
    _require(cfg.stats.alpha is not None, "discriminate needs alpha in [stats]")
    model_h0, model_h1 = _stats_models(cfg)
    report = discriminate(
        cfg.stats.counts,
        model_h0,
        model_h1,
        cfg.stats.alpha,
        replicates=cfg.stats.replicates or 100_000,
        seed=cfg.sim.seed,
    )
    payload = report.as_dict()
    payload["log_likelihood_ratio"] = _finite(payload["log_likelihood_ratio"])
    return _json(payload)


def _cmd_plan(cfg: RunConfig) -> str:
    _require(cfg.output_format != "csv", "plan emits JSON; remove format = csv")
    _require(cfg.stats.power is not None, "plan needs power in [stats]")
    model_h0, model_h1 = _stats_models(cfg)
    n = min_sample_size(
        model_h0,
        model_h1,
        cfg.stats.alpha,
        cfg.stats.power,
        method=cfg.stats.method,
        replicates=cfg.stats.replicates or 10_000,
        seed=cfg.sim.seed,
    )
    return _json(
        {
            "min_n0": n,
            "power": cfg.stats.power,
            "alpha": cfg.stats.alpha,
            "method": cfg.stats.method,
        }
    )


def _matrix_lines(matrix: np.ndarray) -> list[str]:
    return [
        "  [" + "  ".join(f"{v.real:+.4f}{v.imag:+.4f}j" for v in row) + "]"
        for row in matrix
    ]


def _cmd_sectors_demo(cfg: RunConfig) -> str:
    space = sectors.SectorSpace((1, 1))
    rho = sectors.DensityMatrix(np.full((2, 2), 0.5, dtype=complex), space)
    projected = sectors.superselect(rho)
    lines = [
        "sector dimensions: (1, 1)",
        "cat state: (|0> + |1>) / sqrt(2), one basis vector per sector",
        "density matrix of the cat state:",
        *_matrix_lines(rho.matrix),
        f"purity: {_fmt(sectors.purity(rho))}",
        "after removing inter-sector coherences:",
        *_matrix_lines(projected.matrix),
        f"purity: {_fmt(sectors.purity(projected))}",
        "the coherent cat state becomes the even classical mixture",
    ]
    return "\n".join(lines) + "\n"


_COMMANDS = {
    "predict": _cmd_predict,
    "simulate": _cmd_simulate,
    "fringes": _cmd_fringes,
    "discriminate": _cmd_discriminate,
    "plan": _cmd_plan,
    "sectors-demo": _cmd_sectors_demo,
}


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mzsim",
        description="Interferometer count predictions, Monte Carlo runs, "
        "fringe profiles, and hypothesis discrimination.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name in _COMMANDS:
        p = sub.add_parser(name)
        p.add_argument(
            "--config",
            required=name != "sectors-demo",
            help="path to the run configuration file",
        )
        p.add_argument("--out", help="write the artifact here instead of stdout")
        if name != "sectors-demo":
            p.add_argument(
                "--format", choices=("csv", "json"), help="override [output] format"
            )
        if name in ("simulate", "discriminate", "plan"):
            p.add_argument("--seed", type=int, help="override [simulation] seed")
    return parser


def _load_config(args) -> RunConfig:
    if args.config is None:
        cfg = RunConfig()
    else:
        try:
            with open(args.config, encoding="utf-8") as fh:
                text = fh.read()
        except OSError as exc:
            raise ConfigError(f"cannot read config: {exc}") from None
        cfg = parse_config(text)
    if getattr(args, "format", None) is not None:
        cfg.output_format = args.format
    if args.out is not None:
        cfg.output_path = args.out
    if getattr(args, "seed", None) is not None:
        try:
            cfg.sim = replace(cfg.sim, seed=args.seed)
        except DomainError as exc:
            raise ConfigError(str(exc)) from None
    return cfg


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        cfg = _load_config(args)
        text = _COMMANDS[args.command](cfg)
    except ConfigError as exc:
        print(f"mzsim: config error: {exc}", file=sys.stderr)
        return 2
    except (MzsimError, OSError) as exc:
        print(f"mzsim: error: {exc}", file=sys.stderr)
        return 3
    if cfg.output_path is None:
        sys.stdout.write(text)
    else:
        try:
            with open(cfg.output_path, "w", encoding="utf-8", newline="\n") as fh:
                fh.write(text)
        except OSError as exc:
            print(f"mzsim: error: {exc}", file=sys.stderr)
            return 3
    return 0


if __name__ == "__main__":
    sys.exit(main())
