"""Line-oriented run-configuration parsing.

Format: ``[section]`` headers followed by ``key = value`` lines.  ``#``
starts a comment and blank lines are ignored.  Recognized sections are
``experiment``, ``simulation``, ``stats``, ``fringes`` and ``output``;
unknown sections, unknown keys, and duplicate keys are hard errors.

The ``[experiment]`` section names the experiment and its parameters::

    [experiment]
    experiment = excitation        # excitation | decay | photon
    hypothesis = pos               # pos | ccqi | modified_rate
    n0 = 10000
    epsilon = 0.2                  # excitation: epsilon, lambda, t
    lambda = 1.0                   # decay: lambda, lambda_prime, t1, t2, t3, mu
    t = 0.693                      # photon: d, u

``[simulation]`` holds ``seed`` (default 0), ``chunk_size`` (default
65536) and ``workers`` (default 1).  ``[stats]`` holds ``alpha``,
``power``, ``h0``/``h1`` hypothesis names (defaults pos/ccqi),
``counts`` (comma-separated observed tallies), ``background`` (scalar
or per-category comma list), ``visibility``, ``replicates`` and
``method`` (auto | closed_form | simulation).  ``[fringes]`` holds the
screen geometry plus ``pattern`` (coherent | incoherent).  ``[output]``
holds ``format`` (csv | json) and ``path``.
"""

from dataclasses import dataclass, field

from .core import DecayParams, ExcitationParams, Hypothesis, PhotonParams
from .errors import ConfigError, DomainError, GeometryError
from .fringes import FringeGeometry
from .montecarlo import SimConfig

__all__ = ["RunConfig", "StatsOptions", "parse_config"]

_SECTIONS = ("experiment", "simulation", "stats", "fringes", "output")

_PARAM_KEYS = {
    "excitation": ("n0", "epsilon", "lambda", "t"),
    "decay": ("n0", "lambda", "lambda_prime", "t1", "t2", "t3", "mu"),
    "photon": ("n0", "d", "u"),
}
_REQUIRED_PARAM_KEYS = {
    "excitation": ("n0", "epsilon", "lambda", "t"),
    "decay": ("n0", "lambda", "t1", "t2", "t3"),
    "photon": ("n0", "d", "u"),
}
_SIMULATION_KEYS = ("seed", "chunk_size", "workers")
_STATS_KEYS = (
    "alpha", "power", "h0", "h1", "counts", "background", "visibility",
    "replicates", "method",
)
_FRINGE_KEYS = (
    "source_separation", "wavelength", "screen_distance",
    "x_min", "x_max", "n_points", "pattern",
)
_OUTPUT_KEYS = ("format", "path")


@dataclass
class StatsOptions:
    """Validated contents of the ``[stats]`` section."""

    alpha: float | None = None
    power: float | None = None
    h0: Hypothesis = Hypothesis.POS
    h1: Hypothesis = Hypothesis.CCQI
    counts: tuple[int, ...] | None = None
    background: tuple[float, ...] | None = None
    visibility: float | None = None
    replicates: int | None = None
    method: str = "auto"


@dataclass
class RunConfig:
    """One fully validated run: exactly one experiment, one output."""

    experiment: str | None = None
    hypothesis: Hypothesis | None = None
    params: ExcitationParams | DecayParams | PhotonParams | None = None
    sim: SimConfig = field(default_factory=SimConfig)
    stats: StatsOptions = field(default_factory=StatsOptions)
    geometry: FringeGeometry | None = None
    fringe_pattern: str = "coherent"
    output_format: str | None = None  # None means the subcommand default
    output_path: str | None = None


def _split_sections(text: str) -> dict[str, dict[str, tuple[str, int]]]:
    sections: dict[str, dict[str, tuple[str, int]]] = {}
    current: str | None = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("["):
            if not (line.endswith("]") and len(line) > 2):
                raise ConfigError(f"malformed section header {raw.strip()!r}", lineno)
            name = line[1:-1].strip()
            if name not in _SECTIONS:
                raise ConfigError(
                    f"unknown section [{name}]; expected one of {', '.join(_SECTIONS)}",
                    lineno,
                )
            if name in sections:
                raise ConfigError(f"duplicate section [{name}]", lineno)
            sections[name] = {}
            current = name
            continue
        if "=" not in line:
            raise ConfigError(f"expected 'key = value', got {raw.strip()!r}", lineno)
        if current is None:
            raise ConfigError("key outside any [section]", lineno)
        key, value = (part.strip() for part in line.split("=", 1))
        if not key or not value:
            raise ConfigError(f"expected 'key = value', got {raw.strip()!r}", lineno)
        if key in sections[current]:
            raise ConfigError(f"duplicate key {key!r} in [{current}]", lineno)
        sections[current][key] = (value, lineno)
    return sections


def _reject_unknown(section: str, entries: dict, allowed: tuple[str, ...]) -> None:
    for key, (_, lineno) in entries.items():
        if key not in allowed:
            raise ConfigError(
                f"unknown key {key!r} in [{section}]; allowed: {', '.join(allowed)}",
                lineno,
            )


def _as_float(section: str, entries: dict, key: str) -> float | None:
    if key not in entries:
        return None
    value, lineno = entries[key]
    try:
        return float(value)
    except ValueError:
        raise ConfigError(f"{key} must be a number, got {value!r}", lineno) from None


def _as_int(section: str, entries: dict, key: str) -> int | None:
    if key not in entries:
        return None
    value, lineno = entries[key]
    try:
        return int(value)
    except ValueError:
        raise ConfigError(f"{key} must be an integer, got {value!r}", lineno) from None


def _as_choice(section: str, entries: dict, key: str, choices: tuple[str, ...]) -> str | None:
    if key not in entries:
        return None
    value, lineno = entries[key]
    if value not in choices:
        raise ConfigError(
            f"{key} must be one of {', '.join(choices)}, got {value!r}", lineno
        )
    return value


def _as_hypothesis(section: str, entries: dict, key: str) -> Hypothesis | None:
    name = _as_choice(section, entries, key, tuple(h.value for h in Hypothesis))
    return None if name is None else Hypothesis(name)


def _parse_experiment(entries: dict, cfg: RunConfig) -> None:
    if "experiment" not in entries:
        first_line = min(line for _, line in entries.values()) if entries else None
        raise ConfigError("[experiment] requires an 'experiment' key", first_line)
    kind, lineno = entries["experiment"]
    if kind not in _PARAM_KEYS:
        raise ConfigError(
            f"experiment must be one of {', '.join(_PARAM_KEYS)}, got {kind!r}", lineno
        )
    allowed = ("experiment", "hypothesis") + _PARAM_KEYS[kind]
    _reject_unknown("experiment", entries, allowed)
    for key in _REQUIRED_PARAM_KEYS[kind]:
        if key not in entries:
            raise ConfigError(f"experiment {kind!r} requires key {key!r}")

    cfg.experiment = kind
    cfg.hypothesis = _as_hypothesis("experiment", entries, "hypothesis")
    n0 = _as_int("experiment", entries, "n0")
    try:
        if kind == "excitation":
            cfg.params = ExcitationParams(
                n0=n0,
                epsilon=_as_float("experiment", entries, "epsilon"),
                lam=_as_float("experiment", entries, "lambda"),
                t=_as_float("experiment", entries, "t"),
            )
        elif kind == "decay":
            mu = _as_float("experiment", entries, "mu")
            cfg.params = DecayParams(
                n0=n0,
                lam=_as_float("experiment", entries, "lambda"),
                t1=_as_float("experiment", entries, "t1"),
                t2=_as_float("experiment", entries, "t2"),
                t3=_as_float("experiment", entries, "t3"),
                lam_prime=_as_float("experiment", entries, "lambda_prime"),
                mu=1.0 if mu is None else mu,
            )
        else:
            cfg.params = PhotonParams(
                n0=n0,
                d=_as_float("experiment", entries, "d"),
                u=_as_float("experiment", entries, "u"),
            )
    except DomainError as exc:
        raise ConfigError(str(exc)) from None


def _parse_simulation(entries: dict, cfg: RunConfig) -> None:
    _reject_unknown("simulation", entries, _SIMULATION_KEYS)
    seed = _as_int("simulation", entries, "seed")
    chunk_size = _as_int("simulation", entries, "chunk_size")
    workers = _as_int("simulation", entries, "workers")
    try:
        cfg.sim = SimConfig(
            seed=0 if seed is None else seed,
            chunk_size=65536 if chunk_size is None else chunk_size,
            workers=1 if workers is None else workers,
        )
    except DomainError as exc:
        raise ConfigError(str(exc)) from None


def _parse_number_list(section: str, entries: dict, key: str, kind) -> tuple | None:
    if key not in entries:
        return None
    value, lineno = entries[key]
    try:
        return tuple(kind(part.strip()) for part in value.split(","))
    except ValueError:
        raise ConfigError(
            f"{key} must be comma-separated {kind.__name__} values, got {value!r}",
            lineno,
        ) from None


def _parse_stats(entries: dict, cfg: RunConfig) -> None:
    _reject_unknown("stats", entries, _STATS_KEYS)
    opts = StatsOptions()
    opts.alpha = _as_float("stats", entries, "alpha")
    if opts.alpha is not None and not 0.0 < opts.alpha < 1.0:
        raise ConfigError(f"alpha must be in (0, 1), got {opts.alpha}")
    opts.power = _as_float("stats", entries, "power")
    if opts.power is not None and not 0.0 < opts.power < 1.0:
        raise ConfigError(f"power must be in (0, 1), got {opts.power}")
    h0 = _as_hypothesis("stats", entries, "h0")
    h1 = _as_hypothesis("stats", entries, "h1")
    if h0 is not None:
        opts.h0 = h0
    if h1 is not None:
        opts.h1 = h1
    opts.counts = _parse_number_list("stats", entries, "counts", int)
    if opts.counts is not None and any(c < 0 for c in opts.counts):
        raise ConfigError(f"counts must be non-negative integers, got {opts.counts}")
    opts.background = _parse_number_list("stats", entries, "background", float)
    if opts.background is not None and any(b < 0 for b in opts.background):
        raise ConfigError("background probabilities must be >= 0")
    opts.visibility = _as_float("stats", entries, "visibility")
    if opts.visibility is not None and not 0.0 <= opts.visibility <= 1.0:
        raise ConfigError(f"visibility must be in [0, 1], got {opts.visibility}")
    opts.replicates = _as_int("stats", entries, "replicates")
    if opts.replicates is not None and opts.replicates < 1:
        raise ConfigError(f"replicates must be >= 1, got {opts.replicates}")
    method = _as_choice("stats", entries, "method", ("auto", "closed_form", "simulation"))
    if method is not None:
        opts.method = method
    cfg.stats = opts


def _parse_fringes(entries: dict, cfg: RunConfig) -> None:
    _reject_unknown("fringes", entries, _FRINGE_KEYS)
    for key in _FRINGE_KEYS[:-1]:
        if key not in entries:
            raise ConfigError(f"[fringes] requires key {key!r}")
    try:
        cfg.geometry = FringeGeometry(
            source_separation=_as_float("fringes", entries, "source_separation"),
            wavelength=_as_float("fringes", entries, "wavelength"),
            screen_distance=_as_float("fringes", entries, "screen_distance"),
            x_min=_as_float("fringes", entries, "x_min"),
            x_max=_as_float("fringes", entries, "x_max"),
            n_points=_as_int("fringes", entries, "n_points"),
        )
    except (DomainError, GeometryError) as exc:
        raise ConfigError(str(exc)) from None
    pattern = _as_choice("fringes", entries, "pattern", ("coherent", "incoherent"))
    if pattern is not None:
        cfg.fringe_pattern = pattern


def _parse_output(entries: dict, cfg: RunConfig) -> None:
    _reject_unknown("output", entries, _OUTPUT_KEYS)
    cfg.output_format = _as_choice("output", entries, "format", ("csv", "json"))
    if "path" in entries:
        cfg.output_path = entries["path"][0]


def parse_config(text: str) -> RunConfig:
    """Parse and validate a configuration document.

    Every present section is fully validated (types, ranges, and the
    per-experiment key whitelist); which sections must be present is up
    to the subcommand consuming the result.  Parse errors carry the
    line number; validation errors name the offending key and its
    constraint.
    """
    sections = _split_sections(text)
    cfg = RunConfig()
    if "experiment" in sections:
        _parse_experiment(sections["experiment"], cfg)
    if "simulation" in sections:
        _parse_simulation(sections["simulation"], cfg)
    if "stats" in sections:
        _parse_stats(sections["stats"], cfg)
    if "fringes" in sections:
        _parse_fringes(sections["fringes"], cfg)
    if "output" in sections:
        _parse_output(sections["output"], cfg)
    if cfg.stats.counts is not None and cfg.experiment is not None:
        expected = 3 if cfg.experiment == "photon" else 4
        if len(cfg.stats.counts) != expected:
            raise ConfigError(
                f"counts needs {expected} values for {cfg.experiment}, "
                f"got {len(cfg.stats.counts)}"
            )
    return cfg
