"""Game engine, referee, experiment runners and serialization.

A game is m rounds between an adversary and a tracking algorithm: each round
the adversary sees only its persistent state, fresh randomness and the last
estimate, emits one unit update, and the algorithm answers with the next
estimate.  An exact referee (independent of the algorithm) records the true
moment, density and correctness of every round.

Transcripts serialize to CSV (one row per round) and a flat JSON summary;
floats are written with 17 significant digits and files use LF endings, so a
fixed config reproduces byte-identical outputs (wall time aside).
"""

from __future__ import annotations

import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from typing import Optional, Sequence

import numpy as np

from .adversaries import (
    AttackerParams,
    EstimateHashAdversary,
    MemorylessAttacker,
    ObliviousReplayer,
    OneBitAttacker,
    TauStreamAdversary,
    ToggleAdversary,
    uniform_stream,
)
from .core import (
    ConfigError,
    FrequencyVector,
    ProtocolError,
    Update,
    ceil_power,
    flip_number,
    is_correct_estimate,
)
from .kernels import ITEM_MAX
from .net import EstimateNet
from .robust import AmplifiedOblivious, ExactTracker, RobustSketchTracker
from .seeding import FreshRand, child_seed

ALGORITHMS = ("tracker", "robust", "oblivious-amplified")
ADVERSARIES = ("toggle", "esthash", "onebit", "memoryless", "taustream", "oblivious")

SUMMARY_KEYS = (
    "success",
    "flip_number",
    "flip_number_estimates",
    "min_density_after_burnin",
    "type1_count",
    "distinct_items",
    "m",
    "n",
    "epsilon",
    "c",
    "k",
    "seed",
    "elapsed_ms",
)

METRIC_COLUMNS = (
    "m",
    "trial",
    "flip_number",
    "flip_number_estimates",
    "min_density_after_burnin",
    "type1_count",
    "distinct_items",
    "success",
)


@dataclass(frozen=True)
class GameConfig:
    """Full parameterization of one game; round-trips through a flat
    key=value file (see :func:`write_config` / :func:`read_config`)."""

    m: int
    n: int
    epsilon: float
    delta: float = 0.05
    algorithm: str = "tracker"
    adversary: str = "toggle"
    c: Optional[float] = None
    k: int = 0
    alpha: Optional[float] = None
    p: int = 2
    master_seed: int = 0
    tau: Optional[int] = None
    policy: str = "round_robin"

    def resolved_alpha(self) -> float:
        """Range ceiling of the tracked moment; defaults to m^p."""
        if self.alpha is not None:
            return float(self.alpha)
        return float(self.m) ** self.p

    def validate(self) -> None:
        if self.m < 1:
            raise ConfigError(f"m must be >= 1, got {self.m}")
        if self.n < 1:
            raise ConfigError(f"n must be >= 1, got {self.n}")
        if not 0 < self.epsilon <= 1:
            raise ConfigError(f"epsilon must be in (0, 1], got {self.epsilon}")
        if self.algorithm not in ALGORITHMS:
            raise ConfigError(f"unknown algorithm {self.algorithm!r}")
        if self.adversary not in ADVERSARIES:
            raise ConfigError(f"unknown adversary {self.adversary!r}")
        if self.p not in (1, 2):
            raise ConfigError(f"moment exponent p must be 1 or 2, got {self.p}")
        if self.k < 0:
            raise ConfigError(f"k must be >= 0, got {self.k}")
        if self.adversary in ("onebit", "memoryless") and self.c is None:
            raise ConfigError(f"adversary {self.adversary!r} needs the exponent c")
        if self.algorithm in ("robust", "oblivious-amplified"):
            if self.p != 2:
                raise ConfigError("sketch algorithms track F2 only (p=2)")
            if self.n > ITEM_MAX:
                raise ConfigError(
                    f"sketch algorithms need n <= {ITEM_MAX}, got {self.n}"
                )
            if not 0 < self.delta <= 0.1:
                raise ConfigError(f"delta must be in (0, 1/10], got {self.delta}")
        if self.resolved_alpha() < 2:
            raise ConfigError("alpha must be >= 2")


@dataclass
class GameTranscript:
    """Per-round record plus the referee's summary of one finished game."""

    config: GameConfig
    items: np.ndarray
    deltas: np.ndarray
    true_values: np.ndarray
    estimates: np.ndarray
    densities: np.ndarray
    correct: np.ndarray
    states: list[str]
    success: bool = field(init=False)
    flip_number: int = field(init=False)
    flip_number_estimates: int = field(init=False)
    min_density_after_burnin: Optional[int] = field(init=False)
    type1_count: int = field(init=False)
    distinct_items: int = field(init=False)
    elapsed_ms: int = 0

    def __post_init__(self):
        cfg = self.config
        self.success = bool(self.correct.all())
        self.flip_number = flip_number(self.true_values, cfg.epsilon)
        self.flip_number_estimates = flip_number(self.estimates, cfg.epsilon)
        burnin = ceil_power(cfg.m, cfg.c) if cfg.c is not None else 0
        tail = self.densities[burnin:]
        self.min_density_after_burnin = int(tail.min()) if tail.size else None
        self.type1_count = int(((self.items >= 2) & (self.deltas == 1)).sum())
        self.distinct_items = int(np.unique(self.items).size)

    def summary(self) -> dict:
        cfg = self.config
        return {
            "success": self.success,
            "flip_number": self.flip_number,
            "flip_number_estimates": self.flip_number_estimates,
            "min_density_after_burnin": self.min_density_after_burnin,
            "type1_count": self.type1_count,
            "distinct_items": self.distinct_items,
            "m": cfg.m,
            "n": cfg.n,
            "epsilon": cfg.epsilon,
            "c": cfg.c,
            "k": cfg.k,
            "seed": cfg.master_seed,
            "elapsed_ms": self.elapsed_ms,
        }


def build_adversary(config: GameConfig, adv_seed: int):
    kind = config.adversary
    if kind == "toggle":
        return ToggleAdversary(config.n)
    if kind == "esthash":
        return EstimateHashAdversary(config.n)
    if kind in ("onebit", "memoryless"):
        params = AttackerParams(config.m, config.c, config.epsilon, config.n)
        return OneBitAttacker(params) if kind == "onebit" else MemorylessAttacker(params)
    if kind == "taustream":
        tau = config.tau if config.tau is not None else 2
        first = uniform_stream(config.n, 1, child_seed(adv_seed, "first"))[0]
        streams = [
            uniform_stream(config.n, config.m - 1, child_seed(adv_seed, f"stream-{i}"))
            for i in range(tau)
        ]
        return TauStreamAdversary(first, streams, policy=config.policy)
    if kind == "oblivious":
        return ObliviousReplayer(
            uniform_stream(config.n, config.m, child_seed(adv_seed, "stream"))
        )
    raise ConfigError(f"unknown adversary {kind!r}")


def build_algorithm(config: GameConfig, algo_seed: int):
    alpha = config.resolved_alpha()
    if config.algorithm == "tracker":
        return ExactTracker(config.n, EstimateNet(alpha, config.epsilon), config.p)
    if config.algorithm == "robust":
        if config.adversary == "taustream" and config.tau is not None:
            return RobustSketchTracker(
                config.tau, config.epsilon, config.delta, config.m, alpha, algo_seed
            )
        return RobustSketchTracker.for_bounded_memory(
            config.k, config.epsilon, config.delta, config.m, alpha, algo_seed
        )
    if config.algorithm == "oblivious-amplified":
        return AmplifiedOblivious(config.epsilon, config.delta, algo_seed)
    raise ConfigError(f"unknown algorithm {config.algorithm!r}")


def _state_token(state) -> str:
    if state is None:
        return ""
    return str(state)


def run_game(config: GameConfig, adversary=None, algorithm=None) -> GameTranscript:
    """Play one full game and return its transcript.

    Round j: the adversary maps (last estimate, persistent state, fresh
    randomness keyed by round j) to an update; the algorithm consumes it and
    emits estimate y_j, which overwrites the adversary's estimate memory.
    Round 1 sees no estimate.  The referee tracks the exact moment and
    density independently of the algorithm under test.

    Custom `adversary` / `algorithm` objects (anything with the same
    next/step surface) override the ones named in the config.
    """
    config.validate()
    algo_seed = child_seed(config.master_seed, "algorithm")
    adv_seed = child_seed(config.master_seed, "adversary")
    if adversary is None:
        adversary = build_adversary(config, adv_seed)
    if algorithm is None:
        algorithm = build_algorithm(config, algo_seed)

    m = config.m
    eps = config.epsilon
    p = config.p
    items = np.empty(m, dtype=np.int64)
    deltas = np.empty(m, dtype=np.int8)
    truths = np.empty(m, dtype=np.float64)
    estimates = np.empty(m, dtype=np.float64)
    densities = np.empty(m, dtype=np.int64)
    correct = np.empty(m, dtype=bool)
    states: list[str] = []

    freqs: dict[int, int] = {}
    moment = 0
    one_plus = 1.0 + eps
    estimate: Optional[float] = None
    state = adversary.initial_state
    rand = FreshRand(adv_seed, 1)
    adv_next = adversary.next
    algo_step = algorithm.step

    t0 = time.perf_counter()
    for j in range(m):
        rand.reset(j + 1)
        try:
            u, state = adv_next(estimate, state, rand)
            item, delta = u
            if not (1 <= item <= config.n) or delta not in (-1, 1):
                raise ProtocolError(f"illegal update ({item}, {delta})")
            estimate = algo_step(u)
        except ProtocolError as exc:
            raise ProtocolError(f"game aborted in round {j + 1}: {exc}") from exc
        # exact referee accounting
        old = freqs.get(item, 0)
        new = old + delta
        if new == 0:
            del freqs[item]
        else:
            freqs[item] = new
        if p == 2:
            moment += new * new - old * old
        else:
            moment += abs(new) - abs(old)
        truth = float(moment)
        items[j] = item
        deltas[j] = delta
        truths[j] = truth
        estimates[j] = estimate
        densities[j] = len(freqs)
        correct[j] = (
            estimate == 0.0 if moment == 0 else truth <= estimate < one_plus * truth
        )
        states.append(_state_token(state))
    elapsed_ms = int((time.perf_counter() - t0) * 1000)

    t = GameTranscript(
        config, items, deltas, truths, estimates, densities, correct, states
    )
    t.elapsed_ms = elapsed_ms
    return t


def verify_transcript(t: GameTranscript) -> bool:
    """Independent replay: recompute truths, densities and the success flag
    from the raw update sequence alone (full per-round recomputation; meant
    for small games and tests)."""
    vec = FrequencyVector(t.config.n)
    eps = t.config.epsilon
    for j in range(t.config.m):
        vec.apply(Update(int(t.items[j]), int(t.deltas[j])))
        truth = vec.moment(t.config.p)
        if truth != t.true_values[j] or vec.density != t.densities[j]:
            return False
        if is_correct_estimate(truth, float(t.estimates[j]), eps) != bool(t.correct[j]):
            return False
    return bool(t.correct.all()) == t.success


def attack_metrics(t: GameTranscript, c: float, epsilon: float) -> dict:
    """Stream statistics of a finished game at explicit (c, epsilon):
    flip number of the true values, min density past the m^c burn-in, and
    the count of density-building insertions (items >= 2 with delta +1)."""
    burnin = ceil_power(t.config.m, c)
    tail = t.densities[burnin:]
    return {
        "flip_number": flip_number(t.true_values, epsilon),
        "min_density_after_burnin": int(tail.min()) if tail.size else None,
        "type1_count": int(((t.items >= 2) & (t.deltas == 1)).sum()),
    }


def _trial_config(config: GameConfig, trial: int) -> GameConfig:
    return replace(config, master_seed=child_seed(config.master_seed, f"trial-{trial}"))


def _trial_metrics(args) -> dict:
    config, trial = args
    t = run_game(_trial_config(config, trial))
    row = {"m": config.m, "trial": trial}
    s = t.summary()
    for key in METRIC_COLUMNS[2:]:
        row[key] = s[key]
    return row


def run_trials(
    config: GameConfig, trials: int, workers: Optional[int] = None
) -> list[dict]:
    """Independent seeded repetitions of one config; rows ordered by trial.

    Trials run across processes (games themselves stay sequential); results
    merge by trial index so the output is independent of completion order.
    """
    jobs = [(config, i) for i in range(trials)]
    if workers is None:
        workers = min(os.cpu_count() or 1, trials)
    if workers <= 1 or trials <= 1:
        return [_trial_metrics(j) for j in jobs]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(_trial_metrics, jobs, chunksize=max(1, trials // (4 * workers))))


def _fit_exponent(m_values: Sequence[int], medians: Sequence[float]):
    logs_m = np.log(np.asarray(m_values, dtype=float))
    logs_v = np.log(np.asarray(medians, dtype=float))
    slope, intercept = np.polyfit(logs_m, logs_v, 1)
    residuals = logs_v - (slope * logs_m + intercept)
    return float(slope), [float(r) for r in residuals]


def scaling_sweep(
    base_config: GameConfig,
    m_values: Sequence[int],
    trials: int,
    workers: Optional[int] = None,
) -> dict:
    """Scaling experiment: for each m run `trials` games, then least-squares
    fit log(median flip number) and log(median min density) against log m.

    The universe grows with m so that n > 10 * m^(2c) holds at every point.
    """
    if len(m_values) < 3:
        raise ConfigError(f"sweep needs >= 3 stream lengths, got {len(m_values)}")
    if base_config.c is None:
        raise ConfigError("sweep needs the attacker exponent c")
    rows: list[dict] = []
    med_flip: list[float] = []
    med_density: list[float] = []
    for m in m_values:
        needed_n = int(10.0 * float(m) ** (2.0 * base_config.c)) + 1
        cfg = replace(base_config, m=int(m), n=max(base_config.n, needed_n))
        trial_rows = run_trials(cfg, trials, workers=workers)
        rows.extend(trial_rows)
        med_flip.append(float(np.median([r["flip_number"] for r in trial_rows])))
        med_density.append(
            float(np.median([r["min_density_after_burnin"] for r in trial_rows]))
        )
    flip_exp, flip_res = _fit_exponent(m_values, med_flip)
    dens_exp, dens_res = _fit_exponent(m_values, med_density)
    return {
        "m_values": [int(m) for m in m_values],
        "trials": trials,
        "median_flip_number": med_flip,
        "median_min_density": med_density,
        "flip_exponent": flip_exp,
        "flip_residuals": flip_res,
        "density_exponent": dens_exp,
        "density_residuals": dens_res,
        "per_trial": rows,
    }


# ---------------------------------------------------------------------------
# serialization: 17-significant-digit floats, LF endings, stable key order


def _fmt_float(x: float) -> str:
    return format(float(x), ".17g")


def render_json(value, indent: int = 0) -> str:
    """Deterministic JSON with .17g floats and insertion-ordered keys."""
    pad = "  " * indent
    if isinstance(value, bool):
        return "true" if value else "false"
    if value is None:
        return "null"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return _fmt_float(value)
    if isinstance(value, str):
        escaped = value.replace("\\", "\\\\").replace('"', '\\"')
        return f'"{escaped}"'
    if isinstance(value, dict):
        if not value:
            return "{}"
        inner = ",\n".join(
            f'{pad}  "{k}": {render_json(v, indent + 1)}' for k, v in value.items()
        )
        return "{\n" + inner + "\n" + pad + "}"
    if isinstance(value, (list, tuple)):
        if not value:
            return "[]"
        inner = ", ".join(render_json(v, indent) for v in value)
        return "[" + inner + "]"
    raise TypeError(f"cannot serialize {type(value)!r}")


def summary_json(t: GameTranscript) -> str:
    return render_json(t.summary()) + "\n"


def transcript_csv(t: GameTranscript) -> str:
    lines = ["round,item,delta,true_value,estimate,density,correct,persistent_state"]
    for j in range(t.config.m):
        lines.append(
            f"{j + 1},{t.items[j]},{t.deltas[j]},{_fmt_float(t.true_values[j])},"
            f"{_fmt_float(t.estimates[j])},{t.densities[j]},"
            f"{'true' if t.correct[j] else 'false'},{t.states[j]}"
        )
    return "\n".join(lines) + "\n"


def write_transcript(t: GameTranscript, out_prefix: str) -> tuple[str, str]:
    """Write <prefix>.csv and <prefix>.json; returns both paths."""
    csv_path = out_prefix + ".csv"
    json_path = out_prefix + ".json"
    with open(csv_path, "w", encoding="utf-8", newline="\n") as f:
        f.write(transcript_csv(t))
    with open(json_path, "w", encoding="utf-8", newline="\n") as f:
        f.write(summary_json(t))
    return csv_path, json_path


def metrics_csv(rows: Sequence[dict]) -> str:
    lines = [",".join(METRIC_COLUMNS)]
    for row in rows:
        cells = []
        for col in METRIC_COLUMNS:
            v = row[col]
            if isinstance(v, bool):
                cells.append("true" if v else "false")
            elif v is None:
                cells.append("")
            else:
                cells.append(str(v))
        lines.append(",".join(cells))
    return "\n".join(lines) + "\n"


# config files: flat key=value lines, '#' comments

_CONFIG_FIELDS = {
    "m": int,
    "n": int,
    "eps": float,
    "delta": float,
    "alg": str,
    "adv": str,
    "c": float,
    "k": int,
    "alpha": float,
    "p": int,
    "seed": int,
    "tau": int,
    "policy": str,
}

_FIELD_TO_ATTR = {
    "eps": "epsilon",
    "alg": "algorithm",
    "adv": "adversary",
    "seed": "master_seed",
}


def write_config(config: GameConfig, path: str) -> None:
    lines = []
    for key, conv in _CONFIG_FIELDS.items():
        attr = _FIELD_TO_ATTR.get(key, key)
        value = getattr(config, attr)
        if value is None:
            continue
        if conv is float:
            lines.append(f"{key}={_fmt_float(value)}")
        else:
            lines.append(f"{key}={value}")
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        f.write("\n".join(lines) + "\n")


def read_config(path: str) -> GameConfig:
    values: dict[str, object] = {}
    with open(path, "r", encoding="utf-8") as f:
        for raw in f:
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ConfigError(f"bad config line {raw.strip()!r}")
            key, _, text = line.partition("=")
            key = key.strip()
            if key not in _CONFIG_FIELDS:
                raise ConfigError(f"unknown config key {key!r}")
            values[_FIELD_TO_ATTR.get(key, key)] = _CONFIG_FIELDS[key](text.strip())
    if not {"m", "n", "epsilon"} <= values.keys():
        raise ConfigError("config needs at least m, n and eps")
    return GameConfig(**values)  # type: ignore[arg-type]
