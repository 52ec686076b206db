"""Noncontextual hidden-variable model of pairwise bunching.

Each particle carries a value lambda in (0, 1) drawn once and
independently. A beam splitter fed by particles with values l1 (port 1)
and l2 (port 2) sends both out of mode 1 when ``l1 + delta > l2`` and out
of mode 2 otherwise. ``delta = 0`` is the unbiased model.

Monte Carlo sampling is split into fixed-size chunks. Chunk ``k`` of
stream ``s`` draws from ``Philox(SeedSequence(seed, spawn_key=(s, k)))``
and only integer counts are reduced, so a seeded estimate is bit-identical
for any worker count or completion order.
"""

from __future__ import annotations

import enum
import math
import zlib
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from itertools import permutations, product
from typing import Iterable, Sequence

import numpy as np

from .experiments import CANONICAL_EVENTS, PARTICLES, EventSpec

CHUNK_SIZE = 1 << 16
_INDEX = {p: i for i, p in enumerate(PARTICLES)}
PATTERNS = tuple(product((True, False), repeat=3))


class OutputMode(enum.Enum):
    MODE1 = (2, 0)
    MODE2 = (0, 2)


@dataclass(frozen=True)
class HiddenAssignment:
    a: float
    b: float
    c: float

    def __post_init__(self):
        for p in PARTICLES:
            v = getattr(self, p)
            if not 0.0 < v < 1.0:
                raise ValueError(f"lambda_{p} = {v} is outside (0, 1)")

    def __getitem__(self, particle: str) -> float:
        if particle not in _INDEX:
            raise KeyError(particle)
        return getattr(self, particle)

    def as_array(self) -> np.ndarray:
        return np.array([self.a, self.b, self.c])


def check_delta(delta: float) -> float:
    delta = float(delta)
    if not 0.0 <= delta <= 1.0:
        raise ValueError(f"delta must lie in [0, 1], got {delta}")
    return delta


def bs_outcome(lambda_port1: float, lambda_port2: float, delta: float = 0.0) -> OutputMode:
    """Deterministic, memoryless splitter. Ties go to mode 2."""
    if lambda_port1 + delta > lambda_port2:
        return OutputMode.MODE1
    return OutputMode.MODE2


def _target_mode(event: EventSpec) -> OutputMode:
    return OutputMode.MODE1 if event.port1_reflected else OutputMode.MODE2


def event_indicator(h: HiddenAssignment, event: EventSpec, delta: float = 0.0) -> bool:
    mode = bs_outcome(h[event.port1], h[event.port2], delta)
    return mode is _target_mode(event)


def event_pattern(h: HiddenAssignment, delta: float = 0.0) -> tuple[bool, bool, bool]:
    """Truth values of the three canonical events for one assignment."""
    return tuple(event_indicator(h, e, delta) for e in CANONICAL_EVENTS)


def _indicators(lam: np.ndarray, event: EventSpec, delta: float) -> np.ndarray:
    mode1 = lam[:, _INDEX[event.port1]] + delta > lam[:, _INDEX[event.port2]]
    return mode1 if event.port1_reflected else ~mode1


# -- sampling ---------------------------------------------------------------


def _generator(seed: int, stream: int, chunk: int) -> np.random.Generator:
    ss = np.random.SeedSequence(seed, spawn_key=(stream, chunk))
    return np.random.Generator(np.random.Philox(ss))


def _open_uniform(rng: np.random.Generator, shape) -> np.ndarray:
    # (k + 1/2) / 2^52 stays strictly inside (0, 1) in double precision
    k = rng.integers(0, 1 << 52, size=shape, dtype=np.int64)
    return (k + 0.5) * 2.0**-52


def stream_id(name: str) -> int:
    return zlib.crc32(name.encode())


def sample_lambdas(n: int, seed: int, stream: int = 0, chunk: int = 0) -> np.ndarray:
    """``n`` hidden assignments as an (n, 3) array with columns a, b, c."""
    return _open_uniform(_generator(seed, stream, chunk), (n, 3))


def sample_assignment(seed: int, stream: int = 0) -> HiddenAssignment:
    a, b, c = sample_lambdas(1, seed, stream)[0]
    return HiddenAssignment(float(a), float(b), float(c))


def _chunks(n: int) -> list[tuple[int, int]]:
    if n < 1:
        raise ValueError(f"sample count must be positive, got {n}")
    full, rest = divmod(n, CHUNK_SIZE)
    sizes = [CHUNK_SIZE] * full + ([rest] if rest else [])
    return list(enumerate(sizes))


def _reduce(fn, n: int, workers: int) -> list:
    chunks = _chunks(n)
    if workers <= 1 or len(chunks) == 1:
        return [fn(k, size) for k, size in chunks]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(lambda ks: fn(*ks), chunks))


# -- analytic ---------------------------------------------------------------


def p_plus(delta: float) -> float:
    """P(l1 + delta > l2) for independent uniforms: 1 - (1 - delta)^2 / 2."""
    delta = check_delta(delta)
    return 0.5 + delta - delta * delta / 2


def p_minus(delta: float) -> float:
    delta = check_delta(delta)
    return 0.5 - delta + delta * delta / 2


def analytic_event_prob(event: EventSpec, delta: float = 0.0) -> float:
    return p_plus(delta) if _target_mode(event) is OutputMode.MODE1 else p_minus(delta)


def analytic_sum(delta: float = 0.0) -> float:
    return sum(analytic_event_prob(e, delta) for e in CANONICAL_EVENTS)


# -- Monte Carlo ------------------------------------------------------------


@dataclass(frozen=True)
class McEstimate:
    estimate: float
    stderr: float
    n: int
    hits: int


def monte_carlo_event_prob(
    event: EventSpec,
    delta: float = 0.0,
    n: int = 1_000_000,
    seed: int = 42,
    workers: int = 1,
) -> McEstimate:
    delta = check_delta(delta)
    stream = stream_id(event.label)

    def count(chunk, size):
        lam = sample_lambdas(size, seed, stream, chunk)
        return int(np.count_nonzero(_indicators(lam, event, delta)))

    hits = sum(_reduce(count, n, workers))
    p = hits / n
    return McEstimate(p, math.sqrt(p * (1 - p) / n), n, hits)


@dataclass(frozen=True)
class PatternDistribution:
    """Probabilities of the 8 joint truth patterns (a_b, b_c, ac_)."""

    probabilities: dict[tuple[bool, bool, bool], float]
    method: str
    n: int | None = None

    def __getitem__(self, pattern) -> float:
        return self.probabilities[tuple(pattern)]

    def marginal(self, index: int) -> float:
        return sum(p for pat, p in self.probabilities.items() if pat[index])

    def count_distribution(self) -> dict[int, float]:
        out = {k: 0.0 for k in range(4)}
        for pat, p in self.probabilities.items():
            out[sum(pat)] += p
        return out

    def expected_true(self) -> float:
        return sum(k * p for k, p in self.count_distribution().items())


def _exact_orderings() -> PatternDistribution:
    # only the ordering of the three values matters when delta = 0
    probs = dict.fromkeys(PATTERNS, 0.0)
    for ranks in permutations(range(3)):
        h = HiddenAssignment(*((r + 1) / 4 for r in ranks))
        probs[event_pattern(h, 0.0)] += 1 / 6
    return PatternDistribution(probs, "exact")


def joint_pattern_distribution(
    delta: float = 0.0,
    n: int | None = None,
    seed: int = 42,
    workers: int = 1,
) -> PatternDistribution:
    """Exact ordering enumeration when ``n`` is None (delta = 0 only), else MC."""
    delta = check_delta(delta)
    if n is None:
        if delta != 0.0:
            raise ValueError("exact joint distribution is only available at delta = 0")
        return _exact_orderings()

    stream = stream_id("joint")
    weights = np.array([4, 2, 1])

    def count(chunk, size):
        lam = sample_lambdas(size, seed, stream, chunk)
        bits = np.stack([_indicators(lam, e, delta) for e in CANONICAL_EVENTS], axis=1)
        # pattern code: True -> 0 so codes follow PATTERNS order
        codes = (~bits).astype(np.int64) @ weights
        return np.bincount(codes, minlength=8)

    counts = np.sum(_reduce(count, n, workers), axis=0)
    probs = {pat: int(c) / n for pat, c in zip(PATTERNS, counts)}
    return PatternDistribution(probs, "monte-carlo", n)


@dataclass(frozen=True)
class SweepRow:
    delta: float
    analytic_sum: float
    mc_sum: float
    mc_stderr: float
    n_samples: int
    seed: int


def sweep_sum(
    deltas: Iterable[float], n: int = 1_000_000, seed: int = 42, workers: int = 1
) -> list[SweepRow]:
    deltas = [check_delta(d) for d in deltas]
    if not deltas:
        raise ValueError("delta grid is empty")
    rows = []
    for d in deltas:
        ests = [monte_carlo_event_prob(e, d, n, seed, workers) for e in CANONICAL_EVENTS]
        rows.append(
            SweepRow(
                delta=d,
                analytic_sum=analytic_sum(d),
                mc_sum=sum(e.estimate for e in ests),
                mc_stderr=math.sqrt(sum(e.stderr**2 for e in ests)),
                n_samples=n,
                seed=seed,
            )
        )
    return rows


SWEEP_HEADER = ("delta", "analytic_sum", "mc_sum", "mc_stderr", "n_samples", "seed")


def fmt(x: float) -> str:
    return f"{x:.12g}"


def sweep_csv(rows: Sequence[SweepRow]) -> str:
    lines = [",".join(SWEEP_HEADER)]
    for r in rows:
        lines.append(
            ",".join(
                [fmt(r.delta), fmt(r.analytic_sum), fmt(r.mc_sum), fmt(r.mc_stderr),
                 str(r.n_samples), str(r.seed)]
            )
        )
    return "\n".join(lines) + "\n"
