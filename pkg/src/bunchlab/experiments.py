"""Three bosons, three pairwise beam-splitter experiments.

Particles a, b, c start one per mode in |1,1,1>. Each experiment sends
one pair through a beam splitter while the third mode is left untouched.
An event such as "a reflected, b transmitted" is identified with both
bosons leaving on the reflected particle's side of the splitter.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import permutations

import numpy as np

from .fock import (
    FockBasis,
    FockOperator,
    FockState,
    Reflectivity,
    beam_splitter,
    lift_unitary,
)

PARTICLES = ("a", "b", "c")
PROJECTOR_TOL = 1e-10


@dataclass(frozen=True)
class EventSpec:
    """A pairing (port-1 particle, port-2 particle) and the reflected particle."""

    port1: str
    port2: str
    reflected: str

    def __post_init__(self):
        if self.port1 == self.port2:
            raise ValueError("pairing needs two distinct particles")
        if self.reflected not in (self.port1, self.port2):
            raise ValueError(
                f"reflected particle {self.reflected!r} is not in the pairing "
                f"({self.port1}, {self.port2})"
            )

    @property
    def pairing(self) -> tuple[str, str]:
        return (self.port1, self.port2)

    @property
    def port1_reflected(self) -> bool:
        return self.reflected == self.port1

    @property
    def label(self) -> str:
        # underline marked with a trailing underscore: a_b, b_c, ac_
        return "".join(p + ("_" if p == self.reflected else "") for p in self.pairing)


AB = EventSpec("a", "b", reflected="a")
BC = EventSpec("b", "c", reflected="b")
AC = EventSpec("a", "c", reflected="c")
CANONICAL_EVENTS = (AB, BC, AC)


@dataclass(frozen=True)
class ExperimentConfig:
    modes: dict = field(default_factory=lambda: {"a": 0, "b": 1, "c": 2})
    reflectivity: float = 0.5
    initial: FockState = FockState((1, 1, 1))

    def __post_init__(self):
        Reflectivity(self.reflectivity)
        if sorted(self.modes.values()) != list(range(len(self.modes))):
            raise ValueError(f"particle modes must be distinct and contiguous: {self.modes}")
        if len(self.initial) != len(self.modes) or any(n != 1 for n in self.initial):
            raise ValueError("initial state must hold exactly one boson per mode")

    @property
    def n_modes(self) -> int:
        return len(self.modes)

    @property
    def n_particles(self) -> int:
        return self.initial.n_particles

    def ports(self, event: EventSpec) -> tuple[int, int]:
        try:
            return self.modes[event.port1], self.modes[event.port2]
        except KeyError as exc:
            raise ValueError(f"particle {exc.args[0]!r} has no mode assigned") from None


def _heisenberg_projector(cfg: ExperimentConfig, ports, outcome) -> FockOperator:
    i, j = ports
    u = beam_splitter(cfg.reflectivity, (i, j), cfg.n_modes)
    phi = lift_unitary(u, cfg.n_particles)
    basis = FockBasis(cfg.n_modes, cfg.n_particles)
    keep = [s[i] == outcome[0] and s[j] == outcome[1] for s in basis]
    p_out = np.diag(np.asarray(keep, dtype=complex))
    m = phi.matrix.conj().T @ p_out @ phi.matrix
    return FockOperator(m, cfg.n_particles, cfg.n_modes)


def build_projector(event: EventSpec, cfg: ExperimentConfig | None = None) -> FockOperator:
    """Outcome projector pulled back through the pairing's beam splitter."""
    cfg = cfg or ExperimentConfig()
    outcome = (2, 0) if event.port1_reflected else (0, 2)
    return _heisenberg_projector(cfg, cfg.ports(event), outcome)


def _expectation(op: FockOperator, cfg: ExperimentConfig) -> float:
    k = FockBasis(cfg.n_modes, cfg.n_particles).index(cfg.initial)
    return float(op.matrix[k, k].real)


def quantum_event_probability(event: EventSpec, cfg: ExperimentConfig | None = None) -> float:
    cfg = cfg or ExperimentConfig()
    return _expectation(build_projector(event, cfg), cfg)


def quantum_outcome_probability(
    pairing: tuple[str, str], outcome: tuple[int, int], cfg: ExperimentConfig | None = None
) -> float:
    """Probability of seeing ``outcome`` on the pairing's two output modes."""
    cfg = cfg or ExperimentConfig()
    ports = (cfg.modes[pairing[0]], cfg.modes[pairing[1]])
    return _expectation(_heisenberg_projector(cfg, ports, outcome), cfg)


def quantum_exclusivity_sum(cfg: ExperimentConfig | None = None) -> float:
    cfg = cfg or ExperimentConfig()
    return sum(quantum_event_probability(e, cfg) for e in CANONICAL_EVENTS)


def _fro(a: np.ndarray) -> float:
    return float(np.linalg.norm(a, "fro"))


@dataclass
class ProjectorReport:
    labels: list[str]
    probabilities: list[float]
    ranks: list[int]
    traces: list[float]
    idempotence_residuals: list[float]
    hermiticity_residuals: list[float]
    product_norms: dict[tuple[str, str], float]
    commutator_norms: dict[tuple[str, str], float]
    reflectivity: float
    tolerance: float = PROJECTOR_TOL

    def to_dict(self) -> dict:
        return {
            "events": self.labels,
            "reflectivity": self.reflectivity,
            "probabilities": dict(zip(self.labels, self.probabilities)),
            "ranks": dict(zip(self.labels, self.ranks)),
            "traces": dict(zip(self.labels, self.traces)),
            "idempotence_residuals": dict(zip(self.labels, self.idempotence_residuals)),
            "hermiticity_residuals": dict(zip(self.labels, self.hermiticity_residuals)),
            "product_norms": [
                {"first": i, "second": j, "norm": v} for (i, j), v in self.product_norms.items()
            ],
            "commutator_norms": [
                {"first": i, "second": j, "norm": v}
                for (i, j), v in self.commutator_norms.items()
            ],
            "tolerances": {"projector": self.tolerance},
        }


def projector_report(cfg: ExperimentConfig | None = None) -> ProjectorReport:
    cfg = cfg or ExperimentConfig()
    labels = [e.label for e in CANONICAL_EVENTS]
    mats = {e.label: build_projector(e, cfg).matrix for e in CANONICAL_EVENTS}
    traces = [float(np.trace(mats[k]).real) for k in labels]
    products, commutators = {}, {}
    for i, j in permutations(labels, 2):
        pi, pj = mats[i], mats[j]
        products[(i, j)] = _fro(pi @ pj)
        commutators[(i, j)] = _fro(pi @ pj - pj @ pi)
    return ProjectorReport(
        labels=labels,
        probabilities=[quantum_event_probability(e, cfg) for e in CANONICAL_EVENTS],
        ranks=[int(np.linalg.matrix_rank(mats[k], tol=1e-8)) for k in labels],
        traces=traces,
        idempotence_residuals=[_fro(mats[k] @ mats[k] - mats[k]) for k in labels],
        hermiticity_residuals=[_fro(mats[k] - mats[k].conj().T) for k in labels],
        product_norms=products,
        commutator_norms=commutators,
        reflectivity=cfg.reflectivity,
    )
