"""Bosonic Fock space with a fixed particle number.

Basis enumeration, matrix permanents and the lift of an m-mode unitary to
the symmetric N-particle space, plus the two-mode beam splitter.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

UNITARITY_TOL = 1e-10
RYSER_THRESHOLD = 5


@dataclass(frozen=True, order=True)
class FockState:
    """Occupation numbers of N bosons over m modes."""

    occupations: tuple[int, ...]

    def __post_init__(self):
        occ = tuple(int(n) for n in self.occupations)
        if any(n < 0 for n in occ):
            raise ValueError(f"negative occupation in {occ}")
        object.__setattr__(self, "occupations", occ)

    @property
    def n_modes(self) -> int:
        return len(self.occupations)

    @property
    def n_particles(self) -> int:
        return sum(self.occupations)

    def __iter__(self):
        return iter(self.occupations)

    def __getitem__(self, mode):
        return self.occupations[mode]

    def __len__(self):
        return len(self.occupations)


@dataclass(frozen=True)
class Reflectivity:
    r: float

    def __post_init__(self):
        r = float(self.r)
        if not 0.0 <= r <= 1.0:
            raise ValueError(f"reflectivity must lie in [0, 1], got {r}")
        object.__setattr__(self, "r", r)

    @property
    def t(self) -> float:
        return 1.0 - self.r


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=complex)
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class ModeUnitary:
    """m x m unitary acting on the mode creation operators."""

    matrix: np.ndarray = field(repr=False)

    def __post_init__(self):
        u = _frozen(self.matrix)
        if u.ndim != 2 or u.shape[0] != u.shape[1]:
            raise ValueError(f"mode unitary must be square, got shape {u.shape}")
        err = np.max(np.abs(u.conj().T @ u - np.eye(u.shape[0]))) if u.size else 0.0
        if err > UNITARITY_TOL:
            raise ValueError(f"matrix is not unitary (max |U^H U - I| = {err:.3e})")
        object.__setattr__(self, "matrix", u)

    @property
    def n_modes(self) -> int:
        return self.matrix.shape[0]

    def __matmul__(self, other: ModeUnitary) -> ModeUnitary:
        return ModeUnitary(self.matrix @ other.matrix)


@dataclass(frozen=True)
class FockOperator:
    """Dense operator on the N-boson, m-mode Fock space."""

    matrix: np.ndarray = field(repr=False)
    n_particles: int
    n_modes: int

    def __post_init__(self):
        a = _frozen(self.matrix)
        dim = fock_dimension(self.n_modes, self.n_particles)
        if a.shape != (dim, dim):
            raise ValueError(
                f"operator shape {a.shape} does not match Fock dimension {dim} "
                f"for m={self.n_modes}, N={self.n_particles}"
            )
        object.__setattr__(self, "matrix", a)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def dagger(self) -> FockOperator:
        return FockOperator(self.matrix.conj().T, self.n_particles, self.n_modes)

    def __matmul__(self, other: FockOperator) -> FockOperator:
        if (other.n_particles, other.n_modes) != (self.n_particles, self.n_modes):
            raise ValueError("operators act on different Fock spaces")
        return FockOperator(self.matrix @ other.matrix, self.n_particles, self.n_modes)


def fock_dimension(m: int, n: int) -> int:
    if m == 0:
        return 1 if n == 0 else 0
    return math.comb(n + m - 1, n)


def _compositions(m: int, n: int):
    if m == 1:
        yield (n,)
        return
    for first in range(n, -1, -1):
        for rest in _compositions(m - 1, n - first):
            yield (first, *rest)


def enumerate_basis(m: int, n: int) -> list[FockState]:
    """All occupation vectors of ``n`` bosons in ``m`` modes.

    Ordered reverse-lexicographically, e.g. ``(2,0), (1,1), (0,2)``.
    """
    if m < 0 or n < 0:
        raise ValueError(f"need m >= 0 and N >= 0, got m={m}, N={n}")
    if m == 0:
        if n > 0:
            raise ValueError("cannot place particles in zero modes")
        return [FockState(())]
    return [FockState(occ) for occ in _compositions(m, n)]


class FockBasis:
    """Enumerated basis with index lookup."""

    def __init__(self, m: int, n: int):
        self.n_modes = m
        self.n_particles = n
        self.states = enumerate_basis(m, n)
        self._index = {s.occupations: i for i, s in enumerate(self.states)}

    def __len__(self):
        return len(self.states)

    def __iter__(self):
        return iter(self.states)

    def __getitem__(self, i: int) -> FockState:
        return self.states[i]

    def index(self, state: FockState | Sequence[int]) -> int:
        key = tuple(state)
        try:
            return self._index[key]
        except KeyError:
            raise ValueError(
                f"{key} is not in the basis for m={self.n_modes}, N={self.n_particles}"
            ) from None


def permanent_naive(a: np.ndarray) -> complex:
    """Sum over all permutations; O(n * n!)."""
    a = np.asarray(a, dtype=complex)
    _check_square(a)
    n = a.shape[0]
    rows = range(n)
    total = 0j
    for sigma in itertools.permutations(range(n)):
        prod = 1 + 0j
        for i in rows:
            prod *= a[i, sigma[i]]
        total += prod
    return complex(total)


def permanent_ryser(a: np.ndarray) -> complex:
    """Ryser's inclusion-exclusion formula walked in Gray-code order.

    Each step toggles a single column in or out of the subset, so row sums
    are updated in O(n) and the whole evaluation costs O(n * 2^n).
    """
    a = np.asarray(a, dtype=complex)
    _check_square(a)
    n = a.shape[0]
    if n == 0:
        return 1 + 0j
    row_sums = np.zeros(n, dtype=complex)
    in_subset = [False] * n
    total = 0j
    # (-1)^(n - |S|) weighting; |S| tracked incrementally
    size = 0
    for k in range(1, 1 << n):
        j = (k & -k).bit_length() - 1
        if in_subset[j]:
            row_sums -= a[:, j]
            size -= 1
        else:
            row_sums += a[:, j]
            size += 1
        in_subset[j] = not in_subset[j]
        term = np.prod(row_sums)
        total += -term if (n - size) % 2 else term
    return complex(total)


def permanent(a: np.ndarray) -> complex:
    a = np.asarray(a, dtype=complex)
    _check_square(a)
    if a.shape[0] >= RYSER_THRESHOLD:
        return permanent_ryser(a)
    return permanent_naive(a)


def _check_square(a: np.ndarray) -> None:
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"permanent needs a square matrix, got shape {a.shape}")


def beam_splitter(r: float | Reflectivity, ports: tuple[int, int], m: int) -> ModeUnitary:
    """Two-mode beam splitter embedded in ``m`` modes.

    The (i, j) block is ``[[sqrt(t), i sqrt(r)], [i sqrt(r), sqrt(t)]]``;
    every other mode is left alone.
    """
    refl = r if isinstance(r, Reflectivity) else Reflectivity(r)
    i, j = ports
    if i == j:
        raise ValueError("beam splitter ports must differ")
    for p in (i, j):
        if not 0 <= p < m:
            raise ValueError(f"port {p} out of range for {m} modes")
    u = np.eye(m, dtype=complex)
    ct = math.sqrt(refl.t)
    sr = 1j * math.sqrt(refl.r)
    u[i, i] = ct
    u[j, j] = ct
    u[i, j] = sr
    u[j, i] = sr
    return ModeUnitary(u)


def _as_unitary(u) -> ModeUnitary:
    return u if isinstance(u, ModeUnitary) else ModeUnitary(u)


def _norm(state: FockState) -> float:
    return math.prod(math.factorial(k) for k in state.occupations)


def _submatrix(u: np.ndarray, inp: FockState, out: FockState) -> np.ndarray:
    rows = np.repeat(np.arange(len(out)), out.occupations)
    cols = np.repeat(np.arange(len(inp)), inp.occupations)
    return u[np.ix_(rows, cols)]


def amplitude(u, inp: FockState | Sequence[int], out: FockState | Sequence[int]) -> complex:
    """Transition amplitude <out| Phi(U) |in> from a single permanent."""
    u = _as_unitary(u)
    inp = inp if isinstance(inp, FockState) else FockState(tuple(inp))
    out = out if isinstance(out, FockState) else FockState(tuple(out))
    if len(inp) != u.n_modes or len(out) != u.n_modes:
        raise ValueError("state mode count does not match the unitary")
    if inp.n_particles != out.n_particles:
        raise ValueError(
            f"particle number mismatch: {inp.n_particles} in, {out.n_particles} out"
        )
    sub = _submatrix(u.matrix, inp, out)
    return permanent(sub) / math.sqrt(_norm(inp) * _norm(out))


def lift_unitary(u, n: int) -> FockOperator:
    """Represent a mode unitary on the N-boson Fock space.

    Uses a_i^dag -> sum_j U[j, i] a_j^dag, which makes the lift a group
    homomorphism: Phi(U V) = Phi(U) Phi(V).
    """
    u = _as_unitary(u)
    if n < 0:
        raise ValueError(f"particle number must be non-negative, got {n}")
    basis = enumerate_basis(u.n_modes, n)
    dim = len(basis)
    phi = np.empty((dim, dim), dtype=complex)
    norms = [math.sqrt(_norm(s)) for s in basis]
    for c, s_in in enumerate(basis):
        for r, s_out in enumerate(basis):
            sub = _submatrix(u.matrix, s_in, s_out)
            phi[r, c] = permanent(sub) / (norms[r] * norms[c])
    return FockOperator(phi, n, u.n_modes)


def random_unitary(m: int, rng: np.random.Generator) -> ModeUnitary:
    """Haar-random unitary via QR of a complex Ginibre matrix."""
    z = (rng.standard_normal((m, m)) + 1j * rng.standard_normal((m, m))) / math.sqrt(2)
    q, r = np.linalg.qr(z)
    d = np.diag(r)
    return ModeUnitary(q * (d / np.abs(d)))
