"""Exit criteria. Each test also enforces its wall-clock budget."""

import math
import os
import subprocess
import sys
import time
from contextlib import contextmanager

import numpy as np

from bunchlab.experiments import (
    CANONICAL_EVENTS,
    build_projector,
    quantum_event_probability,
    quantum_exclusivity_sum,
)
from bunchlab.fock import amplitude, beam_splitter, lift_unitary, permanent, random_unitary
from bunchlab.hv import (
    analytic_event_prob,
    analytic_sum,
    joint_pattern_distribution,
    monte_carlo_event_prob,
    sweep_sum,
)
from oracles import brute_permanent, square_probability

N_MC = 1_000_000
GRID = [0.0, 0.1, 0.25, 0.5, 0.75, 1.0]


@contextmanager
def budget(seconds):
    start = time.perf_counter()
    yield
    elapsed = time.perf_counter() - start
    assert elapsed < seconds, f"took {elapsed:.2f}s, budget {seconds}s"


def test_ac1_two_boson_bunching():
    with budget(1):
        bs = beam_splitter(0.5, (0, 1), 2)
        assert abs(amplitude(bs, (1, 1), (1, 1))) <= 1e-12
        assert abs(abs(amplitude(bs, (1, 1), (2, 0))) ** 2 - 0.5) <= 1e-12
        assert abs(abs(amplitude(bs, (1, 1), (0, 2))) ** 2 - 0.5) <= 1e-12


def test_ac2_event_probabilities_and_sum():
    with budget(1):
        for e in CANONICAL_EVENTS:
            assert abs(quantum_event_probability(e) - 0.5) <= 1e-12
        assert abs(quantum_exclusivity_sum() - 1.5) <= 1e-12


def test_ac3_unbiased_hidden_variables_match_quantum():
    with budget(10):
        for e in CANONICAL_EVENTS:
            assert abs(analytic_event_prob(e, 0.0) - quantum_event_probability(e)) <= 1e-12
            est = monte_carlo_event_prob(e, 0.0, n=N_MC, seed=42)
            assert abs(est.estimate - 0.5) < 3 * est.stderr


def test_ac4_bias_formula():
    with budget(60):
        for d in GRID:
            formula = 1.5 + d - d * d / 2
            assert abs(analytic_sum(d) - formula) < 1e-12
            assert f"{analytic_sum(d):.12g}" == f"{formula:.12g}"
            plus = square_probability(d)
            assert abs(analytic_event_prob(CANONICAL_EVENTS[0], d) - plus) <= 1e-6
            assert abs(analytic_event_prob(CANONICAL_EVENTS[2], d) - (1 - plus)) <= 1e-6
        for row in sweep_sum(GRID, n=N_MC, seed=42):
            assert abs(row.mc_sum - row.analytic_sum) <= 3 * row.mc_stderr


def test_ac5_projector_algebra():
    with budget(1):
        mats = [build_projector(e).matrix for e in CANONICAL_EVENTS]
        for p in mats:
            assert np.max(np.abs(p - p.conj().T)) <= 1e-10
            assert np.max(np.abs(p @ p - p)) <= 1e-10
            assert np.linalg.matrix_rank(p, tol=1e-8) == 1
        for i in range(3):
            for j in range(3):
                if i == j:
                    continue
                assert np.linalg.norm(mats[i] @ mats[j]) > 0.01
                assert np.linalg.norm(mats[i] @ mats[j] - mats[j] @ mats[i]) > 0.01


def test_ac6_joint_pattern_law():
    with budget(10):
        exact = joint_pattern_distribution(0.0)
        assert exact[(True,) * 3] == 0 and exact[(False,) * 3] == 0
        counts = exact.count_distribution()
        assert math.isclose(counts[2], 0.5) and math.isclose(counts[1], 0.5)
        assert math.isclose(exact.expected_true(), 1.5)
        mc = joint_pattern_distribution(0.0, n=N_MC, seed=42)
        assert mc[(True,) * 3] == 0 and mc[(False,) * 3] == 0


def test_ac7_property_suite():
    rng = np.random.default_rng(2024)
    with budget(30):
        for k in range(50):
            m = 1 + k % 3
            n = k % 4
            u, v = random_unitary(m, rng), random_unitary(m, rng)
            pu, pv, puv = (lift_unitary(x, n).matrix for x in (u, v, u @ v))
            assert np.max(np.abs(pu.conj().T @ pu - np.eye(len(pu)))) <= 1e-9
            assert np.max(np.abs(puv - pu @ pv)) <= 1e-9
        for k in range(100):
            n = 1 + k % 6
            a = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
            ref = brute_permanent(a)
            assert abs(permanent(a) - ref) <= 1e-10 * max(abs(ref), 1e-300)


def _cli(*argv, workers=1):
    env = {k: v for k, v in os.environ.items() if k != "BUNCHLAB_SEED"}
    return subprocess.run(
        [sys.executable, "-m", "bunchlab", *argv, "--workers", str(workers)],
        capture_output=True, check=True, env=env,
    ).stdout


def test_ac8_cli_determinism():
    for argv in (
        ["hv", "--delta", "0.3", "--samples", "500000", "--seed", "17"],
        ["sweep", "--from", "0", "--to", "1", "--steps", "4", "--samples", "300000", "--seed", "17"],
        ["quantum", "--format", "json"],
    ):
        first = _cli(*argv)
        assert first
        assert _cli(*argv) == first
        assert _cli(*argv, workers=4) == first
