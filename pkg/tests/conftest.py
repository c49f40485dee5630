import numpy as np

from gaussclone import CostWeights, design_from_weights

# pass/fail lines recorded by the acceptance tests, echoed after the run
acceptance_lines = []


def pytest_terminal_summary(terminalreporter):
    if acceptance_lines:
        terminalreporter.section("acceptance criteria")
        for line in acceptance_lines:
            terminalreporter.write_line(line)


def random_optimal_profile(rng, m_max=8, n_in=None, m_out=None):
    """Random on-surface profile via a weighted-cost design."""
    if m_out is None:
        m_out = int(rng.integers(2, m_max + 1))
    if n_in is None:
        n_in = int(rng.integers(1, m_out))
    weights = CostWeights(rng.uniform(0.1, 10.0, m_out))
    return design_from_weights(weights, n_in, m_out), weights
