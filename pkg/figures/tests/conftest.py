import itertools

import pandas as pd
import pytest

PATTERNS = ["block", "centralised", "dependent", "hierarchical", "local", "random"]
TAUS = ["never", "1", "10"]
PROBS = [round(0.1 * i, 1) for i in range(11)]


def golden_cells_frame() -> pd.DataFrame:
    rows = []
    for k, pattern, tau, lp in itertools.product([3, 5], PATTERNS, TAUS, PROBS):
        value = 0.6 + 0.02 * (5 - k) + 0.01 * PATTERNS.index(pattern) + 0.005 * TAUS.index(tau) + 0.1 * lp
        rows.append((k, pattern, tau, lp, round(value, 6), 0.01, 20000))
    return pd.DataFrame(
        rows, columns=["k", "pattern", "tau", "learn_prob", "mean_normalized", "stderr", "n_obs"]
    )


@pytest.fixture()
def golden_cells(tmp_path):
    path = tmp_path / "cells.csv"
    golden_cells_frame().to_csv(path, index=False)
    return path


@pytest.fixture()
def golden_pd_dir(tmp_path):
    pd.DataFrame({"tau": TAUS, "pd": [0.7, 0.75, 0.8]}).to_csv(tmp_path / "pd_tau.csv", index=False)
    pd.DataFrame({"learn_prob": PROBS, "pd": [0.6 + 0.02 * i for i in range(11)]}).to_csv(
        tmp_path / "pd_learn_prob.csv", index=False
    )
    pd.DataFrame({"k": [3, 5], "pd": [0.8, 0.7]}).to_csv(tmp_path / "pd_k.csv", index=False)
    pd.DataFrame({"pattern": PATTERNS, "pd": [0.7 + 0.01 * i for i in range(6)]}).to_csv(
        tmp_path / "pd_pattern.csv", index=False
    )
    return tmp_path
