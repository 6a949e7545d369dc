import json

import numpy as np
import pytest

import dtdd


def test_water_fill_example():
    p, lam = dtdd.water_fill([1.0, 1.0], [0.5, 1.5], 2.0)
    assert p == pytest.approx([1.5, 0.5])
    assert 1.0 / lam == pytest.approx(2.0)


def test_solve_msne_coordination():
    # Both players get 3 when they match and 1 otherwise.
    table = np.array([[3.0, 3.0], [1.0, 1.0], [1.0, 1.0], [3.0, 3.0]])
    interior = dtdd.solve_msne(table, starts=1, scan_pure=False)
    assert interior["q"] == pytest.approx([0.5, 0.5])
    best = dtdd.solve_msne(table)
    assert best["social_welfare"] == pytest.approx(6.0)


def test_random_table_is_an_equilibrium():
    rng = np.random.default_rng(0)
    table = rng.uniform(0, 10, size=(8, 3))
    r = dtdd.solve_msne(table)
    q = r["q"]
    for n in range(3):
        e1 = dtdd.expected_payoff(table, n, 1, q)
        e0 = dtdd.expected_payoff(table, n, 0, q)
        current = q[n] * e1 + (1 - q[n]) * e0
        assert max(e0, e1) - current <= 1e-6 * np.abs(table).max()


def test_payoff_tables_and_opt():
    sip, app = dtdd.payoff_tables(num_cells=3, users_per_cell=4, stats_window=3)
    assert sip.shape == (8, 3) and app.shape == (8, 3)
    z = dtdd.opt_schedule(sip)
    idx = int("".join(map(str, z)), 2)
    assert sip.sum(axis=1)[idx] == pytest.approx(sip.sum(axis=1).max())


def test_channels_symmetry():
    ch = dtdd.channels(num_cells=7, users_per_cell=2, seed=3)
    assert ch["H"].shape == (7, 14)
    assert np.allclose(ch["U"], ch["U"].T)
    assert np.allclose(ch["B"], ch["B"].T)


def test_overhead_and_stdd():
    o = dtdd.signaling_overhead(7, 15)
    assert o["sip"] > o["app_fast"] == 4 * 105
    assert dtdd.stdd_schedule(2, 4) == ["11", "11", "00", "00"]
    with pytest.raises(ValueError, match="uneven static split"):
        dtdd.stdd_schedule(2, 5)


def test_run_experiment_small():
    cfg = {"topology": {"num_cells": 2, "users_per_cell": 2}, "c": [0.3],
           "frames": 2, "stats_window": 2, "seeds": 1, "schemes": ["sip", "stdd"]}
    summary, cdf = dtdd.run_experiment(json.dumps(cfg))
    assert {r["scheme"] for r in summary} == {"sip", "stdd"}
    assert len(cdf) == 2 * 101
