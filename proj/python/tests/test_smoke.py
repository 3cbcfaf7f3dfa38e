import math

import numpy as np
import pytest

import stateconv as sc


def test_gamma2_of_offdiagonal():
    for k in range(2, 5):
        a = np.ones((k, k)) - np.eye(k)
        assert sc.gamma2(a) == pytest.approx(2 * (1 - 1 / k), abs=1e-4)


def test_filtered_infinite():
    off = np.ones((2, 2)) - np.eye(2)
    assert math.isinf(sc.filtered_gamma2(np.eye(2), [off]))


def test_adversary_values():
    assert sc.adv(sc.or_fn(2))["value"] == pytest.approx(math.sqrt(2), abs=1e-4)
    r = sc.adv(sc.parity_fn(2))
    assert r["value"] == pytest.approx(2, abs=1e-4)
    assert r["witness"]["omega"].sum() == pytest.approx(1, abs=1e-8)


def test_function_from_parts():
    f = sc.make_function(["01", "ABC"], ["0A", "0B", "1C"], ["a", "b", "c"])
    assert f.arity == 2 and len(f) == 3
    filters = sc.build_filters(f)
    assert filters[0].real.sum() == 4
    with pytest.raises(sc.InputError):
        sc.make_function(["01"], ["0", "0"], ["0", "1"])
    with pytest.raises(ValueError):
        sc.make_function(["01"], ["0", "2"], ["0", "1"])


def test_query_distance_and_q_delta():
    f = sc.identity_bit()
    rho, sigma = np.ones((2, 2)), sc.output_gram(f)
    assert sc.query_distance(rho, sigma, f) == pytest.approx(1, abs=1e-6)
    assert sc.q_delta(rho, sigma, f, 0.25) == pytest.approx(0.75, abs=1e-4)
    assert sc.q_delta(rho, sigma, f, 0.25, nc=True) <= 0.75 + 1e-6


def test_simulate():
    r = sc.simulate(sc.identity_bit(), 0.1)
    assert r["pass"]
    assert all(e["error"] < 0.4 for e in r["entries"])


def test_composition():
    b = sc.composition_bounds(sc.parity_fn(2), sc.and_fn(2), 2)
    assert b["lower"] == pytest.approx(2 * math.sqrt(2), abs=1e-3)
    assert b["adv_composed"] <= b["upper"] + 1e-4
    assert sc.direct_sum(sc.identity_bit(), 2) == pytest.approx(2, abs=1e-4)


def test_property_suite_short():
    r = sc.property_suite(2, 3)
    assert len(r) == 13
    assert all(p["pass"] for p in r)
