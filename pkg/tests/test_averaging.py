from fractions import Fraction

import numpy as np
import pytest

from fqgraph.averaging import (
    INF,
    TestFamily,
    apply_averaging,
    averaging_ratio,
    estimate_averaging_norm,
    format_exponent,
    lp_norm,
    parse_exponent,
    parse_exponents,
    reciprocal,
    sphere_sum,
)
from fqgraph.errors import BadExponent, EmptySphere, ZeroFunction
from fqgraph.field import make_field
from fqgraph.geometry import sphere

F5 = make_field(5)


def _delta(q, d=2):
    f = np.zeros((q,) * d, dtype=np.int64)
    f[(0,) * d] = 1
    return f


def test_exponent_parsing():
    assert parse_exponent("3/2") == Fraction(3, 2)
    assert parse_exponent("inf") == INF
    assert parse_exponent("∞") == INF
    assert parse_exponents("3/2, 3,inf") == (Fraction(3, 2), Fraction(3), INF)
    assert reciprocal(INF) == 0
    assert reciprocal(Fraction(3, 2)) == Fraction(2, 3)
    assert format_exponent(Fraction(3, 2)) == "3/2"
    assert format_exponent(INF) == "inf"
    for bad in ("1/2", "0", "-3", "abc"):
        with pytest.raises(BadExponent):
            parse_exponent(bad)


def test_lp_norm_examples():
    q = 5
    for p in (1, Fraction(3, 2), 2, 7, INF):
        assert lp_norm(np.ones((q, q)), p) == pytest.approx(1)
    assert lp_norm(_delta(q), 1) == pytest.approx(1 / 25)
    assert lp_norm(sphere(F5, 2, 1).indicator(), 2) == pytest.approx(0.4)
    with pytest.raises(BadExponent):
        lp_norm(np.ones((q, q)), Fraction(1, 2))


def test_lp_norm_nesting(rng):
    f = rng.random((7, 7))
    ps = [1, Fraction(3, 2), 2, 3, 10, INF]
    norms = [lp_norm(f, p) for p in ps]
    assert all(a <= b + 1e-12 for a, b in zip(norms, norms[1:]))


def test_indicator_fast_path_matches_float():
    ind = (np.random.default_rng(1).random((7, 7)) < 0.3).astype(np.int64)
    for p in (1, Fraction(3, 2), 3):
        direct = (np.mean(ind.astype(float) ** float(p))) ** (1 / float(p))
        assert lp_norm(ind, p) == pytest.approx(direct)


def test_apply_averaging_examples():
    q = 5
    assert np.allclose(apply_averaging(np.ones((q, q)), F5, 1), 1)
    s = sphere(F5, 2, 1)
    assert np.allclose(apply_averaging(_delta(q), F5, 1), s.indicator(float) / s.size)
    assert apply_averaging(s.indicator(), F5, 1)[0, 0] == pytest.approx(1)


@pytest.mark.parametrize("q,d,t", [(5, 2, 1), (7, 2, 3), (5, 3, 2)])
def test_averaging_paths_and_identities(q, d, t, rng):
    f = make_field(q)
    a, b = rng.random((q,) * d), rng.random((q,) * d)
    fast, direct = apply_averaging(a, f, t), apply_averaging(a, f, t, method="direct")
    assert np.abs(fast - direct).max() < 1e-9
    assert fast.mean() == pytest.approx(a.mean())
    # self-adjoint because S_t = -S_t
    assert np.sum(fast * b) == pytest.approx(np.sum(a * apply_averaging(b, f, t)))
    assert np.allclose(sphere_sum(a, f, t), sphere(f, d, t).size * fast)


def test_averaging_ratio_examples():
    q = 5
    for p, r in ((1, INF), (2, 3), (INF, 1)):
        assert averaging_ratio(np.ones((q, q)), F5, 1, p, r) == pytest.approx(1)
    assert averaging_ratio(_delta(q), F5, 1, 1, INF) == pytest.approx(25 / 4)
    with pytest.raises(ZeroFunction):
        averaging_ratio(np.zeros((q, q)), F5, 1, 1, 1)
    with pytest.raises(EmptySphere):
        apply_averaging(np.ones(5), F5, 2)


def test_family_is_seeded_and_documented():
    fam = TestFamily(seed=3)
    a = list(fam.members(F5, 2))
    b = list(TestFamily(seed=3).members(F5, 2))
    labels = [m.label for m in a]
    assert labels == [m.label for m in b]
    assert all(np.array_equal(x.values, y.values) for x, y in zip(a, b))
    assert labels[0] == "delta" and "full" in labels
    assert sum(lab.startswith("sphere:") for lab in labels) == 5
    assert sum(not m.indicator for m in a) == fam.n_functions


def test_monotone_case_bounded_by_one():
    # r <= p: averaging is a contraction
    for q in (5, 11):
        f = make_field(q)
        for p, r in ((INF, INF), (2, 2), (3, 2), (INF, 1)):
            assert estimate_averaging_norm(f, 2, 1, p, r).general_max <= 1 + 1e-9


def test_delta_witness_grows():
    vals = [estimate_averaging_norm(make_field(q), 2, 1, 1, 2).restricted_max for q in (5, 13, 29)]
    assert vals[0] < vals[1] < vals[2]
    est = estimate_averaging_norm(make_field(29), 2, 1, 1, 2)
    assert est.restricted_witness == "delta"


def test_endpoint_bounded():
    for q in (5, 13, 29):
        est = estimate_averaging_norm(make_field(q), 2, 1, Fraction(3, 2), 3)
        assert est.restricted_max <= 4
        assert est.general_max >= est.restricted_max
