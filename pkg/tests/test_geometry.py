import numpy as np
import pytest

from fqgraph.errors import ConfigError, NotAvailable, ZeroVector
from fqgraph.field import eta, make_field
from fqgraph.forms import GraphSpec
from fqgraph.geometry import (
    apply_matrix,
    count_embeddings,
    count_embeddings_brute,
    difference_counts,
    grid_points,
    norm_of,
    plane_sphere_count,
    plane_sphere_count_minus_variant,
    plane_sphere_count_brute,
    plane_sphere_histogram_brute,
    sphere,
    sphere_size,
    sphere_sphere_count,
    sphere_sphere_count_brute,
    sphere_sphere_histogram_brute,
    theta_rotation,
)
from fqgraph.graphs import GRAPH_NAMES, get_topology

F5, F13 = make_field(5), make_field(13)


def test_norm_examples():
    assert norm_of(F5, (0, 0)) == 0
    assert norm_of(F5, (1, 2)) == 0
    assert norm_of(F13, (2, 3)) == 0
    assert norm_of(F13, (1, 1)) == 2


def test_sphere_examples():
    s = sphere(F5, 2, 1)
    assert s.size == 4
    assert {tuple(p) for p in s.points} == {(0, 1), (0, 4), (1, 0), (4, 0)}
    assert sphere(F5, 2, 0).size == 9
    assert sphere(F5, 1, 2).size == 0
    assert sphere_size(F5, 2, 1) == 4


@pytest.mark.parametrize("q,d", [(3, 1), (5, 2), (7, 2), (5, 3), (3, 4)])
def test_slice_and_scan_agree(q, d):
    f = make_field(q)
    total = 0
    for t in range(q):
        a, b = sphere(f, d, t), sphere(f, d, t, method="scan")
        assert np.array_equal(a.points, b.points)
        assert all(norm_of(f, p) == t for p in a.points)
        assert len({tuple(p) for p in a.points}) == a.size
        total += a.size
    assert total == q**d


def test_plane_sphere_examples():
    assert plane_sphere_count(F5, (1, 0), 1, 0) == 2
    assert plane_sphere_count(F5, (1, 2), 1, 1) == 1
    f = F5
    assert plane_sphere_count(f, (1, 0, 0), 1, 1) == plane_sphere_count_brute(f, (1, 0, 0), 1, 1) == 9


def test_zero_vector_rejected():
    with pytest.raises(ZeroVector):
        plane_sphere_count(F5, (0, 0), 1, 1)
    with pytest.raises(ZeroVector):
        sphere_sphere_count(F5, (0, 5), 1, 1)


@pytest.mark.parametrize("q", [3, 5, 7])
def test_minus_variant_differs_only_on_isotropic_branch(q):
    """The minus-sign variant disagrees with brute force only for ||m|| = 0 = b, t != 0."""
    f = make_field(q)
    d = 3
    wrong = 0
    for m in grid_points(q, d)[1:]:
        isotropic = norm_of(f, m) == 0
        for t in range(q):
            brute = plane_sphere_histogram_brute(f, m, t)
            for b in range(q):
                variant = plane_sphere_count_minus_variant(f, m, t, b)
                assert plane_sphere_count(f, m, t, b) == brute[b]
                if variant != brute[b]:
                    wrong += 1
                    assert isotropic and b == 0 and t != 0
    assert wrong > 0


def test_sphere_sphere_examples():
    assert sphere_sphere_count(F13, (1, 0), 1, 1) == 2
    assert sphere_sphere_count(F5, (1, 2), 1, 1) == 0
    assert sphere_sphere_count(F5, (1, 0, 0), 1, 1) == sphere_sphere_count_brute(F5, (1, 0, 0), 1, 1) == 4


@pytest.mark.parametrize("q", [3, 5, 7, 11])
def test_isotropic_d3_equilateral_count(q):
    """d=3, ||m||=0: #{x in S_t : ||x - m|| = t} = q (1 + eta(-t))."""
    f = make_field(q)
    for m in grid_points(q, 3)[1:]:
        if norm_of(f, m) != 0:
            continue
        for t in range(1, q):
            expected = q * (1 + eta(f, -t))
            assert sphere_sphere_count(f, m, t, t) == expected
            assert sphere_sphere_count_brute(f, m, t, t) == expected


@pytest.mark.parametrize("q,d", [(5, 2), (7, 2), (5, 3)])
def test_histograms_match_pointwise_oracles(q, d):
    f = make_field(q)
    rng = np.random.default_rng(q * d)
    for _ in range(5):
        m = rng.integers(0, q, size=d)
        if not m.any():
            continue
        t = int(rng.integers(0, q))
        ph = plane_sphere_histogram_brute(f, m, t)
        sh = sphere_sphere_histogram_brute(f, m, t)
        for b in range(q):
            assert ph[b] == plane_sphere_count_brute(f, m, t, b)
            assert sh[b] == sphere_sphere_count_brute(f, m, t, b)


@pytest.mark.parametrize("q", [11, 13, 23])
def test_theta_rotation(q):
    f = make_field(q)
    theta, inv = theta_rotation(f, 1)
    assert np.array_equal(theta @ inv % q, np.eye(2, dtype=np.int64))
    b = int(theta[1, 0])
    assert b * b % q == 3 * f.inv(4) % q
    assert b <= q - b
    for t in (1, 2):
        pts = sphere(f, 2, t).points
        rotated = apply_matrix(f, theta, pts)
        for y, ty in zip(pts, rotated):
            assert norm_of(f, ty) == t
            assert norm_of(f, y - ty) == t


def test_theta_rotation_errors():
    with pytest.raises(NotAvailable):
        theta_rotation(F5, 1)
    with pytest.raises(NotAvailable):
        theta_rotation(make_field(3), 1)
    with pytest.raises(ConfigError):
        theta_rotation(F13, 0)


def test_difference_counts_small():
    w = difference_counts(F13, 1)
    assert w[0, 0] == 0
    assert w.sum() == sphere(F13, 2, 1).size * (sphere(F13, 2, 1).size - 1)
    assert w.max() <= 2


@pytest.mark.parametrize("name", GRAPH_NAMES)
@pytest.mark.parametrize("q,d", [(3, 2), (5, 2), (3, 3)])
def test_count_embeddings_matches_brute(name, q, d):
    f = make_field(q)
    for t in range(1, q):
        g = GraphSpec(name, f, d, t)
        assert count_embeddings(g) == count_embeddings_brute(get_topology(name), f, d, t)


def test_count_embeddings_examples():
    s = sphere(F13, 2, 1).size
    assert count_embeddings(GraphSpec.make("K3", 13)) == 13**2 * s * 2
    assert count_embeddings(GraphSpec.make("K3", 5)) == 0
    assert count_embeddings(GraphSpec.make("K2", 13)) == 13**2 * s
