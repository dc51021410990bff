"""Points of F_q^d, spheres, closed-form intersection counts, and embedding counts."""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

import numpy as np

from .errors import ConfigError, NotAvailable, ZeroVector
from .field import Field, eta, nu, sqrt
from .graphs import Topology

Vec = Sequence[int]


def _as_vec(field: Field, x: Vec) -> np.ndarray:
    return np.asarray(x, dtype=np.int64).reshape(-1) % field.q


def norm_of(field: Field, x: Vec) -> int:
    """The quadratic form x_1^2 + ... + x_d^2 reduced mod q."""
    v = _as_vec(field, x)
    return int(np.sum(v * v) % field.q)


def dot(field: Field, x: Vec, y: Vec) -> int:
    return int(np.sum(_as_vec(field, x) * _as_vec(field, y)) % field.q)


@lru_cache(maxsize=64)
def grid_points(q: int, d: int) -> np.ndarray:
    """All of F_q^d as a (q**d, d) array in row-major order."""
    pts = np.indices((q,) * d, dtype=np.int64).reshape(d, -1).T.copy()
    pts.setflags(write=False)
    return pts


@lru_cache(maxsize=64)
def norm_grid(q: int, d: int) -> np.ndarray:
    """Array of shape (q,)*d holding ||x|| at index x."""
    sq = (np.arange(q, dtype=np.int64) ** 2) % q
    out = np.zeros((q,) * d, dtype=np.int64)
    for axis in range(d):
        shape = [1] * d
        shape[axis] = q
        out = out + sq.reshape(shape)
    out %= q
    out.setflags(write=False)
    return out


@dataclass(frozen=True)
class Sphere:
    q: int
    d: int
    t: int
    points: np.ndarray  # (size, d), lexicographically sorted

    @property
    def size(self) -> int:
        return int(self.points.shape[0])

    def indicator(self, dtype=np.int64) -> np.ndarray:
        return (norm_grid(self.q, self.d) == self.t).astype(dtype)

    def __len__(self) -> int:
        return self.size


def _slice_points(field: Field, d: int, t: int, memo: dict) -> np.ndarray:
    key = (d, t)
    if key in memo:
        return memo[key]
    q = field.q
    if d == 1:
        r = sqrt(field, t)
        roots = [] if r is None else sorted({r, (q - r) % q})
        pts = np.array(roots, dtype=np.int64).reshape(-1, 1)
    else:
        blocks = []
        for a in range(q):
            rest = _slice_points(field, d - 1, (t - a * a) % q, memo)
            if rest.shape[0]:
                head = np.full((rest.shape[0], 1), a, dtype=np.int64)
                blocks.append(np.hstack([head, rest]))
        pts = np.vstack(blocks) if blocks else np.zeros((0, d), dtype=np.int64)
    memo[key] = pts
    return pts


@lru_cache(maxsize=512)
def _sphere_cached(q: int, d: int, t: int, method: str) -> Sphere:
    from .field import make_field

    field = make_field(q)
    if method == "slice":
        pts = _slice_points(field, d, t, {})
    elif method == "scan":
        grid = grid_points(q, d)
        pts = grid[norm_grid(q, d).reshape(-1) == t]
    else:
        raise ConfigError(f"unknown sphere method {method!r}")
    pts = np.ascontiguousarray(pts, dtype=np.int64)
    pts.setflags(write=False)
    return Sphere(q, d, t, pts)


def sphere(field: Field, d: int, t: int, method: str = "slice") -> Sphere:
    """Enumerate S_t = {x in F_q^d : ||x|| = t}.

    ``method="slice"`` recurses on the first coordinate; ``"scan"`` filters the
    whole grid. Both return the same lexicographically sorted point array.
    """
    if d < 1:
        raise ConfigError("dimension must be at least 1")
    return _sphere_cached(field.q, int(d), field.reduce(t), method)


def sphere_size(field: Field, d: int, t: int) -> int:
    return sphere(field, d, t).size


def _check_m(field: Field, m: Vec) -> np.ndarray:
    v = _as_vec(field, m)
    if not v.any():
        raise ZeroVector("m must be nonzero")
    if v.size < 2:
        raise ConfigError("the closed-form counts need d >= 2")
    return v


def _eta0(field: Field, s: int) -> int:
    # Legendre convention eta(0) = 0; only reached in the odd-d isotropic branch with t = 0
    return 0 if field.reduce(s) == 0 else eta(field, s)


def plane_sphere_count(field: Field, m: Vec, t: int, b: int) -> int:
    """N(m, t, b) = #{x : ||x|| = t, m.x = b} by the four-case closed form.

    Cases split on whether ||m|| and b^2 - t||m|| vanish and on the parity of
    d. In the odd-d branch with ||m|| = 0 = b the term q^((d-1)/2) eta(...)
    enters with a plus sign; :func:`plane_sphere_count_minus_variant` keeps the
    minus-sign variant for comparison.
    """
    return _plane_sphere_closed(field, m, t, b, isotropic_odd_sign=+1)


def plane_sphere_count_minus_variant(field: Field, m: Vec, t: int, b: int) -> int:
    """Same closed form with a minus sign in the odd-d, ||m|| = 0 = b branch.

    Disagrees with enumeration exactly on that branch when t != 0.
    """
    return _plane_sphere_closed(field, m, t, b, isotropic_odd_sign=-1)


def _plane_sphere_closed(field: Field, m: Vec, t: int, b: int, isotropic_odd_sign: int) -> int:
    v = _check_m(field, m)
    q, d = field.q, v.size
    ell = norm_of(field, v)
    t, b = field.reduce(t), field.reduce(b)
    disc = (b * b - t * ell) % q
    even = d % 2 == 0
    sgn_even = (-1) ** (d // 2)
    sgn_odd = (-1) ** ((d - 1) // 2)
    base = q ** (d - 2)
    if ell != 0 and disc == 0:
        if even:
            return base
        return base + q ** ((d - 3) // 2) * (q - 1) * eta(field, sgn_odd * ell)
    if ell != 0:
        if even:
            return base + q ** ((d - 2) // 2) * eta(field, sgn_even * disc)
        return base - q ** ((d - 3) // 2) * eta(field, sgn_odd * ell)
    if b == 0:
        if even:
            return base + nu(field, t) * q ** ((d - 2) // 2) * eta(field, sgn_even)
        return base + isotropic_odd_sign * q ** ((d - 1) // 2) * _eta0(field, sgn_odd * t)
    return base


def plane_sphere_count_brute(field: Field, m: Vec, t: int, b: int) -> int:
    v = _check_m(field, m)
    pts = sphere(field, v.size, t).points
    return int(np.count_nonzero(pts @ v % field.q == field.reduce(b)))


def plane_sphere_histogram_brute(field: Field, m: Vec, t: int) -> np.ndarray:
    """Oracle for every b at once: entry b is #{x in S_t : m.x = b}."""
    v = _check_m(field, m)
    pts = sphere(field, v.size, t).points
    return np.bincount(pts @ v % field.q, minlength=field.q)


def sphere_sphere_histogram_brute(field: Field, m: Vec, t: int) -> np.ndarray:
    """Oracle for every j at once: entry j is #{x in S_t : ||x - m|| = j}."""
    v = _check_m(field, m)
    pts = sphere(field, v.size, t).points
    diff = (pts - v) % field.q
    return np.bincount((diff * diff).sum(axis=1) % field.q, minlength=field.q)


def sphere_sphere_count(field: Field, m: Vec, t: int, j: int) -> int:
    """#{x in S_t : ||x - m|| = j}, via N(m, t, (t + ||m|| - j)/2)."""
    v = _check_m(field, m)
    ell = norm_of(field, v)
    b = field.half(t + ell - j)
    return plane_sphere_count(field, v, t, b)


def sphere_sphere_count_brute(field: Field, m: Vec, t: int, j: int) -> int:
    v = _check_m(field, m)
    pts = sphere(field, v.size, t).points
    diff = (pts - v) % field.q
    return int(np.count_nonzero((diff * diff).sum(axis=1) % field.q == field.reduce(j)))


def theta_rotation(field: Field, t: int) -> tuple[np.ndarray, np.ndarray]:
    """The order-6 rotation of the plane F_q^2 and its inverse.

    theta = [[1/2, -b], [b, 1/2]] with b^2 = 3/4 and b the smaller root.
    """
    if field.reduce(t) == 0:
        raise ConfigError("theta_rotation needs t != 0")
    q = field.q
    if q == 3 or eta(field, 3) != 1:
        raise NotAvailable(f"3 is not a square mod {q}; no equilateral triangles in F_{q}^2")
    half = field.inv(2)
    b = sqrt(field, 3 * field.inv(4))
    theta = np.array([[half, (-b) % q], [b, half]], dtype=np.int64)
    return theta, theta.T.copy()


def apply_matrix(field: Field, mat: np.ndarray, pts: np.ndarray) -> np.ndarray:
    """Apply ``mat`` to each row of ``pts`` (points as rows)."""
    return (np.asarray(pts, dtype=np.int64) @ mat.T) % field.q


def difference_counts(field: Field, t: int) -> np.ndarray:
    """W(u) = #{(y, y') in S_t^2 : y != y', y - y' = u} on the d=2 grid."""
    pts = sphere(field, 2, t).points
    q = field.q
    diffs = (pts[:, None, :] - pts[None, :, :]) % q
    mask = ~np.eye(len(pts), dtype=bool)
    flat = diffs[mask].reshape(-1, 2)
    w = np.zeros((q, q), dtype=np.int64)
    np.add.at(w, (flat[:, 0], flat[:, 1]), 1)
    return w


def _topology_of(g) -> tuple[Topology, Field, int, int]:
    return g.topology, g.field, g.d, g.t


def relative_embeddings(topology: Topology, field: Field, d: int, t: int) -> np.ndarray:
    """Edge-respecting placements with vertex 0 at the origin.

    Returns an int array of shape (count, n, d). Vertices are placed in BFS
    order: each new vertex ranges over parent + S_t and is then filtered by the
    remaining already-placed neighbours.
    """
    q, n = field.q, topology.n
    s_pts = sphere(field, d, t).points
    order = topology.bfs_order()
    configs = np.zeros((1, n, d), dtype=np.int64)
    placed = {0}
    for v, parent in order[1:]:
        if configs.shape[0] == 0 or s_pts.shape[0] == 0:
            return np.zeros((0, n, d), dtype=np.int64)
        k = s_pts.shape[0]
        new = np.repeat(configs, k, axis=0)
        cand = (configs[:, parent, None, :] + s_pts[None, :, :]).reshape(-1, d) % q
        keep = np.ones(cand.shape[0], dtype=bool)
        for w in topology.neighbors(v):
            if w in placed and w != parent:
                diff = (cand - new[:, w, :]) % q
                keep &= (diff * diff).sum(axis=1) % q == t % q
        new[:, v, :] = cand
        configs = new[keep]
        placed.add(v)
    return configs


@lru_cache(maxsize=256)
def _config_count(name: str, q: int, d: int, t: int) -> int:
    from .field import make_field
    from .graphs import get_topology

    return int(relative_embeddings(get_topology(name), make_field(q), d, t).shape[0])


def count_embeddings(g) -> int:
    """Number of ordered tuples (x^1..x^n) with ||x^i - x^j|| = t on every edge.

    ``g`` is a :class:`fqgraph.forms.GraphSpec`. Translation invariance gives
    q^d times the number of placements rooted at the origin.
    """
    topology, field, d, t = _topology_of(g)
    return field.q**d * _config_count(topology.name, field.q, d, field.reduce(t))


def count_embeddings_brute(topology: Topology, field: Field, d: int, t: int) -> int:
    """Oracle: test every n-tuple of grid points (tiny q only)."""
    q = field.q
    grid = grid_points(q, d)
    nrm = norm_grid(q, d).reshape(-1)
    # adjacency[i, j] = 1 iff ||x_i - x_j|| = t, using flat indices
    diff = (grid[:, None, :] - grid[None, :, :]) % q
    flat = np.ravel_multi_index(tuple(diff[..., k] for k in range(d)), (q,) * d)
    adj = (nrm[flat] == t % q).astype(np.int64)
    n = topology.n
    letters = "abcd"[:n]
    terms = [f"{letters[a]}{letters[b]}" for a, b in topology.edges]
    # vertices with no edge would need a ones factor; all named graphs are connected
    total = np.einsum(",".join(terms) + "->", *([adj] * len(terms)), optimize=True)
    return int(total)
