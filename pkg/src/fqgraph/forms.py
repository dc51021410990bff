"""Graph forms Lambda_G: a generic exact evaluator and factorized fast paths.

For a graph G on vertices 0..n-1 the form is

    Lambda_G(f_0, ..., f_{n-1}) = N(G)^-1 * sum over edge-respecting tuples of prod_i f_i(x^i)

where a tuple respects the edges when ||x^i - x^j|| = t on every edge.
"""
from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

import numpy as np

from .averaging import Exponent, NormEstimate, TestFamily, _fold, lp_norm, sphere_sum
from .errors import (
    ArityMismatch,
    ConfigError,
    DimensionMismatch,
    FastPathUnavailable,
    NotAvailable,
    ZeroFunction,
    ZeroNormalizer,
)
from .field import Field, make_field
from .geometry import count_embeddings, grid_points, relative_embeddings, sphere, theta_rotation
from .graphs import GRAPH_NAMES, Topology, get_topology


class NormMode(str, enum.Enum):
    PAPER_PRODUCT = "paper"
    EMBEDDING_COUNT = "embedding"

    @classmethod
    def parse(cls, value) -> "NormMode":
        if isinstance(value, cls):
            return value
        text = str(value).strip().lower()
        for mode in cls:
            if text in (mode.value, mode.name.lower()):
                return mode
        raise ConfigError(f"unknown normalization mode {value!r}; use 'paper' or 'embedding'")


@dataclass(frozen=True)
class GraphSpec:
    """One of the eight named graphs placed in F_q^d with edge radius t."""

    name: str
    field: Field
    d: int
    t: int = 1
    norm_mode: NormMode = NormMode.EMBEDDING_COUNT

    def __post_init__(self):
        object.__setattr__(self, "name", get_topology(self.name).name)
        object.__setattr__(self, "norm_mode", NormMode.parse(self.norm_mode))
        if not isinstance(self.field, Field):
            object.__setattr__(self, "field", make_field(self.field))
        if int(self.d) < 2:
            raise ConfigError("graph forms need d >= 2")
        object.__setattr__(self, "d", int(self.d))
        t = self.field.reduce(self.t)
        if t == 0:
            raise ConfigError("the edge radius t must be nonzero")
        object.__setattr__(self, "t", t)

    @classmethod
    def make(cls, name: str, q: int, d: int = 2, t: int = 1, mode="embedding") -> "GraphSpec":
        return cls(name, make_field(q), d, t, NormMode.parse(mode))

    @property
    def topology(self) -> Topology:
        return get_topology(self.name)

    @property
    def n(self) -> int:
        return self.topology.n

    @property
    def q(self) -> int:
        return self.field.q

    @property
    def shape(self) -> tuple[int, ...]:
        return (self.field.q,) * self.d


def paper_product(g: GraphSpec) -> int:
    """Per-graph product normalizer built from |S_t| and |S_t^{d-2}|."""
    s = sphere(g.field, g.d, g.t).size
    s2 = sphere(g.field, g.d - 1, g.t).size  # sphere one dimension down
    base = g.field.q**g.d
    factors = {
        "K2": s,
        "K3": s * s2,
        "P2": s**2,
        "C4_DIAG": s * s2**2,
        "C4": s**2 * s2,
        "P3": s**3,
        "KITE": s**2 * s2,
        "Y": s**3,
    }
    return base * factors[g.name]


def normalizing_factor(g: GraphSpec) -> Fraction:
    """N(G) in the chosen normalization mode; raises :class:`ZeroNormalizer` when it vanishes."""
    count = count_embeddings(g)
    if count == 0:
        raise ZeroNormalizer(
            f"{g.name} has no embeddings in F_{g.q}^{g.d} with t={g.t}"
            + (" (3 is not a square, so no equilateral triangles)" if g.d == 2 and g.name in ("K3", "KITE", "C4_DIAG") else "")
        )
    if g.norm_mode is NormMode.EMBEDDING_COUNT:
        return Fraction(count)
    value = paper_product(g)
    if value == 0:
        raise ZeroNormalizer(
            f"product normalizer of {g.name} vanishes (|S_t^(d-2)| = 0 for t={g.t}); use mode 'embedding' or a square t"
        )
    return Fraction(value)


def _check_inputs(g: GraphSpec, fs: Sequence[np.ndarray]) -> list[np.ndarray]:
    if len(fs) != g.n:
        raise ArityMismatch(f"{g.name} takes {g.n} functions, got {len(fs)}")
    out = []
    for f in fs:
        a = np.asarray(f)
        if a.shape != g.shape:
            raise DimensionMismatch(f"expected shape {g.shape}, got {a.shape}")
        out.append(a)
    return out


@lru_cache(maxsize=128)
def _configs(name: str, q: int, d: int, t: int) -> np.ndarray:
    c = relative_embeddings(get_topology(name), make_field(q), d, t)
    c.setflags(write=False)
    return c


def _all_integer(fs: Sequence[np.ndarray]) -> bool:
    return all(f.dtype.kind in "biu" for f in fs)


def form_numerator_generic(g: GraphSpec, fs: Sequence[np.ndarray], chunk: int = 1 << 21):
    """Unnormalized sum over every edge-respecting tuple.

    Integer inputs give an exact Python int; otherwise a float summed in a
    fixed order.
    """
    fs = _check_inputs(g, fs)
    q, d, n = g.q, g.d, g.n
    configs = _configs(g.name, q, d, g.t)
    exact = _all_integer(fs)
    if exact:
        bound = max(int(np.abs(f).max(initial=0)) for f in fs) ** n * q**d * max(len(configs), 1)
        dtype = np.int64 if bound < 2**62 else object
    else:
        dtype = float
    flats = [f.reshape(-1).astype(dtype) for f in fs]
    x0 = grid_points(q, d)
    strides = q ** np.arange(d - 1, -1, -1)
    step = max(1, chunk // (n * x0.shape[0]))
    total = 0 if exact else 0.0
    for start in range(0, len(configs), step):
        block = configs[start : start + step]
        prod = None
        for i in range(n):
            idx = np.zeros((block.shape[0], x0.shape[0]), dtype=np.int64)
            for k in range(d):
                idx += ((x0[None, :, k] + block[:, i, k][:, None]) % q) * strides[k]
            vals = flats[i][idx]
            prod = vals if prod is None else prod * vals
        if prod is not None:
            total += prod.sum()
    return int(total) if exact else float(total)


def eval_form_generic(g: GraphSpec, fs: Sequence[np.ndarray]) -> float:
    num = form_numerator_generic(g, fs)
    norm = normalizing_factor(g)
    if isinstance(num, int):
        return float(Fraction(num) / norm)
    return num / float(norm)


def form_numerator_brute(g: GraphSpec, fs: Sequence[np.ndarray]) -> int | float:
    """Oracle: sum over all (q^d)^n tuples with an explicit edge test (tiny q only)."""
    fs = _check_inputs(g, fs)
    q, d = g.q, g.d
    grid = grid_points(q, d)
    diff = (grid[:, None, :] - grid[None, :, :]) % q
    adj = ((diff * diff).sum(axis=2) % q == g.t).astype(float)
    flats = [f.reshape(-1).astype(float) for f in fs]
    letters = "abcd"[: g.n]
    terms = [f"{letters[a]}{letters[b]}" for a, b in g.topology.edges] + list(letters)
    operands = [adj] * len(g.topology.edges) + flats
    total = float(np.einsum(",".join(terms) + "->", *operands, optimize=True))
    return int(round(total)) if _all_integer(fs) else total


def _shifted(f: np.ndarray, pts: np.ndarray) -> np.ndarray:
    """Stack of f(x - u) for every row u of ``pts``, shape (len(pts), q^d)."""
    q = f.shape[0]
    d = f.ndim
    grid = grid_points(q, d)
    strides = q ** np.arange(d - 1, -1, -1)
    idx = ((grid[None, :, :] - pts[:, None, :]) % q) @ strides
    return np.asarray(f, dtype=float).reshape(-1)[idx]


def _sphere_pairs(field: Field, d: int, t: int) -> tuple[np.ndarray, np.ndarray]:
    """Index pairs (k, l) into the sphere points with ||y_k - y_l|| = t."""
    pts = sphere(field, d, t).points
    diff = (pts[:, None, :] - pts[None, :, :]) % field.q
    mask = (diff * diff).sum(axis=2) % field.q == t % field.q
    return np.nonzero(mask)


def bilinear_B_theta(f1: np.ndarray, f2: np.ndarray, field: Field, t: int, inverse: bool = False) -> np.ndarray:
    """B_theta(f1, f2)(x) = |S_t|^-1 sum_{y in S_t} f1(x - y) f2(x - theta y) (d = 2)."""
    f1 = np.asarray(f1, dtype=float)
    if f1.ndim != 2:
        raise DimensionMismatch("the theta decomposition lives in d = 2")
    theta, theta_inv = theta_rotation(field, t)
    mat = theta_inv if inverse else theta
    pts = sphere(field, 2, t).points
    rotated = (pts @ mat.T) % field.q
    vals = _shifted(f1, pts) * _shifted(np.asarray(f2, dtype=float), rotated)
    return (vals.sum(axis=0) / len(pts)).reshape(f1.shape)


def bilinear_B(f1: np.ndarray, f2: np.ndarray, field: Field, t: int, method: str = "auto") -> np.ndarray:
    """B(f1, f2)(x) = |S_t|^-1 sum over y, z in S_t with ||z - y|| = t of f1(x - y) f2(x - z).

    ``method="theta"`` uses B = B_theta + B_theta^-1 (d = 2, 3 a square);
    ``"pairs"`` sums over the enumerated sphere pairs in any d. When 3 is not
    a square in d = 2 there are no such pairs and the result is zero.
    """
    f1 = np.asarray(f1, dtype=float)
    f2 = np.asarray(f2, dtype=float)
    if f1.shape != f2.shape:
        raise DimensionMismatch("B needs two functions on the same grid")
    d = f1.ndim
    if method == "auto":
        method = "theta" if d == 2 and _theta_available(field) else "pairs"
    if method == "theta":
        return bilinear_B_theta(f1, f2, field, t) + bilinear_B_theta(f1, f2, field, t, inverse=True)
    if method != "pairs":
        raise ConfigError(f"unknown B method {method!r}")
    pts = sphere(field, d, t).points
    k, l = _sphere_pairs(field, d, t)
    if len(k) == 0:
        return np.zeros_like(f1)
    a = _shifted(f1, pts)
    b = _shifted(f2, pts)
    return ((a[k] * b[l]).sum(axis=0) / len(pts)).reshape(f1.shape)


def _theta_available(field: Field) -> bool:
    try:
        theta_rotation(field, 1)
    except NotAvailable:
        return False
    return True


def _bridge_sum(f0, f1, f2, f3, field: Field, t: int, diagonal_only: bool) -> float:
    """sum over v of sum_x f0(x) f2(x - v) G_v[f1](x) G_v[f3](x).

    G_v[f](x) = sum over u in S_t with u - v in S_t of f(x - u). Pairs (u, w)
    of sphere points are grouped by v = u - w. With ``diagonal_only`` v is
    restricted to S_t (the chord x^0 x^2 is itself an edge).
    """
    q, d = field.q, f0.ndim
    pts = sphere(field, d, t).points
    strides = q ** np.arange(d - 1, -1, -1)
    vs = ((pts[:, None, :] - pts[None, :, :]) % q).reshape(-1, d)
    us = np.repeat(np.arange(len(pts)), len(pts))
    if diagonal_only:
        keep = (vs * vs).sum(axis=1) % q == t % q
        vs, us = vs[keep], us[keep]
    if len(us) == 0:
        return 0.0
    vflat = vs @ strides
    groups, inverse = np.unique(vflat, return_inverse=True)
    incidence = np.zeros((len(groups), len(pts)))
    np.add.at(incidence, (inverse, us), 1.0)
    g1 = incidence @ _shifted(f1, pts)
    g3 = incidence @ _shifted(f3, pts)
    vpts = np.stack(np.unravel_index(groups, (q,) * d), axis=1)
    f2v = _shifted(f2, vpts)
    return float(np.einsum("x,vx,vx,vx->", np.asarray(f0, dtype=float).reshape(-1), f2v, g1, g3))


def form_numerator_fast(g: GraphSpec, fs: Sequence[np.ndarray]) -> float:
    """Unnormalized form value through the graph's factorized identity."""
    fs = [np.asarray(f, dtype=float) for f in _check_inputs(g, fs)]
    field, t = g.field, g.t

    def S(f):
        return sphere_sum(f, field, t)

    name = g.name
    if name == "K2":
        return float(np.sum(fs[0] * S(fs[1])))
    if name == "P2":
        return float(np.sum(fs[1] * S(fs[0]) * S(fs[2])))
    if name == "Y":
        return float(np.sum(fs[2] * S(fs[0]) * S(fs[1]) * S(fs[3])))
    if name == "P3":
        return float(np.sum(fs[1] * S(fs[0]) * S(fs[2] * S(fs[3]))))
    if name in ("K3", "KITE"):
        if g.d == 2 and not _theta_available(field):
            raise FastPathUnavailable("3 is not a square: the triangle identity has no rotation")
        size = sphere(field, g.d, t).size
        tri = size * bilinear_B(fs[0], fs[1], field, t)
        if name == "K3":
            return float(np.sum(fs[2] * tri))
        return float(np.sum(fs[2] * tri * S(fs[3])))
    if name in ("C4", "C4_DIAG"):
        return _bridge_sum(fs[0], fs[1], fs[2], fs[3], field, t, diagonal_only=name == "C4_DIAG")
    raise FastPathUnavailable(f"no factorized identity for {name}")


def eval_form_fast(g: GraphSpec, fs: Sequence[np.ndarray]) -> float:
    num = form_numerator_fast(g, fs)
    return num / float(normalizing_factor(g))


def eval_form(g: GraphSpec, fs: Sequence[np.ndarray], path: str = "auto") -> float:
    """Evaluate Lambda_G; ``path`` is ``"fast"``, ``"generic"`` or ``"auto"``."""
    if path == "generic":
        return eval_form_generic(g, fs)
    if path == "fast":
        return eval_form_fast(g, fs)
    if path != "auto":
        raise ConfigError(f"unknown evaluation path {path!r}")
    try:
        return eval_form_fast(g, fs)
    except FastPathUnavailable:
        return eval_form_generic(g, fs)


def form_ratio(g: GraphSpec, fs: Sequence[np.ndarray], ps: Sequence[Exponent], path: str = "auto") -> float:
    """Lambda_G(fs) / prod ||f_i||_{p_i}."""
    fs = _check_inputs(g, fs)
    if len(ps) != g.n:
        raise ArityMismatch(f"{g.name} takes {g.n} exponents, got {len(ps)}")
    denom = 1.0
    for f, p in zip(fs, ps):
        nrm = lp_norm(f, p)
        if nrm == 0:
            raise ZeroFunction("a test function is identically zero")
        denom *= nrm
    return eval_form(g, fs, path) / denom


def basic_functions(g: GraphSpec) -> dict[str, np.ndarray]:
    """delta_0, 1_{S_t} and the full indicator on the grid of ``g``."""
    delta = np.zeros(g.shape, dtype=np.int64)
    delta[(0,) * g.d] = 1
    return {
        "delta": delta,
        "sphere": sphere(g.field, g.d, g.t).indicator(),
        "full": np.ones(g.shape, dtype=np.int64),
    }


WITNESS_OF_KIND = {"d": "delta", "1": "sphere", "0": "full"}


def row_witness(g: GraphSpec, kinds: Sequence[str]) -> list[np.ndarray]:
    """Test tuple for one necessary-condition row.

    A coefficient d in slot i puts delta_0 there, a coefficient 1 puts
    1_{S_t}, and a coefficient 0 puts the full indicator.
    """
    base = basic_functions(g)
    return [base[WITNESS_OF_KIND[k]] for k in kinds]


def estimate_form_norm(
    g: GraphSpec,
    ps: Sequence[Exponent],
    family: TestFamily | None = None,
    n_random_tuples: int = 8,
) -> NormEstimate:
    """Largest form_ratio over a documented family of input tuples.

    Tuples: every assignment of {delta, sphere, full} to the slots (this
    covers each necessary-condition witness), each family member repeated in
    all slots, and seeded random mixtures of family members.
    """
    family = family or TestFamily()
    base = basic_functions(g)
    members = list(family.members(g.field, g.d))
    best: dict = {}

    def consider(label: str, fs, indicator: bool):
        ratio = form_ratio(g, fs, ps)
        _fold(best, "general", ratio, label)
        if indicator:
            _fold(best, "restricted", ratio, label)

    for combo in itertools.product(("delta", "sphere", "full"), repeat=g.n):
        consider("(" + ",".join(combo) + ")", [base[c] for c in combo], True)
    for m in members:
        consider(f"({m.label})*{g.n}", [m.values] * g.n, m.indicator)
    rng = np.random.default_rng(family.seed + 1)
    for _ in range(n_random_tuples):
        pick = [members[i] for i in rng.integers(0, len(members), size=g.n)]
        consider("(" + ",".join(m.label for m in pick) + ")", [m.values for m in pick], all(m.indicator for m in pick))
    return NormEstimate(*best["restricted"], *best["general"])


__all__ = [
    "GRAPH_NAMES",
    "GraphSpec",
    "NormMode",
    "basic_functions",
    "bilinear_B",
    "bilinear_B_theta",
    "estimate_form_norm",
    "eval_form",
    "eval_form_fast",
    "eval_form_generic",
    "form_numerator_brute",
    "form_numerator_fast",
    "form_numerator_generic",
    "form_ratio",
    "normalizing_factor",
    "paper_product",
    "row_witness",
]
