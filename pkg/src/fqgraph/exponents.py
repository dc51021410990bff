"""Exact inequality systems in reciprocal-exponent space and their vertices.

A point u = (1/p_1, ..., 1/p_n) lies in the polytope P(G) when every row
a.u <= b of the graph's system holds and u sits in the box [0, 1]^n. Each row
is stored symbolically: coefficient kinds are ``"d"``, ``"1"`` or ``"0"`` and
the bound is ``alpha*d + beta``.
"""
from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from importlib import resources
from typing import Iterable, Sequence

from .errors import ArityMismatch, ConfigError, DimensionMismatch
from .graphs import GRAPH_NAMES, get_topology

Point = tuple[Fraction, ...]


@dataclass(frozen=True)
class SymbolicRow:
    kinds: tuple[str, ...]
    alpha: int
    beta: int

    def coefficients(self, d: int) -> tuple[Fraction, ...]:
        value = {"d": Fraction(d), "1": Fraction(1), "0": Fraction(0)}
        return tuple(value[k] for k in self.kinds)

    def bound(self, d: int) -> Fraction:
        return Fraction(self.alpha * d + self.beta)

    def describe(self) -> str:
        terms = [f"{k}/p{i + 1}" for i, k in enumerate(self.kinds) if k != "0"]
        rhs = ("d" if self.alpha == 1 else f"{self.alpha}d") + (f"{self.beta:+d}" if self.beta else "")
        return " + ".join(terms) + f" <= {rhs}"


def _rows(*specs: tuple[str, int, int]) -> tuple[SymbolicRow, ...]:
    return tuple(SymbolicRow(tuple(k), a, b) for k, a, b in specs)


# Necessary-condition rows per graph, in the order they are conventionally listed.
SYSTEMS: dict[str, tuple[SymbolicRow, ...]] = {
    "K2": _rows(("1d", 1, 0), ("d1", 1, 0)),
    "K3": _rows(("d11", 1, 0), ("1d1", 1, 0), ("11d", 1, 0)),
    "P2": _rows(("1d1", 1, 0), ("d10", 1, 0), ("01d", 1, 0), ("d1d", 2, -1)),
    "C4_DIAG": _rows(("11d1", 1, 0), ("d111", 1, 0), ("1d1d", 2, -2)),
    "C4": _rows(
        ("111d", 1, 1), ("11d1", 1, 1), ("1d11", 1, 1), ("d111", 1, 1), ("d1d1", 2, -2), ("1d1d", 2, -2)
    ),
    "P3": _rows(
        ("1d10", 1, 0), ("01d1", 1, 0), ("d111", 1, 2), ("111d", 1, 2),
        ("1d1d", 2, -1), ("d1d1", 2, -1), ("d11d", 2, 0),
    ),
    "KITE": _rows(("11d1", 1, 0), ("1d10", 1, 0), ("d110", 1, 0), ("1d1d", 2, -1), ("d11d", 2, -1)),
    "Y": _rows(
        ("11d1", 1, 0), ("dd1d", 3, -2), ("dd10", 2, -1), ("d01d", 2, -1),
        ("0d1d", 2, -1), ("d010", 1, 0), ("0d10", 1, 0), ("001d", 1, 0),
    ),
}


@dataclass(frozen=True)
class IneqSystem:
    name: str
    d: int
    n: int
    rows: tuple[tuple[tuple[Fraction, ...], Fraction], ...]
    symbolic: tuple[SymbolicRow, ...] = field(default=(), repr=False)

    def with_box(self) -> list[tuple[tuple[Fraction, ...], Fraction]]:
        out = list(self.rows)
        for i in range(self.n):
            e = [Fraction(0)] * self.n
            e[i] = Fraction(1)
            out.append((tuple(e), Fraction(1)))
            e = [Fraction(0)] * self.n
            e[i] = Fraction(-1)
            out.append((tuple(e), Fraction(0)))
        return out


def constraint_system(name: str, d: int) -> IneqSystem:
    """The graph's rows instantiated at dimension ``d`` (the box is implicit)."""
    topo = get_topology(name)
    if int(d) < 2:
        raise ConfigError("exponent systems are stated for d >= 2")
    sym = SYSTEMS[topo.name]
    rows = tuple((r.coefficients(d), r.bound(d)) for r in sym)
    return IneqSystem(topo.name, int(d), topo.n, rows, sym)


def box_system(n: int) -> IneqSystem:
    return IneqSystem("BOX", 0, n, ())


def _solve(a: Sequence[Sequence[Fraction]], b: Sequence[Fraction]) -> Point | None:
    """Gauss-Jordan elimination over Q; None when singular."""
    n = len(a)
    m = [list(row) + [rhs] for row, rhs in zip(a, b)]
    for c in range(n):
        pivot = next((r for r in range(c, n) if m[r][c] != 0), None)
        if pivot is None:
            return None
        m[c], m[pivot] = m[pivot], m[c]
        for r in range(n):
            if r != c and m[r][c] != 0:
                factor = m[r][c] / m[c][c]
                m[r] = [x - factor * y for x, y in zip(m[r], m[c])]
    return tuple(m[i][n] / m[i][i] for i in range(n))


def _satisfies(u: Point, rows: Iterable[tuple[tuple[Fraction, ...], Fraction]]) -> bool:
    return all(sum(a * x for a, x in zip(coef, u)) <= rhs for coef, rhs in rows)


def enumerate_vertices(system: IneqSystem) -> list[Point]:
    """All vertices of {u in [0,1]^n : rows hold}, sorted.

    Every n-subset of constraints (box facets included) is solved exactly and
    the feasible solutions are kept.
    """
    rows = system.with_box()
    found: set[Point] = set()
    for subset in itertools.combinations(rows, system.n):
        u = _solve([r[0] for r in subset], [r[1] for r in subset])
        if u is not None and _satisfies(u, rows):
            found.add(u)
    return sorted(found)


def as_point(u: Iterable) -> Point:
    return tuple(Fraction(x) for x in u)


def violated_rows(u: Sequence, system: IneqSystem) -> list[int]:
    """Indices of the system's rows that ``u`` violates (box excluded)."""
    u = as_point(u)
    return [i for i, (coef, rhs) in enumerate(system.rows) if sum(a * x for a, x in zip(coef, u)) > rhs]


def is_admissible(u: Sequence, system: IneqSystem) -> bool:
    u = as_point(u)
    if len(u) != system.n:
        raise DimensionMismatch(f"point has {len(u)} coordinates, system has {system.n}")
    return _satisfies(u, system.with_box())


def point_to_json(u: Point) -> list[list[int]]:
    return [[x.numerator, x.denominator] for x in u]


def point_from_json(raw: Sequence[Sequence[int]]) -> Point:
    return tuple(Fraction(int(a), int(b)) for a, b in raw)


def format_point(u: Point) -> str:
    return "(" + ",".join(str(x) for x in u) + ")"


@dataclass(frozen=True)
class GoldenList:
    graph: str
    d: int
    citation: str
    vertices: tuple[Point, ...]


@lru_cache(maxsize=1)
def load_golden() -> dict[str, GoldenList]:
    """Reference d=2 vertex lists, kept verbatim as exact rationals."""
    text = resources.files("fqgraph").joinpath("data/golden_vertices.json").read_text()
    out = {}
    for entry in json.loads(text):
        verts = tuple(point_from_json(v) for v in entry["vertices"])
        out[entry["graph"]] = GoldenList(entry["graph"], int(entry["d"]), entry["citation"], verts)
    return out


@dataclass(frozen=True)
class DiffReport:
    graph: str
    d: int
    computed: tuple[Point, ...]
    golden: tuple[Point, ...]
    missing: tuple[Point, ...]  # stored but not a computed vertex
    extra: tuple[Point, ...]  # computed but not stored
    golden_violations: tuple[tuple[Point, tuple[int, ...]], ...]  # stored points outside the polytope

    @property
    def match(self) -> bool:
        return not self.missing and not self.extra

    def to_dict(self) -> dict:
        return {
            "graph": self.graph,
            "d": self.d,
            "match": self.match,
            "computed_count": len(self.computed),
            "golden_count": len(self.golden),
            "missing": [format_point(u) for u in self.missing],
            "extra": [format_point(u) for u in self.extra],
            "golden_violations": [
                {"point": format_point(u), "violated_rows": list(rows)} for u, rows in self.golden_violations
            ],
        }


def compare_with_paper(name: str) -> DiffReport:
    """Set comparison between enumerated d=2 vertices and the stored reference list.

    Disagreements are reported, never corrected; stored points that break a
    row of the system are listed with the offending row indices.
    """
    name = get_topology(name).name
    gold = load_golden()[name]
    system = constraint_system(name, gold.d)
    computed = enumerate_vertices(system)
    cset, gset = set(computed), set(gold.vertices)
    violations = tuple((u, tuple(violated_rows(u, system))) for u in gold.vertices if violated_rows(u, system))
    return DiffReport(
        name,
        gold.d,
        tuple(computed),
        gold.vertices,
        tuple(sorted(gset - cset)),
        tuple(sorted(cset - gset)),
        violations,
    )


compare_with_golden = compare_with_paper


@dataclass(frozen=True)
class ImplicationReport:
    graph: str
    subgraph: str
    d: int
    contained: bool
    counterexamples: tuple[Point, ...]

    def to_dict(self) -> dict:
        return {
            "graph": self.graph,
            "subgraph": self.subgraph,
            "d": self.d,
            "contained": self.contained,
            "counterexamples": [format_point(u) for u in self.counterexamples],
        }


def implication_check(graph: str, subgraph: str, d: int) -> ImplicationReport:
    """Decide P(graph) <= P(subgraph) by testing every vertex of P(graph)."""
    big = constraint_system(graph, d)
    small = constraint_system(subgraph, d)
    if big.n != small.n:
        raise ArityMismatch(f"{big.name} has {big.n} exponents, {small.name} has {small.n}")
    bad = tuple(u for u in enumerate_vertices(big) if not is_admissible(u, small))
    return ImplicationReport(big.name, small.name, int(d), not bad, bad)


def certify_witness(point: Sequence, graph: str, subgraph: str, d: int) -> bool:
    """True when ``point`` lies in P(graph) but not in P(subgraph).

    Such a point shows that bounds for ``graph`` do not force bounds for
    ``subgraph`` at the level of necessary conditions.
    """
    return is_admissible(point, constraint_system(graph, d)) and not is_admissible(
        point, constraint_system(subgraph, d)
    )


def _pt(text: str) -> Point:
    return tuple(Fraction(x) for x in text.strip("()").split(","))


@dataclass(frozen=True)
class ExpectedImplication:
    graph: str
    subgraph: str
    contained: bool
    witness: Point | None
    note: str


# Outcomes known at d = 2, with the exponent tuple used as a counterexample.
EXPECTED_IMPLICATIONS: tuple[ExpectedImplication, ...] = (
    ExpectedImplication("K3", "P2", True, None, "triangle bounds imply hinge bounds"),
    ExpectedImplication("C4_DIAG", "P3", True, None, "diagonal-square bounds imply P3 bounds"),
    ExpectedImplication("C4", "P3", True, None, "square bounds imply P3 bounds"),
    ExpectedImplication("C4_DIAG", "Y", True, None, "diagonal-square bounds imply Y bounds"),
    ExpectedImplication("C4", "Y", True, None, "square bounds imply Y bounds"),
    ExpectedImplication("C4", "C4_DIAG", True, None, "square bounds imply diagonal-square bounds"),
    ExpectedImplication("C4_DIAG", "KITE", True, None, "diagonal-square bounds imply kite bounds"),
    ExpectedImplication("C4_DIAG", "C4", False, _pt("(2/3,0,2/3,0)"), "p = (3/2, inf, 3/2, inf)"),
    ExpectedImplication("P2", "K3", False, _pt("(2/3,1/3,2/3)"), "p = (3/2, 3, 3/2)"),
    ExpectedImplication("P3", "C4_DIAG", False, _pt("(2/3,1/3,2/3,0)"), "p = (3/2, 3, 3/2, inf)"),
    ExpectedImplication("P3", "C4", False, _pt("(2/3,1/3,2/3,0)"), "p = (3/2, 3, 3/2, inf)"),
    ExpectedImplication("Y", "C4_DIAG", False, _pt("(0,2/3,0,2/3)"), "p = (inf, 3/2, inf, 3/2)"),
    ExpectedImplication("KITE", "C4_DIAG", False, _pt("(1/2,1/2,1/6,2/3)"), "p = (2, 2, 6, 3/2)"),
)


def expected_implication(graph: str, subgraph: str) -> ExpectedImplication | None:
    for e in EXPECTED_IMPLICATIONS:
        if (e.graph, e.subgraph) == (graph, subgraph):
            return e
    return None


def graph_pairs(n: int | None = None) -> list[tuple[str, str]]:
    """Ordered pairs of distinct named graphs sharing a vertex count."""
    out = []
    for a, b in itertools.permutations(GRAPH_NAMES, 2):
        na, nb = get_topology(a).n, get_topology(b).n
        if na == nb and (n is None or na == n):
            out.append((a, b))
    return out
