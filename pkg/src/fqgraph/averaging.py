"""The spherical averaging operator, normalized L^p norms, and ratio estimation."""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Union

import numpy as np

from .errors import BadExponent, ConfigError, EmptySphere, ZeroFunction
from .field import Field
from .geometry import sphere
from .spectral import convolve

INF = math.inf
Exponent = Union[Fraction, float]  # a Fraction >= 1, or INF


def parse_exponent(value) -> Exponent:
    """Parse ``"3/2"``, ``2``, ``"inf"`` or a Fraction into an exact exponent in [1, inf]."""
    if isinstance(value, float) and math.isinf(value):
        p: Exponent = INF
    elif isinstance(value, str) and value.strip().lower() in {"inf", "infinity", "oo", "∞"}:
        p = INF
    else:
        try:
            p = Fraction(value) if not isinstance(value, float) else Fraction(value).limit_denominator(10**6)
        except (ValueError, ZeroDivisionError, TypeError) as exc:
            raise BadExponent(f"cannot parse exponent {value!r}") from exc
    if p < 1:
        raise BadExponent(f"exponent {value!r} is below 1")
    return p


def parse_exponents(text: str) -> tuple[Exponent, ...]:
    """Comma-separated list, e.g. ``"3/2,3,3/2,inf"``."""
    parts = [s for s in str(text).split(",") if s.strip()]
    if not parts:
        raise BadExponent("empty exponent list")
    return tuple(parse_exponent(s.strip()) for s in parts)


def reciprocal(p: Exponent) -> Fraction:
    p = parse_exponent(p)
    return Fraction(0) if p == INF else 1 / p


def format_exponent(p: Exponent) -> str:
    return "inf" if p == INF else str(p)


def lp_norm(f: np.ndarray, p: Exponent) -> float:
    """(q^-d sum |f|^p)^(1/p), or max |f| for p = inf."""
    p = parse_exponent(p)
    f = np.asarray(f)
    a = np.abs(f)
    if p == INF:
        return float(a.max())
    if f.dtype.kind in "biu" and a.max(initial=0) <= 1:
        # indicator: exact support fraction, root taken once in floating point
        return float(Fraction(int(np.count_nonzero(a)), a.size)) ** float(1 / p)
    return float(np.mean(a.astype(float) ** float(p)) ** float(1 / p))


def sphere_measure(field: Field, d: int, t: int) -> np.ndarray:
    """d sigma_t = (q^d / |S_t|) 1_{S_t}, so that A f = f * d sigma_t."""
    s = sphere(field, d, t)
    if s.size == 0:
        raise EmptySphere(f"S_{t % field.q} is empty in F_{field.q}^{d}")
    return s.indicator(float) * (field.q**d / s.size)


def sphere_sum(f: np.ndarray, field: Field, t: int, method: str = "fft") -> np.ndarray:
    """S f(x) = sum_{y in S_t} f(x - y), i.e. |S_t| times the average."""
    d = np.asarray(f).ndim
    s = sphere(field, d, t)
    if method == "fft":
        return convolve(f, s.indicator(float)) * f.size
    if method == "direct":
        out = np.zeros(np.shape(f), dtype=float)
        axes = tuple(range(d))
        for y in s.points:
            out += np.roll(f, shift=tuple(int(c) for c in y), axis=axes)
        return out
    raise ConfigError(f"unknown averaging method {method!r}")


def apply_averaging(f: np.ndarray, field: Field, t: int, method: str = "fft") -> np.ndarray:
    """A f(x) = |S_t|^-1 sum_{y in S_t} f(x - y)."""
    f = np.asarray(f, dtype=float)
    s = sphere(field, f.ndim, t)
    if s.size == 0:
        raise EmptySphere(f"S_{t % field.q} is empty in F_{field.q}^{f.ndim}")
    return sphere_sum(f, field, t, method) / s.size


def averaging_ratio(f: np.ndarray, field: Field, t: int, p: Exponent, r: Exponent) -> float:
    """||A f||_r / ||f||_p."""
    f = np.asarray(f)
    denom = lp_norm(f, p)
    if denom == 0:
        raise ZeroFunction("test function is identically zero")
    return lp_norm(apply_averaging(f, field, t), r) / denom


@dataclass(frozen=True)
class FamilyMember:
    label: str
    values: np.ndarray
    indicator: bool


@dataclass(frozen=True)
class TestFamily:
    """Seeded collection of test functions on F_q^d.

    Members: delta_0, 1_{S_s} for every s with a nonempty sphere, the full
    indicator, ``n_sets`` random sets at each density, and ``n_functions``
    random nonnegative functions.
    """

    __test__ = False  # not a pytest class

    seed: int = 0
    densities: tuple[float, ...] = (0.05, 0.2, 0.5)
    n_sets: int = 2
    n_functions: int = 2

    def members(self, field: Field, d: int) -> Iterator[FamilyMember]:
        q = field.q
        shape = (q,) * d
        delta = np.zeros(shape, dtype=np.int64)
        delta[(0,) * d] = 1
        yield FamilyMember("delta", delta, True)
        for s in range(q):
            sph = sphere(field, d, s)
            if sph.size:
                yield FamilyMember(f"sphere:{s}", sph.indicator(), True)
        yield FamilyMember("full", np.ones(shape, dtype=np.int64), True)
        rng = np.random.default_rng(self.seed)
        for rho in self.densities:
            for k in range(self.n_sets):
                ind = (rng.random(shape) < rho).astype(np.int64)
                if not ind.any():
                    ind[(0,) * d] = 1
                yield FamilyMember(f"random_set:{rho}:{k}", ind, True)
        for k in range(self.n_functions):
            yield FamilyMember(f"random_fn:{k}", rng.random(shape), False)


@dataclass(frozen=True)
class NormEstimate:
    """Maxima of a ratio over a test family.

    ``restricted_*`` ranges over indicator members only; ``general_*`` over all.
    """

    restricted_max: float
    restricted_witness: str
    general_max: float
    general_witness: str

    @property
    def value(self) -> float:
        return self.general_max

    @property
    def witness(self) -> str:
        return self.general_witness


def _fold(best: dict, key: str, ratio: float, label: str) -> None:
    if key not in best or ratio > best[key][0]:
        best[key] = (ratio, label)


def estimate_averaging_norm(
    field: Field, d: int, t: int, p: Exponent, r: Exponent, family: TestFamily | None = None
) -> NormEstimate:
    """Largest ||A f||_r / ||f||_p over the family, with its maximizer."""
    family = family or TestFamily()
    best: dict = {}
    for member in family.members(field, d):
        ratio = averaging_ratio(member.values, field, t, p, r)
        _fold(best, "general", ratio, member.label)
        if member.indicator:
            _fold(best, "restricted", ratio, member.label)
    return NormEstimate(*best["restricted"], *best["general"])
