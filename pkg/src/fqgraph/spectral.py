"""Additive characters, the Fourier transform on F_q^d, and sphere-measure decay.

Conventions (normalized counting measure on space, counting measure on
frequencies)::

    F(m)      = q^-d  sum_x f(x) chi(-m.x)        chi(s) = exp(2 pi i s / q)
    f(x)      =       sum_m F(m) chi(m.x)
    (f * g)(x) = q^-d sum_y f(x - y) g(y)         so  F(f * g) = F(f) F(g)

Grid functions are numpy arrays of shape (q,)*d indexed by coordinates.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import ConfigError, DimensionMismatch, EmptySphere
from .field import Field, make_field
from .geometry import Vec, sphere


def additive_character(field: Field, s: int) -> complex:
    return complex(np.exp(2j * np.pi * (int(s) % field.q) / field.q))


def character_matrix(q: int, sign: int = -1) -> np.ndarray:
    """M[m, x] = chi(sign * m x)."""
    k = np.arange(q)
    return np.exp(sign * 2j * np.pi * ((np.outer(k, k) % q) / q))


def _grid_q(f: np.ndarray) -> int:
    if f.ndim == 0 or len(set(f.shape)) != 1:
        raise DimensionMismatch(f"grid functions must have shape (q,)*d, got {f.shape}")
    return f.shape[0]


def _axis_transform(f: np.ndarray, mat: np.ndarray) -> np.ndarray:
    out = f.astype(complex)
    for axis in range(f.ndim):
        out = np.moveaxis(np.tensordot(mat, out, axes=([1], [axis])), 0, axis)
    return out


def dft_forward(f: np.ndarray, method: str = "fft") -> np.ndarray:
    """F(m) = q^-d sum_x f(x) chi(-m.x)."""
    f = np.asarray(f)
    q = _grid_q(f)
    if method == "fft":
        return np.fft.fftn(f) / f.size
    if method == "naive":
        return _axis_transform(f, character_matrix(q, -1)) / f.size
    raise ConfigError(f"unknown DFT method {method!r}")


def dft_inverse(F: np.ndarray, method: str = "fft") -> np.ndarray:
    """f(x) = sum_m F(m) chi(m.x)."""
    F = np.asarray(F)
    q = _grid_q(F)
    if method == "fft":
        return np.fft.ifftn(F) * F.size
    if method == "naive":
        return _axis_transform(F, character_matrix(q, +1))
    raise ConfigError(f"unknown DFT method {method!r}")


def convolve(f: np.ndarray, g: np.ndarray, method: str = "fft") -> np.ndarray:
    """(f * g)(x) = q^-d sum_y f(x - y) g(y), returned as a real array."""
    f = np.asarray(f, dtype=float)
    g = np.asarray(g, dtype=float)
    if f.shape != g.shape:
        raise DimensionMismatch(f"shapes differ: {f.shape} vs {g.shape}")
    _grid_q(f)
    if method == "fft":
        return np.real(np.fft.ifftn(np.fft.fftn(f) * np.fft.fftn(g))) / f.size
    if method == "direct":
        return _convolve_direct(f, g)
    raise ConfigError(f"unknown convolution method {method!r}")


def _convolve_direct(f: np.ndarray, g: np.ndarray) -> np.ndarray:
    out = np.zeros_like(f)
    axes = tuple(range(f.ndim))
    for y in zip(*np.nonzero(g)):
        out += g[y] * np.roll(f, shift=y, axis=axes)
    return out / f.size


def _sphere_or_raise(field: Field, d: int, t: int):
    s = sphere(field, d, t)
    if s.size == 0:
        raise EmptySphere(f"S_{t % field.q} is empty in F_{field.q}^{d}")
    return s


def sphere_fourier(field: Field, d: int, t: int, m: Vec) -> complex:
    """(d sigma_t)^(m) = |S_t|^-1 sum_{x in S_t} chi(m.x), by the direct sum."""
    s = _sphere_or_raise(field, d, t)
    mv = np.asarray(m, dtype=np.int64).reshape(-1)
    if mv.size != d:
        raise DimensionMismatch(f"m has length {mv.size}, expected {d}")
    phases = s.points @ mv % field.q
    return complex(np.exp(2j * np.pi * phases / field.q).sum() / s.size)


def sphere_spectrum(field: Field, d: int, t: int) -> np.ndarray:
    """(d sigma_t)^(m) for every frequency m, via one transform of 1_{S_t}."""
    s = _sphere_or_raise(field, d, t)
    ind = s.indicator(float)
    return np.conj(dft_forward(ind)) * (ind.size / s.size)


def max_nonzero_coefficient(field: Field, d: int, t: int) -> float:
    """max over m != 0 of |(d sigma_t)^(m)|.

    The indicator is real, so the half spectrum from ``rfftn`` already holds
    every modulus (the other half are complex conjugates).
    """
    return _max_nonzero_cached(field.q, int(d), field.reduce(t))


@lru_cache(maxsize=1024)
def _max_nonzero_cached(q: int, d: int, t: int) -> float:
    s = _sphere_or_raise(make_field(q), d, t)
    mag = np.abs(np.fft.rfftn(s.indicator(float))).reshape(-1)
    return float(mag[1:].max()) / s.size if mag.size > 1 else 0.0


def decay_ratio(field: Field, d: int, t: int) -> float:
    """max over m != 0 of |(d sigma_t)^(m)| * q^((d-1)/2)."""
    if field.reduce(t) == 0:
        raise ConfigError("decay_ratio needs t != 0")
    return max_nonzero_coefficient(field, d, t) * field.q ** ((d - 1) / 2)


@dataclass(frozen=True)
class KhatNorms:
    l2_opnorm: float
    sup_norm: float


def khat_l2_opnorm(field: Field, d: int, t: int) -> KhatNorms:
    """Norms of convolution with the kernel K^ = d sigma_t - 1 (spatial side).

    The multiplier of f -> f * K^ is (d sigma_t)^(m) - delta_0(m), so the
    L2 operator norm is the largest modulus of the sphere spectrum off m = 0.
    """
    if field.reduce(t) == 0:
        raise ConfigError("khat_l2_opnorm needs t != 0")
    if d < 2:
        raise ConfigError("khat_l2_opnorm needs d >= 2")
    s = _sphere_or_raise(field, d, t)
    # the multiplier vanishes at m = 0 since (d sigma_t)^(0) = 1
    opnorm = max_nonzero_coefficient(field, d, t)
    kernel_values = (field.q**d / s.size - 1.0, 1.0)
    return KhatNorms(opnorm, float(max(abs(v) for v in kernel_values)))


def khat_multiplier(field: Field, d: int, t: int) -> np.ndarray:
    """Full multiplier array of f -> f * K^; oracle for :func:`khat_l2_opnorm`."""
    s = _sphere_or_raise(field, d, t)
    kernel = s.indicator(float) * (field.q**d / s.size) - 1.0
    return dft_forward(kernel)
