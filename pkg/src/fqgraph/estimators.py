"""scikit-learn style wrappers around the library.

Each sample is one grid function (or a concatenation of ``n`` of them for a
graph form) flattened in row-major order, so a batch is an ordinary
(n_samples, n_features) matrix.
"""
from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from ._validation import check_batch, check_dimension, check_field
from .averaging import TestFamily, apply_averaging, estimate_averaging_norm, parse_exponent, parse_exponents
from .errors import ArityMismatch, EmptySphere
from .forms import GraphSpec, estimate_form_norm, eval_form, normalizing_factor
from .geometry import sphere


class SphericalAverager(BaseEstimator, TransformerMixin):
    """Apply the averaging operator A over S_t to each sample."""

    def __init__(self, q=5, d=2, t=1, method="fft"):
        self.q = q
        self.d = d
        self.t = t
        self.method = method

    def fit(self, X=None, y=None):
        self.field_ = check_field(self.q)
        self.d_ = check_dimension(self.d)
        size = sphere(self.field_, self.d_, self.t).size
        if size == 0:
            raise EmptySphere(f"S_{self.t} is empty in F_{self.q}^{self.d}")
        self.sphere_size_ = size
        self.n_features_in_ = self.field_.q**self.d_
        if X is not None:
            check_batch(X, self.field_.q, self.d_)
        return self

    def transform(self, X):
        check_is_fitted(self, "field_")
        X = check_batch(X, self.field_.q, self.d_)
        shape = (self.field_.q,) * self.d_
        rows = [apply_averaging(x.reshape(shape), self.field_, self.t, self.method).reshape(-1) for x in X]
        return np.vstack(rows)


class GraphFormEvaluator(BaseEstimator, TransformerMixin):
    """Evaluate Lambda_G on each sample; a sample holds the n input functions side by side."""

    def __init__(self, graph="K2", q=5, d=2, t=1, mode="embedding", path="auto"):
        self.graph = graph
        self.q = q
        self.d = d
        self.t = t
        self.mode = mode
        self.path = path

    def fit(self, X=None, y=None):
        self.spec_ = GraphSpec(self.graph, check_field(self.q), check_dimension(self.d), self.t, self.mode)
        self.normalizer_ = normalizing_factor(self.spec_)
        self.n_features_in_ = self.spec_.n * self.spec_.q**self.spec_.d
        if X is not None:
            check_batch(X, self.spec_.q, self.spec_.d, self.spec_.n)
        return self

    def evaluate(self, fs) -> float:
        check_is_fitted(self, "spec_")
        if len(fs) != self.spec_.n:
            raise ArityMismatch(f"{self.spec_.name} takes {self.spec_.n} functions, got {len(fs)}")
        return eval_form(self.spec_, fs, self.path)

    def transform(self, X):
        check_is_fitted(self, "spec_")
        g = self.spec_
        X = check_batch(X, g.q, g.d, g.n)
        out = np.empty((X.shape[0], 1))
        for i, row in enumerate(X):
            fs = [block.reshape(g.shape) for block in np.split(row, g.n)]
            out[i, 0] = eval_form(g, fs, self.path)
        return out


class FormNormEstimator(BaseEstimator):
    """Estimate Lambda_G(p_1, ..., p_n) by maximizing ratios over a seeded family.

    After ``fit``: ``restricted_max_`` (indicator inputs only), ``general_max_``
    and the matching witness labels.
    """

    def __init__(self, graph="K2", q=5, d=2, t=1, mode="paper", exponents="inf,1", seed=0,
                 densities=(0.05, 0.2, 0.5), n_random_tuples=8):
        self.graph = graph
        self.q = q
        self.d = d
        self.t = t
        self.mode = mode
        self.exponents = exponents
        self.seed = seed
        self.densities = densities
        self.n_random_tuples = n_random_tuples

    def fit(self, X=None, y=None):
        spec = GraphSpec(self.graph, check_field(self.q), check_dimension(self.d), self.t, self.mode)
        ps = parse_exponents(self.exponents) if isinstance(self.exponents, str) else tuple(
            parse_exponent(p) for p in self.exponents
        )
        if len(ps) != spec.n:
            raise ArityMismatch(f"{spec.name} takes {spec.n} exponents, got {len(ps)}")
        family = TestFamily(seed=self.seed, densities=tuple(self.densities))
        est = estimate_form_norm(spec, ps, family, self.n_random_tuples)
        self.spec_ = spec
        self.exponents_ = ps
        self.restricted_max_ = est.restricted_max
        self.restricted_witness_ = est.restricted_witness
        self.general_max_ = est.general_max
        self.general_witness_ = est.general_witness
        return self


class AveragingNormEstimator(BaseEstimator):
    """Estimate A(p -> r) over a seeded test family."""

    def __init__(self, q=5, d=2, t=1, p="inf", r="inf", seed=0, densities=(0.05, 0.2, 0.5)):
        self.q = q
        self.d = d
        self.t = t
        self.p = p
        self.r = r
        self.seed = seed
        self.densities = densities

    def fit(self, X=None, y=None):
        field = check_field(self.q)
        d = check_dimension(self.d)
        family = TestFamily(seed=self.seed, densities=tuple(self.densities))
        est = estimate_averaging_norm(field, d, self.t, parse_exponent(self.p), parse_exponent(self.r), family)
        self.restricted_max_ = est.restricted_max
        self.restricted_witness_ = est.restricted_witness
        self.general_max_ = est.general_max
        self.general_witness_ = est.general_witness
        return self
