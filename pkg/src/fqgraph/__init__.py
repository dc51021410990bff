"""Graph-indexed multilinear forms and spherical averages over F_q^d."""
from importlib.metadata import PackageNotFoundError, version as _version

try:
    __version__ = _version("artifact")
except PackageNotFoundError:  # pragma: no cover - source checkout without install
    __version__ = "0.1.0"

from .averaging import INF, TestFamily, apply_averaging, averaging_ratio, estimate_averaging_norm, lp_norm
from .exponents import (
    compare_with_paper,
    constraint_system,
    enumerate_vertices,
    implication_check,
    is_admissible,
)
from .field import Field, eta, make_field, nu
from .forms import GraphSpec, NormMode, estimate_form_norm, eval_form, form_ratio, normalizing_factor
from .geometry import count_embeddings, norm_of, plane_sphere_count, sphere, sphere_sphere_count, theta_rotation
from .graphs import GRAPH_NAMES
from .spectral import convolve, decay_ratio, dft_forward, dft_inverse, khat_l2_opnorm, sphere_fourier

__all__ = [
    "GRAPH_NAMES", "INF", "Field", "GraphSpec", "NormMode", "TestFamily",
    "apply_averaging", "averaging_ratio", "compare_with_paper", "constraint_system", "convolve",
    "count_embeddings", "decay_ratio", "dft_forward", "dft_inverse", "enumerate_vertices",
    "estimate_averaging_norm", "estimate_form_norm", "eta", "eval_form", "form_ratio",
    "implication_check", "is_admissible", "khat_l2_opnorm", "lp_norm", "make_field", "norm_of",
    "normalizing_factor", "nu", "plane_sphere_count", "sphere", "sphere_fourier",
    "sphere_sphere_count", "theta_rotation",
]
