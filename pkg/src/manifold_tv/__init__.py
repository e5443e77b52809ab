"""Total-variation denoising of manifold-valued images with proximal point methods."""

from .averaging import approx_mean5, karcher_mean, karcher_mean_batch
from .estimator import TVDenoiser
from .exceptions import (
    ConfigurationError,
    CutLocusError,
    DomainError,
    FormatError,
    InvariantError,
    ManifoldError,
    NonConvergedError,
)
from .image import ManifoldImage
from .manifolds import S1, S2, SO3, Euclidean, LCh, Pos3, Product, from_tag
from .metrics import MetricReport, delta_snr, psnr_rgb
from .prox import calc_t_data, calc_t_reg, huber, prox_coupling, prox_data, prox_pair
from .solvers import (
    DenoiseParams,
    LambdaSchedule,
    SolveReport,
    cyclic_ppa,
    denoise,
    functional_value,
    parallel_ppa,
)

__version__ = "0.1.0"

__all__ = [
    "TVDenoiser", "ManifoldImage", "DenoiseParams", "LambdaSchedule", "SolveReport",
    "cyclic_ppa", "parallel_ppa", "denoise", "functional_value",
    "calc_t_data", "calc_t_reg", "huber", "prox_data", "prox_pair", "prox_coupling",
    "karcher_mean", "karcher_mean_batch", "approx_mean5",
    "delta_snr", "psnr_rgb", "MetricReport",
    "S1", "S2", "SO3", "Pos3", "Euclidean", "Product", "LCh", "from_tag",
    "ManifoldError", "CutLocusError", "DomainError", "InvariantError",
    "NonConvergedError", "FormatError", "ConfigurationError",
]
