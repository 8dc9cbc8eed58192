"""Value of information for high-dimensional Gaussian decision problems.

Monte Carlo estimation of the expected value of information, covering and
packing numbers under the intrinsic metric, and entropy bounds on the
generic-chaining functional.
"""
from voichain._accel import backend
from voichain.chaining import GammaBounds, dudley_upper, gamma_bounds, perfect_info_benchmark, sudakov_lower
from voichain.covering import (
    CoveringEstimate, PointCloud, exact_covering_number, exact_packing_number, greedy_packing,
    make_cloud, packing_covering_sandwich, volume_bounds)
from voichain.errors import (
    DimensionMismatch, InsufficientData, NotPSD, SingularOperator, SingularSignalCovariance,
    UnsupportedSet, VoiError)
from voichain.experiments import SweepConfig, SweepRecord, fit_loglog_slope, run_sweep
from voichain.gaussian_env import (
    JointGaussian, PosteriorOperator, SpectralBand, compute_posterior_operator,
    random_bounded_operator, sample_posterior_means)
from voichain.geometry import (
    ActionSet, IntrinsicMetric, diameter, distance, ellipsoid_unit_ball_volume, support_function)
from voichain.increments import TailReport, check_increments
from voichain.voi import BoundReport, VoiEstimate, estimate_voi, voi_sandwich

__version__ = "0.1.0"
