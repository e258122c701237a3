"""Universal entire curves into CP^n with slow Nevanlinna growth.

Construction pipeline: exact rational curves with decay certificates
(`rcurve`), disc approximation of entire targets (`runge`), block scheduling
and translation-center resolution (`scheduler`), the summed curve evaluator
(`curve`), and two independent computations of the Nevanlinna characteristic
with the growth verification report (`nevanlinna`).
"""

from .exactnum import GPoly, GaussianRational, format_gaussian, parse_gaussian
from .kernels import IMPLEMENTATION as KERNEL_IMPLEMENTATION
from .projective import ProjPoint, fs_distance, fs_pullback_density
from .rcurve import DecayCertificate, RationalCurve
from .runge import EntireCurveSpec, mu_for_epsilon, rationalize
from .scheduler import (
    GrowthGauge,
    Schedule,
    base_constants,
    build_schedule,
    enumerate_R,
    resolve_all,
    resolve_center,
)
from .curve import UniversalCurve
from .nevanlinna import (
    QuadConfig,
    bound_lemma5,
    characteristic_area,
    characteristic_fmt,
    counting,
    growth_report,
    proximity,
)

__version__ = "0.1.0"

__all__ = [
    "GPoly",
    "GaussianRational",
    "format_gaussian",
    "parse_gaussian",
    "KERNEL_IMPLEMENTATION",
    "ProjPoint",
    "fs_distance",
    "fs_pullback_density",
    "DecayCertificate",
    "RationalCurve",
    "EntireCurveSpec",
    "mu_for_epsilon",
    "rationalize",
    "GrowthGauge",
    "Schedule",
    "base_constants",
    "build_schedule",
    "enumerate_R",
    "resolve_all",
    "resolve_center",
    "UniversalCurve",
    "QuadConfig",
    "bound_lemma5",
    "characteristic_area",
    "characteristic_fmt",
    "counting",
    "growth_report",
    "proximity",
    "__version__",
]
