"""
Independent exact references used to validate the engine
"""

from .ou import OuSpec, ou_exact_second_moment, ou_sample_stationary
from .convolution import bilinear_B_direct, MAX_DIRECT_MODES
from .roots import scalar_root

__all__ = [
    'OuSpec',
    'ou_exact_second_moment',
    'ou_sample_stationary',
    'bilinear_B_direct',
    'MAX_DIRECT_MODES',
    'scalar_root',
]
