"""Floating-point trajectories and numeric checks of exact certificates."""

from .checks import (
    DenominatorVanished,
    cofactor_law_check,
    first_integral_drift,
    integrate,
    lyapunov_max,
    sample_times,
    volume_contraction_check,
)
from .export import export_trajectory, read_csv, svg_projection, write_csv, write_svg
from .field import NumericField, NumericMismatch, compile_polynomial
from .integrator import DEFAULT_ATOL, DEFAULT_RTOL, Divergence, IntegratorStats, StepUnderflow, Trajectory, dopri5
