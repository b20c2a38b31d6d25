from rtspectra.dispersion.scan import (
    DispersionCurve,
    DispersionSample,
    critical_frequency,
    half_plane_samples,
    ray_samples,
    resolve_xi_cap,
    scan,
    solve_sample,
)
from rtspectra.dispersion.stability import (
    StabilityReport,
    classify_periodic,
    classify_whole_plane,
    escape_time,
    rayleigh_number,
)

__all__ = [
    "DispersionCurve",
    "DispersionSample",
    "StabilityReport",
    "classify_periodic",
    "classify_whole_plane",
    "critical_frequency",
    "escape_time",
    "half_plane_samples",
    "ray_samples",
    "rayleigh_number",
    "resolve_xi_cap",
    "scan",
    "solve_sample",
]
