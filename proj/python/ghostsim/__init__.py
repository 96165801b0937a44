"""Pseudo-thermal ghost-imaging simulation and reconstruction toolkit.

The heavy lifting lives in the C++ extension ``ghostsim._core``; this package
re-exports the main operations.
"""

from ._core import (
    OpticalLayout,
    SlitGeometry,
    __version__,
    bp_oracle_enumerate,
    cs_reconstruct,
    double_slit_metrics,
    fast_layout,
    fresnel_propagate,
    generate_source_realization,
    gi_reconstruct,
    image_error,
    lasso_fista,
    make_double_slit,
    paper_layout,
    run_campaign,
    speckle_correlation_width,
    split_seed,
)

__all__ = [
    "OpticalLayout",
    "SlitGeometry",
    "__version__",
    "bp_oracle_enumerate",
    "cs_reconstruct",
    "double_slit_metrics",
    "fast_layout",
    "fresnel_propagate",
    "generate_source_realization",
    "gi_reconstruct",
    "image_error",
    "lasso_fista",
    "make_double_slit",
    "paper_layout",
    "run_campaign",
    "speckle_correlation_width",
    "split_seed",
]
