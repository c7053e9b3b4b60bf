"""Mean Euler characteristics of Gaussian excursion sets.

Closed-form flag and curvature densities of excursion sets of stationary
Gaussian random fields, expected Euler characteristics in zonotope
windows, and Monte-Carlo validation by exact field simulation and cubical
Euler-characteristic counting.
"""

__version__ = "0.1.0"

from .densities import (  # noqa: F401
    ExcursionSpec,
    curvature_density_aniso,
    curvature_density_iso,
    flag_density_qk,
    mc_total_flag_mass,
    volume_density,
)
from .grassmann import Flag, Subspace, sample_flag  # noqa: F401
from .models import CovarianceModel  # noqa: F401
from .simulate import EmbeddingNotPD, FieldSample, GridSpec, simulate  # noqa: F401
from .topology import BinaryGrid, euler_char, euler_char_2d_oracle  # noqa: F401
from .zonotope import (  # noqa: F401
    Zonotope,
    expected_euler_pkf_iso,
    expected_euler_zonotope,
    faces_at_origin,
    intrinsic_volumes_ball,
    intrinsic_volumes_box,
)
