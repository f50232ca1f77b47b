"""Gaunt coupling coefficients for spherical harmonics, spherical
multiplication in the coefficient domain, and spherical-acoustics
operators built on them."""

from .acoustics import (
    DEFAULT_AIR_DENSITY,
    DEFAULT_SOUND_SPEED,
    ArrayModel,
    DirectionalPSD,
    RadialDiag,
    Sensor,
    array_atf_matrix,
    array_sensor_coeffs,
    binaural_beam_matrices,
    binaural_beam_weights,
    binaural_beamform,
    encoding_filters_ls,
    energy_vector,
    intensity_at,
    plane_wave_coeffs,
    pressure_at,
    radial_diag,
    recommended_expansion_order,
    scm_anisotropic_field,
    scm_array_anisotropic,
    scm_array_isotropic,
    scm_isotropic_field,
    scm_spaced_anisotropic,
    scm_spaced_isotropic,
    sh_rotation_matrix,
    steer_axisymmetric,
    translate_coeffs,
    velocity_at,
    window_matrix,
)
from .basis import (
    BasisMap,
    CoeffVector,
    ConjugationMap,
    build_T,
    build_U,
    conjugate_coeffs,
    convert_coeffs,
)
from .gaunt import (
    GauntMatrix,
    GauntTable,
    build_table,
    gaunt_complex,
    gaunt_matrix,
    gaunt_real,
    gaunt_real_oracle,
    multiply_spherical,
)
from .quadrature import (
    QuadratureGrid,
    build_grid,
    forward_sht,
    grid_function,
    inner_products,
    inverse_sht,
)
from .sh import (
    Direction,
    acn_index,
    acn_order_degree,
    assoc_legendre,
    max_order,
    num_coeffs,
    sh_complex,
    sh_matrix,
    sh_real,
    sh_vector,
)
from .tableio import TableFormatError, load_table, save_table, tables_to_json
from .wigner import factorial_exact, log_factorial, wigner3j

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
