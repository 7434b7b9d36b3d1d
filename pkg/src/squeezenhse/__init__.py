"""Squeezed-boson BdG lattices: skin-effect diagnostics and impurity response.

Builds quadratic bosonic Bogoliubov-de Gennes lattice models, diagnoses
algebraic (power-law) non-Hermitian skin localization through fractal
dimensions and layer-density fits, and quantifies the spectral
sensitivity to weak impurities with exact response-matrix and non-Bloch
Green's-function methods.
"""

from .lattice import (BdGOperator, BlochOperator, LatticeError, LatticeSpec,
                      ModelParams, SolvableParams, assemble_bdg,
                      bloch_operator, build_lattice, ph_symmetry_residual,
                      tau_x, tau_z)
from .spectral import (EigensolverError, FitResult, SensitivityReport,
                       Spectrum, compare_spectra, default_fit_window,
                       diagonalize, fit_decay, fractal_dimension,
                       fractal_dimensions, layer_density, match_distance,
                       spectral_diameter)
from .impurity import (ImpuritySpec, impurity_bdg, perturbed_dynamical,
                       run_sensitivity)
from .greens import (BlockDecomposition, ResponseRadius, SingularEnergyError,
                     bare_green, bare_green_columns, block_transform,
                     dense_response_matrix, nullity_count,
                     response_spectral_radius, solvable_blocks)
from .nonbloch import (LaurentCoeffs, MuExtrema, RootCollisionError, RootPair,
                       asymptotic_rho, char_roots, char_roots_grid,
                       cylinder_spectrum, default_ky_grid, gbz_radius,
                       laurent_coeffs, laurent_energy, mu_extrema,
                       residue_propagator)

__version__ = "0.1.0"
