"""Numerical checks of Wegner estimates for discrete Anderson models whose
single site potential has generalised step function form."""

__version__ = "0.1.0"

from .circulant import (CirculantOperator, build_circulant, column_sum_norm, eta_from_omega,
                        fold_laurent_inverse, invert_circulant, verify_rectangle_condition)
from .errors import (ConfigError, InvalidGeometry, InvalidInterval, NoConvergence,
                     QuadratureFailure, SingularCirculant, SymbolVanishes, WegnerLabError)
from .experiments import (IdsCurve, WegnerReport, estimate_ids, estimate_wegner, lipschitz_check,
                          self_averaging_check)
from .geometry import BoxSpec, TorusProjection, enumerate_box, offsets_in_sublattice, project
from .lattice import LatticeFunction
from .model import (AndersonConfig, DensityBV, PeriodicPotential, SingleSiteProfile,
                    assemble_hamiltonian, build_u, bv_norm, dump_config, lattice_hamiltonian,
                    load_config, random_potential, rescale_kappa, sample_omega,
                    wegner_constant)
from .spectral import (count_below, count_in_interval, projector_element,
                       spectral_averaging_check)
from .symbols import (CoefficientField, certify_nonvanishing, check_diagonal_dominance,
                      evaluate_symbol, wiener_inverse)
