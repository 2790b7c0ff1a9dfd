"""paritylab: photon-added optical states in thermal environments.

Builds excited coherent, binomial and thermal field states, evaluates
their Wigner functions and mean parity, evolves them through a thermal
channel with four cross-validating backends, and reconstructs parity
from simulated Rabi probing.
"""

__version__ = "0.1.0"

from .errors import (ConfigError, DimensionError, DomainError, ParityLabError,
                     RegimeError, ResolutionError, SpecParseError, ToleranceError,
                     TruncationError, WindowError)
from .fock import (Binomial, Coherent, DensityMatrix, Fock, FockState,
                   PhotonAdded, StateSpec, Thermal, build_binomial,
                   build_coherent, build_fock, build_pure_state, build_state,
                   excited_binomial_normalization, format_state_spec,
                   hyp2f1_terminating, mean_parity, parse_state_spec,
                   photon_add, photon_add_density, single_photon_ebs_parity)
from .wigner import (CONVENTION, GridWindow, PhasePoint, WignerGrid,
                     default_window, displacement_fock_matrix,
                     negativity_volume, wigner_grid, wigner_point)
from .channel import (ChannelParams, OriginTrajectory, ZeroScan,
                      analytic_origin_trajectory, classify_regime,
                      diagonal_origin_wigner, ecs_origin_trajectory,
                      ecs_origin_wigner, ets_origin_trajectory,
                      ets_origin_wigner, evolve_lindblad, fd_origin_trajectory,
                      fock_origin_wigner, gaussian_origin_trajectory,
                      initial_parity_roots, lindblad_origin_trajectory,
                      origin_zero_crossings, propagate_wigner_fd,
                      propagate_wigner_gaussian, threshold_tc, threshold_tc1)
from .rabi import (RabiTrace, fresnel_reconstruct, jc_trace,
                   reconstruction_error_scan)
