"""Exact dephasing dynamics and two-point-measurement energetics of a
central qubit coupled to a finite thermal Ising ring."""
from ._backend import BACKEND
from .dynamics import (
    ConditionalPropagator,
    CoherenceSample,
    block_equivalence,
    coherence,
    joint_oracle_state,
    joint_state,
    propagators,
    reduced_env_state,
    reduced_system_state,
)
from .model import (
    DensityMatrix,
    HamiltonianSet,
    ModelParams,
    build_hamiltonians,
    check_dissipation_condition,
    gibbs_state,
    initial_qubit_state,
)
from .thermo import (
    coherent_energy_amplitudes,
    first_law_terms,
    mean_heat,
    mean_work,
    thermo_record,
)
from .trajectory import Trajectory, compute_trajectory, time_grid
from .witness import blp_measure, information_flow, trace_distance_pair

__version__ = "0.1.0"
