"""Steering witnesses from entanglement of constructed two-qubit states."""

__version__ = "0.1.0"

from .errors import (  # noqa: E402
    ContractViolation,
    DegenerateDataError,
    DimensionError,
    NotPSDError,
    ParameterError,
)
from .measures import concurrence, correlation_matrix, fidelity  # noqa: E402
from .states import (  # noqa: E402
    StateFamilyParams,
    construct_tau1,
    construct_tau2,
    pure_psi,
    target_state,
    validate,
)
from .steering import (  # noqa: E402
    Region,
    bell_geom,
    boundary_alice_to_bob,
    boundary_bob_to_alice,
    classify_region,
    infinite_setting_a_to_b_only,
    one_way_band,
    witness_steering,
)
