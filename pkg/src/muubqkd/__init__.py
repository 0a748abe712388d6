"""Security analysis and simulation of bidirectional QKD with two
mutually unbiased unitary encodings, alongside the LM05 baseline."""

__version__ = "0.1.0"

from .errors import ConfigError, DomainError
from .qstate import (
    I2,
    X,
    Y,
    Z,
    EquatorBasis,
    R,
    basis_states,
    encode_overlap,
    measure,
    muub_overlap,
    ry,
)
from .entropy import binary_entropy, von_neumann_entropy
from .attack import (
    AncillaSet,
    AttackParams,
    GramSpectrum,
    attack_induced_error,
    basis_change_ancillas,
    build_ancillas,
    eve_information_general,
    eve_information_numeric,
    eve_information_optimal,
    fidelity_from_angles,
    gram_matrix,
    lambda_closed,
    lm05_eve_information,
)
from .protocol import (
    NoiseSpec,
    SessionConfig,
    SessionStats,
    SiftRecord,
    apply_noise,
    run_lm05_session,
    run_session,
    sift,
    simulate_rounds,
)
from .security import (
    KeyRateGrid,
    KeyRatePoint,
    classify_point,
    ie_curve,
    key_rate,
    keyrate_grid,
    qab_bound,
    threshold_area,
)
