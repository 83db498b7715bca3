import math

TWO_PI = 2.0 * math.pi

# Spin-layer drive strengths (rad/s)
DEFAULT_OMEGA = TWO_PI * 2e6
DEFAULT_OMEGA_PRIME = TWO_PI * 2e6

# Quantum Rabi model sites (rad/s)
QRM_OMEGA_C = TWO_PI * 7.0e9
QRM_OMEGA_Q_HIGH = TWO_PI * 6.1e9
QRM_OMEGA_Q_LOW = TWO_PI * 5.1e9
QRM_COUPLING_G = TWO_PI * 2.0e9

MAX_TRUNCATED_DIMENSION = 1296

# Verification tolerances
GATE_TOLERANCE = 1e-9
HOLONOMY_TOLERANCE = 1e-9
DD_COMMUTATOR_TOLERANCE = 1e-12
DFS_TOLERANCE = 1e-10
QRM_SINGLE_QUBIT_FIDELITY = 0.999
QRM_TWO_QUBIT_FIDELITY = 0.998
TRUNCATION_STABILITY_TOLERANCE = 1e-4
STEP_STABILITY_TOLERANCE = 1e-5
LEAKAGE_LIMIT = 0.01
