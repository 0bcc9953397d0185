"""Central tolerance table.

Every numerical gate in the package reads from here so that property tests
have a single point of tuning.
"""

# Plain linear-algebra identities (unitarity drift, trace preservation,
# reconstruction residuals).
ALGEBRAIC = 1e-10

# Spectral quantities: eigenvalue moduli of unitaries, argument comparisons.
SPECTRAL = 1e-8

# Agreement between closed-form channels and the generic ODE/Kraus oracles.
ODE_ORACLE = 1e-6

# State normalization and exact linear bijections (Bloch roundtrip).
NORM = 1e-12

# Inequality slack for spectral-arc checks; dims <= 6 are accurate to ~1e-12,
# so this leaves two orders of margin.
ARC_CHECK = 1e-9

# A unitary eigenvalue argument this close to -pi is folded to +pi.
BRANCH_FOLD = 1e-12
