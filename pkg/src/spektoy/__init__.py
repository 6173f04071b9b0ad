"""spektoy: epistemically restricted phase-space models bridged to small
dense quantum mechanics, with state-injection schemes and contextuality
witnesses verified branch-by-branch.
"""

__version__ = "0.1.0"

from . import (  # noqa: F401
    circuits,
    dense_oracle,
    equivalence,
    injection,
    phase_algebra,
    subtheory,
    toy_model,
    wigner,
    witness,
)
