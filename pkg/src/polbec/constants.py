"""Physical constants used throughout (SI, CODATA via scipy).

Exposed read-only so tests can assert against the exact values the
package computes with.
"""

from scipy.constants import c as C_LIGHT
from scipy.constants import h as H_PLANCK
from scipy.constants import hbar as HBAR
from scipy.constants import k as K_B

# Riemann zeta(3/2); checked against a partial-sum oracle in the tests.
ZETA_3_2 = 2.6123753486854883

# Riemann zeta(1/2); needed by the reflection formula for zeta at
# negative half-integer arguments (polylog expansion near unit fugacity).
ZETA_1_2 = -1.4603545088095868

__all__ = ["C_LIGHT", "H_PLANCK", "HBAR", "K_B", "ZETA_3_2", "ZETA_1_2"]
