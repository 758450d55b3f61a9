"""Constants shared by every module that depends on the vertical coefficient.

The vertical part of geodesics, CC spheres and the CC distance all carry one
multiplicative constant. The horizontality-consistent value is 2; the value 4
is kept only so that published displays can be reproduced in reports.
"""

CORRECTED_KAPPA = 2.0
PUBLISHED_KAPPA = 4.0


def vertical_kappa(as_published: bool = False) -> float:
    """Return the vertical coefficient for the requested evaluation mode."""
    return PUBLISHED_KAPPA if as_published else CORRECTED_KAPPA
