"""Named arm-mean vectors used across experiments and tests.

MU1 is well-separated (gaps of 0.1); MU2 packs two tight clusters so that
ranking the arms from samples is much harder. Both have 10 arms.
"""

from __future__ import annotations

MU1 = (0.9, 0.8, 0.7, 0.6, 0.5, 0.4, 0.3, 0.2, 0.1, 0.01)
MU2 = (0.7, 0.68, 0.66, 0.64, 0.62, 0.4, 0.38, 0.36, 0.34, 0.32)

PRESETS: dict[str, tuple[float, ...]] = {"mu1": MU1, "mu2": MU2}
