"""Published reference bounds for gamma_{sigma,d}, embedded for display only.

These literals never feed a computation.  The table command prints them next
to freshly computed bounds so any regression is visible as a delta; the two
comparison columns record earlier published two-sequence bounds.
"""

from __future__ import annotations

from typing import NamedTuple


class ReferenceRow(NamedTuple):
    sigma: int
    d: int
    bound: float
    l: int


# One row per published (sigma, d) lower bound, with the word length l that
# produced it.
LOWER_BOUNDS: tuple[ReferenceRow, ...] = (
    ReferenceRow(2, 2, 0.781281, 10),
    ReferenceRow(2, 3, 0.704473, 7),
    ReferenceRow(2, 4, 0.661274, 5),
    ReferenceRow(2, 5, 0.636022, 4),
    ReferenceRow(2, 6, 0.617761, 3),
    ReferenceRow(2, 7, 0.602493, 2),
    ReferenceRow(2, 8, 0.594016, 2),
    ReferenceRow(2, 9, 0.587900, 2),
    ReferenceRow(2, 10, 0.570155, 1),
    ReferenceRow(2, 11, 0.570155, 1),
    ReferenceRow(2, 12, 0.563566, 1),
    ReferenceRow(2, 13, 0.563566, 1),
    ReferenceRow(2, 14, 0.558494, 1),
    ReferenceRow(3, 2, 0.671697, 6),
    ReferenceRow(3, 3, 0.556649, 4),
    ReferenceRow(3, 4, 0.498525, 3),
    ReferenceRow(3, 5, 0.461402, 2),
    ReferenceRow(3, 6, 0.421436, 1),
    ReferenceRow(3, 7, 0.413611, 1),
    ReferenceRow(3, 8, 0.405539, 1),
    ReferenceRow(4, 2, 0.599248, 5),
    ReferenceRow(4, 3, 0.457311, 3),
    ReferenceRow(4, 4, 0.389008, 2),
    ReferenceRow(4, 5, 0.335517, 1),
    ReferenceRow(4, 6, 0.324014, 1),
    ReferenceRow(5, 2, 0.539129, 4),
    ReferenceRow(5, 3, 0.356717, 2),
    ReferenceRow(5, 4, 0.289398, 1),
    ReferenceRow(5, 5, 0.273884, 1),
    ReferenceRow(6, 2, 0.479452, 3),
    ReferenceRow(6, 3, 0.309424, 2),
    ReferenceRow(6, 4, 0.245283, 1),
    ReferenceRow(7, 2, 0.444577, 3),
    ReferenceRow(7, 3, 0.234567, 1),
    ReferenceRow(7, 4, 0.212786, 1),
    ReferenceRow(8, 2, 0.356545, 2),
    ReferenceRow(8, 3, 0.207547, 1),
    ReferenceRow(9, 2, 0.327935, 2),
    ReferenceRow(9, 3, 0.186104, 1),
    ReferenceRow(10, 2, 0.303490, 2),
    ReferenceRow(10, 3, 0.168674, 1),
)

LOWER_BOUND_BY_KEY: dict[tuple[int, int], ReferenceRow] = {
    (row.sigma, row.d): row for row in LOWER_BOUNDS
}

# Earlier published two-sequence bounds (comparison columns):
# sigma -> (Baeza-Yates et al., Dancik/Deken).  None where not published.
TWO_SEQUENCE_COMPARISON: dict[int, tuple[float | None, float]] = {
    3: (0.63376, 0.61538),
    4: (0.55282, 0.54545),
    5: (0.50952, 0.50615),
    6: (0.46695, 0.47169),
    7: (None, 0.44502),
    8: (None, 0.42237),
    9: (None, 0.40321),
    10: (None, 0.38656),
}
