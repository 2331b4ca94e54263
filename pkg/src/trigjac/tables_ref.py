"""Published reference rows for the graded monomial tables.

Occupied weights 0..18 of R and R^B for five family members, as printed in the
published reference tables for this curve family.  Comparison is by occupied
weight: at a weight where several monomials of R have equal weight the printed
tables occasionally list a non-canonical representative (for example w*y at a
weight also occupied by a power of x), while this package always emits the
canonical monomial.
"""

MAX_WEIGHT = 18

# (r, s) -> sorted occupied weights of R, 0..18
R_ROWS: dict[tuple[int, int], tuple[int, ...]] = {
    (1, 3): (0, 3, 5, 6, 7, 8, 9, 10, 11, 12, 13, 14, 15, 16, 17, 18),
    (2, 3): (0, 3, 6, 7, 8, 9, 10, 11, 12, 13, 14, 15, 16, 17, 18),
    (1, 5): (0, 3, 6, 7, 9, 10, 11, 12, 13, 14, 15, 16, 17, 18),
    (2, 4): (0, 3, 6, 8, 9, 10, 11, 12, 13, 14, 15, 16, 17, 18),
    (3, 4): (0, 3, 6, 9, 10, 11, 12, 13, 14, 15, 16, 17, 18),
}

# (r, s) -> sorted occupied weights of R^B, 0..18
RB_ROWS: dict[tuple[int, int], tuple[int, ...]] = {
    (1, 3): (5, 7, 8, 10, 11, 12, 13, 14, 15, 16, 17, 18),
    (2, 3): (7, 8, 10, 11, 13, 14, 15, 16, 17, 18),
    (1, 5): (7, 10, 11, 13, 14, 16, 17, 18),
    (2, 4): (8, 10, 11, 13, 14, 16, 17, 18),
    (3, 4): (10, 11, 13, 14, 16, 17),
}

PAIRS = tuple(sorted(R_ROWS))
