"""Graded basis tables of R and R^B against the embedded reference rows."""

from __future__ import annotations

from fractions import Fraction

import pytest

from trigjac.curve import TrigonalCurve
from trigjac.semigroup import family_semigroup
from trigjac.tables_ref import MAX_WEIGHT, PAIRS, R_ROWS, RB_ROWS


def make(r: int, s: int) -> TrigonalCurve:
    return TrigonalCurve(r, s, [Fraction(k) for k in range(1, r + s + 1)])


@pytest.mark.parametrize("r,s", PAIRS)
def test_r_table_occupied_weights(r, s):
    table = make(r, s).basis_R(MAX_WEIGHT)
    assert tuple(table.occupied_weights) == R_ROWS[(r, s)]


@pytest.mark.parametrize("r,s", PAIRS)
def test_rb_table_occupied_weights(r, s):
    table = make(r, s).basis_RB(MAX_WEIGHT)
    assert tuple(table.occupied_weights) == RB_ROWS[(r, s)]


@pytest.mark.parametrize("r,s", PAIRS)
def test_r_weights_complement_gaps(r, s):
    sg = family_semigroup(r, s)
    occupied = set(make(r, s).basis_R(MAX_WEIGHT).occupied_weights)
    assert occupied == set(range(MAX_WEIGHT + 1)) - set(sg.gaps)


@pytest.mark.parametrize("r,s", PAIRS)
def test_rb_weight_multiset_structure(r, s):
    # R^B is free of rank 3 over C[x]: one generator per residue class mod 3,
    # with generator weights s+2r (kind w), 2s+r (kind y) and 3(r+s) (kind AB)
    curve = make(r, s)
    occupied = set(curve.basis_RB(MAX_WEIGHT).occupied_weights)
    starts = {curve.wt_w, curve.wt_y, 3 * (r + s)}
    expected = set()
    for w0 in starts:
        expected.update(range(w0, MAX_WEIGHT + 1, 3))
    assert occupied == {w for w in expected if w <= MAX_WEIGHT}


def test_r_table_one_element_per_weight():
    for r, s in PAIRS:
        table = make(r, s).basis_R(MAX_WEIGHT)
        weights = list(table.occupied_weights)
        assert len(weights) == len(set(weights))
        # weights ascend and elements carry matching pole orders
        assert weights == sorted(weights)
        for el, wt in zip(table.elements(), weights):
            assert el.weight == wt
            assert -el.ord_at_infinity() == wt


def test_rows_json_shape():
    table = make(1, 3).basis_R(12)
    rows = table.to_rows_json()
    assert all(set(row) == {"weight", "monomial"} for row in rows)
    assert rows[0] == {"weight": 0, "monomial": [0, 0, 0]}
    # x has weight 3, w has weight 2r+s = 5
    assert rows[1] == {"weight": 3, "monomial": [1, 0, 0]}
    assert rows[2] == {"weight": 5, "monomial": [0, 1, 0]}
