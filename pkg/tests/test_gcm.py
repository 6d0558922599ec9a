import random
from fractions import Fraction

import pytest

from kmcert import gcm as gc
from kmcert.errors import AxiomViolation, BadM, KOutOfRange, ParseError

from conftest import (
    A1,
    A2,
    A3,
    AFF_A1,
    AFF_A2,
    B2,
    D4_STAR,
    G2,
    IND3,
    NOT_2SPH,
    A1XA1,
    SPHERICAL_CATALOGUE,
    gcm_text,
)


# ------------------------------------------------------------ validation ---


def test_validate_accepts_catalogue():
    for mat in (A1, A2, B2, G2, A3, D4_STAR, AFF_A1, AFF_A2, IND3, NOT_2SPH):
        assert gc.validate_gcm([list(r) for r in mat]) == mat


@pytest.mark.parametrize(
    "rows,fragment",
    [
        ([], "empty"),
        ([[2, -1]], "length"),
        ([[1, -1], [-1, 2]], "diagonal"),
        ([[2, 1], [-1, 2]], "positive"),
        ([[2, -1], [0, 2]], "zero pattern"),
        ([[2, 0], [-1, 2]], "zero pattern"),
        ([[2, -1.5], [-1, 2]], "not an integer"),
        ([[2, True], [-1, 2]], "not an integer"),
    ],
)
def test_validate_rejects(rows, fragment):
    with pytest.raises(AxiomViolation, match=fragment):
        gc.validate_gcm(rows)


def test_parse_round_trip():
    for mat in (A2, G2, AFF_A2):
        assert gc.parse_gcm_text(gcm_text(mat)) == mat


def test_parse_ignores_comments_and_blanks():
    text = "# rank two\n\n2\n2 -1\n\n# done\n-1 2\n"
    assert gc.parse_gcm_text(text) == A2


def test_parse_errors_carry_position():
    with pytest.raises(ParseError) as ei:
        gc.parse_gcm_text("2\n2 -1\n-1 x\n")
    assert ei.value.line == 3 and ei.value.col == 4
    with pytest.raises(ParseError, match="rows"):
        gc.parse_gcm_text("3\n2 -1\n-1 2\n")
    with pytest.raises(ParseError, match="entries"):
        gc.parse_gcm_text("2\n2 -1 0\n-1 2\n")
    with pytest.raises(ParseError, match="empty"):
        gc.parse_gcm_text("# nothing\n")
    # axiom violations surface as ParseError naming the offending line
    with pytest.raises(ParseError) as ei:
        gc.parse_gcm_text("2\n2 1\n-1 2\n")
    assert ei.value.line == 2


# -------------------------------------------------------------- exact det ---


def _cofactor_det(mat):
    n = len(mat)
    if n == 1:
        return mat[0][0]
    total = 0
    for j in range(n):
        minor = [row[:j] + row[j + 1 :] for row in mat[1:]]
        total += (-1) ** j * mat[0][j] * _cofactor_det(minor)
    return total


def test_int_det_matches_cofactor_expansion():
    rng = random.Random(7)
    for _ in range(200):
        n = rng.randint(1, 5)
        mat = [[rng.randint(-4, 4) for _ in range(n)] for _ in range(n)]
        assert gc.int_det(mat) == _cofactor_det(mat)


def test_int_det_exactness_on_fraction_killer():
    # fraction-free elimination must not round: a matrix whose naive float
    # elimination drifts
    mat = [
        [2, -1, 0, 0],
        [-1, 2, -1, 0],
        [0, -1, 2, -1],
        [0, 0, -1, 2],
    ]
    assert gc.int_det(mat) == 5  # A4 Cartan determinant


# --------------------------------------------------------- classification ---


def test_classification_catalogue():
    assert gc.classify(A1).kind == gc.SPHERICAL
    assert gc.classify(A2).kind == gc.SPHERICAL
    assert gc.classify(B2).kind == gc.SPHERICAL
    assert gc.classify(G2).kind == gc.SPHERICAL
    assert gc.classify(A3).kind == gc.SPHERICAL
    assert gc.classify(D4_STAR).kind == gc.SPHERICAL
    assert gc.classify(AFF_A1).kind == gc.AFFINE
    assert gc.classify(AFF_A2).kind == gc.AFFINE
    ind = gc.classify(IND3)
    assert ind.kind == gc.INDEFINITE and ind.two_spherical
    assert not gc.classify(NOT_2SPH).two_spherical


def test_classification_fields():
    c = gc.classify(G2)
    assert (c.M, c.simply_laced, c.indecomposable) == (3, False, True)
    assert c.nA == 12320768
    c = gc.classify(A1XA1)
    assert c.kind == gc.SPHERICAL and not c.indecomposable
    assert gc.classify(A2).as_dict() == {
        "kind": "Spherical",
        "indecomposable": True,
        "two_spherical": True,
        "simply_laced": True,
        "M": 1,
        "nA": 4,
    }


def test_affine_label_needs_indecomposable():
    # AFF_A1 next to A1: decomposable, one component affine -> Indefinite
    mat = (
        (2, -2, 0),
        (-2, 2, 0),
        (0, 0, 2),
    )
    c = gc.classify(mat)
    assert c.kind == gc.INDEFINITE and not c.indecomposable
    assert c.note == "decomposable"


def test_spherical_hereditary():
    # every principal submatrix of a spherical GCM is spherical
    for mat in SPHERICAL_CATALOGUE.values():
        d = len(mat)
        for k in range(1, d + 1):
            assert gc.is_k_spherical(mat, k)


def test_two_spherical_equals_2_sphericity():
    for mat in (A2, B2, G2, A3, D4_STAR, AFF_A2, IND3, NOT_2SPH, AFF_A1):
        if len(mat) >= 2:
            assert gc.is_two_spherical(mat) == gc.is_k_spherical(mat, 2)
    with pytest.raises(KOutOfRange):
        gc.is_k_spherical(A2, 3)


def test_principal_minors_affine_signature():
    minors = gc.principal_minors(AFF_A2)
    full = (1, 2, 3)
    assert minors[full] == 0
    assert all(v > 0 for idx, v in minors.items() if idx != full)


# ------------------------------------------------------- critical order ---


def test_critical_order_frozen_values():
    assert gc.critical_order(2, 1) == 4
    assert gc.critical_order(2, 2) == 48
    assert gc.critical_order(2, 3) == 12320768
    assert gc.critical_order(3, 1) == 16


def test_critical_order_formulas():
    for d in range(2, 11):
        b = 2 * d - 2
        assert gc.critical_order(d, 1) == b**2
        assert gc.critical_order(d, 2) == 3 * b**4
        assert gc.critical_order(d, 3) == 188 * b**16
    # M = 0 (no off-diagonal entries at all) falls under the M <= 1 formula
    assert gc.critical_order(2, 0) == 4


def test_critical_order_rejects():
    with pytest.raises(BadM):
        gc.critical_order(1, 1)
    with pytest.raises(BadM):
        gc.critical_order(2, 4)


def test_monotone_in_m():
    for d in range(2, 8):
        vals = [gc.critical_order(d, m) for m in (1, 2, 3)]
        assert vals == sorted(vals) and len(set(vals)) == 3


# ------------------------------------------------------------- structure ---


def test_components_and_neighbours():
    assert gc.components(A1XA1) == [(1,), (2,)]
    assert gc.components(A3) == [(1, 2, 3)]
    assert gc.neighbours(D4_STAR, 2) == {1, 3, 4}
    assert gc.neighbours(D4_STAR, 1) == {2}
    assert gc.dynkin_diagram(G2) == {(1, 2): 3}
    assert gc.dynkin_diagram(AFF_A1) == {(1, 2): 4}


def test_submatrix_is_principal():
    sub = gc.submatrix(D4_STAR, (2, 4))
    assert sub == ((2, -1), (-1, 2))
    assert gc.submatrix(A3, (1, 3)) == ((2, 0), (0, 2))
