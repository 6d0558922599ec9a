import math
from fractions import Fraction

import pytest

from kmcert import bounds as bd
from kmcert import sigma as sg
from kmcert.errors import (
    BadM,
    BadModulus,
    InvertibilityUnmet,
    ParseError,
    TypeMismatch,
)

from conftest import A2, B2, G2, NOT_2SPH, A1XA1


# ----------------------------------------------------------- ring grammar ---


def test_parse_round_trips():
    for text in ("Z/35", "Zloc!4", "Zi!6", "poly(Z/7)", "poly(poly(Zloc!3))"):
        assert bd.parse_ring_spec(text).spec_string() == text


def test_parse_strips_whitespace():
    assert bd.parse_ring_spec("  Z/35 ").spec_string() == "Z/35"


@pytest.mark.parametrize(
    "text,col",
    [
        ("Q", 1),
        ("Z/x", 3),
        ("Z/1", 3),
        ("Zloc!x", 6),
        ("Zi!", 4),
        ("poly(Z/7", 9),
        ("poly(Q)", 6),
        (" Z/x", 4),
        ("", 1),
    ],
)
def test_parse_error_columns(text, col):
    with pytest.raises(ParseError) as exc:
        bd.parse_ring_spec(text)
    assert exc.value.col == col


FROZEN_M = {
    "Z/35": 5,
    "Z/4": 2,
    "Z/53": 53,
    "Z/5": 5,
    "Zloc!4": 5,
    "Zloc!6": 7,
    "Zi!1": 2,
    "Zi!2": 5,
    "Zi!4": 5,
    "Zi!6": 13,
    "poly(Z/7)": 7,
    "poly(Zloc!4)": 5,
}


def test_min_ideal_index_frozen():
    for text, m in FROZEN_M.items():
        assert bd.min_ideal_index(bd.parse_ring_spec(text)) == m, text


def _gaussian_residue_size(p):
    # independent oracle: the residue field has size p exactly when
    # x^2 = -1 is solvable mod p (split or ramified), else p^2 (inert)
    solvable = any(x * x % p == p - 1 for x in range(1, p))
    return p if solvable else p * p


def test_gaussian_min_index_against_quadratic_oracle():
    for n in range(1, 21):
        sizes = []
        p = n
        for _ in range(12):  # more primes than the scan can need
            p = bd.next_prime_above(p)
            sizes.append(_gaussian_residue_size(p))
        want = min(sizes)
        assert bd.GaussianLocalized(n).min_ideal_index() == want, n


def test_invertibility_predicates():
    assert bd.ZmodN(35).is_invertible(4)
    assert not bd.ZmodN(35).is_invertible(10)
    assert bd.LocalizedFactorial(4).is_invertible(24)
    assert not bd.LocalizedFactorial(4).is_invertible(5)
    assert bd.parse_ring_spec("poly(Zloc!4)").is_invertible(6)
    with pytest.raises(BadModulus):
        bd.ZmodN(1)
    with pytest.raises(BadModulus):
        bd.LocalizedFactorial(0)


def test_prime_helpers():
    assert bd.least_prime_factor(35) == 5
    assert bd.least_prime_factor(53) == 53
    assert bd.prime_factors(360) == {2, 3, 5}
    assert bd.next_prime_above(4) == 5
    assert bd.next_prime_above(13) == 17


# --------------------------------------------------------- bound sequence ---


def test_s_sequence_closed_forms():
    for m in (2, 5, 48, 10**6):
        assert bd.s_sequence(m, 0) == 0.0
        assert bd.s_sequence(m, 1) == pytest.approx(m**-0.5, rel=1e-15)
        assert bd.s_sequence(m, 2) == pytest.approx(
            math.sqrt(math.sqrt(1 / m) + 1 / m), rel=1e-15
        )
    with pytest.raises(BadModulus):
        bd.s_sequence(1, 1)
    with pytest.raises(BadM):
        bd.s_sequence(5, 9)


def test_s_sequence_monotone_in_level():
    for m in (2, 5, 53):
        vals = [bd.s_sequence(m, i) for i in range(6)]
        assert all(a < b for a, b in zip(vals, vals[1:]))
        assert all(v < 1.62 for v in vals)  # bounded by the golden ratio


@pytest.mark.parametrize(
    "m,i,thr,sign",
    [
        (4, 1, Fraction(1, 2), 0),  # s_1(4) = 1/2 exactly
        (5, 1, Fraction(1, 2), -1),
        (3, 1, Fraction(1, 2), 1),
        (5, 2, Fraction(1, 2), 1),
        (53, 2, Fraction(1, 2), -1),
        (23, 2, Fraction(1, 2), 1),  # s_2 crosses 1/2 between m = 23 and 24
        (24, 2, Fraction(1, 2), -1),
        (12320768, 4, Fraction(1, 2), -1),
        (5, 1, Fraction(0), 1),
        (5, 0, Fraction(0), 0),
        (5, 0, Fraction(-1), 1),
    ],
)
def test_compare_s_to_signs(m, i, thr, sign):
    assert bd.compare_s_to(m, i, thr) == sign


def test_compare_matches_floats_when_far():
    for m in (2, 5, 48, 53, 1000):
        for i in range(5):
            val = bd.s_sequence(m, i)
            for thr in (Fraction(1, 4), Fraction(1, 2), Fraction(3, 4), Fraction(1)):
                if abs(val - float(thr)) > 1e-9:
                    want = -1 if val < float(thr) else 1
                    assert bd.compare_s_to(m, i, thr) == want


def test_envelopes():
    for m in (2, 3, 5, 48, 53, 10**4, 10**6):
        assert bd.s_sequence(m, 2) < (3 / m) ** 0.25 + 1e-12
        assert bd.s_sequence(m, 4) < (188 / m) ** 0.0625 + 1e-12


def test_orth_bound():
    assert bd.orth_bound(bd.A1XA1, 5) == 0.0
    assert bd.orth_bound(bd.A2_TYPE, 5) == bd.s_sequence(5, 1)
    assert bd.orth_bound(bd.B2_TYPE, 53) == bd.s_sequence(53, 2)
    assert bd.orth_bound(bd.G2_TYPE, 12320768) == bd.s_sequence(12320768, 4)
    with pytest.raises(TypeMismatch):
        bd.orth_bound("E8", 5)
    with pytest.raises(BadModulus):
        bd.orth_bound(bd.A2_TYPE, 1)


def test_orth_bound_invertibility_guards():
    with pytest.raises(InvertibilityUnmet):
        bd.orth_bound(bd.B2_TYPE, 2, bd.ZmodN(4))
    with pytest.raises(InvertibilityUnmet):
        bd.orth_bound(bd.G2_TYPE, 3, bd.ZmodN(9))
    # fine when the offending integer is a unit
    bd.orth_bound(bd.B2_TYPE, 53, bd.ZmodN(53))
    bd.orth_bound(bd.G2_TYPE, 5, bd.LocalizedFactorial(4))


def test_heisenberg_orth_bound():
    assert bd.heisenberg_orth_bound(4) == 0.5
    assert bd.heisenberg_orth_bound(25) == pytest.approx(0.2, rel=1e-15)
    with pytest.raises(BadModulus):
        bd.heisenberg_orth_bound(1)


# ------------------------------------------------------------- aggregation ---


def test_bound_verdict():
    assert bd.bound_verdict([-1, -1, -1]) == bd.ALL_BELOW
    assert bd.bound_verdict([-1, 0, -1]) == bd.BOUNDARY
    assert bd.bound_verdict([1, -1, 0]) == bd.FAILS
    assert bd.bound_verdict([]) == bd.ALL_BELOW


def test_bound_report_boundary_at_m4():
    # |Sigma| = 3 gives threshold 1/2 and s_1(4) = 1/2: exact boundary.
    # No shipped ring has m(R) = 4, so this level is the only place the
    # boundary verdict can be exercised honestly.
    sig = sg.build_sigma(A2)
    certs = sg.certify_pairs(sig)
    rep = bd.bound_report(A2, certs, sig.size, 4)
    assert rep.verdict == bd.BOUNDARY
    d = rep.as_dict()
    assert d["threshold_exact"] == "1/2"
    assert any(p["at_threshold"] for p in d["pairs"])


def test_bound_report_fields():
    sig = sg.build_sigma(A2)
    certs = sg.certify_pairs(sig)
    rep = bd.bound_report(A2, certs, sig.size, 5)
    assert rep.verdict == bd.ALL_BELOW
    d = rep.as_dict()
    assert d["sigma_size"] == 3 and d["threshold"] == 0.5
    assert d["max_bound"] == pytest.approx(bd.s_sequence(5, 1), rel=1e-15)
    assert all(p["below_threshold"] for p in d["pairs"])
    assert all(p["rank2type"] == "A2" for p in d["pairs"])


# ------------------------------------------------------------- certificate ---

HYP_NAMES = [
    "size",
    "indecomposable",
    "two_spherical",
    "M_le_3",
    "small_integers_invertible",
    "min_ideal_index",
    "sigma_certified",
    "orthogonality",
]


def _hyp(cert, name):
    for n, p, detail in cert.hypotheses:
        if n == name:
            return p, detail
    raise KeyError(name)


def test_certify_a2_z5():
    cert = bd.certify_property_T(A2, bd.parse_ring_spec("Z/5"))
    assert cert.verdict == "certified" and cert.certified
    assert [n for n, _, _ in cert.hypotheses] == HYP_NAMES
    assert all(p for _, p, _ in cert.hypotheses)
    assert cert.m == 5
    assert cert.report.verdict == bd.ALL_BELOW


def test_certify_b2_z5_fails():
    cert = bd.certify_property_T(B2, bd.parse_ring_spec("Z/5"))
    assert cert.verdict == "failed"
    assert _hyp(cert, "min_ideal_index")[0] is False  # 5 < 48
    assert _hyp(cert, "orthogonality")[0] is False


def test_certify_b2_z53():
    cert = bd.certify_property_T(B2, bd.parse_ring_spec("Z/53"))
    assert cert.verdict == "certified"
    assert cert.m == 53
    assert cert.report.as_dict()["max_bound"] < 0.5


def test_certify_a2_poly_zloc4():
    cert = bd.certify_property_T(A2, bd.parse_ring_spec("poly(Zloc!4)"))
    assert cert.verdict == "certified"
    assert cert.m == 5


def test_certify_g2_small_modulus_invertibility():
    # m(Z/9) = 3 and 3 is not a unit mod 9: both arithmetic hypotheses die
    cert = bd.certify_property_T(G2, bd.parse_ring_spec("Z/9"))
    assert cert.verdict == "failed"
    assert _hyp(cert, "small_integers_invertible")[0] is False
    assert _hyp(cert, "orthogonality")[0] is False


def test_certify_structural_failures():
    cert = bd.certify_property_T(NOT_2SPH, bd.parse_ring_spec("Z/5"))
    assert cert.verdict == "failed"
    assert _hyp(cert, "two_spherical")[0] is False
    assert cert.sigma is None and cert.report is None

    cert = bd.certify_property_T(A1XA1, bd.parse_ring_spec("Z/5"))
    assert cert.verdict == "failed"
    assert _hyp(cert, "indecomposable")[0] is False


def test_certificate_as_dict_shape():
    d = bd.certify_property_T(A2, bd.parse_ring_spec("Z/5")).as_dict()
    assert d["gcm"]["d"] == 2
    assert d["ring"] == "Z/5"
    assert d["verdict"] == "certified"
    assert {h["name"] for h in d["hypotheses"]} == set(HYP_NAMES)
    assert d["sigma"]["sigma"] == [[1, 0], [0, 1], [-1, -1]]
    assert d["bound_report"]["verdict"] == "AllBelow"
