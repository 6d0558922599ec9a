"""Shared fixture matrices.

Rank-2 conventions: vertex 1 is the short simple root, vertex 2 the long
one, so B2 = [[2,-2],[-1,2]] and G2 = [[2,-3],[-1,2]] (a_12 = <a_1^, a_2>).
"""

import pytest

A1 = ((2,),)
A2 = ((2, -1), (-1, 2))
B2 = ((2, -2), (-1, 2))
B2_LONG_FIRST = ((2, -1), (-2, 2))
G2 = ((2, -3), (-1, 2))
A3 = ((2, -1, 0), (-1, 2, -1), (0, -1, 2))
D4_STAR = (
    (2, -1, 0, 0),
    (-1, 2, -1, -1),
    (0, -1, 2, 0),
    (0, -1, 0, 2),
)
AFF_A1 = ((2, -2), (-2, 2))
AFF_A2 = ((2, -1, -1), (-1, 2, -1), (-1, -1, 2))
IND3 = ((2, -1, -1), (-1, 2, -2), (-1, -1, 2))
NOT_2SPH = ((2, -2), (-3, 2))
A1XA1 = ((2, 0), (0, 2))

SPHERICAL_CATALOGUE = {
    "A1": A1,
    "A2": A2,
    "B2": B2,
    "G2": G2,
    "A3": A3,
    "D4_STAR": D4_STAR,
}

SIGMA_CATALOGUE = {
    "A2": A2,
    "B2": B2,
    "G2": G2,
    "A3": A3,
    "D4_STAR": D4_STAR,
    "AFF_A2": AFF_A2,
    "IND3": IND3,
}


def gcm_text(gcm):
    lines = [str(len(gcm))]
    lines += [" ".join(str(e) for e in row) for row in gcm]
    return "\n".join(lines) + "\n"


@pytest.fixture
def write_gcm(tmp_path):
    def _write(gcm, name="m.gcm"):
        p = tmp_path / name
        p.write_text(gcm_text(gcm))
        return str(p)

    return _write
