"""Real roots of a Kac-Moody root system, enumerated to a height cap.

Roots and coroots are integer coefficient tuples over the simple (co)roots.
The pairing is <y, x> = sum_{i,j} y_i x_j a_ij for y in coroot coordinates
and x in root coordinates; simple reflections act by

    s_i(x) = x - <a_i^, x> a_i        on roots,
    s_i(y) = y - <y, a_i> a_i^        on coroots,

which leaves the pairing invariant.  A Weyl word is a tuple of 1-based
simple indices applied left to right (the first index acts first).

enumerate_real_roots performs a breadth-first closure of the simple roots
and their negatives under all simple reflections, discarding any root whose
height (sum of absolute coefficients) exceeds the cap.  Roots outside the
cap are simply unknown: absence from a slice is not evidence that a vector
is not a root.
"""

from __future__ import annotations

from .errors import CapTooSmall, DimensionMismatch, IndexOutOfRange, OppositePair, SignMismatch

PRENILPOTENT = "Prenilpotent"
NOT_PRENILPOTENT = "NotPrenilpotent"


def _check_dim(gcm, vec):
    if len(vec) != len(gcm):
        raise DimensionMismatch(f"vector length {len(vec)} != rank {len(gcm)}")


def pairing(gcm, coroot, root):
    """<y, x> = sum_{i,j} y_i x_j a_ij (exact integer)."""
    _check_dim(gcm, coroot)
    _check_dim(gcm, root)
    total = 0
    for i, yi in enumerate(coroot):
        if yi:
            row = gcm[i]
            total += yi * sum(xj * row[j] for j, xj in enumerate(root) if xj)
    return total


def height(vec):
    return sum(abs(c) for c in vec)


def simple_root(d, i):
    return tuple(1 if k == i - 1 else 0 for k in range(d))


def reflect(gcm, i, root, coroot):
    """Apply the simple reflection s_i to a (root, coroot) pair."""
    d = len(gcm)
    if not 1 <= i <= d:
        raise IndexOutOfRange(f"reflection index {i} out of range 1..{d}")
    _check_dim(gcm, root)
    _check_dim(gcm, coroot)
    k = i - 1
    # <a_i^, x> = sum_j x_j a_ij ;  <y, a_i> = sum_j y_j a_ji
    c_root = sum(x * gcm[k][j] for j, x in enumerate(root))
    c_cor = sum(y * gcm[j][k] for j, y in enumerate(coroot))
    new_root = tuple(x - (c_root if j == k else 0) for j, x in enumerate(root))
    new_cor = tuple(y - (c_cor if j == k else 0) for j, y in enumerate(coroot))
    return new_root, new_cor


def apply_word(gcm, word, root, coroot):
    """Apply a Weyl word (first index acts first) to a (root, coroot) pair."""
    for i in word:
        root, coroot = reflect(gcm, i, root, coroot)
    return root, coroot


class RootEntry:
    """One real root with its coroot and a witness.

    witness = (base, word) with root = apply_word(word, a_base); every
    prefix of the word stays inside the enclosing slice's height cap.
    """

    __slots__ = ("root", "coroot", "base", "word")

    def __init__(self, root, coroot, base, word):
        self.root = root
        self.coroot = coroot
        self.base = base
        self.word = word

    def as_dict(self):
        return {
            "coeffs": list(self.root),
            "coroot_coeffs": list(self.coroot),
            "witness": {"base": self.base, "word": list(self.word)},
        }

    def __repr__(self):
        return f"RootEntry({self.root}, coroot={self.coroot}, base={self.base}, word={self.word})"


class RootSlice:
    """All real roots of height <= cap, keyed by coefficient vector."""

    def __init__(self, gcm, cap, entries):
        self.gcm = gcm
        self.cap = cap
        self.entries = entries  # dict: root tuple -> RootEntry

    def __contains__(self, root):
        return tuple(root) in self.entries

    def __len__(self):
        return len(self.entries)

    def __getitem__(self, root):
        return self.entries[tuple(root)]

    def roots(self):
        return sorted(self.entries)

    def positive_roots(self):
        return [r for r in self.roots() if all(c >= 0 for c in r)]

    def as_json(self):
        return [self.entries[r].as_dict() for r in self.roots()]


def enumerate_real_roots(gcm, cap):
    """Breadth-first slice of the real roots up to the height cap.

    Seeds are the simple roots (empty witness word) and their negatives
    (witness word (i,), since s_i a_i = -a_i); every intermediate of a
    witness word lies within the cap.  Whenever two walks reach the same
    root they must carry the same coroot; a mismatch raises SignMismatch
    since it can only come from a reflection bug.
    """
    if cap < 1:
        raise CapTooSmall(f"cap {cap} < 1")
    d = len(gcm)
    entries = {}
    frontier = []
    for i in range(1, d + 1):
        a = simple_root(d, i)
        na = tuple(-c for c in a)
        entries[a] = RootEntry(a, a, i, ())
        frontier.append(entries[a])
        entries[na] = RootEntry(na, na, i, (i,))
        frontier.append(entries[na])
    while frontier:
        nxt = []
        for entry in frontier:
            for i in range(1, d + 1):
                root, coroot = reflect(gcm, i, entry.root, entry.coroot)
                if height(root) > cap:
                    continue
                known = entries.get(root)
                if known is not None:
                    if known.coroot != coroot:
                        raise SignMismatch(
                            f"coroot mismatch at {root}: {known.coroot} vs {coroot}"
                        )
                    continue
                neg = all(c <= 0 for c in root)
                pos = all(c >= 0 for c in root)
                if not (neg or pos):
                    raise SignMismatch(f"root {root} has mixed signs; reflection bug")
                e = RootEntry(root, coroot, entry.base, entry.word + (i,))
                entries[root] = e
                nxt.append(e)
        frontier = nxt
    return RootSlice(gcm, cap, entries)


def prenilpotency(gcm, a, b):
    """Classify the pair {a, b} of real roots by the pairing criterion.

    Returns (status, p, q) with p = <a^, b> and q = <b^, a>.  The two
    pairings always share a sign; disagreement raises SignMismatch.  The
    pair (a, -a) is rejected.  For p >= 0 the pair is prenilpotent with
    interval contained in {a+b}; for p < 0 it is prenilpotent iff pq <= 3.
    """
    if tuple(b.root) == tuple(-c for c in a.root):
        raise OppositePair(f"pair ({a.root}, {b.root}) is opposite")
    p = pairing(gcm, a.coroot, b.root)
    q = pairing(gcm, b.coroot, a.root)
    if (p > 0) != (q > 0) or (p < 0) != (q < 0):
        raise SignMismatch(f"pairing signs disagree: {p} vs {q}")
    if p >= 0:
        return PRENILPOTENT, p, q
    return (PRENILPOTENT if p * q <= 3 else NOT_PRENILPOTENT), p, q


def is_prenilpotent(gcm, a, b):
    return prenilpotency(gcm, a, b)[0] == PRENILPOTENT


class IntervalResult:
    """Roots of the form i*a + j*b (i, j >= 1) found within the slice.

    truncated means the slice cap was too small to promise completeness,
    so the listed roots are only a lower approximation.
    """

    __slots__ = ("roots", "truncated")

    def __init__(self, roots, truncated):
        self.roots = frozenset(roots)
        self.truncated = truncated

    def __len__(self):
        return len(self.roots)

    def __iter__(self):
        return iter(sorted(self.roots))


def interval_exact_cap(two_spherical, a_root, b_root):
    """Height cap guaranteeing a complete closed interval for the pair.

    Within a 2-spherical system a prenilpotent interval only contains
    i*a + j*b with (i, j) among the rank-2 patterns (coefficients <= 3),
    so heights are bounded by 2(h(a)+h(b)) + max(h(a), h(b), 5).
    """
    if not two_spherical:
        return None
    ha, hb = height(a_root), height(b_root)
    return 2 * (ha + hb) + max(ha, hb, 5)


def closed_interval(slice_, a, b):
    """All slice roots expressible as i*a + j*b with integers i, j >= 1."""
    gcm = slice_.gcm
    ar, br = tuple(a.root), tuple(b.root)
    ha, hb = height(ar), height(br)
    found = set()
    max_i = slice_.cap // max(ha, 1) + 1
    max_j = slice_.cap // max(hb, 1) + 1
    for i in range(1, max_i + 1):
        for j in range(1, max_j + 1):
            v = tuple(i * x + j * y for x, y in zip(ar, br))
            if height(v) > slice_.cap:
                continue
            if v in slice_:
                found.add(v)
    try:
        pre = is_prenilpotent(gcm, a, b)
    except OppositePair:
        pre = False
    from .gcm import is_two_spherical

    need = interval_exact_cap(is_two_spherical(gcm), ar, br)
    truncated = not (pre and need is not None and slice_.cap >= need)
    return IntervalResult(found, truncated)


def supports_disjoint(a_root, b_root):
    return all(x == 0 or y == 0 for x, y in zip(a_root, b_root))


def opposite_signs(a_root, b_root):
    pos_a = all(c >= 0 for c in a_root)
    pos_b = all(c >= 0 for c in b_root)
    return pos_a != pos_b


def commute_guaranteed(slice_, a, b):
    """True when the root subgroups X_a, X_b are forced to commute.

    Either the pair has opposite signs with disjoint simple-root supports
    (so no positive combination is ever a root), or it is prenilpotent with
    a provably complete empty closed interval.
    """
    ar, br = tuple(a.root), tuple(b.root)
    if br == tuple(-c for c in ar):
        raise OppositePair(f"pair ({ar}, {br}) is opposite")
    if opposite_signs(ar, br) and supports_disjoint(ar, br):
        return True
    if not is_prenilpotent(slice_.gcm, a, b):
        return False
    iv = closed_interval(slice_, a, b)
    return not iv.truncated and len(iv) == 0
