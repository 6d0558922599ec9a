"""Generating sets of root subgroups and their pair certificates.

Given a 2-spherical GCM whose Dynkin diagram has no isolated vertices,
split the vertices into a maximal independent set Pi1 (greedy by ascending
index) and the rest Pi2 = {b_1, ..., b_l}.  With w0 the product of the
simple reflections over Pi1 (they commute, so the order is irrelevant;
this is asserted at run time), set

    gamma_i = w0(-b_i),   Sigma = Pi  united with  {gamma_1, ..., gamma_l}.

Sigma has fewer than 2d members and no two of them sum to zero.  The
pseudo-parabolic variant restricts Pi1/Pi2 to a subset I of the vertices,
provided every vertex has a neighbour inside I.

certify_pairs produces, for every unordered pair from Sigma, one of

  * Commute{disjoint-support}: opposite signs and disjoint supports, so no
    positive combination is ever a root;
  * Commute{empty-interval}: prenilpotent with a provably complete empty
    closed interval;
  * RankTwoEmbed{(i, j), w}: a Weyl word w moving both roots into
    Z a_i + Z a_j.

Simple-simple pairs embed via the identity word.  When the structural
shortcuts do not apply, a bounded breadth-first search over Weyl words (up
to length 2d) finds an embedding; failure raises CertificationFailed
loudly.  Every certificate is re-verified mechanically before it is
returned.
"""

from __future__ import annotations

from collections import deque

from . import roots as rt
from .errors import (
    CapTooSmall,
    CertificationFailed,
    IndexOutOfRange,
    IsolatedVertex,
    KmcertError,
)
from .gcm import neighbours, require_two_spherical

COMMUTE = "Commute"
RANK_TWO_EMBED = "RankTwoEmbed"
DISJOINT_SUPPORT = "disjoint-support"
EMPTY_INTERVAL = "empty-interval"


def maximal_independent(gcm, vertices=None):
    """Greedy maximal independent set, scanning the given 1-based vertices
    in ascending order (all vertices when None)."""
    d = len(gcm)
    if vertices is None:
        vertices = range(1, d + 1)
    chosen = []
    allowed = sorted(set(vertices))
    for v in allowed:
        if not 1 <= v <= d:
            raise IndexOutOfRange(f"vertex {v} out of range 1..{d}")
        if all(u not in neighbours(gcm, v) for u in chosen):
            chosen.append(v)
    return tuple(chosen)


class SigmaSet:
    """The generating configuration: Pi1, Pi2, w0 and the Sigma roots.

    members is a list of RootEntry-like (root, coroot) pairs: first the d
    simple roots in index order, then the gamma_i in Pi2 order.
    """

    def __init__(self, gcm, pi1, pi2, w0, gammas, index_set=None):
        self.gcm = gcm
        self.pi1 = pi1
        self.pi2 = pi2
        self.w0 = w0
        self.gammas = gammas  # list of (root, coroot)
        self.index_set = index_set
        d = len(gcm)
        simple = [(rt.simple_root(d, i), rt.simple_root(d, i)) for i in range(1, d + 1)]
        self.members = simple + list(gammas)
        roots_ = [m[0] for m in self.members]
        if len(set(roots_)) != len(roots_):
            raise KmcertError("Sigma has repeated members")
        for i, a in enumerate(roots_):
            for b in roots_[i + 1:]:
                if tuple(-c for c in a) == b:
                    raise KmcertError(f"Sigma contains an opposite pair {a}, {b}")

    @property
    def size(self):
        return len(self.members)

    def member_roots(self):
        return [m[0] for m in self.members]

    def as_dict(self):
        return {
            "pi1": list(self.pi1),
            "pi2": list(self.pi2),
            "w0": list(self.w0),
            "sigma": [list(r) for r, _ in self.members],
            "index_set": None if self.index_set is None else sorted(self.index_set),
        }


def _gamma(gcm, w0, j):
    d = len(gcm)
    a = rt.simple_root(d, j)
    na = tuple(-c for c in a)
    return rt.apply_word(gcm, w0, na, na)


def build_sigma(gcm):
    """Sigma for the full vertex set.  Requires a 2-spherical GCM whose
    diagram has no isolated vertex."""
    require_two_spherical(gcm)
    d = len(gcm)
    for v in range(1, d + 1):
        if not neighbours(gcm, v):
            raise IsolatedVertex(v)
    pi1 = maximal_independent(gcm)
    pi2 = tuple(v for v in range(1, d + 1) if v not in pi1)
    w0 = pi1
    gammas = [_gamma(gcm, w0, j) for j in pi2]
    # Pi1 reflections commute, so w0 must not depend on their order.
    w0_rev = tuple(reversed(pi1))
    for j, g in zip(pi2, gammas):
        if _gamma(gcm, w0_rev, j) != g:
            raise KmcertError("w0 image depends on reflection order; Pi1 not independent")
    sig = SigmaSet(gcm, pi1, pi2, w0, gammas)
    if not sig.size < 2 * d:
        raise KmcertError(f"|Sigma| = {sig.size} not < 2d = {2*d}")
    return sig


def build_sigma_pseudo(gcm, index_set):
    """Pseudo-parabolic Sigma over a vertex subset I.

    Requires: for every vertex i there is j in I with j != i and a_ij != 0.
    The offending vertex is named in BadIndexSet otherwise.
    """
    from .errors import BadIndexSet

    require_two_spherical(gcm)
    d = len(gcm)
    I = sorted(set(index_set))
    for v in I:
        if not 1 <= v <= d:
            raise IndexOutOfRange(f"vertex {v} out of range 1..{d}")
    iset = set(I)
    for i in range(1, d + 1):
        if not (neighbours(gcm, i) & iset):
            raise BadIndexSet(i)
    i1 = maximal_independent(gcm, I)
    i2 = tuple(v for v in I if v not in i1)
    w = i1
    lambdas = [_gamma(gcm, w, j) for j in i2]
    w_rev = tuple(reversed(i1))
    for j, g in zip(i2, lambdas):
        if _gamma(gcm, w_rev, j) != g:
            raise KmcertError("w image depends on reflection order; I1 not independent")
    return SigmaSet(gcm, i1, i2, w, lambdas, index_set=I)


class PairCertificate:
    """Verified commutation or rank-2 embedding evidence for a Sigma pair."""

    __slots__ = ("a", "b", "kind", "reason", "indices", "word")

    def __init__(self, a, b, kind, reason=None, indices=None, word=None):
        self.a = a
        self.b = b
        self.kind = kind
        self.reason = reason
        self.indices = indices
        self.word = word

    def rank2_product(self, gcm):
        """a_ij * a_ji of the target simple pair (embeddings only)."""
        if self.kind != RANK_TWO_EMBED:
            return None
        i, j = self.indices
        return gcm[i - 1][j - 1] * gcm[j - 1][i - 1]

    def as_dict(self):
        out = {"pair": [list(self.a[0]), list(self.b[0])], "kind": self.kind}
        if self.kind == COMMUTE:
            out["reason"] = self.reason
        else:
            out["indices"] = list(self.indices)
            out["word"] = list(self.word)
        return out

    def __repr__(self):
        return f"PairCertificate({self.as_dict()!r})"


def required_cap(sigma):
    """Smallest slice cap that makes every Sigma pair's interval exact."""
    need = 1
    roots_ = sigma.member_roots()
    for i, a in enumerate(roots_):
        for b in roots_[i + 1:]:
            need = max(need, rt.interval_exact_cap(True, a, b))
    return need


def _support(vec):
    return {i for i, c in enumerate(vec) if c}


def verify_certificate(gcm, slice_, cert):
    """Re-check a certificate from scratch; raises CertificationFailed."""
    a_entry = _entry(cert.a)
    b_entry = _entry(cert.b)
    if cert.kind == COMMUTE:
        if cert.reason == DISJOINT_SUPPORT:
            ok = rt.opposite_signs(cert.a[0], cert.b[0]) and rt.supports_disjoint(
                cert.a[0], cert.b[0]
            )
        elif cert.reason == EMPTY_INTERVAL:
            iv = rt.closed_interval(slice_, a_entry, b_entry)
            ok = (
                rt.is_prenilpotent(gcm, a_entry, b_entry)
                and not iv.truncated
                and len(iv) == 0
            )
        else:
            ok = False
    elif cert.kind == RANK_TWO_EMBED:
        i, j = cert.indices
        wa, _ = rt.apply_word(gcm, cert.word, *cert.a)
        wb, _ = rt.apply_word(gcm, cert.word, *cert.b)
        allowed = {i - 1, j - 1}
        ok = _support(wa) <= allowed and _support(wb) <= allowed
    else:
        ok = False
    if not ok:
        raise CertificationFailed((cert.a[0], cert.b[0]), "certificate failed re-verification")
    return True


class _Entry:
    __slots__ = ("root", "coroot")

    def __init__(self, pair):
        self.root, self.coroot = pair


def _entry(pair):
    return _Entry(pair)


def _find_embedding_word(gcm, a, b, max_len, height_cap):
    """Breadth-first search for a word moving both roots into a simple pair.

    States are (root_a, root_b) images; words longer than max_len or images
    taller than height_cap are pruned.  Returns (word, (i, j)) or None.
    The identity and w0-style short words come first because BFS explores
    by length.
    """
    d = len(gcm)
    start = (a, b)
    seen = {(start[0][0], start[1][0])}
    queue = deque([(a, b, ())])
    while queue:
        cur_a, cur_b, word = queue.popleft()
        pair = _embeds_in_simple_pair(cur_a[0], cur_b[0], d)
        if pair is not None:
            return word, pair
        if len(word) >= max_len:
            continue
        for i in range(1, d + 1):
            na = rt.reflect(gcm, i, *cur_a)
            nb = rt.reflect(gcm, i, *cur_b)
            if rt.height(na[0]) > height_cap or rt.height(nb[0]) > height_cap:
                continue
            key = (na[0], nb[0])
            if key in seen:
                continue
            seen.add(key)
            queue.append((na, nb, word + (i,)))
    return None


def _embeds_in_simple_pair(ra, rb, d):
    sup = _support(ra) | _support(rb)
    if len(sup) > 2:
        return None
    sup = sorted(sup)
    if len(sup) == 2:
        return sup[0] + 1, sup[1] + 1
    if len(sup) == 1:
        k = sup[0] + 1
        other = 1 if k != 1 else 2
        return tuple(sorted((k, other)))
    return None


def certify_pair(gcm, slice_, a, b, word_bound=None):
    """Certificate for one unordered pair of Sigma members (root, coroot)."""
    d = len(gcm)
    if word_bound is None:
        word_bound = 2 * d
    ra, rb = a[0], b[0]
    ha, hb = rt.height(ra), rt.height(rb)
    if ha == 1 and hb == 1 and all(c >= 0 for c in ra) and all(c >= 0 for c in rb):
        i = ra.index(1) + 1
        j = rb.index(1) + 1
        cert = PairCertificate(a, b, RANK_TWO_EMBED, indices=tuple(sorted((i, j))), word=())
        verify_certificate(gcm, slice_, cert)
        return cert
    if rt.opposite_signs(ra, rb) and rt.supports_disjoint(ra, rb):
        cert = PairCertificate(a, b, COMMUTE, reason=DISJOINT_SUPPORT)
        verify_certificate(gcm, slice_, cert)
        return cert
    need = rt.interval_exact_cap(True, ra, rb)
    if slice_.cap < need:
        raise CapTooSmall(f"slice cap {slice_.cap} < {need} needed for pair {ra}, {rb}")
    if rt.is_prenilpotent(gcm, _entry(a), _entry(b)):
        iv = rt.closed_interval(slice_, _entry(a), _entry(b))
        if not iv.truncated and len(iv) == 0:
            cert = PairCertificate(a, b, COMMUTE, reason=EMPTY_INTERVAL)
            verify_certificate(gcm, slice_, cert)
            return cert
    found = _find_embedding_word(gcm, a, b, word_bound, max(slice_.cap, 4 * (ha + hb)))
    if found is None:
        raise CertificationFailed((ra, rb))
    word, pair = found
    cert = PairCertificate(a, b, RANK_TWO_EMBED, indices=pair, word=word)
    verify_certificate(gcm, slice_, cert)
    return cert


def certify_pairs(sigma, slice_=None):
    """Certificates for every unordered pair from Sigma, in member order."""
    gcm = sigma.gcm
    if slice_ is None:
        slice_ = rt.enumerate_real_roots(gcm, required_cap(sigma))
    elif slice_.cap < required_cap(sigma):
        raise CapTooSmall(
            f"slice cap {slice_.cap} < required {required_cap(sigma)} for this Sigma"
        )
    out = []
    members = sigma.members
    for i in range(len(members)):
        for j in range(i + 1, len(members)):
            out.append(certify_pair(gcm, slice_, members[i], members[j]))
    return out
