"""Combinatorial ground truth for the link invariants.

A plat diagram is converted to a Wirtinger-style presentation by walking
the braid word bottom to top: every under-strand pass breaks an arc and
introduces a fresh stroke with the relation

    x_out = x_over^{-sign} x_in x_over^{sign}

(conjugation by the over-strand flux).  Cap arcs are traversed in both
directions, so each strand position carries its stroke together with an
orientation exponent; bottom caps seed one stroke per pair and top caps
impose the closing equations.  Counting homomorphisms of the resulting
presentation into a group G with seed strokes in a fixed conjugacy class
C is then plain enumeration with forward propagation: seeds range over
C^{n_pairs}, every crossing determines its new stroke, and the top-cap
equations are checked at the end.  This path shares no code with the
braid-representation machinery, which is the point: the two must agree.

The remaining operations verify the group-equation gadgets used to
manipulate such counts: solution sets of twisted conjugation equations
y = a^{b y}, the subgroup A = {a : (a, e) in <(c_i, d_i)>} relating two
generating tuples, explicit words witnessing membership, and the
suppression system whose solution count doubles per added equation.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from .groups import FiniteGroup, Subgroup, GroupError
from .braids import BraidWord, CapExceeded

HOM_ENUM_CAP = 10_000_000


@dataclass(frozen=True)
class Crossing:
    out_stroke: int
    over_stroke: int
    over_exp: int          # strand flux of the over-strand = x_over^exp
    in_stroke: int
    in_exp: int
    sign: int


@dataclass(frozen=True)
class WirtingerPresentation:
    n_pairs: int
    n_strokes: int                 # seeds first: strokes 0..n_pairs-1
    crossings: tuple               # of Crossing, in diagram order
    caps: tuple                    # ((s1, e1), (s2, e2)) pairs to close

    def seed_strokes(self):
        return list(range(self.n_pairs))

    def arc_count(self):
        """Strokes after merging through the caps (maximal arcs of the
        closed diagram)."""
        parent = list(range(self.n_strokes))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for (s1, _), (s2, _) in self.caps:
            parent[find(s1)] = find(s2)
        return len({find(s) for s in range(self.n_strokes)})


def wirtinger_from_plat(word: BraidWord) -> WirtingerPresentation:
    """Wirtinger presentation of the plat closure of an even-strand braid."""
    if word.n % 2:
        raise GroupError("plat closure needs an even strand count")
    n_pairs = word.n // 2
    # current[p] = (stroke, exp): strand flux at position p is x_stroke^exp
    current = []
    for j in range(n_pairs):
        current.extend([(j, 1), (j, -1)])
    next_stroke = n_pairs
    crossings = []
    for i, sign in word.letters:
        lo, hi = i - 1, i
        if sign > 0:
            over, under = current[hi], current[lo]
        else:
            over, under = current[lo], current[hi]
        b = next_stroke
        next_stroke += 1
        crossings.append(Crossing(b, over[0], over[1], under[0], under[1], sign))
        if sign > 0:
            current[lo], current[hi] = over, (b, 1)
        else:
            current[lo], current[hi] = (b, 1), over
    caps = tuple((current[2 * j], current[2 * j + 1]) for j in range(n_pairs))
    return WirtingerPresentation(n_pairs, next_stroke, tuple(crossings), caps)


def count_homomorphisms(P: WirtingerPresentation, members, G) -> int:
    """Number of colorings of the seed strokes by elements of the class
    (member list) whose propagated stroke values satisfy every cap
    equation.  Exact enumeration over |C|^{n_pairs} seed tuples."""
    members = list(members)
    if len(members) ** P.n_pairs > HOM_ENUM_CAP:
        raise CapExceeded("homomorphism enumeration cap exceeded")
    count = 0
    inv = G.inv
    mul = G.mul
    for seeds in itertools.product(members, repeat=P.n_pairs):
        vals = list(seeds) + [None] * (P.n_strokes - P.n_pairs)
        for c in P.crossings:
            t = vals[c.over_stroke]
            if c.over_exp < 0:
                t = inv(t)
            a = vals[c.in_stroke]
            if c.in_exp < 0:
                a = inv(a)
            if c.sign > 0:
                vals[c.out_stroke] = mul(mul(t, a), inv(t))
            else:
                vals[c.out_stroke] = mul(mul(inv(t), a), t)
        ok = True
        for (s1, e1), (s2, e2) in P.caps:
            f1 = vals[s1] if e1 > 0 else inv(vals[s1])
            f2 = vals[s2] if e2 > 0 else inv(vals[s2])
            if mul(f1, f2) != 0:
                ok = False
                break
        if ok:
            count += 1
    return count


def verify_fluxon_identity(G, word: BraidWord, cls, tol=1e-9):
    """Check Pl = h / |C|^{n_pairs} for a fluxon class, both sides
    computed independently.  Returns a report dict."""
    from .braids import plat_closure
    from .double import fluxon_label
    L = fluxon_label(G, cls)
    pl = plat_closure(G, word, L).value
    P = wirtinger_from_plat(word)
    h = count_homomorphisms(P, cls.members, G)
    n = word.n // 2
    rescaled = h / len(cls.members) ** n
    return {"pl": pl, "h": h, "n_pairs": n,
            "h_rescaled": rescaled,
            "error": abs(pl - rescaled),
            "match": abs(pl - rescaled) <= tol}


# ---------------------------------------------------------------------------
# group-equation gadgets

def conjugation_equation_solutions(G, members, a, b):
    """All y in the member list with y = (b y) a (b y)^{-1}."""
    out = []
    for y in members:
        z = G.mul(b, y)
        if G.mul(G.mul(z, a), G.inv(z)) == y:
            out.append(y)
    return out


def pair_subgroup_image(G, cvec, dvec) -> Subgroup:
    """A = {a : (a, e) in E} for E <= G x G generated by the (c_i, d_i).

    Equals the image under the first projection of the kernel of the
    second, so it is normal in <c_1, ..., c_k>."""
    if len(cvec) != len(dvec):
        raise GroupError("tuples must have equal length")
    n = G.order
    gens = [c * n + d for c, d in zip(cvec, dvec)]
    seen = {0}
    frontier = [0]
    while frontier:
        x = frontier.pop()
        xc, xd = divmod(x, n)
        for gi in gens:
            gc, gd = divmod(gi, n)
            for (yc, yd) in ((G.mul(xc, gc), G.mul(xd, gd)),
                             (G.mul(xc, G.inv(gc)), G.mul(xd, G.inv(gd)))):
                y = yc * n + yd
                if y not in seen:
                    seen.add(y)
                    frontier.append(y)
    A = sorted(x // n for x in seen if x % n == 0)
    return Subgroup(G, tuple(A), generators=tuple(cvec))


class NotReachable(RuntimeError):
    pass


def find_relating_word(G, cvec, dvec, alpha):
    """Word w (sequence of signed generator indices (i, +-1)) with
    w(c) = alpha and w(d) = e, found by breadth-first search over the
    pair subgroup E; raises NotReachable if no such word exists."""
    n = G.order
    target = alpha * n + 0
    start = 0
    if target == start:
        return []
    from collections import deque
    prev = {start: None}
    q = deque([start])
    while q:
        x = q.popleft()
        xc, xd = divmod(x, n)
        for idx, (c, d) in enumerate(zip(cvec, dvec)):
            for s in (1, -1):
                if s > 0:
                    y = G.mul(xc, c) * n + G.mul(xd, d)
                else:
                    y = G.mul(xc, G.inv(c)) * n + G.mul(xd, G.inv(d))
                if y not in prev:
                    prev[y] = (x, idx, s)
                    if y == target:
                        word = []
                        cur = y
                        while prev[cur] is not None:
                            cur, i, sg = prev[cur]
                            word.append((i, sg))
                        word.reverse()
                        return word
                    q.append(y)
    raise NotReachable("alpha is not in the pair subgroup image")


def evaluate_word(G, word, vec):
    acc = 0
    for i, s in word:
        g = vec[i] if s > 0 else G.inv(vec[i])
        acc = G.mul(acc, g)
    return acc


def suppression_amplification_check(G, members, cvec, dvec, ell,
                                    alpha=None):
    """Build the suppression system and verify the 2^ell amplification.

    Each added equation y = x1^{w(x) y}, with w a word satisfying
    w(c) = alpha and w(d) = e, has at least two solutions y in the class
    when x = c (alpha chosen to maximize the count, or supplied) and
    exactly one when x = d (the equation collapses to y = y x1 y^{-1},
    forcing y = x1).  Solution counts over y-tuples therefore differ by a
    factor of at least 2^ell.  Returns a report dict."""
    A = pair_subgroup_image(G, cvec, dvec)
    best = None
    if alpha is not None:
        candidates = [alpha]
    else:
        candidates = list(A.members)
    for cand in candidates:
        sols = conjugation_equation_solutions(G, members, cvec[0], cand)
        if best is None or len(sols) > len(best[1]):
            best = (cand, sols)
    alpha, sols_c = best
    word = find_relating_word(G, cvec, dvec, alpha)
    assert evaluate_word(G, word, cvec) == alpha
    assert evaluate_word(G, word, dvec) == 0
    sols_d = conjugation_equation_solutions(G, members, dvec[0], 0)
    count_c = len(sols_c) ** ell
    count_d = len(sols_d) ** ell
    ratio = count_c / count_d if count_d else float("inf")
    return {"alpha": alpha, "word": word, "word_length": len(word),
            "solutions_per_equation_c": len(sols_c),
            "solutions_per_equation_d": len(sols_d),
            "count_c": count_c, "count_d": count_d, "ell": ell,
            "ratio": ratio, "amplified": ratio >= 2 ** ell}
