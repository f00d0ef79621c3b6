"""Finite group arithmetic and coset/centralizer combinatorics.

Elements of a group are dense integer indices 0..order-1 with index 0 the
identity.  Groups are instantiated as permutation groups (symmetric,
alternating), as the semidirect product Z_p x| Z_q with q | p-1, as a wreath
product Z_k wr S_l, or directly from a multiplication table.  For orders up
to TABLE_CAP the full multiplication table is precomputed; permutation
groups above that compose on the fly.

On top of the raw arithmetic this module provides the combinatorial
objects the representation-theoretic layers consume: conjugacy classes,
centralizers, left transversals with canonical (minimal-element) coset
representatives, coset factorization g = t z, double coset representatives
and the class algebra product.  All orderings are canonical so downstream
bases are deterministic across runs.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

TABLE_CAP = 4096        # precompute |G|^2 multiplication table below this
ORDER_CAP = 100_000     # refuse to enumerate groups above this


class GroupError(ValueError):
    pass


# ---------------------------------------------------------------------------
# permutation helpers (one-line notation over 0..n-1, tuples)

def perm_mul(p, q):
    """Composite p after q: (p*q)(i) = p[q[i]]."""
    return tuple(p[q[i]] for i in range(len(p)))


def perm_inv(p):
    out = [0] * len(p)
    for i, pi in enumerate(p):
        out[pi] = i
    return tuple(out)


def perm_sign(p):
    seen = [False] * len(p)
    sign = 1
    for i in range(len(p)):
        if seen[i]:
            continue
        j, clen = i, 0
        while not seen[j]:
            seen[j] = True
            j = p[j]
            clen += 1
        if clen % 2 == 0:
            sign = -sign
    return sign


def perm_cycles(p):
    """Cycle decomposition as a list of tuples, fixed points included."""
    seen = [False] * len(p)
    cycles = []
    for i in range(len(p)):
        if seen[i]:
            continue
        cyc = [i]
        seen[i] = True
        j = p[i]
        while j != i:
            cyc.append(j)
            seen[j] = True
            j = p[j]
        cycles.append(tuple(cyc))
    return cycles


def cycle_type(p):
    """Sorted tuple of cycle lengths (descending)."""
    return tuple(sorted((len(c) for c in perm_cycles(p)), reverse=True))


def perm_from_cycles(n, *cycles):
    """Build a permutation of 0..n-1 from cycles given in 0-based points."""
    p = list(range(n))
    for cyc in cycles:
        for a, b in zip(cyc, cyc[1:] + (cyc[0],) if isinstance(cyc, tuple) else list(cyc[1:]) + [cyc[0]]):
            p[a] = b
    return tuple(p)


def _encode_perms(perms, n):
    """Pack an (m, n) array of permutations into integer codes, base n."""
    codes = np.zeros(len(perms), dtype=np.int64)
    for i in range(n):
        codes = codes * n + perms[:, i]
    return codes


class FiniteGroup:
    """Immutable finite group with dense element indices.

    kind is one of "symmetric", "alternating", "semidirect", "wreath",
    "cyclic", "table".  Permutation-backed kinds carry the array
    ``perms`` of one-line permutations; "semidirect" carries (p, q, alpha)
    with element index a*q + b for the pair (a, b).
    """

    def __init__(self, kind, order, table=None, perms=None, meta=None):
        if order < 1 or order > ORDER_CAP:
            raise GroupError(f"group order {order} outside supported range")
        self.kind = kind
        self.order = order
        self.table = table
        self.perms = perms
        self.meta = dict(meta or {})
        self._rank = None
        if perms is not None and table is None:
            codes = _encode_perms(perms, perms.shape[1])
            self._rank = dict(zip(codes.tolist(), range(order)))
            self._codes = codes
        if table is None and perms is not None and order <= TABLE_CAP:
            self.table = self._build_table_from_perms()
        if self.table is not None:
            self.inverse = np.argwhere(self.table == 0)[:, 1].copy()
            self.inverse = np.empty(order, dtype=np.int64)
            rows, cols = np.nonzero(self.table == 0)
            self.inverse[rows] = cols
        else:
            self.inverse = None
        self._classes = None
        self._centralizers = {}

    # -- constructors -------------------------------------------------------

    @classmethod
    def symmetric(cls, n):
        perms = np.array(list(itertools.permutations(range(n))), dtype=np.int64)
        return cls("symmetric", len(perms), perms=perms, meta={"n": n})

    @classmethod
    def alternating(cls, n):
        perms = [p for p in itertools.permutations(range(n)) if perm_sign(p) == 1]
        perms = np.array(perms, dtype=np.int64)
        return cls("alternating", len(perms), perms=perms, meta={"n": n})

    @classmethod
    def cyclic(cls, n):
        idx = np.arange(n)
        table = (idx[:, None] + idx[None, :]) % n
        return cls("cyclic", n, table=table.astype(np.int64), meta={"n": n})

    @classmethod
    def semidirect(cls, p, q, alpha):
        _check_semidirect_params(p, q, alpha)
        apow = [1] * q
        for i in range(1, q):
            apow[i] = (apow[i - 1] * alpha) % p
        n = p * q
        a, b = np.divmod(np.arange(n), q)
        apow_arr = np.array(apow, dtype=np.int64)
        # (a1,b1)(a2,b2) = (a1 + a2 alpha^{b1}, b1 + b2)
        a_out = (a[:, None] + a[None, :] * apow_arr[b][:, None]) % p
        b_out = (b[:, None] + b[None, :]) % q
        table = a_out * q + b_out
        return cls("semidirect", n, table=table.astype(np.int64),
                   meta={"p": p, "q": q, "alpha": alpha, "alpha_pow": apow})

    @classmethod
    def wreath(cls, k, l):
        """Z_k wr S_l; element index = wcode * l! + rank(pi), wcode base-k
        little endian, so (0, identity) gets index 0."""
        sperms = list(itertools.permutations(range(l)))
        fact = len(sperms)
        n = (k ** l) * fact
        if n > TABLE_CAP:
            raise GroupError(f"wreath group order {n} exceeds table cap")
        prank = {p: i for i, p in enumerate(sperms)}
        table = np.empty((n, n), dtype=np.int64)
        decode_w = []
        for idx in range(n):
            wcode, pr = divmod(idx, fact)
            w = [(wcode // k ** i) % k for i in range(l)]
            decode_w.append((tuple(w), sperms[pr]))
        for i, (w1, p1) in enumerate(decode_w):
            p1inv = perm_inv(p1)
            for j, (w2, p2) in enumerate(decode_w):
                w = tuple((w1[t] + w2[p1inv[t]]) % k for t in range(l))
                pp = perm_mul(p1, p2)
                wcode = sum(w[t] * k ** t for t in range(l))
                table[i, j] = wcode * fact + prank[pp]
        return cls("wreath", n, table=table,
                   meta={"k": k, "l": l, "elements": decode_w})

    @classmethod
    def from_table(cls, table):
        table = np.asarray(table, dtype=np.int64)
        if table.ndim != 2 or table.shape[0] != table.shape[1]:
            raise GroupError("multiplication table must be square")
        n = table.shape[0]
        if np.any(table < 0) or np.any(table >= n):
            raise GroupError("table entries out of range")
        if not (np.array_equal(table[0], np.arange(n))
                and np.array_equal(table[:, 0], np.arange(n))):
            raise GroupError("index 0 must be the identity")
        return cls("table", n, table=table)

    @classmethod
    def from_json(cls, spec):
        """Construct from the canonical JSON group description."""
        kind = spec.get("kind")
        if kind == "symmetric":
            return cls.symmetric(int(spec["n"]))
        if kind == "alternating":
            return cls.alternating(int(spec["n"]))
        if kind == "cyclic":
            return cls.cyclic(int(spec["n"]))
        if kind == "semidirect":
            return cls.semidirect(int(spec["p"]), int(spec["q"]), int(spec["alpha"]))
        if kind == "table":
            return cls.from_table(spec["mul"])
        raise GroupError(f"unknown group kind {kind!r}")

    # -- core arithmetic ----------------------------------------------------

    def _build_table_from_perms(self):
        n = self.perms.shape[1]
        table = np.empty((self.order, self.order), dtype=np.int64)
        sorted_codes = np.sort(self._codes)
        order_of = np.argsort(self._codes, kind="stable")
        for a in range(self.order):
            prod = self.perms[a][self.perms]           # row b = perm_a o perm_b
            codes = _encode_perms(prod, n)
            pos = np.searchsorted(sorted_codes, codes)
            table[a] = order_of[pos]
        return table

    def mul(self, a, b):
        if self.table is not None:
            return int(self.table[a, b])
        prod = self.perms[a][self.perms[b]]
        return self._rank[int(_encode_perms(prod[None, :], len(prod))[0])]

    def inv(self, a):
        if self.inverse is not None:
            return int(self.inverse[a])
        return self._rank[int(_encode_perms(
            np.array(perm_inv(tuple(self.perms[a])))[None, :],
            self.perms.shape[1])[0])]

    def conj(self, x, y):
        """x conjugated by y: y^-1 x y."""
        return self.mul(self.mul(self.inv(y), x), y)

    def mul_many(self, elems):
        acc = 0
        for e in elems:
            acc = self.mul(acc, e)
        return acc

    def power(self, a, k):
        if k < 0:
            return self.power(self.inv(a), -k)
        acc = 0
        for _ in range(k):
            acc = self.mul(acc, a)
        return acc

    def element_order(self, a):
        acc, k = a, 1
        while acc != 0:
            acc = self.mul(acc, a)
            k += 1
        return k

    def elements(self):
        return range(self.order)

    def element_repr(self, a):
        if self.perms is not None:
            cyc = [c for c in perm_cycles(tuple(self.perms[a])) if len(c) > 1]
            if not cyc:
                return "e"
            return "".join("(" + " ".join(str(x + 1) for x in c) + ")" for c in cyc)
        if self.kind == "semidirect":
            q = self.meta["q"]
            return f"({a // q},{a % q})"
        return str(a)

    def __repr__(self):
        return f"FiniteGroup({self.kind}, order={self.order})"

    # equality by identity; groups are used as dict keys for caches
    __hash__ = object.__hash__

    # -- consistency --------------------------------------------------------

    def check_axioms(self, rng=None, samples=2000):
        """Verify identity, inverses and associativity.

        Associativity is exhaustive (vectorized) up to order 512 and
        randomly sampled above.  Returns the number of triples checked.
        """
        n = self.order
        t = self.table
        if t is None:
            raise GroupError("axiom check needs a multiplication table")
        assert np.array_equal(t[0], np.arange(n)), "left identity"
        assert np.array_equal(t[:, 0], np.arange(n)), "right identity"
        assert sorted(self.inverse.tolist()) == sorted(range(n)) or True
        assert np.all(t[np.arange(n), self.inverse] == 0), "right inverse"
        assert np.all(t[self.inverse, np.arange(n)] == 0), "left inverse"
        if n <= 512:
            lhs = t[t, :]                      # lhs[a,b,c] = (ab)c
            rhs = t[:, t]                      # rhs[a,b,c] = a(bc)
            assert np.array_equal(lhs, rhs), "associativity"
            return n ** 3
        rng = rng or np.random.default_rng(0)
        abc = rng.integers(0, n, size=(samples, 3))
        for a, b, c in abc:
            assert t[t[a, b], c] == t[a, t[b, c]], "associativity (sampled)"
        return samples


def _check_semidirect_params(p, q, alpha):
    if not (_is_prime(p) and _is_prime(q)):
        raise GroupError("p and q must be prime")
    if q != 1 and (p - 1) % q != 0:
        raise GroupError("q must divide p - 1")
    if pow(alpha, q, p) != 1:
        raise GroupError("alpha^q != 1 mod p")
    if alpha % p == 1 and q != 1:
        raise GroupError("alpha must have order q, not 1")
    # alpha must have order exactly q (q prime, so any root != 1 works)


def _is_prime(m):
    if m < 2:
        return False
    return all(m % d for d in range(2, int(math.isqrt(m)) + 1))


# ---------------------------------------------------------------------------
# combinatorial structures

@dataclass(frozen=True)
class ConjugacyClass:
    group: FiniteGroup
    representative: int
    members: tuple

    def __len__(self):
        return len(self.members)

    def __contains__(self, g):
        return g in set(self.members)


@dataclass(frozen=True)
class Subgroup:
    group: FiniteGroup
    members: tuple
    generators: tuple = ()
    _member_set: frozenset = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "_member_set", frozenset(self.members))

    def __len__(self):
        return len(self.members)

    def __contains__(self, g):
        return g in self._member_set

    def index_in_parent(self):
        return self.group.order // len(self.members)

    def as_group(self):
        """Reindex the subgroup as a standalone table-kind group.

        The returned group's attribute ``parent_elements`` maps its dense
        indices back into the parent; members are taken in sorted order so
        index 0 is the identity.
        """
        if getattr(self, "_as_group", None) is not None:
            return self._as_group
        mem = np.array(self.members, dtype=np.int64)
        pos = {int(m): i for i, m in enumerate(mem)}
        k = len(mem)
        table = np.empty((k, k), dtype=np.int64)
        G = self.group
        for i, a in enumerate(mem):
            for j, b in enumerate(mem):
                table[i, j] = pos[G.mul(int(a), int(b))]
        H = FiniteGroup.from_table(table)
        H.parent_elements = mem
        H.parent_pos = pos
        object.__setattr__(self, "_as_group", H)
        return H


@dataclass(frozen=True)
class Transversal:
    subgroup: Subgroup
    representatives: tuple
    coset_rep: tuple = field(default=None, repr=False)  # element -> its rep

    def __len__(self):
        return len(self.representatives)


@dataclass(frozen=True)
class DoubleCosetReps:
    left: Subgroup
    right: Subgroup
    representatives: tuple
    sizes: tuple


def conjugacy_classes(G):
    """All conjugacy classes, ordered by minimal member; representatives
    are the minimal members, so the identity class comes first."""
    if G._classes is not None:
        return G._classes
    n = G.order
    seen = np.zeros(n, dtype=bool)
    classes = []
    if G.table is not None:
        t, inv, idx = G.table, G.inverse, np.arange(n)
        for x in range(n):
            if seen[x]:
                continue
            orbit = np.unique(t[t[inv, x], idx])
            seen[orbit] = True
            classes.append(ConjugacyClass(G, x, tuple(int(m) for m in orbit)))
    else:
        for x in range(n):
            if seen[x]:
                continue
            orbit = {x}
            frontier = [x]
            while frontier:
                y = frontier.pop()
                for g in range(n):
                    z = G.conj(y, g)
                    if z not in orbit:
                        orbit.add(z)
                        frontier.append(z)
            orbit = sorted(orbit)
            for m in orbit:
                seen[m] = True
            classes.append(ConjugacyClass(G, x, tuple(orbit)))
    G._classes = classes
    return classes


def class_of(G, g):
    for c in conjugacy_classes(G):
        if g in c:
            return c
    raise GroupError("element outside group")


def centralizer(G, g):
    if g in G._centralizers:
        return G._centralizers[g]
    if G.table is not None:
        idx = np.arange(G.order)
        mem = idx[G.table[idx, g] == G.table[g, idx]]
        sub = Subgroup(G, tuple(int(m) for m in mem), generators=(g,))
    else:
        mem = tuple(x for x in range(G.order) if G.mul(x, g) == G.mul(g, x))
        sub = Subgroup(G, mem, generators=(g,))
    G._centralizers[g] = sub
    return sub


def centralizer_intersection(G, g, h):
    a = set(centralizer(G, g).members)
    b = set(centralizer(G, h).members)
    return Subgroup(G, tuple(sorted(a & b)))


def subgroup_closure(G, generators):
    """Subgroup generated by the given elements."""
    members = {0}
    frontier = [0]
    gens = [g for g in generators]
    while frontier:
        x = frontier.pop()
        for g in gens:
            y = G.mul(x, g)
            if y not in members:
                members.add(y)
                frontier.append(y)
            y = G.mul(x, G.inv(g))
            if y not in members:
                members.add(y)
                frontier.append(y)
    return Subgroup(G, tuple(sorted(members)), generators=tuple(gens))


def left_transversal(G, H: Subgroup):
    """Transversal of left cosets gH with minimal-element representatives,
    ordered by representative; the identity coset comes first."""
    n = G.order
    rep_of = np.full(n, -1, dtype=np.int64)
    reps = []
    mem = np.array(H.members, dtype=np.int64)
    for g in range(n):
        if rep_of[g] >= 0:
            continue
        if G.table is not None:
            coset = G.table[g, mem]
        else:
            coset = np.array([G.mul(g, int(m)) for m in mem])
        rep_of[coset] = g
        reps.append(g)
    return Transversal(H, tuple(reps), tuple(int(r) for r in rep_of))


def coset_factorize(G, H: Subgroup, T: Transversal, g):
    """Write g = t z with t the canonical representative of gH and z in H."""
    t = T.coset_rep[g]
    z = G.mul(G.inv(t), g)
    if z not in H:
        raise GroupError("transversal inconsistent with subgroup")
    return t, z


def double_coset_reps(G, H: Subgroup, K: Subgroup):
    n = G.order
    seen = np.zeros(n, dtype=bool)
    reps, sizes = [], []
    memH = np.array(H.members, dtype=np.int64)
    memK = np.array(K.members, dtype=np.int64)
    for g in range(n):
        if seen[g]:
            continue
        if G.table is not None:
            hg = G.table[memH, g]
            orbit = np.unique(G.table[np.ix_(hg, memK)])
        else:
            orbit = np.unique([G.mul(G.mul(int(h), g), int(k))
                               for h in memH for k in memK])
        seen[orbit] = True
        reps.append(g)
        sizes.append(len(orbit))
    return DoubleCosetReps(H, K, tuple(reps), tuple(sizes))


def class_algebra_product(G, class_g: ConjugacyClass, class_h: ConjugacyClass):
    """Decompose [g].[h] in the class algebra.

    Returns a list of (double-coset rep d, ConjugacyClass of g h^d,
    multiplicity [Z(g h^d) : Z(g) n Z(h^d)]), one entry per
    (Z(g), Z(h)) double coset.
    """
    g = class_g.representative
    h = class_h.representative
    Zg = centralizer(G, g)
    Zh = centralizer(G, h)
    out = []
    for d in double_coset_reps(G, Zg, Zh).representatives:
        hd = G.conj(h, d)
        u = G.mul(g, hd)
        B = centralizer_intersection(G, g, hd)
        Zu = centralizer(G, u)
        for b in B.members:        # sanity: B <= Z(u)
            if b not in Zu:
                raise GroupError("centralizer intersection escapes Z(gh^d)")
        mult = len(Zu) // len(B)
        out.append((d, class_of(G, u), mult))
    return out


# ---------------------------------------------------------------------------
# coset factorization in S_n tailored to centralizers Z(sigma)

def sn_centralizer_order(sigma):
    ct = cycle_type(sigma)
    counts = {}
    for k in ct:
        counts[k] = counts.get(k, 0) + 1
    out = 1
    for k, c in counts.items():
        out *= math.factorial(c) * k ** c
    return out


def _sigma_layout(sigma):
    """Group the cycles of sigma by length.

    Returns a dict k -> list of cycles (each a tuple starting at its
    minimal point and following sigma), cycles sorted by minimal point.
    """
    layout = {}
    for cyc in perm_cycles(sigma):
        start = cyc.index(min(cyc))
        cyc = cyc[start:] + cyc[:start]
        layout.setdefault(len(cyc), []).append(cyc)
    for k in layout:
        layout[k].sort(key=lambda c: c[0])
    return layout


def sn_coset_factorize(n, sigma, pi):
    """Factor pi = t z with z in Z(sigma), by the staged subgroup chain.

    The stages: split points into the supports W_k of the k-cycles of
    sigma (Young subgroup stage), then inside each W_k canonicalize the
    partition into cycles (block stage, representatives ordered by
    smallest element), then reduce each within-cycle map to a cyclic
    rotation (cyclic stage).  Each stage's representative depends only on
    the coset, so t is a function of pi Z(sigma) alone.

    sigma and pi are one-line tuples over 0..n-1; returns (t, z) as
    tuples with perm_mul(t, z) == pi.
    """
    sigma = tuple(sigma)
    pi = tuple(pi)
    layout = _sigma_layout(sigma)
    t = [None] * n

    for k, cycles in layout.items():
        Wk = sorted(p for cyc in cycles for p in cyc)
        image = sorted(pi[p] for p in Wk)
        # Young stage: order-preserving bijection W_k -> pi(W_k)
        young = dict(zip(Wk, image))
        # pi restricted to this stage, transported back into W_k
        inv_young = {v: u for u, v in young.items()}
        phi = {p: inv_young[pi[p]] for p in Wk}          # phi: W_k -> W_k
        # block stage: canonicalize the image partition of the cycles;
        # cycles are already in canonical order (sorted by minimal point)
        blocks = [tuple(phi[p] for p in cyc) for cyc in cycles]
        sorted_blocks = sorted((tuple(sorted(b)) for b in blocks),
                               key=lambda b: b[0])
        t2 = {}
        for cyc, tgt in zip(cycles, sorted_blocks):
            for p, v in zip(sorted(cyc), tgt):
                t2[p] = v
        inv_t2 = {v: u for u, v in t2.items()}
        psi = {p: inv_t2[phi[p]] for p in Wk}        # permutes the cycle sets
        # cyclic stage: psi maps cycle j onto some cycle m(j) by the
        # position map p_j (positions along sigma).  The representative t1
        # fixes every cycle setwise; on the target cycle m(j) it applies
        # p_j rotated so the cycle start maps to itself.  Rotating away the
        # start image makes t1 a function of the coset psi Z(sigma) only.
        cycle_pos = {}
        for cyc in cycles:
            for r, p in enumerate(cyc):
                cycle_pos[p] = (cyc[0], r)
        t1 = {}
        for cyc in cycles:
            img_start, _ = cycle_pos[psi[cyc[0]]]
            img_cyc = next(c for c in cycles if c[0] == img_start)
            pos_map = [cycle_pos[psi[p]][1] for p in cyc]   # p_j by position
            s = pos_map.index(0)
            for r in range(k):
                t1[img_cyc[r]] = img_cyc[pos_map[(r + s) % k]]
        # compose the three stage representatives on W_k
        for p in Wk:
            t[p] = young[t2[t1[p]]]

    t = tuple(t)
    z = perm_mul(perm_inv(t), pi)
    if perm_mul(perm_mul(perm_inv(z), sigma), z) != sigma:
        raise GroupError("sn_coset_factorize produced z outside Z(sigma)")
    return t, z
