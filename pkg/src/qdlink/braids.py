"""Braid words, R-matrix braid representations and link invariants.

The braid generator acts on two adjacent tensor factors as sigma = T R.
In the regular representation on pairs (g, h):

    sigma |g1 h1*, g2 h2*> = |g2 h2*, (g2 h2 g2^{-1} g1) h1*>

which is an exact permutation of basis tuples, so every braid image is a
permutation matrix.  For a fluxon (class C, trivial charge) the same
action collapses to conjugation of class labels:

    B |g1, g2> = |g2, g2 g1 g2^{-1}>.

For a charged irrep Lambda = ([h], rho) the braiding matrix on the
tensor square is

    B |x, v> |y, w> = |y, w> |y x y^{-1}, rho(k_{yxy^{-1}}^{-1} y k_x) v>.

Link invariants: the trace closure value

    L(theta) = <h>^{-e(theta)} tr(tau(theta)) / dim(Lambda)

is invariant under both Markov moves, and the plat closure

    Pl(theta) = <alpha| tau(theta) |alpha>,  |alpha> = |Phi>^{x n}

with the conjugate-pair cap state |Phi> is invariant under the Hilden
subgroup.  Monte-Carlo versions estimate the same quantities from k
uniform basis samples, k being the smallest integer exceeding
32 ln2 / eps^2, with per-sample values of modulus at most 1.
"""

from __future__ import annotations

import json
import math
import re
from dataclasses import dataclass, field

import numpy as np

from .groups import FiniteGroup, GroupError, conjugacy_classes
from .double import DGIrrepLabel, irrep_labels, flux_scalar, is_self_dual, fluxon_label

IRREP_STATE_CAP = 1_000_000


class BraidError(ValueError):
    pass


class CapExceeded(RuntimeError):
    pass


@dataclass(frozen=True)
class BraidWord:
    """n strands and a sequence of (generator index 1..n-1, sign +-1)."""
    n: int
    letters: tuple

    def __post_init__(self):
        if self.n < 1:
            raise BraidError("need at least one strand")
        for i, s in self.letters:
            if not (1 <= i < self.n):
                raise BraidError(f"generator index {i} out of range for {self.n} strands")
            if s not in (1, -1):
                raise BraidError("sign must be +1 or -1")

    @classmethod
    def from_text(cls, text):
        """Parse 'B4: s2 s2 s2' (S uppercase = inverse generator)."""
        m = re.match(r"\s*B(\d+)\s*:\s*(.*)$", text)
        if not m:
            raise BraidError(f"cannot parse braid text {text!r}")
        n = int(m.group(1))
        letters = []
        for tok in m.group(2).split():
            mm = re.fullmatch(r"([sS])(\d+)", tok)
            if not mm:
                raise BraidError(f"bad braid letter {tok!r}")
            letters.append((int(mm.group(2)), 1 if mm.group(1) == "s" else -1))
        return cls(n, tuple(letters))

    @classmethod
    def from_json(cls, spec):
        if isinstance(spec, str):
            spec = json.loads(spec)
        return cls(int(spec["strands"]),
                   tuple((int(i), int(s)) for i, s in spec["word"]))

    def to_text(self):
        toks = [("s" if s > 0 else "S") + str(i) for i, s in self.letters]
        return f"B{self.n}: " + " ".join(toks)

    def to_json(self):
        return {"strands": self.n, "word": [[i, s] for i, s in self.letters]}

    def inverse(self):
        return BraidWord(self.n, tuple((i, -s) for i, s in reversed(self.letters)))

    def __mul__(self, other):
        if self.n != other.n:
            raise BraidError("strand mismatch")
        return BraidWord(self.n, self.letters + other.letters)

    def embed(self, n):
        """Inclusion into a braid group on more strands."""
        if n < self.n:
            raise BraidError("cannot shrink strand count")
        return BraidWord(n, self.letters)


def parse_braid(text_or_spec):
    if isinstance(text_or_spec, BraidWord):
        return text_or_spec
    if isinstance(text_or_spec, dict):
        return BraidWord.from_json(text_or_spec)
    s = text_or_spec.strip()
    if s.startswith("{"):
        return BraidWord.from_json(s)
    return BraidWord.from_text(s)


def linking_number(word: BraidWord) -> int:
    return sum(s for _, s in word.letters)


def hilden_generators(strands):
    """Generators of the Hilden subgroup of B_{2n}: sigma_1,
    sigma_2 sigma_1^2 sigma_2, and sigma_{2i} sigma_{2i-1} sigma_{2i+1}
    sigma_{2i} for 1 <= i <= n-1."""
    if strands % 2 or strands < 2:
        raise BraidError("Hilden subgroup lives in an even-strand braid group")
    out = [BraidWord(strands, ((1, 1),))]
    if strands >= 4:
        out.append(BraidWord(strands, ((2, 1), (1, 1), (1, 1), (2, 1))))
    for i in range(1, strands // 2):
        out.append(BraidWord(strands, ((2 * i, 1), (2 * i - 1, 1),
                                       (2 * i + 1, 1), (2 * i, 1))))
    return out


# ---------------------------------------------------------------------------
# permutation forms: regular and fluxon bases

def braid_generator_regular(G, state, i, sign):
    """Apply sigma_i^{sign} to a sparse state over tuples of (g, h) pairs."""
    out = {}
    for basis, amp in state.items():
        key = _apply_regular(G, basis, i, sign)
        out[key] = out.get(key, 0.0) + amp
    return out


def _apply_regular(G, basis, i, sign):
    basis = list(basis)
    a, b = basis[i - 1], basis[i]
    if sign > 0:
        g1, h1 = a
        g2, h2 = b
        c = G.mul(G.mul(g2, h2), G.inv(g2))
        basis[i - 1] = (g2, h2)
        basis[i] = (G.mul(c, g1), h1)
    else:
        (ga, ha), (gc, hc) = a, b
        c = G.mul(G.mul(ga, ha), G.inv(ga))
        basis[i - 1] = (G.mul(G.inv(c), gc), hc)
        basis[i] = (ga, ha)
    return tuple(basis)


def braid_generator_fluxon(G, members, state, i, sign):
    """Apply sigma_i^{sign} to a sparse state over tuples of class
    elements."""
    mset = set(members)
    out = {}
    for basis, amp in state.items():
        for g in basis:
            if g not in mset:
                raise BraidError("basis element outside the class")
        key = _apply_fluxon(G, basis, i, sign)
        out[key] = out.get(key, 0.0) + amp
    return out


def _apply_fluxon(G, basis, i, sign):
    basis = list(basis)
    a, b = basis[i - 1], basis[i]
    if sign > 0:
        basis[i - 1] = b
        basis[i] = G.mul(G.mul(b, a), G.inv(b))
    else:
        basis[i - 1] = G.mul(G.mul(G.inv(a), b), a)
        basis[i] = a
    return tuple(basis)


def apply_word_tuple(G, word: BraidWord, basis, scheme):
    """Push one basis tuple through the whole braid word (permutation
    schemes only)."""
    f = _apply_regular if scheme == "regular" else _apply_fluxon
    for i, s in word.letters:
        basis = f(G, basis, i, s)
    return basis


def braid_apply(G, word: BraidWord, state, scheme="regular", members=None):
    """Apply a braid word to a sparse state in a permutation scheme."""
    for i, s in word.letters:
        if scheme == "regular":
            state = braid_generator_regular(G, state, i, s)
        elif scheme == "fluxon":
            state = braid_generator_fluxon(G, members, state, i, s)
        else:
            raise BraidError(f"unknown scheme {scheme}")
    return state


def regular_generator_permutation(G, n_strands, i, sign):
    """sigma_i^{sign} on the full regular basis, as an index permutation
    array over (|G|^2)^n flattened little-endian by strand (strand 1 most
    significant).  Vectorized; used for exhaustive relation checks."""
    m = G.order * G.order
    dim = m ** n_strands
    idx = np.arange(dim)
    # decode the two affected strands
    right = n_strands - 1 - i          # factors to the right of strand i+1
    s2 = (idx // m ** right) % m
    s1 = (idx // m ** (right + 1)) % m
    g1, h1 = np.divmod(s1, G.order)
    g2, h2 = np.divmod(s2, G.order)
    t = G.table
    inv = G.inverse
    if sign > 0:
        c = t[t[g2, h2], inv[g2]]
        n1 = s2
        n2 = t[c, g1] * G.order + h1
    else:
        c = t[t[g1, h1], inv[g1]]
        n1 = t[inv[c], g2] * G.order + h2
        n2 = s1
    return idx + (n1 - s1) * m ** (right + 1) + (n2 - s2) * m ** right


# ---------------------------------------------------------------------------
# charged irrep form (dense)

def braiding_matrix(L: DGIrrepLabel):
    """The matrix of sigma = T R on V_L (x) V_L, shape (d^2, d^2) with the
    row/column index pair (first factor, second factor)."""
    G = L.group
    d = L.dim
    dr = L.rho.dim
    B = np.zeros((d * d, d * d), dtype=complex)
    labels = L.basis_labels()
    pos = {lab: i for i, lab in enumerate(labels)}
    for (x, vi) in labels:
        for (y, wi) in labels:
            tgt = G.mul(G.mul(y, x), G.inv(y))
            z = G.mul(G.mul(G.inv(L.k[tgt]), y), L.k[x])
            mat = L.rho_mat(z)
            col = pos[(x, vi)] * d + pos[(y, wi)]
            for vo in range(dr):
                row = pos[(y, wi)] * d + pos[(tgt, vo)]
                B[row, col] += mat[vo, vi]
    return B


class IrrepBraider:
    """Braid action of B_n on V_L^{x n} as dense tensors."""

    def __init__(self, L: DGIrrepLabel, n_strands):
        self.L = L
        self.n = n_strands
        self.d = L.dim
        if self.d ** n_strands > IRREP_STATE_CAP:
            raise CapExceeded(f"state space {self.d}^{n_strands} exceeds cap")
        B = braiding_matrix(L)
        self.B = B.reshape(self.d, self.d, self.d, self.d)
        self.Binv = np.linalg.inv(B).reshape(self.d, self.d, self.d, self.d)

    def apply_generator(self, v, i, sign):
        """v has shape (d,) * n; acts on axes i-1, i."""
        M = self.B if sign > 0 else self.Binv
        w = np.tensordot(M, v, axes=([2, 3], [i - 1, i]))
        return np.moveaxis(w, (0, 1), (i - 1, i))

    def apply_word(self, word: BraidWord, v):
        for i, s in word.letters:
            v = self.apply_generator(v, i, s)
        return v

    def basis_vector(self, flat_index):
        v = np.zeros((self.d,) * self.n, dtype=complex)
        v[np.unravel_index(flat_index, v.shape)] = 1.0
        return v

    def diagonal_entry(self, word, flat_index):
        v = self.apply_word(word, self.basis_vector(flat_index))
        return v[np.unravel_index(flat_index, v.shape)]


# ---------------------------------------------------------------------------
# invariants

@dataclass
class InvariantValue:
    value: complex
    kind: str                      # "trace" | "plat"
    label: dict                    # irrep label serialization
    exact: bool
    mc: dict = None                # {"eps":, "k":, "seed":} when sampled
    normalizable: bool = True

    def to_json(self):
        out = {"value": [float(self.value.real), float(self.value.imag)],
               "kind": self.kind, "label": self.label, "exact": self.exact,
               "normalizable": self.normalizable}
        if self.mc:
            out["mc"] = self.mc
        return out


def mc_sample_count(eps):
    """Smallest integer strictly greater than 32 ln 2 / eps^2."""
    return int(math.floor(32 * math.log(2) / eps ** 2)) + 1


def trace_closure(G, word: BraidWord, L: DGIrrepLabel) -> InvariantValue:
    """Exact trace-closure invariant <h>^{-e} tr(tau) / dim."""
    d = L.dim
    n = word.n
    if d ** n > IRREP_STATE_CAP:
        raise CapExceeded("trace closure state space exceeds cap; use sampling")
    fs = flux_scalar(L)
    e = linking_number(word)
    if L.is_fluxon():
        members = L.cls.members
        count = 0
        import itertools
        for basis in itertools.product(members, repeat=n):
            if apply_word_tuple(G, word, basis, "fluxon") == basis:
                count += 1
        tr = complex(count)
    else:
        br = IrrepBraider(L, n)
        tr = 0.0 + 0.0j
        for idx in range(d ** n):
            tr += br.diagonal_entry(word, idx)
    val = tr * fs ** (-e) / d
    return InvariantValue(complex(val), "trace", L.serialize(), True)


def trace_closure_sampled(G, word: BraidWord, L: DGIrrepLabel, eps,
                          seed=0) -> InvariantValue:
    """Monte-Carlo trace closure from k uniform diagonal samples.

    Per-sample values are diagonal entries of a unitary, so their modulus
    is at most 1 (exactly 0 or 1 in permutation schemes); the estimate is
    the rescaled sample mean."""
    k = mc_sample_count(eps)
    rng = np.random.Generator(np.random.Philox(key=seed))
    d = L.dim
    n = word.n
    fs = flux_scalar(L)
    e = linking_number(word)
    total = 0.0 + 0.0j
    if L.is_fluxon():
        members = L.cls.members
        picks = rng.integers(0, len(members), size=(k, n))
        for row in picks:
            basis = tuple(members[j] for j in row)
            if apply_word_tuple(G, word, basis, "fluxon") == basis:
                total += 1.0
    else:
        br = IrrepBraider(L, n)
        picks = rng.integers(0, d ** n, size=k)
        for idx in picks:
            total += br.diagonal_entry(word, int(idx))
    mean = total / k
    val = mean * d ** (n - 1) * fs ** (-e)
    return InvariantValue(complex(val), "trace", L.serialize(), False,
                          mc={"eps": eps, "k": k, "seed": seed})


def markov_trace_normalize(word: BraidWord, phi, z):
    """Normalize a Markov trace value phi(theta) into a link invariant.

    z is phi of a single positive generator.  Returns (value,
    normalizable); when z = 0 the raw phi is returned flagged."""
    if abs(z) < 1e-300:
        return phi, False
    e = linking_number(word)
    u = z / abs(z)
    val = abs(z) ** (-(word.n - 1)) * u ** (-e) * phi
    return val, True


def _cap_tuple(x):
    """Bottom cap state tuple from pair seeds: (x1, x1^{-1}, x2, ...)."""
    return x


def plat_state(L: DGIrrepLabel, n_pairs):
    """|alpha> = |Phi>^{x n}.  Fluxon: sparse dict over class tuples with
    |Phi> = |C|^{-1/2} sum |g, g^{-1}>.  Otherwise: dense tensor
    d^{-1/2} sum |v, v> per pair (requires a self-dual label)."""
    if not is_self_dual(L):
        raise BraidError("plat closure needs a self-dual irrep")
    G = L.group
    if L.is_fluxon():
        import itertools
        members = L.cls.members
        amp = len(members) ** (-n_pairs / 2)
        state = {}
        for seeds in itertools.product(members, repeat=n_pairs):
            basis = []
            for g in seeds:
                basis.extend((g, G.inv(g)))
            state[tuple(basis)] = amp
        return state
    d = L.dim
    pair = np.eye(d).reshape(d, d) / np.sqrt(d)
    v = pair
    for _ in range(n_pairs - 1):
        v = np.tensordot(v, pair, axes=0)
    return v.astype(complex)


def plat_closure(G, word: BraidWord, L: DGIrrepLabel) -> InvariantValue:
    """Exact <alpha| tau(theta) |alpha> for an even-strand braid."""
    if word.n % 2:
        raise BraidError("plat closure needs an even strand count")
    n_pairs = word.n // 2
    if L.is_fluxon():
        import itertools
        members = L.cls.members
        if len(members) ** n_pairs > IRREP_STATE_CAP:
            raise CapExceeded("plat closure seed space exceeds cap")
        inv_ok = 0
        for seeds in itertools.product(members, repeat=n_pairs):
            basis = []
            for g in seeds:
                basis.extend((g, G.inv(g)))
            out = apply_word_tuple(G, word, tuple(basis), "fluxon")
            if all(out[2 * j + 1] == G.inv(out[2 * j]) for j in range(n_pairs)):
                inv_ok += 1
        val = inv_ok / len(members) ** n_pairs
        return InvariantValue(complex(val), "plat", L.serialize(), True)
    if L.dim ** word.n > IRREP_STATE_CAP:
        raise CapExceeded("plat closure state space exceeds cap")
    br = IrrepBraider(L, word.n)
    alpha = plat_state(L, n_pairs)
    out = br.apply_word(word, alpha)
    val = np.vdot(alpha, out)
    return InvariantValue(complex(val), "plat", L.serialize(), True)


def plat_closure_fluxon_mc(G, word: BraidWord, cls, eps, seed=0) -> InvariantValue:
    """Monte-Carlo plat estimator for a fluxon class.

    Samples uniform cap seeds, pushes the cap basis tuple through the
    braid permutation and scores the 0/1 indicator that the output is
    again a cap tuple; the mean is an unbiased estimate of Pl."""
    if word.n % 2:
        raise BraidError("plat closure needs an even strand count")
    L = fluxon_label(G, cls)
    n_pairs = word.n // 2
    members = cls.members
    k = mc_sample_count(eps)
    rng = np.random.Generator(np.random.Philox(key=seed))
    picks = rng.integers(0, len(members), size=(k, n_pairs))
    hits = 0
    for row in picks:
        basis = []
        for j in row:
            g = members[j]
            basis.extend((g, G.inv(g)))
        out = apply_word_tuple(G, word, tuple(basis), "fluxon")
        if all(out[2 * j + 1] == G.inv(out[2 * j]) for j in range(n_pairs)):
            hits += 1
    return InvariantValue(complex(hits / k), "plat", L.serialize(), False,
                          mc={"eps": eps, "k": k, "seed": seed})
