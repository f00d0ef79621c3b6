"""The quantum double D(G) of a finite group.

D(G) is spanned by pure tensors g h* (group element times dual-basis
functional), with

    (g1 h1*)(g2 h2*) = [h1^{g2} == h2] g1 g2 h2*
    Delta(g h*)      = sum over h1 h2 = h of g h2* (x) g h1*
    eps(g h*)        = [h == e]
    S(g h*)          = g^{-1} (g h^{-1} g^{-1})*

where x^y means y^{-1} x y throughout.  Elements are sparse complex
combinations keyed by (g, h) index pairs; all structure maps are exact on
the integer level whenever coefficients are.

Irreps of D(G) are labeled by a conjugacy class representative h together
with an irrep rho of the centralizer Z(h).  The carrier space has basis
|g', i> for g' in the class and i a rho index, with

    g h* |g', v> = [h == g'] |g g' g^{-1}, rho(k_{g g' g^{-1}}^{-1} g k_{g'}) v>

where k_x is the canonical conjugator with k_x^{-1} x k_x = h.
"""

from __future__ import annotations

import numpy as np

from .groups import (FiniteGroup, Subgroup, GroupError, conjugacy_classes,
                     centralizer, left_transversal, class_of)
from .group_irreps import GroupIrrep, irreps, trivial_index

TOL = 1e-12


class DGElement:
    """Sparse element of D(G): dict (g, h) -> complex coefficient."""

    __slots__ = ("group", "terms")

    def __init__(self, group, terms=None):
        self.group = group
        self.terms = {}
        if terms:
            for k, c in terms.items():
                if abs(c) > TOL:
                    self.terms[k] = c

    @classmethod
    def basis(cls, group, g, h, coeff=1.0):
        return cls(group, {(g, h): coeff})

    @classmethod
    def unit(cls, group):
        """1 = e sum_h h*."""
        return cls(group, {(0, h): 1.0 for h in range(group.order)})

    @classmethod
    def group_element(cls, group, g):
        """Embedding of the group algebra: g = g sum_h h*."""
        return cls(group, {(g, h): 1.0 for h in range(group.order)})

    @classmethod
    def dual_element(cls, group, h):
        """Embedding of the function algebra: h* = e h*."""
        return cls(group, {(0, h): 1.0})

    def __add__(self, other):
        out = dict(self.terms)
        for k, c in other.terms.items():
            out[k] = out.get(k, 0.0) + c
        return DGElement(self.group, out)

    def __sub__(self, other):
        out = dict(self.terms)
        for k, c in other.terms.items():
            out[k] = out.get(k, 0.0) - c
        return DGElement(self.group, out)

    def scale(self, a):
        return DGElement(self.group, {k: a * c for k, c in self.terms.items()})

    def is_zero(self, tol=TOL):
        return all(abs(c) <= tol for c in self.terms.values())

    def __eq__(self, other):
        return (self - other).is_zero(1e-9)

    def norm(self):
        return np.sqrt(sum(abs(c) ** 2 for c in self.terms.values()))

    def __repr__(self):
        G = self.group
        bits = [f"{c:+.3g} {G.element_repr(g)}.{G.element_repr(h)}*"
                for (g, h), c in sorted(self.terms.items())]
        return " ".join(bits) if bits else "0"


def dg_multiply(a: DGElement, b: DGElement) -> DGElement:
    if a.group is not b.group:
        raise GroupError("group mismatch in product")
    G = a.group
    out = {}
    for (g1, h1), c1 in a.terms.items():
        for (g2, h2), c2 in b.terms.items():
            if G.conj(h1, g2) == h2:
                key = (G.mul(g1, g2), h2)
                out[key] = out.get(key, 0.0) + c1 * c2
    return DGElement(G, out)


def comultiply(a: DGElement):
    """Delta(a) as a sparse dict ((g1,h1),(g2,h2)) -> coeff."""
    G = a.group
    out = {}
    for (g, h), c in a.terms.items():
        for h1 in range(G.order):
            h2 = G.mul(G.inv(h1), h)
            key = ((g, h2), (g, h1))
            out[key] = out.get(key, 0.0) + c
    return out


def counit(a: DGElement) -> complex:
    return sum(c for (g, h), c in a.terms.items() if h == 0)


def antipode(a: DGElement) -> DGElement:
    G = a.group
    out = {}
    for (g, h), c in a.terms.items():
        gi = G.inv(g)
        key = (gi, G.mul(G.mul(g, G.inv(h)), gi))
        out[key] = out.get(key, 0.0) + c
    return DGElement(G, out)


def tensor_multiply(G, x, y):
    """Product in D(G) (x) D(G) of sparse dicts keyed by basis pairs."""
    out = {}
    for (a1, b1), c1 in x.items():
        for (a2, b2), c2 in y.items():
            if G.conj(a1[1], a2[0]) == a2[1] and G.conj(b1[1], b2[0]) == b2[1]:
                key = ((G.mul(a1[0], a2[0]), a2[1]),
                       (G.mul(b1[0], b2[0]), b2[1]))
                out[key] = out.get(key, 0.0) + c1 * c2
    return {k: c for k, c in out.items() if abs(c) > TOL}


def r_matrix(G):
    """R = sum_g g (x) g* as a sparse tensor-square element."""
    out = {}
    for g in range(G.order):
        for h in range(G.order):
            out[((g, h), (0, g))] = 1.0
    return out


def swap_tensor(x):
    return {(b, a): c for (a, b), c in x.items()}


def regular_action_matrix(a: DGElement):
    """Dense matrix of a on C[G x G] with basis index g * |G| + h."""
    G = a.group
    n = G.order
    M = np.zeros((n * n, n * n), dtype=complex)
    for (gp, hp), c in a.terms.items():
        for g in range(n):
            hh = G.conj(hp, g)
            M[G.mul(gp, g) * n + hh, g * n + hh] += c
    return M


def regular_action(a: DGElement, state):
    """Action of a on a sparse state dict (g, h) -> amplitude.

    g' h'* |g, h*> = [h'^g == h] |g' g, h*>.
    """
    G = a.group
    out = {}
    for (gp, hp), ca in a.terms.items():
        for (g, h), cv in state.items():
            if G.conj(hp, g) == h:
                key = (G.mul(gp, g), h)
                out[key] = out.get(key, 0.0) + ca * cv
    return {k: c for k, c in out.items() if abs(c) > TOL}


# ---------------------------------------------------------------------------
# irreps of D(G)

class DGIrrepLabel:
    """Irrep of D(G): conjugacy class of h plus an irrep of Z(h).

    Carrier basis: (class member g', rho row index), class members in
    sorted order.  The conjugators k_g (k_g^{-1} g k_g = h) are the
    canonical transversal elements of Z(h), so k_h = e.
    """

    def __init__(self, G, cls, rho: GroupIrrep, rho_index):
        self.group = G
        self.cls = cls
        self.h = cls.representative
        self.rho = rho
        self.rho_index = rho_index
        self.Z = centralizer(G, self.h)
        self.Zgroup = self.Z.as_group()
        self.transversal = left_transversal(G, self.Z)
        self.dim = len(cls.members) * rho.dim
        # conjugator per class member: t h t^{-1} runs over the class as t
        # runs over the transversal, each member hit once
        self.k = {}
        for t in self.transversal.representatives:
            gp = G.mul(G.mul(t, self.h), G.inv(t))
            if gp in self.k:
                raise GroupError("transversal does not separate the class")
            self.k[gp] = t
        if set(self.k) != set(cls.members):
            raise GroupError("transversal misses class members")
        self.member_pos = {g: i for i, g in enumerate(cls.members)}

    def rho_mat(self, z):
        """rho evaluated at a parent element z in Z(h)."""
        return self.rho(self.Zgroup.parent_pos[z])

    def basis_labels(self):
        return [(g, i) for g in self.cls.members for i in range(self.rho.dim)]

    def is_fluxon(self):
        return self.rho.dim == 1 and self.rho.is_trivial()

    def serialize(self):
        return {"class_rep": self.h, "centralizer_irrep": self.rho_index}

    def __repr__(self):
        g = self.group
        return (f"DGIrrepLabel(h={g.element_repr(self.h)}, "
                f"rho={self.rho.label}, dim={self.dim})")


def irrep_labels(G):
    """All irreps of D(G), classes in canonical order, centralizer irreps
    in canonical order within each class."""
    cached = getattr(G, "_dg_irrep_labels", None)
    if cached is not None:
        return cached
    out = []
    for cls in conjugacy_classes(G):
        Z = centralizer(G, cls.representative)
        for ri, rho in enumerate(irreps(Z.as_group())):
            out.append(DGIrrepLabel(G, cls, rho, ri))
    assert sum(l.dim ** 2 for l in out) == G.order ** 2
    G._dg_irrep_labels = out
    return out


def irrep_action_matrix(L: DGIrrepLabel, g, h):
    """Matrix of the basis element g h* in the irrep L."""
    G = L.group
    d = L.rho.dim
    M = np.zeros((L.dim, L.dim), dtype=complex)
    if h not in L.member_pos:
        return M
    gp = h                       # only the column block g' = h survives
    tgt = G.mul(G.mul(g, gp), G.inv(g))
    z = G.mul(G.mul(G.inv(L.k[tgt]), g), L.k[gp])
    col = L.member_pos[gp] * d
    row = L.member_pos[tgt] * d
    M[row:row + d, col:col + d] = L.rho_mat(z)
    return M


def irrep_action(L: DGIrrepLabel, a: DGElement):
    """Matrix of a general element in the irrep L."""
    M = np.zeros((L.dim, L.dim), dtype=complex)
    for (g, h), c in a.terms.items():
        M += c * irrep_action_matrix(L, g, h)
    return M


def flux_scalar(L: DGIrrepLabel) -> complex:
    """<h>_rho = chi_rho(h) / d_rho; rho(h) is this scalar times identity
    because h is central in Z(h)."""
    m = L.rho_mat(L.h)
    val = np.trace(m) / L.rho.dim
    if np.abs(m - val * np.eye(L.rho.dim)).max() > 1e-9:
        raise GroupError("rho(h) is not scalar")
    return complex(val)


def conjugate_irrep(L: DGIrrepLabel) -> DGIrrepLabel:
    """Canonical label of the conjugate representation.

    The conjugate of the irrep induced from (h, rho) is induced from
    (h^{-1}, rho*); we transport rho* along a conjugation taking the
    canonical representative of [h^{-1}] to h^{-1} and match it to a
    canonical centralizer irrep by character.
    """
    G = L.group
    hinv = G.inv(L.h)
    cls2 = class_of(G, hinv)
    h2 = cls2.representative
    # c with c h2 c^{-1} = h^{-1}
    c = next(t for t in range(G.order) if G.mul(G.mul(t, h2), G.inv(t)) == hinv)
    Z2 = centralizer(G, h2).as_group()
    Z1 = L.Zgroup
    # character of the transported conjugate rep on Z(h2)
    char = np.empty(Z2.order, dtype=complex)
    for i in range(Z2.order):
        z = int(Z2.parent_elements[i])
        w = G.mul(G.mul(c, z), G.inv(c))        # lies in Z(h^{-1}) = Z(h)
        char[i] = np.conj(np.trace(L.rho_mat(w)))
    for ri, rho2 in enumerate(irreps(Z2)):
        if rho2.dim == L.rho.dim and np.abs(rho2.character() - char).max() < 1e-6:
            return DGIrrepLabel(G, cls2, rho2, ri)
    raise GroupError("conjugate irrep not identified")


def is_self_dual(L: DGIrrepLabel) -> bool:
    Lc = conjugate_irrep(L)
    return Lc.h == L.h and Lc.rho_index == L.rho_index


def label_from_spec(G, spec):
    """Resolve {"class_rep": g, "centralizer_irrep": j} to a label."""
    cls = class_of(G, int(spec["class_rep"]))
    want = int(spec["centralizer_irrep"])
    for L in irrep_labels(G):
        if L.h == cls.representative and L.rho_index == want:
            return L
    raise GroupError("no such irrep label")


def fluxon_label(G, cls):
    """The (class, trivial charge) label for a conjugacy class."""
    Z = centralizer(G, cls.representative).as_group()
    ti = trivial_index(irreps(Z))
    for L in irrep_labels(G):
        if L.h == cls.representative and L.rho_index == ti:
            return L
    raise GroupError("fluxon label missing")
