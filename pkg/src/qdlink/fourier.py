"""Fourier transforms over finite groups and over the quantum double.

Conventions.  The Fourier matrix of a group H is

    F[(rho, j, i), h] = sqrt(d_rho / |H|) rho(h)[i, j]

with rows grouped by (rho, j): conjugating left multiplication gives
F L(h) F^dag = direct sum over (rho, j) of rho(h), the j index counting
the d_rho regular-representation copies.

The double transform factors the first register through the centralizer
of the dual register: |g, h*> -> |h*, t, z> with g = t z, t the canonical
coset representative of g Z(h), then Fourier-transforms z over Z(h).  The
output basis is labeled (h, rho, j, t, i); for fixed (h, rho, j) the span
of the (t, i) labels is an invariant subspace of the regular action of
D(G) carrying the irrep ([h], rho), with the transversal element t
standing in for the class member t h t^{-1}.

The wreath transform over Z_k wr S_l runs the staged pipeline: abelian
Fourier over Z_k^l, relabeling of the character vector through its orbit
representative and a Young-subgroup coset factorization, then a Fourier
transform over the stabilizer Young subgroup.
"""

from __future__ import annotations

import itertools

import numpy as np

from .groups import (FiniteGroup, Subgroup, Transversal, GroupError,
                     conjugacy_classes, centralizer, left_transversal,
                     coset_factorize, perm_mul, perm_inv)
from .group_irreps import GroupIrrep, irreps, trivial_index, IrrepError
from . import double as dbl

DENSE_GROUP_CAP = 64          # |G| cap for materializing the double QFT
SVD_TOL = 1e-8


class UnitaryTransform:
    """Dense unitary with labeled row (output) and column (input) bases."""

    def __init__(self, matrix, row_labels=None, col_labels=None, structured=None):
        self.matrix = np.asarray(matrix, dtype=complex)
        n = self.matrix.shape[0]
        self.row_labels = list(row_labels) if row_labels is not None else list(range(n))
        self.col_labels = list(col_labels) if col_labels is not None else list(range(n))
        self.structured = structured      # optional callable vec -> vec
        self.row_pos = {lab: i for i, lab in enumerate(self.row_labels)}
        self.col_pos = {lab: i for i, lab in enumerate(self.col_labels)}

    @property
    def dim(self):
        return self.matrix.shape[0]

    def apply(self, vec):
        if self.structured is not None:
            return self.structured(np.asarray(vec, dtype=complex))
        return self.matrix @ vec

    def apply_dense(self, vec):
        return self.matrix @ vec

    def inverse_apply(self, vec):
        return self.matrix.conj().T @ vec

    def unitarity_error(self):
        M = self.matrix
        return float(np.abs(M.conj().T @ M - np.eye(self.dim)).max())

    def structured_dense_error(self):
        """Max column-wise distance between the structured pipeline and the
        dense matrix; zero when no structured form is attached."""
        if self.structured is None:
            return 0.0
        err = 0.0
        for c in range(self.dim):
            e = np.zeros(self.dim, dtype=complex)
            e[c] = 1.0
            err = max(err, float(np.abs(self.structured(e) - self.matrix[:, c]).max()))
        return err


def fourier_rows(H):
    """Canonical Fourier row labels of H: (irrep index, j, i)."""
    rows = []
    for ri, r in enumerate(irreps(H)):
        for j in range(r.dim):
            for i in range(r.dim):
                rows.append((ri, j, i))
    return rows


def group_fourier(H) -> UnitaryTransform:
    """The Fourier matrix of H in its canonical irrep basis."""
    cached = getattr(H, "_fourier", None)
    if cached is not None:
        return cached
    reps = irreps(H)
    n = H.order
    rows = fourier_rows(H)
    F = np.empty((n, n), dtype=complex)
    for k, (ri, j, i) in enumerate(rows):
        r = reps[ri]
        F[k, :] = np.sqrt(r.dim / n) * r.matrices[:, i, j]
    U = UnitaryTransform(F, row_labels=rows, col_labels=list(range(n)))
    if U.unitarity_error() > 1e-9:
        raise IrrepError("group Fourier matrix not unitary")
    H._fourier = U
    return U


def centralizer_qft(G, h) -> UnitaryTransform:
    """Fourier transform over the centralizer Z(h), basis = parent
    elements of Z(h) in sorted order."""
    Z = centralizer(G, h)
    F = group_fourier(Z.as_group())
    return UnitaryTransform(F.matrix, row_labels=F.row_labels,
                            col_labels=list(Z.members))


# ---------------------------------------------------------------------------
# QFT over D(G)

class DoubleQFT:
    """The unitary |g, h*> -> |h, rho, j, t, i> over C[G x G].

    Column index of |g, h*> is g * |G| + h.  Rows are grouped per h, in
    block order (rho, j) with inner index (t, i); row labels are tuples
    (h, rho_index, j, t, i) where rho_index refers to the canonical irrep
    list of Z(h).as_group().
    """

    def __init__(self, G):
        n = G.order
        if n > DENSE_GROUP_CAP:
            raise GroupError(f"dense double QFT capped at |G| = {DENSE_GROUP_CAP}")
        self.group = G
        self.dim = n * n
        self.h_data = {}
        rows = []
        mat = np.zeros((self.dim, self.dim), dtype=complex)
        offset = 0
        for h in range(n):
            Z = centralizer(G, h)
            Zg = Z.as_group()
            T = left_transversal(G, Z)
            F = group_fourier(Zg)
            reps = irreps(Zg)
            # basis map within the h sector: column g -> (t, z)
            tz = [coset_factorize(G, Z, T, g) for g in range(n)]
            tpos = {t: a for a, t in enumerate(T.representatives)}
            zpos = Zg.parent_pos
            h_rows = []
            for ri, r in enumerate(reps):
                for j in range(r.dim):
                    for t in T.representatives:
                        for i in range(r.dim):
                            h_rows.append((h, ri, j, t, i))
            rowpos = {lab: offset + a for a, lab in enumerate(h_rows)}
            for g in range(n):
                t, z = tz[g]
                zi = zpos[z]
                col = g * n + h
                for (ri, j, i), amp in zip(F.row_labels, F.matrix[:, zi]):
                    if amp != 0:
                        mat[rowpos[(h, ri, j, t, i)], col] = amp
            rows.extend(h_rows)
            self.h_data[h] = {"Z": Z, "Zgroup": Zg, "transversal": T,
                              "fourier": F, "irreps": reps, "tz": tz,
                              "rowpos": rowpos}
            offset += len(h_rows)
        self.transform = UnitaryTransform(mat, row_labels=rows,
                                          col_labels=[(g, h) for g in range(n)
                                                      for h in range(n)],
                                          structured=self._apply)

    def _apply(self, vec):
        """Structured application: coset relabeling then per-h centralizer
        Fourier, no recourse to the assembled dense matrix."""
        G = self.group
        n = G.order
        out = np.zeros(self.dim, dtype=complex)
        v = vec.reshape(n, n)                 # v[g, h]
        for h in range(n):
            data = self.h_data[h]
            T = data["transversal"]
            Zg = data["Zgroup"]
            F = data["fourier"]
            m = Zg.order
            block = np.zeros((len(T.representatives), m), dtype=complex)
            tpos = {t: a for a, t in enumerate(T.representatives)}
            for g in range(n):
                t, z = data["tz"][g]
                block[tpos[t], Zg.parent_pos[z]] = v[g, h]
            fb = block @ F.matrix.T           # Fourier on the z register
            rowpos = data["rowpos"]
            for a, t in enumerate(T.representatives):
                for b, (ri, j, i) in enumerate(F.row_labels):
                    out[rowpos[(h, ri, j, t, i)]] = fb[a, b]
        return out

    def block_slices(self):
        """Ordered dict (h, rho_index, j) -> row index array."""
        out = {}
        for idx, (h, ri, j, t, i) in enumerate(self.transform.row_labels):
            out.setdefault((h, ri, j), []).append(idx)
        return {k: np.array(v) for k, v in out.items()}


def dg_qft(G) -> DoubleQFT:
    cached = getattr(G, "_dg_qft", None)
    if cached is None:
        cached = DoubleQFT(G)
        G._dg_qft = cached
    return cached


def qft_inverse_restriction_check(G, h, trials=5, seed=0):
    """Feeding a function supported on the coset slice {z Z(h) ... } i.e.
    on |g = z, h*> with z in Z(h) through the double QFT and keeping the
    t = e rows must reproduce the centralizer QFT of that function, with
    no amplitude elsewhere.  Returns the max deviation over random
    functions plus a delta and a constant function."""
    Q = dg_qft(G)
    data = Q.h_data[h]
    Zg = data["Zgroup"]
    F = data["fourier"]
    m = Zg.order
    rng = np.random.default_rng(seed)
    funcs = [np.eye(m)[0],
             np.ones(m) / np.sqrt(m)]
    funcs += [rng.standard_normal(m) + 1j * rng.standard_normal(m)
              for _ in range(trials)]
    n = G.order
    err = 0.0
    for f in funcs:
        vec = np.zeros(n * n, dtype=complex)
        for zi in range(m):
            g = int(Zg.parent_elements[zi])
            vec[g * n + h] = f[zi]
        out = Q.transform.apply(vec)
        want = F.matrix @ f
        got = np.zeros(m, dtype=complex)
        leak = 0.0
        for idx, lab in enumerate(Q.transform.row_labels):
            if lab[0] != h:
                leak = max(leak, abs(out[idx]))
                continue
            _, ri, j, t, i = lab
            if t == 0:
                got[F.row_pos[(ri, j, i)]] = out[idx]
            else:
                leak = max(leak, abs(out[idx]))
        err = max(err, float(np.abs(got - want).max()), float(leak))
    return err


# ---------------------------------------------------------------------------
# wreath-product QFT

def wreath_qft(k, l):
    """Staged Fourier transform over Z_k wr S_l.

    Returns (group, UnitaryTransform).  Row labels are tuples
    (omega0, t, tprime, lam, j, i): omega0 the sorted character vector of
    Z_k^l, t the transversal permutation with omega = t . omega0, tprime a
    right-coset representative of the stabilizer Young subgroup, lam the
    stabilizer irrep with its own (j, i) Fourier indices.  Left
    multiplication conjugates to blocks indexed by (omega0, lam, j,
    tprime) acting on the (t, i) pair, which is the induced-irrep block
    structure.
    """
    W = FiniteGroup.wreath(k, l)
    elements = W.meta["elements"]
    n = W.order
    sperms = sorted({p for _, p in elements})
    fact = len(sperms)
    omega = np.array(list(itertools.product(range(k), repeat=l)), dtype=np.int64)

    # stage A: abelian Fourier on the w register
    # amplitude <omega, pi | w, pi> = k^{-l/2} exp(2 pi i omega . w / k)
    interm = []                                   # labels (omega tuple, pi)
    ipos = {}
    for om in map(tuple, omega):
        for p in sperms:
            ipos[(om, p)] = len(interm)
            interm.append((om, p))
    A = np.zeros((n, n), dtype=complex)
    for ci, (w, p) in enumerate(elements):
        wv = np.array(w)
        phases = np.exp(2j * np.pi * (omega @ wv) / k) / k ** (l / 2)
        for om, amp in zip(map(tuple, omega), phases):
            A[ipos[(om, p)], ci] = amp

    # stage B bookkeeping per orbit representative omega0
    def orbit_rep(om):
        return tuple(sorted(om))

    def transversal_perm(om0, om):
        """Order-preserving permutation with om = t . om0, i.e.
        om[t(x)] = om0[x] position-wise per equal-value group."""
        t = [None] * l
        by_val = {}
        for pos, v in enumerate(om):
            by_val.setdefault(v, []).append(pos)
        used = {v: 0 for v in by_val}
        for x, v in enumerate(om0):
            t[x] = by_val[v][used[v]]
            used[v] += 1
        return tuple(t)

    # the action of pi on omega matches left multiplication:
    # (v, tau)(w, p) = (v + tau.w, tau p) with (tau.w)[i] = w[tau^{-1} i],
    # and the character label transforms as omega -> tau.omega likewise
    final_rows = []
    orbit_data = {}
    for om in sorted({orbit_rep(tuple(o)) for o in map(tuple, omega)}):
        stab = [p for p in sperms
                if tuple(om[perm_inv(p)[x]] for x in range(l)) == om]
        # as a group: table over the stabilizer permutations
        spos = {p: i for i, p in enumerate(sorted(stab))}
        stab_sorted = sorted(stab)
        table = np.empty((len(stab), len(stab)), dtype=np.int64)
        for i, p1 in enumerate(stab_sorted):
            for j2, p2 in enumerate(stab_sorted):
                table[i, j2] = spos[perm_mul(p1, p2)]
        Sg = FiniteGroup.from_table(table)
        F = group_fourier(Sg)
        # right cosets Stab s: canonical rep = lex-min member
        seen = set()
        tprimes = []
        coset_rep = {}
        for s in sperms:
            if s in seen:
                continue
            coset = sorted(perm_mul(z, s) for z in stab_sorted)
            rep = coset[0]
            tprimes.append(rep)
            for cmem in coset:
                seen.add(cmem)
                coset_rep[cmem] = rep
        orbit_data[om] = (stab_sorted, spos, Sg, F, tprimes, coset_rep)

    for om_full in map(tuple, omega):
        om0 = orbit_rep(om_full)
        stab_sorted, spos, Sg, F, tprimes, coset_rep = orbit_data[om0]
        t = transversal_perm(om0, om_full)
        for p in sperms:
            s = perm_mul(perm_inv(t), p)
            tp = coset_rep[s]
            z = perm_mul(s, perm_inv(tp))
            zi = spos[z]
            col = ipos[(om_full, p)]
            for (ri, j, i), amp in zip(F.row_labels, F.matrix[:, zi]):
                lab = (om0, t, tp, ri, j, i)
                final_rows.append(lab)
                # rows appended lazily; fill below
    # assign canonical row order: sort labels
    final_rows = sorted(set(final_rows))
    rpos = {lab: i for i, lab in enumerate(final_rows)}
    BC = np.zeros((n, n), dtype=complex)
    for om_full in map(tuple, omega):
        om0 = orbit_rep(om_full)
        stab_sorted, spos, Sg, F, tprimes, coset_rep = orbit_data[om0]
        t = transversal_perm(om0, om_full)
        for p in sperms:
            s = perm_mul(perm_inv(t), p)
            tp = coset_rep[s]
            z = perm_mul(s, perm_inv(tp))
            zi = spos[z]
            col = ipos[(om_full, p)]
            for (ri, j, i), amp in zip(F.row_labels, F.matrix[:, zi]):
                BC[rpos[(om0, t, tp, ri, j, i)], col] = amp
    U = UnitaryTransform(BC @ A, row_labels=final_rows,
                         col_labels=list(range(n)))
    return W, U


def wreath_block_key(label):
    """Invariant-block key of a wreath QFT row label: left multiplication
    acts within (omega0, lam, j, tprime)."""
    om0, t, tp, ri, j, i = label
    return (om0, ri, j, tp)


# ---------------------------------------------------------------------------
# induced representations

def induced_representation(A: FiniteGroup, B: Subgroup, rho: GroupIrrep):
    """Matrices of Ind_B^A rho on basis (t, v), t in the canonical
    transversal of B.  rho is an irrep of B.as_group()."""
    T = left_transversal(A, B)
    Bg = B.as_group()
    d = rho.dim
    reps = T.representatives
    tpos = {t: i for i, t in enumerate(reps)}
    dim = len(reps) * d
    mats = np.zeros((A.order, dim, dim), dtype=complex)
    for a in range(A.order):
        for ti, t in enumerate(reps):
            at = A.mul(a, t)
            t2, z = coset_factorize(A, B, T, at)
            blk = rho(Bg.parent_pos[z])
            r, c = tpos[t2] * d, ti * d
            mats[a, r:r + d, c:c + d] = blk
    return mats, T


def induced_block_diagonalize(A: FiniteGroup, B: Subgroup, rho: GroupIrrep):
    """Unitary taking the induced-representation basis (t, v) to canonical
    A-irrep blocks.

    The induced space is embedded into C[A] by loading v into one fixed
    rho-isotypic column of C[B] (the Fourier rows (rho, j=0, i)), applying
    the Fourier transform of A, and reading off, per A-irrep mu, the
    multiplicity subspace by a singular value decomposition.  Returns
    (UnitaryTransform, blocks) with blocks = list of (mu, m_mu), and the
    transform's rows labeled (mu index, copy, i).
    """
    FA = group_fourier(A)
    FB = group_fourier(B.as_group())
    Bg = B.as_group()
    mats, T = induced_representation(A, B, rho)
    d = rho.dim
    reps_B = irreps(Bg)
    ri_B = next(i for i, r in enumerate(reps_B) if r is rho)
    dim = len(T.representatives) * d
    n = A.order
    # embedding E: C[Ind] -> C[A]
    E = np.zeros((n, dim), dtype=complex)
    phi = np.zeros((Bg.order, d), dtype=complex)     # phi[:, i] = F_B^dag e_(rho,0,i)
    for i in range(d):
        e = np.zeros(Bg.order, dtype=complex)
        e[FB.row_pos[(ri_B, 0, i)]] = 1.0
        phi[:, i] = FB.matrix.conj().T @ e
    for ti, t in enumerate(T.representatives):
        for bi in range(Bg.order):
            a = A.mul(t, int(Bg.parent_elements[bi]))
            E[a, ti * d:(ti + 1) * d] = phi[bi, :]
    M = FA.matrix @ E                                # Fourier coordinates
    reps_A = irreps(A)
    rows_out = []
    Ucols = []
    blocks = []
    for mi, mu in enumerate(reps_A):
        dm = mu.dim
        sub = np.zeros((dm, dm, dim), dtype=complex)  # [j, i, col]
        for j in range(dm):
            for i in range(dm):
                sub[j, i, :] = M[FA.row_pos[(mi, j, i)], :]
        Y = sub.reshape(dm, dm * dim)                # j-space vectors
        Wmat, svals, _ = np.linalg.svd(Y, full_matrices=False)
        m_mu = int(np.sum(svals > SVD_TOL))
        if m_mu == 0:
            continue
        blocks.append((mu, m_mu))
        for r in range(m_mu):
            wvec = Wmat[:, r]
            for i in range(dm):
                # row of U: functional <mu, w-copy r, i | E . >
                rowvec = np.einsum("j,jc->c", wvec.conj(), sub[:, i, :])
                rows_out.append((mi, r, i))
                Ucols.append(rowvec)
    U = np.array(Ucols)
    UT = UnitaryTransform(U, row_labels=rows_out,
                          col_labels=[(t, i) for t in T.representatives
                                      for i in range(d)])
    if UT.unitarity_error() > 1e-8:
        raise IrrepError("induced block diagonalization not unitary")
    # conjugated action must be canonical blocks
    for a in (0, 1 % A.order, A.order - 1):
        C = U @ mats[a] @ U.conj().T
        pos = 0
        for mu, m_mu in blocks:
            dm = mu.dim
            for r in range(m_mu):
                if np.abs(C[pos:pos + dm, pos:pos + dm] - mu(a)).max() > 1e-7:
                    raise IrrepError("induced blocks are not canonical")
                pos += dm
    return UT, blocks


# ---------------------------------------------------------------------------
# irrep embedding into the regular representation

def embed_irrep_vector(L, w):
    """Isometric embedding of V_L into C[G x G] intertwining irrep_action
    with regular_action.

    w is a vector on L's basis (class member g', rho index i).  The image
    is the inverse double QFT of the Fourier-basis vector with h = class
    representative, j = 0, t = k_{g'}, row i.
    """
    G = L.group
    Q = dg_qft(G)
    n = G.order
    vec = np.zeros(n * n, dtype=complex)
    data = Q.h_data[L.h]
    reps = data["irreps"]
    ri = next(i for i, r in enumerate(reps) if r is L.rho)
    labels = L.basis_labels()
    for amp, (gp, i) in zip(w, labels):
        if amp == 0:
            continue
        t = L.k[gp]
        vec[Q.transform.row_pos[(L.h, ri, 0, t, i)]] = amp
    return Q.transform.matrix.conj().T @ vec
