"""Irreducible representations of finite groups.

Three sources of irreps, all returning unitary matrix families indexed by
the group's dense element order:

* analytic characters for cyclic groups,
* the induced-representation formulas for Z_p x| Z_q,
* a numeric fallback for everything else: eigen-decomposition of a random
  self-adjoint element of the commutant of the left regular representation.
  Each eigenvalue cluster spans one irreducible invariant subspace; the
  distinct representations are collected by character and sorted into a
  canonical order (dimension, then rounded character sequence) so repeated
  runs agree.

The same commutant trick decomposes an arbitrary unitary representation
into canonical irrep blocks (decompose_representation), which is what the
Fourier and Clebsch-Gordan layers build on.  Intertwiners onto the
canonical copies are produced by group averaging and fixed up to a global
phase via polar normalization.
"""

from __future__ import annotations

import numpy as np

from .groups import FiniteGroup, Subgroup, GroupError

NUMERIC_ORDER_CAP = 200
CLUSTER_GAP = 1e-6
CHAR_MATCH_TOL = 1e-4
HOM_TOL = 1e-8
MAX_ATTEMPTS = 10


class IrrepError(RuntimeError):
    pass


class GroupIrrep:
    """Unitary irreducible representation given by explicit matrices.

    matrices has shape (|G|, d, d); matrices[g] is the image of element g.
    """

    def __init__(self, group, label, matrices):
        self.group = group
        self.label = label
        self.matrices = np.ascontiguousarray(matrices, dtype=complex)
        self.dim = self.matrices.shape[1]
        self._char = None

    def __call__(self, g):
        return self.matrices[g]

    def character(self):
        if self._char is None:
            self._char = np.trace(self.matrices, axis1=1, axis2=2)
        return self._char

    def is_trivial(self):
        return self.dim == 1 and np.allclose(self.character(), 1.0, atol=1e-9)

    def check(self, rng=None, samples=60, tol=HOM_TOL):
        """Unitarity and homomorphism property on sampled pairs."""
        G, M = self.group, self.matrices
        assert np.allclose(M[0], np.eye(self.dim), atol=tol)
        rng = rng or np.random.default_rng(1)
        n = G.order
        err = 0.0
        for a, b in rng.integers(0, n, size=(samples, 2)):
            err = max(err, np.abs(M[a] @ M[b] - M[G.mul(int(a), int(b))]).max())
        uerr = max(np.abs(M[g].conj().T @ M[g] - np.eye(self.dim)).max()
                   for g in range(n))
        if err > tol or uerr > tol:
            raise IrrepError(f"irrep check failed: hom {err:.2e} unit {uerr:.2e}")
        return max(err, uerr)

    def __repr__(self):
        return f"GroupIrrep({self.label}, dim={self.dim})"


def _char_key(char):
    return tuple((round(float(c.real), 6), round(float(c.imag), 6)) for c in char)


def _canonical_sort(reps):
    return sorted(reps, key=lambda r: (r.dim, _char_key(r.character())))


def trivial_index(reps):
    for i, r in enumerate(reps):
        if r.is_trivial():
            return i
    raise IrrepError("no trivial representation found")


# ---------------------------------------------------------------------------
# analytic families

def cyclic_generator(G):
    for g in range(G.order):
        if G.element_order(g) == G.order:
            return g
    return None


def cyclic_irreps(G):
    n = G.order
    g = cyclic_generator(G)
    if g is None:
        raise IrrepError("group is not cyclic")
    # discrete log base g
    log = [0] * n
    acc, k = 0, 0
    while True:
        log[acc] = k
        acc = G.mul(acc, g)
        k += 1
        if acc == 0:
            break
    log = np.array(log)
    out = []
    for j in range(n):
        vals = np.exp(2j * np.pi * j * log / n)
        out.append(GroupIrrep(G, f"chi{j}", vals.reshape(n, 1, 1)))
    return _canonical_sort(out)


def semidirect_irreps(p, q, alpha, group=None):
    """Irreps of Z_p x| Z_q: q characters factoring through Z_q and
    (p-1)/q induced irreps rho_k of dimension q, one per orbit of
    k -> k*alpha on Z_p minus 0, labeled by the orbit minimum."""
    G = group if group is not None else FiniteGroup.semidirect(p, q, alpha)
    n = p * q
    a, b = np.divmod(np.arange(n), q)
    out = []
    for c in range(q):
        vals = np.exp(2j * np.pi * c * b / q)
        out.append(GroupIrrep(G, f"chi{c}", vals.reshape(n, 1, 1)))
    apow = G.meta.get("alpha_pow") or [pow(alpha, i, p) for i in range(q)]
    ainv = [pow(ap, p - 2, p) for ap in apow]   # alpha^{-s} mod p
    seen = set()
    for k in range(1, p):
        orbit = sorted((k * ap) % p for ap in apow)
        if orbit[0] in seen:
            continue
        seen.add(orbit[0])
        k0 = orbit[0]
        M = np.zeros((n, q, q), dtype=complex)
        for g in range(n):
            ag, bg = divmod(g, q)
            for s in range(q):
                M[g, s, (s - bg) % q] = np.exp(2j * np.pi * (k0 * ag * ainv[s] % p) / p)
        out.append(GroupIrrep(G, f"rho{k0}", M))
    return _canonical_sort(out)


# ---------------------------------------------------------------------------
# numeric decomposition machinery

def _regular_perm(G, g):
    """Permutation i -> g^{-1} i indexing rows: (L(g) A L(g)^dag)[i,j] =
    A[g^{-1} i, g^{-1} j]."""
    gi = G.inv(g)
    if G.table is not None:
        return G.table[gi]
    return np.array([G.mul(gi, x) for x in range(G.order)])


def _invariant_clusters(mats_apply, dim, n_group, rng):
    """Eigen-decompose the symmetrization of a random hermitian matrix.

    mats_apply(A) must return the average of U_g A U_g^dag over the group.
    Returns a list of (eigenvalue, orthonormal basis) clusters.
    """
    A = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    A = A + A.conj().T
    T = mats_apply(A)
    w, V = np.linalg.eigh(T)
    clusters = []
    start = 0
    for i in range(1, dim + 1):
        if i == dim or w[i] - w[i - 1] > CLUSTER_GAP:
            clusters.append((float(w[start]), V[:, start:i]))
            start = i
    return clusters


def numeric_irreps(G, seed=None):
    """All irreps of G via the left regular representation.

    Requires |G| <= 200.  Uses a deterministic seed per group order unless
    one is supplied, so results are reproducible.  Retries with fresh
    randomness on eigenvalue-cluster collisions, up to 10 attempts.
    """
    n = G.order
    if n > NUMERIC_ORDER_CAP:
        raise IrrepError(f"numeric irreps capped at order {NUMERIC_ORDER_CAP}")
    if n == 1:
        return [GroupIrrep(G, "triv", np.ones((1, 1, 1)))]
    perms = np.array([_regular_perm(G, g) for g in range(n)])

    def symmetrize(A):
        T = np.zeros_like(A)
        for g in range(n):
            idx = perms[g]
            T += A[np.ix_(idx, idx)]
        return T / n

    base_seed = 0x51D0 + n if seed is None else seed
    last_err = None
    for attempt in range(MAX_ATTEMPTS):
        rng = np.random.default_rng(base_seed + 1000 * attempt)
        clusters = _invariant_clusters(symmetrize, n, n, rng)
        try:
            reps = _collect_regular_clusters(G, perms, clusters)
        except IrrepError as exc:
            last_err = exc
            continue
        return _canonical_sort(reps)
    raise IrrepError(f"block separation failed after {MAX_ATTEMPTS} attempts: {last_err}")


def _collect_regular_clusters(G, perms, clusters):
    n = G.order
    by_char = {}
    for _, B in clusters:
        d = B.shape[1]
        mats = np.empty((n, d, d), dtype=complex)
        Bc = B.conj().T
        for g in range(n):
            mats[g] = Bc @ B[perms[g], :]
        char = np.trace(mats, axis1=1, axis2=2)
        # irreducibility: <chi, chi> = 1
        ip = float(np.vdot(char, char).real) / n
        if abs(ip - 1.0) > 1e-6:
            raise IrrepError(f"cluster of dim {d} not irreducible (<chi,chi>={ip:.4f})")
        key = _char_key(char)
        by_char.setdefault(key, []).append(mats)
    reps = []
    total = 0
    for key, copies in by_char.items():
        mats = copies[0]
        d = mats.shape[1]
        if len(copies) != d:
            raise IrrepError("multiplicity does not match dimension")
        total += d * d
        reps.append(GroupIrrep(G, f"n{d}x{key[1][0]:+.3f}", mats))
    if total != n:
        raise IrrepError("sum of squared dimensions misses the group order")
    for r in reps:
        r.check()
    return reps


def irreps(G, force_numeric=False):
    """Canonical irrep list for G, cached on the group object."""
    cached = getattr(G, "_irreps", None)
    if cached is not None:
        return cached
    if not force_numeric and G.kind == "semidirect":
        out = semidirect_irreps(G.meta["p"], G.meta["q"], G.meta["alpha"], group=G)
    elif not force_numeric and cyclic_generator(G) is not None:
        out = cyclic_irreps(G)
    else:
        out = numeric_irreps(G)
    assert sum(r.dim ** 2 for r in out) == G.order
    G._irreps = out
    return out


# ---------------------------------------------------------------------------
# decomposing arbitrary representations into canonical blocks

def intertwiner(mats_from, mats_to, rng, tol=1e-7):
    """Unitary W with mats_to[g] = W mats_from[g] W^dag for all g.

    Both inputs must be equivalent irreducible unitary representations
    (same group element order).  Produced by group-averaging a random
    matrix and polar-normalizing; Schur's lemma makes the average a scalar
    multiple of a unitary.
    """
    m, d, _ = mats_from.shape
    for _ in range(8):
        X = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
        T = np.zeros((d, d), dtype=complex)
        for g in range(m):
            T += mats_to[g] @ X @ mats_from[g].conj().T
        T /= m
        scale = np.sqrt(np.trace(T @ T.conj().T).real / d)
        if scale < 1e-8:
            continue
        W = T / scale
        err = max(np.abs(W @ W.conj().T - np.eye(d)).max(),
                  max(np.abs(mats_to[g] - W @ mats_from[g] @ W.conj().T).max()
                      for g in range(m)))
        if err < tol:
            return W
    raise IrrepError("no intertwiner found (representations inequivalent?)")


def decompose_representation(K, mats, seed=None):
    """Split a unitary representation of K into canonical irrep blocks.

    mats has shape (|K|, d, d) following K's element order.  Returns
    (U, blocks): U is d x d unitary with U mats[g] U^dag equal to the
    direct sum of blocks[i].matrices[g], where blocks lists canonical
    irreps of K (with repetition, ordered by canonical irrep index).
    """
    d = mats.shape[1]
    targets = irreps(K)
    n = K.order

    def symmetrize(A):
        T = np.zeros_like(A)
        for g in range(n):
            T += mats[g] @ A @ mats[g].conj().T
        return T / n

    base_seed = 0xB10C + d + 7 * n if seed is None else seed
    last = None
    for attempt in range(MAX_ATTEMPTS):
        rng = np.random.default_rng(base_seed + 1000 * attempt)
        clusters = _invariant_clusters(symmetrize, d, n, rng)
        try:
            found = []
            for _, B in clusters:
                dc = B.shape[1]
                sub = np.einsum("ij,gjk,kl->gil", B.conj().T, mats, B)
                char = np.trace(sub, axis1=1, axis2=2)
                match = None
                for ti, tgt in enumerate(targets):
                    if tgt.dim == dc and np.abs(tgt.character() - char).max() < CHAR_MATCH_TOL:
                        match = ti
                        break
                if match is None:
                    raise IrrepError(f"cluster of dim {dc} matches no irrep")
                found.append((match, B, sub))
            found.sort(key=lambda x: x[0])
            cols, blocks = [], []
            for ti, B, sub in found:
                tgt = targets[ti]
                if tgt.dim == 1:
                    phase = sub[:, 0, 0]
                    # already canonical up to nothing at all; verify
                    if np.abs(phase - tgt.character()).max() > 1e-6:
                        raise IrrepError("one-dim block character mismatch")
                    cols.append(B)
                else:
                    W = intertwiner(sub, tgt.matrices, rng)
                    cols.append(B @ W.conj().T)
                blocks.append(tgt)
            U = np.hstack(cols).conj().T
            if np.abs(U @ U.conj().T - np.eye(d)).max() > 1e-8:
                raise IrrepError("assembled basis not unitary")
            return U, blocks
        except IrrepError as exc:
            last = exc
    raise IrrepError(f"representation decomposition failed: {last}")


def restrict_block_diagonalize(rho: GroupIrrep, K: Subgroup):
    """Block-diagonalize rho restricted to the subgroup K.

    rho is an irrep of K's parent group.  Returns (U, blocks) where U is
    unitary on rho's space and U rho(k) U^dag equals the direct sum of the
    canonical K-irrep blocks, for every k in K (element order of
    K.as_group()).
    """
    if rho.group is not K.group:
        raise GroupError("irrep and subgroup live in different groups")
    Kg = K.as_group()
    mats = rho.matrices[np.array(K.members)]
    return decompose_representation(Kg, mats)


def multiplicities(K, mats):
    """Character-theoretic multiplicity of each canonical K-irrep in the
    representation given by mats (shape (|K|, d, d))."""
    char = np.trace(mats, axis1=1, axis2=2)
    out = []
    for r in irreps(K):
        m = np.vdot(r.character(), char) / K.order
        mi = int(round(m.real))
        if abs(m - mi) > 1e-6:
            raise IrrepError("non-integral multiplicity")
        out.append(mi)
    return out
