"""Finite-dimensional Lie algebras and root decompositions.

An algebra is stored by structure constants ``c[i, j, k]`` with
``[e_i, e_j] = sum_k c[i, j, k] e_k``.  Complexified elements are complex
coordinate vectors in the same (real) basis; the conjugation fixing the real
form is entrywise complex conjugation and ``x* = -conj(x)``.

For a compactly embedded Cartan subalgebra ``t`` with basis ``h_1..h_r`` each
root is stored as the real vector ``lam`` with ``[h, x] = i lam(h) x`` for root
vectors ``x``; the complex root is ``alpha = i lam``.  Cartan elements are
written in coordinates with respect to ``h_1..h_r``.
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np
from scipy.linalg import expm
from scipy.stats import qmc

from .convexcore import HalfSpace, Polyhedron
from .coxeter import LinearCoxeterSystem, ReflectionData
from .exact import fmt, linprog_exact, qvec, to_fraction


class NotARootVector(ValueError):
    pass


class MultidimensionalRootSpace(ValueError):
    pass


class NotAPositiveSystem(ValueError):
    pass


class NonCompactType(ValueError):
    pass


# --------------------------------------------------------------------------
# algebras
# --------------------------------------------------------------------------

class FiniteLieAlgebra:
    """Lie algebra given by structure constants.

    Parameters
    ----------
    structure_constants : array_like, shape (n, n, n)
        Floats, or Fractions (kept exact in an object array).
    basis_labels : list of str, optional
    invariant_form : array_like, shape (n, n), optional
        Symmetric invariant bilinear form ``kappa``.
    """

    def __init__(self, structure_constants, basis_labels=None, invariant_form=None):
        c = np.asarray(structure_constants)
        if c.ndim != 3 or not (c.shape[0] == c.shape[1] == c.shape[2]):
            raise ValueError("structure constants must have shape (n, n, n)")
        self.exact = c.dtype == object
        self.c = c if self.exact else c.astype(float)
        self.dim = c.shape[0]
        self.basis_labels = list(basis_labels) if basis_labels else [f"e{i}" for i in range(self.dim)]
        self.kappa = None if invariant_form is None else np.asarray(invariant_form, dtype=float)
        if not self.exact:
            self.c.setflags(write=False)

    def bracket(self, x, y):
        x, y = np.asarray(x), np.asarray(y)
        return np.tensordot(np.tensordot(x, self.c, axes=(0, 0)), y, axes=(0, 0))

    def ad(self, x) -> np.ndarray:
        """Matrix of ``ad x`` acting on coordinate columns."""
        return np.tensordot(np.asarray(x), self.c, axes=(0, 0)).T

    def basis(self, i):
        e = np.zeros(self.dim, dtype=object if self.exact else float)
        e[i] = Fraction(1) if self.exact else 1.0
        return e

    def antisymmetry_residual(self):
        r = self.c + np.transpose(self.c, (1, 0, 2))
        return _maxabs(r)

    def jacobi_residual(self):
        """Largest coefficient of ``[[e_i,e_j],e_l] + cyclic`` over all basis triples."""
        t = np.tensordot(self.c, self.c, axes=([2], [0]))
        j = t + np.transpose(t, (2, 0, 1, 3)) + np.transpose(t, (1, 2, 0, 3))
        return _maxabs(j)

    def kappa_invariance_residual(self):
        """Largest ``|kappa([x,y],z) + kappa(y,[x,z])|`` over basis triples."""
        if self.kappa is None:
            return None
        k = self.kappa
        c = self.c.astype(float)
        r = np.einsum("ijk,kl->ijl", c, k) + np.einsum("ilk,jk->ijl", c, k)
        return float(np.max(np.abs(r))) if r.size else 0.0

    def is_valid(self, tol=1e-12) -> bool:
        return self.antisymmetry_residual() <= tol and self.jacobi_residual() <= tol


def _primes(k):
    out, n = [], 2
    while len(out) < k:
        if all(n % p for p in out):
            out.append(n)
        n += 1
    return np.array(out, dtype=float)


def _maxabs(a):
    if a.size == 0:
        return 0
    if a.dtype == object:
        return max(abs(x) for x in a.flat)
    return float(np.max(np.abs(a)))


def algebra_to_json(alg: FiniteLieAlgebra) -> dict:
    triples = []
    n = alg.dim
    for i, j, k in itertools.product(range(n), repeat=3):
        v = alg.c[i, j, k]
        if v != 0:
            triples.append([i, j, k, fmt(v) if alg.exact else float(v)])
    return {"dim": n, "c": triples,
            "kappa": None if alg.kappa is None else alg.kappa.tolist(),
            "labels": alg.basis_labels}


def algebra_from_json(obj: dict) -> FiniteLieAlgebra:
    try:
        n = int(obj["dim"])
        triples = obj["c"]
    except (KeyError, TypeError) as exc:
        raise ValueError(f"malformed FiniteLieAlgebra: {exc}") from exc
    exact = all(not isinstance(t[3], float) for t in triples)
    if exact:
        c = np.full((n, n, n), Fraction(0), dtype=object)
    else:
        c = np.zeros((n, n, n))
    for i, j, k, v in triples:
        c[int(i), int(j), int(k)] = to_fraction(v) if exact else float(v)
    return FiniteLieAlgebra(c, obj.get("labels"), obj.get("kappa"))


def matrix_lie_algebra(basis_mats, labels=None, kappa=None) -> FiniteLieAlgebra:
    """Structure constants of a real matrix Lie algebra spanned by ``basis_mats``.

    Commutators are expanded in the basis by real least squares; coefficients
    within 1e-12 of an integer are snapped to it.
    """
    mats = [np.asarray(m, dtype=complex) for m in basis_mats]
    n = len(mats)
    flat = np.array([np.concatenate([m.real.ravel(), m.imag.ravel()]) for m in mats]).T
    c = np.zeros((n, n, n))
    for i in range(n):
        for j in range(n):
            com = mats[i] @ mats[j] - mats[j] @ mats[i]
            rhs = np.concatenate([com.real.ravel(), com.imag.ravel()])
            coef, *_ = np.linalg.lstsq(flat, rhs, rcond=None)
            if np.linalg.norm(flat @ coef - rhs) > 1e-9:
                raise ValueError("basis matrices do not span a Lie algebra")
            c[i, j] = coef
    near = np.abs(c - np.round(c)) < 1e-12
    c[near] = np.round(c[near])
    K = None
    if kappa is not None:
        K = np.array([[kappa(a, b) for b in mats] for a in mats]).real
    return FiniteLieAlgebra(c, labels, K)


# --------------------------------------------------------------------------
# root decompositions
# --------------------------------------------------------------------------

class RootType(enum.Enum):
    ABELIAN = "Abelian"
    NILPOTENT = "Nilpotent"
    COMPACT_SIMPLE = "CompactSimple"
    NONCOMPACT_SIMPLE = "NoncompactSimple"


@dataclass(frozen=True)
class RootVectorType:
    tag: RootType
    witness: float


class RootDecomposition:
    """Joint eigenspace decomposition of ``g_C`` under ``ad t``.

    Attributes
    ----------
    cartan_basis : ndarray, shape (r, n)
    roots : ndarray, shape (m, r)
        ``lam`` for each root vector (one row per root-space basis vector).
    root_vectors : ndarray, shape (m, n), complex
    projection_pt : ndarray, shape (n, n)
        Projection onto ``t`` along the root spaces (in g-coordinates).
    """

    def __init__(self, algebra: FiniteLieAlgebra, cartan_basis, tol: float = 1e-9):
        self.algebra = algebra
        self.cartan_basis = np.atleast_2d(np.asarray(cartan_basis, dtype=float))
        self.tol = tol
        ads = [algebra.ad(h).astype(float) for h in self.cartan_basis]
        for a in ads:
            for b in ads:
                if np.max(np.abs(a @ b - b @ a)) > 1e-10:
                    raise ValueError("Cartan basis elements do not commute")
        # square roots of distinct primes separate distinct integral roots
        weights = np.sqrt(_primes(len(ads)))
        H = sum(w * a for w, a in zip(weights, ads))
        vals, vecs = np.linalg.eig(H)
        order = np.argsort(vals.imag, kind="stable")
        vals, vecs = vals[order], vecs[:, order]
        scale = max(1.0, float(np.max(np.abs(vals))))
        clusters = []
        for idx, v in enumerate(vals):
            if clusters and abs(v - vals[clusters[-1][0]]) < tol * scale:
                clusters[-1].append(idx)
            else:
                clusters.append([idx])
        roots, rvecs, zero = [], [], None
        for cl in clusters:
            if abs(vals[cl[0]]) < tol * scale:
                zero = cl
                continue
            # orthonormal basis of the cluster span
            q, _ = np.linalg.qr(vecs[:, cl])
            for j in range(q.shape[1]):
                x = q[:, j]
                x = x / x[np.argmax(np.abs(x))]
                x = x / np.linalg.norm(x)
                lam = np.array([np.real(np.vdot(x, a @ x) / 1j) for a in ads])
                for a, l in zip(ads, lam):
                    if np.max(np.abs(a @ x - 1j * l * x)) > 1e-8:
                        raise ValueError("ad t is not simultaneously diagonalizable with imaginary roots")
                roots.append(lam)
                rvecs.append(x)
        r = len(self.cartan_basis)
        if zero is None or len(zero) != r:
            raise ValueError("t is not its own centralizer (zero weight space has wrong dimension)")
        self.roots = np.array(roots).reshape(-1, r)
        self.root_vectors = np.array(rvecs, dtype=complex).reshape(-1, algebra.dim)
        basis = np.vstack([self.cartan_basis.astype(complex), self.root_vectors]).T
        self._coord = np.linalg.inv(basis)
        pt = (basis[:, :r] @ self._coord[:r, :])
        if np.max(np.abs(pt.imag)) > 1e-9:
            raise ValueError("projection onto t is not real")
        self.projection_pt = pt.real
        self._types = None

    # -- coordinates -----------------------------------------------------
    @property
    def rank(self):
        return len(self.cartan_basis)

    def element(self, tcoords):
        """Element of g for Cartan coordinates."""
        return np.asarray(tcoords, dtype=float) @ self.cartan_basis

    def tcoords(self, x):
        """Cartan coordinates of ``p_t(x)``."""
        c = self._coord[: self.rank] @ np.asarray(x, dtype=complex)
        return c

    def project(self, x):
        return np.real(self.tcoords(x))

    @staticmethod
    def star(x):
        return -np.conj(x)

    def alpha(self, index, tcomplex):
        """Complex root value ``alpha(h) = i lam(h)`` for complex Cartan coordinates."""
        return 1j * np.dot(self.roots[index], tcomplex)

    def root_space_dims(self):
        dims = {}
        for lam in self.roots:
            key = tuple(np.round(lam, 8))
            dims[key] = dims.get(key, 0) + 1
        return dims

    # -- classification --------------------------------------------------
    def root_index(self, lam):
        lam = np.asarray(lam, dtype=float)
        for i, l in enumerate(self.roots):
            if np.allclose(l, lam, atol=1e-8):
                return i
        raise KeyError("not a root")

    def bracket_with_star(self, x):
        """Cartan coordinates of ``[x, x*]`` (complex)."""
        b = self.algebra.bracket(x, self.star(x))
        c = self._coord @ b
        if np.max(np.abs(c[self.rank:])) > 1e-8 * max(1.0, np.max(np.abs(c))):
            raise AssertionError("[x, x*] is not in t_C")
        return c[: self.rank]

    def types(self):
        if self._types is None:
            self._types = [classify_root_vector(self, i, self.root_vectors[i]) for i in range(len(self.roots))]
        return self._types

    def compact_indices(self):
        return [i for i, t in enumerate(self.types()) if t.tag is RootType.COMPACT_SIMPLE]

    def noncompact_indices(self):
        return [i for i, t in enumerate(self.types()) if t.tag is not RootType.COMPACT_SIMPLE]

    def coroot_tcoords(self, index):
        """Cartan coordinates of ``i alpha^vee`` for a compact root."""
        x = self.root_vectors[index]
        beta = self.bracket_with_star(x)
        w = self.alpha(index, beta)
        co = 2j * beta / w
        return np.real(co)


def classify_root_vector(decomp: RootDecomposition, index, x, tol: float = 1e-10) -> RootVectorType:
    """Type of a root vector from the sign of ``alpha([x, x*])``.

    ``x`` is rescaled to unit coordinate norm first, so the witness is the
    value for the normalized vector.
    """
    if not isinstance(index, (int, np.integer)):
        index = decomp.root_index(index)
    lam = decomp.roots[index]
    x = np.asarray(x, dtype=complex)
    nrm = np.linalg.norm(x)
    if nrm == 0:
        raise NotARootVector("zero vector")
    x = x / nrm
    for h, l in zip(decomp.cartan_basis, lam):
        if np.max(np.abs(decomp.algebra.ad(h) @ x - 1j * l * x)) > 1e-8:
            raise NotARootVector("x is not in the root space")
    beta = decomp.bracket_with_star(x)
    w = decomp.alpha(index, beta)
    witness = float(np.real(w))
    if np.max(np.abs(beta)) < tol:
        return RootVectorType(RootType.ABELIAN, witness)
    if abs(witness) < tol:
        return RootVectorType(RootType.NILPOTENT, witness)
    if witness > 0:
        return RootVectorType(RootType.COMPACT_SIMPLE, witness)
    return RootVectorType(RootType.NONCOMPACT_SIMPLE, witness)


def cone_potential(decomp: RootDecomposition) -> bool:
    """No root vector commutes with its adjoint (checked on a basis of one-dimensional root spaces)."""
    if any(d > 1 for d in decomp.root_space_dims().values()):
        raise MultidimensionalRootSpace("a basis check is not conclusive for root spaces of dimension > 1")
    return all(t.tag is not RootType.ABELIAN for t in decomp.types())


def _rational(v, den=10**6):
    out = tuple(Fraction(float(x)).limit_denominator(den) for x in v)
    if np.max(np.abs(np.array([float(x) for x in out]) - np.asarray(v, dtype=float))) > 1e-8:
        raise ValueError("data is not close to small rationals")
    return out


def weyl_system(decomp: RootDecomposition, regular=None) -> LinearCoxeterSystem:
    """Weyl group of the compact roots as a linear Coxeter system on Cartan coordinates.

    The positive system is ``{lam(regular) > 0}`` with ``regular`` defaulting
    to ``(1, 2, ..., r)``; simple roots are the indecomposable positive ones.
    """
    r = decomp.rank
    regular = np.arange(1, r + 1, dtype=float) if regular is None else np.asarray(regular, dtype=float)
    comp = decomp.compact_indices()
    if not comp:
        raise ValueError("no compact roots")
    pos = [i for i in comp if decomp.roots[i] @ regular > 0]
    lams = {i: _rational(decomp.roots[i]) for i in pos}
    sums = {tuple(a + b for a, b in zip(lams[i], lams[j])) for i in pos for j in pos if i < j}
    simple = [i for i in pos if lams[i] not in sums]
    simple.sort(key=lambda i: lams[i])
    data = ReflectionData(r, [lams[i] for i in simple], [_rational(decomp.coroot_tcoords(i)) for i in simple])
    return LinearCoxeterSystem(data, "weyl", status="check", lcs3_length=4)


def invariant_positive_systems(decomp: RootDecomposition) -> list:
    """All W-invariant positive systems of noncompact roots, by sign search over W-orbits."""
    nonc = decomp.noncompact_indices()
    if not nonc:
        return [[]]
    lams = {i: _rational(decomp.roots[i]) for i in nonc}
    index = {v: i for i, v in lams.items()}
    try:
        W = weyl_system(decomp)
        mats = W.group_elements()
    except ValueError:
        mats = [tuple(tuple(Fraction(int(i == j)) for j in range(decomp.rank)) for i in range(decomp.rank))]
    orbits, seen = [], set()
    for i in nonc:
        if i in seen:
            continue
        orb = set()
        for g in mats:
            # (w lam)(x) = lam(w^{-1} x); W is generated by involutions so the
            # set of inverses is the whole group
            img = tuple(sum(lams[i][k] * g[k][j] for k in range(decomp.rank)) for j in range(decomp.rank))
            if img not in index:
                raise AssertionError("noncompact roots are not W-stable")
            orb.add(index[img])
        seen |= orb
        orbits.append(frozenset(orb))
    pairs, used = [], set()
    for o in orbits:
        if o in used:
            continue
        neg = frozenset(index[tuple(-x for x in lams[i])] for i in o)
        if neg == o:
            return []
        used |= {o, neg}
        pairs.append((o, neg))
    systems = []
    for signs in itertools.product((0, 1), repeat=len(pairs)):
        systems.append(sorted(i for (o, neg), s in zip(pairs, signs) for i in (o if s == 0 else neg)))
    return systems


def cmin_cmax(decomp: RootDecomposition, positive_system):
    """``C_min`` (cone of ``i[x_a, x_a*]``) and ``C_max`` (dual of ``i Delta_p^+``) in Cartan coordinates."""
    nonc = set(decomp.noncompact_indices())
    P = list(positive_system)
    if not set(P) <= nonc:
        raise NotAPositiveSystem("contains compact roots")
    lamset = {_rational(decomp.roots[i]) for i in P}
    for i in nonc:
        l = _rational(decomp.roots[i])
        neg = tuple(-x for x in l)
        if (l in lamset) == (neg in lamset):
            raise NotAPositiveSystem("not a disjoint half of the noncompact roots")
    r = decomp.rank
    gens = []
    for i in P:
        beta = decomp.bracket_with_star(decomp.root_vectors[i])
        gens.append(_rational(np.real(1j * beta) / np.max(np.abs(beta))))
    cmin = Polyhedron.cone(r, gens)
    # i alpha = -lam on Cartan coordinates
    cmax = Polyhedron(r, hrep=[HalfSpace(tuple(-x for x in _rational(decomp.roots[i])), 0) for i in P])
    for g in gens:
        if not cmax.contains(g):
            raise AssertionError("C_min is not contained in C_max")
    return cmin, cmax


# --------------------------------------------------------------------------
# orbits and projections
# --------------------------------------------------------------------------

def _normalized_sl2(decomp, index):
    x = decomp.root_vectors[index]
    t = classify_root_vector(decomp, index, x)
    beta = decomp.bracket_with_star(x)
    w = np.real(decomp.alpha(index, beta))
    return x, beta, w, t


def orbit_projection_curve(decomp: RootDecomposition, x_t, index, grid, tol: float = 1e-8):
    """``p_t(exp(s ad(x_a - x_a*)) x)`` for ``s`` in ``grid``, checked against the closed form.

    Compact roots: the points lie on ``x + [-1, 0] alpha(x) alpha^vee``.
    Other roots: on ``x + R_+ alpha(x) [x_a*, x_a]``.  The root vector is
    normalized so that ``|alpha([x_a, x_a*])| = 2`` (when nonzero).
    """
    if not isinstance(index, (int, np.integer)):
        index = decomp.root_index(index)
    x_t = np.asarray(x_t, dtype=float)
    xa, beta, w, typ = _normalized_sl2(decomp, index)
    if abs(w) > 1e-12:
        k = np.sqrt(2 / abs(w))
        xa, beta, w = xa * k, beta * k * k, w * k * k
    y = xa - decomp.star(xa)
    if np.max(np.abs(y.imag)) > 1e-9:
        raise AssertionError("x_a - x_a* is not real")
    ady = decomp.algebra.ad(y.real).astype(float)
    X = decomp.element(x_t)
    lam_x = float(decomp.roots[index] @ x_t)
    if typ.tag is RootType.COMPACT_SIMPLE:
        direction = np.real(1j * lam_x * 2 * beta / (1j * np.dot(decomp.roots[index], beta)))
        lo, hi = -1.0, 0.0
    else:
        direction = np.real(1j * lam_x * (-beta))
        lo, hi = 0.0, np.inf
    pts = []
    for s in grid:
        with np.errstate(over="raise", invalid="raise"):
            try:
                p = decomp.project(expm(s * ady) @ X)
            except FloatingPointError as exc:
                raise OverflowError(f"exponential out of range at s={s}") from exc
        if not np.all(np.isfinite(p)):
            raise OverflowError(f"exponential out of range at s={s}")
        d = p - x_t
        nd = float(direction @ direction)
        scale = tol * max(1.0, np.linalg.norm(x_t), np.linalg.norm(p))
        if nd < 1e-24:
            if np.linalg.norm(d) > scale:
                raise AssertionError("projection moved although alpha(x) = 0")
        else:
            mu = float(d @ direction) / nd
            if np.linalg.norm(d - mu * direction) > scale or mu < lo - tol or mu > hi + tol:
                raise AssertionError(f"projection off the closed-form curve at s={s}")
        pts.append(p)
    return pts


def weyl_representative(decomp: RootDecomposition, index) -> np.ndarray:
    """``Ad(exp(pi/2 (x_a - x_a*)))`` for a compact root, which acts on t as the reflection."""
    xa, beta, w, typ = _normalized_sl2(decomp, index)
    if typ.tag is not RootType.COMPACT_SIMPLE:
        raise ValueError("Weyl representatives exist for compact roots only")
    xa = xa * np.sqrt(2 / w)
    y = (xa - decomp.star(xa)).real
    return expm(np.pi / 2 * decomp.algebra.ad(y).astype(float))


def random_element(decomp: RootDecomposition, rng: np.random.Generator, max_norm: float = 2.0):
    """Random ``y`` in g with kappa-norm (coordinate norm without kappa) uniform in ``[0, max_norm]``."""
    n = decomp.algebra.dim
    y = rng.standard_normal(n)
    K = decomp.algebra.kappa
    nrm = np.sqrt(y @ K @ y) if K is not None else np.linalg.norm(y)
    return y / nrm * rng.uniform(0, max_norm)


def dominance_slack(W: LinearCoxeterSystem, v, u) -> Fraction:
    """Smallest ``s`` with ``v+ - u+ in C_S + [-s, s]^n`` (exact, inputs converted without rounding)."""
    vp = W.to_dominant(qvec(v)).rep
    up = W.to_dominant(qvec(u)).rep
    diff = [a - b for a, b in zip(vp, up)]
    cs = W.data.coroots
    n, m = W.dim, W.rank
    # variables: c_1..c_m >= 0, s >= 0;  |diff - sum c coroot|_i <= s
    A_ub, b_ub = [], []
    for i in range(n):
        row = [c[i] for c in cs]
        A_ub.append([-x for x in row] + [-1])
        b_ub.append(-diff[i])
        A_ub.append(list(row) + [-1])
        b_ub.append(diff[i])
    res = linprog_exact([0] * m + [1], A_ub=A_ub, b_ub=b_ub)
    return res.value


def _group_apply(mats, X):
    for M in mats:
        X = M @ X
    return X


def kostant_sample(decomp: RootDecomposition, x_t, trials: int, seed: int, tol: float = 1e-9,
                   targeted: int = 3, perturbation: float = 1e-4) -> dict:
    """Monte-Carlo check that ``p_t`` of the adjoint orbit lies in ``conv(W x)``.

    Each trial draws ``g = exp(y_1)...exp(y_k)`` (``k <= 3``, ``|y_j| <= 2``)
    from the stream ``(seed, trial)`` and tests ``p_t(Ad(g) x)`` with the
    exact dominance slack at tolerance ``tol``.  Targeted samples start from
    Weyl representatives, optionally perturbed, and measure how closely each
    vertex ``w x`` is approached.
    """
    from .majorize import trial_rng

    if decomp.noncompact_indices():
        raise NonCompactType("all roots must be compact")
    if decomp.algebra.kappa is None:
        raise NonCompactType("an invariant form is required")
    W = weyl_system(decomp)
    xq = qvec(x_t) if all(isinstance(v, (int, Fraction, str)) for v in x_t) else _rational(x_t)
    X = decomp.element([float(v) for v in xq])
    records = []
    for i in range(trials):
        rng = trial_rng(seed, i)
        k = int(rng.integers(1, 4))
        mats = [expm(decomp.algebra.ad(random_element(decomp, rng)).astype(float)) for _ in range(k)]
        p = decomp.project(_group_apply(mats, X))
        slack = dominance_slack(W, xq, [Fraction(float(v)) for v in p])
        records.append({"trial": i, "slack": float(slack), "inside": slack <= tol})
    # Weyl vertices with words; representatives of the simple reflections
    comp = decomp.compact_indices()
    reps = []
    for a in W.data.alphas:
        idx = next(i for i in comp if np.allclose(decomp.roots[i], [float(v) for v in a]))
        reps.append(weyl_representative(decomp, idx))
    vertices = W.orbit_with_words(xq, depth=64)
    cover = []
    exact_err = 0.0
    for vtx, word in sorted(vertices.items()):
        target = np.array([float(v) for v in vtx])
        p0 = decomp.project(_group_apply([reps[s] for s in word], X))
        exact_err = max(exact_err, float(np.max(np.abs(p0 - target))))
        best = np.inf
        for j in range(targeted):
            rng = trial_rng(seed, trials + len(cover) * targeted + j)
            eps = expm(decomp.algebra.ad(random_element(decomp, rng, perturbation)).astype(float))
            p = decomp.project(_group_apply([eps] + [reps[s] for s in word], X))
            best = min(best, float(np.linalg.norm(p - target)))
        cover.append({"vertex": [fmt(v) for v in vtx], "min_distance": best})
    return {"records": records,
            "max_violation": max((r["slack"] for r in records), default=0.0),
            "violations": sum(not r["inside"] for r in records),
            "vertex_coverage": cover,
            "representative_error": exact_err}


def torus_average_error(decomp: RootDecomposition, samples_log2: int, seed: int = 0) -> float:
    """Operator-norm distance between ``p_t`` and the average of ``Ad(exp h)`` over the torus.

    Torus parameters in ``[0, 2 pi)^r`` come from a scrambled Sobol sequence
    with ``2**samples_log2`` points.  Assumes the Cartan basis has period
    ``2 pi`` (true for the diagonal ``i E_jj`` basis of ``u(n)``).
    """
    pts = qmc.Sobol(d=decomp.rank, scramble=True, seed=seed).random_base2(samples_log2) * 2 * np.pi
    avg = np.zeros((decomp.algebra.dim, decomp.algebra.dim))
    for th in pts:
        avg += expm(decomp.algebra.ad(decomp.element(th)).astype(float))
    avg /= len(pts)
    return float(np.linalg.norm(avg - decomp.projection_pt, 2))


# --------------------------------------------------------------------------
# unitary algebras
# --------------------------------------------------------------------------

def _unit(n, j, k):
    m = np.zeros((n, n), dtype=complex)
    m[j, k] = 1
    return m


def _kappa_trace(a, b):
    return -np.trace(a @ b)


def build_upq(p: int, q: int):
    """``u(p, q) = {X : X^† J + J X = 0}`` with ``J = diag(1_p, -1_q)`` and its diagonal Cartan subalgebra.

    Cartan coordinates ``a`` stand for ``i diag(a)``.  ``kappa(x, y) = -tr(xy)``
    (positive definite only for ``q = 0``).
    """
    if p < 1 or q < 0:
        raise ValueError("need p >= 1, q >= 0")
    n = p + q
    sign = [1] * p + [-1] * q
    mats, labels = [], []
    for j in range(n):
        mats.append(1j * _unit(n, j, j))
        labels.append(f"iE{j + 1}{j + 1}")
    for j in range(n):
        for k in range(j + 1, n):
            if sign[j] == sign[k]:
                mats.append(_unit(n, j, k) - _unit(n, k, j))
                labels.append(f"E{j + 1}{k + 1}-E{k + 1}{j + 1}")
                mats.append(1j * (_unit(n, j, k) + _unit(n, k, j)))
                labels.append(f"i(E{j + 1}{k + 1}+E{k + 1}{j + 1})")
            else:
                mats.append(_unit(n, j, k) + _unit(n, k, j))
                labels.append(f"E{j + 1}{k + 1}+E{k + 1}{j + 1}")
                mats.append(1j * (_unit(n, j, k) - _unit(n, k, j)))
                labels.append(f"i(E{j + 1}{k + 1}-E{k + 1}{j + 1})")
    alg = matrix_lie_algebra(mats, labels, kappa=_kappa_trace)
    alg.matrices = mats
    cartan = np.eye(len(mats))[:n]
    return alg, RootDecomposition(alg, cartan)


def build_un(n: int):
    """``u(n)`` with ``kappa(x, y) = -tr(xy)`` and the diagonal Cartan subalgebra."""
    if n < 2:
        raise ValueError("need n >= 2")
    return build_upq(n, 0)
