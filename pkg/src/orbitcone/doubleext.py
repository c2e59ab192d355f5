"""Double extensions ``(R c ⊕_omega g) ⋊ R d`` and Lorentzian forms.

Elements of the extension are coordinate vectors ``(z, x, t)`` with ``z`` the
coefficient of the central element ``c``, ``x`` in the base algebra and ``t``
the coefficient of ``d``.  The bracket is

    [(z,x,t), (z',x',t')] = (omega(x,x') + t delta(x') - t' delta(x),
                             [x,x'] + t D x' - t' D x, 0).

For an invariant scalar product ``kappa`` on ``g`` with ``D`` skew and
``omega(x, y) = kappa(x, D y)`` the form

    beta((z,x,t), (z',x',t')) = z t' + t z' - kappa(x, x')

is invariant and Lorentzian.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from scipy.linalg import expm

from .exact import nullspace, to_fraction
from .rootsys import FiniteLieAlgebra, algebra_from_json, algebra_to_json


class CompatibilityViolated(ValueError):
    pass


class NotADerivation(ValueError):
    pass


class NotACocycle(ValueError):
    pass


class NotSymplectic(ValueError):
    pass


class NotInSp(ValueError):
    pass


class NotInW(ValueError):
    pass


class NonpositiveZstar(ValueError):
    pass


TOL = 1e-12


def _arr(a, exact):
    a = np.asarray(a, dtype=object if exact else float)
    if exact:
        a = np.vectorize(to_fraction, otypes=[object])(a) if a.size else a
    return a


def _maxabs(a):
    if a.size == 0:
        return 0
    if a.dtype == object:
        return max(abs(x) for x in a.flat)
    return float(np.max(np.abs(a)))


@dataclass
class DoubleExtensionSpec:
    """Data ``(g, omega, D, delta)`` of a double extension.

    ``omega`` and ``D`` are ``n x n`` matrices with ``omega(x, y) = x^T W y``
    and ``D`` acting on coordinate columns; ``delta`` is a covector.
    """
    base: FiniteLieAlgebra
    omega: np.ndarray
    D: np.ndarray
    delta: np.ndarray

    def __post_init__(self):
        ex = self.base.exact
        self.omega = _arr(self.omega, ex)
        self.D = _arr(self.D, ex)
        self.delta = _arr(self.delta, ex)
        n = self.base.dim
        if self.omega.shape != (n, n) or self.D.shape != (n, n) or self.delta.shape != (n,):
            raise ValueError("shapes of omega, D, delta must match the base dimension")

    @property
    def exact(self):
        return self.base.exact

    def cocycle_residual(self):
        c, W = self.base.c, self.omega
        anti = _maxabs(W + W.T)
        # omega([e_i, e_j], e_l) cyclically summed
        t = np.tensordot(c, W, axes=([2], [0]))
        cyc = t + np.transpose(t, (2, 0, 1)) + np.transpose(t, (1, 2, 0))
        return max(anti, _maxabs(cyc))

    def derivation_residual(self):
        c, D = self.base.c, self.D
        lhs = np.tensordot(c, D.T, axes=([2], [0]))          # D [e_i, e_j]
        r1 = np.tensordot(D, c, axes=([0], [0]))             # [D e_i, e_j]
        r2 = np.transpose(np.tensordot(D, c, axes=([0], [1])), (1, 0, 2))  # [e_i, D e_j]
        return _maxabs(lhs - r1 - r2)

    def compatibility_residual(self):
        W, D = self.omega, self.D
        lhs = D.T @ W + W @ D
        rhs = np.tensordot(self.base.c, self.delta, axes=([2], [0]))
        return _maxabs(lhs - rhs)

    def validate(self, tol=TOL):
        if self.cocycle_residual() > tol:
            raise NotACocycle("omega is not an antisymmetric 2-cocycle")
        if self.derivation_residual() > tol:
            raise NotADerivation("D is not a derivation")
        if self.compatibility_residual() > tol:
            raise CompatibilityViolated("omega(Dx, y) + omega(x, Dy) != delta([x, y])")


@dataclass
class DoubleExtensionAlgebra:
    algebra: FiniteLieAlgebra
    spec: DoubleExtensionSpec
    c_index: int = 0

    @property
    def d_index(self):
        return self.algebra.dim - 1

    @property
    def n(self):
        return self.spec.base.dim

    def embed(self, x):
        """Base element ``x`` as ``(0, x, 0)``."""
        return np.concatenate([[0.0], np.asarray(x, dtype=float), [0.0]])

    def formula_bracket(self, u, v):
        """The bracket computed directly from the defining formula."""
        s = self.spec
        W = s.omega.astype(float)
        D = s.D.astype(float)
        dl = s.delta.astype(float)
        z, x, t = u[0], np.asarray(u[1:-1], dtype=float), u[-1]
        z2, x2, t2 = v[0], np.asarray(v[1:-1], dtype=float), v[-1]
        base = s.base.bracket(x, x2).astype(float) if s.base.exact else s.base.bracket(x, x2)
        zc = x @ W @ x2 + t * dl @ x2 - t2 * dl @ x
        xc = base + t * D @ x2 - t2 * D @ x
        return np.concatenate([[zc], xc, [0.0]])


def build_double_extension(spec: DoubleExtensionSpec, tol=TOL, check=True) -> DoubleExtensionAlgebra:
    """Structure constants of the double extension, ordered ``(c, e_1..e_n, d)``.

    With ``check=False`` the spec is not validated and the Jacobi identity is
    not asserted; used to exhibit what goes wrong for incompatible data.
    """
    if check:
        spec.validate(tol)
    n = spec.base.dim
    N = n + 2
    if spec.exact:
        c = np.full((N, N, N), Fraction(0), dtype=object)
    else:
        c = np.zeros((N, N, N))
    bc = spec.base.c
    for i in range(n):
        for j in range(n):
            c[1 + i, 1 + j, 0] = spec.omega[i, j]
            c[1 + i, 1 + j, 1:1 + n] = bc[i, j]
    for j in range(n):
        c[N - 1, 1 + j, 0] = spec.delta[j]
        c[N - 1, 1 + j, 1:1 + n] = spec.D[:, j]
        c[1 + j, N - 1, 0] = -spec.delta[j]
        c[1 + j, N - 1, 1:1 + n] = -spec.D[:, j]
    labels = ["c"] + list(spec.base.basis_labels) + ["d"]
    alg = FiniteLieAlgebra(c, labels)
    if check and alg.jacobi_residual() > tol:
        raise AssertionError("Jacobi identity fails for the extension")
    return DoubleExtensionAlgebra(alg, spec)


def abelian(n, exact=True) -> FiniteLieAlgebra:
    if exact:
        return FiniteLieAlgebra(np.full((n, n, n), Fraction(0), dtype=object))
    return FiniteLieAlgebra(np.zeros((n, n, n)))


def oscillator(V_dim: int, omega, D, exact=True) -> DoubleExtensionAlgebra:
    """Oscillator algebra ``(R c ⊕_omega V) ⋊ R d`` over an abelian ``V``."""
    W = _arr(omega, exact)
    Dm = _arr(D, exact)
    if W.shape != (V_dim, V_dim) or _maxabs(W + W.T) > TOL:
        raise NotSymplectic("omega must be antisymmetric")
    if abs(np.linalg.det(W.astype(float))) < 1e-12:
        raise NotSymplectic("omega is degenerate")
    if _maxabs(Dm.T @ W + W @ Dm) > TOL:
        raise NotInSp("D does not preserve omega")
    zero = [0] * V_dim
    spec = DoubleExtensionSpec(abelian(V_dim, exact), W, Dm, zero)
    return build_double_extension(spec)


def standard_oscillator() -> DoubleExtensionAlgebra:
    """4-dim oscillator with ``omega = [[0,1],[-1,0]]`` and ``D = omega``, so ``omega(Dx, y) = <x, y>``."""
    return oscillator(2, [[0, 1], [-1, 0]], [[0, 1], [-1, 0]])


# --------------------------------------------------------------------------
# positivity criteria
# --------------------------------------------------------------------------

def _sym(m):
    return (m + m.T) / 2


@dataclass
class CriterionResult:
    satisfied: bool
    reason: str
    q: np.ndarray | None = None
    kappa: np.ndarray | None = None
    D_lorentz: np.ndarray | None = None
    orientation: str | None = None
    identity_residual: float | None = None
    witness: np.ndarray | None = None


def oscillator_criterion(osc: DoubleExtensionAlgebra, tol=1e-10) -> CriterionResult:
    """Positive definiteness of ``omega(Dx, y)`` or ``omega(x, Dy)``.

    When one of them is positive definite the oscillator algebra is also
    presented as a Lorentzian extension: ``kappa`` positive definite,
    ``D~`` kappa-skew and ``omega(v, w) = kappa(v, D~ w)``.  With
    ``omega(Dx, y)`` positive definite ``D~ = D`` and ``kappa = W D^{-1}``;
    in the other orientation ``D~ = -D``.
    """
    W = osc.spec.omega.astype(float)
    D = osc.spec.D.astype(float)
    q1 = _sym(D.T @ W)   # omega(Dx, y)
    q2 = _sym(W @ D)     # omega(x, Dy)
    e1, v1 = np.linalg.eigh(q1)
    e2, _ = np.linalg.eigh(q2)
    if e1[0] > tol:
        q, Dt, orient = q1, D, "omega(Dx,y)"
    elif e2[0] > tol:
        q, Dt, orient = q2, -D, "omega(x,Dy)"
    else:
        return CriterionResult(False, "neither omega(Dx,y) nor omega(x,Dy) is positive definite",
                               q=q1, witness=v1[:, 0])
    kappa = _sym(W @ np.linalg.inv(Dt))
    resid = float(np.max(np.abs(W - kappa @ Dt)))
    skew = float(np.max(np.abs(kappa @ Dt + Dt.T @ kappa)))
    if np.linalg.eigvalsh(kappa)[0] <= tol or resid > 1e-12 or skew > 1e-12:
        raise AssertionError("Lorentzian presentation failed")
    return CriterionResult(True, "positive definite", q=q, kappa=kappa, D_lorentz=Dt,
                           orientation=orient, identity_residual=resid)


def pec_check(spec: DoubleExtensionSpec, tol=1e-10) -> dict:
    """Positive energy condition: ``delta = 0`` and ``omega(Dx, x) >= 0``."""
    delta_ok = _maxabs(spec.delta) == 0 if spec.exact else _maxabs(spec.delta) <= TOL
    q = _sym(spec.D.astype(float).T @ spec.omega.astype(float))
    ev, vecs = np.linalg.eigh(q) if q.size else (np.zeros(0), np.zeros((0, 0)))
    psd = bool(ev.size == 0 or ev[0] >= -tol)
    reasons = []
    if not delta_ok:
        reasons.append("delta")
    if not psd:
        reasons.append("omega(Dx,x) not positive semidefinite")
    return {"pass": delta_ok and psd, "delta_zero": bool(delta_ok), "psd": psd,
            "min_eigenvalue": float(ev[0]) if ev.size else 0.0,
            "witness": None if psd else vecs[:, 0].tolist(), "reasons": reasons}


# --------------------------------------------------------------------------
# Lorentzian forms
# --------------------------------------------------------------------------

class LorentzianData:
    """Invariant Lorentzian form on a double extension.

    Validates that ``kappa`` is positive definite and invariant, ``D`` is
    kappa-skew, ``delta = 0`` and ``omega = kappa D`` (i.e.
    ``omega(x, y) = kappa(x, D y)``).
    """

    def __init__(self, dext: DoubleExtensionAlgebra, kappa, tol=TOL):
        self.dext = dext
        k = np.asarray(kappa, dtype=float)
        s = dext.spec
        D = s.D.astype(float)
        W = s.omega.astype(float)
        n = s.base.dim
        if np.max(np.abs(k - k.T), initial=0) > tol or (n and np.linalg.eigvalsh(k)[0] <= 0):
            raise ValueError("kappa must be symmetric positive definite")
        base = FiniteLieAlgebra(s.base.c.astype(float), invariant_form=k)
        if n and base.kappa_invariance_residual() > tol:
            raise ValueError("kappa is not invariant")
        if np.max(np.abs(k @ D + D.T @ k), initial=0) > tol:
            raise ValueError("D is not kappa-skew")
        if np.max(np.abs(W - k @ D), initial=0) > tol or np.max(np.abs(s.delta.astype(float)), initial=0) > tol:
            raise ValueError("omega(x, y) != kappa(x, D y) or delta != 0")
        self.kappa = k
        N = n + 2
        B = np.zeros((N, N))
        B[0, N - 1] = B[N - 1, 0] = 1.0
        B[1:N - 1, 1:N - 1] = -k
        self.beta_matrix = B

    def beta(self, u, v):
        return float(np.asarray(u) @ self.beta_matrix @ np.asarray(v))

    def signature(self):
        ev = np.linalg.eigvalsh(self.beta_matrix)
        return int(np.sum(ev > 0)), int(np.sum(ev < 0))

    def beta_dual_matrix(self):
        """Gram matrix of the dual form ``beta*`` on covectors (inverse of ``beta``)."""
        return np.linalg.inv(self.beta_matrix)

    def kappa_norm_sq_covector(self, alpha):
        a = np.asarray(alpha, dtype=float)
        return float(a @ np.linalg.solve(self.kappa, a))


def lorentz_cone_membership(L: LorentzianData, v, tol=TOL) -> str:
    """``"InsideW"`` iff ``t > 0`` and ``beta(v, v) > 0``."""
    v = np.asarray(v, dtype=float)
    return "InsideW" if v[-1] > tol and L.beta(v, v) > tol else "Outside"


def chi_and_hessian(L: LorentzianData, v, x):
    """``chi(v) = 1 / beta(v, v)`` and its second derivative in direction ``x``.

    Differentiating ``-2 beta(v + hx, x) / beta(v + hx, v + hx)^2`` once more
    gives ``(2 / beta(v,v)^3) (4 beta(v,x)^2 - beta(v,v) beta(x,x))``, which
    is nonnegative by the inverse Cauchy-Schwarz inequality.
    """
    v = np.asarray(v, dtype=float)
    x = np.asarray(x, dtype=float)
    if lorentz_cone_membership(L, v) != "InsideW":
        raise NotInW("v is not in the open Lorentz cone")
    bvv, bvx, bxx = L.beta(v, v), L.beta(v, x), L.beta(x, x)
    if bvv * bxx > bvx ** 2 + 1e-10 * max(1.0, bvv * abs(bxx), bvx ** 2):
        raise AssertionError("inverse Cauchy-Schwarz inequality fails")
    return 1.0 / bvv, 2.0 / bvv ** 3 * (4 * bvx ** 2 - bvv * bxx)


def group_matrix(dext: DoubleExtensionAlgebra, xis) -> np.ndarray:
    """Matrix of ``Ad(exp xi_1 ... exp xi_k)`` for base elements ``xi_j``."""
    alg = dext.algebra
    N = alg.dim
    M = np.eye(N)
    for xi in xis:
        ad = alg.ad(dext.embed(xi)).astype(float)
        M = M @ expm(ad)
    if not np.all(np.isfinite(M)):
        raise OverflowError("matrix exponential out of range")
    return M


def oscillator_exp_closed_form(osc: DoubleExtensionAlgebra, y) -> np.ndarray:
    """``Ad(exp y)`` for ``y`` in an abelian base: ``ad y`` is nilpotent of order 3."""
    if osc.spec.base.c.size and _maxabs(osc.spec.base.c) != 0:
        raise ValueError("closed form needs an abelian base")
    A = osc.algebra.ad(osc.embed(y)).astype(float)
    return np.eye(A.shape[0]) + A + A @ A / 2


def d_flow(dext: DoubleExtensionAlgebra, s: float) -> np.ndarray:
    """``Ad(exp(s d))``."""
    e = np.zeros(dext.algebra.dim)
    e[-1] = s
    return expm(dext.algebra.ad(e).astype(float))


def adjoint_action(dext: DoubleExtensionAlgebra, xis, v, lorentz: LorentzianData | None = None, tol=1e-8):
    """``Ad(g) v`` for ``g = exp(xi_1) ... exp(xi_k)``.

    With Lorentzian data and ``v = d`` the result is asserted to have the form
    ``(kappa(gamma, gamma)/2, gamma, 1)``.
    """
    M = group_matrix(dext, xis)
    out = M @ np.asarray(v, dtype=float)
    if lorentz is not None:
        d = np.zeros(dext.algebra.dim)
        d[-1] = 1.0
        if np.allclose(v, d, atol=0):
            gamma = out[1:-1]
            if abs(out[0] - 0.5 * gamma @ lorentz.kappa @ gamma) > tol * max(1.0, abs(out[0])) or abs(out[-1] - 1) > tol:
                raise AssertionError("Ad(g)d does not have the paraboloid form")
    return out


def act_form_residual(L: LorentzianData, M) -> float:
    """``|z - kappa(gamma, gamma)/2|`` and ``|t - 1|`` for ``Ad(g) d``."""
    d = np.zeros(M.shape[0])
    d[-1] = 1.0
    out = M @ d
    gamma = out[1:-1]
    return float(max(abs(out[0] - 0.5 * gamma @ L.kappa @ gamma), abs(out[-1] - 1.0)))


def coadjoint_lower_bound(L: LorentzianData, lam, t_level: float) -> float:
    """Infimum of ``lam = (z*, alpha, t*)`` over ``{(kappa(y,y)/2t, y, t)}``: ``t t* - t |alpha|^2 / 2 z*``."""
    lam = np.asarray(lam, dtype=float)
    zs, alpha, ts = lam[0], lam[1:-1], lam[-1]
    if zs <= 0:
        raise NonpositiveZstar("z* must be positive")
    if t_level <= 0:
        raise ValueError("level must be positive")
    return float(t_level * ts - t_level * L.kappa_norm_sq_covector(alpha) / (2 * zs))


def random_base_element(n, rng, scale=1.0):
    return rng.standard_normal(n) * scale


def sample_orbit_values(L: LorentzianData, lam, t_level, trials, seed, scale=1.0):
    """Values of ``lam`` on ``t Ad(g) d`` for random ``g`` (streams ``(seed, i)``)."""
    from .majorize import trial_rng

    dext = L.dext
    n = dext.n
    d = np.zeros(n + 2)
    d[-1] = 1.0
    lam = np.asarray(lam, dtype=float)
    vals = []
    for i in range(trials):
        rng = trial_rng(seed, i)
        k = int(rng.integers(1, 4))
        M = group_matrix(dext, [random_base_element(n, rng, scale) for _ in range(k)])
        vals.append(float(lam @ (t_level * (M @ d))))
    return vals


# --------------------------------------------------------------------------
# coadjoint lines in nilpotent algebras
# --------------------------------------------------------------------------

def coadjoint_line(alg: FiniteLieAlgebra, lam, x, svals=(-10.0, -1.0, 0.5, 3.0, 100.0), tol=1e-9):
    """Direction of an affine line inside the coadjoint orbit of ``lam``.

    For ``(ad x)^2 = 0`` the coadjoint action gives
    ``lam o exp(-s ad x) = lam - s lam o ad x``; if ``lam o ad x != 0`` this is
    a line.  The sampled points are checked against the formula.  Returns
    the direction, or None when ``lam o ad x = 0``.
    """
    ad = alg.ad(x).astype(float)
    if np.max(np.abs(ad @ ad)) > tol:
        raise ValueError("(ad x)^2 must vanish")
    lam = np.asarray(lam, dtype=float)
    direction = lam @ ad
    if np.max(np.abs(direction)) <= tol:
        return None
    for s in svals:
        pt = lam @ expm(-s * ad)
        if np.max(np.abs(pt - (lam - s * direction))) > tol * max(1.0, abs(s)):
            raise AssertionError("coadjoint orbit point off the line")
    return direction


def heisenberg() -> FiniteLieAlgebra:
    """Basis ``(c, p, q)`` with ``[p, q] = c``."""
    c = np.full((3, 3, 3), Fraction(0), dtype=object)
    c[1, 2, 0] = Fraction(1)
    c[2, 1, 0] = Fraction(-1)
    return FiniteLieAlgebra(c, ["c", "p", "q"])


# --------------------------------------------------------------------------
# random compatible data
# --------------------------------------------------------------------------

def _struct(n, entries):
    c = np.full((n, n, n), Fraction(0), dtype=object)
    for (i, j, k), v in entries.items():
        c[i, j, k] = Fraction(v)
        c[j, i, k] = -Fraction(v)
    return c


def small_bases():
    """Exact 2- and 4-dimensional base algebras used for random specs."""
    return {
        "abelian2": abelian(2),
        "aff1": FiniteLieAlgebra(_struct(2, {(0, 1, 1): 1}), ["a", "b"]),
        "abelian4": abelian(4),
        "heis_plus_r": FiniteLieAlgebra(_struct(4, {(1, 2, 0): 1}), ["c", "p", "q", "r"]),
        "aff1_sq": FiniteLieAlgebra(_struct(4, {(0, 1, 1): 1, (2, 3, 3): 1}), ["a", "b", "a2", "b2"]),
        "euclid2_plus_r": FiniteLieAlgebra(_struct(4, {(0, 1, 2): 1, (0, 2, 1): -1}), ["h", "x", "y", "r"]),
    }


def derivation_basis(base: FiniteLieAlgebra):
    """Exact basis of the derivation algebra (matrices acting on columns)."""
    n = base.dim
    c = base.c
    rows = []
    # unknown D[a, b] at position a * n + b
    for i in range(n):
        for j in range(n):
            for m in range(n):
                row = [Fraction(0)] * (n * n)
                for k in range(n):
                    row[m * n + k] += c[i, j, k]
                for k in range(n):
                    row[k * n + i] -= c[k, j, m]
                    row[k * n + j] -= c[i, k, m]
                if any(row):
                    rows.append(row)
    return [np.array(v, dtype=object).reshape(n, n) for v in nullspace(rows, n * n)]


def compatible_omega_delta(base: FiniteLieAlgebra, D):
    """Exact basis of pairs ``(omega, delta)`` that are cocycles compatible with ``D``."""
    n = base.dim
    c = base.c
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    nv = len(pairs) + n

    def w_entry(i, j):
        # coefficient vector of omega[i, j] in the unknowns
        v = [Fraction(0)] * nv
        if i < j:
            v[pairs.index((i, j))] = Fraction(1)
        elif i > j:
            v[pairs.index((j, i))] = Fraction(-1)
        return v

    rows = []
    for i in range(n):
        for j in range(n):
            # sum_k D[k,i] w[k,j] + w[i,k] D[k,j] - delta_k c[i,j,k] = 0
            row = [Fraction(0)] * nv
            for k in range(n):
                for idx, val in enumerate(w_entry(k, j)):
                    row[idx] += D[k, i] * val
                for idx, val in enumerate(w_entry(i, k)):
                    row[idx] += val * D[k, j]
                row[len(pairs) + k] -= c[i, j, k]
            if any(row):
                rows.append(row)
    for i, j, l in itertools.combinations(range(n), 3):
        row = [Fraction(0)] * nv
        for (a, b, e) in ((i, j, l), (j, l, i), (l, i, j)):
            for k in range(n):
                if c[a, b, k]:
                    for idx, val in enumerate(w_entry(k, e)):
                        row[idx] += c[a, b, k] * val
        if any(row):
            rows.append(row)
    out = []
    for v in nullspace(rows, nv):
        W = np.full((n, n), Fraction(0), dtype=object)
        for idx, (i, j) in enumerate(pairs):
            W[i, j] = v[idx]
            W[j, i] = -v[idx]
        out.append((W, np.array(v[len(pairs):], dtype=object)))
    return out


def random_compatible_spec(base: FiniteLieAlgebra, rng: np.random.Generator) -> DoubleExtensionSpec:
    """Random exact ``(omega, D, delta)`` satisfying all compatibility conditions."""
    n = base.dim
    D = np.full((n, n), Fraction(0), dtype=object)
    for B in derivation_basis(base):
        D = D + B * Fraction(int(rng.integers(-3, 4)))
    W = np.full((n, n), Fraction(0), dtype=object)
    delta = np.full(n, Fraction(0), dtype=object)
    for Wb, db in compatible_omega_delta(base, D):
        k = Fraction(int(rng.integers(-3, 4)))
        W = W + Wb * k
        delta = delta + db * k
    return DoubleExtensionSpec(base, W, D, delta)


# --------------------------------------------------------------------------
# JSON
# --------------------------------------------------------------------------

def _mat_json(m, exact):
    from .exact import fmt
    if exact:
        return [[fmt(x) for x in row] for row in m] if m.ndim == 2 else [fmt(x) for x in m]
    return m.tolist()


def spec_to_json(spec: DoubleExtensionSpec) -> dict:
    ex = spec.exact
    return {"base": algebra_to_json(spec.base), "omega": _mat_json(spec.omega, ex),
            "D": _mat_json(spec.D, ex), "delta": _mat_json(spec.delta, ex)}


def spec_from_json(obj: dict) -> DoubleExtensionSpec:
    try:
        base = algebra_from_json(obj["base"])
        return DoubleExtensionSpec(base, obj["omega"], obj["D"], obj["delta"])
    except (KeyError, TypeError) as exc:
        raise ValueError(f"malformed DoubleExtensionSpec: {exc}") from exc
