"""Exact rational helpers and a rational simplex solver.

Everything here works on ``fractions.Fraction`` (or plain ``int``) data and
never rounds.  The linear-programming routine is a revised two-phase simplex
method using Bland's lowest-index rule, which cannot cycle.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, lcm
from typing import Iterable, Sequence

import numpy as np

RationalVector = tuple  # tuple of Fraction, kept as an alias for readability


def to_fraction(x) -> Fraction:
    """Convert ``x`` to a Fraction without rounding.

    Accepts ints, Fractions, floats (converted by their exact binary value),
    numpy scalars and strings such as ``"3/4"``, ``"-2"`` or ``"0.125"``.
    """
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, np.integer)):
        return Fraction(int(x))
    if isinstance(x, (float, np.floating)):
        return Fraction(float(x))
    if isinstance(x, str):
        return Fraction(x.strip())
    raise TypeError(f"cannot convert {x!r} to a rational")


def qvec(values: Iterable) -> RationalVector:
    return tuple(to_fraction(v) for v in values)


def qmat(rows: Iterable[Iterable]) -> list[RationalVector]:
    return [qvec(r) for r in rows]


def dot(a: Sequence, b: Sequence):
    return sum((x * y for x, y in zip(a, b)), Fraction(0))


def is_zero(v: Sequence) -> bool:
    return all(x == 0 for x in v)


def fmt(x: Fraction) -> str:
    """Serialize a rational as ``"p/q"`` (or ``"p"`` when integral)."""
    x = to_fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def primitive(v: Sequence) -> tuple[int, ...]:
    """Scale a nonzero rational vector by a positive factor to a primitive integer vector."""
    den = 1
    for x in v:
        den = lcm(den, Fraction(x).denominator)
    ints = [int(Fraction(x) * den) for x in v]
    g = 0
    for x in ints:
        g = gcd(g, x)
    if g == 0:
        return tuple(ints)
    return tuple(x // g for x in ints)


def integer_rows(rows: Sequence[Sequence]) -> list[tuple[int, ...]]:
    """Scale each row by a positive factor to integers (keeps sign patterns)."""
    return [primitive(r) if not is_zero(r) else tuple(0 for _ in r) for r in rows]


def rref(rows: Sequence[Sequence], ncols: int):
    """Reduced row echelon form over Q.  Returns (matrix, pivot columns)."""
    m = [[Fraction(x) for x in r] for r in rows]
    pivots = []
    r = 0
    for c in range(ncols):
        p = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if p is None:
            continue
        m[r], m[p] = m[p], m[r]
        inv = 1 / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m[:r], pivots


def rank(rows: Sequence[Sequence], ncols: int) -> int:
    if not rows:
        return 0
    return len(rref(rows, ncols)[1])


def nullspace(rows: Sequence[Sequence], ncols: int) -> list[RationalVector]:
    """Basis of {x : row . x = 0 for every row}, exact."""
    if not rows:
        return [tuple(Fraction(int(i == j)) for j in range(ncols)) for i in range(ncols)]
    red, piv = rref(rows, ncols)
    free = [c for c in range(ncols) if c not in piv]
    basis = []
    for f in free:
        x = [Fraction(0)] * ncols
        x[f] = Fraction(1)
        for i, p in enumerate(piv):
            x[p] = -red[i][f]
        basis.append(tuple(x))
    return basis


def solve_exact(rows: Sequence[Sequence], rhs: Sequence):
    """Solve a (possibly non-square) consistent system exactly.

    Returns one solution with free variables set to zero, or None if the
    system is inconsistent.
    """
    n = len(rows[0]) if rows else 0
    aug = [list(r) + [b] for r, b in zip(rows, rhs)]
    red, piv = rref(aug, n + 1)
    if n in piv:
        return None
    x = [Fraction(0)] * n
    for i, p in enumerate(piv):
        x[p] = red[i][n]
    return tuple(x)


# --------------------------------------------------------------------------
# linear programming
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class LPResult:
    """Outcome of an exact LP.

    Attributes
    ----------
    status : str
        ``"optimal"``, ``"infeasible"`` or ``"unbounded"``.
    x : tuple of Fraction or None
        An optimal basic solution (original variables) when optimal.
    value : Fraction or None
        Optimal objective value.
    """
    status: str
    x: tuple | None = None
    value: Fraction | None = None

    @property
    def optimal(self) -> bool:
        return self.status == "optimal"


class _Revised:
    """Revised simplex state for ``min c.x, A x = b, x >= 0`` with b >= 0."""

    def __init__(self, cols, b, basis, binv):
        self.cols = cols  # list of column vectors (lists of Fraction)
        self.b = b
        self.basis = basis
        self.binv = binv
        self.xb = [dot(row, b) for row in binv]

    def run(self, cost, allowed):
        m = len(self.basis)
        while True:
            cb = [cost[j] for j in self.basis]
            pi = [sum((cb[i] * self.binv[i][k] for i in range(m) if cb[i]), Fraction(0))
                  for k in range(m)]
            enter = None
            inbasis = set(self.basis)
            for j in allowed:  # Bland: first improving column
                if j in inbasis:
                    continue
                col = self.cols[j]
                d = cost[j] - sum((pi[k] * col[k] for k in range(m) if col[k] and pi[k]), Fraction(0))
                if d < 0:
                    enter = j
                    break
            if enter is None:
                return "optimal"
            col = self.cols[enter]
            u = [sum((row[k] * col[k] for k in range(m) if col[k] and row[k]), Fraction(0))
                 for row in self.binv]
            leave = None
            best = None
            for i in range(m):
                if u[i] > 0:
                    ratio = self.xb[i] / u[i]
                    if best is None or ratio < best or (ratio == best and self.basis[i] < self.basis[leave]):
                        best, leave = ratio, i
            if leave is None:
                return "unbounded"
            self.pivot(leave, enter, u)

    def pivot(self, r, enter, u):
        m = len(self.basis)
        piv = u[r]
        row_r = [x / piv for x in self.binv[r]]
        xr = self.xb[r] / piv
        for i in range(m):
            if i == r or u[i] == 0:
                continue
            f = u[i]
            self.binv[i] = [a - f * b for a, b in zip(self.binv[i], row_r)]
            self.xb[i] -= f * xr
        self.binv[r] = row_r
        self.xb[r] = xr
        self.basis[r] = enter


def simplex_standard(c: Sequence, A: Sequence[Sequence], b: Sequence) -> LPResult:
    """Minimize ``c.x`` subject to ``A x = b``, ``x >= 0`` exactly.

    Two-phase revised simplex with Bland's rule.  Rows of A that turn out to
    be redundant are tolerated.
    """
    m = len(A)
    n = len(c)
    c = [to_fraction(x) for x in c]
    if m == 0:
        if any(x < 0 for x in c):
            return LPResult("unbounded")
        return LPResult("optimal", tuple(Fraction(0) for _ in range(n)), Fraction(0))
    A = [[to_fraction(x) for x in row] for row in A]
    b = [to_fraction(x) for x in b]
    for i in range(m):
        if b[i] < 0:
            A[i] = [-x for x in A[i]]
            b[i] = -b[i]
    cols = [[A[i][j] for i in range(m)] for j in range(n)]
    for i in range(m):
        cols.append([Fraction(int(k == i)) for k in range(m)])
    basis = list(range(n, n + m))
    binv = [[Fraction(int(i == k)) for k in range(m)] for i in range(m)]
    lp = _Revised(cols, b, basis, binv)

    phase1 = [Fraction(0)] * n + [Fraction(1)] * m
    lp.run(phase1, range(n + m))
    if any(lp.xb[i] != 0 for i in range(m) if lp.basis[i] >= n):
        return LPResult("infeasible")
    # drive zero-valued artificials out of the basis where possible
    for r in range(m):
        if lp.basis[r] < n:
            continue
        inbasis = set(lp.basis)
        for j in range(n):
            if j in inbasis:
                continue
            u = [dot(row, cols[j]) for row in lp.binv]
            if u[r] != 0:
                lp.pivot(r, j, u)
                break
    phase2 = c + [Fraction(0)] * m
    status = lp.run(phase2, range(n))
    if status == "unbounded":
        return LPResult("unbounded")
    x = [Fraction(0)] * n
    for i, j in enumerate(lp.basis):
        if j < n:
            x[j] = lp.xb[i]
    return LPResult("optimal", tuple(x), dot(c, x))


def linprog_exact(c, A_ub=None, b_ub=None, A_eq=None, b_eq=None, free=None, maximize=False) -> LPResult:
    """Exact LP in general form.

    Minimizes (or maximizes) ``c.x`` subject to ``A_ub x <= b_ub`` and
    ``A_eq x = b_eq``.  Variables are nonnegative unless their index is in
    ``free``.
    """
    n = len(c)
    free = set(free or ())
    A_ub = list(A_ub or [])
    b_ub = list(b_ub or [])
    A_eq = list(A_eq or [])
    b_eq = list(b_eq or [])
    # column map: x_j = y_j (- y_j' when free)
    mapping = []
    for j in range(n):
        mapping.append((j, 1))
        if j in free:
            mapping.append((j, -1))
    nslack = len(A_ub)
    width = len(mapping) + nslack
    rows, rhs = [], []
    for k, (row, bb) in enumerate(zip(A_ub, b_ub)):
        row = [to_fraction(v) for v in row]
        line = [s * row[j] for j, s in mapping] + [Fraction(int(i == k)) for i in range(nslack)]
        rows.append(line)
        rhs.append(to_fraction(bb))
    for row, bb in zip(A_eq, b_eq):
        row = [to_fraction(v) for v in row]
        rows.append([s * row[j] for j, s in mapping] + [Fraction(0)] * nslack)
        rhs.append(to_fraction(bb))
    cc = [to_fraction(v) for v in c]
    sign = -1 if maximize else 1
    cost = [sign * s * cc[j] for j, s in mapping] + [Fraction(0)] * nslack
    res = simplex_standard(cost, rows, rhs) if width else LPResult("optimal", (), Fraction(0))
    if not res.optimal:
        return res
    x = [Fraction(0)] * n
    for (j, s), val in zip(mapping, res.x):
        x[j] += s * val
    return LPResult("optimal", tuple(x), dot(cc, x))


def hull_contains(points: Sequence[Sequence], u: Sequence, rays: Sequence[Sequence] = ()) -> bool:
    """Exact test of ``u in conv(points) + cone(rays)``.

    The feasibility problem is first solved in floating point (HiGHS) to
    propose either a basis or a separating hyperplane.  The proposal is then
    verified in exact arithmetic.  If verification is inconclusive the exact
    Bland simplex decides.
    """
    from scipy.optimize import linprog

    points = [qvec(p) for p in points]
    rays = [qvec(r) for r in rays]
    u = qvec(u)
    if not points:
        return False
    d = len(u)
    gens = points + rays
    npts = len(points)
    A = [[g[i] for g in gens] for i in range(d)] + [[Fraction(1)] * npts + [Fraction(0)] * len(rays)]
    b = list(u) + [Fraction(1)]
    Af = np.array([[float(x) for x in row] for row in A])
    bf = np.array([float(x) for x in b])
    res = linprog(np.zeros(len(gens)), A_eq=Af, b_eq=bf, bounds=(0, None), method="highs-ds")
    if res.status == 0:
        x = res.x
        support = sorted(range(len(gens)), key=lambda j: -x[j])[: d + 1]
        support = [j for j in support if x[j] > 1e-12] or support[:1]
        sub = [[row[j] for j in support] for row in A]
        sol = solve_exact(sub, b)
        if sol is not None and all(v >= 0 for v in sol):
            return True
    else:
        # separating hyperplane a.x >= beta on generators, a.u < beta
        sep = _float_separator(points, rays, u)
        if sep is not None:
            a = [Fraction(v).limit_denominator(10**9) for v in sep]
            beta = min(dot(a, p) for p in points)
            if all(dot(a, r) >= 0 for r in rays) and dot(a, u) < beta:
                return False
    return simplex_standard([0] * len(gens), A, b).optimal


def _float_separator(points, rays, u):
    from scipy.optimize import linprog

    d = len(u)
    P = np.array([[float(x) for x in p] for p in points])
    R = np.array([[float(x) for x in r] for r in rays]).reshape(-1, d)
    uf = np.array([float(x) for x in u])
    # variables (a, beta): maximize beta - a.u  s.t. a.p >= beta, a.r >= 0, |a_i| <= 1
    c = np.concatenate([uf, [-1.0]])
    A_ub = np.vstack([np.hstack([-P, np.ones((len(P), 1))]),
                      np.hstack([-R, np.zeros((len(R), 1))])])
    b_ub = np.zeros(len(A_ub))
    bounds = [(-1, 1)] * d + [(None, None)]
    res = linprog(c, A_ub=A_ub, b_ub=b_ub, bounds=bounds, method="highs")
    if res.status != 0 or res.fun > -1e-12:
        return None
    return res.x[:d]
