"""Majorization, permutation orbits and rearrangements.

``s_k(x)`` is the sum of the ``k`` largest entries of ``x``.  By the
Hardy-Littlewood-Polya theorem ``y`` lies in the convex hull of the
permutations of ``x`` iff ``s_k(y) <= s_k(x)`` for ``k < n`` and the sums agree.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np
from scipy.linalg import qr

from .convexcore import HalfSpace, Polyhedron, cone_generators
from .exact import dot, hull_contains, linprog_exact, qvec, to_fraction


class NotProper(ValueError):
    pass


def s_k(x: Sequence, k: int):
    """Sum of the ``k`` largest entries."""
    n = len(x)
    if not 1 <= k <= n:
        raise ValueError(f"k must be in 1..{n}")
    return sum(sorted(x, reverse=True)[:k])


def _partial_sums(x):
    out, acc = [], 0
    for v in sorted(x, reverse=True):
        acc = acc + v
        out.append(acc)
    return out


def hull_membership_finite(x: Sequence, y: Sequence, tol=0) -> bool:
    """``y in conv(S_n x)`` by the Hardy-Littlewood-Polya inequalities.

    With ``tol > 0`` every inequality (and the sum equality) is relaxed by ``tol``.
    """
    if len(x) != len(y):
        raise ValueError("dimension mismatch")
    sx, sy = _partial_sums(x), _partial_sums(y)
    n = len(x)
    if any(sy[k] > sx[k] + tol for k in range(n - 1)):
        return False
    return abs(sy[-1] - sx[-1]) <= tol


def hlp_slack(x: Sequence, y: Sequence) -> float:
    """Largest violation of the HLP conditions (0 when inside)."""
    sx, sy = _partial_sums(x), _partial_sums(y)
    worst = max([sy[k] - sx[k] for k in range(len(x) - 1)] + [abs(sy[-1] - sx[-1]), 0])
    return float(worst)


def hull_membership_twosided(x: Sequence, y: Sequence) -> bool:
    """``s_k(y) <= s_k(x)`` and ``s_k(-y) <= s_k(-x)`` for all ``k = 1..n``."""
    if len(x) != len(y):
        raise ValueError("dimension mismatch")
    mx = [-v for v in x]
    my = [-v for v in y]
    return (all(a <= b for a, b in zip(_partial_sums(y), _partial_sums(x)))
            and all(a <= b for a, b in zip(_partial_sums(my), _partial_sums(mx))))


def permutation_orbit(x: Sequence) -> list:
    return sorted(set(itertools.permutations(x)))


def hull_membership_lp(x: Sequence, y: Sequence) -> bool:
    """Exact LP test of ``y in conv(S_n x)`` (independent of the HLP inequalities)."""
    return hull_contains(permutation_orbit(qvec(x)), qvec(y))


# --------------------------------------------------------------------------
# Schur-Horn
# --------------------------------------------------------------------------

def haar_unitary(n: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-distributed unitary: QR of a complex Gaussian, phases of diag(R) moved into Q."""
    z = (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / np.sqrt(2)
    q, r = qr(z)
    d = np.diag(r)
    return q * (d / np.abs(d))


def trial_rng(seed: int, trial: int) -> np.random.Generator:
    """Independent counter-based stream for one trial: Philox keyed by (seed, trial)."""
    return np.random.Generator(np.random.Philox(np.random.SeedSequence([int(seed), int(trial)])))


@dataclass
class SchurHornRecord:
    trial: int
    max_slack: float
    inside: bool


def schur_horn_trial(lam: Sequence[float], seed: int, trial: int, tol: float = 1e-9) -> SchurHornRecord:
    lam = np.asarray(lam, dtype=float)
    u = haar_unitary(len(lam), trial_rng(seed, trial))
    diag = np.real(np.einsum("ij,j,ij->i", u, lam, u.conj()))
    slack = hlp_slack(list(lam), list(diag))
    return SchurHornRecord(trial, slack, slack <= tol)


def schur_horn_sample(lam: Sequence[float], trials: int, seed: int, tol: float = 1e-9) -> dict:
    """Monte-Carlo check that diagonals of ``U diag(lam) U*`` stay in the permutohedron.

    Returns a dict with per-trial records, the worst slack, and the distance of
    the diagonal obtained from each permutation matrix to the matching vertex.
    """
    if len(lam) < 2:
        raise ValueError("need n >= 2")
    records = [schur_horn_trial(lam, seed, i, tol) for i in range(trials)]
    lam_f = np.asarray(lam, dtype=float)
    vertex_err = 0.0
    for perm in itertools.permutations(range(len(lam))):
        p = np.eye(len(lam))[list(perm)]
        diag = np.real(np.diag(p @ np.diag(lam_f) @ p.conj().T))
        vertex_err = max(vertex_err, float(np.max(np.abs(np.sort(diag) - np.sort(lam_f)))))
    return {"records": records,
            "max_slack": max((r.max_slack for r in records), default=0.0),
            "violations": sum(not r.inside for r in records),
            "vertex_error": vertex_err}


# --------------------------------------------------------------------------
# step functions on (0, 1)
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class StepFunction:
    """Piecewise constant function on (0, 1).

    ``breakpoints`` are ``0 = t_0 < ... < t_m = 1`` and ``values[i]`` is the
    value on ``(t_i, t_{i+1})``.
    """
    breakpoints: tuple
    values: tuple

    def __post_init__(self):
        bp = tuple(to_fraction(t) for t in self.breakpoints)
        vals = tuple(to_fraction(v) for v in self.values)
        object.__setattr__(self, "breakpoints", bp)
        object.__setattr__(self, "values", vals)
        if bp[0] != 0 or bp[-1] != 1 or any(a >= b for a, b in zip(bp, bp[1:])):
            raise ValueError("breakpoints must increase strictly from 0 to 1")
        if len(vals) != len(bp) - 1:
            raise ValueError("need one value per interval")

    @classmethod
    def from_blocks(cls, blocks):
        """Build from ``(value, length)`` pairs, in order."""
        bp = [Fraction(0)]
        vals = []
        for v, ln in blocks:
            ln = to_fraction(ln)
            if ln <= 0:
                continue
            bp.append(bp[-1] + ln)
            vals.append(v)
        return cls(tuple(bp), tuple(vals))

    def blocks(self):
        return [(v, b - a) for v, a, b in zip(self.values, self.breakpoints, self.breakpoints[1:])]

    def integral(self) -> Fraction:
        return sum((v * ln for v, ln in self.blocks()), Fraction(0))

    def cumulative(self, s) -> Fraction:
        """``∫_0^s f``."""
        s = to_fraction(s)
        acc = Fraction(0)
        for v, a, b in zip(self.values, self.breakpoints, self.breakpoints[1:]):
            if s <= a:
                break
            acc += v * (min(b, s) - a)
        return acc

    def simplified(self) -> "StepFunction":
        """Merge adjacent intervals with equal values."""
        blocks = []
        for v, ln in self.blocks():
            if blocks and blocks[-1][0] == v:
                blocks[-1] = (v, blocks[-1][1] + ln)
            else:
                blocks.append((v, ln))
        return StepFunction.from_blocks(blocks)


def ryff_rearrangement(f: StepFunction) -> StepFunction:
    """Decreasing rearrangement ``f*``: blocks sorted by value, largest first."""
    blocks = sorted(f.blocks(), key=lambda b: b[0], reverse=True)
    return StepFunction.from_blocks(blocks).simplified()


def ryff_majorized(g: StepFunction, f: StepFunction) -> bool:
    """``g ≺ f``: ``∫_0^s g* <= ∫_0^s f*`` for all s, with equal totals.

    Both cumulative integrals are piecewise linear, so comparing them at the
    union of breakpoints decides the inequality.
    """
    gs, fs = ryff_rearrangement(g), ryff_rearrangement(f)
    if gs.integral() != fs.integral():
        return False
    points = sorted(set(gs.breakpoints) | set(fs.breakpoints))
    return all(gs.cumulative(t) <= fs.cumulative(t) for t in points)


def equimeasurable(f: StepFunction, g: StepFunction) -> bool:
    return ryff_rearrangement(f) == ryff_rearrangement(g)


# --------------------------------------------------------------------------
# l1 ball on the sum-zero hyperplane
# --------------------------------------------------------------------------

def l1_sumzero_polytope(n: int) -> Polyhedron:
    """``{x : sum x = 0, ||x||_1 <= 2}`` as an exact H-rep."""
    hs = []
    for signs in itertools.product((1, -1), repeat=n):
        hs.append(HalfSpace(tuple(-s for s in signs), -2))
    one = (1,) * n
    hs.append(HalfSpace(one, 0))
    hs.append(HalfSpace(tuple(-1 for _ in one), 0))
    return Polyhedron(n, hrep=hs)


def maxnorm_identity_check(n: int) -> bool:
    """Vertices of the sum-zero l1 ball of radius 2 are exactly the ``e_i - e_j``."""
    if not 2 <= n <= 8:
        raise ValueError("n must be in 2..8")
    P = l1_sumzero_polytope(n)
    found = set(P.points)
    expected = set()
    for i in range(n):
        for j in range(n):
            if i != j:
                v = [Fraction(0)] * n
                v[i], v[j] = Fraction(1), Fraction(-1)
                expected.add(tuple(v))
    return found == expected and not P.rays


# --------------------------------------------------------------------------
# permutation-invariant cones
# --------------------------------------------------------------------------

def permutation_cone_generators(vectors, n: int) -> list:
    gens = set()
    for v in vectors:
        v = qvec(v)
        if len(v) != n:
            raise ValueError("dimension mismatch")
        gens.update(itertools.permutations(v))
    return sorted(g for g in gens if any(g))


def _is_whole_space(gens, n):
    """For spanning ``gens``: the cone is ``Q^n`` iff ``-sum(gens)`` lies in it."""
    total = [-sum(g[i] for g in gens) for i in range(n)]
    return hull_contains([[0] * n], total, rays=gens)


def _spans(gens, n):
    from .exact import rank
    return rank(gens, n) == n


def permutation_cone_check(generator_orbit_vectors, n: int, find_witness: bool = True) -> dict:
    """Check the dichotomy for a proper permutation-invariant open cone.

    ``Omega`` is the interior of the cone generated by all permutations of
    the given vectors.  For proper ``Omega`` the summation functional is
    nonnegative or nonpositive on all of ``Omega``.

    Returns a dict with ``chi_sign`` (``+1`` if the sum is nonnegative on the
    generators, ``-1`` if nonpositive), ``dichotomy`` (bool) and ``witness``
    (``(F1, F2, b)`` with ``e_F1 - b e_F2`` interior, or None).

    Raises
    ------
    NotProper
        if the cone is all of ``Q^n``.
    ValueError
        if the cone has empty interior.
    """
    gens = permutation_cone_generators(generator_orbit_vectors, n)
    if not gens or not _spans(gens, n):
        raise ValueError("the generated cone has empty interior")
    if _is_whole_space(gens, n):
        raise NotProper("the cone is the whole space")
    sums = [sum(g) for g in gens]
    if all(s >= 0 for s in sums):
        sign = 1
    elif all(s <= 0 for s in sums):
        sign = -1
    else:
        sign = 0
    witness = _witness(gens, n) if find_witness else None
    return {"chi_sign": sign, "dichotomy": sign != 0, "witness": witness, "generators": len(gens)}


def _witness(gens, n):
    """Search ``e_F1 - b e_F2`` in the interior (F1, F2 disjoint, b > 0)."""
    total = [sum(g[i] for g in gens) for i in range(n)]
    for k in range(1, n):
        for m in range(1, n - k + 1):
            f1, f2 = list(range(k)), list(range(k, k + m))
            e1 = [Fraction(int(i in f1)) for i in range(n)]
            e2 = [Fraction(int(i in f2)) for i in range(n)]
            # e1 - b e2 - t*total = sum mu g, b >= t, t <= 1, maximize t
            A_eq = [[g[i] for g in gens] + [e2[i], total[i]] for i in range(n)]
            ng = len(gens)
            A_ub = [[0] * ng + [0, 1], [0] * ng + [-1, 1]]
            res = linprog_exact([0] * ng + [0, 1], A_ub=A_ub, b_ub=[1, 0], A_eq=A_eq, b_eq=e1,
                                maximize=True, free=[ng + 1])
            if res.optimal and res.value > 0:
                return (tuple(f1), tuple(f2), res.x[ng])
    return None


def random_proper_permutation_cone(n: int, rng: np.random.Generator, max_orbits: int = 2,
                                   bound: int = 3, attempts: int = 1000) -> list:
    """Orbit vectors of a random proper ``S_n``-invariant cone with interior.

    Draws 1..``max_orbits`` integer vectors with entries in ``[-bound, bound]``
    and rejects until the generated cone spans ``Q^n`` and is not all of it.
    """
    for _ in range(attempts):
        k = int(rng.integers(1, max_orbits + 1))
        vecs = [tuple(int(a) for a in rng.integers(-bound, bound + 1, size=n)) for _ in range(k)]
        gens = permutation_cone_generators(vecs, n)
        if not gens or not _spans(gens, n):
            continue
        if _is_whole_space(gens, n):
            continue
        return vecs
    raise RuntimeError("no proper cone found")
