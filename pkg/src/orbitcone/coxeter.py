"""Linear Coxeter systems given by reflection data.

A system is a list of functionals ``alpha_s`` and coroots ``alpha_s^vee``
with ``alpha_s(alpha_s^vee) = 2``.  The generators act by

    r_s(v) = v - alpha_s(v) alpha_s^vee,

the fundamental chamber is ``K = {v : alpha_s(v) >= 0}`` and the Tits cone is
``W K``.  For ``v`` in the interior of the Tits cone the convex hull of the
orbit ``W v`` is decided by a dominance test: after moving ``v`` and ``u`` into
``K``, ``u`` lies in ``conv(W v)`` iff ``v+ - u+`` is a nonnegative
combination of the simple coroots.
"""

from __future__ import annotations

import enum
import math
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .convexcore import Polyhedron, HalfSpace
from .exact import RationalVector, dot, fmt, hull_contains, linprog_exact, qmat, qvec, rank, solve_exact


class CapExceeded(RuntimeError):
    pass


class IndeterminateMembership(RuntimeError):
    pass


class InvalidExpansion(ValueError):
    pass


class UnknownName(KeyError):
    pass


class TitsClass(enum.Enum):
    INTERIOR = "Interior"
    BOUNDARY_OR_OUTSIDE = "BoundaryOrOutside"
    UNKNOWN = "Unknown"


@dataclass(frozen=True)
class ReflectionData:
    """Simple functionals and coroots of a linear Coxeter system."""
    dim: int
    alphas: tuple
    coroots: tuple
    labels: tuple = ()

    def __post_init__(self):
        alphas = tuple(qvec(a) for a in self.alphas)
        coroots = tuple(qvec(c) for c in self.coroots)
        object.__setattr__(self, "alphas", alphas)
        object.__setattr__(self, "coroots", coroots)
        if not self.labels:
            object.__setattr__(self, "labels", tuple(f"s{i}" for i in range(len(alphas))))
        if len(alphas) != len(coroots) or len(self.labels) != len(alphas):
            raise ValueError("alphas, coroots and labels must have equal length")
        for a, c in zip(alphas, coroots):
            if len(a) != self.dim or len(c) != self.dim:
                raise ValueError("dimension mismatch in reflection data")
            if dot(a, c) != 2:
                raise ValueError("each alpha_s(alpha_s^vee) must equal 2")

    @property
    def rank(self) -> int:
        return len(self.alphas)


@dataclass(frozen=True)
class DominantForm:
    rep: RationalVector
    word: tuple
    stabilizer: tuple


@dataclass(frozen=True)
class Root:
    alpha: RationalVector
    coroot: RationalVector
    positive: bool
    depth: int = 0


# sorted Coxeter exponents of the finite rank-3 Coxeter groups
_FINITE_RANK3 = frozenset([(2, 2, 2), (2, 2, 3), (2, 2, 4), (2, 2, 6), (2, 3, 3), (2, 3, 4), (2, 3, 5)])


def _coxeter_m(p: Fraction):
    """Order of ``r_s r_t`` from ``p = alpha_s(t^vee) alpha_t(s^vee)``; None if not decided."""
    table = {0: 2, 1: 3, 2: 4, 3: 6}
    if p in table:
        return table[p]
    if p >= 4:
        return math.inf
    return None


class LinearCoxeterSystem:
    """Reflection group acting on ``Q^dim`` through exact reflection data.

    Parameters
    ----------
    data : ReflectionData
    name : str, optional
    status : str
        ``"Builtin"``, ``"Declared"`` or ``"check"``.  With ``"check"`` the
        condition that ``w K° ∩ K° = ∅`` for ``w != 1`` is tested for all
        words up to length ``lcs3_length`` and the status becomes
        ``"EmpiricallyChecked(L=...)"``.
    level : sequence, optional
        A W-invariant functional (exposed for affine systems).
    """

    def __init__(self, data: ReflectionData, name: str | None = None, status: str = "check",
                 level=None, lcs3_length: int = 8):
        self.data = data
        self.name = name or "custom"
        self.level = qvec(level) if level is not None else None
        self._validate_chamber()
        if status == "check":
            self._check_lcs3(lcs3_length)
            status = f"EmpiricallyChecked(L={lcs3_length})"
        self.lcs3_status = status
        self._coroots_independent = rank(list(data.coroots), data.dim) == data.rank

    # -- validation ------------------------------------------------------
    def _validate_chamber(self):
        d = self.data
        res = linprog_exact([0] * d.dim, A_ub=[[-x for x in a] for a in d.alphas],
                            b_ub=[-1] * d.rank, free=range(d.dim))
        if not res.optimal:
            raise ValueError("chamber has no interior point")
        for s in range(d.rank):
            others = [a for t, a in enumerate(d.alphas) if t != s]
            if hull_contains([(0,) * d.dim], d.alphas[s], rays=others):
                raise ValueError(f"alpha_{s} lies in the cone of the other simple roots")

    def _check_lcs3(self, length):
        d = self.data
        ident = _identity(d.dim)
        for w in self.group_elements(length=length):
            if w == ident:
                continue
            # v in K° and w^{-1} v in K°, homogenized to >= 1
            winv = _inverse(w)
            rows = [[-x for x in a] for a in d.alphas]
            rows += [[-dot(a, col) for col in zip(*winv)] for a in d.alphas]
            res = linprog_exact([0] * d.dim, A_ub=rows, b_ub=[-1] * len(rows), free=range(d.dim))
            if res.optimal:
                raise ValueError("a nontrivial element maps the open chamber into itself")

    # -- basic actions ---------------------------------------------------
    @property
    def dim(self) -> int:
        return self.data.dim

    @property
    def rank(self) -> int:
        return self.data.rank

    def reflect(self, s: int, v) -> RationalVector:
        v = qvec(v)
        a = dot(self.data.alphas[s], v)
        if a == 0:
            return v
        return tuple(x - a * c for x, c in zip(v, self.data.coroots[s]))

    def apply_word(self, word: Sequence[int], v) -> RationalVector:
        """Apply ``word[0]`` first, then ``word[1]``, and so on."""
        v = qvec(v)
        for s in word:
            v = self.reflect(s, v)
        return v

    def reflect_root(self, s: int, alpha, coroot):
        """Image of a root pair under ``r_s``: ``(alpha o r_s, r_s(coroot))``."""
        a_s, c_s = self.data.alphas[s], self.data.coroots[s]
        k = dot(alpha, c_s)
        new_alpha = tuple(x - k * y for x, y in zip(alpha, a_s))
        return new_alpha, self.reflect(s, coroot)

    def reflection_matrix(self, s: int) -> tuple:
        a, c = self.data.alphas[s], self.data.coroots[s]
        return tuple(tuple(Fraction(int(i == j)) - c[i] * a[j] for j in range(self.dim)) for i in range(self.dim))

    def coxeter_matrix(self):
        d = self.data
        m = [[1] * d.rank for _ in range(d.rank)]
        for s in range(d.rank):
            for t in range(d.rank):
                if s != t:
                    m[s][t] = _coxeter_m(dot(d.alphas[s], d.coroots[t]) * dot(d.alphas[t], d.coroots[s]))
        return m

    # -- chamber descent -------------------------------------------------
    def to_dominant(self, v, cap: int | None = None) -> DominantForm:
        """Move ``v`` into the chamber by reflecting in the lowest-index negative wall."""
        cap = 64 * self.dim if cap is None else cap
        if cap < 1:
            raise ValueError("cap must be at least 1")
        v = qvec(v)
        word = []
        alphas = self.data.alphas
        while True:
            vals = [dot(a, v) for a in alphas]
            s = next((i for i, x in enumerate(vals) if x < 0), None)
            if s is None:
                stab = tuple(i for i, x in enumerate(vals) if x == 0)
                return DominantForm(v, tuple(word), stab)
            if len(word) >= cap:
                raise CapExceeded(f"no dominant form within {cap} reflections")
            v = tuple(x - vals[s] * c for x, c in zip(v, self.data.coroots[s]))
            word.append(s)

    def parabolic_is_finite(self, subset: Sequence[int]):
        """True/False for the parabolic subgroup on ``subset``; None when undecided."""
        subset = list(subset)
        if len(subset) <= 1:
            return True
        m = self.coxeter_matrix()
        ms = [m[s][t] for i, s in enumerate(subset) for t in subset[i + 1:]]
        if any(x is None for x in ms):
            return None
        if len(subset) == 2:
            return ms[0] != math.inf
        if len(subset) == 3:
            if math.inf in ms:
                return False
            return tuple(sorted(ms)) in _FINITE_RANK3
        return None

    def _classify(self, v, cap=None):
        try:
            dom = self.to_dominant(v, cap)
        except CapExceeded:
            return TitsClass.BOUNDARY_OR_OUTSIDE, None
        fin = self.parabolic_is_finite(dom.stabilizer)
        if fin is None:
            return TitsClass.UNKNOWN, dom
        return (TitsClass.INTERIOR if fin else TitsClass.BOUNDARY_OR_OUTSIDE), dom

    def tits_cone_classify(self, v, cap=None) -> TitsClass:
        return self._classify(v, cap)[0]

    # -- orbit hulls -----------------------------------------------------
    def in_coroot_cone(self, x) -> bool:
        """Exact test of ``x in C_S = cone{alpha_s^vee}``."""
        x = qvec(x)
        cs = self.data.coroots
        if self._coroots_independent:
            sol = solve_exact([[c[i] for c in cs] for i in range(self.dim)], x)
            return sol is not None and all(c >= 0 for c in sol)
        return hull_contains([(0,) * self.dim], x, rays=cs)

    def orbit_hull_membership(self, v, u, cap=None) -> bool:
        """Whether ``u`` lies in ``conv(W v)``, by the dominance test.

        Raises
        ------
        IndeterminateMembership
            if ``v`` is not an interior point of the Tits cone, or ``u``
            cannot be classified.
        """
        cv, dv = self._classify(v, cap)
        if cv is not TitsClass.INTERIOR:
            raise IndeterminateMembership(f"v classified {cv.value}")
        cu, du = self._classify(u, cap)
        if cu is TitsClass.UNKNOWN:
            raise IndeterminateMembership("u could not be classified")
        if cu is not TitsClass.INTERIOR:
            return False
        diff = tuple(a - b for a, b in zip(dv.rep, du.rep))
        return self.in_coroot_cone(diff)

    def max_hull_step(self, v, expansion) -> Fraction:
        """Largest ``eps`` guaranteed by the expansion bound: ``v - eps w in conv(W v)``.

        ``expansion`` lists triples ``(c_j, alpha_j, coroot_j)`` of positive
        coefficients and roots with ``alpha_j(v) > 0``; ``w = sum c_j coroot_j``
        and ``eps = 1 / sum(c_j / alpha_j(v))``.
        """
        v = qvec(v)
        total = Fraction(0)
        w = [Fraction(0)] * self.dim
        for c, alpha, coroot in expansion:
            c = Fraction(c)
            av = dot(qvec(alpha), v)
            if c <= 0 or av <= 0:
                raise InvalidExpansion("need c_j > 0 and alpha_j(v) > 0")
            total += c / av
            w = [x + c * y for x, y in zip(w, qvec(coroot))]
        if total == 0:
            raise InvalidExpansion("empty expansion")
        eps = 1 / total
        u = tuple(x - eps * y for x, y in zip(v, w))
        if not self.orbit_hull_membership(v, u):
            raise AssertionError("step leaves the orbit hull")
        return eps

    def orbit(self, v, limit: int = 100000, depth: int | None = None) -> list:
        """Breadth-first orbit of ``v`` (truncated at ``limit`` points or word ``depth``)."""
        v = qvec(v)
        seen = {v: 0}
        queue = deque([v])
        while queue and len(seen) < limit:
            x = queue.popleft()
            if depth is not None and seen[x] >= depth:
                continue
            for s in range(self.rank):
                y = self.reflect(s, x)
                if y not in seen:
                    seen[y] = seen[x] + 1
                    queue.append(y)
        return list(seen)

    def orbit_with_words(self, v, depth: int) -> dict:
        """Orbit points reachable by words of length ``<= depth``, with a word for each."""
        v = qvec(v)
        seen = {v: ()}
        frontier = [v]
        for _ in range(depth):
            nxt = []
            for x in frontier:
                for s in range(self.rank):
                    y = self.reflect(s, x)
                    if y not in seen:
                        seen[y] = seen[x] + (s,)
                        nxt.append(y)
            frontier = nxt
        return seen

    def group_elements(self, subset: Sequence[int] | None = None, length: int | None = None,
                       limit: int = 100000) -> list:
        """Matrices of the group generated by ``subset`` (words up to ``length``)."""
        gens = [self.reflection_matrix(s) for s in (range(self.rank) if subset is None else subset)]
        ident = _identity(self.dim)
        seen = {ident: 0}
        frontier = [ident]
        while frontier and len(seen) < limit:
            nxt = []
            for g in frontier:
                if length is not None and seen[g] >= length:
                    continue
                for r in gens:
                    h = _matmul(r, g)
                    if h not in seen:
                        seen[h] = seen[g] + 1
                        nxt.append(h)
            frontier = nxt
        return list(seen)

    # -- roots -----------------------------------------------------------
    def enumerate_roots(self, length_bound: int) -> list:
        """Roots ``w alpha_s`` for words of length ``<= length_bound``, deduplicated.

        Each root is tagged positive when it is nonnegative on ``K``, i.e.
        lies in the cone of the simple roots.
        """
        if length_bound < 0:
            raise ValueError("length_bound must be >= 0")
        d = self.data
        found = {}
        frontier = []
        for a, c in zip(d.alphas, d.coroots):
            if a not in found:
                found[a] = (c, 0)
                frontier.append((a, c))
        for depth in range(1, length_bound + 1):
            nxt = []
            for a, c in frontier:
                for s in range(self.rank):
                    b, bc = self.reflect_root(s, a, c)
                    if b in found:
                        if found[b][0] != bc:
                            raise AssertionError("root with two different coroots")
                        continue
                    found[b] = (bc, depth)
                    nxt.append((b, bc))
            frontier = nxt
        origin = [(0,) * self.dim]
        roots = []
        for a, (c, depth) in found.items():
            pos = hull_contains(origin, a, rays=d.alphas)
            neg = hull_contains(origin, tuple(-x for x in a), rays=d.alphas)
            if pos == neg:
                raise AssertionError("root is neither positive nor negative")
            roots.append(Root(a, c, pos, depth))
        return roots

    def coroot_cone(self) -> Polyhedron:
        return Polyhedron.cone(self.dim, self.data.coroots)

    def cone_Cv(self, v, length_bound: int) -> Polyhedron:
        """``cone{alpha^vee : alpha(v) > 0}`` over the enumerated roots."""
        v = qvec(v)
        gens = [r.coroot for r in self.enumerate_roots(length_bound) if dot(r.alpha, v) > 0]
        cone = Polyhedron.cone(self.dim, gens)
        if all(dot(a, v) > 0 for a in self.data.alphas):
            if not cone.same_set(self.coroot_cone()):
                raise AssertionError("C_v differs from C_S on the open chamber")
        return cone

    def stabilizer_intersection(self, v) -> Polyhedron:
        """``∩ w C_S`` over the parabolic subgroup fixing a dominant ``v``."""
        dom = self.to_dominant(v)
        hs = []
        base = [h for h in self.coroot_cone().hrep]
        for g in self.group_elements(subset=dom.stabilizer):
            ginv = _inverse(g)
            for h in base:
                # w C_S = {x : a(w^{-1} x) >= 0}
                normal = tuple(sum(h.normal[k] * ginv[k][j] for k in range(self.dim)) for j in range(self.dim))
                hs.append(HalfSpace(normal, 0))
        return Polyhedron(self.dim, hrep=hs)


# --------------------------------------------------------------------------
# small exact matrix helpers
# --------------------------------------------------------------------------

def _identity(n):
    return tuple(tuple(Fraction(int(i == j)) for j in range(n)) for i in range(n))


def _matmul(a, b):
    n = len(a)
    cols = list(zip(*b))
    return tuple(tuple(sum((a[i][k] * cols[j][k] for k in range(n)), Fraction(0)) for j in range(len(cols)))
                 for i in range(n))


def _inverse(g):
    n = len(g)
    cols = []
    for j in range(n):
        e = [Fraction(int(i == j)) for i in range(n)]
        cols.append(solve_exact([list(r) for r in g], e))
    return tuple(tuple(cols[j][i] for j in range(n)) for i in range(n))


# --------------------------------------------------------------------------
# built-in systems
# --------------------------------------------------------------------------

def _type_a(n):
    dim = n + 1
    alphas, coroots = [], []
    for j in range(n):
        v = [0] * dim
        v[j], v[j + 1] = -1, 1
        alphas.append(v)
        coroots.append(v)
    return ReflectionData(dim, alphas, coroots, tuple(f"s{j + 1}" for j in range(n)))


def _from_cartan_rows(cartan):
    """Coroots e_i and roots given by the rows of the Cartan matrix."""
    n = len(cartan)
    coroots = [[int(i == j) for j in range(n)] for i in range(n)]
    return ReflectionData(n, cartan, coroots, tuple(f"s{i + 1}" for i in range(n)))


def _from_cartan_columns(cartan):
    """Roots e_i^* and coroots given by the columns of the Cartan matrix."""
    n = len(cartan)
    alphas = [[int(i == j) for j in range(n)] for i in range(n)]
    coroots = [[cartan[i][j] for i in range(n)] for j in range(n)]
    return ReflectionData(n, alphas, coroots, tuple(f"s{i}" for i in range(n)))


BUILTIN_NAMES = ("A1", "A2", "A3", "B2", "G2", "affine_A1", "affine_A2", "affine_A1_ext")


def builtin(name: str) -> LinearCoxeterSystem:
    """Built-in systems.

    Type A uses ``alpha_j(x) = x_{j+1} - x_j`` and ``alpha_j^vee = e_{j+1} - e_j``
    on ``Q^{n+1}``, so dominant vectors have nondecreasing coordinates.  B2 and
    G2 use the Cartan-matrix realization on ``Q^2``.  The affine systems act on
    ``Q^{rank}`` with the simple roots as coordinate functionals and expose the
    invariant level functional.  ``affine_A1_ext`` is the three-dimensional
    realization on ``span(coroots) + Q d`` with independent coroots and
    level ``delta = alpha_0 + alpha_1`` (the ``d``-coordinate).
    """
    if name == "A1":
        return LinearCoxeterSystem(_type_a(1), name, "Builtin")
    if name == "A2":
        return LinearCoxeterSystem(_type_a(2), name, "Builtin")
    if name == "A3":
        return LinearCoxeterSystem(_type_a(3), name, "Builtin")
    if name == "B2":
        return LinearCoxeterSystem(_from_cartan_rows([[2, -2], [-1, 2]]), name, "Builtin")
    if name == "G2":
        return LinearCoxeterSystem(_from_cartan_rows([[2, -1], [-3, 2]]), name, "Builtin")
    if name == "affine_A1":
        return LinearCoxeterSystem(_from_cartan_columns([[2, -2], [-2, 2]]), name, "Builtin", level=(1, 1))
    if name == "affine_A2":
        cart = [[2, -1, -1], [-1, 2, -1], [-1, -1, 2]]
        return LinearCoxeterSystem(_from_cartan_columns(cart), name, "Builtin", level=(1, 1, 1))
    if name == "affine_A1_ext":
        data = ReflectionData(3, tuple(qmat([[2, -2, 1], [-2, 2, 0]])), tuple(qmat([[1, 0, 0], [0, 1, 0]])), ("s0", "s1"))
        return LinearCoxeterSystem(data, name, "Builtin", level=(0, 0, 1))
    raise UnknownName(name)


# --------------------------------------------------------------------------
# JSON
# --------------------------------------------------------------------------

def reflection_data_to_json(d: ReflectionData) -> dict:
    return {"dim": d.dim,
            "alphas": [[fmt(x) for x in a] for a in d.alphas],
            "coroots": [[fmt(x) for x in c] for c in d.coroots],
            "labels": list(d.labels)}


def reflection_data_from_json(obj: dict) -> ReflectionData:
    try:
        return ReflectionData(int(obj["dim"]), obj["alphas"], obj["coroots"], tuple(obj.get("labels", ())))
    except (KeyError, TypeError) as exc:
        raise ValueError(f"malformed ReflectionData: {exc}") from exc
