"""Exact polyhedral convex geometry.

Polyhedra are stored in H-representation (halfspaces ``<a, v> >= b``) or in
V-representation (``conv(points) + cone(rays)``), with the other
representation computed on demand by the double description method and then
cached.  All arithmetic is rational.

The support functional of a set ``C`` is ``s_C(v) = sup <C, v>`` and its
finiteness cone is ``B(C) = {v : inf <C, v> > -inf}``.  The routines below
implement the finite-dimensional face of the duality between closed convex
sets with pointed recession cone and support functionals on open cones.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .exact import (
    RationalVector,
    dot,
    fmt,
    hull_contains,
    integer_rows,
    is_zero,
    linprog_exact,
    nullspace,
    primitive,
    qvec,
    to_fraction,
)


class NotACone(ValueError):
    pass


class NotSemiEquicontinuous(ValueError):
    pass


class ZeroInClosure(ValueError):
    pass


class PointOutside(ValueError):
    pass


class PreconditionViolated(ValueError):
    """Raised with an offending direction ``ray`` attached."""

    def __init__(self, msg, ray=None):
        super().__init__(msg)
        self.ray = ray


class DualityMismatch(AssertionError):
    pass


class Membership(enum.Enum):
    INSIDE = "Inside"
    BOUNDARY = "Boundary"
    OUTSIDE = "Outside"


@dataclass(frozen=True)
class HalfSpace:
    """The set ``{v : <normal, v> >= offset}`` (``>`` when ``strict``)."""
    normal: RationalVector
    offset: Fraction = Fraction(0)
    strict: bool = False

    def __post_init__(self):
        object.__setattr__(self, "normal", qvec(self.normal))
        object.__setattr__(self, "offset", to_fraction(self.offset))
        if is_zero(self.normal):
            raise ValueError("halfspace normal must be nonzero")

    def slack(self, v) -> Fraction:
        return dot(self.normal, v) - self.offset


# --------------------------------------------------------------------------
# double description
# --------------------------------------------------------------------------

def _idot(a, b):
    return sum(x * y for x, y in zip(a, b))


def _comb(s0, r, s, l0):
    return primitive([s0 * x - s * y for x, y in zip(r, l0)])


def cone_generators(constraints: Sequence[Sequence], dim: int):
    """Generators of the cone ``{x in Q^dim : <a, x> >= 0 for all a}``.

    Incremental double description method with the combinatorial adjacency
    test.  Returns ``(lineality, rays)``: a basis of the lineality space and
    the extreme rays of the pointed part, all as primitive integer tuples.
    """
    A = [a for a in integer_rows(constraints) if any(a)]
    lin = [tuple(int(i == j) for j in range(dim)) for i in range(dim)]
    rays: list[tuple] = []
    zs: list[int] = []
    for idx, a in enumerate(A):
        bit = 1 << idx
        piv = next((k for k, l in enumerate(lin) if _idot(a, l) != 0), None)
        if piv is not None:
            l0 = lin[piv]
            s0 = _idot(a, l0)
            if s0 < 0:
                l0 = tuple(-x for x in l0)
                s0 = -s0
            newlin = []
            for k, l in enumerate(lin):
                if k == piv:
                    continue
                s = _idot(a, l)
                newlin.append(_comb(s0, l, s, l0) if s else l)
            newrays, newz = [], []
            for r, z in zip(rays, zs):
                s = _idot(a, r)
                newrays.append(_comb(s0, r, s, l0) if s else r)
                newz.append(z | bit)
            newrays.append(l0)
            newz.append(bit - 1)
            lin, rays, zs = newlin, newrays, newz
            continue
        vals = [_idot(a, r) for r in rays]
        pos = [i for i, s in enumerate(vals) if s > 0]
        neg = [i for i, s in enumerate(vals) if s < 0]
        newrays = [rays[i] for i in pos] + [rays[i] for i, s in enumerate(vals) if s == 0]
        newz = [zs[i] for i in pos] + [zs[i] | bit for i, s in enumerate(vals) if s == 0]
        need = dim - len(lin) - 2
        seen = set(newrays)
        for p in pos:
            for q in neg:
                common = zs[p] & zs[q]
                if bin(common).count("1") < need:
                    continue
                adjacent = True
                for k, z in enumerate(zs):
                    if k != p and k != q and common & ~z == 0:
                        adjacent = False
                        break
                if not adjacent:
                    continue
                r = _comb(vals[p], rays[q], vals[q], rays[p])
                if r not in seen and any(r):
                    seen.add(r)
                    newrays.append(r)
                    newz.append(common | bit)
        rays, zs = newrays, newz
    return lin, rays


def _fr(v):
    return tuple(Fraction(x) for x in v)


# --------------------------------------------------------------------------
# polyhedra
# --------------------------------------------------------------------------

class Polyhedron:
    """A polyhedral convex set in ``Q^dim``.

    Build with ``Polyhedron(dim, hrep=...)`` or
    ``Polyhedron(dim, points=..., rays=...)``; ``Polyhedron.cone`` builds
    ``cone(rays)``.  The missing representation is computed lazily.  An
    empty ``points`` list means the empty set.

    Lineality directions in a V-representation appear as opposite ray pairs.
    """

    def __init__(self, dim: int, hrep=None, points=None, rays=None):
        self.dim = int(dim)
        self._h = None
        self._p = None
        self._r = None
        self.given = "h" if hrep is not None else "v"
        if hrep is not None:
            hs = tuple(h if isinstance(h, HalfSpace) else HalfSpace(*h) for h in hrep)
            for h in hs:
                if len(h.normal) != self.dim:
                    raise ValueError("dimension mismatch in halfspace")
            self._h = hs
        else:
            self._p = tuple(qvec(p) for p in (points or ()))
            self._r = tuple(r for r in (qvec(r) for r in (rays or ())) if not is_zero(r))
            for v in self._p + self._r:
                if len(v) != self.dim:
                    raise ValueError("dimension mismatch in generator")

    @classmethod
    def cone(cls, dim: int, rays) -> "Polyhedron":
        return cls(dim, points=[(0,) * dim], rays=rays)

    # -- representations -------------------------------------------------
    @property
    def hrep(self) -> tuple:
        if self._h is None:
            self._h = _v_to_h(self.dim, self._p, self._r)
        return self._h

    @property
    def points(self) -> tuple:
        if self._p is None:
            self._p, self._r = _h_to_v(self.dim, self._h)
        return self._p

    @property
    def rays(self) -> tuple:
        if self._r is None:
            self._p, self._r = _h_to_v(self.dim, self._h)
        return self._r

    @property
    def is_empty(self) -> bool:
        return len(self.points) == 0

    def is_cone(self) -> bool:
        if self.given == "h":
            return all(h.offset == 0 for h in self._h)
        return all(is_zero(p) for p in self._p) and len(self._p) > 0

    # -- queries ---------------------------------------------------------
    def membership(self, v) -> Membership:
        v = qvec(v)
        if len(v) != self.dim:
            raise ValueError("dimension mismatch")
        tight = False
        for h in self.hrep:
            s = h.slack(v)
            if s < 0:
                return Membership.OUTSIDE
            if s == 0:
                tight = True
        return Membership.BOUNDARY if tight else Membership.INSIDE

    def contains(self, v) -> bool:
        """Membership in the closure."""
        return self.membership(v) is not Membership.OUTSIDE

    def contains_direction(self, r) -> bool:
        """Whether ``r`` lies in the recession cone."""
        r = qvec(r)
        return all(dot(h.normal, r) >= 0 for h in self.hrep)

    def issubset(self, other: "Polyhedron") -> bool:
        if self.is_empty:
            return True
        return (all(other.contains(p) for p in self.points)
                and all(other.contains_direction(r) for r in self.rays))

    def same_set(self, other: "Polyhedron") -> bool:
        return self.issubset(other) and other.issubset(self)

    def __repr__(self):
        if self._p is not None:
            return f"Polyhedron(dim={self.dim}, points={len(self._p)}, rays={len(self._r)})"
        return f"Polyhedron(dim={self.dim}, halfspaces={len(self._h)})"


def _h_to_v(dim, hrep):
    cons = [tuple(h.normal) + (-h.offset,) for h in hrep]
    cons.append(tuple(0 for _ in range(dim)) + (1,))
    lin, rays = cone_generators(cons, dim + 1)
    points, out_rays = [], []
    for g in rays:
        if g[-1] > 0:
            points.append(tuple(Fraction(x, g[-1]) for x in g[:-1]))
        else:
            out_rays.append(_fr(g[:-1]))
    for l in lin:
        out_rays.append(_fr(l[:-1]))
        out_rays.append(tuple(-Fraction(x) for x in l[:-1]))
    if not points:
        return (), ()
    return tuple(points), tuple(out_rays)


def _v_to_h(dim, points, rays):
    if not points:
        # empty set: 0 >= 1 is not expressible with a nonzero normal, so use
        # two opposite halfspaces that cannot both hold
        e = tuple(Fraction(int(i == 0)) for i in range(dim))
        return (HalfSpace(e, 1), HalfSpace(tuple(-x for x in e), 0))
    gens = [tuple(p) + (Fraction(1),) for p in points] + [tuple(r) + (Fraction(0),) for r in rays]
    lin, drays = cone_generators(gens, dim + 1)
    hs = []
    for g in drays:
        if any(g[:-1]):
            hs.append(HalfSpace(_fr(g[:-1]), -Fraction(g[-1])))
    for l in lin:
        if any(l[:-1]):
            hs.append(HalfSpace(_fr(l[:-1]), -Fraction(l[-1])))
            hs.append(HalfSpace(tuple(-Fraction(x) for x in l[:-1]), Fraction(l[-1])))
    return tuple(hs)


def minimize_hrep(P: Polyhedron) -> Polyhedron:
    """Drop halfspaces implied by the others (exact LP per halfspace)."""
    hs = list(P.hrep)
    keep = []
    for i, h in enumerate(hs):
        others = keep + hs[i + 1:]
        if not others:
            keep.append(h)
            continue
        res = linprog_exact(list(h.normal),
                            A_ub=[[-x for x in g.normal] for g in others],
                            b_ub=[-g.offset for g in others],
                            free=range(P.dim))
        if res.status == "optimal" and res.value >= h.offset:
            continue
        keep.append(h)
    return Polyhedron(P.dim, hrep=keep)


# --------------------------------------------------------------------------
# support functionals and cones
# --------------------------------------------------------------------------

class SupportFunctional:
    """``s_C(v) = sup <C, v>`` for a polyhedron ``C``; returns ``math.inf`` off its domain."""

    def __init__(self, carrier: Polyhedron):
        self.carrier = carrier

    def __call__(self, v):
        v = qvec(v)
        C = self.carrier
        if C.is_empty:
            return -math.inf
        if any(dot(r, v) > 0 for r in C.rays):
            return math.inf
        return max(dot(p, v) for p in C.points)


def support(C: Polyhedron, v):
    return SupportFunctional(C)(v)


def membership(P: Polyhedron, v) -> Membership:
    if P.is_empty:
        raise ValueError("membership needs a nonempty set")
    return P.membership(v)


def dual_cone(C: Polyhedron) -> Polyhedron:
    """``C* = {a : <a, v> >= 0 for v in C}``, returned in the opposite representation."""
    if not C.is_cone():
        raise NotACone("dual_cone expects a cone (rays only, or homogeneous halfspaces)")
    if C.given == "v":
        return Polyhedron(C.dim, hrep=[HalfSpace(r, 0) for r in C.rays])
    return Polyhedron.cone(C.dim, [h.normal for h in C.hrep])


def recession_cone(P: Polyhedron) -> Polyhedron:
    if P.given == "h":
        return Polyhedron(P.dim, hrep=[HalfSpace(h.normal, 0) for h in P.hrep])
    return Polyhedron.cone(P.dim, P.rays)


def lineality(P: Polyhedron) -> list:
    """Basis of the lineality space ``lim(P) ∩ -lim(P)``."""
    return nullspace([h.normal for h in P.hrep], P.dim)


def finiteness_cone(C: Polyhedron) -> Polyhedron:
    """``B(C)`` as a homogeneous H-rep: the directions bounded below on ``C``."""
    return Polyhedron(C.dim, hrep=[HalfSpace(r, 0) for r in C.rays])


def _has_interior_dual(rays, dim) -> bool:
    if not rays:
        return True
    res = linprog_exact([0] * dim, A_ub=[[-x for x in r] for r in rays],
                        b_ub=[-1] * len(rays), free=range(dim))
    return res.optimal


def _is_pointed(rays, dim) -> bool:
    if not rays:
        return True
    A_eq = [[r[i] for r in rays] for i in range(dim)] + [[1] * len(rays)]
    b_eq = [0] * dim + [1]
    res = linprog_exact([0] * len(rays), A_eq=A_eq, b_eq=b_eq)
    return not res.optimal


def is_pointed(cone: Polyhedron) -> bool:
    return _is_pointed(cone.rays, cone.dim)


def is_semi_equicontinuous(C: Polyhedron) -> bool:
    """Whether ``B(C)`` has interior points; cross-checked against pointedness of ``lim(C)``."""
    rays = list(C.rays)
    interior = _has_interior_dual(rays, C.dim)
    pointed = _is_pointed(rays, C.dim)
    if interior != pointed:
        raise AssertionError("interior of B(C) and pointedness of lim(C) disagree")
    return interior


def duality_roundtrip(C: Polyhedron) -> Polyhedron:
    """Recover ``C`` from its support functional on the open cone where it is finite.

    With ``Omega = B(-C)°`` and ``f = s_C``, the epigraph of ``f`` over the
    closure of ``Omega`` is a polyhedral cone.  Its generators give a finite
    set of directions ``v`` such that ``C = {a : <a, v> <= f(v)}``.  The
    reconstructed set is compared with ``C`` exactly and returned.

    Raises
    ------
    NotSemiEquicontinuous
        if ``Omega`` is empty.
    DualityMismatch
        if the reconstruction differs from ``C``.
    """
    if C.is_empty or not is_semi_equicontinuous(C):
        raise NotSemiEquicontinuous("support functional is finite on no open set")
    d = C.dim
    cons = [tuple(-x for x in p) + (Fraction(1),) for p in C.points]
    cons += [tuple(-x for x in r) + (Fraction(0),) for r in C.rays]
    lin, rays = cone_generators(cons, d + 1)
    s = SupportFunctional(C)
    dirs = [g[:-1] for g in rays] + [l[:-1] for l in lin] + [tuple(-x for x in l[:-1]) for l in lin]
    hs = []
    for v in dirs:
        if not any(v):
            continue
        val = s(v)
        if val == math.inf:
            raise AssertionError("epigraph generator outside the finiteness cone")
        hs.append(HalfSpace(tuple(-Fraction(x) for x in v), -val))
    Cf = Polyhedron(d, hrep=hs)
    if not Cf.same_set(C):
        raise DualityMismatch("reconstructed set differs from the input")
    return Cf


def _sample_interior(normals, dim, count, rng):
    """Random points of the open cone ``{v : <a, v> > 0}``."""
    lin, rays = cone_generators(normals, dim)
    out = []
    tries = 0
    while len(out) < count and tries < 20 * count:
        tries += 1
        v = [Fraction(0)] * dim
        for r in rays:
            w = Fraction(int(rng.integers(1, 20)), int(rng.integers(1, 20)))
            v = [a + w * b for a, b in zip(v, r)]
        for l in lin:
            w = Fraction(int(rng.integers(-20, 21)), int(rng.integers(1, 20)))
            v = [a + w * b for a, b in zip(v, l)]
        if all(dot(a, v) > 0 for a in normals):
            out.append(tuple(v))
    return out


def enlarge_by_cone(C: Polyhedron, Omega: Polyhedron, samples: int = 100, seed: int = 0) -> Polyhedron:
    """``C - Omega*`` for an open cone ``Omega`` on which ``s_C`` is finite.

    ``Omega`` is given by homogeneous halfspaces (their strictness is taken
    for granted).  The result has the same support functional as ``C`` on
    ``Omega``; this is asserted on ``samples`` random directions.
    """
    if any(h.offset != 0 for h in Omega.hrep):
        raise NotACone("Omega must be a homogeneous H-rep")
    normals = [h.normal for h in Omega.hrep]
    lin, rays = cone_generators(normals, C.dim)
    gens = [_fr(r) for r in rays] + [_fr(l) for l in lin] + [tuple(-Fraction(x) for x in l) for l in lin]
    for g in gens:
        if any(dot(r, g) > 0 for r in C.rays):
            raise PreconditionViolated("support functional is infinite on a ray of Omega", ray=g)
    out = Polyhedron(C.dim, points=C.points, rays=list(C.rays) + [tuple(-x for x in a) for a in normals])
    rng = np.random.default_rng(seed)
    s_in, s_out = SupportFunctional(C), SupportFunctional(out)
    for v in _sample_interior(normals, C.dim, samples, rng):
        if s_in(v) != s_out(v):
            raise AssertionError("support functionals differ on Omega")
    return out


def pointed_cone_from_bounded(Omega: Polyhedron) -> Polyhedron:
    """The cone ``R_+ Omega`` over a polytope not containing 0 in its closure."""
    if Omega.rays:
        raise ValueError("expected a bounded polytope")
    if Omega.is_empty:
        raise ValueError("expected a nonempty polytope")
    if hull_contains(Omega.points, (0,) * Omega.dim):
        raise ZeroInClosure("0 lies in the closure")
    cone = Polyhedron.cone(Omega.dim, Omega.points)
    if not is_pointed(cone):
        raise AssertionError("cone over the polytope is not pointed")
    return cone


def inverse_boundary_distance(U: Polyhedron, x, norm: str = "l2") -> float:
    """``1 / dist(x, boundary of U)`` for an open polyhedron ``U`` (floating point)."""
    hs = U.hrep
    if not hs:
        raise ValueError("U must be a proper subset")
    xf = np.array([float(v) for v in x])
    dual = {"l2": 2, "l1": np.inf, "linf": 1}[norm]
    best = np.inf
    for h in hs:
        a = np.array([float(v) for v in h.normal])
        slack = float(a @ xf - float(h.offset))
        if slack <= 1e-12:
            raise PointOutside("x is not in U")
        best = min(best, slack / np.linalg.norm(a, dual))
    return 1.0 / best


# --------------------------------------------------------------------------
# JSON
# --------------------------------------------------------------------------

def polyhedron_to_json(P: Polyhedron) -> dict:
    out = {"dim": P.dim}
    if P._h is not None:
        out["hrep"] = [{"normal": [fmt(x) for x in h.normal], "offset": fmt(h.offset), "strict": h.strict}
                       for h in P._h]
    if P._p is not None:
        out["vrep"] = {"points": [[fmt(x) for x in p] for p in P._p],
                       "rays": [[fmt(x) for x in r] for r in P._r]}
    return out


def polyhedron_from_json(obj: dict) -> Polyhedron:
    if not isinstance(obj, dict) or "dim" not in obj:
        raise ValueError("PolyhedralSet needs a 'dim' field")
    dim = int(obj["dim"])
    if "vrep" in obj:
        v = obj["vrep"]
        return Polyhedron(dim, points=v.get("points", []), rays=v.get("rays", []))
    if "hrep" in obj:
        return Polyhedron(dim, hrep=[HalfSpace(h["normal"], h.get("offset", 0), bool(h.get("strict", False)))
                                     for h in obj["hrep"]])
    raise ValueError("PolyhedralSet needs 'hrep' or 'vrep'")


def random_semi_equicontinuous(rng: np.random.Generator, dim: int = 3, max_points: int = 6,
                               max_rays: int = 3, bound: int = 3) -> Polyhedron:
    """Random V-polyhedron with pointed recession cone.

    Points have rational coordinates with numerators in ``[-bound, bound]``;
    rays lie in the open half space of a random integer vector, so their
    cone is pointed.
    """
    npts = int(rng.integers(1, max_points + 1))
    pts = [tuple(Fraction(int(rng.integers(-bound, bound + 1)), int(rng.integers(1, 3)))
                 for _ in range(dim)) for _ in range(npts)]
    h = [0] * dim
    while not any(h):
        h = [int(a) for a in rng.integers(-2, 3, size=dim)]
    rays = []
    for _ in range(int(rng.integers(0, max_rays + 1))):
        while True:
            r = [int(a) for a in rng.integers(-bound, bound + 1, size=dim)]
            if sum(a * b for a, b in zip(r, h)) > 0:
                rays.append(tuple(Fraction(a) for a in r))
                break
    return Polyhedron(dim, points=pts, rays=rays)
