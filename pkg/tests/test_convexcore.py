from fractions import Fraction as F

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from orbitcone.convexcore import (
    HalfSpace, Membership, NotACone, NotSemiEquicontinuous, Polyhedron, PointOutside,
    PreconditionViolated, SupportFunctional, ZeroInClosure, cone_generators, dual_cone,
    duality_roundtrip, enlarge_by_cone, finiteness_cone, inverse_boundary_distance,
    is_pointed, is_semi_equicontinuous, lineality, membership, minimize_hrep,
    pointed_cone_from_bounded, polyhedron_from_json, polyhedron_to_json,
    random_semi_equicontinuous, recession_cone, support,
)
from orbitcone.majorize import trial_rng


def quadrant():
    return Polyhedron.cone(2, [(1, 0), (0, 1)])


def ray_set(P):
    return sorted(P.rays)


# -- dual cones -------------------------------------------------------------

def test_dual_of_quadrant_is_quadrant():
    D = dual_cone(quadrant())
    assert D.given == "h"
    assert D.same_set(quadrant())


def test_dual_of_single_ray():
    D = dual_cone(Polyhedron.cone(2, [(1, 0)]))
    assert D.contains((1, 5)) and D.contains((0, -3)) and not D.contains((-1, 0))
    DD = dual_cone(D)
    assert DD.same_set(Polyhedron.cone(2, [(1, 0)]))


def test_dual_rays_of_skew_cone():
    # edges of the dual of cone{(1,0),(1,2)}: normals (0,1) and (2,-1)
    D = dual_cone(Polyhedron.cone(2, [(1, 0), (1, 2)]))
    got = sorted(tuple(int(x) for x in r) for r in D.rays)
    assert got == [(0, 1), (2, -1)]


def test_dual_rejects_non_cone():
    with pytest.raises(NotACone):
        dual_cone(Polyhedron(2, points=[(1, 1)]))
    with pytest.raises(NotACone):
        dual_cone(Polyhedron(2, hrep=[HalfSpace((1, 0), 1)]))


# -- membership ---------------------------------------------------------------

@pytest.mark.parametrize("v,expected", [((1, 1), Membership.INSIDE), ((0, 1), Membership.BOUNDARY),
                                        ((-1, 1), Membership.OUTSIDE)])
def test_quadrant_membership(v, expected):
    assert membership(quadrant(), v) is expected


def test_membership_dimension_mismatch():
    with pytest.raises(ValueError):
        membership(quadrant(), (1, 1, 1))


# -- recession, finiteness, lineality ---------------------------------------------

def test_recession_of_epigraph_is_itself():
    P = Polyhedron(2, hrep=[HalfSpace((-1, 1)), HalfSpace((1, 1))])
    assert recession_cone(P).same_set(P)


def test_recession_of_triangle_is_zero():
    T = Polyhedron(2, points=[(0, 0), (1, 0), (0, 1)])
    R = recession_cone(T)
    assert R.contains((0, 0)) and not R.contains((1, 0)) and not R.contains((0, -1))


def test_strip_lineality_is_e2():
    strip = Polyhedron(2, hrep=[HalfSpace((1, 0), 0), HalfSpace((-1, 0), -1)])
    lin = lineality(strip)
    assert len(lin) == 1 and lin[0][0] == 0 and lin[0][1] != 0


def test_finiteness_cones():
    pt = Polyhedron(2, points=[(3, 4)])
    assert finiteness_cone(pt).contains((-7, 2))
    half = Polyhedron(2, points=[(1, 1)], rays=[(1, 0)])
    B = finiteness_cone(half)
    assert B.contains((0, -5)) and B.contains((2, 1)) and not B.contains((-1, 0))
    assert finiteness_cone(quadrant()).same_set(quadrant())


# -- semi-equicontinuity ---------------------------------------------------------

def test_semi_equicontinuity_examples():
    assert is_semi_equicontinuous(Polyhedron(2, points=[(0, 0)]))
    line = Polyhedron(2, points=[(0, 0)], rays=[(1, 1), (-1, -1)])
    assert not is_semi_equicontinuous(line)
    shifted = Polyhedron(2, points=[(1, 2)], rays=[(1, 0), (0, 1)])
    assert is_semi_equicontinuous(shifted)
    # B(C) of the shifted quadrant: directions with inf > -inf, i.e. the quadrant
    assert finiteness_cone(shifted).same_set(quadrant())


def test_roundtrip_rejects_line():
    line = Polyhedron(2, points=[(0, 0)], rays=[(1, 1), (-1, -1)])
    with pytest.raises(NotSemiEquicontinuous):
        duality_roundtrip(line)


# -- duality round trip ----------------------------------------------------------

def test_roundtrip_zero():
    C = Polyhedron(2, points=[(0, 0)])
    assert duality_roundtrip(C).same_set(C)


def test_roundtrip_segment():
    C = Polyhedron(2, points=[(0, 0), (1, 0)])
    R = duality_roundtrip(C)
    assert R.same_set(C)
    assert R.contains((F(1, 2), 0)) and not R.contains((F(1, 2), F(1, 100)))


def test_roundtrip_negative_quadrant():
    C = Polyhedron.cone(2, [(-1, 0), (0, -1)])
    assert support(C, (1, 1)) == 0
    assert duality_roundtrip(C).same_set(C)


# -- enlarge_by_cone and homogenization -----------------------------------------------

def test_enlarge_zero_by_quadrant():
    Omega = Polyhedron(2, hrep=[HalfSpace((1, 0), 0, True), HalfSpace((0, 1), 0, True)])
    E = enlarge_by_cone(Polyhedron(2, points=[(0, 0)]), Omega)
    assert E.same_set(Polyhedron.cone(2, [(-1, 0), (0, -1)]))


def test_enlarge_point_by_halfspace():
    Omega = Polyhedron(2, hrep=[HalfSpace((1, 0), 0, True)])
    E = enlarge_by_cone(Polyhedron(2, points=[(2, 3)]), Omega, samples=100)
    assert E.same_set(Polyhedron(2, points=[(2, 3)], rays=[(-1, 0)]))


def test_enlarge_precondition():
    Omega = Polyhedron(2, hrep=[HalfSpace((1, 0), 0, True)])
    C = Polyhedron(2, points=[(0, 0)], rays=[(1, 0)])
    with pytest.raises(PreconditionViolated) as err:
        enlarge_by_cone(C, Omega)
    assert err.value.ray is not None


def test_pointed_cone_from_bounded():
    K = pointed_cone_from_bounded(Polyhedron(2, points=[(1, 0), (1, 1)]))
    assert is_pointed(K) and K.same_set(Polyhedron.cone(2, [(1, 0), (1, 1)]))
    diamond = Polyhedron(2, points=[(1, 0), (3, 0), (2, 1), (2, -1)])
    assert is_pointed(pointed_cone_from_bounded(diamond))
    with pytest.raises(ZeroInClosure):
        pointed_cone_from_bounded(Polyhedron(2, points=[(-1, 0), (1, 1), (1, -1)]))


# -- inverse boundary distance -----------------------------------------------------

def test_inverse_boundary_distance_examples():
    U = Polyhedron(1, hrep=[HalfSpace((1,), 0, True)])
    assert inverse_boundary_distance(U, (2,)) == pytest.approx(0.5)
    sq = Polyhedron(2, hrep=[HalfSpace((1, 0), 0, True), HalfSpace((0, 1), 0, True),
                             HalfSpace((-1, 0), -1, True), HalfSpace((0, -1), -1, True)])
    for norm in ("l1", "l2", "linf"):
        assert inverse_boundary_distance(sq, (F(1, 2), F(1, 2)), norm) == pytest.approx(2.0)
    with pytest.raises(PointOutside):
        inverse_boundary_distance(sq, (2, 0))


def test_inverse_boundary_distance_midpoint_convexity():
    U = Polyhedron(2, hrep=[HalfSpace((1, 0), 0, True), HalfSpace((1, 2), 1, True),
                            HalfSpace((-1, -1), -6, True)])
    rng = np.random.default_rng(0)
    checked = 0
    while checked < 1000:
        a, b = rng.uniform(0, 6, size=2), rng.uniform(0, 6, size=2)
        pts = [tuple(F(x).limit_denominator(1000) for x in p) for p in (a, b)]
        if not all(U.membership(p) is Membership.INSIDE for p in pts):
            continue
        m = tuple((x + y) / 2 for x, y in zip(*pts))
        d = [inverse_boundary_distance(U, p) for p in (pts[0], pts[1], m)]
        assert d[2] <= (d[0] + d[1]) / 2 + 1e-12
        checked += 1


# -- representation conversion ------------------------------------------------------

def test_cone_generators_lineality_and_rays():
    lin, rays = cone_generators([(1, 0, 0)], 3)
    assert len(lin) == 2 and len(rays) == 1


def test_minimize_hrep_drops_redundant():
    P = Polyhedron(2, hrep=[HalfSpace((1, 0), 0), HalfSpace((0, 1), 0), HalfSpace((1, 1), -5)])
    assert len(minimize_hrep(P).hrep) == 2


def test_empty_polyhedron():
    P = Polyhedron(1, hrep=[HalfSpace((1,), 1), HalfSpace((-1,), 0)])
    assert P.is_empty and not P.points


def test_json_roundtrip():
    P = Polyhedron(3, points=[(F(1, 2), 0, 1), (0, 0, 0)], rays=[(1, 1, 0)])
    Q = polyhedron_from_json(polyhedron_to_json(P))
    assert Q.same_set(P)
    H = Polyhedron(2, hrep=[HalfSpace((1, 0), F(-1, 3), True)])
    H2 = polyhedron_from_json(polyhedron_to_json(H))
    assert H2.hrep[0].strict and H2.hrep[0].offset == F(-1, 3)


# -- properties -----------------------------------------------------------------------

def test_double_dual_on_random_cones():
    for i in range(40):
        rng = trial_rng(11, i)
        rays = [tuple(int(a) for a in rng.integers(-3, 4, size=3)) for _ in range(int(rng.integers(1, 5)))]
        D = Polyhedron.cone(3, rays)
        assert dual_cone(dual_cone(D)).same_set(D)


def test_semi_equicontinuity_matches_pointedness():
    for i in range(60):
        rng = trial_rng(12, i)
        rays = [tuple(int(a) for a in rng.integers(-2, 3, size=3)) for _ in range(int(rng.integers(0, 4)))]
        C = Polyhedron(3, points=[(0, 1, 0)], rays=rays)
        assert is_semi_equicontinuous(C) == is_pointed(recession_cone(C))


rational = st.fractions(min_value=-5, max_value=5, max_denominator=6)
vec3 = st.tuples(rational, rational, rational)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10 ** 6), vec3, vec3, st.fractions(min_value=0, max_value=4, max_denominator=5))
def test_support_functional_is_sublinear(seed, v, w, t):
    C = random_semi_equicontinuous(np.random.default_rng(seed))
    s = SupportFunctional(C)
    sv, sw, svw = s(v), s(w), s(tuple(a + b for a, b in zip(v, w)))
    if sv != float("inf") and sw != float("inf"):
        assert svw <= sv + sw
    tv = s(tuple(t * a for a in v))
    if sv != float("inf"):
        assert tv == t * sv


def test_corpus_is_semi_equicontinuous():
    for i in range(50):
        assert is_semi_equicontinuous(random_semi_equicontinuous(trial_rng(0, i)))
