import json
from fractions import Fraction as F

import numpy as np
import pytest
from scipy.linalg import expm

from orbitcone.doubleext import (
    CompatibilityViolated, DoubleExtensionSpec, LorentzianData, NonpositiveZstar, NotADerivation,
    NotInSp, NotInW, NotSymplectic, abelian, act_form_residual, adjoint_action, build_double_extension,
    chi_and_hessian, coadjoint_line, coadjoint_lower_bound, d_flow, group_matrix, heisenberg,
    lorentz_cone_membership, oscillator, oscillator_criterion, oscillator_exp_closed_form, pec_check,
    random_compatible_spec, sample_orbit_values, small_bases, spec_from_json, spec_to_json,
    standard_oscillator,
)
from orbitcone.majorize import trial_rng

OMEGA = [[0, 1], [-1, 0]]


def lorentz():
    return LorentzianData(standard_oscillator(), np.eye(2))


def unit(i, n=4):
    e = np.zeros(n)
    e[i] = 1.0
    return e


C, P, Q, D = (unit(i) for i in range(4))


# -- construction ---------------------------------------------------------------

def test_oscillator_bracket_table():
    osc = standard_oscillator()
    br = lambda u, v: osc.algebra.bracket(u, v).astype(float)
    assert np.array_equal(br(P, Q), C)
    assert np.array_equal(br(D, P), -Q)
    assert np.array_equal(br(D, Q), P)
    for x in (P, Q, D):
        assert not np.any(br(C, x))
    assert osc.algebra.jacobi_residual() == 0


def test_formula_bracket_matches_structure_constants():
    osc = standard_oscillator()
    rng = np.random.default_rng(0)
    for _ in range(20):
        u, v = rng.standard_normal(4), rng.standard_normal(4)
        assert np.allclose(osc.formula_bracket(u, v), osc.algebra.bracket(u, v).astype(float), atol=1e-12)


def test_trivial_data_gives_abelian_plus_two():
    spec = DoubleExtensionSpec(abelian(2), np.zeros((2, 2), dtype=int), np.zeros((2, 2), dtype=int), [0, 0])
    alg = build_double_extension(spec).algebra
    assert alg.dim == 4 and all(x == 0 for x in alg.c.flat)


def test_incompatible_data_rejected():
    spec = DoubleExtensionSpec(abelian(2), OMEGA, [[1, 0], [0, 1]], [0, 0])
    with pytest.raises(CompatibilityViolated):
        build_double_extension(spec)
    # without validation the bracket breaks Jacobi
    assert build_double_extension(spec, check=False).algebra.jacobi_residual() > 0


def test_non_derivation_rejected():
    aff1 = small_bases()["aff1"]
    spec = DoubleExtensionSpec(aff1, [[0, 0], [0, 0]], [[1, 0], [0, 0]], [0, 0])
    with pytest.raises(NotADerivation):
        spec.validate()


def test_oscillator_input_errors():
    with pytest.raises(NotSymplectic):
        oscillator(2, [[0, 1], [1, 0]], OMEGA)
    with pytest.raises(NotSymplectic):
        oscillator(2, [[0, 0], [0, 0]], OMEGA)
    with pytest.raises(NotInSp):
        oscillator(2, OMEGA, [[1, 0], [0, 1]])


def test_random_compatible_specs_are_lie_algebras():
    for i in range(12):
        rng = trial_rng(40, i)
        bases = small_bases()
        name = sorted(bases)[i % len(bases)]
        spec = random_compatible_spec(bases[name], rng)
        spec.validate()
        dext = build_double_extension(spec)
        assert dext.algebra.jacobi_residual() == 0


# -- positivity criteria ------------------------------------------------------------

def test_criterion_standard_orientation():
    res = oscillator_criterion(standard_oscillator())
    assert res.satisfied and res.orientation == "omega(Dx,y)"
    assert np.allclose(res.q, np.eye(2)) and np.allclose(res.kappa, np.eye(2))
    assert res.identity_residual < 1e-12


def test_criterion_opposite_orientation():
    osc = oscillator(2, OMEGA, [[0, -1], [1, 0]])
    res = oscillator_criterion(osc)
    assert res.satisfied and res.orientation == "omega(x,Dy)"
    assert np.allclose(res.D_lorentz, [[0, 1], [-1, 0]])
    assert np.allclose(res.kappa, np.eye(2))


def test_criterion_scaled_frequencies():
    # omega = J (+) J, D = J (+) 2J: kappa = diag(1, 1, 1/2, 1/2)
    J = np.array(OMEGA)
    W = np.block([[J, np.zeros((2, 2))], [np.zeros((2, 2)), J]])
    Dm = np.block([[J, np.zeros((2, 2))], [np.zeros((2, 2)), 2 * J]])
    res = oscillator_criterion(oscillator(4, W.tolist(), Dm.tolist()))
    assert res.satisfied
    assert np.allclose(res.kappa, np.diag([1, 1, 0.5, 0.5]))


def test_criterion_hyperbolic_fails():
    res = oscillator_criterion(oscillator(2, OMEGA, [[1, 0], [0, -1]]))
    assert not res.satisfied
    w = res.witness
    assert w @ res.q @ w <= 0


def test_pec():
    assert pec_check(standard_oscillator().spec)["pass"]
    bad = pec_check(oscillator(2, OMEGA, [[0, -1], [1, 0]]).spec)
    assert not bad["pass"] and bad["psd"] is False and bad["witness"] is not None
    spec = DoubleExtensionSpec(abelian(2), OMEGA, OMEGA, [1, 0])
    res = pec_check(spec)
    assert not res["pass"] and res["reasons"] == ["delta"]


# -- Lorentzian cone ------------------------------------------------------------------

def test_beta_signature_and_dual():
    L = lorentz()
    assert L.signature() == (1, 3)
    assert np.allclose(L.beta_dual_matrix() @ L.beta_matrix, np.eye(4))
    assert L.beta(C + D, C + D) == 2


def test_lorentzian_validation():
    with pytest.raises(ValueError):
        LorentzianData(standard_oscillator(), -np.eye(2))
    with pytest.raises(ValueError):
        LorentzianData(standard_oscillator(), 2 * np.eye(2))


@pytest.mark.parametrize("v,expected", [
    (D, "Outside"), (C + D, "InsideW"), (-(C + D), "Outside"),
    (np.array([0.5, 1, 0, 1]), "Outside"), (np.array([0.6, 1, 0, 1]), "InsideW"),
])
def test_cone_membership(v, expected):
    assert lorentz_cone_membership(lorentz(), v) == expected


def test_chi_examples():
    L = lorentz()
    chi, hess = chi_and_hessian(L, C + D, C + D)
    assert chi == pytest.approx(0.5) and hess == pytest.approx(3.0)
    chi, hess = chi_and_hessian(L, C + D, P)
    assert hess == pytest.approx(-2 * L.beta(P, P) / 4)
    with pytest.raises(NotInW):
        chi_and_hessian(L, D, P)


def test_chi_hessian_matches_finite_difference():
    L = lorentz()
    rng = np.random.default_rng(2)
    h = 1e-4
    for _ in range(50):
        v = rng.uniform(1, 2) * (C + D + 0.3 * rng.standard_normal(4))
        if lorentz_cone_membership(L, v) != "InsideW" or L.beta(v, v) < 1:
            continue
        x = rng.standard_normal(4)
        x /= np.linalg.norm(x)
        chi = lambda w: 1 / L.beta(w, w)
        fd = (chi(v + h * x) - 2 * chi(v) + chi(v - h * x)) / h ** 2
        assert abs(fd - chi_and_hessian(L, v, x)[1]) < 1e-5


def test_chi_is_midpoint_convex():
    L = lorentz()
    rng = np.random.default_rng(3)
    chi = lambda w: 1 / L.beta(w, w)
    for _ in range(200):
        v = C + D + 0.5 * rng.standard_normal(4)
        w = C + D + 0.5 * rng.standard_normal(4)
        if "Outside" in (lorentz_cone_membership(L, v), lorentz_cone_membership(L, w)):
            continue
        assert chi((v + w) / 2) <= (chi(v) + chi(w)) / 2 + 1e-12


# -- group action ------------------------------------------------------------------

def test_closed_form_exponential():
    osc = standard_oscillator()
    rng = np.random.default_rng(4)
    for _ in range(10):
        y = rng.standard_normal(2)
        assert np.allclose(oscillator_exp_closed_form(osc, y), group_matrix(osc, [y]), atol=1e-12)
    with pytest.raises(ValueError):
        oscillator_exp_closed_form(build_double_extension(random_compatible_spec(
            small_bases()["aff1"], trial_rng(0, 0))), [1, 0])


def test_group_preserves_beta_and_level():
    L = lorentz()
    osc = L.dext
    B = L.beta_matrix
    rng = np.random.default_rng(5)
    for _ in range(10):
        M = group_matrix(osc, [rng.standard_normal(2) for _ in range(3)])
        assert np.allclose(M.T @ B @ M, B, atol=1e-10)
        v = rng.standard_normal(4)
        assert (M @ v)[-1] == pytest.approx(v[-1], abs=1e-12)
        assert act_form_residual(L, M) < 1e-10
    F_ = d_flow(osc, 0.7)
    assert np.allclose(F_.T @ B @ F_, B, atol=1e-12)


def test_adjoint_orbit_of_d_is_paraboloid():
    L = lorentz()
    out = adjoint_action(L.dext, [[1.0, -2.0], [0.5, 0.5]], D, lorentz=L)
    gamma = out[1:-1]
    assert out[0] == pytest.approx(gamma @ gamma / 2) and out[-1] == pytest.approx(1)


def test_coadjoint_lower_bound_is_sharp():
    L = lorentz()
    lam = np.array([1.0, 1.0, 0.0, 0.0])
    bound = coadjoint_lower_bound(L, lam, 1.0)
    assert bound == pytest.approx(-0.5)
    vals = sample_orbit_values(L, lam, 1.0, 300, seed=0)
    assert min(vals) >= bound - 1e-9
    # gamma(y) is linear in y for a single exponential; hit gamma = -alpha
    osc = L.dext
    G = np.column_stack([(group_matrix(osc, [e]) @ D)[1:-1] for e in np.eye(2)])
    y = np.linalg.solve(G, -lam[1:-1])
    assert lam @ (group_matrix(osc, [y]) @ D) == pytest.approx(-0.5, abs=1e-12)
    with pytest.raises(NonpositiveZstar):
        coadjoint_lower_bound(L, [0, 1, 0, 0], 1.0)


# -- nilpotent shadow ------------------------------------------------------------------

def test_heisenberg_coadjoint_line():
    h = heisenberg()
    direction = coadjoint_line(h, [1, 0, 0], [0, 1, 0])
    assert np.allclose(direction, [0, 0, 1])
    assert coadjoint_line(h, [0, 1, 0], [0, 1, 0]) is None
    with pytest.raises(ValueError):
        coadjoint_line(standard_oscillator().algebra, [1, 0, 0, 0], D)


# -- JSON --------------------------------------------------------------------------------

def test_spec_json_roundtrip():
    spec = random_compatible_spec(small_bases()["heis_plus_r"], trial_rng(3, 1))
    back = spec_from_json(json.loads(json.dumps(spec_to_json(spec))))
    assert (back.omega == spec.omega).all() and (back.D == spec.D).all()
    assert (back.delta == spec.delta).all()
    assert isinstance(back.omega[0, 0], F)
    with pytest.raises(ValueError):
        spec_from_json({"omega": []})
