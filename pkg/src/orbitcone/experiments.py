"""Named experiments producing deterministic reports.

Every experiment takes a plain config dict (already merged with defaults)
and returns a :class:`Report`.  Randomness comes only from
``trial_rng(seed, i)`` streams, so reports depend on ``(config, seed)`` alone
and serial and parallel runs agree.
"""

from __future__ import annotations

import itertools
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .exact import fmt, hull_contains, qvec


CHECK_COLUMNS = ("name", "expected", "observed", "pass")


def jsonable(x):
    if isinstance(x, Fraction):
        return fmt(x)
    if isinstance(x, (bool, np.bool_)):
        return bool(x)
    if isinstance(x, (int, np.integer)):
        return int(x)
    if isinstance(x, (float, np.floating)):
        x = float(x)
        return x if math.isfinite(x) else str(x)
    if isinstance(x, dict):
        return {str(k): jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple, np.ndarray)):
        return [jsonable(v) for v in x]
    if x is None or isinstance(x, str):
        return x
    return str(x)


@dataclass
class Report:
    """Per-check records plus a config echo.

    ``columns`` fixes the record fields and their order; ``pass_column`` names
    the boolean field counted in the summary.
    """
    experiment: str
    config: dict
    columns: tuple = CHECK_COLUMNS
    pass_column: str = "pass"
    checks: list = field(default_factory=list)
    notes: dict = field(default_factory=dict)

    def add(self, name, expected, observed, ok):
        self.checks.append({"name": name, "expected": expected, "observed": observed, "pass": bool(ok)})

    @property
    def failed(self):
        return sum(not r[self.pass_column] for r in self.checks)

    @property
    def ok(self):
        return self.failed == 0

    def to_dict(self):
        # worker count is an execution detail, not part of the result
        config = {k: v for k, v in self.config.items() if k != "jobs"}
        return {"experiment": self.experiment,
                "config": jsonable(config),
                "summary": {"checks": len(self.checks), "passed": len(self.checks) - self.failed,
                            "failed": self.failed},
                "notes": jsonable(self.notes),
                "checks": [{c: jsonable(r[c]) for c in self.columns} for r in self.checks]}


def pmap(fn, items, jobs=1):
    """Ordered map, in a process pool when ``jobs > 1``."""
    items = list(items)
    if jobs <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ProcessPoolExecutor(max_workers=jobs) as ex:
        return list(ex.map(fn, items, chunksize=max(1, len(items) // (4 * jobs))))


def _rng(seed, i):
    from .majorize import trial_rng
    return trial_rng(seed, i)


# --------------------------------------------------------------------------
# convex duality
# --------------------------------------------------------------------------

def _duality_case(args):
    from .convexcore import duality_roundtrip, is_semi_equicontinuous, random_semi_equicontinuous
    seed, i = args
    C = random_semi_equicontinuous(_rng(seed, i))
    if not is_semi_equicontinuous(C):
        return False
    return duality_roundtrip(C).same_set(C)


def duality(cfg) -> Report:
    rep = Report("duality", cfg)
    res = pmap(_duality_case, [(cfg["seed"], i) for i in range(cfg["cases"])], cfg["jobs"])
    for i, ok in enumerate(res):
        rep.add(f"case {i}", "equal", "equal" if ok else "differs", ok)
    return rep


def _recession_case(args):
    from .convexcore import dual_cone, finiteness_cone, random_semi_equicontinuous, recession_cone
    seed, i = args
    C = random_semi_equicontinuous(_rng(seed, i))
    return recession_cone(C).same_set(dual_cone(finiteness_cone(C)))


def recession(cfg) -> Report:
    rep = Report("recession", cfg)
    res = pmap(_recession_case, [(cfg["seed"], i) for i in range(cfg["cases"])], cfg["jobs"])
    for i, ok in enumerate(res):
        rep.add(f"case {i}", "equal", "equal" if ok else "differs", ok)
    return rep


# --------------------------------------------------------------------------
# Coxeter systems
# --------------------------------------------------------------------------

def _rand_q(rng, lo=-5, hi=5, den=4):
    return Fraction(int(rng.integers(lo * den, hi * den + 1)), den)


def random_hull_pair(W, rng):
    """Random rational ``(v, u)``; half the ``u`` are convex combinations of orbit points."""
    v = [_rand_q(rng) for _ in range(W.dim)]
    if rng.random() < 0.5:
        u = [_rand_q(rng) for _ in range(W.dim)]
    else:
        orb = W.orbit(v)
        k = int(rng.integers(1, min(4, len(orb)) + 1))
        idx = rng.choice(len(orb), size=k, replace=False)
        w = [Fraction(int(rng.integers(1, 10))) for _ in idx]
        s = sum(w)
        u = [sum(wi * orb[j][c] for wi, j in zip(w, idx)) / s for c in range(W.dim)]
        if rng.random() < 0.5:
            c = int(rng.integers(W.dim))
            u[c] += Fraction(int(rng.integers(-2, 3)), 8)
    return v, u


def _cox_case(args):
    from .coxeter import builtin
    name, seed, i = args
    W = builtin(name)
    v, u = random_hull_pair(W, _rng(seed, i))
    dom = W.orbit_hull_membership(v, u)
    lp = hull_contains(W.orbit(v), u)
    return dom, lp


def cox_oracle(cfg) -> Report:
    rep = Report("cox-oracle", cfg)
    tasks = [(name, cfg["seed"], 1000 * s + i) for s, name in enumerate(cfg["systems"])
             for i in range(cfg["pairs"])]
    for (name, _, i), (dom, lp) in zip(tasks, pmap(_cox_case, tasks, cfg["jobs"])):
        rep.add(f"{name} pair {i % 1000}", lp, dom, dom == lp)
    return rep


def cox_hull(cfg) -> Report:
    W = load_system(cfg["system"])
    v, u = qvec(cfg["v"]), qvec(cfg["u"])
    dom = W.orbit_hull_membership(v, u)
    rep = Report("cox-hull", cfg)
    rep.notes["member"] = dom
    if cfg.get("verify", True) and W.level is None:
        lp = hull_contains(W.orbit(v), u)
        rep.add("dominance vs orbit LP", lp, dom, lp == dom)
    return rep


def _builtin_names():
    from .coxeter import BUILTIN_NAMES
    return BUILTIN_NAMES


def load_system(ref):
    import json
    from .coxeter import LinearCoxeterSystem, builtin, reflection_data_from_json
    if ref in _builtin_names():
        return builtin(ref)
    with open(ref) as fh:
        return LinearCoxeterSystem(reflection_data_from_json(json.load(fh)))


def affine(cfg) -> Report:
    """Positive-level descent and the one-sided check ``v+ - u+ in C_S``."""
    from .coxeter import builtin
    W = builtin(cfg["system"])
    rep = Report("affine", cfg)
    depth = cfg["depth"]
    for i in range(cfg["cases"]):
        rng = _rng(cfg["seed"], i)
        while True:
            v = [_rand_q(rng, -3, 3) for _ in range(W.dim)]
            if sum(a * b for a, b in zip(W.level, v)) > 0:
                break
        try:
            dv = W.to_dominant(v)
        except Exception as exc:  # CapExceeded
            rep.add(f"v{i} descent", "terminates", type(exc).__name__, False)
            continue
        rep.add(f"v{i} descent", "terminates", f"{len(dv.word)} steps", True)
        orb = list(W.orbit_with_words(v, depth=depth).keys())
        for j in range(cfg["samples"]):
            k = int(rng.integers(1, min(6, len(orb)) + 1))
            idx = rng.choice(len(orb), size=k, replace=False)
            w = [Fraction(int(rng.integers(1, 10))) for _ in idx]
            s = sum(w)
            u = [sum(wi * orb[m][c] for wi, m in zip(w, idx)) / s for c in range(W.dim)]
            du = W.to_dominant(u)
            ok = W.in_coroot_cone([a - b for a, b in zip(dv.rep, du.rep)])
            rep.add(f"v{i} u{j}", True, ok, ok)
    return rep


# --------------------------------------------------------------------------
# compact Lie algebras
# --------------------------------------------------------------------------

def _kostant_one(args):
    from .rootsys import build_un, kostant_sample
    n, trials, seed, tol, x = args
    _, dec = build_un(n)
    return kostant_sample(dec, x, trials, seed, tol=tol)


KOSTANT_X = {2: (3, 1), 3: (2, 1, 0)}


def kostant_x(n):
    """Cartan element ``i diag(x)`` used for ``u(n)``: distinct entries."""
    return [Fraction(a) for a in KOSTANT_X.get(n, tuple(range(n - 1, -1, -1)))]


def kostant(cfg) -> Report:
    rep = Report("kostant", cfg)
    ns = cfg["n"]
    args = [(n, cfg["trials"], cfg["seed"], cfg["tol"], kostant_x(n)) for n in ns]
    for n, a, res in zip(ns, args, pmap(_kostant_one, args, cfg["jobs"])):
        rep.notes[f"u({n}) x"] = a[4]
        for r in res["records"]:
            rep.add(f"u({n}) trial {r['trial']}", f"slack <= {cfg['tol']}", r["slack"], r["inside"])
        for c in res["vertex_coverage"]:
            rep.add(f"u({n}) vertex {','.join(c['vertex'])}", f"distance <= {cfg['cover_tol']}",
                    c["min_distance"], c["min_distance"] <= cfg["cover_tol"])
    return rep


# --------------------------------------------------------------------------
# majorization
# --------------------------------------------------------------------------

SCHUR_HORN_COLUMNS = ("trial", "max_slack", "inside")


def schur_horn_lambda(n, seed):
    rng = _rng(seed, 10 ** 6 + n)
    return sorted(float(v) for v in rng.standard_normal(n))


def _sh_trial(args):
    from .majorize import schur_horn_trial
    lam, seed, i, tol = args
    r = schur_horn_trial(lam, seed, i, tol)
    return r.trial, r.max_slack, r.inside


def schurhorn(cfg) -> Report:
    ns = cfg["n"]
    multi = len(ns) > 1
    cols = (("n",) if multi else ()) + SCHUR_HORN_COLUMNS
    rep = Report("schurhorn", cfg, columns=cols, pass_column="inside")
    for n in ns:
        lam = schur_horn_lambda(n, cfg["seed"])
        rep.notes[f"lambda n={n}"] = lam
        args = [(lam, cfg["seed"], i, cfg["tol"]) for i in range(cfg["trials"])]
        for t, slack, inside in pmap(_sh_trial, args, cfg["jobs"]):
            rec = {"trial": t, "max_slack": slack, "inside": bool(inside)}
            if multi:
                rec["n"] = n
            rep.checks.append(rec)
    return rep


def random_majorization_pair(rng, max_n):
    """Integer ``x`` and rational ``y``: inside the permutohedron, near it, or with a different sum."""
    from .majorize import permutation_orbit
    n = int(rng.integers(1, max_n + 1))
    x = [Fraction(int(a)) for a in rng.integers(-5, 6, size=n)]
    mode = rng.random()
    if mode < 0.4:
        orb = permutation_orbit(x)
        k = int(rng.integers(1, 4))
        idx = rng.choice(len(orb), size=min(k, len(orb)), replace=False)
        w = [Fraction(int(rng.integers(1, 6))) for _ in idx]
        s = sum(w)
        y = [sum(wi * orb[j][c] for wi, j in zip(w, idx)) / s for c in range(n)]
    else:
        y = [Fraction(int(a)) for a in rng.integers(-5, 6, size=n)]
        if mode < 0.9:
            y[-1] += sum(x) - sum(y)
    return x, y


def _maj_case(args):
    from .majorize import hull_membership_finite, hull_membership_lp, hull_membership_twosided
    seed, i, max_n = args
    x, y = random_majorization_pair(_rng(seed, i), max_n)
    return hull_membership_finite(x, y), hull_membership_lp(x, y), hull_membership_twosided(x, y)


def maj_equiv(cfg) -> Report:
    rep = Report("maj-equiv", cfg)
    args = [(cfg["seed"], i, cfg["max_n"]) for i in range(cfg["pairs"])]
    inside = 0
    for i, (fin, lp, two) in enumerate(pmap(_maj_case, args, cfg["jobs"])):
        inside += fin
        rep.add(f"pair {i} hlp-vs-lp", lp, fin, fin == lp)
        rep.add(f"pair {i} twosided-vs-hlp", fin, two, fin == two)
    rep.notes["inside"] = inside
    return rep


def maxnorm(cfg) -> Report:
    from .majorize import l1_sumzero_polytope
    rep = Report("maxnorm", cfg)
    for n in cfg["n"]:
        P = l1_sumzero_polytope(n)
        got = sorted(tuple(p) for p in P.points)
        want = sorted(tuple(Fraction(int(k == i) - int(k == j)) for k in range(n))
                      for i in range(n) for j in range(n) if i != j)
        rep.add(f"n={n}", len(want), len(got), got == want and not P.rays)
    return rep


def perm_cones(cfg) -> Report:
    from .majorize import permutation_cone_check, random_proper_permutation_cone
    rep = Report("perm-cones", cfg)
    n = cfg["n"]
    for i in range(cfg["cones"]):
        vecs = random_proper_permutation_cone(n, _rng(cfg["seed"], i))
        r = permutation_cone_check(vecs, n, find_witness=False)
        rep.add(f"cone {i} {vecs}", "+1 or -1", r["chi_sign"], r["dichotomy"])
    return rep


# --------------------------------------------------------------------------
# double extensions
# --------------------------------------------------------------------------

def dext_structure(cfg) -> Report:
    """Jacobi residuals and compatibility enforcement for random specs."""
    from .doubleext import (CompatibilityViolated, DoubleExtensionSpec, build_double_extension,
                            random_compatible_spec, small_bases, standard_oscillator)
    rep = Report("dext-structure", cfg)
    osc = standard_oscillator()
    rep.add("oscillator jacobi", 0, osc.algebra.jacobi_residual(), osc.algebra.jacobi_residual() < 1e-12)
    bases = small_bases()
    names = sorted(bases)
    for i in range(cfg["specs"]):
        rng = _rng(cfg["seed"], i)
        name = names[i % len(names)]
        base = bases[name]
        spec = random_compatible_spec(base, rng)
        ext = build_double_extension(spec)
        res = ext.algebra.jacobi_residual()
        mism = _bracket_mismatch(ext)
        rep.add(f"spec {i} ({name}) jacobi", 0, res, res < 1e-12 and mism == 0)
        # perturb delta or omega; compatibility must be enforced
        n = base.dim
        bad_delta = spec.delta + np.array([Fraction(int(a)) for a in rng.integers(-2, 3, size=n)], dtype=object)
        A = np.array([[Fraction(int(a)) for a in row] for row in rng.integers(-2, 3, size=(n, n))], dtype=object)
        bad_omega = spec.omega + (A - A.T)
        bad = DoubleExtensionSpec(base, bad_omega, spec.D, bad_delta)
        if bad.cocycle_residual() != 0:
            bad = DoubleExtensionSpec(base, spec.omega, spec.D, bad_delta)
        jac = build_double_extension(bad, check=False).algebra.jacobi_residual()
        try:
            build_double_extension(bad)
            observed = "accepted"
        except CompatibilityViolated:
            observed = "rejected"
        expected = "rejected" if jac != 0 else "accepted"
        rep.add(f"spec {i} ({name}) perturbed", expected, observed, expected == observed)
    return rep


def _bracket_mismatch(ext):
    N = ext.algebra.dim
    worst = 0.0
    for i in range(N):
        for j in range(N):
            ei, ej = np.eye(N)[i], np.eye(N)[j]
            a = ext.algebra.bracket(ei, ej).astype(float)
            worst = max(worst, float(np.max(np.abs(a - ext.formula_bracket(ei, ej)))))
    return worst


def lorentzian_examples():
    """Standard oscillator and a 6-dim oscillator with frequencies 1 and 2."""
    from .doubleext import LorentzianData, oscillator, standard_oscillator
    osc = standard_oscillator()
    J = np.array([[0, 1], [-1, 0]])
    D = np.zeros((4, 4), dtype=int)
    D[:2, :2] = J
    D[2:, 2:] = 2 * J
    kappa = np.diag([1, 1, 1, 1])
    osc2 = oscillator(4, kappa @ D, D)
    return {"oscillator4": LorentzianData(osc, np.eye(2)), "oscillator6": LorentzianData(osc2, kappa)}


def _random_in_w(L, rng, n, r_range=(0.5, 2.0)):
    """Point of ``W`` with ``t`` in ``[1/2, 2]`` and ``beta(v, v)`` in ``r_range``."""
    t = rng.uniform(0.5, 2.0)
    x = rng.standard_normal(n) * 0.5
    r = rng.uniform(*r_range)
    z = (x @ L.kappa @ x + r) / (2 * t)
    return np.concatenate([[z], x, [t]])


def _near_c_plus_d(L, rng, N):
    """``s (c + d + 0.3 noise)`` in ``W``; stays away from the boundary, where the fourth derivative of chi blows up."""
    from .doubleext import lorentz_cone_membership
    base = np.zeros(N)
    base[0] = base[-1] = 1.0
    while True:
        v = rng.uniform(1.0, 2.0) * (base + 0.3 * rng.standard_normal(N))
        if lorentz_cone_membership(L, v) == "InsideW" and L.beta(v, v) >= 1.0:
            return v


def lorentz(cfg) -> Report:
    from .doubleext import act_form_residual, chi_and_hessian, d_flow, group_matrix
    rep = Report("lorentz", cfg)
    seed, trials = cfg["seed"], cfg["trials"]
    for ename, L in lorentzian_examples().items():
        dext = L.dext
        n = dext.n
        N = n + 2
        inv = act = parab = tcomp = 0.0
        for i in range(trials):
            rng = _rng(seed, i)
            M = group_matrix(dext, [rng.standard_normal(n) for _ in range(int(rng.integers(1, 4)))])
            F = d_flow(dext, rng.uniform(-3, 3))
            u, w = rng.standard_normal(N), rng.standard_normal(N)
            for G in (M, F @ M):
                inv = max(inv, abs(L.beta(G @ u, G @ w) - L.beta(u, w)))
                tcomp = max(tcomp, abs((G @ u)[-1] - u[-1]))
            act = max(act, act_form_residual(L, M))
            parab = max(parab, act_form_residual(L, F @ M))
        rep.add(f"{ename} beta invariance", "< 1e-8", inv, inv < 1e-8)
        rep.add(f"{ename} t-component", "< 1e-8", tcomp, tcomp < 1e-8)
        rep.add(f"{ename} act-form shape", "< 1e-8", act, act < 1e-8)
        rep.add(f"{ename} d-orbit paraboloid", "< 1e-8", parab, parab < 1e-8)
        ics = 0.0
        for i in range(10 * trials):
            rng = _rng(seed + 1, i)
            v = _random_in_w(L, rng, n) * (1 if rng.random() < 0.5 else -1)
            x = rng.standard_normal(N)
            ics = max(ics, L.beta(v, v) * L.beta(x, x) - L.beta(x, v) ** 2)
        rep.add(f"{ename} inverse Cauchy-Schwarz", "<= 1e-10", ics, ics <= 1e-10)
        fd = 0.0
        h = cfg["h"]
        for i in range(trials):
            rng = _rng(seed + 2, i)
            v = _near_c_plus_d(L, rng, N)
            x = rng.standard_normal(N)
            x /= np.linalg.norm(x)
            chi, hess = chi_and_hessian(L, v, x)
            f = lambda p: 1.0 / L.beta(p, p)
            num = (f(v + h * x) - 2 * chi + f(v - h * x)) / h ** 2
            fd = max(fd, abs(num - hess))
        rep.add(f"{ename} chi Hessian vs finite differences", "< 1e-6", fd, fd < 1e-6)
        sup = 0.0
        for i in range(trials):
            rng = _rng(seed + 3, i)
            v, w = _random_in_w(L, rng, n), _random_in_w(L, rng, n)
            sup = max(sup, 1 / L.beta(v + w, v + w) - 1 / L.beta(v, v))
        rep.add(f"{ename} chi(v+w) <= chi(v)", "<= 0", sup, sup <= 1e-12)
    return rep


def random_covector(rng, n):
    zs = rng.uniform(0.2, 2.0)
    return np.concatenate([[zs], rng.standard_normal(n), [rng.standard_normal()]])


def coadjoint(cfg) -> Report:
    from .doubleext import coadjoint_lower_bound, sample_orbit_values
    rep = Report("coadjoint", cfg)
    L = lorentzian_examples()["oscillator4"]
    for j in range(cfg["lambdas"]):
        lam = random_covector(_rng(cfg["seed"] + 7, j), L.dext.n)
        for t in cfg["levels"]:
            bound = coadjoint_lower_bound(L, lam, t)
            vals = sample_orbit_values(L, lam, t, cfg["trials"], cfg["seed"] + j)
            low = min(vals)
            rep.add(f"lambda {j} level {t}", f">= {bound!r}", low, low >= bound - 1e-8)
    return rep


def osci(cfg) -> Report:
    from .doubleext import oscillator, oscillator_criterion
    rep = Report("osci", cfg)
    W = [[0, 1], [-1, 0]]
    for label, D in (("rotation", [[0, 1], [-1, 0]]), ("rotation reversed", [[0, -1], [1, 0]])):
        osc = oscillator(2, W, D)
        r = oscillator_criterion(osc)
        ok = r.satisfied
        if ok:
            Wf = np.array(W, dtype=float)
            resid = float(np.max(np.abs(Wf - r.kappa @ r.D_lorentz)))
            ok = resid <= 1e-12 and np.linalg.eigvalsh(r.kappa)[0] > 0
            rep.add(f"{label} accepted", "omega = kappa D~", resid, ok)
        else:
            rep.add(f"{label} accepted", "Satisfied", r.reason, False)
    osc = oscillator(2, W, [[1, 0], [0, -1]])
    r = oscillator_criterion(osc)
    ok = not r.satisfied and r.witness is not None
    if ok:
        q = r.q
        ok = float(r.witness @ q @ r.witness) < 0
    rep.add("hyperbolic rejected", "Failed with negative direction",
            None if r.witness is None else float(r.witness @ r.q @ r.witness), ok)
    return rep


def pec(cfg) -> Report:
    import json
    from .doubleext import build_double_extension, oscillator_criterion, pec_check, spec_from_json
    with open(cfg["spec"]) as fh:
        spec = spec_from_json(json.load(fh))
    ext = build_double_extension(spec)
    r = pec_check(spec)
    rep = Report("pec", cfg)
    rep.notes["pec"] = r
    base_abelian = not spec.base.c.size or all(v == 0 for v in spec.base.c.flat)
    if base_abelian and all(v == 0 for v in spec.delta.flat):
        crit = oscillator_criterion(ext)
        rep.notes["oscillator_criterion"] = {"satisfied": crit.satisfied, "orientation": crit.orientation}
    rep.add("positive energy", True, r["pass"], r["pass"])
    return rep


EXPERIMENTS = {
    "duality": duality,
    "recession": recession,
    "cox-oracle": cox_oracle,
    "cox-hull": cox_hull,
    "affine": affine,
    "kostant": kostant,
    "schurhorn": schurhorn,
    "maj-equiv": maj_equiv,
    "maxnorm": maxnorm,
    "dext-structure": dext_structure,
    "lorentz": lorentz,
    "dext-orbit": coadjoint,
    "osci": osci,
    "pec": pec,
    "perm-cones": perm_cones,
}

DEFAULTS = {
    "duality": {"cases": 200},
    "recession": {"cases": 200},
    "cox-oracle": {"systems": ["A2", "A3", "B2", "G2"], "pairs": 100},
    "cox-hull": {"system": "A2", "v": None, "u": None, "verify": True},
    "affine": {"system": "affine_A1_ext", "cases": 100, "samples": 5, "depth": 12},
    "kostant": {"n": [2, 3], "trials": 1000, "tol": 1e-9, "cover_tol": 1e-3},
    "schurhorn": {"n": [2, 3, 4, 5, 6], "trials": 1000, "tol": 1e-9},
    "maj-equiv": {"pairs": 1000, "max_n": 7},
    "maxnorm": {"n": [2, 3, 4, 5, 6]},
    "dext-structure": {"specs": 50},
    "lorentz": {"trials": 1000, "h": 1e-4},
    "dext-orbit": {"lambdas": 10, "levels": [1.0], "trials": 1000},
    "osci": {},
    "pec": {"spec": None},
    "perm-cones": {"cones": 50, "n": 6},
}


def run(name, **overrides) -> Report:
    cfg = {"seed": 0, "jobs": 1}
    cfg.update(DEFAULTS[name])
    cfg.update({k: v for k, v in overrides.items() if v is not None})
    return EXPERIMENTS[name](cfg)
