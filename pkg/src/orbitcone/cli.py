"""Command-line runner: ``orbitcone <command> [options]``.

Exit codes: 0 when every check passes, 1 when a check fails, 2 on malformed
input.  Reports go to standard output or ``--out``; a one-line summary goes to
standard error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
import time

from . import experiments as ex
from .exact import fmt, to_fraction


class SchemaError(ValueError):
    pass


# --------------------------------------------------------------------------
# argument parsing helpers
# --------------------------------------------------------------------------

def rational_list(text):
    """``"1/2,0.25,3"`` -> exact Fractions."""
    try:
        return [to_fraction(s.strip()) for s in text.split(",") if s.strip()]
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(f"not a list of rationals: {text!r}") from exc


def int_list(text):
    try:
        return [int(s) for s in text.split(",") if s.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"not a list of integers: {text!r}") from exc


def float_list(text):
    try:
        return [float(to_fraction(s.strip())) for s in text.split(",") if s.strip()]
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(f"not a list of numbers: {text!r}") from exc


def name_list(text):
    return [s.strip() for s in text.split(",") if s.strip()]


def blocks(text):
    """Step function ``"value:length,value:length"`` with rational lengths summing to 1."""
    out = []
    try:
        for part in text.split(","):
            a, b = part.split(":")
            out.append((to_fraction(a), to_fraction(b)))
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(f"not a block list: {text!r}") from exc
    return out


def _default_seed():
    env = os.environ.get("ORBITCONE_SEED")
    if env is None:
        return 0
    try:
        return int(env)
    except ValueError:
        raise SchemaError(f"ORBITCONE_SEED is not an integer: {env!r}")


def _load_json(path):
    try:
        with open(path) as fh:
            return json.load(fh)
    except OSError as exc:
        raise SchemaError(f"{path}: {exc.strerror}") from exc
    except json.JSONDecodeError as exc:
        raise SchemaError(f"{path}: invalid JSON ({exc})") from exc


# --------------------------------------------------------------------------
# emission
# --------------------------------------------------------------------------

def _csv_cell(v):
    if isinstance(v, bool):
        return "true" if v else "false"
    if v is None:
        return ""
    if isinstance(v, (list, dict)):
        return json.dumps(v)
    return v


def render(report: ex.Report, fmt_name: str, timing: float | None = None) -> str:
    if fmt_name == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(report.columns)
        for r in report.to_dict()["checks"]:
            w.writerow([_csv_cell(r[c]) for c in report.columns])
        return buf.getvalue()
    d = report.to_dict()
    if timing is not None:
        d["wall_time"] = timing
    return json.dumps(d, indent=2) + "\n"


def emit(text: str, out: str | None):
    if out is None:
        sys.stdout.write(text)
        return
    try:
        with open(out, "w") as fh:
            fh.write(text)
    except OSError as exc:
        raise OSError(f"cannot write report to {out}: {exc.strerror}") from exc


# --------------------------------------------------------------------------
# small utility commands (reports without Monte-Carlo)
# --------------------------------------------------------------------------

def _check_dims(W, cfg, keys):
    for k in keys:
        if len(cfg[k]) != W.dim:
            raise SchemaError(f"--{k} has {len(cfg[k])} entries, system acts on Q^{W.dim}")


def cmd_cox_reduce(cfg):
    W = _system(cfg["system"])
    _check_dims(W, cfg, ("v",))
    dom = W.to_dominant(cfg["v"])
    rep = ex.Report("cox-reduce", cfg)
    rep.notes.update({"dominant": list(dom.rep), "word": list(dom.word), "stabilizer": list(dom.stabilizer)})
    pairings = _pairings(W, dom.rep)
    rep.add("dominant", "alpha(v+) >= 0", [fmt(a) for a in pairings], all(a >= 0 for a in pairings))
    return rep


def _pairings(W, v):
    return [sum(a * b for a, b in zip(alpha, v)) for alpha in W.data.alphas]


def cmd_cox_roots(cfg):
    W = _system(cfg["system"])
    roots = W.enumerate_roots(cfg["bound"])
    rep = ex.Report("cox-roots", cfg)
    rep.notes["roots"] = [{"alpha": list(r.alpha), "coroot": list(r.coroot), "positive": r.positive,
                           "depth": r.depth} for r in roots]
    rep.notes["count"] = len(roots)
    rep.notes["positive"] = sum(r.positive for r in roots)
    return rep


def _system(ref):
    try:
        return ex.load_system(ref)
    except (OSError, KeyError, TypeError, ValueError) as exc:
        raise SchemaError(f"cannot load system {ref!r}: {exc}") from exc


def cmd_roots_classify(cfg):
    from .rootsys import build_upq
    p, q = cfg["p"], cfg["q"]
    alg, dec = build_upq(p, q)
    rep = ex.Report("roots-classify", cfg)
    rows = []
    for lam, t in zip(dec.roots, dec.types()):
        rows.append({"root": [float(v) for v in lam], "type": t.tag.name})
    rep.notes["roots"] = rows
    rep.add("jacobi", 0.0, alg.jacobi_residual(), alg.jacobi_residual() < 1e-12)
    return rep


def cmd_maj_sk(cfg):
    from .majorize import s_k
    rep = ex.Report("maj-sk", cfg)
    rep.notes["s_k"] = s_k(cfg["x"], cfg["k"])
    return rep


def cmd_maj_hull(cfg):
    from .majorize import hull_membership_finite, hull_membership_lp
    x, y = cfg["x"], cfg["y"]
    if len(x) != len(y):
        raise SchemaError("x and y must have the same length")
    fin = hull_membership_finite(x, y)
    rep = ex.Report("maj-hull", cfg)
    rep.notes["member"] = fin
    lp = hull_membership_lp(x, y)
    rep.add("partial sums vs orbit LP", lp, fin, lp == fin)
    return rep


def cmd_maj_ryff(cfg):
    from .majorize import StepFunction, ryff_majorized, ryff_rearrangement
    try:
        f = StepFunction.from_blocks(cfg["f"])
        g = StepFunction.from_blocks(cfg["g"])
    except ValueError as exc:
        raise SchemaError(str(exc)) from exc
    rep = ex.Report("maj-ryff", cfg)
    rep.notes["f_star"] = [list(b) for b in ryff_rearrangement(f).blocks()]
    m = ryff_majorized(g, f)
    rep.notes["g_majorized_by_f"] = m
    rep.add("integral of f*", f.integral(), ryff_rearrangement(f).integral(),
            f.integral() == ryff_rearrangement(f).integral())
    return rep


def _spec(path):
    from .doubleext import spec_from_json
    obj = _load_json(path)
    try:
        return spec_from_json(obj)
    except ValueError as exc:
        raise SchemaError(f"{path}: {exc}") from exc


def cmd_dext_check(cfg):
    from .doubleext import pec_check
    spec = _spec(cfg["spec"])
    rep = ex.Report("dext-check", cfg)
    rep.add("cocycle", 0, spec.cocycle_residual(), spec.cocycle_residual() <= 1e-12)
    rep.add("derivation", 0, spec.derivation_residual(), spec.derivation_residual() <= 1e-12)
    rep.add("compatibility", 0, spec.compatibility_residual(), spec.compatibility_residual() <= 1e-12)
    rep.notes["pec"] = pec_check(spec)
    return rep


UTILITIES = {
    "cox-reduce": (cmd_cox_reduce, {"system": "A2", "v": None}),
    "cox-roots": (cmd_cox_roots, {"system": "A2", "bound": 4}),
    "roots-classify": (cmd_roots_classify, {"p": 2, "q": 1}),
    "maj-sk": (cmd_maj_sk, {"x": None, "k": 1}),
    "maj-hull": (cmd_maj_hull, {"x": None, "y": None}),
    "maj-ryff": (cmd_maj_ryff, {"f": None, "g": None}),
    "dext-check": (cmd_dext_check, {"spec": None}),
}


# --------------------------------------------------------------------------
# documents (algebra builders)
# --------------------------------------------------------------------------

def doc_roots_build(cfg):
    from .rootsys import algebra_to_json, build_upq, build_un
    alg, _ = build_un(cfg["n"]) if cfg["family"] == "un" else build_upq(cfg["p"], cfg["q"])
    return algebra_to_json(alg)


def doc_dext_build(cfg):
    from .doubleext import CompatibilityViolated, NotACocycle, NotADerivation, build_double_extension
    from .rootsys import algebra_to_json
    spec = _spec(cfg["spec"])
    try:
        return algebra_to_json(build_double_extension(spec).algebra)
    except (CompatibilityViolated, NotACocycle, NotADerivation) as exc:
        raise SchemaError(f"{cfg['spec']}: {type(exc).__name__}: {exc}") from exc


# --------------------------------------------------------------------------
# parser
# --------------------------------------------------------------------------

# command path -> target name
ALIASES = {
    ("cox", "hull"): "cox-hull", ("cox", "reduce"): "cox-reduce", ("cox", "roots"): "cox-roots",
    ("cox", "oracle"): "cox-oracle", ("cox", "affine"): "affine",
    ("roots", "kostant"): "kostant", ("roots", "classify"): "roots-classify", ("roots", "build"): "roots-build",
    ("maj", "sk"): "maj-sk", ("maj", "hull"): "maj-hull", ("maj", "schurhorn"): "schurhorn",
    ("maj", "ryff"): "maj-ryff", ("maj", "equiv"): "maj-equiv",
    ("dext", "build"): "dext-build", ("dext", "check"): "dext-check", ("dext", "orbit"): "dext-orbit",
    ("dext", "pec"): "pec", ("dext", "structure"): "dext-structure", ("dext", "lorentz"): "lorentz",
}

HELP = {
    "duality": "round trip C -> s_C -> C on random semi-equicontinuous polyhedra",
    "recession": "recession cone equals the dual of the finiteness cone",
    "cox-oracle": "dominance test vs exact orbit-hull LP on finite built-ins",
    "cox-hull": "is u in the convex hull of the orbit of v",
    "affine": "affine descent and the one-sided hull check",
    "kostant": "projections of adjoint orbits of u(n) lie in the Weyl hull",
    "schurhorn": "diagonals of Haar-conjugated diagonal matrices are majorized",
    "maj-equiv": "partial-sum test vs orbit LP, two-sided vs finite criterion",
    "maxnorm": "vertices of {sum x = 0, |x|_1 <= 2}",
    "dext-structure": "Jacobi and compatibility for random double extensions",
    "lorentz": "invariance and convexity checks for Lorentzian extensions",
    "dext-orbit": "coadjoint orbit values above the closed-form bound",
    "osci": "positivity criterion for oscillator algebras",
    "pec": "positive energy condition for a spec file",
    "perm-cones": "sum functional has constant sign on proper permutation-invariant cones",
    "cox-reduce": "chamber descent of v", "cox-roots": "roots up to a word-length bound",
    "roots-classify": "root types of u(p,q)", "roots-build": "structure constants of u(n) or u(p,q)",
    "maj-sk": "sum of the k largest entries", "maj-hull": "is y in conv(S_n x)",
    "maj-ryff": "decreasing rearrangement and majorization of step functions",
    "dext-build": "structure constants of a double extension", "dext-check": "validate a spec file",
}


def _add_options(p, target):
    p.add_argument("--seed", type=int, default=None, help="64-bit seed (default: $ORBITCONE_SEED or 0)")
    p.add_argument("--jobs", type=int, default=None, help="worker processes")
    p.add_argument("--format", choices=["json", "csv"], default="json")
    p.add_argument("--out", default=None, help="output file (default: stdout)")
    p.add_argument("--config", default=None, help="JSON config; flags override it")
    p.add_argument("--timing", action="store_true", help="include wall time in the JSON report")
    a = p.add_argument
    if target in ("duality", "recession"):
        a("--cases", type=int)
    elif target == "cox-oracle":
        a("--systems", type=name_list)
        a("--pairs", type=int)
    elif target in ("cox-hull", "cox-reduce", "cox-roots"):
        a("--system", help="built-in name or ReflectionData JSON file")
        a("--v", type=rational_list)
        if target == "cox-hull":
            a("--u", type=rational_list)
        if target == "cox-roots":
            a("--bound", type=int)
    elif target == "affine":
        a("--system")
        a("--cases", type=int)
        a("--samples", type=int)
        a("--depth", type=int)
    elif target == "kostant":
        a("--n", type=int_list)
        a("--trials", type=int)
        a("--tol", type=float)
    elif target == "schurhorn":
        a("--n", type=int_list)
        a("--trials", type=int)
        a("--tol", type=float)
    elif target == "maj-equiv":
        a("--pairs", type=int)
        a("--max-n", dest="max_n", type=int)
    elif target == "maxnorm":
        a("--n", type=int_list)
    elif target == "dext-structure":
        a("--specs", type=int)
    elif target == "lorentz":
        a("--trials", type=int)
    elif target == "dext-orbit":
        a("--lambdas", type=int)
        a("--levels", type=float_list)
        a("--trials", type=int)
    elif target in ("pec", "dext-check", "dext-build"):
        a("--spec", help="DoubleExtensionSpec JSON file")
    elif target == "perm-cones":
        a("--cones", type=int)
        a("--n", type=int)
    elif target == "roots-classify":
        a("--p", type=int)
        a("--q", type=int)
    elif target == "roots-build":
        a("family", choices=["un", "upq"])
        a("dims", type=int, nargs="+")
    elif target == "maj-sk":
        a("--x", type=rational_list)
        a("--k", type=int)
    elif target == "maj-hull":
        a("--x", type=rational_list)
        a("--y", type=rational_list)
    elif target == "maj-ryff":
        a("--f", type=blocks, help="blocks value:length,... of f")
        a("--g", type=blocks, help="blocks value:length,... of g")


OPTION_KEYS = {"seed", "jobs", "format", "out", "config", "timing", "target", "family", "dims"}


def build_parser():
    parser = argparse.ArgumentParser(prog="orbitcone", description="Convexity experiments for orbits and cones.")
    sub = parser.add_subparsers(dest="command", required=True)
    groups = {}
    for (grp, name), target in ALIASES.items():
        groups.setdefault(grp, []).append((name, target))
    for target in ex.EXPERIMENTS:
        p = sub.add_parser(target, help=HELP[target])
        _add_options(p, target)
        p.set_defaults(target=target)
    for grp, items in groups.items():
        g = sub.add_parser(grp, help=f"{grp} commands")
        gs = g.add_subparsers(dest="subcommand", required=True)
        for name, target in items:
            p = gs.add_parser(name, help=HELP[target])
            _add_options(p, target)
            p.set_defaults(target=target)
    return parser


def _config(args, defaults):
    cfg = {"seed": _default_seed(), "jobs": 1}
    cfg.update(defaults)
    if args.config:
        extra = _load_json(args.config)
        if not isinstance(extra, dict):
            raise SchemaError(f"{args.config}: config must be a JSON object")
        cfg.update(extra)
    for k, v in vars(args).items():
        if k in ("command", "subcommand") or k in OPTION_KEYS - {"seed", "jobs"}:
            continue
        if v is not None:
            cfg[k] = v
    for k in ("seed", "jobs"):
        if getattr(args, k) is not None:
            cfg[k] = getattr(args, k)
    return cfg


REQUIRED = {"cox-hull": ("v", "u"), "cox-reduce": ("v",), "maj-sk": ("x",), "maj-hull": ("x", "y"),
            "maj-ryff": ("f", "g"), "pec": ("spec",), "dext-check": ("spec",), "dext-build": ("spec",)}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    target = args.target
    try:
        if target == "roots-build":
            cfg = {"family": args.family}
            if args.family == "un":
                if len(args.dims) != 1:
                    raise SchemaError("roots build un takes one dimension")
                cfg["n"] = args.dims[0]
            else:
                if len(args.dims) != 2:
                    raise SchemaError("roots build upq takes p and q")
                cfg["p"], cfg["q"] = args.dims
            emit(json.dumps(doc_roots_build(cfg), indent=2) + "\n", args.out)
            return 0
        if target == "dext-build":
            cfg = _config(args, {"spec": None})
            _require(cfg, target)
            emit(json.dumps(doc_dext_build(cfg), indent=2) + "\n", args.out)
            return 0
        if target in UTILITIES:
            fn, defaults = UTILITIES[target]
            cfg = _config(args, defaults)
            _require(cfg, target)
        else:
            fn = ex.EXPERIMENTS[target]
            cfg = _config(args, ex.DEFAULTS[target])
            _require(cfg, target)
            if target == "pec":
                _spec(cfg["spec"])
            if target == "cox-hull":
                _check_dims(_system(cfg["system"]), cfg, ("v", "u"))
        start = time.perf_counter()
        report = fn(cfg)
        wall = time.perf_counter() - start
    except SchemaError as exc:
        print(f"orbitcone: {exc}", file=sys.stderr)
        return 2
    emit(render(report, args.format, wall if args.timing else None), args.out)
    print(f"orbitcone {target}: {len(report.checks)} checks, {report.failed} failed, {wall:.2f} s",
          file=sys.stderr)
    return 0 if report.ok else 1


def _require(cfg, target):
    for k in REQUIRED.get(target, ()):
        if cfg.get(k) is None:
            raise SchemaError(f"{target}: missing --{k}")


if __name__ == "__main__":
    sys.exit(main())
