"""Command-line entry point: run check suites and emit JSON reports.

Exit status 0 means every check passed, 1 means at least one failed and 2
signals a configuration or parse error (diagnostic on stderr).
"""

from __future__ import annotations

import argparse
import json
import math
import re
import sys
from datetime import datetime, timezone
from pathlib import Path

import numpy as np

from . import __version__
from .causal_spaces import (
    SpacePoint,
    anti_de_sitter,
    de_sitter,
    ds_wedge_oracle,
    group_semigroup_check,
    kms_domain_contains,
    modular_flow,
    positivity_domain_contains,
    strip_grid,
    wedge_sample,
)
from .errors import WedgeLabError
from .hardy_models import (
    GENERATING_PHASE,
    HALFPLANE,
    STRIP,
    KernelCombination,
    TestFunction,
    affine_action,
    halfplane_J,
    halfplane_kernel,
    kms_report,
    membership_report,
    net_checks,
    orbit_norm_squared,
    strip_J,
    strip_kernel,
    strip_translate,
)
from .lie_core import (
    AlgebraElement,
    LieAlgebra,
    Subspace,
    bracket,
    builtin_algebra,
    cone_dual,
    cone_is_generating,
    cone_is_pointed,
    cone_make,
    cone_membership,
    grading,
    is_elliptic,
    is_euler,
    is_hyperbolic,
    spectrum,
)
from .modular import (
    compatibility_residual,
    polar_modular,
    random_standard_subspace,
    standard_from_pair,
    subspace_distance,
    symplectic_complement,
    tomita_operator,
    validate_modular_dict,
)

EXIT_OK, EXIT_FAIL, EXIT_CONFIG = 0, 1, 2


class ConfigError(Exception):
    """Invalid command-line configuration or input file."""


# ----------------------------------------------------------------------
# parsing helpers

_TERM = re.compile(r"\s*([+-])?\s*(?:(\d+(?:\.\d*)?(?:[eE][+-]?\d+)?|\.\d+)\s*\*?\s*)?([A-Za-z_]\w*)\s*")


def parse_element(algebra, text):
    """Element from a linear combination of basis names ("e-f", "0.5*e+2*f") or a coefficient list."""
    text = text.strip()
    if re.fullmatch(r"[\[\]\s\d.,eE+-]+", text) and ("," in text or "[" in text):
        vals = [float(v) for v in text.strip("[]").split(",") if v.strip()]
        if len(vals) != algebra.dim:
            raise ConfigError(f"element needs {algebra.dim} coefficients, got {len(vals)}")
        return AlgebraElement(algebra, np.array(vals))
    coeffs = np.zeros(algebra.dim)
    pos = 0
    names = list(algebra.basis_names)
    while pos < len(text):
        m = _TERM.match(text, pos)
        if not m or m.end() == pos or (pos > 0 and m.group(1) is None):
            raise ConfigError(f"cannot parse element {text!r} at position {pos}")
        sign = -1.0 if m.group(1) == "-" else 1.0
        scale = float(m.group(2)) if m.group(2) else 1.0
        name = m.group(3)
        if name not in names:
            raise ConfigError(f"unknown basis element {name!r}; known: {', '.join(names)}")
        coeffs[names.index(name)] += sign * scale
        pos = m.end()
    if pos == 0:
        raise ConfigError("empty element")
    return AlgebraElement(algebra, coeffs)


def load_algebra(args):
    if getattr(args, "algebra_file", None):
        return LieAlgebra.from_dict(_read_json(args.algebra_file))
    try:
        return builtin_algebra(args.algebra)
    except WedgeLabError as exc:
        raise ConfigError(str(exc)) from exc


def _read_json(path):
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc.strerror}") from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: malformed JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}") from exc


def _jsonable(x):
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, np.ndarray):
        return _jsonable(x.tolist())
    if isinstance(x, (np.bool_, bool)):
        return bool(x)
    if isinstance(x, (np.integer, int)):
        return int(x)
    if isinstance(x, (np.floating, float)):
        x = float(x)
        return x if math.isfinite(x) else ("inf" if x > 0 else "-inf" if x < 0 else "nan")
    if isinstance(x, (np.complexfloating, complex)):
        return [_jsonable(x.real), _jsonable(x.imag)]
    return x


def check(name, passed, **data):
    return {"name": name, "pass": bool(passed), **data}


# ----------------------------------------------------------------------
# subcommands; each returns (config additions, result fields, checks)


def cmd_algebra_check(args):
    alg = load_algebra(args)
    res = alg.check()
    checks = [check(k, v <= args.tolerance, residual=v) for k, v in res.items()]
    return {"algebra": alg.name, "tolerance": args.tolerance}, {"dim": alg.dim}, checks


def cmd_euler_check(args):
    alg = load_algebra(args)
    x = parse_element(alg, args.element)
    sp = spectrum(x)
    ok = is_euler(x)
    result = {"is_euler": ok, "is_elliptic": is_elliptic(x), "is_hyperbolic": is_hyperbolic(x),
              "semisimple": sp.semisimple,
              "spectrum": sorted([[float(v.real), float(v.imag)] for v in sp.eigenvalues])}
    return ({"algebra": alg.name, "element": args.element},
            result, [check("is_euler", ok)])


def cmd_grading(args):
    alg = load_algebra(args)
    x = parse_element(alg, args.element)
    if not is_euler(x):
        return ({"algebra": alg.name, "element": args.element}, {"is_euler": False},
                [check("is_euler", False)])
    g = dict(zip((1, 0, -1), grading(x)))
    worst = 0.0
    for i in (1, 0, -1):
        for j in (1, 0, -1):
            target = g.get(i + j)
            for a in g[i].basis_elements():
                for b in g[j].basis_elements():
                    c = bracket(a, b)
                    r = c.norm() if target is None else target.residual(c.coeffs)
                    worst = max(worst, r)
    dims = {str(k): g[k].dim for k in (1, 0, -1)}
    checks = [check("is_euler", True),
              check("dimensions_sum", sum(dims.values()) == alg.dim, dims=dims),
              check("grading_brackets", worst <= args.tolerance, residual=worst)]
    return ({"algebra": alg.name, "element": args.element, "tolerance": args.tolerance},
            {"dims": dims}, checks)


def cmd_cone(args):
    alg = load_algebra(args)
    gens = [parse_element(alg, g) for g in args.generators]
    cone = cone_make(Subspace.whole(alg), gens)
    dual2 = cone_dual(cone_dual(cone))
    back = max(cone_membership(dual2, g).residual for g in cone.generators)
    tests = []
    for t in args.test or []:
        m = cone_membership(cone, parse_element(alg, t))
        tests.append({"element": t, "inside": m.inside, "residual": m.residual})
    result = {"pointed": cone_is_pointed(cone), "generating": cone_is_generating(cone),
              "dual_rays": int(cone.dual_rays.shape[1]), "tests": tests}
    checks = [check("double_dual", back <= 1e-8, residual=back)]
    for t in tests:
        if args.expect_inside:
            checks.append(check(f"inside:{t['element']}", t["inside"], residual=t["residual"]))
    return ({"algebra": alg.name, "generators": args.generators, "tests": args.test or []},
            result, checks)


def _space(kind, dim):

    if kind == "ds":
        return de_sitter(dim)
    if kind == "ads":
        return anti_de_sitter(dim)
    raise ConfigError(f"unknown space {kind!r}")


def cmd_wedge_sample(args):

    model = _space(args.space, args.dim)
    h = model.euler()
    cloud = wedge_sample(model, h, args.count, args.seed)
    if args.csv:
        Path(args.csv).write_text(cloud.to_csv())
    quad = np.abs(model.quadric(cloud.points)).max()
    checks = [check("on_quadric", quad <= 1e-9 * max(1.0, np.abs(cloud.points).max() ** 2),
                    residual=quad)]
    if args.space == "ds":
        oracle = ds_wedge_oracle(cloud.points)
        band = args.band
        decisive = np.abs(oracle) > band
        disagree = int(np.sum(decisive & ((oracle > 0) != cloud.labels)))
        checks.append(check("oracle_agreement", disagree == 0, disagreements=disagree,
                            decisive=int(decisive.sum())))
        bad = 0
        for p in cloud.points[cloud.labels][: args.flow_checks]:
            m = SpacePoint(model, p)
            for t in (-1.0, -0.5, 0.5, 1.0):
                bad += not positivity_domain_contains(h, modular_flow(h, t, m))[0]
        checks.append(check("flow_invariance", bad == 0, failures=bad))
    result = {"count": len(cloud), "positives": int(cloud.labels.sum())}
    cfg = {"space": args.space, "dim": args.dim, "count": args.count, "seed": args.seed,
           "band": args.band, "csv": args.csv}
    return cfg, result, checks


def cmd_kms_sample(args):

    model = _space("ds", args.dim)
    h = model.euler()
    pts = wedge_sample(model, h, args.count, args.seed).points
    coarse, fine = strip_grid(args.grid), strip_grid(2 * args.grid - 1)
    disagree = unstable = skipped = 0
    for p in pts:
        m = SpacePoint(model, p)
        pos, margin = positivity_domain_contains(h, m)
        if abs(margin) <= args.band:
            skipped += 1
            continue
        k1 = kms_domain_contains(h, m, coarse)
        k2 = kms_domain_contains(h, m, fine)
        disagree += k1 != pos
        unstable += k1 != k2
    checks = [check("kms_equals_positivity", disagree == 0, disagreements=disagree, skipped=skipped),
              check("grid_refinement_stable", unstable == 0, changes=unstable)]
    cfg = {"dim": args.dim, "count": args.count, "seed": args.seed, "grid": args.grid,
           "band": args.band}
    return cfg, {"count": args.count}, checks


def cmd_semigroup(args):

    rep = group_semigroup_check(args.samples, args.seed)
    return ({"samples": args.samples, "seed": args.seed}, rep.to_dict(),
            [check("subsemigroup", rep.ok, passes=rep.passes)])


def _kernel_model(name):

    return {"strip": STRIP, "halfplane": HALFPLANE}[name]


def _random_interior(model, rng, count):
    re_ = rng.uniform(-3, 3, count)
    im = rng.uniform(0.1, np.pi - 0.1, count) if model.kind == "strip" else rng.uniform(0.1, 3.0, count)
    return re_ + 1j * im


def cmd_kernel_gram(args):
    model = _kernel_model(args.model)
    rng = np.random.default_rng(args.seed)
    pts = _random_interior(model, rng, args.count)
    g = model.gram(pts)
    herm = float(np.abs(g - g.conj().T).max())
    mineig = float(np.linalg.eigvalsh(0.5 * (g + g.conj().T)).min())
    checks = [check("hermitian", herm <= 1e-12, residual=herm),
              check("psd", mineig >= -1e-10, min_eigenvalue=mineig)]
    return {"model": args.model, "count": args.count, "seed": args.seed}, {}, checks


def cmd_kernel_identities(args):

    model = _kernel_model(args.model)
    rng = np.random.default_rng(args.seed)
    checks = []
    if args.model == "strip":
        w0 = 0.5j * np.pi
        d = abs(strip_kernel(w0, w0) - 1 / (4 * np.pi))
        checks.append(check("diagonal_value", d <= 1e-12, residual=d))
        z, w = _random_interior(model, rng, 20), _random_interior(model, rng, 20)
        jr = float(np.abs(np.conj(strip_kernel(np.pi * 1j + np.conj(z), w)) - strip_kernel(z, strip_J(w))).max())
        checks.append(check("j_identity", jr <= 1e-12, residual=jr))
        t = rng.uniform(-2, 2, 20)
        tr = float(np.abs(strip_kernel(z + t, w) - strip_kernel(z, strip_translate(t, w))).max())
        checks.append(check("translation", tr <= 1e-12, residual=tr))
        ts = np.array([0.0, np.pi / 4, -np.pi / 4, 0.4 * np.pi, -0.4 * np.pi])
        orr = float(np.abs(orbit_norm_squared(ts) - 1 / (4 * np.pi * np.sin(np.pi / 2 + ts))).max())
        checks.append(check("orbit_norm", orr <= 1e-10, residual=orr))
    else:
        d = abs(halfplane_kernel(1j, 1j) - 1 / (4 * np.pi))
        checks.append(check("diagonal_value", d <= 1e-12, residual=d))
        pts = _random_interior(model, rng, 16)
        combo = KernelCombination(model, pts, rng.standard_normal(16) + 1j * rng.standard_normal(16))
        moved = affine_action(0.7, 2.0, combo)
        other = KernelCombination(model, _random_interior(model, rng, 16), rng.standard_normal(16))
        gr = abs(moved.inner(affine_action(0.7, 2.0, other)) - combo.inner(other))
        checks.append(check("affine_unitary", gr <= 1e-10, residual=gr))
        jj = halfplane_J(combo)
        ji = abs(jj.norm() - combo.norm())
        checks.append(check("j_isometric", ji <= 1e-12, residual=ji))
        back = halfplane_J(jj)
        inv = float(np.abs(back(pts[:4] + 0.1j) - combo(pts[:4] + 0.1j)).max())
        checks.append(check("j_involutive", inv <= 1e-12, residual=inv))
    return {"model": args.model, "seed": args.seed}, {}, checks


def _phase(args, default):
    return complex(args.phase[0], args.phase[1]) if args.phase else default


def cmd_membership(args):

    lo, hi = args.support
    phi = TestFunction.on_interval(lo, hi)
    if args.model == "strip":
        rep = kms_report(phi, _phase(args, 1.0), args.nodes)
    else:
        rep = membership_report(phi, _phase(args, GENERATING_PHASE), args.nodes)
    want = args.expect == "member"
    checks = [check("membership", (rep["verdict"] == "member") == want, expect=args.expect)]
    cfg = {"model": args.model, "support": [lo, hi], "nodes": args.nodes, "phase": rep["phase"],
           "expect": args.expect}
    return cfg, rep, checks


def cmd_net_check(args):

    return {"tolerance": args.tolerance}, {}, net_checks(tolerance=args.tolerance)


def cmd_modular_roundtrip(args):

    rng = np.random.default_rng(args.seed)
    worst_rt = worst_cc = worst_compat = 0.0
    for _ in range(args.count):
        n = int(rng.integers(1, args.max_dim + 1))
        v = random_standard_subspace(n, rng)
        pair = polar_modular(tomita_operator(v))
        worst_compat = max(worst_compat, compatibility_residual(pair.j_real, pair.delta_real()))
        worst_rt = max(worst_rt, subspace_distance(v, standard_from_pair(pair)))
        worst_cc = max(worst_cc, subspace_distance(v, symplectic_complement(symplectic_complement(v))))
    checks = [check("roundtrip", worst_rt <= args.tolerance, max_distance=worst_rt),
              check("double_complement", worst_cc <= args.tolerance, max_distance=worst_cc),
              check("compatibility", worst_compat <= args.tolerance, max_residual=worst_compat)]
    cfg = {"count": args.count, "max_dim": args.max_dim, "seed": args.seed, "tolerance": args.tolerance}
    return cfg, {}, checks


def validate(path):
    """Return a diagnostic string: "ok" or the first violation found."""

    data = _read_json(path)
    if not isinstance(data, dict):
        return "error: top level must be a JSON object"
    if "basis" in data:
        for key in ("name", "matrix_size", "basis"):
            if key not in data:
                return f"error: missing key {key!r}"
        try:
            LieAlgebra.from_dict(data)
        except (WedgeLabError, ValueError, TypeError) as exc:
            return f"error at 'basis': {exc}"
        return "ok"
    if "lambdas" in data or "pairing" in data:
        problems = validate_modular_dict(data)
        return "ok" if not problems else f"error at 'pairing': {problems[0]}"
    return "error: unrecognized document (expected an algebra or a modular pair)"


# ----------------------------------------------------------------------


def _add_common(p, seed=True):
    if seed:
        p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", help="write the JSON report here instead of stdout")


def _add_algebra(p):
    p.add_argument("--algebra", default="sl2", help="builtin name: sl2, su(1,1), so(p,q)")
    p.add_argument("--algebra-file", help="JSON algebra file (overrides --algebra)")


def build_parser():
    parser = argparse.ArgumentParser(prog="wedgelab", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"wedgelab {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    groups = {}

    def command(name, fn, help_=None):
        """Register "name" or "group action" and return its parser."""
        if " " in name:
            head, tail = name.split(" ", 1)
            if head not in groups:
                grp = sub.add_parser(head, help=help_)
                groups[head] = grp.add_subparsers(dest="action", required=True)
            p = groups[head].add_parser(tail)
        else:
            p = sub.add_parser(name, help=help_)
        p.set_defaults(func=fn, command_name=name)
        return p

    p = command("algebra check", cmd_algebra_check, "structure-constant checks")
    _add_algebra(p)
    p.add_argument("--tolerance", type=float, default=1e-10)
    _add_common(p, seed=False)

    p = command("euler check", cmd_euler_check, "Euler element test")
    _add_algebra(p)
    p.add_argument("--element", required=True)
    _add_common(p, seed=False)

    p = command("grading", cmd_grading, "3-grading of an Euler element")
    _add_algebra(p)
    p.add_argument("--element", required=True)
    p.add_argument("--tolerance", type=float, default=1e-9)
    _add_common(p, seed=False)

    p = command("cone", cmd_cone, "finitely generated cone diagnostics")
    _add_algebra(p)
    p.add_argument("--generators", nargs="+", required=True)
    p.add_argument("--test", action="append", metavar="ELEMENT",
                   help="membership query; repeatable, write --test=-e for a leading minus")
    p.add_argument("--expect-inside", action="store_true",
                   help="turn each --test membership into a pass/fail check")
    _add_common(p, seed=False)

    p = command("wedge sample", cmd_wedge_sample, "positivity-domain point clouds")
    p.add_argument("--space", choices=["ds", "ads"], default="ds")
    p.add_argument("--dim", type=int, default=2)
    p.add_argument("--count", type=int, default=10000)
    p.add_argument("--band", type=float, default=1e-8)
    p.add_argument("--flow-checks", type=int, default=200)
    p.add_argument("--csv")
    _add_common(p)

    p = command("kms sample", cmd_kms_sample, "KMS domain versus positivity domain")
    p.add_argument("--dim", type=int, default=2)
    p.add_argument("--count", type=int, default=1000)
    p.add_argument("--grid", type=int, default=11)
    p.add_argument("--band", type=float, default=1e-6)
    _add_common(p)

    p = command("semigroup", cmd_semigroup, "group-case wedge subsemigroup check")
    p.add_argument("--samples", type=int, default=1000)
    _add_common(p)

    for action, fn in (("gram", cmd_kernel_gram), ("identities", cmd_kernel_identities)):
        p = command(f"kernel {action}", fn, "reproducing-kernel checks")
        p.add_argument("--model", choices=["strip", "halfplane"], default="strip")
        if action == "gram":
            p.add_argument("--count", type=int, default=50)
        _add_common(p)

    for model in ("strip", "halfplane"):
        p = command(f"membership {model}", cmd_membership, "smeared-vector membership tests")
        p.set_defaults(model=model)
        p.add_argument("--support", nargs=2, type=float, required=True, metavar=("LO", "HI"))
        p.add_argument("--nodes", type=int, default=2048)
        p.add_argument("--phase", nargs=2, type=float, metavar=("RE", "IM"))
        p.add_argument("--expect", choices=["member", "not-member"], default="member")
        _add_common(p, seed=False)

    p = command("net check", cmd_net_check, "affine net checks")
    p.add_argument("--tolerance", type=float, default=1e-8)
    _add_common(p, seed=False)

    p = command("modular roundtrip", cmd_modular_roundtrip, "standard subspace roundtrips")
    p.add_argument("--count", type=int, default=100)
    p.add_argument("--max-dim", type=int, default=6)
    p.add_argument("--tolerance", type=float, default=1e-9)
    _add_common(p)

    p = command("validate", None, "validate an algebra or modular-pair JSON file")
    p.add_argument("path")
    return parser


def run(args):
    """Execute a parsed configuration; returns (exit code, report dict)."""
    cfg, result, checks = args.func(args)
    report = {
        "header": {"tool": "wedgelab", "version": __version__,
                   "timestamp": datetime.now(timezone.utc).isoformat()},
        "command": args.command_name,
        "config": cfg,
        "checks": checks,
    }
    report.update({k: v for k, v in result.items() if k not in report})
    code = EXIT_OK if all(c["pass"] for c in checks) else EXIT_FAIL
    return code, _jsonable(report)


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "validate":
            msg = validate(args.path)
            print(msg)
            return EXIT_OK if msg == "ok" else EXIT_FAIL
        code, report = run(args)
    except ConfigError as exc:
        print(f"wedgelab: error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (WedgeLabError, ValueError) as exc:
        print(f"wedgelab: error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    text = json.dumps(report, indent=2, sort_keys=True) + "\n"
    if args.out:
        try:
            Path(args.out).write_text(text)
        except OSError as exc:
            print(f"wedgelab: error: cannot write {args.out}: {exc.strerror}", file=sys.stderr)
            return EXIT_CONFIG
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
