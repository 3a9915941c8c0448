"""Command line front end.

Every command reads a problem (a TOML file, a JSON report from an earlier run,
or flags), runs one computation and prints a text summary.  ``--json PATH``
writes the structured report; its ``problem`` entry reproduces the run when
passed back through ``--problem``.

Exit codes: 0 success, 2 input error, 3 non-stabilising computation,
4 property violation.
"""
from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib

from . import __version__
from .bezout import PLANE, classify
from .errors import InputError, MultlabError
from .exactla import DEFAULT_FIELD, Field
from .forms import colon_constant, greg_probe, sop_check
from .hilbert import e0_of_parameters, hs_table, verify_multiplicity_identities
from .koszul import KoszulSetup, chi_defect, euler_char, homology_annihilated, homology_dims, koszul_complex
from .localmodel import MONOMIAL_CURVE, POLY_LOCAL, ModuleSpec, RingSpec, quotient_operators
from .poly import Polynomial, parse

SCHEMA = 1
DEFAULT_SEED = 0
COMMANDS = ("hilbert", "e0", "chi", "sop-check", "greg", "colon-const", "bezout", "koszul",
            "verify-identities")

# option name -> default; every option is an integer
OPTION_DEFAULTS = {
    "n_max": 12, "n_ceiling": 64, "max_dim": 6000, "window": 3, "k_window": 6, "sop_ceiling": 16,
    "degree_bound": 16, "koszul_n": 3,
}


# ---------------------------------------------------------------------------
# problem files

def _as_list(value, key):
    if value is None:
        return []
    if isinstance(value, str):
        return [value]
    if not isinstance(value, list) or not all(isinstance(v, (str, int)) for v in value):
        raise InputError(f"'{key}' must be a list of strings")
    return [str(v) for v in value]


def normalize_problem(raw: dict) -> dict:
    """Validate a problem dictionary and fill in defaults."""
    if not isinstance(raw, dict):
        raise InputError("a problem must be a table of keys")
    known = {"ring", "module", "field", "q", "a", "f", "g", "options", "factorization", "powers",
             "projective"}
    extra = set(raw) - known
    if extra:
        raise InputError(f"unknown problem keys: {sorted(extra)}")
    ring = raw.get("ring", {}) or {}
    kind = ring.get("kind", POLY_LOCAL)
    if kind not in (POLY_LOCAL, MONOMIAL_CURVE):
        raise InputError(f"ring.kind must be '{POLY_LOCAL}' or '{MONOMIAL_CURVE}', got {kind!r}")
    out_ring = {"kind": kind}
    if kind == POLY_LOCAL:
        out_ring["vars"] = _as_list(ring.get("vars", ["x", "y"]), "ring.vars")
    else:
        exps = ring.get("exponents")
        if not isinstance(exps, list) or not all(isinstance(e, int) for e in exps):
            raise InputError("ring.exponents must be a list of integers")
        out_ring["exponents"] = list(exps)
    module = raw.get("module", {}) or {}
    options = dict(OPTION_DEFAULTS)
    for k, v in (raw.get("options", {}) or {}).items():
        if k not in OPTION_DEFAULTS:
            raise InputError(f"unknown option {k!r}; known: {sorted(OPTION_DEFAULTS)}")
        if not isinstance(v, int) or isinstance(v, bool) or v < 0:
            raise InputError(f"option {k} must be a non-negative integer")
        options[k] = v
    field = raw.get("field", DEFAULT_FIELD.name)
    Field.parse(str(field))
    out = {
        "ring": out_ring,
        "module": {"annihilator": _as_list(module.get("annihilator"), "module.annihilator")},
        "field": str(field),
        "q": _as_list(raw.get("q"), "q"),
        "a": _as_list(raw.get("a"), "a"),
        "options": options,
    }
    for key in ("f", "g"):
        if key in raw:
            out[key] = str(raw[key])
    if "factorization" in raw:
        fac = _as_list(raw["factorization"], "factorization")
        if len(fac) != 2:
            raise InputError("factorization must list two factors")
        out["factorization"] = fac
    if "powers" in raw:
        pw = raw["powers"]
        if not isinstance(pw, list) or not all(isinstance(x, int) and x > 0 for x in pw):
            raise InputError("powers must be a list of positive integers")
        out["powers"] = list(pw)
    if "projective" in raw:
        proj = raw["projective"]
        if not isinstance(proj, dict) or "vars" not in proj or "point" not in proj:
            raise InputError("projective needs 'vars' (three names) and 'point' (three integers)")
        out["projective"] = {"vars": _as_list(proj["vars"], "projective.vars"),
                             "point": [int(x) for x in proj["point"]]}
    return out


def load_problem(path: str) -> dict:
    p = Path(path)
    try:
        data = p.read_bytes()
    except OSError as exc:
        raise InputError(f"cannot read problem file {path}: {exc}") from exc
    if p.suffix == ".json":
        try:
            doc = json.loads(data)
        except json.JSONDecodeError as exc:
            raise InputError(f"{path}: {exc}") from exc
        return doc.get("problem", doc) if isinstance(doc, dict) else doc
    try:
        return tomllib.loads(data.decode("utf-8"))
    except (tomllib.TOMLDecodeError, UnicodeDecodeError) as exc:
        raise InputError(f"{path}: {exc}") from exc


# ---------------------------------------------------------------------------
# building the objects

class Problem:
    def __init__(self, spec: dict):
        self.spec = spec
        field = Field.parse(spec["field"])
        r = spec["ring"]
        if r["kind"] == POLY_LOCAL:
            self.ring = RingSpec(POLY_LOCAL, tuple(r["vars"]), field=field)
        else:
            self.ring = RingSpec(MONOMIAL_CURVE, exponents=tuple(r["exponents"]), field=field)
        self.module = ModuleSpec(self.ring, self.ring.elements(spec["module"]["annihilator"]))
        self.options = spec["options"]

    @property
    def chain_options(self) -> dict:
        return {"n_ceiling": self.options["n_ceiling"], "max_dim": self.options["max_dim"]}

    def q(self):
        if self.spec["q"]:
            return self.ring.elements(self.spec["q"])
        return self.ring.maximal_ideal()

    def a(self, need=True):
        if need and not self.spec["a"]:
            raise InputError("this command needs the system 'a'")
        return self.ring.elements(self.spec["a"])


def _substitute(p: Polynomial, images: list[Polynomial]) -> Polynomial:
    out = None
    for exp, c in p.items():
        term = images[0] ** 0 * c
        for img, e in zip(images, exp):
            if e:
                term = term * img ** e
        out = term if out is None else out + term
    return out if out is not None else images[0] * 0


def dehomogenize(F: str, G: str, names: list[str], point: list[int], field: Field) -> tuple[Polynomial, Polynomial]:
    """Affine equations at the origin for projective curves ``F, G`` through ``point``."""
    if len(names) != 3 or len(point) != 3:
        raise InputError("projective input needs three variables and a point with three coordinates")
    pt = [field(v) for v in point]
    j = next((i for i, v in enumerate(pt) if v != 0), None)
    if j is None:
        raise InputError("(0:0:0) is not a projective point")
    pt = [v / pt[j] for v in pt]
    plane = ("x", "y")
    x = Polynomial.var("x", plane, field)
    y = Polynomial.var("y", plane, field)
    one = Polynomial.constant(1, plane, field)
    free = [i for i in range(3) if i != j]
    images = [None] * 3
    images[j] = one
    images[free[0]] = x + Polynomial.constant(pt[free[0]], plane, field)
    images[free[1]] = y + Polynomial.constant(pt[free[1]], plane, field)
    out = []
    for text in (F, G):
        h = parse(text, tuple(names), field)
        if not h.is_homogeneous():
            raise InputError(f"{text} is not homogeneous")
        out.append(_substitute(h, images))
    return out[0], out[1]


# ---------------------------------------------------------------------------
# commands; each returns (results, text lines)

def _cmd_hilbert(pb: Problem):
    t = hs_table(pb.module, pb.q(), pb.options["n_max"], window=pb.options["window"], **pb.chain_options)
    lines = [f"n      : {' '.join(f'{n:>4}' for n in range(len(t.values)))}",
             f"length : {' '.join(f'{v:>4}' for v in t.values)}",
             f"dimension d = {t.dim}, e0 = {t.e0} (difference row {t.dim} constant from index {t.stabilization_index})"]
    return t.as_dict(), lines


def _cmd_e0(pb: Problem):
    e = e0_of_parameters(pb.module, pb.a(), window=pb.options["window"], **pb.chain_options)
    return {"e0": e}, [f"e0(a; M) = {e}"]


def _setup(pb: Problem) -> KoszulSetup:
    return KoszulSetup.build(pb.module, pb.q(), pb.a(), **pb.chain_options)


def _cmd_chi(pb: Problem):
    s = _setup(pb)
    r = chi_defect(s, window=pb.options["window"], **pb.chain_options)
    lines = [f"c = {list(s.c)}, product {s.c_product}",
             f"e0(a; M) = {r.e0_a}, e0(q; M) = {r.e0_q}",
             f"n      : {' '.join(f'{n:>4}' for n in r.n_values)}",
             f"chi_L  : {' '.join(f'{v:>4}' for v in r.chi_L)}",
             f"chi_K  : {' '.join(f'{v:>4}' for v in r.chi_K)}",
             f"chi = {r.chi} = e0(a) - c e0(q) = {r.defect}"]
    return r.as_dict(), lines


def _cmd_sop(pb: Problem):
    s = _setup(pb)
    v = sop_check(s, pb.options["k_window"], pb.options["sop_ceiling"], **pb.chain_options)
    if v.holds:
        msg = f"initial forms generate q^n M / q^(n+1) M for n in ({v.onset}, {v.onset + v.k_window}]: system of parameters of G_M(q)"
    else:
        msg = f"no onset k <= {v.ceiling} with {v.k_window} consecutive equalities; last failing degree {v.first_failure}"
    return {"c": list(s.c), **v.as_dict()}, [f"c = {list(s.c)}", msg]


def _cmd_greg(pb: Problem):
    out, lines = [], []
    for a in pb.a():
        v = greg_probe(pb.module, pb.q(), a, pb.options["degree_bound"], **pb.chain_options)
        out.append(v.as_dict())
        w = f", witness {v.witness}" if v.witness is not None else ""
        lines.append(f"{a}: initial degree {v.degree}, {v.verdict}{w}")
    return {"probes": out}, lines


def _cmd_colon(pb: Problem):
    s = _setup(pb)
    r = colon_constant(s, pb.options["window"], degree_bound=pb.options["degree_bound"], **pb.chain_options)
    d = r.as_dict()
    lines = [f"colon lengths {r.trace} for n = {r.n_values}; constant {r.constant}",
             f"c e0(q; M) = {d['lhs']}, l(M/aM) - constant = {d['rhs']}: "
             f"{'holds' if r.identity_holds else 'FAILS'}"]
    return d, lines


def _cmd_bezout(pb: Problem):
    spec = pb.spec
    field = Field.parse(spec["field"])
    if "projective" in spec:
        if "f" not in spec or "g" not in spec:
            raise InputError("projective input needs f and g")
        f, g = dehomogenize(spec["f"], spec["g"], spec["projective"]["vars"], spec["projective"]["point"], field)
    else:
        if "f" in spec and "g" in spec:
            f, g = spec["f"], spec["g"]
        elif len(spec["a"]) == 2:
            f, g = spec["a"]
        else:
            raise InputError("bezout needs f and g (or a list 'a' of two equations)")
    ring = PLANE.with_field(field)
    r = classify(f, g, ring, **pb.chain_options)
    kind = "transversal" if r.transversal else f"not transversal, t = {r.t}"
    cmp = "=" if r.equality else ">"
    return r.as_dict(), [f"f = {r.f}, g = {r.g}", f"c = {r.c}, d = {r.d}, {kind}",
                         f"mu = {r.mu} {cmp} cd + t = {r.bound}"]


def _cmd_koszul(pb: Problem):
    n = pb.options["koszul_n"]
    keys, ops = quotient_operators(pb.module, pb.q(), n, pb.a(), **pb.chain_options)
    if not keys:
        raise InputError(f"M/q^{n} M is zero; raise options.koszul_n")
    c = koszul_complex(ops)
    h = homology_dims(c)
    chi = euler_char(c)
    ann = homology_annihilated(ops)
    res = {"space_dim": len(keys), "component_dims": list(c.dims), "homology_dims": h,
           "euler_characteristic": chi, "homology_annihilated": ann, "n": n}
    return res, [f"V = M/q^{n} M of dimension {len(keys)}",
                 f"components {list(c.dims)}, homology {h}, Euler characteristic {chi}",
                 f"every a_j kills homology: {ann}"]


def _cmd_identities(pb: Problem):
    spec = pb.spec
    rep = verify_multiplicity_identities(
        pb.module, pb.a(), factorization=spec.get("factorization"), powers=spec.get("powers"),
        window=pb.options["window"], **pb.chain_options)
    lines = [f"{c.name}: {c.lhs} vs {c.rhs} -> {'pass' if c.passed else 'FAIL'} ({c.detail})" for c in rep.checks]
    return rep.as_dict(), lines


HANDLERS = {
    "hilbert": _cmd_hilbert, "e0": _cmd_e0, "chi": _cmd_chi, "sop-check": _cmd_sop, "greg": _cmd_greg,
    "colon-const": _cmd_colon, "bezout": _cmd_bezout, "koszul": _cmd_koszul,
    "verify-identities": _cmd_identities,
}


def run(command: str, problem: dict, *, seed: int = DEFAULT_SEED, timing: bool = False) -> tuple[dict, list[str]]:
    """Run ``command`` on a problem dictionary; returns the report and its text rendering."""
    if command not in HANDLERS:
        raise InputError(f"unknown command {command!r}; choose from {', '.join(COMMANDS)}")
    spec = normalize_problem(problem)
    start = time.perf_counter()
    results, lines = HANDLERS[command](Problem(spec))
    report = {"schema": SCHEMA, "version": __version__, "command": command, "seed": seed,
              "problem": spec, "results": results}
    if timing:
        report["timing_seconds"] = round(time.perf_counter() - start, 6)
    return report, lines


# ---------------------------------------------------------------------------
# argument parsing

def _parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="multlab", description="Exact local multiplicity computations.")
    p.add_argument("--version", action="version", version=f"multlab {__version__}")
    sub = p.add_subparsers(dest="command", required=True, metavar="COMMAND")
    for name in COMMANDS:
        s = sub.add_parser(name, help=f"run the {name} computation")
        s.add_argument("--problem", help="TOML problem file, or a JSON report to rerun")
        s.add_argument("--json", dest="json_out", help="write the structured report here ('-' for stdout)")
        s.add_argument("--seed", type=int, default=DEFAULT_SEED, help="recorded in the report")
        s.add_argument("--field", help="'fp:<prime>' or 'rational'")
        s.add_argument("--timing", action="store_true", help="include wall time in the report")
        s.add_argument("--kind", choices=[POLY_LOCAL, MONOMIAL_CURVE], help="ring kind")
        s.add_argument("--vars", help="comma-separated variable names")
        s.add_argument("--exponents", help="comma-separated monomial curve exponents")
        s.add_argument("--annihilator", action="append", help="generator of J (repeatable)")
        s.add_argument("-q", action="append", dest="q", help="generator of q (repeatable; default m)")
        s.add_argument("-a", action="append", dest="a", help="element of the system a (repeatable)")
        s.add_argument("-f", help="first curve equation (bezout)")
        s.add_argument("-g", help="second curve equation (bezout)")
        s.add_argument("--factor", nargs=2, metavar=("A", "B"), help="factorisation of a_1 (verify-identities)")
        s.add_argument("--powers", help="comma-separated exponents n_i (verify-identities)")
        s.add_argument("--projective", nargs=2, metavar=("VARS", "POINT"),
                       help="bezout on homogeneous f, g: e.g. 'X,Y,Z' '0,0,1'")
        for opt in OPTION_DEFAULTS:
            s.add_argument(f"--{opt.replace('_', '-')}", dest=f"opt_{opt}", type=int, metavar="N")
    return p


def _ints(text: str, what: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError as exc:
        raise InputError(f"{what} must be comma-separated integers") from exc


def problem_from_args(ns) -> dict:
    raw = load_problem(ns.problem) if ns.problem else {}
    if not isinstance(raw, dict):
        raise InputError("a problem file must contain a table")
    raw = dict(raw)
    ring = dict(raw.get("ring", {}) or {})
    if ns.kind:
        ring["kind"] = ns.kind
    if ns.vars:
        ring["vars"] = [v.strip() for v in ns.vars.split(",") if v.strip()]
    if ns.exponents:
        ring["exponents"] = _ints(ns.exponents, "--exponents")
        ring.setdefault("kind", MONOMIAL_CURVE)
    if ring:
        raw["ring"] = ring
    if ns.annihilator:
        raw["module"] = {"annihilator": ns.annihilator}
    if ns.field:
        raw["field"] = ns.field
    for key in ("q", "a", "f", "g"):
        v = getattr(ns, key)
        if v:
            raw[key] = v
    if ns.factor:
        raw["factorization"] = list(ns.factor)
    if ns.powers:
        raw["powers"] = _ints(ns.powers, "--powers")
    if ns.projective:
        raw["projective"] = {"vars": ns.projective[0].split(","), "point": _ints(ns.projective[1], "point")}
    opts = dict(raw.get("options", {}) or {})
    for opt in OPTION_DEFAULTS:
        v = getattr(ns, f"opt_{opt}")
        if v is not None:
            opts[opt] = v
    if opts:
        raw["options"] = opts
    return raw


def dumps(report: dict) -> str:
    return json.dumps(report, indent=2, sort_keys=True) + "\n"


def main(argv=None) -> int:
    ns = _parser().parse_args(argv)
    try:
        report, lines = run(ns.command, problem_from_args(ns), seed=ns.seed, timing=ns.timing)
    except MultlabError as exc:
        print(f"multlab {ns.command}: {type(exc).__name__}: {exc}", file=sys.stderr)
        if exc.precondition:
            print(f"  violated precondition: {exc.precondition}", file=sys.stderr)
        return exc.exit_code
    if ns.json_out == "-":
        sys.stdout.write(dumps(report))
    else:
        print(f"multlab {ns.command}")
        for line in lines:
            print("  " + line)
        if ns.json_out:
            Path(ns.json_out).write_text(dumps(report))
    return 0


if __name__ == "__main__":
    sys.exit(main())
