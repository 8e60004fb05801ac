"""epsalg command line: build eps-graded algebras, run the calculus and print reports.

Exit status: 0 success, 1 validation failure, 2 parse error, 3 unsupported conductor.
"""

from __future__ import annotations

import argparse
import json
import random
import re
import sys

from . import diffcalc as dc
from . import moyal as my
from .algebra import AlgebraError, EpsAlgebra, center, inner_outer, trace_space
from .constructions import build_from_spec, sl_eps_basis, tr_eps_elementary
from .groups import CommFactor, FactorError, FinAbGroup
from .scalars import ConductorError, LiteralError, field, format_cyc, parse_cyc

MAX_CONDUCTOR = 64

CONFIG_KEYS = {"conductor", "group", "values", "hermitean", "algebra", "max_form_degree", "format",
               "seed", "samples", "fields", "dim", "command", "args", "quick"}


class ParseError(ValueError):
    pass


class ValidationFailure(Exception):
    def __init__(self, report: dict):
        super().__init__(report.get("violated", "validation failure"))
        self.report = report


# --- report emission ----------------------------------------------------------------

def _text(obj, indent=0) -> list:
    pad = "  " * indent
    lines = []
    if isinstance(obj, dict):
        for k, v in obj.items():
            if isinstance(v, (dict, list)) and v and not _flat_list(v):
                lines.append(f"{pad}{k}:")
                lines.extend(_text(v, indent + 1))
            else:
                lines.append(f"{pad}{k}: {_scalar(v)}")
    elif isinstance(obj, list):
        for v in obj:
            if isinstance(v, dict):
                inner = _text(v, indent + 1)
                if inner:
                    inner[0] = pad + "- " + inner[0].lstrip()
                lines.extend(inner)
            else:
                lines.append(f"{pad}- {_scalar(v)}")
    else:
        lines.append(pad + _scalar(obj))
    return lines


def _flat_list(v) -> bool:
    return isinstance(v, list) and all(not isinstance(x, (dict, list)) or _flat_list(x) for x in v)


def _scalar(v) -> str:
    if isinstance(v, bool):
        return "yes" if v else "no"
    if isinstance(v, list):
        return "[" + ", ".join(_scalar(x) for x in v) + "]"
    return str(v)


def report_emit(results: dict, fmt: str = "text") -> str:
    """JSON is key-ordered as produced and stable; text is an indented listing led by 'summary'."""
    if fmt == "json":
        return json.dumps(results, indent=2, ensure_ascii=False)
    lines = []
    if "summary" in results:
        lines.append(str(results["summary"]))
    lines.extend(_text({k: v for k, v in results.items() if k != "summary"}))
    return "\n".join(lines)


# --- parsing helpers -----------------------------------------------------------------------

def _conductor(N) -> int:
    try:
        N = int(N)
    except (TypeError, ValueError):
        raise ParseError(f"conductor must be an integer, got {N!r}") from None
    if N < 1 or N > MAX_CONDUCTOR:
        raise ConductorError(f"conductor {N} is outside the supported range 1..{MAX_CONDUCTOR}")
    return N


def _load_values(text):
    if isinstance(text, list):
        return text
    try:
        return json.loads(text)
    except json.JSONDecodeError:
        pass
    # bare literals such as [[i]] or [[-1, zeta]]: quote each entry and retry
    quoted = re.sub(r"[^\[\],\s]+", lambda m: json.dumps(m.group(0)), text)
    try:
        return json.loads(quoted)
    except json.JSONDecodeError:
        raise ParseError(f"cannot parse values {text!r}") from None


def load_algebra(spec: str, N: int) -> EpsAlgebra:
    """Builder spec ('supermatrix:2,1') or '@path.json' with a serialized algebra."""
    if not spec:
        raise ParseError("--algebra is required")
    if spec.startswith("@"):
        try:
            with open(spec[1:]) as fh:
                obj = json.load(fh)
        except (OSError, json.JSONDecodeError) as e:
            raise ParseError(f"cannot read algebra file: {e}") from None
        A = EpsAlgebra.from_json(obj)
        A.validate()
        return A
    try:
        return build_from_spec(spec, N)
    except (ConductorError, FactorError, AlgebraError):
        raise
    except (ValueError, TypeError) as e:
        raise ParseError(f"bad algebra spec {spec!r}: {e}") from None


def calculus_basis(A: EpsAlgebra):
    """Grassmann: the theta-duals; elementary matrices with tr(1) != 0: ad of the
    traceless matrices; otherwise a greedy free basis of all derivations."""
    if hasattr(A, "subsets"):
        return dc.grassmann_der_basis(A), "grassmann duals"
    if hasattr(A, "phi"):
        tr1 = sum(tr_eps_elementary(A).values(), A.field.zero)
        if not tr1.is_zero():
            return dc.inner_der_basis(A, sl_eps_basis(A)), "ad of traceless matrices"
    return dc.der_basis_make(A), "free basis of derivations"


def _is_unit_multiple(A, z) -> bool:
    if set(z) != set(A.unit):
        return False
    k = next(iter(z))
    r = z[k] * A.unit[k].inverse()
    return r.is_one() and all(z[t] == r * A.unit[t] for t in z)


def _deg(d):
    return list(d)


# --- commands ------------------------------------------------------------------------------

def cmd_check_factor(o) -> dict:
    if not o.group:
        raise ParseError("--group is required")
    try:
        G = FinAbGroup.parse(o.group)
    except ValueError as e:
        raise ParseError(str(e)) from None
    vals = _load_values(o.values if o.values is not None else "[]")
    fld = field(o.conductor)
    try:
        cvals = [[parse_cyc(v if isinstance(v, (int, str)) else str(v), o.conductor) for v in row] for row in vals]
    except LiteralError as e:
        raise ParseError(str(e)) from None
    try:
        eps = CommFactor(G, cvals, hermitean=o.hermitean, fld=fld)
    except FactorError as e:
        raise ValidationFailure({"summary": f"invalid commutation factor: {e}", **e.as_dict()}) from None
    out = {"summary": "valid commutation factor", "group": str(G), "conductor": o.conductor,
           "values": eps.to_json()["values"], "proper": eps.is_proper(), "hermitean": eps.hermitean}
    if G.is_finite() and G.size() <= 64:
        out["signature"] = {str(list(g)): format_cyc(eps.signature(g)) for g in G.elements()}
    return out


def cmd_build(o) -> dict:
    A = load_algebra(o.algebra, o.conductor)
    return {"summary": f"{A.label}: dim {A.dim}", "algebra": A.to_json()}


def cmd_center(o) -> dict:
    A = load_algebra(o.algebra, o.conductor)
    Z = center(A)
    names = ["1" if _is_unit_multiple(A, z) else A.fmt(z) for z in Z]
    return {"summary": f"dim Z = {len(Z)}, basis {{{', '.join(names)}}}", "algebra": A.label,
            "dim": len(Z), "basis": names, "degrees": [_deg(A.deg_of(z)) for z in Z]}


def cmd_traces(o) -> dict:
    A = load_algebra(o.algebra, o.conductor)
    T = trace_space(A)
    rows = [{A.names[k]: format_cyc(c) for k, c in sorted(t.items())} for t in T]
    support = sorted({A.names[k] for t in T for k in t})
    return {"summary": f"dim of eps-traces = {len(T)}", "algebra": A.label, "dim": len(T),
            "basis": rows, "support": support}


def cmd_derivations(o) -> dict:
    A = load_algebra(o.algebra, o.conductor)
    io = inner_outer(A)
    per = []
    for d, r in io.items():
        if r["der"]:
            per.append({"degree": _deg(d), "der": r["der"], "inner": r["int"], "outer": r["out"],
                        "inner_basis": [A.fmt(u) for u in r["inner_basis"]]})
    total = sum(r["der"] for r in io.values())
    outer = sum(r["out"] for r in io.values())
    return {"summary": f"dim Der = {total}, outer = {outer}", "algebra": A.label,
            "total_dim": total, "outer": outer, "degrees": per}


def cmd_forms(o) -> dict:
    A = load_algebra(o.algebra, o.conductor)
    B, how = calculus_basis(A)
    rows = []
    for n in range(o.max_form_degree + 1):
        for k in B.form_degrees(n):
            rows.append({"n": n, "k": _deg(k), "dim": B.form_space_dim(n, k)})
    return {"summary": f"form spaces of {A.label} up to n = {o.max_form_degree}", "algebra": A.label,
            "derivation_basis": how, "basis_size": B.r, "spaces": rows}


def cmd_d2check(o) -> dict:
    A = load_algebra(o.algebra, o.conductor)
    B, how = calculus_basis(A)
    rows = []
    ok = True
    for n in range(o.max_form_degree + 1):
        for k in B.form_degrees(n):
            r = dc.d_squared_zero(B, n, k)
            ok &= r
            rows.append({"n": n, "k": _deg(k), "d2_zero": r})
    out = {"summary": f"d^2 = 0 {'holds' if ok else 'FAILS'} on {A.label} up to n = {o.max_form_degree}",
           "algebra": A.label, "derivation_basis": how, "ok": ok, "spaces": rows}
    if not ok:
        bad = next(r for r in rows if not r["d2_zero"])
        raise ValidationFailure(dict(out, violated="d^2 = 0", at=[bad["n"], bad["k"]]))
    return out


def cmd_cartan(o) -> dict:
    A = load_algebra(o.algebra, o.conductor)
    B, how = calculus_basis(A)
    rng = random.Random(o.seed)
    cache: dict = {}
    d = lambda w: dc.apply_d_fast(w, cache)
    fails = {"i_i": 0, "L_i": 0, "L_d": 0, "L_L": 0}
    for _ in range(o.samples):
        x, y = rng.randrange(B.r), rng.randrange(B.r)
        n = rng.randrange(min(3, o.max_form_degree + 1))
        k = rng.choice(B.form_degrees(n))
        w = dc.random_form(B, n, k, rng, density=0.5)
        for key, v in dc.cartan_identities(B, x, y, w, d=d).items():
            fails[key] += not v
    ok = not any(fails.values())
    out = {"summary": f"Cartan identities on {o.samples} samples: {'all hold' if ok else 'FAIL'}",
           "algebra": A.label, "seed": o.seed, "samples": o.samples, "failures": fails, "ok": ok}
    if not ok:
        raise ValidationFailure(dict(out, violated="Cartan identity", at=[k for k, v in fails.items() if v]))
    return out


def cmd_cohomology(o) -> dict:
    A = load_algebra(o.algebra, o.conductor)
    B, how = calculus_basis(A)
    rows = []
    for n in range(o.max_form_degree + 1):
        for k in B.form_degrees(n):
            r = dc.cohomology_dim(B, n, k)
            rows.append({"n": n, "k": _deg(k), "kernel": r["kernel"], "image": r["image"], "H": r["H"]})
    dims = [sum(r["H"] for r in rows if r["n"] == n) for n in range(o.max_form_degree + 1)]
    return {"summary": f"cohomology dims {dims}", "algebra": A.label, "derivation_basis": how,
            "dims": dims, "spaces": rows}


def _matrix_connection_setup(o):
    from .connections import GradedModule
    A = load_algebra(o.algebra, o.conductor)
    if not hasattr(A, "phi"):
        raise ParseError("connection and gauge need an elementary matrix algebra")
    tr1 = sum(tr_eps_elementary(A).values(), A.field.zero)
    if tr1.is_zero():
        raise ValidationFailure({"summary": "tr_eps(1) = 0: ad is not injective on traceless matrices",
                                 "violated": "tr_eps(1) != 0", "at": [A.label]})
    sl = sl_eps_basis(A)
    B = dc.inner_der_basis(A, sl)
    return A, sl, B, GradedModule(A)


def cmd_connection(o) -> dict:
    from .connections import canonical_connection, curvature, hermitean_check, potentials
    A, sl, B, M = _matrix_connection_setup(o)
    can = canonical_connection(B, sl)
    flat = curvature(can).is_zero()
    herm = hermitean_check(can) if A.involution is not None else None
    pots = [A.fmt(p) for p in potentials(can)]
    out = {"summary": f"canonical connection on {A.label}: {'flat' if flat else 'NOT flat'}",
           "algebra": A.label, "flat": flat, "hermitean": herm, "potentials": pots}
    if not flat:
        raise ValidationFailure(dict(out, violated="curvature of the canonical connection = 0", at=[A.label]))
    return out


def cmd_gauge(o) -> dict:
    from .connections import canonical_connection, curvature, gauge_transform, random_connection
    from .verify import _random_invertible_gauge, _random_elem
    A, sl, B, M = _matrix_connection_setup(o)
    rng = random.Random(o.seed)
    can = canonical_connection(B, sl)
    inv_ok = cov_ok = True
    for _ in range(o.samples):
        Phi = _random_invertible_gauge(M, rng)
        ng = gauge_transform(Phi, can)
        inv_ok &= all(ng.omega[k] == can.omega[k] for k in can.omega)
    for _ in range(max(1, o.samples // 4)):
        nab = random_connection(M, B, rng)
        Phi = _random_invertible_gauge(M, rng)
        R, Rg, inv = curvature(nab), curvature(gauge_transform(Phi, nab)), Phi.inverse()
        m = [_random_elem(A, rng)]
        cov_ok &= all(Rg(m, x, y) == Phi(R(inv(m), x, y)) for x in range(B.r) for y in range(B.r))
    ok = inv_ok and cov_ok
    out = {"summary": f"gauge checks on {A.label}: {'pass' if ok else 'FAIL'}", "algebra": A.label,
           "seed": o.seed, "samples": o.samples, "canonical_invariant": inv_ok, "curvature_covariant": cov_ok}
    if not ok:
        raise ValidationFailure(dict(out, violated="gauge covariance", at=[A.label]))
    return out


def _moyal_ctx(o):
    try:
        return my.MoyalContext(D=o.dim, N=o.conductor)
    except my.MoyalError as e:
        if o.conductor % 4:
            raise ConductorError(str(e)) from None
        raise ParseError(str(e)) from None


def cmd_moyal(o) -> dict:
    ctx = _moyal_ctx(o)
    if o.moyal_cmd == "bracket-table":
        rows = []
        for r in my.g_bracket_table(ctx):
            status = "MATCH" if r["printed"] else ("MISPRINT" if r["corrected"] else "MISMATCH")
            rows.append({"entry": r["entry"], "pair": [" ".join(map(str, p)) for p in r["pair"]],
                         "instances": r["instances"], "status": status})
        bad = [r["entry"] for r in rows if r["status"] == "MISMATCH"]
        mis = [r["entry"] for r in rows if r["status"] == "MISPRINT"]
        out = {"summary": f"{len(rows)} entries: {len(rows) - len(bad) - len(mis)} MATCH, "
                          f"{len(mis)} MISPRINT, {len(bad)} MISMATCH", "D": ctx.D, "rows": rows}
        if bad:
            raise ValidationFailure(dict(out, violated="bracket table", at=bad))
        return out
    if o.moyal_cmd == "star":
        try:
            a, b = my.MPoly.parse(ctx, o.a), my.MPoly.parse(ctx, o.b)
        except (LiteralError, my.MoyalError) as e:
            raise ParseError(str(e)) from None
        p = my.star(a, b)
        return {"summary": str(p), "a": str(a), "b": str(b), "star": str(p),
                "commutator": str(my.commutator(a, b))}
    if o.moyal_cmd == "curvature-check":
        if o.fields:
            try:
                with open(o.fields) as fh:
                    obj = json.load(fh)
            except (OSError, json.JSONDecodeError) as e:
                raise ParseError(f"cannot read fields file: {e}") from None
            unknown = set(obj) - {"A0", "A1", "phi", "G"}
            if unknown:
                raise ParseError(f"unknown keys in fields file: {sorted(unknown)}")
            try:
                f = my.MoyalFields.from_json(ctx, obj)
            except (KeyError, LiteralError, my.MoyalError, TypeError) as e:
                raise ParseError(f"bad fields: {e}") from None
        else:
            f = my.MoyalFields.random(ctx, random.Random(o.seed))
        rows = []
        for r in my.gauge_curvature(f):
            agree = r["connection"] and r["moy2"] and r["moy1"]
            rows.append({"entry": r["entry"], "abstract_vs_connection": r["connection"],
                         "closed_form": "MATCH" if r["moy1_printed"] else ("MISPRINT" if r["moy1"] else "MISMATCH"),
                         "covariant_form": r["moy2"], "agree": agree})
        ok = all(r["agree"] for r in rows)
        out = {"summary": f"curvature three-way agreement: {'yes' if ok else 'NO'}", "D": ctx.D,
               "fields": f.to_json(), "rows": rows}
        if not ok:
            raise ValidationFailure(dict(out, violated="curvature agreement",
                                         at=[r["entry"] for r in rows if not r["agree"]]))
        return out
    raise ParseError("moyal needs a subcommand: bracket-table, curvature-check or star")


def cmd_verify_all(o) -> dict:
    from .verify import run_all
    rep = run_all(o.seed, quick=o.quick)
    counts: dict = {}
    for c in rep["checks"]:
        counts[c["status"]] = counts.get(c["status"], 0) + 1
    summary = f"verify-all seed {o.seed}: {rep['overall']} ({', '.join(f'{k} {v}' for k, v in sorted(counts.items()))})"
    out = {"summary": summary, **rep}
    if rep["overall"] != "PASS":
        failing = [c["id"] for c in rep["checks"] if c["status"] == "FAIL"]
        raise ValidationFailure(dict(out, violated="verify-all", at=failing))
    return out


COMMANDS = {
    "check-factor": cmd_check_factor, "build": cmd_build, "center": cmd_center, "traces": cmd_traces,
    "derivations": cmd_derivations, "forms": cmd_forms, "d2check": cmd_d2check, "cartan-check": cmd_cartan,
    "cohomology": cmd_cohomology, "connection": cmd_connection, "gauge": cmd_gauge, "moyal": cmd_moyal,
    "verify-all": cmd_verify_all,
}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ParseError(message)


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False, argument_default=argparse.SUPPRESS)
    common.add_argument("--config", help="JSON session config; command-line flags override it")
    common.add_argument("--conductor", type=int)
    common.add_argument("--format", choices=("text", "json"))
    common.add_argument("--seed", type=int)
    common.add_argument("--algebra", help="builder spec, e.g. supermatrix:2,1, or @file.json")
    common.add_argument("--max-form-degree", dest="max_form_degree", type=int)
    common.add_argument("--samples", type=int)
    p = _Parser(prog="epsalg", description="exact computations in eps-graded algebras", parents=[common])
    sub = p.add_subparsers(dest="command", parser_class=_Parser)
    cf = sub.add_parser("check-factor", parents=[common])
    cf.add_argument("--group", default=None)
    cf.add_argument("--values", default=None)
    cf.add_argument("--hermitean", action="store_true", default=None)
    for name in ("build", "center", "traces", "derivations", "forms", "d2check", "cartan-check",
                 "cohomology", "connection", "gauge"):
        sub.add_parser(name, parents=[common])
    mo = sub.add_parser("moyal", parents=[common])
    mo.add_argument("--dim", type=int, default=None)
    msub = mo.add_subparsers(dest="moyal_cmd", parser_class=_Parser)
    msub.add_parser("bracket-table", parents=[common])
    cc = msub.add_parser("curvature-check", parents=[common])
    cc.add_argument("--fields", default=None)
    st = msub.add_parser("star", parents=[common])
    st.add_argument("a")
    st.add_argument("b")
    va = sub.add_parser("verify-all", parents=[common])
    va.add_argument("--quick", action="store_true", default=None)
    return p


DEFAULTS = {"conductor": 4, "format": "text", "seed": 0, "algebra": None, "max_form_degree": 2,
            "samples": 50, "group": None, "values": None, "hermitean": False, "dim": 2,
            "fields": None, "quick": False}


def _merge_config(o):
    cfg = {}
    if getattr(o, "config", None):
        try:
            with open(o.config) as fh:
                cfg = json.load(fh)
        except (OSError, json.JSONDecodeError) as e:
            raise ParseError(f"cannot read config: {e}") from None
        if not isinstance(cfg, dict):
            raise ParseError("config must be a JSON object")
        unknown = set(cfg) - CONFIG_KEYS
        if unknown:
            raise ParseError(f"unknown config keys: {sorted(unknown)}")
        if "values" in cfg and not isinstance(cfg["values"], str):
            cfg["values"] = json.dumps(cfg["values"])
    for key, dflt in DEFAULTS.items():
        if getattr(o, key, None) is None:
            setattr(o, key, cfg.get(key, dflt))
    if o.command is None:
        o.command = cfg.get("command")
    o.conductor = _conductor(o.conductor)
    if o.max_form_degree < 0:
        raise ParseError("--max-form-degree must be >= 0")
    return o


def run(argv=None):
    """Returns (exit status, report dict, format)."""
    fmt = "text"
    try:
        o = build_parser().parse_args(argv)
        if getattr(o, "format", None):
            fmt = o.format
        o = _merge_config(o)
        fmt = o.format
        if o.command not in COMMANDS:
            raise ParseError("a command is required: " + ", ".join(COMMANDS))
        if o.command == "moyal" and not getattr(o, "moyal_cmd", None):
            raise ParseError("moyal needs a subcommand: bracket-table, curvature-check or star")
        return 0, COMMANDS[o.command](o), fmt
    except ValidationFailure as e:
        return 1, e.report, fmt
    except (FactorError, AlgebraError) as e:
        return 1, {"summary": f"validation failure: {e}", **e.as_dict()}, fmt
    except ConductorError as e:
        return 3, {"summary": f"unsupported conductor: {e}", "error": "conductor"}, fmt
    except (ParseError, LiteralError) as e:
        return 2, {"summary": f"parse error: {e}", "error": "parse"}, fmt


def main(argv=None) -> int:
    code, report, fmt = run(argv)
    stream = sys.stdout if code == 0 else sys.stderr
    if code == 1:
        stream = sys.stdout
    print(report_emit(report, fmt), file=stream)
    return code


if __name__ == "__main__":
    sys.exit(main())
