"""Command-line surface: bound, group, newton, pairing, amf, verify, sweep.

Reports are JSON by default (CSV with --csv), deterministic byte-for-byte
for identical inputs: keys are sorted, big integers are serialized as
decimal strings, and every numeric result carries a provenance label
("formula", "enumeration" or "bound").

Exit codes: 0 ok, 1 verify mismatch, 2 parse/validation, 3 insufficient
precision, 4 enumeration budget exceeded.  The SSP_MAX_ENUM environment
variable caps enumeration budgets (default 10^8 candidates).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from fractions import Fraction

from . import count as count_mod
from . import dieudonne, exact, groups, hermitian
from .errors import (
    BudgetExceededError,
    InsufficientPrecisionError,
    SspError,
    ValidationError,
)
from .witt import witt_ring

# ---------------------------------------------------------------------------
# report plumbing


def _fmt(x) -> str:
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, bool):
        return "true" if x else "false"
    return str(x)


def _val(x, provenance: str) -> dict:
    return {"value": _fmt(x), "provenance": provenance}


def _report(command: str, parameters: dict, results: dict, notes=(), status: str = "ok") -> dict:
    return {
        "command": command,
        "parameters": parameters,
        "results": results,
        "notes": list(notes),
        "status": status,
    }


def _flatten(prefix: str, obj, rows: list):
    if isinstance(obj, dict):
        if set(obj) == {"value", "provenance"}:
            rows.append((prefix, obj["value"], obj["provenance"]))
            return
        for k in sorted(obj):
            _flatten(f"{prefix}.{k}" if prefix else k, obj[k], rows)
    elif isinstance(obj, list):
        for i, item in enumerate(obj):
            _flatten(f"{prefix}[{i}]", item, rows)
    else:
        rows.append((prefix, _fmt(obj), ""))


def _emit(report: dict, as_csv: bool, stream=None):
    stream = stream or sys.stdout
    if as_csv:
        rows: list = []
        _flatten("", report["results"], rows)
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["name", "value", "provenance"])
        writer.writerows(rows)
        stream.write(buf.getvalue())
    else:
        stream.write(json.dumps(report, indent=2, sort_keys=True) + "\n")


# ---------------------------------------------------------------------------
# subcommand handlers


def _cmd_bound(args) -> tuple[dict, int]:
    params = count_mod.SignatureParams(p=args.p, alpha=args.alpha, r=args.r, s=args.s, N=args.N)
    rep = count_mod.eigensystem_bound(params)
    results = {
        "c_g": _val(rep.c_g, "formula"),
        "gsp_order": _val(rep.gsp_order, "formula"),
        "mass_product": _val(rep.mass_product, "formula"),
        "superspecial_bound": _val(rep.superspecial_bound_exact, "bound"),
        "superspecial_bound_ceiling": _val(rep.superspecial_bound_ceiling, "bound"),
        "class_count": _val(rep.class_count, "formula"),
        "dim_bound": _val(rep.dim_bound, "bound"),
        "irr_sum_bound": _val(rep.irr_sum_bound, "bound"),
        "final_bound": _val(rep.final_bound, "bound"),
        "asymptotic_exponent": _val(rep.asymptotic_exponent, "formula"),
    }
    notes = list(params.warnings) + [
        f"superspecial_bound: {count_mod.SUPERSPECIAL_BOUND_NOTE}",
        "final_bound = ceil(superspecial_bound) * irr_sum_bound",
    ]
    return _report("bound", _echo(args, "p alpha r s N"), results, notes), 0


_GROUP_FAMILIES = {
    "su": ("su", 2),
    "u": ("u", 2),
    "gu": ("gu", 2),
    "gusplit": ("gusplit", 3),
    "gsp": ("gsp_mod", 2),
}


def _cmd_group(args) -> tuple[dict, int]:
    if args.family not in _GROUP_FAMILIES:
        raise ValidationError(f"unknown family {args.family!r} (su|u|gu|gusplit|gsp)")
    family, arity = _GROUP_FAMILIES[args.family]
    try:
        params = tuple(int(x) for x in args.params.split(","))
    except ValueError:
        raise ValidationError(f"--params must be {arity} comma-separated integers") from None
    if len(params) != arity:
        raise ValidationError(f"family {args.family} takes {arity} parameters, got {len(params)}")
    spec = groups.GroupSpec(family, params)
    results = {"order": _val(spec.order(), "formula")}
    if args.oracle:
        if family == "su":
            enum = len(groups.su_group_elements(*params))
        elif family == "u":
            enum = len(groups.unitary_group_elements(*params))
        elif family == "gu":
            enum = len(groups.gusplit_group_elements(params[0], 0, params[1]))
        elif family == "gusplit":
            enum = len(groups.gusplit_group_elements(*params))
        else:
            g, N = params
            enum = groups.gl2_order_enumerated(N) if g == 1 else groups.gsp_order_enumerated(g, N)
        results["order_enumerated"] = _val(enum, "enumeration")
        results["match"] = enum == spec.order()
    return _report("group", {"family": args.family, "params": list(params)}, results), 0


def _polygon_results(np_: dieudonne.NewtonPolygon, hp: dieudonne.HodgePolygon, n_used: int) -> dict:
    adm = dieudonne.endpoint_admissibility(np_, hp)
    return {
        "slopes": _val("; ".join(f"{lam} x{m}" for lam, m in np_.slopes), "formula"),
        "isoclinic": dieudonne.is_isoclinic(np_),
        "basic": dieudonne.is_basic_gl(np_),
        "hodge_weights": _val("; ".join(f"{w} x{m}" for w, m in hp.weights), "formula"),
        "t_newton": _val(adm.t_newton, "formula"),
        "t_hodge": _val(adm.t_hodge, "formula"),
        "endpoints_equal": adm.endpoints_equal,
        "newton_at_or_above": adm.newton_at_or_above,
        "truncation_used": _val(n_used, "formula"),
    }


def _cmd_newton(args) -> tuple[dict, int]:
    with open(args.file, "r", encoding="utf-8") as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as e:
            raise ValidationError(f"module file is not valid JSON: {e}") from None
    np_, n_used = dieudonne.newton_polygon_with_retry(data)
    hp = dieudonne.hodge_polygon(dieudonne.module_from_dict(data, n_override=n_used))
    return _report("newton", {"file": args.file}, _polygon_results(np_, hp, n_used)), 0


def _cmd_pairing(args) -> tuple[dict, int]:
    n = args.n if args.n is not None else 2
    m = dieudonne.build_superspecial_unitary(args.p, n, args.alpha, args.r, args.s)
    h = hermitian.reduce_pairing(m)
    order_formula = groups.order_gusplit(args.r, args.s, args.p)
    order_enum, _ = hermitian.automorphism_group_bruteforce(h)
    disagreements = hermitian.pairing_well_defined(m, h, trials=20, seed=0)
    results = {
        "quotient_dim": _val(h.dim, "formula"),
        "grading": _val(f"({h.grading[0]},{h.grading[1]})", "formula"),
        "gram": [[list(x.coeffs) for x in row] for row in h.gram],
        "well_definedness_disagreements": _val(disagreements, "enumeration"),
        "aut_order_formula": _val(order_formula, "formula"),
        "aut_order_enumerated": _val(order_enum, "enumeration"),
        "match": order_enum == order_formula,
    }
    return _report("pairing", _echo(args, "p alpha r s") | {"n": n}, results), 0


def _cmd_amf(args) -> tuple[dict, int]:
    def load(path):
        with open(path, "r", encoding="utf-8") as fh:
            try:
                return json.load(fh)
            except json.JSONDecodeError as e:
                raise ValidationError(f"{path} is not valid JSON: {e}") from None

    space = count_mod.coset_space_from_dict(load(args.space_file))
    rho = count_mod.representation_from_dict(load(args.rep_file))
    dim = count_mod.equivariant_dimension(space, rho)
    results = {
        "dimension": _val(dim, "enumeration"),
        "points": _val(space.points, "formula"),
        "rep_dim": _val(rho.dim, "formula"),
        "bound_check": count_mod.dim_superspecial_bound_check(space, rho),
    }
    return _report("amf", {"space_file": args.space_file, "rep_file": args.rep_file}, results), 0


def _echo(args, names: str) -> dict:
    return {k: getattr(args, k) for k in names.split()}


# ---------------------------------------------------------------------------
# verify harness


def _verify_checks(level: str):
    """(name, thunk) pairs; each thunk returns (ok, detail)."""

    def eq(lhs, rhs):
        return lhs == rhs, f"{lhs} vs {rhs}"

    def su_check(t, p):
        return lambda: eq(len(groups.su_group_elements(t, p)), groups.order_su(t, p))

    def u_check(t, p):
        return lambda: eq(len(groups.unitary_group_elements(t, p)), groups.order_u(t, p))

    def gusplit_check(r, s, p):
        return lambda: eq(len(groups.gusplit_group_elements(r, s, p)), groups.order_gusplit(r, s, p))

    def gsp_gl2_check():
        return eq(groups.gl2_order_enumerated(3), groups.order_gsp_mod(1, 3))

    def gsp_hyp_check():
        return eq(groups.gsp_order_enumerated(2, 3), groups.order_gsp_mod(2, 3))

    def pregular_check(r, s, p):
        return lambda: eq(
            groups.p_regular_class_count_enumerated(r, s, p), groups.p_regular_classes(r, s, p)
        )

    def sylow_check():
        for r, s in ((1, 1), (2, 0)):
            order = len(groups.gusplit_group_elements(r, s, 3))
            want = 3 ** ((r * (r - 1) + s * (s - 1)) // 2)
            if groups.sylow_p_order(order, 3) != want:
                return False, f"(r,s)=({r},{s}): {groups.sylow_p_order(order, 3)} vs {want}"
        return True, "p-Sylow orders match p^((r(r-1)+s(s-1))/2)"

    def aut_check():
        m = dieudonne.build_superspecial_unitary(3, 2, -1, 1, 1)
        order, _ = hermitian.automorphism_group_bruteforce(hermitian.reduce_pairing(m))
        return eq(order, groups.order_gusplit(1, 1, 3))

    def newton_check():
        from fractions import Fraction as F

        m = dieudonne.build_a_half(witt_ring(3, 2, 6))
        np_ = dieudonne.newton_polygon(m)
        ok = np_.slopes == ((F(1, 2), 2),) and dieudonne.is_isoclinic(np_)
        return ok, f"slopes {np_.slopes}"

    def model_check(r, s):
        def run():
            m = dieudonne.build_superspecial_unitary(3, 2, -1, r, s)
            rep = dieudonne.check_axioms(m)
            if not rep.ok:
                return False, f"axioms: {rep.failures()}"
            if m.f_matrix != tuple(tuple(-x for x in row) for row in m.v_matrix):
                return False, "F + V != 0"
            dims = dieudonne.graded_quotient_dims(m)
            return dims == (r, s), f"quotient dims {dims} vs ({r},{s})"

        return run

    def admissibility_check(r, s):
        def run():
            g = r + s
            m = dieudonne.build_superspecial_unitary(3, 4 * g + 2, -1, r, s)
            adm = dieudonne.endpoint_admissibility(
                dieudonne.newton_polygon(m), dieudonne.hodge_polygon(m)
            )
            return (
                adm.endpoints_equal and adm.t_newton == g,
                f"t_N = {adm.t_newton}, t_H = {adm.t_hodge}",
            )

        return run

    def pairing_check():
        m = dieudonne.build_superspecial_unitary(3, 3, -1, 1, 1)
        h = hermitian.reduce_pairing(m)
        bad = hermitian.pairing_well_defined(m, h, trials=20, seed=0)
        return bad == 0, f"{bad} disagreements in 20 trials"

    def mass_check():
        for g in range(1, 9):
            if exact.mass_constant(g) != exact.mass_constant_bernoulli_abs(g):
                return False, f"g = {g}: zeta and Bernoulli forms differ"
            if exact.mass_constant(g) <= 0:
                return False, f"g = {g}: not positive"
        return True, "zeta form equals |Bernoulli| form, positive, g <= 8"

    def pipeline_check():
        rep = count_mod.eigensystem_bound(count_mod.SignatureParams(p=3, alpha=-1, r=1, s=1, N=3))
        ok = (
            rep.final_bound == 11520
            and rep.superspecial_bound_ceiling == 360
            and rep.irr_sum_bound == 32
        )
        return ok, f"{rep.superspecial_bound_ceiling} * {rep.irr_sum_bound} = {rep.final_bound}"

    def detcond_check():
        from .gf import field_ctx

        ctx = field_ctx(3, 2)
        good = dieudonne.canonical_lie_action(ctx, -1, 1, 1)
        bad = dieudonne.canonical_lie_action(ctx, -1, 2, 0)
        ok = dieudonne.determinant_condition(1, 1, -1, good) and not dieudonne.determinant_condition(
            1, 1, -1, bad
        )
        return ok, "accepts diag(-u, u), rejects diag(-u, -u)"

    def exponent_check():
        for g in (2, 4, 6, 8):
            for r in range(g + 1):
                got = count_mod.asymptotic_exponent_symbolic(g, r, g - r)
                if got != g * g + g + 1 - r * (g - r):
                    return False, f"(g,r) = ({g},{r})"
        return True, "factor degrees reproduce g^2+g+1-rs, g <= 8"

    def lemma_check():
        rep = groups.lemma_gp_check(3, -1, 1, 1)
        return rep.ok, (
            f"group {rep.group_order} = kernel {rep.kernel_size} x image {rep.image_size}; "
            f"surjective = {rep.surjective}"
        )

    def equivariant_check():
        from .ftables import field_table

        table = field_table(3)
        elements = sorted(groups.gusplit_group_elements(1, 1, 3))
        index = {e: i for i, e in enumerate(elements)}
        perms = tuple(tuple(index[table.mat_mul(x, g)] for x in elements) for g in elements)
        space = count_mod.CosetSpace(points=len(elements), generators=perms)
        rho = count_mod.GroupRepresentation(
            ctx=table.ctx, dim=2, generators=tuple(table.mat_decode(g) for g in elements)
        )
        dim = count_mod.equivariant_dimension(space, rho)
        return dim == 2, f"regular-space dimension {dim} vs rep dim 2"

    checks = [
        ("su-order-vs-enumeration(2,3)", su_check(2, 3)),
        ("u-order-vs-enumeration(1,3)", u_check(1, 3)),
        ("gusplit-order-vs-enumeration(1,1,3)", gusplit_check(1, 1, 3)),
        ("gusplit-order-vs-enumeration(2,0,3)", gusplit_check(2, 0, 3)),
        ("gsp-order-vs-enumeration(1,3)", gsp_gl2_check),
        ("gsp-order-vs-hyperbolic-pairs(2,3)", gsp_hyp_check),
        ("pregular-classes-vs-enumeration(1,1,3)", pregular_check(1, 1, 3)),
        ("pregular-classes-vs-enumeration(2,0,3)", pregular_check(2, 0, 3)),
        ("sylow-order-vs-formula(3)", sylow_check),
        ("aut-bruteforce-vs-gusplit-order(3,1,1)", aut_check),
        ("newton-polygon-a-half(3)", newton_check),
        ("superspecial-model-core(3,1,1)", model_check(1, 1)),
        ("pairing-well-definedness(3,1,1)", pairing_check),
        ("mass-constant-zeta-vs-bernoulli(g<=8)", mass_check),
        ("pipeline-decomposition(3,-1,1,1,3)", pipeline_check),
        ("determinant-condition(3,-1,1,1)", detcond_check),
        ("asymptotic-exponent-decomposition(g<=8)", exponent_check),
    ]
    if level == "full":
        checks += [
            ("su-order-vs-enumeration(2,5)", su_check(2, 5)),
            ("gusplit-order-vs-enumeration(1,1,5)", gusplit_check(1, 1, 5)),
            ("pregular-classes-vs-enumeration(1,1,5)", pregular_check(1, 1, 5)),
            ("lemma-gp-check(3,-1,1,1)", lemma_check),
            ("superspecial-model-core(3,2,2)", model_check(2, 2)),
            ("endpoint-admissibility(3,2,2)", admissibility_check(2, 2)),
            ("equivariant-dimension-regular(3,1,1)", equivariant_check),
        ]
    return checks


def _cmd_verify(args) -> tuple[dict, int]:
    if args.level not in ("quick", "full"):
        raise ValidationError("--level must be quick or full")
    entries = []
    first_failure = None
    for name, thunk in _verify_checks(args.level):
        try:
            ok, detail = thunk()
        except SspError as e:
            ok, detail = False, f"error: {e}"
        entries.append({"name": name, "ok": ok, "detail": detail})
        if not ok and first_failure is None:
            first_failure = name
    results = {
        "checks": entries,
        "passed": sum(1 for e in entries if e["ok"]),
        "failed": sum(1 for e in entries if not e["ok"]),
        "first_failure": first_failure,
    }
    status = "ok" if first_failure is None else "fail"
    return (
        _report("verify", {"level": args.level}, results, status=status),
        0 if first_failure is None else 1,
    )


# ---------------------------------------------------------------------------
# sweep


def _cmd_sweep(args) -> tuple[dict, int]:
    try:
        lo, hi = (int(x) for x in args.sweep.split(":"))
    except ValueError:
        raise ValidationError("--sweep takes a range like p=3:13 (pass 3:13)") from None
    rows = []
    for p in range(lo, hi + 1):
        if not groups.is_prime(p):
            continue
        row = {"p": p}
        try:
            params = count_mod.SignatureParams(p=p, alpha=args.alpha, r=args.r, s=args.s, N=args.N)
            rep = count_mod.eigensystem_bound(params)
        except ValidationError as e:
            row["status"] = "skipped"
            row["reason"] = str(e)
        else:
            row["status"] = "ok"
            row["final_bound"] = _val(rep.final_bound, "bound")
            row["superspecial_bound_ceiling"] = _val(rep.superspecial_bound_ceiling, "bound")
            row["irr_sum_bound"] = _val(rep.irr_sum_bound, "bound")
            row["asymptotic_exponent"] = _val(rep.asymptotic_exponent, "formula")
        rows.append(row)
    results = {"rows": rows}
    notes = [f"superspecial_bound: {count_mod.SUPERSPECIAL_BOUND_NOTE}"]
    return _report("sweep", _echo(args, "alpha r s N") | {"sweep": args.sweep}, results, notes), 0


# ---------------------------------------------------------------------------
# entry point


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ssp",
        description="Exact superspecial unitary module computations and eigensystem-count bounds.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_fmt(p):
        p.add_argument("--csv", action="store_true", help="CSV output instead of JSON")

    p = sub.add_parser("bound", help="eigensystem-count bound pipeline")
    for flag in ("--p", "--alpha", "--r", "--s", "--N"):
        p.add_argument(flag, type=int, required=True)
    add_fmt(p)
    p.set_defaults(handler=_cmd_bound)

    p = sub.add_parser("group", help="exact order of a finite group family")
    p.add_argument("--family", required=True, help="su | u | gu | gusplit | gsp")
    p.add_argument("--params", required=True, help="comma-separated parameters")
    p.add_argument("--oracle", action="store_true", help="also run the enumeration oracle")
    add_fmt(p)
    p.set_defaults(handler=_cmd_group)

    p = sub.add_parser("newton", help="Newton polygon of a JSON module spec")
    p.add_argument("file")
    add_fmt(p)
    p.set_defaults(handler=_cmd_newton)

    p = sub.add_parser("pairing", help="mod-p pairing and automorphism group of the model")
    for flag in ("--p", "--alpha", "--r", "--s"):
        p.add_argument(flag, type=int, required=True)
    p.add_argument("--n", type=int, default=None, help="truncation level (default 2)")
    add_fmt(p)
    p.set_defaults(handler=_cmd_pairing)

    p = sub.add_parser("amf", help="equivariant-function dimension on a coset fixture")
    p.add_argument("space_file")
    p.add_argument("rep_file")
    add_fmt(p)
    p.set_defaults(handler=_cmd_amf)

    p = sub.add_parser("verify", help="run the formula-vs-oracle suite")
    p.add_argument("--level", default="quick", help="quick | full")
    add_fmt(p)
    p.set_defaults(handler=_cmd_verify)

    p = sub.add_parser("sweep", help="bound pipeline over a range of primes")
    p.add_argument("--sweep", required=True, help="prime range, e.g. 3:13")
    for flag in ("--alpha", "--r", "--s", "--N"):
        p.add_argument(flag, type=int, required=True)
    add_fmt(p)
    p.set_defaults(handler=_cmd_sweep)

    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        report, code = args.handler(args)
    except ValidationError as e:
        _emit(_report(args.command, {}, {"error": str(e)}, status="error"), args.csv)
        return 2
    except InsufficientPrecisionError as e:
        _emit(_report(args.command, {}, {"error": str(e)}, status="error"), args.csv)
        return 3
    except BudgetExceededError as e:
        _emit(_report(args.command, {}, {"error": str(e)}, status="error"), args.csv)
        return 4
    except FileNotFoundError as e:
        _emit(_report(args.command, {}, {"error": str(e)}, status="error"), args.csv)
        return 2
    except SspError as e:
        # formula regressions and other internal inconsistencies
        _emit(_report(args.command, {}, {"error": str(e)}, status="error"), args.csv)
        return 1
    _emit(report, args.csv)
    return code


if __name__ == "__main__":
    sys.exit(main())
