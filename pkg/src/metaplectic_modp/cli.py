"""Command-line front end.

Every command prints one report to stdout: a JSON object with
``"schema": 1``, the full run configuration, the command name and its
result (or, with ``--format csv``, a ``# config`` comment line followed by a
CSV table).  Diagnostics such as timings go to stderr, so reports are
byte-identical across runs with the same configuration.

Exit codes: 0 on success, 1 when a verification suite fails, 2 on usage errors.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import re
import sys
import time

from .arith import FieldElement, PadicField, hilbert_symbol
from .characters import (
    AdditiveCharDescriptor,
    GenuineTorusChar,
    chi_psi,
    dictionary_case,
    lambda_param,
    ps_parameters,
    twist_parameters,
    weil_index,
)
from .config import RunConfig
from .cosets import CosetRep, coset_reps, count_cartan_iwasawa, identity_rep, sphere_size
from .hecke import (
    Section,
    ball_dim,
    cokernel_dim,
    free_basis,
    hecke_apply_oracle,
    hecke_power,
    satake_eval,
    satake_expected,
)
from .metaplectic import Mat2, MetaElem, cocycle_gl2, commutator_witness, nonsquare_unit, phi, preferred_lift, product
from .verify import SUITES, run_suite
from .weights import as_weight, is_admissible_pair, weight_dict, weight_module

SCHEMA = 1


class UsageError(Exception):
    """Bad argument value (reported with exit code 2)."""


# -- argument parsing helpers ---------------------------------------------------------------

_ELEMENT = re.compile(r"^\s*(?:(\[\d+\])|(-?\d+))?\s*(\*)?\s*(?:p(?:\^(-?\d+))?)?\s*$")


def parse_element(F: PadicField, text: str) -> FieldElement:
    """Parse ``5``, ``-1``, ``[2]`` (Teichmuller lift of residue code 2), ``p``, ``p^-2``, ``[2]*p^3``, ``3*p``."""
    m = _ELEMENT.match(text)
    if not m or not text.strip() or (m.group(3) and not (m.group(1) or m.group(2))):
        raise UsageError(f"cannot parse field element {text!r}")
    teich, integer, star, power = m.groups()
    has_p = "p" in text
    if star and not has_p:
        raise UsageError(f"cannot parse field element {text!r}")
    if teich:
        code = int(teich[1:-1])
        if not 0 <= code < F.q:
            raise UsageError(f"residue code {code} out of range [0, {F.q})")
        x = F.teichmuller(code)
    elif integer:
        x = F.from_int(int(integer))
    else:
        x = F.one()
    if has_p:
        x = x * F.pi_power(int(power) if power is not None else 1)
    return x


def parse_matrix(F: PadicField, text: str) -> Mat2:
    parts = [t for t in text.split(",")]
    if len(parts) != 4:
        raise UsageError(f"a matrix is four comma-separated entries a,b,c,d; got {text!r}")
    g = Mat2(*(parse_element(F, t) for t in parts))
    if g.det() != F.one():
        raise UsageError(f"matrix {text!r} is not in SL_2")
    return g


def parse_weight(F: PadicField, text: str) -> tuple[int, ...]:
    try:
        vals = [int(t) for t in text.split(",")]
        return as_weight(F, vals if len(vals) > 1 else vals[0])
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def parse_section(F: PadicField, r, text: str | None) -> Section:
    """A section as JSON ``[{"rep": {...}, "vector": [...]}, ...]`` (or ``@file``); default [1, highest weight]."""
    V = weight_module(F, r)
    if text is None:
        return Section.basic(F, r, identity_rep(), V.highest_weight())
    if text.startswith("@"):
        with open(text[1:]) as fh:
            text = fh.read()
    try:
        rows = json.loads(text)
        sec = Section.from_json(F, r, rows)
    except (ValueError, KeyError, TypeError) as exc:
        raise UsageError(f"bad section: {exc}") from None
    for row in rows:
        if len(row["vector"]) != V.dim:
            raise UsageError(f"vectors must have length dim V_r = {V.dim}")
    return sec


def parse_mu_pi(F: PadicField, text: str) -> int:
    if text == "g":
        return F.E.generator()
    try:
        v = int(text)
    except ValueError:
        raise UsageError("--mu-pi is a nonzero code in E or 'g' for the generator") from None
    if not 0 < v < F.E.size:
        raise UsageError(f"--mu-pi must be in [1, {F.E.size})")
    return v


def _elem(x: FieldElement):
    return x.to_json()


def _rep_row(rep: CosetRep) -> dict:
    return {"label": str(rep), **rep.to_json()}


# -- command handlers ----------------------------------------------------------------------
# Each returns (result, rows): ``result`` is embedded in the JSON report and
# ``rows`` (a list of flat dicts) is the CSV rendering.

def cmd_symbols_hilbert(F, args, cfg):
    a, b = parse_element(F, args.a), parse_element(F, args.b)
    if a.is_zero() or b.is_zero():
        raise UsageError("the Hilbert symbol needs nonzero arguments")
    val = hilbert_symbol(a, b)
    return {"a": _elem(a), "b": _elem(b), "hilbert": val}, [{"a": args.a, "b": args.b, "hilbert": val}]


def cmd_symbols_table(F, args, cfg):
    eps = nonsquare_unit(F)
    pi = F.uniformizer()
    classes = {"1": F.one(), "eps": eps, "p": pi, "eps*p": eps * pi}
    rows = [{"a": na, "b": nb, "hilbert": hilbert_symbol(a, b)} for na, a in classes.items() for nb, b in classes.items()]
    return {"square_classes": {k: _elem(v) for k, v in classes.items()}, "table": rows}, rows


def cmd_meta_phi(F, args, cfg):
    ns = [args.n] if args.n is not None else list(range(8))
    rows = [{"n": n, "phi": phi(F, n)} for n in ns]
    return {"phi": rows}, rows


def cmd_meta_lift(F, args, cfg):
    x = parse_element(F, args.x)
    if args.kind in ("h", "w") and x.is_zero():
        raise UsageError(f"{args.kind}~(x) needs x != 0")
    lift = preferred_lift(args.kind, x)
    return {"kind": args.kind, "x": _elem(x), "lift": lift.to_json()}, [{"kind": args.kind, "x": args.x, "zeta": lift.zeta}]


def cmd_meta_cocycle(F, args, cfg):
    g1, g2 = parse_matrix(F, args.g1), parse_matrix(F, args.g2)
    val = cocycle_gl2(g1, g2)
    return {"g1": g1.to_json(), "g2": g2.to_json(), "cocycle": val}, [{"g1": args.g1, "g2": args.g2, "cocycle": val}]


def cmd_meta_commutator(F, args, cfg):
    factors = commutator_witness(F)
    prod = product(factors, F)
    rows = [{"factor": i, "zeta": f.zeta} for i, f in enumerate(factors)]
    return {"factors": [f.to_json() for f in factors], "product": prod.to_json()}, rows


def cmd_cosets_reps(F, args, cfg):
    reps = coset_reps(F, args.n)
    rows = [{"label": str(r), "kind": r.kind, "n": r.n, "kappa": "".join(map(str, r.kappa))} for r in reps]
    return {"n": args.n, "count": len(reps), "expected": sphere_size(F.q, args.n),
            "reps": [_rep_row(r) for r in reps]}, rows


def cmd_cosets_count(F, args, cfg):
    if args.zeta not in (1, -1):
        raise UsageError("--zeta must be 1 or -1")
    if args.n < 0:
        raise UsageError("--n must be >= 0")
    methods = ["closed", "brute"] if args.method == "both" else [args.method]
    out = {"n": args.n, "m": args.m, "zeta": args.zeta, "side": args.side}
    for meth in methods:
        try:
            out[meth] = count_cartan_iwasawa(F, args.n, args.m, args.zeta, args.side, meth,
                                             max_depth=2 * cfg.depth)
        except ValueError as exc:
            raise UsageError(str(exc)) from None
    if args.method == "both":
        out["agree"] = out["closed"] == out["brute"]
    return out, [out]


def cmd_weights_module(F, args, cfg):
    V = weight_module(F, parse_weight(F, args.r))
    g = F.k.generator()
    mats = {"u(1)": V.u(1), "ubar(1)": V.ubar(1), "w(1)": V.w(1), f"h({g})": V.h(g)}
    result = {"r": list(V.r), "dim": V.dim, "monomials": [list(m) for m in V.monomials()],
              "matrices": {k: M.tolist() for k, M in mats.items()}}
    rows = [{"matrix": k, "row": i, "entries": " ".join(map(str, row))} for k, M in mats.items() for i, row in enumerate(M.tolist())]
    return result, rows


def cmd_weights_dict(F, args, cfg):
    r = parse_weight(F, args.r)
    partners = sorted(weight_dict(F, r))
    rows = [{"r": ",".join(map(str, r)), "partner": ",".join(map(str, s))} for s in partners]
    return {"r": list(r), "partners": [list(s) for s in partners]}, rows


def cmd_weights_invariants(F, args, cfg):
    V = weight_module(F, parse_weight(F, args.r))
    inv = V.u_invariants()
    ker = V.coinvariant_kernel()
    rows = [{"vector": i, "entries": " ".join(map(str, v))} for i, v in enumerate(inv.tolist())]
    return {"r": list(V.r), "u_invariants": inv.tolist(), "coinvariant_dim": V.dim - len(ker)}, rows


def _section_rows(sec: Section) -> list[dict]:
    return [{"rep": str(rep), "vector": " ".join(map(str, sec.data[rep]))} for rep in sec.support()]


def cmd_hecke_apply(F, args, cfg):
    r = parse_weight(F, args.r)
    sec = parse_section(F, r, args.section)
    out = hecke_power(F, r, sec, args.power)
    return {"r": list(r), "power": args.power, "input": sec.to_json(), "output": out.to_json()}, _section_rows(out)


def cmd_hecke_oracle(F, args, cfg):
    r = parse_weight(F, args.r)
    s = parse_weight(F, args.s) if args.s is not None else r
    sec = parse_section(F, r, args.section)
    out = hecke_apply_oracle(F, args.n, r, s, sec)
    return {"n": args.n, "r": list(r), "s": list(s), "admissible": is_admissible_pair(F, r, s),
            "input": sec.to_json(), "output": out.to_json()}, _section_rows(out)


def cmd_hecke_satake(F, args, cfg):
    r = parse_weight(F, args.r)
    s = parse_weight(F, args.s) if args.s is not None else r
    ms = [args.m] if args.m is not None else list(range(-args.n - 1, args.n + 2))
    rows = []
    for m in ms:
        row = {"n": args.n, "m": m, "expected": satake_expected(F, args.n, r, s, m)}
        for meth in (["brute", "counts"] if args.method == "both" else [args.method]):
            depth = max(cfg.depth, args.n + abs(m)) if meth == "brute" else None
            val = satake_eval(F, args.n, r, s, m, depth=depth, method=meth)
            row[meth] = val.value
            row[f"{meth}_by_sign"] = " ".join(f"{z:+d}:{c}:{v}" for z, (c, v) in sorted(val.by_sign.items()))
        rows.append(row)
    return {"r": list(r), "s": list(s), "values": rows}, rows


def cmd_hecke_freebasis(F, args, cfg):
    r = parse_weight(F, args.r)
    N = args.N if args.N is not None else cfg.depth
    B = free_basis(F, r, N)
    rows = [{"sphere": j, "generators": len(g)} for j, g in sorted(B.generators.items())]
    return {"r": list(r), "N": N, "size": len(B.elements), "ball_dim": ball_dim(F, r, N),
            "rank": B.echelon.rank, "generators": rows}, rows


def cmd_hecke_cokernel(F, args, cfg):
    r = parse_weight(F, args.r)
    N = args.N if args.N is not None else cfg.depth
    if not 0 <= args.lam < F.E.size:
        raise UsageError(f"--lam is a code in E, i.e. in [0, {F.E.size})")
    lam = args.lam
    d = cokernel_dim(F, r, lam, N)
    row = {"lambda": lam, "N": N, "ball_dim": ball_dim(F, r, N), "cokernel_dim": d}
    return dict(row, r=list(r)), [dict(row, r=",".join(map(str, r)))]


def _psi(F, args):
    try:
        return AdditiveCharDescriptor(F, args.m)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _char(F, args):
    return GenuineTorusChar(_psi(F, args), parse_mu_pi(F, args.mu_pi), parse_weight(F, args.mu_r))


def _param_rows(params) -> list[dict]:
    return [dict(P.to_json(), r=",".join(map(str, P.r))) for c in sorted(params) for P in sorted(params[c])]


def cmd_chars_weil(F, args, cfg):
    a = parse_element(F, args.a)
    if a.is_zero():
        raise UsageError("the Weil index is undefined at 0")
    e = weil_index(a, _psi(F, args))
    row = {"a": args.a, "m": args.m, "i_exponent": e, "value": F.mu4_in_E(e)}
    return row, [row]


def cmd_chars_chi(F, args, cfg):
    from .metaplectic import h_mat

    a = parse_element(F, args.a)
    if a.is_zero():
        raise UsageError("chi_psi needs a != 0")
    if args.zeta not in (1, -1):
        raise UsageError("--zeta must be 1 or -1")
    row = {"a": args.a, "zeta": args.zeta, "m": args.m, "chi": chi_psi(MetaElem(h_mat(a), args.zeta), _psi(F, args))}
    return row, [row]


def cmd_chars_params(F, args, cfg):
    ch = _char(F, args)
    params = ps_parameters(ch)
    return {"m": args.m, "mu_r": list(ch.mu_r), "mu_pi": ch.mu_pi, "lambda": lambda_param(ch),
            "case": dictionary_case(ch),
            "parameters": {c: [P.to_json() for P in sorted(ps)] for c, ps in params.items()}}, _param_rows(params)


def cmd_chars_twist(F, args, cfg):
    ch = _char(F, args)
    a = parse_element(F, args.a)
    if a.is_zero():
        raise UsageError("twist needs a != 0")
    before, after = ps_parameters(ch), twist_parameters(ch, a)
    return {"a": _elem(a), "before": {c: [P.to_json() for P in sorted(ps)] for c, ps in before.items()},
            "after": {c: [P.to_json() for P in sorted(ps)] for c, ps in after.items()}}, _param_rows(after)


def cmd_verify_all(F, args, cfg):
    names = args.suite or list(SUITES)
    results = []
    for name in names:
        t0 = time.perf_counter()
        res = run_suite(name, cfg)
        print(f"{res.line()} ({time.perf_counter() - t0:.1f}s)", file=sys.stderr)
        results.append(res)
    failed = [r.name for r in results if not r.passed]
    result = {"suites": [r.to_json() for r in results], "passed": not failed, "failed": failed}
    rows = [{"suite": r.name, "passed": r.passed, "checks": r.checks, "failures": r.failure_count} for r in results]
    return result, rows


# -- parser -----------------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    d = RunConfig()
    common.add_argument("--p", type=int, default=argparse.SUPPRESS, help=f"odd prime (default {d.p})")
    common.add_argument("--f", type=int, default=argparse.SUPPRESS, help=f"residue degree (default {d.f})")
    common.add_argument("--precision", type=int, default=argparse.SUPPRESS,
                        help=f"p-adic digits kept (default {d.precision})")
    common.add_argument("--depth", type=int, default=argparse.SUPPRESS,
                        help=f"enumeration depth bound (default {d.depth})")
    common.add_argument("--seed", type=int, default=argparse.SUPPRESS, help=f"sampling seed (default {d.seed})")
    common.add_argument("--format", choices=("json", "csv"), default=argparse.SUPPRESS,
                        help="report format (default json)")

    parser = argparse.ArgumentParser(prog="metaplectic-modp", parents=[common],
                                     description="Mod-p Hecke algebras of the metaplectic SL_2 cover.")
    groups = parser.add_subparsers(dest="group", required=True)

    def group(name, help_):
        sp = groups.add_parser(name, help=help_, parents=[common])
        return sp.add_subparsers(dest="command", required=True)

    def leaf(sub, name, func, help_):
        sp = sub.add_parser(name, help=help_, parents=[common])
        sp.set_defaults(func=func)
        return sp

    g = group("symbols", "Hilbert symbols")
    sp = leaf(g, "hilbert", cmd_symbols_hilbert, "(a, b)_F")
    sp.add_argument("--a", required=True)
    sp.add_argument("--b", required=True)
    leaf(g, "table", cmd_symbols_table, "Hilbert symbol on the square classes")

    g = group("meta", "the double cover")
    sp = leaf(g, "phi", cmd_meta_phi, "signs of h~(p)^n")
    sp.add_argument("--n", type=int)
    sp = leaf(g, "lift", cmd_meta_lift, "preferred lift of u, ubar, w or h")
    sp.add_argument("--kind", choices=("u", "ubar", "w", "h"), required=True)
    sp.add_argument("--x", required=True)
    sp = leaf(g, "cocycle", cmd_meta_cocycle, "cocycle value on two matrices a,b,c,d")
    sp.add_argument("--g1", required=True)
    sp.add_argument("--g2", required=True)
    leaf(g, "commutator", cmd_meta_commutator, "the central sign as a product of commutator-subgroup elements")

    g = group("cosets", "coset representatives and Cartan-Iwasawa counts")
    sp = leaf(g, "reps", cmd_cosets_reps, "representatives of the sphere of radius n")
    sp.add_argument("--n", type=int, required=True)
    sp = leaf(g, "count", cmd_cosets_count, "count of the (n, m, zeta) intersection")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--m", type=int, required=True)
    sp.add_argument("--zeta", type=int, default=1)
    sp.add_argument("--method", choices=("closed", "brute", "both"), default="closed")
    sp.add_argument("--side", choices=("upper", "lower"), default="upper")

    g = group("weights", "weight modules")
    for name, func, help_ in (("module", cmd_weights_module, "dimension, basis and generator matrices"),
                              ("dict", cmd_weights_dict, "weights attached to the same character twisted by the quadratic one"),
                              ("invariants", cmd_weights_invariants, "U(k)-invariants and coinvariant dimension")):
        sp = leaf(g, name, func, help_)
        sp.add_argument("--r", required=True, help="weight, e.g. 2 or 1,2")

    g = group("hecke", "Hecke operators, Satake transform and freeness")
    sp = leaf(g, "apply", cmd_hecke_apply, "closed-form T_1 (iterated --power times)")
    sp.add_argument("--r", required=True)
    sp.add_argument("--section", help="JSON list of {rep, vector}, or @file; default [1, highest weight]")
    sp.add_argument("--power", type=int, default=1)
    sp = leaf(g, "oracle", cmd_hecke_oracle, "T_n^{r,s} by convolution")
    sp.add_argument("--n", type=int, default=1)
    sp.add_argument("--r", required=True)
    sp.add_argument("--s")
    sp.add_argument("--section")
    sp = leaf(g, "satake", cmd_hecke_satake, "Satake transform values at h~(p)^m")
    sp.add_argument("--n", type=int, default=1)
    sp.add_argument("--r", required=True)
    sp.add_argument("--s")
    sp.add_argument("--m", type=int)
    sp.add_argument("--method", choices=("brute", "counts", "both"), default="both")
    sp = leaf(g, "freebasis", cmd_hecke_freebasis, "free basis of the ball of radius N")
    sp.add_argument("--r", required=True)
    sp.add_argument("--N", type=int)
    sp = leaf(g, "cokernel", cmd_hecke_cokernel, "dim of ball_N modulo (T - lambda) ball_{N-1}")
    sp.add_argument("--r", required=True)
    sp.add_argument("--lam", type=int, default=0)
    sp.add_argument("--N", type=int)

    g = group("chars", "Weil indices, genuine characters and principal-series parameters")
    sp = leaf(g, "weil", cmd_chars_weil, "Weil index gamma_F(a, psi)")
    sp.add_argument("--a", required=True)
    sp.add_argument("--m", type=int, default=0, help="conductor of psi")
    sp = leaf(g, "chi", cmd_chars_chi, "chi_psi on (h(a), zeta)")
    sp.add_argument("--a", required=True)
    sp.add_argument("--zeta", type=int, default=1)
    sp.add_argument("--m", type=int, default=0)
    for name, func, help_ in (("params", cmd_chars_params, "weights and lambda of the principal series"),
                              ("twist", cmd_chars_twist, "parameters after psi -> psi_a")):
        sp = leaf(g, name, func, help_)
        sp.add_argument("--m", type=int, default=0)
        sp.add_argument("--mu-r", default="0", help="mu on units is delta_r")
        sp.add_argument("--mu-pi", default="g", help="mu(p) as a code in E, or g for the generator")
        if name == "twist":
            sp.add_argument("--a", required=True)

    sp = groups.add_parser("verify-all", help="run every verification suite", parents=[common])
    sp.add_argument("--suite", action="append", choices=SUITES, help="restrict to this suite (repeatable)")
    sp.set_defaults(func=cmd_verify_all, command=None)
    return parser


def render(report: dict, rows: list[dict], fmt: str) -> str:
    if fmt == "json":
        return json.dumps(report, sort_keys=True, indent=2) + "\n"
    buf = io.StringIO()
    buf.write("# config: " + json.dumps(report["config"], sort_keys=True) + "\n")
    fields = sorted({k for row in rows for k in row})
    writer = csv.DictWriter(buf, fieldnames=fields, lineterminator="\n")
    writer.writeheader()
    writer.writerows(rows)
    return buf.getvalue()


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    opts = {k: getattr(args, k) for k in ("p", "f", "precision", "depth", "seed", "format") if hasattr(args, k)}
    try:
        cfg = RunConfig(**opts)
        F = cfg.field()
        result, rows = args.func(F, args, cfg)
    except (UsageError, ValueError) as exc:
        parser.print_usage(sys.stderr)
        print(f"{parser.prog}: error: {exc}", file=sys.stderr)
        return 2
    command = args.group if args.command is None else f"{args.group} {args.command}"
    report = {"schema": SCHEMA, "config": cfg.to_json(), "command": command, "result": result}
    sys.stdout.write(render(report, rows, cfg.format))
    if args.group == "verify-all" and not result["passed"]:
        print(f"verification failed: {', '.join(result['failed'])}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
