"""Command-line interface: every command prints one JSON report (or a table with
--pretty) and exits 0 when all checks pass, 1 when a check fails, 2 on usage or
input errors.

Series literals are sums of terms ``c*t^(a/p^e)`` with an optional ``O(t^P)``,
for example ``t + t^3``, ``2*t^(1/3) - t^2 + O(t^5)`` or ``(g+1)*t^(3/2^2)``.
Field elements use the generator ``g``: ``g^2+1``, ``g``, ``1``.
"""
from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from typing import Sequence

import numpy as np

from . import __version__, acceptance, chaincond, moore, opg, shatter, valo
from .algebra import (
    GaloisField, PerfectionCapError, PrecisionError, SeriesRing, SeriesSyntaxError, gf_make,
    is_irreducible, parse_series, required_cap,
)
from .algebra.gf import has_factor_by_trial_division
from .valo import Report

SCHEMA = "ndep.report/1"


class UsageError(ValueError):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


# --- substrate helpers -----------------------------------------------------------

def _split(text: str, sep: str = ",") -> list[str]:
    """Split at top-level separators (not inside parentheses)."""
    out, depth, cur = [], 0, []
    for ch in text:
        depth += {"(": 1, ")": -1}.get(ch, 0)
        if ch == sep and depth == 0:
            out.append("".join(cur).strip())
            cur = []
        else:
            cur.append(ch)
    out.append("".join(cur).strip())
    return [x for x in out if x]


def _field(args) -> GaloisField:
    return gf_make(args.p, args.k)


def _is_series(lits: Sequence[str]) -> bool:
    return any("t" in x for x in lits)


def _elements(args, lits: Sequence[str], extra_cap: int = 0):
    """Parse literals as field elements, or as series when any literal mentions t."""
    F = _field(args)
    if not _is_series(lits):
        return [F.parse(x) for x in lits], {"kind": "gf", "p": F.p, "k": F.k, "modulus": list(F.modulus)}
    cap = args.cap
    if cap is None:
        cap = max(required_cap(x, F) for x in lits) + extra_cap
    ring = SeriesRing(F, cap)
    return [parse_series(x, ring) for x in lits], {"kind": "series", "p": F.p, "k": F.k,
                                                  "modulus": list(F.modulus), "cap": cap}


def _add_field(p: argparse.ArgumentParser, series: bool = True) -> None:
    p.add_argument("--p", type=int, required=True, help="characteristic")
    p.add_argument("--k", type=int, default=1, help="degree of the coefficient field (default 1)")
    if series:
        p.add_argument("--cap", type=int, default=None,
                       help="perfection cap N (exponents in (1/p^N)Z); derived from the input by default")


def _load_json(path: str):
    with open(path) as fh:
        return json.load(fh)


def _load_hypergraph(path: str) -> opg.Hypergraph:
    """A hypergraph file, or the report printed by ``opg gen``."""
    obj = _load_json(path)
    if isinstance(obj, dict) and isinstance(obj.get("data"), dict) and "hypergraph" in obj["data"]:
        obj = obj["data"]["hypergraph"]
    if not isinstance(obj, dict) or "parts" not in obj or "edges" not in obj:
        raise ValueError(f"{path}: expected an object with 'parts' and 'edges'")
    return opg.Hypergraph.from_json(obj)


def _load_relation(path: str) -> shatter.WitnessedRelation:
    with open(path) as fh:
        text = fh.read()
    if text.lstrip().startswith("{"):
        return shatter.WitnessedRelation.from_json(json.loads(text))
    return shatter.WitnessedRelation.from_text(text)


def _grid(text: str) -> tuple:
    return tuple(tuple(int(v) for v in _split(part)) if part.strip() else ()
                 for part in text.split(";"))


def _ints(text: str) -> list[int]:
    return [int(x) for x in _split(text)]


def _embedding(text: str) -> tuple:
    return tuple(tuple(int(v) for v in part.split(",") if v.strip()) for part in text.split(";"))


# --- commands -------------------------------------------------------------------------

def cmd_field(args) -> Report:
    F = _field(args)
    rep = Report("field")
    rep.data.update(p=F.p, k=F.k, q=len(F), modulus=list(F.modulus))
    rep.check("modulus irreducible (Ben-Or)", True, is_irreducible(F.modulus, F.p))
    rep.check("modulus irreducible (trial division)", True, not has_factor_by_trial_division(F.modulus, F.p))
    if args.elements:
        rep.data["elements"] = [F.format(x.value) for x in F]
    return rep


def cmd_moore(args) -> Report:
    cs, sub = _elements(args, _split(args.c))
    rep = Report("moore")
    rep.data["substrate"] = sub
    rep.data["matrix"] = [[str(x) for x in row] for row in moore.moore_matrix(cs)]
    det = moore.moore_det(cs)
    rep.data["det"] = str(det)
    indep = moore.is_fp_independent(cs)
    rep.data["independent"] = indep
    if sub["kind"] == "gf":
        rep.check("det test = exhaustive combinations", moore.fp_independent_bruteforce(cs), indep)
    return rep


def cmd_iso(args) -> Report:
    lits = _split(args.a)
    a, sub = _elements(args, lits, extra_cap=len(lits) - 1)
    if sub["kind"] == "series":
        iso = valo.with_precision(lambda rel: moore.build_iso(a, rel), a, args.precision)
    else:
        iso = moore.build_iso(a)
    rep = Report("iso")
    rep.data["substrate"] = sub
    rep.data["iso"] = iso.to_json()
    rep.check("alpha independent", True, moore.is_fp_independent(iso.alpha))
    if sub["kind"] == "gf":
        F = _field(args)
        pts = moore.ga_points(a)
        images = {moore.f_apply(iso, x) for x in pts}
        rep.check("|G_a(K)| = |K|", len(F), len(pts))
        rep.check("f is onto K", len(F), len(images))
        rep.check("f(f^-1(t)) = t", True, all(moore.f_apply(iso, moore.f_inv_apply(iso, t)) == t for t in F))
        rep.check("tfrob", True, all(moore.tfrob_check(iso, x, i) for x in pts for i in range(iso.m + 1)))
    else:
        profile = valo.ValProfile.of(a)
        direct = [x.valuation() for x in iso.alpha]
        rep.data["val_alpha"] = direct
        if profile.is_sorted:
            rep.data["closed_form"] = valo.alpha_val_closed_form(profile)
            rep.check("val(alpha) closed form", rep.data["closed_form"], direct)
    return rep


def _series_args(args, names: Sequence[str], extra: int):
    """Parse ``--a`` and the named single-literal options into one ring."""
    lits = _split(args.a)
    singles = [getattr(args, n) for n in names]
    elems, sub = _elements(args, lits + singles, extra_cap=extra)
    if sub["kind"] != "series":
        raise UsageError("valo commands need series literals in t")
    return elems[:len(lits)], elems[len(lits):], sub


def cmd_valo(args) -> Report:
    if args.valo_cmd == "alpha":
        a, _, sub = _series_args(args, [], len(_split(args.a)) - 1)
        rep = valo.verify_alpha_vals(a, args.precision)
    elif args.valo_cmd == "preimage":
        a, (y,), sub = _series_args(args, ["y"], len(_split(args.a)) - 1)
        rep = valo.preimage_valuations(a, y, args.precision).report
    elif args.valo_cmd == "rho":
        lits = _split(args.a)
        a, sub = _elements(args, lits, extra_cap=len(lits) - 1)
        fit = valo.rho_prime_fit(a, args.precision) if sub["kind"] == "series" else valo.rho_prime_fit(a)
        rep = Report("rho-prime")
        rep.data.update(gammas=[str(g) for g in fit.gammas], c=str(fit.c))
        if sub["kind"] == "gf":
            F = _field(args)
            rep.check("rho'(t) = c(t^p - t) on K", True,
                      all(fit.compose(t) == fit.c * (t.frobenius(1) - t) for t in F))
            rep.check("|ker rho'|", F.p, sum(1 for t in F if fit.compose(t).is_zero()))
        else:
            rep.check("gamma_0 = -gamma_1", True, moore.same(fit.gammas[0], -fit.gammas[1]))
    elif args.valo_cmd == "pipeline":
        a, (y,), sub = _series_args(args, ["y"], len(_split(args.a)) - 1)
        rep = valo.as_root_in_maximal_ideal(a, y, args.precision).report
    elif args.valo_cmd == "bgrid":
        F = _field(args)
        cap = args.cap if args.cap is not None else required_cap(args.y, F) + args.n * args.ell * args.gap
        ring = SeriesRing(F, cap)
        y = parse_series(args.y, ring)
        sub = {"kind": "series", "p": F.p, "k": F.k, "modulus": list(F.modulus), "cap": cap}
        rep = valo.build_b_grid(args.n, args.ell, y, args.gap, args.schedule).report
    else:  # pragma: no cover - argparse enforces the choice
        raise UsageError(f"unknown valo command {args.valo_cmd}")
    rep.data["substrate"] = sub
    return rep


def cmd_shatter(args) -> Report:
    c = args.shatter_cmd
    if c == "decide":
        rel = _load_relation(args.relation)
        grid = _grid(args.grid)
        rep = Report("shatter-decide")
        fast = shatter.shatters(rel, grid)
        rep.data.update(parts=list(rel.parts), witnesses=rel.num_witnesses,
                        grid=[list(g) for g in grid], shattered=fast)
        cells = int(np.prod([len(g) for g in grid]))
        if cells <= 9:
            rep.check("fast = naive", shatter.shatters_naive(rel, grid), fast)
        return rep
    if c == "max":
        rel = _load_relation(args.relation)
        caps = _ints(args.caps) if args.caps else None
        res = shatter.max_shattered_grid(rel, caps)
        rep = Report("shatter-max")
        rep.data.update(res.to_json())
        if args.oracle:
            rep.check("side = naive side", shatter.max_shattered_grid_naive(rel, caps), res.side)
        return rep
    if c == "compose":
        F = gf_make(args.q, 1) if args.q < 4 or all(args.q % d for d in range(2, args.q)) else None
        if F is None:
            raise UsageError("--q must be prime")
        add, mul = shatter.gf_tables(F)
        funcs = _split(args.functions)
        coords = [tuple(int(ch) for ch in x) for x in _split(args.coords)]
        d = len(funcs)
        if args.base == "sum-zero":
            R = np.zeros((args.q,) * d, dtype=bool)
            for w in np.ndindex(*R.shape):
                R[w] = sum(w) % args.q == 0
        else:
            if args.seed is None:
                raise UsageError("--base random needs --seed")
            rng = np.random.Generator(np.random.PCG64(args.seed))
            R = rng.random((args.q,) * d) < float(Fraction(args.density))
        tables = {"add": add, "mul": mul, "first": np.tile(np.arange(args.q)[:, None], (1, args.q)),
                  "zero": np.zeros((args.q, args.q), dtype=np.int64)}
        for f in funcs:
            if f not in tables:
                raise UsageError(f"unknown function {f!r}; choose from {sorted(tables)}")
        rel = shatter.compose_relation(R, coords, [tables[f] for f in funcs])
        res = shatter.max_shattered_grid(rel)
        rep = Report("shatter-compose")
        rep.data.update(q=args.q, base=args.base, functions=funcs, coords=[list(x) for x in coords],
                        distinct_witness_rows=len({w.tobytes() for w in rel.bits}), **res.to_json())
        rep.check("max side = naive max side", shatter.max_shattered_grid_naive(rel), res.side)
        return rep
    if c == "bilinear":
        F = _field(args)
        space = (shatter.identity_space(F, args.m) if args.form == "identity"
                 else shatter.symplectic_space(F, args.m // 2))
        demo = shatter.bilinear_shatter_demo(space, args.d)
        rep = Report("shatter-bilinear")
        rep.data.update(field={"p": F.p, "k": F.k}, form=args.form, dim=space.dim, **demo.to_json())
        rep.check("entries pairwise distinct", True, demo.distinct)
        rep.check("[a_i, b_j] = C_ij", True, demo.encoded)
        rep.check("grid shattered", True, demo.shattered)
        return rep
    if c == "ramsey":
        res = shatter.ramsey_partite(args.l, args.m, args.n, args.budget)
        rep = Report("shatter-ramsey")
        rep.data.update(res.to_json())
        if args.verify:
            upper, lower = shatter.verify_ramsey(res)
            rep.check("every colouring of R^n has a box", True, upper)
            rep.check("bad colouring of (R-1)^n has none", True, lower)
        return rep
    if c == "blindpair":
        if args.hypergraph:
            H = _load_hypergraph(args.hypergraph)
        else:
            if args.seed is None:
                raise UsageError("a random hypergraph needs --seed")
            H = opg.random_opg(_ints(args.sizes), Fraction(args.density), args.seed)
        if H.n != 3:
            raise UsageError("blind pairs are searched for 3-partite hypergraphs")
        if args.binary:
            rels = [frozenset(tuple(e) for e in r) for r in _load_json(args.binary)]
        else:
            if args.random_binary and args.seed is None:
                raise UsageError("random binary relations need --seed")
            rng = np.random.Generator(np.random.PCG64(0 if args.seed is None else args.seed + 1))
            total = sum(H.sizes)
            rels = [frozenset(tuple(int(v) for v in x) for x in np.argwhere(rng.random((total, total)) < 0.5))
                    for _ in range(args.random_binary)]
        pair = shatter.find_lowarity_blind_pair(H, rels)
        rep = Report("shatter-blindpair")
        rep.data.update(hypergraph=H.to_json() if args.echo else {"parts": list(H.sizes), "edges": len(H.edges)},
                        relations=len(rels), pair=None if pair is None else [list(pair[0]), list(pair[1])])
        if pair is not None:
            rep.check("equal patterns, edge vs non-edge", True, shatter.verify_blind_pair(H, rels, pair))
        return rep
    raise UsageError(f"unknown shatter command {c}")  # pragma: no cover


def cmd_opg(args) -> Report:
    c = args.opg_cmd
    if c == "gen":
        H = opg.random_opg(_ints(args.sizes), Fraction(args.density), args.seed)
        rep = Report("opg-gen")
        rep.data["hypergraph"] = H.to_json()
        return rep
    if c == "check":
        H = _load_hypergraph(args.hypergraph)
        res = opg.check_extension(H, args.k)
        rep = Report("opg-check")
        rep.data.update(res.to_json(limit=args.limit))
        if args.oracle:
            slow = opg.check_extension_naive(H, args.k)
            rep.check("failures = naive scan", len(slow.failures), len(res.failures),
                      slow.failures == res.failures)
        return rep
    if c == "copy":
        H = _load_hypergraph(args.hypergraph)
        P = _load_hypergraph(args.pattern)
        box = None
        if args.box:
            box = [tuple(int(v) for v in part.split("-")) for part in args.box.split(",")]
        emb = opg.find_induced_copy(H, P, box)
        rep = Report("opg-copy")
        rep.data["embedding"] = None if emb is None else [list(x) for x in emb]
        if emb is not None:
            rep.check("embedding is induced", True, opg.is_induced_embedding(P, H, emb))
        if args.oracle:
            rep.check("equals naive search", opg.find_induced_copy_naive(H, P, box), emb)
        return rep
    if c == "amalgamate":
        A = _load_hypergraph(args.a)
        B = _load_hypergraph(args.b)
        C = _load_hypergraph(args.c)
        am = opg.amalgamate(A, B, C, _embedding(args.into_a), _embedding(args.into_b))
        rep = Report("opg-amalgamate")
        rep.data.update(am.to_json())
        rep.check("A embeds induced", True, opg.is_induced_embedding(A, am.result, am.embed_a))
        rep.check("B embeds induced", True, opg.is_induced_embedding(B, am.result, am.embed_b))
        return rep
    raise UsageError(f"unknown opg command {c}")  # pragma: no cover


def cmd_chaincond(args) -> Report:
    F = _field(args)
    fam = (chaincond.product_wp_family,)
    if args.chain_cmd == "redundant":
        params = [[F.parse(x) for x in _split(row)] for row in args.params.split(";")]
        fa = chaincond.FamilyArray(params, fam)
        nu = chaincond.find_redundant(fa)
        rep = Report("chaincond-redundant")
        verified = nu is not None and chaincond.redundant_by_elements(fa, nu)
        rep.data.update(d=fa.d, n=fa.n, nu=None if nu is None else list(nu), verified=verified,
                        families=len(fam), array=fa.to_json())
        if nu is not None:
            rep.check("nu verified by element sets", True, verified)
        return rep
    spec = chaincond.FamilySpec(F, args.n, fam)
    th = chaincond.baldwin_saxl_threshold(spec, args.trials, args.seed, args.max_d)
    rep = Report("chaincond-threshold")
    # any k+1 hyperplanes of F_p^k contain a redundant one, so d^n >= k+1 suffices
    bound = 1
    while bound ** args.n < F.k + 1:
        bound += 1
    rep.data.update(th.to_json(), families=len(fam), dimension_bound=bound)
    rep.check("empirical threshold <= dimension bound", bound, th.d, th.d <= bound)
    return rep


def cmd_suite(args) -> Report:
    only = set(_ints(args.only)) if args.only else None
    results = acceptance.run_suite(args.seed, only)
    rep = Report("acceptance")
    for r in results:
        payload = r.to_json()
        if not args.timings:
            payload.pop("seconds")
        rep.data[f"criterion_{r.number}"] = payload
        rep.check(f"{r.number}. {r.title}", True, r.passed)
    return rep


# --- parser -------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--pretty", action="store_true", help="human-readable table instead of JSON")
    parser = _Parser(prog="ndep", description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    parser.add_argument("--version", action="version", version=f"ndep {__version__}")
    sub = parser.add_subparsers(dest="cmd", required=True, parser_class=_Parser)

    p = sub.add_parser("field", parents=[common], help="Galois field data")
    _add_field(p, series=False)
    p.add_argument("--elements", action="store_true")

    p = sub.add_parser("moore", parents=[common], help="Moore determinant and F_p-independence")
    _add_field(p)
    p.add_argument("--c", required=True, help="comma-separated elements or series")

    p = sub.add_parser("iso", parents=[common], help="isomorphism data for G_a")
    _add_field(p)
    p.add_argument("--a", required=True)
    p.add_argument("--precision", type=Fraction, default=None,
                   help="starting relative precision for exact series (doubled until certified)")

    p = sub.add_parser("valo", help="valuation analysis")
    vsub = p.add_subparsers(dest="valo_cmd", required=True, parser_class=_Parser)
    for name, extra in (("alpha", []), ("preimage", ["y"]), ("rho", []), ("pipeline", ["y"])):
        q = vsub.add_parser(name, parents=[common])
        _add_field(q)
        q.add_argument("--a", required=True, help="comma-separated series (or field elements for rho)")
        for e in extra:
            q.add_argument(f"--{e}", required=True)
        q.add_argument("--precision", type=Fraction, default=None,
                       help="starting relative precision for exact series (doubled until certified)")
    q = vsub.add_parser("bgrid", parents=[common])
    _add_field(q)
    q.add_argument("--n", type=int, required=True)
    q.add_argument("--ell", type=int, required=True)
    q.add_argument("--y", required=True)
    q.add_argument("--gap", type=int, required=True)
    q.add_argument("--schedule", choices=valo.SCHEDULES, default="block")

    p = sub.add_parser("shatter", help="grid shattering and related searches")
    ssub = p.add_subparsers(dest="shatter_cmd", required=True, parser_class=_Parser)
    q = ssub.add_parser("decide", parents=[common])
    q.add_argument("--relation", required=True, help="JSON or text relation file")
    q.add_argument("--grid", required=True, help="per-part indices, e.g. '0,1;2,3'")
    q = ssub.add_parser("max", parents=[common])
    q.add_argument("--relation", required=True)
    q.add_argument("--caps", default=None)
    q.add_argument("--oracle", action="store_true")
    q = ssub.add_parser("compose", parents=[common])
    q.add_argument("--q", type=int, required=True, help="prime size of M = F_q")
    q.add_argument("--base", choices=("sum-zero", "random"), default="sum-zero")
    q.add_argument("--functions", default="mul,mul,mul", help="add, mul, first or zero per coordinate")
    q.add_argument("--coords", default="12,13,23")
    q.add_argument("--density", default="1/2")
    q.add_argument("--seed", type=int, default=None)
    q = ssub.add_parser("bilinear", parents=[common])
    _add_field(q, series=False)
    q.add_argument("--m", type=int, required=True, help="dimension of V")
    q.add_argument("--form", choices=("identity", "symplectic"), default="identity")
    q.add_argument("--d", type=int, required=True)
    q = ssub.add_parser("ramsey", parents=[common])
    q.add_argument("--l", type=int, required=True)
    q.add_argument("--m", type=int, required=True)
    q.add_argument("--n", type=int, required=True)
    q.add_argument("--budget", type=int, default=1_000_000)
    q.add_argument("--verify", action="store_true", help="recheck both directions without pruning")
    q = ssub.add_parser("blindpair", parents=[common])
    q.add_argument("--hypergraph", default=None)
    q.add_argument("--sizes", default="6,6,6")
    q.add_argument("--density", default="1/2")
    q.add_argument("--binary", default=None, help="JSON list of relations, each a list of vertex pairs")
    q.add_argument("--random-binary", type=int, default=1)
    q.add_argument("--seed", type=int, default=None)
    q.add_argument("--echo", action="store_true")

    p = sub.add_parser("opg", help="ordered partite hypergraphs")
    osub = p.add_subparsers(dest="opg_cmd", required=True, parser_class=_Parser)
    q = osub.add_parser("gen", parents=[common])
    q.add_argument("--sizes", required=True)
    q.add_argument("--density", default="1/2")
    q.add_argument("--seed", type=int, required=True)
    q = osub.add_parser("check", parents=[common])
    q.add_argument("--hypergraph", required=True)
    q.add_argument("--k", type=int, default=1)
    q.add_argument("--limit", type=int, default=20, help="failures listed in the report")
    q.add_argument("--oracle", action="store_true")
    q = osub.add_parser("copy", parents=[common])
    q.add_argument("--hypergraph", required=True)
    q.add_argument("--pattern", required=True)
    q.add_argument("--box", default=None, help="half-open intervals per part, e.g. '0-4,2-8'")
    q.add_argument("--oracle", action="store_true")
    q = osub.add_parser("amalgamate", parents=[common])
    for name in ("a", "b", "c"):
        q.add_argument(f"--{name}", required=True)
    q.add_argument("--into-a", required=True, help="per-part images of C in A, e.g. '0,2;1'")
    q.add_argument("--into-b", required=True)

    p = sub.add_parser("chaincond", help="chain condition for b*(x^p - x)(K) families")
    csub = p.add_subparsers(dest="chain_cmd", required=True, parser_class=_Parser)
    q = csub.add_parser("redundant", parents=[common])
    _add_field(q, series=False)
    q.add_argument("--params", required=True, help="rows separated by ';', entries by ','")
    q = csub.add_parser("threshold", parents=[common])
    _add_field(q, series=False)
    q.add_argument("--n", type=int, default=1)
    q.add_argument("--trials", type=int, required=True)
    q.add_argument("--seed", type=int, required=True)
    q.add_argument("--max-d", type=int, default=8)

    p = sub.add_parser("suite", parents=[common], help="run the acceptance battery")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--only", default=None, help="comma-separated criterion numbers")
    p.add_argument("--timings", action="store_true", help="include wall-clock seconds in the report")
    return parser


HANDLERS = {"field": cmd_field, "moore": cmd_moore, "iso": cmd_iso, "valo": cmd_valo,
            "shatter": cmd_shatter, "opg": cmd_opg, "chaincond": cmd_chaincond, "suite": cmd_suite}


def _pretty(payload: dict) -> str:
    lines = [f"{payload['report']}: {'PASS' if payload['pass'] else 'FAIL'}"]
    for k, v in payload.get("data", {}).items():
        text = json.dumps(v) if not isinstance(v, str) else v
        if len(text) > 100:
            text = text[:97] + "..."
        lines.append(f"  {k}: {text}")
    checks = payload.get("checks", [])
    if checks:
        w = max(len(c["claim"]) for c in checks)
        lines.append("")
        lines.append(f"  {'claim'.ljust(w)}  result  expected / computed")
        for c in checks:
            lines.append(f"  {c['claim'].ljust(w)}  {'pass' if c['pass'] else 'FAIL':6}  "
                         f"{json.dumps(c['expected'])} / {json.dumps(c['computed'])}")
    return "\n".join(lines)


def _emit(payload: dict, pretty: bool) -> None:
    if pretty and "report" in payload:
        print(_pretty(payload))
    else:
        print(json.dumps(payload, indent=None if not pretty else 2, sort_keys=False, default=str))


def main(argv: Sequence[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    base = {"schema": SCHEMA, "version": __version__, "command": argv}
    pretty = "--pretty" in argv
    try:
        args = build_parser().parse_args(argv)
    except UsageError as exc:
        _emit({**base, "error": {"type": "usage", "message": str(exc)}}, False)
        return 2
    base["seed"] = getattr(args, "seed", None)
    try:
        rep = HANDLERS[args.cmd](args)
    except (UsageError, SeriesSyntaxError, ValueError, OSError, json.JSONDecodeError,
            KeyError, TypeError, PerfectionCapError) as exc:
        _emit({**base, "error": {"type": type(exc).__name__, "message": str(exc)}}, False)
        return 2
    except (PrecisionError, AssertionError, shatter.BudgetExceeded, chaincond.BudgetExceeded) as exc:
        _emit({**base, "error": {"type": type(exc).__name__, "message": str(exc)}, "pass": False}, False)
        return 1
    payload = {**base, **rep.to_json()}
    _emit(payload, pretty)
    return 0 if rep.ok else 1


if __name__ == "__main__":
    sys.exit(main())
