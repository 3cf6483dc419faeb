"""Command-line surface: named lattices, discriminant/genus records, the
verification suites, towers, relatedness, and the even-set search.

Output is canonical JSON (sorted keys, compact separators, rationals as
"p/q" strings) so identical invocations are byte-identical; wall times
appear only in the human-readable listing.  Exit codes: 0 all pass, 1 any
failed check (or golden mismatch), 2 inconclusive (search budget hit) or
unusable parameters.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Iterable, Iterator

from .catalog import (
    FamilyDescriptor,
    build_Mn,
    family_genus,
    family_lattice,
    mn_build_report,
    named,
    resolve_name,
)
from .forms import (
    FiniteQuadraticForm,
    SearchBudgetExceeded,
    _value_table,
    cyclic_block,
    find_u_block,
    forms_isomorphic,
    group_invariants,
    length,
    milgram_signature,
    sum_forms,
    u_block,
)
from .lattice import (
    IntegralLattice,
    direct_sum,
    discriminant_form,
    from_rows,
    is_primitive,
)
from .nsgeometry import (
    _check,
    _entry,
    build_X2,
    find_even_sets,
    known_even_sets,
    ue8_report,
    un_report,
    x2_report,
)
from .overlattice import (
    GenusDescriptor,
    genus_equal,
    genus_lemma_quotient,
    genus_of,
    lemma_overlattice,
    unique_in_genus_by_length,
)
from .towers import cover_step, mukai_twisted_check, quotient_step, tower, tower_related

SUITES = ("lemma", "theorem", "table", "x2", "un", "ue8", "towers", "mukai")
DEFAULT_BUDGET = 10 ** 7


# ---------------------------------------------------------------------------
# Canonical JSON
# ---------------------------------------------------------------------------


def _plain(obj):
    """Recursively rewrite to JSON-encodable data with rationals as strings."""
    if isinstance(obj, Fraction):
        return str(obj)
    if isinstance(obj, bool) or obj is None or isinstance(obj, (int, str)):
        return obj
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(x) for x in obj]
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def _dumps(obj) -> str:
    return json.dumps(_plain(obj), sort_keys=True, separators=(",", ":"))


# ---------------------------------------------------------------------------
# Loading lattices by name or from a JSON file
# ---------------------------------------------------------------------------


def _load(target: str):
    """IntegralLattice or GenusDescriptor for a display name or JSON file
    (either {"gram": rows} or bare rows)."""
    path = Path(target)
    if path.exists():
        data = json.loads(path.read_text())
        rows = data["gram"] if isinstance(data, dict) else data
        return from_rows(rows, path.name)
    return resolve_name(target)


def _lattice_record(lat: IntegralLattice) -> dict:
    return {
        "label": lat.label,
        "rank": lat.rank,
        "signature": list(lat.signature),
        "det": lat.det,
        "gram": [list(r) for r in lat.gram],
    }


def _form_record(q: FiniteQuadraticForm) -> dict:
    return {
        "orders": list(q.orders),
        "invariants": list(group_invariants(q.orders)),
        "milgram": milgram_signature(q),
        "q": [[str(x) for x in row] for row in q.q_gram],
    }


def _genus_record(g: GenusDescriptor) -> dict:
    """Canonical isomorphism-invariant genus data: two genus-equal inputs
    print the same bytes."""
    q = g.disc
    if q.group_order > 10 ** 6:
        raise ValueError("discriminant group too large to tabulate")
    tally = Counter(v for _, _, v in _value_table(q))
    return {
        "sig": [g.sig_plus, g.sig_minus],
        "form": {
            "group": list(group_invariants(q.orders)),
            "milgram": milgram_signature(q),
            "values": [[str(v), tally[v]] for v in sorted(tally)],
        },
    }


# ---------------------------------------------------------------------------
# Verification reports
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class VerificationReport:
    check: str
    status: str  # pass | fail | discrepancy | inconclusive
    detail: str
    witness: object
    seconds: float

    def record(self) -> dict:
        return {
            "check": self.check,
            "status": self.status,
            "detail": self.detail,
            "witness": self.witness,
        }


def _run_suite(name: str, entries: Iterable[dict]) -> list[VerificationReport]:
    """Consume a suite, stamping each entry with the time since the last.

    A search-budget overrun aborts the suite with a single inconclusive
    entry instead of crashing the run."""
    out = []
    t0 = time.perf_counter()
    it = iter(entries)
    while True:
        try:
            e = next(it)
        except StopIteration:
            break
        except SearchBudgetExceeded as exc:
            now = time.perf_counter()
            out.append(VerificationReport(
                f"{name}-budget-exhausted", "inconclusive", str(exc),
                None, now - t0))
            break
        now = time.perf_counter()
        out.append(VerificationReport(
            e["check"], e["status"], e["detail"], e["witness"], now - t0))
        t0 = now
    return out


# ---------------------------------------------------------------------------
# Suites
# ---------------------------------------------------------------------------


def _suite_lemma(args) -> Iterator[dict]:
    """Congruence overlattice of <2d> + W: the U(n) demonstration for the
    requested n, and the rank-9 case W = E8(-2) when n = 2."""
    n = args.n if args.n is not None else 2
    d = args.d if args.d is not None else 2 * n
    if n < 2:
        raise ValueError("the block parameter n must be at least 2")
    if d % (2 * n):
        raise ValueError(f"need d = 0 mod 2n, got d={d}, n={n}")
    budget = args.budget

    demo_w = named(f"U({n})")
    z, emb = lemma_overlattice(d, n, demo_w, find_u_block(discriminant_form(demo_w), n))
    v_det = -2 * d * n * n  # det(<2d>) * det(U(n))
    yield _check(
        f"lemma-construction-un-d{d}", z.det * n * n == v_det
        and is_primitive(emb),
        f"index-{n} even overlattice of <2d> + U({n}) built; U({n}) stays primitive",
        "overlattice construction violated index or primitivity",
        {"det": z.det})
    yield _check(
        f"lemma-disc-form-un-d{d}",
        forms_isomorphic(
            discriminant_form(z), cyclic_block(2 * d, Fraction(1, 2 * d)),
            budget=budget) is not None,
        f"the glue quotient has cyclic discriminant form of order {2 * d} "
        f"and value 1/{2 * d}",
        "the glue quotient has the wrong discriminant form")
    # Form-level quotient agrees with the lattice-level construction.
    v_lat = direct_sum(from_rows([[2 * d]]), demo_w)
    gv = GenusDescriptor(
        *v_lat.signature,
        sum_forms([cyclic_block(2 * d, Fraction(1, 2 * d)),
                   discriminant_form(demo_w)]))
    h = tuple(int(i == 0) for i in range(gv.disc.rank))
    wb = find_u_block(discriminant_form(demo_w), n)
    block = (h,) + tuple((0,) + x for x in wb)
    yield _check(
        f"lemma-genus-crosscheck-un-d{d}",
        genus_equal(genus_of(z), genus_lemma_quotient(gv, block, d, n),
                    budget=budget),
        "lattice-level and form-level constructions land in the same genus",
        "the two construction routes disagree")

    if n == 2:
        w = named("E8(-2)")
        z2, emb2 = lemma_overlattice(d, 2, w, find_u_block(discriminant_form(w), 2))
        yield _check(
            f"lemma-construction-e8-d{d}",
            4 * z2.det == 2 * d * w.det and is_primitive(emb2),
            f"index-2 even overlattice of <2d> + E8(-2) built for d={d}",
            "rank-9 overlattice construction violated index or primitivity",
            {"det": z2.det})
        expected = sum_forms(
            [cyclic_block(2 * d, Fraction(1, 2 * d))] + [u_block(2)] * 3)
        yield _check(
            f"lemma-disc-form-e8-d{d}",
            forms_isomorphic(discriminant_form(z2), expected, budget=budget)
            is not None,
            f"discriminant form is cyclic(1/{2 * d}) plus three hyperbolic "
            "2-blocks",
            "rank-9 overlattice has the wrong discriminant form")
        yield _check(
            f"lemma-family-agreement-d{d}",
            genus_equal(genus_of(z2),
                        family_genus(FamilyDescriptor("Lp", d, 2)),
                        budget=budget),
            f"the congruence construction lands in the Lp({d},2) genus",
            "the congruence construction misses the family genus")


def _suite_theorem(args) -> Iterator[dict]:
    """Certify Lp(d,n) = M(d,n): same genus plus the length criterion."""
    n = args.n if args.n is not None else 2
    d = args.d if args.d is not None else 2 * n
    budget = args.budget
    lp, m = FamilyDescriptor("Lp", d, n), FamilyDescriptor("M", d, n)
    gm = family_genus(m)
    yield _check(
        f"theorem-genus-n{n}-d{d}",
        genus_equal(family_genus(lp), gm, budget=budget),
        f"{lp.label} and {m.label} lie in the same genus",
        f"{lp.label} and {m.label} genera differ",
        {"rank": gm.sig_plus + gm.sig_minus, "length": length(gm.disc)})
    yield _check(
        f"theorem-unique-n{n}-d{d}",
        unique_in_genus_by_length(gm),
        f"the {m.label} genus contains a single class (length criterion)",
        f"the length criterion is inconclusive for {m.label}")


_MN_TABLE = {2: (8, 6), 3: (12, 4), 4: (14, 4), 5: (16, 2),
             6: (16, 2), 7: (18, 1), 8: (18, 2)}


def _catalog_lattices() -> list[IntegralLattice]:
    out = [named(s) for s in (
        "U", "U(2)", "U(3)", "U(4)", "A(1)", "A(2)", "A(3)", "A(4)",
        "D4", "E8(-1)", "E8(-2)", "N")]
    out.extend(build_Mn(n).relabel(f"M({n})") for n in range(2, 9))
    out.extend(family_lattice(f) for f in (
        FamilyDescriptor("M", 1, 2), FamilyDescriptor("M", 2, 2),
        FamilyDescriptor("Mp", 2, 2), FamilyDescriptor("L", 1, 2),
        FamilyDescriptor("Lp", 2, 2), FamilyDescriptor("UN"),
        FamilyDescriptor("UE8")))
    return out


def _suite_table(args) -> Iterator[dict]:
    """The quotient-lattice table (rank and length for n = 2..8) and the
    Gauss-sum signature congruence over the whole catalog."""
    for n in range(2, 9):
        lat = build_Mn(n)
        got = (lat.rank, length(discriminant_form(lat)))
        rep = mn_build_report(n)
        yield _check(
            f"table-mn-{n}", got == _MN_TABLE[n],
            f"M_{n}: rank {got[0]}, length {got[1]}",
            f"M_{n}: got (rank, length) = {got}, expected {_MN_TABLE[n]}",
            {"glue": rep["glue"], "accepted": rep["accepted"]})
    for lat in _catalog_lattices():
        sp, sm = lat.signature
        sig = milgram_signature(discriminant_form(lat))
        yield _check(
            f"table-milgram-{lat.label}", (sig - (sp - sm)) % 8 == 0,
            f"Gauss-sum signature {sig} = {sp}-{sm} mod 8",
            f"Gauss-sum signature {sig} does not match ({sp},{sm})",
            {"signature": [sp, sm]})


def _suite_x2(args) -> Iterator[dict]:
    bound = args.bound if args.bound is not None else 5
    yield from x2_report(bound=bound)


def _suite_un(args) -> Iterator[dict]:
    e_values = (args.e,) if args.e is not None else (1, 2, 3, 4)
    yield from un_report(e_values=e_values)


def _suite_ue8(args) -> Iterator[dict]:
    bound = args.bound if args.bound is not None else 3
    yield from ue8_report(absence_bound=bound)


def _suite_towers(args) -> Iterator[dict]:
    dmax = args.d if args.d is not None else 8
    depth = args.depth if args.depth is not None else 5
    for d in range(1, dmax + 1):
        try:
            nodes = tower(d, depth)
        except ValueError as exc:
            yield _entry(f"towers-invariants-d{d}", "fail", str(exc), None)
            continue
        yield _entry(
            f"towers-invariants-d{d}", "pass",
            f"all {depth + 1} storeys over d={d} verified "
            "(rank 13, signature (2,11), negated discriminant form)",
            {"storeys": [n.ns.label for n in nodes]})
    laws_ok = all(
        cover_step(quotient_step(f)) == f
        for e in range(1, 7)
        for f in (FamilyDescriptor("L", e, 2), FamilyDescriptor("Lp", 2 * e, 2))
    ) and all(
        quotient_step(cover_step(f)) == f
        for e in range(1, 7)
        for f in (FamilyDescriptor("M", e, 2), FamilyDescriptor("Mp", 2 * e, 2))
    )
    yield _check(
        "towers-step-laws", laws_ok,
        "cover_step and quotient_step invert each other on both kinds",
        "a step composition failed to return to its start")
    probes = (((3, 24), 3), ((5, 7), None), ((4, 4), 0), ((64, 2), 5))
    yield _check(
        "towers-related-probes",
        all(tower_related(*pair) == want for pair, want in probes),
        "power-of-two relatedness matches on the probe pairs",
        "a relatedness probe returned the wrong exponent",
        {"probes": [[list(p), w] for p, w in probes]})


def _suite_mukai(args) -> Iterator[dict]:
    for m in (0, 1):
        for d in (1, 2):
            yield from mukai_twisted_check(m, d)


_SUITE_FN = {
    "lemma": _suite_lemma,
    "theorem": _suite_theorem,
    "table": _suite_table,
    "x2": _suite_x2,
    "un": _suite_un,
    "ue8": _suite_ue8,
    "towers": _suite_towers,
    "mukai": _suite_mukai,
}


# ---------------------------------------------------------------------------
# Commands
# ---------------------------------------------------------------------------


def cmd_catalog(args) -> int:
    obj = _load(args.name)
    if isinstance(obj, GenusDescriptor):
        print(f"error: {args.name!r} is a genus-level family with no "
              "canonical Gram matrix", file=sys.stderr)
        return 1
    print(_dumps(_lattice_record(obj)))
    return 0


def cmd_disc(args) -> int:
    obj = _load(args.target)
    q = obj.disc if isinstance(obj, GenusDescriptor) else discriminant_form(obj)
    print(_dumps(_form_record(q)))
    return 0


def cmd_genus(args) -> int:
    obj = _load(args.target)
    g = obj if isinstance(obj, GenusDescriptor) else genus_of(obj)
    print(_dumps(_genus_record(g)))
    return 0


def cmd_verify(args) -> int:
    names = SUITES if args.suite == "all" else (args.suite,)
    reports: list[VerificationReport] = []
    for name in names:
        reports.extend(_run_suite(name, _SUITE_FN[name](args)))

    if args.json:
        payload = _dumps([r.record() for r in reports])
        print(payload)
    else:
        payload = _dumps([r.record() for r in reports])
        for r in reports:
            print(f"{r.status.upper():>12} {r.check}: {r.detail} "
                  f"({r.seconds:.2f}s)")
        counts = Counter(r.status for r in reports)
        print("summary: " + ", ".join(
            f"{counts[s]} {s}" for s in
            ("pass", "discrepancy", "fail", "inconclusive") if counts[s]))

    golden_bad = False
    if args.golden is not None:
        gdir = Path(args.golden)
        gdir.mkdir(parents=True, exist_ok=True)
        gpath = gdir / f"{args.suite}.json"
        if gpath.exists():
            if gpath.read_text() != payload + "\n":
                print(f"golden mismatch: {gpath}", file=sys.stderr)
                golden_bad = True
            else:
                print(f"golden matched: {gpath}", file=sys.stderr)
        else:
            gpath.write_text(payload + "\n")
            print(f"golden written: {gpath}", file=sys.stderr)

    if golden_bad or any(r.status == "fail" for r in reports):
        return 1
    if any(r.status == "inconclusive" for r in reports):
        return 2
    return 0


def cmd_tower(args) -> int:
    d = args.d if args.d is not None else 1
    depth = args.depth if args.depth is not None else 3
    nodes = tower(d, depth)
    print(_dumps([
        {
            "m": node.depth,
            "ns": {"kind": node.ns.kind, "d": node.ns.d, "n": node.ns.n,
                   "label": node.ns.label},
            "T": _lattice_record(node.transcendental),
        }
        for node in nodes
    ]))
    return 0


def cmd_related(args) -> int:
    m = tower_related(args.d, args.e)
    if m is None:
        out = {"m": None, "degree": None, "note": "unrelated"}
    elif m == 0:
        out = {"m": 0, "degree": 1, "note": "identical family"}
    else:
        out = {"m": m, "degree": 2 ** m}
    print(_dumps(out))
    return 0


def cmd_evenset(args) -> int:
    bound = args.bound if args.bound is not None else 5
    x2 = build_X2()
    known = dict(zip(("E1", "E2"), known_even_sets()))
    out = {"bound": bound, "pencils": {}, "sets": [], "missing": []}
    for label, want in known.items():
        results = find_even_sets(x2, label, bound)
        found = want in results
        out["pencils"][label] = {"count": len(results),
                                 "displayed_set_found": found}
        if found:
            out["sets"].append([list(v) for v in want])
        else:
            out["missing"].append(label)
    print(_dumps(out))
    return 0


# ---------------------------------------------------------------------------
# Argument parsing
# ---------------------------------------------------------------------------


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="k3lat",
        description="Even-lattice toolkit: catalog lattices, discriminant "
        "and genus records, verification suites, cover towers and the "
        "even-set search.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("catalog", help="Gram record of a named lattice")
    p.add_argument("name", help='e.g. "U(2)", "N", "E8(-2)", "M(3)", "M(4,2)"')
    p.set_defaults(fn=cmd_catalog)

    p = sub.add_parser("disc", help="discriminant form of a lattice")
    p.add_argument("target", help="name or JSON file with a Gram matrix")
    p.set_defaults(fn=cmd_disc)

    p = sub.add_parser("genus", help="canonical genus record of a lattice")
    p.add_argument("target", help="name or JSON file with a Gram matrix")
    p.set_defaults(fn=cmd_genus)

    p = sub.add_parser("verify", help="run a verification suite")
    p.add_argument("suite", choices=SUITES + ("all",))
    p.add_argument("--json", action="store_true",
                   help="canonical JSON instead of the human listing")
    p.add_argument("--golden", metavar="DIR",
                   help="write the canonical JSON on first run, compare on "
                   "later runs (mismatch exits 1)")
    p.add_argument("--budget", type=int, default=DEFAULT_BUDGET,
                   help="search-step budget for the lemma/theorem genus "
                   f"comparisons (default {DEFAULT_BUDGET})")
    p.add_argument("--bound", type=int,
                   help="coordinate bound for the even-set suites "
                   "(x2 default 5, ue8 default 3)")
    p.add_argument("--n", type=int, help="block parameter for lemma/theorem")
    p.add_argument("--d", type=int,
                   help="lemma/theorem parameter, or maximum d for towers")
    p.add_argument("--e", type=int, help="single polarization for the un suite")
    p.add_argument("--depth", type=int, help="tower depth (towers suite)")
    p.set_defaults(fn=cmd_verify)

    p = sub.add_parser("tower", help="cover tower as JSON")
    p.add_argument("--d", type=int, default=1)
    p.add_argument("--depth", type=int, default=3)
    p.set_defaults(fn=cmd_tower)

    p = sub.add_parser("related", help="power-of-two relatedness of d and e")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--e", type=int, required=True)
    p.set_defaults(fn=cmd_related)

    p = sub.add_parser("evenset", help="bounded even-set search on both pencils")
    p.add_argument("--bound", type=int, default=5)
    p.set_defaults(fn=cmd_evenset)

    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except (ValueError, KeyError, ArithmeticError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
