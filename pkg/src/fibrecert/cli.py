"""Command-line front door for every engine.

Every subcommand builds a check report and renders it as text or JSON
(--out json); identical invocations produce byte-identical output.  Exit
codes: 0 all checks passed, 1 at least one check failed, 2 bad input or a
violated hypothesis gate.
"""

from __future__ import annotations

import argparse
import importlib.resources
import sys
from typing import List, Optional

from . import loopfib
from .cwtower import (
    HypothesisError,
    fiber_tower,
    main_theorem_certificate,
    raw_filtration_index,
    skeleton_index,
)
from .abelian import exactness_check
from .fplinalg import check_prime, ps_free_tensor
from .ledger import ComposeError, Ledger, LedgerError
from .pi18 import pi18_report
from .report import FAIL, INCOMPLETE, PASS, RECORDED, Report
from .symring import dynkin_element, ring_mul
from .tensoralg import TensorAlgebra, ad_power, bracket, free_on_check


def default_ledger_path() -> str:
    return str(importlib.resources.files("fibrecert") / "data" / "pi18_ledger.txt")


def _add_common(parser, *names):
    if "prime" in names:
        parser.add_argument("--prime", type=int, required=True,
                            help="prime modulus (3 is rejected where the "
                                 "cubic idempotent is involved)")
    if "cutoff" in names:
        parser.add_argument("--cutoff", type=int, default=40)
    for flag in ("n", "k", "m", "r"):
        if flag in names:
            parser.add_argument(f"--{flag}", type=int, required=True)
    parser.add_argument("--out", choices=("text", "json"), default="text")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fibrecert",
        description="exact mod-p certificates for loop-space homology of "
                    "pinch-map fibres and cell-attachment bookkeeping",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("poincare", help="free-algebra dimension series")
    p.add_argument("--degrees", type=str, default=None,
                   help="comma-separated generator degrees, e.g. 4,6")
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--k", type=int, default=None)
    p.add_argument("--cutoff", type=int, default=40)
    p.add_argument("--out", choices=("text", "json"), default="text")

    p = sub.add_parser("free-check", help="free-subalgebra certification for "
                                          "the fibre ladder families")
    _add_common(p, "n", "k", "prime", "cutoff")

    p = sub.add_parser("dynkin", help="bracketing element and its idempotency")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--out", choices=("text", "json"), default="text")

    p = sub.add_parser("qmax", help="cubic functor piece of the two-cell "
                                    "complex as degree data")
    _add_common(p, "n", "k", "prime")

    p = sub.add_parser("cotensor", help="cotensor fibre homology dimensions")
    _add_common(p, "m", "r", "prime", "cutoff")
    p.add_argument("--closure-degree", type=int, default=None)

    p = sub.add_parser("ladder", help="loop-homology generator ladders")
    p.add_argument("--stage", choices=loopfib.STAGES + ("all",), default="all")
    _add_common(p, "n", "k", "cutoff")

    p = sub.add_parser("tower", help="fibre tower cell structure and "
                                     "skeleton indices")
    _add_common(p, "n", "k")

    p = sub.add_parser("certificate", help="attaching-map factorization "
                                           "certificate")
    _add_common(p, "n", "k", "prime")

    p = sub.add_parser("exact-check", help="exactness bookkeeping for every "
                                           "fragment in a ledger")
    p.add_argument("--ledger", type=str, default=None)
    p.add_argument("--out", choices=("text", "json"), default="text")

    p = sub.add_parser("pi18", help="replay the degree-18 computation from "
                                    "a ledger file")
    p.add_argument("--ledger", type=str, default=None)
    p.add_argument("--out", choices=("text", "json"), default="text")

    return parser


def cmd_poincare(args) -> Report:
    if args.degrees is not None:
        degrees = [int(d) for d in args.degrees.split(",") if d.strip()]
    elif args.n is not None and args.k is not None:
        degrees = [args.n, args.n + args.k + 1]
    else:
        raise ValueError("poincare needs --degrees or both --n and --k")
    series = ps_free_tensor(degrees, args.cutoff)
    rep = Report(f"free-algebra dimension series on degrees {degrees}")
    rep.add(
        "series",
        "word counts satisfy t_d = sum_i t_(d - deg_i)",
        PASS,
        degrees=degrees,
        cutoff=args.cutoff,
        coefficients=list(series.coefficients),
    )
    return rep


def cmd_free_check(args) -> Report:
    n, k, p, cutoff = args.n, args.k, check_prime(args.prime), args.cutoff
    if p == 3:
        raise HypothesisError("p = 3 is excluded by the idempotent hypotheses")
    rep = Report(f"free-subalgebra certificates (n={n}, k={k}, p={p}, cutoff={cutoff})")
    alg = TensorAlgebra(p, [("x", n), ("y", n + k + 1)])
    x, y = alg.generator("x"), alg.generator("y")
    families = {
        "two-cell skeleton: {x, [x,y]}": [x, bracket(x, y)],
        "three-cell skeleton: {x, [x,y], [[x,y],y]}": [
            x, bracket(x, y), ad_power(x, y, 2)
        ],
        "full fibre ladder: {ad^m(y)(x), m <= 3}": [
            ad_power(x, y, mm) for mm in range(4)
        ],
    }
    for label, gens in families.items():
        result = free_on_check(gens, cutoff)
        first = result.first_failure()
        rep.add(
            label,
            "subalgebra dimensions equal the free-algebra series on the "
            "generator degrees",
            PASS if result.ok else FAIL,
            generator_degrees=list(result.generator_degrees),
            first_failure=None if first is None else first.degree,
        )
    galg = TensorAlgebra(p, [("x", n), ("z", 2 * n + k + 1)])
    gx, gz = galg.generator("x"), galg.generator("z")
    result = free_on_check([ad_power(gx, gz, mm) for mm in range(3)], cutoff)
    first = result.first_failure()
    rep.add(
        "fibre-over-skeleton ladder: {ad^m(z)(x), m <= 2}",
        "subalgebra dimensions equal the free-algebra series on the "
        "generator degrees",
        PASS if result.ok else FAIL,
        generator_degrees=list(result.generator_degrees),
        first_failure=None if first is None else first.degree,
    )
    return rep


def cmd_dynkin(args) -> Report:
    beta = dynkin_element(args.m)
    square = ring_mul(beta, beta)
    ok = square == args.m * beta
    rep = Report(f"bracketing element for m={args.m}")
    rep.add(
        "idempotency relation",
        "the bracketing element squares to m times itself",
        PASS if ok else FAIL,
        m=args.m,
        terms=len(beta.coeffs),
    )
    return rep


def cmd_qmax(args) -> Report:
    from .fplinalg import GradedVectorSpace
    from .symring import bracket_idempotent, idempotent_stable_image

    n, k, p = args.n, args.k, check_prime(args.prime)
    if p == 3:
        raise HypothesisError("p = 3 is excluded: the scalar 1/3 is needed")
    rep = Report(f"cubic functor piece as degree data (n={n}, k={k}, p={p})")
    cf_cells = [n, n + k + 1]
    suspended = [c + 2 * n + k + 2 for c in cf_cells]
    rep.add(
        "suspension shift",
        "the cubic smash summand is the (2n+k+2)-fold suspension of the "
        "two-cell complex",
        PASS if suspended == [3 * n + k + 2, 3 * n + 2 * k + 3] else FAIL,
        cells=suspended,
    )
    V = GradedVectorSpace(p, {n: ["x"], n + k + 1: ["y"]})
    e3 = bracket_idempotent(3, p)
    dims = {}
    for d in range(3 * n, 3 * (n + k + 1) + 1):
        dim = len(idempotent_stable_image(e3, V, 3, d))
        if dim:
            dims[str(d)] = dim
    expected = {str(3 * n + k + 1): 1, str(3 * n + 2 * k + 2): 1}
    rep.add(
        "cubic idempotent image",
        "the idempotent image on the cubic tensor power matches the "
        "suspended cell degrees shifted down by one",
        PASS if dims == expected else FAIL,
        computed=dims,
        expected=expected,
    )
    return rep


def cmd_cotensor(args) -> Report:
    prob = loopfib.LoopFibreProblem(args.m, args.r, check_prime(args.prime),
                                    args.cutoff)
    result = loopfib.cotensor_report(prob, ad_count=4,
                                     closure_degree=args.closure_degree)
    rep = Report(
        f"cotensor fibre homology (m={args.m}, r={args.r}, p={args.prime}, "
        f"cutoff={args.cutoff})"
    )
    rep.add(
        "dimension table",
        "invariants of the coaction match the free algebra on the ad-ladder",
        PASS if result.dims_match else FAIL,
        dims=list(result.dims),
        expected=list(result.expected_dims),
        ladder_degrees=prob.ladder_degrees(),
    )
    rep.add(
        "ad-power membership",
        "every iterated bracket of the two generators has trivial coaction",
        PASS if all(result.ad_membership) else FAIL,
        checked=len(result.ad_membership),
    )
    if result.closure_ok is not None:
        rep.add(
            "product closure",
            "the invariant subspace is closed under the product",
            PASS if result.closure_ok else FAIL,
            up_to_degree=result.closure_checked_degree,
        )
    return rep


def cmd_ladder(args) -> Report:
    stages = loopfib.STAGES if args.stage == "all" else (args.stage,)
    rep = Report(f"generator ladders (n={args.n}, k={args.k})")
    for stage in stages:
        ladder = loopfib.fiber_generator_ladder(args.n, args.k, stage,
                                                cutoff=args.cutoff)
        rep.add(
            f"stage {stage}",
            "loop-homology generator degrees for the fibre stage",
            PASS,
            entries=[[label, deg] for label, deg in ladder.entries],
        )
    factor = loopfib.serre_factorization_check(args.n, args.k, 2, args.cutoff)
    rep.add(
        "series factorization",
        "free algebra on the base cells = free algebra on the ladder times "
        "free algebra on the looped top sphere",
        PASS if factor.ok else FAIL,
        f_tower=factor.f_tower_ok,
        g_tower=factor.g_tower_ok,
    )
    return rep


def cmd_tower(args) -> Report:
    n, k = args.n, args.k
    tower = fiber_tower(n, k)
    rep = Report(f"fibre tower (n={n}, k={k})")
    for name in ("F", "F2", "F3", "G"):
        rep.add(
            f"complex {name}",
            "cell dimensions of the tower stage",
            PASS,
            cells=tower[name].dims(),
            attachments=[c.attach for c in tower[name].cells],
        )
    m, r = n + k + 1, n + 1
    rep.add(
        "skeleton indices",
        "largest skeleton equal to each filtration stage, with the classical "
        "filtration formula value for comparison",
        PASS,
        stage_2=skeleton_index(m, r, 2),
        stage_3=skeleton_index(m, r, 3),
        classical_formula_stage_2=raw_filtration_index(m, r, 2),
        classical_formula_stage_3=raw_filtration_index(m, r, 3),
    )
    return rep


def cmd_certificate(args) -> Report:
    return main_theorem_certificate(args.n, args.k, check_prime(args.prime))


def cmd_exact_check(args) -> Report:
    path = args.ledger or default_ledger_path()
    ledger = Ledger.load(path)
    rep = Report(f"exactness bookkeeping for {len(ledger.exacts)} fragments")
    for name in sorted(ledger.exacts):
        frag = ledger.fragment(name)
        rep.add_child(exactness_check(frag))
    return rep


def cmd_pi18(args) -> Report:
    path = args.ledger or default_ledger_path()
    return pi18_report(path)


_COMMANDS = {
    "poincare": cmd_poincare,
    "free-check": cmd_free_check,
    "dynkin": cmd_dynkin,
    "qmax": cmd_qmax,
    "cotensor": cmd_cotensor,
    "ladder": cmd_ladder,
    "tower": cmd_tower,
    "certificate": cmd_certificate,
    "exact-check": cmd_exact_check,
    "pi18": cmd_pi18,
}


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        report = _COMMANDS[args.command](args)
    except (HypothesisError, LedgerError, ComposeError, ValueError,
            FileNotFoundError, loopfib.MemoryBudgetError) as err:
        print(f"error: {err}", file=sys.stderr)
        return 2
    if args.out == "json":
        sys.stdout.write(report.to_json())
    else:
        counts = report.counts()
        sys.stdout.write(report.render_text() + "\n")
        sys.stdout.write(
            f"summary: {counts['pass']} pass, {counts['fail']} fail, "
            f"{counts['incomplete']} incomplete, {counts['recorded']} recorded\n"
        )
    return 0 if report.ok else 1


if __name__ == "__main__":
    sys.exit(main())
