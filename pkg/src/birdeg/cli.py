"""Command-line front end: analyze, structure, perm, compare and degrees.

Every command reads JSON files and prints either a human-readable summary or,
with ``--json``, a JSON report.  Exit codes: 0 success, 1 invalid input,
2 map not elementary or chains not regularizable, 3 oracle disagreement.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from typing import Optional, Sequence

from .birmap import (
    DEFAULT_CAP,
    BirationalMapSpec,
    IndeterminateError,
    MapError,
    NotElementary,
    OrbitListStructure,
    build_orbit_structure,
)
from .cohomology import PullbackMatrix, StructureError, degree_sequence, f_star_matrix
from .exactmath import (
    UniPoly,
    check_recursion,
    generating_denominator,
    largest_real_root,
    rat_str,
)
from .listformula import (
    ListKind,
    charpoly_formula,
    compare_deltas,
    delta_of_structure,
    detect_special_case,
    order_holds,
    predicted_order,
    structure_relations,
    t_s_polys,
)
from .oracle import OracleDisagreement, OracleError, generic_line_degree
from .permchain import (
    NotRegularizable,
    PermutationMapSpec,
    PermutationSpecError,
    build_chains,
    build_L,
    chain_pullback_matrix,
)

EXIT_OK = 0
EXIT_INVALID = 1
EXIT_STRUCTURE = 2
EXIT_ORACLE = 3

DELTA_DIGITS = 12


class CliError(Exception):
    def __init__(self, code: int, message: str, payload: Optional[dict] = None):
        super().__init__(message)
        self.code = code
        self.payload = payload or {}


def _load(path: str) -> dict:
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except OSError as exc:
        raise CliError(EXIT_INVALID, f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise CliError(EXIT_INVALID, f"{path} is not valid JSON: {exc}") from exc
    if not isinstance(data, dict):
        raise CliError(EXIT_INVALID, f"{path} must hold a JSON object")
    return data


def _delta_json(chi: UniPoly) -> Optional[dict]:
    root = largest_real_root(chi, 64)
    if root is None:
        return None
    return {"value": root.decimal(DELTA_DIGITS), "interval": [rat_str(root.lo), rat_str(root.hi)]}


def _spectral_block(pm: PullbackMatrix, n: int) -> dict:
    chi = pm.charpoly()
    # enough terms for the recursion check
    seq = degree_sequence(pm, max(n, 2 * chi.degree))
    return {
        "basis": pm.basis.names(),
        "matrix": pm.M.to_json(),
        "charpoly": chi.to_text(),
        "generating_denominator": generating_denominator(chi, strip_zero=chi.coeff(0) == 0).to_text(),
        "delta": _delta_json(chi),
        "degrees": seq[: n + 1],
        "recursion_holds": check_recursion(seq, chi),
    }


def _oracle_block(L, n: int, seed: int, computed: Sequence[int]) -> dict:
    try:
        seq = generic_line_degree(L, n, seed=seed)
    except OracleDisagreement as exc:
        raise CliError(
            EXIT_ORACLE,
            f"oracle seeds disagree: {exc.first} vs {exc.second}",
            {"oracle": {"first": exc.first, "second": exc.second}},
        ) from exc
    except OracleError as exc:
        return {"status": "unavailable", "reason": str(exc)}
    if list(seq) != list(computed[: len(seq)]):
        raise CliError(
            EXIT_ORACLE,
            f"oracle degrees {seq} differ from the cohomology degrees {list(computed[: len(seq)])}",
            {"oracle": {"degrees": seq, "computed": list(computed[: len(seq)])}},
        )
    return {"status": "agrees", "degrees": seq, "seed": seed}


def _special_case(s: OrbitListStructure, d: int) -> Optional[str]:
    if s.open or any(len(lst) != 1 for lst in s.closed):
        return None
    case = detect_special_case(d, [lst[0] for lst in s.closed])
    return case.value if case else None


# ---------------------------------------------------------------------------
# commands


def cmd_analyze(args) -> dict:
    spec = BirationalMapSpec.from_json(_load(args.map))
    try:
        result = build_orbit_structure(spec, cap=args.cap)
    except NotElementary as exc:
        raise CliError(
            EXIT_STRUCTURE,
            f"not elementary: {exc}",
            {"diagnostic_orbit": exc.orbit.to_json()},
        ) from exc
    pm = f_star_matrix(result)
    report = {
        "command": "analyze",
        "input": spec.to_json(),
        "elementary": True,
        "orbits": result.to_json(),
        "structure": str(result.structure),
        **_spectral_block(pm, args.n),
        "special_case": _special_case(result.structure, spec.dim),
    }
    report["bounds_ok"] = _bounds_ok(report, spec.dim)
    if args.oracle:
        report["oracle"] = _oracle_block(spec, min(args.n, args.oracle_n), args.seed, report["degrees"])
    return report


def _bounds_ok(report: dict, d: int) -> Optional[bool]:
    delta = report.get("delta")
    if delta is None:
        return None
    lo, hi = (Fraction(v) for v in delta["interval"])
    return Fraction(1) <= hi and lo <= d


def cmd_structure(args) -> dict:
    data = _load(args.structure)
    s = OrbitListStructure.from_json(data)
    d = args.d if args.d is not None else s.dim
    if d is None:
        raise CliError(EXIT_INVALID, "the dimension is missing: pass --d or put \"d\" in the file")
    s = s.with_dim(d)
    chi = charpoly_formula(s, d)
    pm = f_star_matrix(s, d)
    lists = []
    for kind, group in ((ListKind.CLOSED, s.closed), (ListKind.OPEN, s.open)):
        for lst in group:
            polys = t_s_polys(lst, kind)
            lists.append({"kind": kind.value, "lengths": list(lst), "T": polys.T.to_text(), "S": polys.S.to_text()})
    block = _spectral_block(pm, args.n)
    return {
        "command": "structure",
        "input": s.to_json(),
        "structure": str(s),
        "lists": lists,
        "charpoly_formula": chi.to_text(),
        "formula_matches_matrix": chi == pm.charpoly(),
        **block,
        "special_case": _special_case(s, d),
    }


def _load_perm(path: str) -> PermutationMapSpec:
    return PermutationMapSpec.from_json(_load(path))


def cmd_perm(args) -> dict:
    spec = _load_perm(args.perm)
    L = build_L(spec)
    chains = build_chains(spec)
    pm = chain_pullback_matrix(chains)
    report = {
        "command": "perm",
        "input": spec.to_json(),
        "L": L.L.to_json(),
        "chains": chains.to_json(),
        "chain_counts": {str(g): len(chains.generation(g)) for g in range(1, chains.max_generation + 1)},
        **_spectral_block(pm, args.n),
    }
    if args.oracle:
        report["oracle"] = _oracle_block(L, min(args.n, args.oracle_n), args.seed, report["degrees"])
    return report


def cmd_compare(args) -> dict:
    s1 = OrbitListStructure.from_json(_load(args.s1))
    s2 = OrbitListStructure.from_json(_load(args.s2))
    d = args.d if args.d is not None else (s1.dim or s2.dim)
    if d is None:
        raise CliError(EXIT_INVALID, "the dimension is missing: pass --d or put \"d\" in a file")
    s1, s2 = s1.with_dim(d), s2.with_dim(d)
    sign = compare_deltas(s1, s2, d)
    rels = []
    for rel in structure_relations(s1, s2):
        pred = predicted_order(rel, s1, d)
        rels.append(
            {
                "relation": rel.value,
                "predicted": pred,
                "holds": None if pred is None else order_holds(sign, pred),
            }
        )
    return {
        "command": "compare",
        "s1": str(s1),
        "s2": str(s2),
        "d": d,
        "delta1": delta_of_structure(s1, d).decimal(DELTA_DIGITS),
        "delta2": delta_of_structure(s2, d).decimal(DELTA_DIGITS),
        "sign": sign,
        "relations": rels,
    }


def cmd_degrees(args) -> dict:
    data = _load(args.map)
    if "p" in data:
        spec = PermutationMapSpec.from_json(data)
        L = build_L(spec)
        pm = chain_pullback_matrix(build_chains(spec))
        echo = spec.to_json()
    else:
        L = BirationalMapSpec.from_json(data)
        try:
            pm = f_star_matrix(build_orbit_structure(L, cap=args.cap))
        except NotElementary as exc:
            raise CliError(EXIT_STRUCTURE, f"not elementary: {exc}", {"diagnostic_orbit": exc.orbit.to_json()}) from exc
        echo = L.to_json()
    seq = degree_sequence(pm, args.n)
    report = {"command": "degrees", "input": echo, "degrees": seq}
    if args.oracle:
        report["oracle"] = _oracle_block(L, min(args.n, args.oracle_n), args.seed, seq)
    return report


# ---------------------------------------------------------------------------
# output


def _human(report: dict) -> str:
    lines = []
    for key, value in report.items():
        if key in ("matrix", "basis", "orbits", "chains", "L", "input"):
            continue
        if isinstance(value, (dict, list)):
            value = json.dumps(value)
        lines.append(f"{key:>24}: {value}")
    return "\n".join(lines)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="birdeg", description="Degree growth of birational maps L o J.")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable output")
    common.add_argument("--seed", type=int, default=0, help="seed for the oracle lines")
    common.add_argument("--n", type=int, default=20, help="report degrees d_0..d_n")
    sub = parser.add_subparsers(dest="command", required=True)

    def oracle_flags(p):
        p.add_argument("--oracle", action="store_true", help="cross-check against the generic-line oracle")
        p.add_argument("--oracle-n", type=int, default=8, help="oracle iterations (capped by --n)")

    p = sub.add_parser("analyze", parents=[common], help="orbit lists and dynamical degree of a map")
    p.add_argument("map")
    p.add_argument("--cap", type=int, default=DEFAULT_CAP, help="orbit iteration cap")
    oracle_flags(p)
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("structure", parents=[common], help="report for an abstract orbit-list structure")
    p.add_argument("structure")
    p.add_argument("--d", type=int)
    p.set_defaults(func=cmd_structure)

    p = sub.add_parser("perm", parents=[common], help="singular chains of a permutation map")
    p.add_argument("perm")
    oracle_flags(p)
    p.set_defaults(func=cmd_perm)

    p = sub.add_parser("compare", parents=[common], help="compare two structures")
    p.add_argument("s1")
    p.add_argument("s2")
    p.add_argument("--d", type=int)
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("degrees", parents=[common], help="degree sequence of a map")
    p.add_argument("map")
    p.add_argument("--cap", type=int, default=DEFAULT_CAP)
    oracle_flags(p)
    p.set_defaults(func=cmd_degrees)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        report = args.func(args)
        code = EXIT_OK
    except CliError as exc:
        report, code = {"error": str(exc), **exc.payload}, exc.code
    except (NotElementary, NotRegularizable) as exc:
        report, code = {"error": str(exc)}, EXIT_STRUCTURE
    except (MapError, PermutationSpecError, StructureError, IndeterminateError, ValueError) as exc:
        report, code = {"error": str(exc)}, EXIT_INVALID
    if args.json:
        print(json.dumps(report, indent=2, sort_keys=False))
    elif code == EXIT_OK:
        print(_human(report))
    else:
        print(f"error: {report['error']}", file=sys.stderr)
        for key, value in report.items():
            if key != "error":
                print(f"{key}: {json.dumps(value)}", file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
