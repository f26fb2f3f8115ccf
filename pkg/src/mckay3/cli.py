"""Command-line interface.

Exit status: 0 when every check passes, 1 on a verification mismatch, 2 on
usage or input errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from typing import Optional, Sequence

from .errors import InternalMismatch, McKayError, OrderExceeded, ParseError
from .exactnum import CycNumber
from .matgroup import (
    DEFAULT_MAX_ORDER,
    FiniteMatrixGroup,
    SquareMatrix,
    close_group,
    fixed_dim_profile,
    junior_class_count,
    sl_part,
)
from .reflection import DIHEDRAL_FAMILIES, FamilySpec, builtin_group, parse_family, reflection_report
from .sodcalc import verify_family
from .toric import EXPECTED_TORIC, TORIC_CASES, builtin_toric_case, check_fan

EXIT_OK, EXIT_MISMATCH, EXIT_USAGE = 0, 1, 2


# -- group files -------------------------------------------------------------------


def _cyc_from_json(data, path: str) -> CycNumber:
    if isinstance(data, int) and not isinstance(data, bool):
        return CycNumber.rational(data)
    if not isinstance(data, dict) or set(data) != {"N", "c"}:
        raise ParseError('expected an integer or an object {"N": int, "c": [[num, den], ...]}', path=path)
    N = data["N"]
    if not isinstance(N, int) or isinstance(N, bool) or N < 1:
        raise ParseError("conductor N must be a positive integer", path=f"{path}.N")
    coeffs = data["c"]
    if not isinstance(coeffs, list):
        raise ParseError("coefficients must be a list of [num, den] pairs", path=f"{path}.c")
    for k, pair in enumerate(coeffs):
        ok = (
            isinstance(pair, list)
            and len(pair) == 2
            and all(isinstance(x, int) and not isinstance(x, bool) for x in pair)
            and pair[1] != 0
        )
        if not ok:
            raise ParseError("coefficient must be a pair [num, den] of integers with den != 0", path=f"{path}.c[{k}]")
    try:
        return CycNumber.from_json(data)
    except (ValueError, ArithmeticError) as exc:
        raise ParseError(str(exc), path=path) from exc


def parse_group_file(text: str) -> tuple[int, list[SquareMatrix]]:
    """Parse the JSON group format into (rank, generator matrices)."""
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, line=exc.lineno, column=exc.colno) from exc
    if not isinstance(data, dict):
        raise ParseError("top level must be an object", path="$")
    rank = data.get("rank")
    if not isinstance(rank, int) or isinstance(rank, bool) or not 1 <= rank <= 3:
        raise ParseError("rank must be 1, 2 or 3", path="$.rank")
    gens = data.get("generators")
    if not isinstance(gens, list) or not gens:
        raise ParseError("generators must be a non-empty list", path="$.generators")
    mats = []
    for g, mat in enumerate(gens):
        where = f"$.generators[{g}]"
        if not isinstance(mat, list) or len(mat) != rank:
            raise ParseError(f"matrix must have {rank} rows", path=where)
        rows = []
        for i, row in enumerate(mat):
            if not isinstance(row, list) or len(row) != rank:
                raise ParseError(f"row must have {rank} entries", path=f"{where}[{i}]")
            rows.append([_cyc_from_json(x, f"{where}[{i}][{j}]") for j, x in enumerate(row)])
        mats.append(SquareMatrix(rows))
    return rank, mats


def group_to_file(rank: int, generators: Sequence[SquareMatrix]) -> str:
    return json.dumps({"rank": rank, "generators": [g.to_json() for g in generators]})


# -- reports ---------------------------------------------------------------------------


def group_report(G: FiniteMatrixGroup) -> dict:
    refl = reflection_report(G)
    H = sl_part(G)
    out = {
        "rank": G.rank,
        "order": G.order,
        "class_count": len(G.classes),
        "fixed_dim_profile": list(fixed_dim_profile(G)),
        "sl_order": H.order,
        "junior_classes": junior_class_count(H),
    }
    out.update(refl.to_json())
    return out


def _spec_key(spec: FamilySpec):
    return (spec.family, spec.n or 0, spec.rank)


def all_specs(nmax: int) -> list[FamilySpec]:
    specs = [FamilySpec("Z2", rank=r) for r in (1, 2, 3)]
    specs += [FamilySpec("Z2xZ2", rank=r) for r in (2, 3)]
    specs += [FamilySpec(f) for f in ("Z2cubed", "Tetrahedral", "Octahedral", "Icosahedral")]
    specs += [FamilySpec(f, n) for f in DIHEDRAL_FAMILIES for n in range(3, nmax + 1)]
    return sorted(specs, key=_spec_key)


def toric_report(case: str) -> dict:
    fan, lattice = builtin_toric_case(case)
    report = check_fan(fan, lattice)
    smooth, crepant, indices = EXPECTED_TORIC[case]
    expected_ok = (
        report.smooth == smooth and report.crepant == crepant and tuple(sorted(report.cone_indices)) == indices
    )
    out = {"case": case, "lattice": str(lattice), "cones": [list(c) for c in fan.max_cones]}
    out.update(report.to_json())
    out["expected"] = expected_ok
    return out


def _verdict_payload(spec: FamilySpec) -> dict:
    v = verify_family(spec)
    out = v.to_json()
    out["ok"] = v.ok
    return out


def run_verify(specs: Sequence[FamilySpec], cases: Sequence[str], jobs: int = 1) -> dict:
    specs = sorted(specs, key=_spec_key)
    if jobs > 1 and len(specs) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_verdict_payload, specs))
    else:
        results = [_verdict_payload(s) for s in specs]
    toric = [toric_report(c) for c in sorted(cases)]
    ok = all(r["ok"] for r in results) and all(t["expected"] for t in toric)
    return {"families": results, "toric": toric, "ok": ok}


# -- text rendering ------------------------------------------------------------------


def _fmt_group(rep: dict) -> str:
    lines = [
        f"rank               {rep['rank']}",
        f"order              {rep['order']}",
        f"classes            {rep['class_count']}",
        f"fixed-dim profile  {tuple(rep['fixed_dim_profile'])}",
        f"SL part order      {rep['sl_order']}  (junior classes: {rep['junior_classes']})",
        f"reflection group   {'yes' if rep['is_reflection_group'] else 'no'}",
        f"reflections        {rep['reflection_count']}  (classes: {rep['reflection_class_count']})",
        f"discriminant       {rep['discriminant_component_count']} components, m_i = {rep['hyperplane_multiplicities']}",
        f"degrees            {tuple(rep['invariant_degrees'])}",
        f"family             {rep['family']}",
    ]
    return "\n".join(lines)


def _fmt_shape(shape: dict) -> str:
    return ", ".join(f"{k} x{m}" for k, m in shape.items())


def _fmt_verdict(v: dict) -> str:
    label = FamilySpec(v["family"], v.get("n"), v["rank"]).label
    status = "PASS" if v["ok"] else "FAIL"
    line = f"{status}  {label:<22} classes={v['total_classes']:<3} {_fmt_shape(v['constructed'])}"
    if not v["match"]:
        line += f"  predicted: {_fmt_shape(v['predicted'])}"
    for note in v["notes"]:
        line += f"  [{note}]"
    return line


def _fmt_toric(t: dict) -> str:
    crepant = t["crepant"]
    return (
        f"{'PASS' if t['expected'] else 'FAIL'}  {t['case']:<18} smooth={t['smooth']} "
        f"crepant={crepant} indices={t['cone_indices']}"
    )


# -- entry point ---------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="mckay3", description="Finite reflection groups in rank <= 3: classes, "
                                "reflection data, toric checks and SOD shape verification.")
    p.add_argument("--json", action="store_true", help="emit machine-readable JSON")
    # also accept --json after the subcommand
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", default=argparse.SUPPRESS, help=argparse.SUPPRESS)
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("group", parents=[common], help="report on a group given by generators in a JSON file")
    g.add_argument("path")
    g.add_argument("--max-order", type=int, default=DEFAULT_MAX_ORDER)

    f = sub.add_parser("family", parents=[common], help="report on a built-in family")
    f.add_argument("name")
    f.add_argument("--n", type=int)
    f.add_argument("--rank", type=int)

    v = sub.add_parser("verify", parents=[common], help="compare constructed and predicted SOD shapes")
    v.add_argument("name", nargs="?")
    v.add_argument("--all", action="store_true")
    v.add_argument("--n", type=int)
    v.add_argument("--rank", type=int)
    v.add_argument("--nmax", type=int, default=30)
    v.add_argument("--jobs", type=int, default=1)

    t = sub.add_parser("toric", parents=[common], help="check a built-in fan")
    t.add_argument("case", choices=TORIC_CASES)
    return p


def _emit(payload: dict, as_json: bool, text: str) -> None:
    print(json.dumps(payload, indent=2, sort_keys=True) if as_json else text)


def _run(args) -> int:
    if args.command == "group":
        try:
            with open(args.path, encoding="utf-8") as fh:
                text = fh.read()
        except OSError as exc:
            raise ParseError(f"cannot read {args.path}: {exc.strerror}") from exc
        rank, gens = parse_group_file(text)
        try:
            G = close_group(gens, max_order=args.max_order, rank=rank)
        except OrderExceeded as exc:
            raise OrderExceeded(f"{exc}; if the group is finite, raise --max-order") from exc
        rep = group_report(G)
        _emit({"command": "group", "path": args.path, "result": rep}, args.json, _fmt_group(rep))
        return EXIT_OK

    if args.command == "family":
        spec = parse_family(args.name, args.n, args.rank)
        rep = group_report(builtin_group(spec))
        _emit({"command": "family", "spec": spec.to_json(), "result": rep}, args.json,
              f"{spec.label}\n{_fmt_group(rep)}")
        return EXIT_OK

    if args.command == "verify":
        if args.all == (args.name is not None):
            raise _Usage("verify needs exactly one of NAME or --all")
        if args.nmax < 3:
            raise _Usage("--nmax must be at least 3")
        if args.all:
            specs, cases = all_specs(args.nmax), TORIC_CASES
        else:
            # a bare dihedral family name means the sweep n = 3..nmax
            dihedral = {f.lower(): f for f in DIHEDRAL_FAMILIES}.get(args.name.strip().lower())
            if dihedral and args.n is None:
                specs = [FamilySpec(dihedral, n, args.rank) for n in range(3, args.nmax + 1)]
            else:
                specs = [parse_family(args.name, args.n, args.rank)]
            cases = ()
        res = run_verify(specs, cases, jobs=max(1, args.jobs))
        text = "\n".join([_fmt_verdict(v) for v in res["families"]] + [_fmt_toric(t) for t in res["toric"]])
        text += f"\n{'all checks passed' if res['ok'] else 'MISMATCH'}"
        _emit({"command": "verify", "result": res}, args.json, text)
        return EXIT_OK if res["ok"] else EXIT_MISMATCH

    if args.command == "toric":
        rep = toric_report(args.case)
        _emit({"command": "toric", "result": rep}, args.json, _fmt_toric(rep))
        return EXIT_OK if rep["expected"] else EXIT_MISMATCH

    raise _Usage(f"unknown command {args.command}")  # pragma: no cover


class _Usage(Exception):
    pass


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return _run(args)
    except InternalMismatch as exc:
        print(f"mckay3: internal consistency check failed: {exc}", file=sys.stderr)
        return EXIT_MISMATCH
    except (_Usage, McKayError) as exc:
        print(f"mckay3: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
