"""Command-line entry point: ``tilingmatroid <command> [flags]``.

Exit codes: 0 predicate true / success, 1 predicate false / infeasible,
2 usage or input error, 3 resource budget exhausted.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Optional, Sequence

from tilingmatroid import matroid as M
from tilingmatroid import verify as V
from tilingmatroid.cellio import CellSetParseError, parse_cellset
from tilingmatroid.errors import ResourceLimitError, TilingMatroidError
from tilingmatroid.render import render
from tilingmatroid.tiler import (
    RHOMBUS,
    T1,
    T2,
    UNIT_DOWN,
    UNIT_UP,
    HoleyRegion,
    Objective,
    Tiling,
    annulus_tiling,
    lozenge_tiling,
    max_rhombi_tiling,
    min_type2,
    reconfigure_up,
    tile_exact,
)
from tilingmatroid.trigrid import CellSet, LatticeTri, check_tri, triangular_hull

EXIT_TRUE, EXIT_FALSE, EXIT_USAGE, EXIT_BUDGET = 0, 1, 2, 3

TILE_FLAGS = {"rhombus": RHOMBUS, "t1": T1, "t2": T2, "up": UNIT_UP, "down": UNIT_DOWN}
COMMANDS = (
    "indep", "rank", "closure", "basis", "circuit", "flat", "hull",
    "tile", "min-type2", "annulus", "enum", "verify", "render",
)


class UsageError(Exception):
    pass


def _tri_text(t: LatticeTri) -> str:
    return f"({t.p},{t.q},{t.r},{t.k})"


def _cells_text(s: CellSet) -> str:
    return json.dumps([list(u) for u in s])


def tiling_to_dict(t: Tiling) -> dict:
    counts = {k.value: v for k, v in t.counts.items()}
    return {
        "n": t.region.n,
        "holes": [list(u) for u in t.region.holes],
        "counts": counts,
        "tiles": [
            {"kind": tile.kind.value, "ups": [list(u) for u in tile.ups], "downs": [list(d) for d in tile.downs]}
            for tile in t.tiles
        ],
    }


def _tiling_text(t: Tiling) -> str:
    counts = ", ".join(f"{k.value}={v}" for k, v in t.counts.items() if v)
    lines = [f"tiles: {len(t.tiles)} ({counts or 'none'})"]
    for tile in t.tiles:
        cells = [f"u{tuple(u)}" for u in tile.ups] + [f"d{tuple(d)}" for d in tile.downs]
        lines.append(f"  {tile.kind.value:<10} " + " ".join(cells))
    return "\n".join(lines)


def _parse_tri(text: str) -> LatticeTri:
    try:
        p, q, r, k = (int(v) for v in text.replace("(", "").replace(")", "").split(","))
    except ValueError:
        raise UsageError(f"--tri expects p,q,r,k, got {text!r}") from None
    return LatticeTri(p, q, r, k)


def _parse_budget(text: Optional[str]) -> Optional[int]:
    if text is None or text == "default":
        return None
    try:
        value = int(text)
    except ValueError:
        raise UsageError(f"--budget expects a positive integer or 'default', got {text!r}") from None
    if value < 1:
        raise UsageError("--budget must be positive")
    return value


def _parse_tiles(text: str) -> frozenset:
    kinds = set()
    for part in text.split(","):
        part = part.strip()
        if part not in TILE_FLAGS:
            raise UsageError(f"unknown tile kind {part!r}; use {', '.join(TILE_FLAGS)}")
        kinds.add(TILE_FLAGS[part])
    return frozenset(kinds)


def _parse_objective(text: Optional[str]) -> Optional[Objective]:
    if text is None:
        return None
    if text == "min-t2":
        return Objective.minimize(T2)
    if text.startswith("exact-t1="):
        try:
            return Objective.exact(T1, int(text.split("=", 1)[1]))
        except ValueError:
            pass
    raise UsageError(f"--objective expects min-t2 or exact-t1=<k>, got {text!r}")


def _load_cells(args) -> CellSet:
    if args.all:
        if args.n is None:
            raise UsageError("--all needs --n")
        return CellSet.full(args.n)
    if args.cells is None:
        if args.n is None:
            raise UsageError("give --cells <path> (or - for stdin), or --n with --all / for the empty set")
        return CellSet.empty(args.n)
    text = sys.stdin.read() if args.cells == "-" else open(args.cells, encoding="utf-8").read()
    doc = parse_cellset(text)
    if args.n is not None and args.n != doc.n:
        raise UsageError(f"--n {args.n} conflicts with n = {doc.n} in {args.cells}")
    return doc.cellset()


def _emit(args, text: str) -> None:
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _emit_tiling(args, t: Tiling, header: str = "") -> None:
    fmt = args.format or "text"
    if fmt in ("svg", "ascii"):
        _emit(args, render(t, fmt))
    elif fmt == "json":
        _emit(args, json.dumps(tiling_to_dict(t), indent=2) + "\n")
    else:
        _emit(args, (header + "\n" if header else "") + _tiling_text(t) + "\n")


def _solve_tiles(args, s: CellSet) -> Optional[Tiling]:
    kinds = _parse_tiles(args.tiles)
    region = HoleyRegion.of(s)
    objective = _parse_objective(args.objective)
    units = kinds & {UNIT_UP, UNIT_DOWN}
    if units:
        if kinds - {RHOMBUS, UNIT_UP, UNIT_DOWN} or objective is not None:
            raise UsageError("unit triangles combine only with rhombus (max-rhombi tiling), without --objective")
        return max_rhombi_tiling(region)
    if kinds == {RHOMBUS} and objective is None:
        return lozenge_tiling(region)
    return tile_exact(region, kinds, objective=objective, node_budget=args.node_budget)


def _cmd(args) -> int:
    cmd = args.command
    if cmd == "verify":
        return _cmd_verify(args)
    if cmd == "annulus":
        if args.n is None or args.tri is None:
            raise UsageError("annulus needs --n and --tri p,q,r,k")
        tri = _parse_tri(args.tri)
        check_tri(args.n, tri)
        _emit_tiling(args, annulus_tiling(args.n, tri))
        return EXIT_TRUE

    s = _load_cells(args)
    budget = _parse_budget(args.budget)
    ctx = M.MatroidContext(s.n, budget or M.DEFAULT_ENUM_BUDGET)

    if cmd == "indep":
        bad = M.violating_triangle(ctx, s)
        if bad is None:
            print("true")
            return EXIT_TRUE
        count = (s.mask & CellSet.of_triangle(bad).mask).bit_count()
        print(f"false\nviolating triangle {_tri_text(bad)} holds {count} > {bad.k} cells")
        return EXIT_FALSE
    if cmd == "rank":
        print(M.rank(ctx, s))
        return EXIT_TRUE
    if cmd == "closure":
        print(_cells_text(M.closure(ctx, s)))
        return EXIT_TRUE
    if cmd == "basis":
        ok = M.is_basis(ctx, s)
        print("true" if ok else "false")
        if ok:
            print(_tiling_text(lozenge_tiling(HoleyRegion.of(s))))
        return EXIT_TRUE if ok else EXIT_FALSE
    if cmd == "circuit":
        ok = M.is_circuit(ctx, s)
        print("true" if ok else "false")
        strict = M.strictly_oversaturated(ctx, s)
        print("strictly over-saturated: " + (" ".join(_tri_text(t) for t in strict) or "none"))
        return EXIT_TRUE if ok else EXIT_FALSE
    if cmd == "flat":
        ok = M.is_flat_closure(ctx, s)
        print("true" if ok else "false")
        print(f"geometric test: {'true' if M.is_flat_geometric(ctx, s) else 'false'}")
        if ok:
            tris, uncovered = M.flat_decomposition(ctx, s)
            print("decomposition: " + (" ".join(_tri_text(t) for t in tris) or "empty"))
            if uncovered:
                print("uncovered cells: " + _cells_text(uncovered))
        else:
            print("closure: " + _cells_text(M.closure(ctx, s)))
        return EXIT_TRUE if ok else EXIT_FALSE
    if cmd == "hull":
        if not s:
            raise UsageError("the hull of the empty set is undefined")
        print(_tri_text(triangular_hull(s)))
        return EXIT_TRUE
    if cmd in ("tile", "render"):
        t = _solve_tiles(args, s)
        if t is None:
            print("infeasible")
            return EXIT_FALSE
        if cmd == "render":
            if args.reconfigure:
                t = reconfigure_up(t)
            _emit(args, render(t, args.format or "svg"))
        else:
            if args.reconfigure:
                t = reconfigure_up(t)
            _emit_tiling(args, t)
        return EXIT_TRUE
    if cmd == "min-type2":
        value = min_type2(HoleyRegion.of(s), node_budget=args.node_budget)
        if value is None:
            print("infeasible")
            return EXIT_FALSE
        print(value)
        return EXIT_TRUE
    if cmd == "enum":
        total = 0
        lines = []
        for found in M.enumerate_sets(ctx, args.kind, budget):
            lines.append(_cells_text(found))
            total += 1
        _emit(args, "\n".join(lines + [f"# {total} {args.kind}"]) + "\n")
        return EXIT_TRUE
    raise UsageError(f"unknown command {cmd!r}")


def _cmd_verify(args) -> int:
    if args.n is None:
        raise UsageError("verify needs --n")
    budget = _parse_budget(args.budget) or V.DEFAULT_BUDGET
    ctx = M.MatroidContext(args.n)
    theorems = args.theorem or list(V.THEOREMS)
    reports = [V.check(ctx, t, budget, args.seed) for t in theorems]
    fmt = args.format or "json-report"
    if fmt == "json-report":
        body = json.dumps([r.to_dict(timing=args.timing) for r in reports], indent=2, sort_keys=True) + "\n"
    else:
        rows = []
        for r in reports:
            mark = "PASS" if r.passed else "FAIL"
            rows.append(
                f"{mark} {r.theorem:<16} n={r.n} examined={r.examined} agree={r.agreements} "
                f"disagree={r.disagreement_count} skipped={r.skipped} [{r.expectation}, {r.budget_status}]"
            )
        body = "\n".join(rows) + "\n"
    _emit(args, body)
    return EXIT_TRUE if V.all_passed(reports) else EXIT_FALSE


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="tilingmatroid", description="Tiling matroids on the triangular grid.")
    parser.add_argument("command", choices=COMMANDS)
    parser.add_argument("--n", type=int)
    parser.add_argument("--cells", help="cell-set document path, or - for stdin")
    parser.add_argument("--all", action="store_true", help="use every upward cell of T_n")
    parser.add_argument("--tiles", default="rhombus", help="comma list of rhombus,t1,t2,up,down")
    parser.add_argument("--objective", help="min-t2 or exact-t1=<k>")
    parser.add_argument("--format", choices=("text", "svg", "ascii", "json", "json-report"))
    parser.add_argument("--budget", help="subset budget for enum/verify, or 'default'")
    parser.add_argument("--node-budget", type=int, default=2_000_000, help="exact-cover search nodes")
    parser.add_argument("--seed", type=int, default=V.DEFAULT_SEED)
    parser.add_argument("--out")
    parser.add_argument("--tri", help="lattice triangle p,q,r,k for annulus")
    parser.add_argument("--kind", choices=M.KINDS, default="bases", help="what enum lists")
    parser.add_argument("--theorem", action="append", choices=V.THEOREMS, help="verify only these (repeatable)")
    parser.add_argument("--reconfigure", action="store_true", help="push unit down triangles up before output")
    parser.add_argument("--timing", action="store_true", help="include wall-clock runtime in reports")
    return parser




def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_TRUE
    try:
        return _cmd(args)
    except ResourceLimitError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (UsageError, CellSetParseError, TilingMatroidError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
