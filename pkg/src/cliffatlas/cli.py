"""Command-line entry point: verify-all | geometry | steiner | report."""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from pathlib import Path

from .claims import AREAS, CLAIMS, INTERNAL_ERRORS, ClaimRecord, RunConfig, exit_code, records_to_dicts, run_claims
from .matrices import HashCollision
from .perms import ActionInconsistent

EXIT_OK, EXIT_FAIL, EXIT_UNCERTIFIED = 0, 1, 2
EXIT_USAGE, EXIT_INTERNAL, EXIT_IO = 64, 70, 74
FIELDS = ("claim_id", "description", "expected", "computed", "status", "elapsed_ms", "certificate_tier")

log = logging.getLogger("cliffatlas")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--filter", action="append", default=[], help=f"areas to run ({', '.join(AREAS)}); repeatable or comma separated")
    common.add_argument("--budget-iso", type=int, default=None, help="candidate images tried per isomorphism search")
    common.add_argument("--budget-aut", type=int, default=None, help="candidate images tried per automorphism search")
    common.add_argument("--threads", type=int, default=None, help="worker threads (default $ATLAS_THREADS or 1)")
    common.add_argument("--cache", type=Path, default=None, help="two-qubit Clifford closure dump to load or create")
    common.add_argument("--out-dir", type=Path, default=Path("atlas-out"))
    common.add_argument("--format", choices=("json", "text"), default="text")
    common.add_argument("--qubits", choices=("1", "2", "both"), default="both")
    common.add_argument("-v", "--verbose", action="store_true")

    p = _Parser(prog="cliffatlas", description="Exact verification of Clifford group, Pauli geometry and Witt design claims.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)
    sub.add_parser("verify-all", parents=[common], help="run every claim and write report.json")
    sub.add_parser("geometry", parents=[common], help="write commutation graph DOT and geometry JSON")
    sub.add_parser("steiner", parents=[common], help="write Witt design files and the Golay codewords")
    sub.add_parser("report", parents=[common], help="render a previous run's records with figures")
    return p


def make_config(args) -> RunConfig:
    filters = [f for item in args.filter for f in item.split(",") if f]
    threads = args.threads
    if threads is None:
        env = os.environ.get("ATLAS_THREADS")
        try:
            threads = int(env) if env else 1
        except ValueError:
            raise UsageError(f"ATLAS_THREADS is not an integer: {env!r}") from None
    try:
        return RunConfig(filters, args.budget_iso, args.budget_aut, threads, args.cache, args.out_dir, args.qubits)
    except ValueError as e:
        raise UsageError(str(e)) from None


def format_text(records: list[dict]) -> str:
    cols = ("claim_id", "status", "expected", "computed", "elapsed_ms", "certificate_tier")
    rows = [[_cell(r[c]) for c in cols] for r in records]
    widths = [max(len(c), *(len(row[i]) for row in rows)) if rows else len(c) for i, c in enumerate(cols)]
    out = ["  ".join(c.ljust(w) for c, w in zip(cols, widths))]
    out += ["  ".join(v.ljust(w) for v, w in zip(row, widths)) for row in rows]
    return "\n".join(line.rstrip() for line in out) + "\n"


def _cell(v) -> str:
    if v is None:
        return "-"
    if isinstance(v, str):
        return v
    return json.dumps(v, separators=(",", ":"))


def format_json(records: list[dict]) -> str:
    return json.dumps([{k: r[k] for k in FIELDS} for r in records], indent=2) + "\n"


def cmd_verify_all(config: RunConfig, fmt: str) -> int:
    records = records_to_dicts(run_claims(config))
    config.out_dir.mkdir(parents=True, exist_ok=True)
    (config.out_dir / "report.json").write_text(format_json(records))
    sys.stdout.write(format_json(records) if fmt == "json" else format_text(records))
    code = exit_code_from_dicts(records)
    for r in records:
        if r["status"] == "uncertified":
            log.warning("%s uncertified: %s (tier %s)", r["claim_id"], r["computed"], r["certificate_tier"])
    return code


def exit_code_from_dicts(records: list[dict]) -> int:
    return exit_code([ClaimRecord(**r) for r in records])


def cmd_geometry(config: RunConfig) -> int:
    from . import geometry as geo

    g = geo.build_pauli_geometry(2)
    tags = geo.classify_line_entanglement(g)
    found = geo.spreads(g)
    grid = geo.ring_projective_line_grid(g)
    extra = {
        "entanglement": tags,
        "spreads": [list(s) for s in found],
        "ring_grid": {
            "points": [[list(x), list(y)] for x, y in grid.points],
            "rows": [list(r) for r in grid.rows],
            "columns": [list(c) for c in grid.cols],
            "pauli": [grid.pauli_map[k] for k in range(len(grid.points))],
        },
    }
    out = config.out_dir
    out.mkdir(parents=True, exist_ok=True)
    (out / "commutation.dot").write_text(geo.to_dot(g))
    (out / "geometry.json").write_text(geo.to_json(g, extra))
    from .figures import draw_geometry

    draw_geometry(g, out / "geometry.png")
    print(f"points {g.num_points} lines {len(g.lines)} edges {len(g.edges())} spreads {len(found)} entangled {tags.count('entangled')}")
    return EXIT_OK


def cmd_steiner(config: RunConfig) -> int:
    from . import steiner

    code = steiner.golay_code()
    s24, s23, s22 = steiner.witt_designs()
    out = config.out_dir
    out.mkdir(parents=True, exist_ok=True)
    (out / "golay_codewords.txt").write_text(steiner.dump_codewords(code))
    for name, s in (("S5_8_24", s24), ("S4_7_23", s23), ("S3_6_22", s22)):
        (out / f"{name}.design").write_text(s.dumps())
    aut = steiner.design_automorphisms(s22)
    m22 = steiner.mathieu_m22(aut.group)
    print(f"S(5,8,24) blocks {len(s24.blocks)}")
    print(f"S(4,7,23) blocks {len(s23.blocks)}")
    print(f"S(3,6,22) blocks {len(s22.blocks)}")
    print(f"Aut(S(3,6,22)) order {aut.order}")
    print(f"M22 order {m22.order()}")
    return EXIT_OK


def cmd_report(config: RunConfig, fmt: str) -> int:
    path = config.out_dir / "report.json"
    records = json.loads(path.read_text())
    area_of = {c.claim_id: c.area for c in CLAIMS}
    selected = [r for r in records if not config.filters or area_of.get(r["claim_id"]) in config.filters]
    from .figures import draw_geometry, draw_status_chart
    from .geometry import build_pauli_geometry

    draw_status_chart(selected, config.out_dir / "status.png")
    draw_geometry(build_pauli_geometry(2), config.out_dir / "geometry.png")
    sys.stdout.write(format_json(selected) if fmt == "json" else format_text(selected))
    return exit_code_from_dicts(selected)


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
        config = make_config(args)
    except UsageError as e:
        print(f"cliffatlas: {e}", file=sys.stderr)
        return EXIT_USAGE
    try:
        if args.command == "verify-all":
            return cmd_verify_all(config, args.format)
        if args.command == "geometry":
            return cmd_geometry(config)
        if args.command == "steiner":
            return cmd_steiner(config)
        return cmd_report(config, args.format)
    except (*INTERNAL_ERRORS, ActionInconsistent, HashCollision, ArithmeticError) as e:
        print(f"cliffatlas: internal inconsistency: {e}", file=sys.stderr)
        return EXIT_INTERNAL
    except OSError as e:
        print(f"cliffatlas: {e}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
