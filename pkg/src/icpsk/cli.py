"""Command-line entry point: ``icpsk {minrank,analyze,map,simulate,sweep}``.

Exit codes: 0 success, 2 parse/validation error, 3 search budget exhausted,
4 encoding matrix not decodable.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import io
import json
import sys
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Optional, Sequence

from . import __version__, analysis, code, mapper, metrics, problem, sim

EXIT_OK, EXIT_INPUT, EXIT_BUDGET, EXIT_UNDECODABLE = 0, 2, 3, 4
MANIFEST = "manifest.json"


@dataclass
class RunManifest:
    command: str
    args: list[str]  # argv without --out, enough to re-run
    problem_file: str
    problem_sha256: str
    codes: list[dict] = field(default_factory=list)  # {N, source, file, rows}
    priority_order: list[str] = field(default_factory=list)
    seed: Optional[int] = None
    outputs: list[str] = field(default_factory=list)
    tool_version: str = __version__

    def write(self, out: Path) -> None:
        _write(out / MANIFEST, json.dumps(asdict(self), indent=2) + "\n")


class _UsageError(Exception):
    pass


def _write(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="\n") as fh:
        fh.write(text)


def _sha256(path: str) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


def _args_without_out(argv: Sequence[str]) -> list[str]:
    out, skip = [], False
    for a in argv:
        if skip:
            skip = False
            continue
        if a == "--out":
            skip = True
            continue
        if a.startswith("--out="):
            continue
        out.append(a)
    return out


def _code_entry(L: code.EncodingMatrix, source: str, file: Optional[str]) -> dict:
    return {"N": L.N, "source": source, "file": file, "rows": code.matrix_to_dict(L)["rows"]}


def _load_or_search(p: problem.IndexCodingProblem, path: Optional[str], budget: int):
    if path:
        L = code.load_matrix(path)
        source = "loaded"
    else:
        _, L = code.find_minrank(p, budget=budget)
        source = "searched"
    bad = code.undecodable_receivers(L, p)
    if bad:
        raise code.NotDecodableError("receivers cannot decode: " + ", ".join(f"R{i + 1}" for i in bad))
    return L, source


def _priority(args, p) -> Optional[list[int]]:
    return analysis.parse_priority(args.priority) if args.priority else None


def _sim_config(args) -> sim.SimConfig:
    return sim.SimConfig(
        ebn0_db_grid=sim.parse_grid(args.ebn0),
        trials_per_point=args.trials,
        seed=args.seed,
        bandwidth_adjust=args.bandwidth_adjust,
        workers=args.workers,
    )


def _report_csv(report: metrics.GainReport) -> str:
    rows = [r.row() for r in report.receivers]
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=list(rows[0]), lineterminator="\n")
    w.writeheader()
    w.writerows(rows)
    return buf.getvalue()


def _constellation_csv(N: int) -> str:
    const = mapper.Constellation(N)
    lines = ["point_index,re,im"]
    for k, z in enumerate(const.points):
        lines.append(f"{k},{float(z.real)!r},{float(z.imag)!r}")
    return "\n".join(lines) + "\n"


def _simulate_all(p, L, mapping, cfg) -> tuple[list[sim.ErrorCurve], str]:
    curves = sim.simulate_psk(p, L, mapping, cfg) + sim.simulate_bpsk_baseline(p, L, cfg)
    return curves, sim.curves_to_csv(curves, cfg.seed)


# --- commands ----------------------------------------------------------------


def cmd_minrank(args, argv) -> int:
    p = problem.load_problem(args.problem)
    N, L = code.find_minrank(p, budget=args.budget)
    print(N)
    if args.out:
        out = Path(args.out)
        _write(out / "code.json", json.dumps(code.matrix_to_dict(L), indent=2) + "\n")
        RunManifest(
            "minrank", _args_without_out(argv), args.problem, _sha256(args.problem),
            codes=[_code_entry(L, "searched", "code.json")], outputs=["code.json"],
        ).write(out)
    return EXIT_OK


def cmd_analyze(args, argv) -> int:
    p = problem.load_problem(args.problem)
    L, source = _load_or_search(p, args.code, args.budget)
    prio = _priority(args, p)
    mapping = mapper.algorithm1(p, L, prio)
    report = metrics.gain_report(p, L, mapping)
    out = Path(args.out)
    _write(out / "report.csv", _report_csv(report))
    _write(out / "report.json", json.dumps(report.to_dict(), indent=2) + "\n")
    _write(out / "mapping.txt", "\n".join(mapping.lines()) + "\n")
    RunManifest(
        "analyze", _args_without_out(argv), args.problem, _sha256(args.problem),
        codes=[_code_entry(L, source, args.code)],
        priority_order=[f"R{i + 1}" for i in analysis.order_receivers(p, L, prio)],
        outputs=["report.csv", "report.json", "mapping.txt"],
    ).write(out)
    print(_report_csv(report), end="")
    return EXIT_OK


def cmd_map(args, argv) -> int:
    p = problem.load_problem(args.problem)
    L, source = _load_or_search(p, args.code, args.budget)
    prio = _priority(args, p)
    mapping = mapper.algorithm1(p, L, prio)
    out = Path(args.out)
    _write(out / "mapping.txt", "\n".join(mapping.lines()) + "\n")
    _write(out / "constellation.csv", _constellation_csv(L.N))
    RunManifest(
        "map", _args_without_out(argv), args.problem, _sha256(args.problem),
        codes=[_code_entry(L, source, args.code)],
        priority_order=[f"R{i + 1}" for i in analysis.order_receivers(p, L, prio)],
        outputs=["mapping.txt", "constellation.csv"],
    ).write(out)
    return EXIT_OK


def cmd_simulate(args, argv) -> int:
    p = problem.load_problem(args.problem)
    cfg = _sim_config(args)
    L, source = _load_or_search(p, args.code, args.budget)
    prio = _priority(args, p)
    mapping = mapper.algorithm1(p, L, prio)
    _, text = _simulate_all(p, L, mapping, cfg)
    out = Path(args.out)
    _write(out / "curves.csv", text)
    RunManifest(
        "simulate", _args_without_out(argv), args.problem, _sha256(args.problem),
        codes=[_code_entry(L, source, args.code)],
        priority_order=[f"R{i + 1}" for i in analysis.order_receivers(p, L, prio)],
        seed=cfg.seed, outputs=["curves.csv"],
    ).write(out)
    return EXIT_OK


def sweep_summary_entry(p, L, mapping, curves: Sequence[sim.ErrorCurve], target: float) -> dict:
    """Best and worst receivers by minimum distance and their curve gap."""
    const = mapper.Constellation(L.N)
    d2 = [metrics.dmin_receiver(mapping, const, L, r) for r in p.receivers]
    best = max(range(p.m), key=lambda i: (d2[i], -i))
    worst = min(range(p.m), key=lambda i: (d2[i], i))
    psk = {c.receiver_id: c for c in curves if c.scheme == "psk"}
    xb = sim.crossing_db(psk[best + 1], target)
    xw = sim.crossing_db(psk[worst + 1], target)
    return {
        "N": L.N,
        "best_receiver": f"R{best + 1}",
        "worst_receiver": f"R{worst + 1}",
        "best_d2": metrics._finite(d2[best]),
        "worst_d2": metrics._finite(d2[worst]),
        "best_crossing_db": xb,
        "worst_crossing_db": xw,
        "gap_db": None if xb is None or xw is None else xw - xb,
    }


def cmd_sweep(args, argv) -> int:
    p = problem.load_problem(args.problem)
    cfg = _sim_config(args)
    supplied: dict[int, tuple[code.EncodingMatrix, str]] = {}
    for path in args.code or []:
        L = code.load_matrix(path)
        if L.N in supplied:
            raise _UsageError(f"two codes of length {L.N} supplied")
        supplied[L.N] = (L, path)
    lo = args.from_n
    if lo is None:
        lo = min(supplied) if supplied else code.find_minrank(p, budget=args.budget)[0]
    hi = p.n if args.to_n is None else args.to_n
    if not 1 <= lo <= hi <= p.n:
        raise _UsageError(f"need 1 <= from-n <= to-n <= n={p.n}")
    prio = _priority(args, p)
    out = Path(args.out)
    entries, codes, outputs = [], [], []
    for N in range(lo, hi + 1):
        if N in supplied:
            L, src_file = supplied[N]
            source = "loaded"
        else:
            L, src_file, source = code.find_code(p, N, args.budget), None, "searched"
        bad = code.undecodable_receivers(L, p)
        if bad:
            raise code.NotDecodableError(f"length {N}: receivers cannot decode: " + ", ".join(f"R{i + 1}" for i in bad))
        mapping = mapper.algorithm1(p, L, prio)
        curves, text = _simulate_all(p, L, mapping, cfg)
        rel = f"N{N}/curves.csv"
        _write(out / rel, text)
        outputs.append(rel)
        codes.append(_code_entry(L, source, src_file))
        entries.append(sweep_summary_entry(p, L, mapping, curves, args.target))
    _write(out / "summary.json", json.dumps({"target_rate": args.target, "lengths": entries}, indent=2) + "\n")
    outputs.append("summary.json")
    RunManifest(
        "sweep", _args_without_out(argv), args.problem, _sha256(args.problem),
        codes=codes, seed=cfg.seed, outputs=outputs,
    ).write(out)
    for e in entries:
        print(f"N={e['N']} best {e['best_receiver']} d2={e['best_d2']} worst {e['worst_receiver']} d2={e['worst_d2']} gap_db={e['gap_db']}")
    return EXIT_OK


# --- parser ------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="icpsk", description=__doc__.splitlines()[0])
    ap.add_argument("--version", action="version", version=__version__)
    sub = ap.add_subparsers(dest="command", required=True)

    def common(sp, out_required=True):
        sp.add_argument("--problem", required=True, help="problem JSON file")
        sp.add_argument("--budget", type=int, default=code.DEFAULT_BUDGET, help="max decodability tests in code search")
        sp.add_argument("--out", required=out_required, help="output directory")

    def coded(sp, multi=False):
        if multi:
            sp.add_argument("--code", action="append", help="encoding matrix JSON (repeat for several lengths)")
        else:
            sp.add_argument("--code", help="encoding matrix JSON; searched by minrank when omitted")
        sp.add_argument("--priority", help="receiver tie-break order, e.g. R2,R1")

    def simargs(sp):
        sp.add_argument("--ebn0", default="0:16:1", help="Eb/N0 grid start:stop:step in dB (stop inclusive)")
        sp.add_argument("--trials", type=int, default=100_000, help="trials per grid point")
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--bandwidth-adjust", action="store_true", help="scale baseline noise power by N/2")
        sp.add_argument("--workers", type=int, default=1, help="worker processes (results do not depend on it)")

    sp = sub.add_parser("minrank", help="shortest linear index code")
    common(sp, out_required=False)
    sp.set_defaults(func=cmd_minrank)

    sp = sub.add_parser("analyze", help="per-receiver distances and gains")
    common(sp)
    coded(sp)
    sp.set_defaults(func=cmd_analyze)

    sp = sub.add_parser("map", help="labeling and constellation coordinates")
    common(sp)
    coded(sp)
    sp.set_defaults(func=cmd_map)

    sp = sub.add_parser("simulate", help="Monte-Carlo error curves, PSK and BPSK baseline")
    common(sp)
    coded(sp)
    simargs(sp)
    sp.set_defaults(func=cmd_simulate)

    sp = sub.add_parser("sweep", help="simulate every code length in a range")
    common(sp)
    coded(sp, multi=True)
    simargs(sp)
    sp.add_argument("--from-n", type=int, help="first code length (default: shortest supplied, else minrank)")
    sp.add_argument("--to-n", type=int, help="last code length (default: n)")
    sp.add_argument("--target", type=float, default=1e-3, help="error rate at which curve gaps are measured")
    sp.set_defaults(func=cmd_sweep)
    return ap


def main(argv: Optional[Sequence[str]] = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_INPUT
    try:
        return args.func(args, argv)
    except code.BudgetExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except code.NotDecodableError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_UNDECODABLE
    except (problem.ProblemError, code.CodeError, sim.SimConfigError, analysis.PriorityError, _UsageError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
