"""Command-line interface.

Subcommands: ``girth`` (cycle census), ``optimize`` (hill climbing),
``pipeline`` (protograph design), ``simulate`` (BSC Monte-Carlo),
``expand`` (write expanded matrices), ``inspect`` (file summary).

Exit codes: 0 success, 2 unreadable/malformed input, 3 precondition
violation, 4 a requested certification failed (girth target missed or
design not certified).
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from typing import Optional

from . import __version__
from .algebra import (
    BaseMatrix,
    BinaryParityMatrix,
    PolyParityMatrix,
    expand_full,
    expand_to_level,
    format_base_matrix,
    parse_base_matrix,
    poly_from_json,
    poly_to_json,
    weight_profile,
)
from .cycles import cycle_report, inevitable_cycles
from .errors import CertificationError, ParseError, PreconditionError
from .kernel import BACKEND
from .optimizer import (
    hill_climb_hqc,
    hill_climb_weight1,
    random_base_matrix,
)
from .pipeline import design, format_connectivity, parse_connectivity
from .simulator import ChannelSpec, Decoder, format_records_csv, monte_carlo
from .trees import (
    topology_from_json,
    tree_matrix_from_json,
    tree_matrix_to_json,
    tree_to_poly,
)

__all__ = ["main", "parse_base_matrix"]


def _read_text(path: str) -> str:
    try:
        with open(path, "r", encoding="utf-8") as f:
            return f.read()
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc}") from exc


def _write_text(path: str, text: str) -> None:
    with open(path, "w", encoding="utf-8") as f:
        f.write(text)


def _load_json(path: str) -> dict:
    try:
        data = json.loads(_read_text(path))
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: invalid JSON: {exc}") from exc
    if not isinstance(data, dict):
        raise ParseError(f"{path}: expected a JSON object")
    return data


def _load_code(path: str):
    """Load a code description: base-matrix text, polynomial or tree JSON."""
    if path.endswith(".json"):
        data = _load_json(path)
        if "trees" in data:
            return tree_matrix_from_json(data)
        if "entries" in data:
            return poly_from_json(data)
        raise ParseError(f"{path}: neither a polynomial nor a tree matrix")
    if path.endswith(".alist"):
        return BinaryParityMatrix.from_alist(_read_text(path))
    return parse_base_matrix(_read_text(path))


def _default_threads() -> int:
    env = os.environ.get("GIRTHFORGE_THREADS", "").strip()
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            raise ParseError(f"GIRTHFORGE_THREADS must be an integer, got {env!r}")
    return 1


# ---------------------------------------------------------------------------


def _cmd_girth(args) -> int:
    code = _load_code(args.file)
    if isinstance(code, BinaryParityMatrix):
        raise PreconditionError(
            "cycle census needs a structured description; alist input is binary"
        )
    report = cycle_report(
        code, cap=args.cap, max_witnesses=args.witnesses, threads=args.threads
    )
    if args.json:
        payload = {
            "cap": report.cap,
            "girth": report.girth,
            "girth_at_least": report.girth_at_least,
            "counts": {
                str(n): {"total": c.total, "locked": c.locked, "inevitable": c.inevitable}
                for n, c in report.counts
            },
            "witnesses": [
                {"entries": list(map(list, w.entries)), "coeffs": list(map(list, w.coeffs))}
                for w in report.witnesses
            ],
        }
        print(json.dumps(payload, indent=2))
    else:
        for n, c in report.counts:
            print(
                f"length {n}: total {c.total} (locked {c.locked}, inevitable {c.inevitable})"
            )
        if report.girth is None:
            print(f"girth: >= {report.girth_at_least}")
        else:
            print(f"girth: {report.girth}")
    if args.require_girth is not None:
        if report.girth is not None and report.girth < args.require_girth:
            raise CertificationError(
                f"girth {report.girth} below required {args.require_girth}"
            )
        if report.cap < args.require_girth - 2:
            raise PreconditionError(
                f"cap {report.cap} cannot certify girth {args.require_girth}"
            )
    return 0


def _cmd_expand(args) -> int:
    code = _load_code(args.file)
    if isinstance(code, BinaryParityMatrix):
        h = None
        binary = code
    else:
        if hasattr(code, "to_poly"):
            h = code.to_poly()
        elif not isinstance(code, PolyParityMatrix):
            h = tree_to_poly(code)
        else:
            h = code
        binary = None
    if args.level:
        if h is None:
            raise PreconditionError("alist input cannot be partially expanded")
        out = expand_to_level(h, args.level)
        text = json.dumps(poly_to_json(out), indent=2) + "\n"
    else:
        if binary is None:
            binary = expand_full(h)
        text = binary.to_alist()
    if args.out:
        _write_text(args.out, text)
        print(f"wrote {args.out}")
    else:
        sys.stdout.write(text)
    return 0


def _cmd_inspect(args) -> int:
    code = _load_code(args.file)
    print(f"kernel backend: {BACKEND}")
    if isinstance(code, BinaryParityMatrix):
        print(f"binary parity-check matrix: {code.rows} x {code.cols}")
        print(f"ones: {code.num_edges}")
        return 0
    if isinstance(code, BaseMatrix):
        print(f"base matrix: {code.rows} x {code.cols}, circulant size {code.p}")
        nz = sum(1 for row in code.grid for v in row if v != -1)
        print(f"nonzero blocks: {nz}")
        print(f"expanded size: {code.rows * code.p} x {code.cols * code.p}")
        return 0
    h = code if isinstance(code, PolyParityMatrix) else tree_to_poly(code)
    prof = weight_profile(h)
    print(
        f"polynomial matrix: {h.rows} x {h.cols}, levels "
        f"{tuple(h.levels.ps)}"
    )
    print(f"entry weights: max {prof.max_weight}, histogram {dict(prof.histogram)}")
    diags = inevitable_cycles(h)
    by_kind: dict[str, int] = {}
    for d in diags:
        by_kind[d.kind] = by_kind.get(d.kind, 0) + 1
    print(f"unavoidable cycle structures: {by_kind or 'none'}")
    return 0


def _parse_levels(args, needed: int) -> tuple[int, ...]:
    ps = []
    for name in ("p1", "p2", "p3", "p4"):
        v = getattr(args, name, None)
        if v is not None:
            ps.append(v)
    if len(ps) < needed:
        raise PreconditionError(
            f"topology has {needed} levels; pass --p1 .. --p{needed}"
        )
    return tuple(ps[:needed])


def _cmd_optimize(args) -> int:
    sources = sum(1 for s in (args.topology, args.base, args.shape) if s)
    if sources != 1:
        raise PreconditionError("give exactly one of --topology, --base, --shape")
    best = None
    for attempt in range(max(1, args.restarts)):
        run_seed = args.seed * 1000003 + attempt
        if args.base:
            b0 = parse_base_matrix(_read_text(args.base))
            if attempt > 0:
                b0 = random_base_matrix(
                    b0.rows, b0.cols, b0.p, seed=run_seed,
                    support=[[v != -1 for v in row] for row in b0.grid],
                )
            outcome = hill_climb_weight1(
                b0, args.girth, seed=run_seed, max_iters=args.max_iters
            )
        elif args.shape:
            rows, cols = args.shape
            if args.p1 is None:
                raise PreconditionError("--shape needs --p1")
            b0 = random_base_matrix(rows, cols, args.p1, seed=run_seed)
            outcome = hill_climb_weight1(
                b0, args.girth, seed=run_seed, max_iters=args.max_iters
            )
        else:
            data = _load_json(args.topology)
            if "trees" in data:
                tm = tree_matrix_from_json(data)
                if attempt == 0:
                    outcome = hill_climb_hqc(
                        tm, girth=args.girth, seed=run_seed, max_iters=args.max_iters
                    )
                else:
                    from .trees import topology_of

                    topo = topology_of(tm)
                    outcome = hill_climb_hqc(
                        topo, levels=tm.levels.ps, girth=args.girth,
                        seed=run_seed, max_iters=args.max_iters,
                    )
            else:
                topo = topology_from_json(data)
                levels = _parse_levels(args, topo.num_levels)
                outcome = hill_climb_hqc(
                    topo, levels=levels, girth=args.girth,
                    seed=run_seed, max_iters=args.max_iters,
                )
        if best is None or outcome.girth_reached > best.girth_reached:
            best = outcome
        if outcome.reached_target:
            break
    assert best is not None
    print(
        f"terminated: {best.terminated_by} after {best.iterations} iterations; "
        f"girth reached {best.girth_reached} (target {best.girth_target})"
    )
    for n, c in best.residual:
        if c.total:
            print(
                f"residual length {n}: total {c.total} "
                f"(locked {c.locked}, inevitable {c.inevitable})"
            )
    if args.out:
        if isinstance(best.code, BaseMatrix):
            _write_text(args.out, format_base_matrix(best.code))
        else:
            _write_text(
                args.out, json.dumps(tree_matrix_to_json(best.code), indent=2) + "\n"
            )
        print(f"wrote {args.out}")
    if not best.reached_target:
        raise CertificationError(
            f"girth target {best.girth_target} not reached (best {best.girth_reached})"
        )
    return 0


def _cmd_pipeline(args) -> int:
    conn = parse_connectivity(_read_text(args.connectivity))
    result = design(
        conn,
        p1=args.p1,
        girth=args.girth,
        p2=args.p2,
        seed=args.seed,
        restarts=args.restarts,
        max_iters=args.max_iters,
        threads=args.threads,
    )
    for a in result.attempts:
        print(
            f"attempt seed={a.seed}: {a.terminated_by} after {a.iterations} moves, "
            f"two-level girth {a.two_level_girth}, squashed girth "
            f"{a.squashed_girth if a.squashed_girth is not None else '>= ' + str(args.girth)}, "
            f"membership {'ok' if a.membership_ok else 'FAILED'}, "
            f"{a.seconds:.2f}s"
        )
    if args.provenance:
        payload = {
            "connectivity": [list(r) for r in result.connectivity.grid],
            "inflated": [list(r) for r in result.inflated.grid],
            "row_pairs": [list(p) for p in result.dup.row_pairs],
            "col_pairs": [list(p) for p in result.dup.col_pairs],
            "p1": result.p1,
            "p2": result.p2,
            "girth": result.girth,
            "certified": result.certified,
            "attempts": [
                {
                    "seed": a.seed,
                    "iterations": a.iterations,
                    "terminated_by": a.terminated_by,
                    "final_cost": a.final_cost,
                    "two_level_girth": a.two_level_girth,
                    "squashed_girth": a.squashed_girth,
                    "membership_ok": a.membership_ok,
                    "certified": a.certified,
                    "seconds": a.seconds,
                }
                for a in result.attempts
            ],
        }
        _write_text(args.provenance, json.dumps(payload, indent=2) + "\n")
        print(f"wrote {args.provenance}")
    if not result.certified:
        raise CertificationError(
            f"no certified design in {len(result.attempts)} attempts"
        )
    assert result.base is not None
    print(
        f"certified: girth >= {args.girth}, base matrix "
        f"{result.base.rows} x {result.base.cols}, p = {result.base.p}"
    )
    if args.out:
        _write_text(args.out, format_base_matrix(result.base))
        print(f"wrote {args.out}")
    return 0


def _parse_points(spec: str) -> list[float]:
    if ":" in spec:
        parts = spec.split(":")
        if len(parts) != 3:
            raise ParseError("range must be start:step:stop")
        try:
            a, step, b = (float(x) for x in parts)
        except ValueError as exc:
            raise ParseError(f"bad range value: {exc}") from exc
        if step <= 0:
            raise ParseError("range step must be positive")
        out = []
        x = a
        while x <= b + 1e-9:
            out.append(round(x, 10))
            x += step
        return out
    try:
        return [float(x) for x in spec.split(",") if x.strip()]
    except ValueError as exc:
        raise ParseError(f"bad point value: {exc}") from exc


def _cmd_simulate(args) -> int:
    code = _load_code(args.code)
    if isinstance(code, BinaryParityMatrix):
        h = code
    elif isinstance(code, BaseMatrix):
        h = code.expand()
    else:
        poly = code if isinstance(code, PolyParityMatrix) else tree_to_poly(code)
        h = expand_full(poly)
    dec = Decoder.from_matrix(h)
    if (args.snr is None) == (args.epsilon is None):
        raise PreconditionError("give exactly one of --snr or --epsilon")
    if args.snr is not None:
        rate = args.rate if args.rate is not None else (h.cols - h.rows) / h.cols
        if rate <= 0:
            raise PreconditionError(
                "design rate is not positive; pass --rate explicitly"
            )
        channels = [ChannelSpec.from_snr(s, rate) for s in _parse_points(args.snr)]
    else:
        channels = [ChannelSpec.from_epsilon(e) for e in _parse_points(args.epsilon)]
    records = []
    for ch in channels:
        rec = monte_carlo(
            dec, ch, trials=args.trials, seed=args.seed,
            max_iters=args.max_iters, threads=args.threads,
        )
        records.append(rec)
        tag = f"snr {ch.snr_db} dB, " if ch.snr_db is not None else ""
        print(
            f"{tag}epsilon {ch.epsilon:.6g}: {rec.word_errors}/{rec.trials} word errors"
            f" (wer {rec.wer:.3g}, ber {rec.ber:.3g})"
        )
    csv_text = format_records_csv(records)
    if args.csv:
        _write_text(args.csv, csv_text)
        print(f"wrote {args.csv}")
    return 0


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="girthforge",
        description="Design and analysis of high-girth quasi-cyclic LDPC codes.",
    )
    ap.add_argument("--version", action="version", version=f"girthforge {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)
    threads_default = None  # resolved lazily so the env var is read at run time

    g = sub.add_parser("girth", help="count short cycles and report the girth")
    g.add_argument("file", help="base-matrix text, polynomial JSON or tree JSON")
    g.add_argument("--cap", type=int, default=12, help="largest cycle length counted")
    g.add_argument("--witnesses", type=int, default=0, help="witness paths per length")
    g.add_argument("--threads", type=int, default=threads_default)
    g.add_argument("--require-girth", type=int, default=None,
                   help="exit 4 unless the girth is at least this")
    g.add_argument("--json", action="store_true", help="machine-readable output")
    g.set_defaults(func=_cmd_girth)

    e = sub.add_parser("expand", help="expand to a binary alist or an inner-level JSON")
    e.add_argument("file")
    e.add_argument("--level", type=int, default=0,
                   help="expand outer levels only, keep this many inner levels")
    e.add_argument("--out", default=None)
    e.set_defaults(func=_cmd_expand)

    i = sub.add_parser("inspect", help="summarize a code file")
    i.add_argument("file")
    i.set_defaults(func=_cmd_inspect)

    o = sub.add_parser("optimize", help="hill-climb labels toward a target girth")
    o.add_argument("--topology", default=None,
                   help="topology JSON (or tree JSON used as the starting point)")
    o.add_argument("--base", default=None, help="base-matrix text starting point")
    o.add_argument("--shape", type=int, nargs=2, default=None, metavar=("J", "L"),
                   help="random full-support base matrix of this shape")
    o.add_argument("--p1", type=int, default=None)
    o.add_argument("--p2", type=int, default=None)
    o.add_argument("--p3", type=int, default=None)
    o.add_argument("--p4", type=int, default=None)
    o.add_argument("--girth", type=int, required=True)
    o.add_argument("--seed", type=int, required=True)
    o.add_argument("--restarts", type=int, default=1)
    o.add_argument("--max-iters", type=int, default=10_000)
    o.add_argument("--out", default=None)
    o.set_defaults(func=_cmd_optimize)

    p = sub.add_parser("pipeline", help="protograph to certified base matrix")
    p.add_argument("--connectivity", required=True)
    p.add_argument("--p1", type=int, required=True)
    p.add_argument("--p2", type=int, default=4)
    p.add_argument("--girth", type=int, default=10)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--restarts", type=int, default=8)
    p.add_argument("--max-iters", type=int, default=10_000)
    p.add_argument("--threads", type=int, default=threads_default)
    p.add_argument("--out", default=None)
    p.add_argument("--provenance", default=None)
    p.set_defaults(func=_cmd_pipeline)

    s = sub.add_parser("simulate", help="Monte-Carlo WER/BER over the BSC")
    s.add_argument("--code", required=True,
                   help="base-matrix text, polynomial/tree JSON, or alist")
    s.add_argument("--snr", default=None, help="dB points: 'a,b,c' or 'start:step:stop'")
    s.add_argument("--epsilon", default=None, help="crossover points, same syntax")
    s.add_argument("--rate", type=float, default=None,
                   help="code rate for SNR conversion (default: design rate)")
    s.add_argument("--trials", type=int, required=True)
    s.add_argument("--seed", type=int, required=True)
    s.add_argument("--max-iters", type=int, default=200)
    s.add_argument("--threads", type=int, default=threads_default)
    s.add_argument("--csv", default=None)
    s.set_defaults(func=_cmd_simulate)
    return ap


def main(argv: Optional[list[str]] = None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        if getattr(args, "threads", None) is None and hasattr(args, "threads"):
            args.threads = _default_threads()
        return args.func(args) or 0
    except ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except PreconditionError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except CertificationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 4


if __name__ == "__main__":
    sys.exit(main())
