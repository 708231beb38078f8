"""Command-line interface: ``qxg <command> [options]``.

Exit codes: 0 success, 1 input or usage error, 2 inconsistent data.
"""

from __future__ import annotations

import argparse
import json
import statistics
import sys

from . import __version__
from .acquisition import BoxOracle, geqca
from .bench import (CSV_HEADER, REFERENCE_STORAGE_EXPONENT, fit_power_law, median_rows,
                    run_bench, scaling_sweep, storage_sweep, write_rows)
from .errors import DuplicateEntry, Inconsistent, QXGError
from .graph import METHODS, build, describe, stats
from .sceneio import SynthParams, parse_scene, synth_scene, write_scene
from .serialize import qxg_to_json, read_qxg, size_report, write_qxg, write_size_reports


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(f"{self.prog}: error: {message}")


def _int_list(text: str) -> list[int]:
    try:
        return [int(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _synth_spec(text: str) -> tuple[int, int, int]:
    vals = _int_list(text)
    if len(vals) != 3:
        raise argparse.ArgumentTypeError("--synth takes seed,m,n")
    return vals[0], vals[1], vals[2]


def _pair(text: str) -> tuple[str, str]:
    parts = [p.strip() for p in text.split(",")]
    if len(parts) != 2 or not all(parts):
        raise argparse.ArgumentTypeError("--pair takes two object ids: A,B")
    return parts[0], parts[1]


def cmd_build(args) -> int:
    scene = parse_scene(args.scene)
    g = build(scene, args.method, args.epsilon, args.threads)
    n = write_qxg(g, args.out)
    print(f"{scene.scene_id}: {stats(g).summary()} -> {args.out} ({n} bytes)")
    return 0


def _synth_params(args) -> SynthParams:
    d = SynthParams()
    return SynthParams(birth_rate=d.birth_rate if args.birth_rate is None else args.birth_rate,
                       death_rate=d.death_rate if args.death_rate is None else args.death_rate)


def cmd_bench(args) -> int:
    if args.scaling:
        pts = scaling_sweep(args.scaling, repeat=args.repeat)
        print("objects,acq_ms,bf_ms,acq_queries,bf_queries")
        for p in pts:
            print(f"{p.objects},{p.acq_ms:.4f},{p.bf_ms:.4f},{p.acq_queries},{p.bf_queries}")
        ms = [p.objects for p in pts]
        for tag, ys in (("acq", [p.acq_ms for p in pts]), ("bf", [p.bf_ms for p in pts])):
            _, b = fit_power_law(ms, ys)
            print(f"# {tag} time exponent b={b:.3f} (storage trend reference b={REFERENCE_STORAGE_EXPONENT})")
        return 0
    if args.scene is None and args.synth is None:
        raise UsageError("bench needs --scene PATH, --synth seed,m,n or --scaling LIST")
    if args.scene is not None:
        scene = parse_scene(args.scene)
    else:
        seed, m, n = args.synth
        scene = synth_scene(seed, m, n, _synth_params(args))
    rows = run_bench(scene, args.repeat, eps=args.epsilon, threads=args.threads)
    if args.out:
        with open(args.out, "w", newline="") as f:
            write_rows(rows, f)
    if args.medians:
        with open(args.medians, "w", newline="") as f:
            write_rows(median_rows(rows), f)
    meds = median_rows(rows)
    for tag in ("acq", "bf"):
        ws = [r.wall_ms for r in meds if r.method == tag]
        if ws:
            print(f"{scene.scene_id} {tag}: median {statistics.median(ws):.3f} ms/frame, "
                  f"max {max(ws):.3f} ms, total {sum(ws):.1f} ms")
    if not args.out:
        write_rows(rows, sys.stdout)
    return 0


def cmd_stats(args) -> int:
    st = stats(read_qxg(args.graph))
    if args.json:
        print(json.dumps(st.to_dict(), indent=2))
    else:
        print(st.summary())
    return 0


def cmd_gen(args) -> int:
    scene = synth_scene(args.seed, args.objects, args.frames, _synth_params(args))
    write_scene(scene, args.out)
    return 0


def cmd_describe(args) -> int:
    g = read_qxg(args.graph)
    for line in describe(g, *args.pair):
        print(line)
    return 0


def cmd_export(args) -> int:
    doc = qxg_to_json(read_qxg(args.graph))
    with open(args.json_out, "w", encoding="utf-8") as f:
        json.dump(doc, f, indent=1)
        f.write("\n")
    return 0


def cmd_geqca(args) -> int:
    scene = parse_scene(args.scene)
    if not 1 <= args.frame <= scene.n_frames:
        raise UsageError(f"frame {args.frame} outside 1..{scene.n_frames}")
    frame = scene.frames[args.frame - 1]
    boxes = {d.id: d.bbox for d in frame.entries}
    ids = args.objects or sorted(boxes)
    missing = [o for o in ids if o not in boxes]
    if missing:
        raise UsageError(f"objects not visible in frame {args.frame}: {', '.join(missing)}")
    oracle = BoxOracle({o: boxes[o] for o in ids}, args.epsilon)
    g = geqca(ids, oracle, use_pc=not args.no_pc)
    for i, a in enumerate(ids):
        for b in ids[i + 1:]:
            print(f"{a} {b} {g.label(a, b)}")
    print(f"# queries={g.queries} pc={'off' if args.no_pc else 'on'}")
    return 0


def cmd_size_report(args) -> int:
    if args.sweep:
        reports = storage_sweep(args.sweep, frames=args.frames, seed=args.seed)
    elif args.scene and args.graph:
        reports = [size_report(args.scene, args.graph)]
    else:
        raise UsageError("size-report needs --scene and --graph, or --sweep LIST")
    write_size_reports(reports, sys.stdout)
    return 0


def make_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="qxg", description="Qualitative eXplainable Graphs from tracked 2D boxes.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    b = sub.add_parser("build", help="build a QXG from a scene file")
    b.add_argument("--scene", required=True)
    b.add_argument("--out", required=True)
    b.add_argument("--method", choices=METHODS, default="acquisition")
    b.add_argument("--threads", type=int, default=1)
    b.add_argument("--epsilon", type=float, default=0.0)
    b.set_defaults(func=cmd_build)

    be = sub.add_parser("bench", help="per-frame timing CSV (" + ",".join(CSV_HEADER) + ")")
    be.add_argument("--scene")
    be.add_argument("--synth", type=_synth_spec, metavar="SEED,M,N")
    be.add_argument("--scaling", type=_int_list, metavar="M1,M2,...")
    be.add_argument("--repeat", type=int, default=1)
    be.add_argument("--out", help="raw rows, one per frame, method and repeat")
    be.add_argument("--medians", help="one row per frame and method with the median wall time")
    be.add_argument("--threads", type=int, default=1)
    be.add_argument("--epsilon", type=float, default=0.0)
    be.add_argument("--birth-rate", type=float)
    be.add_argument("--death-rate", type=float)
    be.set_defaults(func=cmd_bench)

    s = sub.add_parser("stats", help="summary of an encoded graph")
    s.add_argument("--graph", required=True)
    s.add_argument("--json", action="store_true")
    s.set_defaults(func=cmd_stats)

    g = sub.add_parser("gen", help="write a synthetic scene file")
    g.add_argument("--seed", type=int, required=True)
    g.add_argument("--objects", type=int, required=True)
    g.add_argument("--frames", type=int, required=True)
    g.add_argument("--out", required=True)
    g.add_argument("--birth-rate", type=float)
    g.add_argument("--death-rate", type=float)
    g.set_defaults(func=cmd_gen)

    d = sub.add_parser("describe", help="relation runs of one object pair")
    d.add_argument("--graph", required=True)
    d.add_argument("--pair", required=True, type=_pair, metavar="A,B")
    d.set_defaults(func=cmd_describe)

    e = sub.add_parser("export", help="dump an encoded graph as JSON")
    e.add_argument("--graph", required=True)
    e.add_argument("--json-out", required=True)
    e.set_defaults(func=cmd_export)

    q = sub.add_parser("geqca", help="run constraint acquisition on one frame")
    q.add_argument("--scene", required=True)
    q.add_argument("--frame", type=int, default=1)
    q.add_argument("--objects", type=lambda t: [v.strip() for v in t.split(",") if v.strip()])
    q.add_argument("--no-pc", action="store_true")
    q.add_argument("--epsilon", type=float, default=0.0)
    q.set_defaults(func=cmd_geqca)

    r = sub.add_parser("size-report", help="scene bytes vs graph bytes as CSV")
    r.add_argument("--scene")
    r.add_argument("--graph")
    r.add_argument("--sweep", type=_int_list, metavar="M1,M2,...")
    r.add_argument("--frames", type=int, default=40)
    r.add_argument("--seed", type=int, default=42)
    r.set_defaults(func=cmd_size_report)
    return p


def main(argv=None) -> int:
    try:
        args = make_parser().parse_args(argv)
        return args.func(args)
    except UsageError as e:
        print(e, file=sys.stderr)
        return 1
    except (Inconsistent, DuplicateEntry) as e:
        print(f"qxg: inconsistent data: {e}", file=sys.stderr)
        return 2
    except QXGError as e:
        print(f"qxg: {e}", file=sys.stderr)
        return 1
    except OSError as e:
        name = getattr(e, "filename", None)
        msg = f"{e.strerror}: {name}" if name and e.strerror else str(e)
        print(f"qxg: {msg}", file=sys.stderr)
        return 1
    except ValueError as e:
        print(f"qxg: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
