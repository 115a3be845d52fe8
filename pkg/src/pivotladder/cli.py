"""Command line entry points: run a script, explore in a repl, or serve."""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from typing import Optional

from .adaptive import UsageLog
from .dsl import Interpreter, guess_format
from .errors import DslParseError, PivotLadderError
from .formats import load_graph
from .graph import PropertyGraph


def _read_graph(path: str) -> PropertyGraph:
    with open(path, encoding="utf-8") as fh:
        return load_graph(fh.read(), guess_format(path))


def _load_usage(path: Optional[str]) -> UsageLog:
    if path and os.path.exists(path):
        with open(path, encoding="utf-8") as fh:
            return UsageLog.from_jsonl(fh.read())
    return UsageLog()


def _save_usage(path: Optional[str], usage: UsageLog):
    if path:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(usage.to_jsonl())


def _print_output(out: dict):
    kind = out["kind"]
    if kind == "load":
        print(f"loaded {out['path']}: {out['nodes']} nodes, "
              f"{out['edges']} edges (v{out['version']})")
    elif kind == "describe":
        for step in out["chain"]:
            filters = "; ".join(step["filters"])
            suffix = f"  [{filters}]" if filters else ""
            print(f"  {step['index']}. {step['category']} "
                  f"({step['mode']}, {step['size']}){suffix}")
    elif kind == "export":
        print(f"exported {out['nodes']} nodes, {out['edges']} edges "
              f"to {out['path']} ({out['format']})")
    elif kind == "adapt-report":
        if not out["proposals"]:
            print("no proposals")
        for i, p in enumerate(out["proposals"], start=1):
            print(f"  {i}. {p['rewrite']} ({p['id']}, seen "
                  f"{p['occurrenceCount']}x)")
    elif kind == "adapt-apply":
        print(f"applied {out['proposal']} -> graph v{out['graphVersion']}")
    else:
        print(json.dumps(out))


def cmd_run(args) -> int:
    graph = _read_graph(args.graph) if args.graph else None
    usage = _load_usage(args.usage_log)
    base = os.path.dirname(os.path.abspath(args.script))
    with open(args.script, encoding="utf-8") as fh:
        text = fh.read()
    interp = Interpreter(graph, usage, theta=args.theta, base_dir=base,
                         session_id=os.path.basename(args.script))
    try:
        outputs = interp.run_text(text)
    except PivotLadderError as exc:
        print(f"error: {exc.message}", file=sys.stderr)
        return 1
    finally:
        interp.finish()
        _save_usage(args.usage_log, usage)
    if args.json:
        print(json.dumps(outputs, ensure_ascii=False, indent=2))
    else:
        for out in outputs:
            _print_output(out)
    if args.dump_session and interp.session is not None:
        print(json.dumps(interp.session.to_json(), ensure_ascii=False,
                         indent=2))
    return 0


def cmd_repl(args) -> int:
    graph = _read_graph(args.graph)
    usage = _load_usage(args.usage_log)
    interp = Interpreter(graph, usage, theta=args.theta,
                         base_dir=os.getcwd(), session_id="repl")
    print(f"{len(graph.nodes)} nodes, {len(graph.edges)} edges; "
          "end statements with ';', ctrl-d to exit")
    buffer = ""
    while True:
        try:
            line = input("... " if buffer else ">>> ")
        except EOFError:
            print()
            break
        except KeyboardInterrupt:
            print()
            buffer = ""
            continue
        if not buffer and line.strip().lower() in ("exit", "quit"):
            break
        buffer += line + "\n"
        stripped = buffer.strip()
        if not stripped:
            buffer = ""
            continue
        if not stripped.rstrip().endswith(";"):
            continue
        buffer = ""
        try:
            outputs = interp.run_text(stripped)
        except PivotLadderError as exc:
            print(f"error: {exc.message}")
            continue
        for out in outputs:
            _print_output(out)
        session = interp.session
        if session is not None and session.steps:
            step = session.steps[-1]
            print(f"step {step.index}: {step.category} "
                  f"-> {len(step.active_set)} nodes")
    interp.finish()
    _save_usage(args.usage_log, usage)
    return 0


def cmd_serve(args) -> int:
    import uvicorn

    from .service import create_app

    graph = _read_graph(args.graph)
    usage = _load_usage(args.usage_log)
    static = args.static if args.static and os.path.isdir(args.static) else None
    if args.static and static is None:
        print(f"warning: static dir {args.static!r} not found, skipping",
              file=sys.stderr)
    app = create_app(graph, theta=args.theta, auto_apply=args.auto_apply,
                     usage_log=usage, static_dir=static)
    try:
        uvicorn.run(app, host=args.host, port=args.port, log_level="info")
    finally:
        _save_usage(args.usage_log, usage)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pivotladder",
        description="iterative set-pivot exploration over property graphs")
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="execute a script file")
    run.add_argument("script")
    run.add_argument("--graph", help="graph to load before the script runs")
    run.add_argument("--theta", type=int, default=3)
    run.add_argument("--usage-log", help="jsonl file for recorded chains")
    run.add_argument("--json", action="store_true",
                     help="print raw output records as JSON")
    run.add_argument("--dump-session", action="store_true",
                     help="print the final session state as JSON")
    run.set_defaults(func=cmd_run)

    repl = sub.add_parser("repl", help="interactive statement loop")
    repl.add_argument("graph")
    repl.add_argument("--theta", type=int, default=3)
    repl.add_argument("--usage-log", help="jsonl file for recorded chains")
    repl.set_defaults(func=cmd_repl)

    serve = sub.add_parser("serve", help="start the HTTP service")
    serve.add_argument("--port", type=int, default=8000)
    serve.add_argument("--host", default="127.0.0.1")
    serve.add_argument("--graph", required=True)
    serve.add_argument("--theta", type=int, default=3)
    serve.add_argument("--auto-apply", action="store_true",
                       help="apply proposals as soon as they cross theta")
    serve.add_argument("--static", help="directory of UI assets to serve")
    serve.add_argument("--usage-log", help="jsonl file for recorded chains")
    serve.set_defaults(func=cmd_serve)

    return parser


def main(argv: Optional[list[str]] = None) -> int:
    logging.basicConfig(level=logging.INFO, format="%(message)s")
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except DslParseError as exc:
        print(f"error: {exc.message}", file=sys.stderr)
        return 1
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
