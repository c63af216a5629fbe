"""Command-line entry point: `decorat <subcommand> ...`."""

from __future__ import annotations

import argparse
import json
import os
import sys
from importlib import resources
from pathlib import Path

from . import imp
from .equations import KINDS, SS
from .errors import DecoratError, ParseError
from .imp import Final, Uncaught, parse_program, run, show_cmd
from .oracle import combined_model, outcome_json, sample_stores, semantic_eq
from .script import check_script
from .terms import show
from .translate import d_cmd

# Exit codes
OK, REJECTED, PARSE, TYPE, INTERNAL = 0, 1, 2, 3, 4

LEMMA_SUITE = (("lemma1", True), ("lemma2", True), ("lemma3", True),
               ("lemma2_flipped", False), ("lemma2_wrong_rule", False),
               ("lemma3_impure", False))
LIBRARY = ("state", "exceptions", "imp")


def _resolve(path: str, bundle: str) -> Path:
    """The file itself, or a bundled file of the same name under `bundle`."""
    p = Path(path)
    if p.exists():
        return p
    bundled = resources.files("decorat").joinpath(bundle).joinpath(p.name)
    if bundled.is_file():
        return Path(str(bundled))
    raise FileNotFoundError(path)


def _read(path: str, bundle: str) -> str:
    return _resolve(path, bundle).read_text(encoding="utf-8")


def _seed(args) -> int:
    if args.seed is not None:
        return args.seed
    return int(os.environ.get("DECORAT_SEED", "0"))


def _emit(args, doc, text: str):
    print(json.dumps(doc, indent=2, sort_keys=True) if args.json else text)


def _store_arg(text: str | None, locations) -> dict:
    store = {loc: 0 for loc in locations}
    if not text:
        return store
    for item in text.split(","):
        if "=" not in item:
            raise ParseError(f"bad store entry {item!r}; expected name=value")
        k, v = item.split("=", 1)
        k = k.strip()
        if k not in store:
            raise ParseError(f"{k} is not a location of this program")
        try:
            store[k] = int(v)
        except ValueError:
            raise ParseError(f"{k} := {v!r} is not an integer") from None
    return store


def _show_store(store: dict) -> str:
    return ", ".join(f"{k}={v}" for k, v in store.items())


# subcommands

def cmd_parse(args) -> int:
    prog = parse_program(_read(args.file, "programs"))
    print(json.dumps(imp.to_json(prog), indent=2))
    return OK


def cmd_run(args) -> int:
    prog = parse_program(_read(args.file, "programs"))
    store = _store_arg(args.store, prog.locations)
    doc = {}
    lines = []
    if args.trace:
        steps = imp.trace(prog.body, dict(store), args.fuel)
        doc["trace"] = [{"step": n, "store": s, "cmd": show_cmd(c)}
                        for n, (s, c) in enumerate(steps)]
        lines += [json.dumps(e, sort_keys=True) for e in doc["trace"]]
    out = run(prog.body, dict(store), args.fuel)
    doc.update(outcome_json(out))
    if isinstance(out, Final):
        lines.append(f"Final {_show_store(out.store)}")
    elif isinstance(out, Uncaught):
        lines.append(f"Uncaught {out.exc} {_show_store(out.store)}")
    else:
        lines.append(f"OutOfFuel after {args.fuel} steps {_show_store(out.store)}")
    _emit(args, doc, "\n".join(lines))
    return OK


def cmd_translate(args) -> int:
    prog = parse_program(_read(args.file, "programs"))
    t = d_cmd(prog.body)
    from .terms import infer_decoration, typecheck
    dom, cod = typecheck(t)
    doc = {"term": show(t, decorations=args.decorations), "dom": str(dom), "cod": str(cod),
           "decoration": str(infer_decoration(t))}
    _emit(args, doc, doc["term"])
    return OK


def cmd_check(args) -> int:
    v = check_script(_read(args.script, "lemmas"))
    if args.transcript:
        Path(args.transcript).write_text(json.dumps(v.transcript, indent=2) + "\n", encoding="utf-8")
    if v.accepted:
        text = f"accepted: {len(v.lemmas)} lemma(s): {', '.join(v.lemmas)}"
    else:
        text = (f"rejected: {v.failed_lemma} step {v.failed_step}: "
                f"{v.error}: {v.reason}")
    for lemma, step, flag in v.flags:
        text += f"\nnote: {lemma} step {step} is {flag}"
    doc = v.to_json()
    if not args.json_transcript:
        doc.pop("transcript")
    _emit(args, doc, text)
    return OK if v.accepted else REJECTED


def cmd_oracle_eq(args) -> int:
    p1 = parse_program(_read(args.file1, "programs"))
    p2 = parse_program(_read(args.file2, "programs"))
    locs = tuple(dict.fromkeys(p1.locations + p2.locations))
    excs = tuple(dict.fromkeys(p1.exceptions + p2.exceptions))
    kind = KINDS[args.kind]
    seed = _seed(args)
    model = combined_model(locs, excs, seed=seed)
    stores = sample_stores(locs, args.samples, seed)
    states = [tuple(s[loc] for loc in locs) for s in stores]
    v = semantic_eq(d_cmd(p1.body), d_cmd(p2.body), kind, model, args.fuel,
                    inputs=[()], states=states)
    doc = {"equivalent": v.holds, "kind": kind.code, "checked": v.checked,
           "seed": seed, "counterexample": v.counterexample}
    text = "equivalent" if v.holds else \
        f"not equivalent\ncounterexample: {json.dumps(v.counterexample, sort_keys=True)}"
    _emit(args, doc, text)
    return OK if v.holds else REJECTED


def cmd_soundness(args) -> int:
    from .soundness import soundness_reports, summarize
    seed = _seed(args)
    reports = soundness_reports(args.instances, seed, args.model)
    summary = summarize(reports)
    summary.update({"seed": seed, "model": args.model, "instances": args.instances})
    lines = []
    for group, reps in reports.items():
        for r in reps:
            mark = "FAIL" if r.failures else "ok  " if r.instances else "n/a "
            lines.append(f"{mark} {group:8} {r.rule:13} {r.model:9} {r.kind} "
                         f"{r.passes}/{r.instances}")
    lines.append(f"combined failures: {', '.join(summary['combined_failing']) or 'none'}")
    if summary["undocumented_failures"]:
        lines.append(f"not among the documented cases: {', '.join(summary['undocumented_failures'])}")
    doc = {"summary": summary,
           "reports": {g: [r.to_json() for r in reps] for g, reps in reports.items()}}
    if args.report:
        from .report import write_report
        doc["files"] = write_report(reports, summary, args.report)
        lines.append("wrote " + ", ".join(doc["files"].values()))
    _emit(args, doc, "\n".join(lines))
    return OK if summary["primary_ok"] and summary["imp_ok"] else REJECTED


def cmd_lemmas(args) -> int:
    """Replay the bundled suite: the library, the three lemmas and their mutants."""
    rows = []
    for name in LIBRARY:
        v = check_script(_read(f"{name}.dlp", "lemmas"))
        rows.append({"script": name, "expected": "accepted", **_verdict_row(v)})
    for name, accept in LEMMA_SUITE:
        v = check_script(_read(f"{name}.dlp", "lemmas"))
        rows.append({"script": name, "expected": "accepted" if accept else "rejected",
                     **_verdict_row(v)})
    ok = all(r["status"] == r["expected"] for r in rows)
    lines = []
    for r in rows:
        mark = "ok  " if r["status"] == r["expected"] else "FAIL"
        where = f" at {r['failed_lemma']} step {r['failed_step']} ({r['error']})" \
            if r["status"] == "rejected" else ""
        lines.append(f"{mark} {r['script']:18} {r['status']}{where}")
    _emit(args, {"ok": ok, "scripts": rows}, "\n".join(lines))
    return OK if ok else REJECTED


def _verdict_row(v) -> dict:
    return {"status": "accepted" if v.accepted else "rejected", "lemmas": v.lemmas,
            "failed_lemma": v.failed_lemma, "failed_step": v.failed_step, "error": v.error}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable output on stdout")
    ap = argparse.ArgumentParser(prog="decorat",
                                 description="Decorated equational proofs for IMP with exceptions.")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("parse", parents=[common], help="print the AST of a program as JSON")
    p.add_argument("file")
    p.set_defaults(fn=cmd_parse)

    p = sub.add_parser("run", parents=[common], help="run a program with the small-step interpreter")
    p.add_argument("file")
    p.add_argument("--fuel", type=int, default=10_000)
    p.add_argument("--store", help="initial values, e.g. x=5,y=0 (others start at 0)")
    p.add_argument("--trace", action="store_true")
    p.set_defaults(fn=cmd_run)

    p = sub.add_parser("translate", parents=[common], help="print the decorated term of a program")
    p.add_argument("file")
    p.add_argument("--decorations", action="store_true")
    p.set_defaults(fn=cmd_translate)

    p = sub.add_parser("check", parents=[common], help="check a .dlp proof script")
    p.add_argument("script")
    p.add_argument("--transcript", metavar="OUT.json")
    p.add_argument("--json-transcript", action="store_true",
                   help="include the transcript in --json output")
    p.set_defaults(fn=cmd_check)

    p = sub.add_parser("oracle-eq", parents=[common], help="compare two programs semantically")
    p.add_argument("file1")
    p.add_argument("file2")
    p.add_argument("--kind", choices=("ss", "sw", "ws", "ww"), default=SS.code)
    p.add_argument("--seed", type=int)
    p.add_argument("--samples", type=int, default=100)
    p.add_argument("--fuel", type=int, default=10_000)
    p.set_defaults(fn=cmd_oracle_eq)

    p = sub.add_parser("soundness", parents=[common], help="test catalog rules against the models")
    p.add_argument("--model", choices=("small", "tiny"), default="small")
    p.add_argument("--seed", type=int)
    p.add_argument("--instances", type=int, default=100)
    p.add_argument("--report", metavar="DIR", help="write JSON, CSV and a PNG chart to DIR")
    p.set_defaults(fn=cmd_soundness)

    p = sub.add_parser("lemmas", parents=[common], help="replay the bundled proof suite")
    p.set_defaults(fn=cmd_lemmas)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except FileNotFoundError as exc:
        print(f"error: no such file: {exc.args[0] if exc.args else exc}", file=sys.stderr)
        return PARSE
    except DecoratError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return exc.exit_code
    except Exception as exc:  # invariant violations surface as exit 4
        print(f"internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return INTERNAL


if __name__ == "__main__":
    sys.exit(main())
