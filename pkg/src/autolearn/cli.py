"""``autolearn`` command line: learn, verify, oracle, stats.

Exit codes: 0 success, 1 usage or parse error, 2 inconsistent input data
(a word labeled both ways, or an example contradicting the target).
"""
from __future__ import annotations

import argparse
import json
import os
import sys
import time
from pathlib import Path

import numpy as np

from .automata import AutomatonError, counterexample, kripke_counterexample, render_word, words_upto
from .formats import (
    ParseError,
    emit_dfa,
    emit_dot,
    emit_kripke,
    parse_dfa,
    parse_kripke,
    parse_labeled,
    parse_samples,
    parse_words,
)
from .generate import random_minimal_dfa
from .id_family import InconsistentExample, id_run, iid_run, ids_run
from .ikl import ikl_run
from .lstar import LearnerError, lstar_run
from .rpni import InconsistentSample, rpni2_stream, rpni_run
from .teacher import KripkeTeacher, Teacher

ACTIVE = ("lstar", "id", "iid", "ids", "ids-closed", "ids-free", "ikl")
PASSIVE = ("rpni", "rpni2")
ORACLE_CAP = 12

# qualitative columns of the query-wise comparison: (bookkeeping, lexicographical order)
QUALITIES = {
    "lstar": ("No", "No"),
    "id": ("No", "No"),
    "iid": ("Yes", "No"),
    "ids-closed": ("Yes", "No"),
    "ids-free": ("Yes", "No"),
    "ikl": ("Yes", "No"),
    "rpni": ("No", "Yes"),
    "rpni2": ("No", "Yes"),
}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _read(path) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None


def _require(args, *names):
    for name in names:
        if getattr(args, name.replace("-", "_")) is None:
            raise UsageError(f"--algorithm {args.algorithm} requires --{name}")


def _forbid(args, *names):
    for name in names:
        if getattr(args, name.replace("-", "_")) is not None:
            raise UsageError(f"--algorithm {args.algorithm} does not take --{name}")


def _out_dir(args) -> Path:
    out = Path(args.out_dir or os.environ.get("AUTOBENCH_OUT") or "autolearn-out")
    out.mkdir(parents=True, exist_ok=True)
    return out


def cmd_learn(args) -> int:
    alg = args.algorithm
    if alg == "ids":
        alg = f"ids-{args.mode}"
    elif args.mode is not None and not alg.startswith("ids"):
        raise UsageError("--mode only applies to the ids algorithm")
    start = time.perf_counter()
    target = None
    teacher = None
    if alg in PASSIVE:
        _require(args, "samples")
        _forbid(args, "live-set")
        alphabet = tuple(args.alphabet) if args.alphabet else None
        sample = parse_samples(_read(args.samples), alphabet)
        if args.target:
            target = parse_dfa(_read(args.target))
            alphabet = alphabet or target.alphabet
        if alg == "rpni":
            _forbid(args, "schedule")
            result = rpni_run(sample, alphabet)
        else:
            _require(args, "schedule")
            result = rpni2_stream(sample, parse_labeled(_read(args.schedule)), alphabet)
        hypothesis, stats, trace = result.hypothesis, result.stats, result.render_trace()
    else:
        _require(args, "target")
        _forbid(args, "samples")
        if alg == "ikl":
            target = parse_kripke(_read(args.target))
            teacher = KripkeTeacher(target)
            _require(args, "schedule")
            result = ikl_run(parse_words(_read(args.schedule)), teacher)
        else:
            target = parse_dfa(_read(args.target))
            teacher = Teacher(target)
            if alg == "lstar":
                result = lstar_run(teacher)
            elif alg == "id":
                _require(args, "live-set")
                result = id_run(parse_words(_read(args.live_set)), teacher)
            else:
                _require(args, "schedule")
                stream = parse_labeled(_read(args.schedule))
                if alg == "iid":
                    result = iid_run(stream, teacher)
                else:
                    result = ids_run(stream, teacher, alg.split("-")[1])
        hypothesis, stats, trace = result.hypothesis, result.stats, result.render_trace()
    elapsed = time.perf_counter() - start

    out = _out_dir(args)
    if alg == "ikl":
        (out / "hypothesis.kripke").write_text(emit_kripke(hypothesis), encoding="utf-8")
        accepting = int(hypothesis.outputs.any(axis=1).sum())
    else:
        (out / "hypothesis.dfa").write_text(emit_dfa(hypothesis), encoding="utf-8")
        accepting = int(hypothesis.accepting.sum())
    (out / "hypothesis.dot").write_text(emit_dot(hypothesis), encoding="utf-8")
    if teacher is not None:
        trace = trace + "\n\n# queries\n" + "\n".join(teacher.transcript)
    (out / "trace.log").write_text(trace + "\n", encoding="utf-8")

    verdict, cex = None, None
    if target is not None:
        if alg == "ikl":
            cex = kripke_counterexample(hypothesis, target)
        else:
            cex = counterexample(hypothesis, target)
        verdict = cex is None
    stats.algorithm = alg
    report = {
        **stats.as_dict(),
        "states": hypothesis.n_states,
        "accepting": accepting,
        "equivalent": verdict,
        "counterexample": cex,
        "wall_time": round(elapsed, 6),
    }
    (out / "report.json").write_text(json.dumps(report, indent=2) + "\n", encoding="utf-8")

    if args.trace:
        print(trace)
    verdict_text = {None: "n/a", True: "yes", False: f"no, counterexample {render_word(cex or '')}"}[verdict]
    print(
        f"{alg}: {hypothesis.n_states} states ({accepting} accepting); "
        f"membership={stats.membership} equivalence={stats.equivalence} bookkeeping={stats.bookkeeping}; "
        f"equivalent to target: {verdict_text}"
    )
    return 0


def cmd_verify(args) -> int:
    a = parse_dfa(_read(args.a))
    b = parse_dfa(_read(args.b))
    if a.alphabet != b.alphabet:
        raise UsageError(f"alphabets differ: {' '.join(a.alphabet)} vs {' '.join(b.alphabet)}")
    cex = counterexample(a, b)
    print("equivalent" if cex is None else f"counterexample {render_word(cex)}")
    return 0


def cmd_oracle(args) -> int:
    if args.max_len < 0 or args.max_len > args.cap:
        raise UsageError(f"--max-len must be between 0 and {args.cap}")
    target = parse_dfa(_read(args.target))
    words = words_upto(target.alphabet, args.max_len)
    verdicts = target.accepts_many(words)
    sys.stdout.write("".join(f"{w or 'λ'}:{int(v)}\n" for w, v in zip(words, verdicts)))
    return 0


def render_stats(reports: list[dict]) -> str:
    header = ("algorithm", "membership", "bookkeeping", "lexicographical", "MQ", "EQ", "BK")
    rows = []
    for r in reports:
        alg = r["algorithm"]
        book, lex = QUALITIES.get(alg.split()[0], ("?", "?"))
        rows.append(
            (
                alg,
                "Yes" if r["membership"] or alg.split()[0] not in PASSIVE else "No",
                book,
                lex,
                str(r["membership"]),
                str(r["equivalence"]),
                str(r["bookkeeping"]),
            )
        )
    widths = [max(len(x) for x in col) for col in zip(header, *rows)]
    fmt = lambda row: "  ".join(c.ljust(w) for c, w in zip(row, widths)).rstrip()
    return "\n".join([fmt(header), fmt(["-" * w for w in widths])] + [fmt(r) for r in rows]) + "\n"


def random_batch(seed: int, per_size: int = 10, sizes=range(2, 7)) -> list[dict]:
    """L* reports over seeded random minimal targets, ``per_size`` per state count."""
    rng = np.random.default_rng(seed)
    reports = []
    for n in sizes:
        for _ in range(per_size):
            target = random_minimal_dfa(rng, n)
            teacher = Teacher(target)
            stats = lstar_run(teacher).stats
            reports.append({**stats.as_dict(), "algorithm": "lstar", "target_states": n})
    return reports


def cmd_stats(args) -> int:
    reports = []
    for path in args.reports:
        try:
            data = json.loads(_read(path))
        except json.JSONDecodeError as exc:
            raise ParseError(f"{path}: not a report ({exc.msg})", exc.lineno) from None
        reports.extend(data if isinstance(data, list) else [data])
    if args.random_batch:
        batch = random_batch(args.seed, args.random_batch)
        means = {}
        for r in batch:
            means.setdefault(r["target_states"], []).append(r["membership"])
        for n, counts in means.items():
            reports.append(
                {
                    "algorithm": f"lstar n={n}",
                    "membership": int(np.mean(counts)),
                    "equivalence": 0,
                    "bookkeeping": 0,
                }
            )
    if not reports:
        raise UsageError("stats needs at least one report (or --random-batch)")
    sys.stdout.write(render_stats(reports))
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="autolearn", description="Grammatical inference toolkit.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    learn = sub.add_parser("learn", help="run a learner against a target or sample")
    learn.add_argument("--algorithm", required=True, choices=ACTIVE + PASSIVE)
    learn.add_argument("--target", help="DFA (or Kripke, for ikl) file standing behind the teacher")
    learn.add_argument("--samples", help="'+ word' / '- word' sample file (rpni, rpni2)")
    learn.add_argument("--schedule", help="labeled example stream (iid, ids, rpni2) or word queue (ikl)")
    learn.add_argument("--live-set", help="live-complete word list (id)")
    learn.add_argument("--mode", choices=("closed", "free"), help="prefix mode for ids (default closed)")
    learn.add_argument("--alphabet", help="sample alphabet as one string, e.g. ab (rpni, rpni2)")
    learn.add_argument("--out-dir", help="output directory (default $AUTOBENCH_OUT or ./autolearn-out)")
    learn.add_argument("--trace", action="store_true", help="echo the trace to stdout")
    learn.add_argument("--seed", type=int, default=0, help="accepted for interface uniformity; learners are deterministic")
    learn.set_defaults(func=cmd_learn)

    verify = sub.add_parser("verify", help="compare two DFAs")
    verify.add_argument("a")
    verify.add_argument("b")
    verify.set_defaults(func=cmd_verify)

    oracle = sub.add_parser("oracle", help="list every word up to --max-len with its verdict")
    oracle.add_argument("--target", required=True)
    oracle.add_argument("--max-len", type=int, required=True)
    oracle.add_argument("--cap", type=int, default=ORACLE_CAP, help=argparse.SUPPRESS)
    oracle.set_defaults(func=cmd_oracle)

    stats = sub.add_parser("stats", help="tabulate query counts from report files")
    stats.add_argument("reports", nargs="*")
    stats.add_argument("--random-batch", type=int, default=0, metavar="K", help="add L* means over K random targets per size 2..6")
    stats.add_argument("--seed", type=int, default=0)
    stats.set_defaults(func=cmd_stats)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "algorithm", None) == "ids" and args.mode is None:
        args.mode = "closed"
    try:
        return args.func(args)
    except (InconsistentSample, InconsistentExample) as exc:
        print(f"autolearn: inconsistent input: {exc}", file=sys.stderr)
        return 2
    except LearnerError as exc:
        print(f"autolearn: learner error: {exc}", file=sys.stderr)
        return 2
    except (UsageError, ParseError, AutomatonError) as exc:
        print(f"autolearn: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
