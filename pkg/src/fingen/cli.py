"""Command-line front end: ``fingen <command> [options]``."""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from fractions import Fraction

from . import io
from .action import is_generating, is_generating_pairwise, shannon_entropy
from .errors import DomainError, FingenError, NotGenerating, ParseError
from .fixtures import pointwise_partition, random_partition, random_transitive_action
from .synth import DEFAULT_TAIL, check_synthesis, decode, synthesize

COMMANDS = ("synthesize", "verify", "entropy", "roundtrip", "demo")


@dataclass(frozen=True)
class RunConfig:
    command: str
    input: str | None = None
    output: str | None = None
    seed: int | None = None
    tail_threshold: Fraction = DEFAULT_TAIL
    trace: bool = False
    self_check: bool = False
    points: int = 48
    generators: int = 2
    classes: int = 12

    def validate(self):
        if self.command not in COMMANDS:
            raise DomainError(f"unknown command {self.command!r}")
        if not 0 < self.tail_threshold < 1:
            raise DomainError("tail threshold must lie in (0, 1)")
        if self.command != "demo" and not self.input:
            raise DomainError(f"{self.command} needs --input")


def parse_fraction(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}") from exc


def _needs_partition(partition):
    if partition is None:
        raise ParseError("system file has no partition")
    return partition


def _self_check(syn):
    failed = [name for name, ok in check_synthesis(syn).items() if not ok]
    if failed:
        raise FingenError(f"self-check failed: {', '.join(failed)}")


def run(config: RunConfig) -> tuple[int, str]:
    """Execute one command. Returns (exit status, report text)."""
    config.validate()
    cmd = config.command

    if cmd == "demo":
        seed = 0 if config.seed is None else config.seed
        action = random_transitive_action(config.points, config.generators, seed)
        partition = random_partition(action, config.classes, seed + 1)
        if not is_generating(action, partition):
            partition = pointwise_partition(action)
        syn = synthesize(action, partition, config.tail_threshold)
        if config.self_check:
            _self_check(syn)
        report = io.synthesis_report(syn, config.trace)
        report = {
            "seed": seed,
            "summary": f"|alpha| = {len(partition)} -> |beta| = {len(syn.beta)}",
            "system": io.system_dict(action, partition),
            **report,
        }
        return 0, io.dumps(report)

    action, partition = io.load_system(config.input)

    if cmd == "entropy":
        partition = _needs_partition(partition)
        return 0, io.dumps({"classes": len(partition), "entropy": shannon_entropy(partition)})

    if cmd == "verify":
        partition = _needs_partition(partition)
        by_join = is_generating(action, partition)
        by_pairs = is_generating_pairwise(action, partition)
        doc = {
            "generating": by_join.generating,
            "join": {"generating": by_join.generating, "witness": by_join.witness},
            "pairs": {"generating": by_pairs.generating, "witness": by_pairs.witness},
            "agree": by_join.generating == by_pairs.generating,
        }
        return (0 if doc["agree"] else 1), io.dumps(doc)

    partition = _needs_partition(partition)
    syn = synthesize(action, partition, config.tail_threshold)
    if config.self_check:
        _self_check(syn)
    if cmd == "synthesize":
        return 0, io.dumps(io.synthesis_report(syn, config.trace))

    decoded = decode(action, syn.R, syn.C)
    match = decoded == syn.L
    doc = {"C": syn.C, "n_max": syn.towers.n_max, "decode == L": match}
    return (0 if match else 1), io.dumps(doc)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="fingen", description="Finite generating partitions for finite actions.")
    ap.add_argument("command", choices=COMMANDS)
    ap.add_argument("--input", "-i")
    ap.add_argument("--output", "-o")
    ap.add_argument("--seed", type=int)
    ap.add_argument("--tail-threshold", type=parse_fraction, default=DEFAULT_TAIL)
    ap.add_argument("--trace", action="store_true", help="include exhaustion steps in the report")
    ap.add_argument("--self-check", action="store_true", help="re-verify all invariants before writing")
    ap.add_argument("--points", type=int, default=48, help="demo: number of points")
    ap.add_argument("--generators", type=int, default=2, help="demo: number of generators")
    ap.add_argument("--classes", type=int, default=12, help="demo: classes in the random partition")
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    config = RunConfig(
        command=args.command,
        input=args.input,
        output=args.output,
        seed=args.seed,
        tail_threshold=args.tail_threshold,
        trace=args.trace,
        self_check=args.self_check,
        points=args.points,
        generators=args.generators,
        classes=args.classes,
    )
    try:
        status, text = run(config)
    except FingenError as exc:
        record = {"error": type(exc).__name__, "module": type(exc).__module__, "detail": str(exc)}
        sys.stderr.write(json.dumps(record) + "\n")
        return 3 if isinstance(exc, NotGenerating) else 2 if isinstance(exc, ParseError) else 1
    if config.output:
        with open(config.output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return status


if __name__ == "__main__":
    sys.exit(main())
