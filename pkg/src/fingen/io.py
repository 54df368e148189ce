"""
System files and reports.

A system file is JSON:

    {
      "points": 4,
      "generators": [[1, 2, 3, 0]],
      "names": ["s"],                # optional
      "partition": [0, 1, 1, 1]      # optional, class label per point
    }

Instead of "points"/"generators" a file may carry an "induced" block with
the fields of InducedActionSpec (coset_count, coset_action, fiber_size,
schreier_perms); the action is then the induced one. All arrays are 0-indexed.
"""

from __future__ import annotations

import json
from fractions import Fraction
from pathlib import Path

from .action import FiniteAction, Partition, shannon_entropy
from .errors import DomainError, ParseError
from .fixtures import InducedActionSpec, induced_action
from .synth import Synthesis


def parse_system(text: str) -> tuple[FiniteAction, Partition | None]:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"not valid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise ParseError("system file must be a JSON object")
    try:
        if "induced" in doc:
            action = induced_action(InducedActionSpec.from_dict(doc["induced"]))
            if "points" in doc and doc["points"] != action.point_count:
                raise ParseError("points disagrees with the induced block")
        else:
            action = FiniteAction(
                int(doc["points"]),
                tuple(tuple(g) for g in doc["generators"]),
                tuple(doc.get("names", ())),
            )
        partition = None
        if doc.get("partition") is not None:
            partition = Partition(tuple(int(v) for v in doc["partition"]))
            if partition.point_count != action.point_count:
                raise ParseError("partition length differs from the number of points")
    except KeyError as exc:
        raise ParseError(f"missing field {exc}") from exc
    except (TypeError, ValueError, DomainError) as exc:
        raise ParseError(str(exc)) from exc
    return action, partition


def load_system(path) -> tuple[FiniteAction, Partition | None]:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc}") from exc
    return parse_system(text)


def system_dict(action: FiniteAction, partition: Partition | None = None) -> dict:
    doc = {
        "points": action.point_count,
        "generators": [list(g) for g in action.generators],
        "names": list(action.generator_names),
    }
    if partition is not None:
        doc["partition"] = list(partition.labels)
    return doc


def frac(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


def synthesis_report(syn: Synthesis, trace: bool = False) -> dict:
    towers = syn.towers
    N = syn.action.point_count
    stats = syn.result.stats
    levels = []
    for lv in towers.levels:
        rec = {
            "n": lv.n,
            "B": len(lv.B),
            "T": len(lv.T),
            "free": len(lv.free),
            "blocks": len(lv.theta.blocks),
            "occupied_mass": frac(Fraction(N - len(lv.free), N)),
        }
        if trace:
            rec["trace"] = lv.trace.as_records()
        levels.append(rec)
    beta_sizes = sorted((len(c) for c in syn.beta.classes.values()), reverse=True)
    return {
        "points": N,
        "generators": len(syn.action.generators),
        "alpha": {
            "classes": len(syn.partition),
            "entropy": shannon_entropy(syn.partition),
        },
        "code": {str(lab): syn.code.words[lab] for lab in syn.code.order},
        "tail_threshold": frac(towers.threshold),
        "C": syn.C,
        "tail_mass": frac(Fraction(sum(len(w) for w in syn.L if len(w) > syn.C), N)),
        "B1_mass": frac(Fraction(len(towers.B1), N)),
        "n_max": towers.n_max,
        "levels": levels,
        "L": list(syn.L),
        "R": list(syn.R),
        "max_R": stats.max_length,
        "beta": {
            "classes": stats.beta_size,
            "sizes": beta_sizes,
            "entropy": stats.beta_entropy,
        },
        "generating": dict(syn.beta_generating),
    }


def dumps(doc) -> str:
    return json.dumps(doc, indent=2) + "\n"
