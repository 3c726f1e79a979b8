"""
Rendering suite reports.

Two formats are produced by :py:func:`emit_report`:

``human``
    An aligned table of properties followed by any facts and, for each
    failing property, its counterexample as a model file.

``machine``
    One ``key=value`` record per line::

        suite=mv2
        seed=42
        trials=500
        max_order=64
        max_rank=2
        max_factors=3
        property=mv2-exact trials=500 failures=0 result=pass
        fact.x="Z/2"
        counterexample.mv2-exact="# mv2 suite, seed 42, trial 3\\n..."
        duration=1.234

    The key set is fixed and the duration always comes last, so two runs with
    the same configuration differ only on that line. String values which may
    contain spaces or newlines are JSON encoded.
    :py:func:`parse_machine_report` reads this format back.
"""

from typing import Literal

from dataclasses import dataclass

import json
import re

from mvkit.model_file import format_model, parse_model_file
from mvkit.random_models import TrialConfig
from mvkit.suites import ReportDocument, PropertyResult


ReportFormat = Literal["human", "machine"]

CONFIG_KEYS = ("seed", "trials", "max_order", "max_rank", "max_factors")


@dataclass
class ReportParseError(ValueError):
    """Thrown when a machine-format report cannot be read back."""

    line_number: int
    message: str

    def __str__(self) -> str:
        return f"report line {self.line_number}: {self.message}"


def _result(p: PropertyResult) -> str:
    return "pass" if p.passed else "FAIL"


def _emit_human(doc: ReportDocument) -> str:
    out = [f"suite: {doc.suite}"]
    if doc.config is not None:
        out.append(
            "config: " + ", ".join(f"{k}={getattr(doc.config, k)}" for k in CONFIG_KEYS)
        )
        if doc.config.trials == 0:
            out.append("0 trials: every property passes vacuously")

    if doc.properties:
        header = ("property", "trials", "failures", "result")
        rows = [
            (p.name, str(p.trials), str(p.failures), _result(p)) for p in doc.properties
        ]
        widths = [max(len(r[i]) for r in [header, *rows]) for i in range(4)]
        for r in [header, *rows]:
            out.append(
                "  ".join(
                    cell.ljust(w) if i == 0 else cell.rjust(w)
                    for i, (cell, w) in enumerate(zip(r, widths))
                ).rstrip()
            )

    if doc.facts:
        width = max(len(k) for k in doc.facts)
        out.extend(f"{k.ljust(width)} : {v}" for k, v in doc.facts.items())

    for p in doc.failures():
        out.append("")
        out.append(f"{p.name} failed: {p.detail}")
        if p.counterexample is not None:
            out.append(format_model(p.counterexample).rstrip("\n"))

    out.append(f"duration: {doc.duration:.3f}s")
    return "\n".join(out) + "\n"


def _emit_machine(doc: ReportDocument) -> str:
    out = [f"suite={doc.suite}"]
    if doc.config is not None:
        out.extend(f"{k}={getattr(doc.config, k)}" for k in CONFIG_KEYS)
    for p in doc.properties:
        out.append(
            f"property={p.name} trials={p.trials} failures={p.failures} "
            f"result={_result(p).lower()}"
        )
    out.extend(f"fact.{k}={json.dumps(v)}" for k, v in doc.facts.items())
    for p in doc.failures():
        out.append(f"detail.{p.name}={json.dumps(p.detail)}")
        if p.counterexample is not None:
            out.append(
                f"counterexample.{p.name}={json.dumps(format_model(p.counterexample))}"
            )
    out.append(f"duration={doc.duration:.3f}")
    return "\n".join(out) + "\n"


def emit_report(doc: ReportDocument, format: ReportFormat = "human") -> str:
    match format:
        case "human":
            return _emit_human(doc)
        case "machine":
            return _emit_machine(doc)
        case _:
            raise ValueError(f"unknown report format {format!r}")


PROPERTY_RE = re.compile(
    r"property=(\S+) trials=([0-9]+) failures=([0-9]+) result=(pass|fail)"
)
KEY_VALUE_RE = re.compile(r"([a-z_]+)(?:\.(\S+?))?=(.*)")


def parse_machine_report(text: str) -> ReportDocument:
    """
    Read back the machine format. Counterexamples are parsed as model files.
    """
    suite = ""
    config: dict[str, int] = {}
    properties: dict[str, PropertyResult] = {}
    facts: dict[str, str] = {}
    details: dict[str, str] = {}
    counterexamples: dict[str, str] = {}
    duration = 0.0

    for line_number, line in enumerate(text.splitlines(), start=1):
        if not line:
            continue
        if match := PROPERTY_RE.fullmatch(line):
            name, trials, failures, _ = match.groups()
            properties[name] = PropertyResult(name, int(trials), int(failures))
        elif match := KEY_VALUE_RE.fullmatch(line):
            key, sub_key, value = match.groups()
            try:
                match (key, sub_key):
                    case ("suite", None):
                        suite = value
                    case (k, None) if k in CONFIG_KEYS:
                        config[k] = int(value)
                    case ("duration", None):
                        duration = float(value)
                    case ("fact", str(name)):
                        facts[name] = json.loads(value)
                    case ("detail", str(name)):
                        details[name] = json.loads(value)
                    case ("counterexample", str(name)):
                        counterexamples[name] = json.loads(value)
                    case _:
                        raise ReportParseError(line_number, f"unknown key {key!r}")
            except ValueError as exc:
                if isinstance(exc, ReportParseError):
                    raise
                raise ReportParseError(line_number, f"bad value {value!r}") from None
        else:
            raise ReportParseError(line_number, f"not a key=value record: {line!r}")

    results = []
    for name, p in properties.items():
        counterexample = None
        if name in counterexamples:
            counterexample = parse_model_file(counterexamples[name])
        results.append(p._replace(counterexample=counterexample, detail=details.get(name)))

    return ReportDocument(
        suite=suite,
        config=TrialConfig(**config) if config else None,
        properties=results,
        facts=facts,
        duration=duration,
    )
