"""
The plain-text model file format.

A model file declares named groups, homomorphisms, rows and ladders. Every
suite instance is a model too, so counterexamples are written in this format
and can be fed straight back to ``mvkit replay``. For example::

    # Z/2 --x2--> Z/4 --mod 2--> Z/2
    group Z2 = [2]
    group Z4 = [4]
    hom double : Z2 -> Z4 = [[2]]
    hom reduce : Z4 -> Z2 = [[1]]
    row R : Z2 -double-> Z4 -reduce-> Z2

The declarations are:

``group <Name> = [d1, d2, ...]``
    The group Z/d1 + Z/d2 + ... (d = 0 giving a copy of Z). The list need
    not be in canonical form: ``[6, 4]`` is the group Z/2 + Z/12 presented on
    two generators.

``group <Name> = relations [[...], [...], ...]``
    The group presented by a relation matrix given as a list of rows (one row
    per generator, one column per relator).

``hom <Name> : <Src> -> <Tgt> = [[...], ...]``
    A homomorphism given by its matrix as a list of rows, in the presentation
    coordinates of the named groups (one column per generator of Src giving
    its image). ``= zero`` declares the zero map.

``row <Name> : G0 -h0-> G1 -h1-> G2 ...``
    A row, claimed exact at every interior node.

``ladder <Name> { top: <Row>, bottom: <Row>, verticals: [v0, v1, ...] }``
    A ladder of two rows joined by one vertical per node.

``ladder <Name> degree <i> { arow groups: [...]; arow homs: [...]; brow groups: [...]; brow homs: [...]; verticals: [...] }``
    One degree window of a Milnor-square K-group ladder. Each row has six
    groups in the order K_{i+1}(R,I), K_{i+1}(R), K_{i+1}(R/I), K_i(R,I),
    K_i(R), K_i(R/I). The fourth vertical is eps_i. K-group ladders are
    validated as they are parsed.

Lines starting with ``#`` (and anything after a ``#``) are comments. A
declaration may continue over several lines while a bracket or brace is open.
Names in lists may be separated by commas or whitespace, and the brackets
around a ladder field's list may be left out.
"""

from typing import Iterator

from dataclasses import dataclass, field

import json
import re

from mvkit.intmatrix import IntMatrix
from mvkit.groups import FgGroup, make_group, group_from_invariants
from mvkit.homs import Hom, hom_from_presentation
from mvkit.diagrams import ExactRow, LadderDiagram
from mvkit.milnor import KLadder, require_valid


@dataclass
class ModelFileError(Exception):
    """Base class for errors in model files."""


@dataclass
class ModelParseError(ModelFileError):
    """Thrown when a line of a model file cannot be parsed."""

    line_number: int
    message: str

    def __str__(self) -> str:
        return f"line {self.line_number}: {self.message}"


@dataclass
class UnresolvedNameError(ModelFileError):
    """Thrown when a declaration refers to an undeclared name."""

    line_number: int
    kind: str
    name: str

    def __str__(self) -> str:
        return f"line {self.line_number}: unknown {self.kind} '{self.name}'"


@dataclass
class DuplicateNameError(ModelFileError):
    """Thrown when a name is declared twice."""

    line_number: int
    name: str

    def __str__(self) -> str:
        return f"line {self.line_number}: '{self.name}' is already declared"


@dataclass
class Model:
    """The named contents of a model file."""

    groups: dict[str, FgGroup] = field(default_factory=dict)
    homs: dict[str, Hom] = field(default_factory=dict)
    rows: dict[str, ExactRow] = field(default_factory=dict)
    ladders: dict[str, LadderDiagram] = field(default_factory=dict)
    k_ladders: dict[str, KLadder] = field(default_factory=dict)

    comments: list[str] = field(default_factory=list)
    """Free-text comment lines written at the top of the file."""

    def names(self) -> set[str]:
        return (
            set(self.groups)
            | set(self.homs)
            | set(self.rows)
            | set(self.ladders)
            | set(self.k_ladders)
        )


################################################################################
# Parsing
################################################################################


NAME = r"[A-Za-z_][A-Za-z0-9_']*"

GROUP_RE = re.compile(rf"group\s+({NAME})\s*=\s*(relations\s+)?(\[.*\])")
HOM_RE = re.compile(
    rf"hom\s+({NAME})\s*:\s*({NAME})\s*->\s*({NAME})\s*=\s*(zero|\[.*\])"
)
ROW_RE = re.compile(rf"row\s+({NAME})\s*:\s*(.+)")
ROW_ARROW_RE = re.compile(rf"\s*-({NAME})->\s*")
LADDER_RE = re.compile(rf"ladder\s+({NAME})\s*(?:degree\s+(-?[0-9]+)\s*)?\{{(.*)\}}")
# A field runs from its key to the next key (or the end of the ladder body)
LADDER_FIELD_RE = re.compile(
    r"(?<![A-Za-z0-9_'])(top|bottom|verticals|[ab]row\s+groups|[ab]row\s+homs)\s*:"
)


def logical_lines(text: str) -> Iterator[tuple[int, str]]:
    """
    Yield (first line number, declaration) pairs with comments removed and
    bracketed continuations joined.
    """
    pending: list[str] = []
    start = 0
    depth = 0
    for line_number, line in enumerate(text.splitlines(), start=1):
        line = line.partition("#")[0].strip()
        if not line:
            continue
        if not pending:
            start = line_number
        pending.append(line)
        depth += line.count("[") + line.count("{")
        depth -= line.count("]") + line.count("}")
        if depth <= 0:
            yield start, " ".join(pending)
            pending = []
            depth = 0
    if pending:
        raise ModelParseError(start, "unterminated bracket")


def _parse_int_rows(line_number: int, literal: str) -> list[list[int]]:
    try:
        value = json.loads(literal)
    except json.JSONDecodeError:
        raise ModelParseError(line_number, f"malformed matrix {literal!r}") from None
    if not isinstance(value, list) or not all(
        isinstance(row, list) and all(isinstance(x, int) for x in row)
        for row in value
    ):
        raise ModelParseError(line_number, "expected a list of integer rows")
    if len({len(row) for row in value}) > 1:
        raise ModelParseError(line_number, "ragged matrix rows")
    return value


def _parse_int_list(line_number: int, literal: str) -> list[int]:
    try:
        value = json.loads(literal)
    except json.JSONDecodeError:
        raise ModelParseError(line_number, f"malformed list {literal!r}") from None
    if not isinstance(value, list) or not all(isinstance(x, int) for x in value):
        raise ModelParseError(line_number, "expected a list of integers")
    return value


def _parse_names(value: str) -> list[str]:
    return re.findall(NAME, value)


def _ladder_fields(line_number: int, body: str) -> dict[str, list[str]]:
    """
    Split a ladder body into its fields. Each value is every name between the
    field's key and the next key, whether bracketed or not.
    """
    keys = list(LADDER_FIELD_RE.finditer(body))
    if keys and body[: keys[0].start()].strip(" \t,;"):
        raise ModelParseError(
            line_number, f"unexpected {body[: keys[0].start()].strip()!r} in ladder"
        )
    fields: dict[str, list[str]] = {}
    ends = [m.start() for m in keys[1:]] + [len(body)]
    for match, end in zip(keys, ends):
        key = " ".join(match.group(1).split())
        if key in fields:
            raise ModelParseError(line_number, f"ladder field '{key}' given twice")
        fields[key] = _parse_names(body[match.end() : end])
    return fields


class _Parser:
    def __init__(self) -> None:
        self.model = Model()

    def declare(self, line_number: int, name: str) -> None:
        if name in self.model.names():
            raise DuplicateNameError(line_number, name)

    def group(self, line_number: int, name: str) -> FgGroup:
        try:
            return self.model.groups[name]
        except KeyError:
            raise UnresolvedNameError(line_number, "group", name) from None

    def hom(self, line_number: int, name: str) -> Hom:
        try:
            return self.model.homs[name]
        except KeyError:
            raise UnresolvedNameError(line_number, "hom", name) from None

    def row(self, line_number: int, name: str) -> ExactRow:
        try:
            return self.model.rows[name]
        except KeyError:
            raise UnresolvedNameError(line_number, "row", name) from None

    def parse_group(self, line_number: int, name: str, relations: bool, literal: str) -> None:
        self.declare(line_number, name)
        if relations:
            rows = _parse_int_rows(line_number, literal)
            self.model.groups[name] = make_group(IntMatrix.from_rows(rows))
        else:
            invariants = _parse_int_list(line_number, literal)
            if any(d < 0 for d in invariants):
                raise ModelParseError(line_number, "invariant factors must be >= 0")
            self.model.groups[name] = group_from_invariants(invariants)

    def parse_hom(
        self, line_number: int, name: str, src_name: str, tgt_name: str, literal: str
    ) -> None:
        self.declare(line_number, name)
        src = self.group(line_number, src_name)
        tgt = self.group(line_number, tgt_name)
        if literal == "zero":
            mat = IntMatrix.zeros(tgt.ngens, src.ngens)
        else:
            rows = _parse_int_rows(line_number, literal)
            mat = (
                IntMatrix.from_rows(rows)
                if rows
                else IntMatrix.zeros(0, src.ngens)
            )
        self.model.homs[name] = hom_from_presentation(src, tgt, mat)

    def parse_row(self, line_number: int, name: str, body: str) -> None:
        self.declare(line_number, name)
        parts = ROW_ARROW_RE.split(body.strip())
        if len(parts) < 3:
            raise ModelParseError(line_number, "a row needs at least one hom")
        group_names = parts[0::2]
        hom_names = parts[1::2]
        homs = []
        for j, hom_name in enumerate(hom_names):
            hom = self.hom(line_number, hom_name)
            src = self.group(line_number, group_names[j])
            tgt = self.group(line_number, group_names[j + 1])
            if hom.src != src or hom.tgt != tgt:
                raise ModelParseError(
                    line_number,
                    f"hom '{hom_name}' is {hom.src} -> {hom.tgt}, "
                    f"not {group_names[j]} -> {group_names[j + 1]}",
                )
            homs.append(hom)
        self.model.rows[name] = ExactRow(tuple(homs))

    def parse_ladder(
        self, line_number: int, name: str, degree: str | None, body: str
    ) -> None:
        self.declare(line_number, name)
        fields = _ladder_fields(line_number, body)

        def required(key: str) -> list[str]:
            if key not in fields:
                raise ModelParseError(line_number, f"ladder '{name}' has no '{key}'")
            return fields[key]

        verticals = tuple(self.hom(line_number, v) for v in required("verticals"))

        if degree is None:
            top_names = required("top")
            bottom_names = required("bottom")
            if len(top_names) != 1 or len(bottom_names) != 1:
                raise ModelParseError(line_number, "top and bottom each name one row")
            self.model.ladders[name] = LadderDiagram(
                self.row(line_number, top_names[0]),
                self.row(line_number, bottom_names[0]),
                verticals,
            )
            return

        rows = []
        for prefix in ("arow", "brow"):
            groups = [self.group(line_number, g) for g in required(f"{prefix} groups")]
            homs = [self.hom(line_number, h) for h in required(f"{prefix} homs")]
            if len(groups) != 6 or len(homs) != 5:
                raise ModelParseError(
                    line_number, f"{prefix} needs 6 groups and 5 homs"
                )
            for j, hom in enumerate(homs):
                if hom.src != groups[j] or hom.tgt != groups[j + 1]:
                    raise ModelParseError(
                        line_number,
                        f"{prefix} hom {j} is {hom.src} -> {hom.tgt}, "
                        f"not {groups[j]} -> {groups[j + 1]}",
                    )
            rows.append(ExactRow(tuple(homs)))
        ladder = KLadder(int(degree), rows[0], rows[1], verticals)
        require_valid(ladder)
        self.model.k_ladders[name] = ladder

    def parse_line(self, line_number: int, line: str) -> None:
        if match := GROUP_RE.fullmatch(line):
            self.parse_group(
                line_number, match.group(1), match.group(2) is not None, match.group(3)
            )
        elif match := HOM_RE.fullmatch(line):
            self.parse_hom(line_number, *match.groups())
        elif match := ROW_RE.fullmatch(line):
            self.parse_row(line_number, *match.groups())
        elif match := LADDER_RE.fullmatch(line):
            self.parse_ladder(line_number, *match.groups())
        else:
            raise ModelParseError(line_number, f"unrecognised declaration {line!r}")


def parse_model_file(text: str) -> Model:
    """
    Parse a model file. Throws a ModelFileError (or the group, diagram or
    ladder error describing an ill-defined hom, malformed row or invalid
    ladder, annotated with its line number) on bad input.
    """
    parser = _Parser()
    for line_number, line in logical_lines(text):
        try:
            parser.parse_line(line_number, line)
        except ModelFileError:
            raise
        except Exception as exc:
            exc.add_note(f"While parsing the declaration on line {line_number}")
            raise
    return parser.model


################################################################################
# Writing
################################################################################


class _Namer:
    """Assigns file names to groups and homs, reusing declared names."""

    def __init__(self, model: Model) -> None:
        self.groups = dict(model.groups)
        self.homs = dict(model.homs)
        self.taken = model.names()

    def _fresh(self, prefix: str) -> str:
        n = 0
        while f"{prefix}{n}" in self.taken:
            n += 1
        name = f"{prefix}{n}"
        self.taken.add(name)
        return name

    def group(self, g: FgGroup) -> str:
        # An identical presentation wins over a merely isomorphic one
        for name, other in self.groups.items():
            if other.relations == g.relations:
                return name
        for name, other in self.groups.items():
            if other == g:
                return name
        name = self._fresh("G")
        self.groups[name] = g
        return name

    def hom(self, h: Hom) -> str:
        for name, other in self.homs.items():
            if other == h:
                return name
        name = self._fresh("h")
        self.homs[name] = h
        return name

    def row(self, rows: dict[str, ExactRow], r: ExactRow) -> str:
        for name, other in rows.items():
            if other == r:
                return name
        name = self._fresh("R")
        rows[name] = r
        return name


def _group_literal(g: FgGroup) -> str:
    """
    The right-hand side of a group declaration reproducing g's presentation:
    a list when the relation matrix is square and diagonal with non-negative
    entries, an explicit relation matrix otherwise.
    """
    r = g.relations
    if r.rows == 0:
        return "[]"
    diagonal = [r[k, k] for k in range(min(r.shape))]
    if (
        r.rows == r.cols
        and all(d >= 0 for d in diagonal)
        and r == IntMatrix.diagonal(diagonal)
    ):
        return json.dumps(diagonal)
    return f"relations {json.dumps(r.rows_list())}"


def format_model(model: Model) -> str:
    """
    Render a model as a model file. Every group keeps its presentation and
    every hom is written in the presentation coordinates of the groups named
    as its endpoints, so parsing the output gives back an equal model with
    the same relation matrices.
    """
    namer = _Namer(model)
    rows = dict(model.rows)

    ladders = []
    for name, ladder in model.ladders.items():
        top = namer.row(rows, ladder.top)
        bottom = namer.row(rows, ladder.bottom)
        verticals = ", ".join(namer.hom(v) for v in ladder.verticals)
        ladders.append(
            f"ladder {name} {{ top: {top}, bottom: {bottom}, verticals: [{verticals}] }}"
        )
    for name, k in model.k_ladders.items():
        ladders.append(f"ladder {name} degree {k.degree} {{")
        for prefix, row in (("arow", k.a_row), ("brow", k.b_row)):
            groups = ", ".join(namer.group(g) for g in row.groups)
            homs = ", ".join(namer.hom(h) for h in row.homs)
            ladders.append(f"    {prefix} groups: [{groups}];")
            ladders.append(f"    {prefix} homs: [{homs}];")
        verticals = ", ".join(namer.hom(v) for v in k.verticals)
        ladders.append(f"    verticals: [{verticals}]")
        ladders.append("}")

    row_lines = []
    for name, row in rows.items():
        path = namer.group(row.groups[0])
        for h in row.homs:
            path += f" -{namer.hom(h)}-> {namer.group(h.tgt)}"
        row_lines.append(f"row {name} : {path}")

    for h in list(namer.homs.values()):
        namer.group(h.src)
        namer.group(h.tgt)

    out = [f"# {line}" for comment in model.comments for line in comment.splitlines()]
    for name, g in namer.groups.items():
        out.append(f"group {name} = {_group_literal(g)}")
    for name, h in namer.homs.items():
        src_name, tgt_name = namer.group(h.src), namer.group(h.tgt)
        src, tgt = namer.groups[src_name], namer.groups[tgt_name]
        mat = tgt.from_canonical @ h.mat @ src.to_canonical
        out.append(
            f"hom {name} : {src_name} -> {tgt_name} = {json.dumps(mat.rows_list())}"
        )
    out.extend(row_lines)
    out.extend(ladders)
    return "\n".join(out) + "\n"
