"""Line-oriented ``.t3`` circuit format.

One statement per line, keywords case-insensitive, ``#`` starts a comment::

    qutrits 2
    init 1 0
    gate ch1 0
    a1 0 1
    slice entangled
    assert entangled b row 0 0 1
    measure 0 -> m0

Each ``assert`` line appends its own ancilla qutrits after the declared ones
and splices the assertion ops in at that point of the program; user code can
only address the declared qutrits.
"""
from __future__ import annotations

import re
from dataclasses import dataclass

from .assertions import (
    CLASSICAL,
    ENTANGLED_A,
    ENTANGLED_B,
    SUPERPOSITION,
    SUPERPOSITION_TARGETS,
    AssertionSpec,
    attach,
    classical_assertion,
    combined_assertion,
    entanglement_assertion,
    superposition_assertion,
)
from .circuit import Circuit
from .errors import InputError, ParseError
from .gates import Z_LABELS, gate3
from .ops import Composite, ControlledMS, Measure, Single

_TOKEN = re.compile(r"->|==|[A-Za-z0-9_+]+|\S")
_NAME = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")

# DSL spelling -> gate label
_GATE_NAMES = {label.lower(): label for label in Z_LABELS + ("Ch1", "Ch2")}
_Z_NAMES = {label.lower(): label for label in Z_LABELS}
_STATEMENTS = "gate, cgate, a1, a2, slice, measure or assert"


@dataclass
class _Tok:
    text: str
    col: int


class _Line:
    def __init__(self, number: int, toks: list[_Tok]):
        self.number = number
        self.toks = toks
        self.i = 0

    def fail(self, message: str, expected: str = "", tok: _Tok | None = None):
        if tok is None:
            tok = self.toks[self.i] if self.i < len(self.toks) else None
        col = tok.col if tok is not None else (self.toks[-1].col + len(self.toks[-1].text) if self.toks else 1)
        raise ParseError(message, self.number, col, expected)

    def next(self, expected: str) -> _Tok:
        if self.i >= len(self.toks):
            self.fail("unexpected end of line", expected)
        tok = self.toks[self.i]
        self.i += 1
        return tok

    def keyword(self, *choices: str) -> str:
        tok = self.next(" or ".join(repr(c) for c in choices))
        word = tok.text.lower()
        if word not in choices:
            self.i -= 1
            self.fail(f"unexpected {tok.text!r}", " or ".join(repr(c) for c in choices))
        return word

    def integer(self, what: str, lo: int = 0, hi: int | None = None) -> int:
        tok = self.next(what)
        if not tok.text.isdigit():
            self.i -= 1
            self.fail(f"{tok.text!r} is not a non-negative integer", what)
        value = int(tok.text)
        if value < lo or (hi is not None and value > hi):
            bound = f"{lo}..{hi}" if hi is not None else f">= {lo}"
            self.i -= 1
            self.fail(f"{what} {value} out of range", f"{what} in {bound}")
        return value

    def trit(self) -> int:
        return self.integer("trit", 0, 2)

    def name(self, what: str) -> str:
        tok = self.next(what)
        if not _NAME.match(tok.text):
            self.i -= 1
            self.fail(f"invalid {what} {tok.text!r}", "identifier")
        return tok.text

    def end(self) -> None:
        if self.i < len(self.toks):
            self.fail(f"unexpected trailing {self.toks[self.i].text!r}", "end of line")


def _tokenize(text: str) -> list[_Line]:
    lines = []
    for number, raw in enumerate(text.splitlines(), start=1):
        toks = []
        for m in _TOKEN.finditer(raw):
            if m.group().startswith("#"):
                break
            toks.append(_Tok(m.group(), m.start() + 1))
        if toks:
            lines.append(_Line(number, toks))
    return lines


class _Builder:
    def __init__(self, declared: int, init: tuple[int, ...]):
        self.declared = declared
        self.n = declared
        self.init = init
        self.ops: list = []
        self.slices: list = []
        self.measures: list[Measure] = []
        self.specs: list[AssertionSpec] = []

    def circuit(self) -> Circuit:
        return Circuit(self.n, self.init, tuple(self.ops) + tuple(self.measures), tuple(self.slices))

    def add_assertion(self, spec: AssertionSpec) -> None:
        base = Circuit(self.n, self.init, tuple(self.ops), tuple(self.slices))
        widened, self.specs = attach(base, spec, at=len(self.ops), attached=self.specs)
        self.n = widened.num_qutrits
        self.init = widened.init_digits
        self.ops = list(widened.ops)
        self.slices = list(widened.slices)


def _qidx(line: _Line, b: _Builder) -> int:
    return line.integer("qutrit index", 0, b.declared - 1)


def _distinct(line: _Line, first: int, second: int) -> None:
    if first == second:
        line.i -= 1
        line.fail("the two qutrit indices must differ", "a different qutrit index")


def _parse_assert(line: _Line, b: _Builder) -> AssertionSpec:
    kind = line.keyword("classical", "entangled", "superposition", "combined")
    if kind == "classical":
        q = _qidx(line, b)
        line.keyword("==")
        return classical_assertion(q, line.trit())
    if kind == "entangled":
        group = line.keyword("a", "b")
        line.keyword("row")
        row = line.integer("row", 0, 2)
        q1 = _qidx(line, b)
        q2 = _qidx(line, b)
        _distinct(line, q1, q2)
        return entanglement_assertion(q1, q2, group, row)
    if kind == "superposition":
        q = _qidx(line, b)
        return superposition_assertion(q, line.keyword(*SUPERPOSITION_TARGETS))
    q1 = _qidx(line, b)
    q2 = _qidx(line, b)
    _distinct(line, q1, q2)
    line.keyword("expect")
    return combined_assertion(q1, q2, (line.trit(), line.trit()))


def _parse_statement(line: _Line, b: _Builder, registers: set, slice_names: set) -> None:
    head = line.toks[0]
    word = head.text.lower()
    line.i = 1
    if b.measures and word != "measure":
        line.fail("only measure statements may follow a measurement", "measure", head)
    if word == "gate":
        tok = line.next("gate label")
        label = _GATE_NAMES.get(tok.text.lower())
        if label is None:
            line.i -= 1
            line.fail(f"unknown gate label {tok.text!r}", "|".join(_GATE_NAMES))
        b.ops.append(Single(gate3(label), _qidx(line, b)))
    elif word == "cgate":
        tok = line.next("Z gate label")
        label = _Z_NAMES.get(tok.text.lower())
        if label is None:
            line.i -= 1
            line.fail(f"unknown controlled gate label {tok.text!r}", "|".join(_Z_NAMES))
        control = _qidx(line, b)
        target = _qidx(line, b)
        _distinct(line, control, target)
        b.ops.append(ControlledMS(gate3(label), control, target))
    elif word in ("a1", "a2"):
        control = _qidx(line, b)
        target = _qidx(line, b)
        _distinct(line, control, target)
        b.ops.append(Composite(word.upper(), control, target))
    elif word == "slice":
        name = line.name("slice name")
        if name in slice_names:
            line.i -= 1
            line.fail(f"duplicate slice name {name!r}", "a new slice name")
        if b.slices and b.slices[-1][1] == len(b.ops):
            line.fail("a slice needs at least one op since the previous slice", "", head)
        slice_names.add(name)
        b.slices.append((name, len(b.ops)))
    elif word == "measure":
        q = _qidx(line, b)
        line.keyword("->")
        reg = line.name("register name")
        if reg in registers:
            line.i -= 1
            line.fail(f"duplicate register name {reg!r}", "a new register name")
        if any(m.q == q for m in b.measures):
            line.i -= 3
            line.fail(f"qutrit {q} is already measured", "an unmeasured qutrit")
        registers.add(reg)
        b.measures.append(Measure(q, reg))
    elif word == "assert":
        spec = _parse_assert(line, b)
        line.end()
        b.add_assertion(spec)
        return
    else:
        line.fail(f"unknown statement {head.text!r}", _STATEMENTS, head)
    line.end()


def parse(text: str) -> tuple[Circuit, list[AssertionSpec]]:
    """Parse ``.t3`` source into the instrumented circuit and its assertion specs.

    The returned circuit already contains the ancilla qutrits and assertion
    ops; ``specs[i].positions`` locate the spliced blocks.
    """
    lines = _tokenize(text)
    if not lines:
        raise ParseError("empty source", 1, 1, "'qutrits'")
    header = lines[0]
    header.keyword("qutrits")
    n = header.integer("qutrit count", 1)
    header.end()
    rest = lines[1:]
    init = (0,) * n
    if rest and rest[0].toks[0].text.lower() == "init":
        line = rest[0]
        line.i = 1
        init = tuple(line.trit() for _ in range(n))
        line.end()
        rest = rest[1:]

    b = _Builder(n, init)
    registers: set = set()
    slice_names: set = set()
    for line in rest:
        if line.toks[0].text.lower() in ("qutrits", "init"):
            line.fail(f"{line.toks[0].text!r} may only appear at the top of the file", _STATEMENTS)
        _parse_statement(line, b, registers, slice_names)
    return b.circuit(), b.specs


def load(path) -> tuple[Circuit, list[AssertionSpec]]:
    with open(path, encoding="utf-8") as fh:
        return parse(fh.read())


# -- serialisation --------------------------------------------------------------------


def _op_line(op) -> str:
    if isinstance(op, Single):
        return f"gate {op.gate.label.lower()} {op.q}"
    if isinstance(op, ControlledMS):
        return f"cgate {op.gate.label.lower()} {op.control} {op.target}"
    if isinstance(op, Composite):
        return f"{op.kind.lower()} {op.control} {op.target}"
    return f"measure {op.q} -> {op.register}"


def _assert_line(spec: AssertionSpec) -> str:
    t = spec.targets
    if spec.family == CLASSICAL:
        return f"assert classical {t[0]} == {spec.param}"
    if spec.family in (ENTANGLED_A, ENTANGLED_B):
        group = "a" if spec.family == ENTANGLED_A else "b"
        return f"assert entangled {group} row {spec.param} {t[0]} {t[1]}"
    if spec.family == SUPERPOSITION:
        return f"assert superposition {t[0]} {spec.param}"
    return f"assert combined {t[0]} {t[1]} expect {spec.param[0]} {spec.param[1]}"


def serialize(circuit: Circuit, specs=()) -> str:
    """Canonical ``.t3`` text; ``parse(serialize(c, s)) == (c, s)``.

    Raises InputError for circuits the format cannot express, e.g. a slice
    that falls inside an assertion block.
    """
    specs = list(specs)
    declared = circuit.num_qutrits - sum(len(s.ancillas) for s in specs)
    expected_anc = declared
    for spec in specs:
        if not spec.attached:
            raise InputError("serialize() needs attached assertion specs")
        if spec.ancillas != tuple(range(expected_anc, expected_anc + len(spec.ancillas))):
            raise InputError("assertion ancillas must follow the declared qutrits in order")
        expected_anc += len(spec.ancillas)

    # op index -> (block length, directive or None)
    blocks: dict[int, tuple[int, AssertionSpec | None]] = {}
    for spec in specs:
        sizes = [len(block) for block in spec.blocks()]
        for k, (start, size) in enumerate(zip(spec.positions, sizes)):
            last = k == len(sizes) - 1
            blocks[start] = (size, spec if last else None)

    marks: dict[int, list[str]] = {}
    for name, pos in circuit.slices:
        marks.setdefault(pos, []).append(name)

    out = [f"qutrits {declared}", "init " + " ".join(str(d) for d in circuit.init_digits[:declared])]
    ops = circuit.ops
    i = 0
    while i <= len(ops):
        out.extend(f"slice {name}" for name in marks.get(i, ()))
        if i == len(ops):
            break
        if i in blocks:
            size, spec = blocks[i]
            inner = [p for p in marks if i < p < i + size + (spec is None)]
            if inner:
                raise InputError(f"slice at position {inner[0]} falls inside an assertion block")
            if spec is not None:
                out.append(_assert_line(spec))
            i += size
            continue
        if isinstance(ops[i], Measure) and any(p > i for p in marks):
            raise InputError("slices cannot follow measurements")
        out.append(_op_line(ops[i]))
        i += 1
    return "\n".join(out) + "\n"
