"""Shape validation and compilation to a pure-boolean specification.

Integer variables are bit-blasted: a variable with bounds [lo, hi] owns
exactly ceil(log2(hi-lo+1)) propositions holding the unsigned encoding
of (value - lo).  Arithmetic is evaluated over the naturals with a
statically computed width sufficient to never wrap, so `a + b + i < 7 + i`
compiles to the same predicate for every i.  Subtraction is rejected
unless interval analysis proves the result can never go below zero.

For every integer whose range is not an exact power of two, a range
constraint over the next-state bits (plus an initial-state constraint)
is injected: as assumption for inputs, as guarantee for outputs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .syntax import (
    Add, And, Atom, BoolConst, Compare, Expr, Iff, Implies, IntConst, Next,
    Not, Or, SpecDocument, SpecPart, Sub, PART_KINDS,
)


class CompileError(Exception):
    pass


@dataclass(frozen=True)
class Violation:
    kind: str      # part kind, e.g. "env_trans"
    index: int     # part index within its kind
    rule: str      # short rule name
    message: str

    def __str__(self) -> str:
        return f"{self.kind}[{self.index}]: {self.rule}: {self.message}"


# ----------------------------------------------------------------------
# boolean IR: hashable nested tuples over propositions
#   ('var', name, primed) ('const', b) ('not', f)
#   ('and'|'or'|'xor'|'iff'|'imp', f, g)

IR = tuple
IR_TRUE: IR = ("const", True)
IR_FALSE: IR = ("const", False)


def ir_var(name: str, primed: bool = False) -> IR:
    return ("var", name, primed)


def ir_not(f: IR) -> IR:
    if f[0] == "const":
        return ("const", not f[1])
    if f[0] == "not":
        return f[1]
    return ("not", f)


def ir_and(f: IR, g: IR) -> IR:
    if f == IR_FALSE or g == IR_FALSE:
        return IR_FALSE
    if f == IR_TRUE:
        return g
    if g == IR_TRUE or f == g:
        return f
    return ("and", f, g)


def ir_or(f: IR, g: IR) -> IR:
    if f == IR_TRUE or g == IR_TRUE:
        return IR_TRUE
    if f == IR_FALSE:
        return g
    if g == IR_FALSE or f == g:
        return f
    return ("or", f, g)


def ir_xor(f: IR, g: IR) -> IR:
    if f == g:
        return IR_FALSE
    if f == IR_FALSE:
        return g
    if g == IR_FALSE:
        return f
    if f == IR_TRUE:
        return ir_not(g)
    if g == IR_TRUE:
        return ir_not(f)
    return ("xor", f, g)


def ir_iff(f: IR, g: IR) -> IR:
    return ir_not(ir_xor(f, g))


def ir_imp(f: IR, g: IR) -> IR:
    return ir_or(ir_not(f), g)


def ir_conj(fs) -> IR:
    out = IR_TRUE
    for f in fs:
        out = ir_and(out, f)
    return out


def ir_support(f: IR) -> set[tuple[str, bool]]:
    out: set[tuple[str, bool]] = set()
    stack = [f]
    while stack:
        e = stack.pop()
        tag = e[0]
        if tag == "var":
            out.add((e[1], e[2]))
        elif tag == "not":
            stack.append(e[1])
        elif tag != "const":
            stack.append(e[1])
            stack.append(e[2])
    return out


# ----------------------------------------------------------------------
# compiled specification

@dataclass(frozen=True)
class IntGroup:
    bits: tuple[str, ...]  # proposition names, LSB first
    lo: int
    hi: int
    kind: str              # input | output


@dataclass(frozen=True)
class BoolPart:
    ir: IR
    text: str
    kind: str
    index: int
    synthetic: bool = False  # injected range constraint


@dataclass
class BooleanSpec:
    """Bit-blasted specification over boolean propositions."""

    input_props: list[str]
    output_props: list[str]
    props: list[str]                      # declaration order, bits expanded
    groups: dict[str, IntGroup]           # integer name -> bit group
    bool_vars: dict[str, str]             # boolean var name -> kind
    parts: dict[str, list[BoolPart]] = field(
        default_factory=lambda: {k: [] for k in PART_KINDS})
    source: SpecDocument | None = None

    def parts_of(self, kind: str) -> list[BoolPart]:
        return self.parts[kind]

    def assumption_parts(self) -> list[BoolPart]:
        return (self.parts["env_init"] + self.parts["env_trans"]
                + self.parts["env_liveness"])

    def is_input_prop(self, prop: str) -> bool:
        return prop in self._input_set

    def __post_init__(self):
        self._input_set = set(self.input_props)

    def decode(self, assignment: dict[str, bool]) -> dict[str, object]:
        """Map a proposition valuation to user-level variable values."""
        out: dict[str, object] = {}
        for name, kind in self.bool_vars.items():
            if name in assignment:
                out[name] = assignment[name]
        for name, g in self.groups.items():
            if all(b in assignment for b in g.bits):
                v = g.lo
                for i, b in enumerate(g.bits):
                    if assignment[b]:
                        v += 1 << i
                out[name] = v
        return out

    def user_vars(self) -> list[str]:
        seen = []
        for p in self.props:
            base = p.split("@", 1)[0]
            if base not in seen:
                seen.append(base)
        return seen


# ----------------------------------------------------------------------
# validation

def _walk(e: Expr):
    yield e
    if isinstance(e, (Not, Next)):
        yield from _walk(e.sub)
    elif isinstance(e, (And, Or, Implies, Iff, Add, Sub, Compare)):
        yield from _walk(e.left)
        yield from _walk(e.right)


def _expr_type(e: Expr, doc: SpecDocument) -> str:
    if isinstance(e, (IntConst, Add, Sub)):
        return "int"
    if isinstance(e, Atom):
        v = doc.var(e.name)
        return "int" if v is not None and v.is_int else "bool"
    if isinstance(e, Next):
        return _expr_type(e.sub, doc)
    return "bool"


def _type_violations(part: SpecPart, doc: SpecDocument) -> list[Violation]:
    out = []

    def visit(e: Expr, under_compare: bool):
        t = _expr_type(e, doc)
        if t == "int" and not under_compare:
            out.append(Violation(part.kind, part.index, "arithmetic outside comparison",
                                 f"integer-valued term in boolean position: {part.text}"))
            return
        if isinstance(e, Compare):
            for side in (e.left, e.right):
                if _expr_type(side, doc) != "int":
                    out.append(Violation(part.kind, part.index, "comparison on boolean",
                                         f"comparison operand is not integer-valued: {part.text}"))
                visit(side, True)
            return
        if isinstance(e, (Add, Sub)):
            for side in (e.left, e.right):
                if _expr_type(side, doc) != "int":
                    out.append(Violation(part.kind, part.index, "boolean in arithmetic",
                                         f"arithmetic over a boolean operand: {part.text}"))
                visit(side, True)
            return
        if isinstance(e, (Not, Next)):
            visit(e.sub, under_compare and isinstance(e, Next)
                  and _expr_type(e.sub, doc) == "int")
            return
        if isinstance(e, (And, Or, Implies, Iff)):
            visit(e.left, False)
            visit(e.right, False)

    visit(part.formula, False)
    return out


def validate_gr1_shape(doc: SpecDocument) -> list[Violation]:
    """Check every grammar restriction; violations are data, not errors."""
    out: list[Violation] = []
    outputs = {v.name for v in doc.outputs()}

    def nexts_nested(e: Expr, inside: bool) -> bool:
        if isinstance(e, Next):
            if inside:
                return True
            return nexts_nested(e.sub, True)
        return any(nexts_nested(c, inside) for c in _subexprs(e))

    def _subexprs(e: Expr):
        if isinstance(e, (Not, Next)):
            return (e.sub,)
        if isinstance(e, (And, Or, Implies, Iff, Add, Sub, Compare)):
            return (e.left, e.right)
        return ()

    def has_next(e: Expr) -> bool:
        return any(isinstance(x, Next) for x in _walk(e))

    def outputs_under_next(e: Expr, inside: bool) -> bool:
        if isinstance(e, Atom) and inside and e.name in outputs:
            return True
        nested = inside or isinstance(e, Next)
        return any(outputs_under_next(c, nested) for c in _subexprs(e))

    for part in doc.all_parts():
        if nexts_nested(part.formula, False):
            out.append(Violation(part.kind, part.index, "nested next",
                                 f"X occurs inside X: {part.text}"))
        if part.kind in ("env_init", "sys_init") and has_next(part.formula):
            out.append(Violation(part.kind, part.index, "next in initial part",
                                 f"X is not allowed in initial parts: {part.text}"))
        if part.kind == "env_init":
            used = {x.name for x in _walk(part.formula) if isinstance(x, Atom)}
            if used & outputs:
                out.append(Violation(part.kind, part.index,
                                     "output in initial assumption",
                                     f"outputs {sorted(used & outputs)} in: {part.text}"))
        if part.kind == "env_trans" and outputs_under_next(part.formula, False):
            out.append(Violation(part.kind, part.index,
                                 "output under next in assumption",
                                 f"an output proposition is in the scope of X: {part.text}"))
        out.extend(_type_violations(part, doc))
    return out


# ----------------------------------------------------------------------
# bit-blasting

@dataclass
class _BitVec:
    bits: list[IR]  # LSB first
    lo: int
    hi: int


def _width_for(n: int) -> int:
    return max(n.bit_length(), 1)


def _bv_const(c: int) -> _BitVec:
    return _BitVec([("const", bool((c >> i) & 1)) for i in range(_width_for(c))],
                   c, c)


def _bv_zext(v: _BitVec, width: int) -> list[IR]:
    return v.bits + [IR_FALSE] * (width - len(v.bits))


def _bv_add(a: _BitVec, b: _BitVec) -> _BitVec:
    lo, hi = a.lo + b.lo, a.hi + b.hi
    width = _width_for(hi)
    xs, ys = _bv_zext(a, width), _bv_zext(b, width)
    out, carry = [], IR_FALSE
    for x, y in zip(xs, ys):
        out.append(ir_xor(ir_xor(x, y), carry))
        carry = ir_or(ir_and(x, y), ir_and(carry, ir_xor(x, y)))
    return _BitVec(out, lo, hi)


def _bv_sub(a: _BitVec, b: _BitVec, text: str) -> _BitVec:
    lo, hi = a.lo - b.hi, a.hi - b.lo
    if lo < 0:
        raise CompileError(
            f"subtraction may go below zero in: {text} "
            f"(worst case {a.lo} - {b.hi})")
    width = _width_for(a.hi)
    xs, ys = _bv_zext(a, width), _bv_zext(b, width)
    out, borrow = [], IR_FALSE
    for x, y in zip(xs, ys):
        out.append(ir_xor(ir_xor(x, y), borrow))
        borrow = ir_or(ir_and(ir_not(x), y), ir_and(borrow, ir_not(ir_xor(x, y))))
    return _BitVec(out, lo, hi)


def _bv_eq(a: _BitVec, b: _BitVec) -> IR:
    width = max(len(a.bits), len(b.bits), 1)
    xs, ys = _bv_zext(a, width), _bv_zext(b, width)
    return ir_conj(ir_iff(x, y) for x, y in zip(xs, ys))


def _bv_lt(a: _BitVec, b: _BitVec) -> IR:
    width = max(len(a.bits), len(b.bits), 1)
    xs, ys = _bv_zext(a, width), _bv_zext(b, width)
    lt = IR_FALSE
    for x, y in zip(xs, ys):  # LSB to MSB
        lt = ir_or(ir_and(ir_not(x), y), ir_and(ir_iff(x, y), lt))
    return lt


class _Compiler:
    def __init__(self, doc: SpecDocument):
        self.doc = doc
        self.groups: dict[str, IntGroup] = {}
        self.bool_vars: dict[str, str] = {}
        self.input_props: list[str] = []
        self.output_props: list[str] = []
        self.props: list[str] = []
        for v in doc.variables:
            target = self.input_props if v.kind == "input" else self.output_props
            if v.is_int:
                nbits = math.ceil(math.log2(v.hi - v.lo + 1)) if v.hi > v.lo else 0
                bits = tuple(f"{v.name}@{i}" for i in range(nbits))
                self.groups[v.name] = IntGroup(bits, v.lo, v.hi, v.kind)
                target.extend(bits)
                self.props.extend(bits)
            else:
                self.bool_vars[v.name] = v.kind
                target.append(v.name)
                self.props.append(v.name)

    def int_vec(self, e: Expr, primed: bool, text: str) -> _BitVec:
        if isinstance(e, IntConst):
            return _bv_const(e.value)
        if isinstance(e, Next):
            return self.int_vec(e.sub, True, text)
        if isinstance(e, Atom):
            g = self.groups[e.name]
            vec = _BitVec([ir_var(b, primed) for b in g.bits], 0, g.hi - g.lo)
            if g.lo:
                vec = _bv_add(vec, _bv_const(g.lo))
            return vec
        if isinstance(e, Add):
            return _bv_add(self.int_vec(e.left, primed, text),
                           self.int_vec(e.right, primed, text))
        if isinstance(e, Sub):
            return _bv_sub(self.int_vec(e.left, primed, text),
                           self.int_vec(e.right, primed, text), text)
        raise CompileError(f"not an integer expression in: {text}")

    def compile(self, e: Expr, primed: bool, text: str) -> IR:
        if isinstance(e, BoolConst):
            return ("const", e.value)
        if isinstance(e, Atom):
            return ir_var(e.name, primed)
        if isinstance(e, Not):
            return ir_not(self.compile(e.sub, primed, text))
        if isinstance(e, Next):
            return self.compile(e.sub, True, text)
        if isinstance(e, And):
            return ir_and(self.compile(e.left, primed, text),
                          self.compile(e.right, primed, text))
        if isinstance(e, Or):
            return ir_or(self.compile(e.left, primed, text),
                         self.compile(e.right, primed, text))
        if isinstance(e, Implies):
            return ir_imp(self.compile(e.left, primed, text),
                          self.compile(e.right, primed, text))
        if isinstance(e, Iff):
            return ir_iff(self.compile(e.left, primed, text),
                          self.compile(e.right, primed, text))
        if isinstance(e, Compare):
            a = self.int_vec(e.left, primed, text)
            b = self.int_vec(e.right, primed, text)
            if e.op == "=":
                return _bv_eq(a, b)
            if e.op == "!=":
                return ir_not(_bv_eq(a, b))
            if e.op == "<":
                return _bv_lt(a, b)
            if e.op == ">":
                return _bv_lt(b, a)
            if e.op == "<=":
                return ir_not(_bv_lt(b, a))
            if e.op == ">=":
                return ir_not(_bv_lt(a, b))
        raise CompileError(f"cannot compile expression in: {text}")

    def range_ir(self, g: IntGroup, primed: bool) -> IR:
        enc = _BitVec([ir_var(b, primed) for b in g.bits], 0, (1 << len(g.bits)) - 1)
        return ir_not(_bv_lt(_bv_const(g.hi - g.lo), enc))


def compile_to_boolean(doc: SpecDocument) -> BooleanSpec:
    """Bit-blast a validated document.  Precondition: no shape violations."""
    violations = validate_gr1_shape(doc)
    if violations:
        raise CompileError(
            "document violates the specification grammar:\n  "
            + "\n  ".join(str(v) for v in violations))
    c = _Compiler(doc)
    spec = BooleanSpec(
        input_props=c.input_props, output_props=c.output_props,
        props=c.props, groups=c.groups, bool_vars=c.bool_vars, source=doc)
    for kind in PART_KINDS:
        for part in doc.parts[kind]:
            spec.parts[kind].append(BoolPart(
                ir=c.compile(part.formula, False, part.text),
                text=part.text, kind=kind, index=part.index))
    # range constraints for integers whose range is not a power of two
    for name, g in c.groups.items():
        span = g.hi - g.lo + 1
        if span == (1 << len(g.bits)):
            continue
        init_kind = "env_init" if g.kind == "input" else "sys_init"
        safe_kind = "env_trans" if g.kind == "input" else "sys_trans"
        text = f"{name} in {g.lo}...{g.hi} (range)"
        spec.parts[init_kind].append(BoolPart(
            ir=c.range_ir(g, False), text=text, kind=init_kind,
            index=len(spec.parts[init_kind]), synthetic=True))
        spec.parts[safe_kind].append(BoolPart(
            ir=c.range_ir(g, True), text=text, kind=safe_kind,
            index=len(spec.parts[safe_kind]), synthetic=True))
    return spec
