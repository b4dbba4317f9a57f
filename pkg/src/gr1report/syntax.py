"""Specification text format: lexer, parser, AST, pretty printer.

Sections declare variables and the six property lists:

    [INPUT] / [OUTPUT]        name   |   name: lo...hi
    [ENV_INIT] [ENV_TRANS] [ENV_LIVENESS]
    [SYS_INIT] [SYS_TRANS] [SYS_LIVENESS]

One expression per line; `#` starts a comment.  TRANS lines are
implicitly under G, LIVENESS lines implicitly under GF.  Operators by
decreasing precedence: `!`, `+ -`, comparisons, `&`, `|`, `->`
(right-associative), `<->`.
"""

from __future__ import annotations

from dataclasses import dataclass, field


class SpecError(Exception):
    def __init__(self, message: str, line: int | None = None,
                 col: int | None = None):
        self.line = line
        self.col = col
        if line is not None:
            message = f"line {line}" + (
                f", column {col}" if col is not None else "") + f": {message}"
        super().__init__(message)


# ----------------------------------------------------------------------
# AST

@dataclass(frozen=True)
class Expr:
    pass


@dataclass(frozen=True)
class Atom(Expr):
    name: str


@dataclass(frozen=True)
class BoolConst(Expr):
    value: bool


@dataclass(frozen=True)
class IntConst(Expr):
    value: int


@dataclass(frozen=True)
class Not(Expr):
    sub: Expr


@dataclass(frozen=True)
class Next(Expr):
    sub: Expr


@dataclass(frozen=True)
class And(Expr):
    left: Expr
    right: Expr


@dataclass(frozen=True)
class Or(Expr):
    left: Expr
    right: Expr


@dataclass(frozen=True)
class Implies(Expr):
    left: Expr
    right: Expr


@dataclass(frozen=True)
class Iff(Expr):
    left: Expr
    right: Expr


@dataclass(frozen=True)
class Add(Expr):
    left: Expr
    right: Expr


@dataclass(frozen=True)
class Sub(Expr):
    left: Expr
    right: Expr


@dataclass(frozen=True)
class Compare(Expr):
    op: str  # < <= = >= > !=
    left: Expr
    right: Expr


@dataclass(frozen=True)
class VarDecl:
    name: str
    kind: str  # "input" | "output"
    lo: int | None = None
    hi: int | None = None

    @property
    def is_int(self) -> bool:
        return self.lo is not None


PART_KINDS = ("env_init", "env_trans", "env_liveness",
              "sys_init", "sys_trans", "sys_liveness")

_SECTION_OF = {
    "INPUT": "input", "OUTPUT": "output",
    "ENV_INIT": "env_init", "ENV_TRANS": "env_trans",
    "ENV_LIVENESS": "env_liveness",
    "SYS_INIT": "sys_init", "SYS_TRANS": "sys_trans",
    "SYS_LIVENESS": "sys_liveness",
}


@dataclass(frozen=True)
class SpecPart:
    formula: Expr
    text: str          # verbatim source line, for reports
    kind: str          # one of PART_KINDS
    index: int         # stable index within its kind
    line: int = 0


@dataclass
class SpecDocument:
    variables: list[VarDecl] = field(default_factory=list)
    parts: dict[str, list[SpecPart]] = field(
        default_factory=lambda: {k: [] for k in PART_KINDS})

    def var(self, name: str) -> VarDecl | None:
        for v in self.variables:
            if v.name == name:
                return v
        return None

    def inputs(self) -> list[VarDecl]:
        return [v for v in self.variables if v.kind == "input"]

    def outputs(self) -> list[VarDecl]:
        return [v for v in self.variables if v.kind == "output"]

    def all_parts(self):
        for kind in PART_KINDS:
            yield from self.parts[kind]

    def __eq__(self, other) -> bool:
        if not isinstance(other, SpecDocument):
            return NotImplemented
        if self.variables != other.variables:
            return False
        for k in PART_KINDS:
            a = [(p.formula, p.kind, p.index) for p in self.parts[k]]
            b = [(p.formula, p.kind, p.index) for p in other.parts[k]]
            if a != b:
                return False
        return True


# ----------------------------------------------------------------------
# lexer

def _tokenize(text: str, line_no: int):
    """Tokens: (kind, value, col).  Kinds: name int punct."""
    out = []
    i, n = 0, len(text)
    while i < n:
        c = text[i]
        if c in " \t":
            i += 1
            continue
        if c == "#":
            break
        col = i + 1
        if c.isalpha() or c == "_":
            j = i
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            out.append(("name", text[i:j], col))
            i = j
            continue
        if c.isdigit():
            j = i
            while j < n and text[j].isdigit():
                j += 1
            out.append(("int", text[i:j], col))
            i = j
            continue
        if text[i:i + 3] == "<->":
            out.append(("punct", "<->", col))
            i += 3
            continue
        if text[i:i + 3] == "...":
            out.append(("punct", "...", col))
            i += 3
            continue
        if text[i:i + 2] in ("->", "<=", ">=", "!="):
            out.append(("punct", text[i:i + 2], col))
            i += 2
            continue
        if c in "()!&|<>=+-:":
            out.append(("punct", c, col))
            i += 1
            continue
        raise SpecError(f"unexpected character {c!r}", line_no, col)
    return out


class _Parser:
    def __init__(self, tokens, line_no: int):
        self.toks = tokens
        self.pos = 0
        self.line = line_no

    def peek(self):
        return self.toks[self.pos] if self.pos < len(self.toks) else None

    def take(self):
        t = self.peek()
        if t is None:
            raise SpecError("unexpected end of expression", self.line)
        self.pos += 1
        return t

    def expect(self, value: str):
        t = self.take()
        if t[1] != value:
            raise SpecError(f"expected {value!r}, found {t[1]!r}",
                            self.line, t[2])
        return t

    def done(self):
        t = self.peek()
        if t is not None:
            raise SpecError(f"trailing input {t[1]!r}", self.line, t[2])

    # precedence chain: iff < implies < or < and < compare < sum < unary
    def parse(self) -> Expr:
        e = self.iff()
        self.done()
        return e

    def iff(self) -> Expr:
        e = self.implies()
        while self.peek() and self.peek()[1] == "<->":
            self.take()
            e = Iff(e, self.implies())
        return e

    def implies(self) -> Expr:
        e = self.or_()
        if self.peek() and self.peek()[1] == "->":
            self.take()
            return Implies(e, self.implies())
        return e

    def or_(self) -> Expr:
        e = self.and_()
        while self.peek() and self.peek()[1] == "|":
            self.take()
            e = Or(e, self.and_())
        return e

    def and_(self) -> Expr:
        e = self.compare()
        while self.peek() and self.peek()[1] == "&":
            self.take()
            e = And(e, self.compare())
        return e

    def compare(self) -> Expr:
        e = self.sum_()
        t = self.peek()
        if t and t[1] in ("<", "<=", "=", ">=", ">", "!="):
            op = self.take()[1]
            return Compare(op, e, self.sum_())
        return e

    def sum_(self) -> Expr:
        e = self.unary()
        while self.peek() and self.peek()[1] in ("+", "-"):
            op = self.take()[1]
            rhs = self.unary()
            e = Add(e, rhs) if op == "+" else Sub(e, rhs)
        return e

    def unary(self) -> Expr:
        t = self.peek()
        if t and t[1] == "!":
            self.take()
            return Not(self.unary())
        return self.primary()

    def primary(self) -> Expr:
        t = self.take()
        kind, val, col = t
        if val == "(":
            e = self.iff()
            self.expect(")")
            return e
        if kind == "int":
            return IntConst(int(val))
        if kind == "name":
            if val == "X":
                self.expect("(")
                e = self.iff()
                self.expect(")")
                return Next(e)
            if val in ("TRUE", "true"):
                return BoolConst(True)
            if val in ("FALSE", "false"):
                return BoolConst(False)
            return Atom(val)
        raise SpecError(f"unexpected token {val!r}", self.line, col)


def parse_expr(text: str, line_no: int = 0) -> Expr:
    return _Parser(_tokenize(text, line_no), line_no).parse()


# ----------------------------------------------------------------------
# document parsing

def parse_spec(text: str) -> SpecDocument:
    """Parse a specification file into a SpecDocument.

    Raises SpecError with line/column on syntax errors, duplicate
    variables, unknown section headers, or references to undeclared
    variables.
    """
    doc = SpecDocument()
    section: str | None = None
    names: set[str] = set()
    counters = {k: 0 for k in PART_KINDS}
    pending: list[tuple[str, str, int]] = []  # (section, line text, line no)

    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("["):
            end = line.find("]")
            if end < 0:
                raise SpecError("malformed section header", line_no, 1)
            header = line[1:end].strip()
            if header not in _SECTION_OF:
                raise SpecError(f"unknown section header [{header}]", line_no, 1)
            section = _SECTION_OF[header]
            line = line[end + 1:].strip()  # content may follow the header
            if not line:
                continue
        if section is None:
            raise SpecError("expression before any section header", line_no, 1)
        if section in ("input", "output"):
            doc.variables.append(_parse_decl(line, line_no, section, names))
        else:
            pending.append((section, line, line_no))

    for kind, line, line_no in pending:
        formula = parse_expr(line, line_no)
        _check_declared(formula, names, line_no)
        doc.parts[kind].append(SpecPart(
            formula=formula, text=line, kind=kind,
            index=counters[kind], line=line_no))
        counters[kind] += 1
    return doc


def _parse_decl(line: str, line_no: int, kind: str,
                names: set[str]) -> VarDecl:
    toks = _tokenize(line, line_no)
    if not toks or toks[0][0] != "name":
        raise SpecError("expected a variable name", line_no, 1)
    name = toks[0][1]
    if name in names or name in ("X", "TRUE", "FALSE", "true", "false"):
        raise SpecError(f"duplicate or reserved variable {name!r}", line_no, 1)
    names.add(name)
    if len(toks) == 1:
        return VarDecl(name, kind)
    # name: lo...hi
    if (len(toks) != 5 or toks[1][1] != ":" or toks[2][0] != "int"
            or toks[3][1] != "..." or toks[4][0] != "int"):
        raise SpecError("expected `name` or `name: lo...hi`", line_no, 1)
    lo, hi = int(toks[2][1]), int(toks[4][1])
    if hi < lo:
        raise SpecError(f"integer bounds {lo}...{hi} are reversed", line_no, 1)
    return VarDecl(name, kind, lo, hi)


def _check_declared(e: Expr, names: set[str], line_no: int):
    if isinstance(e, Atom):
        if e.name not in names:
            raise SpecError(f"reference to undeclared variable {e.name!r}",
                            line_no)
    for f in _children(e):
        _check_declared(f, names, line_no)


def _children(e: Expr):
    if isinstance(e, (Not, Next)):
        return (e.sub,)
    if isinstance(e, (And, Or, Implies, Iff, Add, Sub)):
        return (e.left, e.right)
    if isinstance(e, Compare):
        return (e.left, e.right)
    return ()


# ----------------------------------------------------------------------
# pretty printing

_PREC = {"iff": 0, "implies": 1, "or": 2, "and": 3, "compare": 4,
         "sum": 5, "unary": 6, "atom": 7}


def _fmt(e: Expr, ctx: int) -> str:
    if isinstance(e, Atom):
        return e.name
    if isinstance(e, BoolConst):
        return "TRUE" if e.value else "FALSE"
    if isinstance(e, IntConst):
        return str(e.value)
    if isinstance(e, Next):
        return f"X({_fmt(e.sub, 0)})"
    if isinstance(e, Not):
        return "!" + _fmt(e.sub, _PREC["unary"])
    if isinstance(e, And):
        s = f"{_fmt(e.left, _PREC['and'])} & {_fmt(e.right, _PREC['and'] + 1)}"
        return s if ctx <= _PREC["and"] else f"({s})"
    if isinstance(e, Or):
        s = f"{_fmt(e.left, _PREC['or'])} | {_fmt(e.right, _PREC['or'] + 1)}"
        return s if ctx <= _PREC["or"] else f"({s})"
    if isinstance(e, Implies):
        s = (f"{_fmt(e.left, _PREC['implies'] + 1)} -> "
             f"{_fmt(e.right, _PREC['implies'])}")
        return s if ctx <= _PREC["implies"] else f"({s})"
    if isinstance(e, Iff):
        s = f"{_fmt(e.left, _PREC['iff'])} <-> {_fmt(e.right, _PREC['iff'] + 1)}"
        return s if ctx <= _PREC["iff"] else f"({s})"
    if isinstance(e, Add):
        s = f"{_fmt(e.left, _PREC['sum'])} + {_fmt(e.right, _PREC['sum'] + 1)}"
        return s if ctx <= _PREC["sum"] else f"({s})"
    if isinstance(e, Sub):
        s = f"{_fmt(e.left, _PREC['sum'])} - {_fmt(e.right, _PREC['sum'] + 1)}"
        return s if ctx <= _PREC["sum"] else f"({s})"
    if isinstance(e, Compare):
        s = (f"{_fmt(e.left, _PREC['compare'] + 1)} {e.op} "
             f"{_fmt(e.right, _PREC['compare'] + 1)}")
        return s if ctx <= _PREC["compare"] else f"({s})"
    raise TypeError(e)


def format_expr(e: Expr) -> str:
    return _fmt(e, 0)


def pretty(doc: SpecDocument) -> str:
    """Render a document back to the text format; reparsing yields a
    structurally identical document."""
    out = []
    ins, outs = doc.inputs(), doc.outputs()
    if ins:
        out.append("[INPUT]")
        for v in ins:
            out.append(v.name if not v.is_int else f"{v.name}: {v.lo}...{v.hi}")
    if outs:
        out.append("[OUTPUT]")
        for v in outs:
            out.append(v.name if not v.is_int else f"{v.name}: {v.lo}...{v.hi}")
    headers = {"env_init": "ENV_INIT", "env_trans": "ENV_TRANS",
               "env_liveness": "ENV_LIVENESS", "sys_init": "SYS_INIT",
               "sys_trans": "SYS_TRANS", "sys_liveness": "SYS_LIVENESS"}
    for kind in PART_KINDS:
        if doc.parts[kind]:
            out.append(f"[{headers[kind]}]")
            for p in doc.parts[kind]:
                out.append(format_expr(p.formula))
    return "\n".join(out) + "\n"
