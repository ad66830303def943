"""Text grammar for expressions, vector fields and flux triples.

The grammar (explicit ``*`` between factors, integer exponents only):

    expr     := term (('+' | '-') term)*
    term     := factor ('*' factor)*
    factor   := '-' factor | primary ('^' uint)*
    primary  := rational | variable | '(' expr ')'
    rational := uint ('/' uint)?
    variable := 'x' | 'y' | 't' | 'u' ('_' [xyt]+)?

Printing emits terms in canonical monomial order, and
``parse_expr(print_expr(e)) == e`` for every expression.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction

from .algebra import (
    DEFAULT_MAX_ORDER,
    Expr,
    JetAlgebraError,
    JetVar,
    Monomial,
    OrderOverflowError,
)
from .calculus import FluxVector, SymmetryRecord, VectorField


class ParseError(JetAlgebraError):
    """Syntax error with source position and the tokens that were expected."""

    code = "parse-error"

    def __init__(self, message: str, line: int, col: int, expected: tuple[str, ...] = ()):
        self.line = line
        self.col = col
        self.expected = expected
        hint = f" (expected {', '.join(expected)})" if expected else ""
        super().__init__(f"{message} at line {line}, column {col}{hint}")


class PointSymmetryError(JetAlgebraError):
    """A generator component depends on derivatives of u."""

    code = "point-symmetry"


_TOKEN_RE = re.compile(
    r"(?P<ws>\s+)|(?P<int>\d+)|(?P<name>[A-Za-z][A-Za-z_]*)|(?P<op>[-+*/^()])"
)

# Practical guard for the service: keeps a hostile "x^999999999" from
# pinning a worker; every formula in the domain has tiny exponents.
_MAX_EXPONENT = 64

_VAR_NAME_RE = re.compile(r"^(x|y|t|u(_[xyt]+)?)$")


@dataclass
class _Token:
    kind: str  # "int", "name", one of "+-*/^()", or "eof"
    text: str
    line: int
    col: int


def _tokenize(text: str) -> list[_Token]:
    tokens: list[_Token] = []
    line, col, pos = 1, 1, 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", line, col)
        lexeme = m.group(0)
        if m.lastgroup == "int":
            tokens.append(_Token("int", lexeme, line, col))
        elif m.lastgroup == "name":
            tokens.append(_Token("name", lexeme, line, col))
        elif m.lastgroup == "op":
            tokens.append(_Token(lexeme, lexeme, line, col))
        newlines = lexeme.count("\n")
        if newlines:
            line += newlines
            col = len(lexeme) - lexeme.rfind("\n")
        else:
            col += len(lexeme)
        pos = m.end()
    tokens.append(_Token("eof", "", line, col))
    return tokens


@dataclass
class _Parser:
    tokens: list[_Token]
    max_order: int
    pos: int = 0
    _offset: tuple[int, int] = (0, 0)  # line, col shift for embedded sources

    @property
    def current(self) -> _Token:
        return self.tokens[self.pos]

    def _located(self, tok: _Token) -> tuple[int, int]:
        dline, dcol = self._offset
        return tok.line + dline, (tok.col + dcol if tok.line == 1 else tok.col)

    def fail(self, message: str, expected: tuple[str, ...] = ()) -> ParseError:
        line, col = self._located(self.current)
        return ParseError(message, line, col, expected)

    def expect(self, kind: str) -> _Token:
        tok = self.current
        if tok.kind != kind:
            raise self.fail(f"unexpected {tok.text or 'end of input'!r}", (kind,))
        self.pos += 1
        return tok

    def parse_expr(self) -> Expr:
        result = self.parse_term()
        while self.current.kind in "+-":
            op = self.current.kind
            self.pos += 1
            term = self.parse_term()
            result = result + term if op == "+" else result - term
        return result

    def parse_term(self) -> Expr:
        result = self.parse_factor()
        while self.current.kind == "*":
            self.pos += 1
            result = result * self.parse_factor()
        return result

    def parse_factor(self) -> Expr:
        if self.current.kind == "-":
            self.pos += 1
            return -self.parse_factor()
        result = self.parse_primary()
        while self.current.kind == "^":
            self.pos += 1
            tok = self.current
            exponent = int(self.expect("int").text)
            if exponent > _MAX_EXPONENT:
                line, col = self._located(tok)
                raise ParseError(
                    f"exponent {exponent} exceeds the supported maximum"
                    f" {_MAX_EXPONENT}",
                    line,
                    col,
                )
            result = result**exponent
        return result

    def parse_primary(self) -> Expr:
        tok = self.current
        if tok.kind == "int":
            self.pos += 1
            numerator = int(tok.text)
            if self.current.kind == "/":
                self.pos += 1
                denominator = int(self.expect("int").text)
                if denominator == 0:
                    raise self.fail("zero denominator")
                return Expr.constant(Fraction(numerator, denominator))
            return Expr.constant(numerator)
        if tok.kind == "name":
            self.pos += 1
            return Expr.variable(self._variable(tok))
        if tok.kind == "(":
            self.pos += 1
            inner = self.parse_expr()
            self.expect(")")
            return inner
        raise self.fail(
            f"unexpected {tok.text or 'end of input'!r}",
            ("number", "variable", "'('", "'-'"),
        )

    def _variable(self, tok: _Token) -> JetVar:
        if not _VAR_NAME_RE.match(tok.text):
            line, col = self._located(tok)
            raise ParseError(f"unknown variable {tok.text!r}", line, col)
        var = JetVar.from_name(tok.text)
        if var.order > self.max_order:
            line, col = self._located(tok)
            raise OrderOverflowError(
                f"derivative {tok.text!r} has order {var.order} > {self.max_order}"
                f" at line {line}, column {col}"
            )
        return var


def parse_expr(
    text: str,
    max_order: int = DEFAULT_MAX_ORDER,
    _offset: tuple[int, int] = (0, 0),
) -> Expr:
    """Parse ``text`` into a canonical expression."""
    parser = _Parser(_tokenize(text), max_order, _offset=_offset)
    result = parser.parse_expr()
    if parser.current.kind != "eof":
        raise parser.fail(f"trailing input {parser.current.text!r}", ("end of input",))
    return result


def _format_monomial(monomial: Monomial) -> str:
    return "*".join(
        f"{var.name}^{exp}" if exp > 1 else var.name
        for var, exp in monomial.factors
    )


def print_expr(expr: Expr) -> str:
    """Deterministic canonical text; ``parse_expr`` inverts it exactly."""
    if expr.is_zero:
        return "0"
    pieces: list[str] = []
    for i, (monomial, coeff) in enumerate(expr.terms):
        sign = "-" if coeff < 0 else "+"
        magnitude = abs(coeff)
        if not monomial.factors:
            body = str(magnitude)
        elif magnitude == 1:
            body = _format_monomial(monomial)
        else:
            body = f"{magnitude}*{_format_monomial(monomial)}"
        if i == 0:
            pieces.append(body if sign == "+" else f"-{body}")
        else:
            pieces.append(f" {sign} {body}")
    return "".join(pieces)


# -- symmetry files ---------------------------------------------------------

_HEADER_RE = re.compile(r"^\[symmetry\s+(?P<name>[^\]\s]+)\s*\]$")

_GENERATOR_KEYS = ("xi_x", "xi_y", "xi_t", "eta")
_TRIPLE_KEYS = ("phi", "flux")


@dataclass
class _RawRecord:
    name: str
    line: int
    fields: dict[str, object] = field(default_factory=dict)


def _parse_component(
    source: str, line: int, col: int, max_order: int
) -> Expr:
    return parse_expr(source, max_order, _offset=(line - 1, col))


def parse_symmetry_file(
    text: str,
    max_order: int = DEFAULT_MAX_ORDER,
    partial: bool = False,
) -> list[SymmetryRecord]:
    """Parse a line-oriented symmetry file into records.

    Each record starts with ``[symmetry <name>]`` followed by ``key = value``
    lines for xi_x, xi_y, xi_t, eta and the optional three-component
    ``phi``/``flux`` lines (components separated by ``;``).  ``#`` starts a
    comment.  With ``partial=True`` (errata overlays) any subset of keys is
    accepted per record.
    """
    raw_records: list[_RawRecord] = []
    current: _RawRecord | None = None
    for lineno, raw_line in enumerate(text.splitlines(), start=1):
        line = raw_line.split("#", 1)[0].rstrip()
        if not line.strip():
            continue
        stripped = line.strip()
        header = _HEADER_RE.match(stripped)
        if header:
            name = header.group("name")
            if any(r.name == name for r in raw_records):
                raise ParseError(f"duplicate record {name!r}", lineno, 1)
            current = _RawRecord(name, lineno)
            raw_records.append(current)
            continue
        if current is None:
            raise ParseError("content before first [symmetry ...] header", lineno, 1)
        if "=" not in line:
            raise ParseError("expected 'key = value'", lineno, 1)
        key, _, value = line.partition("=")
        key = key.strip()
        # column shift (0-based) from fragment positions to file positions
        value_col = len(line) - len(value)
        if key in current.fields:
            raise ParseError(f"duplicate field {key!r}", lineno, 1)
        if key in _GENERATOR_KEYS:
            current.fields[key] = (value, lineno, value_col)
        elif key in _TRIPLE_KEYS:
            parts = value.split(";")
            if len(parts) != 3:
                raise ParseError(
                    f"{key} needs exactly 3 ';'-separated components", lineno, 1
                )
            cols, offset = [], value_col
            for part in parts:
                cols.append(offset)
                offset += len(part) + 1
            current.fields[key] = (parts, lineno, cols)
        else:
            raise ParseError(f"unknown field {key!r}", lineno, 1)

    records: list[SymmetryRecord] = []
    for raw in raw_records:
        records.append(_build_record(raw, max_order, partial))
    return records


def _build_record(raw: _RawRecord, max_order: int, partial: bool) -> SymmetryRecord:
    components: dict[str, Expr | None] = {}
    for key in _GENERATOR_KEYS:
        if key not in raw.fields:
            if partial:
                components[key] = None
                continue
            raise ParseError(
                f"record {raw.name!r} is missing {key}", raw.line, 1
            )
        source, line, col = raw.fields[key]  # type: ignore[misc]
        expr = _parse_component(source, line, col, max_order)
        if expr.order > 0:
            raise PointSymmetryError(
                f"record {raw.name!r}: {key} depends on derivatives of u"
                f" (line {line}); generators must be point symmetries"
            )
        components[key] = expr

    triples: dict[str, FluxVector | None] = {}
    for key in _TRIPLE_KEYS:
        if key not in raw.fields:
            triples[key] = None
            continue
        parts, line, cols = raw.fields[key]  # type: ignore[misc]
        exprs = [
            _parse_component(part, line, col, max_order)
            for part, col in zip(parts, cols)
        ]
        triples[key] = FluxVector(*exprs)

    provided = [key for key in _GENERATOR_KEYS if components[key] is not None]
    if len(provided) == len(_GENERATOR_KEYS):
        field_value = VectorField(
            components["xi_x"], components["xi_y"], components["xi_t"], components["eta"]  # type: ignore[arg-type]
        )
    elif not provided:
        field_value = None
    else:
        raise ParseError(
            f"record {raw.name!r} must override all four generator"
            " components or none",
            raw.line,
            1,
        )

    return SymmetryRecord(
        name=raw.name,
        field=field_value,
        potential=triples["phi"],
        paper_flux=triples["flux"],
    )


def format_symmetry_file(records: list[SymmetryRecord]) -> str:
    """Serialize records in the symmetry-file format (inverse of the parser)."""
    blocks: list[str] = []
    for record in records:
        lines = [f"[symmetry {record.name}]"]
        if record.field is not None:
            lines.append(f"xi_x = {print_expr(record.field.xi_x)}")
            lines.append(f"xi_y = {print_expr(record.field.xi_y)}")
            lines.append(f"xi_t = {print_expr(record.field.xi_t)}")
            lines.append(f"eta = {print_expr(record.field.eta)}")
        if record.potential is not None:
            lines.append(
                "phi = "
                + " ; ".join(print_expr(c) for c in record.potential.components)
            )
        if record.paper_flux is not None:
            lines.append(
                "flux = "
                + " ; ".join(print_expr(c) for c in record.paper_flux.components)
            )
        blocks.append("\n".join(lines))
    return "\n\n".join(blocks) + "\n"
