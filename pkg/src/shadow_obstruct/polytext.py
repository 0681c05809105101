"""Text and JSON formats for group-ring elements.

Text grammar, one polynomial per file (newlines allowed between terms):

    poly   := term (('+' | '-') term)*
    term   := coeff ('*' factor)* | factor ('*' factor)*
    factor := 'x' INDEX ('^' exponent)?
    coeff  := rational, e.g. 3, -1/2
    exponent := INT | rational | '(' rational ')'

Indices are 1-based.  Parse errors carry line and column.
"""

from __future__ import annotations

import re
from fractions import Fraction

from .exactcore import rat_to_str
from .groupring import GroupRingElement, make_exponent


class PolyParseError(ValueError):
    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"{message} (line {line}, column {column})")
        self.line = line
        self.column = column


_TOKEN = re.compile(
    r"""(?P<ws>\s+)
      | (?P<rat>\d+(?:/\d+)?)
      | (?P<var>x\d+)
      | (?P<op>[-+*^()])
    """,
    re.VERBOSE,
)


def _tokenize(text: str):
    tokens = []
    line, col = 1, 1
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise PolyParseError(f"unexpected character {text[pos]!r}", line, col)
        kind = m.lastgroup
        val = m.group()
        if kind != "ws":
            tokens.append((kind, val, line, col))
        newlines = val.count("\n")
        if newlines:
            line += newlines
            col = len(val) - val.rfind("\n")
        else:
            col += len(val)
        pos = m.end()
    tokens.append(("end", "", line, col))
    return tokens


def parse_poly(text: str, n: int | None = None) -> GroupRingElement:
    """Parse the text grammar into a GroupRingElement.

    The ambient dimension is inferred from the largest variable index
    unless given explicitly.
    """
    tokens = _tokenize(text)
    i = 0

    def peek():
        return tokens[i]

    def take(kind=None):
        nonlocal i
        tok = tokens[i]
        if kind and tok[0] != kind:
            raise PolyParseError(f"expected {kind}, found {tok[1]!r}", tok[2], tok[3])
        i += 1
        return tok

    def parse_exponent() -> Fraction:
        tok = peek()
        if tok[0] == "op" and tok[1] == "(":
            take()
            sign = 1
            if peek()[0] == "op" and peek()[1] == "-":
                take()
                sign = -1
            num = take("rat")
            val = Fraction(num[1])
            close = take("op")
            if close[1] != ")":
                raise PolyParseError("expected ')'", close[2], close[3])
            return sign * val
        if tok[0] == "op" and tok[1] == "-":
            take()
            return -Fraction(take("rat")[1])
        return Fraction(take("rat")[1])

    terms: list[tuple[Fraction, dict[int, Fraction]]] = []
    max_var = 0

    while True:
        sign = Fraction(1)
        tok = peek()
        if tok[0] == "op" and tok[1] in "+-":
            take()
            if tok[1] == "-":
                sign = -sign
        elif terms:
            raise PolyParseError(f"expected '+' or '-', found {tok[1]!r}", tok[2], tok[3])
        coeff = sign
        powers: dict[int, Fraction] = {}
        saw_factor = False
        tok = peek()
        if tok[0] == "rat":
            take()
            coeff *= Fraction(tok[1])
            saw_factor = True
        while True:
            tok = peek()
            if tok[0] == "op" and tok[1] == "*":
                take()
                tok = peek()
                if tok[0] not in ("rat", "var"):
                    raise PolyParseError("dangling '*'", tok[2], tok[3])
                continue
            if tok[0] == "rat":
                take()
                coeff *= Fraction(tok[1])
                saw_factor = True
                continue
            if tok[0] != "var":
                break
            take()
            idx = int(tok[1][1:])
            if idx < 1:
                raise PolyParseError("variable indices are 1-based", tok[2], tok[3])
            max_var = max(max_var, idx)
            expo = Fraction(1)
            nxt = peek()
            if nxt[0] == "op" and nxt[1] == "^":
                take()
                expo = parse_exponent()
            powers[idx - 1] = powers.get(idx - 1, Fraction(0)) + expo
            saw_factor = True
        if not saw_factor:
            tok = peek()
            raise PolyParseError(f"expected a term, found {tok[1]!r}", tok[2], tok[3])
        terms.append((coeff, powers))
        tok = peek()
        if tok[0] == "end":
            break

    dim = n if n is not None else max_var
    acc: dict = {}
    for coeff, powers in terms:
        if any(k >= dim for k in powers):
            raise PolyParseError("variable index exceeds dimension", 1, 1)
        e = make_exponent(tuple(powers.get(k, Fraction(0)) for k in range(dim)))
        acc[e] = acc.get(e, Fraction(0)) + coeff
    return GroupRingElement(dim, acc)


def _format_exponent(a: Fraction) -> str:
    if a.denominator == 1:
        return str(a.numerator)
    return f"({a.numerator}/{a.denominator})"


def format_poly(p: GroupRingElement) -> str:
    if p.is_zero():
        return "0"
    parts = []
    for e, c in p.sorted_terms():
        factors = [
            f"x{i + 1}^{_format_exponent(a)}" if a != 1 else f"x{i + 1}"
            for i, a in enumerate(e)
            if a != 0
        ]
        mag = abs(c)
        if not factors:
            body = rat_to_str(mag)
        elif mag == 1:
            body = " * ".join(factors)
        else:
            body = " * ".join([rat_to_str(mag)] + factors)
        parts.append(("- " if c < 0 else "+ ") + body)
    out = " ".join(parts)
    return out[2:] if out.startswith("+ ") else "-" + out[2:]


def poly_to_json(p: GroupRingElement) -> dict:
    terms = []
    for e, c in p.sorted_terms():
        terms.append(
            {
                "coeff": rat_to_str(c),
                "exp": [[str(a.numerator), str(a.denominator)] for a in e],
            }
        )
    return {"n": p.n, "terms": terms}


def poly_from_json(data: dict) -> GroupRingElement:
    n = int(data["n"])
    acc: dict = {}
    for t in data["terms"]:
        coords = []
        for pair in t["exp"]:
            if isinstance(pair, str):
                coords.append(Fraction(pair))
            else:
                coords.append(Fraction(int(pair[0]), int(pair[1])))
        e = make_exponent(coords)
        if len(e) != n:
            raise ValueError("exponent dimension mismatch in JSON polynomial")
        acc[e] = acc.get(e, Fraction(0)) + Fraction(t["coeff"])
    return GroupRingElement(n, acc)
