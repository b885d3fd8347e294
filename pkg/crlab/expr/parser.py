"""
Recursive descent parser of the defining function grammar

```
expr   := term (('+' | '-') term)*
term   := unary (('*' | '/') unary)*
unary  := '-' unary | factor
factor := base ('^' '-'? integer)?
base   := number ['i'] | 'z'k | 't' | 'i' | name | ident '(' expr ')' | '(' expr ')'
ident  := conj | re | im | abs2 | exp | log | 'd'* (chi0 | chi1)
```
"""

from typing import TYPE_CHECKING, NamedTuple, Optional, Mapping
from numbers import Number
from re import compile as re_compile

from crlab.exceptions import ExpressionSyntaxError, UnknownIdentifierError, ArityError
from crlab.util.convert import to_complex

from .nodes import (
    Node,
    Const,
    Var,
    FUNCTIONS,
    T,
    add,
    sub,
    mul,
    div,
    power,
    neg,
    call,
    profile,
)

if TYPE_CHECKING:
    from crlab.types.common import ProfileName


__all__ = ("parse", "tokenize", "Token")


TOKEN = re_compile(
    r"\s*(?:"
    r"(?P<number>(?:\d+\.?\d*|\.\d+)(?:[eE][-+]?\d+)?)(?P<imag>i(?![A-Za-z0-9_]))?"
    r"|(?P<name>[A-Za-z_][A-Za-z0-9_]*)"
    r"|(?P<op>[-+*/^(),])"
    r")"
)
VARIABLE = re_compile(r"z([1-9]\d*)")
PROFILE = re_compile(r"(d*)(chi[01])")


class Token(NamedTuple):
    kind: str
    text: str
    offset: int


def _syntax_error(text: str, offset: int, message: str) -> ExpressionSyntaxError:
    # byte offset into the utf-8 encoded input
    offset = len(text[:offset].encode())
    return ExpressionSyntaxError(
        "syntax", f"{message} at offset {offset}", details={"offset": offset}
    )


def tokenize(text: str, /) -> list[Token]:
    tokens = []
    pos = 0
    end = len(text.rstrip())

    while pos < end:
        m = TOKEN.match(text, pos)
        if m is None or m.end() == pos or m.lastgroup is None:
            start = len(text) - len(text[pos:].lstrip())
            raise _syntax_error(text, start, f"unexpected character {text[start]!r}")

        kind = "imag" if m.group("imag") else m.lastgroup
        if kind == "imag":
            value = m.group("number")
        else:
            value = m.group(m.lastgroup)
        tokens.append(Token(kind, value, m.start(m.lastgroup if kind != "imag" else "number")))
        pos = m.end()

    tokens.append(Token("end", "", len(text)))
    return tokens


class Parser:
    def __init__(
        self, text: str, /, n: int, *, constants: Optional[Mapping[str, Number]] = None
    ):
        self.text = text
        self.n = n
        self.constants = {k: to_complex(v) for k, v in (constants or {}).items()}
        self.tokens = tokenize(text)
        self.pos = 0

    @property
    def current(self) -> Token:
        return self.tokens[self.pos]

    def advance(self) -> Token:
        token = self.tokens[self.pos]
        self.pos += 1
        return token

    def error(self, message: str, token: Token | None = None) -> ExpressionSyntaxError:
        token = token or self.current
        return _syntax_error(self.text, token.offset, message)

    def expect(self, text: str) -> Token:
        if self.current.text != text or self.current.kind != "op":
            found = self.current.text or "end of input"
            raise self.error(f"expected {text!r}, found {found!r}")
        return self.advance()

    def parse(self) -> Node:
        node = self.expr()
        if self.current.kind != "end":
            raise self.error(f"unexpected {self.current.text!r}")
        return node

    def expr(self) -> Node:
        node = self.term()
        while self.current.kind == "op" and self.current.text in "+-":
            op = self.advance().text
            right = self.term()
            node = add(node, right) if op == "+" else sub(node, right)
        return node

    def term(self) -> Node:
        node = self.unary()
        while self.current.kind == "op" and self.current.text in "*/":
            op = self.advance().text
            right = self.unary()
            node = mul(node, right) if op == "*" else div(node, right)
        return node

    def unary(self) -> Node:
        if self.current.kind == "op" and self.current.text == "-":
            self.advance()
            return neg(self.unary())
        return self.factor()

    def factor(self) -> Node:
        node = self.base()
        if self.current.kind == "op" and self.current.text == "^":
            self.advance()
            sign = 1
            if self.current.kind == "op" and self.current.text == "-":
                self.advance()
                sign = -1
            token = self.current
            if token.kind != "number" or not token.text.isdigit():
                raise self.error("integer exponent expected", token)
            self.advance()
            node = power(node, sign * int(token.text))
        return node

    def base(self) -> Node:
        token = self.current

        match token.kind:
            case "number":
                self.advance()
                return Const(float(token.text))
            case "imag":
                self.advance()
                return Const(complex(0, float(token.text)))
            case "name":
                self.advance()
                return self.name(token)
            case "op" if token.text == "(":
                self.advance()
                node = self.expr()
                self.expect(")")
                return node
            case "end":
                raise self.error("unexpected end of input", token)
            case _:
                raise self.error(f"unexpected {token.text!r}", token)

    def arguments(self, token: Token) -> list[Node]:
        self.expect("(")
        args = [self.expr()]
        while self.current.kind == "op" and self.current.text == ",":
            self.advance()
            args.append(self.expr())
        self.expect(")")
        return args

    def single_argument(self, token: Token) -> Node:
        args = self.arguments(token)
        if len(args) != 1:
            offset = len(self.text[: token.offset].encode())
            raise ArityError(
                "arity",
                f"{token.text} takes 1 argument, {len(args)} given",
                details={"offset": offset, "name": token.text},
            )
        return args[0]

    def name(self, token: Token) -> Node:
        name = token.text

        if name in FUNCTIONS:
            return call(name, self.single_argument(token))

        if m := PROFILE.fullmatch(name):
            kind: "ProfileName" = m.group(2)
            return profile(kind, self.single_argument(token), order=len(m.group(1)))

        if name == "t":
            return T

        if m := VARIABLE.fullmatch(name):
            index = int(m.group(1))
            if index <= self.n:
                return Var(index)

        if name in self.constants:
            return Const(self.constants[name])

        if name == "i":
            return Const(1j)

        offset = len(self.text[: token.offset].encode())
        raise UnknownIdentifierError(
            "unknown_identifier",
            f"unknown identifier {name!r} at offset {offset}",
            details={"offset": offset, "name": name},
        )


def parse(
    text: str, /, n: int, *, constants: Optional[Mapping[str, Number]] = None
) -> Node:
    """
    Parse an expression over `z1..zn` and `t`

    Arguments
    ---------
    - `text` -- expression source
    - `n` -- number of complex variables
    - `constants` -- named constants substituted at parse time

    >>> str(parse("abs2(z1)+abs2(z2)-1", 2))
    'abs2(z1)+abs2(z2)-1.0'
    """
    return Parser(text, n, constants=constants).parse()
