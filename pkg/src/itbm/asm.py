"""Textual assembly for machine programs, plus the program numbering.

Grammar (one command per line, numbered consecutively from 0):

    line   := NAT ":" (assign | branch)
    assign := REG ":=" ratexpr
    branch := "IF" ratexpr ">" "0" "GOTO" NAT "ELSE" NAT
    ratexpr := polynomial "/" polynomial | polynomial
    REG    := "R" NAT

Polynomials use integer literals, "+", "-", "*", "^" and parentheses;
the single "/" splitting numerator from denominator is the one at
parenthesis depth zero.  The serializer always emits the canonical form
"(P)/(Q)" with integer coefficients, so parse and serialize are mutually
inverse.

Programs are numbered by tokenizing the canonical text and folding the
token ids through Cantor pairing over a balanced tree (a flat fold would
double the bit length per token).  Decoding is total: every natural
yields a program, with ill-formed codes mapping to the empty program.
"""

from __future__ import annotations

from dataclasses import dataclass

from .coding import pair, unpair
from .machine import Assign, Command, Node, Program
from .rfn import Polynomial, RationalFn


class ParseError(Exception):
    def __init__(self, line: int, col: int, message: str) -> None:
        super().__init__(f"{line}:{col}: {message}")
        self.line = line
        self.col = col
        self.message = message


# --------------------------------------------------------------------------
# lexer

_SYMBOLS = (":=", ":", ">", "(", ")", "/", "+", "-", "*", "^")
_KEYWORDS = ("IF", "GOTO", "ELSE")


@dataclass(frozen=True)
class _Token:
    kind: str  # "num" | "reg" | "kw" | "sym" | "eol"
    text: str
    line: int
    col: int


def _lex_line(text: str, lineno: int) -> list[_Token]:
    tokens = []
    i = 0
    while i < len(text):
        c = text[i]
        if c.isspace():
            i += 1
            continue
        col = i + 1
        if text.startswith(":=", i):
            tokens.append(_Token("sym", ":=", lineno, col))
            i += 2
            continue
        if c in ":>()/+-*^":
            tokens.append(_Token("sym", c, lineno, col))
            i += 1
            continue
        if c.isdigit():
            j = i
            while j < len(text) and text[j].isdigit():
                j += 1
            tokens.append(_Token("num", text[i:j], lineno, col))
            i = j
            continue
        if c == "R" and i + 1 < len(text) and text[i + 1].isdigit():
            j = i + 1
            while j < len(text) and text[j].isdigit():
                j += 1
            tokens.append(_Token("reg", text[i:j], lineno, col))
            i = j
            continue
        if c.isalpha():
            j = i
            while j < len(text) and text[j].isalpha():
                j += 1
            word = text[i:j]
            if word not in _KEYWORDS:
                raise ParseError(lineno, col, f"unexpected word {word!r}")
            tokens.append(_Token("kw", word, lineno, col))
            i = j
            continue
        raise ParseError(lineno, col, f"unexpected character {c!r}")
    return tokens


# --------------------------------------------------------------------------
# parser


class _Cursor:
    def __init__(self, tokens: list[_Token], lineno: int) -> None:
        self.tokens = tokens
        self.pos = 0
        self.lineno = lineno

    def peek(self) -> _Token | None:
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def next(self) -> _Token:
        tok = self.peek()
        if tok is None:
            last = self.tokens[-1] if self.tokens else None
            col = (last.col + len(last.text)) if last else 1
            raise ParseError(self.lineno, col, "unexpected end of line")
        self.pos += 1
        return tok

    def expect(self, kind: str, text: str | None = None) -> _Token:
        tok = self.next()
        if tok.kind != kind or (text is not None and tok.text != text):
            want = text or kind
            raise ParseError(tok.line, tok.col, f"expected {want!r}, found {tok.text!r}")
        return tok


def _parse_poly(cur: _Cursor, stop_at_slash: bool) -> Polynomial:
    return _parse_sum(cur, stop_at_slash)


def _parse_sum(cur: _Cursor, stop: bool) -> Polynomial:
    negate = False
    tok = cur.peek()
    if tok and tok.kind == "sym" and tok.text == "-":
        cur.next()
        negate = True
    total = _parse_product(cur)
    if negate:
        total = total.scale(-1)
    while True:
        tok = cur.peek()
        if tok is None or tok.kind != "sym" or tok.text not in "+-":
            return total
        cur.next()
        term = _parse_product(cur)
        total = total + (term if tok.text == "+" else term.scale(-1))


def _parse_product(cur: _Cursor) -> Polynomial:
    total = _parse_power(cur)
    while True:
        tok = cur.peek()
        if tok is None or tok.kind != "sym" or tok.text != "*":
            return total
        cur.next()
        total = total * _parse_power(cur)


def _parse_power(cur: _Cursor) -> Polynomial:
    base = _parse_factor(cur)
    tok = cur.peek()
    if tok and tok.kind == "sym" and tok.text == "^":
        cur.next()
        exp = cur.expect("num")
        return base.pow(int(exp.text))
    return base


def _parse_factor(cur: _Cursor) -> Polynomial:
    tok = cur.next()
    if tok.kind == "num":
        return Polynomial.const(int(tok.text))
    if tok.kind == "reg":
        return Polynomial.var(int(tok.text[1:]))
    if tok.kind == "sym" and tok.text == "(":
        inner = _parse_sum(cur, stop=False)
        cur.expect("sym", ")")
        return inner
    raise ParseError(tok.line, tok.col, f"expected a factor, found {tok.text!r}")


def _parse_ratexpr(cur: _Cursor, terminators: tuple[str, ...]) -> RationalFn:
    """Parse up to a terminator keyword/symbol; split on the depth-0 slash."""
    start = cur.pos
    depth = 0
    slash = None
    while True:
        tok = cur.peek()
        if tok is None:
            break
        if depth == 0 and (
            (tok.kind == "kw" and tok.text in terminators)
            or (tok.kind == "sym" and tok.text in terminators)
        ):
            break
        if tok.kind == "sym" and tok.text == "(":
            depth += 1
        elif tok.kind == "sym" and tok.text == ")":
            depth -= 1
        elif tok.kind == "sym" and tok.text == "/" and depth == 0:
            if slash is not None:
                raise ParseError(tok.line, tok.col, "more than one top-level '/'")
            slash = cur.pos
        cur.next()
    end = cur.pos
    if slash is None:
        num_cur = _Cursor(cur.tokens[start:end], cur.lineno)
        num = _parse_poly(num_cur, stop_at_slash=False)
        if num_cur.peek() is not None:
            tok = num_cur.peek()
            raise ParseError(tok.line, tok.col, f"unexpected {tok.text!r}")
        return RationalFn.from_polynomial(num)
    num_cur = _Cursor(cur.tokens[start:slash], cur.lineno)
    den_cur = _Cursor(cur.tokens[slash + 1 : end], cur.lineno)
    num = _parse_poly(num_cur, stop_at_slash=False)
    den = _parse_poly(den_cur, stop_at_slash=False)
    for sub in (num_cur, den_cur):
        if sub.peek() is not None:
            tok = sub.peek()
            raise ParseError(tok.line, tok.col, f"unexpected {tok.text!r}")
    if den.is_zero():
        first = cur.tokens[slash]
        raise ParseError(first.line, first.col, "denominator is identically zero")
    return RationalFn(num, den)


def parse(text: str) -> Program:
    """Parse a program; raises ParseError with line and column on failure."""
    commands: list[Command] = []
    expected = 0
    last_token_line = 0
    for lineno, raw in enumerate(text.splitlines(), start=1):
        tokens = _lex_line(raw, lineno)
        if not tokens:
            continue
        cur = _Cursor(tokens, lineno)
        num = cur.expect("num")
        if int(num.text) != expected:
            raise ParseError(
                lineno, num.col, f"expected line number {expected}, found {num.text}"
            )
        cur.expect("sym", ":")
        tok = cur.peek()
        if tok is None:
            raise ParseError(lineno, num.col, "missing command")
        if tok.kind == "kw" and tok.text == "IF":
            cur.next()
            fn = _parse_ratexpr(cur, terminators=(">",))
            cur.expect("sym", ">")
            zero = cur.expect("num")
            if zero.text != "0":
                raise ParseError(zero.line, zero.col, "branch tests must compare with 0")
            cur.expect("kw", "GOTO")
            a = int(cur.expect("num").text)
            a_col = cur.tokens[cur.pos - 1].col
            cur.expect("kw", "ELSE")
            b = int(cur.expect("num").text)
            b_col = cur.tokens[cur.pos - 1].col
            commands.append((Node(fn, a, b), a_col, b_col, lineno))
        elif tok.kind == "reg":
            cur.next()
            target = int(tok.text[1:])
            cur.expect("sym", ":=")
            fn = _parse_ratexpr(cur, terminators=())
            commands.append((Assign(target, fn), 0, 0, lineno))
        else:
            raise ParseError(tok.line, tok.col, f"expected a command, found {tok.text!r}")
        leftover = cur.peek()
        if leftover is not None:
            raise ParseError(
                leftover.line, leftover.col, f"unexpected {leftover.text!r}"
            )
        expected += 1
        last_token_line = lineno
    n = len(commands)
    for cmd, a_col, b_col, lineno in commands:
        if isinstance(cmd, Node):
            if cmd.if_positive > n:
                raise ParseError(lineno, a_col, "jump target out of range")
            if cmd.if_not > n:
                raise ParseError(lineno, b_col, "jump target out of range")
    del last_token_line
    return Program(tuple(cmd for cmd, _, _, _ in commands))


def parse_fn(text: str) -> RationalFn:
    """Parse a single rational-function expression (used by generators)."""
    tokens = _lex_line(text, 1)
    cur = _Cursor(tokens, 1)
    fn = _parse_ratexpr(cur, terminators=())
    if cur.peek() is not None:
        tok = cur.peek()
        raise ParseError(tok.line, tok.col, f"unexpected {tok.text!r}")
    return fn


# --------------------------------------------------------------------------
# serializer


def _poly_text(p: Polynomial) -> str:
    if not p.terms:
        return "0"
    parts = []
    for k, (mono, coeff) in enumerate(p.terms):
        if coeff.denominator != 1:
            raise ValueError("canonical rational functions have integer coefficients")
        mag = abs(coeff.numerator)
        mono_txt = "*".join(f"R{v}" if e == 1 else f"R{v}^{e}" for v, e in mono)
        if not mono_txt:
            body = str(mag)
        elif mag == 1:
            body = mono_txt
        else:
            body = f"{mag}*{mono_txt}"
        if k == 0:
            parts.append(body if coeff > 0 else f"-{body}")
        else:
            parts.append(f"+ {body}" if coeff > 0 else f"- {body}")
    return " ".join(parts)


def _fn_text(fn: RationalFn) -> str:
    return f"({_poly_text(fn.num)})/({_poly_text(fn.den)})"


def serialize(program: Program) -> str:
    lines = []
    for i, cmd in enumerate(program.commands):
        if isinstance(cmd, Assign):
            lines.append(f"{i}: R{cmd.target} := {_fn_text(cmd.fn)}")
        else:
            lines.append(
                f"{i}: IF {_fn_text(cmd.fn)} > 0 GOTO {cmd.if_positive} ELSE {cmd.if_not}"
            )
    return "\n".join(lines)


# --------------------------------------------------------------------------
# program numbering

_VOCAB = ("\n", ":", ":=", "IF", "GOTO", "ELSE", ">", "(", ")", "/", "+", "-", "*", "^")
_VOCAB_IDS = {text: i for i, text in enumerate(_VOCAB)}
_NUM_BASE = len(_VOCAB)
_MAX_TOKENS = 100_000


def _token_ids(program: Program) -> list[int]:
    ids: list[int] = []
    for lineno, raw in enumerate(serialize(program).splitlines()):
        if lineno:
            ids.append(_VOCAB_IDS["\n"])
        for tok in _lex_line(raw, lineno + 1):
            if tok.kind == "num":
                ids.append(_NUM_BASE + 2 * int(tok.text))
            elif tok.kind == "reg":
                ids.append(_NUM_BASE + 1 + 2 * int(tok.text[1:]))
            else:
                ids.append(_VOCAB_IDS[tok.text])
    return ids


def _id_text(i: int) -> str:
    if i < _NUM_BASE:
        return _VOCAB[i]
    if (i - _NUM_BASE) % 2 == 0:
        return str((i - _NUM_BASE) // 2)
    return f"R{(i - _NUM_BASE - 1) // 2}"


def _encode_tree(ids: list[int]) -> int:
    if len(ids) == 1:
        return ids[0]
    mid = (len(ids) + 1) // 2
    return pair(_encode_tree(ids[:mid]), _encode_tree(ids[mid:]))


def _decode_tree(code: int, n: int) -> list[int]:
    if n == 1:
        return [code]
    left, right = unpair(code)
    mid = (n + 1) // 2
    return _decode_tree(left, mid) + _decode_tree(right, n - mid)


def godel_encode(program: Program) -> int:
    ids = _token_ids(program)
    if not ids:
        return 0
    return 1 + pair(len(ids) - 1, _encode_tree(ids))


def godel_decode(code: int) -> Program:
    """Total: ill-formed codes decode to the empty program."""
    if code < 0:
        raise ValueError("codes are natural numbers")
    if code == 0:
        return Program(())
    n_minus, tree = unpair(code - 1)
    n = n_minus + 1
    if n > _MAX_TOKENS:
        return Program(())
    ids = _decode_tree(tree, n)
    text = " ".join(_id_text(i) for i in ids)
    text = text.replace(" \n ", "\n")
    try:
        return parse(text)
    except ParseError:
        return Program(())
