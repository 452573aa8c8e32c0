"""A small expression language for naming groups, e.g. ``(C3 rx C4) x C5``.

Grammar (case- and whitespace-insensitive)::

    expr := semi { "x" semi }
    semi := atom [ "rx" atom ]
    atom := C INT | D INT | Q INT | SD INT | M(INT) | E(p,n) | Pstar(p,n,q,k)
          | A4 | A5 | S3 | S4 | SL23 | CPD8C4 | "(" expr ")"

Integers after D, Q, SD and M are group orders.  ``rx`` is the inversion
semidirect product: an abelian left factor by a cyclic group of even order.
"""

from __future__ import annotations

from dataclasses import dataclass

from psigroups import config
from psigroups import constructions as cons
from psigroups.errors import GroupError, ParseError, ResourceLimitError, SemanticError
from psigroups.group import FiniteGroup, direct_product
from psigroups.numeric import factorize

MAX_DIGITS = 18
MAX_DEPTH = 100

# longest first, so that "sd" wins over "s3" prefixes and "cpd8c4" over "c"
KEYWORDS = ("pstar", "cpd8c4", "sl23", "rx", "sd", "a4", "a5", "s3", "s4", "c", "d", "q", "m", "e", "x")
FIXED = {"a4": "A4", "a5": "A5", "s3": "S3", "s4": "S4", "sl23": "SL23", "cpd8c4": "CPD8C4"}
SIZED = {"c": "C", "d": "D", "q": "Q", "sd": "SD"}
ARITY = {"m": ("M", 1), "e": ("E", 2), "pstar": ("Pstar", 4)}


@dataclass(frozen=True)
class Atom:
    kind: str
    params: tuple[int, ...] = ()


@dataclass(frozen=True)
class DirectProduct:
    left: "GroupExpr"
    right: "GroupExpr"


@dataclass(frozen=True)
class SemidirectIota:
    left: "GroupExpr"
    right: "GroupExpr"


GroupExpr = Atom | DirectProduct | SemidirectIota


@dataclass(frozen=True)
class Token:
    kind: str  # a keyword, "int", "(", ")", ",", or "end"
    text: str
    pos: int


def tokenize(text: str) -> list[Token]:
    out = []
    # per-character lowering keeps positions aligned ('İ'.lower() has length 2)
    low = "".join(c.lower() if c.isascii() else "\0" for c in text)
    i, n = 0, len(text)
    while i < n:
        ch = low[i]
        if text[i].isspace():
            i += 1
            continue
        if ch in "(),":
            out.append(Token(ch, ch, i))
            i += 1
            continue
        if ch in "0123456789":
            j = i
            while j < n and low[j] in "0123456789":
                j += 1
            if j - i > MAX_DIGITS:
                raise ParseError("integer literal too long", i)
            out.append(Token("int", text[i:j], i))
            i = j
            continue
        for kw in KEYWORDS:
            if low.startswith(kw, i):
                out.append(Token(kw, text[i:i + len(kw)], i))
                i += len(kw)
                break
        else:
            raise ParseError(f"unexpected character {text[i]!r}", i)
    out.append(Token("end", "", n))
    return out


class _Parser:
    def __init__(self, text: str):
        self.toks = tokenize(text)
        self.i = 0
        self.depth = 0

    @property
    def cur(self) -> Token:
        return self.toks[self.i]

    def take(self, kind: str) -> Token:
        tok = self.cur
        if tok.kind != kind:
            want = "integer" if kind == "int" else repr(kind)
            got = "end of input" if tok.kind == "end" else repr(tok.text)
            raise ParseError(f"expected {want}, found {got}", tok.pos)
        self.i += 1
        return tok

    def expr(self) -> GroupExpr:
        node = self.semi()
        while self.cur.kind == "x":
            self.i += 1
            node = DirectProduct(node, self.semi())
        return node

    def semi(self) -> GroupExpr:
        node = self.atom()
        if self.cur.kind == "rx":
            self.i += 1
            node = SemidirectIota(node, self.atom())
        return node

    def atom(self) -> GroupExpr:
        tok = self.cur
        if tok.kind == "(":
            self.depth += 1
            if self.depth > MAX_DEPTH:
                raise ParseError("parentheses nested too deeply", tok.pos)
            self.i += 1
            node = self.expr()
            self.take(")")
            self.depth -= 1
            return node
        if tok.kind in FIXED:
            self.i += 1
            return Atom(FIXED[tok.kind])
        if tok.kind in SIZED:
            self.i += 1
            return Atom(SIZED[tok.kind], (int(self.take("int").text),))
        if tok.kind in ARITY:
            kind, arity = ARITY[tok.kind]
            self.i += 1
            self.take("(")
            params = [int(self.take("int").text)]
            for _ in range(arity - 1):
                self.take(",")
                params.append(int(self.take("int").text))
            self.take(")")
            return Atom(kind, tuple(params))
        got = "end of input" if tok.kind == "end" else repr(tok.text)
        raise ParseError(f"expected a group, found {got}", tok.pos)


def parse(text: str) -> GroupExpr:
    """Parse ``text``; raises ParseError (with a position) on bad input."""
    p = _Parser(text)
    node = p.expr()
    if p.cur.kind != "end":
        raise ParseError(f"unexpected {p.cur.text!r}", p.cur.pos)
    return node


def to_text(e: GroupExpr) -> str:
    """Print ``e`` so that parsing the result gives back ``e``."""
    if isinstance(e, Atom):
        if e.kind in FIXED.values():
            return e.kind
        if e.kind in SIZED.values():
            return f"{e.kind}{e.params[0]}"
        return f"{e.kind}({','.join(map(str, e.params))})"
    if isinstance(e, DirectProduct):
        right = to_text(e.right)
        if isinstance(e.right, DirectProduct):
            right = f"({right})"
        return f"{to_text(e.left)} x {right}"
    parts = [to_text(c) if isinstance(c, Atom) else f"({to_text(c)})" for c in (e.left, e.right)]
    return f"{parts[0]} rx {parts[1]}"


_FIXED_ORDERS = {"A4": 12, "A5": 60, "S3": 6, "S4": 24, "SL23": 24, "CPD8C4": 16}


def expr_order(e: GroupExpr) -> int:
    """Order of the group ``e`` denotes, without building it."""
    if isinstance(e, Atom):
        if e.kind in _FIXED_ORDERS:
            return _FIXED_ORDERS[e.kind]
        if e.kind in ("C", "D", "Q", "SD", "M"):
            return e.params[0]
        if e.kind == "E":
            p, n = e.params
            return p ** min(n, 64)
        p, n, q, k = e.params
        return p ** min(n, 64) * q ** min(k, 64)
    return expr_order(e.left) * expr_order(e.right)


def _atom_group(a: Atom) -> FiniteGroup:
    k, ps = a.kind, a.params
    if k == "C":
        return cons.cyclic(ps[0])
    if k == "D":
        return cons.dihedral(ps[0])
    if k == "Q":
        return cons.generalized_quaternion(ps[0])
    if k == "SD":
        return cons.semidihedral(ps[0])
    if k == "M":
        f = factorize(ps[0]) if ps[0] > 1 else []
        if len(f) != 1:
            raise SemanticError(f"M({ps[0]}) needs a prime-power order")
        return cons.modular_group(*f[0])
    if k == "E":
        return cons.elementary_abelian(*ps)
    if k == "Pstar":
        return cons.p_star(*ps)
    return {
        "A4": lambda: cons.alt(4),
        "A5": lambda: cons.alt(5),
        "S3": lambda: cons.sym(3),
        "S4": lambda: cons.sym(4),
        "SL23": cons.sl23,
        "CPD8C4": cons.central_product_d8_c4,
    }[k]()


def _eval(e: GroupExpr) -> FiniteGroup:
    if isinstance(e, Atom):
        try:
            G = _atom_group(e)
        except GroupError as exc:
            raise SemanticError(f"{to_text(e)}: {exc}") from None
    elif isinstance(e, DirectProduct):
        G = direct_product(_eval(e.left), _eval(e.right))
    else:
        A, B = _eval(e.left), _eval(e.right)
        if not A.is_abelian:
            raise SemanticError(f"left factor of rx must be abelian: {to_text(e.left)}")
        if not B.is_cyclic or B.order % 2:
            raise SemanticError(f"right factor of rx must be cyclic of even order: {to_text(e.right)}")
        G = cons.rtimes_iota(A, B.order)
    G.name = to_text(e)
    return G


def evaluate(e: GroupExpr) -> FiniteGroup:
    """Build the group; SemanticError for violated constraints,
    ResourceLimitError past the table cap."""
    n = expr_order(e)
    cap = config.LIMITS.table_cap
    if n > cap:
        raise ResourceLimitError(f"{to_text(e)} has order {n}, above the table cap {cap}")
    if n < 1:
        raise SemanticError(f"{to_text(e)} has no valid order")
    return _eval(e)


def build_group(text: str) -> FiniteGroup:
    return evaluate(parse(text))
