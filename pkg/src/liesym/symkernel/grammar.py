"""Expression grammar: parsing and canonical printing.

Grammar (documented EBNF, see README):

    expr    = term { ("+" | "-") term } ;
    term    = unary { ("*" | "/") unary } ;
    unary   = "-" unary | power ;
    power   = atom [ "^" unary ] ;              (right associative)
    atom    = NUMBER | NAME [ "(" expr { "," expr } ")" ] | "(" expr ")" ;

NAME is an identifier; jet names u_t ... u_xxx are reserved, IH and IK are
the opaque antiderivative symbols, and a function name may carry apostrophes
(H'(u)) or, for the formal multi-argument unknowns, a derivative suffix
(tau_t(t,x,u)).  Unknown identifiers are rejected with a position.
"""

from __future__ import annotations

from fractions import Fraction

from .atoms import (
    AtanA,
    CosA,
    ExpA,
    Func,
    JET_BY_NAME,
    Jet,
    LnA,
    Param,
    PolyBase,
    RatPow,
    SinA,
    Var,
    VOMEGA,
    VT,
    VU,
    VX,
)
from . import nf
from .nf import Expr, ONE, ZERO, add, atom_expr, const, div, k_abs, k_atan, k_cos, k_exp, k_ln, k_sign, k_sin, mul, neg, powe
from . import calculus


class ParseError(ValueError):
    def __init__(self, message, pos=None):
        self.pos = pos
        if pos is not None:
            message = "%s (at position %d)" % (message, pos)
        super().__init__(message)


DEFAULT_PARAMS = (
    "mu nu lambda gamma alpha beta gamma0 gamma1 "
    "c0 c1 c2 c3 c4 k c eps a b d h0 H0 s m zeta0 lambda0 lambda1 lambda2"
).split()

DEFAULT_FUNCS = "f H K IH IK g h q phi psi alphafun".split()

# formal multi-argument unknowns and their signatures
MULTI_SIG = {
    "tau": ("t", "x", "u"),
    "xi": ("t", "x", "u"),
    "eta": ("t", "x", "u"),
    "eta0": ("t", "x"),
    "eta1": ("t", "x"),
}

VARS = {"t": VT, "x": VX, "u": VU, "omega": VOMEGA}

KERNELS = {
    "exp": k_exp,
    "ln": k_ln,
    "sin": k_sin,
    "cos": k_cos,
    "atan": k_atan,
    "abs": k_abs,
    "sign": k_sign,
}


class Context:
    """Symbol table the parser resolves identifiers against."""

    def __init__(self, params=None, funcs=None, macros=None):
        self.params = set(DEFAULT_PARAMS if params is None else params)
        self.funcs = set(DEFAULT_FUNCS if funcs is None else funcs)
        self.macros = dict(macros or {})
        self.macros.setdefault("Dw", lambda args: calculus.pdiff(args[0], VOMEGA))

    def extended(self, params=(), funcs=()):
        c = Context(self.params | set(params), self.funcs | set(funcs), self.macros)
        return c


DEFAULT_CONTEXT = Context()


def tokenize(text: str):
    toks = []
    i = 0
    n = len(text)
    while i < n:
        ch = text[i]
        if ch.isspace():
            i += 1
            continue
        if ch.isdigit():
            j = i
            while j < n and text[j].isdigit():
                j += 1
            if j < n and text[j] == ".":
                raise ParseError("decimal literals are not part of the grammar", i)
            toks.append(("num", int(text[i:j]), i))
            i = j
            continue
        if ch.isalpha() or ch == "_":
            j = i
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            name = text[i:j]
            primes = 0
            while j < n and text[j] == "'":
                primes += 1
                j += 1
            toks.append(("name", (name, primes), i))
            i = j
            continue
        if ch in "+-*/^(),|":
            toks.append((ch, ch, i))
            i += 1
            continue
        raise ParseError("unexpected character %r" % ch, i)
    toks.append(("end", None, n))
    return toks


class _Parser:
    def __init__(self, toks, ctx: Context):
        self.toks = toks
        self.pos = 0
        self.ctx = ctx

    def peek(self):
        return self.toks[self.pos]

    def next(self):
        t = self.toks[self.pos]
        self.pos += 1
        return t

    def expect(self, kind):
        t = self.next()
        if t[0] != kind:
            raise ParseError("expected %r, found %r" % (kind, t[1]), t[2])
        return t

    def parse_expr(self):
        e = self.parse_term()
        while self.peek()[0] in ("+", "-"):
            op = self.next()[0]
            rhs = self.parse_term()
            e = add(e, rhs if op == "+" else neg(rhs))
        return e

    def parse_term(self):
        e = self.parse_unary()
        while self.peek()[0] in ("*", "/"):
            op = self.next()[0]
            rhs = self.parse_unary()
            e = mul(e, rhs) if op == "*" else div(e, rhs)
        return e

    def parse_unary(self):
        if self.peek()[0] == "-":
            self.next()
            return neg(self.parse_unary())
        return self.parse_power()

    def parse_power(self):
        base = self.parse_atom()
        if self.peek()[0] == "^":
            self.next()
            expo = self.parse_unary()
            return powe(base, nf.norm_exp(expo))
        return base

    def parse_atom(self):
        t = self.next()
        kind, val, pos = t
        if kind == "num":
            return const(val)
        if kind == "(":
            e = self.parse_expr()
            self.expect(")")
            return e
        if kind == "name":
            return self.resolve_name(val[0], val[1], pos)
        raise ParseError("unexpected token %r" % (val,), pos)

    def parse_args(self):
        self.expect("(")
        args = [self.parse_expr()]
        while self.peek()[0] == ",":
            self.next()
            args.append(self.parse_expr())
        self.expect(")")
        return args

    def resolve_name(self, name, primes, pos):
        ctx = self.ctx
        if primes and name not in ctx.funcs:
            raise ParseError("derivative mark on non-function %r" % name, pos)
        if name in JET_BY_NAME:
            return calculus.jet(name)
        if name.startswith("u_") and set(name[2:]) <= {"t", "x"} and len(name) > 2:
            raise ParseError("jet order > 3: %r" % name, pos)
        if name in VARS:
            return atom_expr(VARS[name])
        if name in ctx.params:
            return atom_expr(Param(name))
        if name in ctx.macros:
            args = self.parse_args()
            return ctx.macros[name](args)
        if name in KERNELS:
            if name == "sqrt":
                pass
            args = self.parse_args()
            if len(args) != 1:
                raise ParseError("%s takes one argument" % name, pos)
            return KERNELS[name](args[0])
        if name == "sqrt":
            args = self.parse_args()
            if len(args) != 1:
                raise ParseError("sqrt takes one argument", pos)
            return powe(args[0], Fraction(1, 2))
        if name in ctx.funcs:
            args = self.parse_args()
            if len(args) != 1:
                raise ParseError("%s takes one argument" % name, pos)
            return calculus.func(name, args[0], didx=(primes,))
        base, didx = _split_suffix(name)
        if base is not None:
            args = self.parse_args()
            sig = MULTI_SIG[base]
            if len(args) != len(sig):
                raise ParseError(
                    "%s takes %d arguments" % (base, len(sig)), pos
                )
            return calculus.func(base, *args, didx=didx)
        raise ParseError("unknown identifier %r" % name, pos)


def _split_suffix(name):
    if "_" not in name:
        if name in MULTI_SIG:
            return name, (0,) * len(MULTI_SIG[name])
        return None, None
    base, _, sfx = name.partition("_")
    if base not in MULTI_SIG:
        return None, None
    sig = MULTI_SIG[base]
    didx = [0] * len(sig)
    for ch in sfx:
        if ch not in sig:
            return None, None
        didx[sig.index(ch)] += 1
    return base, tuple(didx)


def parse(text: str, ctx: Context = None) -> Expr:
    ctx = ctx or DEFAULT_CONTEXT
    p = _Parser(tokenize(text), ctx)
    e = p.parse_expr()
    tail = p.peek()
    if tail[0] != "end":
        raise ParseError("unexpected trailing input %r" % (tail[1],), tail[2])
    return e


# ---------------------------------------------------------------------------
# printing

def sprint(e: Expr) -> str:
    """Canonical text form; parse(sprint(e)) == e."""
    if e.is_zero_form():
        return "0"
    num = _print_terms(e.terms)
    if not e.den:
        return num
    dparts = []
    for f, m in e.den:
        base = "(%s)" % _print_terms(f)
        dparts.append(base if m == 1 else "%s^%d" % (base, m))
    dstr = "*".join(dparts)
    if len(e.den) > 1 or e.den[0][1] > 1:
        dstr = "(%s)" % dstr
    return "(%s)/%s" % (num, dstr)


def _print_terms(terms) -> str:
    parts = []
    for i, (mono, c) in enumerate(terms):
        s = _print_term(mono, abs(c))
        if i == 0:
            parts.append(s if c > 0 else "-" + s)
        else:
            parts.append((" + " if c > 0 else " - ") + s)
    return "".join(parts)


def _print_term(mono, c: Fraction) -> str:
    factors = []
    if not mono:
        return _print_frac(c)
    if c != 1:
        factors.append(_print_frac(c))
    for a, ex in mono:
        base = _print_atom(a)
        if ex == 1:
            factors.append(base)
        else:
            factors.append("%s^%s" % (base, _print_exp(ex)))
    return "*".join(factors)


def _print_frac(c: Fraction) -> str:
    if c.denominator == 1:
        return str(c.numerator)
    return "(%d/%d)" % (c.numerator, c.denominator)


def _print_exp(ex) -> str:
    if type(ex) is int:
        return str(ex) if ex >= 0 else "(%d)" % ex
    if type(ex) is Fraction:
        return "(%d/%d)" % (ex.numerator, ex.denominator)
    return "(%s)" % sprint(ex)


def _print_atom(a) -> str:
    if isinstance(a, (Param, Var)):
        return a.name
    if isinstance(a, Jet):
        return a.name
    if isinstance(a, ExpA):
        return "exp(%s)" % sprint(a.arg)
    if isinstance(a, LnA):
        return "ln(%s)" % sprint(a.arg)
    if isinstance(a, SinA):
        return "sin(%s)" % sprint(a.arg)
    if isinstance(a, CosA):
        return "cos(%s)" % sprint(a.arg)
    if isinstance(a, AtanA):
        return "atan(%s)" % sprint(a.arg)
    if isinstance(a, PolyBase):
        return "(%s)" % _print_terms(a.terms)
    if isinstance(a, RatPow):
        return "(%s)" % _print_frac(a.base)
    if isinstance(a, Func):
        args = ", ".join(sprint(arg) for arg in a.args)
        if len(a.args) == 1:
            return "%s%s(%s)" % (a.name, "'" * a.didx[0], args)
        sfx = ""
        sig = MULTI_SIG.get(a.name)
        if sig and any(a.didx):
            sfx = "_" + "".join(
                sig[i] * a.didx[i] for i in range(len(sig))
            )
        return "%s%s(%s)" % (a.name, sfx, args)
    raise TypeError("cannot print %r" % (a,))
