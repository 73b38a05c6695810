"""Atom layer of the expression kernel.

An atom is an indivisible multiplicative building block: a parameter, a base
variable, a jet coordinate of u, an applied function symbol, a kernel
application (exp, ln, sin, cos, atan), a non-monomial base raised to a
non-integer power, or a rational constant raised to a non-integer power.

Every atom carries a structural sort key so that term ordering is stable
across processes (no dependence on interning or creation order).
"""

from __future__ import annotations

from fractions import Fraction

# kind ranks fix the total order on node kinds
K_PARAM = 0
K_VAR = 1
K_JET = 2
K_FUNC = 3
K_EXP = 4
K_LN = 5
K_SIN = 6
K_COS = 7
K_ATAN = 8
K_POLYBASE = 9
K_RATPOW = 10


class Atom:
    __slots__ = ("key", "_hash")

    def __eq__(self, other):
        return self is other or (isinstance(other, Atom) and self.key == other.key)

    def __ne__(self, other):
        return not self.__eq__(other)

    def __hash__(self):
        return self._hash

    def __lt__(self, other):
        return self.key < other.key

    def __repr__(self):
        return "<atom %s>" % (self.key,)


class Param(Atom):
    __slots__ = ("name",)

    def __init__(self, name: str):
        self.name = name
        self.key = (K_PARAM, name)
        self._hash = hash(self.key)


class Var(Atom):
    __slots__ = ("name",)

    def __init__(self, name: str):
        self.name = name
        self.key = (K_VAR, name)
        self._hash = hash(self.key)


class Jet(Atom):
    """Jet coordinate of u: Jet(nt, nx) is the derivative t^nt x^nx, order <= 3."""

    __slots__ = ("nt", "nx")

    def __init__(self, nt: int, nx: int):
        if nt < 0 or nx < 0 or nt + nx < 1 or nt + nx > 3:
            raise ValueError("jet order out of range: (%d, %d)" % (nt, nx))
        self.nt = nt
        self.nx = nx
        self.key = (K_JET, nt + nx, nx)
        self._hash = hash(self.key)

    @property
    def order(self) -> int:
        return self.nt + self.nx

    @property
    def name(self) -> str:
        return "u_" + "t" * self.nt + "x" * self.nx


class Func(Atom):
    """Applied function symbol with a formal partial-derivative multi-index.

    Single-argument symbols (H, K, IH, g, h, q, phi, psi, ...) take an
    arbitrary expression argument and differentiate by the chain rule.
    Multi-argument symbols (tau, xi, eta over (t,x,u)) must be applied to the
    base variables and differentiate formally.
    """

    __slots__ = ("name", "args", "didx")

    def __init__(self, name: str, args: tuple, didx: tuple):
        if len(args) != len(didx):
            raise ValueError("didx length mismatch for %s" % name)
        self.name = name
        self.args = args
        self.didx = didx
        self.key = (K_FUNC, name, didx, tuple(a.key for a in args))
        self._hash = hash(self.key)


class ExpA(Atom):
    """exp(arg); at most one per monomial, merged additively on multiply."""

    __slots__ = ("arg",)

    def __init__(self, arg):
        self.arg = arg
        self.key = (K_EXP, arg.key)
        self._hash = hash(self.key)


class LnA(Atom):
    __slots__ = ("arg",)

    def __init__(self, arg):
        self.arg = arg
        self.key = (K_LN, arg.key)
        self._hash = hash(self.key)


class SinA(Atom):
    __slots__ = ("arg",)

    def __init__(self, arg):
        self.arg = arg
        self.key = (K_SIN, arg.key)
        self._hash = hash(self.key)


class CosA(Atom):
    __slots__ = ("arg",)

    def __init__(self, arg):
        self.arg = arg
        self.key = (K_COS, arg.key)
        self._hash = hash(self.key)


class AtanA(Atom):
    __slots__ = ("arg",)

    def __init__(self, arg):
        self.arg = arg
        self.key = (K_ATAN, arg.key)
        self._hash = hash(self.key)


class PolyBase(Atom):
    """A comonic multi-term polynomial base carrying a non-integer exponent.

    Integer powers of sums are always expanded (or pushed to the
    denominator), so a PolyBase atom only ever appears with a fractional or
    parameter-valued exponent whose integer constant part is zero.
    """

    __slots__ = ("terms",)

    def __init__(self, terms):
        # terms: canonical Terms tuple (see nf.py), comonic, >= 2 terms
        self.terms = terms
        self.key = (K_POLYBASE, _terms_key(terms))
        self._hash = hash(self.key)


class RatPow(Atom):
    """A positive rational constant base (!= 1) under a non-integer exponent."""

    __slots__ = ("base",)

    def __init__(self, base: Fraction):
        self.base = base
        self.key = (K_RATPOW, base.numerator, base.denominator)
        self._hash = hash(self.key)


def _exp_key(e):
    """Sort key for an exponent (int, Fraction, or param-only expression)."""
    if type(e) is int:
        return (0, e, 1)
    if type(e) is Fraction:
        return (0, e.numerator, e.denominator)
    return (1,) + (e.key,)


def _mono_key(mono):
    return tuple((a.key, _exp_key(e)) for (a, e) in mono)


def _terms_key(terms):
    return tuple(
        (_mono_key(m), c.numerator, c.denominator) for (m, c) in terms
    )


# shared instances of the base variables
VT = Var("t")
VX = Var("x")
VU = Var("u")
VOMEGA = Var("omega")

JET_BY_NAME = {}
for _nt in range(4):
    for _nx in range(4 - _nt):
        if 1 <= _nt + _nx <= 3:
            _j = Jet(_nt, _nx)
            JET_BY_NAME[_j.name] = _j
