"""Function specifications for the arbitrary elements f(x), H(u), K(u).

A FunctionSpec fixes how a named symbol behaves: a closed form, an opaque
symbol, or an implicitly defined function through the log-derivative rule
F' = r * F (the f^1..f^4 families are only ever given this way).
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .atoms import Func, Var, VU, VX
from .nf import Expr, ZERO, NormalizationError
from .calculus import (
    AntiderivRule,
    ClosedFormRule,
    LogDerivativeRule,
    subs,
)
from . import nf

MODE_CLOSED = "closed"
MODE_OPAQUE = "opaque"
MODE_LOGDERIV = "logderiv"


@dataclass(frozen=True)
class FunctionSpec:
    name: str
    var: str  # "x" or "u"
    mode: str = MODE_OPAQUE
    body: Expr = None  # closed form, in var
    ratio: Expr = None  # log-derivative ratio, in var
    anchor: tuple = (0, 1)  # numeric anchor (x0, F(x0)) for logderiv mode

    def __post_init__(self):
        if self.mode == MODE_CLOSED and self.body is None:
            raise ValueError("closed FunctionSpec needs a body")
        if self.mode == MODE_LOGDERIV:
            if self.ratio is None:
                raise ValueError("logderiv FunctionSpec needs a ratio")
            if self.ratio.is_zero_form():
                # a zero ratio is a constant function; fine but degenerate
                pass

    @property
    def var_atom(self) -> Var:
        return VX if self.var == "x" else VU

    def value(self, arg: Expr) -> Expr:
        """The symbol applied to arg, closed forms substituted away."""
        if self.mode == MODE_CLOSED:
            return subs(self.body, {self.var_atom: arg})
        return nf.atom_expr(Func(self.name, (arg,), (0,)))

    def rule(self):
        if self.mode == MODE_CLOSED:
            return ClosedFormRule(self.var_atom, self.body)
        if self.mode == MODE_LOGDERIV:
            return LogDerivativeRule(self.var_atom, self.ratio)
        return None

    def is_identically_zero(self) -> bool:
        return self.mode == MODE_CLOSED and self.body.is_zero_form()

    def is_const(self) -> bool:
        return self.mode == MODE_CLOSED and self.body.is_rational_const()


def closed(name: str, var: str, body: Expr) -> FunctionSpec:
    return FunctionSpec(name, var, MODE_CLOSED, body=body)


def opaque(name: str, var: str) -> FunctionSpec:
    return FunctionSpec(name, var, MODE_OPAQUE)


def logderiv(name: str, var: str, ratio: Expr, anchor=(0, 1)) -> FunctionSpec:
    return FunctionSpec(name, var, MODE_LOGDERIV, ratio=ratio, anchor=anchor)
