"""Symbolic kernel: normalized expressions, grammar, calculus, zero-testing."""

from .atoms import (
    Atom,
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
from .nf import (
    Expr,
    NormalizationError,
    ONE,
    ZERO,
    add,
    atom_expr,
    const,
    div,
    invert,
    k_abs,
    k_atan,
    k_cos,
    k_exp,
    k_ln,
    k_sign,
    k_sin,
    lift,
    mul,
    neg,
    norm_exp,
    powe,
)
from .calculus import (
    AntiderivRule,
    ClosedFormRule,
    CyclicBindingError,
    FuncRule,
    JetOrderError,
    LogDerivativeRule,
    T,
    U,
    X,
    func,
    jet,
    param,
    pdiff,
    subs,
    tdiff,
)
from .grammar import Context, DEFAULT_CONTEXT, ParseError, parse, sprint
