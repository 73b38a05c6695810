"""Deterministic extended-precision evaluation and sampling.

Everything runs on mpmath at 40 significant digits so the 1e-9 residual
threshold sits far above roundoff.  Implicitly defined functions (the
log-derivative families f^1..f^4 and the antiderivative symbols IH, IK) are
integrated from an anchor value with an adaptive RKF45 step at local error
1e-12; the stepping is fixed, so values reproduce bit-for-bit.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction

import mpmath as mp

from .symkernel import (
    AtanA,
    CosA,
    ExpA,
    Expr,
    Func,
    Jet,
    LnA,
    Param,
    PolyBase,
    RatPow,
    SinA,
    Var,
)

Fr = Fraction

PRECISION_DPS = 40
DEFAULT_SEED = 0x5EED
DEFAULT_POINTS = 50
REL_TOL = mp.mpf("1e-9")
SING_MARGIN = mp.mpf("1e-3")


class EvalError(ValueError):
    pass


class SingularityError(EvalError):
    pass


class UnboundSymbolError(EvalError):
    pass


@dataclass
class NumericFunction:
    """Numeric realization of a named function symbol."""

    kind: str  # "closed" | "ode"
    body: object = None  # Expr for closed, (ratio Expr, var name) for ode
    anchor: tuple = (0, 1)
    log_space: bool = False  # integrate d(ln F) = r dx instead of F' = r F
    max_step: float = 0.125

    def __call__(self, ev, argval):
        if self.kind == "closed":
            return ev.eval(self.body, {self.var_name: argval})
        x0 = mp.mpf(self.anchor[0])
        y0 = mp.mpf(self.anchor[1])
        return _integrate_rule(ev, self.body, self.var_name, x0, y0, argval,
                               self.log_space, self.max_step)

    var_name: str = "x"


def _integrate_rule(ev, rhs_expr, var, x0, y0, x1, log_space, max_step):
    """Integrate F' = rhs(x, F) from (x0, y0) to x1 with adaptive RKF45.

    For log_space the equation is (ln F)' = rhs(x) and y tracks ln F.
    """
    # the right-hand side only ever depends on the integration variable:
    # log-derivative rules integrate d(ln F) = r(x) dx, antiderivatives
    # integrate y' = H(x)
    y = mp.log(y0) if log_space else y0

    def fn(x, y_):
        return ev.eval(rhs_expr, {var: x})

    a, btarget = x0, mp.mpf(x1)
    if a == btarget:
        return mp.exp(y) if log_space else y
    h = mp.mpf(max_step) * (1 if btarget > a else -1)
    tol = mp.mpf("1e-12")
    x = a
    guard = 0
    while (btarget - x) * mp.sign(h) > 0:
        guard += 1
        if guard > 100000:
            raise EvalError("ODE integration did not converge")
        if (x + h - btarget) * mp.sign(h) > 0:
            h = btarget - x
        y1, err = _rkf45_step(fn, x, y, h)
        if err <= tol * (1 + abs(y1)):
            x = x + h
            y = y1
            if err < tol / 32:
                h = h * 2
        else:
            h = h / 2
            if abs(h) < mp.mpf("1e-18"):
                raise SingularityError("step underflow in ODE integration")
    return mp.exp(y) if log_space else y


_RKF_B = [
    [],
    [Fr(1, 4)],
    [Fr(3, 32), Fr(9, 32)],
    [Fr(1932, 2197), Fr(-7200, 2197), Fr(7296, 2197)],
    [Fr(439, 216), Fr(-8), Fr(3680, 513), Fr(-845, 4104)],
    [Fr(-8, 27), Fr(2), Fr(-3544, 2565), Fr(1859, 4104), Fr(-11, 40)],
]
_RKF_C = [Fr(0), Fr(1, 4), Fr(3, 8), Fr(12, 13), Fr(1), Fr(1, 2)]
_RKF_W5 = [Fr(16, 135), Fr(0), Fr(6656, 12825), Fr(28561, 56430), Fr(-9, 50), Fr(2, 55)]
_RKF_W4 = [Fr(25, 216), Fr(0), Fr(1408, 2565), Fr(2197, 4104), Fr(-1, 5), Fr(0)]


def _rkf45_step(fn, x, y, h):
    ks = []
    for i in range(6):
        yi = y
        for j, bij in enumerate(_RKF_B[i]):
            yi = yi + h * mp.mpf(bij.numerator) / bij.denominator * ks[j]
        ks.append(fn(x + h * mp.mpf(_RKF_C[i].numerator) / _RKF_C[i].denominator, yi))
    y5 = y
    y4 = y
    for w, kk in zip(_RKF_W5, ks):
        y5 = y5 + h * mp.mpf(w.numerator) / w.denominator * kk
    for w, kk in zip(_RKF_W4, ks):
        y4 = y4 + h * mp.mpf(w.numerator) / w.denominator * kk
    return y5, abs(y5 - y4)


class Evaluator:
    """Recursive mpmath evaluator over normal forms."""

    def __init__(self, funcs=None, dps=PRECISION_DPS):
        self.funcs = funcs or {}
        self.dps = dps

    def eval(self, e: Expr, binding) -> mp.mpf:
        v, _s = self.eval_scaled(e, binding)
        return v

    def eval_scaled(self, e: Expr, binding):
        """Returns (value, scale); scale is the sum of |term| magnitudes."""
        with mp.workdps(self.dps):
            num = mp.mpf(0)
            scale = mp.mpf(0)
            for mono, c in e.terms:
                t = mp.mpf(c.numerator) / c.denominator
                for a, ex in mono:
                    t = t * self._atom(a, binding) ** self._expval(ex, binding)
                num += t
                scale += abs(t)
            den = mp.mpf(1)
            for f, m in e.den:
                fv = mp.mpf(0)
                for mono, c in f:
                    t = mp.mpf(c.numerator) / c.denominator
                    for a, ex in mono:
                        t = t * self._atom(a, binding) ** self._expval(ex, binding)
                    fv += t
                if abs(fv) < SING_MARGIN:
                    raise SingularityError("denominator within singular margin")
                den *= fv ** m
            return num / den, (scale / abs(den)) if den else scale

    def _expval(self, ex, binding):
        if type(ex) is int:
            return ex
        if type(ex) is Fraction:
            return mp.mpf(ex.numerator) / ex.denominator
        return self.eval(ex, binding)

    def _atom(self, a, binding):
        if isinstance(a, (Param, Var)):
            if a.name not in binding:
                raise UnboundSymbolError("unbound symbol %r" % a.name)
            v = binding[a.name]
            return mp.mpf(v.numerator) / v.denominator if isinstance(v, Fraction) else mp.mpf(v)
        if isinstance(a, Jet):
            if a.name not in binding:
                raise UnboundSymbolError("unbound jet %r" % a.name)
            v = binding[a.name]
            return mp.mpf(v.numerator) / v.denominator if isinstance(v, Fraction) else mp.mpf(v)
        if isinstance(a, ExpA):
            return mp.exp(self.eval(a.arg, binding))
        if isinstance(a, LnA):
            v = self.eval(a.arg, binding)
            if v <= SING_MARGIN:
                raise SingularityError("ln argument within singular margin")
            return mp.log(v)
        if isinstance(a, SinA):
            return mp.sin(self.eval(a.arg, binding))
        if isinstance(a, CosA):
            return mp.cos(self.eval(a.arg, binding))
        if isinstance(a, AtanA):
            return mp.atan(self.eval(a.arg, binding))
        if isinstance(a, PolyBase):
            return self.eval(Expr(a.terms, ()), binding)
        if isinstance(a, RatPow):
            if a.base < 0:
                raise SingularityError("negative base under symbolic power")
            return mp.mpf(a.base.numerator) / a.base.denominator
        if isinstance(a, Func):
            fn = self.funcs.get(a.name)
            if fn is None or any(a.didx):
                raise UnboundSymbolError(
                    "no numeric realization for %s%s" % (a.name, a.didx)
                )
            argval = self.eval(a.args[0], binding)
            return fn(self, argval)
        raise EvalError("cannot evaluate atom %r" % (a,))


# ---------------------------------------------------------------------------
# sampling

@dataclass
class SampleDomain:
    """Per-symbol sampling intervals, parameter constraints, seed and count."""

    intervals: dict = field(default_factory=dict)
    constraints: tuple = ()  # (name, forbidden exact Fraction values...)
    seed: int = DEFAULT_SEED
    npoints: int = DEFAULT_POINTS

    def interval(self, name):
        return self.intervals.get(name, (Fr(1, 4), Fr(4)))


def draw_point(rng, names, domain: SampleDomain):
    point = {}
    forbidden = {}
    for c in domain.constraints:
        forbidden.setdefault(c[0], set()).update(c[1:])
    for name in names:
        lo, hi = domain.interval(name)
        for _ in range(64):
            frac = Fr(rng.randint(0, 960), 960)
            v = lo + (hi - lo) * frac
            if v != 0 and v not in forbidden.get(name, ()):
                break
        point[name] = v
    return point


def sample_points(names, domain: SampleDomain):
    rng = random.Random(domain.seed)
    return [draw_point(rng, names, domain) for _ in range(domain.npoints)]


def free_symbol_names(e: Expr):
    names = set()
    for a in e.all_atoms():
        if isinstance(a, (Param, Var, Jet)):
            names.add(a.name)
    return sorted(names)
