"""Derivatives and substitution over normal forms.

Partial derivatives treat jet coordinates as independent symbols; total
derivatives move jets up one order and may consult a rule table for jets
that would exceed order 3 (used by the manifold-restricted eliminations).
Function symbols differentiate through an environment of rules, so the same
name can stand for different concrete functions in different equations.
"""

from __future__ import annotations

from fractions import Fraction

from .atoms import (
    AtanA,
    Atom,
    CosA,
    ExpA,
    Func,
    Jet,
    LnA,
    Param,
    PolyBase,
    RatPow,
    SinA,
    Var,
    VT,
    VU,
    VX,
)
from . import nf
from .nf import Expr, ONE, ZERO, add, atom_expr, const, div, k_atan, k_cos, k_exp, k_ln, k_sin, mul, neg, powe

Fr = Fraction


class JetOrderError(ValueError):
    pass


class CyclicBindingError(ValueError):
    pass


# ---------------------------------------------------------------------------
# function rules

class FuncRule:
    """Base class: how a named single-argument symbol differentiates."""

    def derivative(self, name, arg, env):
        raise NotImplementedError


class ClosedFormRule(FuncRule):
    """name(v) := body; the symbol may still appear opaquely (e.g. IH)."""

    def __init__(self, var: Atom, body: Expr):
        self.var = var
        self.body = body

    def value(self, arg, env):
        return subs(self.body, {self.var: arg})

    def derivative(self, name, arg, env):
        d = pdiff(self.body, self.var, env)
        return subs(d, {self.var: arg})


class LogDerivativeRule(FuncRule):
    """name' = ratio * name, with ratio a rational expression in var."""

    def __init__(self, var: Atom, ratio: Expr):
        self.var = var
        self.ratio = ratio

    def derivative(self, name, arg, env):
        r = subs(self.ratio, {self.var: arg})
        return mul(r, atom_expr(Func(name, (arg,), (0,))))


class AntiderivRule(FuncRule):
    """name' = target(arg); the defining rule of IH and IK."""

    def __init__(self, target: str):
        self.target = target

    def derivative(self, name, arg, env):
        rule = (env or {}).get(self.target)
        if isinstance(rule, ClosedFormRule):
            return rule.value(arg, env)
        return atom_expr(Func(self.target, (arg,), (0,)))


# ---------------------------------------------------------------------------
# derivations

def pdiff(e: Expr, v: Atom, env=None) -> Expr:
    """Partial derivative with respect to a base variable or parameter."""
    return _derive(e, lambda a: _datom_partial(a, v, env), v, env)


def tdiff(e: Expr, direction: str, env=None, jet_rules=None) -> Expr:
    """Total derivative D_t or D_x."""
    if direction not in ("t", "x"):
        raise ValueError("direction must be 't' or 'x'")
    v = VT if direction == "t" else VX
    return _derive(e, lambda a: _datom_total(a, direction, env, jet_rules), v, env)


def _derive(e: Expr, datom, v, env) -> Expr:
    total = _derive_terms(e.terms, datom, v, env)
    if e.den:
        inv_den = nf.invert(_den_expr(e.den))
        total = mul(total, inv_den)
        for f, m in e.den:
            dfac = _derive_terms(f, datom, v, env)
            if not dfac.is_zero_form():
                total = add(total, mul(const(-m), mul(e, div(dfac, Expr(f, ())))))
    return total


def _den_expr(den):
    out = ONE
    for f, m in den:
        out = mul(out, nf._pow_int(Expr(f, ()), m))
    return out


def _derive_terms(terms, datom, v, env) -> Expr:
    total = ZERO
    for mono, c in terms:
        for i, (a, ex) in enumerate(mono):
            da = datom(a)
            if not da.is_zero_form():
                rest = dict(mono)
                rest[a] = nf.exp_add(ex, -1)
                base = nf._make({(): c}, {})
                m2, c2, pend = nf._canon_mono(rest, c)
                piece = nf._make({m2: c2}, {}) if c2 else ZERO
                for p in pend:
                    piece = mul(piece, p)
                piece = mul(piece, mul(_exp_factor(ex), da))
                total = add(total, piece)
            if isinstance(ex, Expr):
                dex = _derive(ex, datom, v, env)
                if not dex.is_zero_form():
                    term_e = nf._make({mono: c}, {})
                    total = add(total, mul(term_e, mul(dex, _ln_atom(a))))
    return total


def _exp_factor(ex):
    if isinstance(ex, Expr):
        return ex
    return const(ex)


def _ln_atom(a: Atom) -> Expr:
    if isinstance(a, ExpA):
        return a.arg
    if isinstance(a, RatPow):
        return k_ln(const(a.base))
    if isinstance(a, PolyBase):
        return k_ln(Expr(a.terms, ()))
    return k_ln(atom_expr(a))


def _datom_partial(a: Atom, v: Atom, env) -> Expr:
    if a == v:
        return ONE
    if isinstance(a, (Param, Var, Jet, RatPow)):
        return ZERO
    return _datom_chain(a, lambda sub: _derive(sub, lambda b: _datom_partial(b, v, env), v, env), env)


def _datom_total(a: Atom, direction: str, env, jet_rules) -> Expr:
    if isinstance(a, Var):
        if (a is VT or a.name == "t") and direction == "t":
            return ONE
        if (a is VX or a.name == "x") and direction == "x":
            return ONE
        if a.name == "u":
            return _jet_expr(1 if direction == "t" else 0, 1 if direction == "x" else 0, jet_rules)
        return ZERO
    if isinstance(a, Jet):
        nt = a.nt + (1 if direction == "t" else 0)
        nx = a.nx + (1 if direction == "x" else 0)
        return _jet_expr(nt, nx, jet_rules)
    if isinstance(a, (Param, RatPow)):
        return ZERO
    return _datom_chain(a, lambda sub: _derive(sub, lambda b: _datom_total(b, direction, env, jet_rules), None, env), env)


def _jet_expr(nt, nx, jet_rules) -> Expr:
    if jet_rules is not None and (nt, nx) in jet_rules:
        return jet_rules[(nt, nx)]
    if nt + nx > 3:
        raise JetOrderError("jet order %d exceeds 3" % (nt + nx))
    return atom_expr(Jet(nt, nx))


def _datom_chain(a: Atom, darg, env) -> Expr:
    if isinstance(a, ExpA):
        return mul(darg(a.arg), atom_expr(a))
    if isinstance(a, LnA):
        return div(darg(a.arg), a.arg)
    if isinstance(a, SinA):
        return mul(darg(a.arg), k_cos(a.arg))
    if isinstance(a, CosA):
        return neg(mul(darg(a.arg), k_sin(a.arg)))
    if isinstance(a, AtanA):
        return div(darg(a.arg), add(ONE, mul(a.arg, a.arg)))
    if isinstance(a, PolyBase):
        return darg(Expr(a.terms, ()))
    if isinstance(a, Func):
        total = ZERO
        for i, arg in enumerate(a.args):
            d = darg(arg)
            if d.is_zero_form():
                continue
            total = add(total, mul(d, _func_partial(a, i, env)))
        return total
    raise TypeError("cannot differentiate atom %r" % (a,))


def _func_partial(a: Func, i: int, env) -> Expr:
    rule = (env or {}).get(a.name)
    if rule is not None and len(a.args) == 1:
        if any(a.didx):
            raise NormError(
                "ruled symbol %s carries a formal derivative index" % a.name
            )
        return rule.derivative(a.name, a.args[0], env)
    didx = list(a.didx)
    didx[i] += 1
    return atom_expr(Func(a.name, a.args, tuple(didx)))


class NormError(ValueError):
    pass


# ---------------------------------------------------------------------------
# substitution

def subs(e: Expr, amap=None, fmap=None) -> Expr:
    """Simultaneous substitution followed by normalization.

    amap maps atoms to expressions; fmap maps single-argument function
    names to (var, template) pairs so that name^(k)(A) becomes
    (d^k template / d var^k) evaluated at A.
    """
    amap = amap or {}
    fmap = fmap or {}
    if amap:
        _check_acyclic(amap)
    return _rebuild(e, amap, fmap)


def _check_acyclic(amap):
    # substitution is one-pass simultaneous, so self-references are fine
    # (x -> exp(-x)); only cycles through distinct keys are ambiguous
    keys = set(amap.keys())
    edges = {}
    for k, v in amap.items():
        hit = (v.all_atoms() & keys) - {k} if isinstance(v, Expr) else set()
        edges[k] = hit
    state = {}

    def visit(n):
        st = state.get(n)
        if st == 1:
            raise CyclicBindingError("cyclic binding through %r" % (n,))
        if st == 2:
            return
        state[n] = 1
        for m in edges.get(n, ()):
            visit(m)
        state[n] = 2

    for n in edges:
        visit(n)


def _rebuild(e: Expr, amap, fmap) -> Expr:
    num = _rebuild_terms(e.terms, amap, fmap)
    if not e.den:
        return num
    for f, m in e.den:
        fv = _rebuild_terms(f, amap, fmap)
        num = mul(num, powe(fv, -m))
    return num


def _rebuild_terms(terms, amap, fmap) -> Expr:
    total = ZERO
    for mono, c in terms:
        piece = const(c)
        for a, ex in mono:
            if isinstance(ex, Expr):
                ex = nf.norm_exp(_rebuild(ex, amap, fmap))
            base = _rebuild_atom(a, amap, fmap)
            piece = mul(piece, powe(base, ex))
        total = add(total, piece)
    return total


def _rebuild_atom(a: Atom, amap, fmap) -> Expr:
    if a in amap:
        return amap[a]
    if isinstance(a, (Param, Var, Jet, RatPow)):
        return atom_expr(a)
    if isinstance(a, ExpA):
        return k_exp(_rebuild(a.arg, amap, fmap))
    if isinstance(a, LnA):
        return k_ln(_rebuild(a.arg, amap, fmap))
    if isinstance(a, SinA):
        return k_sin(_rebuild(a.arg, amap, fmap))
    if isinstance(a, CosA):
        return k_cos(_rebuild(a.arg, amap, fmap))
    if isinstance(a, AtanA):
        return k_atan(_rebuild(a.arg, amap, fmap))
    if isinstance(a, PolyBase):
        return _rebuild(Expr(a.terms, ()), amap, fmap)
    if isinstance(a, Func):
        args = tuple(_rebuild(arg, amap, fmap) for arg in a.args)
        if a.name in fmap:
            var, template = fmap[a.name]
            if len(a.args) != 1:
                raise NormError("function template for multi-argument symbol")
            body = template
            for _ in range(a.didx[0]):
                body = pdiff(body, var)
            return subs(body, {var: args[0]})
        na = Func(a.name, args, a.didx)
        if na in amap:
            return amap[na]
        return atom_expr(na)
    raise TypeError("cannot rebuild atom %r" % (a,))


# convenience builders used across the package

T = atom_expr(VT)
X = atom_expr(VX)
U = atom_expr(VU)


def jet(name: str) -> Expr:
    from .atoms import JET_BY_NAME

    return atom_expr(JET_BY_NAME[name])


def param(name: str) -> Expr:
    return atom_expr(Param(name))


def func(name: str, *args, didx=None) -> Expr:
    didx = didx or (0,) * len(args)
    return atom_expr(Func(name, tuple(args), tuple(didx)))
