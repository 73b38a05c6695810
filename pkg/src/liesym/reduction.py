"""Lie reductions and exact-solution verification.

An ansatz record carries u = A(phi(omega), t, x) with omega(t, x); reduce()
substitutes it into the equation and matches the residual against the
recorded reduced ODE up to a nonzero factor m(t, x).  Solutions come in
three kinds: closed forms, traveling-wave profiles defined through a
first-order quadrature rule phi' = s(phi), and functionally separated forms
(delegated to the gcs module).
"""

from __future__ import annotations

from dataclasses import dataclass

from .symkernel import (
    Expr,
    Func,
    JET_BY_NAME,
    VOMEGA,
    VT,
    VU,
    VX,
    atom_expr,
    pdiff,
    subs,
    tdiff,
)
from .symkernel.nf import ZERO, div
from .detsys import EquationSpec
from .jetcalc import VectorField
from .zero import ZeroVerdict, is_zero


class ReductionError(ValueError):
    pass


def substitute_profile(eq: EquationSpec, u_expr: Expr) -> Expr:
    """Residual of Delta with u replaced by a concrete jet-free expression."""
    env = eq.env()
    amap = {VU: u_expr}
    derivs = {
        "u_t": tdiff(u_expr, "t", env),
        "u_x": tdiff(u_expr, "x", env),
    }
    derivs["u_tt"] = tdiff(derivs["u_t"], "t", env)
    derivs["u_tx"] = tdiff(derivs["u_t"], "x", env)
    derivs["u_xx"] = tdiff(derivs["u_x"], "x", env)
    for name, val in derivs.items():
        amap[JET_BY_NAME[name]] = val
    return subs(eq.delta(), amap)


def check_ansatz_invariance(q: VectorField, u_expr: Expr, env=None) -> Expr:
    """Q(u - A) restricted to u = A; zero iff the ansatz is Q-invariant."""
    a_t = tdiff(u_expr, "t", env)
    a_x = tdiff(u_expr, "x", env)
    resid = q.eta - q.tau * a_t - q.xi * a_x
    return subs(resid, {VU: u_expr})


def reduce(eq: EquationSpec, u_template: Expr, omega_expr: Expr,
           expected_ode: Expr):
    """Substitute the ansatz and match the reduced ODE.

    u_template and expected_ode are written over phi(omega) with omega a
    plain variable; omega_expr is the symmetry invariant omega(t, x).
    Returns (verdict, factor) where factor is the multiplier m(t, x) carrying
    residual = m * R; the match is checked by cross-multiplying the phi''
    coefficients so no normalization of m is needed.
    """
    u_expr = subs(u_template, {VOMEGA: omega_expr})
    residual = substitute_profile(eq, u_expr)
    expected = subs(expected_ode, {VOMEGA: omega_expr})
    phi2 = Func("phi", (omega_expr,), (2,))
    c_res = pdiff(residual, phi2)
    c_exp = pdiff(expected, phi2)
    if c_exp.is_zero_form():
        raise ReductionError("expected ODE has no phi'' term")
    if c_res.is_zero_form():
        return ZeroVerdict("NonZero", note="residual lost phi''"), ZERO
    cross = residual * c_exp - expected * c_res
    verdict = is_zero(cross, mode="symbolic")
    factor = div(c_res, c_exp)
    return verdict, factor


@dataclass(frozen=True)
class QuadratureRule:
    """phi'(omega) = value; value is written over phi(omega) and omega."""

    value: Expr

    def derivative_map(self, omega_expr: Expr, env=None):
        """Substitutions for phi'(omega_expr) and phi''(omega_expr)."""
        phi0 = Func("phi", (atom_expr(VOMEGA),), (0,))
        phi1 = Func("phi", (atom_expr(VOMEGA),), (1,))
        s = self.value
        # d(phi')/domega = ds/dphi * phi' + ds/domega, with phi' -> s
        ds = pdiff(s, phi0, env) * s + pdiff(s, VOMEGA, env)
        s_c = subs(subs(s, {phi1: s}), {VOMEGA: omega_expr})
        ds_c = subs(subs(ds, {phi1: s}), {VOMEGA: omega_expr})
        return {
            Func("phi", (omega_expr,), (1,)): s_c,
            Func("phi", (omega_expr,), (2,)): ds_c,
        }


def verify_profile_solution(eq: EquationSpec, u_template: Expr,
                            omega_expr: Expr, rule: QuadratureRule,
                            domain=None, funcs=None) -> ZeroVerdict:
    """Verify u = A(phi(omega), t, x) with phi defined by phi' = s(phi)."""
    u_expr = subs(u_template, {VOMEGA: omega_expr})
    residual = substitute_profile(eq, u_expr)
    amap = rule.derivative_map(omega_expr, eq.env())
    residual = subs(residual, amap)
    # second pass: the phi'' substitution may reintroduce phi'
    residual = subs(residual, amap)
    return is_zero(residual, domain=domain, funcs=funcs)


def verify_closed_solution(eq: EquationSpec, u_expr: Expr,
                           domain=None, funcs=None) -> ZeroVerdict:
    residual = substitute_profile(eq, u_expr)
    return is_zero(residual, domain=domain, funcs=funcs)
