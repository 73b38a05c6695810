"""Jet-space calculus: total derivatives, point fields, second prolongation.

Prolongation uses the characteristic form W = eta - tau*u_t - xi*u_x
throughout; third-order jets appear only transiently and cancel in the
assembled coefficients.
"""

from __future__ import annotations

from dataclasses import dataclass

from .symkernel import (
    Expr,
    Jet,
    JET_BY_NAME,
    VT,
    VU,
    VX,
    atom_expr,
    jet,
    mul,
    add,
    pdiff,
    tdiff,
)
from .symkernel.nf import ZERO


def jet_order(e: Expr) -> int:
    order = 0
    for a in e.all_atoms():
        if isinstance(a, Jet):
            order = max(order, a.order)
    return order


def total_derivative(e: Expr, direction: str, env=None, jet_rules=None) -> Expr:
    """D_t or D_x; input must have jet order <= 2 so output stays <= 3."""
    if jet_order(e) > 2 and jet_rules is None:
        raise ValueError("total_derivative input exceeds jet order 2")
    return tdiff(e, direction, env=env, jet_rules=jet_rules)


@dataclass(frozen=True)
class VectorField:
    """Point symmetry generator tau*d_t + xi*d_x + eta*d_u."""

    tau: Expr
    xi: Expr
    eta: Expr

    def __post_init__(self):
        for c in (self.tau, self.xi, self.eta):
            if jet_order(c) > 0:
                raise ValueError("vector field coefficients contain jets")

    def characteristic(self) -> Expr:
        return self.eta - self.tau * jet("u_t") - self.xi * jet("u_x")

    def scale(self, c) -> "VectorField":
        return VectorField(self.tau * c, self.xi * c, self.eta * c)

    def __add__(self, other: "VectorField") -> "VectorField":
        return VectorField(
            self.tau + other.tau, self.xi + other.xi, self.eta + other.eta
        )


@dataclass(frozen=True)
class EvolutionaryField:
    """eta * d_u with eta allowed to depend on jets up to order 2."""

    eta: Expr

    def __post_init__(self):
        if jet_order(self.eta) > 2:
            raise ValueError("evolutionary coefficient exceeds jet order 2")


@dataclass(frozen=True)
class ProlongedField:
    eta_t: Expr
    eta_x: Expr
    eta_tt: Expr
    eta_tx: Expr
    eta_xx: Expr


def prolong2(q: VectorField, env=None) -> ProlongedField:
    w = q.characteristic()
    wt = tdiff(w, "t", env=env)
    wx = tdiff(w, "x", env=env)
    eta_t = wt + q.tau * jet("u_tt") + q.xi * jet("u_tx")
    eta_x = wx + q.tau * jet("u_tx") + q.xi * jet("u_xx")
    eta_tt = tdiff(wt, "t", env=env) + q.tau * jet("u_ttt") + q.xi * jet("u_ttx")
    eta_tx = tdiff(wt, "x", env=env) + q.tau * jet("u_ttx") + q.xi * jet("u_txx")
    eta_xx = tdiff(wx, "x", env=env) + q.tau * jet("u_txx") + q.xi * jet("u_xxx")
    return ProlongedField(eta_t, eta_x, eta_tt, eta_tx, eta_xx)


def apply_prolonged(q: VectorField, e: Expr, env=None) -> Expr:
    """pr^(2)Q applied to an expression of jet order <= 2."""
    if jet_order(e) > 2:
        raise ValueError("apply_prolonged input exceeds jet order 2")
    pr = prolong2(q, env=env)
    res = (
        q.tau * pdiff(e, VT, env)
        + q.xi * pdiff(e, VX, env)
        + q.eta * pdiff(e, VU, env)
    )
    pieces = (
        (pr.eta_t, "u_t"),
        (pr.eta_x, "u_x"),
        (pr.eta_tt, "u_tt"),
        (pr.eta_tx, "u_tx"),
        (pr.eta_xx, "u_xx"),
    )
    for coeff, jname in pieces:
        d = pdiff(e, JET_BY_NAME[jname], env)
        if not d.is_zero_form():
            res = res + coeff * d
    return res
