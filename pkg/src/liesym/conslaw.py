"""Conserved vectors, divergence residuals, and order-0 characteristics."""

from __future__ import annotations

from dataclasses import dataclass

from .symkernel import Expr, JET_BY_NAME, Jet, pdiff, subs, tdiff
from .symkernel.nf import ZERO, div
from .detsys import EquationSpec
from .jetcalc import jet_order


class CharacteristicError(ValueError):
    pass


@dataclass(frozen=True)
class ConservedVector:
    """Density/flux pair (T, X) of jet order <= 1."""

    density: Expr
    flux: Expr

    def __post_init__(self):
        if jet_order(self.density) > 1 or jet_order(self.flux) > 1:
            raise ValueError("conserved vector exceeds jet order 1")


def divergence(eq: EquationSpec, cv: ConservedVector) -> Expr:
    """D_t T + D_x X without elimination (still contains u_tt)."""
    env = eq.env()
    return tdiff(cv.density, "t", env) + tdiff(cv.flux, "x", env)


def divergence_residual(eq: EquationSpec, cv: ConservedVector) -> Expr:
    """D_t T + D_x X with u_tt eliminated through the solved equation."""
    return subs(divergence(eq, cv), eq.elimination_map())


def characteristic(eq: EquationSpec, cv: ConservedVector) -> Expr:
    """The order-0 multiplier lambda with D_t T + D_x X = lambda * Delta.

    Both sides are degree <= 1 in u_tt, so polynomial division in u_tt is a
    coefficient ratio; the remainder must normalize to zero identically in
    all jets (before any elimination).
    """
    env = eq.env()
    dv = divergence(eq, cv)
    delta = eq.delta()
    utt = JET_BY_NAME["u_tt"]
    lam = div(pdiff(dv, utt, env), pdiff(delta, utt, env))
    if jet_order(lam) > 0:
        raise CharacteristicError("characteristic depends on jet variables")
    remainder = dv - lam * delta
    if not remainder.is_zero_form():
        raise CharacteristicError(
            "no order-0 characteristic: nonzero division remainder"
        )
    return lam


def check_conserved_vector(eq: EquationSpec, cv: ConservedVector):
    """(divergence verdict expression, characteristic or error message)."""
    resid = divergence_residual(eq, cv)
    try:
        lam = characteristic(eq, cv)
        err = None
    except CharacteristicError as exc:
        lam = None
        err = str(exc)
    return resid, lam, err
