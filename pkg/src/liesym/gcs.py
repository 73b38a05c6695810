"""Generalized conditional symmetries and functional separation.

The evolutionary field V = (u_xt + g(u) u_x u_t) d_u governs separation in
the form q(u) = phi(t) + psi(x) with g = q''/q'.  Restriction to the joint
manifold of the equation (f = 1) and the invariant-surface condition uses a
fixed elimination order: u_tx from the condition, u_tt from the equation,
then the consequences u_txx, u_ttx, u_ttt, and finally u_xxx from the
cross-compatibility of the two u_ttx routes.
"""

from __future__ import annotations

from dataclasses import dataclass

from .symkernel import (
    Expr,
    Func,
    JET_BY_NAME,
    VT,
    VU,
    VX,
    atom_expr,
    jet,
    pdiff,
    subs,
    tdiff,
)
from .symkernel.nf import ONE, ZERO, div
from .detsys import EquationSpec
from .zero import ZeroVerdict, is_zero


class EliminationError(ValueError):
    pass


def gcs_system_residuals(h: Expr, k: Expr, g: Expr):
    """The five printed determining equations for (H, K, g), ' = d/du."""

    def d(e):
        return pdiff(e, VU)

    h1, h2, h3 = d(h), d(d(h)), d(d(d(h)))
    k1, k2 = d(k), d(d(k))
    g1, g2 = d(g), d(d(g))
    eq1 = h2 - g * h1 - div(h1 * h1, h)
    eq2 = k1 - div(k * h1, h)
    eq3 = g2 - 2 * g * g1 + (g * g - g1) * div(h1, h)
    eq4 = (
        (2 * g * g1 - g2) * h
        + (g * g - g1) * h1
        - 2 * g * h2
        - 2 * g1 * h1
        + h3
        + g * h2
        - (g * h1 + h2) * div(h1, h)
        + h1 * (3 * g1 - 2 * g * g)
    )
    eq5 = k2 - g1 * k - (g * k + k1) * div(h1, h) + k * (3 * g1 - 2 * g * g)
    return [
        ("H'' - g H' - H'^2/H", eq1),
        ("K' - K H'/H", eq2),
        ("g'' - 2 g g' + (g^2 - g') H'/H", eq3),
        ("third-order H equation", eq4),
        ("second-order K equation", eq5),
    ]


def gcs_elimination_rules(h: Expr, k: Expr, g: Expr):
    """The substitution table for the manifold E (f=1) intersect W.

    u_tx comes from the invariant-surface condition, u_tt from the equation,
    then the total-derivative consequences u_txx, u_txxx (condition side) and
    u_ttx, u_ttt (equation side, keeping u_xxx).  The cross-compatibility of
    the two u_ttx routes determines u_xxx; it is returned separately because
    restricting with it is the LAST step of the computation (using it inside
    the prolongation would erase the obstruction the criterion measures).
    """
    u_t, u_x, u_xx = jet("u_t"), jet("u_x"), jet("u_xx")
    h1 = pdiff(h, VU)
    r_tx = -(g * u_x * u_t)
    r_tt = h1 * u_x ** 2 + h * u_xx + k * u_x
    rules = {(1, 1): r_tx, (2, 0): r_tt}
    rules[(1, 2)] = tdiff(r_tx, "x", jet_rules=rules)
    rules[(1, 3)] = tdiff(rules[(1, 2)], "x", jet_rules=rules)
    rules[(2, 1)] = tdiff(r_tt, "x", jet_rules=rules)
    rules[(3, 0)] = tdiff(r_tt, "t", jet_rules=rules)
    r_ttx_w = tdiff(r_tx, "t", jet_rules=rules)
    uxxx = JET_BY_NAME["u_xxx"]
    compat = rules[(2, 1)] - r_ttx_w
    coef = pdiff(compat, uxxx)
    if coef.is_zero_form():
        raise EliminationError("compatibility does not determine u_xxx")
    r_xxx = div(r_ttx_w - (rules[(2, 1)] - coef * atom_expr(uxxx)), coef)
    return rules, r_xxx


def _sigma(e: Expr, rules) -> Expr:
    amap = {}
    for (nt, nx), val in rules.items():
        if nt + nx <= 3:
            amap[JET_BY_NAME["u_" + "t" * nt + "x" * nx]] = val
    prev = None
    while prev != e:
        prev = e
        e = subs(e, amap)
    return e


_GENERAL_RESIDUAL = None


def general_full_residual() -> Expr:
    """pr V^(2)(Delta) on the joint manifold for formal H(u), K(u), g(u).

    Computed once; concrete triples substitute their closed forms into this
    21-term polynomial in (u_t, u_x, u_xx) afterwards.
    """
    global _GENERAL_RESIDUAL
    if _GENERAL_RESIDUAL is not None:
        return _GENERAL_RESIDUAL
    from .symkernel import func

    u = atom_expr(VU)
    h, k, g = func("H", u), func("K", u), func("g", u)
    rules, r_xxx = gcs_elimination_rules(h, k, g)
    u_t, u_x, u_xx = jet("u_t"), jet("u_x"), jet("u_xx")
    eta = jet("u_tx") + g * u_x * u_t
    eta_t = _sigma(tdiff(eta, "t", jet_rules=rules), rules)
    eta_x = _sigma(tdiff(eta, "x", jet_rules=rules), rules)
    eta_tt = _sigma(tdiff(eta_t, "t", jet_rules=rules), rules)
    eta_xx = _sigma(tdiff(eta_x, "x", jet_rules=rules), rules)
    h1, h2 = pdiff(h, VU), pdiff(pdiff(h, VU), VU)
    k1 = pdiff(k, VU)
    ddu = -(h2 * u_x ** 2 + h1 * u_xx + k1 * u_x)
    ddux = -(2 * h1 * u_x + k)
    residual = eta_tt + _sigma(eta, rules) * ddu + eta_x * ddux - h * eta_xx
    residual = _sigma(residual, rules)
    residual = subs(residual, {JET_BY_NAME["u_xxx"]: r_xxx})
    _GENERAL_RESIDUAL = residual
    return residual


def gcs_full_residual(eq: EquationSpec, g: Expr) -> ZeroVerdict:
    """pr V^(2)(Delta) restricted to the joint manifold, f identically 1."""
    if not (eq.f.mode == "closed" and (eq.f.body - ONE).is_zero_form()):
        raise ValueError("the separation subclass has f = 1")
    if eq.H.mode != "closed" or eq.K.mode != "closed":
        raise ValueError("gcs_full_residual needs closed H and K")
    fmap = {
        "H": (VU, eq.H.body),
        "K": (VU, eq.K.body),
        "g": (VU, g),
    }
    residual = subs(general_full_residual(), fmap=fmap)
    return is_zero(residual, mode="symbolic")


# ---------------------------------------------------------------------------
# functional separation

@dataclass(frozen=True)
class SeparationSpec:
    """q(u) = phi(t) + psi(x) data: the composition map u -> u(phi, psi),
    solved second-derivative (or squared-first-derivative) rules for phi and
    psi, and the consistency pair (q, g)."""

    u_of: Expr  # u expressed through phi(t), psi(x)
    phi_rules: dict  # substitutions for phi-derivative atoms
    psi_rules: dict
    q: Expr = None  # q(u), for the g = q''/q' consistency check
    g: Expr = None

    def consistency(self) -> Expr:
        if self.q is None or self.g is None:
            return ZERO
        q1 = pdiff(self.q, VU)
        q2 = pdiff(q1, VU)
        return self.g * q1 - q2


def phi_atom(order=0):
    return Func("phi", (atom_expr(VT),), (order,))


def psi_atom(order=0):
    return Func("psi", (atom_expr(VX),), (order,))


def even_power_reduce(e: Expr, atom: Func, square_value: Expr) -> Expr:
    """Replace atom^(2k+r) by square_value^k * atom^r for integer powers."""
    from .symkernel import nf

    from fractions import Fraction as _Fr

    changed = ZERO
    keep = {}
    for mono, c in e.terms:
        hit = None
        for a, ex in mono:
            if a == atom and isinstance(ex, int) and ex >= 2:
                hit = (a, ex)
                break
        if hit is None:
            keep[mono] = keep.get(mono, _Fr(0)) + c
            continue
        a, ex = hit
        rest = dict(mono)
        rest[a] = ex % 2
        m2, c2, pend = nf._canon_mono(rest, c)
        piece = nf._make({m2: c2}, {})
        for p in pend:
            piece = piece * p
        piece = piece * square_value ** (ex // 2)
        changed = changed + piece
    base = nf._make(keep, dict(e.den))
    out = base + changed * _den_inverse(e)
    if out != e:
        return even_power_reduce(out, atom, square_value)
    return out


def _den_inverse(e: Expr) -> Expr:
    from .symkernel import nf

    if not e.den:
        return ONE
    inv = ONE
    for f, m in e.den:
        inv = inv * nf._pow_int(Expr(f, ()), -m)
    return inv


def verify_separation(eq: EquationSpec, spec: SeparationSpec,
                      domain=None, funcs=None) -> ZeroVerdict:
    """Substitute u(phi, psi) into Delta and reduce modulo the ODE rules."""
    cons = spec.consistency()
    if not cons.is_zero_form():
        return ZeroVerdict("NonZero", note="q/g consistency fails")
    from .reduction import substitute_profile

    residual = substitute_profile(eq, spec.u_of)
    for _ in range(4):
        new = subs(residual, spec.phi_rules)
        new = subs(new, spec.psi_rules)
        if new == residual:
            break
        residual = new
    return is_zero(residual, domain=domain, funcs=funcs)


def separation_square_rules(sq_phi: Expr, sq_psi: Expr):
    """Rules for phi'^2 = P(phi), psi'^2 = Q(psi) quadrature separations.

    Returns (phi_rules, psi_rules, post) where post reduces leftover even
    powers of phi' and psi'.
    """
    phi1, psi1 = phi_atom(1), psi_atom(1)
    phi0, psi0 = phi_atom(0), psi_atom(0)
    phi2 = div(pdiff(sq_phi, phi0), 2)  # phi'' = P'(phi)/2
    psi2 = div(pdiff(sq_psi, psi0), 2)
    phi_rules = {phi_atom(2): phi2}
    psi_rules = {psi_atom(2): psi2}

    def post(e: Expr) -> Expr:
        e = even_power_reduce(e, phi1, sq_phi)
        return even_power_reduce(e, psi1, sq_psi)

    return phi_rules, psi_rules, post


def verify_square_separation(eq: EquationSpec, u_of: Expr, sq_phi: Expr,
                             sq_psi: Expr) -> ZeroVerdict:
    """Separation with quadrature relations phi'^2 = P, psi'^2 = Q."""
    from .reduction import substitute_profile

    phi_rules, psi_rules, post = separation_square_rules(sq_phi, sq_psi)
    residual = substitute_profile(eq, u_of)
    for _ in range(6):
        new = subs(subs(residual, phi_rules), psi_rules)
        new = post(new)
        if new == residual:
            break
        residual = new
    return is_zero(residual, mode="symbolic")


# ---------------------------------------------------------------------------
# case C scaffold: hh'' - h'^2 = a h' + b and its printed branch relations

def case_c_h_ode(h: Expr, a: Expr, b: Expr) -> Expr:
    h1 = pdiff(h, VU)
    h2 = pdiff(h1, VU)
    return h * h2 - h1 * h1 - a * h1 - b


def case_c_branch_residual(relation: Expr, a: Expr, b_sub: Expr,
                           solve_atoms: dict = None) -> Expr:
    """Differentiate a printed branch relation and reduce it.

    relation R(h, h') = 0 is differentiated once in u; h'' is replaced via
    h'' = (h'^2 + a h' + b)/h, b by its discriminant parametrization, and
    any atoms named in solve_atoms (e.g. the exp factor solved from the
    relation itself) are substituted.  The result must vanish.
    """
    from .symkernel.atoms import Param
    from .symkernel import param

    h1a = Func("h", (atom_expr(VU),), (1,))
    h2a = Func("h", (atom_expr(VU),), (2,))
    h = atom_expr(Func("h", (atom_expr(VU),), (0,)))
    h1 = atom_expr(h1a)
    b = param("b")
    d_rel = pdiff(relation, VU)
    hpp = div(h1 * h1 + a * h1 + b, h)
    d_rel = subs(d_rel, {h2a: hpp})
    if solve_atoms:
        d_rel = subs(d_rel, solve_atoms)
        d_rel = subs(d_rel, solve_atoms)
    if b_sub is not None:
        d_rel = subs(d_rel, {Param("b"): b_sub})
    return d_rel


def case_c_H_match(h: Expr, H: Expr, a: Expr, b: Expr) -> Expr:
    """H(u) must equal -(p^2 + a p + b)/h^2 with p = h'."""
    h1 = pdiff(h, VU)
    return H * h * h + (h1 * h1 + a * h1 + b)
