"""Point and equivalence transformations.

A PointTransformation stores the forward components (t,x,u) -> (t~,x~,u~)
and, when the casebook needs to move objects back, an explicit inverse whose
components are written in the same three variable names (read as the target
coordinates).  Pullback of first and second jets goes through the
total-derivative change of variables solved as two 2x2 linear systems.
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
    pdiff,
    subs,
    tdiff,
)
from .symkernel.nf import ONE, ZERO, div
from .symkernel.funcspec import FunctionSpec, closed
from .detsys import EquationSpec
from .jetcalc import VectorField, jet_order
from .zero import ZeroVerdict, is_zero


class PullbackError(ValueError):
    pass


@dataclass(frozen=True)
class PointTransformation:
    t_new: Expr
    x_new: Expr
    u_new: Expr
    inverse: "PointTransformation" = None
    chart: str = ""

    def components(self):
        return (self.t_new, self.x_new, self.u_new)

    def require_inverse(self) -> "PointTransformation":
        if self.inverse is None:
            raise PullbackError("transformation has no recorded inverse")
        return self.inverse


IDENTITY = PointTransformation(
    atom_expr(VT), atom_expr(VX), atom_expr(VU)
)
object.__setattr__(IDENTITY, "inverse", IDENTITY)


def compose(outer: PointTransformation, inner: PointTransformation) -> PointTransformation:
    """outer after inner, components in the inner source variables."""
    amap = {VT: inner.t_new, VX: inner.x_new, VU: inner.u_new}
    return PointTransformation(
        subs(outer.t_new, amap), subs(outer.x_new, amap), subs(outer.u_new, amap)
    )


def check_inverse(t: PointTransformation) -> bool:
    both = compose(t.require_inverse(), t)
    return (
        (both.t_new - atom_expr(VT)).is_zero_form()
        and (both.x_new - atom_expr(VX)).is_zero_form()
        and (both.u_new - atom_expr(VU)).is_zero_form()
    )


def jacobian_det(t: PointTransformation, env=None) -> Expr:
    dt_t = tdiff(t.t_new, "t", env)
    dt_x = tdiff(t.x_new, "t", env)
    dx_t = tdiff(t.t_new, "x", env)
    dx_x = tdiff(t.x_new, "x", env)
    return dt_t * dx_x - dt_x * dx_t


def pullback_jets(t: PointTransformation, env=None):
    """Express the target jets through source variables.

    Returns a dict with keys u_t, u_x, u_tt, u_tx, u_xx.  Requires t_new and
    x_new free of u, which holds for every transformation in the casebook
    and keeps the pullback inside jet order 2.
    """
    for comp in (t.t_new, t.x_new):
        if VU in comp.all_atoms() or jet_order(comp) > 0:
            raise PullbackError("pullback exceeds jet order 2")
    j11 = tdiff(t.t_new, "t", env)
    j12 = tdiff(t.x_new, "t", env)
    j21 = tdiff(t.t_new, "x", env)
    j22 = tdiff(t.x_new, "x", env)
    det = j11 * j22 - j12 * j21
    if det.is_zero_form():
        raise PullbackError("Jacobian vanishes identically")

    def solve(rhs_t, rhs_x):
        a = div(rhs_t * j22 - rhs_x * j12, det)
        b = div(j11 * rhs_x - j21 * rhs_t, det)
        return a, b

    p_t, p_x = solve(tdiff(t.u_new, "t", env), tdiff(t.u_new, "x", env))
    p_tt, p_tx = solve(tdiff(p_t, "t", env), tdiff(p_t, "x", env))
    p_xt, p_xx = solve(tdiff(p_x, "t", env), tdiff(p_x, "x", env))
    # the mixed second pullbacks must agree; keep one
    return {
        "u_t": p_t,
        "u_x": p_x,
        "u_tt": p_tt,
        "u_tx": p_tx,
        "u_xx": p_xx,
        "_mixed_alt": p_xt,
    }


def compose_expr(e: Expr, t: PointTransformation, env=None, jets=None) -> Expr:
    """Substitute target coordinates and jets by their source expressions."""
    jets = jets or pullback_jets(t, env)
    amap = {VT: t.t_new, VX: t.x_new, VU: t.u_new}
    for name in ("u_t", "u_x", "u_tt", "u_tx", "u_xx"):
        amap[JET_BY_NAME[name]] = jets[name]
    return subs(e, amap)


@dataclass
class ElementConversion:
    """Source-side expressions of the target elements composed with the map.

    f_of_xnew stands for f_tgt(x_new(x)) written through source symbols, and
    similarly for H, K composed with u_new.  Only needed when the target
    element is opaque or rule-defined; closed forms compose directly.
    """

    f_of_xnew: Expr = None
    H_of_unew: Expr = None
    K_of_unew: Expr = None


def target_delta_composed(tgt: EquationSpec, t: PointTransformation,
                          src_env=None, conv: ElementConversion = None) -> Expr:
    """Delta of the target equation pulled back through the transformation."""
    conv = conv or ElementConversion()
    jets = pullback_jets(t, src_env)

    def elem(spec: FunctionSpec, arg_new: Expr, hint: Expr):
        if hint is not None:
            return hint
        if spec.mode == "closed":
            return subs(spec.body, {spec.var_atom: arg_new})
        raise PullbackError(
            "target element %s needs an explicit conversion" % spec.name
        )

    f_c = elem(tgt.f, t.x_new, conv.f_of_xnew)
    H_c = elem(tgt.H, t.u_new, conv.H_of_unew)
    K_c = elem(tgt.K, t.u_new, conv.K_of_unew)
    # dH~/du~ composed: d/du of the composition divided by du_new/du
    du_new = pdiff(t.u_new, VU, src_env)
    if du_new.is_zero_form():
        raise PullbackError("u_new does not depend on u")
    Hp_c = div(pdiff(H_c, VU, src_env), du_new)
    return (
        f_c * jets["u_tt"]
        - Hp_c * jets["u_x"] ** 2
        - H_c * jets["u_xx"]
        - K_c * jets["u_x"]
    )


def verify_equivalence(src: EquationSpec, tgt: EquationSpec,
                       t: PointTransformation,
                       conv: ElementConversion = None,
                       domain=None, funcs=None):
    """Check Delta_tgt o T = lambda(t,x,u) * Delta_src.

    Returns (verdict, multiplier).  The multiplier is extracted from the
    u_tt coefficients, so it never needs to be guessed.
    """
    env = src.env()
    lhs = target_delta_composed(tgt, t, env, conv)
    rhs = src.delta()
    lam = div(pdiff(lhs, JET_BY_NAME["u_tt"], env),
              pdiff(rhs, JET_BY_NAME["u_tt"], env))
    residual = lhs - lam * rhs
    verdict = is_zero(residual, domain=domain or _default_domain(), funcs=funcs)
    if lam.is_zero_form():
        verdict = ZeroVerdict("NonZero", note="vanishing multiplier")
    return verdict, lam


def _default_domain():
    from .numeric import SampleDomain

    return SampleDomain()


def push_forward_field(q: VectorField, t: PointTransformation, env=None) -> VectorField:
    """Image of a point field under an invertible transformation."""
    inv = t.require_inverse()

    def act(component: Expr) -> Expr:
        val = (
            q.tau * pdiff(component, VT, env)
            + q.xi * pdiff(component, VX, env)
            + q.eta * pdiff(component, VU, env)
        )
        return subs(val, {VT: inv.t_new, VX: inv.x_new, VU: inv.u_new})

    return VectorField(act(t.t_new), act(t.x_new), act(t.u_new))


# ---------------------------------------------------------------------------
# the continuous equivalence group action

def apply_equivalence_group(eq: EquationSpec, eps, parse_fn=None):
    """Finite action t~ = eps4 t + eps1, x~ = eps5 x + eps2, u~ = eps6 u + eps3,
    f~ = eps4^2 eps5^-2 eps7 f, H~ = eps7 H, K~ = eps7 eps5^-1 K.

    eps is a mapping {1: Expr-or-Fraction, ..., 7: ...}; the element maps are
    re-expressed through the inverse point map, so H~(u~) = eps7 H(u).
    Returns (target EquationSpec, PointTransformation).
    """
    from fractions import Fraction
    from .symkernel.nf import lift

    e = {i: lift(eps.get(i, 1 if i >= 4 else 0)) for i in range(1, 8)}
    for i in (4, 5, 6, 7):
        if e[i].is_zero_form():
            raise ValueError("eps%d must be nonzero" % i)
    tv, xv, uv = atom_expr(VT), atom_expr(VX), atom_expr(VU)
    fwd = PointTransformation(
        e[4] * tv + e[1], e[5] * xv + e[2], e[6] * uv + e[3]
    )
    inv = PointTransformation(
        div(tv - e[1], e[4]), div(xv - e[2], e[5]), div(uv - e[3], e[6])
    )
    object.__setattr__(fwd, "inverse", inv)
    object.__setattr__(inv, "inverse", fwd)

    f_scale = e[4] ** 2 * e[5] ** (-2) * e[7]
    nf_body = f_scale * eq.f.value(div(xv - e[2], e[5]))
    nH_body = e[7] * eq.H.value(div(uv - e[3], e[6]))
    nK_body = e[7] * e[5] ** (-1) * eq.K.value(div(uv - e[3], e[6]))
    tgt = EquationSpec(
        closed("f", "x", nf_body),
        closed("H", "u", nH_body),
        closed("K", "u", nK_body),
        constraints=eq.constraints,
    )
    return tgt, fwd


def compose_group_elements(e1: dict, e2: dict) -> dict:
    """Parameters of (action of e2) after (action of e1)."""
    from .symkernel.nf import lift

    a = {i: lift(e1.get(i, 1 if i >= 4 else 0)) for i in range(1, 8)}
    b = {i: lift(e2.get(i, 1 if i >= 4 else 0)) for i in range(1, 8)}
    return {
        1: b[4] * a[1] + b[1],
        2: b[5] * a[2] + b[2],
        3: b[6] * a[3] + b[3],
        4: a[4] * b[4],
        5: a[5] * b[5],
        6: a[6] * b[6],
        7: a[7] * b[7],
    }


# ---------------------------------------------------------------------------
# hodograph-type transformation for wave equations (K = 0)

def hodograph_wave_transform(eq: EquationSpec):
    """t~ = x, x~ = t, u~ = int H du for u_tt = (H(u) u_x)_x.

    The target element is the derivative of the inverse function of the
    antiderivative; for the closed families this is explicit:
    H = e^u      -> u~ = e^u,       H~(u~) = 1/u~
    H = u^mu     -> u~ = u^(mu+1),  H~(u~) = u~^(-mu/(mu+1)) (constants dropped
    as printed; they are absorbed by the equivalence multiplier).
    Returns (target EquationSpec, PointTransformation, ElementConversion).
    """
    if not eq.K.is_identically_zero():
        raise ValueError("hodograph transform needs K = 0")
    from .symkernel import parse

    tv, xv, uv = atom_expr(VT), atom_expr(VX), atom_expr(VU)
    H = eq.H
    if H.mode != "closed":
        raise ValueError("hodograph transform needs a closed H")
    body = H.body
    exp_u = parse("exp(u)")
    if body == exp_u:
        fwd = PointTransformation(xv, tv, exp_u)
        inv = PointTransformation(xv, tv, parse("ln(u)"))
        tgt_H = closed("H", "u", parse("u^(-1)"))
    else:
        mu = _power_exponent(body)
        if mu is None:
            raise ValueError("hodograph transform implemented for e^u and u^mu")
        fwd = PointTransformation(xv, tv, uv ** _shift(mu))
        inv = PointTransformation(xv, tv, uv ** _inv_shift(mu))
        tgt_H = closed("H", "u", uv ** _neg_ratio(mu))
    object.__setattr__(fwd, "inverse", inv)
    object.__setattr__(inv, "inverse", fwd)
    tgt = EquationSpec(eq.f, tgt_H, eq.K, constraints=eq.constraints)
    return tgt, fwd


def _power_exponent(body: Expr):
    """Exponent mu when body is exactly u^mu (mu a parameter expression)."""
    if body.den or len(body.terms) != 1:
        return None
    mono, c = body.terms[0]
    if c != 1 or len(mono) != 1:
        return None
    a, e = mono[0]
    from .symkernel.atoms import Var as VarAtom

    if isinstance(a, VarAtom) and a.name == "u":
        return e
    return None


def _shift(mu):
    from .symkernel.nf import exp_add

    return exp_add(mu, 1)


def _neg_ratio(mu):
    from .symkernel.nf import exp_mul, exp_add, norm_exp
    from .symkernel.nf import const as _c
    from .symkernel import Expr as _E

    m = mu if isinstance(mu, Expr) else _c(mu)
    return norm_exp(div(-m, m + ONE))


def _inv_shift(mu):
    from .symkernel.nf import norm_exp
    from .symkernel.nf import const as _c

    m = mu if isinstance(mu, Expr) else _c(mu)
    return norm_exp(div(ONE, m + ONE))


# ---------------------------------------------------------------------------
# conserved vectors under point transformations

def transform_conserved_vector(density: Expr, flux: Expr,
                               t: PointTransformation, env=None):
    """Proposition-style transport of (T, X) to the target coordinates.

    T^g = (T Dt t~ + X Dx t~) / J,  X^g = (T Dt x~ + X Dx x~) / J with
    J = Dt t~ Dx x~ - Dx t~ Dt x~, then everything re-expressed in the
    target variables through the recorded inverse.
    """
    if jet_order(density) > 1 or jet_order(flux) > 1:
        raise ValueError("conserved vector exceeds jet order 1")
    j11 = tdiff(t.t_new, "t", env)
    j12 = tdiff(t.x_new, "t", env)
    j21 = tdiff(t.t_new, "x", env)
    j22 = tdiff(t.x_new, "x", env)
    det = j11 * j22 - j12 * j21
    if det.is_zero_form():
        raise PullbackError("degenerate change of variables for (T, X)")
    tg = div(density * j11 + flux * j21, det)
    xg = div(density * j12 + flux * j22, det)
    inv = t.require_inverse()
    jets = pullback_jets(inv, env)
    amap = {VT: inv.t_new, VX: inv.x_new, VU: inv.u_new}
    for name in ("u_t", "u_x"):
        amap[JET_BY_NAME[name]] = jets[name]
    return subs(tg, amap), subs(xg, amap)
