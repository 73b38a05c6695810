"""Invariance residuals, determining systems, and equivalence-algebra checks
for the class f(x) u_tt = (H(u) u_x)_x + K(u) u_x.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product as iproduct

from .symkernel import (
    Expr,
    Func,
    Jet,
    JET_BY_NAME,
    Param,
    VT,
    VU,
    VX,
    atom_expr,
    func,
    jet,
    mul,
    add,
    neg,
    param,
    parse,
    pdiff,
    sprint,
    subs,
    tdiff,
)
from .symkernel.nf import ONE, ZERO, div
from .symkernel.funcspec import FunctionSpec, closed, opaque
from .symkernel.calculus import AntiderivRule
from .jetcalc import VectorField, apply_prolonged, jet_order

Fr = Fraction


@dataclass(frozen=True)
class EquationSpec:
    """One member of the class: the triple (f, H, K) plus parameter predicates."""

    f: FunctionSpec
    H: FunctionSpec
    K: FunctionSpec
    constraints: tuple = ()

    def __post_init__(self):
        if self.f.is_identically_zero() or self.H.is_identically_zero():
            raise ValueError("f(x)*H(u) must not vanish identically")
        if self.H.is_const() and self.K.is_const():
            raise ValueError("(H_u, K_u) = (0, 0): equation is linear")

    def env(self):
        e = {"IH": AntiderivRule("H"), "IK": AntiderivRule("K")}
        for spec in (self.f, self.H, self.K):
            r = spec.rule()
            if r is not None:
                e[spec.name] = r
        return e

    def fx(self) -> Expr:
        return self.f.value(atom_expr(VX))

    def Hu(self) -> Expr:
        return self.H.value(atom_expr(VU))

    def Ku(self) -> Expr:
        return self.K.value(atom_expr(VU))

    def delta(self) -> Expr:
        """f*u_tt - (H u_x)_x - K u_x as a normalized expression."""
        env = self.env()
        flux = tdiff(self.Hu() * jet("u_x"), "x", env=env)
        return self.fx() * jet("u_tt") - flux - self.Ku() * jet("u_x")

    def utt_solved(self) -> Expr:
        env = self.env()
        flux = tdiff(self.Hu() * jet("u_x"), "x", env=env)
        return div(flux + self.Ku() * jet("u_x"), self.fx())

    def elimination_map(self):
        """Substitutions for u_tt and its first differential consequences."""
        env = self.env()
        utt = self.utt_solved()
        rules = {(2, 0): utt}
        uttx = tdiff(utt, "x", env=env, jet_rules=rules)
        uttt = tdiff(utt, "t", env=env, jet_rules=rules)
        amap = {
            JET_BY_NAME["u_ttx"]: uttx,
            JET_BY_NAME["u_ttt"]: uttt,
            JET_BY_NAME["u_tt"]: utt,
        }
        return amap

    def eliminate(self, e: Expr) -> Expr:
        return subs(e, self.elimination_map())


@dataclass
class DeterminingSystem:
    """Coefficient equations of the split residual, one per jet monomial."""

    equations: list  # list of (label, Expr)

    def exprs(self):
        return [e for (_l, e) in self.equations]

    def labels(self):
        return [l for (l, _e) in self.equations]

    def is_trivial(self) -> bool:
        return all(e.is_zero_form() for _l, e in self.equations)


def invariance_residual(eq: EquationSpec, q: VectorField) -> Expr:
    """pr^(2)Q(Delta) with u_tt (and consequences) eliminated."""
    env = eq.env()
    r = apply_prolonged(q, eq.delta(), env=env)
    return subs(r, eq.elimination_map())


def split_residual(residual: Expr) -> DeterminingSystem:
    """Split a residual polynomial in the jets into coefficient equations."""
    groups = {}
    for mono, c in residual.terms:
        jets = []
        rest = []
        for a, e in mono:
            if isinstance(a, Jet):
                if not isinstance(e, int) or e < 0:
                    raise ValueError("residual is not polynomial in the jets")
                jets.append((a, e))
            else:
                rest.append((a, e))
        jkey = tuple(sorted(jets, key=lambda p: p[0].key))
        groups.setdefault(jkey, {})[tuple(rest)] = c
    if residual.den:
        for f, _m in residual.den:
            for mono, _c in f:
                if any(isinstance(a, Jet) for a, _e in mono):
                    raise ValueError("jet variables in residual denominator")
    from .symkernel.nf import _make

    eqs = []
    for jkey in sorted(groups, key=lambda kk: tuple(a.key for a, _ in kk)):
        coeff = _make(groups[jkey], dict(residual.den))
        label = _jet_label(jkey)
        eqs.append((label, coeff))
    return DeterminingSystem(eqs)


def _jet_label(jkey):
    if not jkey:
        return "1"
    return "*".join(
        a.name if e == 1 else "%s^%d" % (a.name, e) for a, e in jkey
    )


# ---------------------------------------------------------------------------
# the generic determining system and its integrated form

def generic_symbol_field() -> VectorField:
    t, x, u = atom_expr(VT), atom_expr(VX), atom_expr(VU)
    return VectorField(
        func("tau", t, x, u), func("xi", t, x, u), func("eta", t, x, u)
    )


def generic_class_equation() -> EquationSpec:
    return EquationSpec(opaque("f", "x"), opaque("H", "u"), opaque("K", "u"))


def generic_determining_system() -> DeterminingSystem:
    """Split residual for fully arbitrary f, H, K and unknown tau, xi, eta."""
    eq = generic_class_equation()
    return split_residual(invariance_residual(eq, generic_symbol_field()))


def verify_integrated_form():
    """Check the integrated ansatz against the non-classifying equations.

    tau = tau(t), xi = xi(x), eta = (tau_t/2 + alphafun(x)) u + eta0(t,x)
    must annihilate tau_x = tau_u = xi_t = xi_u = eta_uu = 0 and
    2 eta_tu = tau_tt identically.
    """
    t, x, u = atom_expr(VT), atom_expr(VX), atom_expr(VU)
    tau = func("tau", t, x, u)
    xi = func("xi", t, x, u)
    eta = func("eta", t, x, u)
    ansatz = {
        Func("tau", (t, x, u), (0, 0, 0)): func("phi", t),
        Func("xi", (t, x, u), (0, 0, 0)): func("psi", x),
        Func("eta", (t, x, u), (0, 0, 0)): (
            (pdiff(func("phi", t), VT) / 2 + func("alphafun", x)) * u
            + func("eta0", t, x)
        ),
    }
    checks = [
        ("tau_x", pdiff(tau, VX)),
        ("tau_u", pdiff(tau, VU)),
        ("xi_t", pdiff(xi, VT)),
        ("xi_u", pdiff(xi, VU)),
        ("eta_uu", pdiff(pdiff(eta, VU), VU)),
        ("2*eta_tu - tau_tt", 2 * pdiff(pdiff(eta, VT), VU) - pdiff(pdiff(tau, VT), VT)),
    ]
    return [(label, _apply_unknown_ansatz(e, ansatz)) for label, e in checks]


def _apply_unknown_ansatz(e: Expr, ansatz) -> Expr:
    """Substitute shaped unknowns into an expression with formal tau/xi/eta jets."""
    amap = {}
    for a in e.all_atoms():
        if isinstance(a, Func) and a.name in ("tau", "xi", "eta"):
            base = Func(a.name, a.args, (0, 0, 0))
            if base not in ansatz:
                continue
            val = ansatz[base]
            for i, n in enumerate(a.didx):
                v = (VT, VX, VU)[i]
                for _ in range(n):
                    val = pdiff(val, v)
            amap[a] = val
    return subs(e, amap)


def apply_field_shape(e: Expr, tau: Expr, xi: Expr, eta: Expr) -> Expr:
    """Replace formal tau/xi/eta jets by derivatives of concrete shapes."""
    t, x, u = atom_expr(VT), atom_expr(VX), atom_expr(VU)
    ansatz = {
        Func("tau", (t, x, u), (0, 0, 0)): tau,
        Func("xi", (t, x, u), (0, 0, 0)): xi,
        Func("eta", (t, x, u), (0, 0, 0)): eta,
    }
    return _apply_unknown_ansatz(e, ansatz)


# ---------------------------------------------------------------------------
# extended (equivalence) fields on (t, x, u, f, H, K)

# independent coordinates for the element values and their live jets
FVAL = Param("fval")
KVAL = Param("Kval")
HVAL = Param("Hval")
FVAL_X = Param("fval_x")
HVAL_U = Param("Hval_u")
KVAL_U = Param("Kval_u")

EXTENDED_PARSE_NAMES = ("fval", "Hval", "Kval", "fval_x", "Hval_u", "Kval_u")


@dataclass(frozen=True)
class ExtendedField:
    """tau d_t + xi d_x + eta d_u + pi d_f + rho d_H + phi d_K.

    tau, xi, eta are expressions in (t, x, u); pi, rho, phi may additionally
    reference the element values through the symbols fval, Hval, Kval.
    """

    tau: Expr
    xi: Expr
    eta: Expr
    pi: Expr = ZERO
    rho: Expr = ZERO
    phi: Expr = ZERO


def extended_invariance_residual(xf: ExtendedField, h_mode="opaque", k_mode="opaque"):
    """Residuals of the invariance criterion on the augmented system
    { class equation, f_t = f_u = 0, H_t = H_x = 0, K_t = K_x = 0 }.

    The prolonged element coefficients are evaluated on the constraint
    manifold, where the only surviving element jets are f_x, H_u, K_u:

        pi^t  = pi_t - xi_t f_x            pi^u  = pi_u + H_u pi_H + K_u pi_K - xi_u f_x
        rho^t = rho_t - eta_t H_u          rho^x = rho_x + f_x rho_f - eta_x H_u
        rho^u = rho_u + H_u rho_H + K_u rho_K - eta_u H_u
        phi^t = phi_t - eta_t K_u          phi^x = phi_x + f_x phi_f - eta_x K_u

    h_mode / k_mode select the subclass: "opaque" keeps the element
    arbitrary, an Expr fixes a closed form in u, and k_mode may also be the
    string "H" to identify K with H (the conditional rows).  Returns a list
    of (label, Expr) residuals; the field is an equivalence generator of the
    (sub)class iff all of them vanish.
    """
    tau, xi, eta = xf.tau, xf.xi, xf.eta
    pi, rho, phi = xf.pi, xf.rho, xf.phi
    fv = atom_expr(FVAL)
    f_x = atom_expr(FVAL_X)

    identify = isinstance(k_mode, str) and k_mode == "H"
    h_closed = None if isinstance(h_mode, str) else h_mode
    k_closed = None if isinstance(k_mode, str) else k_mode
    if identify:
        phi = rho

    if h_closed is not None:
        Hv = h_closed
        H_u = pdiff(h_closed, VU)
    else:
        Hv = atom_expr(HVAL)
        H_u = atom_expr(HVAL_U)
    if identify:
        Kv, K_u = Hv, H_u
    elif k_closed is not None:
        Kv = k_closed
        K_u = pdiff(k_closed, VU)
    else:
        Kv = atom_expr(KVAL)
        K_u = atom_expr(KVAL_U)

    def d(e, v):
        return pdiff(e, v)

    # first prolongations on the manifold
    pi_t = d(pi, VT) - d(xi, VT) * f_x
    pi_u = d(pi, VU) + H_u * d(pi, HVAL) + K_u * d(pi, KVAL) - d(xi, VU) * f_x
    rho_t = d(rho, VT) - d(eta, VT) * H_u
    rho_x = d(rho, VX) + f_x * d(rho, FVAL) - d(eta, VX) * H_u
    rho_u = d(rho, VU) + H_u * d(rho, HVAL) + K_u * d(rho, KVAL) - d(eta, VU) * H_u
    phi_t = d(phi, VT) - d(eta, VT) * K_u
    phi_x = d(phi, VX) + f_x * d(phi, FVAL) - d(eta, VX) * K_u

    q = VectorField(tau, xi, eta)
    delta = (
        fv * jet("u_tt")
        - H_u * jet("u_x") ** 2
        - Hv * jet("u_xx")
        - Kv * jet("u_x")
    )
    pr = apply_prolonged(q, delta)
    # element slots; identified or closed elements have empty slots, so the
    # extra products are no-ops there
    pr = pr + pi * pdiff(delta, FVAL)
    pr = pr + rho * pdiff(delta, HVAL) + rho_u * pdiff(delta, HVAL_U)
    if not identify:
        pr = pr + phi * pdiff(delta, KVAL)
    utt = (H_u * jet("u_x") ** 2 + Hv * jet("u_xx") + Kv * jet("u_x")) / fv
    residuals = [("class equation", subs(pr, {JET_BY_NAME["u_tt"]: utt}))]
    residuals.append(("f_t", pi_t))
    residuals.append(("f_u", pi_u))
    if h_closed is None:
        residuals.append(("H_t", rho_t))
        residuals.append(("H_x", rho_x))
    if k_closed is None and not identify:
        residuals.append(("K_t", phi_t))
        residuals.append(("K_x", phi_x))
    return residuals


# ---------------------------------------------------------------------------
# kernel-theorem verification over a finite candidate space

def kernel_field_space(f_one: bool = False):
    """Solve the invariance condition over fields with degree<=2 coefficients.

    Returns (dimension, basis) where basis vectors are VectorFields spanning
    the space of fields with identically vanishing residual for fully opaque
    arbitrary elements (f = 1 fixed when f_one).
    """
    t, x, u = atom_expr(VT), atom_expr(VX), atom_expr(VU)
    monos = [ONE, t, x, u, t * t, t * x, t * u, x * x, x * u, u * u]
    unknowns = []
    tau = ZERO
    xi = ZERO
    eta = ZERO
    coords = []
    for slot in range(3):
        for i, m in enumerate(monos):
            name = "C_%d_%d" % (slot, i)
            cp = param(name)
            unknowns.append(Param(name))
            coords.append((slot, i))
            if slot == 0:
                tau = tau + cp * m
            elif slot == 1:
                xi = xi + cp * m
            else:
                eta = eta + cp * m
    if f_one:
        eq = EquationSpec(closed("f", "x", ONE), opaque("H", "u"), opaque("K", "u"))
    else:
        eq = generic_class_equation()
    q = VectorField(tau, xi, eta)
    residual = invariance_residual(eq, q)
    rows = _linear_rows(residual, unknowns)
    basis_vectors = _nullspace(rows, len(unknowns))
    fields = []
    for vec in basis_vectors:
        bt, bx, bu = ZERO, ZERO, ZERO
        for (slot, i), v in zip(coords, vec):
            if v == 0:
                continue
            term = mul(Expr((((), Fr(v)),), ()), monos[i])
            if slot == 0:
                bt = bt + term
            elif slot == 1:
                bx = bx + term
            else:
                bu = bu + term
        fields.append(VectorField(bt, bx, bu))
    return len(basis_vectors), fields


def _linear_rows(residual: Expr, unknowns):
    """Coefficient rows of expressions linear-homogeneous in the unknowns."""
    rows = {}
    index = {p: i for i, p in enumerate(unknowns)}
    if residual.den:
        # denominators carry no unknowns; drop them (homogeneous system)
        for fct, _m in residual.den:
            for mono, _c in fct:
                assert not any(a in index for a, _e in mono)
    for mono, c in residual.terms:
        hit = None
        rest = []
        for a, e in mono:
            if isinstance(a, Param) and a in index:
                if hit is not None or e != 1:
                    raise ValueError("residual not linear in unknowns")
                hit = a
            else:
                rest.append((a, e))
        if hit is None:
            raise ValueError("inhomogeneous term in kernel system")
        key = tuple(rest)
        row = rows.setdefault(key, [Fr(0)] * len(index))
        row[index[hit]] += c
    return list(rows.values())


def _nullspace(rows, n):
    """Exact rational nullspace basis of the given row vectors."""
    mat = [list(r) for r in rows]
    pivots = []
    r = 0
    for col in range(n):
        sel = None
        for i in range(r, len(mat)):
            if mat[i][col] != 0:
                sel = i
                break
        if sel is None:
            continue
        mat[r], mat[sel] = mat[sel], mat[r]
        pv = mat[r][col]
        mat[r] = [v / pv for v in mat[r]]
        for i in range(len(mat)):
            if i != r and mat[i][col] != 0:
                f = mat[i][col]
                mat[i] = [a - f * b for a, b in zip(mat[i], mat[r])]
        pivots.append(col)
        r += 1
        if r == len(mat):
            break
    free = [c for c in range(n) if c not in pivots]
    basis = []
    for fc in free:
        vec = [Fr(0)] * n
        vec[fc] = Fr(1)
        for i, pc in enumerate(pivots):
            vec[pc] = -mat[i][fc]
        basis.append(vec)
    return basis
