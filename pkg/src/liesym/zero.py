"""Zero verdicts: exact symbolic decision with a seeded numeric fallback."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import mpmath as mp

from .symkernel import Expr
from .numeric import (
    DEFAULT_POINTS,
    DEFAULT_SEED,
    Evaluator,
    REL_TOL,
    SampleDomain,
    SingularityError,
    UnboundSymbolError,
    draw_point,
    free_symbol_names,
)

SYMBOLIC_ZERO = "SymbolicZero"
NUMERIC_ZERO = "NumericZero"
NON_ZERO = "NonZero"
SKIPPED = "Skipped"


@dataclass
class ZeroVerdict:
    kind: str
    max_residual: float = 0.0
    witness: dict = None
    note: str = ""

    @property
    def is_zero(self) -> bool:
        return self.kind in (SYMBOLIC_ZERO, NUMERIC_ZERO)

    def __bool__(self):
        return self.is_zero

    def describe(self) -> str:
        if self.kind == SYMBOLIC_ZERO:
            return SYMBOLIC_ZERO
        if self.kind == NUMERIC_ZERO:
            return "%s(max %.3e)" % (NUMERIC_ZERO, self.max_residual)
        if self.kind == NON_ZERO:
            w = ""
            if self.witness:
                w = " at " + ", ".join(
                    "%s=%s" % (k, v) for k, v in sorted(self.witness.items())
                )
            return NON_ZERO + w
        return "%s(%s)" % (SKIPPED, self.note)


class DomainError(ValueError):
    pass


def is_zero(e: Expr, mode: str = "auto", domain: SampleDomain = None,
            funcs=None) -> ZeroVerdict:
    """Decide whether an expression vanishes identically.

    symbolic: only the exact normal-form decision.
    numeric:  only seeded sampling on the supplied domain.
    auto:     symbolic first, sampling as the fallback grade.
    """
    if mode not in ("symbolic", "numeric", "auto"):
        raise ValueError("unknown mode %r" % mode)
    if mode != "numeric":
        if e.is_zero_form():
            return ZeroVerdict(SYMBOLIC_ZERO)
        if mode == "symbolic":
            return ZeroVerdict(NON_ZERO, note="nonzero normal form")
    return numeric_zero(e, domain=domain, funcs=funcs)


def numeric_zero(e: Expr, domain: SampleDomain = None, funcs=None) -> ZeroVerdict:
    if e.is_zero_form():
        return ZeroVerdict(NUMERIC_ZERO, 0.0)
    domain = domain or SampleDomain()
    ev = Evaluator(funcs=funcs)
    names = free_symbol_names(e)
    import random

    rng = random.Random(domain.seed)
    worst = mp.mpf(0)
    accepted = 0
    attempts = 0
    max_attempts = domain.npoints * 40
    while accepted < domain.npoints:
        attempts += 1
        if attempts > max_attempts:
            raise DomainError(
                "sampling domain too singular: %d/%d admissible points"
                % (accepted, domain.npoints)
            )
        point = draw_point(rng, names, domain)
        try:
            v, scale = ev.eval_scaled(e, point)
        except SingularityError:
            continue
        except UnboundSymbolError as exc:
            return ZeroVerdict(SKIPPED, note=str(exc))
        accepted += 1
        rel = abs(v) / max(scale, mp.mpf(1))
        if rel >= REL_TOL:
            return ZeroVerdict(
                NON_ZERO,
                max_residual=float(rel),
                witness={k: str(val) for k, val in point.items()},
            )
        if rel > worst:
            worst = rel
    return ZeroVerdict(NUMERIC_ZERO, max_residual=float(worst))
