"""Relative entropy of measures against a reference, in nats.

Three equivalent presentations of the same quantity:

* probability form   S(mu)  = -integral of (dmu/dnu) log(dmu/dnu) dnu
* finite form        S(eta) = log eta(X) - (1/eta(X)) integral of
                              (deta/dnu) log(deta/dnu) dnu
* weight form        S(phi) = log m0 + (1/m0) integral of phi e^-phi dnu,
                              m0 = integral of e^-phi dnu

The finite form is scale-invariant and equals the probability form of the
unit-normalized measure; the weight form is the finite form of the measure
with density e^-phi. All integrals run against the reference measure.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from enum import Enum

from . import quadrature
from .errors import (AbsoluteContinuityError, DegenerateMeasureError,
                     NotInformationMeasureError)
from .measures import (Density, Measure, MeasurableSet, WeightFunction, mass,
                       radon_nikodym)
from .quadrature import DEFAULT_INTEGRATOR, Integrator, xlogx

__all__ = [
    "EntropyForm", "EntropyValue", "Verdict", "NonnegativityCertificate",
    "NonUnitMassWarning", "entropy_prob", "entropy_finite", "entropy_weight",
    "uniform_measure", "change_reference", "entropic_gap",
    "nonneg_certificate", "DEFAULT_TOL",
]

DEFAULT_TOL = 1e-8


class EntropyForm(str, Enum):
    PROBABILITY = "Probability"
    FINITE = "Finite"
    WEIGHT = "Weight"


@dataclass(frozen=True)
class EntropyValue:
    """Entropy in nats together with the form used and the measure's mass."""

    nats: float
    form: EntropyForm
    mass: float

    def to_dict(self) -> dict:
        return {"nats": self.nats, "form": self.form.value, "mass": self.mass}


class Verdict(str, Enum):
    MASS_AT_LEAST_ONE = "MassAtLeastOne"
    CONDITION_HOLDS = "ConditionHolds"
    MAY_BE_NEGATIVE = "MayBeNegative"


@dataclass(frozen=True)
class NonnegativityCertificate:
    """Why (or whether) the entropy of an information measure is >= 0.

    lhs/rhs record the comparison that produced the verdict: mass vs 1 for
    MassAtLeastOne, else -integral vs -mass*log(mass).
    """

    verdict: Verdict
    lhs: float
    rhs: float

    def to_dict(self) -> dict:
        return {"verdict": self.verdict.value, "lhs": self.lhs, "rhs": self.rhs}


class NonUnitMassWarning(UserWarning):
    """Probability-form entropy was asked of a measure of mass != 1."""


def _xlogx_integral(m: Measure, reference: Measure, s: MeasurableSet,
                    cfg: Integrator) -> float:
    """integral over s of xlogx(dm/dreference) dreference."""
    quot = radon_nikodym(m, reference)
    ref_ev = reference.density.evaluator
    q_ev = quot.evaluator
    if s.is_finite:
        integrand = lambda x: xlogx(q_ev(x)) * ref_ev(x)
    else:
        def integrand(x):
            w = ref_ev(x)
            if w == 0.0:
                return 0.0
            return xlogx(q_ev(x)) * w
    bps = tuple(sorted(set(quot.breakpoints) | set(reference.density.breakpoints)))
    return quadrature.integrate(integrand, s, cfg, breakpoints=bps)


def entropy_prob(m: Measure, reference: Measure, s: MeasurableSet,
                 cfg: Integrator = DEFAULT_INTEGRATOR,
                 mass_tol: float = DEFAULT_TOL) -> EntropyValue:
    """Probability-form entropy of m over s against reference.

    Warns (NonUnitMassWarning) instead of erroring when m(s) != 1: the
    integrand is well-defined regardless, and the classical closed forms
    for non-probability measures use exactly this reading.
    """
    total = mass(m, s, cfg)
    if abs(total - 1.0) > mass_tol:
        warnings.warn(
            f"probability-form entropy of a measure with mass {total!r}",
            NonUnitMassWarning, stacklevel=2)
    val = -_xlogx_integral(m, reference, s, cfg)
    return EntropyValue(val, EntropyForm.PROBABILITY, total)


def entropy_finite(m: Measure, reference: Measure, s: MeasurableSet,
                   cfg: Integrator = DEFAULT_INTEGRATOR) -> EntropyValue:
    """Finite-form entropy: log mass minus the normalized xlogx integral."""
    total = mass(m, s, cfg)
    if total <= 0.0:
        raise DegenerateMeasureError(
            f"measure of the set is {total!r}; entropy needs positive mass")
    integral = _xlogx_integral(m, reference, s, cfg)
    return EntropyValue(math.log(total) - integral / total,
                        EntropyForm.FINITE, total)


def entropy_weight(phi: WeightFunction, reference: Measure, s: MeasurableSet,
                   cfg: Integrator = DEFAULT_INTEGRATOR) -> EntropyValue:
    """Weight-form entropy of the weight phi against reference.

    Uses phi*e^-phi = -xlogx(e^-phi), which extends continuously by 0 to
    phi = +inf, so infinite weights contribute nothing to either integral.
    """
    p_ev = phi.evaluator
    ref_ev = reference.density.evaluator
    bps = tuple(sorted(set(phi.breakpoints) | set(reference.density.breakpoints)))

    def mass_integrand(x):
        w = ref_ev(x)
        if w == 0.0:
            return 0.0
        v = p_ev(x)
        return (math.exp(-v) if v != math.inf else 0.0) * w

    def phi_integrand(x):
        w = ref_ev(x)
        if w == 0.0:
            return 0.0
        v = p_ev(x)
        q = math.exp(-v) if v != math.inf else 0.0
        return -xlogx(q) * w

    m0 = quadrature.integrate(mass_integrand, s, cfg, breakpoints=bps)
    if m0 <= 0.0:
        raise DegenerateMeasureError(
            f"weight measure of the set is {m0!r}; entropy needs positive mass")
    num = quadrature.integrate(phi_integrand, s, cfg, breakpoints=bps)
    return EntropyValue(math.log(m0) + num / m0, EntropyForm.WEIGHT, m0)


def uniform_measure(reference: Measure, s: MeasurableSet,
                    cfg: Integrator = DEFAULT_INTEGRATOR) -> Measure:
    """The maximum-entropy measure on s: density 1/reference(s) against
    reference, restricted to s. Its finite-form entropy is log reference(s)."""
    total = mass(reference, s, cfg)
    if total <= 0.0:
        raise DegenerateMeasureError(
            f"reference measure of the set is {total!r}")
    return reference.scaled(1.0 / total).restricted(
        s, label=f"uniform[{reference.label}]")


def change_reference(rho: Measure, mu: Measure, nu: Measure,
                     s: MeasurableSet,
                     cfg: Integrator = DEFAULT_INTEGRATOR) -> EntropyValue:
    """Finite-form entropy of rho against nu computed through reference mu:

        S_nu(rho, s) = S_mu(rho, s) - (1/rho(s)) integral of log(dmu/dnu) drho

    Requires rho << mu and rho << nu on s (the quotients raise where
    violated). Numerically validates the identity used to move between
    Haar references.
    """
    base = entropy_finite(rho, mu, s, cfg)
    quot = radon_nikodym(mu, nu)
    q_ev = quot.evaluator
    rho_ev = rho.density.evaluator

    def integrand(x):
        w = rho_ev(x)
        if w == 0.0:
            return 0.0
        q = q_ev(x)
        if q <= 0.0:
            raise AbsoluteContinuityError(
                f"dmu/dnu is {q!r} at {x!r} where rho has density {w!r}")
        return math.log(q) * w

    bps = tuple(sorted(set(quot.breakpoints) | set(rho.density.breakpoints)))
    corr = quadrature.integrate(integrand, s, cfg, breakpoints=bps)
    return EntropyValue(base.nats - corr / base.mass,
                        EntropyForm.FINITE, base.mass)


def entropic_gap(rho: Measure, xi: Measure, haar_ref: Measure,
                 s: MeasurableSet, cfg: Integrator = DEFAULT_INTEGRATOR,
                 tol: float = DEFAULT_TOL) -> float:
    """-(1/rho(s)) integral over s of log(dxi/dhaar_ref) drho.

    Nonnegative whenever xi is an information measure with respect to
    haar_ref (the log of a quotient <= 1 is <= 0); equals
    S_haar(rho, s) - S_xi(rho, s). Raises NotInformationMeasureError if
    the quotient exceeds 1 beyond tol at an evaluated point.
    """
    total = mass(rho, s, cfg)
    if total <= 0.0:
        raise DegenerateMeasureError(
            f"rho measure of the set is {total!r}")
    quot = radon_nikodym(xi, haar_ref)
    q_ev = quot.evaluator
    rho_ev = rho.density.evaluator

    def integrand(x):
        w = rho_ev(x)
        if w == 0.0:
            return 0.0
        q = q_ev(x)
        if q > 1.0 + tol:
            raise NotInformationMeasureError(
                f"dxi/dhaar is {q!r} > 1 at {x!r}")
        if q <= 0.0:
            raise AbsoluteContinuityError(
                f"dxi/dhaar is {q!r} at {x!r} where rho has density {w!r}")
        return math.log(min(q, 1.0)) * w

    bps = tuple(sorted(set(quot.breakpoints) | set(rho.density.breakpoints)))
    corr = quadrature.integrate(integrand, s, cfg, breakpoints=bps)
    return -corr / total


def nonneg_certificate(m: Measure, reference: Measure, s: MeasurableSet,
                       cfg: Integrator = DEFAULT_INTEGRATOR,
                       tol: float = DEFAULT_TOL) -> NonnegativityCertificate:
    """Certify nonnegativity of the finite-form entropy of an information
    measure m over s.

    MassAtLeastOne: m(s) >= 1 - tol suffices on its own. Otherwise the
    sharper condition -integral of xlogx(dm/dreference) dreference >=
    -m(s) log m(s) is evaluated; if it fails, MayBeNegative. Requires m to
    be an information measure w.r.t. reference (quotient <= 1 + tol at
    every evaluated point).
    """
    quot = radon_nikodym(m, reference)
    q_ev = quot.evaluator
    ref_ev = reference.density.evaluator

    def checked_quot(x):
        q = q_ev(x)
        if q > 1.0 + tol:
            raise NotInformationMeasureError(
                f"dm/dreference is {q!r} > 1 at {x!r}")
        return q

    total = mass(m, s, cfg)
    if total >= 1.0 - tol:
        # still insist on the information-measure precondition
        _scan_quotient(checked_quot, s, quot.breakpoints)
        return NonnegativityCertificate(Verdict.MASS_AT_LEAST_ONE, total, 1.0)

    if s.is_finite:
        integrand = lambda x: xlogx(checked_quot(x)) * ref_ev(x)
    else:
        def integrand(x):
            w = ref_ev(x)
            if w == 0.0:
                return 0.0
            return xlogx(checked_quot(x)) * w
    bps = tuple(sorted(set(quot.breakpoints) | set(reference.density.breakpoints)))
    integral = quadrature.integrate(integrand, s, cfg, breakpoints=bps)
    lhs = -integral
    rhs = -total * math.log(total)
    if lhs >= rhs - tol:
        return NonnegativityCertificate(Verdict.CONDITION_HOLDS, lhs, rhs)
    return NonnegativityCertificate(Verdict.MAY_BE_NEGATIVE, lhs, rhs)


def _scan_quotient(checked_quot, s: MeasurableSet, breakpoints) -> None:
    if s.is_finite:
        for a in s.iter_atoms():
            checked_quot(a)
        return
    for a, b in s.intervals:
        for i in range(33):
            checked_quot(a + (b - a) * i / 32.0)
        for bp in breakpoints:
            if a <= bp <= b:
                checked_quot(bp)
