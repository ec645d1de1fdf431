"""Obstruction to a global cleaving map.

Two independent arguments are assembled into one report.  The symbolic
chain shows that the quotient by ``γ = 0`` collapses ``α`` to a unitary,
so any cleaving map restricted to the equator is a circle-valued function;
the numeric part measures the winding number of the gluing function
``j_a(u)·j_c(u)⁻¹`` around the equator, which must vanish if the bundle
were trivial.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .ncpoly import normal_form
from .pwnum import EQUATOR, MASK_A, MASK_C, S3Grid, cleave
from .report import PASS, VACUOUS, Report


class WindingError(ValueError):
    """Samples too coarse or too close to zero for a reliable winding count."""


@dataclass
class CircleFunction:
    """Samples ``f(φₘ)`` of a closed curve at ``φₘ = 2πm/M``."""

    values: np.ndarray
    label: str = ""

    @classmethod
    def from_callable(cls, fn, M: int, label: str = "") -> "CircleFunction":
        phi = 2 * np.pi * np.arange(M) / M
        return cls(np.asarray(fn(phi), dtype=complex), label)

    @property
    def phi(self) -> np.ndarray:
        M = len(self.values)
        return 2 * np.pi * np.arange(M) / M


def transition_function(grid: S3Grid | None = None, M: int = 512) -> CircleFunction:
    """``g(φ) = j_a(u)·j_c(u)⁻¹ = (ωa)·conj(ωc)`` on the equator
    ``η = π/4, ξ₁ = φ, ξ₂ = 0``."""
    grid = grid or S3Grid.build()
    if grid.equator_index is None:
        raise ValueError("grid has no equator ring")
    n_eq = len(grid.xi1) * len(grid.xi2)
    if M > n_eq:
        raise ValueError(f"{M} equator samples requested but the equator ring has only {n_eq} nodes")
    ja = cleave(1, MASK_A, grid)
    jc_inv = cleave(-1, MASK_C, grid)
    phi = 2 * np.pi * np.arange(M) / M
    eta = np.full(M, np.pi / 4)
    zero = np.zeros(M)
    # both hemispheres must contain the sample points
    a = np.cos(eta) * np.exp(1j * phi)
    c = np.sin(eta) * np.exp(1j * zero)
    if not (EQUATOR.contains(a, c).all()):
        raise ValueError("sample points are off the equator")
    vals = ja.at_hopf(eta, phi, zero) * jc_inv.at_hopf(eta, phi, zero)
    return CircleFunction(vals, "j_a(u) j_c(u)^-1")


def winding_number(f: CircleFunction, min_modulus: float = 1e-8, max_step: float = 0.9 * np.pi) -> int:
    """Degree of ``f/|f|``: sum of principal-branch angle increments over 2π."""
    v = f.values
    if len(v) < 3:
        raise WindingError("need at least three samples")
    mod = np.abs(v)
    if np.min(mod) < min_modulus:
        k = int(np.argmin(mod))
        raise WindingError(f"sample {k} has modulus {mod[k]:.2e}; winding undefined")
    steps = np.angle(np.roll(v, -1) / v)
    worst = float(np.max(np.abs(steps)))
    if worst > max_step:
        raise WindingError(f"angle step {worst:.3f} exceeds {max_step:.3f}; increase the sample count")
    total = float(np.sum(steps)) / (2 * np.pi)
    return int(round(total))


def symbolic_forcing(q0=None) -> Report:
    """Step-by-step normal-form certificate that the equator sees a unitary."""
    from .presets import load_preset

    p = load_preset("suq2")
    if q0 is not None:
        q0 = Fraction(q0)
        sp = p.specialize(q0)
    else:
        sp = p
    report = Report("symbolic-forcing", environment={"q": "formal" if q0 is None else str(q0)})

    comm = normal_form(sp.parse("alpha*alpha^* - alpha^**alpha"))
    expected = sp.parse("(1 - q^2)*gamma*gamma^*") if q0 is None else \
        sp.scalar(1 - q0 * q0) * sp.parse("gamma*gamma^*")
    report.add(
        "[alpha, alpha^*] = (1 - q^2) gamma gamma^*",
        comm == expected,
        witness=None if comm == expected else str(comm),
        detail={"normal_form": str(comm)},
    )

    # The computed half: modulo the commutator, (1 - q²)γγ* vanishes.  The
    # argued half: in a commutative *-image t = f(γ)f(γ)* ≥ 0, so
    # (1 - q²)t = 0 forces t = 0 unless q² = 1.
    classical = q0 is not None and q0 * q0 == 1
    ideal_residual = normal_form(comm - expected)
    report.add(
        "positivity: a character with [alpha, alpha^*] = 0 kills gamma",
        ideal_residual.is_zero(),
        exact=True,
        vacuous=classical,
        detail={
            "computed": "(1 - q^2) gamma gamma^* lies in the ideal of [alpha, alpha^*]",
            "argued": "t = f(gamma) f(gamma)^* >= 0 and (1 - q^2) t = 0 force t = 0",
            "note": "vacuous at q^2 = 1: the factor 1 - q^2 vanishes" if classical else "",
        },
    )

    free = sp.free()
    g, gs = free.index("gamma"), free.index("gamma^*")
    images = []
    for rel in sp.relations:
        kept = [(w, c) for w, c in rel if g not in w and gs not in w]
        if kept:
            images.append(free.element(kept))
    want = {free.parse("alpha^**alpha - 1"), free.parse("alpha*alpha^* - 1")}
    ok = want.issubset(set(images))
    report.add(
        "gamma = 0 forces alpha^* alpha = alpha alpha^* = 1",
        ok,
        detail={"surviving_relations": sorted(str(x) for x in images)},
    )
    return report


def obstruction_verdict(grid: S3Grid | None = None, M: int = 512, q0=None, controls: bool = True) -> Report:
    """Full report: symbolic chain, winding of the gluing map and controls."""
    grid = grid or S3Grid.build()
    report = Report("obstruction", environment={"grid": grid.spec, "equator_samples": M,
                                                 "q": "formal" if q0 is None else str(Fraction(q0))})
    forcing = symbolic_forcing(q0)
    report.children.append(forcing)

    with report.timed() as t:
        g = transition_function(grid, M)
        deg = winding_number(g)
    vacuous = any(c.status == VACUOUS for c in forcing.checks)
    if deg == 0:
        verdict = "not obstructed"
    elif forcing.status == PASS and not vacuous:
        verdict = "obstructed"
    else:
        # the winding alone does not rule out every cleaving map
        verdict = "inconclusive"
    modulus = np.abs(g.values)
    modulus_err = float(np.max(np.abs(modulus - 1)))
    report.add(
        "transition function has unit modulus",
        modulus_err < 1e-12,
        residual=modulus_err,
        exact=False,
    )
    report.add(
        "winding number of j_a(u) j_c(u)^-1 is +-1",
        abs(deg) == 1,
        exact=True,
        detail={"winding": deg, "samples": M},
        runtime=t["runtime"],
    )
    report.summary = {
        "verdict": verdict,
        "winding": deg,
        "samples": M,
        "min_modulus": float(np.min(modulus)),
        "forcing_chain": forcing.status,
    }
    report.notes.append(
        "caveat: the numeric winding certifies the chosen cleaving maps only; "
        "the non-existence of any global cleaving map rests on the symbolic "
        "chain and is not reproduced in full generality"
    )

    if controls:
        const = CircleFunction(np.ones(M, dtype=complex), "1")
        cdeg = winding_number(const)
        cverdict = "not obstructed" if cdeg == 0 else "obstructed"
        report.add("control: trivial bundle with constant clutching is not obstructed",
                   cverdict == "not obstructed", detail={"winding": cdeg, "verdict": cverdict})
        sq = CircleFunction.from_callable(lambda phi: np.exp(2j * phi), M, "exp(2i phi)")
        sdeg = winding_number(sq)
        report.add("control: exp(2i phi) winds twice", sdeg == 2, detail={"winding": sdeg})
        classical = symbolic_forcing(1)
        step = classical.check("positivity: a character with [alpha, alpha^*] = 0 kills gamma")
        report.add(
            "control: forcing step is vacuous at q = 1",
            step.status == VACUOUS,
            detail={"status": step.status},
        )
    return report
