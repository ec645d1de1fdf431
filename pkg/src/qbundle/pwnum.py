"""Sampled model of the Peter–Weyl comodule algebra of C(S³) under the
diagonal U(1)-action, its hemisphere covering and the cleaving maps.

Points of S³ are written in Hopf coordinates
``a = cos(η) e^{iξ₁}``, ``c = sin(η) e^{iξ₂}``.  A :class:`SampledFunction`
is a pointwise expression in ``(a, c)``; it can be evaluated on the grid
nodes, on fibre-rotated copies of them, or at arbitrary points.
"""
from __future__ import annotations

import csv
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

import numpy as np

from .hopf import hopf_of
from .laurent import QLaurent
from .ncpoly import Element, Presentation, Word, deglex_key
from .report import Report

EQUATOR_TOL = 1e-9


class AliasingError(ValueError):
    """Requested weight cannot be resolved with the configured fibre samples."""


class NotHomogeneous(ValueError):
    """The function is not of the declared U(1)-weight."""


# -- grid ------------------------------------------------------------------


@dataclass
class S3Grid:
    """Tensor-product grid in Hopf coordinates with quadrature weights.

    ``η`` nodes are Gauss–Legendre in ``t = sin²η`` (the measure
    ``sin η cos η dη`` is ``dt/2``); ``ξ₁, ξ₂`` are uniform (trapezoidal).
    """

    eta: np.ndarray
    xi1: np.ndarray
    xi2: np.ndarray
    eta_weights: np.ndarray
    fiber_samples: int = 32
    equator_index: int | None = None

    @classmethod
    def build(cls, n_eta: int = 48, n_xi1: int = 48, n_xi2: int = 48, fiber_samples: int = 32) -> "S3Grid":
        # an odd Gauss rule has its middle node on t = 1/2, the equator;
        # even counts add a zero-weight ring at the pole η = 0
        if n_eta < 1:
            raise ValueError("need at least one eta ring")
        n_gauss = n_eta if n_eta % 2 else n_eta - 1
        x, w = np.polynomial.legendre.leggauss(n_gauss)
        eta = np.arcsin(np.sqrt((x + 1.0) / 2.0))
        eta[n_gauss // 2] = np.pi / 4
        wt = w / 2.0
        if n_eta % 2 == 0:
            eta = np.concatenate([[0.0], eta])
            wt = np.concatenate([[0.0], wt])
        xi1 = 2 * np.pi * np.arange(n_xi1) / n_xi1
        xi2 = 2 * np.pi * np.arange(n_xi2) / n_xi2
        eq = int(np.flatnonzero(eta == np.pi / 4)[0])
        return cls(eta, xi1, xi2, wt, fiber_samples, eq)

    @classmethod
    def from_nodes(cls, eta, xi1, xi2, fiber_samples: int = 32) -> "S3Grid":
        eta = np.asarray(eta, dtype=float)
        eq = np.flatnonzero(np.abs(np.cos(eta) ** 2 - 0.5) <= EQUATOR_TOL)
        return cls(
            eta,
            np.asarray(xi1, dtype=float),
            np.asarray(xi2, dtype=float),
            np.full(len(eta), 1.0 / len(eta)),
            fiber_samples,
            int(eq[0]) if len(eq) else None,
        )

    @property
    def shape(self) -> tuple[int, int, int]:
        return (len(self.eta), len(self.xi1), len(self.xi2))

    @property
    def size(self) -> int:
        return int(np.prod(self.shape))

    @property
    def spec(self) -> str:
        return "x".join(str(n) for n in self.shape)

    def __post_init__(self):
        E, X1, X2 = np.meshgrid(self.eta, self.xi1, self.xi2, indexing="ij")
        self.ETA, self.XI1, self.XI2 = E, X1, X2
        self.a = np.cos(E) * np.exp(1j * X1)
        self.c = np.sin(E) * np.exp(1j * X2)

    def weights(self) -> np.ndarray:
        """Quadrature weights of the normalised invariant measure."""
        w = self.eta_weights[:, None, None] / (len(self.xi1) * len(self.xi2))
        return np.broadcast_to(w, self.shape)

    def integrate(self, values: np.ndarray) -> complex:
        return complex(np.sum(self.weights() * values))

    def fiber_angles(self, K: int | None = None) -> np.ndarray:
        K = K or self.fiber_samples
        return 2 * np.pi * np.arange(K) / K

    def __hash__(self):
        return id(self)

    def __eq__(self, other):
        return self is other


# -- masks ------------------------------------------------------------------


@dataclass(frozen=True)
class HemisphereMask:
    """Closed hemisphere ``|a|² ≥ 1/2`` ("A"), ``|a|² ≤ 1/2`` ("C") or
    their intersection, the equator ("E")."""

    kind: str
    tol: float = EQUATOR_TOL

    def __post_init__(self):
        if self.kind not in ("A", "C", "E"):
            raise ValueError(f"mask kind must be A, C or E, not {self.kind!r}")

    def contains(self, a, c) -> np.ndarray:
        s = np.abs(a) ** 2 - 0.5
        if self.kind == "A":
            return s >= -self.tol
        if self.kind == "C":
            return s <= self.tol
        return np.abs(s) <= self.tol

    def nodes(self, grid: S3Grid) -> np.ndarray:
        return self.contains(grid.a, grid.c)

    def __and__(self, other: "HemisphereMask | None") -> "HemisphereMask":
        if other is None or other.kind == self.kind:
            return self
        return HemisphereMask("E", min(self.tol, other.tol))


MASK_A = HemisphereMask("A")
MASK_C = HemisphereMask("C")
EQUATOR = HemisphereMask("E")


def mask_of(name: str) -> HemisphereMask:
    return {"a": MASK_A, "A": MASK_A, "c": MASK_C, "C": MASK_C, "e": EQUATOR, "E": EQUATOR}[name]


# -- sampled functions -----------------------------------------------------------


def _merge_weight(w1, w2, op):
    if w1 is None or w2 is None:
        return None
    return op(w1, w2)


class SampledFunction:
    """Complex function on S³ given pointwise in ``(a, c)``.

    ``mask`` restricts the domain (values are undefined, NaN, elsewhere);
    ``weight`` is the declared U(1)-weight tag or ``None`` for mixed.
    """

    def __init__(
        self,
        grid: S3Grid,
        fn: Callable[[np.ndarray, np.ndarray], np.ndarray],
        mask: HemisphereMask | None = None,
        weight: int | None = None,
        label: str = "",
        stack: Callable[[int], np.ndarray] | None = None,
    ):
        self.grid = grid
        self._fn = fn
        self.mask = mask
        self.weight = weight
        self.label = label
        self._stack_builder = stack
        self._values = None
        self._stacks: dict[int, np.ndarray] = {}

    # evaluation

    def evaluate(self, a, c) -> np.ndarray:
        """Raw pointwise values, ignoring the mask."""
        a = np.asarray(a, dtype=complex)
        c = np.asarray(c, dtype=complex)
        return np.broadcast_to(np.asarray(self._fn(a, c), dtype=complex), np.broadcast(a, c).shape)

    def at_hopf(self, eta, xi1, xi2) -> np.ndarray:
        eta, xi1, xi2 = np.broadcast_arrays(*(np.asarray(v, dtype=float) for v in (eta, xi1, xi2)))
        return self.evaluate(np.cos(eta) * np.exp(1j * xi1), np.sin(eta) * np.exp(1j * xi2))

    @property
    def raw_values(self) -> np.ndarray:
        if self._values is None:
            self._values = self.evaluate(self.grid.a, self.grid.c)
        return self._values

    @property
    def domain(self) -> np.ndarray:
        if self.mask is None:
            return np.ones(self.grid.shape, dtype=bool)
        return self.mask.nodes(self.grid)

    @property
    def values(self) -> np.ndarray:
        v = np.array(self.raw_values)
        if self.mask is not None:
            v[~self.domain] = np.nan
        return v

    def masked_values(self) -> np.ndarray:
        return self.raw_values[self.domain]

    def rotated(self, theta: float) -> np.ndarray:
        """Values on the grid nodes moved by ``x ↦ x·e^{iθ}``."""
        e = np.exp(1j * theta)
        return self.evaluate(self.grid.a * e, self.grid.c * e)

    def rotated_stack(self, K: int) -> np.ndarray:
        """Values at ``x·e^{2πik/K}`` for ``k = 0..K-1``, shape ``(K, *grid)``."""
        hit = self._stacks.get(K)
        if hit is None:
            if self._stack_builder is not None:
                hit = self._stack_builder(K)
            else:
                hit = np.stack([self.rotated(t) for t in self.grid.fiber_angles(K)])
            self._stacks[K] = hit
        return hit

    def max_abs(self) -> float:
        v = self.masked_values()
        return float(np.max(np.abs(v))) if v.size else 0.0

    def fiber_residual(self, n: int | None = None, thetas=None) -> float:
        """``max |f(x e^{iθ}) − e^{inθ} f(x)|`` over the domain."""
        n = self.weight if n is None else n
        if n is None:
            raise NotHomogeneous("no weight declared")
        if thetas is None:
            thetas = (0.3, 1.1, 2.5, np.pi, 4.2)
        dom = self.domain
        base = self.raw_values[dom]
        worst = 0.0
        for t in thetas:
            diff = self.rotated(t)[dom] - np.exp(1j * n * t) * base
            if diff.size:
                worst = max(worst, float(np.max(np.abs(diff))))
        return worst

    # algebra

    def _binary(self, other, op, wop, label):
        if isinstance(other, SampledFunction):
            if other.grid is not self.grid:
                raise ValueError("functions on different grids")
            f, g = self._fn, other._fn
            mask = self.mask & other.mask if self.mask is not None else other.mask
            weight = _merge_weight(self.weight, other.weight, wop)
            s1, s2 = self, other
            return SampledFunction(
                self.grid,
                lambda a, c: op(f(a, c), g(a, c)),
                mask,
                weight,
                label,
                stack=lambda K: op(s1.rotated_stack(K), s2.rotated_stack(K)),
            )
        if isinstance(other, (int, float, complex, Fraction)):
            k = complex(other)
            f = self._fn
            s1 = self
            weight = self.weight
            if wop is _add_weights:  # + or - with a constant
                weight = self.weight if self.weight == 0 or k == 0 else None
            return SampledFunction(
                self.grid, lambda a, c: op(f(a, c), k), self.mask, weight, label,
                stack=lambda K: op(s1.rotated_stack(K), k),
            )
        return NotImplemented

    def __add__(self, other):
        return self._binary(other, np.add, _add_weights, f"({self.label} + ...)")

    __radd__ = __add__

    def __sub__(self, other):
        return self._binary(other, np.subtract, _add_weights, f"({self.label} - ...)")

    def __rsub__(self, other):
        return (-self) + other

    def __neg__(self):
        f = self._fn
        s = self
        return SampledFunction(self.grid, lambda a, c: -f(a, c), self.mask, self.weight, f"-{self.label}",
                               stack=lambda K: -s.rotated_stack(K))

    def __mul__(self, other):
        if isinstance(other, SampledFunction):
            return self._binary(other, np.multiply, lambda x, y: x + y, f"{self.label}*{other.label}")
        if isinstance(other, (int, float, complex, Fraction)):
            k = complex(other)
            f = self._fn
            s = self
            return SampledFunction(self.grid, lambda a, c: k * f(a, c), self.mask, self.weight, self.label,
                                   stack=lambda K: k * s.rotated_stack(K))
        return NotImplemented

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative powers: use conj() for unitary functions")
        out = constant(self.grid, 1.0)
        out.mask = self.mask
        for _ in range(n):
            out = out * self
        return out

    def conj(self) -> "SampledFunction":
        f = self._fn
        s = self
        w = None if self.weight is None else -self.weight
        return SampledFunction(self.grid, lambda a, c: np.conj(f(a, c)), self.mask, w, f"conj({self.label})",
                               stack=lambda K: np.conj(s.rotated_stack(K)))

    def abs2(self) -> "SampledFunction":
        return self * self.conj()

    def map(self, fn: Callable[[np.ndarray], np.ndarray], weight: int | None = 0, label: str = "") -> "SampledFunction":
        """Apply a scalar function pointwise (e.g. ``np.sqrt``)."""
        f = self._fn
        s = self
        return SampledFunction(self.grid, lambda a, c: fn(f(a, c)), self.mask, weight, label,
                               stack=lambda K: fn(s.rotated_stack(K)))

    def with_mask(self, mask: HemisphereMask | None) -> "SampledFunction":
        out = SampledFunction(self.grid, self._fn, mask, self.weight, self.label, self._stack_builder)
        out._values = self._values
        out._stacks = self._stacks
        return out

    # output

    def to_csv(self, path) -> None:
        """Write ``(eta, xi1, xi2, re, im)`` rows for the nodes in the domain."""
        g = self.grid
        dom = self.domain
        v = self.raw_values
        with open(path, "w", newline="", encoding="utf-8") as fh:
            w = csv.writer(fh)
            w.writerow(["eta", "xi1", "xi2", "re", "im"])
            for e, x1, x2, val in zip(g.ETA[dom], g.XI1[dom], g.XI2[dom], v[dom]):
                w.writerow([repr(float(e)), repr(float(x1)), repr(float(x2)), repr(float(val.real)), repr(float(val.imag))])

    def __repr__(self):
        mask = self.mask.kind if self.mask else "-"
        return f"SampledFunction({self.label or '?'}, weight={self.weight}, mask={mask})"


def _add_weights(w1, w2):
    return w1 if w1 == w2 else None


def constant(grid: S3Grid, value: complex) -> SampledFunction:
    v = complex(value)
    return SampledFunction(grid, lambda a, c: np.full(np.broadcast(a, c).shape, v), None, 0, str(value))


def coordinate(grid: S3Grid, which: str) -> SampledFunction:
    if which == "a":
        return SampledFunction(grid, lambda a, c: a, None, 1, "a")
    if which == "c":
        return SampledFunction(grid, lambda a, c: c, None, 1, "c")
    raise ValueError(f"coordinate must be 'a' or 'c', not {which!r}")


def omega(grid: S3Grid) -> SampledFunction:
    """``ω = sqrt(2 / (1 + ||a|² − |c|²|))``."""

    def fn(a, c):
        return np.sqrt(2.0 / (1.0 + np.abs(np.abs(a) ** 2 - np.abs(c) ** 2))) + 0j

    return SampledFunction(grid, fn, None, 0, "omega")


def hopf_map(grid: S3Grid) -> tuple[SampledFunction, SampledFunction]:
    """The S² coordinates ``(2ac̄, |a|² − |c|²)`` used to identify Γ(L₀) with C(S²)."""
    a, c = coordinate(grid, "a"), coordinate(grid, "c")
    return 2 * a * c.conj(), a.abs2() - c.abs2()


def fourier_weight_project(f: SampledFunction, n: int, grid: S3Grid | None = None, K: int | None = None) -> SampledFunction:
    """Weight-``n`` isotypic component
    ``Pₙf(x) = (1/K) Σₖ f(x e^{iθₖ}) e^{−inθₖ}``, ``θₖ = 2πk/K``."""
    grid = grid or f.grid
    K = K or grid.fiber_samples
    if 2 * abs(n) >= K:
        raise AliasingError(f"weight {n} needs more than {2 * abs(n)} fibre samples (have {K})")
    thetas = grid.fiber_angles(K)
    phases = np.exp(-1j * n * thetas)
    fn = f._fn

    def proj(a, c):
        acc = 0j
        for t, ph in zip(thetas, phases):
            e = np.exp(1j * t)
            acc = acc + fn(a * e, c * e) * ph
        return acc / K

    def stack(L):
        if L != K:
            return np.stack([SampledFunction(grid, proj).rotated(t) for t in grid.fiber_angles(L)])
        F = f.rotated_stack(K)
        # value at rotation k: (1/K) Σ_s F[s] e^{-in(θ_s − θ_k)}
        M = np.exp(-1j * n * (thetas[None, :] - thetas[:, None])) / K
        return np.tensordot(M, F, axes=(1, 0))

    out = SampledFunction(grid, proj, f.mask, n, f"P{n}({f.label})", stack=stack)
    out._values = np.tensordot(phases / K, f.rotated_stack(K), axes=(0, 0))
    return out


def restrict(f: SampledFunction, m: HemisphereMask) -> SampledFunction:
    """The quotient map onto the closed hemisphere ``m``."""
    return f.with_mask(m & f.mask if f.mask is not None else m)


def cleave(n: int, m: HemisphereMask, grid: S3Grid) -> SampledFunction:
    """``j(uⁿ) = (ωz)ⁿ`` on the hemisphere, with ``z = a`` on A and ``z = c``
    on C and ``(ωz)^{-k} = conj(ωz)^k``."""
    if m.kind == "E":
        raise ValueError("cleaving maps live on a hemisphere, not the equator")
    z = coordinate(grid, "a" if m.kind == "A" else "c")
    base = restrict(omega(grid) * z, m)
    base.label = f"omega*{'a' if m.kind == 'A' else 'c'}"
    if n < 0:
        base = base.conj()
    out = base ** abs(n)
    out = restrict(out, m)
    out.weight = n
    out.label = f"j_{m.kind.lower()}(u^{n})"
    return out


def trivialization_iso(x: SampledFunction, m: HemisphereMask, tol: float = 1e-10) -> tuple[SampledFunction, int]:
    """``x ↦ π(x) j(S(uⁿ)) ⊗ uⁿ`` for ``x`` of weight ``n``; returns the
    fibre-constant disk function and ``n``."""
    n = x.weight
    if n is None:
        raise NotHomogeneous(f"{x!r} has no declared weight")
    res = x.fiber_residual(n)
    if res > tol:
        raise NotHomogeneous(f"{x!r} is not of weight {n} (residual {res:.2e})")
    out = restrict(x, m) * cleave(-n, m, x.grid)
    out = restrict(out, m)
    out.weight = 0
    return out, n


# -- hybrid (function ⊗ symbol) algebra -------------------------------------------


class HybridElement:
    """``Σ fᵢ ⊗ wᵢ``: node values on a hemisphere paired with normal words."""

    __slots__ = ("algebra", "terms")

    def __init__(self, algebra: "HybridAlgebra", terms: dict):
        self.algebra = algebra
        self.terms = terms

    def max_abs(self) -> float:
        return max((float(np.max(np.abs(v))) if v.size else 0.0 for v in self.terms.values()), default=0.0)

    def __add__(self, other):
        return self.algebra.add(self, other)

    def __sub__(self, other):
        return self.algebra.add(self, self.algebra.scale(other, -1))

    def __mul__(self, other):
        if isinstance(other, HybridElement):
            return self.algebra.mul(self, other)
        return self.algebra.scale(self, other)

    __rmul__ = __mul__

    def __repr__(self):
        p = self.algebra.p
        parts = [p.format_word(w) for w in sorted(self.terms, key=deglex_key)]
        return f"HybridElement({self.algebra.mask.kind}: f ⊗ {{{', '.join(parts)}}})"


class HybridAlgebra:
    """``C(D) ⊗ O(SU_q(2))`` sampled on a hemisphere, at a rational ``q0``."""

    def __init__(self, grid: S3Grid, mask: HemisphereMask, p: Presentation, q0=Fraction(1, 2)):
        self.grid = grid
        self.mask = mask
        self.q0 = Fraction(q0)
        self.p = p if p.q_value is not None else p.specialize(self.q0)
        self.nodes = mask.nodes(grid)
        self._one = np.ones(int(self.nodes.sum()), dtype=complex)
        self._jcache: dict[int, np.ndarray] = {}

    def _coef(self, c) -> complex:
        if isinstance(c, QLaurent):
            return complex(c.evaluate(float(self.q0)))
        return complex(c)

    def one(self) -> HybridElement:
        return HybridElement(self, {(): self._one.copy()})

    def zero(self) -> HybridElement:
        return HybridElement(self, {})

    def pure(self, values: np.ndarray, x: Element) -> HybridElement:
        terms: dict = {}
        for w, c in x.terms.items():
            terms[w] = self._coef(c) * values
        return HybridElement(self, terms)

    def add(self, x: HybridElement, y: HybridElement) -> HybridElement:
        terms = dict(x.terms)
        for w, v in y.terms.items():
            terms[w] = terms[w] + v if w in terms else v
        return HybridElement(self, terms)

    def scale(self, x: HybridElement, c) -> HybridElement:
        k = self._coef(c)
        return HybridElement(self, {w: k * v for w, v in x.terms.items()})

    def mul(self, x: HybridElement, y: HybridElement) -> HybridElement:
        terms: dict = {}
        for w1, v1 in x.terms.items():
            for w2, v2 in y.terms.items():
                prod = v1 * v2
                for w, c in self.p.word_nf(w1 + w2).items():
                    t = self._coef(c) * prod
                    terms[w] = terms[w] + t if w in terms else t
        return HybridElement(self, terms)

    def coact(self, x: HybridElement) -> dict:
        hopf = hopf_of(self.p)
        buckets: dict = {}
        for w, v in x.terms.items():
            for (w1, w2), c in hopf.comultiply_word(w).terms.items():
                t = HybridElement(self, {w1: self._coef(c) * v})
                buckets[w2] = self.add(buckets[w2], t) if w2 in buckets else t
        return buckets

    def close(self, x: HybridElement, y: HybridElement, tol: float = 1e-10) -> tuple[bool, float]:
        diff = self.add(x, self.scale(y, -1))
        res = diff.max_abs()
        return res <= tol, res

    def cleave_values(self, n: int) -> np.ndarray:
        hit = self._jcache.get(n)
        if hit is None:
            hit = cleave(n, self.mask, self.grid).raw_values[self.nodes]
            self._jcache[n] = hit
        return hit

    def laurent_values(self, x: Element) -> np.ndarray:
        """``j(x)`` for ``x`` in O(U(1)), extended linearly."""
        from .comodule import u_exponent

        out = np.zeros_like(self._one)
        for w, c in x.terms.items():
            out = out + self._coef(c) * self.cleave_values(u_exponent(x.presentation, w))
        return out

    def prolonged_cleave_word(self, w: Word) -> HybridElement:
        hopf = hopf_of(self.p)
        pi = self.p.morphisms["pi"]
        terms: dict = {}
        for (w1, w2), c in hopf.comultiply_word(w).terms.items():
            img = pi.apply_word(w1)
            if img.is_zero():
                continue
            t = self._coef(c) * self.laurent_values(img)
            terms[w2] = terms[w2] + t if w2 in terms else t
        return HybridElement(self, terms)

    def prolonged_cleave(self, x: Element) -> HybridElement:
        out = self.zero()
        for w, c in x.terms.items():
            out = self.add(out, self.scale(self.prolonged_cleave_word(w), c))
        return out


def prolonged_cleave(x: Element, m: HemisphereMask, grid: S3Grid, q0=Fraction(1, 2)) -> HybridElement:
    """``ĵ(x) = Σ j(π(x₍₁₎)) ⊗ x₍₂₎`` as a hybrid element."""
    alg = HybridAlgebra(grid, m, x.presentation, q0)
    if x.presentation is not alg.p:
        x = alg.p.element((w, QLaurent.constant(c.evaluate(alg.q0))) for w, c in x.terms.items())
    return alg.prolonged_cleave(x)


def check_hybrid_relations(m: HemisphereMask, q0=Fraction(1, 2), tol: float = 1e-10,
                           p: Presentation | None = None, grid: S3Grid | None = None) -> Report:
    """Images under ``ĵ`` of every relation of ``p`` must vanish."""
    if p is None:
        from .presets import load_preset

        p = load_preset("suq2")
    q0 = Fraction(q0)
    if not 0 < q0 <= 1:
        raise ValueError(f"q0 must lie in (0, 1], got {q0}")
    grid = grid or S3Grid.build()
    alg = HybridAlgebra(grid, m, p, q0)
    sp = alg.p
    report = Report("prolongation", environment={"algebra": p.name, "mask": m.kind, "q": str(alg.q0),
                                                  "grid": grid.spec, "tol": tol})
    gens = {i: alg.prolonged_cleave_word((i,)) for i in range(len(sp.symbols))}

    def image(word):
        out = alg.one()
        for i in word:
            out = alg.mul(out, gens[i])
        return out

    from .ncpoly import format_terms

    for rel in sp.relations:
        acc = alg.zero()
        for w, c in rel:
            acc = alg.add(acc, alg.scale(image(w), c))
        res = acc.max_abs()
        report.add(f"j_{m.kind.lower()}({format_terms(sp, dict(rel))}) = 0", res <= tol, residual=res, exact=False)
    return report
