"""Named verification suites shared by the CLI and the acceptance tests."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .comodule import (
    coaction_of,
    coaction_via_hopf,
    cotensor_basis,
    cotensor_check,
    homogeneity_report,
    u_exponent,
    verify_strong_connection,
)
from .hopf import TensorElement, is_cleaving_hom, verify_hopf_axioms, verify_relation_compat
from .ncpoly import Presentation, check_local_confluence, normal_form
from .report import Report

SUITES = (
    "relations",
    "hopf-axioms",
    "confluence",
    "coaction",
    "cotensor",
    "connection",
    "numeric-identities",
    "cleaving",
    "prolongation",
    "obstruction",
)


class SuiteError(ValueError):
    """Unknown suite or inconsistent options."""


@dataclass
class SuiteOptions:
    algebra: str = "suq2"
    presentation: str | None = None
    q: Fraction = Fraction(1, 2)
    max_degree: int = 4
    grid: tuple[int, int, int] = (48, 48, 48)
    fiber_samples: int = 32
    equator_samples: tuple[int, ...] = (64, 256, 1024)
    tol: float = 1e-10
    skip_confluence: bool = False
    bidegree: tuple[int, int] = (3, 3)
    connection_range: int = 4
    group_degree: int = 6
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    def validate(self) -> None:
        if self.q <= 0:
            raise SuiteError(f"q must be positive, got {self.q}")
        if self.max_degree < 0:
            raise SuiteError("max-degree must be non-negative")
        if any(n < 1 for n in self.grid):
            raise SuiteError(f"grid sizes must be positive, got {self.grid}")
        if self.fiber_samples < 2:
            raise SuiteError("need at least two fiber samples")
        if self.tol <= 0:
            raise SuiteError("tol must be positive")
        if not self.equator_samples or any(m < 3 for m in self.equator_samples):
            raise SuiteError("equator samples must be at least 3")

    def environment(self, **extra) -> dict:
        env = {"algebra": self.algebra}
        if self.presentation:
            env["presentation"] = self.presentation
        env.update(extra)
        return env

    def presentation_obj(self) -> Presentation:
        hit = self._cache.get("p")
        if hit is None:
            hit = load_presentation(self.algebra, self.presentation, self.skip_confluence)
            self._cache["p"] = hit
        return hit

    def s3grid(self):
        from .pwnum import S3Grid

        hit = self._cache.get("grid")
        if hit is None:
            hit = S3Grid.build(*self.grid, fiber_samples=self.fiber_samples)
            self._cache["grid"] = hit
        return hit

    def numeric_algebra(self) -> Presentation:
        """Symbolic side of the hybrid algebra: su2 at q = 1, else suq2."""
        from .presets import load_preset

        if self.presentation is None and self.algebra in ("suq2", "su2"):
            return load_preset("su2" if self.q == 1 else "suq2")
        return self.presentation_obj()


def load_presentation(name: str, path: str | None = None, skip_confluence: bool = False) -> Presentation:
    """Preset by name, or the block ``name`` (or the only block) of a DSL file."""
    if path is None:
        from .presets import PRESETS, load_preset

        if name not in PRESETS:
            raise SuiteError(f"unknown algebra {name!r}; presets are {sorted(PRESETS)}")
        return load_preset(name)
    from .dsl import load_file

    blocks = load_file(path, check_confluence=not skip_confluence)
    if name in blocks:
        return blocks[name]
    if len(blocks) == 1:
        return next(iter(blocks.values()))
    raise SuiteError(f"{path} defines {sorted(blocks)}; choose one with --algebra")


# -- symbolic suites ----------------------------------------------------------------


def suite_relations(opts: SuiteOptions) -> Report:
    p = opts.presentation_obj()
    report = Report("relations", environment=opts.environment())
    with report.timed() as t:
        child = verify_relation_compat(p)
    report.checks.extend(child.checks)
    for name, m in sorted(p.morphisms.items()):
        bad = m.respects_relations()
        report.add(f"morphism {name} respects relations", not bad,
                   witness=p.format_word(bad[0]) if bad else None)
    if not report.checks:
        report.add("presentation declares relations", False, witness="no relations or Hopf data")
    report.checks[0].runtime = t["runtime"]
    return report


def suite_hopf_axioms(opts: SuiteOptions) -> Report:
    p = opts.presentation_obj()
    report = Report("hopf-axioms", environment=opts.environment(max_degree=opts.max_degree))
    main = verify_hopf_axioms(p, opts.max_degree)
    report.checks.extend(main.checks)
    pi = p.morphisms.get("pi")
    if pi is not None and pi.target is not p:
        group = verify_hopf_axioms(pi.target, opts.group_degree)
        group.suite = f"hopf-axioms:{pi.target.name}"
        group.environment = {"algebra": pi.target.name, "max_degree": opts.group_degree}
        report.children.append(group)
    return report


def suite_confluence(opts: SuiteOptions) -> Report:
    p = opts.presentation_obj()
    report = Report("confluence", environment=opts.environment())
    with report.timed() as t:
        conf = check_local_confluence(p)
    failures = conf.failures
    report.add(
        f"all {len(conf.overlaps)} overlaps resolve",
        conf.confluent,
        witness=p.format_word(failures[0].word) if failures else None,
        detail={"overlaps": len(conf.overlaps), "failures": len(failures)},
        runtime=t["runtime"],
    )
    if p.has_symbol("alpha") and p.has_symbol("gamma") and p.has_symbol("alpha^*"):
        comm = normal_form(p.parse("alpha*alpha^* - alpha^**alpha"))
        want = p.parse("(1 - q^2)*gamma*gamma^*")
        report.add("nf(alpha alpha^* - alpha^* alpha) = (1 - q^2) gamma gamma^*", comm == want,
                   witness=None if comm == want else str(comm), detail={"normal_form": str(comm)})
    return report


def _weight_via_hopf(t: TensorElement, leg: int) -> set[int]:
    U = t.legs[leg]
    return {u_exponent(U, words[leg]) for words, _ in t.items()}


def suite_coaction(opts: SuiteOptions) -> Report:
    p = opts.presentation_obj()
    report = Report("coaction", environment=opts.environment(max_degree=opts.max_degree))
    report.checks.extend(homogeneity_report(p).checks)
    if "pi" not in p.morphisms or p.hopf is None:
        return report
    words = p.normal_words(opts.max_degree)
    for side, leg in (("right", 1), ("left", 0)):
        if side not in p.coactions:
            continue
        spec = coaction_of(p, side)
        bad = None
        for w in words:
            got = _weight_via_hopf(coaction_via_hopf(p.word(w), side), leg)
            if got != {spec.weight(w)}:
                bad = p.format_word(w)
                break
        report.add(f"{side} weights agree with the coaction derived from Delta on {len(words)} normal words",
                   bad is None, witness=bad)
    return report


def suite_cotensor(opts: SuiteOptions) -> Report:
    p = opts.presentation_obj()
    d1, d2 = opts.bidegree
    report = Report("cotensor", environment=opts.environment(bidegree=[d1, d2]))
    if "pi" not in p.morphisms or p.hopf is None:
        report.add("presentation has Hopf data and pi", False, witness=p.name)
        return report
    # independent oracle: weights read off from the Hopf coproduct
    right = {w: _weight_via_hopf(coaction_via_hopf(p.word(w), "right"), 1) for w in p.normal_words(d1)}
    left = {w: _weight_via_hopf(coaction_via_hopf(p.word(w), "left"), 0) for w in p.normal_words(d2)}
    accepted = rejected = 0
    bad = None
    for pw, rw in right.items():
        for hw, lw in left.items():
            t = TensorElement.from_terms((p, p), [((pw, hw), 1)])
            expect = rw == lw
            got = bool(cotensor_check(t))
            if got != expect and bad is None:
                bad = f"[{p.format_word(pw)}, {p.format_word(hw)}]"
            accepted += got
            rejected += not got
    report.add("cotensor_check matches the brute-force oracle", bad is None, witness=bad,
               detail={"accepted": accepted, "rejected": rejected})
    basis = set(cotensor_basis(p, p, (d1, d2)))
    oracle = {(pw, hw) for pw, rw in right.items() for hw, lw in left.items() if rw == lw}
    report.add("cotensor_basis equals the oracle basis", basis == oracle,
               detail={"size": len(basis)})
    return report


def suite_connection(opts: SuiteOptions) -> Report:
    p = opts.presentation_obj()
    N = opts.connection_range
    report = Report("connection", environment=opts.environment(range=N))
    for n in range(-N, N + 1):
        with report.timed() as t:
            sub = verify_strong_connection(n, p)
        for c in sub.checks:
            c.runtime = t["runtime"]
        report.checks.extend(sub.checks)
    return report


# -- numeric suites ---------------------------------------------------------------


def suite_numeric_identities(opts: SuiteOptions) -> Report:
    from .pwnum import MASK_A, MASK_C, coordinate, fourier_weight_project, omega

    g = opts.s3grid()
    report = Report("numeric-identities", environment=opts.environment(
        grid=g.spec, fiber_samples=g.fiber_samples))
    a, c, w = coordinate(g, "a"), coordinate(g, "c"), omega(g)
    A, C = MASK_A.nodes(g), MASK_C.nodes(g)

    def record(name, values, bound):
        res = float(np.max(np.abs(values))) if np.size(values) else 0.0
        report.add(name, res < bound, residual=res, exact=False, detail={"bound": bound})

    aa, cc, ww = a.abs2().raw_values.real, c.abs2().raw_values.real, w.raw_values.real
    record("|a|^2 + |c|^2 - 1", aa + cc - 1, 1e-14)
    record("(1 - w^2|a|^2)(1 - w^2|c|^2)", (1 - ww ** 2 * aa) * (1 - ww ** 2 * cc), 1e-12)
    record("w^2|a|^2 - 1 on mask A", (ww ** 2 * aa - 1)[A], 1e-12)
    record("w^2|c|^2 - 1 on mask C", (ww ** 2 * cc - 1)[C], 1e-12)
    report.add("masks A and C cover every node", bool(np.all(A | C)))
    eq = g.equator_index
    report.add("equator ring lies in both masks", eq is not None and bool(np.all((A & C)[eq])))
    mean = g.integrate(aa)
    report.add("quadrature: mean of |a|^2 is 1/2", abs(mean - 0.5) < 1e-12, residual=abs(mean - 0.5), exact=False)

    K = g.fiber_samples
    record("P_1(a) - a", fourier_weight_project(a, 1).raw_values - a.raw_values, 1e-12)
    for m in (-2, -1, 0, 2):
        if 2 * abs(m) < K:
            record(f"P_{m}(a)", fourier_weight_project(a, m).raw_values, 1e-12)
    ws = [n for n in range(-3, 4) if 2 * abs(n) < K]
    worst, witness = 0.0, None
    with report.timed() as t:
        for i in range(4):
            for j in range(4):
                f = a ** i * c.conj() ** j
                for m in ws:
                    pm = fourier_weight_project(f, m)
                    for n in ws:
                        pnm = fourier_weight_project(pm, n)
                        want = pm.raw_values if n == m else 0.0
                        res = float(np.max(np.abs(pnm.raw_values - want)))
                        if res > worst:
                            worst, witness = res, f"a^{i} conj(c)^{j}, n={n}, m={m}"
                del f
    report.add("P_n P_m = delta_nm P_n on a^i conj(c)^j, i,j <= 3", worst < opts.tol, residual=worst,
               exact=False, witness=None if worst < opts.tol else witness, runtime=t["runtime"])
    return report


def suite_cleaving(opts: SuiteOptions) -> Report:
    from .pwnum import MASK_A, MASK_C, cleave, coordinate, trivialization_iso

    g = opts.s3grid()
    report = Report("cleaving", environment=opts.environment(grid=g.spec, tol=opts.tol))
    a, c = coordinate(g, "a"), coordinate(g, "c")
    for m in (MASK_A, MASK_C):
        k = m.kind.lower()
        dom = m.nodes(g)
        js = {n: cleave(n, m, g).raw_values[dom] for n in range(-6, 7)}
        worst = max(float(np.max(np.abs(js[s + t] - js[s] * js[t]))) for s in range(-3, 4) for t in range(-3, 4))
        report.add(f"j_{k}(u^(m+n)) = j_{k}(u^m) j_{k}(u^n), |m|,|n| <= 3", worst < opts.tol,
                   residual=worst, exact=False)
        unit = float(np.max(np.abs(np.abs(js[1]) - 1)))
        report.add(f"|j_{k}(u)| = 1 on mask {m.kind}", unit < 1e-12, residual=unit, exact=False)
        inv = max(float(np.max(np.abs(js[n] * js[-n] - 1))) for n in range(-3, 4))
        report.add(f"j_{k}(u^n) j_{k}(S(u^n)) = 1", inv < opts.tol, residual=inv, exact=False)
        for label, x in (("a", a), ("conj(c)", c.conj()), ("a^2 conj(c)", a * a * c.conj())):
            y, n = trivialization_iso(x, m)
            back = (y * cleave(n, m, g)).raw_values[dom]
            res = float(np.max(np.abs(back - x.raw_values[dom])))
            fiber = y.fiber_residual(0)
            report.add(f"trivialization round trip for {label} on mask {m.kind}",
                       res < opts.tol and fiber < opts.tol, residual=max(res, fiber), exact=False,
                       detail={"weight": n, "fiber_residual": fiber})
    return report


def suite_prolongation(opts: SuiteOptions) -> Report:
    from .pwnum import MASK_A, MASK_C, HybridAlgebra, S3Grid, check_hybrid_relations
    from .presets import load_preset

    g = opts.s3grid()
    p = opts.numeric_algebra()
    q = opts.q if p.name != "su2" else Fraction(1)
    report = Report("prolongation", environment=opts.environment(grid=g.spec, q=str(q), tol=opts.tol))
    for m in (MASK_A, MASK_C):
        report.children.append(check_hybrid_relations(m, q, opts.tol, p, g))
    # the cleaving-map axioms need only a few nodes per hemisphere
    small = S3Grid.build(5, 6, 6, fiber_samples=opts.fiber_samples)
    for m in (MASK_A, MASK_C):
        alg = HybridAlgebra(small, m, p, q)
        sub = is_cleaving_hom(alg.prolonged_cleave_word, alg.p, alg, max_degree=2, tol=opts.tol)
        sub.suite = f"cleaving-hom:{m.kind}"
        report.children.append(sub)
    if q != 1 and p.name == "suq2":
        classical = check_hybrid_relations(MASK_A, 1, 1e-12, load_preset("su2"), g)
        classical.suite = "prolongation:classical-control"
        report.children.append(classical)
    return report


def suite_obstruction(opts: SuiteOptions) -> Report:
    from .obstruction import obstruction_verdict

    g = opts.s3grid()
    report = Report("obstruction", environment=opts.environment(
        grid=g.spec, equator_samples=list(opts.equator_samples)))
    windings = []
    for M in opts.equator_samples:
        sub = obstruction_verdict(g, M)
        sub.suite = f"obstruction:M={M}"
        windings.append(sub.summary["winding"])
        report.children.append(sub)
    last = report.children[-1].summary
    report.add("winding stable under refinement", len(set(windings)) == 1,
               detail={"windings": windings})
    report.summary = dict(last, samples=list(opts.equator_samples))
    report.notes.extend(report.children[-1].notes)
    return report


RUNNERS = {
    "relations": suite_relations,
    "hopf-axioms": suite_hopf_axioms,
    "confluence": suite_confluence,
    "coaction": suite_coaction,
    "cotensor": suite_cotensor,
    "connection": suite_connection,
    "numeric-identities": suite_numeric_identities,
    "cleaving": suite_cleaving,
    "prolongation": suite_prolongation,
    "obstruction": suite_obstruction,
}


def run_suite(name: str, options: SuiteOptions | None = None) -> Report:
    opts = options or SuiteOptions()
    opts.validate()
    if name == "all":
        report = Report("all", environment=opts.environment(max_degree=opts.max_degree, q=str(opts.q)))
        for suite in SUITES:
            with report.timed() as t:
                sub = RUNNERS[suite](opts)
            sub.environment["runtime"] = round(t["runtime"], 6)
            report.children.append(sub)
        return report
    try:
        runner = RUNNERS[name]
    except KeyError:
        raise SuiteError(f"unknown suite {name!r}; choose from {', '.join(SUITES + ('all',))}") from None
    return runner(opts)
