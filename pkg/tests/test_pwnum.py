import csv
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from qbundle.hopf import is_cleaving_hom
from qbundle.pwnum import (
    EQUATOR,
    MASK_A,
    MASK_C,
    AliasingError,
    HybridAlgebra,
    NotHomogeneous,
    S3Grid,
    check_hybrid_relations,
    cleave,
    constant,
    coordinate,
    fourier_weight_project,
    hopf_map,
    omega,
    prolonged_cleave,
    restrict,
    trivialization_iso,
)


@pytest.fixture(scope="module")
def special():
    # pole, equator and a generic latitude
    return S3Grid.from_nodes([0.0, np.pi / 4, 1.1], [0.0, 0.7], [0.0, 2.0])


def test_grid_has_equator_ring(grid):
    assert grid.equator_index is not None
    assert grid.eta[grid.equator_index] == np.pi / 4
    assert S3Grid.build(7, 4, 4).equator_index is not None


def test_grid_points_on_sphere(grid):
    a, c = coordinate(grid, "a"), coordinate(grid, "c")
    assert np.max(np.abs(a.abs2().raw_values + c.abs2().raw_values - 1)) < 1e-14


def test_quadrature_moments(grid):
    a, c = coordinate(grid, "a"), coordinate(grid, "c")
    assert grid.integrate(np.ones(grid.shape)) == pytest.approx(1)
    assert grid.integrate(a.raw_values) == pytest.approx(0, abs=1e-15)
    # E|a|^4 = 1/3 and E|a|^2|c|^2 = 1/6 for the uniform measure on S^3
    assert grid.integrate((a.abs2() * a.abs2()).raw_values).real == pytest.approx(1 / 3, abs=1e-14)
    assert grid.integrate((a.abs2() * c.abs2()).raw_values).real == pytest.approx(1 / 6, abs=1e-14)


def test_coordinates_at_special_points(special):
    a, c = coordinate(special, "a"), coordinate(special, "c")
    assert np.allclose(a.raw_values[0], np.exp(1j * special.XI1[0]))
    assert np.all(c.raw_values[0] == 0)
    assert np.allclose(np.abs(a.raw_values[1]), 2 ** -0.5)
    assert np.allclose(np.abs(c.raw_values[1]), 2 ** -0.5)


def test_omega_values(special, grid):
    w = omega(special).raw_values
    assert np.allclose(w[1], np.sqrt(2), atol=1e-15)
    assert np.allclose(w[0], 1)
    a = coordinate(grid, "a")
    ww = omega(grid)
    res = restrict(ww * ww * a.abs2() - 1, MASK_A).masked_values()
    assert np.max(np.abs(res)) < 1e-12


def test_omega_product_identity(grid):
    a, c, w = coordinate(grid, "a"), coordinate(grid, "c"), omega(grid)
    prod = (1 - w * w * a.abs2()) * (1 - w * w * c.abs2())
    assert prod.max_abs() < 1e-12


def test_masks_cover_and_meet_at_equator(grid):
    A, C, E = MASK_A.nodes(grid), MASK_C.nodes(grid), EQUATOR.nodes(grid)
    assert np.all(A | C)
    assert np.array_equal(A & C, E)
    assert E[grid.equator_index].all()
    assert (MASK_A & MASK_C).kind == "E"


def test_restrict_idempotent(grid):
    a = coordinate(grid, "a")
    once = restrict(a, MASK_A)
    twice = restrict(once, MASK_A)
    assert np.array_equal(once.domain, twice.domain)
    assert np.isnan(once.values[~once.domain]).all()


def test_covering_detects_zero(grid):
    a, w = coordinate(grid, "a"), omega(grid)
    f = (1 - w * w * a.abs2()) * (1 - w * w * coordinate(grid, "c").abs2())
    assert restrict(f, MASK_A).max_abs() < 1e-12 and restrict(f, MASK_C).max_abs() < 1e-12
    assert f.max_abs() < 1e-12


def test_projector_examples(grid):
    a = coordinate(grid, "a")
    assert np.max(np.abs(fourier_weight_project(a, 1).raw_values - a.raw_values)) < 1e-12
    assert np.max(np.abs(fourier_weight_project(a, 2).raw_values)) < 1e-12
    aa = a.abs2()
    assert np.max(np.abs(fourier_weight_project(aa, 0).raw_values - aa.raw_values)) < 1e-12
    assert fourier_weight_project(a, 1).weight == 1


def test_projector_rejects_aliasing(grid):
    with pytest.raises(AliasingError):
        fourier_weight_project(coordinate(grid, "a"), 16)


def test_projector_generic_evaluation_matches_stack(grid):
    a, c = coordinate(grid, "a"), coordinate(grid, "c")
    f = a * a * c.conj() + c
    p = fourier_weight_project(f, 1)
    direct = p.evaluate(grid.a[:2, :2, :2], grid.c[:2, :2, :2])
    assert np.allclose(direct, p.raw_values[:2, :2, :2], atol=1e-14)


@given(st.integers(0, 3), st.integers(0, 3), st.integers(0, 2), st.integers(0, 2))
def test_weight_additivity(grid, i, j, k, l):
    a, c = coordinate(grid, "a"), coordinate(grid, "c")
    f = a ** i * c.conj() ** j
    g = c ** k * a.conj() ** l
    fg = f * g
    assert fg.weight == f.weight + g.weight == i - j + k - l
    assert fg.fiber_residual() < 1e-12


def test_mixed_weight_tag(grid):
    a, c = coordinate(grid, "a"), coordinate(grid, "c")
    assert (a + c.conj()).weight is None
    with pytest.raises(NotHomogeneous):
        trivialization_iso(a + c.conj(), MASK_A)


def test_cleave_examples(grid):
    for m in (MASK_A, MASK_C):
        assert np.allclose(cleave(0, m, grid).masked_values(), 1)
        assert np.max(np.abs(np.abs(cleave(1, m, grid).masked_values()) - 1)) < 1e-12
        lhs = (cleave(2, m, grid) * cleave(-1, m, grid)).masked_values()
        assert np.max(np.abs(lhs - cleave(1, m, grid).masked_values())) < 1e-12
        assert cleave(-3, m, grid).weight == -3


@pytest.mark.parametrize("m,n", [(MASK_A, 2), (MASK_C, -3), (MASK_A, -1)])
def test_cleave_convolution_inverse(grid, m, n):
    prod = cleave(n, m, grid) * cleave(-n, m, grid)
    assert np.max(np.abs(prod.masked_values() - 1)) < 1e-12


def test_trivialization_examples(grid):
    a, c = coordinate(grid, "a"), coordinate(grid, "c")
    y, n = trivialization_iso(a, MASK_A)
    assert n == 1
    assert np.max(np.abs(y.masked_values() - np.abs(a.raw_values[MASK_A.nodes(grid)]))) < 1e-12
    y, n = trivialization_iso(constant(grid, 1), MASK_C)
    assert n == 0 and np.allclose(y.masked_values(), 1)
    y, n = trivialization_iso(c * c, MASK_C)
    assert n == 2
    assert np.max(np.abs(y.masked_values() - c.abs2().raw_values[MASK_C.nodes(grid)])) < 1e-12


def test_hopf_map_lands_on_sphere(grid):
    x, z = hopf_map(grid)
    r = x.abs2().raw_values + z.raw_values ** 2
    assert np.max(np.abs(r - 1)) < 1e-14
    assert x.weight == 0 and z.weight == 0


def test_csv_dump(tmp_path, special):
    f = restrict(coordinate(special, "a"), MASK_A)
    path = tmp_path / "a.csv"
    f.to_csv(path)
    rows = list(csv.reader(open(path)))
    assert rows[0] == ["eta", "xi1", "xi2", "re", "im"]
    assert len(rows) - 1 == int(MASK_A.nodes(special).sum())
    eta, x1, x2, re, im = map(float, rows[1])
    assert complex(re, im) == pytest.approx(np.cos(eta) * np.exp(1j * x1))


# -- prolonged cleaving ------------------------------------------------------------


@pytest.fixture(scope="module")
def small():
    return S3Grid.build(5, 6, 6)


def test_prolonged_examples(small, suq2):
    alg = HybridAlgebra(small, MASK_A, suq2, Fraction(1, 2))
    sp = alg.p
    ja = alg.prolonged_cleave(sp.gen("alpha"))
    assert set(ja.terms) == {(sp.index("alpha"),)}
    assert np.allclose(ja.terms[(sp.index("alpha"),)], alg.cleave_values(1))
    jg = alg.prolonged_cleave(sp.gen("gamma"))
    assert set(jg.terms) == {(sp.index("gamma"),)}
    assert np.allclose(jg.terms[(sp.index("gamma"),)], alg.cleave_values(-1))
    one = alg.prolonged_cleave(sp.one())
    assert alg.close(one, alg.one(), 0.0)[0]


def test_prolonged_cleave_function(small, suq2):
    h = prolonged_cleave(suq2.gen("alpha"), MASK_C, small, Fraction(1, 2))
    assert h.algebra.mask is MASK_C


@pytest.mark.parametrize("m", [MASK_A, MASK_C])
def test_hybrid_relations(small, m):
    report = check_hybrid_relations(m, Fraction(1, 2), 1e-10, grid=small)
    assert report.passed
    assert len(report.checks) == 5


def test_hybrid_relations_classical(small, su2):
    report = check_hybrid_relations(MASK_A, 1, 1e-12, su2, small)
    assert report.passed


def test_hybrid_q_range(small):
    with pytest.raises(ValueError):
        check_hybrid_relations(MASK_A, 2, grid=small)


@pytest.mark.parametrize("m", [MASK_A, MASK_C])
def test_prolonged_is_cleaving_hom(small, suq2, m):
    alg = HybridAlgebra(small, m, suq2, Fraction(1, 3))
    report = is_cleaving_hom(alg.prolonged_cleave_word, alg.p, alg, max_degree=2, tol=1e-10)
    assert report.passed, report.to_text()
