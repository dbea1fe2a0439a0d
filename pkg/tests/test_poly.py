import numpy as np
import pytest

from eigensolver.core.lattice import minkowski_sum
from eigensolver.core.poly import (
    Polynomial,
    PolySystem,
    Support,
    backward_error,
    evaluate,
    lex_unique,
    monomial_vector,
    random_coefficients,
    random_polynomial,
)


def test_support_is_sorted_lexicographically():
    S = Support.of([(1, 0), (0, 2), (0, 0), (1, 0)])
    assert S.exponents == ((0, 0), (0, 2), (1, 0))
    assert len(S) == 3
    assert (0, 2) in S


def test_running_example_d_order_gives_evaluation_vector(running):
    D = running.tuple.D
    assert monomial_vector((-1, 1), D).real.tolist() == [1, 1, 1, -1, -1, -1, 1, 1]


def test_support_rejects_bad_exponents():
    with pytest.raises(ValueError):
        Support.of([(0, -1)])
    with pytest.raises(ValueError):
        Support.of([(0, 1), (1, 0, 0)])


def test_locate_returns_minus_one_outside():
    S = Support.of([(0, 0), (1, 0), (0, 1)])
    pos = S.locate(np.array([[1, 0], [2, 0], [0, 1], [5, 5]]))
    assert pos.tolist() == [1, -1, 2, -1]


def test_locate_with_huge_exponents_falls_back_to_index():
    S = Support.of([(0,) * 8, (2**9,) * 8])
    assert S.locate(np.array([(2**9,) * 8, (1,) * 8])).tolist() == [1, -1]


def test_set_operations():
    A = Support.of([(0, 0), (1, 0)])
    B = Support.of([(1, 0), (0, 1)])
    assert A.union(B).exponents == ((0, 0), (0, 1), (1, 0))
    assert A.difference(B).exponents == ((0, 0),)
    assert A.shifted((0, 1)).exponents == ((0, 1), (1, 1))
    assert not A.issubset(B)
    assert Support((), 2).issubset(B)


def test_lex_unique():
    pts = np.array([[1, 1], [0, 3], [1, 1], [0, 0]])
    assert lex_unique(pts).tolist() == [[0, 0], [0, 3], [1, 1]]


def test_polynomial_drops_zeros_and_sums_duplicates():
    p = Polynomial.from_arrays(np.array([[0, 0], [1, 0], [0, 0]]), [1, 0, 2])
    assert p.terms == {(0, 0): 3 + 0j}
    assert p.support.exponents == ((0, 0),)


def test_evaluate_and_zero_power_convention():
    p = Polynomial({(0, 0): 1, (1, 0): 2, (0, 2): -1}, 2)
    assert evaluate(p, (0, 0)) == 1
    assert p((2, 3)) == pytest.approx(1 + 4 - 9)


def test_evaluate_rejects_wrong_length():
    p = Polynomial.constant(1, 2)
    with pytest.raises(ValueError):
        p((1, 2, 3))


def test_polynomial_arithmetic():
    x = Polynomial.monomial((1, 0))
    y = Polynomial.monomial((0, 1))
    one = Polynomial.constant(1, 2)
    f = (one + x) * (one - y)
    assert f.terms == {(0, 0): 1, (1, 0): 1, (0, 1): -1, (1, 1): -1}
    assert (2 * x).coefficient((1, 0)) == 2
    assert x.shift((1, 2)).terms == {(2, 2): 1}
    assert (x - x).is_zero


def test_square_of_f0_matches_expansion(running):
    f0 = running.extras["f0"]
    sq = f0 * f0
    z = (0.3, -1.7)
    assert sq(z) == pytest.approx(f0(z) ** 2)
    assert sq.coefficient((1, 0)) == 6


def test_backward_error_vanishes_at_root(running):
    assert backward_error(running.system, (-1, 1)) == pytest.approx(0, abs=1e-15)
    assert backward_error(running.system, (1, 1)) > 1e-2


def test_backward_error_formula():
    f = Polynomial({(0,): 1, (1,): 1}, 1)
    # |1 + 2| / (|1| + |2| + 1)
    assert backward_error([f], (2,)) == pytest.approx(3 / 4)


def test_polysystem_requires_equal_dimensions():
    with pytest.raises(ValueError):
        PolySystem((Polynomial.constant(1, 1), Polynomial.constant(1, 2)))
    with pytest.raises(ValueError):
        PolySystem(())


def test_random_polynomial_has_full_support(rng):
    A = Support.of([(0, 0), (1, 0), (0, 1), (1, 1)])
    p = random_polynomial(A, rng)
    assert p.support == A
    assert np.all(p.coefficients.imag == 0)
    q = random_polynomial(A, rng, "complex")
    assert np.any(q.coefficients.imag != 0)


def test_random_coefficients_reproducible():
    a = random_coefficients(5, np.random.default_rng(3))
    b = random_coefficients(5, np.random.default_rng(3))
    assert np.array_equal(a, b)
    with pytest.raises(ValueError):
        random_coefficients(3, np.random.default_rng(3), "uniform")


def _point_in_disc(rng, n, radius=2.0):
    return radius * rng.random(n) * np.exp(2j * np.pi * rng.random(n))


def test_evaluate_is_additive_and_commutes_with_monomial_shifts(rng):
    A = Support.of([(0, 0), (1, 0), (0, 2), (3, 1)])
    B = Support.of([(0, 0), (1, 1), (2, 2)])
    beta = (2, 1)
    for _ in range(10):
        p = random_polynomial(A, rng, "complex")
        q = random_polynomial(B, rng, "complex")
        z = _point_in_disc(rng, 2)
        pz, qz = evaluate(p, z), evaluate(q, z)
        assert abs(evaluate(p + q, z) - (pz + qz)) <= 1e-12 * (abs(pz) + abs(qz))
        zb = z[0] ** 2 * z[1]
        assert abs(evaluate(p.shift(beta), z) - zb * pz) <= 1e-12 * abs(zb * pz)


def test_monomial_vector_respects_minkowski_sums(rng):
    E1 = Support.of([(0, 0), (1, 0), (0, 3)])
    E2 = Support.of([(0, 0), (2, 1), (1, 1)])
    total = minkowski_sum(E1, E2)
    z = _point_in_disc(rng, 2)
    v1, v2, v = monomial_vector(z, E1), monomial_vector(z, E2), monomial_vector(z, total)
    for a, alpha in enumerate(E1):
        for b, beta in enumerate(E2):
            k = total.index[tuple(x + y for x, y in zip(alpha, beta))]
            assert v[k] == pytest.approx(v1[a] * v2[b], rel=1e-12)


def test_backward_error_scaling_only_meets_the_regularising_one(running, rng):
    # |c·f(z)| / (|c|·Σ|c_α z^α| + 1)
    z = _point_in_disc(rng, 2)
    f = running.system[0]
    terms = f.coefficients * monomial_vector(z, f.support)
    r, S = abs(terms.sum()), np.abs(terms).sum()
    for c in [3.0, -0.25, 2e5j]:
        assert backward_error([f.scale(c)], z) == pytest.approx(abs(c) * r / (abs(c) * S + 1), rel=1e-12)
    assert backward_error([f.scale(1e12)], z) == pytest.approx(r / S, rel=1e-11)


def test_backward_error_averages_over_equations(running, rng):
    z = _point_in_disc(rng, 2)
    parts = [backward_error([f], z) for f in running.system]
    assert backward_error(running.system, z) == pytest.approx(sum(parts) / 3, rel=1e-14)
