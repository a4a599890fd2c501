import random
from fractions import Fraction

import numpy as np
import pytest

from tametorus import (
    AffineMap,
    CapExceededError,
    DimensionMismatchError,
    IndependenceQuery,
    IntMatrix,
    convergence_probe,
    decide_semicascade,
    escape_probe,
    exp_grid_average,
    frequency_orbit,
    independence_check,
    mat_pow,
    reduce_angles,
    torus_dist,
    torus_grid,
)
from tametorus.dynamics import TWO_PI


class TestApply:
    def test_identity_map_fixes_points(self):
        phi = AffineMap(IntMatrix.identity(2))
        x = np.array([1.0, 2.5])
        assert np.allclose(phi.apply(x), x)

    def test_full_turn_wraps(self):
        phi = AffineMap(IntMatrix.identity(2), [np.pi, 0.0])
        assert np.allclose(phi.apply([np.pi, 0.0]), [0.0, 0.0])

    def test_shear_no_wrap(self):
        phi = AffineMap(IntMatrix([[1, 1], [0, 1]]))
        assert np.allclose(phi.apply([1.0, 2.0]), [3.0, 2.0])

    def test_dimension_mismatch(self):
        phi = AffineMap(IntMatrix.identity(2))
        with pytest.raises(DimensionMismatchError):
            phi.apply([1.0, 2.0, 3.0])
        with pytest.raises(DimensionMismatchError):
            AffineMap(IntMatrix.identity(2), [0.1])

    def test_matches_exact_rational_evaluation(self):
        # double-precision contract against exact Fraction arithmetic
        rng = random.Random(4242)
        a = IntMatrix([[1, 1], [1, 2]])
        for _ in range(50):
            rx = [Fraction(rng.randint(0, 63), 64) for _ in range(2)]
            rb = [Fraction(rng.randint(0, 31), 32) for _ in range(2)]
            phi = AffineMap(a, [float(v) * TWO_PI for v in rb])
            x = np.array([float(v) * TWO_PI for v in rx])
            exact = [
                float((sum(Fraction(a.entries[i][j]) * rx[j] for j in range(2)) + rb[i]) % 1)
                * TWO_PI
                for i in range(2)
            ]
            assert torus_dist(phi.apply(x), exact) < 1e-12

    def test_reduce_angles_range(self):
        out = reduce_angles(np.array([-1e-18, TWO_PI, 3 * np.pi, -np.pi]))
        assert np.all(out >= 0.0) and np.all(out < TWO_PI)


class TestOrbit:
    def test_identity_constant(self):
        phi = AffineMap(IntMatrix.identity(2))
        orb = phi.orbit([1.0, 2.0], 5)
        assert orb.shape == (6, 2)
        assert np.allclose(orb, orb[0])

    def test_negation_period_two(self):
        phi = AffineMap(IntMatrix([[-1]]))
        orb = phi.orbit([1.0], 2)
        assert np.allclose(orb[:, 0], [1.0, TWO_PI - 1.0, 1.0])

    def test_rotation_period_four(self):
        phi = AffineMap(IntMatrix([[0, -1], [1, 0]]))
        orb = phi.orbit([1.0, 0.0], 8)
        assert np.allclose(orb[0], orb[4])
        assert np.allclose(orb[4], orb[8])
        assert not np.allclose(orb[0], orb[1])

    def test_length_validation(self):
        with pytest.raises(ValueError):
            AffineMap(IntMatrix.identity(2)).orbit([0.0, 0.0], 0)


class TestFrequencyOrbit:
    def test_identity_constant(self):
        fo = frequency_orbit(IntMatrix.identity(2), (3, -4), 5)
        assert set(fo.terms) == {(3, -4)}

    def test_shear_marches_linearly(self):
        fo = frequency_orbit(IntMatrix([[1, 1], [0, 1]]), (1, 0), 3)
        assert fo.terms == ((1, 0), (1, 1), (1, 2), (1, 3))

    def test_rotation_cycles(self):
        fo = frequency_orbit(IntMatrix([[0, -1], [1, 0]]), (1, 0), 4)
        assert fo.terms[4] == fo.terms[0]
        assert len(set(fo.terms)) == 4

    def test_cross_check_against_mat_pow(self, named):
        for a in named.values():
            fo = frequency_orbit(a, (1, -2), 10)
            at = a.transpose()
            for n, term in enumerate(fo.terms):
                assert term == mat_pow(at, n).apply((1, -2))

    def test_eventual_periodicity_for_tame(self, tame_examples):
        for a in tame_examples:
            cert = decide_semicascade(a)
            p, q = cert.minimal_pair
            fo = frequency_orbit(a, (1, 1), q + 2 * (q - p) + 3)
            for n in range(p, len(fo.terms) - (q - p)):
                assert fo.terms[n + q - p] == fo.terms[n]


class TestEscapeProbe:
    def test_constant_never_escapes(self):
        fo = frequency_orbit(IntMatrix.identity(2), (1, 0), 10)
        assert escape_probe(fo, 1) == (False, None)

    def test_shear_escapes_linearly(self):
        fo = frequency_orbit(IntMatrix([[1, 1], [0, 1]]), (1, 0), 20)
        assert escape_probe(fo, 10) == (True, 11)

    def test_catmap_escapes_geometrically(self, named):
        fo = frequency_orbit(named["catmap"], (1, 0), 20)
        escaped, idx = escape_probe(fo, 1000)
        assert escaped and idx == 8
        assert fo.terms[8] == (1597, 987)

    def test_untame_examples_escape_basis_bound(self, named):
        # contrapositive probe: some basis frequency orbit escapes within
        # 200 steps; the shear grows linearly (term (1, n)), so its bound
        # is 150, while the cat map's geometric growth clears 10**6
        for a, bound in ((named["shear"], 150), (named["catmap"], 10 ** 6)):
            hit = False
            for j in range(a.d):
                u = tuple(1 if i == j else 0 for i in range(a.d))
                fo = frequency_orbit(a, u, 200)
                escaped, _ = escape_probe(fo, bound)
                hit = hit or escaped
            assert hit


class TestConvergenceProbe:
    def test_identity_full_list(self):
        phi = AffineMap(IntMatrix.identity(2))
        grid = torus_grid(2, 8)
        sub, dev = convergence_probe(phi, list(range(9)), grid, 1e-9)
        assert sub == list(range(9))
        assert dev == 0.0

    def test_rotation_residue_classes(self):
        phi = AffineMap(IntMatrix([[0, -1], [1, 0]]))
        grid = torus_grid(2, 8)
        sub, dev = convergence_probe(phi, list(range(9)), grid, 1e-9)
        assert sub == [0, 4, 8]
        assert dev == 0.0

    def test_shear_only_singletons(self):
        phi = AffineMap(IntMatrix([[1, 1], [0, 1]]))
        grid = torus_grid(2, 8)
        sub, dev = convergence_probe(phi, list(range(9)), grid, 1e-9)
        assert len(sub) == 1
        assert dev == 0.0

    def test_translation_chain_with_rational_b(self):
        # order-4 rotation with quarter-turn translation: iterates repeat
        # exactly with period 4
        phi = AffineMap(IntMatrix([[0, -1], [1, 0]]), [np.pi / 2, 0.0])
        grid = torus_grid(2, 16)
        sub, dev = convergence_probe(phi, list(range(21)), grid, 1e-9)
        assert len(sub) >= 5
        assert dev <= 1e-12

    def test_validation(self):
        phi = AffineMap(IntMatrix.identity(2))
        grid = torus_grid(2, 4)
        with pytest.raises(ValueError):
            convergence_probe(phi, [], grid, 1e-9)
        with pytest.raises(ValueError):
            convergence_probe(phi, [0, 1], grid, 0.0)
        with pytest.raises(DimensionMismatchError):
            convergence_probe(phi, [0, 1], torus_grid(3, 4), 1e-9)


class TestIndependenceCheck:
    def test_constant_function_fails(self):
        q = IndependenceQuery([np.zeros(16)], a=-1.0, b=1.0)
        assert independence_check(q) is False

    def test_empty_family_vacuous(self):
        assert independence_check(IndependenceQuery([], a=-1.0, b=1.0)) is True

    def test_rademacher_family_passes(self):
        n, g = 8, 256
        fns = [
            np.array([1.0 if (j >> k) & 1 else -1.0 for j in range(g)])
            for k in range(n)
        ]
        q = IndependenceQuery(fns, a=-0.5, b=0.5)
        assert independence_check(q) is True

    def test_missing_pattern_fails(self):
        # two identical functions can never realize P={1}, Q={2}
        f = np.array([-1.0, 1.0])
        q = IndependenceQuery([f, f], a=-0.5, b=0.5)
        assert independence_check(q) is False

    def test_monotone_under_removal(self):
        rng = np.random.default_rng(11)
        for _ in range(10):
            fns = [rng.choice([-1.0, 1.0], size=32) for _ in range(5)]
            q = IndependenceQuery(fns, a=-0.5, b=0.5)
            if independence_check(q):
                for skip in range(5):
                    sub = [f for i, f in enumerate(fns) if i != skip]
                    assert independence_check(IndependenceQuery(sub, a=-0.5, b=0.5))

    def test_cap(self):
        fns = [np.zeros(4) for _ in range(13)]
        with pytest.raises(CapExceededError):
            independence_check(IndependenceQuery(fns, a=-1.0, b=1.0))

    def test_threshold_validation(self):
        with pytest.raises(ValueError):
            IndependenceQuery([np.zeros(4)], a=1.0, b=-1.0)


class TestGridAverage:
    def test_zero_frequency_gives_one(self):
        assert abs(exp_grid_average((0, 0), 32) - 1.0) < 1e-12

    def test_multiples_of_grid_give_one(self):
        assert abs(exp_grid_average((32, -64), 32) - 1.0) < 1e-12
        assert abs(exp_grid_average((96,), 32) - 1.0) < 1e-12

    def test_other_frequencies_vanish(self):
        for lam in [(1, 0), (0, 1), (1, 2), (5, -3), (31, 33)]:
            assert abs(exp_grid_average(lam, 32)) < 1e-12

    def test_torus_grid_shape(self):
        g = torus_grid(2, 8)
        assert g.shape == (64, 2)
        assert g.min() == 0.0 and g.max() < TWO_PI
        # default per-axis count shrinks for high dimension
        assert torus_grid(4).shape[0] <= 32 ** 3
