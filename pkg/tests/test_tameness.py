import random
from itertools import product

import pytest

from tametorus import (
    CASCADE,
    NON_SQUAREFREE,
    ORDER_BOUND_EXHAUSTED,
    SEMICASCADE,
    TAME,
    UNTAME,
    DeterminantNotUnitError,
    IntMatrix,
    RatPoly,
    TamenessCertificate,
    certificate_check,
    decide_cascade,
    decide_semicascade,
    euler_phi,
    inverse_phi,
    mat_mul,
    mat_pow,
    oracle_semicascade,
    order_bound,
    order_of_x_mod,
)


class TestInversePhi:
    def test_phi_one(self):
        assert inverse_phi(1) == {1, 2}

    def test_phi_two(self):
        assert inverse_phi(2) == {3, 4, 6}

    def test_phi_odd_above_one_empty(self):
        # phi(n) is even for n >= 3
        assert inverse_phi(3) == set()
        assert inverse_phi(5) == set()

    def test_consistency_with_phi(self):
        for m in range(1, 9):
            for n in inverse_phi(m):
                assert euler_phi(n) == m

    def test_rejects_nonpositive(self):
        with pytest.raises(ValueError):
            inverse_phi(0)


class TestOrderBound:
    @pytest.mark.parametrize("d,s_max", [(1, 2), (2, 6), (3, 6), (4, 12), (6, 30)])
    def test_known_values(self, d, s_max):
        assert order_bound(d).s_max == s_max

    def test_one_is_admissible(self):
        for d in range(1, 7):
            table = order_bound(d)
            assert 1 in table.admissible_orders
            assert table.s_max >= 1

    def test_monotone_in_d(self):
        values = [order_bound(d).s_max for d in range(1, 11)]
        assert values == sorted(values)

    def test_admissible_orders_by_phi(self):
        table = order_bound(2)
        assert table.admissible_orders == frozenset({1, 2, 3, 4, 6})


class TestOrderOfXMod:
    def test_x_minus_one(self):
        assert order_of_x_mod(RatPoly([-1, 1]), 6) == 1

    def test_x_squared_plus_one(self):
        assert order_of_x_mod(RatPoly([1, 0, 1]), 6) == 4

    def test_catmap_poly_has_no_order(self):
        assert order_of_x_mod(RatPoly([1, -3, 1]), 6) is None

    def test_sixth_cyclotomic(self):
        assert order_of_x_mod(RatPoly([1, -1, 1]), 6) == 6

    def test_zero_constant_term_rejected(self):
        with pytest.raises(ValueError):
            order_of_x_mod(RatPoly([0, 1]), 6)

    def test_zero_poly_rejected(self):
        with pytest.raises(ValueError):
            order_of_x_mod(RatPoly.zero(), 6)


class TestDecideSemicascade:
    def test_identity(self, named):
        cert = decide_semicascade(named["identity"])
        assert cert.verdict == TAME
        assert cert.minimal_pair == (0, 1)
        assert (cert.index_k, cert.period_s) == (0, 1)

    def test_shear_untame_non_squarefree(self, named):
        cert = decide_semicascade(named["shear"])
        assert cert.verdict == UNTAME
        assert cert.witness.reason == NON_SQUAREFREE
        assert cert.witness.stripped_min_poly == RatPoly([1, -2, 1])

    def test_nilpotent(self, named):
        cert = decide_semicascade(named["nilpotent"])
        assert cert.verdict == TAME
        assert cert.minimal_pair == (2, 3)

    def test_catmap_untame_exhausted(self, named):
        cert = decide_semicascade(named["catmap"])
        assert cert.verdict == UNTAME
        assert cert.witness.reason == ORDER_BOUND_EXHAUSTED
        assert cert.witness.s_max == 6

    def test_projector(self, named):
        cert = decide_semicascade(named["projector"])
        assert cert.verdict == TAME
        assert cert.minimal_pair == (1, 2)

    def test_zero_matrix(self):
        cert = decide_semicascade(IntMatrix.zero(2))
        assert cert.minimal_pair == (1, 2)

    def test_d1_scalars(self):
        assert decide_semicascade(IntMatrix([[1]])).minimal_pair == (0, 1)
        assert decide_semicascade(IntMatrix([[-1]])).minimal_pair == (0, 2)
        assert decide_semicascade(IntMatrix([[0]])).minimal_pair == (1, 2)
        assert decide_semicascade(IntMatrix([[2]])).verdict == UNTAME

    def test_d3_mixed_index_and_period(self):
        # nilpotent 2x2 block plus a -1 block: A^2 = A^4, nothing smaller
        a = IntMatrix([[0, 1, 0], [0, 0, 0], [0, 0, -1]])
        cert = decide_semicascade(a)
        assert cert.verdict == TAME
        assert (cert.index_k, cert.period_s) == (2, 2)
        assert cert.minimal_pair == (2, 4)
        assert oracle_semicascade(a) == (TAME, (2, 4))

    def test_d3_cyclic_permutation(self):
        perm = IntMatrix([[0, 1, 0], [0, 0, 1], [1, 0, 0]])
        cert = decide_cascade(perm)
        assert cert.verdict == TAME and cert.minimal_order_m == 3
        semi = decide_semicascade(perm)
        assert semi.minimal_pair == (0, 3)

    def test_d3_companion_untame(self):
        # companion of x^3 - x - 1 (the plastic number): unimodular, but the
        # spectrum leaves the unit circle, so powers never repeat
        a = IntMatrix([[0, 0, 1], [1, 0, 1], [0, 1, 0]])
        cert = decide_semicascade(a)
        assert cert.verdict == UNTAME
        assert oracle_semicascade(a) == (UNTAME, None)


class TestDecideCascade:
    def test_rotation_order_four(self, named):
        cert = decide_cascade(named["rot4"])
        assert cert.verdict == TAME
        assert cert.minimal_order_m == 4
        assert cert.kind == CASCADE

    def test_order_six(self, named):
        cert = decide_cascade(named["rot6"])
        assert cert.minimal_order_m == 6

    def test_shear_untame(self, named):
        cert = decide_cascade(named["shear"])
        assert cert.verdict == UNTAME
        assert cert.kind == CASCADE

    def test_determinant_not_unit(self, named):
        with pytest.raises(DeterminantNotUnitError):
            decide_cascade(named["projector"])

    def test_consistency_with_semicascade(self):
        # over all |det| = 1 matrices with entries in {-1, 0, 1}
        for combo in product((-1, 0, 1), repeat=4):
            a = IntMatrix([combo[:2], combo[2:]])
            if abs(a.det()) != 1:
                continue
            casc = decide_cascade(a)
            semi = decide_semicascade(a)
            if casc.verdict == TAME:
                assert semi.verdict == TAME
                assert semi.index_k == 0
                assert semi.period_s == casc.minimal_order_m
            else:
                assert semi.verdict == UNTAME


class TestOracle:
    def test_identity(self, named):
        assert oracle_semicascade(named["identity"]) == (TAME, (0, 1))

    def test_rotation(self, named):
        assert oracle_semicascade(named["rot4"]) == (TAME, (0, 4))

    def test_catmap(self, named):
        assert oracle_semicascade(named["catmap"]) == (UNTAME, None)

    def test_exhaustive_agreement_small_range(self):
        for combo in product((-1, 0, 1), repeat=4):
            a = IntMatrix([combo[:2], combo[2:]])
            cert = decide_semicascade(a)
            verdict, pair = oracle_semicascade(a)
            assert cert.verdict == verdict, a
            if verdict == TAME:
                assert cert.minimal_pair == pair, a


class TestCertificateCheck:
    def test_accepts_decider_output(self, named, tame_examples):
        for a in tame_examples:
            assert certificate_check(a, decide_semicascade(a))
        for a in (named["shear"], named["catmap"]):
            assert certificate_check(a, decide_semicascade(a))

    def test_rejects_wrong_order(self, named):
        claimed = TamenessCertificate(
            verdict=TAME, kind=CASCADE, period_s=2, minimal_order_m=2
        )
        assert certificate_check(named["rot4"], claimed) is False

    def test_rejects_non_minimal_pair(self, named):
        claimed = TamenessCertificate(
            verdict=TAME, kind=SEMICASCADE, index_k=0, period_s=8, minimal_pair=(0, 8)
        )
        assert certificate_check(named["rot4"], claimed) is False

    def test_rejects_wrong_verdict(self, named):
        cert = decide_semicascade(named["catmap"])
        assert certificate_check(named["identity"], cert) is False

    def test_rejects_malformed(self, named):
        assert certificate_check(
            named["identity"],
            TamenessCertificate(verdict=TAME, kind=SEMICASCADE),
        ) is False

    def test_roundtrip_dict(self, named):
        for a in (named["identity"], named["rot4"], named["shear"], named["catmap"]):
            cert = decide_semicascade(a)
            again = TamenessCertificate.from_dict(cert.to_dict())
            assert again == cert
            assert certificate_check(a, again) == certificate_check(a, cert)


def _random_unimodular(rng, d, steps=8):
    """Product of elementary integer matrices together with its inverse."""
    u = IntMatrix.identity(d)
    u_inv = IntMatrix.identity(d)
    for _ in range(steps):
        kind = rng.choice(("shear", "swap", "flip")) if d > 1 else "flip"
        if kind == "shear":
            i, j = rng.sample(range(d), 2)
            c = rng.randint(-2, 2)
            e = [[1 if p == q else 0 for q in range(d)] for p in range(d)]
            e[i][j] = c
            e_inv = [row[:] for row in e]
            e_inv[i][j] = -c
        elif kind == "swap":
            i, j = rng.sample(range(d), 2)
            e = [[1 if p == q else 0 for q in range(d)] for p in range(d)]
            e[i][i] = e[j][j] = 0
            e[i][j] = e[j][i] = 1
            e_inv = e
        else:
            i = rng.randrange(d)
            e = [[1 if p == q else 0 for q in range(d)] for p in range(d)]
            e[i][i] = -1
            e_inv = e
        u = mat_mul(u, IntMatrix(e))
        u_inv = mat_mul(IntMatrix(e_inv), u_inv)
    assert mat_mul(u, u_inv) == IntMatrix.identity(d)
    return u, u_inv


class TestInvariance:
    def test_conjugation_invariance(self, named):
        rng = random.Random(97)
        for name in ("identity", "shear", "rot4", "rot6", "nilpotent", "projector", "catmap"):
            a = named[name]
            base = decide_semicascade(a)
            for _ in range(5):
                u, u_inv = _random_unimodular(rng, a.d)
                conj = mat_mul(mat_mul(u, a), u_inv)
                cert = decide_semicascade(conj)
                assert cert.verdict == base.verdict, name
                assert cert.minimal_pair == base.minimal_pair, name

    def test_transpose_invariance(self, named):
        for a in named.values():
            semi_a = decide_semicascade(a)
            semi_t = decide_semicascade(a.transpose())
            assert semi_a.verdict == semi_t.verdict
            assert semi_a.minimal_pair == semi_t.minimal_pair

    def test_tame_power_count_bounded(self, tame_examples):
        # powers of a tame matrix take at most q distinct values, ever
        for a in tame_examples:
            cert = decide_semicascade(a)
            _, q = cert.minimal_pair
            distinct = {mat_pow(a, n).entries for n in range(q + 10)}
            assert len(distinct) == q
