import random
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from boundfree.algebra import (
    CanonicalForm,
    IntMat,
    NotUpperTriangular,
    RationalFormatError,
    SingularKind,
    UTMat2,
    canonical_form,
    direct_sum,
    format_rational,
    kronecker,
    parse_rational,
    unit_matrix,
)

small = st.fractions(min_value=-4, max_value=4, max_denominator=4)
utmats = st.builds(UTMat2, small, small, small)


def dense_mul(a, b):
    n = len(a)
    return [[sum(a[i][l] * b[l][j] for l in range(n)) for j in range(n)] for i in range(n)]


def dense_kron(a, b):
    # block definition written out independently of the sparse implementation
    m, n = len(a), len(b)
    return [[a[i // n][j // n] * b[i % n][j % n] for j in range(m * n)] for i in range(m * n)]


def random_upper(rng, k, lo=-3, hi=3):
    return IntMat.from_rows([[rng.randint(lo, hi) if j >= i else 0 for j in range(k)] for i in range(k)], upper=True)


class TestRational:
    @pytest.mark.parametrize(
        "text, expected",
        [("7", Fraction(7)), ("-3/2", Fraction(-3, 2)), ("6/4", Fraction(3, 2)), ("0", Fraction(0)), ("-0/5", Fraction(0))],
    )
    def test_parse(self, text, expected):
        assert parse_rational(text) == expected

    @pytest.mark.parametrize("text", ["1/0", "1.5", "", "3/-2", "a", "1//2", "+3"])
    def test_parse_rejects(self, text):
        with pytest.raises(RationalFormatError):
            parse_rational(text)

    def test_format_is_reduced_with_sign_on_numerator(self):
        assert format_rational(Fraction(6, -4)) == "-3/2"
        assert format_rational(Fraction(14, 2)) == "7"
        assert format_rational(Fraction(0, 3)) == "0"

    @given(st.integers(-10**6, 10**6), st.integers(1, 10**6))
    def test_round_trip(self, n, d):
        q = parse_rational(f"{n}/{d}")
        assert q.denominator > 0
        assert parse_rational(format_rational(q)) == q
        assert q * d == n


class TestUTMat2:
    def test_from_rows_checks_lower_left(self):
        with pytest.raises(NotUpperTriangular):
            UTMat2.from_rows([[1, 0], [1, 1]])

    def test_rejects_floats(self):
        with pytest.raises(TypeError):
            UTMat2(1.5, 0, 1)

    @given(utmats, utmats)
    def test_product_matches_full_multiplication(self, x, y):
        full = dense_mul([list(r) for r in x.rows()], [list(r) for r in y.rows()])
        assert full[1][0] == 0
        assert (x @ y).rows() == tuple(tuple(r) for r in full)

    @given(utmats, utmats, utmats)
    def test_associative(self, x, y, z):
        assert (x @ y) @ z == x @ (y @ z)

    @given(utmats)
    def test_det(self, x):
        assert x.det == x.e11 * x.e22

    @given(utmats, st.integers(0, 8))
    def test_power(self, x, n):
        expected = UTMat2.identity()
        for _ in range(n):
            expected = expected @ x
        assert x**n == expected


class TestCanonicalForm:
    def test_diagonal(self):
        assert canonical_form(UTMat2(3, 0, 1)) == CanonicalForm(1, 3, 0)

    def test_general(self):
        cf = canonical_form(UTMat2(2, 6, 4))
        assert cf == CanonicalForm(4, Fraction(1, 2), Fraction(3, 2))
        # c * [[a, b], [0, 1]] multiplied out by hand
        assert (cf.c * cf.a, cf.c * cf.b, cf.c) == (2, 6, 4)

    @pytest.mark.parametrize(
        "m, kind",
        [
            (UTMat2(0, 1, 2), SingularKind.TOP_LEFT_ZERO),
            (UTMat2(2, 5, 0), SingularKind.BOTTOM_ROW_ZERO),
            (UTMat2(0, 0, 0), SingularKind.ZERO),
            (UTMat2(0, 3, 0), SingularKind.ZERO),
        ],
    )
    def test_singular(self, m, kind):
        assert canonical_form(m) is kind

    @given(utmats)
    def test_round_trip(self, m):
        cf = canonical_form(m)
        if m.e11 != 0 and m.e22 != 0:
            assert cf.reconstruct() == m
        else:
            assert isinstance(cf, SingularKind)


class TestIntMat:
    def test_upper_flag_is_verified(self):
        with pytest.raises(NotUpperTriangular):
            IntMat.from_rows([[1, 0], [2, 1]], upper=True)
        assert not IntMat.from_rows([[1, 0], [2, 1]]).is_upper_triangular()

    def test_non_integer_entries_rejected(self):
        with pytest.raises(ValueError):
            IntMat(2, {(0, 0): Fraction(1, 2)})

    def test_matmul_matches_dense(self):
        rng = random.Random(3)
        for _ in range(30):
            k = rng.randint(1, 5)
            a = IntMat.from_rows([[rng.randint(-3, 3) for _ in range(k)] for _ in range(k)])
            b = IntMat.from_rows([[rng.randint(-3, 3) for _ in range(k)] for _ in range(k)])
            assert (a @ b).to_rows() == dense_mul(a.to_rows(), b.to_rows())


class TestKronecker:
    def test_identity(self):
        assert kronecker(IntMat.identity(2), IntMat.identity(2)) == IntMat.identity(4)

    def test_unit_matrices(self):
        expected = [[0] * 4 for _ in range(4)]
        expected[0][3] = 1
        assert kronecker(unit_matrix(2), unit_matrix(2)).to_rows() == expected

    def test_matches_block_definition(self):
        rng = random.Random(5)
        for _ in range(20):
            a = random_upper(rng, rng.randint(1, 3))
            b = random_upper(rng, rng.randint(1, 3))
            assert kronecker(a, b).to_rows() == dense_kron(a.to_rows(), b.to_rows())

    def test_mixed_product(self):
        rng = random.Random(11)
        for _ in range(25):
            n = rng.randint(1, 4)
            As = [random_upper(rng, 2) for _ in range(n)]
            Bs = [random_upper(rng, 2) for _ in range(n)]
            lhs = kronecker(As[0], Bs[0])
            pa, pb = As[0], Bs[0]
            for a, b in zip(As[1:], Bs[1:]):
                lhs = lhs @ kronecker(a, b)
                pa, pb = pa @ a, pb @ b
            assert lhs == kronecker(pa, pb)
            assert lhs.is_upper_triangular()


class TestDirectSum:
    def test_identity(self):
        assert direct_sum(IntMat.identity(2), IntMat.identity(3)) == IntMat.identity(5)

    def test_unit_matrices(self):
        m = direct_sum(unit_matrix(2), unit_matrix(2))
        assert dict(m.entries) == {(0, 1): 1, (2, 3): 1}

    def test_homomorphism(self):
        rng = random.Random(13)
        for _ in range(25):
            n = rng.randint(1, 4)
            ka, kb = rng.randint(1, 3), rng.randint(1, 3)
            As = [random_upper(rng, ka) for _ in range(n)]
            Bs = [random_upper(rng, kb) for _ in range(n)]
            lhs = direct_sum(As[0], Bs[0])
            pa, pb = As[0], Bs[0]
            for a, b in zip(As[1:], Bs[1:]):
                lhs = lhs @ direct_sum(a, b)
                pa, pb = pa @ a, pb @ b
            assert lhs == direct_sum(pa, pb)
            assert IntMat(lhs.k, lhs.entries, upper=True).is_upper_triangular()


class TestUnitMatrix:
    def test_small(self):
        assert unit_matrix(2).to_rows() == [[0, 1], [0, 0]]
        assert unit_matrix(1).to_rows() == [[1]]

    def test_square_is_zero(self):
        assert unit_matrix(3) @ unit_matrix(3) == IntMat.zero(3)

    def test_rejects_zero(self):
        with pytest.raises(ValueError):
            unit_matrix(0)
