import random
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from logsurf.linalg import (
    det_bareiss,
    is_negative_definite_matrix,
    pairing,
    solve_exact,
)
from oracles import cofactor_det, charpoly_negdef, gauss_solve


def square(draw_entries, n):
    return st.lists(st.lists(draw_entries, min_size=n, max_size=n), min_size=n, max_size=n)


small_int = st.integers(min_value=-9, max_value=9)


class TestPairing:
    def test_signature(self):
        # diagonal (+1, -1, ..., -1)
        assert pairing((1, 0, 0), (1, 0, 0)) == 1
        assert pairing((0, 1, 0), (0, 1, 0)) == -1
        assert pairing((0, 1, 0), (0, 0, 1)) == 0
        assert pairing((1, 0), (0, 1)) == 0

    def test_bilinear(self):
        u, v, w = (1, 2, 3), (0, 1, -1), (2, -2, 5)
        left = pairing(tuple(a + b for a, b in zip(u, v)), w)
        assert left == pairing(u, w) + pairing(v, w)

    def test_length_mismatch(self):
        with pytest.raises(AssertionError):
            pairing((1, 0), (1, 0, 0))


class TestDeterminant:
    def test_trivial(self):
        assert det_bareiss([]) == 1
        assert det_bareiss([[7]]) == 7
        assert det_bareiss([[1, 2], [3, 4]]) == -2
        assert det_bareiss([[1, 2], [2, 4]]) == 0

    @given(square(small_int, 3))
    def test_matches_cofactor_3x3(self, m):
        assert det_bareiss(m) == cofactor_det(m)

    @given(square(small_int, 4))
    def test_matches_cofactor_4x4(self, m):
        assert det_bareiss(m) == cofactor_det(m)

    def test_matches_cofactor_5x5_seeded(self):
        rng = random.Random(20240817)
        for _ in range(60):
            m = [[rng.randint(-6, 6) for _ in range(5)] for _ in range(5)]
            assert det_bareiss(m) == cofactor_det(m)

    def test_row_swap_sign(self):
        # leading zero forces a pivot swap
        m = [[0, 1], [1, 0]]
        assert det_bareiss(m) == -1


class TestSolveExact:
    def test_known_system(self):
        # x + y = 3, x - y = 1
        assert solve_exact([[1, 1], [1, -1]], [3, 1]) == [Fraction(2), Fraction(1)]

    def test_singular_raises(self):
        with pytest.raises(ValueError):
            solve_exact([[1, 1], [2, 2]], [1, 2])

    def test_fractional_rhs(self):
        x = solve_exact([[2, 0], [0, 3]], [Fraction(1, 3), Fraction(1, 2)])
        assert x == [Fraction(1, 6), Fraction(1, 6)]

    def test_empty(self):
        assert solve_exact([], []) == []

    def test_against_gauss_seeded(self):
        rng = random.Random(515)
        solved = 0
        for _ in range(120):
            n = rng.randint(1, 5)
            m = [[rng.randint(-7, 7) for _ in range(n)] for _ in range(n)]
            rhs = [Fraction(rng.randint(-9, 9), rng.randint(1, 4)) for _ in range(n)]
            if cofactor_det(m) == 0:
                with pytest.raises(ValueError):
                    solve_exact(m, rhs)
                continue
            x = solve_exact(m, rhs)
            assert x == gauss_solve(m, rhs)
            # residual check straight against the inputs
            for row, b in zip(m, rhs):
                assert sum(a * xi for a, xi in zip(row, x)) == b
            solved += 1
        assert solved > 60  # the loop must mostly exercise the solvable path


class TestNegativeDefinite:
    def test_base_cases(self):
        assert is_negative_definite_matrix([]) is True
        assert is_negative_definite_matrix([[-1]]) is True
        assert is_negative_definite_matrix([[0]]) is False
        assert is_negative_definite_matrix([[1]]) is False

    def test_two_by_two(self):
        assert is_negative_definite_matrix([[-2, 1], [1, -2]]) is True
        assert is_negative_definite_matrix([[-1, 1], [1, -1]]) is False  # det 0
        assert is_negative_definite_matrix([[-1, 2], [2, -1]]) is False

    def test_an_chain(self):
        # chain of (-2)-curves: classical negative definite lattice
        for n in range(1, 7):
            m = [[0] * n for _ in range(n)]
            for i in range(n):
                m[i][i] = -2
                if i + 1 < n:
                    m[i][i + 1] = m[i + 1][i] = 1
            assert is_negative_definite_matrix(m)

    def test_matches_charpoly_oracle_seeded(self):
        rng = random.Random(90125)
        agree_true = agree_false = 0
        for _ in range(250):
            n = rng.randint(1, 5)
            m = [[0] * n for _ in range(n)]
            for i in range(n):
                m[i][i] = rng.randint(-6, 2)
                for j in range(i + 1, n):
                    m[i][j] = m[j][i] = rng.randint(-2, 2)
            got = is_negative_definite_matrix(m)
            assert got == charpoly_negdef(m)
            agree_true += got
            agree_false += not got
        assert agree_true > 10 and agree_false > 10
