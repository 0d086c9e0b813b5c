import csv
import io
import json

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from osptlab import combinatorics as cb
from osptlab import qseries as qs
from osptlab.qseries import TruncatedSeries as S


def finite_product(T):
    """prod_{i=1}^{T} (1 - q^i) by repeated dense multiplication."""
    c = [1] + [0] * T
    for i in range(1, T + 1):
        for n in range(T, i - 1, -1):
            c[n] -= c[n - i]
    return c


def naive_mul(a, b):
    T = len(a) - 1
    return [sum(a[i] * b[n - i] for i in range(n + 1)) for n in range(T + 1)]


series_pair = st.integers(0, 40).flatmap(
    lambda T: st.tuples(
        st.lists(st.integers(-(10**30), 10**30), min_size=T + 1, max_size=T + 1),
        st.lists(st.integers(-(10**30), 10**30), min_size=T + 1, max_size=T + 1),
    )
)


class TestMul:
    def test_difference_of_squares(self):
        assert qs.mul(S([1, 1], 2), S([1, -1], 2)).coeffs == (1, 0, -1)

    def test_identity(self):
        s = S([3, -1, 4, 1, -5], 4)
        assert qs.mul(s, S.one(4)) == s

    def test_euler_times_inverse(self):
        e = qs.euler_pochhammer(50)
        assert qs.mul(e, qs.invert(e)) == S.one(50)

    def test_order_mismatch(self):
        with pytest.raises(qs.OrderMismatchError):
            qs.mul(S([1], 2), S([1], 3))
        with pytest.raises(qs.OrderMismatchError):
            S([1], 2) + S([1], 3)

    @given(series_pair)
    @settings(max_examples=60, deadline=None)
    def test_all_kernels_agree_with_naive(self, pair):
        a, b = pair
        want = naive_mul(a, b)
        for method in ("schoolbook", "kronecker", "sparse"):
            assert list(qs.mul(S(a), S(b), method=method).coeffs) == want

    @pytest.mark.parametrize("threads", [2, 3, 8])
    def test_threaded_kronecker_is_bit_identical(self, threads):
        a = qs.overpartition_gf(600)
        b = qs.partition_gf(600)
        one = qs.mul(a, b, method="kronecker")
        many = qs.mul(a, b, method="kronecker", threads=threads)
        assert one.coeffs == many.coeffs
        assert one == qs.mul(a, b, method="schoolbook")

    def test_unknown_method(self):
        with pytest.raises(qs.SeriesError):
            qs.mul(S([1], 1), S([1], 1), method="fft")


class TestInvert:
    def test_geometric(self):
        assert qs.invert(S([1, -1], 4)).coeffs == (1, 1, 1, 1, 1)

    def test_one(self):
        assert qs.invert(S.one(5)) == S.one(5)

    def test_partition_numbers(self):
        assert qs.invert(qs.euler_pochhammer(8)).coeffs == (1, 1, 2, 3, 5, 7, 11, 15, 22)

    def test_partition_numbers_match_enumeration(self):
        p = qs.partition_gf(12)
        assert [sum(1 for _ in cb.enumerate_partitions(n)) for n in range(13)] == list(p.coeffs)

    def test_not_invertible(self):
        with pytest.raises(qs.NotInvertibleError):
            qs.invert(S([2, 1], 3))
        with pytest.raises(qs.NotInvertibleError):
            qs.invert(S([0, 1], 3))

    def test_negative_unit(self):
        s = S([-1, 3, 0, 2], 3)
        assert qs.mul(s, qs.invert(s)) == S.one(3)

    @given(st.integers(0, 30).flatmap(
        lambda T: st.tuples(st.sampled_from([1, -1]), st.lists(st.integers(-50, 50), min_size=T, max_size=T))
    ))
    @settings(max_examples=80, deadline=None)
    def test_two_sided_inverse(self, data):
        c0, rest = data
        s = S([c0] + rest)
        t = qs.invert(s)
        assert qs.mul(s, t) == S.one(s.order)
        assert qs.mul(t, s) == S.one(s.order)


class TestEuler:
    def test_small(self):
        assert qs.euler_pochhammer(7).coeffs == (1, -1, -1, 0, 0, 1, 0, 1)
        assert qs.euler_pochhammer(0).coeffs == (1,)
        assert qs.euler_pochhammer(12)[12] == -1

    @pytest.mark.parametrize("T", [0, 1, 5, 26, 77, 200])
    def test_matches_finite_product(self, T):
        assert list(qs.euler_pochhammer(T).coeffs) == finite_product(T)

    def test_sparse(self):
        T = 2000
        nz = len(qs.euler_pochhammer(T).terms())
        assert nz <= 2 * int((2 * T / 3) ** 0.5) + 3

    def test_step(self):
        assert qs.euler_pochhammer(20, step=2) == qs.euler_pochhammer(20).substitute(2)


class TestOverpartitions:
    def test_values(self):
        pb = qs.overpartition_gf(6)
        assert pb.coeffs == (1, 2, 4, 8, 14, 24, 40)

    def test_against_dense_product(self):
        # (-q;q)_inf/(q;q)_inf = prod (1+q^i)/(1-q^i)
        T = 60
        num = [1] + [0] * T
        for i in range(1, T + 1):
            for n in range(T, i - 1, -1):
                num[n] += num[n - i]
        want = qs.divide(S(num), qs.euler_pochhammer(T))
        assert qs.overpartition_gf(T) == want

    def test_known_large(self):
        pb = qs.overpartition_gf(30)
        assert pb[25] == 31066
        assert pb[30] == 116624


class TestPartialTheta:
    def test_examples(self):
        assert qs.partial_theta(qs.PartialThetaSpec(1, 1), 10).terms() == [(1, -1), (3, 1), (6, -1), (10, 1)]
        assert qs.partial_theta(qs.PartialThetaSpec(2, 2), 12).terms() == [(2, -1), (6, 1), (12, -1)]
        assert qs.partial_theta(qs.PartialThetaSpec(1, 3), 9).terms() == [(2, -1), (5, 1), (9, -1)]

    def test_integrality(self):
        with pytest.raises(qs.IntegralityError):
            qs.PartialThetaSpec(1, 2)

    def test_standing_assumptions(self):
        with pytest.raises(qs.SeriesError):
            qs.PartialThetaSpec(0, 2)
        with pytest.raises(qs.SeriesError):
            qs.PartialThetaSpec(1, -1)

    @given(st.integers(1, 6), st.integers(-5, 30), st.integers(0, 400))
    def test_sparse_and_signed(self, a, b, T):
        if a + b <= 0 or (a + b) % 2:
            return
        spec = qs.PartialThetaSpec(a, b)
        terms = qs.partial_theta(spec, T).terms()
        n_max = 0
        while spec.exponent(n_max + 1) <= T:
            n_max += 1
        assert terms == [(spec.exponent(n), (-1) ** n) for n in range(1, n_max + 1)]


class TestH:
    def test_examples(self):
        assert qs.h_series(1, 9).terms() == [(1, 1), (2, 1), (4, 1), (6, 2), (8, 1), (9, 1)]
        assert qs.h_series(2, 8).terms() == [(2, 1), (4, 1), (8, 1)]
        assert qs.h_series(1, 5)[0] == 0

    def test_two_forms_agree_to_5000(self):
        assert qs.h_series_lambert(5000) == qs.h_series_blocks(5000)

    @pytest.mark.parametrize("m", [2, 3, 7])
    def test_forms_agree_with_substitution(self, m):
        T = 800
        assert qs.h_series_lambert(T, m) == qs.h_series_blocks(T, m) == qs.h_series(1, T).substitute(m)


class TestF:
    def test_examples(self):
        f1 = qs.F_k_series(1, 8)
        assert f1.coeffs[:8] == (0, 1, 1, 1, 2, 1, 3, 4)
        f2 = qs.F_k_series(2, 8)
        assert f2.coeffs[:8] == (0, 0, 0, 1, 1, 2, 4, 5)

    def test_bracket(self):
        assert qs.theta_bracket(1, 6).terms() == [(1, 1), (2, -1), (3, -1), (5, -1), (6, 3)]

    @pytest.mark.parametrize("k", [1, 2, 5, 13])
    def test_support(self, k):
        T = 120
        f = qs.F_k_series(k, T)
        assert all(f[n] == 0 for n in range(2 * k - 1))
        assert f[2 * k - 1] == 1

    def test_pbar_argument(self):
        T = 50
        pb = qs.overpartition_gf(T)
        assert qs.F_k_series(3, T, pbar=pb) == qs.F_k_series(3, T)
        with pytest.raises(qs.OrderMismatchError):
            qs.F_k_series(3, T, pbar=qs.overpartition_gf(T - 1))


class TestStringSeries:
    def test_H_examples(self):
        h2 = qs.H_m_series(2, 7)
        assert h2.coeffs == (0, 1, 0, 1, 0, 1, 2, 3)
        for m in (2, 3, 9):
            assert qs.H_m_series(m, 3)[0] == 0

    def test_H_needs_m_at_least_2(self):
        with pytest.raises(qs.SeriesError):
            qs.H_m_series(1, 5)

    def test_H_is_C_difference(self):
        T = 100
        c1 = qs.C_m_series(1, T)
        for m in (2, 3, 5):
            assert qs.H_m_series(m, T) == c1 - m * qs.C_m_series(m, T)

    def test_ospt_examples(self):
        assert qs.ospt_bar_series(7).coeffs == (0, 1, 1, 2, 3, 4, 8, 12)
        f = [qs.F_k_series(k, 4) for k in (1, 2)]
        assert f[0][4] + f[1][4] == 3

    def test_ospt_identity_to_200(self):
        T = 200
        pb = qs.overpartition_gf(T)
        total = [0] * (T + 1)
        for k in range(1, (T + 1) // 2 + 1):
            fk = qs.F_k_series(k, T, pbar=pb)
            for n in range(2 * k - 1, T + 1):
                total[n] += fk[n]
        assert tuple(total) == qs.ospt_bar_series(T).coeffs

    def test_ospt_is_cbar_difference(self):
        T = 150
        assert qs.ospt_bar_series(T) == qs.C_bar_m_series(1, T) - 2 * qs.C_bar_m_series(2, T)


class TestSeriesType:
    def test_shape(self):
        s = S([1, 2], 5)
        assert s.order == 5 and len(s.coeffs) == 6
        assert S([1, 2, 3, 4], 1).coeffs == (1, 2)
        with pytest.raises(qs.SeriesError):
            S([], None)

    def test_json_roundtrip_of_big_ints(self):
        s = qs.overpartition_gf(400)
        text = s.to_json()
        assert all(isinstance(v, str) for v in json.loads(text))
        assert S.from_json(text) == s
        assert s[400] > 2**64

    def test_csv(self):
        rows = list(csv.reader(io.StringIO(qs.overpartition_gf(4).to_csv())))
        assert rows[0] == ["n", "coefficient"]
        assert rows[1:] == [["0", "1"], ["1", "2"], ["2", "4"], ["3", "8"], ["4", "14"]]

    def test_truncate(self):
        s = qs.partition_gf(10)
        assert s.truncate(4).coeffs == (1, 1, 2, 3, 5)
        with pytest.raises(qs.OrderMismatchError):
            s.truncate(11)

    def test_immutability(self):
        s = S([1, 2, 3])
        with pytest.raises(TypeError):
            s.coeffs[0] = 5
        with pytest.raises(AttributeError):
            s.extra = 1
