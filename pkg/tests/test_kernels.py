import math

import numpy as np
import pytest

from conftest import CATALOG, riemann_midpoint
from ons_lab import (
    KernelContext,
    SystemHandle,
    antiderivative_kernel,
    antiderivative_square_sum,
    boundedness_functional,
    boundedness_functional_naive,
    cell_abs_integral,
    coefficients,
    cosine_system,
    dirichlet_kernel,
    dirichlet_mean,
    get_function,
    get_system,
    haar_system,
    kernel_prefix_integral,
    partial_sum,
    system_values,
)

SQ2 = np.sqrt(2.0)


def cos_phi(k, u):
    return SQ2 * np.cos(2 * np.pi * k * np.asarray(u, dtype=float))


def cos_g(k, u):
    return SQ2 * np.sin(2 * np.pi * k * np.asarray(u, dtype=float)) / (2 * np.pi * k)


class TestDirichletKernel:
    def test_single_cosine_at_origin(self):
        ctx = KernelContext(cosine_system(), 1)
        assert dirichlet_kernel(ctx, 0.0, 0.0) == pytest.approx(2.0)

    def test_haar_first_element(self):
        ctx = KernelContext(haar_system(), 1)
        for u, x in [(0.1, 0.9), (0.6, 0.2)]:
            assert dirichlet_kernel(ctx, u, x) == pytest.approx(1.0)

    def test_three_term_sum_oracle(self):
        # independent term-by-term summation
        ctx = KernelContext(cosine_system(), 3)
        u, x = 0.2, 0.7
        expected = sum(cos_phi(k, u) * cos_phi(k, x) for k in (1, 2, 3))
        assert dirichlet_kernel(ctx, u, x) == pytest.approx(expected, abs=1e-14)


class TestAntiderivativeKernel:
    @pytest.mark.parametrize("name", ["cosine", "haar", "reflect(cosine)"])
    def test_vanishes_at_zero(self, name):
        ctx = KernelContext(get_system(name), 5)
        assert antiderivative_kernel(ctx, 0.0, 0.37) == pytest.approx(0.0,
                                                                      abs=1e-15)

    def test_haar_first_element_is_ramp(self):
        ctx = KernelContext(haar_system(), 1)
        for t in (0.2, 0.5, 0.9):
            assert antiderivative_kernel(ctx, t, 0.77) == pytest.approx(t)

    def test_two_term_cosine_value(self):
        ctx = KernelContext(cosine_system(), 2)
        assert antiderivative_kernel(ctx, 0.25, 0.0) == pytest.approx(
            1.0 / np.pi, abs=1e-14)


class TestPrefixIntegral:
    def test_zero_at_origin(self):
        ctx = KernelContext(cosine_system(), 4)
        assert kernel_prefix_integral(ctx, 0.0, 0.3) == 0.0

    def test_haar_full_interval(self):
        ctx = KernelContext(haar_system(), 1)
        assert kernel_prefix_integral(ctx, 1.0, 0.6) == pytest.approx(0.5,
                                                                      abs=1e-12)

    def test_matches_dense_riemann_sum(self):
        ctx = KernelContext(cosine_system(), 4)
        t, x = 0.3, 0.1

        def q(u):
            return sum(cos_g(k, u) * cos_phi(k, x) for k in range(1, 5))

        oracle = riemann_midpoint(q, 0.0, t, 10_000)
        assert kernel_prefix_integral(ctx, t, x) == pytest.approx(oracle,
                                                                  abs=1e-6)


class TestBoundednessFunctional:
    def test_two_term_definition(self):
        # n=2 reduces to half the single prefix integral
        for name in ("cosine", "haar"):
            ctx = KernelContext(get_system(name), 2)
            x = 0.4
            expected = 0.5 * abs(kernel_prefix_integral(ctx, 0.5, x))
            assert boundedness_functional(ctx, x) == pytest.approx(expected,
                                                                   abs=1e-12)

    def test_haar_direct_formula_oracle(self):
        # n=2, x=0.1: prefix integral of u + tent_2(u) up to 1/2 is 1/4
        ctx = KernelContext(haar_system(), 2)
        assert boundedness_functional(ctx, 0.1) == pytest.approx(0.125,
                                                                 abs=1e-9)

    def test_needs_two_terms(self):
        ctx = KernelContext(haar_system(), 1)
        with pytest.raises(ValueError):
            boundedness_functional(ctx, 0.3)

    @pytest.mark.parametrize("name,n", [
        ("cosine", 4), ("cosine", 16), ("haar", 8), ("reflect(cosine)", 6),
        ("reflect(haar)", 8),
    ])
    def test_incremental_matches_naive(self, name, n):
        ctx = KernelContext(get_system(name), n)
        for x in (0.3, 1 / np.sqrt(2)):
            fast = boundedness_functional(ctx, x)
            slow = boundedness_functional_naive(ctx, x)
            assert abs(fast - slow) < 1e-9


class TestBesselBound:
    @pytest.mark.parametrize("name", CATALOG)
    def test_square_sums_capped_by_one(self, name):
        sys_ = get_system(name)
        us = np.linspace(0.0, 1.0, 33)
        sums = antiderivative_square_sum(sys_, 256, us)
        assert sums.max() <= 1.0 + 1e-8

    def test_cosine_closed_form_value(self):
        # sum of 2 sin^2(2 pi k u) / (2 pi k)^2 at u = 1/4, first two terms
        sys_ = cosine_system()
        val = antiderivative_square_sum(sys_, 2, [0.25])[0]
        expected = 2 * (1.0 / (2 * np.pi) ** 2) + 0.0
        assert val == pytest.approx(expected, abs=1e-15)


class TestCellBound:
    @pytest.mark.parametrize("name", ["cosine", "haar"])
    @pytest.mark.parametrize("n", [4, 16])
    def test_cell_abs_integral_bounded(self, name, n):
        sys_ = get_system(name)
        ctx = KernelContext(sys_, n)
        for x in (0.0, 0.3, 1 / np.sqrt(2)):
            phi = system_values(sys_, n, x)
            bound = np.sqrt((phi ** 2).sum()) / n
            for i in range(1, n + 1):
                lhs = cell_abs_integral(ctx, i, x).value
                assert lhs <= bound + 1e-8

    def test_bad_cell_index(self):
        ctx = KernelContext(haar_system(), 4)
        with pytest.raises(ValueError):
            cell_abs_integral(ctx, 5, 0.3)


class TestDirichletMeanIdentity:
    @pytest.mark.parametrize("name", CATALOG)
    def test_kernel_mean_equals_partial_sum_of_one(self, name):
        # quadrature of the kernel mean against the coefficient route
        sys_ = get_system(name)
        top = 8 if name == "rademacher" else 64
        table = coefficients(sys_, get_function("one"), top)
        for n in (1, 2, top // 2, top):
            ctx = KernelContext(sys_, n)
            for x in (0.3, 0.9):
                lhs = dirichlet_mean(ctx, x)
                rhs = partial_sum(table, n, x)
                assert abs(lhs - rhs) < 1e-8


class TestNumericAntiderivativeFallback:
    def test_stripped_system_matches_closed_form(self):
        base = cosine_system()
        stripped = SystemHandle(
            name="cosine-stripped",
            eval=base.eval,
            antideriv=None,
            breakpoints=base.breakpoints,
            smooth=True,
            panels_hint=base.panels_hint,
        )
        ctx_num = KernelContext(stripped, 5)
        ctx_ref = KernelContext(base, 5)
        us = np.linspace(0.0, 1.0, 17)
        for x in (0.2, 0.8):
            got = antiderivative_kernel(ctx_num, us, x)
            want = antiderivative_kernel(ctx_ref, us, x)
            assert np.abs(got - want).max() < 1e-9
        assert abs(boundedness_functional(ctx_num, 0.3)
                   - boundedness_functional(ctx_ref, 0.3)) < 1e-9

    def test_cached_rows_match_recomputation(self):
        ctx = KernelContext(haar_system(), 8)
        boundedness_functional(ctx, 0.3)        # populate the mesh cache
        nodes, _, _ = ctx._cell_mesh()
        for k in (1, 2, 5):
            row = ctx._mesh_g_row(k)
            again = np.asarray(haar_system().antideriv(k, nodes), dtype=float)
            assert np.abs(row - again).max() < 1e-9


def test_compensated_scalar_matches_fsum():
    ctx = KernelContext(cosine_system(), 64)
    u, x = 0.123, 0.456
    phi_x = system_values(cosine_system(), 64, x)
    g_u = np.asarray(cosine_system().antideriv(np.arange(1, 65), u))
    assert antiderivative_kernel(ctx, u, x) == pytest.approx(
        math.fsum(g_u * phi_x), abs=1e-15)
