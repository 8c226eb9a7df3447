"""Partial-sum kernels and the boundedness functional.

For a system ``(phi_k)`` with antiderivatives ``g_k(u) = int_0^u phi_k``,
the two kernels evaluated here are the Dirichlet-type kernel
``sum phi_k(u) phi_k(x)`` and its antiderivative counterpart
``sum g_k(u) phi_k(x)``.  The central diagnostic is the mean of the
absolute prefix integrals of the antiderivative kernel over the uniform
mesh ``i/n``:

    (1/n) * sum_{i=1}^{n-1} | int_0^{i/n} sum_k g_k(u) phi_k(x) du |

which stays O(1) in ``n`` exactly for the well-behaved systems the
experiments target.

A :class:`KernelContext` pins ``(system, n, rule)`` and caches the
antiderivative tables shared by every evaluation point, so sweeps over
``x`` reuse one mesh.  Contexts are read-only after construction apart
from idempotent caches guarded by a lock; evaluations are pure.
"""

from __future__ import annotations

import math
import threading
from typing import Optional, Sequence

import numpy as np

from .quadrature import (
    IntegrationResult,
    QuadratureRule,
    _panel_points,
    _segment_edges,
    cumulative_integral,
    integrate,
    integrate_abs,
)
from .systems import SystemHandle, eval_matrix, recommended_rule, system_values


class KernelContext:
    """Evaluation context for one ``(system, n)`` pair.

    Parameters
    ----------
    system : SystemHandle
        The orthonormal system.
    n : int
        Number of leading elements entering the kernels (n >= 1).
    rule : QuadratureRule, optional
        Quadrature configuration; defaults to the system's recommended
        rule for indices up to ``n``.
    """

    def __init__(self, system: SystemHandle, n: int,
                 rule: Optional[QuadratureRule] = None):
        if n < 1:
            raise ValueError("n must be >= 1")
        self.system = system
        self.n = int(n)
        self.rule = rule if rule is not None else recommended_rule(system, n)
        self._lock = threading.Lock()
        self._mesh = None            # (nodes, weights, cell_starts)
        self._g_rows: dict[int, np.ndarray] = {}
        self._prefix_table = None    # antideriv2 at i/n, shape (n, n)

    # -- antiderivative evaluation -------------------------------------

    def g_values(self, ks: Sequence[int], us: np.ndarray) -> np.ndarray:
        """Table ``G[r, j] = g_{ks[r]}(us[j])``, closed form or numeric."""
        us = np.atleast_1d(np.asarray(us, dtype=float))
        if self.system.antideriv is not None:
            ks_arr = np.asarray(list(ks))
            vals = np.asarray(self.system.antideriv(ks_arr[:, None], us[None, :]),
                              dtype=float)
            if vals.shape != (len(ks_arr), len(us)):
                vals = np.stack([np.asarray(self.system.antideriv(k, us), dtype=float)
                                 for k in ks_arr])
            return vals
        return np.stack([self._numeric_g(int(k), us) for k in ks])

    def _numeric_g(self, k: int, us: np.ndarray) -> np.ndarray:
        order = np.argsort(us, kind="stable")
        grid = us[order]
        rule = self.rule.with_breakpoints(self.system.breakpoints(k))
        vals = cumulative_integral(lambda u: np.asarray(self.system.eval(k, u),
                                                        dtype=float), grid, rule)
        out = np.empty_like(vals)
        out[order] = vals
        return out

    # -- shared meshes and tables --------------------------------------

    def _cell_mesh(self):
        """Quadrature mesh covering the cells [(i-1)/n, i/n], cached."""
        with self._lock:
            if self._mesh is None:
                hint = (self.system.panels_hint(self.n)
                        if self.system.panels_hint is not None else self.n)
                panels = max(2, -(-int(hint) // self.n))
                nodes_all, weights_all, starts = [], [], []
                pos = 0
                for i in range(1, self.n + 1):
                    lo, hi = (i - 1) / self.n, i / self.n
                    edges = _segment_edges(lo, hi, self.rule.breakpoints)
                    nodes, weights = _panel_points(edges, self.rule.order, panels)
                    starts.append(pos)
                    pos += len(nodes)
                    nodes_all.append(nodes)
                    weights_all.append(weights)
                self._mesh = (np.concatenate(nodes_all),
                              np.concatenate(weights_all),
                              np.array(starts, dtype=np.intp))
            return self._mesh

    def _mesh_g_row(self, k: int) -> np.ndarray:
        nodes, _, _ = self._cell_mesh()
        with self._lock:
            row = self._g_rows.get(k)
        if row is None:
            row = self.g_values([k], nodes)[0]
            with self._lock:
                self._g_rows[k] = row
        return row

    def prefix_table(self) -> np.ndarray:
        """Closed-form ``int_0^{i/n} g_k`` at every mesh point i/n, cached."""
        with self._lock:
            table = self._prefix_table
        if table is None:
            ts = np.arange(1, self.n + 1) / self.n
            table = eval_matrix(self.system, self.n, ts, fn="antideriv2")
            with self._lock:
                self._prefix_table = table
        return table


# ---------------------------------------------------------------------------
# kernel evaluation
# ---------------------------------------------------------------------------

def dirichlet_kernel(ctx: KernelContext, u, x: float):
    """Kernel ``sum_{k<=n} phi_k(u) phi_k(x)``."""
    phi_x = system_values(ctx.system, ctx.n, x)
    u_arr = np.asarray(u, dtype=float)
    if u_arr.ndim == 0:
        phi_u = system_values(ctx.system, ctx.n, float(u_arr))
        return math.fsum(phi_u * phi_x)
    table = eval_matrix(ctx.system, ctx.n, u_arr)
    return phi_x @ table


def antiderivative_kernel(ctx: KernelContext, u, x: float):
    """Kernel ``sum_{k<=n} g_k(u) phi_k(x)``."""
    phi_x = system_values(ctx.system, ctx.n, x)
    u_arr = np.asarray(u, dtype=float)
    scalar = u_arr.ndim == 0
    table = ctx.g_values(range(1, ctx.n + 1), np.atleast_1d(u_arr))
    if scalar:
        return math.fsum(table[:, 0] * phi_x)
    return phi_x @ table


def kernel_prefix_integral(ctx: KernelContext, t: float, x: float) -> float:
    """Prefix integral ``int_0^t`` of the antiderivative kernel at x.

    Uses the closed-form second antiderivative when the system provides
    one, otherwise breakpoint-aware quadrature.
    """
    if not 0.0 <= t <= 1.0:
        raise ValueError("t must lie in [0, 1]")
    if t == 0.0:
        return 0.0
    if ctx.system.antideriv2 is not None:
        phi_x = system_values(ctx.system, ctx.n, x)
        ks = np.arange(1, ctx.n + 1)
        a2 = np.asarray(ctx.system.antideriv2(ks, t), dtype=float)
        return math.fsum(a2 * phi_x)
    return integrate(lambda u: antiderivative_kernel(ctx, u, x),
                     ctx.rule, 0.0, t).value


def boundedness_functional(ctx: KernelContext, x: float) -> float:
    """Mean absolute prefix integral of the antiderivative kernel.

    Accumulates one integral per mesh cell and prefix-sums, so a full
    evaluation costs O(n) cell integrals rather than O(n^2).
    """
    if ctx.n < 2:
        raise ValueError("boundedness functional needs n >= 2")
    prefixes = _prefix_values(ctx, x)
    return float(np.abs(prefixes[:ctx.n - 1]).sum() / ctx.n)


def _prefix_values(ctx: KernelContext, x: float) -> np.ndarray:
    """Prefix integrals at i/n for i = 1..n."""
    phi_x = system_values(ctx.system, ctx.n, x)
    if ctx.system.antideriv2 is not None:
        return ctx.prefix_table().T @ phi_x
    nodes, weights, starts = ctx._cell_mesh()
    live = np.nonzero(phi_x)[0]
    q_vals = np.zeros(len(nodes))
    for idx in live:
        q_vals += phi_x[idx] * ctx._mesh_g_row(int(idx) + 1)
    cell_integrals = np.add.reduceat(weights * q_vals, starts)
    return np.cumsum(cell_integrals)


def boundedness_functional_naive(ctx: KernelContext, x: float) -> float:
    """Reference evaluation with one independent integral per prefix.

    Integrates the kernel from 0 to i/n afresh for every i by quadrature,
    ignoring closed forms and shared cell accumulation.  Quadratically
    slower than :func:`boundedness_functional`; used as its oracle.
    """
    if ctx.n < 2:
        raise ValueError("boundedness functional needs n >= 2")
    total = 0.0
    for i in range(1, ctx.n):
        res = integrate(lambda u: antiderivative_kernel(ctx, u, x),
                        ctx.rule, 0.0, i / ctx.n)
        total += abs(res.value)
    return total / ctx.n


def cell_abs_integral(ctx: KernelContext, i: int, x: float) -> IntegrationResult:
    """Integral of the absolute antiderivative kernel over cell i of n."""
    if not 1 <= i <= ctx.n:
        raise ValueError("cell index must satisfy 1 <= i <= n")
    return integrate_abs(lambda u: antiderivative_kernel(ctx, u, x),
                         ctx.rule, (i - 1) / ctx.n, i / ctx.n)


def dirichlet_mean(ctx: KernelContext, x: float) -> float:
    """Quadrature value of ``int_0^1`` of the Dirichlet-type kernel at x."""
    return integrate(lambda u: dirichlet_kernel(ctx, u, x), ctx.rule).value


def antiderivative_square_sum(system: SystemHandle, n: int, us) -> np.ndarray:
    """Values ``sum_{k<=n} g_k(u)^2`` on a grid of abscissae.

    The classical Bessel bound caps this by 1 for any orthonormal system,
    uniformly in ``n``.
    """
    us = np.atleast_1d(np.asarray(us, dtype=float))
    if system.antideriv is not None:
        table = eval_matrix(system, n, us, fn="antideriv")
    else:
        ctx = KernelContext(system, n)
        table = ctx.g_values(range(1, n + 1), us)
    return (table ** 2).sum(axis=0)
