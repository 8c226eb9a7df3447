"""Orthonormal systems on [0, 1] and the catalog of named test functions.

Shipped systems: the full-period cosine system, the dyadic step (Haar)
system, the sign system (Rademacher), and a compress-and-reflect
transform that squeezes any system into [0, 1/2) and repeats it with
flipped sign on [1/2, 1].  Applying the transform kills the mean of every
element; applying it twice also kills the first moment.

Element indices are 1-based throughout.  Evaluators accept scalars or
broadcastable numpy arrays for both the index and the abscissa.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Optional, Sequence

import numpy as np

from .errors import OnsLabError, UnknownFunction, UnknownSystem
from .quadrature import (
    PIECEWISE_ABS_TOL,
    SMOOTH_ABS_TOL,
    QuadratureRule,
    integrate,
)

SQRT2 = np.sqrt(2.0)

#: Largest index for which a sign-system breakpoint list is enumerated
#: (2**k - 1 entries); beyond this only windowed enumeration is offered.
SIGN_SYSTEM_BP_MAX = 16

_MAX_WINDOW_PIECES = 1 << 20


@dataclass(frozen=True)
class SystemHandle:
    """An orthonormal system: evaluators plus structural metadata.

    Parameters
    ----------
    name : str
        Identifier, also accepted by :func:`get_system`.
    eval : callable
        ``(k, u) -> value`` of the k-th element; broadcasts over arrays.
    antideriv : callable or None
        Closed-form ``int_0^u`` of the k-th element, when known.
    breakpoints : callable
        ``k -> tuple`` of interior discontinuity points of element k.
    smooth : bool
        True when no element has a jump anywhere.
    piecewise_constant : bool
        True when every element is a step function between its breakpoints.
    antideriv2 : callable or None
        Closed-form second antiderivative ``int_0^u int_0^t``, when known.
    period : callable or None
        ``k -> Fraction`` period of element k, when the element is periodic.
    breakpoints_in : callable or None
        ``(k, lo, hi) -> tuple`` of breakpoints inside a window; only needed
        when the full list is too large to enumerate.
    panels_hint : callable or None
        ``k -> int`` panels per breakpoint segment that resolve element k.
    """

    name: str
    eval: Callable
    antideriv: Optional[Callable]
    breakpoints: Callable[[int], tuple]
    smooth: bool
    piecewise_constant: bool = False
    antideriv2: Optional[Callable] = None
    period: Optional[Callable[[int], Fraction]] = None
    breakpoints_in: Optional[Callable] = None
    panels_hint: Optional[Callable[[int], int]] = None


@dataclass(frozen=True)
class FunctionSpec:
    """A target function together with the metadata the experiments need.

    ``class_tag`` is one of ``continuous``, ``Lip1`` (bounded difference
    quotients) or ``CL`` (derivative present with bounded difference
    quotients of its own).  ``breakpoints`` lists kink/jump points so that
    quadrature of products with system elements stays accurate.
    """

    name: str
    eval: Callable
    deriv: Optional[Callable]
    class_tag: str
    value_at_1: float
    breakpoints: tuple[float, ...] = ()


def _vectorize_ku(core):
    """Lift a flat-array implementation to broadcasting (k, u) semantics."""

    def wrapped(k, u):
        kb, ub = np.broadcast_arrays(np.asarray(k), np.asarray(u, dtype=float))
        shape = kb.shape
        flat = core(np.atleast_1d(kb).ravel().astype(np.int64),
                    np.atleast_1d(ub).ravel().astype(float))
        return flat.reshape(shape) if shape else float(flat[0])

    return wrapped


# ---------------------------------------------------------------------------
# cosine system: sqrt(2) cos(2 pi k u)
# ---------------------------------------------------------------------------

def _cosine_eval(k, u):
    k = np.asarray(k, dtype=float)
    u = np.asarray(u, dtype=float)
    return SQRT2 * np.cos(2.0 * np.pi * k * u)


def _cosine_antideriv(k, u):
    k = np.asarray(k, dtype=float)
    u = np.asarray(u, dtype=float)
    return SQRT2 * np.sin(2.0 * np.pi * k * u) / (2.0 * np.pi * k)


def _cosine_antideriv2(k, u):
    k = np.asarray(k, dtype=float)
    u = np.asarray(u, dtype=float)
    return SQRT2 * (1.0 - np.cos(2.0 * np.pi * k * u)) / (2.0 * np.pi * k) ** 2


def cosine_system() -> SystemHandle:
    """Full-period cosine system ``sqrt(2) cos(2 pi k u)``, k >= 1."""
    return SystemHandle(
        name="cosine",
        eval=_cosine_eval,
        antideriv=_cosine_antideriv,
        breakpoints=lambda k: (),
        smooth=True,
        piecewise_constant=False,
        antideriv2=_cosine_antideriv2,
        period=lambda k: Fraction(1, int(k)),
        panels_hint=lambda k: max(4, int(k)),
    )


# ---------------------------------------------------------------------------
# Haar system, dyadic blocks 2^s < m <= 2^{s+1}, X_1 = 1
# ---------------------------------------------------------------------------

def _haar_params(m: np.ndarray):
    """Block data for indices m >= 2: scale s, support [a, b], midpoint c."""
    s = np.frexp(m - 1)[1] - 1          # exact: 2^s < m <= 2^{s+1}
    block = np.ldexp(1.0, s)
    j = m - block.astype(np.int64)
    a = (j - 1) / block
    b = j / block
    c = (2 * j - 1) / (2.0 * block)
    amp = np.sqrt(block)
    return a, b, c, amp


def _haar_eval_core(k, u):
    out = np.zeros(k.shape, dtype=float)
    first = k == 1
    out[first] = 1.0
    rest = ~first
    if np.any(rest):
        m, uu = k[rest], u[rest]
        a, b, c, amp = _haar_params(m)
        vals = np.where((uu >= a) & (uu < c), amp,
                        np.where((uu >= c) & (uu < b), -amp, 0.0))
        # value at u = 1 is the left limit when the support touches 1
        vals = np.where((uu == 1.0) & (b == 1.0), -amp, vals)
        out[rest] = vals
    return out


def _haar_antideriv_core(k, u):
    out = np.zeros(k.shape, dtype=float)
    first = k == 1
    out[first] = u[first]
    rest = ~first
    if np.any(rest):
        m, uu = k[rest], u[rest]
        a, b, c, amp = _haar_params(m)
        half = (b - a) / 2.0
        out[rest] = amp * np.maximum(0.0, half - np.abs(np.clip(uu, a, b) - c))
    return out


def _haar_breakpoints(k: int) -> tuple:
    if k == 1:
        return ()
    a, b, c, _ = _haar_params(np.array([k], dtype=np.int64))
    return tuple(p for p in (float(a[0]), float(c[0]), float(b[0])) if 0.0 < p < 1.0)


def haar_system() -> SystemHandle:
    """Dyadic step system normalized in L2; jumps sit on dyadic rationals."""
    return SystemHandle(
        name="haar",
        eval=_vectorize_ku(_haar_eval_core),
        antideriv=_vectorize_ku(_haar_antideriv_core),
        breakpoints=_haar_breakpoints,
        smooth=False,
        piecewise_constant=True,
        panels_hint=lambda k: 2,
    )


# ---------------------------------------------------------------------------
# sign (Rademacher) system: sign(sin(2^k pi u))
# ---------------------------------------------------------------------------

def _rademacher_eval_core(k, u):
    # parity of floor(u * 2^k), kept in float space: exact for any k since
    # floor and halving are exact on doubles of every magnitude
    cell = np.floor(np.ldexp(u, k))
    parity = cell - 2.0 * np.floor(cell / 2.0)
    vals = 1.0 - 2.0 * parity
    vals[u == 1.0] = -1.0   # left limit: cell 2^k - 1 is always odd
    return vals


def _rademacher_antideriv_core(k, u):
    period = np.ldexp(1.0, 1 - k)
    y = np.mod(u, period)
    return period / 2.0 - np.abs(y - period / 2.0)


def _rademacher_breakpoints(k: int) -> tuple:
    if k > SIGN_SYSTEM_BP_MAX:
        raise OnsLabError(
            f"sign system element {k} has {2 ** k - 1} jumps; enumerate via "
            f"breakpoints_in on a window, or use the closed-form antiderivative")
    denom = 1 << k
    return tuple(np.arange(1, denom) / denom)


def _rademacher_breakpoints_in(k: int, lo: float, hi: float) -> tuple:
    denom = float(1 << k) if k < 64 else 2.0 ** k
    first = int(np.floor(lo * denom)) + 1
    last = int(np.ceil(hi * denom)) - 1
    if last - first + 1 > _MAX_WINDOW_PIECES:
        raise OnsLabError("window contains too many sign-system jumps")
    pts = np.arange(first, last + 1) / denom
    return tuple(pts[(pts > lo) & (pts < hi)])


def rademacher_system() -> SystemHandle:
    """Sign system ``sign(sin(2^k pi u))`` with dyadic jump points."""
    return SystemHandle(
        name="rademacher",
        eval=_vectorize_ku(_rademacher_eval_core),
        antideriv=_vectorize_ku(_rademacher_antideriv_core),
        breakpoints=_rademacher_breakpoints,
        smooth=False,
        piecewise_constant=True,
        period=lambda k: Fraction(1, 1 << (int(k) - 1)),
        breakpoints_in=_rademacher_breakpoints_in,
        panels_hint=lambda k: 2,
    )


# ---------------------------------------------------------------------------
# compress-and-reflect transform
# ---------------------------------------------------------------------------

def compress_reflect(base: SystemHandle) -> SystemHandle:
    """System ``u -> base_k(2u)`` on [0, 1/2), ``-base_k(2u - 1)`` on [1/2, 1].

    Orthonormality is preserved and every output element has zero mean.
    Applying the transform twice additionally removes the first moment of
    every element.
    """
    base_eval = base.eval
    base_anti = base.antideriv
    base_anti2 = base.antideriv2

    def ev(k, u):
        kb, ub = np.broadcast_arrays(np.asarray(k), np.asarray(u, dtype=float))
        shape = kb.shape
        kf = np.atleast_1d(kb).ravel()
        uf = np.atleast_1d(ub).ravel().astype(float)
        out = np.empty(uf.shape, dtype=float)
        left = uf < 0.5
        out[left] = np.asarray(base_eval(kf[left], 2.0 * uf[left]), dtype=float)
        out[~left] = -np.asarray(base_eval(kf[~left], 2.0 * (uf[~left] - 0.5)),
                                 dtype=float)
        return out.reshape(shape) if shape else float(out[0])

    anti = None
    if base_anti is not None:
        def anti(k, u):
            kb, ub = np.broadcast_arrays(np.asarray(k), np.asarray(u, dtype=float))
            shape = kb.shape
            kf = np.atleast_1d(kb).ravel()
            uf = np.atleast_1d(ub).ravel().astype(float)
            out = np.empty(uf.shape, dtype=float)
            left = uf < 0.5
            out[left] = 0.5 * np.asarray(base_anti(kf[left], 2.0 * uf[left]),
                                         dtype=float)
            g1 = np.asarray(base_anti(kf[~left], np.ones(np.count_nonzero(~left))),
                            dtype=float)
            out[~left] = 0.5 * g1 - 0.5 * np.asarray(
                base_anti(kf[~left], 2.0 * (uf[~left] - 0.5)), dtype=float)
            return out.reshape(shape) if shape else float(out[0])

    anti2 = None
    if base_anti is not None and base_anti2 is not None:
        def anti2(k, u):
            kb, ub = np.broadcast_arrays(np.asarray(k), np.asarray(u, dtype=float))
            shape = kb.shape
            kf = np.atleast_1d(kb).ravel()
            uf = np.atleast_1d(ub).ravel().astype(float)
            out = np.empty(uf.shape, dtype=float)
            left = uf < 0.5
            out[left] = 0.25 * np.asarray(base_anti2(kf[left], 2.0 * uf[left]),
                                          dtype=float)
            nright = np.count_nonzero(~left)
            ones = np.ones(nright)
            a2_1 = np.asarray(base_anti2(kf[~left], ones), dtype=float)
            g1 = np.asarray(base_anti(kf[~left], ones), dtype=float)
            shifted = 2.0 * (uf[~left] - 0.5)
            out[~left] = (0.25 * a2_1 + 0.5 * g1 * (uf[~left] - 0.5)
                          - 0.25 * np.asarray(base_anti2(kf[~left], shifted),
                                              dtype=float))
            return out.reshape(shape) if shape else float(out[0])

    def bps(k: int) -> tuple:
        inner = base.breakpoints(k)
        pts = {0.5}
        pts.update(p / 2.0 for p in inner)
        pts.update(0.5 + p / 2.0 for p in inner)
        return tuple(sorted(p for p in pts if 0.0 < p < 1.0))

    return SystemHandle(
        name=f"reflect({base.name})",
        eval=ev,
        antideriv=anti,
        breakpoints=bps,
        smooth=False,
        piecewise_constant=base.piecewise_constant,
        antideriv2=anti2,
        panels_hint=base.panels_hint,
    )


# ---------------------------------------------------------------------------
# catalog lookup
# ---------------------------------------------------------------------------

_SYSTEM_BUILDERS = {
    "cosine": cosine_system,
    "haar": haar_system,
    "rademacher": rademacher_system,
}

_REFLECT_RE = re.compile(r"^reflect(2?)\((.+)\)$")


def get_system(name: str) -> SystemHandle:
    """Resolve a system name such as ``haar`` or ``reflect2(cosine)``."""
    key = name.strip()
    if key in _SYSTEM_BUILDERS:
        return _SYSTEM_BUILDERS[key]()
    m = _REFLECT_RE.match(key)
    if m:
        inner = get_system(m.group(2))
        out = compress_reflect(inner)
        if m.group(1) == "2":
            out = compress_reflect(out)
        return out
    raise UnknownSystem(f"unknown system name: {name!r}")


def system_names() -> list[str]:
    """Base system names; ``reflect(...)`` and ``reflect2(...)`` also resolve."""
    return sorted(_SYSTEM_BUILDERS)


# ---------------------------------------------------------------------------
# named test functions
# ---------------------------------------------------------------------------

def _bump(u):
    return 1.0 - np.cos(4.0 * np.pi * (np.asarray(u, dtype=float) - 0.5))


def _bump_deriv(u):
    return 4.0 * np.pi * np.sin(4.0 * np.pi * (np.asarray(u, dtype=float) - 0.5))


def _make_one() -> FunctionSpec:
    return FunctionSpec(
        name="one",
        eval=lambda u: np.ones_like(np.asarray(u, dtype=float)),
        deriv=lambda u: np.zeros_like(np.asarray(u, dtype=float)),
        class_tag="CL",
        value_at_1=1.0,
    )


def _make_id() -> FunctionSpec:
    return FunctionSpec(
        name="id",
        eval=lambda u: np.asarray(u, dtype=float),
        deriv=lambda u: np.ones_like(np.asarray(u, dtype=float)),
        class_tag="CL",
        value_at_1=1.0,
    )


def _make_cos_bump() -> FunctionSpec:
    return FunctionSpec(
        name="cos-bump",
        eval=_bump,
        deriv=_bump_deriv,
        class_tag="CL",
        value_at_1=0.0,
    )


def _make_g_compressed() -> FunctionSpec:
    # bump squeezed into [0, 1/2); C^1 across the joint since bump'(1) = 0
    return FunctionSpec(
        name="g-compressed",
        eval=lambda u: np.where(np.asarray(u, dtype=float) < 0.5,
                                _bump(2.0 * np.asarray(u, dtype=float)), 0.0),
        deriv=lambda u: np.where(np.asarray(u, dtype=float) < 0.5,
                                 2.0 * _bump_deriv(2.0 * np.asarray(u, dtype=float)),
                                 0.0),
        class_tag="CL",
        value_at_1=0.0,
        breakpoints=(0.5,),
    )


def _make_h_compressed() -> FunctionSpec:
    return FunctionSpec(
        name="h-compressed",
        eval=lambda u: np.where(np.asarray(u, dtype=float) < 0.25,
                                _bump(4.0 * np.asarray(u, dtype=float)), 0.0),
        deriv=lambda u: np.where(np.asarray(u, dtype=float) < 0.25,
                                 4.0 * _bump_deriv(4.0 * np.asarray(u, dtype=float)),
                                 0.0),
        class_tag="CL",
        value_at_1=0.0,
        breakpoints=(0.25, 0.5),
    )


def _make_half_square() -> FunctionSpec:
    return FunctionSpec(
        name="half-square",
        eval=lambda u: np.asarray(u, dtype=float) ** 2 / 2.0,
        deriv=lambda u: np.asarray(u, dtype=float),
        class_tag="CL",
        value_at_1=0.5,
    )


_FUNCTION_BUILDERS = {
    "one": _make_one,
    "id": _make_id,
    "cos-bump": _make_cos_bump,
    "g-compressed": _make_g_compressed,
    "h-compressed": _make_h_compressed,
    "half-square": _make_half_square,
}


def get_function(name: str) -> FunctionSpec:
    """Resolve a catalog function by name."""
    key = name.strip()
    try:
        return _FUNCTION_BUILDERS[key]()
    except KeyError:
        raise UnknownFunction(f"unknown function name: {name!r}") from None


def function_names() -> list[str]:
    return list(_FUNCTION_BUILDERS)


def function_catalog() -> list[FunctionSpec]:
    """All named test functions, in registry order."""
    return [build() for build in _FUNCTION_BUILDERS.values()]


# ---------------------------------------------------------------------------
# rules, tables and inner products
# ---------------------------------------------------------------------------

def default_abs_tol(system: SystemHandle) -> float:
    return PIECEWISE_ABS_TOL if system.piecewise_constant else SMOOTH_ABS_TOL


def breakpoints_upto(system: SystemHandle, k_max: int) -> tuple:
    """Sorted union of element breakpoints for indices 1..k_max."""
    pts: set[float] = set()
    for k in range(1, k_max + 1):
        pts.update(system.breakpoints(k))
    return tuple(sorted(pts))


def recommended_rule(system: SystemHandle, k_max: int,
                     abs_tol: Optional[float] = None,
                     extra_breakpoints: Sequence[float] = ()) -> QuadratureRule:
    """A quadrature rule adequate for integrands built from indices <= k_max."""
    if system.panels_hint is not None:
        panels = int(system.panels_hint(k_max))
    else:
        panels = max(4, k_max) if system.smooth else 2
    rule = QuadratureRule(
        order=16,
        panels=panels,
        breakpoints=breakpoints_upto(system, k_max),
        abs_tol=default_abs_tol(system) if abs_tol is None else abs_tol,
    )
    return rule.with_breakpoints(extra_breakpoints) if extra_breakpoints else rule


def eval_matrix(system: SystemHandle, n: int, us, fn: str = "eval") -> np.ndarray:
    """Table ``M[k-1, j] = phi_k(us[j])`` (or of an antiderivative field)."""
    func = getattr(system, fn)
    us = np.atleast_1d(np.asarray(us, dtype=float))
    ks = np.arange(1, n + 1)
    vals = np.asarray(func(ks[:, None], us[None, :]), dtype=float)
    if vals.shape != (n, len(us)):
        vals = np.stack([np.broadcast_to(np.asarray(func(k, us), dtype=float),
                                         us.shape) for k in ks])
    return vals


def system_values(system: SystemHandle, n: int, x: float) -> np.ndarray:
    """Vector ``(phi_1(x), ..., phi_n(x))``."""
    return eval_matrix(system, n, [x])[:, 0]


def _window_breakpoints(system: SystemHandle, k: int,
                        lo: float, hi: float) -> tuple:
    if system.breakpoints_in is not None:
        return tuple(system.breakpoints_in(k, lo, hi))
    return tuple(p for p in system.breakpoints(k) if lo < p < hi)


def _step_inner_product(system: SystemHandle, j: int, k: int) -> float:
    """Exact inner product for piecewise-constant systems.

    The product of two elements is integrated by summing, over the constant
    pieces of the coarser element, its value times the antiderivative
    increment of the finer one.  When both elements are periodic with
    compatible periods the sum runs over a single common period only, which
    keeps sign-system products with ~2**k jumps tractable.
    """
    window, count = 1.0, 1
    if system.period is not None:
        pj, pk = system.period(j), system.period(k)
        if pj is not None and pk is not None:
            big, small = max(pj, pk), min(pj, pk)
            if (big / small).denominator == 1 and (1 / big).denominator == 1:
                window, count = float(big), int(1 / big)

    def pieces(idx: int) -> int:
        if system.period is not None and system.period(idx) is not None:
            per_period = len(_window_breakpoints(
                system, idx, 0.0, float(system.period(idx)))) + 1
            return int(round(window / float(system.period(idx)))) * per_period
        return len(system.breakpoints(idx)) + 1

    coarse, fine = (j, k) if pieces(j) <= pieces(k) else (k, j)
    edges = np.array([0.0, *_window_breakpoints(system, coarse, 0.0, window),
                      window])
    mids = (edges[:-1] + edges[1:]) / 2.0
    coarse_vals = np.asarray(system.eval(coarse, mids), dtype=float)
    fine_anti = np.asarray(system.antideriv(fine, edges), dtype=float)
    one_window = float(np.dot(coarse_vals, np.diff(fine_anti)))
    return count * one_window


def inner_product(system: SystemHandle, j: int, k: int,
                  rule: Optional[QuadratureRule] = None) -> float:
    """L2 inner product of elements j and k of a system."""
    if system.piecewise_constant and system.antideriv is not None:
        return _step_inner_product(system, j, k)
    if rule is None:
        rule = recommended_rule(system, max(j, k))
    return integrate(lambda u: np.asarray(system.eval(j, u), dtype=float)
                     * np.asarray(system.eval(k, u), dtype=float), rule).value


def gram_matrix(system: SystemHandle, n: int,
                rule: Optional[QuadratureRule] = None) -> np.ndarray:
    """Matrix of pairwise inner products of the first n elements."""
    if system.piecewise_constant and system.antideriv is not None:
        out = np.empty((n, n))
        for j in range(1, n + 1):
            for k in range(j, n + 1):
                out[j - 1, k - 1] = out[k - 1, j - 1] = _step_inner_product(
                    system, j, k)
        return out
    if rule is None:
        rule = recommended_rule(system, n)
    from .quadrature import _panel_points, _segment_edges  # shared kernels
    edges = _segment_edges(0.0, 1.0, rule.breakpoints)
    nodes, weights = _panel_points(edges, rule.order, 2 * rule.panels)
    table = eval_matrix(system, n, nodes)
    return (table * weights) @ table.T


def lipschitz_quotient(fn: Callable, samples: int = 513) -> float:
    """Largest sampled difference quotient of ``fn`` on a uniform grid."""
    us = np.linspace(0.0, 1.0, samples)
    vals = np.asarray(fn(us), dtype=float)
    return float(np.max(np.abs(np.diff(vals)) / np.diff(us)))
