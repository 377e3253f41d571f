"""The counit, the 1-cocycle ``C(b) = pi(b) e_a - eps(b) e_a`` and its growth.

The cocycle lives on the discrete module ``M_{q+1/q, a}``.  Its values lie in
the ``n != 0`` part of the window, which is the direct sum of the two discrete
series sectors, each preserved by the ladder action because the kernel
coefficients at ``n = +-1`` vanish exactly.

Growth of the cocycle along the ladder is

    G_n = (2 {a+2} / ({a}^2 {a+1})) lim_{lambda -> q+1/q} (1 - P_n(u(lambda))) / (q+1/q - lambda)
        = (2 {a+2} / ({a}^2 {a+1})) P_n'(1) / D

with ``u(lambda) = (lambda + c) / D`` the affine map onto ``[.., 1]``.
"""
from __future__ import annotations

import concurrent.futures
from dataclasses import dataclass, field

import mpmath

from . import askey_wilson as aw
from .errors import DomainError, NumericalFailure
from .ladder import Apoly, Minus, Plus, apply_word, gram_lambda, make_module, project_sign
from .scalars import ParamContext, to_mpf
from .uq_irreps import inner, xi_vectors

SCAN_LIMIT = 200


# -- counit ------------------------------------------------------------------


def _real(ctx, z, what):
    z = ctx.mp.mpmathify(z)
    if abs(ctx.mp.im(z)) > ctx.tolerance(8) * max(1, abs(z)):
        raise NumericalFailure(f"{what} is not real: {z}")
    return ctx.mp.re(z)


def epsilon_generator(ctx, g, c):
    """Counit of ``T+_c``, ``T-_c`` or ``P(A_c)`` from the xi-vector inner products."""
    c = ctx.num(c)
    target = xi_vectors(ctx, ctx.a).xi
    vecs = xi_vectors(ctx, c)
    if g is Plus:
        return _real(ctx, inner(vecs.xi_plus, target), "eps(T+)")
    if g is Minus:
        return _real(ctx, inner(vecs.xi_minus, target), "eps(T-)")
    if isinstance(g, Apoly):
        raw = inner(vecs.xi, target) - ctx.qdouble(c) * ctx.t / ctx.brace1
        return g(_real(ctx, raw, "eps(A)"))
    raise TypeError(f"unknown generator {g!r}")


def epsilon_word(ctx, w):
    val = ctx.mp.one
    for g, c in zip(w.symbols, w.subscripts(ctx)):
        val *= epsilon_generator(ctx, g, c)
    return val


def epsilon_word_scale(ctx, w):
    """Magnitude bound for the rounding error of :func:`epsilon_word`.

    Each factor is replaced by the size of the terms it is computed from,
    ``{c} + {a}`` for ``T+-_c`` and ``sum |p_k| {1}^k`` for ``P(A_c)``, so
    factors that vanish up to rounding are not taken as exactly zero.
    """
    val = ctx.mp.one
    for g, c in zip(w.symbols, w.subscripts(ctx)):
        if isinstance(g, Apoly):
            val *= sum(abs(ctx.num(p)) * ctx.brace1**k for k, p in enumerate(g.coeffs))
        else:
            val *= ctx.qbrace(c) + ctx.qbrace(ctx.a)
    return val


# -- I_c ---------------------------------------------------------------------


@dataclass(frozen=True)
class IcElement:
    """Finitely supported ``n -> coefficient`` in the direct sum of the ``B(C_n)``."""

    coeffs: dict = field(default_factory=dict)

    @classmethod
    def phi(cls, m):
        """The minimal projection ``Phi_m``."""
        return cls({m: 1})

    def epsilon(self):
        return self.coeffs.get(0, 0)


# -- the cocycle -------------------------------------------------------------


class CocycleContext:
    """The discrete module ``M_{q+1/q, a}`` on ``[-N, N]`` with its limit form."""

    def __init__(self, ctx, N=16):
        self.ctx = ctx
        self.module = make_module(ctx, None, None, N)
        self.form = gram_lambda(self.module)

    @property
    def N(self):
        return self.module.N

    def e_a(self):
        return self.module.basis(0)

    def pi(self, w, v):
        """Action on the ``n != 0`` part, where cocycle values live."""
        v = list(v)
        v[self.N] = self.ctx.mp.zero
        return apply_word(self.module, w, v)

    def norm2(self, v):
        """Form norm with the (infinite) ``n = 0`` entry left out."""
        v = list(v)
        v[self.N] = self.ctx.mp.zero
        return self.form.norm2(v)


def cocycle_eval(cc, w, scale=1):
    """``pi(w) xi - eps(w) xi`` for ``xi = scale * e_a``."""
    mp = cc.ctx.mp
    s = cc.ctx.num(scale)
    xi = [s * x for x in cc.e_a()]
    image = apply_word(cc.module, w, xi)
    eps = epsilon_word(cc.ctx, w)
    return [x - eps * y for x, y in zip(image, xi)] if eps else [mp.mpmathify(x) for x in image]


def cocycle_extend(cc, w, omega):
    e = omega.epsilon()
    return [e * x for x in cocycle_eval(cc, w)]


def support(cc, v, tol=None):
    tol = cc.ctx.tolerance(8) if tol is None else tol
    return [n for n in cc.module.indices() if abs(v[n + cc.N]) > tol]


def _scale(*vectors):
    """Magnitude reference for coordinate errors, never below 1."""
    return max([1] + [abs(x) for v in vectors for x in v])


def yd_weight_check(cc, w):
    """``C(w)`` is concentrated in the weight space at index ``net_shift(w)``.

    Stray coordinates are measured against the size of ``pi(w) e_a`` and
    the terms of ``eps(w)``, since ``C(w)`` is their difference.
    """
    image = apply_word(cc.module, w, cc.e_a())
    scale = _scale(image, [epsilon_word_scale(cc.ctx, w)])
    tol = cc.ctx.tolerance(8) * scale
    v = cocycle_eval(cc, w)
    k = w.net_shift
    return all(abs(x) <= tol for n, x in zip(cc.module.indices(), v) if n != k)


def decompose_pm(cc, w):
    plus, _, minus = project_sign(cc.module, cocycle_eval(cc, w))
    return plus, minus


def cocycle_defect(cc, x, y, part=None):
    """Max coordinate error of ``C(xy) = pi(x) C(y) + C(x) eps(y)``.

    ``xy`` applies ``y`` first.  The error is relative to the largest term
    involved (at least 1).  With ``part`` set to ``"plus"`` or ``"minus"``
    the identity is checked for the projected cocycle ``C_+`` or ``C_-``.
    """
    ctx = cc.ctx

    def C(word):
        v = cocycle_eval(cc, word)
        if part is None:
            return v
        plus, _, minus = project_sign(cc.module, v)
        return plus if part == "plus" else minus

    xy = y.then(x)
    lhs = C(xy)
    first = cc.pi(x, C(y))
    second = [r * epsilon_word(ctx, y) for r in C(x)]
    scale = _scale(
        apply_word(cc.module, xy, cc.e_a()),
        [epsilon_word_scale(ctx, xy), epsilon_word_scale(ctx, x) * epsilon_word_scale(ctx, y)],
        first,
        second,
    )
    return max(abs(l - p - r) for l, p, r in zip(lhs, first, second)) / scale


# -- growth ------------------------------------------------------------------


def u1_eigenvalue(ctx, lam):
    """``u(lambda) = (lambda + c) / D``."""
    return (ctx.num(lam) + ctx.shift) / ctx.jacobian


def growth_constant(ctx):
    a = ctx.a
    return 2 * ctx.qbrace(a + 2) / (ctx.qbrace(a) ** 2 * ctx.qbrace(a + 1))


def _hp(ctx, poly):
    return ctx.with_digits(poly.dps)


def growth_closed(ctx, n):
    if n == 0:
        return ctx.mp.zero
    P = aw.substitute_P(ctx, n)
    hp = _hp(ctx, P)
    return ctx.mp.mpf(growth_constant(hp) * P.derivative()(1) / hp.jacobian)


def growth_via_Q(ctx, n):
    """``{a+2} Q_n'((q+1/q)/2) / ({a}^2 {a+1})``, the same value by the chain rule."""
    if n == 0:
        return ctx.mp.zero
    Q = aw.normalize_Q(ctx, n)
    hp = _hp(ctx, Q)
    return ctx.mp.mpf(growth_constant(hp) / 2 * Q.derivative()(hp.brace1 / 2))


def growth_numeric(ctx, n, eps):
    """Difference quotient of ``1 - P_n(u(lambda))`` at ``lambda = q + 1/q - eps``."""
    if n == 0:
        return ctx.mp.zero
    P = aw.substitute_P(ctx, n)
    hp = _hp(ctx, P)
    e = to_mpf(hp.mp, eps)
    if not 0 < e < hp.brace1:
        raise DomainError("eps must lie in (0, q + 1/q)")
    val = growth_constant(hp) * (1 - P(u1_eigenvalue(hp, hp.brace1 - e))) / e
    return ctx.mp.mpf(val)


def remainder_constant(ctx, n):
    """``K`` with ``|G_numeric - G_closed| / G_closed <= K eps``.

    All zeros of ``P_n''`` lie left of 1, so ``P_n''`` is largest at 1 on the
    difference interval and Taylor's remainder gives ``K = P_n''(1) / (2 D P_n'(1))``.
    """
    if n < 2:
        return ctx.mp.zero
    P = aw.substitute_P(ctx, n)
    hp = _hp(ctx, P)
    d1 = P.derivative()
    return ctx.mp.mpf(d1.derivative()(1) / (2 * hp.jacobian * d1(1)))


def growth_alternatives(ctx, n):
    """Growth under the three candidate normalizations of the constant.

    ``chain_rule`` is :func:`growth_closed`; ``no_jacobian`` drops the ``1/D``
    factor; ``regrouped`` uses ``({1} + c {a+2}) / ({a}^2 {a+1}) Q_n'((q+1/q)/2)``.
    All three are fixed multiples of ``P_n'(1)``.
    """
    if n == 0:
        z = ctx.mp.zero
        return {"chain_rule": z, "no_jacobian": z, "regrouped": z}
    P = aw.substitute_P(ctx, n)
    Q = aw.normalize_Q(ctx, n)
    hp = _hp(ctx, P)
    a = hp.a
    dP = P.derivative()(1)
    dQ = Q.derivative()(hp.brace1 / 2)
    K = growth_constant(hp)
    regrouped = (hp.brace1 + hp.shift * hp.qbrace(a + 2)) / (hp.qbrace(a) ** 2 * hp.qbrace(a + 1))
    return {
        "chain_rule": ctx.mp.mpf(K * dP / hp.jacobian),
        "no_jacobian": ctx.mp.mpf(K * dP),
        "regrouped": ctx.mp.mpf(regrouped * dQ),
    }


# -- properness scan ---------------------------------------------------------

_ROW_FIELDS = ("n", "G_closed", "G_numeric", "gap", "dP1", "x_max", "bound")


@dataclass
class GrowthRow:
    n: int
    G_closed: object
    G_numeric: object
    gap: object
    dP1: object
    x_max: object = None
    bound: object = None

    def to_dict(self, digits):
        out = {}
        for k in _ROW_FIELDS:
            v = getattr(self, k)
            out[k] = v if k == "n" else _fmt(v, digits)
        return out

    @classmethod
    def from_dict(cls, d, mp):
        kw = {k: (int(d[k]) if k == "n" else _parse(d[k], mp)) for k in _ROW_FIELDS}
        return cls(**kw)


@dataclass
class GrowthReport:
    config: dict
    eps: str
    rows: list
    flags: dict
    sample: tuple
    n0: int
    trend_monotone: bool

    @property
    def digits(self):
        return int(self.config["digits"])

    def row(self, n):
        return self.rows[n]

    @property
    def proper(self):
        return all(self.flags.values())

    def to_dict(self):
        return {
            "config": dict(self.config),
            "eps": self.eps,
            "n0": self.n0,
            "sample": list(self.sample),
            "flags": dict(self.flags),
            "trend_monotone": self.trend_monotone,
            "rows": [r.to_dict(self.digits) for r in self.rows],
        }

    @classmethod
    def from_dict(cls, d):
        mp = ParamContext(d["config"]["q"], d["config"]["a"], d["config"]["digits"]).mp
        return cls(
            config=dict(d["config"]),
            eps=d["eps"],
            rows=[GrowthRow.from_dict(r, mp) for r in d["rows"]],
            flags=dict(d["flags"]),
            sample=tuple(d["sample"]),
            n0=int(d["n0"]),
            trend_monotone=bool(d["trend_monotone"]),
        )


def _fmt(x, digits):
    if x is None:
        return None
    return mpmath.nstr(x, digits)


def _parse(s, mp):
    return None if s is None else mp.mpf(s)


def growth_row(ctx, n, eps):
    G = growth_closed(ctx, n)
    Gn = growth_numeric(ctx, n, eps)
    gap = abs(Gn - G) / G if n else ctx.mp.zero
    if n == 0:
        return GrowthRow(0, G, Gn, gap, ctx.mp.zero)
    P = aw.substitute_P(ctx, n)
    x = aw.largest_zero(P, 1)
    return GrowthRow(
        n,
        G,
        Gn,
        gap,
        ctx.mp.mpf(P.derivative()(1)),
        ctx.mp.mpf(x),
        ctx.mp.mpf(1 / (1 - x)),
    )


def _row_worker(args):
    q, a, digits, n, eps = args
    ctx = ParamContext(q, a, digits)
    return growth_row(ctx, n, eps).to_dict(digits)


def sample_points(n_max):
    out, n = [], 5
    while n <= n_max:
        out.append(n)
        n *= 2
    return tuple(out)


def growth_rows(ctx, n_max, eps=1e-8, jobs=1):
    """Rows for ``0 <= n <= n_max`` in order of ``n``, computed in ``jobs`` processes."""
    n_max = int(n_max)
    if not 0 <= n_max <= SCAN_LIMIT:
        raise DomainError(f"n_max must lie in [0, {SCAN_LIMIT}]")
    q, a = ctx._inputs
    if jobs and jobs > 1:
        with concurrent.futures.ProcessPoolExecutor(max_workers=jobs) as pool:
            # largest degrees first so the slowest builds start early
            order = sorted(range(n_max + 1), reverse=True)
            futures = {n: pool.submit(_row_worker, (q, a, ctx.digits, n, eps)) for n in order}
            return [GrowthRow.from_dict(futures[n].result(), ctx.mp) for n in range(n_max + 1)]
    return [growth_row(ctx, n, eps) for n in range(n_max + 1)]


def properness_scan(ctx, n_max, eps=1e-8, jobs=1):
    """Growth rows for ``0 <= n <= n_max`` and the three properness flags.

    (i) ``min G`` over ``[2 n0, n_max]`` exceeds ``max G`` over ``[0, n0]``,
    ``n0 = n_max // 4``; (ii) ``P_n'(1) > 1 / (1 - x_max)`` and (iii)
    ``x_max`` strictly increasing, both on the sample ``5, 10, 20, ...``.
    """
    n_max = int(n_max)
    if not 5 <= n_max <= SCAN_LIMIT:
        raise DomainError(f"n_max must lie in [5, {SCAN_LIMIT}]")
    rows = growth_rows(ctx, n_max, eps, jobs)

    n0 = n_max // 4
    G = [r.G_closed for r in rows]
    sample = sample_points(n_max)
    flags = {
        "divergence": min(G[2 * n0 :]) > max(G[: n0 + 1]),
        "derivative_bound": all(rows[n].dP1 > rows[n].bound for n in sample),
        "zeros_increasing": all(rows[m].x_max < rows[n].x_max for m, n in zip(sample, sample[1:])),
    }
    lo = min(10, n_max)
    trend = all(x < y for x, y in zip(G[lo:], G[lo + 1 :]))
    return GrowthReport(
        config={**ctx.config(), "nmax": n_max},
        eps=repr(eps) if isinstance(eps, float) else str(eps),
        rows=rows,
        flags=flags,
        sample=sample,
        n0=n0,
        trend_monotone=trend,
    )
