"""Basic modules M_{lambda,b} as ladder models on a finite index window.

A vector is a list of ``2N + 1`` coordinates on ``e_{b+2n}``, ``-N <= n <= N``
(list position ``n + N``).  The ladder conventions are

* ``T+ e_{b+2n} = e_{b+2n+2}`` for ``n >= 0`` and ``T- e_{b+2n} = e_{b+2n-2}``
  for ``n <= 0`` (definition of the basis);
* ``T-_{c+2} T+_c = ({c-a+1} - A_c)({c+a+1} + A_c)`` fixes ``T-`` on ``n >= 1``;
* ``T+_{c-2} T-_c = ({c-a-1} - A_c)({c+a-1} + A_c)`` fixes ``T+`` on ``n <= -1``;
* ``A`` acts as ``lambda`` everywhere.

Generators act weight by weight: the ``T+`` applied to a vector of weight
``[c]`` is ``T+_c``.  Shifts that would leave the window raise
:class:`~qcocycle.errors.WindowOverflow` instead of truncating.

At ``lambda = q + 1/q`` the factor ``{x} - lambda`` is evaluated as
``[[(x+1)/2]] [[(x-1)/2]]``, which is an exact zero at ``x = +-1``.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field

from .errors import DomainError, WindowOverflow


class Sym(enum.Enum):
    PLUS = "+"
    MINUS = "-"

    def __repr__(self):
        return self.name.capitalize()


Plus = Sym.PLUS
Minus = Sym.MINUS


@dataclass(frozen=True)
class Apoly:
    """``P(A)`` for a polynomial ``P`` with ascending coefficients."""

    coeffs: tuple = (0, 1)

    def __call__(self, x):
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def __repr__(self):
        return f"Apoly{self.coeffs}"


A = Apoly((0, 1))


def shift_of(symbol):
    if symbol is Plus:
        return 1
    if symbol is Minus:
        return -1
    return 0


@dataclass(frozen=True)
class LadderWord:
    """A word in ``T+``, ``T-`` and ``P(A)``, listed in order of application.

    ``LadderWord((Plus, Minus))`` is the element ``T-_{c0+2} T+_{c0}``:
    the first symbol acts first, at the starting weight ``c0`` (``a`` when
    ``start`` is None), and each later symbol carries the running weight.
    """

    symbols: tuple = ()
    start: object = None

    def __post_init__(self):
        object.__setattr__(self, "symbols", tuple(self.symbols))

    @property
    def net_shift(self):
        return sum(shift_of(s) for s in self.symbols)

    def __len__(self):
        return len(self.symbols)

    def then(self, other):
        """The word that applies ``self`` first and ``other`` afterwards.

        In algebra notation this is the product ``other * self``.
        """
        return LadderWord(self.symbols + other.symbols, self.start)

    def subscripts(self, ctx):
        """Running subscripts ``c_k`` of each symbol."""
        c = ctx.a if self.start is None else ctx.num(self.start)
        out = []
        for s in self.symbols:
            out.append(c)
            c = c + 2 * shift_of(s)
        return out

    def offsets(self):
        """Running subscripts as index offsets ``n`` with ``c = c0 + 2n``."""
        n, out = 0, []
        for s in self.symbols:
            out.append(n)
            n += shift_of(s)
        return out


@dataclass(frozen=True)
class LadderModule:
    ctx: object
    lam: object
    b: object
    N: int
    discrete: bool
    raise_coef: dict = field(repr=False)
    lower_coef: dict = field(repr=False)

    @property
    def size(self):
        return 2 * self.N + 1

    def zero(self):
        return [self.ctx.mp.zero] * self.size

    def basis(self, n):
        if abs(n) > self.N:
            raise WindowOverflow(f"e_(b+2*{n}) lies outside window of radius {self.N}")
        v = self.zero()
        v[n + self.N] = self.ctx.mp.one
        return v

    def indices(self):
        return range(-self.N, self.N + 1)

    def weight(self, n):
        return self.b + 2 * n

    def brace_minus_lambda(self, x):
        """``{x} - lambda`` with an exact zero at ``x = +-1`` when discrete."""
        ctx = self.ctx
        if self.discrete:
            return ctx.qdouble((x + 1) / 2) * ctx.qdouble((x - 1) / 2)
        return ctx.qbrace(x) - self.lam


def make_module(ctx, lam=None, b=None, N=8):
    """Build ``M_{lambda,b}`` on the window ``[-N, N]``.

    ``lam=None`` (or a value equal to ``q + 1/q``) selects the discrete point
    ``lambda = q + 1/q``, where the kernel coefficients are exact zeros.
    """
    if N < 1:
        raise DomainError("window radius N must be at least 1")
    mp = ctx.mp
    b = ctx.a if b is None else ctx.num(b)
    if lam is None:
        lam = ctx.brace1
    else:
        lam = ctx.num(lam)
    discrete = lam == ctx.brace1
    a = ctx.a

    m = LadderModule(ctx, lam, b, N, discrete, {}, {})
    raise_coef, lower_coef = m.raise_coef, m.lower_coef
    # integer offsets are added last so that c - a is exact when b = a
    d = b - a
    for n in range(-N, N):
        if n >= 0:
            raise_coef[n] = mp.one
        else:
            # c = b + 2n + 2
            raise_coef[n] = m.brace_minus_lambda(d + (2 * n + 1)) * (
                ctx.qbrace(2 * a + d + (2 * n + 1)) + lam
            )
    for n in range(-N + 1, N + 1):
        if n <= 0:
            lower_coef[n] = mp.one
        else:
            # c = b + 2n - 2
            lower_coef[n] = m.brace_minus_lambda(d + (2 * n - 1)) * (
                ctx.qbrace(2 * a + d + (2 * n - 1)) + lam
            )
    return m


def apply_generator(m, g, v):
    N = m.N
    if isinstance(g, Apoly):
        factor = g(m.lam)
        return [factor * x for x in v]
    out = m.zero()
    if g is Plus:
        if v[2 * N] != 0:
            raise WindowOverflow(f"T+ would leave the window at n={N}")
        for n in range(-N, N):
            x = v[n + N]
            if x != 0:
                out[n + 1 + N] = m.raise_coef[n] * x
        return out
    if g is Minus:
        if v[0] != 0:
            raise WindowOverflow(f"T- would leave the window at n={-N}")
        for n in range(-N + 1, N + 1):
            x = v[n + N]
            if x != 0:
                out[n - 1 + N] = m.lower_coef[n] * x
        return out
    raise TypeError(f"unknown generator {g!r}")


def apply_word(m, w, v):
    for g in w.symbols:
        v = apply_generator(m, g, v)
    return v


def generator_matrix(m, g):
    """Matrix of a generator on the window (columns are images of ``e_n``)."""
    mp = m.ctx.mp
    M = mp.zeros(m.size)
    N = m.N
    if isinstance(g, Apoly):
        factor = g(m.lam)
        for k in range(m.size):
            M[k, k] = factor
    elif g is Plus:
        for n in range(-N, N):
            M[n + 1 + N, n + N] = m.raise_coef[n]
    elif g is Minus:
        for n in range(-N + 1, N + 1):
            M[n - 1 + N, n + N] = m.lower_coef[n]
    else:
        raise TypeError(f"unknown generator {g!r}")
    return M


def project_sign(m, v):
    """Split ``v`` into its ``n > 0``, ``n = 0`` and ``n < 0`` parts."""
    N = m.N
    zero = m.ctx.mp.zero
    plus = [x if k > N else zero for k, x in enumerate(v)]
    null = [x if k == N else zero for k, x in enumerate(v)]
    minus = [x if k < N else zero for k, x in enumerate(v)]
    return plus, null, minus


# -- invariant forms ---------------------------------------------------------


@dataclass(frozen=True)
class SesquiForm:
    """Diagonal invariant form ``<e_n, e_n>_lambda = g[n]``.

    ``g[0]`` is ``+inf`` at the discrete point.
    """

    module: LadderModule
    z: object
    g: dict

    def inner(self, u, v):
        mp = self.module.ctx.mp
        N = self.module.N
        total = mp.zero
        for n in self.module.indices():
            x, y = u[n + N], v[n + N]
            if x == 0 or y == 0:
                continue
            total += x.conjugate() * self.g[n] * y
        return total

    def norm2(self, v):
        return self.inner(v, v)


def normalization(ctx, lam, discrete=False):
    """``z_lambda = {a+2} {a}^-1 (q+1/q-lambda)^-1 ({2a+1}+lambda)^-1``."""
    if discrete:
        return ctx.mp.inf
    a = ctx.a
    return ctx.qbrace(a + 2) / (ctx.qbrace(a) * (ctx.brace1 - lam) * (ctx.qbrace(2 * a + 1) + lam))


def gram_entry(m, n):
    """Closed-form ``<e_{a+2n}, e_{a+2n}>_lambda``.

    For ``n >= 1``
    ``({a+2}/{a+2n}) prod_{k<n} ({2k+1} - lambda)({2k+1+2a} + lambda)``;
    for ``n <= -1`` the mirrored product from the ``T-`` recursion,
    ``({a+2}/{a+2n}) ({2a-1}+lambda)/({2a+1}+lambda)
    prod_{j<|n|} ({2j+1} - lambda)({2a-2j-1} + lambda)``.
    """
    ctx = m.ctx
    a, lam = ctx.a, m.lam
    if n == 0:
        return normalization(ctx, lam, m.discrete)
    k_max = abs(n)
    val = ctx.qbrace(a + 2) / ctx.qbrace(a + 2 * n)
    if n < 0:
        val *= (ctx.qbrace(2 * a - 1) + lam) / (ctx.qbrace(2 * a + 1) + lam)
    for k in range(1, k_max):
        other = 2 * k + 1 + 2 * a if n > 0 else 2 * a - 2 * k - 1
        val *= m.brace_minus_lambda(2 * k + 1) * (ctx.qbrace(other) + lam)
    return val


def gram_entry_printed_sign(m, n):
    """Positive-side entry with ``({2k+1+2a} - lambda)`` in the second product.

    This is the sign printed in the one-line summary of the limit
    computation; it disagrees with the step-by-step recursion and is only
    evaluated for comparison.
    """
    ctx = m.ctx
    if n < 1:
        raise DomainError("printed-sign variant is defined for n >= 1")
    a, lam = ctx.a, m.lam
    val = ctx.qbrace(a + 2) / ctx.qbrace(a + 2 * n)
    for k in range(1, n):
        val *= m.brace_minus_lambda(2 * k + 1) * (ctx.qbrace(2 * k + 1 + 2 * a) - lam)
    return val


def gram_lambda(m):
    ctx = m.ctx
    if abs(m.b - ctx.a) > ctx.tol:
        raise DomainError("the invariant form is built for the module with b = a")
    if not (0 < m.lam <= ctx.brace1):
        raise DomainError("lambda must lie in (0, q + 1/q]")
    g = {n: gram_entry(m, n) for n in m.indices()}
    return SesquiForm(m, g[0], g)


def gram_recursion(m):
    """Gram entries propagated through ``<T+_c x, y> = ({c}/{c+2}) <x, T-_{c+2} y>``.

    Propagation starts from ``g_0 = z_lambda`` in the principal series and
    from the closed-form ``g_1`` and ``g_-1`` at the discrete point, where
    the relation degenerates across ``n = 0``.
    """
    ctx = m.ctx
    g = {}
    if m.discrete:
        g[0] = ctx.mp.inf
        g[1] = gram_entry(m, 1)
        g[-1] = gram_entry(m, -1)
        up, down = 1, -1
    else:
        g[0] = normalization(ctx, m.lam)
        up, down = 0, 0
    for n in range(up, m.N):
        c = m.weight(n)
        g[n + 1] = ctx.qbrace(c) / ctx.qbrace(c + 2) * m.lower_coef[n + 1] * g[n] / m.raise_coef[n]
    for n in range(down - 1, -m.N - 1, -1):
        c = m.weight(n)
        g[n] = m.raise_coef[n] * g[n + 1] * ctx.qbrace(c + 2) / (ctx.qbrace(c) * m.lower_coef[n + 1])
    return g


def adjoint_defect(form, sector="all"):
    """Largest relative defect of ``<T+_c x, y> = ({c}/{c+2}) <x, T-_{c+2} y>``.

    Checked on every adjacent pair ``(e_c, e_{c+2})`` of the window; pairs
    touching an infinite Gram entry are skipped.  ``sector`` restricts the
    pairs to ``"plus"`` (``n >= 1``) or ``"minus"`` (``n <= -1``).
    """
    m = form.module
    ctx = m.ctx
    mp = ctx.mp
    worst = mp.zero
    for n in range(-m.N, m.N):
        if sector == "plus" and n < 1:
            continue
        if sector == "minus" and n + 1 > -1:
            continue
        g_lo, g_hi = form.g[n], form.g[n + 1]
        if mp.isinf(g_lo) or mp.isinf(g_hi):
            continue
        c = m.weight(n)
        lhs = m.raise_coef[n].conjugate() * g_hi
        rhs = ctx.qbrace(c) / ctx.qbrace(c + 2) * g_lo * m.lower_coef[n + 1]
        scale = max(abs(lhs), abs(rhs))
        if scale:
            worst = max(worst, abs(lhs - rhs) / scale)
    return worst


# -- discrete series limits --------------------------------------------------


def discrete_norm_plus(ctx, n):
    """``lim_{lambda -> q+1/q} <e_{a+2n}, e_{a+2n}>_lambda`` for ``n >= 1``."""
    if n < 1:
        raise DomainError("n must be positive")
    return gram_entry(make_module(ctx, None, None, n), n)


def discrete_norm_minus(ctx, n):
    """``lim_{lambda -> q+1/q} <e_{a-2n}, e_{a-2n}>_lambda`` for ``n >= 1``."""
    if n < 1:
        raise DomainError("n must be positive")
    return gram_entry(make_module(ctx, None, None, n), -n)


def minus_limit_factor(ctx):
    """``{a+2}{a-1} / ({a-2}{a+1})``, the rescaling between the limit form
    and the D2- form normalized by ``<T-_a e_a, T-_a e_a> = 1``."""
    a = ctx.a
    return ctx.qbrace(a + 2) * ctx.qbrace(a - 1) / (ctx.qbrace(a - 2) * ctx.qbrace(a + 1))
