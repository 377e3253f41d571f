"""Askey-Wilson polynomials p_n(x; -q^{1-2a}, -q^{2a+1}, q, q | q^2).

The terminating 4phi3 is expanded in the monomial basis of ``x = cos(theta)``
using ``(u e^{i theta}, u e^{-i theta}; Q)_i = prod_{j<i} (1 - 2 u Q^j x + u^2 Q^{2j})``,
so no branch of ``theta`` is ever chosen.  The expansion cancels heavily: the
largest term grows like ``Q^{-n(n-1)/2}`` while the coefficients stay
moderate.  Each polynomial is therefore built at ``digits + guard`` decimal
digits, where the guard is measured by a cheap low-precision pass and then
verified a posteriori.  The resulting :class:`QPolynomial` keeps that
working precision for every later evaluation.
"""
from __future__ import annotations

import functools
import math
from dataclasses import dataclass, field

import mpmath

from .errors import DomainError, NumericalFailure, PrecisionExhausted
from .scalars import working_context

GUARD_MARGIN = 20
MAX_WORKING_DPS = 60000


@dataclass(frozen=True)
class QPolynomial:
    """Real polynomial with ascending coefficients at a fixed working precision.

    ``digits`` is the target precision of the owning context; ``dps`` is the
    precision the coefficients were computed at and are evaluated with.
    """

    coeffs: tuple
    digits: int
    dps: int = 0

    def __post_init__(self):
        dps = self.dps or self.digits
        object.__setattr__(self, "dps", dps)
        mp = working_context(dps)
        cs = [mp.mpf(c) for c in self.coeffs]
        if cs:
            top = max(abs(c) for c in cs)
            floor = top * mp.mpf(10) ** (-(self.digits - 5))
            while cs and (cs[-1] == 0 or abs(cs[-1]) <= floor):
                cs.pop()
        object.__setattr__(self, "coeffs", tuple(cs))

    @property
    def mp(self):
        return working_context(self.dps)

    @property
    def degree(self):
        return len(self.coeffs) - 1

    def __call__(self, x):
        """Horner evaluation."""
        mp = self.mp
        x = mp.mpmathify(x)
        acc = mp.zero
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def term_sum(self, x):
        mp = self.mp
        x = mp.mpmathify(x)
        return mp.fsum(c * x ** k for k, c in enumerate(self.coeffs))

    def magnitude(self, x):
        """``sum |c_k| |x|^k``, the scale of rounding errors at ``x``."""
        mp = self.mp
        ax = abs(mp.mpmathify(x))
        return mp.fsum(abs(c) * ax ** k for k, c in enumerate(self.coeffs))

    def _like(self, coeffs, other=None):
        dps = max(self.dps, other.dps) if isinstance(other, QPolynomial) else self.dps
        return QPolynomial(tuple(coeffs), self.digits, dps)

    def derivative(self):
        mp = self.mp
        return self._like(mp.mpf(k) * c for k, c in enumerate(self.coeffs) if k)

    def __add__(self, other):
        if not isinstance(other, QPolynomial):
            other = QPolynomial((other,), self.digits, self.dps)
        mp = working_context(max(self.dps, other.dps))
        n = max(len(self.coeffs), len(other.coeffs))
        a = list(self.coeffs) + [0] * (n - len(self.coeffs))
        b = list(other.coeffs) + [0] * (n - len(other.coeffs))
        return self._like((mp.mpmathify(x) + y for x, y in zip(a, b)), other)

    __radd__ = __add__

    def __neg__(self):
        return self._like(-c for c in self.coeffs)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, QPolynomial):
            mp = self.mp
            s = mp.mpmathify(other)
            return self._like(s * c for c in self.coeffs)
        mp = working_context(max(self.dps, other.dps))
        if not self.coeffs or not other.coeffs:
            return self._like((), other)
        out = [mp.zero] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, x in enumerate(self.coeffs):
            for j, y in enumerate(other.coeffs):
                out[i + j] += x * y
        return self._like(out, other)

    __rmul__ = __mul__

    def compose_affine(self, scale, offset):
        """``X -> p(scale * X + offset)``."""
        mp = self.mp
        scale = mp.mpmathify(scale)
        offset = mp.mpmathify(offset)
        acc = [mp.zero]
        for c in reversed(self.coeffs):
            # acc <- acc * (scale X + offset) + c
            nxt = [mp.zero] * (len(acc) + 1)
            for k, v in enumerate(acc):
                nxt[k] += v * offset
                nxt[k + 1] += v * scale
            nxt[0] += c
            acc = nxt
        return self._like(acc)

    def max_coeff(self):
        return max((abs(c) for c in self.coeffs), default=self.mp.zero)


@dataclass(frozen=True)
class ZeroSet:
    """Sorted real zeros with relative residuals ``|p(x)| / sum |c_k x^k|``."""

    zeros: tuple
    residuals: tuple
    complex_zeros: tuple = ()

    @property
    def largest(self):
        return self.zeros[-1] if self.zeros else None

    def all_real(self):
        return not self.complex_zeros

    def is_simple(self):
        """Pairwise gaps exceed ten times the largest residual."""
        worst = max(self.residuals, default=0)
        return all(hi - lo > 10 * worst for lo, hi in zip(self.zeros, self.zeros[1:]))


# -- expansion ---------------------------------------------------------------


def _expand_phi(mp, n, alpha, lower, base, z, u):
    """Expand ``4phi3(base^-n, alpha, u e^{it}, u e^{-it}; lower; base, z)`` in ``x``.

    Returns ``(coefficients, largest |contribution|)``.
    """
    total = [mp.zero] * (n + 1)
    factor = [mp.one]  # (u e^{it}, u e^{-it}; base)_i as a polynomial
    coef = mp.one
    biggest = mp.one
    inv_base_n = base ** (-n)
    power = mp.one  # base**j
    for i in range(n + 1):
        if i:
            j_power = power
            num = (1 - inv_base_n * j_power) * (1 - alpha * j_power) * z
            den = 1 - base * j_power
            for l in lower:
                den *= 1 - l * j_power
            if den == 0:
                raise DomainError(f"denominator vanishes at index {i}")
            coef = coef * num / den
            w = u * j_power
            lin, const = -2 * w, 1 + w * w
            new = [mp.zero] * (len(factor) + 1)
            for k, f in enumerate(factor):
                new[k] += f * const
                new[k + 1] += f * lin
            factor = new
            power = power * base
        for k, f in enumerate(factor):
            contribution = coef * f
            total[k] += contribution
            a = abs(contribution)
            if a > biggest:
                biggest = a
    return total, biggest


def _standard_data(p):
    """Parameters of the base-q^2 Askey-Wilson family from a context ``p``."""
    q, a = p.q, p.a
    Q = q * q
    pa = -p.qpow(1 - 2 * a)
    pb = -p.qpow(2 * a + 1)
    pc = pd = q
    return Q, pa, pb, pc, pd


def _standard_phi(p, n):
    mp = p.mp
    Q, pa, pb, pc, pd = _standard_data(p)
    abcd = pa * pb * pc * pd
    return _expand_phi(mp, n, abcd * Q ** (n - 1), (pa * pb, pa * pc, pa * pd), Q, Q, pa)


def _literal_phi(p, n):
    """The series as typeset with base ``q``: upper ``q^-n, q^{n+3}``."""
    mp = p.mp
    q, a = p.q, p.a
    u = -p.qpow(1 - 2 * a)
    low = -p.qpow(2 - 2 * a)
    return _expand_phi(mp, n, q ** (n + 3), (q * q, low, low), q, q, u)


def _build(ctx, n, expander):
    """Run ``expander`` with enough guard digits to keep ``ctx.digits``."""
    _, biggest = expander(_Coarse(ctx), n)
    guard = max(0, math.ceil(float(mpmath.log10(biggest)))) + GUARD_MARGIN
    dps = ctx.digits + guard
    while True:
        if dps > MAX_WORKING_DPS:
            raise PrecisionExhausted(
                f"degree {n} needs more than {MAX_WORKING_DPS} working digits",
                recommended_digits=dps,
            )
        hp = ctx.with_digits(dps)
        coeffs, biggest = expander(hp, n)
        top = max(abs(c) for c in coeffs)
        if top == 0:
            raise NumericalFailure(f"degree {n} expansion cancelled to zero")
        lost = float(mpmath.log10(biggest / top))
        kept = dps - max(lost, 0)
        if kept >= ctx.digits + GUARD_MARGIN // 2:
            return QPolynomial(tuple(coeffs), ctx.digits, dps)
        dps += math.ceil(ctx.digits + GUARD_MARGIN - kept)


class _Coarse:
    """15-digit stand-in for a context, used only to size the guard digits."""
    def __init__(self, ctx):
        mp = working_context(15)
        self.mp = mp
        self.q = mp.mpf(ctx.q)
        self.a = mp.mpf(ctx.a)

    def qpow(self, x):
        return self.mp.power(self.q, x)


class AskeyWilson:
    """Polynomial family attached to a :class:`ParamContext`.

    Built polynomials are memoized per degree.
    """

    def __init__(self, ctx):
        self.ctx = ctx
        self._phi = {}
        self._literal = {}
        self._Q = {}
        self._P = {}

    def phi(self, n):
        """The bare 4phi3 series (Askey-Wilson ``p_n`` without prefactor)."""
        _check_degree(n)
        if n not in self._phi:
            self._phi[n] = _build(self.ctx, n, _standard_phi)
        return self._phi[n]

    def literal_phi(self, n):
        _check_degree(n)
        if n not in self._literal:
            self._literal[n] = _build(self.ctx, n, _literal_phi)
        return self._literal[n]

    def prefactor(self, n, dps=None):
        """``a^{-n} (ab, ac, ad; Q)_n`` in the standard normalization."""
        p = self.ctx.with_digits(dps or self.ctx.digits)
        Q, pa, pb, pc, pd = _standard_data(p)
        val = pa ** (-n)
        for x in (pa * pb, pa * pc, pa * pd):
            val *= p.qpochhammer(x, Q, n)
        return val

    def p(self, n):
        phi = self.phi(n)
        return phi * self.prefactor(n, phi.dps)

    def normalization_point(self, dps):
        """``(q + 1/q) / 2``."""
        return self.ctx.with_digits(dps).brace1 / 2

    def Q(self, n):
        if n not in self._Q:
            phi = self.phi(n)
            at = phi(self.normalization_point(phi.dps))
            if abs(at) <= phi.max_coeff() * phi.mp.mpf(10) ** (-self.ctx.digits):
                raise DomainError(f"p_{n} vanishes at (q + 1/q)/2; parameters are degenerate")
            self._Q[n] = phi * (1 / at)
        return self._Q[n]

    def affine(self, dps):
        """``(D, c)`` with ``c = [[a]]^2/(q+1/q)`` and ``D = q + 1/q + c``."""
        p = self.ctx.with_digits(dps)
        return p.jacobian, p.shift

    def P(self, n):
        if n not in self._P:
            Qn = self.Q(n)
            D, c = self.affine(Qn.dps)
            self._P[n] = Qn.compose_affine(D / 2, -c / 2)
        return self._P[n]

    def recurrence_coefficients(self, n, dps=None):
        """``(A_n, B_n, C_n)`` of ``2x phi_n = A_n phi_{n+1} + B_n phi_n + C_n phi_{n-1}``."""
        p = self.ctx.with_digits(dps or self.ctx.digits)
        Q, pa, pb, pc, pd = _standard_data(p)
        abcd = pa * pb * pc * pd
        A = (
            (1 - pa * pb * Q**n) * (1 - pa * pc * Q**n) * (1 - pa * pd * Q**n) * (1 - abcd * Q ** (n - 1))
            / (pa * (1 - abcd * Q ** (2 * n - 1)) * (1 - abcd * Q ** (2 * n)))
        )
        # C_0 is a 0/0 form (abcd Q^-2 = 1) whose value is 0
        C = p.mp.zero if n == 0 else (
            pa * (1 - Q**n) * (1 - pb * pc * Q ** (n - 1)) * (1 - pb * pd * Q ** (n - 1)) * (1 - pc * pd * Q ** (n - 1))
            / ((1 - abcd * Q ** (2 * n - 2)) * (1 - abcd * Q ** (2 * n - 1)))
        )
        B = pa + 1 / pa - A - C
        return A, B, C

    def recurrence_residual(self, n, expansion=None):
        """Relative coefficient residual of the three-term recurrence at ``n``."""
        get = expansion or self.phi
        nxt, cur = get(n + 1), get(n)
        prev = get(n - 1) if n else QPolynomial((), self.ctx.digits, cur.dps)
        dps = max(nxt.dps, cur.dps, prev.dps)
        A, B, C = self.recurrence_coefficients(n, dps)
        x2 = QPolynomial((0, 2), self.ctx.digits, dps)
        lhs = x2 * cur
        res = lhs - (nxt * A + cur * B + prev * C)
        return res.max_coeff() / lhs.max_coeff()


def _check_degree(n):
    if n < 0 or int(n) != n:
        raise DomainError(f"degree must be a non-negative integer, got {n}")


@functools.lru_cache(maxsize=32)
def family(ctx):
    return AskeyWilson(ctx)


def aw_poly(ctx, n):
    return family(ctx).p(n)


def normalize_Q(ctx, n):
    return family(ctx).Q(n)


def substitute_P(ctx, n):
    return family(ctx).P(n)


def poly_derivative(p):
    return p.derivative()


# -- zeros -------------------------------------------------------------------


def _newton(p, x, steps=60):
    dp = p.derivative()
    mp = p.mp
    # the step bottoms out at rounding noise, so stop at the target digits
    floor = mp.mpf(10) ** (-(p.digits + 10))
    for _ in range(steps):
        d = dp(x)
        if d == 0:
            break
        step = p(x) / d
        x = x - step
        if abs(step) <= floor * max(1, abs(x)):
            break
    return x


def poly_zeros(p):
    """All zeros of ``p``: real ones sorted and Newton-polished, complex ones reported."""
    if p.degree < 1:
        raise DomainError("poly_zeros needs degree >= 1")
    mp = p.mp
    if p.degree == 1:
        root = -p.coeffs[0] / p.coeffs[1]
        return ZeroSet((root,), (abs(p(root)) / p.magnitude(root),))
    steps = 200
    while True:
        try:
            roots = mp.polyroots(list(reversed(p.coeffs)), maxsteps=steps, extraprec=2 * p.degree + 32)
            break
        except mpmath.libmp.NoConvergence:
            if steps > 20000:
                raise NumericalFailure(f"zero finder did not converge for degree {p.degree}")
            steps *= 4
    real_cut = mp.mpf(10) ** (-(p.digits // 2))
    reals, complexes = [], []
    for r in roots:
        if abs(mp.im(r)) <= real_cut * (1 + abs(r)):
            reals.append(_newton(p, mp.re(r), steps=8))
        else:
            complexes.append(r)
    reals.sort()
    residuals = tuple(abs(p(x)) / p.magnitude(x) for x in reals)
    return ZeroSet(tuple(reals), residuals, tuple(complexes))


def no_zeros_beyond(p, x):
    """True when every derivative of ``p`` has the sign of the leading coefficient at ``x``.

    By Budan-Fourier this certifies that ``p`` has no zero in ``[x, inf)``.
    """
    lead = p.coeffs[-1]
    d = p
    while d.degree >= 0:
        v = d(x)
        if v == 0 or (v > 0) != (lead > 0):
            return False
        d = d.derivative()
    return True


def largest_zero(p, start=1):
    """Largest real zero by Newton iteration from the right of all zeros.

    ``start`` must be certified zero-free to its right (Budan-Fourier); Newton
    then descends monotonically onto the largest zero of a real-rooted ``p``.
    """
    if p.degree < 1:
        raise DomainError("largest_zero needs degree >= 1")
    mp = p.mp
    x = mp.mpmathify(start)
    if not no_zeros_beyond(p, x):
        raise DomainError("start point is not to the right of every zero")
    x = _newton(p, x, steps=2000)
    delta = max(abs(x), 1) * mp.mpf(10) ** (-(p.digits - 5))
    if p(x - delta) * p(x + delta) > 0 and abs(p(x)) > p.magnitude(x) * mp.mpf(10) ** (-p.digits):
        raise NumericalFailure("Newton iteration did not land on a sign change")
    return x
