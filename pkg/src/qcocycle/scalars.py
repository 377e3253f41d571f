"""Parameter context and q-number primitives at arbitrary precision.

Every numeric value in the package is derived from a :class:`ParamContext`,
which fixes the deformation parameter ``q``, the real parameter ``a`` and the
number of significant decimal digits.  Arithmetic runs in an mpmath context
private to that precision, so contexts at different precisions can coexist
in one process without touching mpmath's global state.
"""
from __future__ import annotations

import functools
import math
from fractions import Fraction

import mpmath

from .errors import DomainError, NumericalFailure

DEFAULT_DIGITS = 50
MIN_DIGITS = 30

_POCHHAMMER_MAX_FACTORS = 1_000_000


@functools.lru_cache(maxsize=None)
def working_context(dps):
    """Return a shared mpmath context fixed at ``dps`` decimal digits.

    Contexts are cached and never have their precision changed afterwards.
    """
    mp = mpmath.MPContext()
    mp.dps = int(dps)
    return mp


def to_mpf(mp, x):
    """Convert ``x`` to a real number of ``mp`` without binary round-off.

    Python floats are routed through their shortest repr, so ``1.3`` means
    the decimal 1.3 at every precision.
    """
    if isinstance(x, Fraction):
        return mp.mpf(x.numerator) / x.denominator
    if isinstance(x, float):
        return mp.mpf(repr(x))
    return mp.mpf(x)


def to_number(mp, x):
    """Like :func:`to_mpf` but keeps complex values complex."""
    if isinstance(x, complex):
        return mp.mpc(to_mpf(mp, x.real), to_mpf(mp, x.imag))
    if hasattr(x, "_mpc_"):
        # mpc values of any context, including private ones
        return mp.mpc(x)
    return to_mpf(mp, x)


class ParamContext:
    """The global parameters ``(q, a, t = [[a]], digits)``.

    >>> ctx = ParamContext(0.5, 1.3)
    >>> ctx.qbracket(2)
    mpf('2.5')
    """

    def __init__(self, q, a, digits=DEFAULT_DIGITS):
        digits = int(digits)
        if digits < MIN_DIGITS:
            raise DomainError(f"digits must be at least {MIN_DIGITS}, got {digits}")
        mp = working_context(digits)
        qv = to_mpf(mp, q)
        if not 0 < qv < 1:
            raise DomainError(f"q must lie in (0, 1), got {q}")
        self.digits = digits
        self.mp = mp
        self.q = qv
        self.a = to_mpf(mp, a)
        self._inputs = (q, a)
        self.t = self.qdouble(self.a)

    def __repr__(self):
        return f"ParamContext(q={mpmath.nstr(self.q, 15)}, a={mpmath.nstr(self.a, 15)}, digits={self.digits})"

    def with_digits(self, digits):
        """Same parameters at another precision."""
        return ParamContext(self._inputs[0], self._inputs[1], digits)

    def tolerance(self, slack=5):
        """``10**-(digits - slack)``."""
        return self.mp.mpf(10) ** (-(self.digits - slack))

    @property
    def tol(self):
        return self.tolerance(5)

    def config(self):
        """Resolved parameters as decimal strings."""
        return {
            "q": mpmath.nstr(self.q, self.digits),
            "a": mpmath.nstr(self.a, self.digits),
            "t": mpmath.nstr(self.t, self.digits),
            "digits": self.digits,
        }

    def num(self, x):
        return to_number(self.mp, x)

    # -- q-numbers ----------------------------------------------------------

    def qpow(self, x):
        """``q**x`` for real ``x``."""
        return self.mp.power(self.q, to_mpf(self.mp, x))

    def qdouble(self, x):
        """``[[x]] = q**x - q**-x``."""
        x = to_mpf(self.mp, x)
        return self.mp.power(self.q, x) - self.mp.power(self.q, -x)

    def qbrace(self, x):
        """``{x} = q**x + q**-x``."""
        x = to_mpf(self.mp, x)
        return self.mp.power(self.q, x) + self.mp.power(self.q, -x)

    def qbracket(self, x):
        """``[x] = (q**x - q**-x) / (q - q**-1)``."""
        return self.qdouble(x) / self.qdouble(1)

    @functools.cached_property
    def brace1(self):
        """``{1} = q + 1/q``, the discrete-series value of ``lambda``."""
        return self.qbrace(1)

    @functools.cached_property
    def shift(self):
        """``[[a]]**2 / (q + 1/q)``."""
        return self.t ** 2 / self.brace1

    @functools.cached_property
    def jacobian(self):
        """``q + 1/q + [[a]]**2 / (q + 1/q)``."""
        return self.brace1 + self.shift

    # -- q-series -----------------------------------------------------------

    def qpochhammer(self, b, base, n):
        """``(b; base)_n`` for a non-negative integer ``n`` or ``n = inf``.

        The infinite product stops before the first factor that differs
        from 1 by less than ``10**-digits``.
        """
        mp = self.mp
        b = to_number(mp, b)
        base = to_number(mp, base)
        prod = mp.mpf(1)
        if _is_infinite(n):
            if abs(base) >= 1:
                raise DomainError("infinite q-Pochhammer needs |base| < 1")
            cutoff = mp.mpf(10) ** (-self.digits)
            f = b
            for _ in range(_POCHHAMMER_MAX_FACTORS):
                if abs(f) < cutoff:
                    return prod
                prod *= 1 - f
                f *= base
            raise NumericalFailure("infinite q-Pochhammer product did not settle")
        n = int(n)
        if n < 0:
            raise DomainError("q-Pochhammer length must be non-negative")
        f = b
        for _ in range(n):
            prod *= 1 - f
            f *= base
        return prod

    def terminating_index(self, u, base):
        """Return ``n`` if ``u == base**-n`` to tolerance, else ``None``."""
        mp = self.mp
        u = to_number(mp, u)
        base = to_number(mp, base)
        if u == 0 or abs(base) in (0, 1):
            return None
        n = int(mp.nint(-mp.log(abs(u)) / mp.log(abs(base))))
        if n < 0:
            return None
        if abs(u * base ** n - 1) <= self.tol:
            return n
        return None

    def qhyp(self, upper, lower, base, z, max_terms=1000):
        """Basic hypergeometric series ``_{s+1}phi_s(upper; lower; base, z)``.

        Summation stops exactly at index ``n`` when an upper parameter equals
        ``base**-n``; otherwise after ``max_terms`` terms or once a term drops
        below ``10**-digits`` relative to the partial sum.
        """
        mp = self.mp
        upper = [to_number(mp, u) for u in upper]
        lower = [to_number(mp, l) for l in lower]
        if len(upper) != len(lower) + 1:
            raise DomainError("need exactly one more upper than lower parameter")
        base = to_number(mp, base)
        z = to_number(mp, z)
        stops = [k for k in (self.terminating_index(u, base) for u in upper) if k is not None]
        last = min(stops) if stops else max_terms - 1
        cutoff = mp.mpf(10) ** (-self.digits)
        tol = self.tol

        total = mp.mpf(1)
        term = mp.mpf(1)
        power = mp.mpf(1)  # base**i
        for i in range(last):
            den = (1 - base * power)
            for l in lower:
                d = 1 - l * power
                if abs(d) <= tol:
                    raise DomainError(f"lower parameter {l} hits a pole at index {i}")
                den *= d
            num = z
            for u in upper:
                num *= 1 - u * power
            term = term * num / den
            total += term
            power *= base
            if not stops and abs(term) < cutoff * max(1, abs(total)):
                break
        return total


def _is_infinite(n):
    if n is None:
        return True
    try:
        return math.isinf(float(n))
    except (TypeError, ValueError):
        return False
