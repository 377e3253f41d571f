"""Reference computations written directly against mpmath.

Nothing here imports the package, so agreement with it is a real check.
"""
import mpmath

DPS = 120


def mpf(x):
    return mpmath.mpf(repr(x)) if isinstance(x, float) else mpmath.mpf(x)


def brace(q, x):
    return mpmath.power(q, x) + mpmath.power(q, -x)


def double(q, x):
    return mpmath.power(q, x) - mpmath.power(q, -x)


def bracket(q, x):
    return double(q, x) / double(q, 1)


def gram_iterated(q, a, lam, n_max):
    """Gram entries from ``g_0 = z`` by the adjoint recursion, both directions.

    ``<T+ e_c, e_{c+2}> = ({c}/{c+2}) <e_c, T- e_{c+2}>`` with the ladder
    conventions: above ``e_a`` the lowering leg carries the scalar
    ``({c-a+1} - lam)({c+a+1} + lam)``, below it the raising leg carries
    ``({c-a-1} - lam)({c+a-1} + lam)`` (``c`` the upper weight).
    """
    with mpmath.workdps(DPS):
        q, a, lam = mpf(q), mpf(a), mpf(lam)
        b1 = brace(q, 1)
        g = {0: brace(q, a + 2) / (brace(q, a) * (b1 - lam) * (brace(q, 2 * a + 1) + lam))}
        for k in range(n_max):
            c = a + 2 * k
            lower = (brace(q, c - a + 1) - lam) * (brace(q, c + a + 1) + lam)
            g[k + 1] = brace(q, c) / brace(q, c + 2) * lower * g[k]
        for k in range(0, -n_max, -1):
            c = a + 2 * k
            upper = (brace(q, c - a - 1) - lam) * (brace(q, c + a - 1) + lam)
            g[k - 1] = upper * g[k] * brace(q, c) / brace(q, c - 2)
        return g


def aw_ptilde(q, a, n, x):
    """Bare Askey-Wilson 4phi3 at ``x`` by direct summation of ``n + 1`` terms."""
    with mpmath.workdps(DPS + 10 * n):
        q, a, x = mpf(q), mpf(a), mpf(x)
        Q = q * q
        A, B, C, D = -q ** (1 - 2 * a), -q ** (2 * a + 1), q, q
        e = mpmath.exp(1j * mpmath.acos(x))
        ups = [Q**-n, A * B * C * D * Q ** (n - 1), A * e, A / e]
        lows = [A * B, A * C, A * D, Q]
        total = 0
        for k in range(n + 1):
            term = Q**k
            for u in ups:
                term *= mpmath.qp(u, Q, k)
            for l in lows:
                term /= mpmath.qp(l, Q, k)
            total += term
        return +mpmath.re(total)


def bisect_zeros(f, lo, hi, samples=4000, steps=200):
    """Zeros of ``f`` on ``[lo, hi]`` from sign changes on a grid, then bisection."""
    xs = [lo + (hi - lo) * mpmath.mpf(k) / samples for k in range(samples + 1)]
    vals = [f(x) for x in xs]
    roots = []
    for x0, x1, f0, f1 in zip(xs, xs[1:], vals, vals[1:]):
        if f0 == 0:
            roots.append(x0)
            continue
        if f0 * f1 < 0:
            for _ in range(steps):
                mid = (x0 + x1) / 2
                fm = f(mid)
                if f0 * fm <= 0:
                    x1 = mid
                else:
                    x0, f0 = mid, fm
            roots.append((x0 + x1) / 2)
    return roots
