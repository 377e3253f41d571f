"""Acceptance criteria, one test per criterion.

A PASS/FAIL line per criterion is printed in the terminal summary.
"""
import random
import time

import mpmath
import pytest

import oracles
from qcocycle import askey_wilson as aw
from qcocycle import cocycle as co
from qcocycle import ladder as L
from qcocycle import uq_irreps as U
from qcocycle.scalars import ParamContext
from qcocycle.verify import random_word


def criterion(number):
    def mark(fn):
        fn.criterion = number
        return fn

    return mark


PAIRS = [(0.5, 1.3), (0.9, 0.7), (0.2, 0.45), (0.75, 2.2), (0.35, -0.8), (0.6, 3.05)]


@criterion(1)
def test_spectrum_matches_brackets():
    """Spectrum of sqrt(-1) B_t is {[a+2i]} for s <= 3 at six (q, a)"""
    start = time.perf_counter()
    for q, a in PAIRS:
        ctx = ParamContext(q, a, 50)
        tol = ctx.tolerance(8)
        for k in range(7):
            s = U.as_spin(f"{k}/2")
            got = U.ibt_spectrum(ctx, s)
            with mpmath.workdps(oracles.DPS):
                want = sorted(
                    oracles.bracket(oracles.mpf(q), oracles.mpf(a) + 2 * mpmath.mpf(float(s - j)))
                    for j in range(k + 1)
                )
            for x, y in zip(got, want):
                assert abs(x - y) / max(1, abs(y)) < tol, (q, a, s)
    assert time.perf_counter() - start < 10


@criterion(2)
def test_half_spin_pairing_matrices(ctx):
    """Spin-1/2 matrices of k, e, f equal the pairing matrices exactly"""
    rep = U.build_spin_rep(ctx, "1/2")
    mp = ctx.mp
    up, down = ctx.qpow(mpmath.mpf(1) / 2), ctx.qpow(-mpmath.mpf(1) / 2)
    assert rep.K == mp.matrix([[ctx.q, 0], [0, 1 / ctx.q]])
    assert rep.E == mp.matrix([[0, up], [0, 0]])
    assert rep.F == mp.matrix([[0, 0], [down, 0]])
    assert rep.K[1, 1] == ctx.qpow(-1)


@criterion(3)
def test_ladder_recursions_as_operators(ctx):
    """Composed ladder operators equal the two scalar recursion formulas"""
    tol = ctx.tolerance(8)
    a = ctx.a
    N = 8
    for lam in (ctx.num(1.0), ctx.num(0.3), None):
        for b in (None, a + ctx.num(0.37)):
            m = L.make_module(ctx, lam, b, N)
            Tp, Tm = L.generator_matrix(m, L.Plus), L.generator_matrix(m, L.Minus)
            down_up, up_down = Tm * Tp, Tp * Tm
            for n in range(-N, N):
                c = m.weight(n)
                want = (ctx.qbrace(c - a + 1) - m.lam) * (ctx.qbrace(c + a + 1) + m.lam)
                assert abs(down_up[n + N, n + N] - want) <= tol * max(1, abs(want))
            for n in range(-N + 1, N + 1):
                c = m.weight(n)
                want = (ctx.qbrace(c - a - 1) - m.lam) * (ctx.qbrace(c + a - 1) + m.lam)
                assert abs(up_down[n + N, n + N] - want) <= tol * max(1, abs(want))


@criterion(4)
def test_gram_closed_form_against_recursion(ctx):
    """Gram closed form equals the iterated recursion for |n| <= 10 at 10 random lambda; g_1 = 1"""
    rng = random.Random(4)
    tol = ctx.tolerance(8)
    for _ in range(10):
        lam = rng.uniform(0.01, 2.49)
        m = L.make_module(ctx, lam, None, 10)
        ref = oracles.gram_iterated(0.5, 1.3, lam, 10)
        for n in range(-10, 11):
            assert abs(L.gram_entry(m, n) / ref[n] - 1) < tol, (lam, n)
        assert L.gram_lambda(m).g[1] == 1


@criterion(5)
def test_kernel_coefficient_is_exact_zero(ctx):
    """At lambda = q + 1/q the T- coefficient out of e_(a+2) is exactly zero"""
    m = L.make_module(ctx, None, None, 4)
    assert m.discrete
    assert m.lower_coef[1] == 0
    assert m.brace_minus_lambda(1) == 0
    out = L.apply_generator(m, L.Minus, m.basis(1))
    assert all(x == 0 for x in out)


@criterion(6)
def test_discrete_series_limits(ctx):
    """Gram entries near q + 1/q converge to the discrete-series norms; D2- factor"""
    m = L.make_module(ctx, ctx.brace1 - mpmath.mpf("1e-20"), None, 8)
    for n in range(1, 9):
        assert abs(L.gram_entry(m, n) / L.discrete_norm_plus(ctx, n) - 1) < 1e-15
        assert abs(L.gram_entry(m, -n) / L.discrete_norm_minus(ctx, n) - 1) < 1e-15
    with mpmath.workdps(60):
        q, a = mpmath.mpf("0.5"), mpmath.mpf("1.3")
        b = lambda x: oracles.brace(q, x)  # noqa: E731
        factor = b(a + 2) * b(a - 1) / (b(a - 2) * b(a + 1))
    assert abs(L.discrete_norm_minus(ctx, 1) / factor - 1) < ctx.tolerance(8)
    assert abs(L.minus_limit_factor(ctx) / factor - 1) < ctx.tolerance(8)


@criterion(7)
def test_askey_wilson_engine(ctx):
    """deg P_n = n and P_n(1) = 1 for n <= 60; three-term recurrence residual for n <= 40"""
    fam = aw.family(ctx)
    for n in range(61):
        P = aw.substitute_P(ctx, n)
        assert P.degree == n
        assert abs(P(1) - 1) < ctx.tolerance(10)
    for n in range(41):
        assert fam.recurrence_residual(n) < ctx.tolerance(10), n
    for n in (1, 4, 9):
        x = mpmath.mpf("0.3")
        ref = oracles.aw_ptilde(0.5, 1.3, n, x)
        assert abs(fam.phi(n)(x) / ref - 1) < ctx.tolerance(10)


@criterion(8)
def test_counit_character(ctx):
    """Counit values from xi inner products and character consistency at four c"""
    a, tol = ctx.a, ctx.tolerance(8)
    assert abs(co.epsilon_generator(ctx, L.Plus, a)) < tol
    assert abs(co.epsilon_generator(ctx, L.Minus, a)) < tol
    for c in (a, a + 2, a - 2):
        assert abs(co.epsilon_generator(ctx, L.A, c) - ctx.brace1) < tol
    for c in (a - 2, a, a + 2, a + 4):
        lhs = co.epsilon_generator(ctx, L.Minus, c + 2) * co.epsilon_generator(ctx, L.Plus, c)
        e = co.epsilon_generator(ctx, L.A, c)
        rhs = (ctx.qbrace(c - a + 1) - e) * (ctx.qbrace(c + a + 1) + e)
        assert abs(lhs - rhs) < tol * max(1, abs(rhs))


@criterion(9)
def test_cocycle_identity_and_weight_support(ctx):
    """Cocycle identity on 50 random pairs and YD weight support on 50 random words"""
    cc = co.CocycleContext(ctx, 10)
    rng = random.Random(9)
    tol = ctx.tolerance(8)
    for _ in range(50):
        x, y = random_word(rng), random_word(rng)
        assert co.cocycle_defect(cc, x, y) < tol, (x, y)
    for _ in range(50):
        w = random_word(rng, 8)
        assert co.yd_weight_check(cc, w), w


@criterion(10)
def test_growth_cross_validation(ctx80):
    """Numeric limit matches closed growth for n <= 40 at eps = 1e-8; chain rule"""
    for n in range(1, 41):
        G = co.growth_closed(ctx80, n)
        gap = abs(co.growth_numeric(ctx80, n, 1e-8) - G) / G
        assert gap < 1e-4, n
        P, Q = aw.substitute_P(ctx80, n), aw.normalize_Q(ctx80, n)
        hp = ctx80.with_digits(Q.dps)
        lhs = P.derivative()(1)
        rhs = Q.derivative()(hp.brace1 / 2) * hp.jacobian / 2
        assert abs(lhs / rhs - 1) < ctx80.tolerance(10), n
    assert co.growth_numeric(ctx80, 0, 1e-8) == 0


@criterion(11)
def test_properness_scan():
    """Properness flags at (0.5, 1.3), nmax = 60, digits = 80, within 5 minutes"""
    start = time.perf_counter()
    report = co.properness_scan(ParamContext(0.5, 1.3, 80), 60)
    elapsed = time.perf_counter() - start
    G = [r.G_closed for r in report.rows]
    assert min(G[30:61]) > max(G[0:16])
    for n in (10, 20, 40):
        r = report.rows[n]
        assert r.dP1 > 1 / (1 - r.x_max)
    xs = [report.rows[n].x_max for n in (5, 10, 20, 40)]
    assert all(u < v for u, v in zip(xs, xs[1:]))
    assert report.proper
    assert elapsed < 300


@criterion(12)
def test_non_coboundary_witness(ctx):
    """Norms of C(T+^n) equal the discrete norms and exceed 1e3 for some n <= 30"""
    cc = co.CocycleContext(ctx, 31)
    big = False
    for n in range(1, 31):
        v = co.cocycle_eval(cc, L.LadderWord((L.Plus,) * n))
        norm = cc.norm2(v)
        assert abs(norm / L.discrete_norm_plus(ctx, n) - 1) < ctx.tolerance(8)
        big |= norm > 1000
    assert big


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-q"]))
