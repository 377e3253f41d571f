"""Named invariant checks run by ``qcocycle verify``.

Every check takes a :class:`ParamContext` and a window radius and returns
``(ok, detail)``.  Tolerances scale with ``ctx.digits`` so the verdicts do not
depend on the precision chosen.
"""
from __future__ import annotations

import random
from dataclasses import dataclass

import mpmath

from . import askey_wilson, cocycle, ladder, uq_irreps
from .errors import NumericalFailure

CHECKS = {}


def check(name):
    def register(fn):
        CHECKS[name] = fn
        return fn

    return register


@dataclass(frozen=True)
class CheckResult:
    name: str
    ok: bool
    detail: str


def _show(x):
    return mpmath.nstr(x, 3)


def _verdict(err, tol):
    return err <= tol, f"max error {_show(err)} (tolerance {_show(tol)})"


@check("scalars.brace_factorization")
def _brace(ctx, N):
    xs = [ctx.num(x) for x in (-3, -1, 0.5, 1, 2.7)]
    err = max(abs(ctx.qbrace(x) - ctx.brace1 - ctx.qdouble((x + 1) / 2) * ctx.qdouble((x - 1) / 2)) for x in xs)
    return _verdict(err, ctx.tolerance(8) * ctx.qbrace(3))


@check("irreps.relations")
def _relations(ctx, N):
    err = max(
        max(uq_irreps.relation_defects(ctx, uq_irreps.build_spin_rep(ctx, s)).values())
        for s in ("1/2", 1, "3/2", 2)
    )
    return _verdict(err, ctx.tolerance(8) * ctx.qpow(-4))


@check("irreps.spectrum")
def _spectrum(ctx, N):
    err = ctx.mp.zero
    for k in range(7):
        s = uq_irreps.as_spin(f"{k}/2")
        got = uq_irreps.ibt_spectrum(ctx, s)
        want = uq_irreps.expected_spectrum(ctx, s)
        err = max([err] + [abs(x - y) / max(1, abs(y)) for x, y in zip(got, want)])
    return _verdict(err, ctx.tolerance(8))


@check("irreps.xi_eigenvector")
def _xi_eigen(ctx, N):
    mp = ctx.mp
    bt = uq_irreps.build_bt(ctx, 1)
    xi = uq_irreps.xi_vectors(ctx, ctx.a).xi
    v = mp.matrix([z.conjugate() for z in xi])
    err = uq_irreps.max_entry(bt.iM * v - ctx.qbracket(ctx.a) * v)
    return _verdict(err, ctx.tolerance(8) * ctx.jacobian)


@check("ladder.recursion")
def _ladder(ctx, N):
    m = ladder.make_module(ctx, ctx.brace1 / 3, None, N)
    a, lam = ctx.a, m.lam
    err = ctx.mp.zero
    for n in range(-N, N):
        c = m.weight(n)
        v = ladder.apply_word(m, ladder.LadderWord((ladder.Plus, ladder.Minus)), m.basis(n))
        want = (ctx.qbrace(c - a + 1) - lam) * (ctx.qbrace(c + a + 1) + lam)
        err = max(err, abs(v[n + N] - want) / max(1, abs(want)))
    return _verdict(err, ctx.tolerance(8))


@check("ladder.kernel_exact")
def _kernel(ctx, N):
    m = ladder.make_module(ctx, None, None, max(N, 1))
    ok = m.lower_coef[1] == 0 and m.raise_coef[-1] == 0
    return ok, f"T- on e_(a+2): {m.lower_coef[1]}, T+ on e_(a-2): {m.raise_coef[-1]}"


@check("gram.closed_vs_recursion")
def _gram(ctx, N):
    err = ctx.mp.zero
    for lam in (ctx.brace1 / 5, ctx.brace1 / 2, ctx.brace1 * 0.9, None):
        m = ladder.make_module(ctx, lam, None, N)
        rec = ladder.gram_recursion(m)
        for n in m.indices():
            if n:
                err = max(err, abs(rec[n] / ladder.gram_entry(m, n) - 1))
    return _verdict(err, ctx.tolerance(8))


@check("gram.sign_reading")
def _sign_reading(ctx, N):
    """The recursion singles out ``+lambda``; the other sign must disagree."""
    m = ladder.make_module(ctx, ctx.brace1 / 2, None, max(N, 3))
    rec = ladder.gram_recursion(m)
    gap = abs(ladder.gram_entry_printed_sign(m, 3) / rec[3] - 1)
    return gap > ctx.tolerance(8), f"relative gap of the other sign at n=3: {_show(gap)}"


@check("gram.adjoint")
def _adjoint(ctx, N):
    err = max(
        ladder.adjoint_defect(ladder.gram_lambda(ladder.make_module(ctx, lam, None, N)))
        for lam in (ctx.brace1 / 2, None)
    )
    return _verdict(err, ctx.tolerance(8))


@check("gram.discrete_limits")
def _limits(ctx, N):
    mp = ctx.mp
    offset = mp.mpf(10) ** (-(ctx.digits // 2))
    m = ladder.make_module(ctx, ctx.brace1 - offset, None, 4)
    err = max(
        abs(ladder.gram_entry(m, n) / ladder.discrete_norm_plus(ctx, n) - 1) for n in range(1, 5)
    )
    err = max(
        [err]
        + [abs(ladder.gram_entry(m, -n) / ladder.discrete_norm_minus(ctx, n) - 1) for n in range(1, 5)]
    )
    factor = abs(ladder.discrete_norm_minus(ctx, 1) / ladder.minus_limit_factor(ctx) - 1)
    return _verdict(max(err, factor), offset * 10 ** 4)


@check("aw.normalization")
def _aw_norm(ctx, N):
    err = ctx.mp.zero
    for n in range(0, 21):
        P = askey_wilson.substitute_P(ctx, n)
        if P.degree != n:
            return False, f"deg P_{n} = {P.degree}"
        err = max(err, abs(P(1) - 1))
    return _verdict(err, ctx.tolerance(10))


@check("aw.recurrence")
def _aw_rec(ctx, N):
    fam = askey_wilson.family(ctx)
    err = max(fam.recurrence_residual(n) for n in range(0, 21))
    return _verdict(err, ctx.tolerance(10))


@check("counit.values")
def _counit(ctx, N):
    a = ctx.a
    errs = [
        abs(cocycle.epsilon_generator(ctx, ladder.Plus, a)),
        abs(cocycle.epsilon_generator(ctx, ladder.Minus, a)),
    ]
    errs += [abs(cocycle.epsilon_generator(ctx, ladder.A, c) - ctx.brace1) for c in (a, a + 2, a - 2)]
    return _verdict(max(errs), ctx.tolerance(8) * ctx.brace1)


@check("counit.character")
def _character(ctx, N):
    a = ctx.a
    err = ctx.mp.zero
    for c in (a - 2, a, a + 2, a + 4):
        lhs = cocycle.epsilon_generator(ctx, ladder.Minus, c + 2) * cocycle.epsilon_generator(ctx, ladder.Plus, c)
        e = cocycle.epsilon_generator(ctx, ladder.A, c)
        rhs = (ctx.qbrace(c - a + 1) - e) * (ctx.qbrace(c + a + 1) + e)
        err = max(err, abs(lhs - rhs) / max(1, abs(rhs)))
    return _verdict(err, ctx.tolerance(8))


def random_word(rng, max_len=4):
    symbols = (ladder.Plus, ladder.Minus, ladder.A, ladder.Apoly((1, -2, 1)))
    return ladder.LadderWord(tuple(rng.choice(symbols) for _ in range(rng.randint(0, max_len))))


@check("cocycle.identity")
def _identity(ctx, N):
    cc = cocycle.CocycleContext(ctx, max(N, 9))
    rng = random.Random(20240601)
    err = ctx.mp.zero
    for _ in range(50):
        x, y = random_word(rng), random_word(rng)
        err = max(err, cocycle.cocycle_defect(cc, x, y))
    for part in ("plus", "minus"):
        for _ in range(20):
            x, y = random_word(rng), random_word(rng)
            err = max(err, cocycle.cocycle_defect(cc, x, y, part))
    return _verdict(err, ctx.tolerance(8))


@check("cocycle.yd_support")
def _yd(ctx, N):
    cc = cocycle.CocycleContext(ctx, max(N, 9))
    rng = random.Random(7)
    bad = [w for w in (random_word(rng, 8) for _ in range(50)) if not cocycle.yd_weight_check(cc, w)]
    return not bad, f"{len(bad)} of 50 words leave their weight space"


@check("growth.u_at_counit")
def _u(ctx, N):
    e = cocycle.epsilon_generator(ctx, ladder.A, ctx.a)
    return _verdict(abs(cocycle.u1_eigenvalue(ctx, e) - 1), ctx.tolerance(8))


@check("growth.chain_rule")
def _chain(ctx, N):
    err = max(
        abs(cocycle.growth_via_Q(ctx, n) / cocycle.growth_closed(ctx, n) - 1) for n in range(1, 21)
    )
    return _verdict(err, ctx.tolerance(10))


@check("growth.numeric_limit")
def _numeric(ctx, N):
    worst = ctx.mp.zero
    for n in (1, 3, 10, 20):
        G = cocycle.growth_closed(ctx, n)
        gap = abs(cocycle.growth_numeric(ctx, n, 1e-8) - G) / G
        envelope = 2 * cocycle.remainder_constant(ctx, n) * ctx.mp.mpf("1e-8") + ctx.tolerance(10)
        worst = max(worst, gap / envelope)
    return worst <= 1, f"largest gap relative to its envelope {_show(worst)}"


@check("growth.properness")
def _proper(ctx, N):
    report = cocycle.properness_scan(ctx, 20)
    return report.proper, ", ".join(f"{k}={v}" for k, v in report.flags.items())


def run_checks(ctx, window=8, names=None):
    """Run the registered checks (all of them when ``names`` is None)."""
    results = []
    for name in names or CHECKS:
        try:
            ok, detail = CHECKS[name](ctx, window)
        except (NumericalFailure, ZeroDivisionError) as exc:
            ok, detail = False, f"{type(exc).__name__}: {exc}"
        results.append(CheckResult(name, bool(ok), detail))
    return results
