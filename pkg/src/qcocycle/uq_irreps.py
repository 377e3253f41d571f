"""Spin-s irreducible *-representations of U_q(su(2)) and the element B_t.

Matrices act on the weight basis ordered ``i = s, s-1, ..., -s`` so that the
spin-1/2 matrices coincide with the pairing matrices of ``U_{1/2}``:

* ``k xi_i = q^{2i} xi_i``
* ``e xi_i = q^{i+1} sqrt([s-i][s+i+1]) xi_{i+1}``
* ``f = e^dagger k^{-1}``, i.e. ``f xi_{i+1} = q^{-i-1} sqrt([s-i][s+i+1]) xi_i``

With these choices ``e* = f k`` and ``f* = k^{-1} e`` hold for the standard
inner product, and the commutator relation holds because
``[s-i+1][s+i] - [s-i][s+i+1] = [2i]``.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import mpmath

from .errors import DegeneracyError, DomainError, NumericalFailure


def as_spin(s):
    """Parse a non-negative half-integer (``1``, ``0.5``, ``"3/2"``...)."""
    if isinstance(s, float):
        s = Fraction(repr(s))
    s = Fraction(s)
    if s < 0 or (2 * s).denominator != 1:
        raise DomainError(f"spin must be a non-negative half-integer, got {s}")
    return s


@dataclass(frozen=True)
class SpinRep:
    s: Fraction
    weights: tuple
    K: object
    E: object
    F: object

    @property
    def dim(self):
        return len(self.weights)

    def index(self, i):
        """Row/column of the weight vector ``xi_i``."""
        return self.weights.index(Fraction(i))


@dataclass(frozen=True)
class BtMatrix:
    s: Fraction
    M: object
    iM: object


@dataclass(frozen=True)
class XiVectors:
    """The three spin-1 vectors attached to a real parameter ``c``.

    Coordinates are listed on the basis ``(xi_1, xi_0, xi_-1)``.
    """

    c: object
    xi: tuple
    xi_plus: tuple
    xi_minus: tuple


def build_spin_rep(ctx, s):
    s = as_spin(s)
    mp = ctx.mp
    dim = int(2 * s) + 1
    weights = tuple(s - k for k in range(dim))
    K = mp.zeros(dim)
    E = mp.zeros(dim)
    F = mp.zeros(dim)
    for r, i in enumerate(weights):
        K[r, r] = ctx.qpow(2 * i)
        if r == 0:
            continue
        # xi_i at column r is raised to xi_{i+1} at row r - 1
        root = mp.sqrt(ctx.qbracket(s - i) * ctx.qbracket(s + i + 1))
        E[r - 1, r] = ctx.qpow(i + 1) * root
        F[r, r - 1] = ctx.qpow(-(i + 1)) * root
    return SpinRep(s, weights, K, E, F)


def max_entry(X):
    return max((abs(X[r, c]) for r in range(X.rows) for c in range(X.cols)), default=0)


def inverse_diagonal(ctx, rep):
    """``k^{-1}`` built from exact negative powers of ``q``."""
    Kinv = ctx.mp.zeros(rep.dim)
    for r, i in enumerate(rep.weights):
        Kinv[r, r] = ctx.qpow(-2 * i)
    return Kinv


def relation_defects(ctx, rep):
    """Max-entry defects of the defining and *-relations of ``rep``."""
    mp = ctx.mp
    K, E, F = rep.K, rep.E, rep.F
    Kinv = inverse_diagonal(ctx, rep)
    q2 = ctx.q ** 2

    size = max_entry
    return {
        "kk^-1": size(K * Kinv - mp.eye(rep.dim)),
        "ke": size(K * E - q2 * E * K),
        "kf": size(K * F - F * K / q2),
        "[e,f]": size(E * F - F * E - (K - Kinv) / ctx.qdouble(1)),
        "e*=fk": size(E.transpose_conj() - F * K),
        "f*=k^-1e": size(F.transpose_conj() - Kinv * E),
    }


def build_bt(ctx, s, rep=None):
    """``B_t = -q^{1/2} k^{-1} e + q^{1/2} f - i (q - q^{-1})^{-1} t k^{-1}``."""
    rep = rep or build_spin_rep(ctx, s)
    mp = ctx.mp
    Kinv = inverse_diagonal(ctx, rep)
    rq = mp.sqrt(ctx.q)
    M = -rq * Kinv * rep.E + rq * rep.F - mp.j * (ctx.t / ctx.qdouble(1)) * Kinv
    return BtMatrix(rep.s, M, mp.j * M)


def _hermitian_part(ctx, bt):
    iM = bt.iM
    skew = max_entry(iM - iM.transpose_conj())
    scale = max(max_entry(iM), 1)
    if skew > ctx.tolerance(8) * scale:
        raise NumericalFailure(
            f"sqrt(-1) B_t is not self-adjoint in spin {bt.s} (skew part {mpmath.nstr(skew, 6)})"
        )
    return (iM + iM.transpose_conj()) / 2


def ibt_spectrum(ctx, s):
    """Ascending eigenvalues of ``pi_s(sqrt(-1) B_t)``."""
    bt = build_bt(ctx, s)
    H = _hermitian_part(ctx, bt)
    return sorted(ctx.mp.eigh(H, eigvals_only=True))


def expected_spectrum(ctx, s):
    s = as_spin(s)
    return sorted(ctx.qbracket(ctx.a + 2 * (s - k)) for k in range(int(2 * s) + 1))


def ibt_eigenbasis(ctx, s):
    """Orthonormal eigenvectors ``eta_[a+2i]`` in ascending eigenvalue order.

    Returns ``(eigenvalues, vectors)``.  Each vector's first nonzero
    coordinate is made positive real.
    """
    mp = ctx.mp
    bt = build_bt(ctx, s)
    H = _hermitian_part(ctx, bt)
    values, Q = mp.eigh(H)
    order = sorted(range(len(values)), key=lambda k: values[k])
    values = [values[k] for k in order]
    gap_floor = mp.mpf(10) ** (-ctx.digits / 2)
    for lo, hi in zip(values, values[1:]):
        if hi - lo < gap_floor:
            raise DegeneracyError(f"eigenvalues {lo} and {hi} collide; perturb a")
    nonzero = ctx.tolerance(10)
    vectors = []
    for k in order:
        v = [Q[r, k] for r in range(H.rows)]
        lead = next(x for x in v if abs(x) > nonzero)
        phase = abs(lead) / lead
        vectors.append([x * phase for x in v])
    return values, vectors


def xi_vectors(ctx, c):
    mp = ctx.mp
    c = ctx.num(c)
    dc = ctx.qdouble(c)
    root = mp.sqrt(ctx.brace1)
    half = mp.mpf(1) / 2
    xi = (mp.sqrt(ctx.q), -mp.j * dc / root, 1 / mp.sqrt(ctx.q))
    xi_plus = (-ctx.qpow(-c - half), mp.j * root, ctx.qpow(c + half))
    xi_minus = (ctx.qpow(c - half), mp.j * root, -ctx.qpow(-c + half))
    return XiVectors(c, xi, xi_plus, xi_minus)


def inner(u, v):
    """Inner product, conjugate-linear in the first slot."""
    return sum((x.conjugate() * y for x, y in zip(u, v)), 0)
