"""Monogenic polynomial bases and constructive decompositions.

Fueter-Delanghe polynomials (the Taylor basis), exact Cauchy-Kowalewska
extension off the x1 = 0 hyperplane, the Almansi split of harmonic
polynomials, the k-fold split of D^k-null polynomials, and the Fueter
construction turning plane holomorphic data into D^{n-1}-null functions.

Everything here is exact rational arithmetic; quadrature only enters in
`taylor_coefficients`, which recovers basis coefficients from boundary
data through the derivative kernels of G.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations_with_replacement

from .algebra import AlgebraContext, AlgebraError, Multivector, RATIONAL
from .symcalc import (
    CliffordPolynomial,
    RadialExpr,
    VECTOR,
    dirac_left,
    euler,
    laplacian,
    vector_power_polynomial,
)
from .kernels import cauchy_kernel


# -- multi-indices ------------------------------------------------------------------


def multi_indices(n: int, degree: int):
    """All tuples (j_2..j_n) of the given total degree, graded-lex ordered."""
    slots = n - 1
    if slots == 0:
        return [()] if degree == 0 else []
    out = []
    for combo in combinations_with_replacement(range(slots), degree):
        idx = [0] * slots
        for c in combo:
            idx[c] += 1
        out.append(tuple(idx))
    return sorted(out, reverse=True)


def multi_indices_up_to(n: int, max_degree: int):
    out = []
    for d in range(max_degree + 1):
        out.extend(multi_indices(n, d))
    return out


# -- Fueter polynomials ---------------------------------------------------------------


@lru_cache(maxsize=None)
def _fueter_symmetrized(n: int, idx: tuple) -> CliffordPolynomial:
    """Sum over all distinct words of the multiset of factors
    V_j = x_j + x_1 e_1 e_j (recursion on the last letter)."""
    ctx = AlgebraContext(n, RATIONAL)
    if all(e == 0 for e in idx):
        return CliffordPolynomial.constant(ctx.one())
    out = CliffordPolynomial.zero(ctx)
    x1 = CliffordPolynomial.variable(ctx, 1)
    for slot, e in enumerate(idx):
        if e == 0:
            continue
        j = slot + 2
        factor = CliffordPolynomial.variable(ctx, j) + x1 * ctx.blade(1, j)
        prev = tuple(v - 1 if i == slot else v for i, v in enumerate(idx))
        out = out + _fueter_symmetrized(n, prev) * factor
    return out


def fueter_polynomial(n: int, idx) -> CliffordPolynomial:
    """P_{j_2..j_n}: the degree-j left monogenic symmetrized product
    (1/j!) sum over distinct arrangements of (x_j + x_1 e_1 e_j) factors.

    Values lie in span{1, e_1 e_2, .., e_1 e_n}; D P = 0 exactly.
    """
    idx = tuple(int(v) for v in idx)
    if len(idx) != n - 1 or any(v < 0 for v in idx):
        raise AlgebraError(f"multi-index must have {n - 1} nonnegative entries")
    degree = sum(idx)
    return _fueter_symmetrized(n, idx) / math.factorial(degree)


# -- Taylor expansion ------------------------------------------------------------------


@lru_cache(maxsize=None)
def derivative_kernel(n: int, idx: tuple) -> RadialExpr:
    """d^j G / dx_2^{j_2} .. dx_n^{j_n} as an exact RadialExpr."""
    out = cauchy_kernel(n)
    for slot, e in enumerate(idx):
        for _ in range(e):
            out = out.diff(slot + 1)
    return out


@dataclass(frozen=True)
class TaylorExpansion:
    context: AlgebraContext
    center: tuple
    order: int
    coefficients: dict  # multi-index -> Multivector
    side: str = "left"

    def partial_sum(self, point) -> Multivector:
        ctx = self.context
        if isinstance(point, Multivector):
            point = point.vector_coords()
        shifted = [p - c for p, c in zip(point, self.center)]
        total = ctx.zero()
        for idx, coeff in self.coefficients.items():
            p = fueter_polynomial(ctx.n, idx)
            if ctx.scalar_field != RATIONAL:
                p = p.to_float()
            val = p.evaluate(shifted)
            if self.side == "left":
                total = total + val * coeff
            else:
                total = total + coeff * val.reversion()
        return total


def taylor_coefficients(f, center, radius, order, rule, side: str = "left") -> TaylorExpansion:
    """Coefficients of the monogenic Taylor series from boundary data.

    `f` is a callable point -> Multivector sampled on the sphere rule
    (which must live on the boundary sphere of B(center, radius)); the
    derivative kernels of G are exact, the surface integral is quadrature.
    With the reproducing convention G(y - x) the coefficient integral
    carries a leading minus sign.
    """
    import numpy as np

    from .quadrature import sphere_area

    center = tuple(float(c) for c in center)
    n = len(center)
    omega = sphere_area(n)
    sample = f(rule.points[0])
    ctx = sample.context
    coeffs = {}
    for idx in multi_indices_up_to(n, order):
        kern = derivative_kernel(n, idx)
        total = ctx.zero()
        for p, w, nv in zip(rule.points, rule.weights, rule.normals):
            kval = kern.evaluate([pi - ci for pi, ci in zip(p, center)])
            kval = kval.to_float() if kval.context.scalar_field == RATIONAL else kval
            nmv = ctx.vector(nv)
            if side == "left":
                total = total + kval * nmv * f(p) * w
            else:
                total = total + f(p) * nmv * kval * w
        coeffs[idx] = total * (-1.0 / omega)
    return TaylorExpansion(ctx, center, order, coeffs, side)


# -- Cauchy-Kowalewska extension --------------------------------------------------------


def ck_extension(fprime: CliffordPolynomial) -> CliffordPolynomial:
    """Unique monogenic polynomial extension of data on the hyperplane x1 = 0.

    Generated by exp(x1 e1 D') with D' = sum_{j>=2} e_j d_j; the sign of the
    generator is the one that makes D(result) = 0 an exact identity (the
    constant-term test D(x2 + c x1 e1 e2) = 0 forces it).  Terminates because
    the input is polynomial.
    """
    ctx = fprime.context
    if fprime.kind != VECTOR:
        raise AlgebraError("ck_extension expects vector-kind variables")
    if any(e[0] for e in fprime.terms):
        raise AlgebraError("input may not depend on x1")
    e1 = ctx.basis_vector(1)
    x1 = CliffordPolynomial.variable(ctx, 1)

    def dprime(g):
        out = CliffordPolynomial.zero(ctx)
        for j in range(2, ctx.n + 1):
            out = out + ctx.basis_vector(j) * g.diff(j - 1)
        return out

    total = fprime
    term = fprime
    k = 0
    x1pow = CliffordPolynomial.constant(ctx.one())
    while True:
        term = e1 * dprime(term)
        k += 1
        if term.is_zero():
            break
        x1pow = x1pow * x1
        total = total + x1pow * term / math.factorial(k)
    return total


def restrict_to_hyperplane(f: CliffordPolynomial) -> CliffordPolynomial:
    """Set x1 = 0."""
    return CliffordPolynomial(
        f.context,
        {e: c for e, c in f.terms.items() if e[0] == 0},
        f.kind,
    )


# -- multiplication by powers of x on monogenics ------------------------------------------


def dirac_x_power_coefficient(n: int, j: int, d: int) -> Fraction:
    """c with D(x^j f) = c x^{j-1} f for f monogenic homogeneous of degree d.

    Even j gives -j; odd j gives -(n + 2d + j - 1).  (The degree-1 case is
    the eigenrelation D x P_d = -(n + 2d) P_d.)
    """
    if j <= 0:
        raise AlgebraError("need j >= 1")
    if j % 2 == 0:
        return Fraction(-j)
    return Fraction(-(n + 2 * d + j - 1))


def x_power_monogenic(f: CliffordPolynomial, k: int) -> CliffordPolynomial:
    """x^{k-1} f for monogenic f; the result is D^k-null."""
    if not dirac_left(f).is_zero():
        raise AlgebraError("f must be monogenic")
    return vector_power_polynomial(f.context, k - 1) * f


# -- Almansi and k-fold splits --------------------------------------------------------------


def almansi_split(h: CliffordPolynomial):
    """Split a harmonic polynomial as h = x f1 + f2 with f1, f2 monogenic.

    f1 scales each homogeneous monogenic component of D h by -1/(n + 2l);
    exact, and D f1 = D f2 = 0 exactly.
    """
    ctx = h.context
    dh = dirac_left(h)
    if not dirac_left(dh).is_zero():
        raise AlgebraError("input is not harmonic")
    f1 = CliffordPolynomial.zero(ctx)
    for l, comp in dh.homogeneous_components().items():
        f1 = f1 + comp * Fraction(-1, ctx.n + 2 * l)
    xpoly = CliffordPolynomial.vector_variable(ctx)
    f2 = h - xpoly * f1
    return f1, f2


def kmonogenic_split(p: CliffordPolynomial, k: int):
    """Split D^k-null p as p = f_0 + x f_1 + ... + x^{k-1} f_{k-1}.

    Works per homogeneous component: peel one D, split recursively, then
    invert multiplication by x on homogeneous monogenic pieces through the
    exact coefficients of D(x^j f).  Reconstruction and the monogenicity of
    every part are exact.
    """
    if k < 1:
        raise AlgebraError("need k >= 1")
    ctx = p.context
    check = p
    for _ in range(k):
        check = dirac_left(check)
    if not check.is_zero():
        raise AlgebraError("input is not D^k-null")
    parts = [CliffordPolynomial.zero(ctx) for _ in range(k)]
    for q, comp in p.homogeneous_components().items():
        for j, f in enumerate(_kmono_split_homogeneous(comp, k, q)):
            parts[j] = parts[j] + f
    return parts


def _kmono_split_homogeneous(p: CliffordPolynomial, k: int, q: int):
    ctx = p.context
    if k == 1:
        return [p]
    dp = dirac_left(p)
    if dp.is_zero():
        return [p] + [CliffordPolynomial.zero(ctx)] * (k - 1)
    gs = _kmono_split_homogeneous(dp, k - 1, q - 1)
    fs = [CliffordPolynomial.zero(ctx)]
    xpoly = CliffordPolynomial.vector_variable(ctx)
    recon = CliffordPolynomial.zero(ctx)
    xj = CliffordPolynomial.constant(ctx.one())
    for j in range(1, k):
        g = gs[j - 1]  # homogeneous of degree q - j, multiplies x^{j-1}
        xj = xj * xpoly
        if g.is_zero():
            fs.append(CliffordPolynomial.zero(ctx))
            continue
        c = dirac_x_power_coefficient(ctx.n, j, q - j)
        fj = g / c
        fs.append(fj)
        recon = recon + xj * fj
    fs[0] = p - recon
    return fs


# -- harmonic lift (polynomial boundary data on the unit sphere) ------------------------------


def harmonic_lift(p: CliffordPolynomial) -> CliffordPolynomial:
    """The harmonic polynomial with the same restriction to the unit sphere.

    Classical dimension count: every polynomial equals a sum of r^{2j} times
    harmonics, and on the sphere the r^{2j} factors drop away.  Exact.
    """
    ctx = p.context
    r2 = CliffordPolynomial.radius_squared(ctx)
    out = CliffordPolynomial.zero(ctx)
    for m, comp in sorted(p.homogeneous_components().items(), reverse=True):
        work = comp
        while not work.is_zero():
            d = work.degree()
            if d <= 1:
                out = out + work
                break
            lap = laplacian(work)
            if lap.is_zero():
                out = out + work
                break
            g = _invert_laplacian_r2(lap, d - 2)
            h = work - r2 * g
            out = out + h
            work = g  # same restriction as r^2 g on the sphere
    return out


def _invert_laplacian_r2(q: CliffordPolynomial, d: int) -> CliffordPolynomial:
    """Solve Lap(r^2 g) = q for homogeneous q of degree d (g of degree d).

    Lap(r^2 g) = (2n + 4d) g + r^2 Lap g; the nilpotent tail unwinds into a
    finite alternating series.
    """
    ctx = q.context
    c = Fraction(1, 2 * ctx.n + 4 * d)
    r2 = CliffordPolynomial.radius_squared(ctx)
    g = CliffordPolynomial.zero(ctx)
    term = q * c
    while not term.is_zero():
        g = g + term
        term = -(r2 * laplacian(term)) * c
    return g


# -- Fueter construction ------------------------------------------------------------------


def fueter_power(n: int, k: int) -> CliffordPolynomial:
    """(e_1^{-1} x)^k: the image of z^k under the plane-to-vector embedding.

    e_1^{-1} x = x_1 + e_1^{-1} x' behaves like a complex variable because
    (e_1^{-1} x' / |x'|)^2 = -1; for even n these powers are D^{n-1}-null,
    which the tests pin symbolically.
    """
    ctx = AlgebraContext(n, RATIONAL)
    base = ctx.basis_vector(1).vector_inverse() * CliffordPolynomial.vector_variable(ctx)
    return base**k


class BivariatePolynomial:
    """Real polynomial in (s, t) with Fraction coefficients: {(i, j): c}."""

    def __init__(self, coeffs: dict):
        self.coeffs = {
            (int(i), int(j)): Fraction(c)
            for (i, j), c in coeffs.items()
            if Fraction(c) != 0
        }

    def diff_s(self):
        return BivariatePolynomial(
            {(i - 1, j): c * i for (i, j), c in self.coeffs.items() if i}
        )

    def diff_t(self):
        return BivariatePolynomial(
            {(i, j - 1): c * j for (i, j), c in self.coeffs.items() if j}
        )

    def __sub__(self, other):
        out = dict(self.coeffs)
        for k, c in other.coeffs.items():
            out[k] = out.get(k, Fraction(0)) - c
        return BivariatePolynomial(out)

    def is_zero(self):
        return not self.coeffs

    def parity_in_t(self):
        pars = {j % 2 for (_, j) in self.coeffs}
        if len(pars) > 1:
            return None
        return pars.pop() if pars else 0

    def evaluate(self, s: float, t: float) -> float:
        return float(sum(c * s**i * t**j for (i, j), c in self.coeffs.items()))


def holomorphic_pair_from_power(k: int):
    """(u, v) with u + iv = (s + it)^k."""
    u, v = {}, {}
    for j in range(k + 1):
        c = Fraction(math.comb(k, j))
        if j % 4 == 0:
            u[(k - j, j)] = c
        elif j % 4 == 1:
            v[(k - j, j)] = c
        elif j % 4 == 2:
            u[(k - j, j)] = -c
        else:
            v[(k - j, j)] = -c
    return BivariatePolynomial(u), BivariatePolynomial(v)


def fueter_map(n: int, u: BivariatePolynomial, v: BivariatePolynomial):
    """F(x) = u(x1, |x'|) + e_1^{-1} (x'/|x'|) v(x1, |x'|) for even n.

    Requires the Cauchy-Riemann system u_s = v_t, u_t = -v_s and the
    reflection symmetry (u even, v odd in t), both checked exactly.  With
    the symmetry F is itself a polynomial; the exact form is returned along
    with a pointwise evaluator.  F is D^{n-1}-null.
    """
    if n % 2:
        raise AlgebraError("the construction needs even n")
    if not (u.diff_s() - v.diff_t()).is_zero() or not (u.diff_t() - (BivariatePolynomial({}) - v.diff_s())).is_zero():
        raise AlgebraError("u + iv is not holomorphic (Cauchy-Riemann fails)")
    if u.parity_in_t() not in (0, None) or v.parity_in_t() not in (1, None):
        raise AlgebraError("need u even and v odd in the second variable")
    ctx = AlgebraContext(n, RATIONAL)
    rp2 = CliffordPolynomial.zero(ctx)
    for j in range(2, n + 1):
        rp2 = rp2 + CliffordPolynomial.variable(ctx, j) ** 2
    x1 = CliffordPolynomial.variable(ctx, 1)
    xprime = CliffordPolynomial.zero(ctx)
    for j in range(2, n + 1):
        xprime = xprime + CliffordPolynomial.variable(ctx, j) * ctx.basis_vector(j)
    poly = CliffordPolynomial.zero(ctx)
    for (i, j), c in u.coeffs.items():
        poly = poly + x1**i * rp2 ** (j // 2) * c
    e1inv = ctx.basis_vector(1).vector_inverse()
    for (i, j), c in v.coeffs.items():
        poly = poly + x1**i * rp2 ** ((j - 1) // 2) * (e1inv * xprime) * c

    def evaluator(point) -> Multivector:
        coords = [float(c) for c in point]
        t = math.sqrt(sum(c * c for c in coords[1:]))
        fctx = ctx.to_float()
        uval = u.evaluate(coords[0], t)
        out = fctx.scalar(uval)
        if t > 0:
            vval = v.evaluate(coords[0], t)
            unit = fctx.vector([0.0] + [c / t for c in coords[1:]])
            out = out + fctx.basis_vector(1).vector_inverse() * unit * vval
        return out

    return poly, evaluator
