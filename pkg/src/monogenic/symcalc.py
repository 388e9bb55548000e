"""Exact symbolic calculus over Cl_n.

Two expression types:

* CliffordPolynomial -- multivariate polynomial with Multivector
  coefficients.  Vector kind uses variables x1..xn, unital kind uses
  x0..x_{n-1} (the variable paired with the identity direction comes first).
* RadialExpr -- finite sum of terms P(x) * |x|^(-m) * log|x|^s with P a
  CliffordPolynomial, integer m (negative m means a positive power) and
  s in {0, 1}.  Closed under coordinate differentiation, so every kernel
  in the library lives here symbolically.

Operators: dirac_left/right (sum e_j d_j from either side), the unital
variant with an identity component, the Euler operator, and the angular
operator Lambda = sum_{i<k} e_i e_k (x_i d_k - x_k d_i).  The operator
identity x D f = (Lambda - E) f holds exactly and is pinned by tests.
"""

from __future__ import annotations

from fractions import Fraction

from .algebra import (
    AlgebraContext,
    AlgebraError,
    Multivector,
    RATIONAL,
    blade_name,
)

VECTOR = "vector"
UNITAL = "unital"


class CliffordPolynomial:
    """Sparse polynomial: exponent tuple (length n) -> Multivector coefficient.

    For the vector kind, slot j of the exponent tuple is the power of
    x_{j+1}.  For the unital kind slot 0 is the power of x_0 and slot j
    the power of x_j.
    """

    __slots__ = ("context", "kind", "terms")

    def __init__(self, context: AlgebraContext, terms: dict, kind: str = VECTOR):
        if kind not in (VECTOR, UNITAL):
            raise AlgebraError(f"unknown variable kind {kind!r}")
        clean = {}
        for exps, coeff in terms.items():
            exps = tuple(int(e) for e in exps)
            if len(exps) != context.n or any(e < 0 for e in exps):
                raise AlgebraError(f"bad exponent tuple {exps} for n={context.n}")
            if not isinstance(coeff, Multivector):
                coeff = context.scalar(coeff)
            if coeff.context != context:
                raise AlgebraError("coefficient context mismatch")
            if not coeff.is_zero():
                if exps in clean:
                    coeff = clean[exps] + coeff
                if coeff.is_zero():
                    del clean[exps]
                else:
                    clean[exps] = coeff
        object.__setattr__(self, "context", context)
        object.__setattr__(self, "kind", kind)
        object.__setattr__(self, "terms", clean)

    def __setattr__(self, *a):
        raise AttributeError("CliffordPolynomial is immutable")

    # -- constructors --------------------------------------------------------

    @classmethod
    def zero(cls, context, kind=VECTOR):
        return cls(context, {}, kind)

    @classmethod
    def constant(cls, coeff: Multivector, kind=VECTOR):
        return cls(coeff.context, {(0,) * coeff.context.n: coeff}, kind)

    @classmethod
    def variable(cls, context, j: int, kind=VECTOR):
        """The scalar monomial for one variable (x_j, or x_{j} in unital slots)."""
        lo = 0 if kind == UNITAL else 1
        hi = context.n - 1 if kind == UNITAL else context.n
        if not (lo <= j <= hi):
            raise AlgebraError(f"variable index {j} out of range {lo}..{hi}")
        slot = j if kind == UNITAL else j - 1
        exps = tuple(1 if i == slot else 0 for i in range(context.n))
        return cls(context, {exps: context.one()}, kind)

    @classmethod
    def vector_variable(cls, context):
        """The Cl_n-valued polynomial x = sum_j x_j e_j (vector kind)."""
        terms = {}
        for j in range(1, context.n + 1):
            exps = tuple(1 if i == j - 1 else 0 for i in range(context.n))
            terms[exps] = context.basis_vector(j)
        return cls(context, terms, VECTOR)

    @classmethod
    def radius_squared(cls, context):
        terms = {}
        for j in range(context.n):
            exps = tuple(2 if i == j else 0 for i in range(context.n))
            terms[exps] = context.one()
        return cls(context, terms, VECTOR)

    # -- ring operations -----------------------------------------------------

    def _check(self, other):
        if self.context != other.context or self.kind != other.kind:
            raise AlgebraError("polynomial context/kind mismatch")

    def __eq__(self, other):
        if not isinstance(other, CliffordPolynomial):
            return NotImplemented
        return (
            self.context == other.context
            and self.kind == other.kind
            and self.terms == other.terms
        )

    def __hash__(self):
        return hash(
            (self.context, self.kind, tuple(sorted(self.terms.items(), key=lambda kv: kv[0])))
        )

    def is_zero(self):
        return not self.terms

    def __add__(self, other):
        if isinstance(other, (int, Fraction, float, complex, Multivector)):
            other = CliffordPolynomial.constant(
                other if isinstance(other, Multivector) else self.context.scalar(other),
                self.kind,
            )
        if not isinstance(other, CliffordPolynomial):
            return NotImplemented
        self._check(other)
        out = dict(self.terms)
        for exps, c in other.terms.items():
            out[exps] = out.get(exps, self.context.zero()) + c
        return CliffordPolynomial(self.context, out, self.kind)

    __radd__ = __add__

    def __neg__(self):
        return CliffordPolynomial(
            self.context, {e: -c for e, c in self.terms.items()}, self.kind
        )

    def __sub__(self, other):
        if isinstance(other, (int, Fraction, float, complex, Multivector)):
            other = CliffordPolynomial.constant(
                other if isinstance(other, Multivector) else self.context.scalar(other),
                self.kind,
            )
        if not isinstance(other, CliffordPolynomial):
            return NotImplemented
        return self + (-other)

    def __mul__(self, other):
        """Product; Multivector coefficients multiply in left-to-right order."""
        if isinstance(other, (int, Fraction, float, complex)):
            s = self.context.coerce(other)
            return CliffordPolynomial(
                self.context, {e: c * s for e, c in self.terms.items()}, self.kind
            )
        if isinstance(other, Multivector):
            return CliffordPolynomial(
                self.context, {e: c * other for e, c in self.terms.items()}, self.kind
            )
        if not isinstance(other, CliffordPolynomial):
            return NotImplemented
        self._check(other)
        out = {}
        for ea, ca in self.terms.items():
            for eb, cb in other.terms.items():
                key = tuple(a + b for a, b in zip(ea, eb))
                prod = ca * cb
                if key in out:
                    prod = out[key] + prod
                out[key] = prod
        return CliffordPolynomial(self.context, out, self.kind)

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction, float, complex)):
            return self * other
        if isinstance(other, Multivector):
            return CliffordPolynomial(
                self.context, {e: other * c for e, c in self.terms.items()}, self.kind
            )
        return NotImplemented

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction, float)):
            if self.context.scalar_field == RATIONAL and isinstance(other, int):
                other = Fraction(other)
            return self * (1 / self.context.coerce(other))
        return NotImplemented

    def __pow__(self, k: int):
        out = CliffordPolynomial.constant(self.context.one(), self.kind)
        for _ in range(k):
            out = out * self
        return out

    # -- calculus -------------------------------------------------------------

    def diff(self, slot: int) -> "CliffordPolynomial":
        """Partial derivative with respect to exponent slot (0-based)."""
        out = {}
        for exps, c in self.terms.items():
            e = exps[slot]
            if e == 0:
                continue
            key = tuple(v - 1 if i == slot else v for i, v in enumerate(exps))
            term = c * e
            if key in out:
                term = out[key] + term
            out[key] = term
        return CliffordPolynomial(self.context, out, self.kind)

    def degree(self) -> int:
        if not self.terms:
            return 0
        return max(sum(e) for e in self.terms)

    def homogeneous_component(self, d: int) -> "CliffordPolynomial":
        return CliffordPolynomial(
            self.context,
            {e: c for e, c in self.terms.items() if sum(e) == d},
            self.kind,
        )

    def homogeneous_components(self) -> dict:
        out = {}
        for e, c in self.terms.items():
            out.setdefault(sum(e), {})[e] = c
        return {
            d: CliffordPolynomial(self.context, t, self.kind)
            for d, t in sorted(out.items())
        }

    def is_homogeneous(self) -> bool:
        degrees = {sum(e) for e in self.terms}
        return len(degrees) <= 1

    def evaluate(self, point) -> Multivector:
        """Evaluate at a point (sequence of scalars or grade-1 Multivector)."""
        if isinstance(point, Multivector):
            point = point.vector_coords()
        coords = [self.context.coerce(c) for c in point]
        if len(coords) != self.context.n:
            raise AlgebraError("point has wrong length")
        total = self.context.zero()
        for exps, c in self.terms.items():
            factor = self.context.coerce(1)
            for v, e in zip(coords, exps):
                for _ in range(e):
                    factor = factor * v
            total = total + c * factor
        return total

    def map_coefficients(self, fn) -> "CliffordPolynomial":
        return CliffordPolynomial(
            self.context, {e: fn(c) for e, c in self.terms.items()}, self.kind
        )

    def to_float(self) -> "CliffordPolynomial":
        ctx = self.context.to_float()
        return CliffordPolynomial(
            ctx, {e: c.to_float() for e, c in self.terms.items()}, self.kind
        )

    def __str__(self):
        if not self.terms:
            return "0"
        names = (
            [f"x{j}" for j in range(self.context.n)]
            if self.kind == UNITAL
            else [f"x{j}" for j in range(1, self.context.n + 1)]
        )
        parts = []
        for exps, c in sorted(self.terms.items(), key=lambda kv: (sum(kv[0]), kv[0])):
            mono = " ".join(
                f"{names[i]}^{e}" if e > 1 else names[i]
                for i, e in enumerate(exps)
                if e
            )
            cs = str(c)
            if len(c.coeffs) > 1:
                cs = f"({cs})"
            parts.append(f"{cs} {mono}".strip())
        return " + ".join(parts)

    def __repr__(self):
        return f"CliffordPolynomial({self!s})"


# -- polynomial division by r^2 ---------------------------------------------------


def divmod_r2(p: CliffordPolynomial):
    """Quotient and remainder of p by r^2 = x1^2 + ... + xn^2 (lex on x1)."""
    ctx = p.context
    r2 = CliffordPolynomial.radius_squared(ctx)
    quot = CliffordPolynomial.zero(ctx, p.kind)
    rem = p
    while True:
        pick = None
        for exps in rem.terms:
            if exps[0] >= 2:
                pick = exps
                break
        if pick is None:
            return quot, rem
        c = rem.terms[pick]
        shifted = tuple(e - 2 if i == 0 else e for i, e in enumerate(pick))
        t = CliffordPolynomial(ctx, {shifted: c}, p.kind)
        quot = quot + t
        rem = rem - t * r2


def reduce_mod_sphere(p: CliffordPolynomial) -> CliffordPolynomial:
    """Normal form of p modulo (r^2 - 1): substitute r^2 -> 1 repeatedly."""
    out = p
    while True:
        q, r = divmod_r2(out)
        if q.is_zero():
            return r
        out = q + r


# -- differential operators ---------------------------------------------------------


def _require_vector(f):
    if f.kind != VECTOR:
        raise AlgebraError("operator requires vector-kind variables")


def dirac_left(f):
    """Sum_j e_j d/dx_j applied from the left (RadialExpr also accepted)."""
    if isinstance(f, RadialExpr):
        return f.dirac_left()
    _require_vector(f)
    ctx = f.context
    out = CliffordPolynomial.zero(ctx, VECTOR)
    for j in range(1, ctx.n + 1):
        out = out + ctx.basis_vector(j) * f.diff(j - 1)
    return out


def dirac_right(f):
    if isinstance(f, RadialExpr):
        return f.dirac_right()
    _require_vector(f)
    ctx = f.context
    out = CliffordPolynomial.zero(ctx, VECTOR)
    for j in range(1, ctx.n + 1):
        out = out + f.diff(j - 1) * ctx.basis_vector(j)
    return out


def dirac_unital(f: CliffordPolynomial) -> CliffordPolynomial:
    """d/dx0 + sum_{j=1}^{n-1} e_j d/dx_j on unital-kind polynomials."""
    if f.kind != UNITAL:
        raise AlgebraError("dirac_unital requires unital-kind variables")
    ctx = f.context
    out = f.diff(0)
    for j in range(1, ctx.n):
        out = out + ctx.basis_vector(j) * f.diff(j)
    return out


def dirac_unital_conj(f: CliffordPolynomial) -> CliffordPolynomial:
    if f.kind != UNITAL:
        raise AlgebraError("dirac_unital_conj requires unital-kind variables")
    ctx = f.context
    out = f.diff(0)
    for j in range(1, ctx.n):
        out = out - ctx.basis_vector(j) * f.diff(j)
    return out


def euler(f: CliffordPolynomial) -> CliffordPolynomial:
    """Radial operator sum_j x_j d_j; multiplies degree-k terms by k."""
    _require_vector(f)
    out = {}
    for exps, c in f.terms.items():
        k = sum(exps)
        if k:
            out[exps] = c * k
    return CliffordPolynomial(f.context, out, VECTOR)


def angular(f: CliffordPolynomial) -> CliffordPolynomial:
    """Lambda = sum_{i<k} e_i e_k (x_i d_k - x_k d_i), exact."""
    _require_vector(f)
    ctx = f.context
    out = CliffordPolynomial.zero(ctx, VECTOR)
    for i in range(1, ctx.n + 1):
        xi = CliffordPolynomial.variable(ctx, i)
        for k in range(i + 1, ctx.n + 1):
            xk = CliffordPolynomial.variable(ctx, k)
            eik = ctx.blade(i, k)
            out = out + eik * (xi * f.diff(k - 1) - xk * f.diff(i - 1))
    return out


def laplacian(f: CliffordPolynomial) -> CliffordPolynomial:
    out = CliffordPolynomial.zero(f.context, f.kind)
    for j in range(f.context.n):
        out = out + f.diff(j).diff(j)
    return out


# -- radial expressions ----------------------------------------------------------


class RadialExpr:
    """Finite sum of P(x) |x|^(-m) log|x|^s terms, canonicalized.

    Canonical form: terms keyed by (m, s) with each polynomial not divisible
    by r^2 (divisible parts are absorbed into the power).  Negative m encodes
    positive powers of |x|; only even powers of |x| can live inside P, so the
    representation is unique and zero-testing is exact.
    """

    __slots__ = ("context", "terms")

    def __init__(self, context: AlgebraContext, terms):
        merged = {}
        work = list(terms.items()) if isinstance(terms, dict) else list(terms)
        while work:
            key, p = work.pop()
            m, s = int(key[0]), int(key[1])
            if s not in (0, 1):
                raise AlgebraError("log exponent must be 0 or 1")
            if p.kind != VECTOR or p.context != context:
                raise AlgebraError("radial terms need vector polynomials in context")
            if p.is_zero():
                continue
            while True:
                q, r = divmod_r2(p)
                if not r.is_zero() or q.is_zero():
                    break
                p, m = q, m - 2
            prev = merged.pop((m, s), None)
            combined = p if prev is None else prev + p
            if combined.is_zero():
                continue
            if prev is None:
                merged[(m, s)] = combined
            else:
                # the merge may have produced fresh r^2 divisibility
                work.append(((m, s), combined))
        object.__setattr__(self, "context", context)
        object.__setattr__(self, "terms", merged)

    def __setattr__(self, *a):
        raise AttributeError("RadialExpr is immutable")

    @classmethod
    def from_polynomial(cls, p: CliffordPolynomial):
        return cls(p.context, {(0, 0): p})

    def is_zero(self):
        return not self.terms

    def __eq__(self, other):
        if not isinstance(other, RadialExpr):
            return NotImplemented
        return self.context == other.context and self.terms == other.terms

    def __add__(self, other):
        if isinstance(other, RadialExpr):
            if other.context != self.context:
                raise AlgebraError("context mismatch")
            return RadialExpr(
                self.context, list(self.terms.items()) + list(other.terms.items())
            )
        return NotImplemented

    def __neg__(self):
        return RadialExpr(self.context, {k: -p for k, p in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        """Scalar or polynomial multiple (polynomial multiplies from the right)."""
        if isinstance(other, (int, Fraction, float, Multivector)):
            return RadialExpr(
                self.context, {k: p * other for k, p in self.terms.items()}
            )
        if isinstance(other, CliffordPolynomial):
            return RadialExpr(
                self.context, {k: p * other for k, p in self.terms.items()}
            )
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction, float)):
            return self * other
        if isinstance(other, Multivector):
            return RadialExpr(
                self.context, {k: other * p for k, p in self.terms.items()}
            )
        return NotImplemented

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction, float)):
            if self.context.scalar_field == RATIONAL and isinstance(other, int):
                other = Fraction(other)
            return self * (1 / self.context.coerce(other))
        return NotImplemented

    def diff(self, slot: int) -> "RadialExpr":
        """d/dx_{slot+1}, using d_j |x|^(-m) = -m x_j |x|^(-m-2) and
        d_j log|x| = x_j |x|^(-2)."""
        ctx = self.context
        xj = CliffordPolynomial.variable(ctx, slot + 1)
        parts = []
        for (m, s), p in self.terms.items():
            parts.append(((m, s), p.diff(slot)))
            if m != 0:
                parts.append(((m + 2, s), xj * p * (-m)))
            if s == 1:
                parts.append(((m + 2, 0), xj * p))
        return RadialExpr(ctx, parts)

    def dirac_left(self) -> "RadialExpr":
        ctx = self.context
        out = RadialExpr(ctx, {})
        for j in range(1, ctx.n + 1):
            ej = ctx.basis_vector(j)
            out = out + RadialExpr(
                ctx, {k: ej * p for k, p in self.diff(j - 1).terms.items()}
            )
        return out

    def dirac_right(self) -> "RadialExpr":
        ctx = self.context
        out = RadialExpr(ctx, {})
        for j in range(1, ctx.n + 1):
            ej = ctx.basis_vector(j)
            out = out + RadialExpr(
                ctx, {k: p * ej for k, p in self.diff(j - 1).terms.items()}
            )
        return out

    def dirac_power(self, k: int) -> "RadialExpr":
        out = self
        for _ in range(k):
            out = out.dirac_left()
        return out

    def evaluate(self, point) -> Multivector:
        """Exact when the context is rational, |point| is rational and any log
        factor vanishes; falls back to floats otherwise."""
        import math

        ctx = self.context
        if isinstance(point, Multivector):
            point = point.vector_coords()
        coords = [ctx.coerce(c) for c in point]
        nsq = sum(c * c for c in coords)
        if nsq == 0 and any(m > 0 or s for (m, s) in self.terms):
            raise AlgebraError("radial expression is singular at the origin")
        if ctx.scalar_field == RATIONAL:
            norm = _rational_sqrt(nsq)
            needs_norm = any(m % 2 for (m, s) in self.terms)
            log_ok = all(s == 0 for (m, s) in self.terms) or nsq == 1
            if log_ok and (norm is not None or not needs_norm):
                total = ctx.zero()
                for (m, s), p in self.terms.items():
                    if s and nsq == 1:
                        continue  # log 1 = 0
                    val = p.evaluate(coords)
                    if m % 2 == 0:
                        factor = Fraction(1) / nsq ** (m // 2) if m >= 0 else nsq ** ((-m) // 2)
                    elif m > 0:
                        factor = Fraction(1) / (nsq ** ((m - 1) // 2) * norm)
                    else:
                        factor = nsq ** ((-m - 1) // 2) * norm
                    total = total + val * factor
                return total
        fctx = ctx.to_float() if ctx.scalar_field == RATIONAL else ctx
        fcoords = [float(c) if not isinstance(c, complex) else c for c in coords]
        r = math.sqrt(sum(abs(c) ** 2 for c in fcoords))
        total = fctx.zero()
        for (m, s), p in self.terms.items():
            pf = p if ctx.scalar_field != RATIONAL else p.to_float()
            val = pf.evaluate(fcoords)
            factor = r ** (-m)
            if s:
                factor *= math.log(r)
            total = total + val * factor
        return total

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for (m, s), p in sorted(self.terms.items()):
            piece = f"({p})"
            if m:
                piece += f" |x|^{-m}"
            if s:
                piece += " log|x|"
            parts.append(piece)
        return " + ".join(parts)

    def __repr__(self):
        return f"RadialExpr({self!s})"


def _rational_sqrt(q: Fraction):
    """Exact square root of a nonnegative rational, or None."""
    if q < 0:
        return None
    if q == 0:
        return Fraction(0)
    num, den = q.numerator, q.denominator
    rn = _isqrt_exact(num)
    rd = _isqrt_exact(den)
    if rn is None or rd is None:
        return None
    return Fraction(rn, rd)


def _isqrt_exact(k: int):
    import math

    r = math.isqrt(k)
    return r if r * r == k else None


# -- vector power helper ---------------------------------------------------------


def vector_power_polynomial(context: AlgebraContext, k: int) -> CliffordPolynomial:
    """x^k as an exact polynomial: x^2 = -r^2 collapses even powers."""
    if k < 0:
        raise AlgebraError("vector_power_polynomial needs k >= 0")
    r2 = CliffordPolynomial.radius_squared(context)
    half, odd = divmod(k, 2)
    out = (-r2) ** half if half else CliffordPolynomial.constant(context.one())
    if odd:
        out = out * CliffordPolynomial.vector_variable(context)
    return out
