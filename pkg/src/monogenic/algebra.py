"""Universal Clifford algebra Cl_n with signature e_j^2 = -1.

Blades are indexed by bitmasks over {1..n} (bit j-1 set means e_j is a
factor), so the product of basis blades is a XOR plus a sign computed from
transposition parity and the signature.  Multivectors are sparse tables
from blade bitmask to scalar.  Three scalar fields are supported: exact
rationals (fractions.Fraction), floats, and complex floats.  Conversion
between fields is explicit, never implicit.

Values are immutable after construction and all operations are pure.
"""

from __future__ import annotations

import re
from fractions import Fraction
from functools import lru_cache

import numpy as np

MAX_DIMENSION = 16

RATIONAL = "rational"
FLOAT = "float"
COMPLEX = "complex"

_FIELDS = (RATIONAL, FLOAT, COMPLEX)


class AlgebraError(ValueError):
    pass


def _popcount(x: int) -> int:
    return bin(x).count("1")


def blade_sign(a: int, b: int) -> int:
    """Sign of the product of basis blades a and b (bitmasks).

    Counts the transpositions needed to interleave the two sorted factor
    words, then one factor -1 per contracted pair (e_j^2 = -1).
    """
    count = 0
    s = a >> 1
    while s:
        count += _popcount(s & b)
        s >>= 1
    count += _popcount(a & b)  # signature contractions
    return -1 if count & 1 else 1


def blade_grade(mask: int) -> int:
    return _popcount(mask)


@lru_cache(maxsize=None)
def _reversion_signs(n: int) -> tuple:
    out = []
    for mask in range(1 << n):
        k = _popcount(mask)
        out.append(-1 if (k * (k - 1) // 2) % 2 else 1)
    return tuple(out)


@lru_cache(maxsize=None)
def _conjugation_signs(n: int) -> tuple:
    out = []
    for mask in range(1 << n):
        k = _popcount(mask)
        out.append(-1 if (k * (k + 1) // 2) % 2 else 1)
    return tuple(out)


@lru_cache(maxsize=None)
def cayley_tables(n: int):
    """(indices, signs) arrays with indices[i,j] = i^j, signs[i,j] = blade_sign."""
    dim = 1 << n
    idx = np.zeros((dim, dim), dtype=np.int64)
    sgn = np.zeros((dim, dim), dtype=np.float64)
    for i in range(dim):
        for j in range(dim):
            idx[i, j] = i ^ j
            sgn[i, j] = blade_sign(i, j)
    return idx, sgn


@lru_cache(maxsize=None)
def cayley_cube(n: int) -> np.ndarray:
    """Dense (dim, dim, dim) tensor C with (a*b)[k] = sum_ij a[i] b[j] C[i,j,k].

    Only built for n <= 8; the batched numeric layer does not need more.
    """
    if n > 8:
        raise AlgebraError("dense product tensor limited to n <= 8")
    dim = 1 << n
    idx, sgn = cayley_tables(n)
    cube = np.zeros((dim, dim, dim))
    for i in range(dim):
        for j in range(dim):
            cube[i, j, idx[i, j]] = sgn[i, j]
    return cube


class AlgebraContext:
    """Dimension plus scalar field; fixed for the lifetime of its values."""

    __slots__ = ("n", "scalar_field")

    def __init__(self, n: int, scalar_field: str = RATIONAL):
        if not (1 <= n <= MAX_DIMENSION):
            raise AlgebraError(f"dimension must be in 1..{MAX_DIMENSION}, got {n}")
        if scalar_field not in _FIELDS:
            raise AlgebraError(f"unknown scalar field {scalar_field!r}")
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "scalar_field", scalar_field)

    def __setattr__(self, *a):
        raise AttributeError("AlgebraContext is immutable")

    def __eq__(self, other):
        return (
            isinstance(other, AlgebraContext)
            and self.n == other.n
            and self.scalar_field == other.scalar_field
        )

    def __hash__(self):
        return hash((self.n, self.scalar_field))

    def __repr__(self):
        return f"AlgebraContext(n={self.n}, scalar_field={self.scalar_field!r})"

    @property
    def dim(self) -> int:
        return 1 << self.n

    def coerce(self, value):
        if self.scalar_field == RATIONAL:
            if isinstance(value, Fraction):
                return value
            if isinstance(value, int):
                return Fraction(value)
            if isinstance(value, str):
                return Fraction(value)
            raise AlgebraError(
                f"cannot use {type(value).__name__} scalar in a rational context"
            )
        if self.scalar_field == FLOAT:
            if isinstance(value, complex):
                raise AlgebraError("cannot use complex scalar in a float context")
            return float(value)
        return complex(value)

    def zero_scalar(self):
        return self.coerce(0)

    # -- constructors ------------------------------------------------------

    def multivector(self, coeffs: dict) -> "Multivector":
        return Multivector(self, coeffs)

    def scalar(self, value) -> "Multivector":
        return Multivector(self, {0: value})

    def zero(self) -> "Multivector":
        return Multivector(self, {})

    def one(self) -> "Multivector":
        return Multivector(self, {0: 1})

    def basis_vector(self, j: int) -> "Multivector":
        if not (1 <= j <= self.n):
            raise AlgebraError(f"basis index {j} out of range 1..{self.n}")
        return Multivector(self, {1 << (j - 1): 1})

    def blade(self, *indices) -> "Multivector":
        mask = 0
        for j in indices:
            if not (1 <= j <= self.n):
                raise AlgebraError(f"basis index {j} out of range 1..{self.n}")
            if mask & (1 << (j - 1)):
                raise AlgebraError("repeated index in blade()")
            mask |= 1 << (j - 1)
        return Multivector(self, {mask: 1})

    def vector(self, coords) -> "Multivector":
        coords = list(coords)
        if len(coords) != self.n:
            raise AlgebraError(f"expected {self.n} coordinates, got {len(coords)}")
        return Multivector(
            self, {1 << j: c for j, c in enumerate(coords) if c != 0}
        )

    def to_float(self) -> "AlgebraContext":
        return AlgebraContext(self.n, FLOAT)

    def to_complex(self) -> "AlgebraContext":
        return AlgebraContext(self.n, COMPLEX)


class Multivector:
    """Sparse element of Cl_n: blade bitmask -> scalar coefficient."""

    __slots__ = ("context", "coeffs")

    def __init__(self, context: AlgebraContext, coeffs: dict):
        clean = {}
        for mask, value in coeffs.items():
            if not (0 <= mask < context.dim):
                raise AlgebraError(f"blade bitmask {mask} out of range for n={context.n}")
            v = context.coerce(value)
            if v != 0:
                clean[mask] = v
        object.__setattr__(self, "context", context)
        object.__setattr__(self, "coeffs", clean)

    def __setattr__(self, *a):
        raise AttributeError("Multivector is immutable")

    # -- bookkeeping -------------------------------------------------------

    def _check(self, other: "Multivector"):
        if self.context != other.context:
            raise AlgebraError("context mismatch")

    def __eq__(self, other):
        if isinstance(other, Multivector):
            return self.context == other.context and self.coeffs == other.coeffs
        if isinstance(other, (int, float, complex, Fraction)):
            return self == Multivector(self.context, {0: other})
        return NotImplemented

    def __hash__(self):
        return hash((self.context, tuple(sorted(self.coeffs.items()))))

    def is_zero(self) -> bool:
        return not self.coeffs

    def grades(self):
        return sorted({blade_grade(m) for m in self.coeffs})

    def grade(self, k: int) -> "Multivector":
        return Multivector(
            self.context,
            {m: c for m, c in self.coeffs.items() if blade_grade(m) == k},
        )

    def scalar_part(self):
        return self.coeffs.get(0, self.context.zero_scalar())

    def is_vector(self) -> bool:
        return all(blade_grade(m) == 1 for m in self.coeffs)

    def vector_coords(self):
        if not self.is_vector():
            raise AlgebraError("not a grade-1 element")
        return [
            self.coeffs.get(1 << j, self.context.zero_scalar())
            for j in range(self.context.n)
        ]

    # -- linear structure ----------------------------------------------------

    def __add__(self, other):
        if isinstance(other, (int, float, complex, Fraction)):
            other = Multivector(self.context, {0: other})
        if not isinstance(other, Multivector):
            return NotImplemented
        self._check(other)
        out = dict(self.coeffs)
        for m, c in other.coeffs.items():
            out[m] = out.get(m, 0) + c
        return Multivector(self.context, out)

    __radd__ = __add__

    def __neg__(self):
        return Multivector(self.context, {m: -c for m, c in self.coeffs.items()})

    def __sub__(self, other):
        if isinstance(other, (int, float, complex, Fraction)):
            other = Multivector(self.context, {0: other})
        if not isinstance(other, Multivector):
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, float, complex, Fraction)):
            s = self.context.coerce(other)
            return Multivector(self.context, {m: c * s for m, c in self.coeffs.items()})
        if not isinstance(other, Multivector):
            return NotImplemented
        self._check(other)
        out = {}
        for ma, ca in self.coeffs.items():
            for mb, cb in other.coeffs.items():
                mask = ma ^ mb
                term = ca * cb * blade_sign(ma, mb)
                out[mask] = out.get(mask, 0) + term
        return Multivector(self.context, out)

    def __rmul__(self, other):
        if isinstance(other, (int, float, complex, Fraction)):
            return self * other
        return NotImplemented

    def __truediv__(self, other):
        if isinstance(other, (int, float, complex, Fraction)):
            if self.context.scalar_field == RATIONAL and isinstance(other, int):
                other = Fraction(other)
            return self * (1 / self.context.coerce(other))
        return NotImplemented

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            raise AlgebraError("only nonnegative integer powers")
        out = self.context.one()
        for _ in range(k):
            out = out * self
        return out

    # -- involutions ---------------------------------------------------------

    def reversion(self) -> "Multivector":
        signs = _reversion_signs(self.context.n)
        return Multivector(
            self.context, {m: c * signs[m] for m, c in self.coeffs.items()}
        )

    def conjugation(self) -> "Multivector":
        signs = _conjugation_signs(self.context.n)
        return Multivector(
            self.context, {m: c * signs[m] for m, c in self.coeffs.items()}
        )

    def grade_involution(self) -> "Multivector":
        return Multivector(
            self.context,
            {m: (-c if blade_grade(m) % 2 else c) for m, c in self.coeffs.items()},
        )

    # -- norms and inverses ----------------------------------------------------

    def norm_sq(self):
        """Coefficient-wise squared norm sum |c|^2 (Euclidean on coefficients)."""
        total = 0
        for c in self.coeffs.values():
            total += abs(c) ** 2 if isinstance(c, complex) else c * c
        return total

    def abs(self) -> float:
        return float(self.norm_sq()) ** 0.5

    def vector_inverse(self) -> "Multivector":
        """Kelvin inverse -x/|x|^2 of a nonzero grade-1 element."""
        if not self.is_vector():
            raise AlgebraError("vector_inverse requires a grade-1 element")
        nsq = sum(c * c for c in self.coeffs.values())
        if nsq == 0:
            raise AlgebraError("zero vector has no inverse")
        return self * (-1 / nsq if self.context.scalar_field != RATIONAL else Fraction(-1, 1) / nsq)

    def versor_inverse(self, tol: float = 1e-12) -> "Multivector":
        """Inverse of a product of invertible vectors via w~ / (w w~).

        Raises if w * reversion(w) is not a nonzero scalar (so the element is
        not a versor, or is numerically degenerate).
        """
        rev = self.reversion()
        s = self * rev
        scal = s.scalar_part()
        rest = (s - Multivector(self.context, {0: scal})).abs()
        if self.context.scalar_field == RATIONAL:
            if rest != 0 or scal == 0:
                raise AlgebraError("not an invertible versor")
        else:
            if abs(scal) <= tol or rest > tol * max(1.0, abs(scal)):
                raise AlgebraError("not an invertible versor (numerically)")
        return rev * (1 / scal if self.context.scalar_field != RATIONAL else Fraction(1, 1) / scal)

    # -- conversions ----------------------------------------------------------

    def to_float(self) -> "Multivector":
        return Multivector(
            self.context.to_float(), {m: float(c) for m, c in self.coeffs.items()}
        )

    def to_complex(self) -> "Multivector":
        return Multivector(
            self.context.to_complex(), {m: complex(c) for m, c in self.coeffs.items()}
        )

    def to_array(self) -> np.ndarray:
        """Dense coefficient vector of length 2^n (float or complex dtype)."""
        dtype = complex if self.context.scalar_field == COMPLEX else float
        out = np.zeros(self.context.dim, dtype=dtype)
        for m, c in self.coeffs.items():
            out[m] = c
        return out

    def __repr__(self):
        return f"Multivector({format_multivector(self)!r})"

    def __str__(self):
        return format_multivector(self)


def from_array(context: AlgebraContext, arr) -> Multivector:
    return Multivector(context, {m: v for m, v in enumerate(arr) if v != 0})


# -- commutator helpers --------------------------------------------------------


def scalar_product_part(a: Multivector, b: Multivector):
    """Scalar part of the geometric product a*b."""
    return (a * b).scalar_part()


def wedge(a: Multivector, b: Multivector) -> Multivector:
    """Outer product of two grade-1 elements: (ab - ba)/2."""
    half = Fraction(1, 2) if a.context.scalar_field == RATIONAL else 0.5
    return (a * b - b * a) * half


# -- quaternion projectors -------------------------------------------------------


def quaternion_projectors(context: AlgebraContext):
    """Idempotents (1 +- e1 e2 e3)/2 splitting Cl_3 into two quaternion copies."""
    if context.n != 3:
        raise AlgebraError("quaternion projectors require n = 3")
    omega = context.blade(1, 2, 3)
    half = Fraction(1, 2) if context.scalar_field == RATIONAL else 0.5
    e_plus = (context.one() + omega) * half
    e_minus = (context.one() - omega) * half
    return e_plus, e_minus


# -- unital isomorphism -----------------------------------------------------------


def unital_isomorphism(a: Multivector, target: AlgebraContext) -> Multivector:
    """Map Cl_{n-1} into the even subalgebra of Cl_n.

    Each generator e_j (j <= n-1) goes to e_n^{-1} e_j = -e_n e_j; blades map
    to the ordered product of their generator images.  The target context must
    have one dimension more than the input's.
    """
    src = a.context
    if target.n != src.n + 1 or target.scalar_field != src.scalar_field:
        raise AlgebraError("target must be Cl_{n} for input over Cl_{n-1}")
    n = target.n
    e_n = target.basis_vector(n)
    gen_images = {
        j: e_n.vector_inverse() * target.basis_vector(j) for j in range(1, n)
    }
    out = target.zero()
    for mask, c in a.coeffs.items():
        img = target.one()
        j = 1
        m = mask
        while m:
            if m & 1:
                img = img * gen_images[j]
            m >>= 1
            j += 1
        out = out + img * c
    return out


# -- text format --------------------------------------------------------------

_BLADE_RE = re.compile(r"^e(\d+(?:_\d+)*)$")


def blade_name(mask: int) -> str:
    if mask == 0:
        return "1"
    indices = [j + 1 for j in range(MAX_DIMENSION) if mask & (1 << j)]
    if all(j <= 9 for j in indices):
        return "e" + "".join(str(j) for j in indices)
    return "e" + "_".join(str(j) for j in indices)


def blade_from_name(name: str, n: int) -> int:
    name = name.strip()
    if name == "1":
        return 0
    m = _BLADE_RE.match(name)
    if not m:
        raise AlgebraError(f"bad blade name {name!r}")
    body = m.group(1)
    if "_" in body:
        indices = [int(tok) for tok in body.split("_")]
    else:
        indices = [int(ch) for ch in body]
    mask = 0
    for j in indices:
        if not (1 <= j <= n):
            raise AlgebraError(f"blade index {j} out of range for n={n}")
        bit = 1 << (j - 1)
        if mask & bit:
            raise AlgebraError(f"repeated index in blade {name!r}")
        mask |= bit
    return mask


def _format_scalar(c) -> str:
    if isinstance(c, Fraction):
        return str(c)
    if isinstance(c, complex):
        return f"({c.real!r}{c.imag:+}j)"
    return repr(c)


def format_multivector(a: Multivector) -> str:
    """Sum-of-terms text form, e.g. '3/4*1 + -2*e12'; round-trips rationals."""
    if not a.coeffs:
        return "0"
    items = sorted(a.coeffs.items(), key=lambda kv: (blade_grade(kv[0]), kv[0]))
    return " + ".join(f"{_format_scalar(c)}*{blade_name(m)}" for m, c in items)


def parse_multivector(text: str, context: AlgebraContext) -> Multivector:
    text = text.strip()
    if text in ("0", ""):
        return context.zero()
    # normalize "a - b" into "a + -b" without touching exponents like 1e-3
    text = re.sub(r"(?<![eE(])\s*-\s*", " + -", text)
    out = {}
    for chunk in text.split("+"):
        chunk = chunk.strip()
        if not chunk:
            continue
        if "*" in chunk:
            coef_s, blade_s = chunk.rsplit("*", 1)
        else:
            coef_s, blade_s = "1", chunk
        coef_s = coef_s.strip()
        neg = False
        while coef_s.startswith("-"):
            neg = not neg
            coef_s = coef_s[1:].strip()
        if coef_s in ("", "1"):
            value = 1
        elif context.scalar_field == RATIONAL:
            value = Fraction(coef_s)
        elif context.scalar_field == COMPLEX:
            value = complex(coef_s.strip("()"))
        else:
            value = float(coef_s)
        if neg:
            value = -value
        mask = blade_from_name(blade_s.strip(), context.n)
        out[mask] = out.get(mask, 0) + value
    return Multivector(context, out)
