"""Kernel family of Clifford analysis.

Symbolic side: the Cauchy kernel G(x) = x/|x|^n, the Newtonian kernel
H(x) = 1/((n-2)|x|^{n-2}), and the iterated chain G_k solved exactly from
D G_k = G_{k-1}.  The chain constants are never hard-coded; they come out
of an exact linear solve on RadialExpr coefficients, which doubles as a
regression check.  Note that with e_j^2 = -1 the chain forces
G_2 = -H (symbolically D H = -G), so C(n,2) = -1/(n-2).

Numeric side: two-point kernels on the unit n-sphere in R^{n+1}, lattice
and dilation kernels for periodic geometries (truncated sums with reported
tail bounds), plane-wave kernels in the complexified algebra, the Laplace
transform identity behind the plane-wave decomposition, and the
complexified kernel for complex vector arguments.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .algebra import (
    AlgebraContext,
    AlgebraError,
    Multivector,
    COMPLEX,
    FLOAT,
    RATIONAL,
)
from .symcalc import (
    CliffordPolynomial,
    RadialExpr,
    vector_power_polynomial,
)


# -- symbolic kernels ----------------------------------------------------------


def cauchy_kernel(n: int) -> RadialExpr:
    """G(x) = x / |x|^n over the rational context."""
    if n < 2:
        raise AlgebraError("cauchy kernel needs n >= 2")
    ctx = AlgebraContext(n, RATIONAL)
    return RadialExpr(ctx, {(n, 0): CliffordPolynomial.vector_variable(ctx)})


def newtonian_kernel(n: int) -> RadialExpr:
    """H(x) = 1 / ((n-2) |x|^{n-2}); satisfies D H = -G exactly."""
    if n < 3:
        raise AlgebraError("newtonian kernel needs n >= 3")
    ctx = AlgebraContext(n, RATIONAL)
    one = CliffordPolynomial.constant(ctx.one())
    return RadialExpr(ctx, {(n - 2, 0): one / (n - 2)})


@dataclass(frozen=True)
class KernelFamily:
    """One member of the iterated chain with its solved constants."""

    n: int
    k: int
    symbolic: RadialExpr
    constant: Fraction
    log_constant: Fraction | None = None


def _radial_coords(expr: RadialExpr) -> dict:
    out = {}
    for (m, s), p in expr.terms.items():
        for exps, mv in p.terms.items():
            for mask, c in mv.coeffs.items():
                out[(m, s, exps, mask)] = c
    return out


def _solve_linear_combination(bases, target):
    """Exact rationals c_i with sum c_i * bases[i] == target, or None."""
    coords = set()
    base_maps = [_radial_coords(b) for b in bases]
    target_map = _radial_coords(target)
    for m in base_maps:
        coords.update(m)
    coords.update(target_map)
    rows = []
    for key in sorted(coords):
        rows.append(
            [m.get(key, Fraction(0)) for m in base_maps] + [target_map.get(key, Fraction(0))]
        )
    ncols = len(bases)
    pivot_rows = []
    used = [False] * len(rows)
    for col in range(ncols):
        pivot = None
        for i, row in enumerate(rows):
            if not used[i] and row[col] != 0 and all(row[c] == 0 for c in range(col)):
                pivot = i
                break
        if pivot is None:
            continue
        used[pivot] = True
        pivot_rows.append((col, rows[pivot]))
        prow = rows[pivot]
        for i, row in enumerate(rows):
            if i != pivot and row[col] != 0:
                factor = row[col] / prow[col]
                rows[i] = [a - factor * b for a, b in zip(row, prow)]
    solution = [Fraction(0)] * ncols
    for col, row in reversed(pivot_rows):
        rhs = row[ncols] - sum(row[c] * solution[c] for c in range(col + 1, ncols))
        solution[col] = rhs / row[col]
    # verify (also catches under/over-determined inconsistencies)
    combo = None
    for c, b in zip(solution, bases):
        term = b * c
        combo = term if combo is None else combo + term
    if combo is None:
        combo = RadialExpr(target.context, {})
    if not (combo - target).is_zero():
        return None
    return solution


@lru_cache(maxsize=None)
def iterated_kernel(n: int, k: int) -> KernelFamily:
    """k-th kernel of the chain D G_k = G_{k-1}, G_1 = G, solved exactly."""
    if k < 1:
        raise AlgebraError("iterated kernel needs k >= 1")
    if n < 3:
        raise AlgebraError("iterated kernels need n >= 3")
    ctx = AlgebraContext(n, RATIONAL)
    if k == 1:
        return KernelFamily(n, 1, cauchy_kernel(n), Fraction(1))
    prev = iterated_kernel(n, k - 1).symbolic
    log_case = n % 2 == 0 and k >= n
    if log_case:
        power = vector_power_polynomial(ctx, k - n)
        base_log = RadialExpr(ctx, {(0, 1): power})
        base_plain = RadialExpr(ctx, {(0, 0): power})
        d_log = base_log.dirac_left()
        d_plain = base_plain.dirac_left()
        if d_plain.is_zero():  # k == n: the plain term is constant, gauge A = 0
            sol = _solve_linear_combination([d_log], prev)
            if sol is None:
                raise AlgebraError(f"kernel ansatz failed at n={n}, k={k}")
            c = sol[0]
            return KernelFamily(n, k, base_log * c, c, Fraction(0))
        sol = _solve_linear_combination([d_log, d_plain], prev)
        if sol is None:
            raise AlgebraError(f"kernel ansatz failed at n={n}, k={k}")
        c, b = sol
        a = b / c
        return KernelFamily(n, k, base_log * c + base_plain * b, c, a)
    if k % 2 == 1:
        base = RadialExpr(
            ctx, {(n - k + 1, 0): CliffordPolynomial.vector_variable(ctx)}
        )
    else:
        base = RadialExpr(ctx, {(n - k, 0): CliffordPolynomial.constant(ctx.one())})
    sol = _solve_linear_combination([base.dirac_left()], prev)
    if sol is None:
        raise AlgebraError(f"kernel ansatz failed at n={n}, k={k}")
    c = sol[0]
    return KernelFamily(n, k, base * c, c)


def kernel_constants(n: int, k: int):
    """(C(n,k), A(n,k)); A is None outside the even-n log regime."""
    fam = iterated_kernel(n, k)
    return fam.constant, fam.log_constant


# -- fast numeric Cauchy kernel ---------------------------------------------------


def cauchy_kernel_numeric(points: np.ndarray, n: int | None = None) -> np.ndarray:
    """G applied row-wise to an (N, d) array of nonzero vectors.

    The kernel exponent defaults to the ambient dimension d; pass n to use a
    different homogeneity (the sphere kernels use the sphere dimension).
    """
    pts = np.asarray(points, dtype=float)
    single = pts.ndim == 1
    if single:
        pts = pts[None, :]
    if n is None:
        n = pts.shape[1]
    norms = np.linalg.norm(pts, axis=1)
    if np.any(norms == 0):
        raise AlgebraError("cauchy kernel is singular at 0")
    out = pts / norms[:, None] ** n
    return out[0] if single else out


# -- kernels on the n-sphere in R^{n+1} -------------------------------------------


def _check_on_sphere(x, tol=1e-9):
    if abs(np.linalg.norm(x) - 1.0) > tol:
        raise AlgebraError("point is not on the unit sphere")


def spherical_kernels(n: int):
    """Two-point evaluators (G_s, H_s) on the unit n-sphere in R^{n+1}.

    G_s(x, y) = (x - y)/|x - y|^n = 2^{-n/2} (x - y)/(1 - <x,y>)^{n/2} and
    H_s(x, y) = |x - y|^{2-n}/(n - 2); both return Multivectors over the
    float context of the ambient algebra Cl_{n+1}.  Exact identities, pinned
    by tests: x (Lambda + n/2) G_s = 0 and (D_s - x) H_s = G_s with
    D_s = x (Lambda + n/2).
    """
    if n < 3:
        raise AlgebraError("spherical kernels need sphere dimension n >= 3")
    ctx = AlgebraContext(n + 1, FLOAT)

    def g_s(x, y) -> Multivector:
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        _check_on_sphere(x)
        _check_on_sphere(y)
        d = x - y
        r = np.linalg.norm(d)
        if r == 0:
            raise AlgebraError("coincident points")
        return ctx.vector(d / r**n)

    def h_s(x, y) -> Multivector:
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        _check_on_sphere(x)
        _check_on_sphere(y)
        r = np.linalg.norm(x - y)
        if r == 0:
            raise AlgebraError("coincident points")
        return ctx.scalar(r ** (2 - n) / (n - 2))

    return g_s, h_s


def angular_operator_fd(f, x, step: float = 1e-5) -> Multivector:
    """Lambda applied to an ambient-vector function by rotational central
    differences; rotations keep sphere points exactly on the sphere."""
    x = np.asarray(x, dtype=float)
    dim = x.shape[0]
    sample = f(x)
    ctx = sample.context
    total = ctx.zero()
    for i in range(dim):
        for k in range(i + 1, dim):
            xp = x.copy()
            xm = x.copy()
            c, s = math.cos(step), math.sin(step)
            # rotation by +step in the (i, k) plane: generator x_i d_k - x_k d_i
            xp[i], xp[k] = c * x[i] - s * x[k], c * x[k] + s * x[i]
            xm[i], xm[k] = c * x[i] + s * x[k], c * x[k] - s * x[i]
            deriv = (f(xp) - f(xm)) * (1.0 / (2 * step))
            total = total + ctx.blade(i + 1, k + 1) * deriv
    return total


def spherical_dirac_fd(f, x, n: int | None = None, step: float = 1e-5) -> Multivector:
    """D_s = x (Lambda + n/2) by rotational finite differences."""
    x = np.asarray(x, dtype=float)
    if n is None:
        n = x.shape[0] - 1
    lam = angular_operator_fd(f, x, step)
    val = f(x)
    xm = val.context.vector(x)
    return xm * (lam + val * (n / 2.0))


# -- periodic lattice kernels -------------------------------------------------------


def _lattice_points(k: int, radius: int) -> np.ndarray:
    """All integer k-tuples with sup norm <= radius, ordered shell by shell
    then lexicographically (deterministic summation order)."""
    if k == 0:
        return np.zeros((1, 0), dtype=int)
    grids = np.meshgrid(*([np.arange(-radius, radius + 1)] * k), indexing="ij")
    pts = np.stack([g.ravel() for g in grids], axis=1)
    shells = np.max(np.abs(pts), axis=1)
    order = np.lexsort(tuple(pts[:, c] for c in reversed(range(k))) + (shells,))
    return pts[order]


def periodic_kernel_cot(n, k, l, x, y, truncation_radius: int = 12):
    """Truncated lattice kernel sum_{m in Z^l, m' in Z^{k-l}}
    (-1)^{m_1 + ... + m_l} G(x - y + m + m').

    Shifts live in span(e_1..e_k) of R^n; the sign makes the sum antiperiodic
    in the first l lattice directions and periodic in the rest, up to the
    truncation error.  Returns (Multivector, tail_bound) where tail_bound is
    the summed magnitude of the outermost shells, which dominates the
    re-indexing defect of any unit shift.
    """
    if not (0 <= l <= k <= n):
        raise AlgebraError("need 0 <= l <= k <= n")
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    base = x - y
    ctx = AlgebraContext(n, FLOAT)
    if k == 0:
        return ctx.vector(cauchy_kernel_numeric(base)), 0.0
    lat = _lattice_points(k, truncation_radius)
    shifts = np.zeros((lat.shape[0], n))
    shifts[:, :k] = lat
    pts = base[None, :] + shifts
    norms = np.linalg.norm(pts, axis=1)
    if np.min(norms) < 1e-12:
        raise AlgebraError("x - y lies on the lattice orbit")
    vals = pts / norms[:, None] ** n
    signs = np.ones(lat.shape[0])
    if l > 0:
        signs = (-1.0) ** np.sum(np.abs(lat[:, :l]), axis=1)
    total = np.sum(signs[:, None] * vals, axis=0)
    shell = np.max(np.abs(lat), axis=1)
    fringe = shell >= truncation_radius - 1
    tail_bound = float(np.sum(1.0 / norms[fringe] ** (n - 1)))
    return ctx.vector(total), tail_bound


def dilation_kernel(n, x, y, terms: int = 40):
    """Truncated kernel for the doubling orbit:
    sum_{k>=0} G(2^k x - 2^k y) + 2^{2-2n} G(x) (sum_{k>=1} G(2^k x^{-1} - 2^k y^{-1})) G(y).

    Each successive term scales by 2^{-(n-1)}, so the truncation tail is
    geometric; returns (Multivector, tail_bound).
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    nx, ny = np.linalg.norm(x), np.linalg.norm(y)
    if nx == 0 or ny == 0:
        raise AlgebraError("x and y must be nonzero")
    ratio = nx / ny
    m = math.log2(ratio) if ratio > 0 else 0.0
    if abs(np.linalg.norm(x - y)) < 1e-12 or (
        abs(m - round(m)) < 1e-9
        and np.linalg.norm(x - 2.0 ** round(m) * y) < 1e-9 * max(1.0, nx)
    ):
        raise AlgebraError("x lies on the doubling orbit of y")
    ctx = AlgebraContext(n, FLOAT)
    xinv = -x / nx**2
    yinv = -y / ny**2
    first = np.zeros(n)
    for kk in range(terms):
        first += cauchy_kernel_numeric(2.0**kk * (x - y))
    inner = np.zeros(n)
    for kk in range(1, terms + 1):
        inner += cauchy_kernel_numeric(2.0**kk * (xinv - yinv))
    gx = ctx.vector(cauchy_kernel_numeric(x))
    gy = ctx.vector(cauchy_kernel_numeric(y))
    second = gx * ctx.vector(inner) * gy * (2.0 ** (2 - 2 * n))
    decay = 2.0 ** (-(n - 1))
    g1 = np.linalg.norm(cauchy_kernel_numeric(2.0 ** (terms - 1) * (x - y)))
    g2 = np.linalg.norm(cauchy_kernel_numeric(2.0**terms * (xinv - yinv)))
    tail = (g1 + g2 * abs(2.0 ** (2 - 2 * n)) / (nx * ny) ** (n - 1)) * decay / (1 - decay)
    return ctx.vector(first) + second, float(tail)


# -- plane waves in the complexified algebra ----------------------------------------


@dataclass(frozen=True)
class PlaneWave:
    """Exponential plane wave times the idempotent (1 +- i zeta' e_n)/2.

    The decay convention is fixed by requiring monogenicity (equivalently
    boundedness of the + wave on the upper half space):
    e_+-(x) = exp(i <x', zeta> -+ x_n |zeta|) p_+-(zeta).
    """

    context: AlgebraContext
    zeta: tuple
    sign: int

    @property
    def zeta_norm(self) -> float:
        return math.sqrt(sum(abs(z) ** 2 for z in self.zeta))


def plane_wave(n: int, zeta, sign: int) -> PlaneWave:
    zeta = tuple(float(z) for z in zeta)
    if len(zeta) != n - 1:
        raise AlgebraError("zeta must lie in R^{n-1}")
    if all(z == 0 for z in zeta):
        raise AlgebraError("zeta must be nonzero")
    if sign not in (1, -1):
        raise AlgebraError("sign must be +1 or -1")
    return PlaneWave(AlgebraContext(n, COMPLEX), zeta, sign)


def plane_wave_projector(n: int, zeta, sign: int) -> Multivector:
    """p_+-(zeta) = (1 +- i (zeta/|zeta|) e_n)/2 in Cl_n(C)."""
    ctx = AlgebraContext(n, COMPLEX)
    zeta = [complex(z) for z in zeta]
    norm = math.sqrt(sum(abs(z) ** 2 for z in zeta))
    if norm == 0:
        raise AlgebraError("zeta must be nonzero")
    zeta_unit = ctx.vector([z / norm for z in zeta] + [0])
    e_n = ctx.basis_vector(n)
    return (ctx.one() + zeta_unit * e_n * complex(0, sign)) * 0.5


def plane_wave_eval(wave: PlaneWave, x) -> Multivector:
    x = [float(c) for c in x]
    n = wave.context.n
    if len(x) != n:
        raise AlgebraError("point has wrong dimension")
    phase = sum(z * c for z, c in zip(wave.zeta, x[:-1]))
    scalar = complex(math.cos(phase), math.sin(phase)) * math.exp(
        -wave.sign * x[-1] * wave.zeta_norm
    )
    return plane_wave_projector(n, wave.zeta, wave.sign) * scalar


def laplace_planewave_identity(n: int, a: float, b: float):
    """(numeric, closed) values of int_0^inf e^{i r a - b r} r^{n-2} dr.

    The numeric side is adaptive quadrature (independent oracle); the closed
    form is (n-2)! (b - i a)^{-(n-1)}.
    """
    if b <= 0:
        raise AlgebraError("the integral diverges for b <= 0")
    if n < 2:
        raise AlgebraError("need n >= 2")
    from scipy.integrate import quad

    power = n - 2
    cutoff = max(60.0 / b, 10.0)
    re, _ = quad(
        lambda r: math.exp(-b * r) * r**power * math.cos(a * r), 0, cutoff, limit=400
    )
    im, _ = quad(
        lambda r: math.exp(-b * r) * r**power * math.sin(a * r), 0, cutoff, limit=400
    )
    numeric = complex(re, im)
    closed = math.factorial(n - 2) * (b - 1j * a) ** (-(n - 1))
    return numeric, closed


# -- complexified kernel --------------------------------------------------------------


def complex_kernel_eval(x, z, n: int | None = None) -> Multivector:
    """G+(x - z) = (x - z) / ((x - z)^2)^{n/2} for a complex vector z (n even).

    (x - z)^2 is the complex scalar -(sum (x_j - z_j)^2); n/2 is an integer so
    no branch choice is needed.  For real z this equals (-1)^{n/2} G(x - y);
    the sign is the parity of the vector-square convention and is pinned by
    tests.  Raises on the complex null cone (x - z)^2 = 0.
    """
    x = np.asarray(x, dtype=complex)
    z = np.asarray(z, dtype=complex)
    if np.any(np.abs(x.imag) > 0):
        raise AlgebraError("x must be a real vector")
    if n is None:
        n = x.shape[0]
    if n % 2:
        raise AlgebraError("complex kernel implemented for even n only")
    w = x - z
    square = -np.sum(w * w)
    if abs(square) < 1e-14:
        raise AlgebraError("point lies on the complex null cone")
    ctx = AlgebraContext(n, COMPLEX)
    return ctx.vector(w / square ** (n // 2))
