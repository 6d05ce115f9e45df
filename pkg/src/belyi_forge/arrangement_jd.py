"""Line-arrangement polynomials with critical values {0, 8, -1}.

A degree-d member is a scaled product of d lines whose angles march in
steps of pi/d; at tau=0 all (d-1)^2 critical points are real with values
in {0, 8, -1} and known closed-form counts.  The y-axis rescaling by
sqrt(3) turns the tau=0 product into a polynomial with rational
coefficients, which this module recovers exactly by continued-fraction
rationalization and cross-checks by dual-path evaluation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import mpmath as mp
import numpy as np

from .belyi_numeric import DegreeGuardError

DEFAULT_PRECISION = 256
DEFAULT_DEN_BOUND = 10**12
CENSUS_DEGREE_GUARD = 9
DEFAULT_BOX = ((-3.0, 3.0), (-3.0, 3.0))
VALUE_TARGETS = (0.0, 8.0, -1.0)


class RationalizationError(ValueError):
    """A coefficient admitted no convergent within the denominator bound."""

    def __init__(self, message: str, i: int, j: int, value: float):
        super().__init__(message)
        self.monomial = (i, j)
        self.value = value


@dataclass(frozen=True)
class LineSpec:
    """One line a*x + b*y + c = 0 of the arrangement."""

    mu: int
    phi: float
    is_vertical: bool
    a: float
    b: float
    c: float

    def __call__(self, x: float, y: float) -> float:
        return self.a * x + self.b * y + self.c


@dataclass(frozen=True)
class BiPoly:
    """Dense bivariate polynomial; grid[i][j] is the coefficient of x^i y^j.

    The grid is square of side degree+1; coefficient types are whatever the
    constructor supplied (float, Fraction, mpmath), and the arithmetic here
    never forces conversions.
    """

    grid: tuple[tuple, ...]

    @property
    def degree(self) -> int:
        return len(self.grid) - 1

    @property
    def n_coefficients(self) -> int:
        n = self.degree + 1
        return n * (n + 1) // 2

    def coeff(self, i: int, j: int):
        if i < len(self.grid) and j < len(self.grid):
            return self.grid[i][j]
        return 0

    def __call__(self, x, y):
        acc = None
        for row in reversed(self.grid):
            inner = None
            for c in reversed(row):
                inner = c if inner is None else inner * y + c
            acc = inner if acc is None else acc * x + inner
        return acc

    def mul_linear(self, a, b, c) -> "BiPoly":
        n = len(self.grid)
        zero = self.grid[0][0] * 0
        out = [[zero for _ in range(n + 1)] for _ in range(n + 1)]
        for i in range(n):
            for j in range(n):
                g = self.grid[i][j]
                if g == 0:
                    continue
                out[i + 1][j] += a * g
                out[i][j + 1] += b * g
                out[i][j] += c * g
        return BiPoly(tuple(tuple(row) for row in out))

    def partial_x(self) -> "BiPoly":
        n = len(self.grid)
        if n == 1:
            return BiPoly(((self.grid[0][0] * 0,),))
        out = [
            [self.grid[i + 1][j] * (i + 1) for j in range(n - 1)]
            for i in range(n - 1)
        ]
        return BiPoly(tuple(tuple(row) for row in out))

    def partial_y(self) -> "BiPoly":
        n = len(self.grid)
        if n == 1:
            return BiPoly(((self.grid[0][0] * 0,),))
        out = [
            [self.grid[i][j + 1] * (j + 1) for j in range(n - 1)]
            for i in range(n - 1)
        ]
        return BiPoly(tuple(tuple(row) for row in out))

    def map_coeffs(self, fn) -> "BiPoly":
        return BiPoly(tuple(tuple(fn(c, i, j) for j, c in enumerate(row)) for i, row in enumerate(self.grid)))

    def as_float_grid(self) -> np.ndarray:
        return np.array([[float(c) for c in row] for row in self.grid], dtype=float)

    def restrict_y0(self) -> tuple:
        """Coefficients of p(x, 0), constant first."""
        return tuple(row[0] for row in self.grid)


def bipoly_to_json(p: BiPoly) -> dict:
    out = {}
    for i, row in enumerate(p.grid):
        for j, c in enumerate(row):
            if c == 0:
                continue
            if isinstance(c, Fraction):
                out[f"{i},{j}"] = {"num": c.numerator, "den": c.denominator}
            else:
                out[f"{i},{j}"] = {"num": float(c), "den": 1}
    return out


def _vertical_index(d: int, tau: float) -> int | None:
    """The integer m with tau = (6m - 3d - 1)pi/6, if one exists."""
    m = round((6 * tau / math.pi + 3 * d + 1) / 6)
    if abs(tau - (6 * m - 3 * d - 1) * math.pi / 6) < 1e-12:
        return int(m)
    return None


def _mu_range(d: int) -> range:
    return range(-((d - 2) // 2), (d + 1) // 2 + 1)


def build_lines(d: int, tau: float = 0.0) -> list[LineSpec]:
    """The d lines whose product (after scaling) has critical values {0,8,-1}.

    Angles are phi = (6*mu - 1)*pi/(6d) - tau/d.  When tau sits exactly at
    a vertical configuration the degenerate line is interpreted as x+1=0.
    """
    if d < 2:
        raise ValueError("need at least two lines")
    vertical_m = _vertical_index(d, tau)
    lines = []
    for mu in _mu_range(d):
        phi = (6 * mu - 1) * math.pi / (6 * d) - tau / d
        if vertical_m is not None and (mu - vertical_m) % d == 0:
            lines.append(LineSpec(mu=mu, phi=phi, is_vertical=True, a=1.0, b=0.0, c=1.0))
            continue
        t = math.tan(phi)
        lines.append(
            LineSpec(
                mu=mu,
                phi=phi,
                is_vertical=False,
                a=-t,
                b=1.0,
                c=math.cos(2 * phi) * t + math.sin(2 * phi),
            )
        )
    return lines


def scale_constant(d: int, tau: float = 0.0) -> float:
    """The prefactor: 2cos(tau + d pi/2 + 2 pi/3), or (-1)^m 2d when vertical."""
    vertical_m = _vertical_index(d, tau)
    if vertical_m is not None:
        return (-1) ** vertical_m * 2.0 * d
    return 2.0 * math.cos(tau + d * math.pi / 2 + 2 * math.pi / 3)


def build_Jhat(d: int, tau: float = 0.0, precision: int = DEFAULT_PRECISION) -> BiPoly:
    """Expand the scaled d-line product at the given binary precision."""
    if d < 2:
        raise ValueError("need degree >= 2")
    vertical_m = _vertical_index(d, tau)
    with mp.workprec(precision):
        if vertical_m is not None:
            tau_exact = (6 * vertical_m - 3 * d - 1) * mp.pi / 6
            lam = mp.mpf((-1) ** vertical_m) * 2 * d
        else:
            tau_exact = mp.mpf(tau)
            lam = 2 * mp.cos(tau_exact + d * mp.pi / 2 + 2 * mp.pi / 3)
        poly = BiPoly(((lam,),))
        for mu in _mu_range(d):
            if vertical_m is not None and (mu - vertical_m) % d == 0:
                poly = poly.mul_linear(mp.mpf(1), mp.mpf(0), mp.mpf(1))
                continue
            phi = (6 * mu - 1) * mp.pi / (6 * d) - tau_exact / d
            t = mp.tan(phi)
            poly = poly.mul_linear(-t, mp.mpf(1), mp.cos(2 * phi) * t + mp.sin(2 * phi))
    return poly


def _mpf_to_fraction(x, i: int, j: int, den_bound: int, err_limit) -> Fraction:
    if x == 0:
        return Fraction(0)
    with mp.workprec(max(mp.mp.prec, 320)):
        scaled = int(mp.floor(x * mp.mpf(2) ** 240 + mp.mpf(1) / 2))
    rat = Fraction(scaled, 2**240).limit_denominator(den_bound)
    err = abs(mp.mpf(rat.numerator) / rat.denominator - x)
    if err > err_limit:
        raise RationalizationError(
            f"coefficient of x^{i} y^{j} has no rational approximation with "
            f"denominator <= {den_bound} within {mp.nstr(err_limit, 5)} "
            f"(defect {mp.nstr(err, 5)}); raise the build precision",
            i,
            j,
            float(x),
        )
    return rat


def build_Jd(
    d: int,
    precision: int = DEFAULT_PRECISION,
    den_bound: int = DEFAULT_DEN_BOUND,
) -> BiPoly:
    """Exact rational form of the tau=0 arrangement polynomial in x, y/sqrt(3).

    The float expansion is rescaled column by column, each coefficient is
    snapped to its continued-fraction convergent within den_bound, and the
    snap is accepted only if it agrees with the float value to
    2^(-precision/2).
    """
    with mp.workprec(precision):
        jhat = build_Jhat(d, 0.0, precision)
        s3 = mp.sqrt(3)
        err_limit = mp.mpf(2) ** (-(precision // 2))
        rows = []
        for i, row in enumerate(jhat.grid):
            out = []
            for j, c in enumerate(row):
                out.append(_mpf_to_fraction(c / s3**j, i, j, den_bound, err_limit))
            rows.append(tuple(out))
    return BiPoly(tuple(rows))


def verify_Jd_dual_path(
    d: int,
    precision: int = DEFAULT_PRECISION,
    n_points: int = 12,
    seed: int = 7,
) -> float:
    """Max disagreement between the rational polynomial and the float product.

    Evaluates J_d at deterministic rational points both exactly and through
    the mpf expansion of the unscaled product at (x, y/sqrt(3)); returns the
    largest absolute difference.
    """
    jd = build_Jd(d, precision)
    jhat = build_Jhat(d, 0.0, precision)
    rng = np.random.default_rng(seed)
    worst = mp.mpf(0)
    with mp.workprec(precision):
        s3 = mp.sqrt(3)
        for _ in range(n_points):
            x = Fraction(int(rng.integers(-4000, 4000)), 1000)
            y = Fraction(int(rng.integers(-4000, 4000)), 1000)
            exact = jd(x, y)
            via_float = jhat(mp.mpf(x.numerator) / x.denominator,
                             (mp.mpf(y.numerator) / y.denominator) / s3)
            diff = abs(mp.mpf(exact.numerator) / exact.denominator - via_float)
            worst = max(worst, diff)
    return float(worst)


@dataclass(frozen=True)
class JStats:
    d: int
    n0: int
    n8: int
    nm1: int

    @property
    def total(self) -> int:
        return self.n0 + self.n8 + self.nm1

    def as_dict(self) -> dict:
        return {"d": self.d, "n0": self.n0, "n8": self.n8, "nm1": self.nm1}


def _exact_div(num: int, den: int) -> int:
    q, r = divmod(num, den)
    if r:
        raise ArithmeticError(f"{num} is indivisible by {den}")
    return q


def jstats(d: int) -> JStats:
    """Closed-form critical-point counts at values 0, 8, -1."""
    if d < 3:
        raise ValueError("counts are defined for d >= 3")
    n0 = _exact_div(d * (d - 1), 2)
    if d % 3 == 0:
        n8 = _exact_div(d * (d - 3), 6)
        nm1 = _exact_div(d * d, 3) - d + 1
    else:
        n8 = _exact_div((d - 1) * (d - 2), 6)
        nm1 = _exact_div((d - 1) * (d - 2), 3)
    return JStats(d=d, n0=n0, n8=n8, nm1=nm1)


def line_intersections(lines: list[LineSpec]) -> list[tuple[float, float]]:
    pts = []
    for i in range(len(lines)):
        for j in range(i + 1, len(lines)):
            l1, l2 = lines[i], lines[j]
            det = l1.a * l2.b - l2.a * l1.b
            if abs(det) < 1e-12:
                continue
            x = (-l1.c * l2.b + l2.c * l1.b) / det
            y = (-l1.a * l2.c + l2.a * l1.c) / det
            pts.append((x, y))
    return pts


@dataclass(frozen=True)
class CriticalPoint2D:
    x: float
    y: float
    value: float
    hessian_det: float
    nondegenerate: bool


@dataclass(frozen=True)
class Census2D:
    counts: dict
    points: tuple[CriticalPoint2D, ...]
    complete: bool
    all_nondegenerate: bool
    expected_total: int
    stray_values: tuple[float, ...]
    box: tuple[tuple[float, float], tuple[float, float]]
    grid: int

    @property
    def total(self) -> int:
        return len(self.points)

    def as_dict(self) -> dict:
        return {
            "counts": {str(k): v for k, v in self.counts.items()},
            "total": self.total,
            "expected_total": self.expected_total,
            "complete": self.complete,
            "all_nondegenerate": self.all_nondegenerate,
            "stray_values": list(self.stray_values),
        }


def _eval_many(grid: np.ndarray, x: np.ndarray, y: np.ndarray) -> np.ndarray:
    acc = np.zeros_like(x)
    for i in range(grid.shape[0] - 1, -1, -1):
        inner = np.zeros_like(y)
        for j in range(grid.shape[1] - 1, -1, -1):
            inner = inner * y + grid[i, j]
        acc = acc * x + inner
    return acc


def critical_census_2d(
    p: BiPoly,
    box: tuple[tuple[float, float], tuple[float, float]] = DEFAULT_BOX,
    grid: int = 48,
    tol: float = 1e-6,
    targets: tuple[float, ...] = VALUE_TARGETS,
    expected_total: int | None = None,
    extra_starts: tuple[tuple[float, float], ...] = (),
) -> Census2D:
    """Real critical points of p by damped Newton from a lattice of starts.

    extra_starts seeds known candidates (line intersections) on top of the
    grid x grid lattice over box.  Converged points are kept wherever they
    land, deduplicated within tol, classified against the target values,
    and flagged nondegenerate by the Hessian determinant.  The census is
    complete when the count reaches expected_total (default (degree-1)^2).
    """
    d = p.degree
    if d > CENSUS_DEGREE_GUARD:
        raise DegreeGuardError(f"degree {d} exceeds census guard {CENSUS_DEGREE_GUARD}")
    if expected_total is None:
        expected_total = (d - 1) ** 2
    g = p.as_float_grid()
    gx = p.partial_x().as_float_grid()
    gy = p.partial_y().as_float_grid()
    gxx = p.partial_x().partial_x().as_float_grid()
    gxy = p.partial_x().partial_y().as_float_grid()
    gyy = p.partial_y().partial_y().as_float_grid()

    (x0, x1), (y0, y1) = box
    lx = np.linspace(x0, x1, grid)
    ly = np.linspace(y0, y1, grid)
    xs, ys = np.meshgrid(lx, ly)
    x = xs.ravel()
    y = ys.ravel()
    if extra_starts:
        ex = np.array([q[0] for q in extra_starts])
        ey = np.array([q[1] for q in extra_starts])
        x = np.concatenate([x, ex])
        y = np.concatenate([y, ey])

    span = max(x1 - x0, y1 - y0)
    alive = np.ones(len(x), dtype=bool)
    for _ in range(60):
        fx = _eval_many(gx, x, y)
        fy = _eval_many(gy, x, y)
        hxx = _eval_many(gxx, x, y)
        hxy = _eval_many(gxy, x, y)
        hyy = _eval_many(gyy, x, y)
        det = hxx * hyy - hxy * hxy
        bad = np.abs(det) < 1e-14
        det_safe = np.where(bad, 1.0, det)
        dx = -(hyy * fx - hxy * fy) / det_safe
        dy = -(hxx * fy - hxy * fx) / det_safe
        step = np.hypot(dx, dy)
        clip = np.where(step > 0.5 * span, 0.5 * span / np.maximum(step, 1e-300), 1.0)
        x = np.where(alive & ~bad, x + clip * dx, x)
        y = np.where(alive & ~bad, y + clip * dy, y)
        alive = alive & ~bad & np.isfinite(x) & np.isfinite(y) & (np.hypot(x, y) < 50)
        x = np.where(alive, x, 0.0)
        y = np.where(alive, y, 0.0)

    fx = _eval_many(gx, x, y)
    fy = _eval_many(gy, x, y)
    scale = 1.0 + np.abs(_eval_many(g, x, y))
    ok = alive & (np.hypot(fx, fy) < 1e-8 * scale)
    cx, cy = x[ok], y[ok]

    accepted: list[tuple[float, float]] = []
    for px, py in sorted(zip(cx, cy), key=lambda q: (q[0], q[1])):
        if all((px - ax) ** 2 + (py - ay) ** 2 > tol * tol for ax, ay in accepted):
            accepted.append((px, py))

    points: list[CriticalPoint2D] = []
    counts = {t: 0 for t in targets}
    strays: list[float] = []
    nondeg_all = True
    for px, py in accepted:
        val = float(_eval_many(g, np.array([px]), np.array([py]))[0])
        hxx = float(_eval_many(gxx, np.array([px]), np.array([py]))[0])
        hxy = float(_eval_many(gxy, np.array([px]), np.array([py]))[0])
        hyy = float(_eval_many(gyy, np.array([px]), np.array([py]))[0])
        det = hxx * hyy - hxy * hxy
        nondeg = abs(det) > tol * (1.0 + hxx * hxx + hxy * hxy + hyy * hyy)
        nondeg_all = nondeg_all and nondeg
        matched = None
        for t in targets:
            if abs(val - t) <= tol:
                matched = t
                break
        if matched is None:
            strays.append(val)
        else:
            counts[matched] += 1
        points.append(
            CriticalPoint2D(x=px, y=py, value=val, hessian_det=det, nondegenerate=nondeg)
        )
    complete = len(accepted) == expected_total and not strays
    return Census2D(
        counts=counts,
        points=tuple(points),
        complete=complete,
        all_nondegenerate=nondeg_all,
        expected_total=expected_total,
        stray_values=tuple(strays),
        box=box,
        grid=grid,
    )


def census_with_retries(
    p: BiPoly,
    starts: tuple[tuple[float, float], ...],
    box: tuple[tuple[float, float], tuple[float, float]] = DEFAULT_BOX,
    grid: int = 48,
    tol: float = 1e-6,
    max_rounds: int = 3,
) -> Census2D:
    """Census wrapper that widens the box and densifies on incompleteness."""
    census = None
    for round_idx in range(max_rounds):
        factor = 1.6**round_idx
        wide = (
            (box[0][0] * factor, box[0][1] * factor),
            (box[1][0] * factor, box[1][1] * factor),
        )
        census = critical_census_2d(
            p,
            box=wide,
            grid=grid + 16 * round_idx,
            tol=tol,
            extra_starts=starts,
        )
        if census.complete:
            return census
    return census


def jhat_census(
    d: int,
    grid: int = 48,
    tol: float = 1e-6,
    precision: int = DEFAULT_PRECISION,
    max_rounds: int = 3,
) -> Census2D:
    """Census of the float arrangement polynomial, seeded with its vertices."""
    p = build_Jhat(d, 0.0, precision)
    starts = tuple(line_intersections(build_lines(d, 0.0)))
    return census_with_retries(p, starts, DEFAULT_BOX, grid, tol, max_rounds)


def jd_census(
    d: int,
    grid: int = 48,
    tol: float = 1e-6,
    precision: int = DEFAULT_PRECISION,
    max_rounds: int = 3,
) -> Census2D:
    """Census of the rational polynomial; vertices carry the sqrt(3) y-scale."""
    p = build_Jd(d, precision)
    return census_with_retries(
        p, jd_starts(d), jd_default_box(), grid, tol, max_rounds
    )


def jd_starts(d: int) -> tuple[tuple[float, float], ...]:
    """Arrangement vertices in the rational polynomial's coordinates."""
    s3 = math.sqrt(3)
    return tuple((x, y * s3) for x, y in line_intersections(build_lines(d, 0.0)))


def jd_default_box() -> tuple[tuple[float, float], tuple[float, float]]:
    s3 = math.sqrt(3)
    return (DEFAULT_BOX[0], (DEFAULT_BOX[1][0] * s3, DEFAULT_BOX[1][1] * s3))


def census_matches_jstats(census: Census2D, stats: JStats) -> bool:
    return (
        census.complete
        and census.counts.get(0.0, 0) == stats.n0
        and census.counts.get(8.0, 0) == stats.n8
        and census.counts.get(-1.0, 0) == stats.nm1
    )
