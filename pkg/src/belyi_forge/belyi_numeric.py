"""Numeric realization of plane trees as polynomials with critical values ±1.

The solver exploits the factorization p+1 = c·∏_black (w-a)^deg and
p-1 = c·∏_white (w-b)^deg: the difference of the two monic vertex products
must collapse to the constant 2/c, giving d-1 coefficient-vanishing
equations in the d-1 vertex positions left free after gauge fixing.  A
root census of p' acts as an independent check that the solved polynomial
really has the critical structure the tree prescribes.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

import mpmath as mp
import numpy as np

from .profile_core import CriticalProfile
from .seed_families import SeedSpec, seed_profile
from .tree_realization import (
    BLACK,
    PlaneTree,
    derive_tree,
    profile_of,
    realize_profile,
)
from .word_engine import Word, trajectory, uses_t2

DEGREE_GUARD = 16
DEFAULT_TOL = 1e-10
DEFAULT_CLUSTER_TOL = 1e-6

_MIN_SEPARATION = 1e-6
_NEWTON_ITERS = 120
_POLISH_DPS = 45


class NoConvergenceError(RuntimeError):
    """All restarts exhausted without meeting the residual tolerance."""


class DegreeGuardError(ValueError):
    """Requested degree exceeds the solver's scope guard."""


@dataclass(frozen=True)
class UniPoly:
    """Dense univariate polynomial, constant term first.

    Coefficients may be float, complex, Fraction, or mpmath types; the
    arithmetic here never forces a conversion, so precision is whatever
    the coefficients carry.
    """

    coeffs: tuple

    def __post_init__(self) -> None:
        cs = tuple(self.coeffs)
        if not cs:
            cs = (0,)
        while len(cs) > 1 and cs[-1] == 0:
            cs = cs[:-1]
        object.__setattr__(self, "coeffs", cs)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __call__(self, x):
        r = self.coeffs[-1]
        for c in reversed(self.coeffs[:-1]):
            r = r * x + c
        return r

    def derivative(self) -> "UniPoly":
        if self.degree == 0:
            return UniPoly((0,))
        return UniPoly(tuple(k * c for k, c in enumerate(self.coeffs) if k >= 1))

    def __add__(self, other: "UniPoly") -> "UniPoly":
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        return UniPoly(tuple(c + (b[k] if k < len(b) else 0) for k, c in enumerate(a)))

    def __mul__(self, other: "UniPoly") -> "UniPoly":
        a, b = self.coeffs, other.coeffs
        out = [0] * (len(a) + len(b) - 1)
        for i, ai in enumerate(a):
            for j, bj in enumerate(b):
                out[i + j] += ai * bj
        return UniPoly(tuple(out))

    def scale(self, s) -> "UniPoly":
        return UniPoly(tuple(c * s for c in self.coeffs))

    def shift_constant(self, s) -> "UniPoly":
        return UniPoly((self.coeffs[0] + s,) + self.coeffs[1:])

    @classmethod
    def from_roots(cls, roots_with_mults, leading=1) -> "UniPoly":
        p = cls((leading,))
        for root, m in roots_with_mults:
            for _ in range(m):
                p = p * cls((-root, 1))
        return p

    def as_complex_array(self) -> np.ndarray:
        return np.asarray([complex(c) for c in self.coeffs], dtype=complex)


def to_unit_interval(g: UniPoly) -> UniPoly:
    """Affine change of the value axis sending -1, +1 to 0, 1: (g+1)/2."""
    cs = tuple(c / 2 for c in g.coeffs)
    return UniPoly(((g.coeffs[0] + 1) / 2,) + cs[1:])


@dataclass(frozen=True)
class ShabatSolution:
    """Solved vertex positions for a plane tree.

    black_points and white_points are (position, multiplicity) pairs;
    leaves appear with multiplicity 0.  scale_constant is the c in
    p+1 = c·∏(w-a)^(mult+1); residual is the largest coefficient defect
    of c·(∏black − ∏white) against the constant 2.
    """

    black_points: tuple[tuple[complex, int], ...]
    white_points: tuple[tuple[complex, int], ...]
    scale_constant: complex
    residual: float
    converged: bool
    restarts_used: int = 0

    @property
    def degree(self) -> int:
        return sum(m + 1 for _, m in self.black_points)

    def polynomial(self) -> UniPoly:
        b = UniPoly.from_roots([(a, m + 1) for a, m in self.black_points])
        return b.scale(self.scale_constant).shift_constant(-1)


def solution_to_json(s: ShabatSolution) -> dict:
    def pts(items):
        return [{"re": p.real, "im": p.imag, "mult": m} for p, m in items]

    return {
        "black": pts(s.black_points),
        "white": pts(s.white_points),
        "c": {"re": s.scale_constant.real, "im": s.scale_constant.imag},
        "residual": s.residual,
        "converged": s.converged,
        "degree": s.degree,
    }


def _poly_from_roots_np(positions: np.ndarray, degs: np.ndarray) -> np.ndarray:
    out = np.array([1.0 + 0.0j])
    for pos, deg in zip(positions, degs):
        lin = np.array([-pos, 1.0 + 0.0j])
        for _ in range(int(deg)):
            out = np.convolve(out, lin)
    return out


def _div_linear(p: np.ndarray, a: complex) -> np.ndarray:
    n = len(p) - 1
    q = np.zeros(n, dtype=complex)
    q[n - 1] = p[n]
    for k in range(n - 1, 0, -1):
        q[k - 1] = p[k] + a * q[k]
    return q


def _integrate_poly(p: np.ndarray) -> np.ndarray:
    out = np.zeros(len(p) + 1, dtype=complex)
    out[1:] = p / np.arange(1, len(p) + 1)
    return out


def _dfs_preorder(t: PlaneTree, root: int) -> list[int]:
    order, seen, stack = [], {root}, [root]
    while stack:
        v = stack.pop()
        order.append(v)
        for u in reversed(t.rotation[v]):
            if u not in seen:
                seen.add(u)
                stack.append(u)
    return order


def _radial_layout(t: PlaneTree) -> np.ndarray:
    """Unit-edge radial plane-tree drawing, sectors sized by leaf count.

    Rooted at the highest-degree vertex; each child sits one unit step
    from its parent in the middle of its angular sector, and children
    keep their rotation order.  Unit edges with angular sibling
    separation approximate the geometry the vertex equations settle
    into; drawings that put sibling same-color vertices close together
    feed Newton into the basin where they merge and p degenerates.
    """
    n = t.vertex_count
    root = max(range(n), key=lambda v: (t.degree(v), -v))
    parent: dict[int, int | None] = {root: None}
    order = _dfs_preorder(t, root)
    for v in order:
        for u in t.rotation[v]:
            if u not in parent:
                parent[u] = v
    children = {v: [u for u in t.rotation[v] if parent.get(u) == v] for v in order}
    weight = {v: 1 for v in order}
    for v in reversed(order):
        if children[v]:
            weight[v] = sum(weight[u] for u in children[v])
    pos = np.zeros(n, dtype=complex)

    def assign(v: int, a0: float, a1: float) -> None:
        if parent[v] is not None:
            pos[v] = pos[parent[v]] + cmath.exp(1j * (a0 + a1) / 2)
        a = a0
        for u in children[v]:
            da = (a1 - a0) * weight[u] / weight[v]
            assign(u, a, a + da)
            a += da

    assign(root, 0.0, 2 * math.pi)
    return pos


def _system(
    positions: np.ndarray, black_idx, white_idx, degs
) -> tuple[np.ndarray, np.ndarray, np.ndarray, complex]:
    b = _poly_from_roots_np(positions[black_idx], degs[black_idx])
    w = _poly_from_roots_np(positions[white_idx], degs[white_idx])
    diff = b - w
    return b, w, diff[1:-1], diff[0]


def _min_same_color_gap(positions: np.ndarray, black_idx, white_idx) -> float:
    gap = math.inf
    for idx in (black_idx, white_idx):
        pts = positions[idx]
        for i in range(len(pts)):
            for j in range(i + 1, len(pts)):
                gap = min(gap, abs(pts[i] - pts[j]))
    return gap


def _polish_extended(positions, black_idx, white_idx, degs, free, fixed01) -> np.ndarray:
    """A few Newton steps in extended precision when float64 stalls."""
    with mp.workdps(_POLISH_DPS):
        pos = [mp.mpc(z) for z in positions]
        pos[fixed01[0]] = mp.mpc(0)
        pos[fixed01[1]] = mp.mpc(1)

        def products():
            d = int(degs.sum()) // 2
            b = [mp.mpc(1)] + [mp.mpc(0)] * d
            w = [mp.mpc(1)] + [mp.mpc(0)] * d
            bn = wn = 0
            for v, deg in enumerate(degs):
                target, n = (b, bn) if v in set(int(i) for i in black_idx) else (w, wn)
                for _ in range(int(deg)):
                    for k in range(n + 1, -1, -1):
                        target[k] = (target[k - 1] if k else mp.mpc(0)) - pos[v] * target[k]
                    n += 1
                if v in set(int(i) for i in black_idx):
                    bn = n
                else:
                    wn = n
            return b, w

        d = int(degs.sum()) // 2
        for _ in range(8):
            b, w = products()
            fvec = [b[k] - w[k] for k in range(1, d)]
            jac = mp.zeros(d - 1, len(free))
            for col, v in enumerate(free):
                src = b if v in set(int(i) for i in black_idx) else w
                n = d
                quot = [mp.mpc(0)] * n
                quot[n - 1] = src[n]
                for k in range(n - 1, 0, -1):
                    quot[k - 1] = src[k] + pos[v] * quot[k]
                sign = -1 if v in set(int(i) for i in black_idx) else 1
                for row in range(d - 1):
                    jac[row, col] = sign * degs[v] * quot[row + 1]
            rhs = mp.matrix([-f for f in fvec])
            try:
                delta = mp.lu_solve(jac, rhs)
            except ZeroDivisionError:
                break
            for col, v in enumerate(free):
                pos[v] = pos[v] + delta[col]
        return np.array([complex(z) for z in pos])


def shabat_solve(
    t: PlaneTree,
    tol: float = DEFAULT_TOL,
    max_restarts: int = 32,
    rng_seed: int = 0,
    max_degree: int = DEGREE_GUARD,
    raise_on_failure: bool = True,
    initial_positions: np.ndarray | None = None,
) -> ShabatSolution:
    """Solve for vertex positions giving critical values -1 (black), +1 (white).

    Gauge: the highest-degree black vertex is pinned at 0 and the
    highest-degree white vertex at 1 (ties by lowest vertex id).  The
    unknowns are the internal (degree >= 2) vertex positions plus the
    scale and integration constant of p, built as the antiderivative of
    its critical divisor; leaves are recovered afterwards as the leftover
    roots of p+1 and p-1.  Working on internal vertices only keeps the
    system small and removes the spurious solution branch where the black
    and white products collide coefficient by coefficient.  Damped Newton
    runs per restart; restarts walk the radial tree drawings plain, then
    jittered (keyed by rng_seed), interleaved with gaussian scatters, and
    the first restart index that converges wins.  Same-color vertex collisions are rejected as degenerate basins.
    An extended-precision polish pass runs when double precision stalls
    above tol.

    initial_positions may cover a prefix of the vertex ids (surgeries
    append new vertices); covered vertices start there, the rest are
    placed in a small disc around their first covered neighbor.
    """
    d = t.edge_count
    if d > max_degree:
        raise DegreeGuardError(f"degree {d} exceeds guard {max_degree}")
    if d < 1:
        raise ValueError("tree must have at least one edge")
    nvert = t.vertex_count
    degs = np.array([t.degree(v) for v in range(nvert)], dtype=float)
    black_idx = np.array([v for v in range(nvert) if t.colors[v] == BLACK], dtype=int)
    white_idx = np.array([v for v in range(nvert) if t.colors[v] != BLACK], dtype=int)
    top_black = max(black_idx, key=lambda v: (degs[v], -v))
    top_white = max(white_idx, key=lambda v: (degs[v], -v))
    free = [v for v in range(nvert) if v not in (top_black, top_white)]

    base = _radial_layout(t)
    warm: np.ndarray | None = None
    if initial_positions is not None:
        covered = min(len(initial_positions), nvert)
        warm = np.zeros(nvert, dtype=complex)
        warm[:covered] = initial_positions[:covered]
        for v in range(covered, nvert):
            # Surgeries append vertices, so every new vertex has an already
            # placed neighbor.  Step one unit away from the anchor's other
            # placed neighbors, fanning siblings; this extends the warm
            # layout the same way the radial drawing grows a subtree.
            nbrs = t.rotation[v]
            anchor = next((u for u in nbrs if u < v), nbrs[0])
            placed = [u for u in t.rotation[anchor] if u < v and u != v]
            away = 0.0 + 0.0j
            for u in placed:
                step = warm[anchor] - warm[u]
                if abs(step) > 1e-12:
                    away += step / abs(step)
            sib = sum(1 for u in t.rotation[anchor] if covered <= u < v)
            if abs(away) < 1e-9:
                away = cmath.exp(2j * math.pi * (0.381966 * v % 1.0))
            away /= abs(away)
            warm[v] = warm[anchor] + away * cmath.exp(0.5j * sib)

    def finish(positions: np.ndarray, restart: int) -> ShabatSolution | None:
        b, w, fvec, d0 = _system(positions, black_idx, white_idx, degs)
        if abs(d0) < 1e-14:
            return None
        c = 2.0 / d0
        residual = float(abs(c) * np.max(np.abs(fvec))) if len(fvec) else 0.0
        if residual > 1e-2:
            # Too far for the polish pass to contract; typically a stalled
            # basin where two same-color vertices merged.
            return None
        if residual > tol:
            positions = _polish_extended(
                positions, black_idx, white_idx, degs, free, (top_black, top_white)
            )
            b, w, fvec, d0 = _system(positions, black_idx, white_idx, degs)
            if abs(d0) < 1e-14:
                return None
            c = 2.0 / d0
            residual = float(abs(c) * np.max(np.abs(fvec))) if len(fvec) else 0.0
        if residual > tol:
            return None
        if _min_same_color_gap(positions, black_idx, white_idx) < _MIN_SEPARATION:
            return None
        blacks = tuple(
            (complex(positions[v]), int(degs[v]) - 1) for v in black_idx
        )
        whites = tuple(
            (complex(positions[v]), int(degs[v]) - 1) for v in white_idx
        )
        return ShabatSolution(
            black_points=blacks,
            white_points=whites,
            scale_constant=complex(c),
            residual=residual,
            converged=True,
            restarts_used=restart,
        )

    internals = [v for v in range(nvert) if degs[v] >= 2]
    if len(internals) <= 1:
        # Single edge or a star: p is an explicit power map, re-gauged so
        # the pinned black and white vertices land at 0 and 1.
        positions = np.zeros(nvert, dtype=complex)
        if d == 1:
            positions[top_white] = 1.0
        else:
            center = internals[0]
            leaves = [v for v in range(nvert) if v != center]
            for k, v in enumerate(leaves):
                positions[v] = cmath.exp(2j * math.pi * k / d)
            span = positions[top_white] - positions[top_black]
            positions = (positions - positions[top_black]) / span
        sol = finish(positions, 0)
        if sol is None:
            raise NoConvergenceError(f"degenerate star solve (degree {d})")
        return sol

    idx_of = {v: i for i, v in enumerate(internals)}
    int_degs = degs[internals].astype(int)
    int_free = [v for v in internals if v not in (top_black, top_white)]
    free_cols = [idx_of[v] for v in int_free]
    targets = np.array(
        [-1.0 if t.colors[v] == BLACK else 1.0 for v in internals], dtype=complex
    )
    black_int = [v for v in internals if t.colors[v] == BLACK]
    white_int = [v for v in internals if t.colors[v] != BLACK]
    black_leaf_ids = [int(v) for v in black_idx if degs[v] < 2]
    white_leaf_ids = [int(v) for v in white_idx if degs[v] < 2]

    def p_parts(q: np.ndarray):
        prod = _poly_from_roots_np(q, int_degs - 1)
        S = _integrate_poly(prod)
        return prod, S, _polyval_arr(S, q)

    pin_rows = [idx_of[top_black], idx_of[top_white]]

    def fit_ck(s_vals: np.ndarray) -> tuple[complex, complex]:
        # Fit through the two pinned vertices exactly; a least-squares fit
        # over all vertices tends to start c near zero, and Newton then
        # creeps down the flat c -> 0 valley instead of converging.
        a, b = s_vals[pin_rows[0]], s_vals[pin_rows[1]]
        if abs(b - a) > 1e-9:
            c = (targets[pin_rows[1]] - targets[pin_rows[0]]) / (b - a)
            return complex(c), complex(targets[pin_rows[0]] - c * a)
        A = np.stack([s_vals, np.ones_like(s_vals)], axis=1)
        (c, K), *_ = np.linalg.lstsq(A, targets, rcond=None)
        return complex(c), complex(K)

    def assemble(q: np.ndarray, c: complex, K: complex) -> np.ndarray:
        # Leaves are the leftover roots of p+1 and p-1 after dividing out
        # the internal vertices with their multiplicities.
        prod, S, _ = p_parts(q)
        P = c * S
        P[0] += K
        positions = np.zeros(nvert, dtype=complex)
        for v in internals:
            positions[v] = q[idx_of[v]]
        for shift, int_ids, leaf_ids in (
            (1.0, black_int, black_leaf_ids),
            (-1.0, white_int, white_leaf_ids),
        ):
            quot = P.copy()
            quot[0] += shift
            for v in int_ids:
                for _ in range(int(degs[v])):
                    quot = _div_linear(quot, q[idx_of[v]])
            if leaf_ids:
                roots = np.roots(quot[::-1])
                roots = _aberth_refine(quot, roots)
                roots = sorted(roots, key=lambda z: (round(z.real, 9), z.imag))
                for v, z in zip(leaf_ids, roots):
                    positions[v] = z
        return positions

    layouts: list[np.ndarray] = [base] if warm is None else [warm, base]
    n_lay = len(layouts)
    best_state: tuple[float, np.ndarray, complex, complex, int] | None = None
    for restart in range(max_restarts):
        if restart < n_lay or restart % 2 == 0:
            # Layout starts: warm continuation and the radial drawing
            # plain first, then jittered copies on even restarts.  The
            # drawing separates sibling vertices angularly, which is where
            # the true basins live.
            if restart < n_lay:
                pos = layouts[restart].copy()
            else:
                k = (restart - n_lay) // 2
                pos = layouts[k % n_lay].copy()
                rng = np.random.default_rng([rng_seed, restart])
                jit = 0.08 * (1 + k // n_lay)
                pos = pos + jit * (
                    rng.normal(size=nvert) + 1j * rng.normal(size=nvert)
                )
            span = pos[top_white] - pos[top_black]
            if abs(span) < 1e-9:
                continue
            pos = (pos - pos[top_black]) / span
            q = pos[internals].astype(complex)
        else:
            # Plain gaussian scatter for basins the drawings miss.
            rng = np.random.default_rng([rng_seed, restart])
            spread = 1.0 + 0.25 * (restart % 4)
            q = rng.normal(scale=spread, size=len(internals)) + 1j * rng.normal(
                scale=spread, size=len(internals)
            )
        q[idx_of[top_black]] = 0.0
        q[idx_of[top_white]] = 1.0

        prod, S, s_vals = p_parts(q)
        c, K = fit_ck(s_vals)
        ok = True
        for _ in range(_NEWTON_ITERS):
            fvec = c * s_vals + K - targets
            fnorm = float(np.linalg.norm(fvec))
            if fnorm < 1e-13:
                break
            jac = np.zeros((len(internals), len(int_free) + 2), dtype=complex)
            for col, i in enumerate(free_cols):
                quot = _div_linear(prod, q[i])
                iq = _integrate_poly(quot)
                jac[:, col] = -c * (int_degs[i] - 1) * _polyval_arr(iq, q)
            jac[:, -2] = s_vals
            jac[:, -1] = 1.0
            try:
                delta = np.linalg.solve(jac, -fvec)
            except np.linalg.LinAlgError:
                delta, *_ = np.linalg.lstsq(jac, -fvec, rcond=None)
            if not np.all(np.isfinite(delta)):
                ok = False
                break
            lam, accepted = 1.0, False
            while lam >= 1 / 4096:
                q_t = q.copy()
                q_t[free_cols] = q[free_cols] + lam * delta[:-2]
                c_t = c + lam * delta[-2]
                K_t = K + lam * delta[-1]
                prod_t, S_t, s_t = p_parts(q_t)
                tnorm = float(np.linalg.norm(c_t * s_t + K_t - targets))
                if tnorm <= (1 - 1e-4 * lam) * fnorm:
                    q, c, K = q_t, c_t, K_t
                    prod, S, s_vals = prod_t, S_t, s_t
                    accepted = True
                    break
                lam /= 2
            if not accepted:
                break
        if not ok:
            continue
        fnorm = float(np.linalg.norm(c * s_vals + K - targets))
        if best_state is None or fnorm < best_state[0]:
            best_state = (fnorm, q.copy(), c, K, restart)
        # Stalled-but-close states are still worth finishing: the polish
        # pass inside finish() converges them, while pseudo-solutions (a
        # cluster of critical points where p is flat, so the vertex
        # equations hold to 1e-14 without p being Shabat) fail its
        # coefficient residual no matter how small fnorm is.
        if fnorm > 1e-6 or abs(c) < 1e-12:
            continue
        sol = finish(assemble(q, c, K), restart)
        if sol is not None:
            return sol
    if not raise_on_failure:
        if best_state is not None:
            _, q, c, K, restart = best_state
            try:
                positions = assemble(q, c, K)
            except (ValueError, np.linalg.LinAlgError):
                positions = np.zeros(nvert, dtype=complex)
                for v in internals:
                    positions[v] = q[idx_of[v]]
        else:
            restart = 0
            span = base[top_white] - base[top_black]
            positions = (base - base[top_black]) / span
        _, _, fvec, d0 = _system(positions, black_idx, white_idx, degs)
        if abs(d0) > 1e-14:
            scale = complex(2.0 / d0)
            res = float(abs(scale) * np.max(np.abs(fvec))) if len(fvec) else 0.0
        else:
            scale = 0j
            res = math.inf
        return ShabatSolution(
            black_points=tuple(
                (complex(positions[v]), int(degs[v]) - 1) for v in black_idx
            ),
            white_points=tuple(
                (complex(positions[v]), int(degs[v]) - 1) for v in white_idx
            ),
            scale_constant=scale,
            residual=res,
            converged=False,
            restarts_used=restart,
        )
    raise NoConvergenceError(
        f"no convergence after {max_restarts} restarts (degree {d})"
    )


def tree_for_derivation(seed: SeedSpec, word: Word) -> PlaneTree:
    """Tree realizing the profile a word derives from a seed.

    Two-letter seeds replay the word as tree surgeries; five-letter seeds
    have profile-level rewrites only, so the final profile is realized
    directly.
    """
    if uses_t2(seed):
        return realize_profile(trajectory(seed, word)[-1].profile)
    return derive_tree(seed, word)


def _positions_by_vertex(t: PlaneTree, sol: ShabatSolution) -> np.ndarray:
    pos = np.zeros(t.vertex_count, dtype=complex)
    blacks = iter(sol.black_points)
    whites = iter(sol.white_points)
    for v in range(t.vertex_count):
        z, _ = next(blacks) if t.colors[v] == BLACK else next(whites)
        pos[v] = z
    return pos


def shabat_for_derivation(seed: SeedSpec, word: Word, **kwargs) -> ShabatSolution:
    """Solve the tree a word derives, warm-starting along the word.

    Two-letter words grow the tree by local surgeries, so each prefix is
    solved from the previous prefix's vertex positions; the final degree
    still honours max_degree but intermediate prefixes are exempt.
    """
    if uses_t2(seed) or not word:
        return shabat_solve(tree_for_derivation(seed, word), **kwargs)
    guard = int(kwargs.get("max_degree", DEGREE_GUARD))
    final = derive_tree(seed, word)
    if final.edge_count > guard:
        raise DegreeGuardError(
            f"degree {final.edge_count} exceeds guard {guard}"
        )
    warm = kwargs.pop("initial_positions", None)
    sol = None
    for cut in range(0, len(word) + 1):
        tree = derive_tree(seed, word[:cut])
        sol = shabat_solve(tree, **kwargs, initial_positions=warm)
        warm = _positions_by_vertex(tree, sol)
    return sol


@dataclass(frozen=True)
class CensusEntry:
    value: complex
    multiplicity: int
    count: int


@dataclass(frozen=True)
class CriticalCensus:
    """Entries aggregate by (value, multiplicity); points keep the cluster
    centers as (position, value, multiplicity) for downstream pairing."""

    entries: tuple[CensusEntry, ...]
    reliable: bool
    notes: tuple[str, ...] = field(default=())
    points: tuple[tuple[complex, complex, int], ...] = field(default=())

    def total(self) -> int:
        return sum(e.multiplicity * e.count for e in self.entries)

    def count_at(self, value: complex, tol: float = 1e-6) -> int:
        return sum(e.count for e in self.entries if abs(e.value - value) <= tol)


def _polyval_arr(c: np.ndarray, z: np.ndarray) -> np.ndarray:
    r = np.full_like(z, c[-1])
    for k in range(len(c) - 2, -1, -1):
        r = r * z + c[k]
    return r


def _aberth_refine(c: np.ndarray, roots: np.ndarray, iters: int = 30) -> np.ndarray:
    if len(roots) == 0:
        return roots
    dc = np.array([k * c[k] for k in range(1, len(c))], dtype=complex)
    z = roots.astype(complex).copy()
    best = z.copy()
    best_err = np.max(np.abs(_polyval_arr(c, z)))
    for _ in range(iters):
        f = _polyval_arr(c, z)
        fp = _polyval_arr(dc, z) if len(dc) else np.ones_like(z)
        fp = np.where(np.abs(fp) < 1e-300, 1e-300, fp)
        newton = f / fp
        diff = z[:, None] - z[None, :]
        np.fill_diagonal(diff, np.inf)
        with np.errstate(divide="ignore", invalid="ignore"):
            repel = np.sum(1.0 / diff, axis=1)
            repel = np.where(np.isfinite(repel), repel, 0.0)
            denom = 1.0 - newton * repel
            step = np.where(np.abs(denom) > 1e-12, newton / denom, newton)
            step = np.where(np.isfinite(step), step, 0.0)
        mag = np.abs(step)
        step = np.where(mag > 0.5, step * (0.5 / np.maximum(mag, 1e-300)), step)
        z = z - step
        err = np.max(np.abs(_polyval_arr(c, z)))
        if err < best_err:
            best, best_err = z.copy(), err
    return best


def _single_linkage(points: np.ndarray, tol: float) -> list[list[int]]:
    n = len(points)
    parent = list(range(n))

    def find(a: int) -> int:
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for i in range(n):
        for j in range(i + 1, n):
            if abs(points[i] - points[j]) <= tol:
                ri, rj = find(i), find(j)
                if ri != rj:
                    parent[ri] = rj
    groups: dict[int, list[int]] = {}
    for i in range(n):
        groups.setdefault(find(i), []).append(i)
    return list(groups.values())


def critical_census_uni(
    p: UniPoly, cluster_tol: float = DEFAULT_CLUSTER_TOL
) -> CriticalCensus:
    """Census of p's critical points grouped by value and multiplicity.

    Roots of p' come from the companion matrix and are polished by Aberth
    iteration; roots within cluster_tol merge into one critical point whose
    multiplicity is the cluster size.  Clusters whose separation or spread
    is marginal at cluster_tol mark the census unreliable rather than
    failing.  Multiplicities above ~3 in double precision need a looser
    cluster_tol because the root cluster radius scales like eps^(1/mult).
    """
    if p.degree < 1:
        raise ValueError("census needs degree >= 1")
    dp = p.derivative().as_complex_array()
    if len(dp) == 1:
        return CriticalCensus(entries=(), reliable=True)
    roots = np.roots(dp[::-1])
    roots = _aberth_refine(dp, roots)

    notes: list[str] = []
    reliable = True
    clusters = _single_linkage(roots, cluster_tol)
    centers = np.array([np.mean(roots[idx]) for idx in clusters])
    mults = [len(idx) for idx in clusters]
    for idx, center in zip(clusters, centers):
        spread = max(abs(roots[i] - center) for i in idx)
        if spread > cluster_tol:
            reliable = False
            notes.append(f"chained root cluster of spread {spread:.2e}")
    for i in range(len(centers)):
        for j in range(i + 1, len(centers)):
            if abs(centers[i] - centers[j]) < 10 * cluster_tol:
                reliable = False
                notes.append("root clusters closer than 10x cluster_tol")

    values = np.array([complex(p(z)) for z in centers])
    vclusters = _single_linkage(values, cluster_tol)
    entries: list[CensusEntry] = []
    points: list[tuple[complex, complex, int]] = []
    for vidx in vclusters:
        vcenter = complex(np.mean(values[vidx]))
        vspread = max(abs(values[i] - vcenter) for i in vidx)
        if vspread > cluster_tol:
            reliable = False
            notes.append(f"chained value cluster of spread {vspread:.2e}")
        by_mult: dict[int, int] = {}
        for i in vidx:
            by_mult[mults[i]] = by_mult.get(mults[i], 0) + 1
            points.append((complex(centers[i]), vcenter, mults[i]))
        for m, count in sorted(by_mult.items()):
            entries.append(CensusEntry(value=vcenter, multiplicity=m, count=count))
    entries.sort(key=lambda e: (e.value.real, e.value.imag, e.multiplicity))
    points.sort(key=lambda t: (t[0].real, t[0].imag))
    return CriticalCensus(
        entries=tuple(entries),
        reliable=reliable,
        notes=tuple(dict.fromkeys(notes)),
        points=tuple(points),
    )


def census_matches_profile(
    census: CriticalCensus, profile: CriticalProfile, value_tol: float = 1e-6
) -> bool:
    """True iff the census is exactly the profile's ±1 critical structure."""
    expected: dict[tuple[int, int], int] = {}
    for m, count in profile.black_counter().items():
        expected[(-1, m)] = count
    for m, count in profile.white_counter().items():
        expected[(1, m)] = count
    seen: dict[tuple[int, int], int] = {}
    for e in census.entries:
        if abs(e.value.imag) > value_tol:
            return False
        if abs(e.value.real + 1) <= value_tol:
            key = (-1, e.multiplicity)
        elif abs(e.value.real - 1) <= value_tol:
            key = (1, e.multiplicity)
        else:
            return False
        seen[key] = seen.get(key, 0) + e.count
    return seen == expected


def census_to_json(census: CriticalCensus) -> dict:
    return {
        "entries": [
            {
                "value": {"re": e.value.real, "im": e.value.imag},
                "multiplicity": e.multiplicity,
                "count": e.count,
            }
            for e in census.entries
        ],
        "reliable": census.reliable,
        "notes": list(census.notes),
    }
