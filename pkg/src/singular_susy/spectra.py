"""Discrete spectra of H by secular-determinant matching.

The general energy-E solution on the interval is a 4-coefficient vector
(A+, B+, A-, B-) over the sector basis; the singularity condition at x = +0
and the wall condition at x = l give four linear constraints.  Eigenvalues
sit where the 4x4 secular matrix drops rank.  The row-normalized
determinant is a fixed phase times a real function of the spectral
parameter (self-adjointness), so simple roots are bracketed by sign
changes of the de-phased samples and bisected, while even-order roots are
caught as dips of the magnitude and refined by golden section; the null
space of the column-rescaled matrix then yields the eigenstates and the
multiplicity.  On the line the matching matrix is 2x2 and its determinant
is an exact quadratic in kappa, solved directly.

A scalar bisection oracle for decoupled (diagonal) systems lives here too,
so the matrix solver can be validated against an independent method.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .errors import GeometryMismatchError
from .system import (
    SystemSpec,
    WaveFunction,
    boundary_data,
    connection_residual,
    l2_norm,
    normalize,
    wall_residual,
    wf_inner,
)

_ACCEPT = 1e-10  # normalized |det| below this counts as a rank drop
_NULL_TOL = 1e-8  # singular values of the rescaled matrix below this are null
_XTOL = 1e-13
_INVPHI = (np.sqrt(5.0) - 1.0) / 2.0


@dataclass(frozen=True)
class Level:
    """One discrete level: energy, sector, k or kappa, and its eigenstates."""

    energy: float
    sector: str
    wavenumber: float
    multiplicity: int
    states: tuple

    def __post_init__(self):
        object.__setattr__(self, "states", tuple(self.states))


@dataclass(frozen=True)
class Spectrum:
    levels: tuple
    scan_window: tuple
    solver_report: dict

    def __post_init__(self):
        object.__setattr__(self, "levels", tuple(self.levels))

    @property
    def ground(self) -> Level | None:
        return self.levels[0] if self.levels else None

    @property
    def energies(self) -> list:
        return [lv.energy for lv in self.levels]


def _template(spec: SystemSpec, sector: str, q: float) -> WaveFunction:
    # coeffs = I puts basis function j alone into component j, so boundary
    # data of this state lists the per-basis endpoint values directly.
    return WaveFunction(spec.geometry, sector, q, np.eye(2), spec.lam)


def _interval_matrix(
    spec: SystemSpec, sector: str, q: float, magnitudes: bool = False
) -> np.ndarray:
    # magnitudes=True sums |term| instead of term: a cancellation-free size
    # reference for deciding when a column of the true matrix has vanished.
    wf = _template(spec, sector, q)
    eye = np.eye(2, dtype=complex)
    m = np.zeros((4, 4), dtype=complex)
    for mat, b, row in (
        (spec.U, boundary_data(wf, "origin"), 0),
        (spec.Dl, boundary_data(wf, "wall"), 2),
    ):
        vals = np.array(
            [[b.psi[0], b.psi[1], 0, 0], [0, 0, b.psi[0], b.psi[1]]], dtype=complex
        )
        ders = np.array(
            [[b.dpsi[0], b.dpsi[1], 0, 0], [0, 0, b.dpsi[0], b.dpsi[1]]], dtype=complex
        )
        if magnitudes:
            m[row : row + 2] = np.abs(mat - eye) @ np.abs(vals) + spec.L0 * np.abs(
                mat + eye
            ) @ np.abs(ders)
        else:
            m[row : row + 2] = (mat - eye) @ vals + 1j * spec.L0 * (mat + eye) @ ders
    return m


def secular_matrix(spec: SystemSpec, energy: float) -> np.ndarray:
    """4x4 matrix of the matching conditions at the given energy.

    Rows are the two connection conditions followed by the two wall
    conditions; columns multiply the coefficients (A+, B+, A-, B-).
    """
    if not spec.geometry.is_interval:
        raise GeometryMismatchError("the secular matrix is an interval construction")
    if energy > 0:
        sector, q = "positive", np.sqrt(energy) / spec.lam
    elif energy == 0:
        sector, q = "zero", 0.0
    else:
        sector, q = "negative", np.sqrt(-energy) / spec.lam
    return _interval_matrix(spec, sector, q)


def _line_matrix(spec: SystemSpec, kappa: float, magnitudes: bool = False) -> np.ndarray:
    eye = np.eye(2, dtype=complex)
    if magnitudes:
        return np.abs(spec.U - eye) + kappa * spec.L0 * np.abs(spec.U + eye)
    return (spec.U - eye) - 1j * kappa * spec.L0 * (spec.U + eye)


def _scaled_for_nullity(m: np.ndarray, scale_m: np.ndarray):
    """Column-rescale m against its cancellation-free magnitude matrix.

    A column whose entries all cancel is a genuine null direction, and at a
    degenerate root every column can cancel at once, so thresholds relative
    to the largest surviving column are wrong in both directions.  The
    magnitude matrix never cancels (a zero column there would need a common
    zero row in both boundary matrices), so it fixes the absolute size:
    vanished columns are frozen at that size, and the rescaled matrix has
    O(1) entries wherever content survives.
    """
    big = float(np.max(np.linalg.norm(scale_m, axis=0)))
    norms = np.linalg.norm(m, axis=0)
    norms = np.where(norms > 1e-12 * big, norms, big)
    return m / norms, norms


def _row_normalized_det(m: np.ndarray) -> complex:
    """det of the row-normalized matrix; the scan hunts its zeros.

    Row normalization keeps the value scale-free without hiding roots:
    boundary rows never vanish (that would need a common zero row in both
    M - I and M + I), while a whole column can vanish at a root when a
    component decouples, which is why column scaling is unusable here.

    Self-adjointness of the boundary conditions makes this determinant a
    fixed phase times a real function of the spectral parameter, which is
    what lets the scan bracket simple roots by sign changes.
    """
    norms = np.linalg.norm(m, axis=1)
    if np.any(norms == 0.0):
        return 0.0j
    return complex(np.linalg.det(m / norms[:, None]))


def _det_objective(m: np.ndarray) -> float:
    return abs(_row_normalized_det(m))


def _golden_min(f, a: float, b: float, xtol: float):
    """Derivative-free minimizer; the objective is V-shaped at simple roots."""
    c = b - _INVPHI * (b - a)
    d = a + _INVPHI * (b - a)
    fc, fd = f(c), f(d)
    best = (c, fc) if fc <= fd else (d, fd)
    for _ in range(200):
        if b - a <= xtol:
            break
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - _INVPHI * (b - a)
            fc = f(c)
            if fc < best[1]:
                best = (c, fc)
        else:
            a, c, fc = c, d, fd
            d = a + _INVPHI * (b - a)
            fd = f(d)
            if fd < best[1]:
                best = (d, fd)
    return best


def _bisect_root(g, a: float, b: float, ga: float, xtol: float) -> float:
    """Bisect a sign change of the real secular value g on [a, b]."""
    for _ in range(200):
        if b - a <= xtol:
            break
        mid = 0.5 * (a + b)
        gm = g(mid)
        if gm == 0.0:
            return mid
        if (ga < 0.0) != (gm < 0.0):
            b = mid
        else:
            a, ga = mid, gm
    return 0.5 * (a + b)


def _scan_roots(d, grid: np.ndarray, floor: float):
    """Locate zeros of the complex-valued secular function d over the grid.

    The samples are de-phased against the largest one, leaving a real
    function g.  Sign changes of g bracket simple roots for bisection,
    which cannot lose one of two nearby roots the way dip-hunting on |g|
    can.  Strict interior minima of |g| remain the route to roots of even
    order, refined by golden section; each such root gets a fine subscan
    of its bracket afterwards, since a pair of simple roots inside one
    grid cell also leaves no sign change at the cell ends.
    """
    vals = np.array([d(q) for q in grid])
    mags = np.abs(vals)
    top = float(mags.max())
    if top == 0.0:
        return [], 0
    ref = np.conj(vals[int(np.argmax(mags))]) / top

    def greal(q):
        return float(np.real(d(q) * ref))

    def fabs(q):
        return abs(d(q))

    g = np.real(vals * ref)
    n = len(grid)
    found = []
    brackets = 0

    def hunt_sign_changes(qs, gs):
        nonlocal brackets
        for i in range(len(qs) - 1):
            if gs[i] == 0.0 or gs[i + 1] == 0.0:
                continue
            if (gs[i] < 0.0) != (gs[i + 1] < 0.0):
                brackets += 1
                q = _bisect_root(greal, qs[i], qs[i + 1], gs[i], _XTOL)
                fq = fabs(q)
                if fq < _ACCEPT and q > floor:
                    found.append((q, fq))

    hunt_sign_changes(grid, g)

    # an edge sample is never refined: next to q = 0 a zero mode's tail
    # already makes |g| tiny without any root inside the grid
    for i in range(1, n - 1):
        if not (mags[i] < mags[i - 1] and mags[i] < mags[i + 1]):
            continue
        brackets += 1
        a = grid[i - 1]
        b = grid[i + 1]
        q, fq = _golden_min(fabs, a, b, _XTOL)
        if fq < _ACCEPT and q > floor:
            found.append((q, fq))
            # the dip may hide a twin root on either side of q
            eps = 1e-11 * max(1.0, q)
            for lo, hi in ((a, q - eps), (q + eps, b)):
                if hi <= lo:
                    continue
                qs = np.linspace(lo, hi, 65)
                hunt_sign_changes(qs, np.array([greal(x) for x in qs]))

    found.sort()
    merged = []
    for q, fq in found:
        if merged and abs(q - merged[-1][0]) < 1e-9 * max(1.0, q):
            if fq < merged[-1][1]:
                merged[-1] = (q, fq)
        else:
            merged.append((q, fq))
    return [q for q, _ in merged], brackets


def _phase_fixed_state(wf: WaveFunction) -> WaveFunction:
    flat = wf.coeffs.ravel()
    i = int(np.argmax(np.abs(flat)))
    phase = flat[i] / abs(flat[i])
    return replace(wf, coeffs=wf.coeffs / phase)


def _orthonormalized(states: list) -> list:
    out = []
    for wf in states:
        for prev in out:
            wf = replace(wf, coeffs=wf.coeffs - wf_inner(prev, wf) * prev.coeffs)
        if l2_norm(wf) > 1e-8:
            out.append(_phase_fixed_state(normalize(wf)))
    return out


def _null_states(spec: SystemSpec, m: np.ndarray, scale_m: np.ndarray, build) -> list:
    meq, colnorms = _scaled_for_nullity(m, scale_m)
    _, s, vh = np.linalg.svd(meq)
    # absolute count: kept columns have unit norm, so s[0] is O(1) unless the
    # whole matrix vanished, in which case every direction really is null
    nullity = int(np.sum(s < _NULL_TOL)) or 1
    states = []
    for j in range(len(s) - nullity, len(s)):
        wf = build(np.conj(vh[j]) / colnorms)
        bd = boundary_data(wf, "origin")
        if connection_residual(spec, bd) > 1e-8:
            continue
        if spec.geometry.is_interval:
            if wall_residual(spec, boundary_data(wf, "wall")) > 1e-8:
                continue
        states.append(normalize(wf))
    return _orthonormalized(states)


def _interval_level(spec: SystemSpec, sector: str, q: float) -> Level | None:
    states = _null_states(
        spec,
        _interval_matrix(spec, sector, q),
        _interval_matrix(spec, sector, q, magnitudes=True),
        lambda v: WaveFunction(spec.geometry, sector, q, v.reshape(2, 2), spec.lam),
    )
    if not states:
        return None
    return Level(states[0].energy, sector, q, len(states), tuple(states))


def _kappa_window(spec: SystemSpec) -> float:
    """Bound-state wavenumbers scale with inverse Robin lengths of the
    boundary eigenphases; cover 4x the largest, plus an interval margin."""
    l = spec.geometry.l if spec.geometry.is_interval else spec.L0
    scales = [l]
    mats = [spec.U] + ([spec.Dl] if spec.Dl is not None else [])
    for mat in mats:
        for w in np.linalg.eigvals(mat):
            phi = np.angle(w) % (2.0 * np.pi)
            if phi > 1e-9 and abs(phi - np.pi) > 1e-9:
                val = abs(spec.L0 / np.tan(phi / 2.0))
                if np.isfinite(val) and val > 1e-12:
                    scales.append(val)
    window = 4.0 / min(scales) + 2.0 / l
    return min(window, 300.0 / l)  # keep cosh(kappa l) and its square finite


def solve_interval_spectrum(
    spec: SystemSpec, n_levels: int = 10, k_step: float | None = None
) -> Spectrum:
    """Lowest discrete levels of the interval system, all sectors.

    Scans the negative sector over a kappa window sized from the boundary
    Robin lengths, tests E = 0 exactly on the polynomial basis, and walks a
    k grid (step <= pi/(8 l)) for positive levels, extending the window
    geometrically until n_levels levels exist or the budget runs out (the
    latter is flagged in solver_report["window_exhausted"]).
    """
    if not spec.geometry.is_interval:
        raise GeometryMismatchError("use solve_line_bound_states on the line")
    if n_levels < 1:
        raise ValueError("n_levels must be at least 1")
    l = spec.geometry.l
    step = k_step if k_step is not None else np.pi / (8.0 * l)
    floor = 1e-7 / l
    report = {
        "bracket_count": 0,
        "refinement_tolerance": _XTOL,
        "nullity_method": "scaled-svd",
        "window_exhausted": False,
        "window_extensions": 0,
    }
    levels = []

    def d_neg(q):
        return _row_normalized_det(_interval_matrix(spec, "negative", q))

    kappa_max = _kappa_window(spec)
    for attempt in range(2):
        kstep_n = min(step, kappa_max / 256.0)
        grid = np.unique(
            np.concatenate(
                [
                    np.geomspace(kstep_n * 1e-4, kstep_n, 16),
                    np.arange(0.25 * kstep_n, kappa_max, kstep_n),
                ]
            )
        )
        roots, nb = _scan_roots(d_neg, grid, floor)
        report["bracket_count"] += nb
        # a root hugging the window edge means the window was too small
        if roots and attempt == 0 and max(roots) > kappa_max - 2.0 * kstep_n:
            kappa_max *= 2.0
            continue
        break
    for q in roots:
        lv = _interval_level(spec, "negative", q)
        if lv is not None:
            levels.append(lv)

    if _det_objective(_interval_matrix(spec, "zero", 0.0)) < _ACCEPT:
        lv = _interval_level(spec, "zero", 0.0)
        if lv is not None:
            levels.append(lv)

    def d_pos(q):
        return _row_normalized_det(_interval_matrix(spec, "positive", q))

    base_count = len(levels)
    k_max = (n_levels + 2) * np.pi / l
    for extension in range(7):
        grid = np.unique(
            np.concatenate(
                [
                    np.geomspace(step * 1e-4, 0.25 * step, 12),
                    np.arange(0.25 * step, k_max + 2.0 * step, step),
                ]
            )
        )
        roots, nb = _scan_roots(d_pos, grid, floor)
        report["bracket_count"] += nb
        pos_levels = []
        for q in roots:
            lv = _interval_level(spec, "positive", q)
            if lv is not None:
                pos_levels.append(lv)
        if base_count + len(pos_levels) >= n_levels or extension == 6:
            report["window_exhausted"] = base_count + len(pos_levels) < n_levels
            report["window_extensions"] = extension
            break
        k_max *= 1.6
    levels.extend(pos_levels)
    levels.sort(key=lambda lv: lv.energy)
    window = (-((spec.lam * kappa_max) ** 2), (spec.lam * k_max) ** 2)
    return Spectrum(tuple(levels), window, report)


def solve_line_bound_states(spec: SystemSpec) -> Spectrum:
    """All bound states on the line: decaying solutions e^{-kappa x}.

    The matching matrix M(kappa) = (U - I) - i kappa L0 (U + I) is 2x2, so
    det M is an exact quadratic in kappa; its positive real roots are the
    only candidates and are computed in closed form.  A scan cannot replace
    this: for diagonal U the matrix is diagonal and a root collapses a row
    and a column at once, leaving no finite-width dip in any scaled residual.

    A repeated root is taken as -c1/(2 c2) directly, since the quadratic
    formula only locates it to sqrt(eps).  Eigenphases within about 1e-6 of
    pi would put the root beyond the kappa cap and act as Dirichlet: no
    bound state.
    """
    if spec.geometry.is_interval:
        raise GeometryMismatchError("use solve_interval_spectrum on an interval")
    eye = np.eye(2, dtype=complex)
    a = spec.U - eye
    b = spec.U + eye
    adj_a = np.trace(a) * eye - a
    c2 = -spec.L0**2 * complex(np.linalg.det(b))
    c1 = -1j * spec.L0 * complex(np.trace(adj_a @ b))
    c0 = complex(np.linalg.det(a))
    big = max(abs(c2), abs(c1), abs(c0))
    candidates = []
    if abs(c2) > 1e-14 * big:
        disc = c1 * c1 - 4.0 * c2 * c0
        mag = max(abs(c1) ** 2, 4.0 * abs(c2 * c0))
        if mag == 0.0:
            pass  # double root at zero: no bound state
        elif abs(disc) <= 1e-14 * mag:
            candidates = [-c1 / (2.0 * c2)]
        else:
            sq = np.sqrt(disc)
            u = -0.5 * (c1 + sq) if abs(c1 + sq) >= abs(c1 - sq) else -0.5 * (c1 - sq)
            candidates = [u / c2, c0 / u]  # stable pairing avoids cancellation
    elif abs(c1) > 1e-14 * big:
        candidates = [-c0 / c1]
    floor = 1e-9 / spec.L0
    cap = 1e6 / spec.L0
    roots = []
    for r in candidates:
        scale = max(abs(r), 1.0 / spec.L0)
        if abs(r.imag) <= 1e-9 * scale and floor < r.real < cap:
            q = float(r.real)
            if all(abs(q - prev) > 1e-9 * max(1.0, q) for prev in roots):
                roots.append(q)
    roots.sort()
    levels = []
    for q in roots:
        states = _null_states(
            spec,
            _line_matrix(spec, q),
            _line_matrix(spec, q, magnitudes=True),
            lambda v, q=q: WaveFunction(
                spec.geometry,
                "negative",
                q,
                np.array([[v[0], 0.0], [v[1], 0.0]]),
                spec.lam,
            ),
        )
        if states:
            levels.append(Level(states[0].energy, "negative", q, len(states), tuple(states)))
    levels.sort(key=lambda lv: lv.energy)
    kappa_max = max(roots, default=0.0) + 1.0 / spec.L0
    report = {
        "candidate_count": len(roots),
        "root_method": "quadratic-determinant",
        "nullity_method": "scaled-svd",
        "window_exhausted": False,
        "window_extensions": 0,
    }
    return Spectrum(tuple(levels), (-((spec.lam * kappa_max) ** 2), 0.0), report)


@dataclass(frozen=True)
class DecoupledRoots:
    """Oracle output for one scalar component of a diagonal system."""

    k: tuple
    kappa: tuple
    zero_mode: bool


def _robin_functional(L):
    # L encoding: None or +-inf -> Neumann; 0 -> Dirichlet; else psi + L psi'
    if L is None or np.isinf(L):
        return lambda v, d: d
    return lambda v, d: v + L * d


def _bisect(g, a: float, b: float, tol: float = 1e-12) -> float:
    ga, gb = g(a), g(b)
    if ga == 0.0:
        return a
    if gb == 0.0:
        return b
    while b - a > tol:
        mid = 0.5 * (a + b)
        gm = g(mid)
        if gm == 0.0:
            return mid
        if (ga < 0) != (gm < 0):
            b, gb = mid, gm
        else:
            a, ga = mid, gm
    return 0.5 * (a + b)


def _sign_change_roots(g, grid: np.ndarray, floor: float) -> list:
    vals = np.array([g(q) for q in grid])
    roots = []
    for i in range(len(grid) - 1):
        if vals[i] == 0.0:
            if grid[i] > floor:
                roots.append(grid[i])
        elif (vals[i] < 0) != (vals[i + 1] < 0):
            r = _bisect(g, grid[i], grid[i + 1])
            if r > floor:
                roots.append(r)
    return roots


def oracle_decoupled_roots(
    L_left, L_right, l: float, n_levels: int = 10
) -> DecoupledRoots:
    """Independent eigenvalue oracle for one decoupled component.

    The component obeys psi + L psi' = 0 at both ends (L encoded as in
    _robin_functional: 0 Dirichlet, inf Neumann), with the outward-pointing
    x so the same functional applies at x = 0 and x = l.  Roots come from
    sign-change bisection on the scalar 2x2 determinant, which is reliable
    here because scalar Robin eigenvalues are simple.
    """
    fl = _robin_functional(L_left)
    fr = _robin_functional(L_right)

    def gpos(k):
        return fl(1.0, 0.0) * fr(np.sin(k * l), k * np.cos(k * l)) - fl(0.0, k) * fr(
            np.cos(k * l), -k * np.sin(k * l)
        )

    def gneg(q):
        return fl(1.0, 0.0) * fr(np.sinh(q * l), q * np.cosh(q * l)) - fl(0.0, q) * fr(
            np.cosh(q * l), q * np.sinh(q * l)
        )

    k_max = (n_levels + 3) * np.pi / l
    kgrid = np.arange(1e-9, k_max, np.pi / (20.0 * l))
    k_roots = _sign_change_roots(gpos, kgrid, floor=1e-7 / l)[:n_levels]

    scales = [l]
    for L in (L_left, L_right):
        if L is not None and np.isfinite(L) and abs(L) > 1e-12:
            scales.append(abs(L))
    kappa_max = min(4.0 / min(scales) + 2.0 / l, 300.0 / l)
    qgrid = np.arange(1e-9, kappa_max, kappa_max / 2000.0)
    kappa_roots = _sign_change_roots(gneg, qgrid, floor=1e-7 / l)

    both_neumann = all(L is None or np.isinf(L) for L in (L_left, L_right))
    both_finite = all(L is not None and np.isfinite(L) for L in (L_left, L_right))
    zero = both_neumann or (both_finite and abs(L_left - L_right - l) < 1e-12)
    return DecoupledRoots(tuple(k_roots), tuple(kappa_roots), zero)
