"""Supersymmetry classification for point-singularity systems.

A first-order charge Q = (-i lam d/dx (V^dag sigma_a V) + V^dag sigma_b V)/sqrt(2)
preserves the domain fixed by a boundary matrix M exactly when M has
eigenvalues {-1, e^{i theta}} with theta != pi and the shift vector is tied
to theta through the Robin length.  On an interval the charge must satisfy
the condition at both ends at once; comparing the two diagonalizing frames
through their relative Euler tilt mu decides between an alpha-family of two
charges (N2), a single charge with a fixed sigma3 shift component (N1), or
none.

Systems with no -1 eigenvalue at all (both boundary matrices proportional
to the identity arise as reflections of solved ones) are classified by
transporting the charges of the upper-component-reflected system; such
charges carry reflected=True and apply() folds the reflection in.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .errors import GeometryMismatchError, NotDiagonalError
from .matkit import (
    IDENTITY,
    SIGMA1,
    circular_distance,
    conjugate,
    diagonalize_u2,
    euler_angles_of,
    is_unitary,
    pauli_combination,
    su2_from_euler,
)
from . import spectra
from .system import (
    SystemSpec,
    WaveFunction,
    derivative_rep,
    half_parity,
    inverse_robin_length,
)

_PHASE_TOL = 1e-9
_SQRT2 = np.sqrt(2.0)
_TWO_PI = 2.0 * np.pi

DEGREES = ("none", "N1", "N2")
GOODNESS = ("Good", "Broken", "NotApplicable")


@dataclass(frozen=True, eq=False)
class SuperchargeSpec:
    """One supercharge: kinetic direction, shift vector, conjugating frame.

    In the frame where the boundary matrix is diag(e^{i theta}, -1) the
    charge reads q(alpha, c; theta) with
        a = (cos alpha, sin alpha, 0),
        b = (lam tan(theta/2)/L0) (sin alpha, -cos alpha, 0) + (0, 0, c),
    and the stored conjugator V carries it to the system frame.  apply()
    realizes Q = V^dag q V / sqrt(2) on closed-form coefficients, so
    applying twice multiplies an energy-E eigenstate by (E + |b|^2)/2.
    """

    alpha: float
    c: float
    theta: float
    lam: float = 1.0
    L0: float = 1.0
    conjugator: np.ndarray | None = None
    reflected: bool = False

    def __post_init__(self):
        t = float(self.theta) % _TWO_PI
        inverse_robin_length(t, self.L0)  # rejects theta = pi and bad L0
        object.__setattr__(self, "theta", t)
        for name in ("alpha", "c", "lam"):
            v = float(getattr(self, name))
            if not np.isfinite(v):
                raise ValueError("%s must be finite" % name)
            object.__setattr__(self, name, v)
        if self.lam <= 0:
            raise ValueError("lam must be positive")
        v = IDENTITY.copy() if self.conjugator is None else np.array(self.conjugator, dtype=complex)
        if not is_unitary(v, 1e-9):
            raise ValueError("conjugator must be unitary")
        det = v[0, 0] * v[1, 1] - v[0, 1] * v[1, 0]
        if abs(det - 1.0) > 1e-9:
            raise ValueError("conjugator must be special unitary")
        v.setflags(write=False)
        object.__setattr__(self, "conjugator", v)

    @property
    def a_vec(self) -> np.ndarray:
        return np.array([np.cos(self.alpha), np.sin(self.alpha), 0.0])

    @property
    def b_vec(self) -> np.ndarray:
        g = self.lam * inverse_robin_length(self.theta, self.L0)
        return np.array(
            [g * np.sin(self.alpha), -g * np.cos(self.alpha), self.c]
        )

    @property
    def shift(self) -> float:
        """|b|^2, the constant by which the algebra shifts H."""
        g = self.lam * inverse_robin_length(self.theta, self.L0)
        return float(g * g + self.c * self.c)

    @property
    def kinetic_matrix(self) -> np.ndarray:
        return conjugate(self.conjugator.conj().T, pauli_combination(self.a_vec))

    @property
    def shift_matrix(self) -> np.ndarray:
        return conjugate(self.conjugator.conj().T, pauli_combination(self.b_vec))

    def apply(self, wf: WaveFunction) -> WaveFunction:
        """Closed-form action on a wavefunction; keeps the energy label."""
        if self.reflected:
            plain = replace(self, reflected=False)
            return half_parity(plain.apply(half_parity(wf)))
        dcoeffs = wf.coeffs @ derivative_rep(wf).T
        new = (
            -1j * self.lam * (self.kinetic_matrix @ dcoeffs)
            + self.shift_matrix @ wf.coeffs
        ) / _SQRT2
        return replace(wf, coeffs=new)


@dataclass(frozen=True)
class SusyClassification:
    degree: str
    charges: tuple
    shift: float
    goodness: str
    notes: tuple = ()

    def __post_init__(self):
        if self.degree not in DEGREES:
            raise ValueError("unknown degree %r" % (self.degree,))
        if self.goodness not in GOODNESS:
            raise ValueError("unknown goodness %r" % (self.goodness,))
        object.__setattr__(self, "charges", tuple(self.charges))
        object.__setattr__(self, "notes", tuple(self.notes))


def admits_susy_at_point(m) -> tuple[float, np.ndarray] | None:
    """(theta, V) if m has eigenvalues {-1, e^{i theta != pi}}, else None.

    V is the SU(2) frame with V m V^dag = diag(e^{i theta}, -1); the -1
    eigenvalue must be simple, so +-identity and every other matrix without
    a -1 eigenvalue are rejected.
    """
    v, d = diagonalize_u2(np.asarray(m, dtype=complex))
    if abs(d[1, 1] + 1.0) > _PHASE_TOL:
        return None
    if abs(d[0, 0] + 1.0) <= _PHASE_TOL:
        return None
    return float(np.angle(d[0, 0]) % _TWO_PI), v


def build_supercharge(
    alpha: float,
    c: float,
    theta: float,
    lam: float = 1.0,
    L0: float = 1.0,
    conjugator: np.ndarray | None = None,
) -> SuperchargeSpec:
    return SuperchargeSpec(alpha, c, theta, lam, L0, conjugator)


def point_condition_residual(m, charge: SuperchargeSpec) -> float:
    """How far a charge is from preserving the domain of boundary matrix m.

    Zero (to rounding) iff both matrix conditions hold:
      (m + I) K (m + I) = 0
      lam (m - I) K (m - I) + 2 L0 [m, B] = 0
    with K, B the charge's kinetic and shift matrices in the system frame.
    """
    m = np.asarray(m, dtype=complex)
    k = charge.kinetic_matrix
    b = charge.shift_matrix
    c1 = (m + IDENTITY) @ k @ (m + IDENTITY)
    c2 = charge.lam * (m - IDENTITY) @ k @ (m - IDENTITY) + 2.0 * charge.L0 * (
        m @ b - b @ m
    )
    return float(max(np.max(np.abs(c1)), np.max(np.abs(c2))))


def annihilates(charge: SuperchargeSpec, wf: WaveFunction, tol: float = 1e-10) -> bool:
    image = charge.apply(wf)
    scale = (
        charge.lam * (wf.wavenumber + 1.0) + np.sqrt(charge.shift)
    ) * np.linalg.norm(wf.coeffs)
    return float(np.linalg.norm(image.coeffs)) <= tol * max(scale, 1e-300)


def _gauge_fixed(v: np.ndarray) -> np.ndarray:
    """Canonical two-angle representative of a diagonalizing frame.

    Diagonalizers are unique only up to a diagonal phase on the left; the
    Euler extraction is blind to that phase, so rebuilding from (mu, nu)
    pins the gauge without disturbing V^dag D V.
    """
    return su2_from_euler(*euler_angles_of(v))


def _is_diagonal(m: np.ndarray, tol: float = 1e-10) -> bool:
    return max(abs(m[0, 1]), abs(m[1, 0])) <= tol


def _goodness(spec: SystemSpec, charges: tuple) -> str:
    if spec.geometry.is_interval:
        spectrum = spectra.solve_interval_spectrum(spec, n_levels=2)
    else:
        spectrum = spectra.solve_line_bound_states(spec)
    ground = spectrum.ground
    if ground is None:
        return "NotApplicable"
    if ground.multiplicity == 1 and all(
        annihilates(q, st) for q in charges for st in ground.states
    ):
        return "Good"
    return "Broken"


def classify_line(spec: SystemSpec) -> SusyClassification:
    """N2 with an alpha-family of charges iff U has the {-1, e^{i theta}}
    eigenvalue pair; goodness is decided on the lowest bound state."""
    if spec.geometry.is_interval:
        raise GeometryMismatchError("classify_interval handles interval systems")
    found = admits_susy_at_point(spec.U)
    if found is None:
        return SusyClassification(
            "none", (), 0.0, "NotApplicable", ("eigenvalues of U are not {-1, e^{i theta != pi}}",)
        )
    theta, v_raw = found
    v = _gauge_fixed(v_raw)
    pair = (
        build_supercharge(0.0, 0.0, theta, spec.lam, spec.L0, v),
        build_supercharge(np.pi / 2.0, 0.0, theta, spec.lam, spec.L0, v),
    )
    return SusyClassification(
        "N2",
        pair,
        pair[0].shift,
        _goodness(spec, pair),
        ("alpha is free; the canonical alpha = 0, pi/2 pair is stored",),
    )


def _interval_degree(spec: SystemSpec, allow_reflection: bool):
    found_u = admits_susy_at_point(spec.U)
    found_d = admits_susy_at_point(spec.Dl)
    if found_u is None or found_d is None:
        if allow_reflection and _is_diagonal(spec.U):
            mirrored = half_parity_system(spec)
            degree, charges, notes = _interval_degree(mirrored, allow_reflection=False)
            if degree != "none":
                dressed = tuple(replace(q, reflected=True) for q in charges)
                return (
                    degree,
                    dressed,
                    notes + ("charges transported through the upper-component reflection",),
                )
        return "none", (), ("a boundary matrix lacks the {-1, e^{i theta}} pair",)
    theta, v_raw = found_u
    theta_l, _ = found_d
    # normalize the wall frame: a -1 in the upper-left slot is swapped down
    swapped = abs(spec.Dl[1, 1] + 1.0) > _PHASE_TOL
    s = 1j * SIGMA1 if swapped else IDENTITY
    mu, nu = euler_angles_of(v_raw @ s.conj().T)
    v = su2_from_euler(mu, nu) @ s
    if (mu < _PHASE_TOL and circular_distance(theta, theta_l) < _PHASE_TOL) or (
        abs(mu - np.pi) < _PHASE_TOL
        and circular_distance(theta, -theta_l) < _PHASE_TOL
    ):
        pair = (
            build_supercharge(0.0, 0.0, theta, spec.lam, spec.L0, v),
            build_supercharge(np.pi / 2.0, 0.0, theta, spec.lam, spec.L0, v),
        )
        return "N2", pair, ("alpha is free; the canonical alpha = 0, pi/2 pair is stored",)
    if min(mu, np.pi - mu) >= _PHASE_TOL:
        inv0 = inverse_robin_length(theta, spec.L0)
        invl = inverse_robin_length(theta_l, spec.L0)
        c = spec.lam * (invl - inv0 * np.cos(mu)) / np.sin(mu)
        charge = build_supercharge(np.pi / 2.0, c, theta, spec.lam, spec.L0, v)
        return (
            "N1",
            (charge,),
            ("alpha = -pi/2 yields the same charge up to overall sign",),
        )
    return "none", (), ("frame tilt and boundary phases are incompatible",)


def classify_interval(spec: SystemSpec) -> SusyClassification:
    """Full interval classification: N2 / N1 / none plus goodness.

    Both boundary matrices must admit a charge individually; the relative
    Euler tilt mu between their frames then selects the branch.  mu in
    {0, pi} with matching phases keeps the whole alpha-family (N2); any
    other tilt fixes alpha = pi/2 and the sigma3 component c, leaving a
    single charge (N1).
    """
    if not spec.geometry.is_interval:
        raise GeometryMismatchError("classify_line handles line systems")
    degree, charges, notes = _interval_degree(spec, allow_reflection=True)
    if degree == "none":
        return SusyClassification("none", (), 0.0, "NotApplicable", notes)
    return SusyClassification(
        degree, charges, charges[0].shift, _goodness(spec, charges), notes
    )


def classify_system(spec: SystemSpec) -> SusyClassification:
    if spec.geometry.is_interval:
        return classify_interval(spec)
    return classify_line(spec)


def half_parity_system(spec: SystemSpec) -> SystemSpec:
    """Boundary pair of the upper-component-reflected system.

    Reflecting psi_+ about the midpoint trades its origin and wall Robin
    scales and flips their signs, which conjugates the upper-left entries
    of U and Dl and swaps them; lower-component entries are untouched.
    Applying it twice returns the original system.
    """
    if not spec.geometry.is_interval:
        raise GeometryMismatchError("the reflection needs an interval")
    if not _is_diagonal(spec.U):
        raise NotDiagonalError("the reflection rule is defined for diagonal U")
    u, d = spec.U, spec.Dl
    new_u = np.diag([np.conj(d[0, 0]), u[1, 1]])
    new_d = np.diag([np.conj(u[0, 0]), d[1, 1]])
    return SystemSpec(spec.geometry, new_u, new_d, spec.lam, spec.L0)
