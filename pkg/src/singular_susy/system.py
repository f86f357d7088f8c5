"""Domain model: geometry, boundary matrices, two-component wavefunctions.

The Hamiltonian is H = -lam^2 d^2/dx^2 on two components folded onto x > 0,
with a point singularity at the origin described by a unitary U through

    (U - I) Psi(+0) + i L0 (U + I) Psi'(+0) = 0,

and, on an interval (0, l], a diagonal unitary Dl imposing the same form at
the wall x = l.  Wavefunctions are stored as closed-form coefficients over a
per-sector basis, so evaluation, differentiation, norms and boundary data
are all exact arithmetic on 2x2 coefficient arrays.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .errors import (
    GeometryMismatchError,
    NotDiagonalError,
    NotNormalizableError,
    NotUnitaryError,
    OutOfDomainError,
    ThetaPiError,
)
from .matkit import IDENTITY, is_unitary

SECTORS = ("positive", "zero", "negative")

_TWO_PI = 2.0 * np.pi


@dataclass(frozen=True)
class Geometry:
    """Half-line ("line") or interval (0, l] ("interval")."""

    kind: str
    l: float | None = None

    def __post_init__(self):
        if self.kind not in ("line", "interval"):
            raise ValueError("kind must be 'line' or 'interval'")
        if self.kind == "interval":
            if self.l is None or not np.isfinite(self.l) or self.l <= 0:
                raise ValueError("interval requires a finite length l > 0")
            object.__setattr__(self, "l", float(self.l))
        elif self.l is not None:
            raise ValueError("line geometry takes no length")

    @classmethod
    def line(cls) -> "Geometry":
        return cls("line")

    @classmethod
    def interval(cls, l: float) -> "Geometry":
        return cls("interval", float(l))

    @property
    def is_interval(self) -> bool:
        return self.kind == "interval"


@dataclass(frozen=True)
class LengthScale:
    """Robin length L(theta) = L0 cot(theta/2) attached to a boundary phase.

    theta is stored reduced to [0, 2 pi).  theta = 0 is the Neumann point
    and carries an explicit infinite value; theta = pi is rejected because
    the associated boundary matrix degenerates (both eigenvalues -1) and no
    finite-or-infinite Robin scale exists there.
    """

    theta: float
    L0: float = 1.0

    def __post_init__(self):
        if not np.isfinite(self.L0) or self.L0 <= 0:
            raise ValueError("L0 must be positive and finite")
        if not np.isfinite(self.theta):
            raise ValueError("theta must be finite")
        t = float(self.theta) % _TWO_PI
        if abs(t - np.pi) < 1e-12:
            raise ThetaPiError("theta = pi admits no Robin length scale")
        object.__setattr__(self, "theta", t)

    @property
    def value(self) -> float:
        """L0 cot(theta/2); +inf at the Neumann point theta = 0."""
        if self.theta == 0.0:
            return np.inf
        return self.L0 / np.tan(self.theta / 2.0)

    @property
    def inverse(self) -> float:
        """tan(theta/2) / L0, finite on the whole allowed range."""
        return np.tan(self.theta / 2.0) / self.L0


def robin_length(theta: float, L0: float = 1.0) -> float:
    return LengthScale(theta, L0).value


def inverse_robin_length(theta: float, L0: float = 1.0) -> float:
    return LengthScale(theta, L0).inverse


def theta_for_scale(L: float, L0: float = 1.0) -> float:
    """Boundary phase with Robin length L: inverts L = L0 cot(theta/2).

    L = +-inf maps to the Neumann point 0; L = 0 maps to pi (Dirichlet),
    which downstream charge constructors reject.
    """
    if np.isinf(L):
        return 0.0
    return float(2.0 * np.arctan2(L0, L))


def robin_matrix(theta: float) -> np.ndarray:
    """diag(e^{i theta}, -1), the canonical single-scale boundary matrix."""
    t = float(theta) % _TWO_PI
    if abs(t - np.pi) < 1e-12:
        raise ThetaPiError("theta = pi degenerates to -identity")
    return np.diag([np.exp(1j * t), -1.0]).astype(complex)


def _readonly_complex(arr, shape) -> np.ndarray:
    out = np.array(arr, dtype=complex)
    if out.shape != shape:
        raise ValueError("expected array of shape %s" % (shape,))
    if not np.all(np.isfinite(out)):
        raise ValueError("array entries must be finite")
    out.setflags(write=False)
    return out


@dataclass(frozen=True, eq=False)
class SystemSpec:
    """A self-adjoint realization of H: geometry, boundary matrices, scales.

    U acts at the singular point x = 0; Dl (interval only) is the diagonal
    wall matrix at x = l.  lam is the kinetic scale in H = -lam^2 d^2/dx^2
    and L0 the reference length in the boundary form.
    """

    geometry: Geometry
    U: np.ndarray
    Dl: np.ndarray | None = None
    lam: float = 1.0
    L0: float = 1.0

    def __post_init__(self):
        u = _readonly_complex(self.U, (2, 2))
        if not is_unitary(u, 1e-10):
            raise NotUnitaryError("U must be unitary within 1e-10")
        object.__setattr__(self, "U", u)
        if self.geometry.is_interval:
            if self.Dl is None:
                raise GeometryMismatchError("interval system requires a wall matrix Dl")
            d = _readonly_complex(self.Dl, (2, 2))
            if not is_unitary(d, 1e-10):
                raise NotUnitaryError("Dl must be unitary within 1e-10")
            if max(abs(d[0, 1]), abs(d[1, 0])) > 1e-10:
                raise NotDiagonalError("Dl must be diagonal")
            object.__setattr__(self, "Dl", d)
        elif self.Dl is not None:
            raise GeometryMismatchError("line system takes no wall matrix")
        for name in ("lam", "L0"):
            v = float(getattr(self, name))
            if not np.isfinite(v) or v <= 0:
                raise ValueError("%s must be positive and finite" % name)
            object.__setattr__(self, name, v)

    @property
    def l(self) -> float | None:
        return self.geometry.l


@dataclass(frozen=True)
class BoundaryData:
    """One-sided boundary values (Psi, Psi') at an endpoint."""

    psi: np.ndarray
    dpsi: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "psi", _readonly_complex(self.psi, (2,)))
        object.__setattr__(self, "dpsi", _readonly_complex(self.dpsi, (2,)))


def _form_residual(m: np.ndarray, b: BoundaryData, L0: float) -> float:
    lhs = (m - IDENTITY) @ b.psi + 1j * L0 * (m + IDENTITY) @ b.dpsi
    scale = max(np.linalg.norm(b.psi), L0 * np.linalg.norm(b.dpsi))
    if scale == 0.0:
        return 0.0
    return float(np.linalg.norm(lhs) / scale)


def connection_residual(spec: SystemSpec, b: BoundaryData) -> float:
    """Scale-free violation of the singularity condition at x = +0."""
    return _form_residual(spec.U, b, spec.L0)


def wall_residual(spec: SystemSpec, b: BoundaryData) -> float:
    """Scale-free violation of the wall condition at x = l."""
    if not spec.geometry.is_interval:
        raise GeometryMismatchError("wall condition exists only on an interval")
    return _form_residual(spec.Dl, b, spec.L0)


@dataclass(frozen=True, eq=False)
class WaveFunction:
    """Two-component state with closed-form coefficients over a sector basis.

    coeffs[c, j] multiplies basis function j in component c.  The bases are
      positive:  cos(k x), sin(k x)            energy +(lam k)^2
      zero:      1, x                          energy 0
      negative:  cosh(kappa x), sinh(kappa x)  (interval)   -(lam kappa)^2
                 e^{-kappa x}, x e^{-kappa x}  (line)
    wavenumber holds k or kappa (0 in the zero sector).
    """

    geometry: Geometry
    sector: str
    wavenumber: float
    coeffs: np.ndarray
    lam: float = 1.0

    def __post_init__(self):
        if self.sector not in SECTORS:
            raise ValueError("unknown sector %r" % (self.sector,))
        q = float(self.wavenumber)
        if self.sector == "zero":
            if q != 0.0:
                raise ValueError("zero sector has wavenumber 0")
        elif not np.isfinite(q) or q <= 0:
            raise ValueError("wavenumber must be positive and finite")
        object.__setattr__(self, "wavenumber", q)
        object.__setattr__(self, "coeffs", _readonly_complex(self.coeffs, (2, 2)))
        lam = float(self.lam)
        if not np.isfinite(lam) or lam <= 0:
            raise ValueError("lam must be positive and finite")
        object.__setattr__(self, "lam", lam)

    @property
    def energy(self) -> float:
        if self.sector == "positive":
            return (self.lam * self.wavenumber) ** 2
        if self.sector == "zero":
            return 0.0
        return -((self.lam * self.wavenumber) ** 2)


def derivative_rep(wf: WaveFunction) -> np.ndarray:
    """Matrix M with: coefficients of Psi' = M @ (coefficients of Psi).

    Row-major coeffs arrays therefore transform as C -> C @ M.T.
    """
    q = wf.wavenumber
    if wf.sector == "positive":
        return np.array([[0.0, q], [-q, 0.0]])
    if wf.sector == "zero":
        return np.array([[0.0, 1.0], [0.0, 0.0]])
    if wf.geometry.is_interval:
        return np.array([[0.0, q], [q, 0.0]])
    return np.array([[-q, 1.0], [0.0, -q]])


def _basis_values(wf: WaveFunction, x: float) -> np.ndarray:
    q = wf.wavenumber
    if wf.sector == "positive":
        return np.array([np.cos(q * x), np.sin(q * x)])
    if wf.sector == "zero":
        return np.array([1.0, x])
    if wf.geometry.is_interval:
        return np.array([np.cosh(q * x), np.sinh(q * x)])
    e = np.exp(-q * x)
    return np.array([e, x * e])


def _check_domain(wf: WaveFunction, x: float) -> None:
    if not np.isfinite(x) or x <= 0:
        raise OutOfDomainError("x = %r is outside the open domain" % (x,))
    if wf.geometry.is_interval and x > wf.geometry.l * (1.0 + 1e-12):
        raise OutOfDomainError("x = %r exceeds the interval length" % (x,))


def evaluate(wf: WaveFunction, x: float) -> np.ndarray:
    """Psi(x) as a 2-vector, from the closed-form basis."""
    _check_domain(wf, x)
    return wf.coeffs @ _basis_values(wf, x)


def derivative(wf: WaveFunction, x: float) -> np.ndarray:
    """Psi'(x), exact (the basis is differentiated analytically)."""
    _check_domain(wf, x)
    return (wf.coeffs @ derivative_rep(wf).T) @ _basis_values(wf, x)


def boundary_data(wf: WaveFunction, at: str = "origin") -> BoundaryData:
    """One-sided limits (Psi, Psi') at x -> +0 ("origin") or x = l ("wall")."""
    if at == "origin":
        x = 0.0
    elif at == "wall":
        if not wf.geometry.is_interval:
            raise GeometryMismatchError("the line has no wall")
        x = wf.geometry.l
    else:
        raise ValueError("at must be 'origin' or 'wall'")
    vals = _basis_values(wf, x)
    return BoundaryData(wf.coeffs @ vals, (wf.coeffs @ derivative_rep(wf).T) @ vals)


def _gram(wf: WaveFunction) -> np.ndarray:
    """Exact Gram matrix of the sector basis on the geometry."""
    q = wf.wavenumber
    if not wf.geometry.is_interval:
        if wf.sector != "negative":
            raise NotNormalizableError(
                "%s-sector states are not square-integrable on the line" % wf.sector
            )
        return np.array(
            [[1.0 / (2 * q), 1.0 / (4 * q**2)], [1.0 / (4 * q**2), 1.0 / (4 * q**3)]]
        )
    l = wf.geometry.l
    if wf.sector == "positive":
        even = l / 2 + np.sin(2 * q * l) / (4 * q)
        odd = l / 2 - np.sin(2 * q * l) / (4 * q)
        cross = np.sin(q * l) ** 2 / (2 * q)
        return np.array([[even, cross], [cross, odd]])
    if wf.sector == "zero":
        return np.array([[l, l**2 / 2], [l**2 / 2, l**3 / 3]])
    even = np.sinh(2 * q * l) / (4 * q) + l / 2
    odd = np.sinh(2 * q * l) / (4 * q) - l / 2
    cross = np.sinh(q * l) ** 2 / (2 * q)
    return np.array([[even, cross], [cross, odd]])


def wf_inner(wf1: WaveFunction, wf2: WaveFunction) -> complex:
    """L2 inner product (wf1 conjugated); both states must share a basis."""
    if wf1.geometry != wf2.geometry or wf1.sector != wf2.sector:
        raise ValueError("inner product requires a common sector basis")
    if abs(wf1.wavenumber - wf2.wavenumber) > 1e-9 * max(1.0, wf1.wavenumber):
        raise ValueError("inner product requires equal wavenumbers")
    g = _gram(wf1)
    return complex(np.sum(np.conj(wf1.coeffs) * (wf2.coeffs @ g)))


def l2_norm(wf: WaveFunction) -> float:
    """Exact L2 norm; raises NotNormalizableError off the discrete sectors."""
    return float(np.sqrt(max(wf_inner(wf, wf).real, 0.0)))


def normalize(wf: WaveFunction) -> WaveFunction:
    n = l2_norm(wf)
    if n < 1e-150:
        raise ValueError("cannot normalize the zero wavefunction")
    return replace(wf, coeffs=wf.coeffs / n)


def half_parity(wf: WaveFunction, l: float | None = None) -> WaveFunction:
    """Reflect the upper component: (psi_+(x), psi_-(x)) -> (psi_+(l-x), psi_-(x)).

    The reflected component is re-expanded in the same sector basis, so the
    result is again a closed-form WaveFunction; the map is an involution on
    coefficients.
    """
    if not wf.geometry.is_interval:
        raise GeometryMismatchError("half parity is defined on an interval")
    if l is not None and abs(l - wf.geometry.l) > 1e-12 * max(1.0, wf.geometry.l):
        raise ValueError("l disagrees with the wavefunction's geometry")
    length = wf.geometry.l
    q = wf.wavenumber
    if wf.sector == "positive":
        c, s = np.cos(q * length), np.sin(q * length)
        t = np.array([[c, s], [s, -c]])
    elif wf.sector == "zero":
        t = np.array([[1.0, length], [0.0, -1.0]])
    else:
        ch, sh = np.cosh(q * length), np.sinh(q * length)
        t = np.array([[ch, sh], [-sh, -ch]])
    new = np.array(wf.coeffs)
    new[0] = t @ wf.coeffs[0]
    return replace(wf, coeffs=new)
