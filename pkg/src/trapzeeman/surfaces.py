"""Half-space surface response: wave geometry, Fresnel coefficients, modes.

A non-magnetic medium fills z > 0; the electron sits on the vacuum side at
z < 0.  Vacuum-side wave vectors are (k_par, k_z), medium-side ones
(k_par, k_z_d) with

    k_z_d^2 = n^2 (k_z^2 + k_par^2) - k_par^2.

The square root cuts are placed so that travelling waves have
sgn(k_z_d) = sgn(k_z) and, on the lower imaginary k_z axis below -i k_par,
k_z_d = -i sqrt(n^2 kappa^2 - (n^2-1) k_par^2) by continuity through the
fourth quadrant.  Every integral names the contour segment it lives on via
``Segment`` so branch choices are explicit rather than implied.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable

import numpy as np

# test hook: set to 'flip_rtm_sign' to corrupt the TM reflection coefficient
# and verify that the validation suite notices
_fault_mode: str | None = None


class Segment(Enum):
    """Contour segment on which k_z lives; fixes the k_z_d branch."""

    REAL_AXIS = "real_axis"
    OMEGA_CUT = "omega_cut"            # k_z = -i kappa, kappa > k_par
    EVANESCENT_LEFT = "evanescent_left"    # between the cuts, left side: k_z_d = -K
    EVANESCENT_RIGHT = "evanescent_right"  # between the cuts, right side: k_z_d = +K


# ----------------------------------------------------------------------
# surface models
# ----------------------------------------------------------------------
@dataclass(frozen=True)
class PerfectReflector:
    """n -> infinity mirror: R_TE = -1, R_TM = +1."""


@dataclass(frozen=True)
class NonDispersive:
    """Frequency-independent refractive index n >= 1."""

    n: float

    def __post_init__(self):
        if not (self.n >= 1.0 and math.isfinite(self.n)):
            raise ValueError(f"refractive index must satisfy n >= 1, got {self.n}")


@dataclass(frozen=True)
class DispersiveResonance:
    """Dispersive permittivity eps(omega); used only by the asymptotic formulas."""

    eps_at: Callable[[float], complex]
    label: str = "dispersive"

    def refractive_index(self, omega: float) -> complex:
        eps = complex(self.eps_at(omega))
        return cmath.sqrt(eps)


SurfaceModel = PerfectReflector | NonDispersive | DispersiveResonance


def load_permittivity_table(path) -> DispersiveResonance:
    """Read a whitespace-separated (omega, Re eps[, Im eps]) table, omega ascending."""
    data = np.loadtxt(path)
    if data.ndim == 1:
        data = data[None, :]
    if data.shape[1] not in (2, 3):
        raise ValueError("permittivity table needs 2 or 3 columns: omega, Re eps[, Im eps]")
    om = data[:, 0]
    if np.any(np.diff(om) <= 0):
        raise ValueError("permittivity table frequencies must be strictly ascending")
    re = data[:, 1]
    im = data[:, 2] if data.shape[1] == 3 else np.zeros_like(re)

    def eps_at(w: float) -> complex:
        if w < om[0] or w > om[-1]:
            raise ValueError(f"frequency {w} outside tabulated range [{om[0]}, {om[-1]}]")
        return complex(np.interp(w, om, re), np.interp(w, om, im))

    return DispersiveResonance(eps_at=eps_at, label="table")


def lorentzian_permittivity(omega0: float, strength: float, gamma: float) -> DispersiveResonance:
    """Single-Lorentzian eps(w) = 1 + strength * w0^2 / (w0^2 - w^2 - i gamma w).

    Illustrative anomalous-dispersion model: around w0 the real part of the
    (sqrt(eps)-1)/(sqrt(eps)+1) factor swings, so the two circular resonances
    can see very different effective reflectivities.
    """
    def eps_at(w: float) -> complex:
        return 1.0 + strength * omega0**2 / (omega0**2 - w**2 - 1j * gamma * w)

    return DispersiveResonance(eps_at=eps_at, label="lorentzian")


# ----------------------------------------------------------------------
# wave geometry and Fresnel coefficients
# ----------------------------------------------------------------------
def kzd(n: float, k_z: complex, k_par: float, segment: Segment = Segment.REAL_AXIS) -> complex:
    """Medium-side longitudinal wavenumber on the named contour segment.

    REAL_AXIS: real k_z gives real k_z_d with matching sign (travelling waves).
    OMEGA_CUT: k_z = -i kappa with kappa >= k_par; k_z_d = -i sqrt(|.|).
    EVANESCENT_LEFT/RIGHT: k_z on the segment between the k_z_d branch
    points; the two sides carry k_z_d = -K and +K respectively (K > 0).
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    rad = n * n * (k_z * k_z + k_par * k_par) - k_par * k_par
    if segment is Segment.REAL_AXIS:
        x = complex(rad)
        root = cmath.sqrt(x)
        kzr = complex(k_z)
        if kzr.real < 0:
            root = -root
        return root
    if segment is Segment.OMEGA_CUT:
        r = complex(rad)
        if r.real > 0 and abs(r.imag) < 1e-300:
            raise ValueError("k_z not on the omega cut: radicand positive")
        return -1j * cmath.sqrt(-r)
    mag = cmath.sqrt(complex(rad))
    if segment is Segment.EVANESCENT_LEFT:
        return -mag
    if segment is Segment.EVANESCENT_RIGHT:
        return mag
    raise ValueError(f"unknown segment {segment!r}")


@dataclass(frozen=True)
class WaveGeometry:
    """Consistent (k_par, k_z, k_z_d, omega) tuple for one mode."""

    k_par: float
    k_z: complex
    k_z_d: complex
    omega: complex

    @classmethod
    def from_vacuum(cls, n: float, k_z: complex, k_par: float,
                    segment: Segment = Segment.REAL_AXIS) -> "WaveGeometry":
        om = cmath.sqrt(k_z * k_z + k_par * k_par)
        return cls(k_par=k_par, k_z=k_z, k_z_d=kzd(n, k_z, k_par, segment), omega=om)


@dataclass(frozen=True)
class FresnelSet:
    R_vac: complex
    T_vac: complex
    R_med: complex
    T_med: complex


def fresnel(pol: str, n: float, g: WaveGeometry) -> FresnelSet:
    """Fresnel coefficients of the vacuum/medium interface.

    TE: R = (k_z - k_z_d)/(k_z + k_z_d),        T = 2 k_z/(k_z + k_z_d)
    TM: R = (n^2 k_z - k_z_d)/(n^2 k_z + k_z_d), T = 2 n k_z/(n^2 k_z + k_z_d)
    medium side: R_med = -R_vac, T_med = (k_z_d / k_z) T_vac.
    """
    kz, kd = g.k_z, g.k_z_d
    if pol == "TE":
        den = kz + kd
        if den == 0:
            raise ArithmeticError("k_z + k_z_d = 0: invalid branch combination")
        r = (kz - kd) / den
        t = 2 * kz / den
    elif pol == "TM":
        den = n * n * kz + kd
        if den == 0:
            raise ArithmeticError("n^2 k_z + k_z_d = 0: invalid branch combination")
        r = (n * n * kz - kd) / den
        t = 2 * n * kz / den
        if _fault_mode == "flip_rtm_sign":
            r = -r
    else:
        raise ValueError(f"polarization must be 'TE' or 'TM', got {pol!r}")
    if kz == 0:
        t_med = complex(0.0)
    else:
        t_med = (kd / kz) * t
    return FresnelSet(R_vac=r, T_vac=t, R_med=-r, T_med=t_med)


def current_conservation_residual(pol: str, n: float, k_z: float, k_par: float) -> float:
    """|R|^2 + (k_z/k_z_d)|T_med|^2 - 1 for a travelling wave (should vanish)."""
    g = WaveGeometry.from_vacuum(n, float(k_z), float(k_par))
    fs = fresnel(pol, n, g)
    lhs = abs(fs.R_vac) ** 2 + (g.k_z / g.k_z_d).real * abs(fs.T_med) ** 2
    return abs(lhs - 1.0)


def evanescent_identity_residual(pol: str, n: float, k_par: float, K: float) -> float:
    """Residual of R|_{kzd=-K} - R|_{kzd=+K} = (k_z/k_z_d) T_med T_med* |_{kzd=-K}.

    Valid for real medium-side k_z_d = K with 0 < K < sqrt(n^2-1) k_par, for
    which the vacuum side is evanescent: k_z = -i q.
    """
    if n == 1.0:
        return 0.0
    if not (0 < K < math.sqrt(n * n - 1) * k_par):
        raise ValueError("need 0 < K < sqrt(n^2-1) k_par for an evanescent vacuum side")
    q = math.sqrt((n * n - 1) * k_par**2 - K * K) / n
    k_z = -1j * q
    om = cmath.sqrt(k_z * k_z + k_par * k_par)
    g_minus = WaveGeometry(k_par=k_par, k_z=k_z, k_z_d=-K, omega=om)
    g_plus = WaveGeometry(k_par=k_par, k_z=k_z, k_z_d=+K, omega=om)
    f_minus = fresnel(pol, n, g_minus)
    f_plus = fresnel(pol, n, g_plus)
    lhs = f_minus.R_vac - f_plus.R_vac
    rhs = (k_z / g_minus.k_z_d) * f_minus.T_med * f_minus.T_med.conjugate()
    return abs(lhs - rhs)


# ----------------------------------------------------------------------
# rescaled pole-sector reflection functions
# ----------------------------------------------------------------------
def rescaled_reflection(pol: str, sector: str, alpha: float, n: float) -> complex:
    """Reflection coefficient rescaled to the on-resonance pole variable.

    sector='propagating' (alias '+'): radicand alpha^2 + (n^2 - 1); real
    output, used with the oscillatory x integral on [0, 1].
    sector='evanescent' (alias '-'): radicand alpha^2 - (n^2 - 1); complex
    (root taken as +i sqrt(|.|)) where the radicand is negative, real beyond
    alpha = sqrt(n^2-1); its real part feeds the damped y integral.

    TE uses alpha against the root, TM uses n^2 alpha:
        R_TE = (alpha - root)/(alpha + root),
        R_TM = (n^2 alpha - root)/(n^2 alpha + root).
    """
    if alpha < 0:
        raise ValueError("alpha must be >= 0")
    if sector in ("propagating", "+"):
        if not 0.0 <= alpha <= 1.0:
            raise ValueError("propagating sector needs alpha in [0, 1]")
        rad = alpha * alpha + (n * n - 1.0)
        root = complex(math.sqrt(rad))
    elif sector in ("evanescent", "-"):
        rad = alpha * alpha - (n * n - 1.0)
        root = complex(math.sqrt(rad)) if rad >= 0 else 1j * math.sqrt(-rad)
    else:
        raise ValueError(f"sector must be 'propagating'/'+' or 'evanescent'/'-', got {sector!r}")
    if pol == "TE":
        a = complex(alpha)
    elif pol == "TM":
        a = complex(n * n * alpha)
    else:
        raise ValueError(f"polarization must be 'TE' or 'TM', got {pol!r}")
    if a + root == 0:
        return complex(-1.0)
    out = (a - root) / (a + root)
    if out.imag == 0.0:
        return complex(out.real)
    return out


# ----------------------------------------------------------------------
# polarization vectors and mode functions
# ----------------------------------------------------------------------
def polarization_vector(pol: str, k: np.ndarray) -> np.ndarray:
    """Unit polarization vector; TE in-plane, TM with the -k_par^2 z component.

    At k_par = 0 the vectors are defined by continuity along k_x -> 0+.
    """
    kx, ky, kz = (complex(v) for v in k)
    kpar = cmath.sqrt(kx * kx + ky * ky)
    norm = cmath.sqrt(kx * kx + ky * ky + kz * kz)
    if abs(kpar) == 0:
        sgn = 1.0 if kz.real >= 0 else -1.0
        if pol == "TE":
            return np.array([0.0, -1.0, 0.0], dtype=complex)
        return np.array([sgn, 0.0, 0.0], dtype=complex)
    if pol == "TE":
        return np.array([ky / kpar, -kx / kpar, 0.0], dtype=complex)
    if pol == "TM":
        return np.array([kx * kz / (norm * kpar), ky * kz / (norm * kpar),
                         -kpar * kpar / (norm * kpar)], dtype=complex)
    raise ValueError(f"polarization must be 'TE' or 'TM', got {pol!r}")


def mode_function(incident: str, k_incident: np.ndarray, pol: str, r: np.ndarray,
                  n: float) -> np.ndarray:
    """Normalized half-space mode at position r.

    ``incident='vac'``: k_incident is the vacuum-side wave vector (k_z > 0,
    travelling towards the surface from z < 0).  ``incident='med'``:
    k_incident is the medium-side wave vector (k_z_d < 0); total internal
    reflection renders the vacuum side evanescent when
    |k_z_d| < sqrt(n^2 - 1) k_par.

    Used by the boundary-condition tests; the shift integrals use the
    reduced reflection-coefficient forms instead.
    """
    kx, ky = float(k_incident[0]), float(k_incident[1])
    kpar = math.hypot(kx, ky)
    pref = (2.0 * math.pi) ** (-1.5)
    z = float(r[2])
    phase = lambda kvec: cmath.exp(1j * (kvec[0] * r[0] + kvec[1] * r[1] + kvec[2] * r[2]))

    if incident == "vac":
        kz = complex(k_incident[2])
        if kz.real <= 0:
            raise ValueError("vacuum-incident mode needs k_z > 0")
        kd = kzd(n, kz, kpar, Segment.REAL_AXIS)
        g = WaveGeometry(k_par=kpar, k_z=kz, k_z_d=kd, omega=cmath.sqrt(kz**2 + kpar**2))
        fs = fresnel(pol, n, g)
        k_in = np.array([kx, ky, kz], dtype=complex)
        k_refl = np.array([kx, ky, -kz], dtype=complex)
        k_trans = np.array([kx, ky, kd], dtype=complex)
        if z <= 0:
            out = phase(k_in) * polarization_vector(pol, k_in) \
                + fs.R_vac * phase(k_refl) * polarization_vector(pol, k_refl)
        else:
            out = fs.T_vac * phase(k_trans) * polarization_vector(pol, k_trans)
        return pref * out

    if incident == "med":
        kd = complex(k_incident[2])
        if kd.real >= 0:
            raise ValueError("medium-incident mode needs k_z_d < 0")
        rad = (kd * kd - (n * n - 1.0) * kpar * kpar) / (n * n)
        kz = cmath.sqrt(rad) if rad.real >= 0 else -1j * cmath.sqrt(-rad)
        if kz.real > 0:
            kz = -kz  # transmitted wave moves downwards, like the incident one
        g = WaveGeometry(k_par=kpar, k_z=kz, k_z_d=kd,
                         omega=cmath.sqrt(kz * kz + kpar * kpar))
        fs = fresnel(pol, n, g)
        k_in = np.array([kx, ky, kd], dtype=complex)
        k_refl = np.array([kx, ky, -kd], dtype=complex)
        k_trans = np.array([kx, ky, kz], dtype=complex)
        if z >= 0:
            out = phase(k_in) * polarization_vector(pol, k_in) \
                + fs.R_med * phase(k_refl) * polarization_vector(pol, k_refl)
        else:
            out = fs.T_med * phase(k_trans) * polarization_vector(pol, k_trans)
        return pref * out / n

    raise ValueError(f"incident must be 'vac' or 'med', got {incident!r}")
