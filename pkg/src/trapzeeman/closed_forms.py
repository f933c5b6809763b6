"""Closed-form shift expressions and asymptotic regime analysis.

Exact perfect-reflector results, the oscillation function F, the
large-distance dielectric asymptotics, the (unphysical) naive magnetic
moment, the spin-splitting ratio in natural and SI units, the weak-field
regime classifier, and the free-electron-limit consistency check.

Sign conventions: the electron sits at z < 0, all shifts are coefficients
of sigma_z, and the charge e is negative.  The large-distance asymptotic
forms are written with the sign fixed by their perfect-reflector limit
(1/|z| prefactors positive), which also matches the numerical engine.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from enum import Enum

from . import engine as _engine
from .engine import DEFAULT_CONFIG, QuadratureConfig, ShiftBreakdown
from .landau import DerivedFrequencies, LandauState, TrapParameters, derived_frequencies
from .special import cosine_integral_ci, sine_integral_si
from .surfaces import (DispersiveResonance, NonDispersive, PerfectReflector,
                       SurfaceModel)
from .units import CODATA, PhysicalConstants

_HANDED = (("R", +1.0), ("L", -1.0))


def oscillation_function(theta: float, nu: int) -> float:
    """F(theta) = -theta + Ci(theta)[3 theta cos - (3-theta^2) sin]
                  + [si(theta) - pi nu][(3-theta^2) cos + 3 theta sin].

    Dimensionless envelope of the perfect-reflector shift; linear at small
    theta, oscillatory with quadratically growing amplitude at large theta.
    """
    if theta <= 0:
        raise ValueError("oscillation_function needs theta > 0")
    if nu < 0 or nu != int(nu):
        raise ValueError("nu must be a non-negative integer")
    s, c = math.sin(theta), math.cos(theta)
    br_a = (3.0 - theta * theta) * c + 3.0 * theta * s
    br_b = 3.0 * theta * c - (3.0 - theta * theta) * s
    return (-theta + cosine_integral_ci(theta) * br_b
            + (sine_integral_si(theta) - math.pi * nu) * br_a)


def oscillation_function_small(theta: float, nu: int) -> float:
    """Leading small-argument form -3 pi (nu + 1/2) + 2 theta."""
    return -3.0 * math.pi * (nu + 0.5) + 2.0 * theta


def oscillation_function_large(theta: float, nu: int) -> float:
    """Leading large-argument form pi nu (theta^2 cos - 3 theta sin - 3 cos) - 8/theta."""
    s, c = math.sin(theta), math.cos(theta)
    return math.pi * nu * (theta * theta * c - 3.0 * theta * s - 3.0 * c) - 8.0 / theta


def _check_z(z: float) -> float:
    if z >= 0:
        raise ValueError("the electron must sit at z < 0")
    return float(z)


def perfect_cdelta(st: LandauState, f: DerivedFrequencies, z: float,
                   m: float = 1.0, e: float | None = None) -> float:
    """Pole-sector part of the perfect-reflector shift (coefficient of sigma_z)."""
    z = _check_z(z)
    e = _charge(e)
    tot = 0.0
    for handed, h in _HANDED:
        d = f.delta(handed)
        nu = st.nu_R if handed == "R" else st.nu_L
        if nu == 0 or d == 0.0:
            continue
        s, c = math.sin(2 * z * d), math.cos(2 * z * d)
        tot += h * d * nu * (6 * z * d * s + (3 - 4 * z * z * d * d) * c)
    return e * e / (128 * math.pi * m * m * f.Omega * z**3) * tot


def perfect_cprime(f: DerivedFrequencies, z: float,
                   m: float = 1.0, e: float | None = None) -> float:
    """Cut-sector part of the perfect-reflector shift; independent of nu."""
    z = _check_z(z)
    e = _charge(e)
    tot = 0.0
    for handed, h in _HANDED:
        d = f.delta(handed)
        if d == 0.0:
            continue
        th = -2 * z * d
        s, c = math.sin(2 * z * d), math.cos(2 * z * d)
        br1 = 6 * z * d * s + (3 - 4 * z * z * d * d) * c
        br2 = (3 - 4 * z * z * d * d) * s - 6 * z * d * c
        tot += h * d * (2 * z * d + sine_integral_si(th) * br1
                        + cosine_integral_ci(th) * br2)
    return -e * e / (128 * math.pi**2 * m * m * f.Omega * z**3) * tot


def perfect_spinflip(z: float, B0: float, m: float = 1.0,
                     e: float | None = None) -> float:
    """Spin-flip part of the perfect-reflector shift: e^3 B0 / (32 pi^2 m^3 z^2)."""
    z = _check_z(z)
    e = _charge(e)
    return e**3 * B0 / (32 * math.pi**2 * m**3 * z * z)


def perfect_reflector_shift(st: LandauState, f: DerivedFrequencies, z: float,
                            B0: float, m: float = 1.0,
                            e: float | None = None) -> float:
    """Total perfect-reflector shift (coefficient of sigma_z):

        -(e^2 / 128 pi^2 m^2 z^3) [ -4 z e B0/m
                                    + sum_i h_i (Delta_i/Omega) F_i(-2 z Delta_i) ].
    """
    z = _check_z(z)
    e = _charge(e)
    tot = -4.0 * z * e * B0 / m
    for handed, h in _HANDED:
        d = f.delta(handed)
        if d == 0.0:
            continue  # (Delta_i/Omega) F_i -> 0 in the Delta_i -> 0 limit
        nu = st.nu_R if handed == "R" else st.nu_L
        tot += h * (d / f.Omega) * oscillation_function(-2.0 * z * d, nu)
    return -e * e / (128 * math.pi**2 * m * m * z**3) * tot


# ----------------------------------------------------------------------
# large-distance asymptotics (generic surface)
# ----------------------------------------------------------------------
@dataclass(frozen=True)
class AsymptoticShift:
    value: float
    zeta_min: float | None
    regime_ok: bool
    warning: str | None
    reflection_factors: dict = field(default_factory=dict)   # handed -> complex (sqrt(eps)-1)/(sqrt(eps)+1)


def _reflection_factor(surface: SurfaceModel, omega: float) -> complex:
    if isinstance(surface, PerfectReflector):
        return complex(1.0)
    if isinstance(surface, NonDispersive):
        return complex((surface.n - 1.0) / (surface.n + 1.0))
    nn = surface.refractive_index(omega)
    return (nn - 1.0) / (nn + 1.0)


def asymptotic_dielectric_shift(st: LandauState, f: DerivedFrequencies, z: float,
                                surface: SurfaceModel, m: float = 1.0,
                                e: float | None = None) -> AsymptoticShift:
    """Leading oscillatory shift at zeta_i >> 1 (coefficient of sigma_z):

        (e^2 / 32 pi m^2 Omega |z|) [ nu_R q(Delta_R) Delta_R^3 cos(2 Delta_R z)
                                      - nu_L q(Delta_L) Delta_L^3 cos(2 Delta_L z) ]

    with q = (n-1)/(n+1), generalized to Re[(sqrt(eps)-1)/(sqrt(eps)+1)] at
    the resonance frequency of each ladder for a dispersive surface.
    """
    z = _check_z(z)
    e = _charge(e)
    az = -z
    zetas = []
    tot = 0.0
    factors = {}
    for handed, h in _HANDED:
        d = f.delta(handed)
        nu = st.nu_R if handed == "R" else st.nu_L
        if nu == 0 or d == 0.0:
            continue
        q = _reflection_factor(surface, d)
        factors[handed] = q
        zetas.append(d * az)
        tot += h * nu * q.real * d**3 * math.cos(2.0 * d * az)
    value = e * e / (32.0 * math.pi * m * m * f.Omega * az) * tot
    zeta_min = min(zetas) if zetas else None
    ok = zeta_min is None or zeta_min >= 10.0
    warning = None if ok else (
        f"asymptotic form used at zeta_min = {zeta_min:.3g} < 10; "
        "large-distance expansion may be inaccurate")
    return AsymptoticShift(value=value, zeta_min=zeta_min, regime_ok=ok,
                           warning=warning, reflection_factors=factors)


@dataclass(frozen=True)
class NaiveMagneticMoment:
    value: float
    unphysical: bool = True
    note: str = ("oscillates with undiminished amplitude at large |z|; the "
                 "magnetic moment is not a meaningful observable in the "
                 "large-trap-frequency retarded regime")


def naive_magnetic_moment(st: LandauState, f: DerivedFrequencies, z: float,
                          surface: SurfaceModel, m: float = 1.0,
                          e: float | None = None) -> NaiveMagneticMoment:
    """Weak-field moment extracted from the asymptotic shift (diagnostic only):

        dmu = (e^3 (nu_L + nu_R) / 64 pi m^3) q omega_H
              [ 2 omega_H sin(2 omega_H z) - 3 cos(2 omega_H z) / z ].
    """
    z = _check_z(z)
    e = _charge(e)
    omega_h = math.sqrt(max(f.Delta_R * f.Delta_L, 0.0))
    q = _reflection_factor(surface, omega_h).real
    nu_sum = st.nu_L + st.nu_R
    value = (e**3 * nu_sum / (64.0 * math.pi * m**3) * q * omega_h
             * (2.0 * omega_h * math.sin(2.0 * omega_h * z)
                - 3.0 * math.cos(2.0 * omega_h * z) / z))
    return NaiveMagneticMoment(value=value)


def splitting_ratio_asymptotic(st: LandauState, f: DerivedFrequencies, z: float,
                               B0: float, surface: SurfaceModel,
                               m: float = 1.0, e: float | None = None) -> float:
    """delta/delta_0 in the large-distance regime: 2 * shift / (|e| B0 / m)."""
    if B0 <= 0:
        raise ValueError("splitting ratio needs B0 > 0")
    e = _charge(e)
    shift = asymptotic_dielectric_shift(st, f, z, surface, m=m, e=e).value
    return 2.0 * shift / (abs(e) * B0 / m)


def splitting_ratio_asymptotic_si(st: LandauState, B0_tesla: float, z_m: float,
                                  omega_h_si: float, surface: SurfaceModel,
                                  k: PhysicalConstants = CODATA) -> float:
    """Same ratio evaluated directly from SI inputs:

        delta/delta_0 = (hbar / 4 pi eps0 c^4) (|e| / 4 m |z| B0 Omega) q
                        [ nu_R Delta_R^3 cos(2 Delta_R z / c)
                          - nu_L Delta_L^3 cos(2 Delta_L z / c) ]

    with all frequencies in rad/s and z in metres (z < 0).
    """
    if z_m >= 0:
        raise ValueError("the electron must sit at z < 0")
    if B0_tesla <= 0:
        raise ValueError("splitting ratio needs B0 > 0")
    lam = k.e_si * B0_tesla / (2.0 * k.m_e)
    omega = math.hypot(omega_h_si, lam)
    deltas = {"R": omega + lam, "L": omega - lam}
    az = -z_m
    tot = 0.0
    for handed, h in _HANDED:
        d = deltas[handed]
        nu = st.nu_R if handed == "R" else st.nu_L
        if nu == 0 or d == 0.0:
            continue
        q = _reflection_factor(surface, d * k.hbar / k.energy_scale).real
        tot += h * nu * q * d**3 * math.cos(2.0 * d * az / k.c)
    pref = (k.hbar / (4.0 * math.pi * k.eps0 * k.c**4)
            * k.e_si / (4.0 * k.m_e * az * B0_tesla * omega))
    return pref * tot


# ----------------------------------------------------------------------
# regime classification
# ----------------------------------------------------------------------
class Regime(Enum):
    SMALL_TRAP = "small_trap"
    INTERMEDIATE_TRAP = "intermediate_trap"
    LARGE_TRAP = "large_trap"
    AMBIGUOUS = "ambiguous"


@dataclass(frozen=True)
class RegimeResult:
    tag: Regime
    omega_H: float
    cyclotron: float        # |e| B0 / m
    inverse_distance: float  # 1/|z| in natural units (c/|z| in SI)
    weak_field_ok: bool
    threshold: float


def classify_regime(p: TrapParameters, z: float, threshold: float = 10.0) -> RegimeResult:
    """Order omega_H, |e| B0/m and 1/|z| into one of the three weak-field regimes.

    Orderings are accepted only when successive rates are separated by the
    given factor; anything else is AMBIGUOUS.
    """
    z = _check_z(z)
    w = p.omega_H
    cyc = abs(p.e) * p.B0 / p.m
    invd = 1.0 / abs(z)
    weak = cyc * threshold <= invd

    def lt(a, b):
        return a * threshold <= b

    if weak and lt(w, cyc):
        tag = Regime.SMALL_TRAP
    elif weak and lt(cyc, w) and lt(w, invd):
        tag = Regime.INTERMEDIATE_TRAP
    elif weak and lt(cyc, invd) and lt(invd, w):
        tag = Regime.LARGE_TRAP
    else:
        tag = Regime.AMBIGUOUS
    return RegimeResult(tag=tag, omega_H=w, cyclotron=cyc, inverse_distance=invd,
                        weak_field_ok=weak, threshold=threshold)


def intermediate_regime_estimate(st: LandauState, B0: float, omega_H: float,
                                 z: float, m: float = 1.0,
                                 e: float | None = None) -> float:
    """Perfect-reflector estimate in the intermediate regime:

        -(3 e^3 B0 / 256 pi m^3 omega_H z^3) (nu_R + nu_L + 1).

    Generic-n evaluation at small |z| converges poorly and is not attempted.
    """
    z = _check_z(z)
    e = _charge(e)
    return -3.0 * e**3 * B0 * (st.nu_R + st.nu_L + 1) / (
        256.0 * math.pi * m**3 * omega_H * z**3)


# ----------------------------------------------------------------------
# free-electron limit
# ----------------------------------------------------------------------
@dataclass(frozen=True)
class FreeLimitCheck:
    numeric: float
    analytic: float

    @property
    def relative_error(self) -> float:
        if self.analytic == 0.0:
            return abs(self.numeric)
        return abs(self.numeric / self.analytic - 1.0)


def _free_limit_cut_coefficient(surface: NonDispersive, z: float,
                                m: float, e: float) -> float:
    """d(total cut sector)/dB0 at B0 -> 0, omega_H -> 0, for a dielectric.

    After regularizing the 1/Delta divergence (whose coefficient is fixed by
    the static factor qt = (n^2-1)/(n^2+1)), the slope reduces to 1-D
    integrals of the cut reflection functions rho(u):

        d(E2E_cut)/dlambda = (e^2/16 pi^2 m^2) (1/4 z^2)
                             { int_0^1 [rho_TE - (rho_TM - qt)/u^2] du + qt }
        d(Q1_cut)/dlambda  = (e^2/8 pi^2 m^2) (1/4 z^2)
                             int_0^1 (1 - u^2) rho_TE / u^2 du

    with lambda = |e| B0 / m.
    """
    import numpy as np
    from scipy import integrate as _int

    n = surface.n
    qt = (n * n - 1.0) / (n * n + 1.0)

    def rho(u):
        g = np.sqrt(1.0 + (n * n - 1.0) * u * u)
        return (1.0 - g) / (1.0 + g), (n * n - g) / (n * n + g)

    def f_e(u):
        te, tm = rho(u)
        return te - (tm - qt) / (u * u)

    def f_q(u):
        te, _ = rho(u)
        return (1.0 - u * u) * te / (u * u)

    ie = _int.quad(f_e, 0.0, 1.0, epsabs=1e-13, limit=200)[0] + qt
    iq = _int.quad(f_q, 0.0, 1.0, epsabs=1e-13, limit=200)[0]
    de_dlam = e * e / (16.0 * math.pi**2 * m * m) * ie / (4.0 * z * z)
    dq_dlam = e * e / (8.0 * math.pi**2 * m * m) * iq / (4.0 * z * z)
    return (abs(e) / m) * (de_dlam + dq_dlam)


def free_limit_moment_check(B0: float, m: float, e: float, z: float,
                            surface: SurfaceModel,
                            cfg: QuadratureConfig = DEFAULT_CONFIG) -> FreeLimitCheck:
    """Consistency of the vanishing-trap limit with the free-electron shift.

    numeric: finite-difference B0 slope of the full engine total at
    omega_H = 1e-4 Lambda in the ground state.  analytic: the closed
    B0-linear coefficient of the same limit (exact for the perfect
    reflector, reduced 1-D cut integrals plus the structural spin-flip
    coefficient for a dielectric).  The two must agree to about 1e-3.
    """
    z = _check_z(z)
    if isinstance(surface, NonDispersive) and surface.n == 1.0:
        return FreeLimitCheck(numeric=0.0, analytic=0.0)
    lam = abs(e) * B0 / (2.0 * m)
    st = LandauState(nu_L=0, nu_R=0)
    vals = []
    for scale in (0.5, 1.5):
        b = B0 * scale
        p = TrapParameters(B0=b, omega_H=1e-4 * abs(e) * b / (2.0 * m), m=m, e=e)
        vals.append(_engine.total_shift(st, p, surface, z, cfg).total)
    numeric = (vals[1] - vals[0]) / (B0 * 1.0)

    if isinstance(surface, PerfectReflector):
        analytic = -e**3 / (32.0 * math.pi**2 * m**3 * z * z)
    else:
        spin = _engine.spin_flip_sector(surface, z, B0=1.0, m=m, e=e, cfg=cfg)
        analytic = (spin[0] + spin[1]) + _free_limit_cut_coefficient(surface, z, m, e)
    return FreeLimitCheck(numeric=numeric, analytic=analytic)


def _charge(e: float | None) -> float:
    if e is None:
        from .units import E_NATURAL
        return E_NATURAL
    if e >= 0:
        raise ValueError("the electron charge must be negative")
    return e
