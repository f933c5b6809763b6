"""Numerical evaluation of the surface-induced spin-energy shift.

All five components of the differential (sigma_z-proportional) energy shift
of the trapped electron are evaluated for a perfect reflector or a
non-dispersive dielectric half-space at z > 0, with the electron at z < 0:

* ``pole_sector``:   Landau-resonance residues (the dominant oscillatory
  part at large distance), reduced to 1-D integrals over the rescaled
  propagating (x) and evanescent (y) pole variables,
* ``cut_sector``:    the branch-cut legs along k_z = -i kappa, reduced to a
  damped double integral over (kappa, k_par),
* ``spin_flip_sector``: the virtual spin-flip terms, evaluated on the real
  k_z axis plus the total-internal-reflection segment,
* ``q2_sector``:     identically zero (the TE coefficient vanishes at
  k_z = -i k_par), with an optional numerical validation of that fact.

Every component is the coefficient of sigma_z, in natural units.  The
distance convention is z < 0 with zeta_i = Delta_i |z|.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np
from scipy import integrate

from .landau import DerivedFrequencies, LandauState, TrapParameters, derived_frequencies
from .special import bessel_k0, bessel_k1
from .surfaces import (DispersiveResonance, NonDispersive, PerfectReflector, Segment,
                       SurfaceModel, WaveGeometry, fresnel, kzd)


class QuadratureError(RuntimeError):
    """Raised when an integral cannot be pushed to the requested tolerance."""


@dataclass(frozen=True)
class QuadratureConfig:
    rel_tol: float = 1e-10
    abs_tol: float = 1e-14
    max_subdivisions: int = 200
    y_upper_cutoff: float = 40.0       # exponential-weight cutoff for damped integrals
    kpar_upper_cutoff: float = 40.0    # same, for the outer k_par / kappa integrals
    oscillatory_strategy: str = "adaptive_subdivision_per_halfperiod"

    def __post_init__(self):
        if self.rel_tol <= 0 or self.abs_tol <= 0:
            raise ValueError("tolerances must be positive")
        if self.oscillatory_strategy not in ("adaptive_subdivision_per_halfperiod", "filon"):
            raise ValueError(f"unknown oscillatory strategy {self.oscillatory_strategy!r}")


DEFAULT_CONFIG = QuadratureConfig()


@dataclass(frozen=True)
class ShiftBreakdown:
    """All shift components as coefficients of sigma_z (natural units)."""

    E1: float
    E2B: float
    E2E_pole: float
    E2E_cut: float
    Q1_pole: float
    Q1_cut: float
    Q2: float = 0.0

    @property
    def total(self) -> float:
        return self.E1 + self.E2B + self.E2E_pole + self.E2E_cut \
            + self.Q1_pole + self.Q1_cut + self.Q2

    def scaled(self, factor: float) -> "ShiftBreakdown":
        return ShiftBreakdown(*(factor * v for v in
                                (self.E1, self.E2B, self.E2E_pole, self.E2E_cut,
                                 self.Q1_pole, self.Q1_cut, self.Q2)))

    def at_sigma_z(self, sigma_z: float) -> "ShiftBreakdown":
        """Shift of the spin state with <sigma_z> = +-1."""
        if sigma_z not in (+1.0, -1.0, +1, -1):
            raise ValueError("sigma_z expectation must be +-1")
        return self.scaled(float(sigma_z))


def _require_supported(surface: SurfaceModel) -> None:
    if isinstance(surface, DispersiveResonance):
        raise ValueError("dispersive surfaces are handled only by the asymptotic "
                         "closed forms, not the numerical engine")
    if not isinstance(surface, (PerfectReflector, NonDispersive)):
        raise TypeError(f"unsupported surface model {surface!r}")


def _is_trivial(surface: SurfaceModel) -> bool:
    return isinstance(surface, NonDispersive) and surface.n == 1.0


# ----------------------------------------------------------------------
# rescaled reflection functions (vectorized)
# ----------------------------------------------------------------------
def _pole_r(pol: str, sector: str, a: np.ndarray, surface: SurfaceModel) -> np.ndarray:
    """R^+/- on the pole circle; complex on the evanescent branch."""
    if isinstance(surface, PerfectReflector):
        val = -1.0 if pol == "TE" else 1.0
        return np.full_like(np.asarray(a, dtype=complex), val)
    n = surface.n
    a = np.asarray(a, dtype=float)
    if sector == "+":
        root = np.sqrt(a * a + (n * n - 1.0)).astype(complex)
    else:
        rad = a * a - (n * n - 1.0)
        root = np.where(rad >= 0, np.sqrt(np.abs(rad)), 1j * np.sqrt(np.abs(rad)))
    front = a if pol == "TE" else n * n * a
    return (front - root) / (front + root)


def _cut_rho(pol: str, u: np.ndarray, surface: SurfaceModel) -> np.ndarray:
    """Reflection coefficients on the omega cut as functions of u = xi/kappa."""
    if isinstance(surface, PerfectReflector):
        return np.full_like(np.asarray(u, dtype=float), -1.0 if pol == "TE" else 1.0)
    n = surface.n
    g = np.sqrt(1.0 + (n * n - 1.0) * u * u)
    if pol == "TE":
        return (1.0 - g) / (1.0 + g)
    return (n * n - g) / (n * n + g)


# ----------------------------------------------------------------------
# oscillatory quadrature on [0, 1] with weight sin(2 zeta x)
# ----------------------------------------------------------------------
_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(12)
_GL_NODES_HI, _GL_WEIGHTS_HI = np.polynomial.legendre.leggauss(24)


def _sin_weighted(f, zeta: float, cfg: QuadratureConfig) -> float:
    """int_0^1 f(x) sin(2 zeta x) dx for smooth vectorizable f."""
    if zeta == 0.0:
        return 0.0
    if cfg.oscillatory_strategy == "filon":
        val, err = integrate.quad(lambda x: float(f(np.array([x]))[0]), 0.0, 1.0,
                                  weight="sin", wvar=2.0 * zeta,
                                  epsabs=cfg.abs_tol, epsrel=cfg.rel_tol,
                                  limit=cfg.max_subdivisions)
        return val
    # subdivide at the zeros of sin(2 zeta x); Gauss-Legendre on each half-period
    edges = np.arange(0.0, 1.0, math.pi / (2.0 * zeta)) if zeta > math.pi / 2 \
        else np.array([0.0])
    edges = np.append(edges, 1.0)

    def composite(nodes, weights):
        a = edges[:-1]
        b = edges[1:]
        mid = 0.5 * (a + b)[:, None]
        half = 0.5 * (b - a)[:, None]
        x = (mid + half * nodes[None, :]).ravel()
        w = (half * weights[None, :]).ravel()
        return float(np.sum(w * f(x) * np.sin(2.0 * zeta * x)))

    lo = composite(_GL_NODES, _GL_WEIGHTS)
    hi = composite(_GL_NODES_HI, _GL_WEIGHTS_HI)
    if abs(hi - lo) > max(cfg.abs_tol, cfg.rel_tol * abs(hi)) * 10.0:
        val, err = integrate.quad(lambda x: float(f(np.array([x]))[0]), 0.0, 1.0,
                                  weight="sin", wvar=2.0 * zeta,
                                  epsabs=cfg.abs_tol, epsrel=cfg.rel_tol,
                                  limit=cfg.max_subdivisions)
        return val
    return hi


def _exp_weighted(h, zeta: float, kink: float | None, cfg: QuadratureConfig) -> float:
    """int_0^inf h(y) exp(-2 zeta y) dy with an optional sqrt kink in h."""
    tmax = cfg.y_upper_cutoff
    pts = []
    if kink is not None:
        tk = 2.0 * zeta * kink
        if 0.0 < tk < tmax:
            pts.append(tk)
    val, err = integrate.quad(
        lambda t: h(t / (2.0 * zeta)) * math.exp(-t), 0.0, tmax,
        points=pts or None, epsabs=cfg.abs_tol, epsrel=cfg.rel_tol,
        limit=cfg.max_subdivisions)
    if err > 10.0 * max(cfg.abs_tol, cfg.rel_tol * abs(val)) + 1e-300:
        raise QuadratureError(f"damped integral error estimate {err:.2e} too large")
    return val / (2.0 * zeta)


# ----------------------------------------------------------------------
# pole sector
# ----------------------------------------------------------------------
def pole_sector(st: LandauState, f: DerivedFrequencies, surface: SurfaceModel,
                z: float, cfg: QuadratureConfig = DEFAULT_CONFIG,
                e: float | None = None, m: float = 1.0) -> tuple[float, float]:
    """Landau-pole contributions (E2E_pole, Q1_pole).

    For each excited ladder (nu_i > 0), with zeta = Delta_i |z|:

        E2E += (e^2 / 32 pi m^2 Omega) h_i Delta_i^4 nu_i
               { int_0^1 [R+_TE - x^2 R+_TM] sin(2 zeta x) dx
                 - Re int_0^inf [R-_TE + y^2 R-_TM] e^(-2 zeta y) dy }
        Q1  += (e^2 / 16 pi m^2 Omega) h_i Delta_i^4 nu_i
               { int_0^1 (x^2 - 1) R+_TE sin(2 zeta x) dx
                 + Re int_0^inf (y^2 + 1) R-_TE e^(-2 zeta y) dy }

    Both vanish identically for nu_R = nu_L = 0 and for n = 1.
    """
    _require_supported(surface)
    if z >= 0:
        raise ValueError("the electron must sit at z < 0")
    if e is None:
        e = _default_charge()
    if _is_trivial(surface):
        return 0.0, 0.0
    az = -z
    e2 = e * e
    kink = None
    if isinstance(surface, NonDispersive):
        kink = math.sqrt(surface.n**2 - 1.0)
    tot_e = 0.0
    tot_q = 0.0
    for handed, h in (("R", +1.0), ("L", -1.0)):
        nu = st.nu_R if handed == "R" else st.nu_L
        delta = f.delta(handed)
        if nu == 0 or delta == 0.0:
            continue
        zeta = delta * az

        def ge(x):
            return np.real(_pole_r("TE", "+", x, surface)
                           - x * x * _pole_r("TM", "+", x, surface))

        def gq(x):
            return np.real((x * x - 1.0) * _pole_r("TE", "+", x, surface))

        def he(y):
            yy = np.asarray([y], dtype=float)
            val = _pole_r("TE", "-", yy, surface) + yy * yy * _pole_r("TM", "-", yy, surface)
            return float(np.real(val)[0])

        def hq(y):
            yy = np.asarray([y], dtype=float)
            return float(np.real((yy * yy + 1.0) * _pole_r("TE", "-", yy, surface))[0])

        xe = _sin_weighted(ge, zeta, cfg)
        xq = _sin_weighted(gq, zeta, cfg)
        ye = _exp_weighted(he, zeta, kink, cfg)
        yq = _exp_weighted(hq, zeta, kink, cfg)
        tot_e += h * delta**4 * nu * (xe - ye)
        tot_q += h * delta**4 * nu * (xq + yq)
    pref = e2 / (32.0 * math.pi * m * m * f.Omega)
    return pref * tot_e, 2.0 * pref * tot_q


# ----------------------------------------------------------------------
# cut sector
# ----------------------------------------------------------------------
_PSI_NODES, _PSI_WEIGHTS = np.polynomial.legendre.leggauss(48)
_PSI_NODES_HI, _PSI_WEIGHTS_HI = np.polynomial.legendre.leggauss(96)


def _cut_inner(kappa: float, delta: float, surface: SurfaceModel,
               hi: bool = False) -> tuple[float, float]:
    """(A_E, A_Q)(kappa): the k_par integral across the cut at fixed kappa.

    With u = xi/kappa and the peak of 1/(kappa^2 u^2 + Delta^2) resolved by
    u = (Delta/kappa) tan(psi):

        A_E = (kappa^3 / kappa Delta) int_0^psimax [u^2 rho_TE - rho_TM] dpsi
        A_Q = (kappa^3 / kappa Delta) int_0^psimax (1 - u^2) rho_TE dpsi
    """
    nodes, weights = (_PSI_NODES_HI, _PSI_WEIGHTS_HI) if hi else (_PSI_NODES, _PSI_WEIGHTS)
    psimax = math.atan2(kappa, delta)
    half = 0.5 * psimax
    psi = half * (nodes + 1.0)
    w = half * weights
    u = (delta / kappa) * np.tan(psi)
    rho_te = _cut_rho("TE", u, surface)
    rho_tm = _cut_rho("TM", u, surface)
    scale = kappa * kappa / delta
    a_e = scale * float(np.sum(w * (u * u * rho_te - rho_tm)))
    a_q = scale * float(np.sum(w * (1.0 - u * u) * rho_te))
    return a_e, a_q


def cut_sector(st: LandauState, f: DerivedFrequencies, surface: SurfaceModel,
               z: float, cfg: QuadratureConfig = DEFAULT_CONFIG,
               e: float | None = None, m: float = 1.0) -> tuple[float, float]:
    """Branch-cut contributions (E2E_cut, Q1_cut).

    Twice the odd-in-omega part of the renormalized integrands, evaluated at
    omega = -i sqrt(kappa^2 - k_par^2) and damped by exp(-2 kappa |z|):

        E2E_cut = (e^2/32 pi^2 m^2 Omega) sum_i h_i Delta_i^2
                  int dk_par k_par int_kpar^inf dkappa
                  (xi/(xi^2+Delta_i^2)) [R_TE - (kappa^2/xi^2) R_TM] e^(-2 kappa |z|)
        Q1_cut  = (e^2/16 pi^2 m^2 Omega) sum_i h_i Delta_i^2
                  int dk_par k_par^3 int dkappa R_TE/(xi (xi^2+Delta_i^2)) e^(-2 kappa |z|)

    independent of nu_R, nu_L.
    """
    _require_supported(surface)
    if z >= 0:
        raise ValueError("the electron must sit at z < 0")
    if e is None:
        e = _default_charge()
    if _is_trivial(surface):
        return 0.0, 0.0
    az = -z
    e2 = e * e
    deltas = {"R": f.Delta_R, "L": f.Delta_L}

    def integrand(t: float) -> np.ndarray:
        kap = t / (2.0 * az)
        out = np.zeros(4)
        for j, handed in enumerate(("R", "L")):
            d = deltas[handed]
            if d == 0.0:
                continue
            a_e, a_q = _cut_inner(kap, d, surface)
            out[2 * j] = a_e
            out[2 * j + 1] = a_q
        return out * math.exp(-t)

    res = integrate.quad_vec(integrand, 0.0, cfg.kpar_upper_cutoff,
                             epsabs=cfg.abs_tol, epsrel=cfg.rel_tol,
                             limit=cfg.max_subdivisions)
    vals = res[0] / (2.0 * az)
    e_cut = 0.0
    q_cut = 0.0
    for j, (handed, h) in enumerate((("R", +1.0), ("L", -1.0))):
        d = deltas[handed]
        e_cut += h * d * d * vals[2 * j]
        q_cut += h * d * d * vals[2 * j + 1]
    pref = e2 / (32.0 * math.pi**2 * m * m * f.Omega)
    return pref * e_cut, 2.0 * pref * q_cut


# ----------------------------------------------------------------------
# spin-flip sector
# ----------------------------------------------------------------------
def _spin_inner(kpar: float, az: float, surface: SurfaceModel,
                cfg: QuadratureConfig) -> tuple[float, float]:
    """Full-line k_z integrals (E1, E2B brackets) at fixed k_par.

    The constant large-k_z reflection values are integrated in closed form
    through K0/K1; the remainder decays like 1/k_z^3 and is integrated with
    a cosine weight; the total-internal-reflection segment is added for a
    dielectric.
    """
    theta = 2.0 * kpar * az
    if isinstance(surface, PerfectReflector):
        r_te_inf, r_tm_inf = -1.0, 1.0
        n = None
    else:
        n = surface.n
        r_te_inf = (1.0 - n) / (1.0 + n)
        r_tm_inf = (n - 1.0) / (n + 1.0)
    k0v = bessel_k0(theta)
    k1v = bessel_k1(theta)
    const_e1 = 2.0 * ((r_te_inf - r_tm_inf) * k0v + 4.0 * r_tm_inf * kpar * az * k1v)
    const_e2b = 2.0 * ((r_tm_inf - r_te_inf) * k0v + 2.0 * r_te_inf * kpar * az * k1v)
    if n is None:
        return const_e1, const_e2b

    n2 = n * n
    kp2 = kpar * kpar
    eabs = max(cfg.abs_tol, 1e-12 * (abs(const_e1) + abs(const_e2b) + 1e-6))
    erel = max(cfg.rel_tol, 1e-9)

    def diff1(kz: float) -> float:
        w2 = kz * kz + kp2
        kd = math.sqrt(n2 * w2 - kp2)
        r_te = (kz - kd) / (kz + kd) - r_te_inf
        r_tm = (n2 * kz - kd) / (n2 * kz + kd) - r_tm_inf
        return 2.0 * (r_te + (kp2 - kz * kz) / w2 * r_tm) / math.sqrt(w2)

    def diff2(kz: float) -> float:
        w2 = kz * kz + kp2
        kd = math.sqrt(n2 * w2 - kp2)
        r_te = (kz - kd) / (kz + kd) - r_te_inf
        r_tm = (n2 * kz - kd) / (n2 * kz + kd) - r_tm_inf
        return 2.0 * (-r_te * kz * kz + w2 * r_tm) / (w2 * math.sqrt(w2))

    a_cut = max(cfg.kpar_upper_cutoff / (2.0 * az), 8.0 * kpar)
    d1v, _ = integrate.quad(diff1, 1e-300, a_cut, weight="cos", wvar=2.0 * az,
                            epsabs=eabs, epsrel=erel, limit=cfg.max_subdivisions)
    d2v, _ = integrate.quad(diff2, 1e-300, a_cut, weight="cos", wvar=2.0 * az,
                            epsabs=eabs, epsrel=erel, limit=cfg.max_subdivisions)

    kc = kpar * math.sqrt(n2 - 1.0) / n

    def segment(q: float) -> tuple[float, float]:
        w2 = kp2 - q * q
        w = math.sqrt(w2)
        kk = (n2 - 1.0) * kp2 - n2 * q * q
        bigk = math.sqrt(max(kk, 0.0))
        j_te = 4.0 * q * bigk / (q * q + bigk * bigk)
        j_tm = 4.0 * n2 * q * bigk / (n2 * n2 * q * q + bigk * bigk)
        damp = math.exp(-2.0 * q * az)
        s1 = damp * (j_te + (kp2 + q * q) / w2 * j_tm) / w
        s2 = damp * (q * q * j_te + w2 * j_tm) / (w2 * w)
        return s1, s2

    s1v, _ = integrate.quad(lambda q: segment(q)[0], 0.0, kc,
                            epsabs=eabs, epsrel=erel, limit=cfg.max_subdivisions)
    s2v, _ = integrate.quad(lambda q: segment(q)[1], 0.0, kc,
                            epsabs=eabs, epsrel=erel, limit=cfg.max_subdivisions)
    return const_e1 + d1v + s1v, const_e2b + d2v + s2v


def spin_flip_sector(surface: SurfaceModel, z: float, B0: float, m: float = 1.0,
                     e: float | None = None,
                     cfg: QuadratureConfig = DEFAULT_CONFIG) -> tuple[float, float]:
    """Virtual-spin-flip contributions (E1, E2B), exactly linear in B0.

    E1  = (e^3 B0 / 32 pi^2 m^3) int dk_par k_par C[(R_TE + (k_par^2 - k_z^2) R_TM / w^2)/w]
    E2B = (e^3 B0 / 32 pi^2 m^3) int dk_par k_par C[(-R_TE k_z^2 + (k_z^2+k_par^2) R_TM)/w^3]

    where C[.] is the full real-k_z-line integral with phase e^(2 i k_z z)
    plus the evanescent-segment piece.  Independent of the trap ladder.
    """
    _require_supported(surface)
    if z >= 0:
        raise ValueError("the electron must sit at z < 0")
    if e is None:
        e = _default_charge()
    if _is_trivial(surface) or B0 == 0.0:
        return 0.0, 0.0
    az = -z
    pref = e**3 * B0 / (32.0 * math.pi**2 * m**3)

    def outer(s: float) -> np.ndarray:
        kpar = s / (2.0 * az)
        v1, v2 = _spin_inner(kpar, az, surface, cfg)
        return np.array([v1, v2]) * kpar

    res = integrate.quad_vec(outer, 1e-12, cfg.kpar_upper_cutoff,
                             epsabs=cfg.abs_tol, epsrel=cfg.rel_tol,
                             limit=cfg.max_subdivisions)
    vals = res[0] / (2.0 * az)
    return pref * vals[0], pref * vals[1]


# ----------------------------------------------------------------------
# Q2 sector
# ----------------------------------------------------------------------
def q2_sector(surface: SurfaceModel | None = None, validate: bool = False,
              rng: np.random.Generator | None = None,
              samples: int = 100) -> float:
    """The second quadrupole term: exactly zero.

    The TE reflection coefficient vanishes at k_z = -i k_par, so its
    integrand is analytic in the lower half plane.  With ``validate=True``
    that vanishing is checked numerically on random (n, k_par).
    """
    if validate:
        rng = rng or np.random.default_rng(0)
        for _ in range(samples):
            n = float(rng.uniform(1.01, 8.0))
            kpar = float(rng.uniform(0.05, 10.0))
            kz = -1j * kpar
            g = WaveGeometry(k_par=kpar, k_z=kz,
                             k_z_d=kzd(n, kz, kpar, Segment.OMEGA_CUT), omega=0.0)
            r = fresnel("TE", n, g).R_vac
            if abs(r) > 1e-13:
                raise AssertionError(
                    f"broken branch convention: |R_TE(-i k_par)| = {abs(r):.3e} "
                    f"at n={n}, k_par={kpar}")
    return 0.0


# ----------------------------------------------------------------------
# totals
# ----------------------------------------------------------------------
def _default_charge() -> float:
    from .units import E_NATURAL
    return E_NATURAL


def total_shift(st: LandauState, p: TrapParameters, surface: SurfaceModel,
                z: float, cfg: QuadratureConfig = DEFAULT_CONFIG) -> ShiftBreakdown:
    """All components of the differential shift at z < 0 (coefficient of sigma_z)."""
    f = derived_frequencies(p)
    e2e_pole, q1_pole = pole_sector(st, f, surface, z, cfg, e=p.e, m=p.m)
    e2e_cut, q1_cut = cut_sector(st, f, surface, z, cfg, e=p.e, m=p.m)
    e1, e2b = spin_flip_sector(surface, z, p.B0, m=p.m, e=p.e, cfg=cfg)
    return ShiftBreakdown(E1=e1, E2B=e2b, E2E_pole=e2e_pole, E2E_cut=e2e_cut,
                          Q1_pole=q1_pole, Q1_cut=q1_cut, Q2=q2_sector())


def zeeman_splitting_ratio(st: LandauState, p: TrapParameters, surface: SurfaceModel,
                           z: float, cfg: QuadratureConfig = DEFAULT_CONFIG,
                           breakdown: ShiftBreakdown | None = None) -> float:
    """delta / delta_0: the spin-splitting shift in units of |e| B0 / m.

    delta = shift(sigma_z=+1) - shift(sigma_z=-1) = 2 * total.
    """
    if p.B0 <= 0:
        raise ValueError("the splitting ratio needs B0 > 0")
    if breakdown is None:
        breakdown = total_shift(st, p, surface, z, cfg)
    delta0 = abs(p.e) * p.B0 / p.m
    return 2.0 * breakdown.total / delta0
