"""Electron in a 2-D harmonic trap plus a perpendicular magnetic field.

The in-plane Hamiltonian

    H = (px^2 + py^2)/(2m) + m Omega^2 (x^2 + y^2)/2 - (e B0 / 2m) Lz,
    Omega^2 = omega_H^2 + (e B0 / 2m)^2,

separates into two circular-quanta ladders with frequencies

    Delta_R = Omega + Lambda,   Delta_L = Omega - Lambda,
    Lambda = -e B0 / (2 m) >= 0   (the electron charge e is negative),

so that E(nu_L, nu_R) = Delta_R nu_R + Delta_L nu_L + Omega.  This module
provides the closed-form spectrum and ladder matrix elements, and a
brute-force truncated-Fock diagonalization that checks them.

Natural units (hbar = c = eps0 = 1) with m = 1 and e = -sqrt(4 pi alpha)
are used by default; nothing below depends on that choice.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from .units import E_NATURAL

HANDEDNESS = {"R": +1, "L": -1}


@dataclass(frozen=True)
class TrapParameters:
    """Physical inputs in natural units: mass, charge (e < 0), field, trap frequency."""

    B0: float
    omega_H: float
    m: float = 1.0
    e: float = E_NATURAL

    def __post_init__(self):
        if not (self.m > 0 and math.isfinite(self.m)):
            raise ValueError(f"mass must be positive and finite, got {self.m}")
        if not (self.e < 0 and math.isfinite(self.e)):
            raise ValueError(f"electron charge must be negative, got {self.e}")
        if not (self.B0 >= 0 and math.isfinite(self.B0)):
            raise ValueError(f"B0 must be >= 0 and finite, got {self.B0}")
        if not (self.omega_H >= 0 and math.isfinite(self.omega_H)):
            raise ValueError(f"omega_H must be >= 0 and finite, got {self.omega_H}")
        if self.B0 == 0 and self.omega_H == 0:
            raise ValueError("B0 and omega_H cannot both vanish (no bound state)")


@dataclass(frozen=True)
class DerivedFrequencies:
    """Omega, Delta_R, Delta_L and Lambda = -e B0 / 2m."""

    Omega: float
    Delta_R: float
    Delta_L: float
    Lambda: float

    def delta(self, handed: str) -> float:
        return self.Delta_R if handed == "R" else self.Delta_L


@dataclass(frozen=True)
class LandauState:
    """Quantum numbers (nu_L, nu_R) and spin s = +-1/2; <sigma_z> = 2 s."""

    nu_L: int
    nu_R: int
    s: float = 0.5

    def __post_init__(self):
        if self.nu_L < 0 or self.nu_R < 0 or self.nu_L != int(self.nu_L) or self.nu_R != int(self.nu_R):
            raise ValueError(f"nu_L, nu_R must be non-negative integers, got {self.nu_L}, {self.nu_R}")
        if self.s not in (0.5, -0.5):
            raise ValueError(f"s must be +1/2 or -1/2, got {self.s}")

    @property
    def sigma_z(self) -> float:
        return 2.0 * self.s


def derived_frequencies(p: TrapParameters) -> DerivedFrequencies:
    """Omega = sqrt(omega_H^2 + Lambda^2) and Delta_i = Omega + h_i Lambda."""
    lam = -p.e * p.B0 / (2.0 * p.m)
    omega = math.hypot(p.omega_H, lam)
    return DerivedFrequencies(Omega=omega, Delta_R=omega + lam, Delta_L=omega - lam, Lambda=lam)


def state_energy(st: LandauState, f: DerivedFrequencies) -> float:
    """Orbital energy Delta_R nu_R + Delta_L nu_L + Omega (spin Zeeman term excluded)."""
    return f.Delta_R * st.nu_R + f.Delta_L * st.nu_L + f.Omega


def spin_energy(s: float, B0: float, m: float, e: float) -> float:
    """Unperturbed Zeeman energy E_s = -(e B0 / m) s."""
    return -(e * B0 / m) * s


def momentum_matrix_element(handed: str, axis: str, nu: int, delta_nu: int,
                            f: DerivedFrequencies, m: float = 1.0) -> complex:
    """<nu + delta_nu | pi_axis | nu> on the ladder of the given handedness.

    From pi_x = (i/2) sqrt(m/Omega) [Delta_R (bR+ - bR) + Delta_L (bL+ - bL)]
    and  pi_y = (1/2) sqrt(m/Omega) [Delta_R (bR+ + bR) - Delta_L (bL+ + bL)]:

        <nu+1| pi_x |nu> = +(i/2) sqrt(m/Omega) Delta_i sqrt(nu+1)
        <nu-1| pi_x |nu> = -(i/2) sqrt(m/Omega) Delta_i sqrt(nu)
        <nu+1| pi_y |nu> = h_i (1/2) sqrt(m/Omega) Delta_i sqrt(nu+1)
        <nu-1| pi_y |nu> = h_i (1/2) sqrt(m/Omega) Delta_i sqrt(nu)

    A transition that changes both ladders at once has zero element; that case
    is expressed by calling this for one ladder at a time.
    """
    h, d, root = _transition(handed, nu, delta_nu, f)
    c = 0.5 * math.sqrt(m / f.Omega) * d * root
    if axis == "x":
        return 1j * c if delta_nu == +1 else -1j * c
    if axis == "y":
        return complex(h * c)
    raise ValueError(f"axis must be 'x' or 'y', got {axis!r}")


def displacement_matrix_element(handed: str, axis: str, nu: int, delta_nu: int,
                                f: DerivedFrequencies, m: float = 1.0) -> complex:
    """<nu + delta_nu | (r - r0)_axis | nu> on the ladder of the given handedness.

        <nu+1| x - x0 |nu> = sqrt(nu+1) / (2 sqrt(m Omega))
        <nu-1| x - x0 |nu> = sqrt(nu)   / (2 sqrt(m Omega))
        <nu+1| y - y0 |nu> = -h_i i sqrt(nu+1) / (2 sqrt(m Omega))
        <nu-1| y - y0 |nu> = +h_i i sqrt(nu)   / (2 sqrt(m Omega))
    """
    h, _, root = _transition(handed, nu, delta_nu, f)
    c = root / (2.0 * math.sqrt(m * f.Omega))
    if axis == "x":
        return complex(c)
    if axis == "y":
        return -1j * h * c if delta_nu == +1 else 1j * h * c
    raise ValueError(f"axis must be 'x' or 'y', got {axis!r}")


def _transition(handed: str, nu: int, delta_nu: int, f: DerivedFrequencies):
    if handed not in HANDEDNESS:
        raise ValueError(f"handedness must be 'R' or 'L', got {handed!r}")
    if nu < 0:
        raise ValueError("nu must be non-negative")
    if delta_nu not in (+1, -1):
        raise ValueError(f"only nu -> nu +- 1 transitions exist, got delta_nu={delta_nu}")
    if delta_nu == -1 and nu < 1:
        raise ValueError("cannot lower nu = 0")
    root = math.sqrt(nu + 1) if delta_nu == +1 else math.sqrt(nu)
    return HANDEDNESS[handed], f.delta(handed), root


# ----------------------------------------------------------------------
# truncated-Fock brute-force oracle
# ----------------------------------------------------------------------
@dataclass
class FockOracleResult:
    eigenvalues: np.ndarray                 # sorted low-lying spectrum
    labels: list                            # (nu_L, nu_R) for each eigenvalue
    pi_matrix_elements: dict                # (handed, axis, nu, delta) -> complex
    displacement_matrix_elements: dict
    commutator_norm_R: float
    commutator_norm_L: float
    state_residual: float                   # max ||H v - E v|| over labelled states


class FockConvergenceError(RuntimeError):
    pass


def _ladder(n: int) -> sp.csr_matrix:
    return sp.diags(np.sqrt(np.arange(1, n)), offsets=1, format="csr")


def fock_oracle(p: TrapParameters, n_trunc: int, nu_max: int = 3) -> FockOracleResult:
    """Brute-force check of the spectrum and matrix elements.

    Builds the x/y ladder operators truncated at ``n_trunc`` levels each,
    assembles H = (px^2+py^2)/2m + m Omega^2 (x^2+y^2)/2 - (e B0/2m) Lz on the
    product space, diagonalizes it with sparse Lanczos, and extracts ladder
    matrix elements in the numerically constructed circular basis
    bR = (bx - i by)/sqrt(2), bL = (bx + i by)/sqrt(2).
    """
    if n_trunc < 10:
        raise ValueError("n_trunc must be at least 10")
    f = derived_frequencies(p)
    m = p.m
    n = n_trunc
    b = _ladder(n)
    eye = sp.identity(n, format="csr")
    bx = sp.kron(b, eye, format="csr")
    by = sp.kron(eye, b, format="csr")
    scale_x = 1.0 / math.sqrt(2.0 * m * f.Omega)
    scale_p = math.sqrt(m * f.Omega / 2.0)
    x = scale_x * (bx + bx.conj().T)
    y = scale_x * (by + by.conj().T)
    px = 1j * scale_p * (bx.conj().T - bx)
    py = 1j * scale_p * (by.conj().T - by)
    lz = x @ py - px @ y
    ham = (px @ px + py @ py) / (2.0 * m) \
        + 0.5 * m * f.Omega**2 * (x @ x + y @ y) \
        - (p.e * p.B0 / (2.0 * m)) * lz

    b_r = (bx - 1j * by) / math.sqrt(2.0)
    b_l = (bx + 1j * by) / math.sqrt(2.0)

    # commutators, restricted away from the truncation edge
    keep = n - 5
    occ = np.arange(n)
    mask = ((occ[:, None] < keep) & (occ[None, :] < keep)).ravel()
    proj = sp.diags(mask.astype(float), format="csr")
    comm_r = proj @ (b_r @ b_r.conj().T - b_r.conj().T @ b_r - sp.identity(n * n)) @ proj
    comm_l = proj @ (b_l @ b_l.conj().T - b_l.conj().T @ b_l - sp.identity(n * n)) @ proj
    norm_r = spla.norm(comm_r)
    norm_l = spla.norm(comm_l)

    # circular-basis states built by raising from the product vacuum
    vac = np.zeros(n * n, dtype=complex)
    vac[0] = 1.0
    states: dict[tuple, np.ndarray] = {}
    for nl in range(nu_max + 2):
        for nr in range(nu_max + 2):
            v = vac.copy()
            for _ in range(nl):
                v = b_l.conj().T @ v
            for _ in range(nr):
                v = b_r.conj().T @ v
            nrm = np.linalg.norm(v)
            if nrm == 0:
                raise FockConvergenceError("truncation too small to build requested state")
            states[(nl, nr)] = v / nrm

    # eigenvalue check of the labelled states plus direct diagonalization
    residual = 0.0
    labels = []
    energies = []
    for (nl, nr), v in states.items():
        if nl + nr > nu_max:
            continue
        hv = ham @ v
        e = float(np.real(np.vdot(v, hv)))
        residual = max(residual, float(np.linalg.norm(hv - e * v)))
        labels.append((nl, nr))
        energies.append(e)
    order = np.argsort(energies)
    labels = [labels[i] for i in order]
    energies = np.asarray(energies)[order]

    # shift-invert Lanczos around each constructed energy: the nearest true
    # eigenvalue of the assembled H, independent of the ladder construction
    hcsc = ham.tocsc()
    matched = []
    shift = 1e-5 * f.Omega  # keep sigma off the spectrum so the factorization is regular
    for e in energies:
        val = spla.eigsh(hcsc, k=1, sigma=e + shift, which="LM", return_eigenvectors=False)
        matched.append(float(val[0]))
    matched = np.asarray(matched)
    if np.max(np.abs(matched - energies)) > 1e-8 * max(1.0, float(np.max(np.abs(energies)))):
        raise FockConvergenceError("constructed states do not match diagonalized spectrum")

    half_eb = p.e * p.B0 / 2.0
    pi_ops = {"x": px + half_eb * y, "y": py - half_eb * x}
    disp_ops = {"x": x, "y": y}
    pi_elems: dict = {}
    disp_elems: dict = {}
    for handed in ("R", "L"):
        for nu in range(nu_max + 1):
            for dlt in (+1, -1):
                if dlt == -1 and nu == 0:
                    continue
                bra = (nu + dlt, 0) if handed == "L" else (0, nu + dlt)
                ket = (nu, 0) if handed == "L" else (0, nu)
                for axis in ("x", "y"):
                    pi_elems[(handed, axis, nu, dlt)] = complex(
                        np.vdot(states[bra], pi_ops[axis] @ states[ket]))
                    disp_elems[(handed, axis, nu, dlt)] = complex(
                        np.vdot(states[bra], disp_ops[axis] @ states[ket]))

    return FockOracleResult(
        eigenvalues=matched,
        labels=labels,
        pi_matrix_elements=pi_elems,
        displacement_matrix_elements=disp_elems,
        commutator_norm_R=norm_r,
        commutator_norm_L=norm_l,
        state_residual=residual,
    )
