"""Physical constants and SI <-> natural-unit conversion.

Internally everything runs in natural units hbar = c = eps0 = 1 with the
electron mass set to 1, so energies are measured in m_e c^2, lengths in the
reduced Compton wavelength hbar/(m_e c), angular frequencies in m_e c^2/hbar,
and the electron charge is e = -sqrt(4 pi alpha).  Magnetic flux density is
scaled so that |e| B / m is the cyclotron frequency in both unit systems.

Conversion happens only at the CLI/API boundary; CODATA 2018 values below.
"""
from __future__ import annotations

import math
from dataclasses import dataclass


@dataclass(frozen=True)
class PhysicalConstants:
    hbar: float = 1.054571817e-34          # J s
    c: float = 299792458.0                 # m / s
    eps0: float = 8.8541878128e-12         # F / m
    m_e: float = 9.1093837015e-31          # kg
    e_si: float = 1.602176634e-19          # C (elementary charge, positive)
    alpha: float = 7.2973525693e-3         # fine-structure constant

    @property
    def compton_length(self) -> float:
        """Reduced Compton wavelength hbar / (m_e c) in metres."""
        return self.hbar / (self.m_e * self.c)

    @property
    def energy_scale(self) -> float:
        """m_e c^2 in joules."""
        return self.m_e * self.c**2

    @property
    def frequency_scale(self) -> float:
        """m_e c^2 / hbar in rad/s: one natural unit of angular frequency."""
        return self.energy_scale / self.hbar

    @property
    def b_field_scale(self) -> float:
        """Tesla per natural unit of B.

        Fixed by requiring |e_nat| B_nat = hbar |e| B_SI / (m_e^2 c^2).
        """
        return self.m_e**2 * self.c**2 * math.sqrt(4.0 * math.pi * self.alpha) / (
            self.hbar * self.e_si)


CODATA = PhysicalConstants()

E_NATURAL = -math.sqrt(4.0 * math.pi * CODATA.alpha)


def b_si_to_natural(b_tesla: float, k: PhysicalConstants = CODATA) -> float:
    return b_tesla / k.b_field_scale


def b_natural_to_si(b_nat: float, k: PhysicalConstants = CODATA) -> float:
    return b_nat * k.b_field_scale


def length_si_to_natural(metres: float, k: PhysicalConstants = CODATA) -> float:
    return metres / k.compton_length


def length_natural_to_si(nat: float, k: PhysicalConstants = CODATA) -> float:
    return nat * k.compton_length


def angular_frequency_si_to_natural(rad_per_s: float, k: PhysicalConstants = CODATA) -> float:
    return rad_per_s / k.frequency_scale


def angular_frequency_natural_to_si(nat: float, k: PhysicalConstants = CODATA) -> float:
    return nat * k.frequency_scale


def energy_natural_to_si(nat: float, k: PhysicalConstants = CODATA) -> float:
    """Natural energy (units of m_e c^2) to joules."""
    return nat * k.energy_scale
