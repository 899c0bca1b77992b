"""Physical constants used throughout the package."""

from __future__ import annotations

from dataclasses import dataclass

from scipy import constants

from .errors import ValidationError


@dataclass(frozen=True)
class PhysParams:
    """Unit system for a calculation.

    The defaults (``hbar = 1``, ``mass = 1/2``) make ``hbar**2 / (2 mass) = 1``
    so that an energy and the squared wave number coincide, ``E = q**2``.
    """

    hbar: float = 1.0
    mass: float = 0.5
    charge: float = 1.0
    boltzmann: float = 1.0

    def __post_init__(self):
        if not self.hbar > 0:
            raise ValidationError("hbar must be positive")
        if not self.mass > 0:
            raise ValidationError("mass must be positive")
        if not self.boltzmann > 0:
            raise ValidationError("boltzmann must be positive")

    @property
    def kinetic(self) -> float:
        """The prefactor hbar**2 / (2 mass) of the kinetic operator."""
        return self.hbar**2 / (2.0 * self.mass)

    def energy_from_wavenumber(self, q):
        return self.kinetic * q**2

    @classmethod
    def natural(cls) -> "PhysParams":
        return cls()

    @classmethod
    def physical(cls, mass: float = constants.m_e, charge: float = -constants.e) -> "PhysParams":
        """SI units, an electron by default (lengths in metres, energies in joules)."""
        return cls(hbar=constants.hbar, mass=mass, charge=charge, boltzmann=constants.k)


NATURAL = PhysParams()
