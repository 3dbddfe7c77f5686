"""Co-Poisson summation, Muntz-Mellin identities and Sonine-space constructions."""

__version__ = "0.1.0"
