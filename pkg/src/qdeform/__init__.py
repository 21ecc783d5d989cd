"""q-deformed rationals, irrationals and the q-deformed modular group."""

from .polycore import LaurentPoly, QSeries, RatFn, Unit, q

__version__ = "0.1.0"

__all__ = ["LaurentPoly", "QSeries", "RatFn", "Unit", "q"]
