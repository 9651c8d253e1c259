"""Age-resolved personal income distribution analytics.

The package builds mean-income curves over work experience from binned
tables or microdata, estimates where they peak, relates peak movement
to real GDP per capita through a square-root scaling law, measures the
high-income tail by age, simulates the underlying income-evolution
model, and matches observed curves against a reference library.
"""

__version__ = "0.1.0"

from .errors import (
    DataValidationError,
    DomainError,
    InsufficientDataError,
    PidkitError,
)

__all__ = [
    "DataValidationError",
    "DomainError",
    "InsufficientDataError",
    "PidkitError",
    "__version__",
]
