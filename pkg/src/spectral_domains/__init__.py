"""spectral-domains: step-function domains over spectral compactifications."""

__version__ = "0.1.0"

__all__ = ["__version__"]
