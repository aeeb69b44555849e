"""Treatment-level drug-drug interaction reasoning toolkit."""

__version__ = "0.1.0"
