"""Figure rendering for the polbec CLI's CSV/JSON artifacts."""

__version__ = "0.1.0"
