"""deepdict: deep n-gram dictionary compression and compression-derived features."""

__version__ = "0.1.0"

from . import corpus, errors, features, learn, lp, model, pipeline, recon, simplex  # noqa: F401
