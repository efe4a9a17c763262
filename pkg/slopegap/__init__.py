"""slopegap: slope gap distributions of single-cusp Veech translation surfaces."""

__version__ = "0.1.0"
