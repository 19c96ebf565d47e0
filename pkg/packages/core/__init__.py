__all__ = [
    "analytics",
    "disperser",
    "environment",
    "growth",
    "model",
    "numerics",
    "persistence",
    "schemas",
    "simulate",
]
