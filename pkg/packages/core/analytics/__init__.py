from packages.core.analytics.aggregator import summarize_outcomes
from packages.core.analytics.reports import analyze
from packages.core.analytics.export import from_json, to_csv, to_json

__all__ = ["analyze", "summarize_outcomes", "from_json", "to_csv", "to_json"]
