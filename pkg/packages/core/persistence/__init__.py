from packages.core.persistence.verdict import PersistenceVerdict, classify, make_verdict
from packages.core.persistence.criteria import (
    criterion_general,
    criterion_sigma_form,
    criterion_two_habitat,
    criterion_two_habitat_graph,
    sufficient_mean_sojourn,
)
from packages.core.persistence.periodic import (
    criterion_periodic_general,
    criterion_periodic_two_patch,
    doubled_chain,
    isolated_growth,
    survival_in_sinks_only,
)

__all__ = [
    "PersistenceVerdict",
    "classify",
    "make_verdict",
    "criterion_general",
    "criterion_sigma_form",
    "criterion_two_habitat",
    "criterion_two_habitat_graph",
    "sufficient_mean_sojourn",
    "criterion_periodic_general",
    "criterion_periodic_two_patch",
    "doubled_chain",
    "isolated_growth",
    "survival_in_sinks_only",
]
