from packages.core.simulate.rng import STREAM_TAGS, environment_states, replicate_generator, run_replicates
from packages.core.simulate.offspring import OffspringLaw
from packages.core.simulate.branching import SimOutcome, sample_lineage, simulate_branching
from packages.core.simulate.lineage import LineageEstimate, estimate_lineage_frequency, lineage_frequencies
from packages.core.simulate.walk import DisperserPath, path_sink_sojourns, return_times, sample_disperser_path
from packages.core.simulate.lyapunov import LyapunovEstimate, estimate_lyapunov

__all__ = [
    "STREAM_TAGS",
    "environment_states",
    "replicate_generator",
    "run_replicates",
    "OffspringLaw",
    "SimOutcome",
    "sample_lineage",
    "simulate_branching",
    "LineageEstimate",
    "estimate_lineage_frequency",
    "lineage_frequencies",
    "DisperserPath",
    "path_sink_sojourns",
    "return_times",
    "sample_disperser_path",
    "LyapunovEstimate",
    "estimate_lyapunov",
]
