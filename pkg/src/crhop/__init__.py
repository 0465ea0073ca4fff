"""crhop: seeded slotted-time simulator for multihop blind rendezvous
in cognitive-radio networks."""

from .activity import ActivityRates, ChannelProcess, make_profile, state_probabilities, utilization
from .engine import RunRecord, Scenario, build_environment, run
from .errors import (
    CrhopError,
    GenerationFailureError,
    InvalidComparisonError,
    InvalidParameterError,
    NoChannelError,
    UndefinedPprError,
)
from .experiment import SweepConfig, check_table1, emit_plotdata, run_cell, run_sweep
from .handshake import NeighborTables, run_2wh, run_3wh
from .metrics import attr, compare, ppr, summarize
from .protocols import make_strategy
from .spectrum import SpectrumMap, assign_channels, partition_prime
from .topology import Topology, generate_topology, load_positions

__all__ = [
    "ActivityRates",
    "ChannelProcess",
    "CrhopError",
    "GenerationFailureError",
    "InvalidComparisonError",
    "InvalidParameterError",
    "NeighborTables",
    "NoChannelError",
    "RunRecord",
    "Scenario",
    "SpectrumMap",
    "SweepConfig",
    "Topology",
    "UndefinedPprError",
    "assign_channels",
    "attr",
    "build_environment",
    "check_table1",
    "compare",
    "emit_plotdata",
    "generate_topology",
    "load_positions",
    "make_profile",
    "make_strategy",
    "partition_prime",
    "ppr",
    "run",
    "run_2wh",
    "run_3wh",
    "run_cell",
    "run_sweep",
    "state_probabilities",
    "summarize",
    "utilization",
]
