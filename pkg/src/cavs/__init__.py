"""Adjustment-set selection for causal effect estimation on categorical data."""

from .backdoor import CandidateSet, enumerate_minimal_backdoor_sets, satisfies_backdoor
from .cpdag import (
    EquivalenceClass,
    OrientationChoice,
    cavs_on_cpdag,
    enumerate_equivalence_class,
    is_amenable,
    orient_and_restrict,
    satisfies_gac,
)
from .dataset import Dataset, joint_states
from .errors import CavsError
from .graph import (
    MixedGraph,
    Path,
    VariableId,
    d_separated,
    enumerate_paths,
    path_blocked,
    prune_to_ancestors,
    relatives,
    remove_outgoing,
)
from .intervention import InterventionResult, average_causal_effect, do_effect, estimate_conditional
from .io import emit_network, parse_network, read_csv_dataset, write_csv_dataset
from .network import CptNetwork, forward_sample, random_network
from .selection import SelectionReport, mutual_information, select_adjustment

__version__ = "0.1.0"
