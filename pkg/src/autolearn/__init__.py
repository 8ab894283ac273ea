"""Grammatical inference: L*, the ID family, IKL and RPNI against a synthesized teacher."""
from importlib.resources import files

from .automata import (
    AutomatonError,
    Dfa,
    KripkeStructure,
    Nfa,
    PrefixTree,
    StatePartition,
    accepts,
    bit_slice,
    build_prefix_tree,
    canonical,
    complete_with_dead_state,
    counterexample,
    determinize,
    equivalent,
    isomorphic,
    minimize,
    nfa_accepts,
    product,
    quotient,
    slice_product,
)
from .id_family import D0, PartitionTable, build_tset, id_run, iid_run, ids_run
from .ikl import ikl_hypothesis, ikl_ingest, ikl_refine_all, ikl_run
from .lstar import LearnerError, ObservationTable, lstar_run
from .rpni import MergeState, Sample, rpni2_run, rpni2_split, rpni_run
from .teacher import KripkeTeacher, LabeledExample, QueryStats, Teacher, example_stream

__version__ = "0.1.0"


def fixture(name: str) -> str:
    """Text of a bundled fixture file."""
    return files(__name__).joinpath("fixtures", name).read_text(encoding="utf-8")
