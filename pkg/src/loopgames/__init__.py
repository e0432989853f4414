"""Finitely presented infinite binary extensive games and their equilibria.

Graphs with back-edges and counter-affine payoffs stand for infinite game
trees; every predicate on them (termination of plays, utilities, subgame
perfect and Nash equilibria, convertibility) is decided exactly, with
replayable witnesses for every failure.
"""

from .affine import COUNTER, Affine, SymbolicTruth, Truth, find_witness, holds_forall
from .analysis import (
    Condition,
    CyclicGraph,
    DivergentPlay,
    EquilibriumReport,
    InductionResult,
    LeafPlay,
    TruncationUnsound,
    Verdict,
    Witness,
    always_leads_to_leaf,
    backward_induction,
    convertible,
    enumerate_deviations,
    is_infinite,
    leads_to_leaf,
    nash_check,
    play_from,
    profile_leq,
    replay_witness,
    sgpe_check,
    utility_of,
)
from .catalog import CatalogEntry, build_named, list_catalog
from .core import (
    BinTreeGraph,
    Choice,
    Edge,
    GameGraph,
    Leaf,
    Node,
    ParametricNotSupported,
    Preference,
    ProfileGraph,
    bisimilar,
    reachable,
    reachable_offsets,
    strip_choices,
    unfold,
    validate,
)
from .dot import export_dot
from .dsl import ModelError, ModelFile, model_for_graph, parse_model, render_model
from .fixpoint import greatest_fixpoint, least_fixpoint

__version__ = "0.1.0"
