"""girthforge: design, analysis and simulation of high-girth QC-LDPC codes.

The package works on three layered descriptions of a parity-check matrix:

* :class:`~girthforge.algebra.PolyParityMatrix` — multivariate polynomial
  entries, one variable per level of circulant structure;
* :class:`~girthforge.trees.TreeMatrix` — the same codes as labeled trees,
  the form the hill climber mutates;
* :class:`~girthforge.algebra.BaseMatrix` /
  :class:`~girthforge.algebra.BinaryParityMatrix` — single-level shift
  matrices and fully expanded binary matrices.

Cycle counting, cost tables and the Gallager-B decoder run on a compiled
kernel when available (``girthforge.kernel.BACKEND == "compiled"``) and on
a pure-Python twin otherwise; the env var ``GIRTHFORGE_KERNEL`` forces one.
"""

from __future__ import annotations

__version__ = "0.1.0"

from .algebra import (
    BaseMatrix,
    BinaryParityMatrix,
    LevelSpec,
    PolyParityMatrix,
    WeightProfile,
    base_matrix_of,
    expand_full,
    expand_to_level,
    format_base_matrix,
    parse_base_matrix,
    poly_from_json,
    poly_to_json,
    weight_profile,
)
from .cycles import (
    CycleCount,
    CycleReport,
    InevitableCycle,
    Path,
    alternating_sums,
    brute_force_girth,
    canonical_path,
    cycle_report,
    enumerate_paths,
    inevitable_cycles,
    is_cycle,
    validate_path,
)
from .errors import (
    CertificationError,
    GirthforgeError,
    ParseError,
    PreconditionError,
)
from .kernel import BACKEND as KERNEL_BACKEND
from .optimizer import (
    ClimbOutcome,
    CostTable,
    CostWeights,
    GuessAndTestResult,
    cost_table,
    guess_and_test,
    hill_climb_hqc,
    hill_climb_weight1,
    random_base_matrix,
)
from .pipeline import (
    ConnectivityMatrix,
    DesignResult,
    InflateResult,
    TwoLevelDesign,
    coupled_chain_connectivity,
    design,
    direct_transform,
    format_connectivity,
    inflate,
    parse_connectivity,
    squash,
    validate_membership,
)
from .simulator import (
    ChannelSpec,
    DecodeResult,
    Decoder,
    ErrorRateRecord,
    bsc_epsilon_from_snr,
    decode_word,
    format_records_csv,
    monte_carlo,
    monte_carlo_until,
    syndrome,
    wilson_interval,
)
from .trees import (
    LabeledTree,
    TreeEdge,
    TreeMatrix,
    TreeTopology,
    poly_to_tree,
    random_labeling,
    topology_from_json,
    topology_of,
    topology_to_json,
    tree_matrix_from_json,
    tree_matrix_to_json,
    tree_to_poly,
)

__all__ = [
    "__version__",
    "KERNEL_BACKEND",
    # errors
    "GirthforgeError",
    "ParseError",
    "PreconditionError",
    "CertificationError",
    # algebra
    "LevelSpec",
    "PolyParityMatrix",
    "BaseMatrix",
    "BinaryParityMatrix",
    "WeightProfile",
    "weight_profile",
    "expand_to_level",
    "expand_full",
    "base_matrix_of",
    "parse_base_matrix",
    "format_base_matrix",
    "poly_to_json",
    "poly_from_json",
    # trees
    "TreeEdge",
    "LabeledTree",
    "TreeMatrix",
    "TreeTopology",
    "tree_to_poly",
    "poly_to_tree",
    "topology_of",
    "random_labeling",
    "tree_matrix_to_json",
    "tree_matrix_from_json",
    "topology_to_json",
    "topology_from_json",
    # cycles
    "Path",
    "alternating_sums",
    "is_cycle",
    "validate_path",
    "canonical_path",
    "enumerate_paths",
    "CycleCount",
    "CycleReport",
    "cycle_report",
    "brute_force_girth",
    "InevitableCycle",
    "inevitable_cycles",
    # optimizer
    "CostWeights",
    "CostTable",
    "cost_table",
    "ClimbOutcome",
    "hill_climb_weight1",
    "hill_climb_hqc",
    "random_base_matrix",
    "GuessAndTestResult",
    "guess_and_test",
    # pipeline
    "ConnectivityMatrix",
    "parse_connectivity",
    "format_connectivity",
    "coupled_chain_connectivity",
    "InflateResult",
    "inflate",
    "TwoLevelDesign",
    "direct_transform",
    "squash",
    "validate_membership",
    "DesignResult",
    "design",
    # simulator
    "bsc_epsilon_from_snr",
    "ChannelSpec",
    "Decoder",
    "DecodeResult",
    "decode_word",
    "syndrome",
    "ErrorRateRecord",
    "monte_carlo",
    "monte_carlo_until",
    "wilson_interval",
    "format_records_csv",
]
