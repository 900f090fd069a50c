"""Feature-annotated reachability graphs for Petri net product lines."""

from pnpl.analysis import (
    deadlocks,
    family_vs_enumeration_stats,
    oracle_equivalence,
    reachable_in,
)
from pnpl.derive import Limits, Rg, build_rg, derive_product
from pnpl.feature_model import (
    FeatureModel,
    compile_constraints,
    is_valid_configuration,
    valid_configurations,
)
from pnpl.formula import (
    ConfigSet,
    evaluate,
    parse_formula,
    satisfiable_with,
    to_config_set,
)
from pnpl.frg import KERNEL, Frg, build_frg, filter_report, project
from pnpl.io import export_dot, load_model
from pnpl.net import Marking, Net150, effective_pc, enabled, fire, render_marking, validate_net

__version__ = "0.1.0"

__all__ = [
    "ConfigSet", "FeatureModel", "Frg", "KERNEL", "Limits", "Marking", "Net150", "Rg",
    "build_frg", "build_rg", "compile_constraints", "deadlocks", "derive_product",
    "effective_pc", "enabled", "evaluate", "export_dot", "family_vs_enumeration_stats",
    "filter_report", "fire", "is_valid_configuration", "load_model", "oracle_equivalence",
    "parse_formula", "project", "reachable_in", "render_marking", "satisfiable_with",
    "to_config_set", "valid_configurations", "validate_net",
]
