"""Discrete parallel transport for crossed modules and categorical principal bundles."""
from .catalog import SCENARIO_NAMES, Scenario, get_scenario
from .crossed import CrossedModule, DoubleModule, Morphism2, conjugation_module, abelian_module, double_module
from .groups import FiniteGroup, GroupModel, MatrixGroup, AdditiveGroup, so2, so3, group_axiom_report
from .paths import SampledPath, SampledSurface, BacktrackWindow

__all__ = [
    "SCENARIO_NAMES", "Scenario", "get_scenario",
    "CrossedModule", "DoubleModule", "Morphism2", "conjugation_module", "abelian_module", "double_module",
    "FiniteGroup", "GroupModel", "MatrixGroup", "AdditiveGroup", "so2", "so3", "group_axiom_report",
    "SampledPath", "SampledSurface", "BacktrackWindow",
]
__version__ = "0.1.0"
