"""Decompositions of complete symmetric digraphs into oriented heptagons."""
from .assembly import assemble, double_cycle, generate, plan, reverse_decomposition, skeleton_even, skeleton_odd
from .base_designs import StarterSet, base_design, develop
from .catalog import CLASSES, Block, HeptClass, arcs_of_block, canonical_word, classify_arcs, reverse_class
from .design import Decomposition, PlanNode, UBlock
from .errors import HeptadError, NotAdmissible
from .hosts import HostSpec
from .verifier import Report, diagnose, verify, verify_undirected

__all__ = [
    "assemble", "double_cycle", "generate", "plan", "reverse_decomposition", "skeleton_even",
    "skeleton_odd", "StarterSet", "base_design", "develop", "CLASSES", "Block", "HeptClass",
    "arcs_of_block", "canonical_word", "classify_arcs", "reverse_class", "Decomposition",
    "PlanNode", "UBlock", "HeptadError", "NotAdmissible", "HostSpec", "Report", "diagnose",
    "verify", "verify_undirected",
]
__version__ = "0.1.0"
