"""Build, check and render CASCADE security assurance cases."""

from .blocks import CascadeBlock, rank_of
from .casefile import CasefileError, parse, serialize
from .findings import Finding, Severity
from .graph import AssuranceCase, CaseBuildError, Edge, EdgeKind, Node, NodeKind, build_case, validate_structure

__version__ = "0.1.0"
