"""Function-block data model, descriptor format and algorithm language."""

from .algo import format_algorithm, format_expression, parse_algorithm, parse_expression
from .descriptor import (
    AlgorithmDecl, Connection, Diagnostic, DiagnosticPointDecl, ECAction, ECState,
    ECTransition, FBTypeDecl, InstanceDecl, PortDecl, SubApp, SystemDescriptor, VarDecl,
)
from .evaluate import eval_expression, exec_statements
from .fbsys import format_system, load_system, parse_system, parse_system_unchecked
from .validate import validate

__all__ = [
    "AlgorithmDecl", "Connection", "Diagnostic", "DiagnosticPointDecl", "ECAction", "ECState",
    "ECTransition", "FBTypeDecl", "InstanceDecl", "PortDecl", "SubApp", "SystemDescriptor",
    "VarDecl", "eval_expression", "exec_statements", "format_algorithm", "format_expression",
    "format_system", "load_system", "parse_algorithm", "parse_expression", "parse_system",
    "parse_system_unchecked", "validate",
]
