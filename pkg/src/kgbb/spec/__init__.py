from .types import (
    AccessTemplate,
    AppSpec,
    AssociationNode,
    CompoundDisplayTemplate,
    CompoundKgbbClass,
    Diagnostic,
    DisplaySection,
    FreshNodeRule,
    ImportTemplate,
    LinkNode,
    LiteralConstraint,
    MappingEntry,
    MindMapTemplate,
    ObjectPositionClass,
    OntologyTree,
    OwlProperty,
    ReferenceNode,
    SpecificationGraph,
    StatementKgbbClass,
)
from .loader import load_spec, load_spec_file
from .serialize import spec_to_yaml
from .inherit import resolve_inheritance
from .validate import validate_spec, validate_spec_file
from .wizard import WizardAnswers, create_statement_kgbb_from_wizard
from .owl import derive_owl_access_template

__all__ = [
    "AccessTemplate",
    "AppSpec",
    "AssociationNode",
    "CompoundDisplayTemplate",
    "CompoundKgbbClass",
    "Diagnostic",
    "DisplaySection",
    "FreshNodeRule",
    "ImportTemplate",
    "LinkNode",
    "LiteralConstraint",
    "MappingEntry",
    "MindMapTemplate",
    "ObjectPositionClass",
    "OntologyTree",
    "OwlProperty",
    "ReferenceNode",
    "SpecificationGraph",
    "StatementKgbbClass",
    "WizardAnswers",
    "create_statement_kgbb_from_wizard",
    "derive_owl_access_template",
    "load_spec",
    "load_spec_file",
    "resolve_inheritance",
    "spec_to_yaml",
    "validate_spec",
    "validate_spec_file",
]
