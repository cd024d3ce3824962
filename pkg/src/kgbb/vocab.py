"""Shared identifiers: the urn:kgbb: base, property names, built-in classes."""

BASE = "urn:kgbb:"

# Properties used in data graphs and exported representations.
REQUIRED_OBJECT_POSITION = BASE + "prop:requiredObjectPosition"
OPTIONAL_OBJECT_POSITION = BASE + "prop:optionalObjectPosition"
TYPE = BASE + "prop:type"
RESOURCE_URI = BASE + "prop:resourceURI"
LITERAL = BASE + "prop:literal"

# Affiliation relations, one per resource kind that carries one.
REL_TYPE = "type"
REL_SOME_INSTANCE_OF = "someInstanceOf"
REL_EVERY_INSTANCE_OF = "everyInstanceOf"

# Category-based statement unit classes (every statement unit instantiates one
# of these in addition to its predicate-based class).
CATEGORY_CLASS = {
    "lexical": BASE + "class:lexical-statement-unit",
    "assertional": BASE + "class:assertional-statement-unit",
    "contingent": BASE + "class:contingent-statement-unit",
    "prototypical": BASE + "class:prototypical-statement-unit",
    "universal": BASE + "class:universal-statement-unit",
}
NEGATION_UNIT_CLASS = BASE + "class:negation-unit"
CARDINALITY_RESTRICTION_CLASS = BASE + "class:cardinality-restriction-unit"
STATEMENT_QUESTION_CLASS = BASE + "class:statement-question-unit"
COMPOUND_QUESTION_CLASS = BASE + "class:compound-question-unit"

# Built-in identification KGBBs (instances registered with every spec).
IDENTIFICATION_INSTANCE = {
    "named-individual": BASE + "builtin:type-identification",
    "some-instance": BASE + "builtin:some-instance-identification",
    "every-instance": BASE + "builtin:every-instance-identification",
    "class": BASE + "builtin:type-identification",
}
CARDINALITY_INSTANCE = BASE + "builtin:cardinality-restriction"

IDENTIFICATION_CLASS_POSITION = BASE + "pos:identification-class"
CARDINALITY_POSITION = BASE + "pos:cardinality"

DEFAULT_LICENSE = BASE + "license:unspecified"
DEFAULT_LOGICAL_FRAMEWORK = BASE + "framework:unspecified"

# Property-graph membership property names, keyed by what is being looked up.
MEMBERSHIP_PROPERTY = {
    "statement": "statementUnitURI",
    "compound": "compoundUnitURI",
    "list": "listUnitURI",
    "version": "versionID",
    "dataset": "datasetUnitID",
}
