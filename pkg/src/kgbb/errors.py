"""Exception types raised across the engine, spec handling, and templates."""


class KgbbError(Exception):
    """Base class for all errors raised by this package."""


class ChoiceRequired(KgbbError):
    """A some-instance subject needs an explicit contingent/prototypical choice."""


class NotApplicable(KgbbError):
    """The operation is undefined for the given category (e.g. lexical objects)."""


class SpecError(KgbbError):
    """Problem in a KGBB spec document. Carries a diagnostic code."""

    def __init__(self, code: str, message: str, where: str | None = None):
        self.code = code
        self.where = where
        super().__init__(message)


class SpecParseError(SpecError):
    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        self.line = line
        self.column = column
        where = None if line is None else f"line {line}, column {column}"
        super().__init__("parse-error", message, where)


class DanglingReference(SpecError):
    def __init__(self, message: str, where: str | None = None):
        super().__init__("dangling-reference", message, where)


class TaxonomyCycle(SpecError):
    def __init__(self, message: str, where: str | None = None):
        super().__init__("taxonomy-cycle", message, where)


class ConstraintWidening(SpecError):
    def __init__(self, message: str, where: str | None = None):
        super().__init__("constraint-widening", message, where)


class WizardError(KgbbError):
    """Invalid or inconsistent wizard answers."""


class ConstraintViolation(KgbbError):
    def __init__(self, position: str | None, constraint: str, message: str | None = None):
        self.position = position
        self.constraint = constraint
        super().__init__(message or f"position {position!r} violates constraint: {constraint}")


class MissingRequiredPosition(KgbbError):
    def __init__(self, position: str):
        self.position = position
        super().__init__(f"required position {position!r} has no input")


class CategoryObjectMismatch(KgbbError):
    def __init__(self, position: str, kind: str, category: str):
        self.position = position
        super().__init__(
            f"position {position!r}: resource kind {kind!r} not allowed "
            f"for objects of a {category} statement unit"
        )


class CascadeUnderflow(KgbbError):
    def __init__(self, node: str, needed: int, got: int):
        self.node = node
        super().__init__(f"cascade {node}: needs {needed} unit(s), got {got}")


class MaxCountExceeded(KgbbError):
    def __init__(self, node: str, limit: int):
        self.node = node
        super().__init__(f"cascade {node}: max_count {limit} exceeded")


class NotReachable(KgbbError):
    """KGBB instance is not a data-entry starting point and no cascade is active."""


class UnknownInstance(KgbbError):
    pass


class UnitNotFound(KgbbError):
    pass


class UnitLocked(KgbbError):
    pass


class AlreadyDeleted(KgbbError):
    pass


class UnknownVersion(KgbbError):
    pass


class NotPartialOrder(KgbbError):
    """Granularity trees require a transitive, cycle-free predicate."""


class IncomparableLicenses(KgbbError):
    def __init__(self, a: str, b: str):
        self.pair = (a, b)
        super().__init__(f"licenses {a!r} and {b!r} are not ordered by the configured ranking")


class MissingRequiredBinding(KgbbError):
    pass


class TemplateReferencesUnknownTarget(KgbbError):
    pass


class UnmappedRequiredPosition(KgbbError):
    def __init__(self, position: str):
        self.position = position
        super().__init__(f"access template does not map required position {position!r}")


class BindingTypeMismatch(KgbbError):
    pass


class SchemaMismatch(KgbbError):
    def __init__(self, message: str, record: str | None = None):
        self.record = record
        super().__init__(message if record is None else f"{message} (record: {record})")
