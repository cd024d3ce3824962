"""Question units: form-parameterized queries over statement-unit space.

A question reuses a statement KGBB's storage model, binding each position to a
named resource, a class wildcard, or a literal constraint. Fully specified
questions ask for a boolean, underspecified ones for the list of matching
statement units. AND/OR trees over stored questions compose result sets.
"""

from __future__ import annotations

import re

from . import templating, vocab
from .engine import Provenance, Store, _make_meta
from .errors import BindingTypeMismatch, UnitNotFound, UnknownInstance
from .model import (
    Binding,
    CompoundQuestionUnit,
    LiteralBinding,
    QuestionOp,
    QuestionUnit,
    ResourceBinding,
    StatementUnit,
    Upri,
    WildcardBinding,
    mint_upri,
)
from .spec.types import StatementKgbbClass


def _class_or_subclass(taxonomy: dict, child: Upri, ancestor: Upri) -> bool:
    node = child
    seen = set()
    while node is not None and node not in seen:
        if node == ancestor:
            return True
        seen.add(node)
        cls = taxonomy.get(node)
        node = None if cls is None else cls.parent
    return False


def build_question(
    store: Store,
    kgbb_instance: Upri,
    subject_binding: Binding | None,
    bindings: dict[Upri, Binding],
    provenance: Provenance | None = None,
) -> QuestionUnit:
    cls = store.spec.class_of_instance(kgbb_instance)
    if not isinstance(cls, StatementKgbbClass):
        raise UnknownInstance(f"{kgbb_instance!r} is not a statement KGBB instance")
    if isinstance(subject_binding, LiteralBinding):
        raise BindingTypeMismatch("the subject position takes resources, not literals")
    for pos_id, binding in bindings.items():
        pos = cls.position(pos_id)
        if pos is None:
            raise BindingTypeMismatch(f"class {cls.upri!r} has no position {pos_id!r}")
        if pos.object_type == "resource" and isinstance(binding, LiteralBinding):
            raise BindingTypeMismatch(f"position {pos_id!r} takes resources, not literals")
        if pos.object_type == "literal" and not isinstance(binding, LiteralBinding):
            raise BindingTypeMismatch(f"position {pos_id!r} takes literals, not resources")

    exact = isinstance(subject_binding, ResourceBinding) and all(
        isinstance(b, ResourceBinding) or (isinstance(b, LiteralBinding) and b.exact)
        for b in bindings.values()
    )
    prov = provenance or Provenance(creator="urn:kgbb:user:anonymous")
    meta = _make_meta(
        store,
        f"question on {cls.label}",
        [vocab.STATEMENT_QUESTION_CLASS, cls.manages],
        kgbb_instance,
        _ReqShim(prov),
    )
    return QuestionUnit(
        upri=mint_upri("question"),
        meta=meta,
        based_on_statement_kgbb=kgbb_instance,
        subject_binding=subject_binding,
        bindings=dict(bindings),
        mode="boolean" if exact else "list",
    )


class _ReqShim:
    """Minimal stand-in so question units reuse the engine's meta stamping."""

    def __init__(self, provenance: Provenance):
        self.provenance = provenance
        self.dataset_unit_ids: list[Upri] = []


def _binding_matches_resource(store: Store, binding: Binding, resource_upri: Upri | None) -> bool:
    if resource_upri is None:
        return False
    if isinstance(binding, ResourceBinding):
        return resource_upri == binding.resource
    if isinstance(binding, WildcardBinding):
        resource = store.resources.get(resource_upri)
        if resource is None:
            return False
        return store.spec.satisfies(resource, binding.class_upri)
    return False


def _binding_matches_literal(binding: LiteralBinding, literal) -> bool:
    if literal is None:
        return False
    if binding.datatype is not None and binding.datatype != literal.datatype:
        return False
    if binding.equals is not None and literal.value != binding.equals:
        return False
    if binding.minimum is not None or binding.maximum is not None:
        try:
            number = float(literal.value)
        except ValueError:
            return False
        if binding.minimum is not None and number < binding.minimum:
            return False
        if binding.maximum is not None and number > binding.maximum:
            return False
    if binding.pattern is not None and not re.search(binding.pattern, literal.value):
        return False
    return True


def _matches(store: Store, question: QuestionUnit, unit: StatementUnit) -> bool:
    q_cls = store.spec.class_of_instance(question.based_on_statement_kgbb)
    u_cls = store.spec.class_of_instance(unit.meta.kgbb_uri)
    if q_cls is None or u_cls is None:
        return False
    if not _class_or_subclass(store.spec.taxonomy, u_cls.upri, q_cls.upri):
        return False
    if question.subject_binding is not None and not _binding_matches_resource(
        store, question.subject_binding, unit.subject
    ):
        return False
    for pos_id, binding in question.bindings.items():
        inst = unit.current_instance_of(pos_id)
        if inst is None:
            return False
        if isinstance(binding, LiteralBinding):
            if not _binding_matches_literal(binding, inst.literal):
                return False
        else:
            if not _binding_matches_resource(store, binding, inst.resource_uri):
                return False
    return True


def match_set(store: Store, question: QuestionUnit) -> list[Upri]:
    out = [
        upri
        for upri, unit in store.statement_units()
        if not unit.meta.deleted and not isinstance(unit, QuestionUnit)
        and _matches(store, question, unit)
    ]
    return sorted(out)


def execute_question(store: Store, question: QuestionUnit):
    """Boolean questions answer existence; list questions return sorted UPRIs."""
    matches = match_set(store, question)
    if question.mode == "boolean":
        return bool(matches)
    return matches


def build_compound(
    store: Store, tree: QuestionOp, provenance: Provenance | None = None
) -> CompoundQuestionUnit:
    if not tree.children:
        raise BindingTypeMismatch("compound questions need at least one operand")
    _check_tree(store, tree)
    prov = provenance or Provenance(creator="urn:kgbb:user:anonymous")
    meta = _make_meta(
        store,
        "compound question",
        [vocab.COMPOUND_QUESTION_CLASS],
        "urn:kgbb:builtin:compound-question",
        _ReqShim(prov),
    )
    return CompoundQuestionUnit(upri=mint_upri("question"), meta=meta, tree=tree)


def _check_tree(store: Store, tree: QuestionOp):
    if tree.op not in ("AND", "OR"):
        raise BindingTypeMismatch(f"unknown boolean operator {tree.op!r}")
    for child in tree.children:
        if isinstance(child, QuestionOp):
            _check_tree(store, child)
        else:
            unit = store.units.get(child)
            if not isinstance(unit, QuestionUnit):
                raise UnitNotFound(f"compound question leaf {child!r} is not a question unit")


def execute_compound(store: Store, compound: CompoundQuestionUnit) -> set[Upri]:
    def evaluate(node) -> set[Upri]:
        if isinstance(node, QuestionOp):
            results = [evaluate(child) for child in node.children]
            if not results:
                return set()
            if node.op == "AND":
                out = results[0]
                for r in results[1:]:
                    out = out & r
                return out
            out = set()
            for r in results:
                out |= r
            return out
        unit = store.units.get(node)
        if not isinstance(unit, QuestionUnit):
            raise UnitNotFound(f"compound question leaf {node!r} is not a question unit")
        return set(match_set(store, unit))

    return evaluate(compound.tree)


def _wildcard_phrase(store: Store, binding: WildcardBinding) -> str:
    label = store.spec.ontology.label(binding.class_upri)
    camel = "".join(part.capitalize() for part in label.split())
    if binding.mode == "some-instance":
        return f"some{camel}"
    if binding.mode == "every-instance":
        return f"every{camel}"
    return label


def render_question_label(store: Store, question: QuestionUnit) -> str:
    """Interrogative sentence for a question unit.

    Classes may declare an explicit question template (irregular verbs need
    one); otherwise the default heuristic de-inflects the verb of the dynamic
    label into 'Did SUBJECT <verb> ...?'.
    """
    cls = store.spec.class_of_instance(question.based_on_statement_kgbb)
    if not isinstance(cls, StatementKgbbClass):
        raise UnknownInstance(f"{question.based_on_statement_kgbb!r} has no statement class")
    template = cls.question_label_templates.get("default")
    if template is None:
        base = cls.dynamic_label_templates.get("default")
        if base is None:
            return question.meta.label
        template = templating.interrogative(base, cls.subject_label)

    from .templates.labels import display_value

    def binding_text(binding: Binding | None, fallback: str) -> str:
        if binding is None:
            return fallback
        if isinstance(binding, ResourceBinding):
            return display_value(store, binding.resource)
        if isinstance(binding, WildcardBinding):
            return _wildcard_phrase(store, binding)
        if binding.equals is not None:
            return binding.equals
        datatype = binding.datatype or "value"
        if binding.pattern is not None:
            return f"{datatype}[{binding.pattern}]"
        if binding.minimum is not None or binding.maximum is not None:
            return f"{datatype}[{binding.minimum}-{binding.maximum}]"
        return fallback

    values = {cls.subject_label: binding_text(question.subject_binding, cls.subject_label)}
    for pos in cls.positions:
        values[pos.thematic_label] = binding_text(
            question.bindings.get(pos.upri), pos.thematic_label
        )
    return templating.render(template, values, subject_label=cls.subject_label)
