"""Seeded random store generator used by round-trip, fuzz, and oracle tests."""

from __future__ import annotations

import random

from kgbb.engine import (
    CreateRequest,
    Provenance,
    Store,
    create_compound_unit,
    create_question_unit,
    create_statement_unit,
    create_version,
    soft_delete,
    update_object_position,
)
from kgbb.model import (
    LiteralBinding,
    QuestionOp,
    QuestionUnit,
    Resource,
    ResourceBinding,
    StatementUnit,
    WildcardBinding,
)
from kgbb.query import build_compound, build_question
from kgbb.spec import load_spec

FUZZ_SPEC = """
application: urn:fuzz:app
ontology:
  - {id: THING, label: thing}
  - {id: WIDGET, label: widget, parent: THING}
  - {id: GADGET, label: gadget, parent: THING}
classes:
  - id: fact-statement
    kind: statement
    label: fact
    manages: fact-statement-unit
    predicate_label: relates
    subject_label: SOURCE
    subject_constraint: THING
    positions:
      - {id: pos-target, label: TARGET, type: resource, required: true, constraint: THING}
      - {id: pos-note, label: NOTE, type: literal, required: false, constraint: {datatype: text}}
      - {id: pos-score, label: SCORE, type: literal, required: false, constraint: {datatype: float}}
    dynamic_labels:
      default: '{SOURCE} relates to {TARGET} noting {NOTE} scoring {SCORE}'
  - id: part-statement
    kind: statement
    label: part fact
    manages: part-statement-unit
    predicate_label: has part
    subject_label: WHOLE
    subject_constraint: THING
    positions:
      - id: pos-part
        label: PART
        type: resource
        required: true
        constraint: THING
        logical_properties: [transitive]
    dynamic_labels:
      default: '{WHOLE} has part {PART}'
  - id: thing-item
    kind: compound
    compound_kind: item
    label: thing item
    manages: thing-item-unit
    subject_constraint: THING
instances:
  - {id: fact-1, class: fact-statement}
  - {id: part-1, class: part-statement}
  - {id: item-1, class: thing-item}
associations:
  - {source: item-1, target: fact-1, min_count: 0, max_count: 0}
  - {source: item-1, target: part-1, min_count: 0, max_count: 0}
links:
  - {linking: part-1, target: item-1, min_count: 1, max_count: 1, use_as_subject: pos-part}
starting_points: [item-1, fact-1]
"""

_CLASSES = ("THING", "WIDGET", "GADGET")


def fuzz_spec():
    return load_spec(FUZZ_SPEC)


class StoreBuilder:
    def __init__(self, seed: int, spec=None):
        self.rng = random.Random(seed)
        self.spec = spec or fuzz_spec()
        self.store = Store(self.spec, license_order=[("urn:lic:by", "urn:lic:cc0")])
        self.users = [f"urn:fuzz:user:{i}" for i in range(4)]
        self.named: list[str] = []
        self.some: list[str] = []
        self.part_pairs: set[tuple[str, str]] = set()
        self.questions: list[str] = []
        self.counter = 0

    def _prov(self) -> Provenance:
        return Provenance(creator=self.rng.choice(self.users), application="urn:fuzz:app")

    def _new_resource(self, kind: str) -> Resource:
        self.counter += 1
        return Resource(
            upri=f"urn:fuzz:res:{kind}:{self.counter}",
            kind=kind,
            class_affiliation=self.rng.choice(_CLASSES),
            label=f"{kind}-{self.counter}",
        )

    def _named_subject(self) -> Resource | str:
        if self.named and self.rng.random() < 0.6:
            return self.rng.choice(self.named)
        res = self._new_resource("named-individual")
        self.named.append(res.upri)
        return res

    def create_item(self):
        subject = self._named_subject()
        create_compound_unit(
            self.store,
            CreateRequest(kgbb_instance="item-1", provenance=self._prov(), subject=subject),
        )

    def create_fact(self):
        roll = self.rng.random()
        if roll < 0.7:
            subject = self._named_subject()
            target = self._named_subject()
            choice = None
        else:
            subject = self._new_resource("some-instance")
            self.some.append(subject.upri)
            target = self._new_resource("some-instance")
            self.some.append(target.upri)
            choice = self.rng.choice(["contingent", "prototypical"])
        inputs: dict = {"pos-target": target}
        if self.rng.random() < 0.5:
            inputs["pos-note"] = f"note {self.counter}"
        if self.rng.random() < 0.5:
            inputs["pos-score"] = str(round(self.rng.uniform(0, 10), 2))
        create_statement_unit(
            self.store,
            CreateRequest(
                kgbb_instance="fact-1",
                provenance=self._prov(),
                subject=subject,
                inputs=inputs,
                category_choice=choice,
                license=self.rng.choice(["urn:lic:cc0", "urn:lic:by"]),
            ),
        )

    def create_part(self):
        subject = self._named_subject()
        part = self._new_resource("named-individual")
        self.named.append(part.upri)
        subject_upri = subject if isinstance(subject, str) else subject.upri
        if (subject_upri, part.upri) in self.part_pairs or subject_upri == part.upri:
            return
        self.part_pairs.add((subject_upri, part.upri))
        create_statement_unit(
            self.store,
            CreateRequest(
                kgbb_instance="part-1",
                provenance=self._prov(),
                subject=subject,
                inputs={"pos-part": part},
            ),
        )

    def _editable_facts(self):
        return [
            u
            for u, su in self.store.units.items()
            if isinstance(su, StatementUnit)
            and su.meta.kgbb_uri == "fact-1"
            and not su.meta.deleted
        ]

    def update(self):
        facts = self._editable_facts()
        if not facts:
            return
        unit = self.rng.choice(facts)
        position = self.rng.choice(["pos-note", "pos-score"])
        value = (
            f"edit {self.counter}" if position == "pos-note" else str(round(self.rng.uniform(0, 10), 2))
        )
        self.counter += 1
        update_object_position(self.store, unit, position, value, self._prov())

    def version(self):
        units = [u for u, su in self.store.units.items() if not su.meta.deleted]
        if units:
            create_version(self.store, self.rng.choice(units), self.rng.choice(self.users))

    def delete(self):
        units = [
            u
            for u, su in self.store.units.items()
            if not su.meta.deleted and not isinstance(su, QuestionUnit)
        ]
        if units:
            soft_delete(self.store, self.rng.choice(units), self.rng.choice(self.users))

    def question(self):
        bindings = {}
        subject = None
        if self.named and self.rng.random() < 0.5:
            subject = ResourceBinding(resource=self.rng.choice(self.named))
        if self.rng.random() < 0.5:
            if self.named and self.rng.random() < 0.5:
                bindings["pos-target"] = ResourceBinding(resource=self.rng.choice(self.named))
            else:
                bindings["pos-target"] = WildcardBinding(
                    mode=self.rng.choice(["some-instance", "class"]),
                    class_upri=self.rng.choice(_CLASSES),
                )
        if self.rng.random() < 0.4:
            bindings["pos-score"] = LiteralBinding(
                datatype="float",
                minimum=self.rng.choice([None, 2.0]),
                maximum=self.rng.choice([None, 8.0]),
            )
        question = build_question(self.store, "fact-1", subject, bindings, self._prov())
        create_question_unit(self.store, question)
        self.questions.append(question.upri)

    def compound_question(self):
        if len(self.questions) < 2:
            return
        a, b = self.rng.sample(self.questions, 2)
        tree = QuestionOp(op=self.rng.choice(["AND", "OR"]), children=[a, b])
        create_question_unit(self.store, build_compound(self.store, tree, self._prov()))

    def run(self, ops: int) -> Store:
        actions = [
            (self.create_fact, 5),
            (self.create_part, 3),
            (self.create_item, 2),
            (self.update, 3),
            (self.version, 2),
            (self.delete, 1),
            (self.question, 1),
            (self.compound_question, 1),
        ]
        weighted = [fn for fn, weight in actions for _ in range(weight)]
        for _ in range(ops):
            self.rng.choice(weighted)()
        return self.store


def random_store(seed: int, ops: int = 25) -> Store:
    return StoreBuilder(seed).run(ops)


import re

def oracle_scan(store, question):
    """Naive full scan, re-deriving the matching rules from first principles."""
    q_cls_id = store.spec.graph.kgbb_instances[question.based_on_statement_kgbb]

    def subsumed(cls_id):
        node = cls_id
        while node is not None:
            if node == q_cls_id:
                return True
            node = store.spec.taxonomy[node].parent
        return False

    def resource_ok(binding, upri):
        if upri is None:
            return False
        if isinstance(binding, ResourceBinding):
            return upri == binding.resource
        res = store.resources.get(upri)
        if res is None:
            return False
        target = res.upri if res.kind == "class" else res.class_affiliation
        node = target
        while node is not None:
            if node == binding.class_upri:
                return True
            node = store.spec.ontology.parents.get(node)
        return False

    def literal_ok(binding, lit):
        if lit is None:
            return False
        if binding.datatype is not None and binding.datatype != lit.datatype:
            return False
        if binding.equals is not None and lit.value != binding.equals:
            return False
        try:
            number = float(lit.value)
        except ValueError:
            number = None
        if binding.minimum is not None and (number is None or number < binding.minimum):
            return False
        if binding.maximum is not None and (number is None or number > binding.maximum):
            return False
        if binding.pattern is not None and not re.search(binding.pattern, lit.value):
            return False
        return True

    out = []
    for upri, unit in store.units.items():
        if not isinstance(unit, StatementUnit) or unit.meta.deleted:
            continue
        if not subsumed(store.spec.graph.kgbb_instances[unit.meta.kgbb_uri]):
            continue
        if question.subject_binding is not None and not resource_ok(
            question.subject_binding, unit.subject
        ):
            continue
        ok = True
        for pos_id, binding in question.bindings.items():
            inst = next(
                (i for i in unit.positions if i.position_class == pos_id and i.current_version),
                None,
            )
            if inst is None:
                ok = False
                break
            if isinstance(binding, LiteralBinding):
                if not literal_ok(binding, inst.literal):
                    ok = False
                    break
            else:
                if not resource_ok(binding, inst.resource_uri):
                    ok = False
                    break
        if ok:
            out.append(upri)
    return sorted(out)
