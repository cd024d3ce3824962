"""The KGBB engine: validated CRUD on semantic units.

All mutation goes through the functions here. Each call stages its changes in
a transaction working set and commits only after every constraint, cascade,
and count check has passed, so a failed create leaves the store untouched.
Writes serialize through a per-store lock; readers work on the committed state.
"""

from __future__ import annotations

import copy
import datetime as _dt
import re
import threading
from dataclasses import dataclass, field

from . import vocab
from .errors import (
    AlreadyDeleted,
    CascadeUnderflow,
    CategoryObjectMismatch,
    ConstraintViolation,
    IncomparableLicenses,
    MaxCountExceeded,
    MissingRequiredPosition,
    NotPartialOrder,
    NotReachable,
    UnitLocked,
    UnitNotFound,
    UnknownInstance,
    UnknownVersion,
)
from .model import (
    CompoundQuestionUnit,
    CompoundUnit,
    ConstraintNode,
    Literal,
    ObjectPositionInstance,
    QuestionUnit,
    Resource,
    SemanticUnitMeta,
    StatementUnit,
    Triple,
    Upri,
    VersionNode,
    classify_category,
    allowed_object_resource_kinds,
    data_graph,
    mint_upri,
)
from .spec.types import AppSpec, BUILTIN_INSTANCES, CompoundKgbbClass, StatementKgbbClass

AnyUnit = StatementUnit | CompoundUnit | QuestionUnit | CompoundQuestionUnit


class Clock:
    """UTC RFC 3339 timestamps, strictly increasing within one store."""

    def __init__(self):
        self._last = _dt.datetime(1970, 1, 1, tzinfo=_dt.timezone.utc)

    def now(self) -> str:
        t = _dt.datetime.now(_dt.timezone.utc)
        if t <= self._last:
            t = self._last + _dt.timedelta(microseconds=1)
        self._last = t
        return t.isoformat(timespec="microseconds").replace("+00:00", "Z")


@dataclass
class Provenance:
    creator: Upri
    application: Upri = "urn:kgbb:app:engine"
    imported_from: Upri | None = None
    import_date: str | None = None


@dataclass
class CreateRequest:
    kgbb_instance: Upri
    provenance: Provenance
    subject: Resource | Upri | None = None
    inputs: dict[Upri, object] = field(default_factory=dict)
    category_choice: str | None = None
    cascade_inputs: dict[Upri, list["CreateRequest"]] = field(default_factory=dict)
    associate: list[Upri] = field(default_factory=list)
    negated: bool = False
    license: Upri | None = None
    logical_framework: Upri | None = None
    access_restricted_to: Upri | None = None
    confidence_level: Upri | None = None
    validity_start_date: str | None = None
    validity_end_date: str | None = None
    references: list[Upri] = field(default_factory=list)
    dataset_unit_ids: list[Upri] = field(default_factory=list)


class Store:
    """All persistent state of one knowledge graph application."""

    def __init__(self, spec: AppSpec, license_order: list[tuple[str, str]] | None = None):
        self.spec = spec
        self.resources: dict[Upri, Resource] = {}
        self.units: dict[Upri, AnyUnit] = {}
        self.versions: dict[Upri, VersionNode] = {}
        # pairs (more_restrictive, less_restrictive)
        self.license_order: list[tuple[str, str]] = list(license_order or [])
        self.clock = Clock()
        self.lock = threading.Lock()
        self._reachable = spec.reachable_instances()
        for upri, parent in spec.ontology.parents.items():
            self.resources[upri] = Resource(
                upri=upri,
                kind="class",
                class_affiliation=parent,
                label=spec.ontology.labels.get(upri),
            )

    def unit(self, upri: Upri) -> AnyUnit:
        unit = self.units.get(upri)
        if unit is None:
            raise UnitNotFound(f"no semantic unit {upri!r}")
        return unit

    def statement_units(self):
        return ((u, su) for u, su in self.units.items() if isinstance(su, StatementUnit))

    def class_of_unit(self, unit: AnyUnit):
        return self.spec.class_of_instance(unit.meta.kgbb_uri)

    def required_positions_of(self, unit: StatementUnit) -> set[Upri]:
        cls = self.class_of_unit(unit)
        if isinstance(cls, StatementKgbbClass):
            return cls.required_position_ids()
        return set()

    def unit_data_graph(
        self, upri: Upri, current_only: bool = False, version: Upri | None = None
    ) -> list[Triple]:
        unit = self.unit(upri)
        if isinstance(unit, StatementUnit):
            return data_graph(unit, self.required_positions_of(unit), current_only, version)
        if isinstance(unit, CompoundUnit):
            triples: list[Triple] = []
            for member in unit.has_associated_semantic_unit:
                if member in self.units:
                    triples.extend(self.unit_data_graph(member, current_only, version))
            return triples
        return []


def store_equal(a: Store, b: Store) -> bool:
    return a.resources == b.resources and a.units == b.units and a.versions == b.versions


class _Txn:
    """Copy-on-write working set over a store; commit applies it atomically."""

    def __init__(self, store: Store):
        self.store = store
        self.units: dict[Upri, AnyUnit] = {}
        self.resources: dict[Upri, Resource] = {}

    def get_unit(self, upri: Upri) -> AnyUnit | None:
        return self.units.get(upri) or self.store.units.get(upri)

    def edit_unit(self, upri: Upri) -> AnyUnit:
        if upri not in self.units:
            base = self.store.units.get(upri)
            if base is None:
                raise UnitNotFound(f"no semantic unit {upri!r}")
            self.units[upri] = copy.deepcopy(base)
        return self.units[upri]

    def add_unit(self, unit: AnyUnit):
        self.units[unit.upri] = unit

    def get_resource(self, upri: Upri) -> Resource | None:
        return self.resources.get(upri) or self.store.resources.get(upri)

    def add_resource(self, resource: Resource):
        self.resources[resource.upri] = resource

    def iter_units(self):
        seen = set(self.units)
        yield from self.units.items()
        for upri, unit in self.store.units.items():
            if upri not in seen:
                yield upri, unit

    def commit(self):
        self.store.resources.update(self.resources)
        self.store.units.update(self.units)


# ---------------------------------------------------------------------------
# create


def create_statement_unit(store: Store, req: CreateRequest) -> Upri:
    with store.lock:
        txn = _Txn(store)
        upri = _plan_statement(store, txn, req, via_cascade=False, carried=())
        txn.commit()
        return upri


def create_compound_unit(store: Store, req: CreateRequest) -> Upri:
    with store.lock:
        txn = _Txn(store)
        upri = _plan_compound(store, txn, req, via_cascade=False)
        txn.commit()
        return upri


def _statement_class(store: Store, instance: Upri) -> StatementKgbbClass:
    cls = store.spec.class_of_instance(instance)
    if cls is None:
        raise UnknownInstance(f"no KGBB instance {instance!r}")
    if not isinstance(cls, StatementKgbbClass):
        raise UnknownInstance(f"KGBB instance {instance!r} is not a statement KGBB")
    return cls


def _check_reachable(store: Store, instance: Upri, via_cascade: bool):
    if via_cascade or instance in BUILTIN_INSTANCES:
        return
    if instance not in store._reachable:
        raise NotReachable(
            f"KGBB instance {instance!r} is not reachable from any data-entry starting point"
        )


def _resolve_subject(store: Store, txn: _Txn, req: CreateRequest, prov: Provenance):
    """Returns (subject upri, subject kind). New resources are registered."""
    subject = req.subject
    if isinstance(subject, Resource):
        return _ensure_resource(store, txn, subject, prov), subject.kind
    if isinstance(subject, str):
        res = txn.get_resource(subject)
        if res is not None:
            return res.upri, res.kind
        unit = txn.get_unit(subject)
        if unit is not None:
            _check_reference_allowed(store, txn, subject, unit, req.kgbb_instance)
            return subject, "named-individual"
        raise ConstraintViolation(None, "subject", f"unknown subject {subject!r}")
    raise ConstraintViolation(None, "subject", "statement units require a subject")


def _check_reference_allowed(store: Store, txn: _Txn, subject: Upri, unit, target_instance: Upri):
    """Statements about semantic units need a reference node wiring the KGBBs."""
    nodes = [
        n
        for n in store.spec.graph.reference_nodes
        if n.source == unit.meta.kgbb_uri and n.target == target_instance
    ]
    if not nodes:
        raise ConstraintViolation(
            None,
            "reference",
            f"no reference node allows statements of {target_instance!r} "
            f"about units of {unit.meta.kgbb_uri!r}",
        )
    node = nodes[0]
    if node.max_count != 0:
        existing = sum(
            1
            for _, u in txn.iter_units()
            if isinstance(u, StatementUnit)
            and u.meta.kgbb_uri == target_instance
            and u.subject == subject
            and not u.meta.deleted
        )
        if existing + 1 > node.max_count:
            raise MaxCountExceeded(f"reference {node.source}->{node.target}", node.max_count)


def _ensure_resource(store: Store, txn: _Txn, resource: Resource, prov: Provenance) -> Upri:
    if resource.upri:
        existing = txn.get_resource(resource.upri)
        if existing is not None:
            return existing.upri
        registered = Resource(
            upri=resource.upri,
            kind=resource.kind,
            class_affiliation=resource.class_affiliation,
            label=resource.label,
        )
    else:
        registered = Resource(
            upri=mint_upri("resource"),
            kind=resource.kind,
            class_affiliation=resource.class_affiliation,
            label=resource.label,
        )
    txn.add_resource(registered)
    _create_identification_unit(store, txn, registered, prov)
    return registered.upri


def _create_identification_unit(store: Store, txn: _Txn, resource: Resource, prov: Provenance):
    """Every resource introduced through CRUD gets an identification unit."""
    if resource.kind == "property" or resource.class_affiliation is None:
        return
    affiliation = resource.class_affiliation
    if txn.get_resource(affiliation) is None:
        # register the affiliation class bare; no affiliation of its own to record
        txn.add_resource(Resource(upri=affiliation, kind="class"))
    instance = vocab.IDENTIFICATION_INSTANCE[resource.kind]
    choice = "contingent" if resource.kind == "some-instance" else None
    req = CreateRequest(
        kgbb_instance=instance,
        provenance=prov,
        subject=resource.upri,
        inputs={vocab.IDENTIFICATION_CLASS_POSITION: affiliation},
        category_choice=choice,
    )
    _plan_statement(store, txn, req, via_cascade=True, carried=())


def _coerce_literal(value, constraint) -> Literal:
    if isinstance(value, Literal):
        lit = Literal(value.value, value.datatype or constraint.datatype)
    elif isinstance(value, bool):
        lit = Literal("true" if value else "false", constraint.datatype)
    else:
        lit = Literal(str(value), constraint.datatype)
    return lit


def _validate_literal(pos, lit: Literal):
    c = pos.literal_constraint
    if not lit.parses():
        raise ConstraintViolation(pos.upri, f"datatype {c.datatype}", f"{lit.value!r} does not parse as {c.datatype}")
    if c.minimum is not None or c.maximum is not None:
        try:
            num = float(lit.value)
        except ValueError:
            raise ConstraintViolation(pos.upri, "numeric range", f"{lit.value!r} is not numeric")
        if c.minimum is not None and num < c.minimum:
            raise ConstraintViolation(pos.upri, f"min {c.minimum}")
        if c.maximum is not None and num > c.maximum:
            raise ConstraintViolation(pos.upri, f"max {c.maximum}")
    if c.pattern is not None and not re.search(c.pattern, lit.value):
        raise ConstraintViolation(pos.upri, f"pattern {c.pattern}")


def _build_instance(
    store: Store,
    txn: _Txn,
    cls: StatementKgbbClass,
    pos_id: Upri,
    value,
    prov: Provenance,
    category: str,
    carried: tuple,
    exempt: bool,
) -> ObjectPositionInstance:
    pos = cls.position(pos_id)
    if pos is None:
        raise ConstraintViolation(pos_id, "position", f"{cls.upri!r} has no position {pos_id!r}")
    resource_uri = None
    literal = None
    if pos.object_type == "resource":
        if isinstance(value, Resource):
            resource_uri = _ensure_resource(store, txn, value, prov)
        elif isinstance(value, str):
            if txn.get_resource(value) is None:
                raise ConstraintViolation(pos_id, "resource", f"unknown resource {value!r}")
            resource_uri = value
        else:
            raise ConstraintViolation(pos_id, "resource", f"position {pos_id!r} takes a resource")
        resource = txn.get_resource(resource_uri)
        if not store.spec.satisfies(resource, pos.resource_constraint):
            raise ConstraintViolation(pos_id, f"range {pos.resource_constraint}")
        for carried_pos, carried_class in carried:
            if carried_pos == pos_id and not store.spec.satisfies(resource, carried_class):
                raise ConstraintViolation(pos_id, f"carried range {carried_class}")
        if not exempt and category != "lexical":
            allowed = allowed_object_resource_kinds(category)
            if resource.kind not in allowed:
                raise CategoryObjectMismatch(pos_id, resource.kind, category)
    else:
        if isinstance(value, Resource):
            raise ConstraintViolation(pos_id, "literal", f"position {pos_id!r} takes a literal")
        literal = _coerce_literal(value, pos.literal_constraint)
        _validate_literal(pos, literal)
    logical = next(
        (p for p in ("transitive", "symmetric", "asymmetric") if p in pos.logical_properties),
        None,
    )
    return ObjectPositionInstance(
        upri=mint_upri("position"),
        position_class=pos.upri,
        input_type_label=pos.thematic_label,
        creator=prov.creator,
        creation_date=store.clock.now(),
        created_with_application=prov.application,
        resource_uri=resource_uri,
        literal=literal,
        logical_property=logical,
        imported_from=prov.imported_from,
    )


def _make_meta(store: Store, cls_label: str, types: list[Upri], instance: Upri, req: CreateRequest):
    prov = req.provenance
    import_date = prov.import_date
    if prov.imported_from is not None and import_date is None:
        import_date = store.clock.now()
    return SemanticUnitMeta(
        label=cls_label,
        types=types,
        kgbb_uri=instance,
        creator=prov.creator,
        creation_date=store.clock.now(),
        created_with_application=prov.application,
        imported_from=prov.imported_from,
        import_date=import_date,
        dataset_unit_ids=list(req.dataset_unit_ids),
    )


def _plan_statement(
    store: Store, txn: _Txn, req: CreateRequest, via_cascade: bool, carried: tuple
) -> Upri:
    cls = _statement_class(store, req.kgbb_instance)
    _check_reachable(store, req.kgbb_instance, via_cascade)
    prov = req.provenance
    subject_upri, subject_kind = _resolve_subject(store, txn, req, prov)

    subject_res = txn.get_resource(subject_upri)
    if subject_res is not None and not store.spec.satisfies(subject_res, cls.subject_constraint):
        raise ConstraintViolation(None, f"subject range {cls.subject_constraint}")

    if cls.lexical_only or req.category_choice == "lexical":
        bad = [p.upri for p in cls.positions if p.object_type != "literal"]
        if bad:
            raise ConstraintViolation(bad[0], "lexical", "lexical units take literal positions only")
        category = "lexical"
    else:
        category = classify_category(subject_kind, req.category_choice)
    exempt = req.kgbb_instance in BUILTIN_INSTANCES

    # carry-over constraints: active when this create is the target of an
    # association node whose source compound (same subject) exists or is staged
    carried = tuple(carried)
    for node in store.spec.graph.association_nodes:
        if node.target != req.kgbb_instance or not node.carry_over_subject_range_constraint_to:
            continue
        source_cls = store.spec.class_of_instance(node.source)
        if source_cls is None or source_cls.subject_constraint is None:
            continue
        if any(True for _ in _matching_compounds(txn, node.source, subject_upri)):
            carried += tuple(
                (pos_id, source_cls.subject_constraint)
                for pos_id in node.carry_over_subject_range_constraint_to
            )

    instances = []
    for pos_id, value in req.inputs.items():
        instances.append(
            _build_instance(store, txn, cls, pos_id, value, prov, category, carried, exempt)
        )
    supplied = {i.position_class for i in instances}
    for pos in cls.positions:
        if pos.required and pos.upri not in supplied:
            raise MissingRequiredPosition(pos.upri)

    types = [cls.manages, vocab.CATEGORY_CLASS[category]]
    if req.negated:
        types.append(vocab.NEGATION_UNIT_CLASS)
    if req.kgbb_instance == vocab.CARDINALITY_INSTANCE:
        types.append(vocab.CARDINALITY_RESTRICTION_CLASS)
    meta = _make_meta(store, cls.label, types, req.kgbb_instance, req)
    meta.has_semantic_unit_subject = subject_upri

    if (
        req.validity_start_date
        and req.validity_end_date
        and req.validity_start_date > req.validity_end_date
    ):
        raise ConstraintViolation(None, "validity period", "start date after end date")

    unit = StatementUnit(
        upri=mint_upri("unit"),
        meta=meta,
        subject=subject_upri,
        category=category,
        based_on_graph_pattern=cls.storage_model_upri,
        license=req.license or vocab.DEFAULT_LICENSE,
        logical_framework=req.logical_framework or vocab.DEFAULT_LOGICAL_FRAMEWORK,
        access_restricted_to=req.access_restricted_to,
        negated=req.negated,
        constraint_nodes=[
            ConstraintNode(f"range {carried_class}", pos_id) for pos_id, carried_class in carried
        ],
        confidence_level=req.confidence_level,
        validity_start_date=req.validity_start_date,
        validity_end_date=req.validity_end_date,
        references=list(req.references),
        positions=instances,
    )
    txn.add_unit(unit)

    _attach_to_compounds(store, txn, unit)
    _attach_to_linking_statements(store, txn, unit)
    _attach_targets_to_statement(store, txn, unit)
    _fire_link_cascades(store, txn, unit, req)
    return unit.upri


def _matching_compounds(txn: _Txn, instance: Upri, subject: Upri):
    for _, u in txn.iter_units():
        if (
            isinstance(u, CompoundUnit)
            and u.meta.kgbb_uri == instance
            and u.meta.has_semantic_unit_subject == subject
            and not u.meta.deleted
        ):
            yield u


def _attach_to_compounds(store: Store, txn: _Txn, unit: AnyUnit):
    """Association semantics: a new unit joins compounds that share its subject."""
    subject = unit.meta.has_semantic_unit_subject
    if subject is None:
        return
    for node in store.spec.graph.association_nodes:
        if node.target != unit.meta.kgbb_uri:
            continue
        for compound in list(_matching_compounds(txn, node.source, subject)):
            editable = txn.edit_unit(compound.upri)
            if node.max_count != 0:
                count = sum(
                    1
                    for member in editable.has_associated_semantic_unit
                    if (m := txn.get_unit(member)) is not None
                    and m.meta.kgbb_uri == unit.meta.kgbb_uri
                    and not m.meta.deleted
                )
                if count + 1 > node.max_count:
                    raise MaxCountExceeded(f"association {node.source}->{node.target}", node.max_count)
            editable.has_associated_semantic_unit.append(unit.upri)


def _attach_to_linking_statements(store: Store, txn: _Txn, unit: AnyUnit):
    """Link semantics: a unit whose subject fills a linking statement's
    use-as-subject position becomes objectDescribedBySemanticUnit of that
    statement; compounds additionally join their parents via
    hasLinkedSemanticUnit (relationship loops)."""
    subject = unit.meta.has_semantic_unit_subject
    if subject is None:
        return
    for node in store.spec.graph.link_nodes:
        if node.target != unit.meta.kgbb_uri:
            continue
        resource = txn.get_resource(subject)
        if node.if_object is not None and (
            resource is None or not store.spec.satisfies(resource, node.if_object)
        ):
            continue
        for linking_upri, linking in list(txn.iter_units()):
            if (
                not isinstance(linking, StatementUnit)
                or linking.meta.kgbb_uri != node.linking
                or linking.meta.deleted
                or linking_upri == unit.upri
            ):
                continue
            inst = linking.current_instance_of(node.use_as_subject)
            if inst is None or inst.resource_uri != subject:
                continue
            if unit.upri in linking.object_described_by_semantic_unit:
                continue
            if node.max_count != 0:
                have = sum(
                    1
                    for linked in linking.object_described_by_semantic_unit
                    if (lu := txn.get_unit(linked)) is not None
                    and lu.meta.kgbb_uri == node.target
                    and not lu.meta.deleted
                )
                if have + 1 > node.max_count:
                    continue  # node limit reached; the statement keeps its links
            txn.edit_unit(linking_upri).object_described_by_semantic_unit.append(unit.upri)
            if isinstance(unit, CompoundUnit):
                for parent_upri, parent in list(txn.iter_units()):
                    if (
                        isinstance(parent, CompoundUnit)
                        and parent.meta.has_semantic_unit_subject == linking.subject
                        and linking_upri in parent.has_associated_semantic_unit
                        and unit.upri not in parent.has_linked_semantic_unit
                    ):
                        txn.edit_unit(parent_upri).has_linked_semantic_unit.append(unit.upri)


def _attach_targets_to_statement(store: Store, txn: _Txn, unit: StatementUnit):
    """When a statement's link targets already exist, wire them instead of
    waiting for target-side creation (mirror image of
    _attach_to_linking_statements)."""
    for node in store.spec.graph.link_nodes:
        if node.linking != unit.meta.kgbb_uri:
            continue
        inst = unit.current_instance_of(node.use_as_subject)
        if inst is None or inst.resource_uri is None:
            continue
        resource = txn.get_resource(inst.resource_uri)
        if node.if_object is not None and not store.spec.satisfies(resource, node.if_object):
            continue
        for target_upri, target in list(txn.iter_units()):
            if (
                target.meta.kgbb_uri != node.target
                or target.meta.has_semantic_unit_subject != inst.resource_uri
                or target.meta.deleted
                or target_upri in unit.object_described_by_semantic_unit
            ):
                continue
            editable = txn.edit_unit(unit.upri)
            if node.max_count != 0:
                have = sum(
                    1
                    for linked in editable.object_described_by_semantic_unit
                    if (lu := txn.get_unit(linked)) is not None
                    and lu.meta.kgbb_uri == node.target
                    and not lu.meta.deleted
                )
                if have + 1 > node.max_count:
                    continue  # node limit reached; leave remaining targets unlinked
            editable.object_described_by_semantic_unit.append(target_upri)
            if isinstance(target, CompoundUnit):
                for parent_upri, parent in list(txn.iter_units()):
                    if (
                        isinstance(parent, CompoundUnit)
                        and parent.meta.has_semantic_unit_subject == unit.subject
                        and unit.upri in parent.has_associated_semantic_unit
                        and target_upri not in parent.has_linked_semantic_unit
                    ):
                        txn.edit_unit(parent_upri).has_linked_semantic_unit.append(target_upri)


def _fire_link_cascades(store: Store, txn: _Txn, unit: StatementUnit, req: CreateRequest):
    """Create link-node targets required or supplied alongside a new statement."""
    for node in store.spec.graph.link_nodes:
        if node.linking != unit.meta.kgbb_uri:
            continue
        inst = unit.current_instance_of(node.use_as_subject)
        if inst is None or inst.resource_uri is None:
            if node.min_count > 0:
                raise CascadeUnderflow(f"link {node.linking}->{node.target}", node.min_count, 0)
            continue
        resource = txn.get_resource(inst.resource_uri)
        if node.if_object is not None and not store.spec.satisfies(resource, node.if_object):
            continue

        nested = list(req.cascade_inputs.get(node.target, []))
        target_cls = store.spec.class_of_instance(node.target)
        already = sum(
            1
            for linked in txn.get_unit(unit.upri).object_described_by_semantic_unit
            if (lu := txn.get_unit(linked)) is not None and lu.meta.kgbb_uri == node.target
        )
        if node.max_count != 0 and already + len(nested) > node.max_count:
            raise MaxCountExceeded(f"link {node.linking}->{node.target}", node.max_count)
        if not nested and node.min_count > already:
            if isinstance(target_cls, CompoundKgbbClass):
                # a compound target's subject is forced, so it can be created unaided
                nested = [
                    CreateRequest(
                        kgbb_instance=node.target,
                        provenance=req.provenance,
                        subject=inst.resource_uri,
                    )
                    for _ in range(node.min_count - already)
                ]
            else:
                raise CascadeUnderflow(
                    f"link {node.linking}->{node.target}", node.min_count, already
                )
        for nested_req in nested:
            forced = copy.copy(nested_req)
            forced.subject = inst.resource_uri
            if isinstance(target_cls, CompoundKgbbClass):
                _plan_compound(store, txn, forced, via_cascade=True)
            else:
                _plan_statement(store, txn, forced, via_cascade=True, carried=())
        # target-side attachment added the objectDescribedBySemanticUnit edges
        fresh = txn.get_unit(unit.upri)
        have = sum(
            1
            for linked in fresh.object_described_by_semantic_unit
            if (lu := txn.get_unit(linked)) is not None and lu.meta.kgbb_uri == node.target
        )
        if have < node.min_count:
            raise CascadeUnderflow(f"link {node.linking}->{node.target}", node.min_count, have)


def _plan_compound(store: Store, txn: _Txn, req: CreateRequest, via_cascade: bool) -> Upri:
    cls = store.spec.class_of_instance(req.kgbb_instance)
    if cls is None:
        raise UnknownInstance(f"no KGBB instance {req.kgbb_instance!r}")
    if not isinstance(cls, CompoundKgbbClass):
        raise UnknownInstance(f"KGBB instance {req.kgbb_instance!r} is not a compound KGBB")
    _check_reachable(store, req.kgbb_instance, via_cascade)
    prov = req.provenance

    subject_upri = None
    if req.subject is not None:
        subject_upri, _ = _resolve_subject(store, txn, req, prov)
        subject_res = txn.get_resource(subject_upri)
        if subject_res is not None and not store.spec.satisfies(
            subject_res, cls.subject_constraint
        ):
            raise ConstraintViolation(None, f"subject range {cls.subject_constraint}")

    meta = _make_meta(store, cls.label, [cls.manages or f"{cls.upri}-unit"], req.kgbb_instance, req)
    meta.has_semantic_unit_subject = subject_upri
    unit = CompoundUnit(upri=mint_upri("unit"), meta=meta, kind=cls.compound_kind)
    txn.add_unit(unit)
    _attach_to_compounds(store, txn, unit)
    _attach_to_linking_statements(store, txn, unit)

    # explicitly associated pre-existing units
    for member_upri in req.associate:
        member = txn.get_unit(member_upri)
        if member is None:
            raise UnitNotFound(f"no semantic unit {member_upri!r}")
        if (
            cls.compound_kind in ("item", "instance-item", "class-item")
            and subject_upri is not None
            and member.meta.has_semantic_unit_subject != subject_upri
        ):
            raise ConstraintViolation(
                None, "association", "item units associate statements sharing their subject"
            )
        txn.edit_unit(unit.upri).has_associated_semantic_unit.append(member_upri)

    for node in store.spec.graph.association_nodes:
        if node.source != req.kgbb_instance:
            continue
        carried = tuple(
            (pos_id, cls.subject_constraint)
            for pos_id in node.carry_over_subject_range_constraint_to
            if cls.subject_constraint is not None
        )
        target_cls = store.spec.class_of_instance(node.target)
        for nested_req in req.cascade_inputs.get(node.target, []):
            forced = copy.copy(nested_req)
            if subject_upri is not None:
                forced.subject = subject_upri
            if isinstance(target_cls, CompoundKgbbClass):
                _plan_compound(store, txn, forced, via_cascade=True)
            else:
                _plan_statement(store, txn, forced, via_cascade=True, carried=carried)
        fresh = txn.get_unit(unit.upri)
        have = sum(
            1
            for member in fresh.has_associated_semantic_unit
            if (m := txn.get_unit(member)) is not None and m.meta.kgbb_uri == node.target
        )
        if have < node.min_count:
            raise CascadeUnderflow(
                f"association {node.source}->{node.target}", node.min_count, have
            )
        if node.max_count != 0 and have > node.max_count:
            raise MaxCountExceeded(f"association {node.source}->{node.target}", node.max_count)

    return unit.upri


def create_question_unit(store: Store, question: QuestionUnit | CompoundQuestionUnit) -> Upri:
    with store.lock:
        store.units[question.upri] = question
        return question.upri


# ---------------------------------------------------------------------------
# update / delete / version


def update_object_position(
    store: Store, unit_upri: Upri, position_class: Upri, new_input, prov: Provenance
) -> Upri:
    with store.lock:
        unit = store.unit(unit_upri)
        if not isinstance(unit, StatementUnit):
            raise UnitNotFound(f"{unit_upri!r} is not a statement unit")
        if not unit.meta.editable:
            raise UnitLocked(f"unit {unit_upri!r} is locked")
        if unit.meta.deleted:
            raise UnitLocked(f"unit {unit_upri!r} is deleted")
        cls = store.class_of_unit(unit)
        txn = _Txn(store)
        instance = _build_instance(
            store,
            txn,
            cls,
            position_class,
            new_input,
            prov,
            unit.category,
            tuple((c.applies_to_object_position, c.has_constraint.removeprefix("range ")) for c in unit.constraint_nodes),
            exempt=unit.meta.kgbb_uri in BUILTIN_INSTANCES,
        )
        editable = txn.edit_unit(unit_upri)
        for existing in editable.positions:
            if existing.position_class == position_class and existing.current_version:
                existing.current_version = False
        editable.positions.append(instance)
        txn.commit()
        return instance.upri


def soft_delete(store: Store, unit_upri: Upri, user: Upri, cascade: bool = False):
    with store.lock:
        unit = store.unit(unit_upri)
        if unit.meta.deleted:
            raise AlreadyDeleted(f"unit {unit_upri!r} is already deleted")
        when = store.clock.now()
        unit.meta.deleted_by = user
        unit.meta.deletion_date = when
        if cascade and isinstance(unit, CompoundUnit):
            for member in unit.has_associated_semantic_unit:
                m = store.units.get(member)
                if m is not None and not m.meta.deleted:
                    m.meta.deleted_by = user
                    m.meta.deletion_date = when


def create_version(store: Store, unit_upri: Upri, user: Upri) -> Upri:
    with store.lock:
        unit = store.unit(unit_upri)
        previous = _current_version_of(store, unit)
        version = VersionNode(
            upri=mint_upri("version"),
            of_unit=unit_upri,
            creation_date=store.clock.now(),
            creator=user,
            previous_version=previous,
        )
        store.versions[version.upri] = version
        for u in _version_scope(store, unit):
            if version.upri not in u.meta.version_ids:
                u.meta.version_ids.append(version.upri)
            if isinstance(u, StatementUnit):
                for inst in u.positions:
                    if inst.current_version:
                        inst.version_ids.append(version.upri)
        return version.upri


def _current_version_of(store: Store, unit: AnyUnit) -> Upri | None:
    own = [v for v in unit.meta.version_ids if store.versions[v].of_unit == unit.upri]
    return own[-1] if own else None


def _version_scope(store: Store, unit: AnyUnit):
    """The unit plus, for compounds, every transitively associated unit."""
    seen: dict[Upri, AnyUnit] = {}
    stack = [unit]
    while stack:
        u = stack.pop()
        if u.upri in seen:
            continue
        seen[u.upri] = u
        if isinstance(u, CompoundUnit):
            for member in u.has_associated_semantic_unit:
                m = store.units.get(member)
                if m is not None and not m.meta.deleted:
                    stack.append(m)
    return list(seen.values())


# ---------------------------------------------------------------------------
# read


@dataclass
class MaterializedUnit:
    upri: Upri
    kind: str
    meta: SemanticUnitMeta
    subject: Upri | None = None
    category: str | None = None
    negated: bool = False
    instances: list[ObjectPositionInstance] = field(default_factory=list)
    triples: list[Triple] = field(default_factory=list)
    members: list[Upri] = field(default_factory=list)
    linked: list[Upri] = field(default_factory=list)


def read_unit(
    store: Store, unit_upri: Upri, version: Upri | None = None, include_deleted: bool = False
) -> MaterializedUnit:
    unit = store.unit(unit_upri)
    if unit.meta.deleted and not include_deleted:
        raise UnitNotFound(f"semantic unit {unit_upri!r} is deleted")
    if version is not None and version not in store.versions:
        raise UnknownVersion(f"no version {version!r}")
    if isinstance(unit, StatementUnit):
        if version is not None:
            instances = unit.instances_for_version(version)
        else:
            instances = unit.current_instances()
        triples = data_graph(
            unit,
            store.required_positions_of(unit),
            current_only=version is None,
            version=version,
        )
        return MaterializedUnit(
            upri=unit_upri,
            kind="statement",
            meta=unit.meta,
            subject=unit.subject,
            category=unit.category,
            negated=unit.negated,
            instances=instances,
            triples=triples,
        )
    if isinstance(unit, CompoundUnit):
        members = []
        for member in unit.has_associated_semantic_unit:
            m = store.units.get(member)
            if m is None:
                continue
            if version is not None and version not in m.meta.version_ids:
                continue
            if version is None and m.meta.deleted and not include_deleted:
                continue
            members.append(member)
        return MaterializedUnit(
            upri=unit_upri,
            kind="compound",
            meta=unit.meta,
            subject=unit.meta.has_semantic_unit_subject,
            members=members,
            linked=list(unit.has_linked_semantic_unit),
            triples=store.unit_data_graph(unit_upri, current_only=version is None, version=version),
        )
    kind = "question" if isinstance(unit, QuestionUnit) else "compound-question"
    return MaterializedUnit(upri=unit_upri, kind=kind, meta=unit.meta)


def edit_history(store: Store, unit_upri: Upri) -> dict[Upri, list[ObjectPositionInstance]]:
    unit = store.unit(unit_upri)
    if not isinstance(unit, StatementUnit):
        return {}
    out: dict[Upri, list[ObjectPositionInstance]] = {}
    for inst in unit.positions:
        out.setdefault(inst.position_class, []).append(inst)
    for instances in out.values():
        instances.sort(key=lambda i: i.creation_date)
    return out


# ---------------------------------------------------------------------------
# derived compounds


@dataclass
class DerivedMembers:
    kind: str
    members: frozenset[Upri]
    subject: Upri | None = None


def derive_compounds(store: Store, seed: Upri, kind: str) -> DerivedMembers:
    if kind == "item":
        members = frozenset(
            u
            for u, su in store.statement_units()
            if su.subject == seed and not su.meta.deleted
        )
        return DerivedMembers("item", members, subject=seed)
    if kind == "item-group":
        return _derive_item_group(store, seed)
    if kind == "granularity-tree":
        return _derive_granularity_tree(store, seed)
    if kind == "granular-item-group":
        tree = _derive_granularity_tree(store, seed)
        resources = set()
        for member in tree.members:
            unit = store.units[member]
            resources.add(unit.subject)
            resources.update(
                i.resource_uri for i in unit.current_instances() if i.resource_uri
            )
        members: set[Upri] = set(tree.members)
        for resource in resources:
            members |= derive_compounds(store, resource, "item").members
        return DerivedMembers("granular-item-group", frozenset(members), subject=tree.subject)
    if kind == "context":
        for component in derive_context_partition(store):
            if seed in component:
                return DerivedMembers("context", frozenset(component))
        return DerivedMembers("context", frozenset())
    raise ValueError(f"cannot derive compound kind {kind!r}")


def _item_link_graph(store: Store):
    """Resource adjacency induced by statement units reusing resources as objects."""
    edges: dict[Upri, set[Upri]] = {}
    subjects = {su.subject for _, su in store.statement_units() if not su.meta.deleted}
    for _, su in store.statement_units():
        if su.meta.deleted:
            continue
        for inst in su.current_instances():
            if inst.resource_uri is not None and inst.resource_uri in subjects:
                edges.setdefault(su.subject, set()).add(inst.resource_uri)
                edges.setdefault(inst.resource_uri, set()).add(su.subject)
    return edges


def _derive_item_group(store: Store, seed: Upri) -> DerivedMembers:
    edges = _item_link_graph(store)
    seen = {seed}
    stack = [seed]
    while stack:
        node = stack.pop()
        for nxt in edges.get(node, ()):
            if nxt not in seen:
                seen.add(nxt)
                stack.append(nxt)
    members: set[Upri] = set()
    for resource in seen:
        members |= derive_compounds(store, resource, "item").members
    return DerivedMembers("item-group", frozenset(members))


def _derive_granularity_tree(store: Store, seed: Upri) -> DerivedMembers:
    seed_unit = store.units.get(seed)
    if not isinstance(seed_unit, StatementUnit):
        raise UnitNotFound(f"granularity trees are derived from a statement unit, not {seed!r}")
    cls = store.class_of_unit(seed_unit)
    transitive_positions = [
        p.upri
        for p in cls.positions
        if p.object_type == "resource" and "transitive" in p.logical_properties
    ]
    if not transitive_positions:
        raise NotPartialOrder(
            f"units of {cls.upri!r} have no transitive object position"
        )
    position = transitive_positions[0]
    units = [
        (u, su)
        for u, su in store.statement_units()
        if su.meta.kgbb_uri == seed_unit.meta.kgbb_uri and not su.meta.deleted
    ]
    child_of: dict[Upri, set[Upri]] = {}
    unit_by_edge: dict[tuple[Upri, Upri], Upri] = {}
    for u, su in units:
        inst = su.current_instance_of(position)
        if inst is None or inst.resource_uri is None:
            continue
        child_of.setdefault(su.subject, set()).add(inst.resource_uri)
        unit_by_edge[(su.subject, inst.resource_uri)] = u

    # cycle check (partial orders are acyclic)
    state: dict[Upri, int] = {}

    def dfs(node):
        state[node] = 0
        for nxt in child_of.get(node, ()):
            if state.get(nxt) == 0:
                raise NotPartialOrder("cycle detected among transitive statement units")
            if nxt not in state:
                dfs(nxt)
        state[node] = 1

    for root in list(child_of):
        if root not in state:
            dfs(root)

    node = seed_unit.subject
    seen_up = {node}
    while True:
        parents = [s for s, children in child_of.items() if node in children and s not in seen_up]
        if not parents:
            break
        node = parents[0]
        seen_up.add(node)
    root = node  # no unit's object equals this subject

    members: set[Upri] = set()
    stack = [root]
    visited = {root}
    while stack:
        current = stack.pop()
        for child in child_of.get(current, ()):
            members.add(unit_by_edge[(current, child)])
            if child not in visited:
                visited.add(child)
                stack.append(child)
    return DerivedMembers("granularity-tree", frozenset(members), subject=root)


def is_about_classes(store: Store) -> set[Upri]:
    """Statement classes whose predicate reads 'is about' (reference-frame cuts)."""
    out = set()
    for cls_id, cls in store.spec.taxonomy.items():
        if isinstance(cls, StatementKgbbClass):
            normalized = cls.predicate_label.replace("-", " ").replace("_", " ").strip().lower()
            if normalized in ("is about", "isabout"):
                out.add(cls_id)
    return out


def derive_context_partition(store: Store) -> list[set[Upri]]:
    """Connected components of merged data graphs, cut at is-about statement units."""
    cut_classes = is_about_classes(store)
    cut_instances = {
        inst for inst, cls in store.spec.graph.kgbb_instances.items() if cls in cut_classes
    }
    units = [
        (u, su)
        for u, su in store.statement_units()
        if not su.meta.deleted and su.meta.kgbb_uri not in cut_instances
    ]
    by_resource: dict[Upri, list[Upri]] = {}
    for u, su in units:
        touched = {su.subject}
        touched |= {i.resource_uri for i in su.current_instances() if i.resource_uri}
        for r in touched:
            by_resource.setdefault(r, []).append(u)
    adjacency: dict[Upri, set[Upri]] = {u: set() for u, _ in units}
    for shared in by_resource.values():
        for a in shared:
            adjacency[a].update(b for b in shared if b != a)
    components: list[set[Upri]] = []
    seen: set[Upri] = set()
    for u, _ in units:
        if u in seen:
            continue
        comp = {u}
        stack = [u]
        seen.add(u)
        while stack:
            node = stack.pop()
            for nxt in adjacency[node]:
                if nxt not in seen:
                    seen.add(nxt)
                    comp.add(nxt)
                    stack.append(nxt)
        components.append(comp)
    return components


# ---------------------------------------------------------------------------
# dynamic metadata


def aggregate_dynamic_metadata(store: Store, unit_upri: Upri) -> dict:
    unit = store.unit(unit_upri)
    scope = _version_scope(store, unit)
    contributors: set[Upri] = set()
    last_updated: str | None = None
    licenses: set[Upri] = set()
    restrictions: set[Upri] = set()
    frameworks: set[Upri] = set()
    imported: set[Upri] = set()
    for u in scope:
        if isinstance(u, StatementUnit):
            licenses.add(u.license)
            frameworks.add(u.logical_framework)
            if u.access_restricted_to:
                restrictions.add(u.access_restricted_to)
            for inst in u.current_instances():
                contributors.add(inst.creator)
                if last_updated is None or inst.creation_date > last_updated:
                    last_updated = inst.creation_date
                if inst.imported_from:
                    imported.add(inst.imported_from)
        if u.meta.imported_from:
            imported.add(u.meta.imported_from)
    return {
        "contributors": sorted(contributors),
        "last_updated": last_updated,
        "copyright_license": _most_restrictive(store, licenses),
        "access_restriction": sorted(restrictions),
        "logical_framework": sorted(frameworks),
        "imported_from": sorted(imported),
    }


def _most_restrictive(store: Store, licenses: set[Upri]) -> Upri | None:
    if not licenses:
        return None
    if len(licenses) == 1:
        return next(iter(licenses))
    stricter: dict[str, set[str]] = {}
    for strict, loose in store.license_order:
        stricter.setdefault(loose, set()).add(strict)
    # transitive closure
    changed = True
    while changed:
        changed = False
        for loose, stricts in list(stricter.items()):
            for s in list(stricts):
                extra = stricter.get(s, set()) - stricts
                if extra:
                    stricts |= extra
                    changed = True

    def is_stricter(a: str, b: str) -> bool:
        return a in stricter.get(b, set())

    candidates = [
        lic
        for lic in licenses
        if all(lic == other or is_stricter(lic, other) for other in licenses)
    ]
    if len(candidates) != 1:
        unordered = sorted(licenses)
        raise IncomparableLicenses(unordered[0], unordered[-1])
    return candidates[0]


# ---------------------------------------------------------------------------
# whole-store helpers


def data_graph_layer(store: Store) -> dict[Upri, list[Triple]]:
    """Owning-unit assignment for every data triple in the store."""
    return {
        u: data_graph(su, store.required_positions_of(su))
        for u, su in store.statement_units()
    }
