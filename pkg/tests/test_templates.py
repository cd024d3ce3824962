import pytest

from kgbb.engine import (
    CreateRequest,
    Provenance,
    Store,
    create_compound_unit,
    create_statement_unit,
)
from kgbb.errors import TemplateReferencesUnknownTarget, UnmappedRequiredPosition
from kgbb.model import Literal, Resource
from kgbb.spec import derive_owl_access_template
from kgbb.spec.types import CompoundDisplayTemplate, DisplaySection
from kgbb.templates import (
    apply_access_template,
    apply_import_template,
    find_access_template,
    render_category_label,
    render_compound_display,
    render_mind_map,
    render_unit_label,
)

PROV = Provenance(creator="urn:test:user:a", application="urn:test:app")


def test_travel_golden_label(travel_store):
    store, unit = travel_store
    assert (
        render_unit_label(store, unit)
        == "Anna travels by train from Berlin to Rome on the 5th of August 2019"
    )


def test_weight_golden_label(weight_store):
    store, created = weight_store
    assert (
        render_unit_label(store, created["weight"])
        == "weight (95% conf. interval): 5 (4.54-5.55) kilogram"
    )


def test_partial_travel_label_elides_unbound_adjuncts(travel_spec):
    store = Store(travel_spec)
    unit = create_statement_unit(
        store,
        CreateRequest(
            kgbb_instance="travel-1",
            provenance=PROV,
            subject=Resource(upri="r:anna", kind="named-individual",
                             class_affiliation="PERSON", label="Anna"),
            inputs={
                "pos-destination": Resource(upri="r:rome", kind="named-individual",
                                            class_affiliation="CITY", label="Rome")
            },
        ),
    )
    assert render_unit_label(store, unit) == "Anna travels to Rome"


def test_label_renders_versioned_inputs(weight_store):
    store, created = weight_store
    from kgbb.engine import create_version, update_object_position

    v1 = create_version(store, created["weight"], "urn:test:user:a")
    update_object_position(store, created["weight"], "pos-value", "6.5", PROV)
    assert "6.5" in render_unit_label(store, created["weight"])
    assert "5 (" in render_unit_label(store, created["weight"], version=v1)


def test_label_purity(travel_store):
    store, unit = travel_store
    assert render_unit_label(store, unit) == render_unit_label(store, unit)


def test_negated_assertional_uses_the_negation_variant(partonomy_spec):
    store = Store(partonomy_spec)
    create_compound_unit(
        store,
        CreateRequest(
            kgbb_instance="item-1",
            provenance=PROV,
            subject=Resource(upri="r:head", kind="named-individual",
                             class_affiliation="MATERIAL_ENTITY", label="Head x"),
        ),
    )
    unit = create_statement_unit(
        store,
        CreateRequest(
            kgbb_instance="haspart-1",
            provenance=PROV,
            subject="r:head",
            inputs={
                "pos-part": Resource(upri="r:antenna", kind="named-individual",
                                     class_affiliation="MATERIAL_ENTITY", label="antenna")
            },
            negated=True,
        ),
    )
    assert render_category_label(store, unit) == "Head x has no antenna"
    from kgbb import vocab

    assert vocab.NEGATION_UNIT_CLASS in store.units[unit].meta.types


# ---------------------------------------------------------------------------
# mind maps


def test_travel_mind_map_is_a_hub_with_four_spokes(travel_store):
    store, unit = travel_store
    mm = render_mind_map(store, unit)
    hub = next(n for n in mm["nodes"] if n["id"] == unit)
    assert hub["label"] == "travels"
    spokes = [e for e in mm["edges"] if e["source"] == unit]
    assert len(spokes) == 4
    assert {e["label"] for e in spokes} == {"by", "from", "to", "on the"}
    assert any(e["target"] == unit for e in mm["edges"])  # subject connects to the hub
    assert len(mm["nodes"]) == 6  # hub + subject + 4 objects


def test_unary_statement_renders_without_a_hub(partonomy_spec):
    store = Store(partonomy_spec)
    create_compound_unit(
        store,
        CreateRequest(
            kgbb_instance="item-1",
            provenance=PROV,
            subject=Resource(upri="r:hand", kind="named-individual",
                             class_affiliation="MATERIAL_ENTITY", label="hand"),
        ),
    )
    unit = create_statement_unit(
        store,
        CreateRequest(
            kgbb_instance="haspart-1",
            provenance=PROV,
            subject="r:hand",
            inputs={
                "pos-part": Resource(upri="r:thumb", kind="named-individual",
                                     class_affiliation="MATERIAL_ENTITY", label="thumb")
            },
        ),
    )
    mm = render_mind_map(store, unit)
    assert len(mm["nodes"]) == 2
    assert mm["edges"] == [{"source": "r:hand", "target": "r:thumb", "label": "has part"}]


def test_compound_mind_map_merges_and_deduplicates(partonomy_spec):
    store = Store(partonomy_spec)
    item = create_compound_unit(
        store,
        CreateRequest(
            kgbb_instance="item-1",
            provenance=PROV,
            subject=Resource(upri="r:hand", kind="named-individual",
                             class_affiliation="MATERIAL_ENTITY", label="hand"),
        ),
    )
    for part in ("thumb", "palm"):
        create_statement_unit(
            store,
            CreateRequest(
                kgbb_instance="haspart-1",
                provenance=PROV,
                subject="r:hand",
                inputs={
                    "pos-part": Resource(upri=f"r:{part}", kind="named-individual",
                                         class_affiliation="MATERIAL_ENTITY", label=part)
                },
            ),
        )
    mm = render_mind_map(store, item)
    ids = [n["id"] for n in mm["nodes"]]
    assert len(ids) == len(set(ids))
    assert "r:hand" in ids and "r:thumb" in ids and "r:palm" in ids


# ---------------------------------------------------------------------------
# compound display documents


def _population_store(population_spec):
    store = Store(population_spec)
    pop = Resource(upri="r:wuhan-pop", kind="named-individual",
                   class_affiliation="POPULATION", label="Wuhan population")
    compound = create_compound_unit(
        store, CreateRequest(kgbb_instance="population-1", provenance=PROV, subject=pop)
    )
    create_statement_unit(
        store,
        CreateRequest(
            kgbb_instance="located-1",
            provenance=PROV,
            subject="r:wuhan-pop",
            inputs={
                "pos-location": Resource(upri="r:wuhan", kind="named-individual",
                                         class_affiliation="LOCATION", label="Wuhan")
            },
        ),
    )
    create_statement_unit(
        store,
        CreateRequest(
            kgbb_instance="participates-1",
            provenance=PROV,
            subject="r:wuhan-pop",
            inputs={
                "pos-process": Resource(upri="r:outbreak", kind="named-individual",
                                        class_affiliation="PROCESS", label="the outbreak")
            },
        ),
    )
    for value in ("2.4", "3.1"):
        create_statement_unit(
            store,
            CreateRequest(
                kgbb_instance="rnought-1",
                provenance=PROV,
                subject="r:wuhan-pop",
                inputs={"pos-r0": value, "pos-r0-lower": "1.9", "pos-r0-upper": "3.9"},
            ),
        )
    return store, compound


def test_population_display_document(population_spec):
    store, compound = _population_store(population_spec)
    doc = render_compound_display(store, compound)
    assert doc["headline"]["subject"] == "Wuhan population"
    titles = [s["title"] for s in doc["sections"]]
    assert titles == [
        "located in",
        "time period",
        "participates in",
        "Basic reproduction number measurements (with 95% confidence interval)",
    ]
    located = doc["sections"][0]
    assert located["items"][0]["label"] == "Wuhan population located in Wuhan"
    time_section = doc["sections"][1]
    assert time_section["items"] == []
    assert time_section["placeholder"] == "time period not specified"
    measurements = doc["sections"][3]
    assert len(measurements["items"]) == 2


def test_empty_compound_renders_placeholders_only(population_spec):
    store = Store(population_spec)
    compound = create_compound_unit(
        store,
        CreateRequest(
            kgbb_instance="population-1",
            provenance=PROV,
            subject=Resource(upri="r:pop", kind="named-individual",
                             class_affiliation="POPULATION", label="some population"),
        ),
    )
    doc = render_compound_display(store, compound)
    assert all(not s["items"] for s in doc["sections"])
    assert doc["sections"][1]["placeholder"] == "time period not specified"


def test_display_section_with_unknown_target_errors(population_spec):
    store, compound = _population_store(population_spec)
    template = CompoundDisplayTemplate(
        upri="t", sections=[DisplaySection(title="nope", target="located-ghost")]
    )
    with pytest.raises(TemplateReferencesUnknownTarget):
        render_compound_display(store, compound, template)


# ---------------------------------------------------------------------------
# access templates


def test_obo_style_access_template(weight_store):
    store, created = weight_store
    template = find_access_template(store, created["weight"], "weight-obo")
    output = apply_access_template(store, created["weight"], template)
    unit = store.units[created["weight"]]
    fresh_nodes = {
        t.subject for t in output.triples if t.subject.startswith("urn:kgbb:fresh:")
    }
    assert len(fresh_nodes) == 1
    assert any(
        t.predicate == "has-measurement-datum" and t.subject == unit.subject
        for t in output.triples
    )
    values = output.payload_values()
    assert values == sorted(["5", "4.54", "5.55", "urn:demo:res:kilogram"])


def test_broker_property_obo_vs_oboe(weight_store):
    store, created = weight_store
    obo = apply_access_template(
        store, created["weight"], find_access_template(store, created["weight"], "weight-obo")
    )
    oboe = apply_access_template(
        store, created["weight"], find_access_template(store, created["weight"], "weight-oboe")
    )
    assert obo.payload_values() == oboe.payload_values()
    obo_shape = {t.predicate for t in obo.triples}
    oboe_shape = {t.predicate for t in oboe.triples}
    assert obo_shape != oboe_shape  # structurally different graphs, same payload


def test_fresh_nodes_are_minted_per_export(weight_store):
    store, created = weight_store
    template = find_access_template(store, created["weight"], "weight-obo")
    first = apply_access_template(store, created["weight"], template)
    second = apply_access_template(store, created["weight"], template)
    fresh = lambda out: {t.subject for t in out.triples if t.subject.startswith("urn:kgbb:fresh:")}
    assert fresh(first) and fresh(first) != fresh(second)


def test_owl_access_template_application(travel_store):
    store, unit = travel_store
    cls = store.spec.taxonomy["travel-statement"]
    template = derive_owl_access_template(cls)
    output = apply_access_template(store, unit, template)
    by_predicate = {t.predicate: t.object for t in output.triples}
    assert by_predicate["travelsTo"] == "urn:demo:res:rome"
    assert by_predicate["travelsFrom"] == "urn:demo:res:berlin"
    assert by_predicate["travelsWith"] == "urn:demo:res:train"
    assert by_predicate["travelsOn"] == Literal("5th of August 2019", "DATETIME")
    assert all(t.subject == "urn:demo:res:anna" for t in output.triples)


def test_unmapped_required_position_errors(weight_store):
    store, created = weight_store
    from kgbb.spec.types import AccessTemplate, MappingEntry

    bad = AccessTemplate(
        upri="bad", format="json",
        mapping=[MappingEntry(source="pos-value", target="value")],
    )
    with pytest.raises(UnmappedRequiredPosition):
        apply_access_template(store, created["weight"], bad)


# ---------------------------------------------------------------------------
# import templates


def _travel_template(store):
    cls = store.spec.taxonomy["travel-statement"]
    return cls.import_templates[0]


def test_csv_import_three_rows(travel_spec):
    store = Store(travel_spec)
    rows = [
        {"person": "Anna", "transportation": "train", "departure": "Berlin",
         "destination": "Rome", "datetime": "5th of August 2019"},
        {"person": "Bob", "destination": "Paris"},
        {"person": "Cleo", "destination": "Oslo", "datetime": "yesterday"},
    ]
    prov = Provenance(creator="urn:test:user:a", application="urn:test:app",
                      imported_from="urn:test:dataset:trips")
    requests, diagnostics = apply_import_template(
        store, "travel-1", rows, _travel_template(store), prov
    )
    assert len(requests) == 3
    assert diagnostics == []
    created = [create_statement_unit(store, r) for r in requests]
    for upri in created:
        assert store.units[upri].meta.imported_from == "urn:test:dataset:trips"
        assert store.units[upri].meta.import_date is not None
    assert "DESTINATION" not in render_unit_label(store, created[1])
    assert render_unit_label(store, created[1]) == "Bob travels to Paris"


def test_import_rejects_bad_rows_but_keeps_good_ones(weight_spec):
    store = Store(weight_spec)
    from kgbb.spec.types import ImportTemplate

    template = ImportTemplate(
        upri="w",
        column_map={"subject": "subject", "value": "pos-value", "unit": "pos-unit"},
    )
    rows = [
        {"subject": "thing-1", "value": "5.5", "unit": "kilogram"},
        {"subject": "thing-2", "value": "not-a-float", "unit": "kilogram"},
        {"subject": "", "value": "3", "unit": "kilogram"},
    ]
    requests, diagnostics = apply_import_template(
        store, "weight-1", rows, template, Provenance(creator="u")
    )
    assert len(requests) == 1
    assert {d.row for d in diagnostics} == {1, 2}
    assert any(d.column == "value" for d in diagnostics)


def test_import_template_must_cover_required_positions(weight_spec):
    store = Store(weight_spec)
    from kgbb.spec.types import ImportTemplate

    template = ImportTemplate(upri="w", column_map={"subject": "subject", "value": "pos-value"})
    with pytest.raises(ValueError):
        apply_import_template(store, "weight-1", [], template, Provenance(creator="u"))


def test_reimport_of_exported_values_rebuilds_equal_units(travel_store):
    store, unit = travel_store
    source = store.units[unit]
    label_by_pos = {
        i.position_class: (i.literal.value if i.literal else store.resources[i.resource_uri].label)
        for i in source.current_instances()
    }
    row = {
        "person": store.resources[source.subject].label,
        "transportation": label_by_pos["pos-transportation"],
        "departure": label_by_pos["pos-departure"],
        "destination": label_by_pos["pos-destination"],
        "datetime": label_by_pos["pos-datetime"],
    }
    requests, diagnostics = apply_import_template(
        store, "travel-1", [row], _travel_template(store), Provenance(creator="u")
    )
    assert not diagnostics
    new_unit = create_statement_unit(store, requests[0])
    rebuilt = store.units[new_unit]
    assert rebuilt.subject == source.subject  # resolved by label to the same resource
    original_values = {
        i.position_class: i.literal.value if i.literal else i.resource_uri
        for i in source.current_instances()
    }
    rebuilt_values = {
        i.position_class: i.literal.value if i.literal else i.resource_uri
        for i in rebuilt.current_instances()
    }
    assert rebuilt_values == original_values
    assert rebuilt.category == source.category
