import json

import pytest

from kgbb.backends import (
    export_pg,
    export_rdf,
    export_tables,
    generate_membership_query,
    import_pg,
    import_rdf,
    import_tables,
    read_bundle_dir,
    write_bundle_dir,
)
from kgbb.backends.pg import evaluate_membership_query, export_pg_json
from kgbb.backends.tables import MANIFEST, TablesBundle
from kgbb.engine import Store, create_version, data_graph_layer, store_equal
from kgbb.errors import SchemaMismatch
from kgbb.model import StatementUnit

from genstore import random_store


def test_empty_store_round_trips(travel_spec):
    store = Store(travel_spec)
    assert store_equal(import_rdf(export_rdf(store), travel_spec), store)
    assert store_equal(import_pg(export_pg(store), travel_spec), store)
    assert store_equal(import_tables(export_tables(store), travel_spec), store)


def test_empty_store_exports_header_only(travel_spec):
    store = Store(travel_spec)
    text = export_rdf(store)
    assert text.splitlines()[0] == "@prefix kgbb: <urn:kgbb:> ."
    # only the registry graph (ontology class resources), no unit graphs
    assert "/meta>" not in text


def test_single_unit_named_graph_is_the_unit_upri(travel_store):
    store, unit = travel_store
    text = export_rdf(store)
    assert f"<{unit}> {{" in text
    assert f"<{unit}/meta> {{" in text


def test_rdf_round_trip_demo(weight_store):
    store, _ = weight_store
    again = import_rdf(export_rdf(store), store.spec)
    assert store_equal(store, again)


def test_exports_are_deterministic(weight_store):
    store, _ = weight_store
    assert export_rdf(store) == export_rdf(store)
    assert export_pg_json(store) == export_pg_json(store)
    assert export_tables(store).files == export_tables(store).files
    # an equal store reached through serialization exports byte-identically
    again = import_rdf(export_rdf(store), store.spec)
    assert export_rdf(again) == export_rdf(store)
    assert export_pg_json(again) == export_pg_json(store)
    assert export_tables(again).files == export_tables(store).files


def test_triple_count_conservation(weight_store):
    store, _ = weight_store
    text = export_rdf(store)
    layer = data_graph_layer(store)
    statement_graphs = sum(
        1 for u, su in store.units.items() if isinstance(su, StatementUnit)
    )
    assert text.count("/meta> {") == len(store.units)
    data_graph_opens = sum(
        1
        for line in text.splitlines()
        if line.endswith("{") and "/meta" not in line and "registry" not in line
    )
    assert data_graph_opens == statement_graphs
    emitted_data_triples = 0
    in_data_graph = False
    for line in text.splitlines():
        if line.endswith("{"):
            in_data_graph = "/meta" not in line and "registry" not in line
            continue
        if line.strip() == "}":
            in_data_graph = False
            continue
        if in_data_graph and line.strip().endswith("."):
            emitted_data_triples += 1
    assert emitted_data_triples == sum(len(ts) for ts in layer.values())


@pytest.mark.parametrize("seed", range(12))
def test_randomized_round_trips(seed):
    store = random_store(seed, ops=20)
    spec = store.spec
    assert store_equal(import_rdf(export_rdf(store), spec), store), f"rdf seed {seed}"
    assert store_equal(import_pg(export_pg(store), spec), store), f"pg seed {seed}"
    assert store_equal(import_tables(export_tables(store), spec), store), f"tables seed {seed}"


def test_pg_json_text_round_trip():
    store = random_store(99, ops=15)
    text = export_pg_json(store)
    again = import_pg(json.loads(text), store.spec)
    assert store_equal(store, again)


def test_bundle_dir_round_trip(tmp_path, weight_store):
    store, _ = weight_store
    bundle = export_tables(store)
    write_bundle_dir(bundle, tmp_path / "store")
    again = read_bundle_dir(tmp_path / "store")
    assert again.files == bundle.files
    assert store_equal(import_tables(again, store.spec), store)


def test_missing_object_table_is_reported(weight_store):
    store, _ = weight_store
    bundle = export_tables(store)
    manifest = bundle.manifest
    victim = next(iter(manifest["object_tables"].values()))
    files = {k: v for k, v in bundle.files.items() if k != victim}
    with pytest.raises(SchemaMismatch) as err:
        import_tables(TablesBundle(files=files), store.spec)
    assert victim in str(err.value)


def test_missing_manifest_is_reported(weight_store):
    store, _ = weight_store
    bundle = export_tables(store)
    files = {k: v for k, v in bundle.files.items() if k != MANIFEST}
    with pytest.raises(SchemaMismatch):
        import_tables(TablesBundle(files=files), store.spec)


def test_garbled_trig_is_reported(travel_spec):
    with pytest.raises(SchemaMismatch):
        import_rdf("this is not trig at all", travel_spec)


def test_foreign_pg_document_is_reported(travel_spec):
    with pytest.raises(SchemaMismatch):
        import_pg({"format": "something-else", "nodes": []}, travel_spec)


# ---------------------------------------------------------------------------
# membership queries


def test_cypher_membership_query_matches_the_convention():
    query = generate_membership_query("u1", "statement", "cypher")
    assert query == 'MATCH (n {current_version:"true"}) WHERE ("u1" IN n.statementUnitURI) RETURN n'
    assert (
        generate_membership_query("c1", "compound", "cypher")
        == 'MATCH (n {current_version:"true"}) WHERE ("c1" IN n.compoundUnitURI) RETURN n'
    )
    assert "listUnitURI" in generate_membership_query("l1", "list", "cypher")
    assert "versionID" in generate_membership_query("v1", "version", "cypher")
    assert "datasetUnitID" in generate_membership_query("d1", "dataset", "cypher")


def test_sparql_membership_query_selects_the_named_graph():
    assert (
        generate_membership_query("u1", "statement", "sparql")
        == "SELECT ?s ?p ?o WHERE { GRAPH <u1> { ?s ?p ?o } }"
    )


def test_statement_membership_against_exported_doc(weight_store):
    store, created = weight_store
    doc = export_pg(store)
    unit = store.units[created["weight"]]
    query = generate_membership_query(created["weight"], "statement", "cypher")
    got = evaluate_membership_query(doc, query)
    expected = {unit.subject}
    for inst in unit.positions:
        if inst.current_version:
            expected.add(inst.upri)
        if inst.resource_uri:
            expected.add(inst.resource_uri)
    assert got == expected


def test_compound_membership_spans_member_graphs(weight_store):
    store, created = weight_store
    doc = export_pg(store)
    query = generate_membership_query(created["compound"], "compound", "cypher")
    got = evaluate_membership_query(doc, query)
    quality = next(
        su for su in store.units.values()
        if isinstance(su, StatementUnit) and su.meta.kgbb_uri == "quality-1"
    )
    assert quality.upri in got
    assert quality.subject in got
    assert {i.upri for i in quality.positions} <= got


def test_version_membership_against_exported_doc(weight_store):
    store, created = weight_store
    from kgbb.engine import update_object_position, Provenance

    v1 = create_version(store, created["weight"], "urn:test:user:a")
    update_object_position(
        store, created["weight"], "pos-value", "5.5", Provenance(creator="urn:test:user:a")
    )
    doc = export_pg(store)
    query = generate_membership_query(v1, "version", "cypher")
    got = evaluate_membership_query(doc, query)
    unit = store.units[created["weight"]]
    expected = {
        i.upri for i in unit.positions if v1 in i.version_ids and i.current_version
    }
    expected |= {created["weight"]}  # the unit node carries its own version ids
    assert got == expected


def test_deleted_units_fall_out_of_membership(weight_store):
    store, created = weight_store
    from kgbb.engine import soft_delete

    soft_delete(store, created["weight"], "urn:test:user:a")
    doc = export_pg(store)
    query = generate_membership_query(created["weight"], "statement", "cypher")
    got = evaluate_membership_query(doc, query)
    assert created["weight"] not in got  # the unit node itself is not current anymore
