"""Relational form: a bundle of CSV files plus a manifest.

One semantic header table holds the per-unit metadata rows, one subject table
per statement KGBB class links units to their position-instance UPRIs, and one
object table per object-position class holds the instance rows. Multi-valued
cells are JSON-encoded arrays (RFC 4180 quoting keeps them plain CSV).
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field
from pathlib import Path

from ..engine import Store
from ..errors import SchemaMismatch
from ..model import StatementUnit
from ..spec.types import AppSpec, StatementKgbbClass
from . import codec

MANIFEST = "manifest.json"

_HEADER_COLUMNS = [
    "upri",
    "unit_kind",
    "label",
    "types",
    "has_semantic_unit_subject",
    "kgbb_uri",
    "creator",
    "creation_date",
    "created_with_application",
    "imported_from",
    "import_date",
    "curator",
    "curation_date",
    "deleted_by",
    "deletion_date",
    "data_production_metadata",
    "version_ids",
    "dataset_unit_ids",
    "editable",
    "subject",
    "category",
    "negated",
    "based_on_graph_pattern",
    "license",
    "logical_framework",
    "access_restricted_to",
    "confidence_level",
    "validity_start_date",
    "validity_end_date",
    "references",
    "object_described_by_semantic_unit",
    "constraint_nodes",
    "compound_kind",
    "has_associated_semantic_unit",
    "has_linked_semantic_unit",
    "based_on_statement_kgbb",
    "mode",
    "subject_binding",
    "bindings",
    "tree",
]
_JSON_COLUMNS = {
    "types",
    "version_ids",
    "dataset_unit_ids",
    "references",
    "object_described_by_semantic_unit",
    "constraint_nodes",
    "has_associated_semantic_unit",
    "has_linked_semantic_unit",
    "subject_binding",
    "bindings",
    "tree",
}
_BOOL_COLUMNS = {"editable", "negated", "current_version"}

_RESOURCE_COLUMNS = ["upri", "kind", "class_affiliation", "label"]
_VERSION_COLUMNS = ["upri", "of_unit", "creation_date", "creator", "previous_version", "content_id"]
_OBJECT_COLUMNS = [
    "upri",
    "unit",
    "position_class",
    "input_type_label",
    "resource_uri",
    "literal_value",
    "literal_datatype",
    "logical_property",
    "current_version",
    "creator",
    "creation_date",
    "created_with_application",
    "imported_from",
    "version_ids",
    "dataset_unit_ids",
]


@dataclass
class TablesBundle:
    files: dict[str, str] = field(default_factory=dict)

    @property
    def manifest(self) -> dict:
        return json.loads(self.files[MANIFEST])


def _cell(column: str, value) -> str:
    if column in _JSON_COLUMNS:
        return json.dumps(value) if value is not None else ""
    if column in _BOOL_COLUMNS:
        return "true" if value else "false"
    return "" if value is None else str(value)


def _uncell(column: str, text: str):
    if column in _JSON_COLUMNS:
        return json.loads(text) if text else None
    if column in _BOOL_COLUMNS:
        return text == "true"
    return text if text != "" else None


def _write_csv(columns: list[str], rows: list[dict]) -> str:
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([_cell(c, row.get(c)) for c in columns])
    return out.getvalue()


def _read_csv(text: str, filename: str) -> list[dict]:
    reader = csv.reader(io.StringIO(text))
    try:
        columns = next(reader)
    except StopIteration:
        raise SchemaMismatch(f"empty table {filename!r}")
    rows = []
    for raw in reader:
        if len(raw) != len(columns):
            raise SchemaMismatch(f"row width mismatch in {filename!r}", record=str(raw[:2]))
        rows.append({c: _uncell(c, v) for c, v in zip(columns, raw)})
    return rows


def _table_slug(upri: str) -> str:
    return "".join(c if c.isalnum() else "_" for c in upri)


def export_tables(store: Store) -> TablesBundle:
    files: dict[str, str] = {}
    subject_tables: dict[str, str] = {}
    object_tables: dict[str, str] = {}

    header_rows = []
    statement_units: list[tuple[str, StatementUnit]] = []
    for upri in sorted(store.units):
        unit = store.units[upri]
        record = codec.unit_to_record(unit)
        row = {"upri": upri, "unit_kind": record["unit_kind"], **record["meta"]}
        for column in _HEADER_COLUMNS:
            if column in record and column not in row:
                row[column] = record[column]
        header_rows.append(row)
        if isinstance(unit, StatementUnit):
            statement_units.append((upri, unit))
    files["header.csv"] = _write_csv(_HEADER_COLUMNS, header_rows)

    files["resources.csv"] = _write_csv(
        _RESOURCE_COLUMNS,
        [codec.resource_to_record(store.resources[u]) for u in sorted(store.resources)],
    )
    files["versions.csv"] = _write_csv(
        _VERSION_COLUMNS,
        [codec.version_to_record(store.versions[u]) for u in sorted(store.versions)],
    )

    by_class: dict[str, list[tuple[str, StatementUnit]]] = {}
    instance_rows: dict[str, list[dict]] = {}
    for upri, unit in statement_units:
        cls = store.class_of_unit(unit)
        if not isinstance(cls, StatementKgbbClass):
            raise SchemaMismatch(f"unit {upri!r} has no statement KGBB class")
        by_class.setdefault(cls.upri, []).append((upri, unit))
        for inst in unit.positions:
            inst_record = codec.instance_to_record(inst)
            inst_record["unit"] = upri
            instance_rows.setdefault(inst.position_class, []).append(inst_record)

    for cls_upri in sorted(by_class):
        cls = store.spec.taxonomy[cls_upri]
        position_ids = [p.upri for p in cls.positions]
        required = {p.upri for p in cls.positions if p.required}
        columns = ["unit_upri"] + [
            ("requiredObjectPosition:" if p in required else "optionalObjectPosition:") + p
            for p in position_ids
        ]
        out = io.StringIO()
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow(columns)
        for upri, unit in by_class[cls_upri]:
            grouped: dict[str, list[str]] = {p: [] for p in position_ids}
            for inst in unit.positions:
                grouped.setdefault(inst.position_class, []).append(inst.upri)
            writer.writerow(
                [upri] + [json.dumps(grouped.get(c.split(":", 1)[1], [])) for c in columns[1:]]
            )
        filename = f"subject_{_table_slug(cls_upri)}.csv"
        files[filename] = out.getvalue()
        subject_tables[cls_upri] = filename

        for pos_id in position_ids:
            if pos_id in object_tables:
                continue  # position classes shared through inheritance
            obj_filename = f"object_{_table_slug(pos_id)}.csv"
            object_tables[pos_id] = obj_filename
            rows_for_pos = sorted(
                instance_rows.get(pos_id, []),
                key=lambda r: (r.get("creation_date") or "", r["upri"]),
            )
            files[obj_filename] = _write_csv(_OBJECT_COLUMNS, rows_for_pos)

    manifest = {
        "format": "kgbb-tables",
        "version": 1,
        "application": store.spec.graph.application_upri,
        "header": "header.csv",
        "resources": "resources.csv",
        "versions": "versions.csv",
        "subject_tables": subject_tables,
        "object_tables": object_tables,
    }
    files[MANIFEST] = json.dumps(manifest, indent=2, sort_keys=True)
    return TablesBundle(files=files)


def import_tables(bundle: TablesBundle, spec: AppSpec) -> Store:
    if MANIFEST not in bundle.files:
        raise SchemaMismatch(f"bundle is missing {MANIFEST!r}")
    manifest = bundle.manifest
    if manifest.get("format") != "kgbb-tables":
        raise SchemaMismatch("not a kgbb tables bundle")

    def table(name: str) -> list[dict]:
        if name not in bundle.files:
            raise SchemaMismatch(f"bundle is missing table {name!r}", record=name)
        return _read_csv(bundle.files[name], name)

    store = Store(spec)
    for row in table(manifest["resources"]):
        store.resources[row["upri"]] = codec.record_to_resource(row)
    for row in table(manifest["versions"]):
        store.versions[row["upri"]] = codec.record_to_version(row)

    instances_by_unit: dict[str, dict[str, dict]] = {}
    for pos_id, filename in manifest["object_tables"].items():
        for row in table(filename):
            instances_by_unit.setdefault(row["unit"], {})[row["upri"]] = row

    unit_positions: dict[str, list[dict]] = {}
    for cls_upri, filename in manifest["subject_tables"].items():
        for row in table(filename):
            unit_upri = row.get("unit_upri")
            if not unit_upri:
                raise SchemaMismatch(f"subject table {filename!r} row without unit_upri")
            ordered: list[dict] = []
            available = instances_by_unit.get(unit_upri, {})
            for column, value in row.items():
                if column == "unit_upri" or value in (None, ""):
                    continue
                for inst_upri in json.loads(value):
                    if inst_upri not in available:
                        raise SchemaMismatch(
                            f"instance {inst_upri!r} missing from object tables", record=inst_upri
                        )
                    ordered.append(available[inst_upri])
            ordered.sort(key=lambda r: (r.get("creation_date") or "", r["upri"]))
            unit_positions[unit_upri] = ordered

    for row in table(manifest["header"]):
        kind = row.get("unit_kind")
        record = {
            "upri": row["upri"],
            "unit_kind": kind,
            "meta": {k: row.get(k) for k in codec.META_FIELDS},
        }
        record["meta"]["types"] = row.get("types") or []
        record["meta"]["version_ids"] = row.get("version_ids") or []
        record["meta"]["dataset_unit_ids"] = row.get("dataset_unit_ids") or []
        record["meta"]["editable"] = row.get("editable", True)
        if kind == "statement":
            record.update(
                {
                    "subject": row.get("subject"),
                    "category": row.get("category"),
                    "negated": row.get("negated", False),
                    "based_on_graph_pattern": row.get("based_on_graph_pattern"),
                    "license": row.get("license"),
                    "logical_framework": row.get("logical_framework"),
                    "access_restricted_to": row.get("access_restricted_to"),
                    "confidence_level": row.get("confidence_level"),
                    "validity_start_date": row.get("validity_start_date"),
                    "validity_end_date": row.get("validity_end_date"),
                    "references": row.get("references") or [],
                    "object_described_by_semantic_unit": row.get("object_described_by_semantic_unit")
                    or [],
                    "constraint_nodes": row.get("constraint_nodes") or [],
                    "positions": unit_positions.get(row["upri"], []),
                }
            )
        elif kind == "compound":
            record.update(
                {
                    "compound_kind": row.get("compound_kind"),
                    "has_associated_semantic_unit": row.get("has_associated_semantic_unit") or [],
                    "has_linked_semantic_unit": row.get("has_linked_semantic_unit") or [],
                }
            )
        elif kind == "question":
            record.update(
                {
                    "based_on_statement_kgbb": row.get("based_on_statement_kgbb"),
                    "mode": row.get("mode"),
                    "subject_binding": row.get("subject_binding"),
                    "bindings": row.get("bindings") or {},
                }
            )
        elif kind == "compound-question":
            record["tree"] = row.get("tree") or {}
        else:
            raise SchemaMismatch(f"unknown unit kind {kind!r}", record=row.get("upri"))
        store.units[row["upri"]] = codec.record_to_unit(record)
    return store


def write_bundle_dir(bundle: TablesBundle, path: str | Path):
    root = Path(path)
    root.mkdir(parents=True, exist_ok=True)
    for name, content in bundle.files.items():
        (root / name).write_text(content, encoding="utf-8")


def read_bundle_dir(path: str | Path) -> TablesBundle:
    root = Path(path)
    if not (root / MANIFEST).exists():
        raise SchemaMismatch(f"no {MANIFEST} in {root}")
    files = {
        p.name: p.read_text(encoding="utf-8")
        for p in sorted(root.iterdir())
        if p.is_file()
    }
    return TablesBundle(files=files)
