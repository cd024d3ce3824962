"""Import templates: turn tabular records into validated create requests."""

from __future__ import annotations

from dataclasses import dataclass

from ..engine import CreateRequest, Provenance, Store
from ..model import Literal, Resource, Upri
from ..spec.types import ImportTemplate, StatementKgbbClass


@dataclass
class RowDiagnostic:
    row: int
    column: str | None
    message: str


def _resolve_resource(store: Store, text: str, constraint: Upri | None):
    """A cell names a resource by UPRI or label; unknown cells mint one."""
    if text in store.resources:
        return text
    matches = sorted(
        r.upri for r in store.resources.values() if r.label == text and r.kind != "class"
    )
    if matches:
        return matches[0]
    return Resource(upri="", kind="named-individual", class_affiliation=constraint, label=text)


def apply_import_template(
    store: Store,
    instance: Upri,
    rows: list[dict],
    template: ImportTemplate,
    provenance: Provenance,
) -> tuple[list[CreateRequest], list[RowDiagnostic]]:
    """One CreateRequest per valid row; invalid rows are reported, not fatal."""
    cls = store.spec.class_of_instance(instance)
    if not isinstance(cls, StatementKgbbClass):
        raise ValueError(f"{instance!r} is not a statement KGBB instance")

    covered = set(template.constants) | set(template.column_map.values())
    missing = [p.upri for p in cls.positions if p.required and p.upri not in covered]
    if missing:
        raise ValueError(f"import template covers no column for required positions {missing}")

    requests: list[CreateRequest] = []
    diagnostics: list[RowDiagnostic] = []
    for index, row in enumerate(rows):
        subject = None
        inputs: dict[str, object] = {}
        row_ok = True
        bindings = [(column, target, row.get(column)) for column, target in template.column_map.items()]
        bindings += [(None, target, value) for target, value in template.constants.items()]
        for column, target, raw in bindings:
            if raw is None or raw == "":
                continue
            text = str(raw).strip()
            if target == "subject":
                subject = _resolve_resource(store, text, cls.subject_constraint)
                continue
            pos = cls.position(target)
            if pos is None:
                diagnostics.append(
                    RowDiagnostic(index, column, f"template maps unknown position {target!r}")
                )
                row_ok = False
                continue
            if pos.object_type == "resource":
                inputs[target] = _resolve_resource(store, text, pos.resource_constraint)
            else:
                lit = Literal(text, pos.literal_constraint.datatype)
                if not lit.parses():
                    diagnostics.append(
                        RowDiagnostic(
                            index,
                            column,
                            f"{text!r} does not parse as {pos.literal_constraint.datatype}",
                        )
                    )
                    row_ok = False
                    continue
                inputs[target] = lit
        for pos in cls.positions:
            if pos.required and pos.upri not in inputs:
                diagnostics.append(
                    RowDiagnostic(index, None, f"required position {pos.upri!r} has no value")
                )
                row_ok = False
        if subject is None:
            diagnostics.append(RowDiagnostic(index, None, "row binds no subject"))
            row_ok = False
        if not row_ok:
            continue
        requests.append(
            CreateRequest(
                kgbb_instance=instance,
                provenance=provenance,
                subject=subject,
                inputs=inputs,
            )
        )
    return requests, diagnostics
