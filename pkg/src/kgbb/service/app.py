"""HTTP service exposing the engine over REST.

Every mutation requires an X-KGBB-User identity header, funnels through the
engine's single-writer lock, and is persisted to the store path (a tables
bundle directory) before the response returns. Reads of access-restricted
units are gated on the X-KGBB-Roles header.
"""

from __future__ import annotations

from pathlib import Path

from fastapi import FastAPI, Header, HTTPException, Query, Request
from fastapi.responses import JSONResponse, PlainTextResponse
from fastapi.staticfiles import StaticFiles

from .. import engine as eng
from .. import query as q
from ..backends import (
    export_pg,
    export_rdf,
    export_tables,
    import_tables,
    read_bundle_dir,
    write_bundle_dir,
)
from ..backends.codec import unit_to_record
from ..errors import (
    AlreadyDeleted,
    KgbbError,
    UnitNotFound,
    UnknownInstance,
    UnknownVersion,
)
from ..forms import form_descriptor
from ..model import (
    CompoundQuestionUnit,
    Literal,
    QuestionOp,
    QuestionUnit,
    Resource,
    LiteralBinding,
    ResourceBinding,
    StatementUnit,
    WildcardBinding,
)
from ..spec import AppSpec, spec_to_yaml, validate_spec
from ..spec.serialize import class_to_dict
from ..spec.types import BUILTIN_INSTANCES, builtin_classes
from ..templates import (
    apply_access_template,
    find_access_template,
    render_compound_display,
    render_mind_map,
    render_unit_label,
)
from . import schemas

_ERROR_STATUS = {
    "UnitNotFound": 404,
    "UnknownInstance": 404,
    "UnknownVersion": 404,
    "AlreadyDeleted": 409,
    "MaxCountExceeded": 409,
    "CascadeUnderflow": 422,
    "ConstraintViolation": 422,
    "MissingRequiredPosition": 422,
    "CategoryObjectMismatch": 422,
    "ChoiceRequired": 422,
    "BindingTypeMismatch": 422,
    "UnitLocked": 423,
    "NotReachable": 422,
}


def _to_resource(body: schemas.NewResource) -> Resource:
    return Resource(
        upri=body.upri,
        kind=body.kind,
        class_affiliation=body.class_affiliation,
        label=body.label,
    )


def _to_input(value):
    if isinstance(value, schemas.ResourceRef):
        return value.resource
    if isinstance(value, schemas.NewResourceInput):
        return _to_resource(value.new_resource)
    if isinstance(value, schemas.LiteralInput):
        return Literal(value.literal, value.datatype or "text")
    return value


def _to_request(body: schemas.CreateUnitBody, prov: eng.Provenance) -> eng.CreateRequest:
    subject = body.subject
    if isinstance(subject, schemas.NewResource):
        subject = _to_resource(subject)
    return eng.CreateRequest(
        kgbb_instance=body.kgbb_instance,
        provenance=prov,
        subject=subject,
        inputs={k: _to_input(v) for k, v in body.inputs.items()},
        category_choice=body.category_choice,
        cascade_inputs={
            target: [_to_request(nested, prov) for nested in nested_list]
            for target, nested_list in body.cascade_inputs.items()
        },
        associate=list(body.associate),
        negated=body.negated,
        license=body.license,
        logical_framework=body.logical_framework,
        access_restricted_to=body.access_restricted_to,
        confidence_level=body.confidence_level,
        validity_start_date=body.validity_start_date,
        validity_end_date=body.validity_end_date,
        references=list(body.references),
    )


def _to_binding(body: schemas.BindingBody | None):
    if body is None:
        return None
    if body.resource is not None:
        return ResourceBinding(resource=body.resource)
    if body.some_instance_of is not None:
        return WildcardBinding(mode="some-instance", class_upri=body.some_instance_of)
    if body.every_instance_of is not None:
        return WildcardBinding(mode="every-instance", class_upri=body.every_instance_of)
    if body.class_of is not None:
        return WildcardBinding(mode="class", class_upri=body.class_of)
    if body.literal is not None:
        lit = body.literal
        return LiteralBinding(
            datatype=lit.get("datatype"),
            equals=lit.get("equals"),
            minimum=lit.get("min"),
            maximum=lit.get("max"),
            pattern=lit.get("pattern"),
        )
    return None


def spec_as_dict(spec: AppSpec) -> dict:
    builtin = set(builtin_classes())
    graph = spec.graph
    return {
        "application": graph.application_upri,
        "ontology": [
            {
                "id": upri,
                "label": spec.ontology.labels.get(upri),
                "parent": parent,
            }
            for upri, parent in spec.ontology.parents.items()
        ],
        "classes": [class_to_dict(c) for cid, c in spec.taxonomy.items() if cid not in builtin],
        "instances": [
            {"id": inst, "class": cls}
            for inst, cls in graph.kgbb_instances.items()
            if inst not in BUILTIN_INSTANCES
        ],
        "associations": [vars(n) for n in graph.association_nodes],
        "links": [vars(n) for n in graph.link_nodes],
        "references": [vars(n) for n in graph.reference_nodes],
        "starting_points": [
            {
                "id": p,
                "label": spec.class_of_instance(p).label,
                "description": spec.class_of_instance(p).description,
                "kind": spec.class_of_instance(p).kind,
            }
            for p in graph.data_entry_starting_points
        ],
    }


def create_app(
    spec: AppSpec, store: eng.Store | None = None, store_path: str | Path | None = None
) -> FastAPI:
    app = FastAPI(title="kgbb", version="0.1.0")
    if store is None:
        if store_path is not None and Path(store_path, "manifest.json").exists():
            store = import_tables(read_bundle_dir(store_path), spec)
        else:
            store = eng.Store(spec)
    app.state.store = store
    app.state.spec = spec
    app.state.store_path = None if store_path is None else Path(store_path)

    def persist():
        if app.state.store_path is not None:
            write_bundle_dir(export_tables(app.state.store), app.state.store_path)

    @app.exception_handler(KgbbError)
    async def kgbb_error_handler(request: Request, exc: KgbbError):
        status = _ERROR_STATUS.get(type(exc).__name__, 400)
        return JSONResponse(
            status_code=status,
            content={"error": type(exc).__name__, "detail": str(exc)},
        )

    def require_user(x_kgbb_user: str | None) -> str:
        if not x_kgbb_user:
            raise HTTPException(status_code=401, detail="X-KGBB-User header required")
        return x_kgbb_user

    def check_access(unit, roles_header: str | None):
        if isinstance(unit, StatementUnit) and unit.access_restricted_to:
            roles = set(filter(None, (roles_header or "").split(",")))
            if unit.access_restricted_to not in roles:
                raise HTTPException(
                    status_code=403,
                    detail=f"unit restricted to role {unit.access_restricted_to!r}",
                )

    @app.get("/spec")
    def get_spec():
        return spec_as_dict(app.state.spec)

    @app.get("/spec/diagnostics")
    def get_spec_diagnostics():
        return {"diagnostics": [d.as_dict() for d in validate_spec(app.state.spec)]}

    @app.get("/spec/yaml", response_class=PlainTextResponse)
    def get_spec_yaml():
        return spec_to_yaml(app.state.spec)

    @app.get("/kgbbs/{instance}/form")
    def get_form(instance: str):
        return form_descriptor(app.state.spec, instance)

    @app.post("/units", status_code=201, response_model=schemas.UnitCreated)
    def post_unit(body: schemas.CreateUnitBody, x_kgbb_user: str | None = Header(default=None)):
        user = require_user(x_kgbb_user)
        prov = eng.Provenance(
            creator=user,
            application=app.state.spec.graph.application_upri,
            imported_from=body.imported_from,
        )
        req = _to_request(body, prov)
        cls = app.state.spec.class_of_instance(body.kgbb_instance)
        if cls is None:
            raise UnknownInstance(f"no KGBB instance {body.kgbb_instance!r}")
        if cls.kind == "compound":
            upri = eng.create_compound_unit(app.state.store, req)
        else:
            upri = eng.create_statement_unit(app.state.store, req)
        persist()
        return {"upri": upri}

    @app.get("/units")
    def list_units(
        include_deleted: bool = Query(default=False),
        kgbb_instance: str | None = Query(default=None),
    ):
        store = app.state.store
        out = []
        for upri, unit in store.units.items():
            if unit.meta.deleted and not include_deleted:
                continue
            if kgbb_instance is not None and unit.meta.kgbb_uri != kgbb_instance:
                continue
            out.append({"upri": upri, "kgbb_instance": unit.meta.kgbb_uri, "label": unit.meta.label})
        return {"units": out}

    @app.get("/units/{unit_id}")
    def get_unit(
        unit_id: str,
        version: str | None = Query(default=None),
        view: str | None = Query(default=None),
        include_deleted: bool = Query(default=False),
        x_kgbb_roles: str | None = Header(default=None),
    ):
        store = app.state.store
        unit = store.unit(unit_id)
        check_access(unit, x_kgbb_roles)
        if view is None:
            materialized = eng.read_unit(store, unit_id, version=version, include_deleted=include_deleted)
            record = unit_to_record(unit)
            return {
                "upri": unit_id,
                "kind": materialized.kind,
                "record": record,
                "instances": [vars(i) | {"literal": None if i.literal is None else vars(i.literal)} for i in materialized.instances],
                "members": materialized.members,
                "linked": materialized.linked,
                "deleted": unit.meta.deleted,
            }
        if view == "label":
            eng.read_unit(store, unit_id, version=version, include_deleted=include_deleted)
            return {"upri": unit_id, "label": render_unit_label(store, unit_id, version=version)}
        if view == "mindmap":
            eng.read_unit(store, unit_id, version=version, include_deleted=include_deleted)
            return render_mind_map(store, unit_id)
        if view == "display":
            eng.read_unit(store, unit_id, version=version, include_deleted=include_deleted)
            return render_compound_display(store, unit_id)
        if view.startswith("access:"):
            template = find_access_template(store, unit_id, view.split(":", 1)[1])
            output = apply_access_template(store, unit_id, template)
            return {
                "format": output.format,
                "triples": [
                    {
                        "subject": t.subject,
                        "predicate": t.predicate,
                        "object": vars(t.object) if isinstance(t.object, Literal) else t.object,
                    }
                    for t in output.triples
                ],
                "document": output.document,
                "text": output.text,
            }
        raise HTTPException(status_code=400, detail=f"unknown view {view!r}")

    @app.get("/units/{unit_id}/history")
    def get_history(unit_id: str):
        store = app.state.store
        history = eng.edit_history(store, unit_id)
        return {
            "unit": unit_id,
            "history": {
                pos: [
                    {
                        "instance": i.upri,
                        "value": i.literal.value if i.literal else i.resource_uri,
                        "current": i.current_version,
                        "creator": i.creator,
                        "creation_date": i.creation_date,
                        "versions": i.version_ids,
                    }
                    for i in instances
                ]
                for pos, instances in history.items()
            },
        }

    @app.get("/units/{unit_id}/metadata")
    def get_dynamic_metadata(unit_id: str):
        return eng.aggregate_dynamic_metadata(app.state.store, unit_id)

    @app.patch("/units/{unit_id}/positions/{position}", response_model=schemas.PositionUpdated)
    def patch_position(
        unit_id: str,
        position: str,
        body: schemas.PositionUpdateBody,
        x_kgbb_user: str | None = Header(default=None),
    ):
        user = require_user(x_kgbb_user)
        prov = eng.Provenance(creator=user, application=app.state.spec.graph.application_upri)
        instance = eng.update_object_position(
            app.state.store, unit_id, position, _to_input(body.input), prov
        )
        persist()
        return {"instance": instance}

    @app.delete("/units/{unit_id}", status_code=204)
    def delete_unit(
        unit_id: str,
        cascade: bool = Query(default=False),
        x_kgbb_user: str | None = Header(default=None),
    ):
        user = require_user(x_kgbb_user)
        eng.soft_delete(app.state.store, unit_id, user, cascade=cascade)
        persist()

    @app.post("/units/{unit_id}/versions", status_code=201, response_model=schemas.VersionCreated)
    def post_version(unit_id: str, x_kgbb_user: str | None = Header(default=None)):
        user = require_user(x_kgbb_user)
        version = eng.create_version(app.state.store, unit_id, user)
        persist()
        return {"version": version}

    @app.post("/questions", status_code=201, response_model=schemas.QuestionCreated)
    def post_question(body: schemas.QuestionBody, x_kgbb_user: str | None = Header(default=None)):
        user = require_user(x_kgbb_user)
        store = app.state.store
        question = q.build_question(
            store,
            body.kgbb_instance,
            _to_binding(body.subject),
            {pos: _to_binding(b) for pos, b in body.bindings.items()},
            eng.Provenance(creator=user, application=app.state.spec.graph.application_upri),
        )
        eng.create_question_unit(store, question)
        persist()
        return {
            "upri": question.upri,
            "mode": question.mode,
            "label": q.render_question_label(store, question),
        }

    @app.post("/questions/compound", status_code=201, response_model=schemas.QuestionCreated)
    def post_compound_question(
        body: schemas.CompoundQuestionBody, x_kgbb_user: str | None = Header(default=None)
    ):
        user = require_user(x_kgbb_user)
        store = app.state.store

        def to_tree(node: schemas.CompoundQuestionBody) -> QuestionOp:
            return QuestionOp(
                op=node.op,
                children=[
                    to_tree(c) if isinstance(c, schemas.CompoundQuestionBody) else c
                    for c in node.children
                ],
            )

        compound = q.build_compound(
            store,
            to_tree(body),
            eng.Provenance(creator=user, application=app.state.spec.graph.application_upri),
        )
        eng.create_question_unit(store, compound)
        persist()
        return {"upri": compound.upri, "mode": "list", "label": compound.meta.label}

    @app.post("/questions/{question_id}/execute", response_model=schemas.ExecutionResult)
    def execute(question_id: str):
        store = app.state.store
        unit = store.unit(question_id)
        if isinstance(unit, QuestionUnit):
            result = q.execute_question(store, unit)
            if isinstance(result, bool):
                return {"mode": "boolean", "boolean": result}
            return {
                "mode": "list",
                "units": result,
                "labels": {u: render_unit_label(store, u) for u in result},
            }
        if isinstance(unit, CompoundQuestionUnit):
            result = sorted(q.execute_compound(store, unit))
            return {
                "mode": "list",
                "units": result,
                "labels": {u: render_unit_label(store, u) for u in result},
            }
        raise UnitNotFound(f"{question_id!r} is not a question unit")

    @app.get("/export")
    def export(format: str = Query()):
        store = app.state.store
        if format == "trig":
            return PlainTextResponse(export_rdf(store), media_type="application/trig")
        if format == "pg-json":
            return JSONResponse(export_pg(store))
        if format == "tables":
            return JSONResponse({"files": export_tables(store).files})
        raise HTTPException(status_code=400, detail=f"unknown export format {format!r}")

    ui_dir = Path(__file__).resolve().parents[3] / "frontend" / "dist"
    if ui_dir.exists():
        app.mount("/ui", StaticFiles(directory=str(ui_dir), html=True), name="ui")

    return app
