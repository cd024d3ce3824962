"""Command-line frontend: spec validation, import/export, queries, serving."""

from __future__ import annotations

import csv
import json
import sys
from pathlib import Path

import click
import yaml

from . import engine as eng
from . import query as q
from .backends import (
    export_rdf,
    export_tables,
    import_tables,
    read_bundle_dir,
    write_bundle_dir,
)
from .backends.pg import export_pg_json
from .demo import DEMO_NAMES, demo_spec_text, load_demo, seed
from .errors import KgbbError, SpecError
from .model import LiteralBinding, ResourceBinding, WildcardBinding
from .spec import load_spec_file, validate_spec_file
from .templates import apply_import_template


@click.group()
def main():
    """Manage KGBB-driven knowledge graph stores."""


def _fail(message: str, as_json: bool, payload: list | None = None, code: int = 1):
    if as_json:
        click.echo(json.dumps({"ok": False, "error": message, "diagnostics": payload or []}))
    else:
        click.echo(message, err=True)
        for item in payload or []:
            click.echo(f"  - {item}", err=True)
    sys.exit(code)


def _load_spec_arg(spec_path: str | None):
    if spec_path is None:
        raise click.UsageError("provide --spec or set KGBB_SPEC")
    if spec_path.startswith("demo:"):
        return load_demo(spec_path.split(":", 1)[1])
    return load_spec_file(spec_path)


def _load_store(spec, store_path: str | None) -> eng.Store:
    if store_path and Path(store_path, "manifest.json").exists():
        return import_tables(read_bundle_dir(store_path), spec)
    return eng.Store(spec)


def _save_store(store: eng.Store, store_path: str | None):
    if store_path:
        write_bundle_dir(export_tables(store), store_path)


@main.command("validate-spec")
@click.argument("spec_file", type=click.Path(exists=True))
@click.option("--json", "as_json", is_flag=True, help="machine-readable diagnostics")
def validate_spec_cmd(spec_file: str, as_json: bool):
    """Check a spec document; exit 0 iff it is valid."""
    diagnostics = validate_spec_file(spec_file)
    if as_json:
        click.echo(json.dumps({"ok": not diagnostics, "diagnostics": [d.as_dict() for d in diagnostics]}))
    else:
        for d in diagnostics:
            where = f" [{d.where}]" if d.where else ""
            click.echo(f"{d.code}: {d.message}{where}")
        if not diagnostics:
            click.echo("spec is valid")
    sys.exit(0 if not diagnostics else 1)


@main.command("export")
@click.option("--spec", "spec_path", envvar="KGBB_SPEC", type=str)
@click.option("--store", "store_path", envvar="KGBB_STORE", type=str)
@click.option("--format", "fmt", type=click.Choice(["trig", "pg-json", "tables"]), required=True)
@click.option("--out", "out_path", type=click.Path(), required=True)
@click.option("--json", "as_json", is_flag=True)
def export_cmd(spec_path, store_path, fmt, out_path, as_json):
    """Serialize the store into one of the three representations."""
    try:
        spec = _load_spec_arg(spec_path)
        store = _load_store(spec, store_path)
        if fmt == "trig":
            Path(out_path).write_text(export_rdf(store), encoding="utf-8")
        elif fmt == "pg-json":
            Path(out_path).write_text(export_pg_json(store), encoding="utf-8")
        else:
            write_bundle_dir(export_tables(store), out_path)
    except (KgbbError, OSError) as exc:
        _fail(str(exc), as_json)
    if as_json:
        click.echo(json.dumps({"ok": True, "out": out_path, "format": fmt}))
    else:
        click.echo(f"exported {fmt} to {out_path}")


@main.command("import")
@click.argument("csv_file", type=click.Path(exists=True))
@click.option("--template", "template_id", required=True)
@click.option("--instance", "instance_id", default=None, help="KGBB instance when ambiguous")
@click.option("--spec", "spec_path", envvar="KGBB_SPEC", type=str)
@click.option("--store", "store_path", envvar="KGBB_STORE", type=str)
@click.option("--user", default="urn:kgbb:user:cli")
@click.option("--source", default=None, help="imported-from dataset UPRI")
@click.option("--json", "as_json", is_flag=True)
def import_cmd(csv_file, template_id, instance_id, spec_path, store_path, user, source, as_json):
    """Import rows from a CSV file through an import template (per-row report)."""
    try:
        spec = _load_spec_arg(spec_path)
        store = _load_store(spec, store_path)
        template = None
        owner = None
        for cls in spec.taxonomy.values():
            for t in getattr(cls, "import_templates", []):
                if t.upri == template_id:
                    template, owner = t, cls
        if template is None:
            raise KgbbError(f"no import template {template_id!r} in spec")
        instances = [i for i, c in spec.graph.kgbb_instances.items() if c == owner.upri]
        if instance_id is not None:
            instances = [i for i in instances if i == instance_id]
        if len(instances) != 1:
            raise KgbbError(
                f"template {template_id!r} matches {len(instances)} instances; use --instance"
            )
        with open(csv_file, newline="", encoding="utf-8") as fh:
            rows = list(csv.DictReader(fh))
        prov = eng.Provenance(
            creator=user,
            application=spec.graph.application_upri,
            imported_from=source or f"file://{Path(csv_file).resolve()}",
        )
        requests, diagnostics = apply_import_template(store, instances[0], rows, template, prov)
        created = []
        create_errors = []
        for req in requests:
            try:
                created.append(eng.create_statement_unit(store, req))
            except KgbbError as exc:
                create_errors.append(str(exc))
        _save_store(store, store_path)
    except (KgbbError, OSError) as exc:
        _fail(str(exc), as_json)
    report = {
        "ok": not diagnostics and not create_errors,
        "rows": len(rows),
        "created": created,
        "rejected": [vars(d) for d in diagnostics] + create_errors,
    }
    if as_json:
        click.echo(json.dumps(report))
    else:
        click.echo(f"{len(created)}/{len(rows)} rows imported")
        for d in diagnostics:
            click.echo(f"  row {d.row}: {d.column or '-'}: {d.message}")
        for e in create_errors:
            click.echo(f"  create failed: {e}")
    sys.exit(0 if report["ok"] else 1)


def _parse_binding(raw):
    if raw is None:
        return None
    if isinstance(raw, str):
        return ResourceBinding(resource=raw)
    if "resource" in raw:
        return ResourceBinding(resource=raw["resource"])
    if "some_instance_of" in raw:
        return WildcardBinding(mode="some-instance", class_upri=raw["some_instance_of"])
    if "every_instance_of" in raw:
        return WildcardBinding(mode="every-instance", class_upri=raw["every_instance_of"])
    if "class" in raw:
        return WildcardBinding(mode="class", class_upri=raw["class"])
    if "literal" in raw:
        lit = raw["literal"]
        if not isinstance(lit, dict):
            lit = {"equals": str(lit)}
        return LiteralBinding(
            datatype=lit.get("datatype"),
            equals=lit.get("equals"),
            minimum=lit.get("min"),
            maximum=lit.get("max"),
            pattern=lit.get("pattern"),
        )
    raise KgbbError(f"cannot parse binding {raw!r}")


@main.command("query")
@click.option("--question", "question_file", type=click.Path(exists=True), required=True)
@click.option("--spec", "spec_path", envvar="KGBB_SPEC", type=str)
@click.option("--store", "store_path", envvar="KGBB_STORE", type=str)
@click.option("--json", "as_json", is_flag=True)
def query_cmd(question_file, spec_path, store_path, as_json):
    """Execute a question file (YAML/JSON) against the store."""
    try:
        spec = _load_spec_arg(spec_path)
        store = _load_store(spec, store_path)
        raw = yaml.safe_load(Path(question_file).read_text(encoding="utf-8"))
        question = q.build_question(
            store,
            raw["kgbb_instance"],
            _parse_binding(raw.get("subject")),
            {pos: _parse_binding(b) for pos, b in (raw.get("bindings") or {}).items()},
        )
        result = q.execute_question(store, question)
        label = q.render_question_label(store, question)
    except (KgbbError, SpecError, OSError, KeyError) as exc:
        _fail(f"{type(exc).__name__}: {exc}", as_json)
    if as_json:
        payload = {"ok": True, "mode": question.mode, "label": label}
        if isinstance(result, bool):
            payload["boolean"] = result
        else:
            payload["units"] = result
        click.echo(json.dumps(payload))
    else:
        click.echo(label)
        if isinstance(result, bool):
            click.echo("true" if result else "false")
        else:
            for upri in result:
                click.echo(upri)
    sys.exit(0)


@main.command("seed-demo")
@click.option("--demo", "demo_name", type=click.Choice(list(DEMO_NAMES)), required=True)
@click.option("--store", "store_path", envvar="KGBB_STORE", type=str, required=True)
@click.option("--json", "as_json", is_flag=True)
def seed_demo_cmd(demo_name, store_path, as_json):
    """Create a store seeded with a demo spec's worked example."""
    spec = load_demo(demo_name)
    store = eng.Store(spec)
    created = seed(store, demo_name)
    _save_store(store, store_path)
    if as_json:
        click.echo(json.dumps({"ok": True, "created": created}))
    else:
        for name, upri in created.items():
            click.echo(f"{name}: {upri}")


@main.command("demo-spec")
@click.argument("name", type=click.Choice(list(DEMO_NAMES)))
@click.option("--out", "out_path", type=click.Path(), default=None)
def demo_spec_cmd(name, out_path):
    """Print (or write) one of the shipped demo spec documents."""
    text = demo_spec_text(name)
    if out_path:
        Path(out_path).write_text(text, encoding="utf-8")
        click.echo(out_path)
    else:
        click.echo(text)


@main.command("serve")
@click.option("--spec", "spec_path", envvar="KGBB_SPEC", type=str)
@click.option("--store", "store_path", envvar="KGBB_STORE", type=str, default=None)
@click.option("--port", envvar="KGBB_PORT", type=int, default=8000)
@click.option("--host", default="127.0.0.1")
def serve_cmd(spec_path, store_path, port, host):
    """Run the HTTP service (aborts with diagnostics on an invalid spec)."""
    import uvicorn

    from .spec import validate_spec
    from .service import create_app

    try:
        spec = _load_spec_arg(spec_path)
    except SpecError as exc:
        _fail(f"{exc.code}: {exc}", False, code=2)
    diagnostics = validate_spec(spec)
    if diagnostics:
        _fail(
            "spec is invalid",
            False,
            payload=[f"{d.code}: {d.message}" for d in diagnostics],
            code=2,
        )
    app = create_app(spec, store_path=store_path)
    uvicorn.run(app, host=host, port=port, log_level="warning")


if __name__ == "__main__":
    main()
