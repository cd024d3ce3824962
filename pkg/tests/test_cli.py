import json
from pathlib import Path

import pytest
from click.testing import CliRunner

from kgbb.cli import main

FIXTURES = Path(__file__).parent / "fixtures"


@pytest.fixture
def runner():
    return CliRunner()


def _write_demo_spec(tmp_path, name) -> Path:
    from kgbb.demo import demo_spec_text

    path = tmp_path / f"{name}.yaml"
    path.write_text(demo_spec_text(name), encoding="utf-8")
    return path


def test_validate_spec_ok(runner, tmp_path):
    spec = _write_demo_spec(tmp_path, "weight")
    result = runner.invoke(main, ["validate-spec", str(spec)])
    assert result.exit_code == 0, result.output
    assert "valid" in result.output


def test_validate_spec_json_diagnostics(runner):
    broken = FIXTURES / "broken_specs" / "08_min_over_max.yaml"
    result = runner.invoke(main, ["validate-spec", str(broken), "--json"])
    assert result.exit_code == 1
    payload = json.loads(result.output)
    assert payload["ok"] is False
    assert payload["diagnostics"][0]["code"] == "count-conflict"


def test_export_empty_store_trig(runner, tmp_path):
    spec = _write_demo_spec(tmp_path, "travel")
    out = tmp_path / "empty.trig"
    result = runner.invoke(
        main, ["export", "--spec", str(spec), "--format", "trig", "--out", str(out)]
    )
    assert result.exit_code == 0, result.output
    text = out.read_text()
    assert text.startswith("@prefix kgbb: <urn:kgbb:> .")
    assert "/meta" not in text


def test_seed_export_and_query_roundtrip(runner, tmp_path):
    store_dir = tmp_path / "store"
    seeded = runner.invoke(
        main, ["seed-demo", "--demo", "travel", "--store", str(store_dir), "--json"]
    )
    assert seeded.exit_code == 0, seeded.output
    assert (store_dir / "manifest.json").exists()

    question = tmp_path / "q.yaml"
    question.write_text(
        """
kgbb_instance: travel-1
subject: {resource: "urn:demo:res:anna"}
bindings:
  pos-destination: {resource: "urn:demo:res:rome"}
  pos-departure: {resource: "urn:demo:res:berlin"}
  pos-transportation: {resource: "urn:demo:res:train"}
  pos-datetime: {literal: {equals: "5th of August 2019"}}
""",
        encoding="utf-8",
    )
    result = runner.invoke(
        main,
        ["query", "--question", str(question), "--spec", "demo:travel",
         "--store", str(store_dir)],
    )
    assert result.exit_code == 0, result.output
    assert result.output.strip().endswith("true")


def test_query_list_mode(runner, tmp_path):
    store_dir = tmp_path / "store"
    runner.invoke(main, ["seed-demo", "--demo", "travel", "--store", str(store_dir)])
    question = tmp_path / "q.yaml"
    question.write_text(
        "kgbb_instance: travel-1\nsubject: {some_instance_of: PERSON}\n", encoding="utf-8"
    )
    result = runner.invoke(
        main,
        ["query", "--question", str(question), "--spec", "demo:travel",
         "--store", str(store_dir), "--json"],
    )
    assert result.exit_code == 0, result.output
    payload = json.loads(result.output)
    assert payload["mode"] == "list"
    assert len(payload["units"]) == 1
    assert payload["label"].startswith("Did somePerson travel")


def test_import_csv_with_report(runner, tmp_path):
    spec = _write_demo_spec(tmp_path, "travel")
    store_dir = tmp_path / "store"
    csv_file = tmp_path / "trips.csv"
    csv_file.write_text(
        "person,transportation,departure,destination,datetime\n"
        "Anna,train,Berlin,Rome,5th of August 2019\n"
        "Bob,,,Paris,1st of May 2020\n"
        "Ghost,,,,\n",
        encoding="utf-8",
    )
    result = runner.invoke(
        main,
        ["import", str(csv_file), "--template", "travel-csv", "--spec", str(spec),
         "--store", str(store_dir), "--json"],
    )
    payload = json.loads(result.output)
    assert result.exit_code == 1  # one rejected row
    assert len(payload["created"]) == 2
    assert payload["rejected"]

    question = tmp_path / "q.yaml"
    question.write_text(
        "kgbb_instance: travel-1\nsubject: {some_instance_of: PERSON}\n", encoding="utf-8"
    )
    listed = runner.invoke(
        main,
        ["query", "--question", str(question), "--spec", str(spec),
         "--store", str(store_dir), "--json"],
    )
    assert len(json.loads(listed.output)["units"]) == 2


def test_export_tables_bundle(runner, tmp_path):
    store_dir = tmp_path / "store"
    runner.invoke(main, ["seed-demo", "--demo", "weight", "--store", str(store_dir)])
    out = tmp_path / "bundle"
    result = runner.invoke(
        main,
        ["export", "--spec", "demo:weight", "--store", str(store_dir),
         "--format", "tables", "--out", str(out)],
    )
    assert result.exit_code == 0, result.output
    manifest = json.loads((out / "manifest.json").read_text())
    assert manifest["format"] == "kgbb-tables"


def test_demo_spec_prints_yaml(runner):
    result = runner.invoke(main, ["demo-spec", "travel"])
    assert result.exit_code == 0
    assert "travel-statement" in result.output
