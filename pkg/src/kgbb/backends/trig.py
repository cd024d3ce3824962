"""RDF named-graph (TriG) serialization of a store.

Layout: one named graph per statement unit holding its data graph (graph IRI =
unit UPRI), one metadata graph per unit at <upri>/meta, and a registry graph
for resources and version nodes. Output is deterministic: graphs and subjects
are emitted in sorted order, multi-valued properties in list order.
"""

from __future__ import annotations

import re

from .. import vocab
from ..engine import Store
from ..errors import SchemaMismatch
from ..model import Literal, Triple, data_graph
from ..spec.types import AppSpec
from . import codec

META = vocab.BASE + "meta:"
DATATYPE = vocab.BASE + "datatype:"
REGISTRY_GRAPH = vocab.BASE + "graph:registry"

_META_PROPS = [
    ("label", "str"),
    ("types", "iri_list"),
    ("has_semantic_unit_subject", "iri_opt"),
    ("kgbb_uri", "iri"),
    ("creator", "iri"),
    ("creation_date", "str"),
    ("created_with_application", "iri"),
    ("imported_from", "iri_opt"),
    ("import_date", "str_opt"),
    ("curator", "iri_opt"),
    ("curation_date", "str_opt"),
    ("deleted_by", "iri_opt"),
    ("deletion_date", "str_opt"),
    ("data_production_metadata", "iri_opt"),
    ("version_ids", "iri_list"),
    ("dataset_unit_ids", "iri_list"),
    ("editable", "bool"),
]
_STATEMENT_PROPS = [
    ("subject", "iri"),
    ("category", "str"),
    ("negated", "bool"),
    ("based_on_graph_pattern", "iri"),
    ("license", "iri"),
    ("logical_framework", "iri"),
    ("access_restricted_to", "iri_opt"),
    ("confidence_level", "iri_opt"),
    ("validity_start_date", "str_opt"),
    ("validity_end_date", "str_opt"),
    ("references", "iri_list"),
    ("object_described_by_semantic_unit", "iri_list"),
]
_COMPOUND_PROPS = [
    ("compound_kind", "str"),
    ("has_associated_semantic_unit", "iri_list"),
    ("has_linked_semantic_unit", "iri_list"),
]
_INSTANCE_PROPS = [
    ("position_class", "iri"),
    ("input_type_label", "str"),
    ("resource_uri", "iri_opt"),
    ("logical_property", "str_opt"),
    ("current_version", "bool"),
    ("creator", "iri"),
    ("creation_date", "str"),
    ("created_with_application", "iri"),
    ("imported_from", "iri_opt"),
    ("version_ids", "iri_list"),
    ("dataset_unit_ids", "iri_list"),
]
_QUESTION_PROPS = [("based_on_statement_kgbb", "iri"), ("mode", "str")]
_BINDING_PROPS = [
    ("kind", "str"),
    ("resource", "iri_opt"),
    ("mode", "str_opt"),
    ("class", "iri_opt"),
    ("datatype", "str_opt"),
    ("equals", "str_opt"),
    ("minimum", "num_opt"),
    ("maximum", "num_opt"),
    ("pattern", "str_opt"),
]
_RESOURCE_PROPS = [("kind", "str"), ("class_affiliation", "iri_opt"), ("label", "str_opt")]
_VERSION_PROPS = [
    ("of_unit", "iri"),
    ("creation_date", "str"),
    ("creator", "iri"),
    ("previous_version", "iri_opt"),
    ("content_id", "str_opt"),
]


def _camel(key: str) -> str:
    parts = key.split("_")
    return parts[0] + "".join(p.capitalize() for p in parts[1:])


def _prop(key: str) -> str:
    return META + _camel(key)


def _escape(value: str) -> str:
    return (
        value.replace("\\", "\\\\")
        .replace('"', '\\"')
        .replace("\n", "\\n")
        .replace("\r", "\\r")
        .replace("\t", "\\t")
    )


def _unescape(value: str) -> str:
    out = []
    i = 0
    while i < len(value):
        c = value[i]
        if c == "\\" and i + 1 < len(value):
            nxt = value[i + 1]
            out.append({"n": "\n", "r": "\r", "t": "\t", '"': '"', "\\": "\\"}.get(nxt, nxt))
            i += 2
        else:
            out.append(c)
            i += 1
    return "".join(out)


def _fmt_object(obj) -> str:
    if isinstance(obj, Literal):
        return f'"{_escape(obj.value)}"^^<{DATATYPE}{obj.datatype}>'
    return f"<{obj}>"


class _Writer:
    def __init__(self):
        self.lines: list[str] = []

    def open_graph(self, name: str):
        self.lines.append(f"<{name}> {{")

    def close_graph(self):
        self.lines.append("}")
        self.lines.append("")

    def triple(self, s: str, p: str, o):
        self.lines.append(f"  <{s}> <{p}> {_fmt_object(o)} .")

    def fields(self, subject: str, record: dict, table):
        for key, kind in table:
            value = record.get(key)
            prop = _prop(key)
            if kind == "str" or kind == "str_opt":
                if value is not None:
                    self.triple(subject, prop, Literal(str(value), "text"))
            elif kind == "iri" or kind == "iri_opt":
                if value:
                    self.triple(subject, prop, str(value))
            elif kind == "bool":
                self.triple(subject, prop, Literal("true" if value else "false", "boolean"))
            elif kind == "iri_list":
                for item in value or []:
                    self.triple(subject, prop, str(item))
            elif kind == "num_opt":
                if value is not None:
                    self.triple(subject, prop, Literal(repr(float(value)), "float"))
            else:  # pragma: no cover
                raise AssertionError(kind)


def export_rdf(store: Store) -> str:
    w = _Writer()
    w.lines.append(f"@prefix kgbb: <{vocab.BASE}> .")
    w.lines.append("")

    w.open_graph(REGISTRY_GRAPH)
    for upri in sorted(store.resources):
        res = store.resources[upri]
        w.triple(upri, _prop("node_kind"), Literal("resource", "text"))
        w.fields(upri, codec.resource_to_record(res), _RESOURCE_PROPS)
    for upri in sorted(store.versions):
        w.triple(upri, _prop("node_kind"), Literal("version", "text"))
        w.fields(upri, codec.version_to_record(store.versions[upri]), _VERSION_PROPS)
    w.close_graph()

    for upri in sorted(store.units):
        unit = store.units[upri]
        record = codec.unit_to_record(unit)
        if record["unit_kind"] == "statement":
            w.open_graph(upri)
            su = store.units[upri]
            for t in data_graph(su, store.required_positions_of(su)):
                w.triple(t.subject, t.predicate, t.object)
            w.close_graph()
        _write_meta_graph(w, upri, record)
    return "\n".join(w.lines)


def _write_meta_graph(w: _Writer, upri: str, record: dict):
    w.open_graph(f"{upri}/meta")
    kind = record["unit_kind"]
    w.triple(upri, _prop("unit_kind"), Literal(kind, "text"))
    w.fields(upri, record["meta"], _META_PROPS)
    if kind == "statement":
        w.fields(upri, record, _STATEMENT_PROPS)
        for i, c in enumerate(record["constraint_nodes"]):
            node = f"{upri}/constraint/{i}"
            w.triple(upri, _prop("has_constraint_node"), node)
            w.triple(node, _prop("has_constraint"), Literal(c["constraint"], "text"))
            w.triple(node, _prop("applies_to_object_position"), c["position"])
        for inst in record["positions"]:
            w.triple(upri, _prop("has_object_position_instance"), inst["upri"])
            w.fields(inst["upri"], inst, _INSTANCE_PROPS)
            if inst["literal_value"] is not None:
                w.triple(
                    inst["upri"],
                    _prop("literal"),
                    Literal(inst["literal_value"], inst["literal_datatype"] or "text"),
                )
    elif kind == "compound":
        w.fields(upri, record, _COMPOUND_PROPS)
    elif kind == "question":
        w.fields(upri, record, _QUESTION_PROPS)
        if record["subject_binding"] is not None:
            node = f"{upri}/binding/subject"
            w.triple(upri, _prop("subject_binding"), node)
            w.fields(node, record["subject_binding"], _BINDING_PROPS)
        for pos_id in record["bindings"]:
            node = f"{upri}/binding/{_slug(pos_id)}"
            w.triple(upri, _prop("has_binding"), node)
            w.triple(node, _prop("binding_position"), pos_id)
            w.fields(node, record["bindings"][pos_id], _BINDING_PROPS)
    elif kind == "compound-question":
        root = _write_tree(w, upri, record["tree"], "0")
        w.triple(upri, _prop("operator_tree"), root)
    w.close_graph()


def _write_tree(w: _Writer, upri: str, tree: dict, path: str) -> str:
    node = f"{upri}/op/{path}"
    w.triple(node, _prop("op_kind"), Literal(tree.get("op", "AND"), "text"))
    for i, child in enumerate(tree.get("children") or []):
        if isinstance(child, dict):
            child_node = _write_tree(w, upri, child, f"{path}.{i}")
            w.triple(node, _prop("operand"), child_node)
        else:
            w.triple(node, _prop("operand"), str(child))
    return node


def _slug(text: str) -> str:
    return re.sub(r"[^A-Za-z0-9]+", "-", text).strip("-")


# ---------------------------------------------------------------------------
# parsing

_TRIPLE_RE = re.compile(
    r'^\s*<([^>]*)>\s+<([^>]*)>\s+(?:<([^>]*)>|"((?:[^"\\]|\\.)*)"(?:\^\^<([^>]*)>)?)\s*\.\s*$'
)
_GRAPH_OPEN_RE = re.compile(r"^\s*<([^>]*)>\s*\{\s*$")


def _parse_graphs(text: str) -> dict[str, list[tuple[str, str, object]]]:
    graphs: dict[str, list[tuple[str, str, object]]] = {}
    current: str | None = None
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("@prefix"):
            continue
        if stripped == "}":
            current = None
            continue
        m = _GRAPH_OPEN_RE.match(line)
        if m:
            current = m.group(1)
            graphs.setdefault(current, [])
            continue
        m = _TRIPLE_RE.match(line)
        if m:
            if current is None:
                raise SchemaMismatch(f"triple outside any graph at line {lineno}")
            s, p, o_iri, o_lit, o_dt = m.groups()
            if o_iri is not None:
                obj: object = o_iri
            else:
                datatype = "text"
                if o_dt and o_dt.startswith(DATATYPE):
                    datatype = o_dt[len(DATATYPE):]
                obj = Literal(_unescape(o_lit), datatype)
            graphs[current].append((s, p, obj))
            continue
        raise SchemaMismatch(f"unparseable TriG line {lineno}: {stripped[:80]}")
    return graphs


class _NodeView:
    """Property access over the triples of one subject, preserving order."""

    def __init__(self, triples: list[tuple[str, str, object]], subject: str):
        self.props: dict[str, list[object]] = {}
        for s, p, o in triples:
            if s == subject:
                self.props.setdefault(p, []).append(o)

    def first(self, key: str):
        values = self.props.get(_prop(key))
        return values[0] if values else None

    def all(self, key: str) -> list[object]:
        return self.props.get(_prop(key), [])


def _read_fields(view: _NodeView, table) -> dict:
    out: dict = {}
    for key, kind in table:
        if kind in ("str", "str_opt"):
            v = view.first(key)
            out[key] = v.value if isinstance(v, Literal) else None
        elif kind in ("iri", "iri_opt"):
            v = view.first(key)
            out[key] = v if isinstance(v, str) else None
        elif kind == "bool":
            v = view.first(key)
            out[key] = isinstance(v, Literal) and v.value == "true"
        elif kind == "iri_list":
            out[key] = [v for v in view.all(key) if isinstance(v, str)]
        elif kind == "num_opt":
            v = view.first(key)
            out[key] = float(v.value) if isinstance(v, Literal) else None
    return out


def import_rdf(text: str, spec: AppSpec) -> Store:
    graphs = _parse_graphs(text)
    store = Store(spec)

    for subject in _subject_order(graphs.get(REGISTRY_GRAPH, [])):
        view = _NodeView(graphs[REGISTRY_GRAPH], subject)
        node_kind = view.first("node_kind")
        record = {"upri": subject}
        if isinstance(node_kind, Literal) and node_kind.value == "version":
            record.update(_read_fields(view, _VERSION_PROPS))
            store.versions[subject] = codec.record_to_version(record)
        else:
            record.update(_read_fields(view, _RESOURCE_PROPS))
            store.resources[subject] = codec.record_to_resource(record)

    for graph_name, triples in graphs.items():
        if not graph_name.endswith("/meta"):
            continue
        upri = graph_name[: -len("/meta")]
        view = _NodeView(triples, upri)
        kind_lit = view.first("unit_kind")
        if not isinstance(kind_lit, Literal):
            raise SchemaMismatch("meta graph without unitKind", record=graph_name)
        kind = kind_lit.value
        record: dict = {"upri": upri, "unit_kind": kind, "meta": _read_fields(view, _META_PROPS)}
        if kind == "statement":
            record.update(_read_fields(view, _STATEMENT_PROPS))
            record["constraint_nodes"] = []
            for node in view.all("has_constraint_node"):
                nview = _NodeView(triples, str(node))
                constraint = nview.first("has_constraint")
                record["constraint_nodes"].append(
                    {
                        "constraint": constraint.value if isinstance(constraint, Literal) else "",
                        "position": nview.first("applies_to_object_position"),
                    }
                )
            record["positions"] = []
            for inst_upri in view.all("has_object_position_instance"):
                iview = _NodeView(triples, str(inst_upri))
                inst = {"upri": str(inst_upri)}
                inst.update(_read_fields(iview, _INSTANCE_PROPS))
                lit = iview.first("literal")
                inst["literal_value"] = lit.value if isinstance(lit, Literal) else None
                inst["literal_datatype"] = lit.datatype if isinstance(lit, Literal) else None
                record["positions"].append(inst)
        elif kind == "compound":
            record.update(_read_fields(view, _COMPOUND_PROPS))
        elif kind == "question":
            record.update(_read_fields(view, _QUESTION_PROPS))
            record["subject_binding"] = None
            sb = view.first("subject_binding")
            if sb is not None:
                record["subject_binding"] = _read_fields(_NodeView(triples, str(sb)), _BINDING_PROPS)
            record["bindings"] = {}
            for bnode in view.all("has_binding"):
                bview = _NodeView(triples, str(bnode))
                pos = bview.first("binding_position")
                record["bindings"][str(pos)] = _read_fields(bview, _BINDING_PROPS)
        elif kind == "compound-question":
            root = view.first("operator_tree")
            record["tree"] = _read_tree(triples, str(root), upri)
        else:
            raise SchemaMismatch(f"unknown unit kind {kind!r}", record=upri)
        store.units[upri] = codec.record_to_unit(record)

    store.units = {u: store.units[u] for u in sorted(store.units)}
    store.resources = {r: store.resources[r] for r in sorted(store.resources)}
    store.versions = {v: store.versions[v] for v in sorted(store.versions)}
    return store


def _read_tree(triples, node: str, upri: str) -> dict:
    view = _NodeView(triples, node)
    op = view.first("op_kind")
    children = []
    for child in view.all("operand"):
        child = str(child)
        if child.startswith(f"{upri}/op/"):
            children.append(_read_tree(triples, child, upri))
        else:
            children.append(child)
    return {"op": op.value if isinstance(op, Literal) else "AND", "children": children}


def _subject_order(triples) -> list[str]:
    seen: list[str] = []
    seen_set: set[str] = set()
    for s, _, _ in triples:
        if s not in seen_set:
            seen.append(s)
            seen_set.add(s)
    return seen


def triple_to_tuple(t: Triple) -> tuple:
    if isinstance(t.object, Literal):
        return (t.subject, t.predicate, ("lit", t.object.value, t.object.datatype))
    return (t.subject, t.predicate, ("iri", t.object))
