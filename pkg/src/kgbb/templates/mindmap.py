"""Mind-map structures: predicate hub with labeled spokes to subject and objects."""

from __future__ import annotations

from ..engine import Store
from ..model import CompoundUnit, StatementUnit, Upri
from .labels import display_value


def render_mind_map(store: Store, unit_upri: Upri) -> dict:
    """Node/edge structure for a statement or compound unit.

    Statements with at most one bound object render as a single labeled edge;
    n-ary ones get a hub node carrying the predicate. Compounds merge their
    members' mind maps, deduplicating shared nodes by UPRI.
    """
    unit = store.unit(unit_upri)
    if isinstance(unit, CompoundUnit):
        nodes: dict[str, dict] = {}
        edges: list[dict] = []
        seen_edges: set[tuple] = set()
        for member in unit.has_associated_semantic_unit:
            m = store.units.get(member)
            if m is None or m.meta.deleted or not isinstance(m, (StatementUnit, CompoundUnit)):
                continue
            sub = render_mind_map(store, member)
            for node in sub["nodes"]:
                nodes.setdefault(node["id"], node)
            for edge in sub["edges"]:
                key = (edge["source"], edge["target"], edge["label"])
                if key not in seen_edges:
                    seen_edges.add(key)
                    edges.append(edge)
        return {"nodes": list(nodes.values()), "edges": edges}

    if not isinstance(unit, StatementUnit):
        return {"nodes": [{"id": unit_upri, "label": unit.meta.label}], "edges": []}

    cls = store.class_of_unit(unit)
    template = cls.mind_map_template
    hub_label = template.hub_label if template else cls.predicate_label
    edge_labels = template.edge_labels if template else {}
    label_of = {p.upri: p.thematic_label for p in cls.positions}

    bound = unit.current_instances()
    subject_node = {"id": unit.subject, "label": display_value(store, unit.subject)}

    def object_node(inst):
        if inst.resource_uri is not None:
            return {"id": inst.resource_uri, "label": display_value(store, inst.resource_uri)}
        return {"id": inst.upri, "label": inst.literal.value}

    if len(bound) <= 1:
        nodes = [subject_node]
        edges = []
        for inst in bound:
            node = object_node(inst)
            nodes.append(node)
            edges.append({"source": unit.subject, "target": node["id"], "label": hub_label})
        return {"nodes": nodes, "edges": edges}

    hub = {"id": unit_upri, "label": hub_label}
    nodes = [hub, subject_node]
    edges = [{"source": unit.subject, "target": unit_upri, "label": ""}]
    for inst in bound:
        node = object_node(inst)
        nodes.append(node)
        thematic = label_of.get(inst.position_class, inst.input_type_label)
        edges.append(
            {
                "source": unit_upri,
                "target": node["id"],
                "label": edge_labels.get(thematic, thematic),
            }
        )
    return {"nodes": nodes, "edges": edges}
