"""Membership query text generation for the graph backends."""

from __future__ import annotations

from .. import vocab


def generate_membership_query(unit_upri: str, unit_kind: str, dialect: str) -> str:
    """Query text selecting everything belonging to one semantic unit.

    unit_kind is one of statement | compound | list | version | dataset and
    picks the membership property in the cypher dialect; the sparql dialect
    selects the unit's named graph.
    """
    if dialect == "cypher":
        prop = vocab.MEMBERSHIP_PROPERTY.get(unit_kind)
        if prop is None:
            raise ValueError(f"unknown unit kind {unit_kind!r}")
        return f'MATCH (n {{current_version:"true"}}) WHERE ("{unit_upri}" IN n.{prop}) RETURN n'
    if dialect == "sparql":
        return f"SELECT ?s ?p ?o WHERE {{ GRAPH <{unit_upri}> {{ ?s ?p ?o }} }}"
    raise ValueError(f"unknown dialect {dialect!r}")
