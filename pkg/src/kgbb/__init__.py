"""kgbb: a knowledge graph engine organized around semantic units.

The schema of an application is supplied as declarative building-block (KGBB)
classes plus a specification graph wiring instances of them together. The
engine enforces the storage models, tracks provenance and versions, derives
compound structure, renders human-readable views, compiles question units
into queries, and round-trips stores across RDF named graphs, property-graph
documents, and relational semantic tables.
"""

__version__ = "0.1.0"
