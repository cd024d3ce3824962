from .pg import export_pg, import_pg
from .queries import generate_membership_query
from .tables import export_tables, import_tables, read_bundle_dir, write_bundle_dir
from .trig import export_rdf, import_rdf

__all__ = [
    "export_pg",
    "export_rdf",
    "export_tables",
    "generate_membership_query",
    "import_pg",
    "import_rdf",
    "import_tables",
    "read_bundle_dir",
    "write_bundle_dir",
]
