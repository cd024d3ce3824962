from .labels import (
    binding_values,
    display_value,
    render_category_label,
    render_dynamic_label,
    render_unit_label,
)
from .mindmap import render_mind_map
from .display import render_compound_display
from .access import AccessOutput, apply_access_template, find_access_template
from .importer import apply_import_template

__all__ = [
    "AccessOutput",
    "apply_access_template",
    "apply_import_template",
    "binding_values",
    "display_value",
    "find_access_template",
    "render_category_label",
    "render_compound_display",
    "render_dynamic_label",
    "render_mind_map",
    "render_unit_label",
]
