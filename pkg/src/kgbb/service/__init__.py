from .app import create_app, spec_as_dict

__all__ = ["create_app", "spec_as_dict"]
