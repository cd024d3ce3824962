"""Shipped demo specs and seed data used by the CLI, tests, and the UI."""

from __future__ import annotations

from importlib import resources

from ..engine import CreateRequest, Provenance, Store, create_statement_unit
from ..model import Resource
from ..spec import AppSpec, load_spec

DEMO_NAMES = ("travel", "weight", "partonomy", "population")


def demo_spec_text(name: str) -> str:
    if name not in DEMO_NAMES:
        raise ValueError(f"unknown demo spec {name!r}; choose from {DEMO_NAMES}")
    return resources.files(__package__).joinpath(f"{name}.yaml").read_text(encoding="utf-8")


def load_demo(name: str) -> AppSpec:
    return load_spec(demo_spec_text(name))


def seed_travel(store: Store, user: str = "urn:demo:user:alice") -> str:
    """Create the worked travel statement; returns the unit UPRI."""
    prov = Provenance(creator=user, application="urn:demo:travel-app")
    req = CreateRequest(
        kgbb_instance="travel-1",
        provenance=prov,
        subject=Resource(upri="urn:demo:res:anna", kind="named-individual",
                         class_affiliation="PERSON", label="Anna"),
        inputs={
            "pos-destination": Resource(upri="urn:demo:res:rome", kind="named-individual",
                                        class_affiliation="CITY", label="Rome"),
            "pos-departure": Resource(upri="urn:demo:res:berlin", kind="named-individual",
                                      class_affiliation="CITY", label="Berlin"),
            "pos-transportation": Resource(upri="urn:demo:res:train", kind="named-individual",
                                           class_affiliation="TRANSPORTATION", label="train"),
            "pos-datetime": "5th of August 2019",
        },
    )
    return create_statement_unit(store, req)


def seed_weight(store: Store, user: str = "urn:demo:user:alice") -> dict[str, str]:
    """Create the worked weight measurement; returns the created unit UPRIs."""
    from ..engine import create_compound_unit

    prov = Provenance(creator=user, application="urn:demo:weight-app")
    compound = create_compound_unit(
        store,
        CreateRequest(
            kgbb_instance="measurement-1",
            provenance=prov,
            subject=Resource(upri="urn:demo:res:objectx", kind="named-individual",
                             class_affiliation="MATERIAL_ENTITY", label="ObjectX"),
            cascade_inputs={
                "quality-1": [
                    CreateRequest(
                        kgbb_instance="quality-1",
                        provenance=prov,
                        inputs={
                            "pos-quality": Resource(
                                upri="urn:demo:res:objectx-weight",
                                kind="named-individual",
                                class_affiliation="PATO:0000128",
                                label="weight",
                            )
                        },
                    )
                ]
            },
        ),
    )
    unit = create_statement_unit(
        store,
        CreateRequest(
            kgbb_instance="weight-1",
            provenance=prov,
            subject="urn:demo:res:objectx-weight",
            inputs={
                "pos-value": "5",
                "pos-lower": "4.54",
                "pos-upper": "5.55",
                "pos-unit": Resource(upri="urn:demo:res:kilogram", kind="named-individual",
                                     class_affiliation="MEASUREMENT_UNIT", label="kilogram"),
            },
        ),
    )
    return {"compound": compound, "weight": unit}


def seed(store: Store, name: str) -> dict[str, str]:
    if name == "travel":
        return {"travel": seed_travel(store)}
    if name == "weight":
        return seed_weight(store)
    return {}
