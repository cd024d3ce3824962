"""Pydantic request/response models for the HTTP API."""

from __future__ import annotations

from typing import Any, Optional, Union

from pydantic import BaseModel, ConfigDict, Field


class NewResource(BaseModel):
    model_config = ConfigDict(extra="forbid")

    upri: str = ""
    kind: str = "named-individual"
    class_affiliation: Optional[str] = None
    label: Optional[str] = None


class LiteralInput(BaseModel):
    model_config = ConfigDict(extra="forbid")

    literal: str
    datatype: Optional[str] = None


class ResourceRef(BaseModel):
    model_config = ConfigDict(extra="forbid")

    resource: str


class NewResourceInput(BaseModel):
    model_config = ConfigDict(extra="forbid")

    new_resource: NewResource


InputValue = Union[ResourceRef, NewResourceInput, LiteralInput, str, float, int, bool]


class CreateUnitBody(BaseModel):
    kgbb_instance: str
    subject: Optional[Union[str, NewResource]] = None
    inputs: dict[str, InputValue] = Field(default_factory=dict)
    category_choice: Optional[str] = None
    cascade_inputs: dict[str, list["CreateUnitBody"]] = Field(default_factory=dict)
    associate: list[str] = Field(default_factory=list)
    negated: bool = False
    license: Optional[str] = None
    logical_framework: Optional[str] = None
    confidence_level: Optional[str] = None
    access_restricted_to: Optional[str] = None
    validity_start_date: Optional[str] = None
    validity_end_date: Optional[str] = None
    references: list[str] = Field(default_factory=list)
    imported_from: Optional[str] = None


class UnitCreated(BaseModel):
    upri: str


class PositionUpdateBody(BaseModel):
    input: InputValue


class PositionUpdated(BaseModel):
    instance: str


class VersionCreated(BaseModel):
    version: str


class BindingBody(BaseModel):
    model_config = ConfigDict(extra="forbid")

    resource: Optional[str] = None
    some_instance_of: Optional[str] = None
    every_instance_of: Optional[str] = None
    class_of: Optional[str] = Field(default=None, alias="class")
    literal: Optional[dict[str, Any]] = None


class QuestionBody(BaseModel):
    kgbb_instance: str
    subject: Optional[BindingBody] = None
    bindings: dict[str, BindingBody] = Field(default_factory=dict)


class CompoundQuestionBody(BaseModel):
    op: str
    children: list[Union[str, "CompoundQuestionBody"]]


class QuestionCreated(BaseModel):
    upri: str
    mode: str
    label: str


class ExecutionResult(BaseModel):
    mode: str
    boolean: Optional[bool] = None
    units: Optional[list[str]] = None
    labels: Optional[dict[str, str]] = None


class Diagnostics(BaseModel):
    diagnostics: list[dict]


CreateUnitBody.model_rebuild()
CompoundQuestionBody.model_rebuild()
