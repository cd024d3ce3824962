// Query builder model: the unit editor's fields, but every position accepts
// "any", "some <class>", "every <class>", or an exact value. Produces the
// /questions payload; execution and result labels come from the server.

import type { FormDescriptor, FormField } from "./types.js";

export type BindingMode = "any" | "exact" | "some" | "every" | "class";

export interface QueryField {
  field: FormField;
  mode: BindingMode;
  value: string; // exact resource UPRI / literal text
  classValue: string; // wildcard class UPRI
}

export interface QueryState {
  descriptor: FormDescriptor;
  subjectMode: BindingMode;
  subjectValue: string;
  subjectClass: string;
  fields: QueryField[];
}

export function buildQueryState(descriptor: FormDescriptor): QueryState {
  return {
    descriptor,
    subjectMode: "any",
    subjectValue: "",
    subjectClass: descriptor.subject.constraint.class ?? "",
    fields: descriptor.fields.map((field) => ({
      field,
      mode: "any",
      value: "",
      classValue: field.constraint.kind === "resource" ? (field.constraint.class ?? "") : "",
    })),
  };
}

function bindingFor(mode: BindingMode, value: string, classValue: string, isLiteral: boolean) {
  switch (mode) {
    case "any":
      return null;
    case "exact":
      return isLiteral ? { literal: { equals: value } } : { resource: value };
    case "some":
      return { some_instance_of: classValue };
    case "every":
      return { every_instance_of: classValue };
    case "class":
      return { class: classValue };
  }
}

export function toQuestionPayload(state: QueryState): Record<string, unknown> {
  const bindings: Record<string, unknown> = {};
  for (const qf of state.fields) {
    const binding = bindingFor(qf.mode, qf.value, qf.classValue, qf.field.type === "literal");
    if (binding !== null) {
      bindings[qf.field.position] = binding;
    }
  }
  const subject = bindingFor(state.subjectMode, state.subjectValue, state.subjectClass, false);
  const payload: Record<string, unknown> = {
    kgbb_instance: state.descriptor.instance,
    bindings,
  };
  if (subject !== null) {
    payload.subject = subject;
  }
  return payload;
}

export interface SavedQuestion {
  upri: string;
  label: string;
  mode: "boolean" | "list";
}

export function compoundPayload(op: "AND" | "OR", children: string[]): Record<string, unknown> {
  return { op, children };
}
