// Form state for the unit editor. The state mirrors the server's form
// descriptor field-for-field; validation happens server-side and errors are
// mapped back onto fields here.

import type { CascadeEntry, FormDescriptor, FormField } from "./types.js";

export interface FieldState {
  field: FormField;
  value: string;
  error: string | null;
}

export interface SubjectState {
  label: string;
  value: string;
  newLabel: string;
  error: string | null;
}

export interface FormState {
  descriptor: FormDescriptor;
  subject: SubjectState;
  fields: FieldState[];
  cascades: { entry: CascadeEntry; form: FormState | null }[];
  error: string | null;
}

export function buildFormState(descriptor: FormDescriptor): FormState {
  return {
    descriptor,
    subject: { label: descriptor.subject.label, value: "", newLabel: "", error: null },
    fields: descriptor.fields.map((field) => ({ field, value: "", error: null })),
    cascades: descriptor.cascades.map((entry) => ({
      entry,
      form: entry.required && entry.form ? buildFormState(entry.form) : null,
    })),
    error: null,
  };
}

/** Client-side gate: required fields and required nested forms must be filled
 * before a submit is attempted. Constraints themselves stay server-side. */
export function missingRequired(state: FormState): string[] {
  const missing: string[] = [];
  if (state.descriptor.kind === "statement" && !state.subject.value && !state.subject.newLabel) {
    missing.push(state.subject.label);
  }
  for (const fs of state.fields) {
    if (fs.field.required && !fs.value) {
      missing.push(fs.field.label);
    }
  }
  for (const cascade of state.cascades) {
    if (cascade.form) {
      missing.push(...missingRequired(cascade.form).map((m) => `${cascade.entry.target}: ${m}`));
    }
  }
  return missing;
}

function subjectPayload(state: FormState): unknown {
  if (state.subject.newLabel) {
    return {
      upri: "",
      kind: "named-individual",
      class_affiliation: state.descriptor.subject.constraint.class,
      label: state.subject.newLabel,
    };
  }
  return state.subject.value || null;
}

function fieldPayload(fs: FieldState): unknown {
  if (fs.field.type === "literal") {
    const constraint = fs.field.constraint;
    const datatype = constraint.kind === "literal" ? constraint.datatype : "text";
    return { literal: fs.value, datatype };
  }
  if (fs.value.startsWith("urn:") || fs.value.startsWith("r:")) {
    return { resource: fs.value };
  }
  const cls = fs.field.constraint.kind === "resource" ? fs.field.constraint.class : null;
  return {
    new_resource: {
      upri: "",
      kind: "named-individual",
      class_affiliation: cls,
      label: fs.value,
    },
  };
}

export function toCreatePayload(state: FormState): Record<string, unknown> {
  const inputs: Record<string, unknown> = {};
  for (const fs of state.fields) {
    if (fs.value) {
      inputs[fs.field.position] = fieldPayload(fs);
    }
  }
  const cascadeInputs: Record<string, unknown[]> = {};
  for (const cascade of state.cascades) {
    if (cascade.form && cascade.entry.required) {
      const nested = toCreatePayload(cascade.form);
      delete nested.subject; // the engine forces cascade subjects
      (cascadeInputs[cascade.entry.target] ??= []).push(nested);
    }
  }
  const payload: Record<string, unknown> = {
    kgbb_instance: state.descriptor.instance,
    subject: subjectPayload(state),
    inputs,
  };
  if (Object.keys(cascadeInputs).length > 0) {
    payload.cascade_inputs = cascadeInputs;
  }
  return payload;
}

/** Attach a server-side constraint violation to the field it names. */
export function applyServerError(state: FormState, code: string, detail: string): void {
  state.error = null;
  const match = detail.match(/position '([^']+)'/);
  const position = match?.[1];
  let attached = false;
  if (position) {
    for (const fs of state.fields) {
      if (fs.field.position === position) {
        fs.error = detail;
        attached = true;
      }
    }
    for (const cascade of state.cascades) {
      if (cascade.form) {
        for (const fs of cascade.form.fields) {
          if (fs.field.position === position) {
            fs.error = detail;
            attached = true;
          }
        }
      }
    }
  }
  if (!attached) {
    state.error = `${code}: ${detail}`;
  }
}

export function clearErrors(state: FormState): void {
  state.error = null;
  state.subject.error = null;
  for (const fs of state.fields) {
    fs.error = null;
  }
  for (const cascade of state.cascades) {
    if (cascade.form) {
      clearErrors(cascade.form);
    }
  }
}
