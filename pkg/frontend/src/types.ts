// Shapes of the REST API payloads the client consumes.

export interface StartingPoint {
  id: string;
  label: string;
  description: string;
  kind: "statement" | "compound";
}

export interface SpecView {
  application: string;
  classes: { id: string; label?: string }[];
  instances: { id: string; class: string }[];
  starting_points: StartingPoint[];
  ontology: { id: string; label?: string | null; parent?: string | null }[];
}

export interface ResourceConstraint {
  kind: "resource";
  class: string | null;
  class_label: string | null;
}

export interface LiteralConstraint {
  kind: "literal";
  datatype: string;
  min: number | null;
  max: number | null;
  pattern: string | null;
}

export interface FormField {
  position: string;
  label: string;
  type: "resource" | "literal";
  required: boolean;
  tooltip: string;
  constraint: ResourceConstraint | LiteralConstraint;
}

export interface CascadeEntry {
  node: "association" | "link";
  target: string;
  min_count: number;
  max_count: number;
  required: boolean;
  form?: FormDescriptor;
  use_as_subject?: string;
  if_object?: string;
}

export interface FormDescriptor {
  instance: string;
  class: string;
  kind: "statement" | "compound";
  label: string;
  description: string;
  subject: {
    label: string;
    type: "resource";
    required: boolean;
    constraint: ResourceConstraint;
    tooltip: string;
  };
  fields: FormField[];
  cascades: CascadeEntry[];
}

export interface UnitCreated {
  upri: string;
}

export interface LabelView {
  upri: string;
  label: string;
}

export interface MindMap {
  nodes: { id: string; label: string }[];
  edges: { source: string; target: string; label: string }[];
}

export interface DisplaySectionView {
  title: string;
  items: { unit: string; label: string }[];
  placeholder?: string;
}

export interface DisplayDocument {
  headline: { unit: string; label: string; subject: string | null };
  sections: DisplaySectionView[];
  links: { unit: string; label: string }[];
}

export interface HistoryEntry {
  instance: string;
  value: string | null;
  current: boolean;
  creator: string;
  creation_date: string;
  versions: string[];
}

export interface HistoryView {
  unit: string;
  history: Record<string, HistoryEntry[]>;
}

export interface UnitView {
  upri: string;
  kind: string;
  record: { meta: { label: string; kgbb_uri: string }; category?: string };
  members: string[];
  linked: string[];
  deleted: boolean;
}

export interface UnitListEntry {
  upri: string;
  kgbb_instance: string;
  label: string;
}

export interface QuestionCreated {
  upri: string;
  mode: "boolean" | "list";
  label: string;
}

export interface ExecutionResult {
  mode: "boolean" | "list";
  boolean?: boolean | null;
  units?: string[] | null;
  labels?: Record<string, string> | null;
}

export interface ApiError {
  error: string;
  detail: string;
}
