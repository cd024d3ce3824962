// HTML renderers. Pure string builders so they run headless in tests; all
// display strings come from server responses, never from client templates.

import type { FormState, FieldState } from "./forms.js";
import type { QueryState } from "./querybuilder.js";
import type {
  DisplayDocument,
  ExecutionResult,
  HistoryView,
  MindMap,
  StartingPoint,
} from "./types.js";

export function esc(text: string | null | undefined): string {
  return String(text ?? "")
    .replaceAll("&", "&amp;")
    .replaceAll("<", "&lt;")
    .replaceAll(">", "&gt;")
    .replaceAll('"', "&quot;");
}

export function renderStartingPoints(points: StartingPoint[]): string {
  if (points.length === 0) {
    return `<p class="empty">This application declares no data-entry starting points.</p>`;
  }
  const cards = points
    .map(
      (p) => `
  <a class="card" href="#/create/${encodeURIComponent(p.id)}" data-instance="${esc(p.id)}">
    <h3>${esc(p.label)}</h3>
    <p>${esc(p.description)}</p>
    <span class="kind">${esc(p.kind)}</span>
  </a>`,
    )
    .join("\n");
  return `<div class="cards">${cards}</div>`;
}

export function renderOfflineBanner(detail: string): string {
  return `<div class="banner error">Cannot reach the service: ${esc(detail)}</div>`;
}

function renderField(fs: FieldState, prefix: string): string {
  const f = fs.field;
  const requiredMark = f.required ? ` <em class="required">required</em>` : "";
  const constraint =
    f.constraint.kind === "resource"
      ? f.constraint.class_label
        ? `a ${esc(f.constraint.class_label)}`
        : "any resource"
      : esc(f.constraint.datatype);
  const error = fs.error ? `<p class="field-error">${esc(fs.error)}</p>` : "";
  return `
  <label class="field" data-position="${esc(f.position)}">
    <span class="label">${esc(f.label)}${requiredMark}</span>
    <input name="${esc(prefix + f.position)}" value="${esc(fs.value)}"
           title="${esc(f.tooltip)}" placeholder="${constraint}" />
    ${error}
  </label>`;
}

export function renderForm(state: FormState, prefix = ""): string {
  const d = state.descriptor;
  const subjectRow =
    d.kind === "statement" || d.subject.constraint.class
      ? `
  <label class="field subject" data-position="subject">
    <span class="label">${esc(state.subject.label)} <em class="required">required</em></span>
    <input name="${esc(prefix)}subject" value="${esc(state.subject.newLabel || state.subject.value)}"
           title="${esc(d.subject.tooltip)}"
           placeholder="${esc(d.subject.constraint.class_label ?? "resource")}" />
    ${state.subject.error ? `<p class="field-error">${esc(state.subject.error)}</p>` : ""}
  </label>`
      : "";
  const fields = state.fields.map((fs) => renderField(fs, prefix)).join("\n");
  const cascades = state.cascades
    .map((cascade) => {
      if (!cascade.form) {
        return "";
      }
      const badge = cascade.entry.required
        ? `<em class="required">required (min ${cascade.entry.min_count})</em>`
        : "";
      return `
  <fieldset class="cascade" data-target="${esc(cascade.entry.target)}">
    <legend>${esc(cascade.form.descriptor.label)} ${badge}</legend>
    ${renderForm(cascade.form, `${prefix}${cascade.entry.target}.`)}
  </fieldset>`;
    })
    .join("\n");
  const formError = state.error ? `<div class="banner error">${esc(state.error)}</div>` : "";
  return `
<section class="unit-editor" data-instance="${esc(d.instance)}">
  <h2>${esc(d.label)}</h2>
  <p class="description">${esc(d.description)}</p>
  ${formError}
  ${subjectRow}
  ${fields}
  ${cascades}
</section>`;
}

export function renderExplorer(doc: DisplayDocument): string {
  const sections = doc.sections
    .map((section) => {
      const items =
        section.items.length > 0
          ? `<ul>${section.items
              .map(
                (item) =>
                  `<li><a href="#/unit/${encodeURIComponent(item.unit)}">${esc(item.label)}</a></li>`,
              )
              .join("")}</ul>`
          : `<p class="placeholder">${esc(section.placeholder ?? "")}</p>`;
      return `<section class="display-section"><h3>${esc(section.title)}</h3>${items}</section>`;
    })
    .join("\n");
  const links =
    doc.links.length > 0
      ? `<section class="item-links"><h3>Linked items</h3><ul>${doc.links
          .map(
            (link) =>
              `<li><a href="#/unit/${encodeURIComponent(link.unit)}">${esc(link.label)}</a></li>`,
          )
          .join("")}</ul></section>`
      : "";
  return `
<article class="explorer">
  <header>
    <h2>${esc(doc.headline.subject ?? doc.headline.label)}</h2>
    <p class="unit-class">${esc(doc.headline.label)}</p>
  </header>
  ${sections}
  ${links}
</article>`;
}

export function renderStatementRow(upri: string, label: string): string {
  return `<li class="statement-row"><a href="#/unit/${encodeURIComponent(upri)}">${esc(label)}</a></li>`;
}

/** Simple circular layout; the structure is the contract, geometry is not. */
export function renderMindMap(map: MindMap, width = 640, height = 400): string {
  const cx = width / 2;
  const cy = height / 2;
  const radius = Math.min(width, height) / 2 - 60;
  const positions = new Map<string, { x: number; y: number }>();
  map.nodes.forEach((node, i) => {
    if (map.nodes.length === 1) {
      positions.set(node.id, { x: cx, y: cy });
      return;
    }
    const angle = (2 * Math.PI * i) / map.nodes.length;
    positions.set(node.id, { x: cx + radius * Math.cos(angle), y: cy + radius * Math.sin(angle) });
  });
  const edges = map.edges
    .map((edge) => {
      const a = positions.get(edge.source);
      const b = positions.get(edge.target);
      if (!a || !b) {
        return "";
      }
      const mx = (a.x + b.x) / 2;
      const my = (a.y + b.y) / 2;
      return `<line x1="${a.x}" y1="${a.y}" x2="${b.x}" y2="${b.y}" />
<text class="edge-label" x="${mx}" y="${my}">${esc(edge.label)}</text>`;
    })
    .join("\n");
  const nodes = map.nodes
    .map((node) => {
      const p = positions.get(node.id)!;
      return `<g class="node" data-id="${esc(node.id)}">
<circle cx="${p.x}" cy="${p.y}" r="8"></circle>
<text x="${p.x}" y="${p.y - 14}">${esc(node.label)}</text>
</g>`;
    })
    .join("\n");
  return `<svg class="mindmap" viewBox="0 0 ${width} ${height}">${edges}\n${nodes}</svg>`;
}

export function renderHistory(view: HistoryView): string {
  const sections = Object.entries(view.history)
    .map(([position, entries]) => {
      const rows = entries
        .map(
          (entry) => `
    <tr class="${entry.current ? "current" : "past"}">
      <td>${esc(entry.value)}</td>
      <td>${esc(entry.creator)}</td>
      <td>${esc(entry.creation_date)}</td>
      <td>${entry.current ? "current" : ""}</td>
    </tr>`,
        )
        .join("");
      return `<h4>${esc(position)}</h4>
<table class="history"><thead><tr><th>value</th><th>by</th><th>when</th><th></th></tr></thead>
<tbody>${rows}</tbody></table>`;
    })
    .join("\n");
  return `<section class="history-tab">${sections}</section>`;
}

export function renderQueryBuilder(state: QueryState): string {
  const modeOptions = (current: string, isLiteral: boolean) => {
    const modes = isLiteral ? ["any", "exact"] : ["any", "exact", "some", "every", "class"];
    return modes
      .map((m) => `<option value="${m}"${m === current ? " selected" : ""}>${m}</option>`)
      .join("");
  };
  const subject = `
  <div class="query-field" data-position="subject">
    <span class="label">${esc(state.descriptor.subject.label)}</span>
    <select name="subject-mode">${modeOptions(state.subjectMode, false)}</select>
    <input name="subject-value" value="${esc(state.subjectValue)}"
           placeholder="${esc(state.descriptor.subject.constraint.class_label ?? "")}" />
  </div>`;
  const fields = state.fields
    .map(
      (qf) => `
  <div class="query-field" data-position="${esc(qf.field.position)}">
    <span class="label">${esc(qf.field.label)}</span>
    <select name="${esc(qf.field.position)}-mode">${modeOptions(qf.mode, qf.field.type === "literal")}</select>
    <input name="${esc(qf.field.position)}-value" value="${esc(qf.value)}" title="${esc(qf.field.tooltip)}" />
  </div>`,
    )
    .join("\n");
  return `
<section class="query-builder" data-instance="${esc(state.descriptor.instance)}">
  <h2>Ask about: ${esc(state.descriptor.label)}</h2>
  ${subject}
  ${fields}
</section>`;
}

export function renderExecutionResult(result: ExecutionResult): string {
  if (result.mode === "boolean") {
    const value = result.boolean ? "true" : "false";
    return `<div class="answer boolean ${value}"><span class="badge">${value}</span></div>`;
  }
  const units = result.units ?? [];
  if (units.length === 0) {
    return `<p class="empty">No matching statement units.</p>`;
  }
  const labels = result.labels ?? {};
  return `<ol class="results">${units
    .map((u) => renderStatementRow(u, labels[u] ?? u))
    .join("")}</ol>`;
}
