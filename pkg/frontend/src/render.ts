/** HTML-string renderers. Pure string builders so they stay testable without
 * a browser; main.ts owns event wiring. */

import { coverageDepth } from "./spans.js";
import type { EditData, OperationName, SentenceData, Side } from "./types.js";

export const OPERATION_COLORS: Record<OperationName, string> = {
  insertion: "#2e7d32",
  deletion: "#c62828",
  substitution: "#1565c0",
  reorder: "#6a1b9a",
  split: "#ef6c00",
  structure: "#00838f",
};

export function escapeHtml(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

/** One sentence as clickable token chips; data attributes carry offsets so
 * drags can be mapped back to character positions. Overlapping edits render
 * as stacked underline layers (depth = number of covering edits). */
export function renderSentence(
  sentence: SentenceData,
  side: Side,
  edits: EditData[],
  shading?: number[],
): string {
  const depth = coverageDepth(sentence.tokens, edits, side);
  const chips = sentence.tokens.map((token, index) => {
    const classes = ["token"];
    const layers = depth[index] ?? 0;
    if (layers > 0) {
      classes.push(`covered-${Math.min(layers, 4)}`);
    }
    const shade = shading?.[index] ?? 0;
    if (shade > 0) {
      classes.push(`overlap-${Math.min(shade, 3)}`);
    }
    return (
      `<span class="${classes.join(" ")}" data-side="${side}" ` +
      `data-index="${index}" data-start="${token.start}" data-end="${token.end}">` +
      `${escapeHtml(token.surface)}</span>`
    );
  });
  return `<div class="sentence" data-side="${side}">${chips.join(" ")}</div>`;
}

export function renderEditList(edits: EditData[], removable: boolean): string {
  const items = edits.map((edit) => {
    const spans = edit.spans
      .map((s) => `${s.side[0]}[${s.start},${s.end})`)
      .join(" ");
    const constituents = (edit.constituents ?? []).length;
    const suffix = constituents > 0 ? ` (${constituents} constituents)` : "";
    const remove = removable
      ? ` <button class="remove" data-edit="${escapeHtml(edit.id)}">x</button>`
      : "";
    return (
      `<li data-edit="${escapeHtml(edit.id)}" style="color:${OPERATION_COLORS[edit.operation]}">` +
      `${edit.operation} ${escapeHtml(spans)}${suffix}${remove}</li>`
    );
  });
  return `<ul class="edits">${items.join("")}</ul>`;
}

export function renderWizardStep(
  question: string,
  options: string[],
  multi: boolean,
  group: string,
): string {
  const inputs = options
    .map(
      (option) =>
        `<label><input type="${multi ? "checkbox" : "radio"}" class="wizard-input" ` +
        `name="wizard-${escapeHtml(group)}" data-edit="${escapeHtml(group)}" ` +
        `value="${escapeHtml(option)}"> ${escapeHtml(option.replace(/_/g, " "))}</label>`,
    )
    .join("");
  const confirm = multi
    ? `<button class="confirm-types" data-edit="${escapeHtml(group)}">confirm error types</button>`
    : "";
  return (
    `<fieldset class="wizard"><legend>${escapeHtml(question.replace(/_/g, " "))}</legend>` +
    `${inputs}${confirm}</fieldset>`
  );
}

export function renderViolations(messages: string[]): string {
  if (messages.length === 0) {
    return "";
  }
  const items = messages.map((m) => `<li>${escapeHtml(m)}</li>`).join("");
  return `<ul class="violations">${items}</ul>`;
}
