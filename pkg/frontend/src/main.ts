/** App bootstrap: task queue, stage routing, and event wiring.
 *
 * Keyboard shortcuts: q/w/e/r pick the insertion/deletion/substitution/
 * reorder layers, s/t start split/structure composites, 1-3 rate the focused
 * edit. Conflicting submissions (409) trigger a reload-and-merge prompt.
 */

import { AdjudicationDraft } from "./adjudication.js";
import { ApiClient, ApiRequestError } from "./api.js";
import { ClassificationSession } from "./classification.js";
import {
  renderEditList,
  renderSentence,
  renderViolations,
  renderWizardStep,
} from "./render.js";
import { SelectionDraft } from "./selection.js";
import type { OperationName, ReorderLevel, Side, TaskView, TypologyData } from "./types.js";

const OPERATION_KEYS: Record<string, OperationName> = {
  q: "insertion",
  w: "deletion",
  e: "substitution",
  r: "reorder",
};

interface AppState {
  client: ApiClient;
  typology: TypologyData;
  task: TaskView | null;
  selection: SelectionDraft | null;
  adjudication: AdjudicationDraft | null;
  classification: ClassificationSession | null;
  activeOperation: OperationName;
  reorderLevel: ReorderLevel;
  revision: number;
}

function byId(id: string): HTMLElement {
  const el = document.getElementById(id);
  if (el === null) {
    throw new Error(`missing #${id}`);
  }
  return el;
}

function charRangeFromSelection(root: HTMLElement): { side: Side; start: number; end: number } | null {
  const selection = window.getSelection();
  if (!selection || selection.rangeCount === 0 || selection.isCollapsed) {
    return null;
  }
  const range = selection.getRangeAt(0);
  const tokens = root.querySelectorAll<HTMLElement>("span.token");
  let side: Side | null = null;
  let start = Number.POSITIVE_INFINITY;
  let end = -1;
  tokens.forEach((token) => {
    if (range.intersectsNode(token)) {
      side = (token.dataset.side as Side) ?? side;
      start = Math.min(start, Number(token.dataset.start));
      end = Math.max(end, Number(token.dataset.end));
    }
  });
  if (side === null || end < 0) {
    return null;
  }
  return { side, start, end };
}

async function refresh(state: AppState): Promise<void> {
  const tasks = await state.client.getTasks();
  const first = tasks[0];
  byId("queue").textContent = `${tasks.length} task(s) pending`;
  if (first === undefined) {
    state.task = null;
    byId("workspace").innerHTML = "<p>Nothing assigned to you right now.</p>";
    return;
  }
  state.task = await state.client.getTask(first.pair);
  state.revision = 0;
  const task = state.task;
  if (task.state === "selecting") {
    state.selection = new SelectionDraft(task.pair_data, task.split_shells);
  } else if (task.state === "adjudicating") {
    state.adjudication = new AdjudicationDraft(task.pair_data, task.selections ?? {});
  } else if (task.state === "classifying") {
    state.classification = new ClassificationSession(state.typology, task.adjudicated_edits ?? []);
  }
  renderWorkspace(state);
}

function renderWorkspace(state: AppState): void {
  const task = state.task;
  if (task === null) {
    return;
  }
  const workspace = byId("workspace");
  const pair = task.pair_data;
  if (task.state === "selecting" && state.selection !== null) {
    workspace.innerHTML =
      `<h2>Select edits — ${pair.id}</h2>` +
      renderSentence(pair.complex, "complex", state.selection.edits) +
      renderSentence(pair.simplified, "simplified", state.selection.edits) +
      renderEditList(state.selection.edits, true) +
      renderViolations(state.selection.localProblems()) +
      `<button id="submit">Submit selection</button>`;
  } else if (task.state === "adjudicating" && state.adjudication !== null) {
    const draft = state.adjudication;
    workspace.innerHTML =
      `<h2>Adjudicate — ${pair.id}</h2>` +
      renderSentence(pair.complex, "complex", draft.final, draft.overlapShading("complex")) +
      renderSentence(pair.simplified, "simplified", draft.final, draft.overlapShading("simplified")) +
      draft
        .annotators()
        .map((a) => `<h3>${a}</h3>${renderEditList((task.selections ?? {})[a] ?? [], false)}`)
        .join("") +
      `<h3>Final set</h3>` +
      renderEditList(draft.final, true) +
      `<button id="submit">Submit adjudication</button>`;
  } else if (task.state === "classifying" && state.classification !== null) {
    const session = state.classification;
    const blocks: string[] = [];
    for (const [editId, classifier] of session.classifiers) {
      const step = classifier.wizard.currentStep();
      blocks.push(`<section data-edit="${editId}"><h3>${editId}</h3>`);
      if (step !== null) {
        blocks.push(
          renderWizardStep(step.question, step.options, classifier.offersErrorMultiSelect, editId),
        );
      } else {
        blocks.push(`<p>type: ${classifier.wizard.typeId}</p>`);
        if (classifier.polarity !== "trivial") {
          const value = classifier.rating ?? "";
          blocks.push(
            `<label>rating <input type="number" min="1" max="3" value="${value}" ` +
              `class="rating" data-edit="${editId}"></label>`,
          );
        }
        const checked = classifier.grammarError ? " checked" : "";
        blocks.push(
          `<label><input type="checkbox" class="grammar" data-edit="${editId}"${checked}> grammar error</label>`,
        );
        blocks.push(`<button class="redo" data-edit="${editId}">restart questions</button>`);
      }
      blocks.push("</section>");
    }
    const checklist = Object.entries(session.checklist()).map(
      ([editId, problems]) => `${editId}: ${problems.join(", ")}`,
    );
    workspace.innerHTML =
      `<h2>Classify — ${pair.id}</h2>` +
      blocks.join("") +
      renderViolations(checklist) +
      `<button id="submit" ${session.complete ? "" : "disabled"}>Submit classification</button>`;
  } else {
    workspace.innerHTML = `<p>Task ${task.pair} is ${task.state}; nothing to do here.</p>`;
  }
}

async function submit(state: AppState): Promise<void> {
  const task = state.task;
  if (task === null) {
    return;
  }
  state.revision += 1;
  try {
    if (task.state === "selecting" && state.selection !== null) {
      await state.client.submitSelection(task.pair, state.revision, state.selection.payload());
    } else if (task.state === "adjudicating" && state.adjudication !== null) {
      await state.client.submitAdjudication(task.pair, state.revision, state.adjudication.payload());
    } else if (task.state === "classifying" && state.classification !== null) {
      await state.client.submitClassification(
        task.pair,
        state.classification.nextRevision(),
        state.classification.entries(),
      );
    }
    await refresh(state);
  } catch (error) {
    if (error instanceof ApiRequestError && error.isConflict) {
      if (window.confirm("Someone else updated this task. Reload and merge?")) {
        await refresh(state);
      }
      return;
    }
    if (error instanceof ApiRequestError) {
      byId("errors").innerHTML = renderViolations(
        error.violations.length > 0
          ? error.violations.map((v) => `${v.edit_id ?? ""} ${v.message}`)
          : [error.message],
      );
      return;
    }
    throw error;
  }
}

export async function start(baseUrl: string, annotator: string): Promise<void> {
  const client = new ApiClient(baseUrl, annotator);
  const state: AppState = {
    client,
    typology: await client.getTypology(),
    task: null,
    selection: null,
    adjudication: null,
    classification: null,
    activeOperation: "deletion",
    reorderLevel: "word",
    revision: 0,
  };

  document.addEventListener("keydown", (event) => {
    const operation = OPERATION_KEYS[event.key];
    if (operation !== undefined) {
      state.activeOperation = operation;
      byId("layer").textContent = `layer: ${operation}`;
    }
  });

  document.addEventListener("mouseup", () => {
    if (state.task?.state !== "selecting" || state.selection === null) {
      return;
    }
    const dragged = charRangeFromSelection(byId("workspace"));
    if (dragged === null) {
      return;
    }
    try {
      state.selection.startEdit(
        state.activeOperation,
        dragged.side,
        dragged.start,
        dragged.end,
        state.activeOperation === "reorder" ? state.reorderLevel : undefined,
      );
      renderWorkspace(state);
    } catch (error) {
      byId("errors").textContent = String(error);
    }
  });

  document.addEventListener("click", (event) => {
    const target = event.target as HTMLElement;
    if (target.id === "submit") {
      void submit(state);
      return;
    }
    if (target.classList.contains("remove") && state.selection !== null) {
      state.selection.removeEdit(target.dataset.edit ?? "");
      renderWorkspace(state);
      return;
    }
    if (state.classification === null) {
      return;
    }
    const editId = target.dataset.edit ?? "";
    if (target.classList.contains("confirm-types")) {
      const section = target.closest("section");
      const inputs = section ? section.querySelectorAll<HTMLInputElement>(".wizard-input:checked") : null;
      const chosen = inputs ? Array.from(inputs, (input) => input.value) : [];
      try {
        state.classification.classifier(editId).chooseErrorTypes(chosen);
        renderWorkspace(state);
      } catch (error) {
        byId("errors").textContent = String(error);
      }
    } else if (target.classList.contains("redo")) {
      const classifier = state.classification.classifier(editId);
      classifier.wizard.restart();
      classifier.errorTypes = [];
      classifier.rating = null;
      classifier.wizard.answer(classifier.edit.operation);
      if (classifier.edit.operation === "reorder" && classifier.edit.reorder_level) {
        classifier.wizard.answer(classifier.edit.reorder_level);
      }
      renderWorkspace(state);
    }
  });

  document.addEventListener("change", (event) => {
    const target = event.target as HTMLInputElement;
    const editId = target.dataset.edit ?? "";
    if (state.task?.state !== "classifying" || state.classification === null || editId === "") {
      return;
    }
    const classifier = state.classification.classifier(editId);
    try {
      if (target.classList.contains("rating")) {
        classifier.setRating(Number(target.value));
        renderWorkspace(state);
      } else if (target.classList.contains("grammar")) {
        classifier.grammarError = target.checked;
      } else if (
        target.classList.contains("wizard-input") &&
        target.type === "radio" &&
        !classifier.offersErrorMultiSelect
      ) {
        classifier.wizard.answer(target.value);
        renderWorkspace(state);
      }
    } catch (error) {
      byId("errors").textContent = String(error);
    }
  });

  await refresh(state);
}
