/** Decision-tree wizard: walks the typology served by GET /typology.
 *
 * The tree is pure data; this class never names a question or edit type
 * itself, so a catalog change on the server reshapes the wizard with no code
 * change here. */

import type { DecisionNodeData } from "./types.js";

export interface WizardStep {
  question: string;
  options: string[];
}

export class WizardError extends Error {}

function childOf(node: DecisionNodeData, answer: string): DecisionNodeData {
  const next = node.answers?.[answer];
  if (next === undefined) {
    const options = Object.keys(node.answers ?? {}).join(", ");
    throw new WizardError(
      `question '${node.question ?? "?"}' has no branch for '${answer}' (options: ${options})`,
    );
  }
  return next;
}

export class ClassificationWizard {
  private node: DecisionNodeData;
  private readonly trail: DecisionNodeData[] = [];
  readonly answers: string[] = [];

  /** seed answers (e.g. the edit's operation and reorder level) are applied
   * immediately; they count toward the question budget like any other. */
  constructor(
    private readonly tree: DecisionNodeData,
    seed: string[] = [],
  ) {
    this.node = tree;
    for (const answer of seed) {
      this.answer(answer);
    }
  }

  get done(): boolean {
    return this.node.type !== undefined;
  }

  get typeId(): string | null {
    return this.node.type ?? null;
  }

  currentStep(): WizardStep | null {
    if (this.done) {
      return null;
    }
    return {
      question: this.node.question ?? "",
      options: Object.keys(this.node.answers ?? {}),
    };
  }

  answer(value: string): void {
    if (this.done) {
      throw new WizardError(`already classified as '${this.node.type}'`);
    }
    const next = childOf(this.node, value);
    this.trail.push(this.node);
    this.node = next;
    this.answers.push(value);
  }

  back(): void {
    const previous = this.trail.pop();
    if (previous === undefined) {
      throw new WizardError("nothing to undo");
    }
    this.node = previous;
    this.answers.pop();
  }

  restart(): void {
    this.node = this.tree;
    this.trail.length = 0;
    this.answers.length = 0;
  }
}

/** Every root-to-leaf path as (answers, type id); used to verify the depth
 * bound and to enumerate reachable types for display. */
export function allPaths(tree: DecisionNodeData): Array<{ answers: string[]; typeId: string }> {
  const out: Array<{ answers: string[]; typeId: string }> = [];
  const walk = (node: DecisionNodeData, prefix: string[]): void => {
    if (node.type !== undefined) {
      out.push({ answers: prefix, typeId: node.type });
      return;
    }
    for (const [answer, child] of Object.entries(node.answers ?? {})) {
      walk(child, [...prefix, answer]);
    }
  };
  walk(tree, []);
  return out;
}

export function maxDepth(tree: DecisionNodeData): number {
  return allPaths(tree).reduce((depth, path) => Math.max(depth, path.answers.length), 0);
}
