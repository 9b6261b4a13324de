/** Adjudication view model: the three selections side by side with per-token
 * overlap shading; the adjudicator composes the final set by accepting edits
 * verbatim, or by creating fresh ones through a SelectionDraft. */

import { coverageDepth } from "./spans.js";
import type { EditData, PairData, Side } from "./types.js";

export class AdjudicationError extends Error {}

export class AdjudicationDraft {
  readonly final: EditData[] = [];

  constructor(
    private readonly pair: PairData,
    private readonly selections: Record<string, EditData[]>,
  ) {}

  annotators(): string[] {
    return Object.keys(this.selections).sort();
  }

  /** Per-token count of annotators covering it with any edit: 3-way overlap
   * renders darkest. */
  overlapShading(side: Side): number[] {
    const tokens = side === "complex" ? this.pair.complex.tokens : this.pair.simplified.tokens;
    const depth = tokens.map(() => 0);
    for (const annotator of this.annotators()) {
      const single = coverageDepth(tokens, this.selections[annotator] ?? [], side);
      single.forEach((count, index) => {
        if (count > 0) {
          depth[index] = (depth[index] ?? 0) + 1;
        }
      });
    }
    return depth;
  }

  /** Copy one annotator's edit verbatim into the final set under a fresh id. */
  accept(annotator: string, editId: string): EditData {
    const edits = this.selections[annotator];
    if (edits === undefined) {
      throw new AdjudicationError(`no selection from '${annotator}'`);
    }
    const source = edits.find((e) => e.id === editId);
    if (source === undefined) {
      throw new AdjudicationError(`'${annotator}' has no edit '${editId}'`);
    }
    const copy = JSON.parse(JSON.stringify(source)) as EditData;
    copy.id = `${this.pair.id}/final-${this.final.length + 1}`;
    (copy.constituents ?? []).forEach((constituent, index) => {
      constituent.id = `${copy.id}/c${index + 1}`;
    });
    this.final.push(copy);
    return copy;
  }

  add(edit: EditData): EditData {
    this.final.push(edit);
    return edit;
  }

  remove(editId: string): void {
    const index = this.final.findIndex((e) => e.id === editId);
    if (index < 0) {
      throw new AdjudicationError(`no final edit '${editId}'`);
    }
    this.final.splice(index, 1);
  }

  payload(): EditData[] {
    return this.final.map((edit) => JSON.parse(JSON.stringify(edit)) as EditData);
  }
}
