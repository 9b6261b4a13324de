/** Selection-stage view model: build an edit list by dragging token spans,
 * one colored layer per operation, with composites assembled from single-
 * operation constituents. Auto-detected split shells arrive from the server
 * and must be populated before submission (the server rejects empty ones). */

import { mergeRanges, operationSides, snapToTokens } from "./spans.js";
import type {
  EditData,
  OperationName,
  PairData,
  ReorderLevel,
  Side,
  SpanData,
} from "./types.js";

export class SelectionError extends Error {}

const SINGLE_OPERATIONS: OperationName[] = ["insertion", "deletion", "substitution", "reorder"];

export class SelectionDraft {
  readonly edits: EditData[] = [];
  private counter = 0;

  constructor(
    private readonly pair: PairData,
    splitShells: EditData[] = [],
  ) {
    for (const shell of splitShells) {
      this.edits.push({ ...shell, spans: [...shell.spans], constituents: [] });
    }
  }

  private freshId(operation: OperationName): string {
    this.counter += 1;
    return `${this.pair.id}/${operation}-${this.counter}`;
  }

  private tokensOf(side: Side) {
    return side === "complex" ? this.pair.complex.tokens : this.pair.simplified.tokens;
  }

  /** Start a new single-operation edit from a raw character drag. The drag is
   * snapped outward to token bounds, mirroring what the server will store. */
  startEdit(
    operation: OperationName,
    side: Side,
    dragStart: number,
    dragEnd: number,
    reorderLevel?: ReorderLevel,
  ): EditData {
    if (!SINGLE_OPERATIONS.includes(operation)) {
      throw new SelectionError(`composites are created with startComposite, not ${operation}`);
    }
    if (!operationSides(operation)[side]) {
      throw new SelectionError(`${operation} edits may not touch the ${side} side`);
    }
    if (operation === "reorder" && reorderLevel === undefined) {
      throw new SelectionError("reorder edits need a word/component level");
    }
    const snapped = snapToTokens(this.tokensOf(side), dragStart, dragEnd);
    if (snapped === null) {
      throw new SelectionError("selection touches no tokens");
    }
    const edit: EditData = {
      id: this.freshId(operation),
      operation,
      spans: [{ side, start: snapped.start, end: snapped.end }],
      ...(operation === "reorder" ? { reorder_level: reorderLevel } : {}),
    };
    this.edits.push(edit);
    return edit;
  }

  /** Extend an existing edit with another (possibly other-side) span. */
  addSpan(editId: string, side: Side, dragStart: number, dragEnd: number): EditData {
    const edit = this.require(editId);
    if (!operationSides(edit.operation)[side]) {
      throw new SelectionError(`${edit.operation} edits may not touch the ${side} side`);
    }
    const snapped = snapToTokens(this.tokensOf(side), dragStart, dragEnd);
    if (snapped === null) {
      throw new SelectionError("selection touches no tokens");
    }
    const span: SpanData = { side, start: snapped.start, end: snapped.end };
    for (const existing of edit.spans) {
      if (existing.side === side && existing.start < span.end && span.start < existing.end) {
        throw new SelectionError("spans of one edit may not overlap each other");
      }
    }
    edit.spans.push(span);
    return edit;
  }

  startComposite(operation: "split" | "structure", structureSubtype?: string): EditData {
    const edit: EditData = {
      id: this.freshId(operation),
      operation,
      spans: [],
      constituents: [],
      ...(structureSubtype !== undefined ? { structure_subtype: structureSubtype } : {}),
    };
    this.edits.push(edit);
    return edit;
  }

  /** Move a top-level single-operation edit under a composite; the composite's
   * own spans are recomputed as the union of its constituents. */
  attachConstituent(compositeId: string, editId: string): EditData {
    const composite = this.require(compositeId);
    if (composite.operation !== "split" && composite.operation !== "structure") {
      throw new SelectionError(`'${compositeId}' is not a split or structure edit`);
    }
    const index = this.edits.findIndex((e) => e.id === editId);
    if (index < 0) {
      throw new SelectionError(`no edit '${editId}' to attach`);
    }
    const constituent = this.edits[index] as EditData;
    if (!SINGLE_OPERATIONS.includes(constituent.operation)) {
      throw new SelectionError("constituents must be single-operation edits");
    }
    this.edits.splice(index, 1);
    composite.constituents = [...(composite.constituents ?? []), constituent];
    this.recomputeCompositeSpans(composite);
    return composite;
  }

  private recomputeCompositeSpans(composite: EditData): void {
    const spans: SpanData[] = [];
    for (const side of ["complex", "simplified"] as Side[]) {
      const ranges = (composite.constituents ?? [])
        .flatMap((c) => c.spans)
        .filter((s) => s.side === side)
        .map((s) => ({ start: s.start, end: s.end }));
      for (const range of mergeRanges(ranges)) {
        spans.push({ side, start: range.start, end: range.end });
      }
    }
    composite.spans = spans;
  }

  removeEdit(editId: string): void {
    const index = this.edits.findIndex((e) => e.id === editId);
    if (index < 0) {
      throw new SelectionError(`no edit '${editId}'`);
    }
    this.edits.splice(index, 1);
  }

  private require(editId: string): EditData {
    const edit = this.edits.find((e) => e.id === editId);
    if (edit === undefined) {
      throw new SelectionError(`no edit '${editId}'`);
    }
    return edit;
  }

  /** Problems a submission would be bounced for; shown inline before posting. */
  localProblems(): string[] {
    const problems: string[] = [];
    for (const edit of this.edits) {
      if (
        (edit.operation === "split" || edit.operation === "structure") &&
        (edit.constituents ?? []).length === 0
      ) {
        problems.push(`${edit.id}: composite edit has no constituents yet`);
      }
      if (SINGLE_OPERATIONS.includes(edit.operation) && edit.spans.length === 0) {
        problems.push(`${edit.id}: edit has no spans`);
      }
    }
    return problems;
  }

  payload(): EditData[] {
    return this.edits.map((edit) => JSON.parse(JSON.stringify(edit)) as EditData);
  }
}
