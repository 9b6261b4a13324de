/** Token-snapped span geometry shared by all three views.
 *
 * Mirrors the server's snapping rule (outward to token boundaries) so drags
 * land where the server would put them, but the server's answer is still the
 * one that gets stored. */

import type { EditData, OperationName, Side, SpanData, TokenData } from "./types.js";

export interface CharRange {
  start: number;
  end: number;
}

/** Snap a raw character drag outward to token boundaries; null if the range
 * touches no token at all. */
export function snapToTokens(tokens: TokenData[], start: number, end: number): CharRange | null {
  if (tokens.length === 0 || end <= start) {
    return null;
  }
  let snappedStart: number | null = null;
  let snappedEnd: number | null = null;
  for (const token of tokens) {
    if (token.start <= start) {
      snappedStart = snappedStart === null ? token.start : Math.max(snappedStart, token.start);
    }
    if (token.end >= end) {
      snappedEnd = snappedEnd === null ? token.end : Math.min(snappedEnd, token.end);
    }
  }
  const first = tokens[0];
  const last = tokens[tokens.length - 1];
  if (first === undefined || last === undefined) {
    return null;
  }
  return {
    start: snappedStart ?? first.start,
    end: snappedEnd ?? last.end,
  };
}

/** Indices of tokens whose [start, end) intersects the range. */
export function tokensInRange(tokens: TokenData[], range: CharRange): number[] {
  const out: number[] = [];
  tokens.forEach((token, index) => {
    if (token.start < range.end && range.start < token.end) {
      out.push(index);
    }
  });
  return out;
}

/** Merge [start, end) ranges, unioning overlapping or touching ones. */
export function mergeRanges(ranges: CharRange[]): CharRange[] {
  const sorted = [...ranges].sort((a, b) => a.start - b.start || a.end - b.end);
  const merged: CharRange[] = [];
  for (const range of sorted) {
    const active = merged[merged.length - 1];
    if (active && range.start <= active.end) {
      active.end = Math.max(active.end, range.end);
    } else {
      merged.push({ ...range });
    }
  }
  return merged;
}

/** Which sides an operation's spans may touch; drives layer enablement so an
 * impossible drag (deletion on the simplified side) is simply not offered. */
export function operationSides(operation: OperationName): { complex: boolean; simplified: boolean } {
  switch (operation) {
    case "insertion":
      return { complex: false, simplified: true };
    case "deletion":
      return { complex: true, simplified: false };
    default:
      return { complex: true, simplified: true };
  }
}

function editRanges(edit: EditData, side: Side): CharRange[] {
  const constituents = edit.constituents ?? [];
  const spans: SpanData[] =
    (edit.operation === "split" || edit.operation === "structure") && constituents.length > 0
      ? constituents.flatMap((c) => c.spans)
      : edit.spans;
  return spans.filter((s) => s.side === side).map((s) => ({ start: s.start, end: s.end }));
}

/** Per-token count of covering edits: the depth of the stacked underlines in
 * the selection view and the overlap shading in the adjudication view. */
export function coverageDepth(tokens: TokenData[], edits: EditData[], side: Side): number[] {
  const depth = tokens.map(() => 0);
  for (const edit of edits) {
    const ranges = mergeRanges(editRanges(edit, side));
    for (const range of ranges) {
      for (const index of tokensInRange(tokens, range)) {
        depth[index] = (depth[index] ?? 0) + 1;
      }
    }
  }
  return depth;
}
