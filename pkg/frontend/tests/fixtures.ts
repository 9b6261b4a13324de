/** Shared test fixtures: the real served typology and pre-tokenized pairs
 * (offsets hand-checked against the strings). */

import { readFileSync } from "node:fs";

import type { EditData, PairData, TypologyData } from "../src/types.js";

export function servedTypology(): TypologyData {
  const url = new URL("../../src/salsa_eval/data/typology.json", import.meta.url);
  return JSON.parse(readFileSync(url, "utf-8")) as TypologyData;
}

export const FOX_PAIR: PairData = {
  id: "p1",
  system: "mock",
  metadata: {},
  complex: {
    text: "The quick brown fox jumped.",
    tokens: [
      { start: 0, end: 3, surface: "The" },
      { start: 4, end: 9, surface: "quick" },
      { start: 10, end: 15, surface: "brown" },
      { start: 16, end: 19, surface: "fox" },
      { start: 20, end: 26, surface: "jumped" },
      { start: 26, end: 27, surface: "." },
    ],
  },
  simplified: {
    text: "The fox jumped. It was fast.",
    tokens: [
      { start: 0, end: 3, surface: "The" },
      { start: 4, end: 7, surface: "fox" },
      { start: 8, end: 14, surface: "jumped" },
      { start: 14, end: 15, surface: "." },
      { start: 16, end: 18, surface: "It" },
      { start: 19, end: 22, surface: "was" },
      { start: 23, end: 27, surface: "fast" },
      { start: 27, end: 28, surface: "." },
    ],
  },
};

export const CAT_PAIR: PairData = {
  id: "p2",
  system: "mock",
  metadata: {},
  complex: {
    text: "A cat sat.",
    tokens: [
      { start: 0, end: 1, surface: "A" },
      { start: 2, end: 5, surface: "cat" },
      { start: 6, end: 9, surface: "sat" },
      { start: 9, end: 10, surface: "." },
    ],
  },
  simplified: {
    text: "A cat sat down.",
    tokens: [
      { start: 0, end: 1, surface: "A" },
      { start: 2, end: 5, surface: "cat" },
      { start: 6, end: 9, surface: "sat" },
      { start: 10, end: 14, surface: "down" },
      { start: 14, end: 15, surface: "." },
    ],
  },
};

export function foxSplitShell(): EditData {
  return { id: "p1/split-1", operation: "split", spans: [], constituents: [] };
}
