/** Wire formats of the annotation service. Kept in sync with the REST API;
 * the UI never hard-codes domain rules that the server can state as data. */

export type Side = "complex" | "simplified";

export type OperationName =
  | "insertion"
  | "deletion"
  | "substitution"
  | "reorder"
  | "split"
  | "structure";

export type InformationChange = "less" | "same" | "more" | "different";
export type PolarityName = "quality" | "error" | "trivial";
export type ReorderLevel = "word" | "component";

export interface TokenData {
  start: number;
  end: number;
  surface: string;
}

export interface SentenceData {
  text: string;
  tokens: TokenData[];
}

export interface PairData {
  id: string;
  system: string;
  complex: SentenceData;
  simplified: SentenceData;
  metadata: Record<string, unknown>;
}

export interface SpanData {
  side: Side;
  start: number;
  end: number;
}

export interface ClassificationData {
  polarity: PolarityName;
  quality_type?: string | null;
  error_types?: string[];
  grammar_error?: boolean;
  rating?: number | null;
}

export interface EditData {
  id: string;
  operation: OperationName;
  spans: SpanData[];
  reorder_level?: ReorderLevel | null;
  information_change?: InformationChange | null;
  constituents?: EditData[];
  structure_subtype?: string | null;
  classification?: ClassificationData | null;
}

export interface ClassificationEntryData {
  edit_id: string;
  information_change?: InformationChange | null;
  classification: ClassificationData;
}

export interface StageView {
  assigned: string[];
  received: string[];
}

export interface TaskSummary {
  pair: string;
  corpus: string;
  state: string;
  system: string;
}

export interface TaskView {
  pair: string;
  corpus: string;
  state: string;
  selection: StageView;
  adjudicator: string | null;
  classification: StageView;
  pair_data: PairData;
  split_shells: EditData[];
  selections: Record<string, EditData[]> | null;
  adjudicated_edits: EditData[] | null;
}

export interface SubmitResponse {
  task: TaskView;
  warnings: string[];
}

export interface TypeDefData {
  id: string;
  name: string;
  family: string;
  polarity: PolarityName;
  operations: string[];
  information_changes: string[];
}

export interface DecisionNodeData {
  question?: string;
  answers?: Record<string, DecisionNodeData>;
  type?: string;
}

export interface TypologyData {
  version: number;
  grammar_flag: { id: string };
  types: TypeDefData[];
  decision_tree: DecisionNodeData;
}

export interface ViolationData {
  code: string;
  message: string;
  edit_id: string | null;
}

export interface ErrorBody {
  error: string;
  message: string;
  violations?: ViolationData[];
}
