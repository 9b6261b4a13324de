/** Classification-stage view model: one wizard per adjudicated edit, driven
 * entirely by the served typology. The operation (and reorder level) are
 * answered automatically from the edit itself, so annotators face at most the
 * remaining 1-3 questions; error leaves open a multi-select. */

import { ClassificationWizard } from "./wizard.js";
import type {
  ClassificationData,
  ClassificationEntryData,
  EditData,
  InformationChange,
  TypologyData,
} from "./types.js";

export class ClassificationError extends Error {}

const RATINGS = [1, 2, 3];

export class EditClassifier {
  readonly wizard: ClassificationWizard;
  errorTypes: string[] = [];
  rating: number | null = null;
  grammarError = false;

  constructor(
    private readonly typology: TypologyData,
    readonly edit: EditData,
  ) {
    const seed: string[] = [edit.operation];
    if (edit.operation === "reorder" && edit.reorder_level) {
      seed.push(edit.reorder_level);
    }
    this.wizard = new ClassificationWizard(typology.decision_tree, seed);
  }

  /** The error_type question becomes a multi-select: the first pick walks the
   * wizard, the full set lands in the classification. */
  get offersErrorMultiSelect(): boolean {
    return this.wizard.currentStep()?.question === "error_type";
  }

  chooseErrorTypes(types: string[]): void {
    if (!this.offersErrorMultiSelect) {
      throw new ClassificationError("the wizard is not at the error-type question");
    }
    const first = types[0];
    if (first === undefined) {
      throw new ClassificationError("a failed edit needs at least one error type");
    }
    const options = this.wizard.currentStep()?.options ?? [];
    for (const typeId of types) {
      if (!options.includes(typeId)) {
        throw new ClassificationError(`'${typeId}' is not offered at this question`);
      }
    }
    this.wizard.answer(first);
    this.errorTypes = [...types];
  }

  private typeDef(typeId: string) {
    const def = this.typology.types.find((t) => t.id === typeId);
    if (def === undefined) {
      throw new ClassificationError(`served typology has no type '${typeId}'`);
    }
    return def;
  }

  get polarity(): ClassificationData["polarity"] | null {
    const typeId = this.wizard.typeId;
    if (typeId === null) {
      return null;
    }
    return this.typeDef(typeId).polarity;
  }

  setRating(value: number): void {
    if (!RATINGS.includes(value)) {
      throw new ClassificationError("rating must be 1, 2 or 3");
    }
    this.rating = value;
  }

  /** What still blocks this edit's submission; drives the per-edit checklist. */
  missing(): string[] {
    const problems: string[] = [];
    if (!this.wizard.done) {
      problems.push(`answer '${this.wizard.currentStep()?.question}'`);
      return problems;
    }
    if (this.polarity === "error" && this.errorTypes.length === 0) {
      problems.push("pick at least one error type");
    }
    if (this.polarity !== "trivial" && this.rating === null) {
      problems.push("rate the edit 1-3");
    }
    return problems;
  }

  get complete(): boolean {
    return this.missing().length === 0;
  }

  private informationChange(): InformationChange {
    const step = this.wizard.answers.find((answer) =>
      ["less", "same", "more", "different"].includes(answer),
    );
    // syntax operations skip the question; their information stays the same
    return (step as InformationChange | undefined) ?? "same";
  }

  entry(): ClassificationEntryData {
    const problems = this.missing();
    if (problems.length > 0) {
      throw new ClassificationError(`incomplete: ${problems.join("; ")}`);
    }
    const typeId = this.wizard.typeId as string;
    const polarity = this.polarity as ClassificationData["polarity"];
    const classification: ClassificationData = { polarity };
    if (polarity === "quality") {
      classification.quality_type = typeId;
      classification.rating = this.rating;
    } else if (polarity === "error") {
      classification.error_types = this.errorTypes.length > 0 ? this.errorTypes : [typeId];
      classification.rating = this.rating;
    }
    if (this.grammarError) {
      classification.grammar_error = true;
    }
    return {
      edit_id: this.edit.id,
      information_change: this.informationChange(),
      classification,
    };
  }
}

/** Per-task classification progress: one classifier per adjudicated edit and
 * a revision counter for optimistic submissions (partial saves allowed). */
export class ClassificationSession {
  readonly classifiers: Map<string, EditClassifier> = new Map();
  revision = 0;

  constructor(typology: TypologyData, adjudicated: EditData[]) {
    for (const edit of adjudicated) {
      this.classifiers.set(edit.id, new EditClassifier(typology, edit));
    }
  }

  classifier(editId: string): EditClassifier {
    const found = this.classifiers.get(editId);
    if (found === undefined) {
      throw new ClassificationError(`no adjudicated edit '${editId}'`);
    }
    return found;
  }

  checklist(): Record<string, string[]> {
    const out: Record<string, string[]> = {};
    for (const [editId, classifier] of this.classifiers) {
      const problems = classifier.missing();
      if (problems.length > 0) {
        out[editId] = problems;
      }
    }
    return out;
  }

  get complete(): boolean {
    return Object.keys(this.checklist()).length === 0;
  }

  nextRevision(): number {
    this.revision += 1;
    return this.revision;
  }

  /** Entries for every completed edit (a partial save) or all of them. */
  entries(onlyComplete = false): ClassificationEntryData[] {
    const out: ClassificationEntryData[] = [];
    for (const classifier of this.classifiers.values()) {
      if (classifier.complete) {
        out.push(classifier.entry());
      } else if (!onlyComplete) {
        throw new ClassificationError("some edits are not fully classified");
      }
    }
    return out;
  }
}
