import type { ApiClient } from "./client";
import type { EvaluationReceipt } from "./types";

export const STATEMENT_COUNT = 17;
export const SCALE_MIN = 1;
export const SCALE_MAX = 5;

/** Collects the 17-statement Likert evaluation; submit stays blocked until complete. */
export class SurveyForm {
  private readonly answers = new Map<number, number>();

  rate(statement: number, rating: number): void {
    if (statement < 1 || statement > STATEMENT_COUNT) {
      throw new Error(`statement ${statement} out of range`);
    }
    if (!Number.isInteger(rating) || rating < SCALE_MIN || rating > SCALE_MAX) {
      throw new Error(`rating must be an integer in [${SCALE_MIN}, ${SCALE_MAX}]`);
    }
    this.answers.set(statement, rating);
  }

  get complete(): boolean {
    return this.answers.size === STATEMENT_COUNT;
  }

  missing(): number[] {
    const out: number[] = [];
    for (let s = 1; s <= STATEMENT_COUNT; s += 1) {
      if (!this.answers.has(s)) out.push(s);
    }
    return out;
  }

  async submit(client: ApiClient, courseId: string): Promise<EvaluationReceipt> {
    if (!this.complete) {
      throw new Error(`survey incomplete: statements ${this.missing().join(", ")} unanswered`);
    }
    return client.submitEvaluation(courseId, Object.fromEntries(this.answers));
  }
}
