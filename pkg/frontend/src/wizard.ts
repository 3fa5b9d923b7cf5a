import type { ApiClient } from "./client";
import { ApiError } from "./client";
import { escapeHtml } from "./render";
import type { AssessmentItem, CourseState } from "./types";

export type Choice = "A" | "B";

/**
 * Forced-choice assessment wizard. Every item must receive exactly one of
 * two answers; there is no skip, and nothing is posted until all items are
 * answered. Abandoning the wizard mid-way therefore leaves no server state.
 */
export class MbtiWizard {
  private readonly answers = new Map<number, Choice>();
  private cursor = 0;

  constructor(readonly items: AssessmentItem[]) {
    if (items.length === 0) throw new Error("wizard needs at least one item");
  }

  get currentItem(): AssessmentItem | null {
    return this.cursor < this.items.length ? this.items[this.cursor]! : null;
  }

  get answeredCount(): number {
    return this.answers.size;
  }

  get complete(): boolean {
    return this.answers.size === this.items.length;
  }

  /** Answer the current item and advance. The only way forward is to choose. */
  choose(choice: Choice): void {
    const item = this.currentItem;
    if (item === null) throw new Error("wizard already complete");
    this.answers.set(item.number, choice);
    this.cursor += 1;
  }

  /** Step back one item; its previous answer stays selected until re-chosen. */
  back(): void {
    if (this.cursor > 0) this.cursor -= 1;
  }

  collected(): Record<number, Choice> {
    if (!this.complete) {
      throw new Error(
        `forced choice: ${this.items.length - this.answers.size} item(s) unanswered`
      );
    }
    return Object.fromEntries(this.answers) as Record<number, Choice>;
  }

  /**
   * Post the completed response to the enroll endpoint. Safe to retry after
   * a network failure: if the first attempt actually landed, the server's
   * conflict answer is treated as success and the existing enrollment state
   * is fetched instead of creating a duplicate.
   */
  async submit(client: ApiClient, courseId: string): Promise<CourseState> {
    const answers = this.collected();
    try {
      return await client.enroll(courseId, answers);
    } catch (error) {
      if (error instanceof ApiError && error.code === "conflict") {
        return client.state(courseId);
      }
      throw error;
    }
  }
}

export function renderWizardItem(wizard: MbtiWizard): string {
  const item = wizard.currentItem;
  if (item === null) return '<div class="wizard-done">All items answered.</div>';
  return [
    `<div class="wizard-item" data-item="${item.number}">`,
    `<p class="prompt">${escapeHtml(item.prompt)}</p>`,
    `<button class="option" data-choice="A">${escapeHtml(item.option_a)}</button>`,
    `<button class="option" data-choice="B">${escapeHtml(item.option_b)}</button>`,
    `<p class="wizard-progress">Item ${item.number} of ${wizard.items.length}</p>`,
    "</div>",
  ].join("");
}
