import type { ApiClient } from "./client";
import type { AttemptResult, Effect } from "./types";

export interface TimerInfo {
  quizId: string;
  /** Absolute deadline and the server clock at issue time, both epoch ms. */
  deadlineMs: number;
  serverNowMs: number;
}

/** Extract the server-issued countdown from a content view, if any. */
export function timerFromEffects(effects: Effect[]): TimerInfo | null {
  for (const effect of effects) {
    if (effect.kind !== "timer_started" || !effect.surfaced) continue;
    const details = effect.details as {
      quiz_id?: unknown;
      deadline?: unknown;
      server_now?: unknown;
    };
    if (typeof details.deadline !== "string" || typeof details.server_now !== "string") {
      continue;
    }
    return {
      quizId: String(details.quiz_id ?? ""),
      deadlineMs: Date.parse(details.deadline),
      serverNowMs: Date.parse(details.server_now),
    };
  }
  return null;
}

/**
 * Countdown anchored to the server clock: remaining time is measured
 * against the server-issued deadline with the local/server clock offset
 * taken at receipt, so setting the local clock back cannot buy time.
 */
export class CountdownTimer {
  private readonly offsetMs: number;

  constructor(readonly info: TimerInfo, receivedAtLocalMs: number) {
    this.offsetMs = receivedAtLocalMs - info.serverNowMs;
  }

  remainingSeconds(localNowMs: number): number {
    const remainingMs = this.info.deadlineMs + this.offsetMs - localNowMs;
    return Math.max(0, Math.ceil(remainingMs / 1000));
  }

  expired(localNowMs: number): boolean {
    return this.remainingSeconds(localNowMs) === 0;
  }
}

/**
 * One quiz attempt in progress. Answers fill in one at a time; on expiry
 * the current sheet is submitted as-is (unanswered questions score zero).
 */
export class QuizPlayer {
  readonly answers: (string | null)[];
  private submitted = false;
  private readonly startedAtMs: number;

  constructor(
    readonly quizId: string,
    readonly questionCount: number,
    readonly timer: CountdownTimer | null,
    nowMs: number = Date.now()
  ) {
    this.answers = new Array<string | null>(questionCount).fill(null);
    this.startedAtMs = nowMs;
  }

  setAnswer(index: number, value: string | null): void {
    if (index < 0 || index >= this.questionCount) {
      throw new Error(`question index ${index} out of range`);
    }
    this.answers[index] = value;
  }

  get done(): boolean {
    return this.submitted;
  }

  async submit(client: ApiClient, nowMs: number = Date.now()): Promise<AttemptResult> {
    if (this.submitted) throw new Error("attempt already submitted");
    this.submitted = true;
    return client.submitAttempt(this.quizId, {
      answers: [...this.answers],
      time_spent_seconds: Math.max(0, Math.round((nowMs - this.startedAtMs) / 1000)),
    });
  }

  /** Called by the UI tick when the countdown hits zero: submit what we have. */
  async autoSubmitOnExpiry(
    client: ApiClient,
    nowMs: number = Date.now()
  ): Promise<AttemptResult | null> {
    if (this.submitted || this.timer === null || !this.timer.expired(nowMs)) {
      return null;
    }
    return this.submit(client, nowMs);
  }
}
