import { ApiClient, ApiError } from "./client";
import { CountdownTimer, QuizPlayer, timerFromEffects } from "./quizPlayer";
import {
  renderDashboard,
  renderResultPopup,
  renderTimer,
} from "./render";
import { SurveyForm } from "./survey";
import { buildViewState, type ViewState } from "./viewModel";
import { MbtiWizard, renderWizardItem } from "./wizard";
import type { LeaderboardRow } from "./types";

const COURSE_ID = "31285";

/**
 * Minimal browser shell: wires the typed client, wizard, quiz player, and
 * renderers to a single mount point. All state transitions go through the
 * HTTP API; every response re-renders from fresh server state so optimistic
 * updates are always reconciled.
 */
export class LearnerApp {
  private readonly client: ApiClient;
  private vm: ViewState | null = null;
  private wizard: MbtiWizard | null = null;
  private player: QuizPlayer | null = null;
  private tickHandle: number | null = null;

  constructor(
    private readonly mount: HTMLElement,
    baseUrl: string = window.location.origin
  ) {
    this.client = new ApiClient(baseUrl);
    this.mount.addEventListener("click", (event) => {
      void this.onClick(event);
    });
  }

  async signIn(nameOrMail: string, credential: string): Promise<void> {
    await this.client.login(nameOrMail, credential);
    try {
      await this.refresh();
    } catch (error) {
      if (error instanceof ApiError && error.code === "not_found") {
        await this.startWizard();
        return;
      }
      throw error;
    }
  }

  private async startWizard(): Promise<void> {
    this.wizard = new MbtiWizard(await this.client.assessmentItems());
    this.mount.innerHTML = renderWizardItem(this.wizard);
  }

  private async refresh(rows: LeaderboardRow[] = []): Promise<void> {
    const state = await this.client.state(COURSE_ID);
    this.vm = buildViewState(state);
    if (this.vm.panels.leaderboard && rows.length === 0) {
      rows = (await this.client.leaderboard(COURSE_ID)).rows;
    }
    this.mount.innerHTML = renderDashboard(this.vm, rows);
  }

  private async onClick(event: Event): Promise<void> {
    const target = event.target as HTMLElement | null;
    if (!target) return;

    if (target.matches("button.option") && this.wizard) {
      this.wizard.choose(target.dataset.choice === "B" ? "B" : "A");
      if (this.wizard.complete) {
        await this.wizard.submit(this.client, COURSE_ID);
        this.wizard = null;
        await this.refresh();
      } else {
        this.mount.innerHTML = renderWizardItem(this.wizard);
      }
      return;
    }

    if (target.matches("a.node-title")) {
      event.preventDefault();
      const node = (target.closest("li.node") as HTMLElement).dataset.node!;
      await this.openNode(node);
      return;
    }

    if (target.matches("button.retake, button.continue")) {
      await this.refresh();
    }
  }

  private async openNode(nodeId: string): Promise<void> {
    const view = await this.client.viewContent(COURSE_ID, nodeId);
    const info = timerFromEffects(view.effects);
    if (info === null) {
      // lessons complete on read in this shell; quizzes open a player
      await this.client.completeLesson(COURSE_ID, nodeId).catch(() => undefined);
      await this.refresh();
      return;
    }
    const timer = new CountdownTimer(info, Date.now());
    this.player = new QuizPlayer(nodeId, 0, timer);
    this.startTicking();
  }

  private startTicking(): void {
    if (this.tickHandle !== null) window.clearInterval(this.tickHandle);
    this.tickHandle = window.setInterval(() => {
      void this.tick();
    }, 250);
  }

  private async tick(): Promise<void> {
    if (!this.player || !this.vm) return;
    const now = Date.now();
    const badge = this.mount.querySelector(".quiz-timer");
    const remaining = this.player.timer?.remainingSeconds(now) ?? null;
    const html = renderTimer(this.vm, remaining);
    if (badge) badge.outerHTML = html;
    else this.mount.insertAdjacentHTML("afterbegin", html);
    const result = await this.player.autoSubmitOnExpiry(this.client, now);
    if (result) {
      this.mount.insertAdjacentHTML("beforeend", renderResultPopup(result));
      this.player = null;
      if (this.tickHandle !== null) window.clearInterval(this.tickHandle);
    }
  }

  async submitSurvey(form: SurveyForm): Promise<void> {
    await form.submit(this.client, COURSE_ID);
    await this.refresh();
  }
}

export function bootstrap(): void {
  const mount = document.getElementById("app");
  if (mount) new LearnerApp(mount);
}
