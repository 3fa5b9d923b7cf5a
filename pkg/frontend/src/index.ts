export { ApiClient, ApiError } from "./client";
export type { AttemptBody } from "./client";
export { MbtiWizard, renderWizardItem } from "./wizard";
export type { Choice } from "./wizard";
export { CountdownTimer, QuizPlayer, timerFromEffects } from "./quizPlayer";
export type { TimerInfo } from "./quizPlayer";
export { SurveyForm, STATEMENT_COUNT } from "./survey";
export { buildViewState, renderedPanelNames } from "./viewModel";
export type { PanelFlags, ViewState, OutlineEntry } from "./viewModel";
export {
  escapeHtml,
  renderDashboard,
  renderOutline,
  renderProgressPanel,
  renderPointsPanel,
  renderBadgesPanel,
  renderStatsPanel,
  renderLeaderboardPanel,
  renderTimer,
  renderResultPopup,
} from "./render";
export type { AttemptSummary } from "./render";
export * from "./types";
export { LearnerApp, bootstrap } from "./app";
