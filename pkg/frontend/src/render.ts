import type { LeaderboardRow } from "./types";
import type { ViewState } from "./viewModel";

export function escapeHtml(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;")
    .replace(/'/g, "&#39;");
}

/** Percent plus step fraction, always rendered regardless of element tuple. */
export function renderProgressPanel(vm: ViewState): string {
  return [
    '<section class="panel panel-progress">',
    `<div class="progress-label">${vm.percent}% COMPLETE</div>`,
    `<div class="progress-steps">${vm.completed}/${vm.total} Steps</div>`,
    '<div class="progress-bar">',
    `<div class="progress-fill" style="width:${vm.percent}%"></div>`,
    "</div>",
    "</section>",
  ].join("");
}

/**
 * Course outline with lock badges mirroring the server's unlock states.
 * Locked nodes render as plain text with no navigation target, so the UI
 * cannot reach locked content even by direct interaction.
 */
export function renderOutline(vm: ViewState): string {
  const items = vm.outline.map((entry) => {
    const id = escapeHtml(entry.nodeId);
    const label =
      entry.state === "locked"
        ? `<span class="node-title">${id}</span><span class="lock-badge">locked</span>`
        : `<a class="node-title" href="#/node/${id}">${id}</a>`;
    return `<li class="node node-${entry.state}" data-node="${id}" data-state="${entry.state}">${label}</li>`;
  });
  return `<ol class="outline">${items.join("")}</ol>`;
}

export function renderPointsPanel(vm: ViewState): string {
  if (!vm.panels.points) return "";
  return [
    '<section class="panel panel-points">',
    `<div class="points-total">${vm.pointsTotal} points</div>`,
    "</section>",
  ].join("");
}

export function renderBadgesPanel(vm: ViewState): string {
  if (!vm.panels.badges) return "";
  const items = vm.badges
    .map((badge) => `<li class="badge">${escapeHtml(badge)}</li>`)
    .join("");
  return `<section class="panel panel-badges"><ul class="badges">${items}</ul></section>`;
}

export function renderStatsPanel(vm: ViewState): string {
  if (!vm.panels.stats) return "";
  return [
    '<section class="panel panel-stats">',
    `<div class="stat">steps completed: ${vm.completed}/${vm.total}</div>`,
    `<div class="stat">points collected: ${vm.pointsTotal}</div>`,
    "</section>",
  ].join("");
}

export function renderLeaderboardPanel(
  vm: ViewState,
  rows: LeaderboardRow[]
): string {
  if (!vm.panels.leaderboard) return "";
  const body = rows
    .map(
      (row) =>
        `<tr class="${row.learner_id === vm.learnerId ? "me" : ""}">` +
        `<td>#${row.rank}</td><td>${escapeHtml(row.learner_id)}</td>` +
        `<td>${row.points_total}</td></tr>`
    )
    .join("");
  return `<section class="panel panel-leaderboard"><table class="leaderboard"><tbody>${body}</tbody></table></section>`;
}

/**
 * Countdown for a timed quiz. Renders nothing unless the learner's tuple
 * includes the timing element AND the server issued a deadline for this
 * attempt; everyone else takes the same quiz without visible pressure.
 */
export function renderTimer(vm: ViewState, remainingSeconds: number | null): string {
  if (!vm.panels.timer || remainingSeconds === null) return "";
  const minutes = Math.floor(remainingSeconds / 60);
  const seconds = remainingSeconds % 60;
  const text = `${minutes}:${String(seconds).padStart(2, "0")}`;
  return `<div class="quiz-timer" role="timer">${text}</div>`;
}

export interface AttemptSummary {
  score: number;
  total: number;
  percentage: number;
  points: number;
  passed: boolean;
}

/** Pass/fail popup; failing keeps the quiz retakeable so a retake button appears. */
export function renderResultPopup(result: AttemptSummary): string {
  const pct = Math.round(result.percentage);
  if (result.passed) {
    return [
      '<div class="popup popup-pass">',
      `<p class="verdict">Passed! ${result.score}/${result.total} (${pct}%)</p>`,
      `<p class="points">+${result.points} points</p>`,
      '<button class="continue">Continue</button>',
      "</div>",
    ].join("");
  }
  return [
    '<div class="popup popup-fail">',
    `<p class="verdict">Not passed: ${result.score}/${result.total} (${pct}%)</p>`,
    '<button class="retake">Retake quiz</button>',
    "</div>",
  ].join("");
}

/** Full dashboard: outline, progress, then only the element-gated panels. */
export function renderDashboard(vm: ViewState, rows: LeaderboardRow[] = []): string {
  return [
    '<main class="dashboard">',
    renderOutline(vm),
    renderProgressPanel(vm),
    renderPointsPanel(vm),
    renderBadgesPanel(vm),
    renderStatsPanel(vm),
    renderLeaderboardPanel(vm, rows),
    "</main>",
  ].join("");
}
