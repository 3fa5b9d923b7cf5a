import type { CourseState, NodeState } from "./types";

/**
 * Which gamification panels the dashboard may render. Each flag is true
 * exactly when the matching element is in the learner's active tuple, so
 * the server's personalization decision is mirrored, never re-derived.
 */
export interface PanelFlags {
  leaderboard: boolean; // competition
  points: boolean; // economy
  badges: boolean; // acknowledgement
  stats: boolean; // stats
  timer: boolean; // time_pressure: countdowns may appear on timed quizzes
}

export interface OutlineEntry {
  nodeId: string;
  state: NodeState;
}

export interface ViewState {
  learnerId: string;
  courseId: string;
  core: CourseState["core"];
  panels: PanelFlags;
  outline: OutlineEntry[];
  completed: number;
  total: number;
  percent: number;
  progressLabel: string; // e.g. "14% COMPLETE"
  stepsLabel: string; // e.g. "2/14 Steps"
  pointsTotal: number;
  badges: string[];
  variants: string[];
  surveyUnlocked: boolean;
  award: { badgeId: string; certificateId: string } | null;
}

export function buildViewState(state: CourseState): ViewState {
  const active = new Set(state.active_elements);
  return {
    learnerId: state.learner_id,
    courseId: state.course_id,
    core: state.core,
    panels: {
      leaderboard: active.has("competition"),
      points: active.has("economy"),
      badges: active.has("acknowledgement"),
      stats: active.has("stats"),
      timer: active.has("time_pressure"),
    },
    outline: Object.entries(state.unlock_state).map(([nodeId, nodeState]) => ({
      nodeId,
      state: nodeState,
    })),
    completed: state.completed,
    total: state.total,
    percent: state.percent,
    progressLabel: `${state.percent}% COMPLETE`,
    stepsLabel: `${state.completed}/${state.total} Steps`,
    pointsTotal: state.points_total,
    badges: [...state.badges],
    variants: [...state.variants],
    surveyUnlocked: state.survey_unlocked,
    award: state.award
      ? { badgeId: state.award.badge_id, certificateId: state.award.certificate_id }
      : null,
  };
}

/** Names of the panels a view state will actually render, for auditing. */
export function renderedPanelNames(vm: ViewState): string[] {
  const names: string[] = [];
  if (vm.panels.points) names.push("points");
  if (vm.panels.badges) names.push("badges");
  if (vm.panels.leaderboard) names.push("leaderboard");
  if (vm.panels.stats) names.push("stats");
  return names;
}
