import type { Core, CourseState, NodeState } from "../src/types";

/** Deployed element tuple per cognitive core, as the server reports it. */
export const ACTIVE_TUPLES: Record<Core, string[]> = {
  NT: ["time_pressure", "competition", "puzzle"],
  ST: ["economy", "stats", "puzzle"],
  NF: ["progression", "choice", "competition"],
  SF: ["acknowledgement", "choice", "sensation"],
};

const SAMPLE_OUTLINE: Record<string, NodeState> = {
  course_introduction: "completed",
  mindset_and_perspectives: "completed",
  reframing_conversations: "unlocked",
  "30381": "locked",
  "30386": "locked",
  recognizing_personality_diversity: "locked",
};

export function makeState(
  core: Core,
  overrides: Partial<CourseState> = {}
): CourseState {
  return {
    learner_id: "101",
    course_id: "31285",
    core,
    variants: [],
    active_elements: ACTIVE_TUPLES[core],
    unlock_state: { ...SAMPLE_OUTLINE },
    completed: 2,
    total: 14,
    percent: 14,
    points_total: 0,
    badges: [],
    gates: {},
    award: null,
    survey_unlocked: false,
    ...overrides,
  };
}
