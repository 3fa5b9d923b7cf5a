import { z } from "zod";

/** Cognitive cores the server can assign at enrollment. */
export const CoreSchema = z.enum(["ST", "SF", "NT", "NF"]);
export type Core = z.infer<typeof CoreSchema>;

export const NodeStateSchema = z.enum(["locked", "unlocked", "completed"]);
export type NodeState = z.infer<typeof NodeStateSchema>;

export const RegisterResponseSchema = z.object({
  user_id: z.string(),
  user_name: z.string(),
  user_mail: z.string(),
  role: z.string(),
});
export type RegisterResponse = z.infer<typeof RegisterResponseSchema>;

export const LoginResponseSchema = z.object({
  token: z.string(),
  user_id: z.string(),
  ttl_seconds: z.number(),
});
export type LoginResponse = z.infer<typeof LoginResponseSchema>;

export const AssessmentItemSchema = z.object({
  number: z.number().int(),
  prompt: z.string(),
  option_a: z.string(),
  option_b: z.string(),
});
export type AssessmentItem = z.infer<typeof AssessmentItemSchema>;

export const AssessmentSchema = z.object({
  items: z.array(AssessmentItemSchema),
});

export const GateSchema = z.object({
  cost: z.number(),
  open: z.boolean(),
  deficit: z.number(),
});

export const CourseStateSchema = z.object({
  learner_id: z.string(),
  course_id: z.string(),
  core: CoreSchema,
  variants: z.array(z.string()),
  active_elements: z.array(z.string()),
  unlock_state: z.record(z.string(), NodeStateSchema),
  completed: z.number().int(),
  total: z.number().int(),
  percent: z.number().int(),
  points_total: z.number().int(),
  badges: z.array(z.string()),
  gates: z.record(z.string(), GateSchema),
  award: z
    .object({ badge_id: z.string(), certificate_id: z.string() })
    .nullable(),
  survey_unlocked: z.boolean(),
});
export type CourseState = z.infer<typeof CourseStateSchema>;

export const EffectSchema = z.object({
  kind: z.string(),
  element: z.string().nullable(),
  surfaced: z.boolean(),
  details: z.record(z.string(), z.unknown()),
});
export type Effect = z.infer<typeof EffectSchema>;

export const ContentViewSchema = z.object({
  node_id: z.string(),
  state: NodeStateSchema,
  effects: z.array(EffectSchema),
});
export type ContentView = z.infer<typeof ContentViewSchema>;

export const AttemptResultSchema = z.object({
  score: z.number().int(),
  total: z.number().int(),
  percentage: z.number(),
  points: z.number().int(),
  passed: z.boolean(),
  unlocked: z.array(z.object({ node_id: z.string(), state: NodeStateSchema })),
  course_completed: z.boolean(),
  effects: z.array(EffectSchema),
});
export type AttemptResult = z.infer<typeof AttemptResultSchema>;

export const LeaderboardSchema = z.object({
  rows: z.array(
    z.object({
      rank: z.number().int(),
      learner_id: z.string(),
      points_total: z.number().int(),
    })
  ),
});
export type Leaderboard = z.infer<typeof LeaderboardSchema>;
export type LeaderboardRow = Leaderboard["rows"][number];

export const EvaluationReceiptSchema = z.object({
  learner_id: z.string(),
  statement_count: z.number().int(),
});
export type EvaluationReceipt = z.infer<typeof EvaluationReceiptSchema>;
