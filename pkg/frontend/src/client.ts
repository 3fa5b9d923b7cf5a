import type { z } from "zod";
import {
  AssessmentSchema,
  AttemptResultSchema,
  ContentViewSchema,
  CourseStateSchema,
  EvaluationReceiptSchema,
  LeaderboardSchema,
  LoginResponseSchema,
  RegisterResponseSchema,
} from "./types";
import type {
  AssessmentItem,
  AttemptResult,
  ContentView,
  CourseState,
  EvaluationReceipt,
  Leaderboard,
  LoginResponse,
  RegisterResponse,
} from "./types";

/** Error raised for any non-2xx response; `code` is the server's machine-readable code. */
export class ApiError extends Error {
  constructor(
    readonly code: string,
    message: string,
    readonly status: number
  ) {
    super(message);
    this.name = "ApiError";
  }
}

export interface AttemptBody {
  course_id?: string;
  answers: (string | null)[];
  time_spent_seconds?: number;
}

/**
 * Typed client for the course service. Holds the bearer token issued at
 * login; every response is validated against its schema before use.
 */
export class ApiClient {
  private token: string | null = null;

  constructor(private readonly baseUrl: string) {}

  get authenticated(): boolean {
    return this.token !== null;
  }

  private async request<S extends z.ZodTypeAny>(
    schema: S,
    method: string,
    path: string,
    body?: unknown
  ): Promise<z.infer<S>> {
    const headers: Record<string, string> = {
      "content-type": "application/json",
    };
    if (this.token) headers.authorization = `Bearer ${this.token}`;
    const response = await fetch(this.baseUrl + path, {
      method,
      headers,
      body: body === undefined ? undefined : JSON.stringify(body),
    });
    const text = await response.text();
    if (!response.ok) {
      let code = "error";
      let message = text;
      try {
        const parsed = JSON.parse(text) as {
          error?: { code?: string; message?: string };
          detail?: unknown;
        };
        code = parsed.error?.code ?? code;
        message =
          parsed.error?.message ??
          (parsed.detail ? JSON.stringify(parsed.detail) : message);
        if (code === "error" && response.status === 422) code = "validation_error";
      } catch {
        // non-JSON error body: keep raw text
      }
      throw new ApiError(code, message, response.status);
    }
    return schema.parse(JSON.parse(text)) as z.infer<S>;
  }

  async register(
    userName: string,
    userMail: string,
    credential: string
  ): Promise<RegisterResponse> {
    return this.request(RegisterResponseSchema, "POST", "/register", {
      user_name: userName,
      user_mail: userMail,
      credential,
    });
  }

  async login(nameOrMail: string, credential: string): Promise<LoginResponse> {
    const result = await this.request(LoginResponseSchema, "POST", "/login", {
      name_or_mail: nameOrMail,
      credential,
    });
    this.token = result.token;
    return result;
  }

  logout(): void {
    this.token = null;
  }

  async assessmentItems(): Promise<AssessmentItem[]> {
    const result = await this.request(AssessmentSchema, "GET", "/assessment");
    return result.items;
  }

  async enroll(
    courseId: string,
    answers: Record<number, "A" | "B">
  ): Promise<CourseState> {
    return this.request(
      CourseStateSchema,
      "POST",
      `/courses/${courseId}/enroll`,
      { answers }
    );
  }

  async state(courseId: string): Promise<CourseState> {
    return this.request(CourseStateSchema, "GET", `/courses/${courseId}/state`);
  }

  async viewContent(courseId: string, nodeId: string): Promise<ContentView> {
    return this.request(
      ContentViewSchema,
      "GET",
      `/courses/${courseId}/content/${nodeId}`
    );
  }

  async completeLesson(courseId: string, lessonId: string): Promise<CourseState> {
    return this.request(
      CourseStateSchema,
      "POST",
      `/courses/${courseId}/lessons/${lessonId}/complete`
    );
  }

  async submitAttempt(quizId: string, body: AttemptBody): Promise<AttemptResult> {
    return this.request(
      AttemptResultSchema,
      "POST",
      `/quizzes/${quizId}/attempts`,
      body
    );
  }

  async leaderboard(courseId: string): Promise<Leaderboard> {
    return this.request(
      LeaderboardSchema,
      "GET",
      `/courses/${courseId}/leaderboard`
    );
  }

  async submitEvaluation(
    courseId: string,
    answers: Record<number, number>
  ): Promise<EvaluationReceipt> {
    return this.request(
      EvaluationReceiptSchema,
      "POST",
      `/courses/${courseId}/evaluation`,
      { answers }
    );
  }
}
