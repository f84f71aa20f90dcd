/**
 * Typed client for the exam HTTP API. All requests carry the bearer token
 * once logged in; errors surface as ApiFailure with the server's stable
 * error code so views can branch on INVALID_STATE, DEADLINE_EXCEEDED, etc.
 */

export interface LoginResponse {
  token: string;
  username: string;
  role: "admin" | "candidate";
  expires_at: number;
}

export interface ExamInfo {
  subject_name: string;
  n_questions: number;
  duration_seconds: number;
  per_question_budget: number;
  schedule_policy: string;
}

export interface FormQuestion {
  number: number;
  id: string;
  category: string;
  text: string;
  choices: string[];
}

export interface StartedExam {
  server_time: number;
  deadline: number;
  duration_seconds: number;
  per_question_budget: number;
  questions: FormQuestion[];
}

export interface ResumedExam {
  deadline: number;
  answers: Record<string, number>;
  questions: FormQuestion[];
}

export interface ScoreReport {
  per_category_correct: Record<string, number>;
  per_category_score: Record<string, number>;
  final_score: number;
  elapsed_seconds: number;
  state?: string;
}

export interface FeedbackItem {
  number: number;
  question_id: string;
  text: string;
  choices: string[];
  chosen_index: number | null;
  correct_index: number;
  verdict: "correct" | "wrong" | "unanswered";
}

export interface Feedback {
  report: ScoreReport;
  state: string;
  items: FeedbackItem[];
}

export interface StoredResult {
  kind: string;
  first_name: string;
  last_name: string;
  per_category_score: Record<string, number>;
  final_score: number;
  elapsed_seconds: number;
  submitted_at: number;
}

export class ApiFailure extends Error {
  constructor(
    public status: number,
    public code: string,
    message: string,
    public defects?: string[],
  ) {
    super(message);
  }
}

export class ApiClient {
  private token: string | null = null;

  constructor(private baseUrl: string = "") {}

  setToken(token: string | null): void {
    this.token = token;
  }

  private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
    const headers: Record<string, string> = {};
    if (body !== undefined) {
      headers["Content-Type"] = "application/json";
    }
    if (this.token) {
      headers["Authorization"] = `Bearer ${this.token}`;
    }
    const response = await fetch(this.baseUrl + path, {
      method,
      headers,
      body: body === undefined ? undefined : JSON.stringify(body),
    });
    const text = await response.text();
    const payload = text ? JSON.parse(text) : {};
    if (!response.ok) {
      throw new ApiFailure(
        response.status,
        payload.code ?? "UNKNOWN",
        payload.message ?? response.statusText,
        payload.defects,
      );
    }
    return payload as T;
  }

  login(username: string, password: string): Promise<LoginResponse> {
    return this.request("POST", "/api/login", { username, password });
  }

  async serverTimeMs(): Promise<{ serverTimeMs: number }> {
    const body = await this.request<{ server_time: number }>("GET", "/api/time");
    return { serverTimeMs: body.server_time * 1000 };
  }

  examInfo(): Promise<ExamInfo> {
    return this.request("GET", "/api/exam/info");
  }

  startExam(): Promise<StartedExam> {
    return this.request("POST", "/api/exam/start");
  }

  resumeExam(): Promise<ResumedExam> {
    return this.request("GET", "/api/exam/questions");
  }

  answer(questionId: string, chosenIndex: number): Promise<void> {
    return this.request("POST", "/api/exam/answer", {
      question_id: questionId,
      chosen_index: chosenIndex,
    });
  }

  submit(): Promise<ScoreReport> {
    return this.request("POST", "/api/exam/submit");
  }

  feedback(): Promise<Feedback> {
    return this.request("GET", "/api/exam/feedback");
  }

  addUser(firstName: string, lastName: string): Promise<{ username: string; password: string }> {
    return this.request("POST", "/api/admin/users", {
      first_name: firstName,
      last_name: lastName,
    });
  }

  removeUser(username: string): Promise<{ removed: string }> {
    return this.request("DELETE", `/api/admin/users/${encodeURIComponent(username)}`);
  }

  addQuestion(q: {
    id: string;
    category: string;
    text: string;
    choices: string[];
    correct_index: number;
  }): Promise<{ stored: string }> {
    return this.request("POST", "/api/admin/questions", q);
  }

  async results(): Promise<StoredResult[]> {
    const body = await this.request<{ results: StoredResult[] }>(
      "GET",
      "/api/admin/results",
    );
    return body.results;
  }

  resultsCsvUrl(): string {
    return this.baseUrl + "/api/admin/results.csv";
  }
}
