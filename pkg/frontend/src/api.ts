// Thin client over the annotation service HTTP API.

import {
  AnnotationBody,
  ExportRecord,
  Guidelines,
  ProgressEntry,
  QuestionCard,
  QuestionRow,
} from "./types.js";

export class ApiError extends Error {
  constructor(
    message: string,
    public readonly status: number,
  ) {
    super(message);
  }
}

async function request<T>(url: string, init?: RequestInit): Promise<T> {
  let response: Response;
  try {
    response = await fetch(url, init);
  } catch (err) {
    throw new ApiError(`network failure: ${String(err)}`, 0);
  }
  if (!response.ok) {
    let detail = response.statusText;
    try {
      const body = (await response.json()) as { detail?: string };
      if (body.detail) detail = body.detail;
    } catch {
      // non-JSON error body; keep the status text
    }
    throw new ApiError(detail, response.status);
  }
  return (await response.json()) as T;
}

export class AnnotationApi {
  constructor(private readonly baseUrl: string) {}

  private url(path: string): string {
    return `${this.baseUrl}${path}`;
  }

  async next(annotator: string): Promise<QuestionCard | { done: true }> {
    return request(this.url(`/api/next?annotator=${encodeURIComponent(annotator)}`));
  }

  async submit(body: AnnotationBody): Promise<{ revision: number }> {
    return request(this.url("/api/annotations"), {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(body),
    });
  }

  async exportRecords(evalId?: string): Promise<ExportRecord[]> {
    const suffix = evalId ? `?eval=${encodeURIComponent(evalId)}` : "";
    return request(this.url(`/api/export${suffix}`));
  }

  async progress(): Promise<Record<string, ProgressEntry>> {
    return request(this.url("/api/progress"));
  }

  async questions(): Promise<QuestionRow[]> {
    return request(this.url("/api/questions"));
  }

  async guidelines(): Promise<Guidelines> {
    return request(this.url("/api/guidelines"));
  }
}

export function isDone(card: QuestionCard | { done: true }): card is { done: true } {
  return (card as { done?: boolean }).done === true;
}
