// Thin fetch client over the backend JSON API. The fetch function is
// injectable so tests can run without a server or a DOM.

import type {
  AskResponse,
  ChatMessageResponse,
  FosDetail,
  PredefinedQuestion,
  PubDetail,
  SearchResponse,
  SessionDetail,
  SessionSummary,
  SubgraphResponse,
} from "./types.js";
import type { FilterState } from "./filters.js";
import { searchQueryString } from "./filters.js";

export class ApiError extends Error {
  constructor(public status: number, message: string) {
    super(message);
  }
}

type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export class ApiClient {
  constructor(
    private base: string = "",
    private fetchFn: FetchLike = (input, init) => fetch(input, init),
  ) {}

  private async get<T>(path: string, signal?: AbortSignal): Promise<T> {
    const resp = await this.fetchFn(this.base + path, { signal });
    return this.unwrap<T>(resp);
  }

  private async post<T>(path: string, body: unknown, signal?: AbortSignal): Promise<T> {
    const resp = await this.fetchFn(this.base + path, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(body),
      signal,
    });
    return this.unwrap<T>(resp);
  }

  private async unwrap<T>(resp: Response): Promise<T> {
    if (!resp.ok) {
      let detail = resp.statusText;
      try {
        const body = (await resp.json()) as { error?: string };
        if (body.error) detail = body.error;
      } catch {
        // non-JSON error body; keep the status text
      }
      throw new ApiError(resp.status, detail);
    }
    return (await resp.json()) as T;
  }

  search(filters: FilterState, signal?: AbortSignal): Promise<SearchResponse> {
    return this.get(`/search?${searchQueryString(filters)}`, signal);
  }

  fosDetail(id: string, signal?: AbortSignal): Promise<FosDetail> {
    return this.get(`/fos/${encodeURIComponent(id)}`, signal);
  }

  subgraph(id: string, depth = 1, signal?: AbortSignal): Promise<SubgraphResponse> {
    return this.get(`/fos/${encodeURIComponent(id)}/subgraph?depth=${depth}`, signal);
  }

  publication(id: string, signal?: AbortSignal): Promise<PubDetail> {
    return this.get(`/publication/${encodeURIComponent(id)}`, signal);
  }

  ask(
    pubId: string,
    body: { question?: string; predefined_id?: number },
    signal?: AbortSignal,
  ): Promise<AskResponse> {
    return this.post(`/publication/${encodeURIComponent(pubId)}/ask`, body, signal);
  }

  predefinedQuestions(signal?: AbortSignal): Promise<{ questions: PredefinedQuestion[] }> {
    return this.get("/chat/predefined", signal);
  }

  createSession(): Promise<{ session_id: string; created_at: string }> {
    return this.post("/chat/sessions", {});
  }

  listSessions(signal?: AbortSignal): Promise<{ sessions: SessionSummary[] }> {
    return this.get("/chat/sessions", signal);
  }

  sessionDetail(id: string, signal?: AbortSignal): Promise<SessionDetail> {
    return this.get(`/chat/sessions/${encodeURIComponent(id)}`, signal);
  }

  postMessage(sessionId: string, text: string): Promise<ChatMessageResponse> {
    return this.post(`/chat/sessions/${encodeURIComponent(sessionId)}/messages`, { text });
  }
}
