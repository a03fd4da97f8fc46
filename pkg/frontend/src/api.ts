import { SearchResponse } from "./types";

export class ApiError extends Error {
  constructor(public status: number, public code: string, detail: string) {
    super(detail);
  }
}

async function throwApiError(resp: Response): Promise<never> {
  let code = "error";
  let detail = resp.statusText;
  try {
    const body = await resp.json();
    code = body.code ?? code;
    detail = body.detail ?? detail;
  } catch {
    // non-JSON error body; keep the status text
  }
  throw new ApiError(resp.status, code, detail);
}

/** One-shot search: blocks until the final merged result. */
export async function search(
  base: string,
  params: URLSearchParams,
  fetchFn: typeof fetch = fetch,
): Promise<SearchResponse> {
  const resp = await fetchFn(`${base}/search?${params}`);
  if (!resp.ok) await throwApiError(resp);
  return (await resp.json()) as SearchResponse;
}

/** Parse server-sent events from a streaming body into data payloads. */
export async function* readSSE(resp: Response): AsyncGenerator<string> {
  const reader = resp.body!.getReader();
  const decoder = new TextDecoder();
  let buf = "";
  for (;;) {
    const { done, value } = await reader.read();
    if (done) break;
    buf += decoder.decode(value, { stream: true });
    let idx;
    while ((idx = buf.indexOf("\n\n")) >= 0) {
      const frame = buf.slice(0, idx);
      buf = buf.slice(idx + 2);
      if (frame.startsWith("data: ")) yield frame.slice("data: ".length);
    }
  }
}

/**
 * Progressive search over /search/stream: yields one snapshot per
 * fan-out event, the last one flagged complete. Abort via the signal.
 */
export async function* streamSearch(
  base: string,
  params: URLSearchParams,
  signal?: AbortSignal,
  fetchFn: typeof fetch = fetch,
): AsyncGenerator<SearchResponse> {
  const resp = await fetchFn(`${base}/search/stream?${params}`, { signal });
  if (!resp.ok) await throwApiError(resp);
  for await (const data of readSSE(resp)) {
    yield JSON.parse(data) as SearchResponse;
  }
}
