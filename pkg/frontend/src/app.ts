import { search, streamSearch, ApiError } from "./api";
import { toSearchParams, wantsStream } from "./params";
import { renderResults } from "./render";
import { FormState, SortName } from "./types";

const API_BASE = "";

let inflight: AbortController | null = null;

function readFormState(form: HTMLFormElement, advanced: boolean): FormState {
  const data = new FormData(form);
  const state: FormState = {
    queryText: String(data.get("q") ?? "").trim(),
    advanced: { sort: (data.get("sort") as SortName) || "relevance" },
    selectedConnectors: new Set(
      data.getAll("connector").map(String).filter(Boolean),
    ),
  };
  if (advanced) {
    const yf = data.get("year_from");
    const yt = data.get("year_to");
    if (yf) state.advanced.yearFrom = Number(yf);
    if (yt) state.advanced.yearTo = Number(yt);
    const journal = data.get("journal");
    if (journal) state.advanced.journal = String(journal);
  }
  return state;
}

async function submit(state: FormState): Promise<void> {
  const results = document.getElementById("results")!;
  const errorBox = document.getElementById("form-error")!;
  errorBox.textContent = "";
  if (!state.queryText) {
    errorBox.textContent = "enter a query";
    return;
  }
  // a new submission cancels the previous stream
  inflight?.abort();
  const controller = new AbortController();
  inflight = controller;
  const params = toSearchParams(state);
  try {
    if (wantsStream(state)) {
      for await (const snapshot of streamSearch(API_BASE, params, controller.signal)) {
        if (controller.signal.aborted) return;
        results.innerHTML = renderResults(snapshot);
      }
    } else {
      const resp = await search(API_BASE, params);
      if (controller.signal.aborted) return;
      results.innerHTML = renderResults(resp);
    }
  } catch (err) {
    if (controller.signal.aborted) return;
    if (err instanceof ApiError) {
      errorBox.textContent = `${err.code}: ${err.message}`;
    } else {
      results.insertAdjacentHTML(
        "afterbegin",
        `<div class="banner">partial results — connection lost ` +
          `<button id="retry">retry</button></div>`,
      );
      document.getElementById("retry")?.addEventListener("click", () => submit(state));
    }
  }
}

export function wireForms(): void {
  for (const [id, advanced] of [
    ["basic-form", false],
    ["advanced-form", true],
  ] as const) {
    const form = document.getElementById(id) as HTMLFormElement | null;
    form?.addEventListener("submit", (ev) => {
      ev.preventDefault();
      void submit(readFormState(form, advanced));
    });
  }
}

if (typeof document !== "undefined" && document.readyState !== "loading") {
  wireForms();
} else if (typeof document !== "undefined") {
  document.addEventListener("DOMContentLoaded", wireForms);
}
