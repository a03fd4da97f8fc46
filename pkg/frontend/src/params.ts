import { FormState } from "./types";

/** Serialize form state to /search query parameters. */
export function toSearchParams(state: FormState): URLSearchParams {
  const params = new URLSearchParams();
  params.set("q", state.queryText);
  params.set("sort", state.advanced.sort);
  if (state.advanced.yearFrom !== undefined) {
    params.set("year_from", String(state.advanced.yearFrom));
  }
  if (state.advanced.yearTo !== undefined) {
    params.set("year_to", String(state.advanced.yearTo));
  }
  if (state.advanced.journal) {
    params.append("journal", state.advanced.journal);
  }
  const connectors = [...state.selectedConnectors].sort();
  if (connectors.length > 0) {
    params.set("connectors", connectors.join(","));
  }
  return params;
}

/** True when the submission should use the streaming endpoint. */
export function wantsStream(state: FormState): boolean {
  return state.selectedConnectors.size > 0;
}
