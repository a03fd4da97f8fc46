// Shapes of the search service JSON API.

export interface SnippetJson {
  text: string;
  // byte offsets into the UTF-8 encoding of text
  highlights: [number, number][];
}

export interface PageJson {
  page_id: string;
  page_number: number;
  url: string;
  snippet: SnippetJson;
}

export interface HitJson {
  article_id: string;
  journal: string;
  year: number;
  month: number;
  url: string;
  pages: PageJson[];
  // present only on external (federated) hits
  title?: string;
  source?: string;
  snippet_text?: string;
}

export type ConnectorState = "pending" | "ok" | "timeout" | "failed";

export interface SearchResponse {
  query_echo: string;
  total_count: number;
  hits: HitJson[];
  connectors: Record<string, ConnectorState>;
  complete: boolean;
}

export type SortName = "relevance" | "oldest" | "newest";

export interface FormState {
  queryText: string;
  advanced: {
    yearFrom?: number;
    yearTo?: number;
    journal?: string;
    sort: SortName;
  };
  selectedConnectors: Set<string>;
}
