import { HitJson, SearchResponse, SnippetJson } from "./types";

const encoder = new TextEncoder();
const decoder = new TextDecoder();

export function escapeHtml(s: string): string {
  return s
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

/**
 * Render snippet text with highlight spans wrapped in the red-highlight
 * style class. Highlight offsets are byte offsets into the UTF-8 text,
 * so slicing happens on the encoded bytes.
 */
export function renderSnippet(snippet: SnippetJson): string {
  const bytes = encoder.encode(snippet.text);
  const parts: string[] = [];
  let pos = 0;
  for (const [start, end] of snippet.highlights) {
    parts.push(escapeHtml(decoder.decode(bytes.subarray(pos, start))));
    const term = escapeHtml(decoder.decode(bytes.subarray(start, end)));
    parts.push(`<mark class="hl-red">${term}</mark>`);
    pos = end;
  }
  parts.push(escapeHtml(decoder.decode(bytes.subarray(pos))));
  return `<span class="snippet">${parts.join("")}</span>`;
}

function renderLocalHit(hit: HitJson): string {
  const date = hit.month > 0 ? `${hit.year}-${String(hit.month).padStart(2, "0")}` : `${hit.year}`;
  const heading = hit.article_id
    ? `<a href="${escapeHtml(hit.url)}">${escapeHtml(hit.article_id)}</a>`
    : "<em>unattached page</em>";
  const pages = hit.pages
    .map(
      (p) =>
        `<li class="page"><a href="${escapeHtml(p.url)}">p. ${p.page_number}</a> ` +
        renderSnippet(p.snippet) +
        `</li>`,
    )
    .join("");
  return (
    `<article class="hit local" data-year="${hit.year}">` +
    `<h3>${heading}</h3>` +
    `<p class="meta">${escapeHtml(hit.journal)}, ${date}</p>` +
    `<ul class="pages">${pages}</ul></article>`
  );
}

function renderExternalHit(hit: HitJson): string {
  const year = hit.year > 0 ? String(hit.year) : "year unknown";
  return (
    `<article class="hit external" data-year="${hit.year}">` +
    `<h3><a href="${escapeHtml(hit.url)}">${escapeHtml(hit.title ?? hit.url)}</a></h3>` +
    `<p class="meta">${escapeHtml(hit.journal)}, ${year} — via ${escapeHtml(hit.source ?? "")}</p>` +
    (hit.snippet_text ? `<p class="snippet">${escapeHtml(hit.snippet_text)}</p>` : "") +
    `</article>`
  );
}

export function renderHit(hit: HitJson): string {
  return hit.source ? renderExternalHit(hit) : renderLocalHit(hit);
}

export function renderConnectors(connectors: Record<string, string>): string {
  const items = Object.entries(connectors)
    .map(([name, state]) => `<li class="connector ${state}">${escapeHtml(name)}: ${state}</li>`)
    .join("");
  return `<ul class="connectors">${items}</ul>`;
}

/** Render a full response; hit order is exactly the API's order. */
export function renderResults(resp: SearchResponse): string {
  const status = resp.complete
    ? `<p class="status complete">${resp.total_count} result(s)</p>`
    : `<p class="status partial">searching… ${resp.total_count} so far</p>`;
  return (
    status +
    renderConnectors(resp.connectors) +
    `<div class="hits">${resp.hits.map(renderHit).join("")}</div>`
  );
}
