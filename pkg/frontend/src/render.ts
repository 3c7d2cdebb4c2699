// Pure HTML builders. Everything here is a string -> string function so
// the invariants (citation links only from the citations map, escaped
// user content) are unit-testable without a DOM.

import type {
  AskResponse,
  Facets,
  PubSummary,
  SessionSummary,
} from "./types.js";

export function escapeHtml(text: string): string {
  return text
    .replaceAll("&", "&amp;")
    .replaceAll("<", "&lt;")
    .replaceAll(">", "&gt;")
    .replaceAll('"', "&quot;")
    .replaceAll("'", "&#39;");
}

export function pubLink(id: string): string {
  return `#/publication/${encodeURIComponent(id)}`;
}

export function fosLink(id: string): string {
  return `#/fos/${encodeURIComponent(id)}`;
}

export function renderResultCard(pub: PubSummary): string {
  const badge = pub.is_survey ? `<span class="badge survey">survey</span>` : "";
  const tldr = pub.tldr ? `<p class="tldr">${escapeHtml(pub.tldr)}</p>` : "";
  const chips = pub.fos_ids
    .map((id) => `<a class="chip" href="${fosLink(id)}">${escapeHtml(id)}</a>`)
    .join(" ");
  return `<article class="result" data-pub="${escapeHtml(pub.id)}">
  <h3><a href="${pubLink(pub.id)}">${escapeHtml(pub.title)}</a></h3>
  <p class="meta">${pub.year} &middot; ${escapeHtml(pub.venue)} &middot; ${
    pub.citation_count
  } citations ${badge}</p>
  ${tldr}
  <p class="chips">${chips}</p>
</article>`;
}

export function renderResults(results: PubSummary[]): string {
  if (results.length === 0) {
    return `<p class="empty">No results.</p>`;
  }
  return results.map(renderResultCard).join("\n");
}

export function renderYearHistogram(years: [number, number][]): string {
  if (years.length === 0) return "";
  const max = Math.max(...years.map(([, n]) => n));
  const bars = years
    .map(([year, n]) => {
      const h = Math.max(4, Math.round((n / max) * 100));
      return `<div class="bar" title="${year}: ${n}" data-year="${year}">
  <div class="fill" style="height:${h}%"></div><span>${year}</span>
</div>`;
    })
    .join("");
  return `<div class="histogram">${bars}</div>`;
}

export function renderFosChips(fos: [string, number][]): string {
  return fos
    .map(
      ([id, n]) =>
        `<a class="chip" href="${fosLink(id)}">${escapeHtml(id)} (${n})</a>`,
    )
    .join(" ");
}

export function renderAuthorPanel(authors: [string, number][]): string {
  if (authors.length === 0) return `<p class="empty">No authors.</p>`;
  const rows = authors
    .map(([name, n]) => `<li>${escapeHtml(name)} <span class="count">${n}</span></li>`)
    .join("");
  return `<ul class="authors">${rows}</ul>`;
}

export function renderFacets(facets: Facets): string {
  return `<div class="facets">
  <section class="facet-years"><h4>Publications per year</h4>${renderYearHistogram(
    facets.years,
  )}</section>
  <section class="facet-fos"><h4>Related fields</h4>${renderFosChips(facets.fos)}</section>
  <section class="facet-authors"><h4>Relevant authors</h4>${renderAuthorPanel(
    facets.authors,
  )}</section>
</div>`;
}

/** Replace [n] markers with links to the cited publication pages.
 * Markers without an entry in the citations map stay plain text, so a
 * rendered link can never point outside the answer's citation set. */
export function renderAnswerHtml(
  text: string,
  citations: Record<string, string>,
): string {
  const escaped = escapeHtml(text);
  return escaped.replace(/\[(\d+)\]/g, (whole, marker: string) => {
    const pubId = citations[marker];
    if (pubId === undefined) return whole;
    return `<a class="cite" href="${pubLink(pubId)}">[${marker}]</a>`;
  });
}

export function renderChatMessage(
  role: string,
  text: string,
  citations: Record<string, string>,
): string {
  const body =
    role === "assistant" ? renderAnswerHtml(text, citations) : escapeHtml(text);
  return `<div class="message ${escapeHtml(role)}"><p>${body}</p></div>`;
}

export function renderHistorySidebar(
  sessions: SessionSummary[],
  activeId: string | null,
): string {
  const items = sessions
    .map((s) => {
      const cls = s.session_id === activeId ? "active" : "";
      const label = s.title || "(empty chat)";
      return `<li class="${cls}"><a href="#/chat/${encodeURIComponent(
        s.session_id,
      )}">${escapeHtml(label)}</a></li>`;
    })
    .join("");
  return `<ul class="history">${items}</ul>`;
}

export function renderAskResult(result: AskResponse): string {
  const supports = result.supports
    .map(
      (s) =>
        `<li><span class="ref">[${escapeHtml(s.section)}, p. ${s.page}]</span> ${escapeHtml(
          s.statement,
        )}</li>`,
    )
    .join("");
  const followups = result.followups
    .map(
      (q) =>
        `<button class="followup chip" data-question="${escapeHtml(q)}">${escapeHtml(q)}</button>`,
    )
    .join(" ");
  return `<div class="ask-result">
  <div class="answer">${renderAnswerHtml(result.answer, result.citations)}</div>
  <h4>Supporting statements</h4>
  <ul class="supports">${supports}</ul>
  <h4>Follow-up questions</h4>
  <div class="followups">${followups}</div>
</div>`;
}

export function renderError(message: string): string {
  return `<div class="banner error">${escapeHtml(message)}</div>`;
}
