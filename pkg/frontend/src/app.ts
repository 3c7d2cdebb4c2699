// Single-page app: hash routing over the search, field, publication,
// and chat views. All data comes from the JSON API; in-flight requests
// are aborted on route changes.

import { ApiClient, ApiError } from "./api.js";
import {
  FilterState,
  filtersFromParams,
  filtersToParams,
} from "./filters.js";
import { GraphViewState, layerLayout, traceToJsonl } from "./graphstate.js";
import { parseHash } from "./router.js";
import {
  escapeHtml,
  fosLink,
  renderAskResult,
  renderChatMessage,
  renderError,
  renderFacets,
  renderHistorySidebar,
  renderResults,
} from "./render.js";
import type { FosDetail, NavigationTrace, PubDetail } from "./types.js";

const api = new ApiClient("");
let inflight: AbortController | null = null;

function app(): HTMLElement {
  return document.getElementById("app")!;
}

function newSignal(): AbortSignal {
  if (inflight) inflight.abort();
  inflight = new AbortController();
  return inflight.signal;
}

async function route(): Promise<void> {
  const r = parseHash(location.hash);
  try {
    if (r.view === "search") await searchPage(filtersFromParams(r.params));
    else if (r.view === "fos") await fosPage(r.id!);
    else if (r.view === "publication") await publicationPage(r.id!);
    else await chatPage(r.id ?? null);
  } catch (err) {
    if ((err as Error).name === "AbortError") return;
    const message = err instanceof ApiError ? `${err.status}: ${err.message}` : String(err);
    app().insertAdjacentHTML("afterbegin", renderError(message));
  }
}

// ---------------------------------------------------------------------------
// search view
// ---------------------------------------------------------------------------

function setSearchHash(filters: FilterState): void {
  location.hash = `#/search?${filtersToParams(filters).toString()}`;
}

async function searchPage(filters: FilterState): Promise<void> {
  const signal = newSignal();
  app().innerHTML = `
<header class="topbar">
  <form id="search-form">
    <input id="q" type="search" placeholder="Search publications" value="${escapeHtml(
      filters.q,
    )}" />
    <button type="submit">Search</button>
    <a href="#/chat" class="nav">Conversational search</a>
  </form>
</header>
<div class="layout">
  <aside class="filters">
    <h4>Filters</h4>
    <label><input id="f-survey" type="checkbox" ${
      filters.survey ? "checked" : ""
    }/> surveys only</label>
    <label>from <input id="f-from" type="number" value="${filters.yearFrom ?? ""}" /></label>
    <label>to <input id="f-to" type="number" value="${filters.yearTo ?? ""}" /></label>
    <label>min citations <input id="f-cite" type="number" value="${
      filters.minCitations ?? ""
    }" /></label>
    <button id="f-apply">Apply</button>
  </aside>
  <main id="results"></main>
  <aside id="facets"></aside>
</div>`;

  document.getElementById("search-form")!.addEventListener("submit", (ev) => {
    ev.preventDefault();
    const q = (document.getElementById("q") as HTMLInputElement).value.trim();
    setSearchHash({ ...filters, q, page: 1 });
  });
  document.getElementById("f-apply")!.addEventListener("click", () => {
    const intOf = (id: string) => {
      const raw = (document.getElementById(id) as HTMLInputElement).value;
      return raw === "" ? undefined : Number.parseInt(raw, 10);
    };
    setSearchHash({
      ...filters,
      survey: (document.getElementById("f-survey") as HTMLInputElement).checked,
      yearFrom: intOf("f-from"),
      yearTo: intOf("f-to"),
      minCitations: intOf("f-cite"),
      page: 1,
    });
  });

  if (!filters.q) {
    document.getElementById("results")!.innerHTML =
      `<p class="empty">Type a query to search the corpus.</p>`;
    return;
  }
  const resp = await api.search(filters, signal);
  const pages = Math.max(1, Math.ceil(resp.total / resp.page_size));
  const pager = `<nav class="pager">
    <button id="prev" ${resp.page <= 1 ? "disabled" : ""}>&laquo;</button>
    <span>page ${resp.page} / ${pages} (${resp.total} results)</span>
    <button id="next" ${resp.page >= pages ? "disabled" : ""}>&raquo;</button>
  </nav>`;
  document.getElementById("results")!.innerHTML = renderResults(resp.results) + pager;
  document.getElementById("facets")!.innerHTML = renderFacets(resp.facets);
  document.getElementById("prev")?.addEventListener("click", () =>
    setSearchHash({ ...filters, page: filters.page - 1 }),
  );
  document.getElementById("next")?.addEventListener("click", () =>
    setSearchHash({ ...filters, page: filters.page + 1 }),
  );
}

// ---------------------------------------------------------------------------
// field view with the expandable hierarchy graph
// ---------------------------------------------------------------------------

const traces: NavigationTrace[] = [];

async function fosPage(fosId: string): Promise<void> {
  const signal = newSignal();
  const detail: FosDetail = await api.fosDetail(fosId, signal);
  const state = new GraphViewState(fosId);
  state.absorb(await api.subgraph(fosId, 1, signal));

  app().innerHTML = `
<header class="topbar"><a href="#/search" class="nav">&laquo; search</a>
  <h2>${escapeHtml(detail.fos.name)}</h2></header>
<div class="layout">
  <main class="fos-main">
    <p class="description">${escapeHtml(detail.fos.description ?? "")}</p>
    <section id="graph" class="graph"></section>
    <p><button id="export-trace">Export navigation trace</button></p>
    <h3>Publications (${detail.total_publications})</h3>
    <div id="fos-pubs"></div>
  </main>
  <aside id="facets"></aside>
</div>`;
  document.getElementById("fos-pubs")!.innerHTML = renderResults(detail.publications);
  document.getElementById("facets")!.innerHTML = renderFacets(detail.facets);
  drawGraph(state, fosId);

  document.getElementById("export-trace")!.addEventListener("click", () => {
    traces.push(state.trace(detail.ideal_steps ?? 1));
    const blob = new Blob([traceToJsonl(traces)], { type: "application/jsonl" });
    const link = document.createElement("a");
    link.href = URL.createObjectURL(blob);
    link.download = "traces.jsonl";
    link.click();
    URL.revokeObjectURL(link.href);
  });
}

function drawGraph(state: GraphViewState, rootId: string): void {
  const rows = layerLayout(state, rootId);
  const width = 760;
  const rowH = 90;
  const height = Math.max(rows.length * rowH, rowH);
  const pos = new Map<string, { x: number; y: number }>();
  rows.forEach((row, i) => {
    row.forEach((id, j) => {
      pos.set(id, {
        x: ((j + 1) * width) / (row.length + 1),
        y: i * rowH + rowH / 2,
      });
    });
  });
  const edges = state.edges
    .filter((e) => pos.has(e.child) && pos.has(e.parent))
    .map((e) => {
      const a = pos.get(e.parent)!;
      const b = pos.get(e.child)!;
      return `<line x1="${a.x}" y1="${a.y}" x2="${b.x}" y2="${b.y}" class="edge" />`;
    })
    .join("");
  const nodes = [...pos.entries()]
    .map(([id, p]) => {
      const node = state.nodes.get(id)!;
      const classes = ["node"];
      if (id === rootId) classes.push("root");
      if (node.tier === "top_level") classes.push("top");
      if (state.isLeaf(id)) classes.push("leaf");
      const label = escapeHtml(node.name);
      return `<g class="${classes.join(" ")}" data-id="${escapeHtml(id)}"
  transform="translate(${p.x},${p.y})">
  <circle r="14"></circle>
  <text y="28" text-anchor="middle">${label}</text>
  ${state.isLeaf(id) ? `<text y="4" text-anchor="middle" class="leafmark">&#9632;</text>` : ""}
</g>`;
    })
    .join("");
  const graph = document.getElementById("graph")!;
  graph.innerHTML = `<svg viewBox="0 0 ${width} ${height}" width="100%" height="${height}">
  ${edges}${nodes}</svg>`;
  graph.querySelectorAll<SVGGElement>("g.node").forEach((el) => {
    el.addEventListener("click", async () => {
      const id = el.dataset.id!;
      const payload = await api.subgraph(id, 1);
      state.expand(id, payload);
      drawGraph(state, rootId);
    });
  });
}

// ---------------------------------------------------------------------------
// publication view with the ask popup
// ---------------------------------------------------------------------------

async function publicationPage(pubId: string): Promise<void> {
  const signal = newSignal();
  const pub: PubDetail = await api.publication(pubId, signal);
  const chips = pub.fos_ids
    .map((id) => `<a class="chip" href="${fosLink(id)}">${escapeHtml(id)}</a>`)
    .join(" ");
  app().innerHTML = `
<header class="topbar"><a href="#/search" class="nav">&laquo; search</a></header>
<main class="pub">
  <h2>${escapeHtml(pub.title)}</h2>
  <p class="meta">${pub.year} &middot; ${escapeHtml(pub.venue)} &middot; ${
    pub.citation_count
  } citations ${pub.is_survey ? '<span class="badge survey">survey</span>' : ""}</p>
  <p class="authors">${pub.authors.map(escapeHtml).join(", ")}</p>
  <p class="chips">${chips}</p>
  <p class="abstract">${escapeHtml(pub.abstract)}</p>
  <button id="ask-open" ${pub.has_fulltext ? "" : "disabled"}>Ask this paper</button>
  <div id="ask-popup" class="popup hidden">
    <div class="popup-body">
      <h3>Ask this paper</h3>
      <div id="ask-predefined"></div>
      <form id="ask-form">
        <input id="ask-q" type="text" placeholder="Your own question" />
        <button type="submit">Ask</button>
        <button type="button" id="ask-close">Close</button>
      </form>
      <div id="ask-result"></div>
    </div>
  </div>
</main>`;

  const popup = document.getElementById("ask-popup")!;
  document.getElementById("ask-open")!.addEventListener("click", async () => {
    popup.classList.remove("hidden");
    const { questions } = await api.predefinedQuestions();
    document.getElementById("ask-predefined")!.innerHTML = questions
      .map(
        (q) =>
          `<button class="predefined chip" data-id="${q.id}">${escapeHtml(q.text)}</button>`,
      )
      .join(" ");
    popup.querySelectorAll<HTMLButtonElement>(".predefined").forEach((btn) => {
      btn.addEventListener("click", () =>
        ask(pubId, { predefined_id: Number(btn.dataset.id) }),
      );
    });
  });
  document.getElementById("ask-close")!.addEventListener("click", () => {
    popup.classList.add("hidden");
  });
  document.getElementById("ask-form")!.addEventListener("submit", (ev) => {
    ev.preventDefault();
    const q = (document.getElementById("ask-q") as HTMLInputElement).value.trim();
    if (q) void ask(pubId, { question: q });
  });
}

async function ask(
  pubId: string,
  body: { question?: string; predefined_id?: number },
): Promise<void> {
  const target = document.getElementById("ask-result")!;
  target.innerHTML = `<p class="empty">Thinking&hellip;</p>`;
  try {
    const result = await api.ask(pubId, body);
    target.innerHTML = renderAskResult(result);
    target.querySelectorAll<HTMLButtonElement>(".followup").forEach((btn) => {
      btn.addEventListener("click", () =>
        ask(pubId, { question: btn.dataset.question! }),
      );
    });
  } catch (err) {
    const message = err instanceof ApiError ? `${err.status}: ${err.message}` : String(err);
    target.innerHTML = renderError(message);
  }
}

// ---------------------------------------------------------------------------
// conversational search
// ---------------------------------------------------------------------------

async function chatPage(sessionId: string | null): Promise<void> {
  const signal = newSignal();
  const { sessions } = await api.listSessions(signal);
  app().innerHTML = `
<header class="topbar"><a href="#/search" class="nav">&laquo; search</a>
  <h2>Conversational search</h2>
  <button id="new-chat">New chat</button></header>
<div class="layout">
  <aside id="history"></aside>
  <main class="chat">
    <div id="messages"></div>
    <form id="chat-form">
      <input id="chat-input" type="text" placeholder="Ask about the literature" />
      <button type="submit">Send</button>
    </form>
  </main>
</div>`;
  document.getElementById("history")!.innerHTML = renderHistorySidebar(
    sessions,
    sessionId,
  );
  document.getElementById("new-chat")!.addEventListener("click", async () => {
    const created = await api.createSession();
    location.hash = `#/chat/${encodeURIComponent(created.session_id)}`;
  });

  const messages = document.getElementById("messages")!;
  if (sessionId) {
    const detail = await api.sessionDetail(sessionId, signal);
    messages.innerHTML = detail.messages
      .map((m) => renderChatMessage(m.role, m.content, m.citations))
      .join("");
  } else {
    messages.innerHTML = `<p class="empty">Start a new chat or pick one from the history.</p>`;
  }

  document.getElementById("chat-form")!.addEventListener("submit", async (ev) => {
    ev.preventDefault();
    const input = document.getElementById("chat-input") as HTMLInputElement;
    const text = input.value.trim();
    if (!text) return;
    let sid = sessionId;
    if (!sid) {
      sid = (await api.createSession()).session_id;
      history.replaceState(null, "", `#/chat/${encodeURIComponent(sid)}`);
      sessionId = sid;
    }
    messages.insertAdjacentHTML("beforeend", renderChatMessage("user", text, {}));
    input.value = "";
    try {
      const resp = await api.postMessage(sid, text);
      messages.insertAdjacentHTML(
        "beforeend",
        renderChatMessage("assistant", resp.answer, resp.citations),
      );
    } catch (err) {
      const message = err instanceof ApiError ? `${err.status}: ${err.message}` : String(err);
      messages.insertAdjacentHTML("beforeend", renderError(message));
    }
    messages.scrollTop = messages.scrollHeight;
  });
}

window.addEventListener("hashchange", () => void route());
window.addEventListener("DOMContentLoaded", () => void route());
