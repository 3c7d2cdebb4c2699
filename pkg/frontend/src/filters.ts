// Search filter state and its URL round-trip. The URL query string is
// the single source of truth for the search page: every widget mutates
// it, and reloading the page reproduces the identical API query.

export interface FilterState {
  q: string;
  fos: string[];
  venue: string[];
  yearFrom?: number;
  yearTo?: number;
  minCitations?: number;
  survey: boolean;
  page: number;
}

export function emptyFilters(): FilterState {
  return { q: "", fos: [], venue: [], survey: false, page: 1 };
}

/** Canonical URL params: defaults are omitted, list params repeat. */
export function filtersToParams(f: FilterState): URLSearchParams {
  const params = new URLSearchParams();
  if (f.q) params.set("q", f.q);
  for (const id of f.fos) params.append("fos", id);
  for (const id of f.venue) params.append("venue", id);
  if (f.yearFrom !== undefined) params.set("year_from", String(f.yearFrom));
  if (f.yearTo !== undefined) params.set("year_to", String(f.yearTo));
  if (f.minCitations !== undefined) params.set("min_citations", String(f.minCitations));
  if (f.survey) params.set("survey", "true");
  if (f.page !== 1) params.set("page", String(f.page));
  return params;
}

export function filtersFromParams(params: URLSearchParams): FilterState {
  const intOrUndef = (key: string): number | undefined => {
    const raw = params.get(key);
    if (raw === null || raw === "") return undefined;
    const n = Number.parseInt(raw, 10);
    return Number.isNaN(n) ? undefined : n;
  };
  return {
    q: params.get("q") ?? "",
    fos: params.getAll("fos"),
    venue: params.getAll("venue"),
    yearFrom: intOrUndef("year_from"),
    yearTo: intOrUndef("year_to"),
    minCitations: intOrUndef("min_citations"),
    survey: params.get("survey") === "true",
    page: intOrUndef("page") ?? 1,
  };
}

/** Query string for GET /search; same keys as the URL state. */
export function searchQueryString(f: FilterState): string {
  return filtersToParams(f).toString();
}
