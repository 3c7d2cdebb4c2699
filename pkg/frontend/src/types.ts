// API response shapes (the JSON contract of the backend service).

export interface PubSummary {
  id: string;
  title: string;
  year: number;
  venue: string;
  authors: string[];
  citation_count: number;
  is_survey: boolean;
  tldr: string | null;
  fos_ids: string[];
  score?: number;
}

export interface PubDetail extends PubSummary {
  abstract: string;
  cited_ids: string[];
  has_fulltext: boolean;
}

export interface Facets {
  years: [number, number][];
  fos: [string, number][];
  authors: [string, number][];
}

export interface SearchResponse {
  query: string;
  page: number;
  page_size: number;
  total: number;
  results: PubSummary[];
  facets: Facets;
}

export interface FosSummary {
  id: string;
  name: string;
  synonyms: string[];
  description: string | null;
  tier: "top_level" | "extended";
}

export interface FosDetail {
  fos: FosSummary;
  parents: FosSummary[];
  children: FosSummary[];
  ideal_steps: number | null;
  total_publications: number;
  publications: PubSummary[];
  facets: Facets;
}

export interface SubgraphEdge {
  child: string;
  parent: string;
}

export interface SubgraphResponse {
  root: string;
  depth: number;
  nodes: FosSummary[];
  edges: SubgraphEdge[];
}

export interface AskResponse {
  answer: string;
  citations: Record<string, string>;
  supports: { section: string; page: number; statement: string }[];
  followups: string[];
}

export interface SessionSummary {
  session_id: string;
  created_at: string;
  updated_at: string;
  n_messages: number;
  title: string;
}

export interface SessionDetail {
  session_id: string;
  created_at: string;
  updated_at: string;
  messages: { role: string; content: string; citations: Record<string, string> }[];
  retrieved: string[];
}

export interface ChatMessageResponse {
  session_id: string;
  answer: string;
  citations: Record<string, string>;
  retrieved: string[];
  new_search: boolean;
}

export interface PredefinedQuestion {
  id: number;
  text: string;
}

// The shape `litgraph eval mape` consumes, one object per JSONL line.
export interface NavigationTrace {
  target: string;
  total_steps: number;
  ideal_steps: number;
}
