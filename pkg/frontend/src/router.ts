// Hash-based route parsing, kept free of DOM access so it is testable.

export interface Route {
  view: "search" | "fos" | "publication" | "chat";
  id?: string;
  params: URLSearchParams;
}

export function parseHash(hash: string): Route {
  const raw = hash.replace(/^#\/?/, "");
  const [pathPart, queryPart] = raw.split("?", 2);
  const params = new URLSearchParams(queryPart ?? "");
  const segments = pathPart.split("/").filter((s) => s.length > 0);
  if (segments[0] === "fos" && segments[1]) {
    return { view: "fos", id: decodeURIComponent(segments[1]), params };
  }
  if (segments[0] === "publication" && segments[1]) {
    return { view: "publication", id: decodeURIComponent(segments[1]), params };
  }
  if (segments[0] === "chat") {
    const id = segments[1] ? decodeURIComponent(segments[1]) : undefined;
    return { view: "chat", id, params };
  }
  return { view: "search", params };
}
