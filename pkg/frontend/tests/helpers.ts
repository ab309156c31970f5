import { readFileSync } from "node:fs";
import { join } from "node:path";

import type { FetchLike, SchemaDoc } from "../src/api.js";

/** The canonical 17-class / 61-feature schema shipped with the service. */
export function canonicalSchema(): SchemaDoc {
  // vitest runs with cwd at frontend/; the schema lives in the Python package
  const path = join(
    process.cwd(),
    "..",
    "src",
    "avsafety",
    "data",
    "occurrence_schema.json",
  );
  return JSON.parse(readFileSync(path, "utf-8")) as SchemaDoc;
}

export function jsonResponse(body: unknown, status = 200): Response {
  return new Response(JSON.stringify(body), {
    status,
    headers: { "Content-Type": "application/json" },
  });
}

export interface RouteTable {
  [pathPrefix: string]: (init?: RequestInit) => Response | Promise<Response>;
}

/** Tiny fetch stub keyed by path prefix; records every call it serves. */
export function fakeFetch(routes: RouteTable) {
  const calls: { url: string; init?: RequestInit }[] = [];
  const impl: FetchLike = async (url, init) => {
    calls.push({ url, init });
    for (const [prefix, handler] of Object.entries(routes)) {
      if (url.includes(prefix)) return handler(init);
    }
    return jsonResponse({ code: "not_found", message: `no route for ${url}` }, 404);
  };
  return { impl, calls };
}

export const WORKED_EXAMPLE_SELECTION = [
  "landing_phase",
  "excursion",
  "weather",
  "flight_crew_actions",
  "aircraft_damage_minor_repair",
];
