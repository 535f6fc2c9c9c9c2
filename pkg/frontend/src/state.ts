/** Explorer session state, kept in lock-step with the URL query string. */

import { Criteria, decodeQuery, emptyCriteria, encodeQuery } from "./criteria.js";
import { SummaryPayload } from "./api.js";

export interface ExplorerState {
  criteria: Criteria;
  page: number;
  selectedId: string | null;
  lastSummary: SummaryPayload | null;
}

export function initialState(): ExplorerState {
  return { criteria: emptyCriteria(), page: 1, selectedId: null, lastSummary: null };
}

/** Restore criteria from the current location; invalid params fall back to defaults. */
export function stateFromLocation(search: string): ExplorerState {
  const state = initialState();
  try {
    state.criteria = decodeQuery(search);
  } catch {
    state.criteria = emptyCriteria();
  }
  return state;
}

/** Reflect the criteria in the address bar without adding history entries. */
export function syncLocation(state: ExplorerState): void {
  const query = encodeQuery(state.criteria);
  const url = query ? `?${query}` : window.location.pathname;
  window.history.replaceState(null, "", url);
}
