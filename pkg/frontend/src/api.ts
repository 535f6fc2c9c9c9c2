/** Thin client over the read-only HTTP API, with latest-wins cancellation. */

import { Criteria, toParams } from "./criteria.js";

export interface RightsInfo {
  use: string;
  attribution_required: boolean;
  share_alike_required: boolean;
  needs_review: boolean;
}

export interface DatasetItem {
  id: string;
  name: string;
  collection: string;
  languages: string[];
  task_categories: string[];
  rights: RightsInfo;
  [key: string]: unknown;
}

export interface DatasetPage {
  version: string;
  total: number;
  items: DatasetItem[];
}

export interface SummaryPayload {
  version: string;
  total: number;
  use_categories: Array<{ category: string; count: number; percentage: number }>;
  licenses: Array<{ key: string; count: number; share: number }>;
  languages: Record<string, number>;
  tasks: Record<string, number>;
}

export interface DatasetDetail {
  version: string;
  record: Record<string, unknown>;
  rights: RightsInfo;
  applied_licenses: Array<{
    raw_name: string;
    canonical_id: string | null;
    url: string | null;
  }>;
  conflicts: Array<{ kind: string; first_id: string; second_id: string }>;
  excluded_because: Array<{ clause: string; detail: string }>;
}

export interface BreakdownPayload {
  version: string;
  axis: string;
  buckets: Record<
    string,
    { total: number; by_category: Record<string, number>; nc_ao_share: number }
  >;
}

export class ApiError extends Error {
  constructor(
    public readonly status: number,
    detail: string,
  ) {
    super(detail);
  }
}

export class ApiClient {
  private controllers = new Map<string, AbortController>();

  constructor(private readonly baseUrl: string = "") {}

  /** GET a JSON endpoint; a new call with the same tag aborts the previous one. */
  private async get<T>(
    path: string,
    params: Record<string, string>,
    tag?: string,
  ): Promise<T> {
    let signal: AbortSignal | undefined;
    if (tag) {
      this.controllers.get(tag)?.abort();
      const controller = new AbortController();
      this.controllers.set(tag, controller);
      signal = controller.signal;
    }
    const query = new URLSearchParams(params).toString();
    const url = `${this.baseUrl}${path}${query ? "?" + query : ""}`;
    const response = await fetch(url, { signal });
    if (!response.ok) {
      let detail = response.statusText;
      try {
        detail = ((await response.json()) as { detail?: string }).detail ?? detail;
      } catch {
        // keep the status text
      }
      throw new ApiError(response.status, detail);
    }
    return (await response.json()) as T;
  }

  listDatasets(
    criteria: Criteria,
    page: number,
    pageSize: number,
  ): Promise<DatasetPage> {
    return this.get(
      "/v1/datasets",
      { ...toParams(criteria), page: String(page), page_size: String(pageSize) },
      "datasets",
    );
  }

  summary(criteria: Criteria): Promise<SummaryPayload> {
    return this.get("/v1/summary", toParams(criteria), "summary");
  }

  datasetDetail(id: string, criteria: Criteria): Promise<DatasetDetail> {
    return this.get(`/v1/datasets/${id}`, toParams(criteria), "detail");
  }

  breakdown(axis: string): Promise<BreakdownPayload> {
    return this.get("/v1/analytics/breakdown", { axis }, `breakdown:${axis}`);
  }

  representation(): Promise<{ version: string; scores: Record<string, number> }> {
    return this.get("/v1/analytics/representation", {});
  }

  version(): Promise<{ version: string; records: number }> {
    return this.get("/v1/meta/version", {});
  }

  async exportCard(
    criteria: Criteria,
    format: "structured" | "markdown",
  ): Promise<{ text: string; version: string }> {
    const params = new URLSearchParams({ ...toParams(criteria), format });
    const response = await fetch(`${this.baseUrl}/v1/card?${params.toString()}`);
    if (!response.ok) {
      throw new ApiError(response.status, response.statusText);
    }
    const { version } = await this.version();
    return { text: await response.text(), version };
  }
}
