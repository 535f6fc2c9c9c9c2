/** Explorer bootstrap: wires state, API client, views, and charts together. */

import { ApiClient, ApiError } from "./api.js";
import { barChart, categoryLegend, scoreGrid, stackedBars } from "./charts.js";
import { ExplorerState, stateFromLocation, syncLocation } from "./state.js";
import {
  errorBanner,
  renderDetail,
  renderFilterPanel,
  renderResultsTable,
  triggerDownload,
} from "./views.js";

const PAGE_SIZE = 50;
const BREAKDOWN_AXES = ["year", "language-family", "task-category", "source-domain"];

const api = new ApiClient("");
let state: ExplorerState = stateFromLocation(window.location.search);

function element(id: string): HTMLElement {
  const el = document.getElementById(id);
  if (!el) throw new Error(`missing #${id}`);
  return el;
}

function showError(message: string): void {
  const host = element("banners");
  host.replaceChildren(errorBanner(message));
  window.setTimeout(() => host.replaceChildren(), 6000);
}

async function refreshResults(): Promise<void> {
  try {
    const [page, summary] = await Promise.all([
      api.listDatasets(state.criteria, state.page, PAGE_SIZE),
      api.summary(state.criteria),
    ]);
    state.lastSummary = summary;
    element("count").textContent = `${page.total} datasets`;
    element("results").replaceChildren(
      renderResultsTable(page.items, (id) => void openDetail(id)),
    );
    element("pager").textContent =
      page.total > PAGE_SIZE
        ? `page ${state.page} of ${Math.ceil(page.total / PAGE_SIZE)}`
        : "";
    element("license-chart").replaceChildren(
      barChart(
        summary.licenses.slice(0, 12).map((entry) => ({
          label: entry.key,
          value: entry.count,
        })),
      ),
    );
    element("category-chart").replaceChildren(
      barChart(
        summary.use_categories.map((entry) => ({
          label: entry.category,
          value: entry.count,
        })),
      ),
    );
  } catch (error) {
    if ((error as Error).name === "AbortError") return;
    showError(
      error instanceof ApiError
        ? `API error ${error.status}: ${error.message}`
        : "API unreachable",
    );
  }
}

async function refreshBreakdown(axis: string): Promise<void> {
  try {
    const payload = await api.breakdown(axis);
    const data = Object.entries(payload.buckets).map(([bucket, counts]) => ({
      bucket,
      byCategory: counts.by_category,
    }));
    const host = element("breakdown-chart");
    host.replaceChildren(stackedBars(data), categoryLegend());
  } catch {
    showError("failed to load breakdown");
  }
}

async function refreshRepresentation(): Promise<void> {
  try {
    const { scores } = await api.representation();
    element("representation").replaceChildren(scoreGrid(scores));
  } catch {
    showError("failed to load representation scores");
  }
}

async function openDetail(id: string): Promise<void> {
  state.selectedId = id;
  try {
    const detail = await api.datasetDetail(id, state.criteria);
    element("detail").replaceChildren(renderDetail(detail));
  } catch (error) {
    if (error instanceof ApiError && error.status === 404) {
      element("detail").replaceChildren(errorBanner(`dataset not found: ${id}`));
    } else {
      showError("failed to load dataset detail");
    }
  }
}

function rebuildFilterPanel(): void {
  element("filters").replaceChildren(
    renderFilterPanel(state.criteria, {
      onChange(criteria) {
        state.criteria = criteria;
        state.page = 1;
        syncLocation(state);
        rebuildFilterPanel();
        void refreshResults();
      },
    }),
  );
}

async function exportCard(format: "structured" | "markdown"): Promise<void> {
  try {
    const { text, version } = await api.exportCard(state.criteria, format);
    const extension = format === "markdown" ? "md" : "json";
    triggerDownload(
      `provenance-card-${version}.${extension}`,
      text,
      format === "markdown" ? "text/markdown" : "application/json",
    );
  } catch {
    showError("card export failed");
  }
}

function wireControls(): void {
  element("export-markdown").addEventListener("click", () => void exportCard("markdown"));
  element("export-structured").addEventListener("click", () => void exportCard("structured"));
  element("prev-page").addEventListener("click", () => {
    if (state.page > 1) {
      state.page -= 1;
      void refreshResults();
    }
  });
  element("next-page").addEventListener("click", () => {
    state.page += 1;
    void refreshResults();
  });
  const axisSelect = element("breakdown-axis") as HTMLSelectElement;
  for (const axis of BREAKDOWN_AXES) {
    const option = document.createElement("option");
    option.value = axis;
    option.textContent = axis;
    axisSelect.appendChild(option);
  }
  axisSelect.addEventListener("change", () => void refreshBreakdown(axisSelect.value));
}

window.addEventListener("popstate", () => {
  state = stateFromLocation(window.location.search);
  rebuildFilterPanel();
  void refreshResults();
});

wireControls();
rebuildFilterPanel();
void refreshResults();
void refreshBreakdown("year");
void refreshRepresentation();
