/** DOM builders for the filter panel, results table, and detail pane. */

import { Criteria, USE_CATEGORIES, UseCategory } from "./criteria.js";
import { DatasetDetail, DatasetItem } from "./api.js";

export interface FilterPanelHandlers {
  onChange(criteria: Criteria): void;
}

function checkbox(
  label: string,
  checked: boolean,
  onToggle: (value: boolean) => void,
): HTMLLabelElement {
  const wrapper = document.createElement("label");
  const input = document.createElement("input");
  input.type = "checkbox";
  input.checked = checked;
  input.addEventListener("change", () => onToggle(input.checked));
  wrapper.append(input, ` ${label}`);
  return wrapper;
}

function csvInput(
  label: string,
  values: string[],
  onCommit: (values: string[]) => void,
): HTMLLabelElement {
  const wrapper = document.createElement("label");
  wrapper.className = "csv-input";
  const input = document.createElement("input");
  input.type = "text";
  input.value = values.join(", ");
  input.placeholder = "comma-separated";
  input.addEventListener("change", () => {
    onCommit(
      input.value
        .split(",")
        .map((part) => part.trim())
        .filter((part) => part.length > 0),
    );
  });
  wrapper.append(`${label}: `, input);
  return wrapper;
}

export function renderFilterPanel(
  criteria: Criteria,
  handlers: FilterPanelHandlers,
): HTMLElement {
  const panel = document.createElement("form");
  panel.className = "filter-panel";
  panel.addEventListener("submit", (event) => event.preventDefault());
  const emit = () => handlers.onChange({ ...criteria });

  const useGroup = document.createElement("fieldset");
  const legend = document.createElement("legend");
  legend.textContent = "Permitted use";
  useGroup.appendChild(legend);
  const effective: UseCategory[] =
    criteria.allowUse.length > 0 ? criteria.allowUse : [...USE_CATEGORIES];
  for (const category of USE_CATEGORIES) {
    useGroup.appendChild(
      checkbox(category, effective.includes(category), (checked) => {
        const next = USE_CATEGORIES.filter((c) =>
          c === category ? checked : effective.includes(c),
        );
        criteria.allowUse = next.length === USE_CATEGORIES.length ? [] : next;
        emit();
      }),
    );
  }
  panel.appendChild(useGroup);

  const burdens = document.createElement("fieldset");
  const burdensLegend = document.createElement("legend");
  burdensLegend.textContent = "Burdens & origin";
  burdens.appendChild(burdensLegend);
  burdens.appendChild(
    checkbox("forbid attribution requirement", criteria.forbidAttribution, (v) => {
      criteria.forbidAttribution = v;
      emit();
    }),
  );
  burdens.appendChild(
    checkbox("forbid share-alike requirement", criteria.forbidShareAlike, (v) => {
      criteria.forbidShareAlike = v;
      emit();
    }),
  );
  burdens.appendChild(
    checkbox("exclude model-generated", criteria.excludeModelGenerated, (v) => {
      criteria.excludeModelGenerated = v;
      emit();
    }),
  );
  panel.appendChild(burdens);

  const sets = document.createElement("fieldset");
  const setsLegend = document.createElement("legend");
  setsLegend.textContent = "Scoping";
  sets.appendChild(setsLegend);
  sets.appendChild(
    csvInput("exclude generated by", criteria.excludeGeneratedBy, (v) => {
      criteria.excludeGeneratedBy = v;
      emit();
    }),
  );
  sets.appendChild(
    csvInput("exclude creators", criteria.excludeCreators, (v) => {
      criteria.excludeCreators = v;
      emit();
    }),
  );
  sets.appendChild(
    csvInput("exclude source domains", criteria.excludeSourceDomains, (v) => {
      criteria.excludeSourceDomains = v;
      emit();
    }),
  );
  sets.appendChild(
    csvInput("require languages", criteria.requireLanguages, (v) => {
      criteria.requireLanguages = v;
      emit();
    }),
  );
  sets.appendChild(
    csvInput("require tasks", criteria.requireTasks, (v) => {
      criteria.requireTasks = v;
      emit();
    }),
  );
  panel.appendChild(sets);

  const years = document.createElement("fieldset");
  const yearsLegend = document.createElement("legend");
  yearsLegend.textContent = "Collection year";
  years.appendChild(yearsLegend);
  const yearField = (label: string, value: number | null, commit: (v: number | null) => void) => {
    const wrapper = document.createElement("label");
    const input = document.createElement("input");
    input.type = "number";
    input.value = value === null ? "" : String(value);
    input.addEventListener("change", () => {
      commit(input.value === "" ? null : Number.parseInt(input.value, 10));
      emit();
    });
    wrapper.append(`${label}: `, input);
    return wrapper;
  };
  years.appendChild(yearField("from", criteria.yearMin, (v) => (criteria.yearMin = v)));
  years.appendChild(yearField("to", criteria.yearMax, (v) => (criteria.yearMax = v)));
  panel.appendChild(years);

  return panel;
}

export function renderResultsTable(
  items: DatasetItem[],
  onSelect: (id: string) => void,
): HTMLTableElement {
  const table = document.createElement("table");
  table.className = "results";
  const head = table.createTHead().insertRow();
  for (const column of ["Dataset", "Collection", "Use", "Languages", "Tasks"]) {
    const th = document.createElement("th");
    th.textContent = column;
    head.appendChild(th);
  }
  const body = table.createTBody();
  for (const item of items) {
    const row = body.insertRow();
    row.dataset.id = item.id;
    const name = row.insertCell();
    const link = document.createElement("a");
    link.href = "#";
    link.textContent = item.name;
    link.addEventListener("click", (event) => {
      event.preventDefault();
      onSelect(item.id);
    });
    name.appendChild(link);
    row.insertCell().textContent = item.collection;
    const use = row.insertCell();
    use.textContent = item.rights.use;
    use.className = `use-${item.rights.use}`;
    row.insertCell().textContent = item.languages.join(", ");
    row.insertCell().textContent = item.task_categories.join(", ");
  }
  return table;
}

export function renderDetail(detail: DatasetDetail): HTMLElement {
  const pane = document.createElement("section");
  pane.className = "detail";

  if (detail.excluded_because.length > 0) {
    const banner = document.createElement("div");
    banner.className = "banner exclusion";
    banner.textContent =
      "Excluded by current criteria: " +
      detail.excluded_because.map((f) => `${f.clause} (${f.detail})`).join("; ");
    pane.appendChild(banner);
  }
  for (const conflict of detail.conflicts) {
    const badge = document.createElement("span");
    badge.className = "badge conflict";
    badge.textContent = `${conflict.kind}: ${conflict.first_id} vs ${conflict.second_id}`;
    pane.appendChild(badge);
  }

  const rights = document.createElement("p");
  const burdens = [
    detail.rights.attribution_required ? "attribution required" : null,
    detail.rights.share_alike_required ? "share-alike required" : null,
    detail.rights.needs_review ? "needs review" : null,
  ].filter((b): b is string => b !== null);
  rights.textContent =
    `Effective rights: ${detail.rights.use}` +
    (burdens.length > 0 ? ` (${burdens.join(", ")})` : "");
  pane.appendChild(rights);

  if (detail.applied_licenses.length > 0) {
    const list = document.createElement("ul");
    for (const license of detail.applied_licenses) {
      const item = document.createElement("li");
      const label = license.canonical_id ?? license.raw_name;
      if (license.url) {
        const link = document.createElement("a");
        link.href = license.url;
        link.textContent = label;
        link.target = "_blank";
        item.appendChild(link);
      } else {
        item.textContent = label;
      }
      list.appendChild(item);
    }
    pane.appendChild(list);
  }

  const fields = document.createElement("dl");
  for (const [key, value] of Object.entries(detail.record)) {
    if (value === null || (Array.isArray(value) && value.length === 0)) continue;
    const dt = document.createElement("dt");
    dt.textContent = key;
    const dd = document.createElement("dd");
    dd.textContent = Array.isArray(value)
      ? value.map(String).join(", ")
      : typeof value === "object"
        ? JSON.stringify(value)
        : String(value);
    fields.append(dt, dd);
  }
  pane.appendChild(fields);
  return pane;
}

export function errorBanner(message: string): HTMLElement {
  const banner = document.createElement("div");
  banner.className = "banner error";
  banner.textContent = message;
  return banner;
}

export function triggerDownload(filename: string, text: string, mime: string): void {
  const blob = new Blob([text], { type: mime });
  const url = URL.createObjectURL(blob);
  const anchor = document.createElement("a");
  anchor.href = url;
  anchor.download = filename;
  anchor.click();
  URL.revokeObjectURL(url);
}
