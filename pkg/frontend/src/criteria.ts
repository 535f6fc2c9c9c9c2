/**
 * Filter criteria and their URL query-string codec.
 *
 * The parameter names and canonical encoding mirror the server's codec
 * exactly, so a pasted URL reproduces a CLI/API selection and
 * encode(decode(q)) === q for every canonical query string.
 */

export const USE_CATEGORIES = [
  "commercial",
  "unspecified",
  "non-commercial",
  "academic-only",
] as const;

export type UseCategory = (typeof USE_CATEGORIES)[number];

export const EVIDENCE_SOURCES = [
  "paper",
  "collection",
  "github-data",
  "huggingface",
  "github-repo",
  "paperswithcode",
] as const;

export interface Criteria {
  allowUse: UseCategory[]; // empty means "all"
  forbidAttribution: boolean;
  forbidShareAlike: boolean;
  excludeModelGenerated: boolean;
  excludeGeneratedBy: string[];
  excludeCreators: string[];
  excludeSourceDomains: string[];
  requireLanguages: string[];
  requireTasks: string[];
  yearMin: number | null;
  yearMax: number | null;
  openaiTermsAs: UseCategory | null; // null = server default
  acceptEvidence: string[]; // empty means server default
}

export function emptyCriteria(): Criteria {
  return {
    allowUse: [],
    forbidAttribution: false,
    forbidShareAlike: false,
    excludeModelGenerated: false,
    excludeGeneratedBy: [],
    excludeCreators: [],
    excludeSourceDomains: [],
    requireLanguages: [],
    requireTasks: [],
    yearMin: null,
    yearMax: null,
    openaiTermsAs: null,
    acceptEvidence: [],
  };
}

type SetKey =
  | "excludeGeneratedBy"
  | "excludeCreators"
  | "excludeSourceDomains"
  | "requireLanguages"
  | "requireTasks";

type BoolKey = "forbidAttribution" | "forbidShareAlike" | "excludeModelGenerated";

const SET_PARAMS: Array<[string, SetKey]> = [
  ["exclude_generated_by", "excludeGeneratedBy"],
  ["exclude_creators", "excludeCreators"],
  ["exclude_source_domains", "excludeSourceDomains"],
  ["require_languages", "requireLanguages"],
  ["require_tasks", "requireTasks"],
];

const BOOL_PARAMS: Array<[string, BoolKey]> = [
  ["forbid_attribution", "forbidAttribution"],
  ["forbid_share_alike", "forbidShareAlike"],
  ["exclude_model_generated", "excludeModelGenerated"],
];

const KNOWN_PARAMS = new Set<string>([
  "allow_use",
  "year_min",
  "year_max",
  "openai_terms_as",
  "accept_evidence",
  ...BOOL_PARAMS.map(([name]) => name),
  ...SET_PARAMS.map(([name]) => name),
]);

export class CriteriaError extends Error {}

function splitCsv(value: string): string[] {
  return value
    .split(",")
    .map((part) => part.trim())
    .filter((part) => part.length > 0);
}

function parseBool(name: string, value: string): boolean {
  const lowered = value.trim().toLowerCase();
  if (["1", "true", "yes", "on"].includes(lowered)) return true;
  if (["0", "false", "no", "off"].includes(lowered)) return false;
  throw new CriteriaError(`parameter '${name}': not a boolean: '${value}'`);
}

function isUseCategory(token: string): token is UseCategory {
  return (USE_CATEGORIES as readonly string[]).includes(token);
}

/** Parse a query string (with or without leading "?") into criteria. */
export function decodeQuery(query: string): Criteria {
  const params = new URLSearchParams(query.replace(/^\?/, ""));
  const criteria = emptyCriteria();
  for (const [name, value] of params.entries()) {
    if (!KNOWN_PARAMS.has(name)) {
      throw new CriteriaError(`unknown criteria parameter: '${name}'`);
    }
    if (name === "allow_use") {
      const tokens = splitCsv(value);
      if (tokens.length === 0) {
        throw new CriteriaError("parameter 'allow_use': empty value");
      }
      for (const token of tokens) {
        if (!isUseCategory(token)) {
          throw new CriteriaError(
            `parameter 'allow_use': unknown use category: '${token}'`,
          );
        }
      }
      criteria.allowUse = USE_CATEGORIES.filter((c) => tokens.includes(c));
      if (criteria.allowUse.length === USE_CATEGORIES.length) {
        criteria.allowUse = [];
      }
    } else if (name === "openai_terms_as") {
      if (!isUseCategory(value.trim())) {
        throw new CriteriaError(
          `parameter 'openai_terms_as': unknown use category: '${value}'`,
        );
      }
      criteria.openaiTermsAs = value.trim() as UseCategory;
    } else if (name === "accept_evidence") {
      const sources = splitCsv(value);
      for (const source of sources) {
        if (!(EVIDENCE_SOURCES as readonly string[]).includes(source)) {
          throw new CriteriaError(
            `parameter 'accept_evidence': unknown source: '${source}'`,
          );
        }
      }
      criteria.acceptEvidence = sources.sort();
    } else if (name === "year_min" || name === "year_max") {
      const parsed = Number.parseInt(value, 10);
      if (Number.isNaN(parsed)) {
        throw new CriteriaError(`parameter '${name}': not an integer`);
      }
      if (name === "year_min") criteria.yearMin = parsed;
      else criteria.yearMax = parsed;
    } else {
      const boolParam = BOOL_PARAMS.find(([param]) => param === name);
      if (boolParam) {
        criteria[boolParam[1]] = parseBool(name, value);
        continue;
      }
      const setParam = SET_PARAMS.find(([param]) => param === name);
      if (setParam) {
        criteria[setParam[1]] = splitCsv(value).sort();
      }
    }
  }
  if ((criteria.yearMin === null) !== (criteria.yearMax === null)) {
    throw new CriteriaError(
      "parameters 'year_min'/'year_max' must be given together",
    );
  }
  if (
    criteria.yearMin !== null &&
    criteria.yearMax !== null &&
    criteria.yearMin > criteria.yearMax
  ) {
    throw new CriteriaError("year_range lo must be <= hi");
  }
  return criteria;
}

/** Canonical query string ("" when every field is at its default). */
export function encodeQuery(criteria: Criteria): string {
  const params = new URLSearchParams();
  if (criteria.allowUse.length > 0 && criteria.allowUse.length < 4) {
    params.set("allow_use", [...criteria.allowUse].sort().join(","));
  }
  for (const [name, key] of BOOL_PARAMS) {
    if (criteria[key]) params.set(name, "true");
  }
  for (const [name, key] of SET_PARAMS) {
    const values = criteria[key] as string[];
    if (values.length > 0) params.set(name, [...values].sort().join(","));
  }
  if (criteria.yearMin !== null && criteria.yearMax !== null) {
    params.set("year_min", String(criteria.yearMin));
    params.set("year_max", String(criteria.yearMax));
  }
  if (criteria.openaiTermsAs !== null && criteria.openaiTermsAs !== "non-commercial") {
    params.set("openai_terms_as", criteria.openaiTermsAs);
  }
  if (criteria.acceptEvidence.length > 0) {
    params.set("accept_evidence", [...criteria.acceptEvidence].sort().join(","));
  }
  return params.toString();
}

/** Flat param record for building API request URLs. */
export function toParams(criteria: Criteria): Record<string, string> {
  const record: Record<string, string> = {};
  for (const [name, value] of new URLSearchParams(encodeQuery(criteria))) {
    record[name] = value;
  }
  return record;
}
