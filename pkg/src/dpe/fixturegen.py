"""Deterministic generators for the bundled test fixtures.

Run ``python -m dpe.fixturegen [OUTDIR]`` to (re)write every fixture under
OUTDIR (default: ./fixtures). Generation is pure arithmetic over fixed
allocation tables, so repeated runs are byte-identical.
"""

from __future__ import annotations

import json
import sys
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple

from .schema import DatasetRecord, record_from_dict, serialize_record

# Verified-use group sizes for the aggregator-agreement fixture.
AGREEMENT_GROUP_SIZES: Tuple[Tuple[str, int], ...] = (
    ("commercial", 856),
    ("unspecified", 570),
    ("non-commercial", 352),
    ("academic-only", 80),
)

# Per-platform label-category allocations within each verified group, in
# column order (commercial, unspecified, non-commercial, academic-only).
AGREEMENT_ALLOCATIONS: Dict[str, Dict[str, Tuple[int, int, int, int]]] = {
    "github": {
        "commercial": (349, 507, 0, 0),
        "unspecified": (112, 458, 0, 0),
        "non-commercial": (49, 303, 0, 0),
        "academic-only": (9, 71, 0, 0),
    },
    "huggingface": {
        "commercial": (176, 677, 1, 2),
        "unspecified": (164, 395, 6, 5),
        "non-commercial": (113, 152, 80, 7),
        "academic-only": (9, 65, 2, 4),
    },
    "paperswithcode": {
        "commercial": (313, 520, 1, 22),
        "unspecified": (31, 523, 1, 15),
        "non-commercial": (2, 191, 157, 2),
        "academic-only": (5, 65, 2, 8),
    },
}

# Raw label an aggregator reports for each label category (None = no label).
LABELS_BY_CATEGORY: Tuple[Optional[str], ...] = (
    "MIT",
    None,
    "CC BY-NC 4.0",
    "Academic Use Only",
)

# License evidence cycled through within each verified group.
EVIDENCE_BY_GROUP: Dict[str, List[List[Dict]]] = {
    "commercial": [
        [{"raw_name": "CC BY 4.0", "evidence_source": "paper", "author_stated": True}],
        [{"raw_name": "MIT", "evidence_source": "github-data", "author_stated": True}],
        [{"raw_name": "Apache 2.0", "evidence_source": "collection", "author_stated": True}],
        [{"raw_name": "CC BY-SA 4.0", "evidence_source": "paper", "author_stated": True}],
        [{"raw_name": "CC0 1.0", "evidence_source": "huggingface", "author_stated": True}],
    ],
    "unspecified": [[]],
    "non-commercial": [
        [{"raw_name": "CC BY-NC 4.0", "evidence_source": "paper", "author_stated": True}],
        [{"raw_name": "CC BY-NC-SA 4.0", "evidence_source": "collection", "author_stated": True}],
        [{"raw_name": "OpenAI Terms of Use", "evidence_source": "collection", "author_stated": True}],
        [{"raw_name": "Non-Commercial", "evidence_source": "paper", "author_stated": True}],
    ],
    "academic-only": [
        [{"raw_name": "Academic Use Only", "evidence_source": "paper", "author_stated": True}],
        [{"raw_name": "Permission Request Form", "evidence_source": "collection", "author_stated": True}],
    ],
}

LANGUAGE_CYCLE: List[List[str]] = [
    ["en"],
    ["en"],
    ["en"],
    ["fr"],
    ["zh"],
    ["en", "de"],
    ["code"],
    ["es"],
    ["ja"],
    ["en", "hi"],
]

TASK_CYCLE: List[List[str]] = [
    ["Question Answering"],
    ["Translation"],
    ["Summarization", "Classification"],
    ["Creative Writing"],
    ["Brainstorming", "Explanation"],
    ["Logic and Math"],
    ["Program Synthesis"],
    ["Dialogue Generation"],
]

DOMAIN_CYCLE: List[List[str]] = [
    ["general-web"],
    ["wikipedia"],
    ["exams"],
    ["model-generated"],
    ["governments"],
    ["search-queries"],
    ["news", "books"],
]

YEAR_CYCLE = ["2019", "2020", "2021", "2022", "2023", "2022"]


def _base_record(
    collection: str,
    index: int,
    *,
    licenses: List[Dict],
    aggregator_labels: Dict[str, str],
    year: Optional[str],
    origin: str = "human-web",
    generated_by: Optional[str] = None,
    tasks: Optional[List[str]] = None,
    languages: Optional[List[str]] = None,
) -> DatasetRecord:
    name = f"ds-{index:04d}"
    record_id = f"{collection}/{name}"
    input_mean = 200.0 + (index % 50) * 30.0
    target_mean = 50.0 + (index % 40) * 20.0
    data = {
        "id": record_id,
        "name": name,
        "collection": collection,
        "links": {
            "github": f"https://github.com/{collection}/{name}",
            "huggingface": f"https://huggingface.co/datasets/{collection}/{name}",
            "paperswithcode": f"https://paperswithcode.com/dataset/{collection}-{name}",
        },
        "languages": languages if languages is not None else LANGUAGE_CYCLE[index % len(LANGUAGE_CYCLE)],
        "task_categories": tasks if tasks is not None else TASK_CYCLE[index % len(TASK_CYCLE)],
        "text_topics": [f"topic-{index % 12}", f"topic-{(index * 7) % 23}"],
        "formats": ["zero-shot"] if index % 3 else ["multi-turn-dialog"],
        "text_metrics": {
            "input_chars": {"min": input_mean / 4, "mean": input_mean, "max": input_mean * 6},
            "target_chars": {"min": target_mean / 4, "mean": target_mean, "max": target_mean * 5},
            "dialog_turns": {"min": 1, "mean": 1 + (index % 3), "max": 3 + (index % 5)},
        },
        "licenses": licenses,
        "text_sources": ["wikipedia.org"] if index % 2 else ["reddit"],
        "source_domains": DOMAIN_CYCLE[index % len(DOMAIN_CYCLE)],
        "origin": origin,
        "creators": [f"Lab {index % 17}"],
        "creator_categories": ["academic"] if index % 4 else ["industry-lab"],
        "citation_count": (index * 13) % 900,
        "download_count": (index * 101) % 40000,
    }
    if aggregator_labels:
        data["aggregator_labels"] = aggregator_labels
    if year is not None:
        data["time_of_collection"] = year
    if generated_by is not None:
        data["generated_by"] = generated_by
    return record_from_dict(data)


def _allocation_category(allocation: Sequence[int], position: int) -> int:
    """Index of the label category the record at `position` falls into."""
    cumulative = 0
    for category_index, count in enumerate(allocation):
        cumulative += count
        if position < cumulative:
            return category_index
    raise ValueError("position outside allocation")


def generate_agreement_records() -> List[DatasetRecord]:
    """1858 records whose verified categories and per-platform labels follow
    the fixed allocation tables exactly."""
    records: List[DatasetRecord] = []
    index = 0
    for group, size in AGREEMENT_GROUP_SIZES:
        evidence_cycle = EVIDENCE_BY_GROUP[group]
        for position in range(size):
            labels: Dict[str, str] = {}
            for platform, table in AGREEMENT_ALLOCATIONS.items():
                category_index = _allocation_category(table[group], position)
                label = LABELS_BY_CATEGORY[category_index]
                if label is not None:
                    labels[platform] = label
            licenses = evidence_cycle[position % len(evidence_cycle)]
            origin = "human-web"
            generated_by = None
            # a slice of the restrictively licensed data is model-generated
            if group in ("non-commercial", "academic-only") and position % 3 == 0:
                origin = "model-generated"
                generated_by = "openai"
            records.append(
                _base_record(
                    "table2",
                    index,
                    licenses=licenses,
                    aggregator_labels=labels,
                    year=YEAR_CYCLE[index % len(YEAR_CYCLE)],
                    origin=origin,
                    generated_by=generated_by,
                )
            )
            index += 1
    return records


# (group, size, synthetic count) chosen so the synthetic fractions are exact:
# 32/250 = 12.8%, 34/250 = 13.6%, 91/200 = 45.5%.
DIVERSITY_GROUPS: Tuple[Tuple[str, int, int], ...] = (
    ("commercial", 250, 32),
    ("unspecified", 250, 34),
    ("non-commercial", 200, 91),
)


def generate_diversity_records() -> List[DatasetRecord]:
    records: List[DatasetRecord] = []
    index = 0
    for group, size, synthetic_count in DIVERSITY_GROUPS:
        evidence_cycle = EVIDENCE_BY_GROUP[group]
        for position in range(size):
            synthetic = position < synthetic_count
            # restrictive datasets carry more tasks, mirroring broader variety
            if group == "non-commercial":
                tasks = TASK_CYCLE[position % len(TASK_CYCLE)] + TASK_CYCLE[(position + 3) % len(TASK_CYCLE)]
            else:
                tasks = TASK_CYCLE[position % len(TASK_CYCLE)]
            records.append(
                _base_record(
                    "table3",
                    index,
                    licenses=evidence_cycle[position % len(evidence_cycle)],
                    aggregator_labels={},
                    year=YEAR_CYCLE[index % len(YEAR_CYCLE)],
                    origin="model-generated" if synthetic else "human-web",
                    generated_by="openai" if synthetic else None,
                    tasks=tasks,
                )
            )
            index += 1
    return records


# year -> (total, commercial, unspecified, nc/a-o); 2023 is 61% NC/A-O and 12%
# unspecified, earlier years stay at a 20% NC/A-O rate.
TIMELINE: Tuple[Tuple[str, int, int, int, int], ...] = (
    ("2018", 40, 12, 20, 8),
    ("2019", 50, 15, 25, 10),
    ("2020", 60, 18, 30, 12),
    ("2021", 80, 24, 40, 16),
    ("2022", 120, 42, 54, 24),
    ("2023", 100, 27, 12, 61),
)


def generate_timeline_records() -> List[DatasetRecord]:
    records: List[DatasetRecord] = []
    index = 0
    for year, total, commercial, unspecified, nc_ao in TIMELINE:
        assert commercial + unspecified + nc_ao == total
        plan = (
            [("commercial", i) for i in range(commercial)]
            + [("unspecified", i) for i in range(unspecified)]
            + [("non-commercial", i) for i in range(nc_ao)]
        )
        for group, position in plan:
            evidence_cycle = EVIDENCE_BY_GROUP[group]
            records.append(
                _base_record(
                    "fig3",
                    index,
                    licenses=evidence_cycle[position % len(evidence_cycle)],
                    aggregator_labels={},
                    year=year,
                )
            )
            index += 1
    return records


def generate_small_records() -> List[DatasetRecord]:
    """Handcrafted records used by the card golden file and unit tests."""
    return [
        record_from_dict(
            {
                "id": "alpaca/alpaca",
                "name": "Alpaca",
                "collection": "Alpaca",
                "collection_url": "https://github.com/tatsu-lab/stanford_alpaca",
                "description": "52k instruction-following demonstrations generated from a commercial API.",
                "links": {
                    "github": "https://github.com/tatsu-lab/stanford_alpaca",
                    "huggingface": "https://huggingface.co/datasets/tatsu-lab/alpaca",
                    "arxiv": "https://arxiv.org/abs/2303.16199",
                },
                "languages": ["en"],
                "task_categories": ["Instruction Following", "Brainstorming"],
                "formats": ["zero-shot"],
                "time_of_collection": "2023-03",
                "text_metrics": {
                    "input_chars": {"min": 9, "mean": 118.3, "max": 1631},
                    "target_chars": {"min": 1, "mean": 270.3, "max": 4121},
                    "dialog_turns": {"min": 1, "mean": 1, "max": 1},
                },
                "licenses": [
                    {
                        "raw_name": "CC BY-NC 4.0",
                        "url": "https://creativecommons.org/licenses/by-nc/4.0/",
                        "evidence_source": "github-data",
                        "author_stated": True,
                    }
                ],
                "text_sources": ["openai-api"],
                "source_domains": ["model-generated"],
                "origin": "model-generated",
                "generated_by": "openai",
                "creators": ["Stanford University"],
                "creator_categories": ["academic"],
                "citation_count": 810,
                "download_count": 41200,
            }
        ),
        record_from_dict(
            {
                "id": "squad/squad-v1",
                "name": "SQuAD v1",
                "collection": "SQuAD",
                "links": {
                    "github": "https://github.com/rajpurkar/SQuAD-explorer",
                    "huggingface": "https://huggingface.co/datasets/squad",
                },
                "languages": ["en"],
                "task_categories": ["Question Answering"],
                "formats": ["zero-shot"],
                "time_of_collection": "2016",
                "text_metrics": {
                    "input_chars": {"min": 25, "mean": 780.0, "max": 3900},
                    "target_chars": {"min": 1, "mean": 22.0, "max": 240},
                    "dialog_turns": {"min": 1, "mean": 1, "max": 1},
                },
                "licenses": [
                    {
                        "raw_name": "CC BY-SA 4.0",
                        "evidence_source": "paper",
                        "author_stated": True,
                    }
                ],
                "text_sources": ["wikipedia.org"],
                "source_domains": ["wikipedia"],
                "origin": "human-web",
                "creators": ["Stanford University"],
                "creator_categories": ["academic"],
                "citation_count": 9100,
            }
        ),
        record_from_dict(
            {
                "id": "wiki-mix/wiki-mix",
                "name": "Wiki Mix",
                "collection": "Wiki Mix",
                "links": {"github": "https://github.com/example/wiki-mix"},
                "languages": ["en", "de"],
                "task_categories": ["Summarization"],
                "formats": ["zero-shot"],
                "time_of_collection": "2021",
                "licenses": [
                    {
                        "raw_name": "CC BY-SA 3.0",
                        "evidence_source": "collection",
                        "author_stated": True,
                    },
                    {
                        "raw_name": "CC BY-SA 4.0",
                        "evidence_source": "paper",
                        "author_stated": True,
                    },
                ],
                "text_sources": ["wikipedia.org"],
                "source_domains": ["wikipedia"],
                "origin": "human-web",
                "creators": ["Example Group"],
                "creator_categories": ["research-group"],
            }
        ),
    ]


def generate_aggregator_dump() -> Dict[str, List[Dict]]:
    """Per-platform dumps covering two of the three small records."""
    return {
        "github": [
            {"id": "alpaca/alpaca", "license_label": "Apache 2.0", "download_count": 41500},
            {"id": "squad/squad-v1", "license_label": "MIT", "citation_count": 9150},
        ],
        "huggingface": [
            {"id": "alpaca/alpaca", "license_label": "CC BY-NC 4.0", "download_count": 42000},
        ],
        "paperswithcode": [],
    }


def _write_records(path: Path, records: List[DatasetRecord]) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8") as fh:
        for record in records:
            fh.write(serialize_record(record) + "\n")


def write_all(root) -> None:
    root = Path(root)
    _write_records(root / "table2" / "records.jsonl", generate_agreement_records())
    _write_records(root / "table3" / "records.jsonl", generate_diversity_records())
    _write_records(root / "fig3" / "records.jsonl", generate_timeline_records())
    _write_records(root / "small" / "records.jsonl", generate_small_records())
    dump_dir = root / "aggregator_dump"
    dump_dir.mkdir(parents=True, exist_ok=True)
    for platform, rows in generate_aggregator_dump().items():
        with open(dump_dir / f"{platform}.jsonl", "w", encoding="utf-8") as fh:
            for row in rows:
                fh.write(json.dumps(row, sort_keys=True) + "\n")


def main(argv: Optional[List[str]] = None) -> int:
    args = argv if argv is not None else sys.argv[1:]
    out = args[0] if args else "fixtures"
    write_all(out)
    print(f"fixtures written under {out}/")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
