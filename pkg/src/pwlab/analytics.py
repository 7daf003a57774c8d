"""Corpus characterization: popularity rankings, length distributions, and
character-composition signatures.

All statistics are multiplicity-weighted: popularity means occurrences, not
unique strings. Results are deterministic; ranking ties break lexicographically.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass
from itertools import combinations

from .chars import CLASS_ORDER, char_class
from .corpus import DEFAULT_MAX_LENGTH, DEFAULT_MIN_LENGTH, CleanPassword

LENGTH_RANGE = range(DEFAULT_MIN_LENGTH, DEFAULT_MAX_LENGTH + 1)

# All 15 non-empty class subsets in canonical D,U,L,S order, smallest first.
ALL_SIGNATURES = tuple(
    "".join(combo) for size in range(1, 5) for combo in combinations(CLASS_ORDER, size)
)


@dataclass(frozen=True)
class FrequencyEntry:
    password: str
    count: int
    share: float


@dataclass(frozen=True)
class LengthHistogram:
    """Occurrence counts per password length over the corpus window [4, 20]."""

    buckets: dict[int, int]
    total: int

    def share(self, length: int) -> float:
        return self.buckets.get(length, 0) / self.total if self.total else 0.0


@dataclass(frozen=True)
class DatasetReport:
    dataset_id: str
    top_k: list[FrequencyEntry]
    top_k_share: float
    length_hist: LengthHistogram
    composition_hist: dict[str, int]
    total_occurrences: int


def composition_signature(password: str) -> str:
    """The subset of character classes present, written in canonical order.

    "a123456" -> "DL"; "Ab1!" -> "DULS". Raises IllegalCharacterError on a
    character outside the legal set (a corpus invariant violation).
    """
    present = set()
    for ch in password:
        present.add(char_class(ch))
        if len(present) == 4:
            break
    return "".join(c for c in CLASS_ORDER if c in present)


def top_k(corpus: list[CleanPassword], k: int) -> list[FrequencyEntry]:
    """The k most frequent passwords with their occurrence shares.

    Sorted by descending count, ties by ascending password. Returns fewer
    entries when the corpus has fewer unique passwords.
    """
    if not corpus:
        raise ValueError("top_k requires a non-empty corpus")
    if k < 1:
        raise ValueError("k must be >= 1")
    total = sum(p.multiplicity for p in corpus)
    ranked = sorted(corpus, key=lambda p: (-p.multiplicity, p.text))[:k]
    return [FrequencyEntry(p.text, p.multiplicity, p.multiplicity / total) for p in ranked]


def length_distribution(corpus: list[CleanPassword]) -> LengthHistogram:
    """Multiplicity-weighted occurrence counts per length, buckets 4..20."""
    if not corpus:
        raise ValueError("length_distribution requires a non-empty corpus")
    buckets = {length: 0 for length in LENGTH_RANGE}
    for p in corpus:
        buckets[len(p.text)] += p.multiplicity
    return LengthHistogram(buckets, sum(buckets.values()))


def composition_histogram(corpus: list[CleanPassword]) -> dict[str, int]:
    """Occurrence counts per composition signature, descending count order
    (ties by canonical signature order)."""
    counts: dict[str, int] = {}
    for p in corpus:
        sig = composition_signature(p.text)
        counts[sig] = counts.get(sig, 0) + p.multiplicity
    return dict(
        sorted(counts.items(), key=lambda kv: (-kv[1], ALL_SIGNATURES.index(kv[0])))
    )


def build_report(corpus: list[CleanPassword], dataset_id: str, k: int = 10) -> DatasetReport:
    entries = top_k(corpus, k)
    total = sum(p.multiplicity for p in corpus)
    return DatasetReport(
        dataset_id=dataset_id,
        top_k=entries,
        top_k_share=sum(e.count for e in entries) / total,
        length_hist=length_distribution(corpus),
        composition_hist=composition_histogram(corpus),
        total_occurrences=total,
    )


def emit_report(report: DatasetReport, format: str) -> bytes:
    """Serialize a report deterministically as JSON or sectioned CSV."""
    if format == "json":
        doc = {
            "dataset_id": report.dataset_id,
            "total_occurrences": report.total_occurrences,
            "top_k": [
                {"rank": i + 1, "password": e.password, "count": e.count, "share": e.share}
                for i, e in enumerate(report.top_k)
            ],
            "top_k_share": report.top_k_share,
            "length_hist": {
                "buckets": {str(length): report.length_hist.buckets.get(length, 0) for length in LENGTH_RANGE},
                "total": report.length_hist.total,
            },
            "composition_hist": report.composition_hist,
        }
        return (json.dumps(doc, indent=2, sort_keys=False) + "\n").encode("utf-8")
    if format == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["rank", "password", "count", "share"])
        for i, e in enumerate(report.top_k):
            writer.writerow([i + 1, e.password, e.count, e.share])
        writer.writerow([])
        writer.writerow(["length", "count", "share"])
        for length in LENGTH_RANGE:
            count = report.length_hist.buckets.get(length, 0)
            writer.writerow([length, count, count / report.length_hist.total])
        writer.writerow([])
        writer.writerow(["signature", "count", "share"])
        for sig, count in report.composition_hist.items():
            writer.writerow([sig, count, count / report.total_occurrences])
        return buf.getvalue().encode("utf-8")
    raise ValueError(f"unknown report format: {format!r}")


def parse_report_json(data: bytes) -> DatasetReport:
    """Inverse of emit_report(..., 'json'); round-trips losslessly."""
    doc = json.loads(data.decode("utf-8"))
    return DatasetReport(
        dataset_id=doc["dataset_id"],
        top_k=[FrequencyEntry(e["password"], e["count"], e["share"]) for e in doc["top_k"]],
        top_k_share=doc["top_k_share"],
        length_hist=LengthHistogram(
            {int(k): v for k, v in doc["length_hist"]["buckets"].items()},
            doc["length_hist"]["total"],
        ),
        composition_hist=dict(doc["composition_hist"]),
        total_occurrences=doc["total_occurrences"],
    )
