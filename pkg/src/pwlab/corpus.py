"""Leak-dump parsing and the corpus cleaning pipeline.

A dump is a newline-delimited file where each line holds delimiter-separated
fields described by a RecordSchema. Cleaning keeps only the password field,
drops passwords outside the configured length window or containing illegal
characters, and merges duplicates into one entry carrying the occurrence
count. Every input line is accounted for in the CleaningReport.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Iterator, Union

from .chars import LEGAL_MAX, LEGAL_MIN

DEFAULT_MIN_LENGTH = 4
DEFAULT_MAX_LENGTH = 20

FIELD_ROLES = ("serial", "email", "username", "password")


class SchemaError(ValueError):
    """A RecordSchema violates its invariants."""


@dataclass(frozen=True)
class RecordSchema:
    """Layout of one dump line: ordered field roles and the delimiter."""

    field_names: tuple[str, ...]
    delimiter: str

    def __post_init__(self) -> None:
        if len(self.delimiter) != 1 or not (0x20 <= ord(self.delimiter) <= 0x7E):
            raise SchemaError(f"delimiter must be one printable ASCII character, got {self.delimiter!r}")
        unknown = [f for f in self.field_names if f not in FIELD_ROLES]
        if unknown:
            raise SchemaError(f"unknown field roles: {unknown}; allowed: {FIELD_ROLES}")
        if sum(1 for f in self.field_names if f == "password") != 1:
            raise SchemaError("schema must contain exactly one password field")

    @property
    def password_index(self) -> int:
        return self.field_names.index("password")

    @classmethod
    def parse(cls, spec: str, delimiter: str) -> "RecordSchema":
        """Build a schema from a CLI-style spec like ``serial,email,password``."""
        return cls(tuple(s.strip() for s in spec.split(",")), delimiter)


@dataclass(frozen=True)
class RawRecord:
    source_line_number: int
    fields: tuple[bytes, ...]


@dataclass(frozen=True)
class ParseFailure:
    source_line_number: int
    reason: str


@dataclass(frozen=True)
class CleanPassword:
    """A validated password and its occurrence count before deduplication."""

    text: str
    multiplicity: int = 1

    def __post_init__(self) -> None:
        if self.multiplicity < 1:
            raise ValueError("multiplicity must be >= 1")


@dataclass
class CleaningReport:
    """Per-step audit counts; every input occurrence lands in exactly one bucket."""

    total_read: int = 0
    dropped_parse: int = 0
    dropped_length: int = 0
    dropped_illegal: int = 0
    duplicates_merged: int = 0
    unique_kept: int = 0

    def reconciles(self) -> bool:
        return self.total_read == (
            self.unique_kept
            + self.dropped_parse
            + self.dropped_length
            + self.dropped_illegal
            + self.duplicates_merged
        )

    def to_dict(self) -> dict:
        return {
            "total_read": self.total_read,
            "dropped_parse": self.dropped_parse,
            "dropped_length": self.dropped_length,
            "dropped_illegal": self.dropped_illegal,
            "duplicates_merged": self.duplicates_merged,
            "unique_kept": self.unique_kept,
        }


def parse_records(
    lines: Iterable[bytes], schema: RecordSchema
) -> Iterator[Union[RawRecord, ParseFailure]]:
    """Split raw lines into records; malformed lines yield failures, never abort.

    A line is malformed when splitting on the delimiter does not produce
    exactly the schema's field count.
    """
    delim = schema.delimiter.encode("ascii")
    expected = len(schema.field_names)
    for lineno, line in enumerate(lines, start=1):
        stripped = line.rstrip(b"\r\n")
        parts = stripped.split(delim)
        if len(parts) != expected:
            yield ParseFailure(lineno, f"expected {expected} fields, got {len(parts)}")
        else:
            yield RawRecord(lineno, tuple(parts))


def _password_fate(raw: bytes, min_length: int, max_length: int) -> str:
    """Classify one password payload: 'ok', 'length', or 'illegal'."""
    n = len(raw)
    if n < min_length or n > max_length:
        # Length is checked on the byte payload; legal passwords are pure
        # ASCII so byte length equals character length. An over-long payload
        # of multibyte junk is dropped here rather than as illegal, which is
        # an arbitrary but stable bucketing for doubly-bad records.
        return "length"
    if any(b < LEGAL_MIN or b > LEGAL_MAX for b in raw):
        return "illegal"
    return "ok"


def clean(
    records: Iterable[Union[RawRecord, ParseFailure]],
    schema: RecordSchema,
    min_length: int = DEFAULT_MIN_LENGTH,
    max_length: int = DEFAULT_MAX_LENGTH,
) -> tuple[list[CleanPassword], CleaningReport]:
    """Run the cleaning pipeline over a parsed record stream.

    Only the password field survives (desensitization: serial/email/username
    are discarded and never persisted). Records whose password falls outside
    the length window or contains a codepoint outside 0x21-0x7E are dropped
    whole; characters are never stripped, since mutating a password would
    corrupt frequency statistics. Duplicates merge into one CleanPassword
    with the occurrence count.
    """
    report = CleaningReport()
    counts: Counter[str] = Counter()
    pw_index = schema.password_index
    for item in records:
        report.total_read += 1
        if isinstance(item, ParseFailure):
            report.dropped_parse += 1
            continue
        raw = item.fields[pw_index]
        fate = _password_fate(raw, min_length, max_length)
        if fate == "length":
            report.dropped_length += 1
        elif fate == "illegal":
            report.dropped_illegal += 1
        else:
            counts[raw.decode("ascii")] += 1
    report.unique_kept = len(counts)
    report.duplicates_merged = sum(counts.values()) - len(counts)
    passwords = [
        CleanPassword(text, mult)
        for text, mult in sorted(counts.items(), key=lambda kv: (-kv[1], kv[0]))
    ]
    return passwords, report


def clean_counted(
    lines: Iterable[bytes],
    min_length: int = DEFAULT_MIN_LENGTH,
    max_length: int = DEFAULT_MAX_LENGTH,
) -> tuple[list[CleanPassword], CleaningReport]:
    """Clean a corpus already in ``<count>\\t<password>`` form, honoring counts.

    Used to re-validate or merge corpus-format files without collapsing
    multiplicities. Unparseable lines count as one dropped_parse occurrence;
    a dropped password drops all of its counted occurrences.
    """
    report = CleaningReport()
    counts: Counter[str] = Counter()
    for line in lines:
        stripped = line.rstrip(b"\r\n")
        if not stripped:
            continue
        parts = stripped.split(b"\t")
        try:
            mult = int(parts[0])
            if len(parts) != 2 or mult < 1:
                raise ValueError
        except ValueError:
            report.total_read += 1
            report.dropped_parse += 1
            continue
        report.total_read += mult
        fate = _password_fate(parts[1], min_length, max_length)
        if fate == "length":
            report.dropped_length += mult
        elif fate == "illegal":
            report.dropped_illegal += mult
        else:
            counts[parts[1].decode("ascii")] += mult
    report.unique_kept = len(counts)
    report.duplicates_merged = sum(counts.values()) - len(counts)
    passwords = [
        CleanPassword(text, mult)
        for text, mult in sorted(counts.items(), key=lambda kv: (-kv[1], kv[0]))
    ]
    return passwords, report


def write_corpus_tsv(passwords: Iterable[CleanPassword]) -> bytes:
    """Serialize a cleaned corpus: ``<count>\\t<password>`` per line,
    descending count then ascending password, so output diffs cleanly."""
    ordered = sorted(passwords, key=lambda p: (-p.multiplicity, p.text))
    return b"".join(f"{p.multiplicity}\t{p.text}\n".encode("ascii") for p in ordered)


def read_corpus_tsv(data: bytes) -> list[CleanPassword]:
    """Parse the corpus TSV format back into CleanPassword entries."""
    out: list[CleanPassword] = []
    for lineno, line in enumerate(data.splitlines(), start=1):
        if not line:
            continue
        parts = line.split(b"\t")
        if len(parts) != 2:
            raise ValueError(f"line {lineno}: expected <count>\\t<password>")
        out.append(CleanPassword(parts[1].decode("ascii"), int(parts[0])))
    return out
