"""Bibliographic records: data model, ingestion, annotation and synthesis.

A :class:`Corpus` is an immutable bundle of :class:`PaperEntry` rows plus an
author directory.  Files on disk follow two CSV layouts::

    paper_id,year,title,authors,affiliations,jel1,jel2
    canonical_name,gender,affiliation

Multi-valued cells (``authors``, ``affiliations``) use ``;`` as separator.
"""

from __future__ import annotations

import csv
import io
import json
import logging
import re
import unicodedata
import warnings
from collections import Counter
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Iterable, Mapping, NamedTuple, Sequence

import numpy as np

from .exceptions import CorpusError, UnknownAuthorWarning

logger = logging.getLogger(__name__)

RECORD_COLUMNS = ("paper_id", "year", "title", "authors", "affiliations", "jel1", "jel2")
DIRECTORY_COLUMNS = ("canonical_name", "gender", "affiliation")

GENDERS = ("female", "male", "unknown")
UNCLASSIFIED = "unclassified"

# The meeting ran yearly from 1964; 1966 and 1973 were suspended.
DEFAULT_YEARS = tuple(y for y in range(1964, 2015) if y not in (1966, 1973))

_JEL_RE = re.compile(r"^[A-Z][0-9]{0,2}$")
_WS_RE = re.compile(r"\s+")
_GENDER_ALIASES = {
    "f": "female",
    "female": "female",
    "m": "male",
    "male": "male",
    "u": "unknown",
    "unknown": "unknown",
}


def normalize_name(raw: str) -> str:
    """Return the display form of an author name.

    Leading/trailing whitespace is trimmed, internal runs collapse to a single
    space, spaces before commas are dropped and the text is NFC-normalized.
    Case is preserved; use :func:`name_key` for comparisons.
    """
    if raw is None:
        raise CorpusError("empty author name")
    text = unicodedata.normalize("NFC", str(raw))
    text = _WS_RE.sub(" ", text).strip()
    text = text.replace(" ,", ",")
    if not text:
        raise CorpusError("empty author name")
    return text


def name_key(raw: str) -> str:
    """Case-folded comparison key for an author name."""
    return normalize_name(raw).casefold()


def normalize_jel(raw: str) -> str:
    code = raw.strip().upper()
    if not _JEL_RE.match(code):
        raise CorpusError(f"invalid JEL code {raw!r}")
    return code


def normalize_gender(raw: str | None) -> str:
    label = (raw or "").strip().casefold()
    if label == "":
        return "unknown"
    try:
        return _GENDER_ALIASES[label]
    except KeyError:
        raise CorpusError(f"invalid gender label {raw!r}") from None


@dataclass(frozen=True)
class AuthorRecord:
    canonical_name: str
    gender: str = "unknown"
    affiliation: str = UNCLASSIFIED

    def __post_init__(self):
        if not self.canonical_name:
            raise CorpusError("empty canonical name")
        if self.gender not in GENDERS:
            raise CorpusError(f"invalid gender {self.gender!r}")


@dataclass(frozen=True)
class PaperEntry:
    paper_id: str
    year: int
    title: str
    authors: tuple[str, ...]
    jel: tuple[str, ...]
    affiliations: tuple[str, ...] = ()

    def __post_init__(self):
        if not self.paper_id:
            raise CorpusError("empty paper_id")
        if not self.authors:
            raise CorpusError(f"paper {self.paper_id}: empty author list")
        keys = [a.casefold() for a in self.authors]
        if len(set(keys)) != len(keys):
            raise CorpusError(f"paper {self.paper_id}: repeated author")
        if len(self.jel) > 2:
            raise CorpusError(f"paper {self.paper_id}: too many JEL codes")
        if len(self.jel) < 1:
            raise CorpusError(f"paper {self.paper_id}: missing JEL code")
        for code in self.jel:
            if not _JEL_RE.match(code):
                raise CorpusError(f"paper {self.paper_id}: invalid JEL code {code!r}")

    @property
    def coauthored(self) -> bool:
        return len(self.authors) > 1


@dataclass(frozen=True)
class Corpus:
    entries: tuple[PaperEntry, ...]
    directory: Mapping[str, AuthorRecord] = field(default_factory=dict)

    def __post_init__(self):
        ids = Counter(e.paper_id for e in self.entries)
        dup = sorted(pid for pid, n in ids.items() if n > 1)
        if dup:
            raise CorpusError(f"duplicate paper_id {dup[0]!r}")
        for entry in self.entries:
            for name in entry.authors:
                if name not in self.directory:
                    raise CorpusError(f"paper {entry.paper_id}: author {name!r} not in directory")

    def __len__(self):
        return len(self.entries)

    @property
    def years(self) -> list[int]:
        return sorted({e.year for e in self.entries})

    def author(self, name: str) -> AuthorRecord:
        return self.directory[name]

    def class_counts(self, kind: str) -> dict[str, int]:
        """Number of directory authors per gender or affiliation label."""
        if kind not in ("gender", "affiliation"):
            raise ValueError(f"unknown annotation kind {kind!r}")
        counts = Counter(getattr(rec, kind) for rec in self.directory.values())
        return dict(sorted(counts.items()))


# --------------------------------------------------------------------------
# Parsing
# --------------------------------------------------------------------------


def _split_multi(cell: str) -> list[str]:
    return [part.strip() for part in cell.split(";") if part.strip()]


def _read_rows(path: Path, expected: Sequence[str]):
    try:
        text = Path(path).read_text(encoding="utf-8-sig")
    except OSError as exc:
        raise CorpusError(f"cannot read {path}: {exc}") from exc
    reader = csv.reader(io.StringIO(text))
    try:
        header = next(reader)
    except StopIteration:
        raise CorpusError(f"{path}: empty file", line=1) from None
    header = [h.strip() for h in header]
    if tuple(header[: len(expected)]) != tuple(expected):
        raise CorpusError(f"{path}: expected header {','.join(expected)}", line=1)
    for row in reader:
        if not any(cell.strip() for cell in row):
            continue
        yield reader.line_num, row


def _read_directory(path: Path) -> dict[str, AuthorRecord]:
    records: dict[str, AuthorRecord] = {}
    seen: dict[str, int] = {}
    for line, row in _read_rows(path, DIRECTORY_COLUMNS):
        if len(row) < 1:
            raise CorpusError("missing canonical_name", line=line)
        row = list(row) + [""] * (3 - len(row))
        try:
            name = normalize_name(row[0])
            gender = normalize_gender(row[1])
        except CorpusError as exc:
            raise CorpusError(str(exc), line=line) from None
        key = name.casefold()
        if key in seen:
            raise CorpusError(f"duplicate directory name {name!r}", line=line)
        seen[key] = line
        records[name] = AuthorRecord(name, gender, row[2].strip() or UNCLASSIFIED)
    return records


def parse_corpus(
    records_file,
    directory_file=None,
    year_range: tuple[int, int] | None = None,
) -> Corpus:
    """Read a record file (and optional directory file) into a :class:`Corpus`.

    Names are matched case-insensitively.  An author missing from the directory
    gets ``gender="unknown"``; their affiliation comes from the first record that
    lists one, else ``"unclassified"``.
    """
    directory = _read_directory(directory_file) if directory_file is not None else {}
    by_key = {name.casefold(): name for name in directory}
    fallback_affil: dict[str, str] = {}
    entries: list[PaperEntry] = []
    seen_ids: dict[str, int] = {}

    for line, row in _read_rows(records_file, RECORD_COLUMNS):
        if len(row) < 6:
            raise CorpusError(f"expected {len(RECORD_COLUMNS)} columns, got {len(row)}", line=line)
        pid = row[0].strip()
        if not pid:
            raise CorpusError("empty paper_id", line=line)
        if pid in seen_ids:
            raise CorpusError(f"duplicate paper_id {pid!r} (first on line {seen_ids[pid]})", line=line)
        seen_ids[pid] = line
        try:
            year = int(row[1])
        except ValueError:
            raise CorpusError(f"invalid year {row[1]!r}", line=line) from None
        if year_range is not None and not (year_range[0] <= year <= year_range[1]):
            raise CorpusError(f"year {year} outside {year_range[0]}-{year_range[1]}", line=line)

        raw_authors = _split_multi(row[3])
        if not raw_authors:
            raise CorpusError("empty author list", line=line)
        affils = _split_multi(row[4])
        if affils and len(affils) != len(raw_authors):
            raise CorpusError(
                f"{len(affils)} affiliations for {len(raw_authors)} authors", line=line
            )

        codes: list[str] = []
        for cell in row[5:]:
            codes.extend(_split_multi(cell))
        if len(codes) > 2:
            raise CorpusError("too many JEL codes", line=line)
        if not codes:
            raise CorpusError("missing JEL code", line=line)
        try:
            jel = tuple(normalize_jel(c) for c in codes)
        except CorpusError as exc:
            raise CorpusError(str(exc), line=line) from None

        authors: list[str] = []
        for i, raw in enumerate(raw_authors):
            try:
                display = normalize_name(raw)
            except CorpusError as exc:
                raise CorpusError(str(exc), line=line) from None
            key = display.casefold()
            canonical = by_key.setdefault(key, display)
            if canonical in authors:
                raise CorpusError(f"repeated author {display!r}", line=line)
            authors.append(canonical)
            if affils and key not in fallback_affil:
                fallback_affil[key] = affils[i]

        entries.append(
            PaperEntry(pid, year, row[2].strip(), tuple(authors), jel, tuple(affils))
        )

    for key, name in by_key.items():
        if name not in directory:
            directory[name] = AuthorRecord(name, "unknown", fallback_affil.get(key, UNCLASSIFIED))
    return Corpus(tuple(entries), dict(sorted(directory.items())))


def annotate(corpus: Corpus, annotations, kind: str) -> Corpus:
    """Return a copy of ``corpus`` with gender or affiliation labels applied.

    Rows naming authors absent from the corpus are skipped and reported through
    an :class:`UnknownAuthorWarning`.  Empty cells leave the author unchanged.
    """
    if kind not in ("gender", "affiliation"):
        raise ValueError(f"unknown annotation kind {kind!r}")
    by_key = {name.casefold(): name for name in corpus.directory}
    directory = dict(corpus.directory)
    unknown: list[str] = []
    for line, row in _read_rows(annotations, DIRECTORY_COLUMNS):
        row = list(row) + [""] * (3 - len(row))
        try:
            display = normalize_name(row[0])
        except CorpusError as exc:
            raise CorpusError(str(exc), line=line) from None
        name = by_key.get(display.casefold())
        if name is None:
            unknown.append(display)
            continue
        if kind == "gender":
            if not row[1].strip():
                continue
            try:
                label = normalize_gender(row[1])
            except CorpusError as exc:
                raise CorpusError(str(exc), line=line) from None
            directory[name] = replace(directory[name], gender=label)
        else:
            label = row[2].strip()
            if not label:
                continue
            directory[name] = replace(directory[name], affiliation=label)
    if unknown:
        warnings.warn(
            f"annotation rows for unknown authors ignored: {', '.join(unknown)}",
            UnknownAuthorWarning,
            stacklevel=2,
        )
    result = Corpus(corpus.entries, directory)
    logger.info("annotated %s: %s", kind, result.class_counts(kind))
    return result


# --------------------------------------------------------------------------
# Serialization
# --------------------------------------------------------------------------


def write_records(corpus: Corpus, records_file, directory_file=None) -> None:
    """Write ``corpus`` back to the CSV record (and directory) layout."""
    with open(records_file, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(RECORD_COLUMNS)
        for e in corpus.entries:
            jel = list(e.jel) + [""] * (2 - len(e.jel))
            writer.writerow(
                [e.paper_id, e.year, e.title, ";".join(e.authors), ";".join(e.affiliations), *jel]
            )
    if directory_file is not None:
        with open(directory_file, "w", encoding="utf-8", newline="") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(DIRECTORY_COLUMNS)
            for rec in corpus.directory.values():
                writer.writerow([rec.canonical_name, rec.gender, rec.affiliation])


def dumps_corpus(corpus: Corpus) -> str:
    """Canonical JSON document for ``corpus`` (stable field order)."""
    doc = {
        "format": "coauthnet.corpus/1",
        "authors": [
            {"name": r.canonical_name, "gender": r.gender, "affiliation": r.affiliation}
            for r in sorted(corpus.directory.values(), key=lambda r: r.canonical_name)
        ],
        "papers": [
            {
                "id": e.paper_id,
                "year": e.year,
                "title": e.title,
                "authors": list(e.authors),
                "affiliations": list(e.affiliations),
                "jel": list(e.jel),
            }
            for e in corpus.entries
        ],
    }
    return json.dumps(doc, ensure_ascii=False, indent=1) + "\n"


def loads_corpus(text: str) -> Corpus:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise CorpusError(f"invalid corpus document: {exc}") from None
    if doc.get("format") != "coauthnet.corpus/1":
        raise CorpusError("not a coauthnet corpus document")
    directory = {
        a["name"]: AuthorRecord(a["name"], a["gender"], a["affiliation"]) for a in doc["authors"]
    }
    entries = tuple(
        PaperEntry(
            p["id"],
            int(p["year"]),
            p["title"],
            tuple(p["authors"]),
            tuple(p["jel"]),
            tuple(p.get("affiliations", ())),
        )
        for p in doc["papers"]
    )
    return Corpus(entries, directory)


def save_corpus(corpus: Corpus, path) -> None:
    Path(path).write_text(dumps_corpus(corpus), encoding="utf-8")


def load_corpus(path) -> Corpus:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise CorpusError(f"cannot read {path}: {exc}") from exc
    return loads_corpus(text)


# --------------------------------------------------------------------------
# Timeline
# --------------------------------------------------------------------------


class YearCount(NamedTuple):
    year: int
    single: int
    coauthored: int
    sc_ratio: float | None  # None when no coauthored paper that year


def yearly_counts(corpus: Corpus) -> list[YearCount]:
    single: Counter = Counter()
    joint: Counter = Counter()
    for e in corpus.entries:
        (joint if e.coauthored else single)[e.year] += 1
    rows = []
    for year in sorted(set(single) | set(joint)):
        s, c = single[year], joint[year]
        rows.append(YearCount(year, s, c, s / c if c else None))
    return rows


def sc_ratio_slope(rows: Iterable[YearCount]) -> float:
    """Least-squares slope of the S/C ratio against year (undefined years skipped)."""
    pts = [(r.year, r.sc_ratio) for r in rows if r.sc_ratio is not None]
    if len(pts) < 2:
        return float("nan")
    x, y = np.array(pts, dtype=float).T
    return float(np.polyfit(x, y, 1)[0])


# --------------------------------------------------------------------------
# Synthetic corpora
# --------------------------------------------------------------------------

_JEL_LETTERS = "CDEFHIJLOQGRKNBAMPZ"


def default_jel_frequencies() -> dict[str, float]:
    """Zipf-like weights over letter+digit codes, heavier for early letters."""
    codes = [f"{letter}{digit}" for letter in _JEL_LETTERS for digit in range(10)]
    # interleave so the heavy head spans several letters
    codes.sort(key=lambda c: (int(c[1]), _JEL_LETTERS.index(c[0])))
    return {code: 1.0 / (rank + 1) for rank, code in enumerate(codes)}


def default_schedule(years: Sequence[int] = DEFAULT_YEARS, start=0.1, stop=0.7) -> dict[int, float]:
    """Linearly rising coauthorship probability across ``years``."""
    return {y: float(p) for y, p in zip(years, np.linspace(start, stop, len(years)))}


def _validate_schedule(schedule: Mapping[int, float]) -> list[tuple[int, float]]:
    if not schedule:
        raise CorpusError("invalid schedule: empty")
    items = []
    for year, prob in schedule.items():
        if int(year) != year:
            raise CorpusError(f"invalid schedule: year {year!r}")
        if not 0.0 <= float(prob) <= 1.0:
            raise CorpusError(f"invalid schedule: probability {prob!r} for {year}")
        items.append((int(year), float(prob)))
    return sorted(items)


def generate_corpus(
    seed: int,
    n_papers: int,
    n_authors: int,
    attach_bias: float = 1.0,
    coauthor_prob_by_year: Mapping[int, float] | None = None,
    *,
    jel_frequencies: Mapping[str, float] | None = None,
    single_jel_prob: float = 0.1,
    max_authors: int = 7,
    female_share: float = 0.33,
    affiliations: Sequence[str] = ("UNLP", "UBA", "UNC", "UNS", "UCEMA", "UDESA", "UTDT", "BCRA"),
) -> Corpus:
    """Draw a synthetic corpus with preferential author selection.

    Each paper picks a year uniformly from the schedule, is coauthored with the
    scheduled probability (team size 2..max_authors, geometric tail) and picks
    authors without replacement with weight ``(papers_so_far + 1) ** attach_bias``.
    """
    if n_authors < 2:
        raise CorpusError("n_authors must be >= 2")
    if n_papers < 0:
        raise CorpusError("n_papers must be >= 0")
    if attach_bias < 0:
        raise CorpusError("attach_bias must be >= 0")
    if max_authors < 2:
        raise CorpusError("max_authors must be >= 2")
    schedule = _validate_schedule(
        coauthor_prob_by_year if coauthor_prob_by_year is not None else default_schedule()
    )
    freqs = dict(jel_frequencies if jel_frequencies is not None else default_jel_frequencies())
    codes = [normalize_jel(c) for c in freqs]
    jel_p = np.array([float(freqs[c]) for c in freqs])
    if len(codes) < 2 or np.any(jel_p < 0) or jel_p.sum() <= 0:
        raise CorpusError("invalid JEL frequency table")
    jel_p = jel_p / jel_p.sum()

    rng = np.random.default_rng(seed)
    years = np.array([y for y, _ in schedule])
    probs = dict(schedule)
    paper_years = np.sort(rng.choice(years, size=n_papers))

    width = len(str(n_authors - 1))
    names = [f"Author{i:0{width}d}, A." for i in range(n_authors)]
    genders = np.where(rng.random(n_authors) < female_share, "female", "male")
    affil_idx = rng.integers(0, len(affiliations), size=n_authors)
    directory = {
        names[i]: AuthorRecord(names[i], str(genders[i]), affiliations[affil_idx[i]])
        for i in range(n_authors)
    }

    counts = np.zeros(n_authors)
    entries = []
    pid_width = len(str(max(n_papers - 1, 0)))
    for idx, year in enumerate(paper_years):
        year = int(year)
        if rng.random() < probs[year]:
            k = 1 + int(rng.geometric(0.55))
            k = min(k, max_authors, n_authors)
        else:
            k = 1
        weights = (counts + 1.0) ** attach_bias
        chosen = rng.choice(n_authors, size=k, replace=False, p=weights / weights.sum())
        counts[chosen] += 1
        n_codes = 1 if rng.random() < single_jel_prob else 2
        jel_idx = rng.choice(len(codes), size=n_codes, replace=False, p=jel_p)
        authors = tuple(names[i] for i in chosen)
        entries.append(
            PaperEntry(
                f"p{idx:0{pid_width}d}",
                year,
                f"Synthetic paper {idx}",
                authors,
                tuple(codes[j] for j in jel_idx),
                tuple(directory[a].affiliation for a in authors),
            )
        )
    return Corpus(tuple(entries), directory)
