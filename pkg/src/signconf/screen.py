"""Apply a sign policy to a batch of estimates read from CSV.

Input columns are ``id,estimate,se[,df]``; a missing or empty ``df`` means
a normal reference distribution.  Bad rows do not stop the batch: each
one becomes a :class:`RowError` in the output sequence and is counted in
the summary.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from typing import Iterable, Sequence, TextIO, Union

from .errors import DomainError
from .signpolicy import Decision, SignPolicy, decide

INPUT_COLUMNS = ("id", "estimate", "se")
OUTPUT_COLUMNS = ("id", "z", "p1", "decision", "p_sign")


@dataclass(frozen=True)
class TestRecord:
    __test__ = False  # not a pytest class

    id: str
    estimate: float
    se: float
    df: float = math.inf


@dataclass(frozen=True)
class ScreenResult:
    id: str
    z: float
    p1: float
    decision: Decision
    p_sign: float | None


@dataclass(frozen=True)
class RowError:
    id: str | None
    line: int | None
    message: str


@dataclass(frozen=True)
class ScreenSummary:
    n_total: int
    n_rejected: int
    n_sign_declared: int
    n_errors: int = 0

    @property
    def fraction_sign_declared_of_rejected(self) -> float | None:
        if self.n_rejected == 0:
            return None
        return self.n_sign_declared / self.n_rejected


Entry = Union[TestRecord, RowError]


def screen_batch(records: Iterable[Entry], policy: SignPolicy
                 ) -> tuple[list[ScreenResult | RowError], ScreenSummary]:
    """Decide every record independently; output order follows input order.

    ``n_total`` counts successfully screened records only.
    """
    out: list[ScreenResult | RowError] = []
    seen: set[str] = set()
    n_ok = n_rej = n_sign = n_err = 0
    for rec in records:
        if isinstance(rec, RowError):
            out.append(rec)
            n_err += 1
            continue
        if rec.id in seen:
            out.append(RowError(rec.id, None, f"duplicate id {rec.id!r}"))
            n_err += 1
            continue
        seen.add(rec.id)
        try:
            rep = decide(rec.estimate, rec.se, rec.df, policy=policy)
        except DomainError as exc:
            out.append(RowError(rec.id, None, str(exc)))
            n_err += 1
            continue
        out.append(ScreenResult(rec.id, rep.z, rep.p1, rep.decision, rep.p_sign))
        n_ok += 1
        n_rej += rep.decision.rejected
        n_sign += rep.decision.sign_declared
    return out, ScreenSummary(n_ok, n_rej, n_sign, n_err)


def _parse_float(text: str, name: str) -> float:
    try:
        return float(text)
    except (TypeError, ValueError):
        raise DomainError(f"{name} is not a number: {text!r}") from None


def read_records(stream: TextIO) -> list[Entry]:
    """Parse the input CSV into records, turning unparseable rows into errors."""
    reader = csv.DictReader(stream)
    fields = reader.fieldnames or []
    missing = [c for c in INPUT_COLUMNS if c not in fields]
    if missing:
        raise DomainError(f"input CSV lacks column(s): {', '.join(missing)}")
    has_df = "df" in fields
    entries: list[Entry] = []
    for row in reader:
        line = reader.line_num
        rid = (row.get("id") or "").strip()
        try:
            if not rid:
                raise DomainError("empty id")
            estimate = _parse_float(row.get("estimate"), "estimate")
            se = _parse_float(row.get("se"), "se")
            df_text = (row.get("df") or "").strip() if has_df else ""
            df = _parse_float(df_text, "df") if df_text else math.inf
        except DomainError as exc:
            entries.append(RowError(rid or None, line, str(exc)))
            continue
        entries.append(TestRecord(rid, estimate, se, df))
    return entries


def _num(value: float | None) -> str:
    return "" if value is None else repr(float(value))


def write_results(results: Sequence[ScreenResult | RowError], out: TextIO) -> None:
    """Write screened rows; error rows are skipped (report them separately)."""
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(OUTPUT_COLUMNS)
    for r in results:
        if isinstance(r, RowError):
            continue
        writer.writerow([r.id, _num(r.z), _num(r.p1), r.decision.value, _num(r.p_sign)])


def format_summary(summary: ScreenSummary) -> str:
    frac = summary.fraction_sign_declared_of_rejected
    return (
        f"n_total={summary.n_total} n_rejected={summary.n_rejected} "
        f"n_sign_declared={summary.n_sign_declared} "
        f"fraction_sign_declared_of_rejected={'' if frac is None else repr(frac)} "
        f"n_errors={summary.n_errors}"
    )
