"""Result reporting: aligned tables for humans, CSV for machines.

The results table recomputes every row's total and refuses to render a row
whose stored final disagrees with its category scores. Elapsed time is
stored as integer seconds and rendered as minutes.seconds (so 3517 s shows
as "58.37").
"""

from __future__ import annotations

import csv
import io

from .core import DEFAULT_CATEGORIES, Category, skill_profile
from .store import StoredResult

RESULTS_CSV_HEADER = [
    "first_name",
    "last_name",
    "programming",
    "networking",
    "database",
    "security",
    "it",
    "final",
    "elapsed_seconds",
]

_CSV_CATEGORY_COLUMNS = {
    "programming": "Programming",
    "networking": "Networking",
    "database": "Database",
    "security": "Security",
    "it": "IT",
}


class ResultIntegrityError(Exception):
    """A stored row's final does not equal the sum of its category scores."""


def render_elapsed(seconds: int) -> str:
    minutes, secs = divmod(int(seconds), 60)
    return f"{minutes}.{secs:02d}"


def _check_row(index: int, result: StoredResult) -> None:
    total = sum(result.per_category_score.values())
    if total != result.final_score:
        raise ResultIntegrityError(
            f"row {index} ({result.candidate_name}): category scores sum to "
            f"{total} but stored final is {result.final_score}"
        )


def _category_columns(results: list[StoredResult]) -> list[Category]:
    """Canonical categories first, then any extras in appearance order."""
    columns = [c for c in DEFAULT_CATEGORIES]
    for r in results:
        for c in r.per_category_score:
            if c not in columns:
                columns.append(c)
    return columns


def _render_aligned(headers: list[str], rows: list[list[str]], numeric: set[int]) -> str:
    widths = [len(h) for h in headers]
    for row in rows:
        for i, cell in enumerate(row):
            widths[i] = max(widths[i], len(cell))
    lines = []
    for cells in [headers] + rows:
        padded = [
            cell.rjust(widths[i]) if i in numeric and cells is not headers else cell.ljust(widths[i])
            for i, cell in enumerate(cells)
        ]
        lines.append("  ".join(padded).rstrip())
    return "\n".join(lines) + "\n"


def results_table(results: list[StoredResult]) -> str:
    """Aligned text table of every stored result, in append order."""
    categories = _category_columns(results)
    headers = ["First Name", "Last Name", *categories, "Final", "Time"]
    rows = []
    for i, r in enumerate(results, start=1):
        _check_row(i, r)
        rows.append(
            [
                r.first_name,
                r.last_name,
                *[str(r.per_category_score.get(c, 0)) for c in categories],
                str(r.final_score),
                f"{render_elapsed(r.elapsed_seconds)} Sec",
            ]
        )
    numeric = set(range(2, 2 + len(categories) + 1))
    return _render_aligned(headers, rows, numeric)


def results_csv(results: list[StoredResult]) -> str:
    """RFC-4180 CSV of all results with the fixed canonical columns."""
    buf = io.StringIO()
    writer = csv.writer(buf)
    writer.writerow(RESULTS_CSV_HEADER)
    for i, r in enumerate(results, start=1):
        _check_row(i, r)
        writer.writerow(
            [
                r.first_name,
                r.last_name,
                *[
                    r.per_category_score.get(cat, 0)
                    for cat in _CSV_CATEGORY_COLUMNS.values()
                ],
                r.final_score,
                r.elapsed_seconds,
            ]
        )
    return buf.getvalue()


def skills_rows(results: list[StoredResult]) -> list[tuple[str, str, str]]:
    """(candidate, best label, poor label) per result, sorted by name."""
    rows = []
    for i, r in enumerate(results, start=1):
        _check_row(i, r)
        profile = skill_profile(r.per_category_score)
        rows.append((r.candidate_name, profile.best_label, profile.poor_label))
    return sorted(rows, key=lambda row: row[0])


def skills_table(results: list[StoredResult]) -> str:
    headers = ["Student Name", "Best Skills", "Poor Skills"]
    rows = [list(row) for row in skills_rows(results)]
    return _render_aligned(headers, rows, numeric=set())


def skills_csv(results: list[StoredResult]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf)
    writer.writerow(["student_name", "best_skills", "poor_skills"])
    writer.writerows(skills_rows(results))
    return buf.getvalue()


def chart_csv(results: list[StoredResult]) -> str:
    """Long-format per-candidate data for plotting.

    One row per (candidate, category) score and one final row per
    candidate, tagged with the pseudo-category "final".
    """
    buf = io.StringIO()
    writer = csv.writer(buf)
    writer.writerow(["candidate", "category", "score"])
    for i, r in enumerate(results, start=1):
        _check_row(i, r)
        ordered = [c for c in DEFAULT_CATEGORIES if c in r.per_category_score]
        ordered += [c for c in r.per_category_score if c not in ordered]
        for c in ordered:
            writer.writerow([r.candidate_name, c, r.per_category_score[c]])
        writer.writerow([r.candidate_name, "final", r.final_score])
    return buf.getvalue()


def export_results_csv(results: list[StoredResult]) -> str:
    """The CSV body served by the results export endpoint."""
    return results_csv(results)
