"""Shared fixtures: synthetic question banks and the reference cohort used
by the golden reporting tests."""

from __future__ import annotations

import pytest

from examd.core import DEFAULT_CATEGORIES, ExamBlueprint, Question


def make_question(category: str, i: int) -> Question:
    return Question(
        id=f"{category.lower()}-{i}",
        category=category,
        text=f"({category} #{i}) Which of the following is right?",
        choices=[f"option A{i}", f"option B{i}", f"option C{i}", f"option D{i}"],
        correct_index=i % 4,
    )


def make_bank(per_category: int = 10, categories=DEFAULT_CATEGORIES) -> list[Question]:
    return [make_question(c, i) for c in categories for i in range(per_category)]


@pytest.fixture
def bank():
    return make_bank(10)


@pytest.fixture
def big_bank():
    return make_bank(30)


@pytest.fixture
def blueprint():
    return ExamBlueprint()


# Reference cohort: 10 candidates with per-category scores (weight 2),
# final score, elapsed seconds, and the expected best/poor skill labels.
# Scores are points, so correct counts are score/2.
GOLDEN_RESULTS = [
    # first, last, Programming, Networking, Database, Security, IT, final, elapsed
    ("Aram", "Kamal", 12, 12, 12, 12, 14, 62, 3517),
    ("Havar", "Bakhtyar", 12, 6, 14, 10, 12, 54, 1909),
    ("Bilal", "Najmaddin", 14, 14, 18, 16, 20, 82, 681),
    ("Haidar", "Abdulrahman", 16, 16, 14, 12, 16, 74, 2782),
    ("Hazhar", "Najat", 10, 14, 18, 14, 18, 74, 2291),
    ("Snwr", "Jamal", 4, 8, 4, 6, 10, 32, 1807),
    ("Bestan", "Bahaddin", 16, 8, 14, 12, 18, 68, 1443),
    ("Nyaz", "Ali", 10, 12, 10, 10, 16, 58, 2473),
    ("Rebwar", "Rashid", 12, 6, 8, 6, 18, 50, 2842),
    ("Huner", "Hiwa", 8, 6, 8, 8, 10, 40, 1839),
]

GOLDEN_SKILLS = {
    "Aram Kamal": ("IT", "The rest of subjects"),
    "Havar Bakhtyar": ("Database", "Networking"),
    "Bilal Najmaddin": ("IT", "Programming and Networking"),
    "Haidar Abdulrahman": ("The rest of subjects", "Security"),
    "Hazhar Najat": ("Database and IT", "Programming"),
    "Snwr Jamal": ("IT", "Database and Programming"),
    "Bestan Bahaddin": ("IT", "Networking"),
    "Nyaz Ali": ("IT", "The rest of subjects"),
    "Rebwar Rashid": ("IT", "Networking and Security"),
    "Huner Hiwa": ("IT", "Networking"),
}


def golden_scores(row) -> dict[str, int]:
    return dict(zip(DEFAULT_CATEGORIES, row[2:7]))


class FakeClock:
    """Deterministic stand-in for the server clock."""

    def __init__(self, t: float = 1_000_000.0):
        self.t = t

    def __call__(self) -> float:
        return self.t

    def advance(self, dt: float) -> None:
        self.t += dt


# The report's aggregate count-of-correct-answers column is score data,
# not key data; everything else smelling of "correct" is treated as a leak.
ANSWER_KEY_EXEMPT = {"per_category_correct"}


def find_answer_key_leaks(obj, path="$"):
    """Walk any JSON-ish structure and flag keys that smell like an answer
    key. Used against everything a candidate can see before feedback."""
    leaks = []
    if isinstance(obj, dict):
        for k, v in obj.items():
            suspicious = isinstance(k, str) and (
                "correct" in k.lower() or "answer_key" in k.lower()
            )
            if suspicious and k not in ANSWER_KEY_EXEMPT:
                leaks.append(f"{path}.{k}")
            leaks += find_answer_key_leaks(v, f"{path}.{k}")
    elif isinstance(obj, (list, tuple)):
        for i, v in enumerate(obj):
            leaks += find_answer_key_leaks(v, f"{path}[{i}]")
    return leaks


def sheet_with_corrects(form, wanted: dict[str, int], answer_everything=True):
    """Craft an answer sheet hitting an exact per-category correct count.

    The first `wanted[c]` questions of each category get the right choice;
    the rest get a deliberately wrong one (or stay blank).
    """
    seen: dict[str, int] = {}
    sheet: dict[str, int] = {}
    for q in form.items:
        k = seen.get(q.category, 0)
        seen[q.category] = k + 1
        if k < wanted.get(q.category, 0):
            sheet[q.id] = q.correct_index
        elif answer_everything:
            sheet[q.id] = (q.correct_index + 1) % 4
    return sheet
