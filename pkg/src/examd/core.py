"""Pure domain logic for the skill evaluation test.

Question-bank validation, blueprint-driven randomized exam assembly,
scoring, and per-category skill analytics. Everything in this module is a
pure function over its inputs: no I/O, no clock, no global state.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Iterable, Mapping

Category = str

DEFAULT_CATEGORIES: tuple[Category, ...] = (
    "Programming",
    "Networking",
    "Database",
    "Security",
    "IT",
)

DEFAULT_QUESTION_COUNT = 50
DEFAULT_DURATION_SECONDS = 3600
DEFAULT_WEIGHT = 2

REST_LABEL = "The rest of subjects"
BALANCED_LABEL = "balanced"

# Join order for tied categories inside a skill label. This is a display
# precedence, deliberately distinct from the report column order.
_LABEL_PRECEDENCE = ("Database", "Programming", "Networking", "Security", "IT")


class InsufficientBankError(ValueError):
    """The question bank cannot cover the blueprint's composition."""


class UnknownQuestionError(KeyError):
    """An answer sheet references a question that is not on the form."""


@dataclass
class Question:
    """A categorized multiple-choice item with exactly one correct choice."""

    id: str
    category: Category
    text: str
    choices: list[str]
    correct_index: int

    def to_dict(self) -> dict:
        return {
            "id": self.id,
            "category": self.category,
            "text": self.text,
            "choices": list(self.choices),
            "correct_index": self.correct_index,
        }

    @classmethod
    def from_dict(cls, data: Mapping) -> "Question":
        return cls(
            id=str(data["id"]),
            category=str(data["category"]),
            text=str(data["text"]),
            choices=[str(c) for c in data["choices"]],
            correct_index=int(data["correct_index"]),
        )


@dataclass
class ExamBlueprint:
    """Test parameters: question count, duration, per-question weight and
    the per-category composition of the form.

    The defaults describe the standard evaluation: 50 questions, 60 minutes,
    2 points each (max 100), 10 questions from each of the five canonical
    categories.
    """

    n_questions: int = DEFAULT_QUESTION_COUNT
    duration_seconds: int = DEFAULT_DURATION_SECONDS
    per_question_weight: int = DEFAULT_WEIGHT
    composition: dict[Category, int] = field(
        default_factory=lambda: {c: 10 for c in DEFAULT_CATEGORIES}
    )

    def __post_init__(self) -> None:
        if self.n_questions <= 0:
            raise ValueError("n_questions must be positive")
        if self.duration_seconds <= 0:
            raise ValueError("duration must be positive")
        if self.per_question_weight <= 0:
            raise ValueError("per-question weight must be positive")
        if any(not c.strip() for c in self.composition):
            raise ValueError("category names must be non-empty")
        total = sum(self.composition.values())
        if total != self.n_questions:
            raise ValueError(
                f"composition sums to {total}, expected {self.n_questions}"
            )

    @property
    def categories(self) -> tuple[Category, ...]:
        return tuple(self.composition)

    @property
    def max_score(self) -> int:
        return self.n_questions * self.per_question_weight


def spread_composition(
    n_questions: int, categories: Iterable[Category] = DEFAULT_CATEGORIES
) -> dict[Category, int]:
    """Distribute n questions as evenly as possible over the categories.

    Any remainder goes to the earliest categories, one extra each.
    """
    cats = list(categories)
    if not cats:
        raise ValueError("at least one category required")
    base, extra = divmod(n_questions, len(cats))
    return {c: base + (1 if i < extra else 0) for i, c in enumerate(cats)}


@dataclass
class ExamForm:
    """A concrete randomized question list assembled for one session."""

    form_id: str
    items: list[Question]
    seed: int

    def question_ids(self) -> list[str]:
        return [q.id for q in self.items]

    def by_id(self, question_id: str) -> Question:
        for q in self.items:
            if q.id == question_id:
                return q
        raise UnknownQuestionError(question_id)


# question_id -> chosen choice index; unanswered questions are simply absent
AnswerSheet = dict[str, int]


@dataclass
class ScoreReport:
    """Per-category correct counts and scores plus the weighted final."""

    per_category_correct: dict[Category, int]
    per_category_score: dict[Category, int]
    final_score: int
    elapsed_seconds: int

    def to_dict(self) -> dict:
        return {
            "per_category_correct": dict(self.per_category_correct),
            "per_category_score": dict(self.per_category_score),
            "final_score": self.final_score,
            "elapsed_seconds": self.elapsed_seconds,
        }


@dataclass
class SkillProfile:
    """Best/poor category sets with their display labels."""

    best: frozenset[Category]
    poor: frozenset[Category]
    best_label: str
    poor_label: str
    uniform: bool


def validate_question(q: Question) -> list[str]:
    """Check one question against the bank rules.

    Returns every defect found; an empty list means the question is valid.
    Defects are return values, never exceptions.
    """
    defects: list[str] = []
    if not q.id or not str(q.id).strip():
        defects.append("empty id")
    if not q.category or not q.category.strip():
        defects.append("empty category")
    if not q.text or not q.text.strip():
        defects.append("empty question text")
    if len(q.choices) != 4:
        defects.append(f"choice count != 4 (got {len(q.choices)})")
    trimmed = [c.strip() for c in q.choices]
    for i, c in enumerate(trimmed):
        if not c:
            defects.append(f"blank choice at position {i}")
    if len(set(trimmed)) != len(trimmed):
        defects.append("duplicate choices")
    if not 0 <= q.correct_index < len(q.choices) or q.correct_index > 3:
        defects.append(f"correct index {q.correct_index} out of range")
    return defects


def validate_bank(bank: list[Question], bp: ExamBlueprint) -> list[str]:
    """Check that the bank can cover the blueprint.

    Reports each deficient category with (required, available) and any
    duplicated question ids. Individual question validity is assumed.
    """
    defects: list[str] = []
    seen: set[str] = set()
    for q in bank:
        if q.id in seen:
            defects.append(f"duplicate question id: {q.id}")
        seen.add(q.id)
    available: dict[Category, int] = {}
    for q in bank:
        available[q.category] = available.get(q.category, 0) + 1
    for category, required in bp.composition.items():
        have = available.get(category, 0)
        if have < required:
            defects.append(
                f"category {category}: required {required}, available {have}"
            )
    return defects


def assemble_exam(bank: list[Question], bp: ExamBlueprint, seed: int) -> ExamForm:
    """Build a randomized exam form for the blueprint.

    Picks composition[c] questions uniformly from each category's pool, then
    shuffles the whole selection so items are not grouped by subject. Equal
    (bank, blueprint, seed) always yields an identical form.
    """
    defects = validate_bank(bank, bp)
    if defects:
        raise InsufficientBankError("; ".join(defects))
    rng = random.Random(seed)
    selected: list[Question] = []
    for category, count in bp.composition.items():
        pool = [q for q in bank if q.category == category]
        selected.extend(rng.sample(pool, count))
    rng.shuffle(selected)
    return ExamForm(form_id=f"form-{seed}", items=selected, seed=seed)


def per_question_budget(bp: ExamBlueprint) -> int:
    """Advisory seconds per question: floor(duration / question count)."""
    return bp.duration_seconds // bp.n_questions


def score(
    form: ExamForm, sheet: AnswerSheet, bp: ExamBlueprint, elapsed_seconds: int
) -> ScoreReport:
    """Grade an answer sheet against a form.

    An answer is correct iff the chosen index equals the question's correct
    index; unanswered questions count as incorrect with no penalty. Each
    correct answer is worth the blueprint's per-question weight.
    """
    form_ids = set(form.question_ids())
    for qid, idx in sheet.items():
        if qid not in form_ids:
            raise UnknownQuestionError(qid)
        if not 0 <= idx <= 3:
            raise ValueError(f"chosen index {idx} out of range for {qid}")
    correct = {c: 0 for c in bp.composition}
    for q in form.items:
        correct.setdefault(q.category, 0)
        if sheet.get(q.id) == q.correct_index:
            correct[q.category] += 1
    scores = {c: n * bp.per_question_weight for c, n in correct.items()}
    return ScoreReport(
        per_category_correct=correct,
        per_category_score=scores,
        final_score=sum(scores.values()),
        elapsed_seconds=elapsed_seconds,
    )


def _label(categories: frozenset[Category]) -> str:
    if len(categories) >= 3:
        return REST_LABEL
    order = {c: i for i, c in enumerate(_LABEL_PRECEDENCE)}
    ranked = sorted(categories, key=lambda c: (order.get(c, len(order)), c))
    return " and ".join(ranked)


def skill_profile(report: ScoreReport | Mapping[Category, int]) -> SkillProfile:
    """Derive the best/poor subject sets from per-category scores.

    Best is the argmax set, poor the argmin. Three or more tied categories
    are summarized as "The rest of subjects"; one or two are named. When
    every category ties there is no meaningful split and both sides read
    "balanced".
    """
    if isinstance(report, ScoreReport):
        scores: Mapping[Category, int] = report.per_category_score
    else:
        scores = report
    if not scores:
        raise ValueError("at least one category required")
    hi = max(scores.values())
    lo = min(scores.values())
    if hi == lo:
        everything = frozenset(scores)
        return SkillProfile(
            best=everything,
            poor=everything,
            best_label=BALANCED_LABEL,
            poor_label=BALANCED_LABEL,
            uniform=True,
        )
    best = frozenset(c for c, v in scores.items() if v == hi)
    poor = frozenset(c for c, v in scores.items() if v == lo)
    return SkillProfile(
        best=best,
        poor=poor,
        best_label=_label(best),
        poor_label=_label(poor),
        uniform=False,
    )
