"""Unit tests for the pure domain logic: validation, assembly, scoring,
skill profiles."""

import random

import pytest
from conftest import GOLDEN_RESULTS, GOLDEN_SKILLS, golden_scores, make_bank, make_question, sheet_with_corrects

from examd.core import (
    DEFAULT_CATEGORIES,
    ExamBlueprint,
    InsufficientBankError,
    Question,
    UnknownQuestionError,
    assemble_exam,
    per_question_budget,
    score,
    skill_profile,
    spread_composition,
    validate_bank,
    validate_question,
)


def recount(form, sheet, weight):
    """Independent scoring oracle: walk every item, compare indices."""
    per_correct = {c: 0 for c in DEFAULT_CATEGORIES}
    for q in form.items:
        per_correct.setdefault(q.category, 0)
        if q.id in sheet and sheet[q.id] == q.correct_index:
            per_correct[q.category] += 1
    return per_correct, weight * sum(per_correct.values())


class TestValidateQuestion:
    def test_well_formed_question_is_ok(self):
        assert validate_question(make_question("Networking", 3)) == []

    def test_three_choices_is_a_defect(self):
        q = make_question("Database", 1)
        q.choices = q.choices[:3]
        defects = validate_question(q)
        assert any("choice count" in d for d in defects)

    def test_duplicate_choices_detected(self):
        q = make_question("IT", 2)
        q.choices = ["alpha", "beta ", "gamma", " beta"]
        # oracle: pairwise comparison over trimmed choices
        trimmed = [c.strip() for c in q.choices]
        has_dup = any(
            trimmed[i] == trimmed[j]
            for i in range(len(trimmed))
            for j in range(i + 1, len(trimmed))
        )
        assert has_dup
        assert any("duplicate" in d for d in validate_question(q))

    def test_blank_choice_detected(self):
        q = make_question("Security", 0)
        q.choices[2] = "   "
        assert any("blank choice" in d for d in validate_question(q))

    def test_empty_text_detected(self):
        q = make_question("Programming", 0)
        q.text = " "
        assert any("text" in d for d in validate_question(q))

    def test_out_of_range_correct_index(self):
        q = make_question("Programming", 0)
        q.correct_index = 4
        assert any("out of range" in d for d in validate_question(q))

    def test_all_defects_reported_together(self):
        q = Question(id="", category="", text="", choices=["x", "x"], correct_index=9)
        defects = validate_question(q)
        assert len(defects) >= 4


class TestValidateBank:
    def test_exact_coverage_is_ok(self, bank, blueprint):
        assert validate_bank(bank, blueprint) == []

    def test_deficient_category_reported_with_counts(self, bank, blueprint):
        # drop one Security question: 9 available, 10 required
        short = [q for q in bank if q.id != "security-0"]
        defects = validate_bank(short, blueprint)
        assert defects == ["category Security: required 10, available 9"]

    def test_duplicate_ids_reported(self, bank, blueprint):
        dup = bank + [bank[0]]
        defects = validate_bank(dup, blueprint)
        assert any("duplicate question id" in d for d in defects)


class TestAssembleExam:
    def test_exact_bank_selection_is_forced(self, bank, blueprint):
        form = assemble_exam(bank, blueprint, seed=7)
        assert sorted(form.question_ids()) == sorted(q.id for q in bank)
        assert len(form.items) == 50

    def test_same_seed_same_order(self, big_bank, blueprint):
        a = assemble_exam(big_bank, blueprint, seed=123)
        b = assemble_exam(big_bank, blueprint, seed=123)
        assert a.question_ids() == b.question_ids()

    def test_different_seeds_differ(self, big_bank, blueprint):
        a = assemble_exam(big_bank, blueprint, seed=1)
        b = assemble_exam(big_bank, blueprint, seed=2)
        assert a.question_ids() != b.question_ids()

    def test_composition_respected_across_seeds(self, big_bank, blueprint):
        for seed in range(100):
            form = assemble_exam(big_bank, blueprint, seed=seed)
            counts = {}
            for q in form.items:
                counts[q.category] = counts.get(q.category, 0) + 1
            assert counts == blueprint.composition
            assert len(set(form.question_ids())) == blueprint.n_questions

    def test_insufficient_bank_rejected(self, blueprint):
        with pytest.raises(InsufficientBankError):
            assemble_exam(make_bank(9), blueprint, seed=0)


class TestBlueprint:
    def test_default_budget_is_72_seconds(self, blueprint):
        assert per_question_budget(blueprint) == 72

    def test_default_max_score_is_100(self, blueprint):
        assert blueprint.max_score == 100

    def test_single_question_gets_whole_duration(self):
        bp = ExamBlueprint(
            n_questions=1, duration_seconds=3600, composition={"Programming": 1}
        )
        assert per_question_budget(bp) == 3600

    def test_budget_floors(self):
        bp = ExamBlueprint(
            n_questions=3, duration_seconds=100, composition={"Programming": 3}
        )
        assert per_question_budget(bp) == 33  # floor(100/3)

    def test_composition_must_sum_to_question_count(self):
        with pytest.raises(ValueError):
            ExamBlueprint(n_questions=50, composition={"Programming": 49})

    def test_duration_must_be_positive(self):
        with pytest.raises(ValueError):
            ExamBlueprint(duration_seconds=0)

    def test_spread_composition_distributes_remainder(self):
        comp = spread_composition(7, ["A", "B", "C"])
        assert comp == {"A": 3, "B": 2, "C": 2}
        assert spread_composition(50) == {c: 10 for c in DEFAULT_CATEGORIES}


class TestScore:
    def test_reference_row_scores(self, bank, blueprint):
        # per-category corrects (7,7,9,8,10) at weight 2
        form = assemble_exam(bank, blueprint, seed=3)
        wanted = {"Programming": 7, "Networking": 7, "Database": 9, "Security": 8, "IT": 10}
        sheet = sheet_with_corrects(form, wanted)
        report = score(form, sheet, blueprint, elapsed_seconds=681)
        assert report.per_category_score == {
            "Programming": 14,
            "Networking": 14,
            "Database": 18,
            "Security": 16,
            "IT": 20,
        }
        assert report.final_score == 82
        assert report.elapsed_seconds == 681

    def test_empty_sheet_scores_zero(self, bank, blueprint):
        form = assemble_exam(bank, blueprint, seed=4)
        report = score(form, {}, blueprint, elapsed_seconds=10)
        assert report.final_score == 0
        assert all(v == 0 for v in report.per_category_score.values())

    def test_all_correct_scores_100(self, bank, blueprint):
        form = assemble_exam(bank, blueprint, seed=5)
        sheet = {q.id: q.correct_index for q in form.items}
        assert score(form, sheet, blueprint, 0).final_score == 100

    def test_unanswered_questions_cost_nothing(self, bank, blueprint):
        form = assemble_exam(bank, blueprint, seed=6)
        # answer only 5 questions correctly, leave the rest blank
        sheet = {q.id: q.correct_index for q in form.items[:5]}
        assert score(form, sheet, blueprint, 0).final_score == 10

    def test_sheet_key_outside_form_rejected(self, bank, blueprint):
        form = assemble_exam(bank, blueprint, seed=7)
        with pytest.raises(UnknownQuestionError):
            score(form, {"nope": 0}, blueprint, 0)

    def test_out_of_range_choice_rejected(self, bank, blueprint):
        form = assemble_exam(bank, blueprint, seed=8)
        with pytest.raises(ValueError):
            score(form, {form.items[0].id: 4}, blueprint, 0)


class TestScoringProperties:
    def test_matches_brute_force_recount(self, big_bank, blueprint):
        rng = random.Random(99)
        for trial in range(200):
            form = assemble_exam(big_bank, blueprint, seed=rng.getrandbits(32))
            sheet = {
                q.id: rng.randrange(4)
                for q in form.items
                if rng.random() < 0.8  # leave some unanswered
            }
            report = score(form, sheet, blueprint, 0)
            per_correct, final = recount(form, sheet, blueprint.per_question_weight)
            assert report.per_category_correct == per_correct
            assert report.final_score == final

    def test_linearity_in_correct_count(self, bank, blueprint):
        form = assemble_exam(bank, blueprint, seed=11)
        sheet = {q.id: q.correct_index for q in form.items[:20]}
        report = score(form, sheet, blueprint, 0)
        assert report.final_score == blueprint.per_question_weight * 20

    def test_one_more_correct_adds_exactly_the_weight(self, bank, blueprint):
        form = assemble_exam(bank, blueprint, seed=12)
        sheet = {q.id: q.correct_index for q in form.items[:10]}
        base = score(form, sheet, blueprint, 0).final_score
        sheet[form.items[10].id] = form.items[10].correct_index
        assert score(form, sheet, blueprint, 0).final_score == base + 2

    def test_one_more_wrong_changes_nothing(self, bank, blueprint):
        form = assemble_exam(bank, blueprint, seed=13)
        sheet = {q.id: q.correct_index for q in form.items[:10]}
        base = score(form, sheet, blueprint, 0).final_score
        q = form.items[10]
        sheet[q.id] = (q.correct_index + 1) % 4
        assert score(form, sheet, blueprint, 0).final_score == base


class TestSkillProfile:
    def test_single_best_two_poor(self):
        profile = skill_profile(
            {"Programming": 14, "Networking": 14, "Database": 18, "Security": 16, "IT": 20}
        )
        assert profile.best == {"IT"}
        assert profile.poor == {"Programming", "Networking"}
        assert profile.best_label == "IT"
        assert profile.poor_label == "Programming and Networking"
        assert not profile.uniform

    def test_three_way_best_collapses_to_rest_label(self):
        profile = skill_profile(
            {"Programming": 16, "Networking": 16, "Database": 14, "Security": 12, "IT": 16}
        )
        assert profile.best == {"Programming", "Networking", "IT"}
        assert profile.best_label == "The rest of subjects"
        assert profile.poor_label == "Security"

    def test_all_tied_is_balanced(self):
        profile = skill_profile({c: 10 for c in DEFAULT_CATEGORIES})
        assert profile.uniform
        assert profile.best_label == "balanced"
        assert profile.poor_label == "balanced"
        assert profile.best == profile.poor == frozenset(DEFAULT_CATEGORIES)

    def test_disjoint_unless_uniform(self):
        rng = random.Random(5)
        for _ in range(200):
            scores = {c: rng.randrange(0, 21, 2) for c in DEFAULT_CATEGORIES}
            profile = skill_profile(scores)
            if profile.uniform:
                assert len(set(scores.values())) == 1
            else:
                assert not (profile.best & profile.poor)

    def test_shift_invariance(self):
        rng = random.Random(6)
        for _ in range(100):
            scores = {c: rng.randrange(0, 21, 2) for c in DEFAULT_CATEGORIES}
            shifted = {c: v + 7 for c, v in scores.items()}
            a, b = skill_profile(scores), skill_profile(shifted)
            assert a.best == b.best and a.poor == b.poor

    def test_empty_scores_rejected(self):
        with pytest.raises(ValueError):
            skill_profile({})


class TestGoldenCohort:
    def test_category_scores_sum_to_final(self):
        for row in GOLDEN_RESULTS:
            assert sum(golden_scores(row).values()) == row[7]

    def test_score_reproduces_every_row(self, bank, blueprint):
        for row in GOLDEN_RESULTS:
            corrects = {c: pts // 2 for c, pts in golden_scores(row).items()}
            form = assemble_exam(bank, blueprint, seed=17)
            sheet = sheet_with_corrects(form, corrects)
            report = score(form, sheet, blueprint, row[8])
            assert report.per_category_score == golden_scores(row)
            assert report.final_score == row[7]

    def test_skill_labels_reproduce_every_row(self):
        for row in GOLDEN_RESULTS:
            name = f"{row[0]} {row[1]}"
            profile = skill_profile(golden_scores(row))
            assert (profile.best_label, profile.poor_label) == GOLDEN_SKILLS[name]
