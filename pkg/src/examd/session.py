"""Server-authoritative lifecycle of a candidate's exam attempt.

State machine, deadline enforcement, answer recording, submission and
automatic expiry. All timestamps passed in are server clock readings;
client-reported times never reach this module.
"""

from __future__ import annotations

import enum
import random
import threading
import uuid
from dataclasses import dataclass, field
from typing import Callable, Optional

from .core import (
    AnswerSheet,
    ExamBlueprint,
    ExamForm,
    Question,
    ScoreReport,
    UnknownQuestionError,
    assemble_exam,
    per_question_budget,
    score,
)


class Phase(enum.Enum):
    REGISTERED = "registered"
    INFO_SHOWN = "info_shown"
    IN_PROGRESS = "in_progress"
    SUBMITTED = "submitted"
    EXPIRED = "expired"


TERMINAL_PHASES = frozenset({Phase.SUBMITTED, Phase.EXPIRED})


class InvalidStateError(Exception):
    """Operation not allowed in the session's current phase."""

    def __init__(self, phase: Phase, operation: str):
        super().__init__(f"cannot {operation} while session is {phase.value}")
        self.phase = phase
        self.operation = operation


class DeadlineExceededError(Exception):
    """The server deadline has passed; the attempted change was discarded."""


class DuplicateSessionError(Exception):
    """The candidate already has a session that is not finished."""


@dataclass
class ExamInfo:
    """What the candidate sees on the information page before starting."""

    subject_name: str
    n_questions: int
    duration_seconds: int
    per_question_budget: int
    schedule_policy: str


@dataclass
class FeedbackItem:
    number: int
    question_id: str
    text: str
    choices: list[str]
    chosen_index: Optional[int]
    correct_index: int
    verdict: str  # correct | wrong | unanswered


@dataclass
class ExamSession:
    session_id: str
    candidate: str
    form: ExamForm
    sheet: AnswerSheet = field(default_factory=dict)
    phase: Phase = Phase.REGISTERED
    started_at: Optional[float] = None
    deadline: Optional[float] = None
    finished_at: Optional[float] = None
    report: Optional[ScoreReport] = None
    lock: threading.Lock = field(default_factory=threading.Lock, repr=False)

    @property
    def finished(self) -> bool:
        return self.phase in TERMINAL_PHASES


def form_view(form: ExamForm) -> list[dict]:
    """The candidate-facing rendering of a form: questions and choices only.

    Correct indices must never appear here; they stay server-side until the
    session reaches a terminal phase.
    """
    return [
        {
            "number": i + 1,
            "id": q.id,
            "category": q.category,
            "text": q.text,
            "choices": list(q.choices),
        }
        for i, q in enumerate(form.items)
    ]


class SessionEngine:
    """Holds every live session and serializes operations per session.

    Distinct sessions never block each other; the registry lock only guards
    session creation and lookup. A finalizer (submit, late answer, sweep)
    that loses the race simply finds the session already terminal.
    """

    def __init__(
        self,
        bank: list[Question],
        blueprint: ExamBlueprint,
        subject_name: str = "Computer Science",
        on_finalize: Optional[Callable[[ExamSession, ScoreReport], None]] = None,
    ):
        self.bank = bank
        self.blueprint = blueprint
        self.subject_name = subject_name
        self.on_finalize = on_finalize
        self._sessions: dict[str, ExamSession] = {}
        self._by_candidate: dict[str, str] = {}
        self._registry_lock = threading.Lock()
        self._seed_rng = random.SystemRandom()

    # -- registry -----------------------------------------------------

    def create_session(self, candidate: str, seed: Optional[int] = None) -> ExamSession:
        with self._registry_lock:
            existing_id = self._by_candidate.get(candidate)
            if existing_id is not None and not self._sessions[existing_id].finished:
                raise DuplicateSessionError(
                    f"candidate {candidate} already has an active session"
                )
            if seed is None:
                seed = self._seed_rng.getrandbits(63)
            form = assemble_exam(self.bank, self.blueprint, seed)
            session = ExamSession(
                session_id=uuid.uuid4().hex,
                candidate=candidate,
                form=form,
            )
            self._sessions[session.session_id] = session
            self._by_candidate[candidate] = session.session_id
            return session

    def get_session(self, session_id: str) -> Optional[ExamSession]:
        with self._registry_lock:
            return self._sessions.get(session_id)

    def session_for(self, candidate: str) -> Optional[ExamSession]:
        with self._registry_lock:
            session_id = self._by_candidate.get(candidate)
            return self._sessions.get(session_id) if session_id else None

    def all_sessions(self) -> list[ExamSession]:
        with self._registry_lock:
            return list(self._sessions.values())

    # -- lifecycle ----------------------------------------------------

    def present_info(self, session: ExamSession) -> ExamInfo:
        with session.lock:
            if session.phase not in (Phase.REGISTERED, Phase.INFO_SHOWN):
                raise InvalidStateError(session.phase, "show exam info")
            session.phase = Phase.INFO_SHOWN
            bp = self.blueprint
            minutes = bp.duration_seconds // 60
            return ExamInfo(
                subject_name=self.subject_name,
                n_questions=bp.n_questions,
                duration_seconds=bp.duration_seconds,
                per_question_budget=per_question_budget(bp),
                schedule_policy=(
                    f"The countdown starts the moment you begin and the test "
                    f"ends {minutes} minutes later; answers lock automatically "
                    f"at the deadline."
                ),
            )

    def start_exam(self, session: ExamSession, now: float) -> tuple[float, list[dict]]:
        with session.lock:
            if session.phase is not Phase.INFO_SHOWN:
                raise InvalidStateError(session.phase, "start the exam")
            session.phase = Phase.IN_PROGRESS
            session.started_at = now
            session.deadline = now + self.blueprint.duration_seconds
            return session.deadline, form_view(session.form)

    def record_answer(
        self, session: ExamSession, question_id: str, chosen_index: int, now: float
    ) -> int:
        """Upsert one answer; returns how many questions are answered so far.

        A write at or past the deadline is discarded, the session expires on
        the spot, and the caller gets DeadlineExceededError.
        """
        with session.lock:
            if session.phase is not Phase.IN_PROGRESS:
                raise InvalidStateError(session.phase, "record an answer")
            if now >= session.deadline:
                self._finalize_expired(session)
                raise DeadlineExceededError("answer arrived after the deadline")
            if question_id not in set(session.form.question_ids()):
                raise UnknownQuestionError(question_id)
            if not 0 <= chosen_index <= 3:
                raise ValueError(f"chosen index {chosen_index} out of range")
            session.sheet[question_id] = chosen_index
            return len(session.sheet)

    def resume(self, session: ExamSession) -> tuple[float, AnswerSheet, list[dict]]:
        """Re-fetch the live form view plus what is answered so far.

        Lets a client that reloaded mid-exam pick up where it left off.
        """
        with session.lock:
            if session.phase is not Phase.IN_PROGRESS:
                raise InvalidStateError(session.phase, "list questions")
            return session.deadline, dict(session.sheet), form_view(session.form)

    def submit(self, session: ExamSession, now: float) -> ScoreReport:
        """Finalize the attempt and grade it.

        On time: Submitted, elapsed = now - start. Past the deadline the
        session expires instead, graded from the answers that made it in
        before the deadline (answer recording already guarantees that).
        """
        with session.lock:
            if session.phase is not Phase.IN_PROGRESS:
                raise InvalidStateError(session.phase, "submit")
            if now > session.deadline:
                self._finalize_expired(session)
                return session.report
            session.phase = Phase.SUBMITTED
            session.finished_at = now
            elapsed = int(now - session.started_at)
            session.report = score(
                session.form, session.sheet, self.blueprint, elapsed
            )
            self._emit_finalized(session)
            return session.report

    def expire_sweep(self, now: float) -> list[ExamSession]:
        """Expire every in-progress session whose deadline has passed.

        Idempotent: terminal sessions are untouched, so sweeping twice
        finalizes nothing new.
        """
        finalized = []
        for session in self.all_sessions():
            with session.lock:
                if session.phase is Phase.IN_PROGRESS and session.deadline < now:
                    self._finalize_expired(session)
                    finalized.append(session)
        return finalized

    def feedback(self, session: ExamSession) -> tuple[list[FeedbackItem], ScoreReport]:
        """Reveal per-question verdicts and correct choices.

        Only available once the session is terminal; while the attempt is
        live the answer key stays secret.
        """
        with session.lock:
            if session.phase not in TERMINAL_PHASES:
                raise InvalidStateError(session.phase, "view feedback")
            items = []
            for i, q in enumerate(session.form.items):
                chosen = session.sheet.get(q.id)
                if chosen is None:
                    verdict = "unanswered"
                elif chosen == q.correct_index:
                    verdict = "correct"
                else:
                    verdict = "wrong"
                items.append(
                    FeedbackItem(
                        number=i + 1,
                        question_id=q.id,
                        text=q.text,
                        choices=list(q.choices),
                        chosen_index=chosen,
                        correct_index=q.correct_index,
                        verdict=verdict,
                    )
                )
            return items, session.report

    # -- internals ----------------------------------------------------

    def _finalize_expired(self, session: ExamSession) -> None:
        # Caller holds the session lock. Late finalization scores exactly
        # what was recorded before the deadline; elapsed is the full window.
        session.phase = Phase.EXPIRED
        session.finished_at = session.deadline
        session.report = score(
            session.form,
            session.sheet,
            self.blueprint,
            self.blueprint.duration_seconds,
        )
        self._emit_finalized(session)

    def _emit_finalized(self, session: ExamSession) -> None:
        if self.on_finalize is not None:
            self.on_finalize(session, session.report)
