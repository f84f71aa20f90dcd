"""HTTP facade binding auth, sessions, scoring and the store.

Stateless JSON-over-HTTP with bearer tokens; every deadline decision uses
the server clock. Responses before a session is terminal never carry a
correct answer index.
"""

from __future__ import annotations

import json
import threading
import time
from contextlib import asynccontextmanager
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Optional

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse, PlainTextResponse
from fastapi.staticfiles import StaticFiles
from pydantic import BaseModel

from . import reporting
from .auth import AuthService, BadCredentialsError, ForbiddenError, TokenRejectedError
from .core import (
    DEFAULT_CATEGORIES,
    ExamBlueprint,
    InsufficientBankError,
    Question,
    UnknownQuestionError,
    per_question_budget,
    spread_composition,
    validate_bank,
)
from .session import (
    DeadlineExceededError,
    DuplicateSessionError,
    ExamSession,
    InvalidStateError,
    Phase,
    SessionEngine,
)
from .store import (
    DuplicateUserError,
    DurableWriteError,
    InvalidQuestionError,
    ProtectedUserError,
    Role,
    Store,
    StoredResult,
    UnknownUserError,
)


class ApiError(Exception):
    def __init__(self, status: int, code: str, message: str, **extra):
        super().__init__(message)
        self.status = status
        self.code = code
        self.message = message
        self.extra = extra


# Every error a wrapped module can raise maps to exactly one stable code.
# Order matters: subclasses (e.g. InsufficientBankError is a ValueError)
# must appear before their bases.
ERROR_MAP: dict[type, tuple[int, str]] = {
    BadCredentialsError: (401, "BAD_CREDENTIALS"),
    TokenRejectedError: (401, "UNAUTHORIZED"),
    ForbiddenError: (403, "FORBIDDEN"),
    InvalidStateError: (409, "INVALID_STATE"),
    DeadlineExceededError: (409, "DEADLINE_EXCEEDED"),
    DuplicateSessionError: (409, "DUPLICATE_SESSION"),
    UnknownQuestionError: (404, "NOT_IN_FORM"),
    InsufficientBankError: (503, "INSUFFICIENT_BANK"),
    InvalidQuestionError: (400, "INVALID_QUESTION"),
    DuplicateUserError: (409, "DUPLICATE_USER"),
    UnknownUserError: (404, "NOT_FOUND"),
    ProtectedUserError: (403, "FORBIDDEN"),
    DurableWriteError: (503, "STORE_WRITE_FAILED"),
    reporting.ResultIntegrityError: (500, "INTEGRITY_ERROR"),
    ValueError: (400, "INVALID_CHOICE"),
}


def _translate(exc: Exception) -> ApiError:
    for exc_type, (status, code) in ERROR_MAP.items():
        if isinstance(exc, exc_type):
            message = str(exc)
            if isinstance(exc, UnknownQuestionError):
                message = f"question {exc.args[0]} is not on this form"
            extra = {}
            if isinstance(exc, InvalidQuestionError):
                extra["defects"] = exc.defects
            return ApiError(status, code, message, **extra)
    raise exc


class LoginBody(BaseModel):
    username: str
    password: str


class AnswerBody(BaseModel):
    question_id: str
    chosen_index: int


class NewUserBody(BaseModel):
    first_name: str
    last_name: str


class QuestionBody(BaseModel):
    id: str
    category: str
    text: str
    choices: list[str]
    correct_index: int


@dataclass
class ServiceConfig:
    host: str = "127.0.0.1"
    port: int = 8080
    store_path: str = "./store.dat"
    bank_path: Optional[str] = None
    blueprint: ExamBlueprint = field(default_factory=ExamBlueprint)
    subject_name: str = "Computer Science"
    webui_dir: Optional[str] = None
    sweep_interval: float = 1.0


class ServiceStartupError(Exception):
    pass


def import_bank(store: Store, path: str) -> tuple[int, list[tuple[str, list[str]]]]:
    """Load a question-bank JSON file into the store.

    Returns (imported count, [(question id, defects), ...]). Parse failures
    raise ValueError with a line number.
    """
    raw = Path(path).read_text(encoding="utf-8")
    if not raw.strip():
        return 0, []
    try:
        data = json.loads(raw)
    except json.JSONDecodeError as exc:
        raise ValueError(f"parse error at line {exc.lineno}: {exc.msg}") from exc
    if not isinstance(data, list):
        raise ValueError("bank file must be a JSON array of question objects")
    imported = 0
    rejected: list[tuple[str, list[str]]] = []
    for i, item in enumerate(data):
        try:
            q = Question.from_dict(item)
        except (KeyError, TypeError, ValueError) as exc:
            rejected.append((str(item.get("id", f"#{i}")) if isinstance(item, dict) else f"#{i}", [f"malformed question object: {exc}"]))
            continue
        try:
            store.put_question(q)
            imported += 1
        except InvalidQuestionError as exc:
            rejected.append((q.id, exc.defects))
    return imported, rejected


class ExamService:
    """Wires the engine, auth and store together for one server process."""

    def __init__(
        self,
        store: Store,
        blueprint: Optional[ExamBlueprint] = None,
        subject_name: str = "Computer Science",
        clock: Callable[[], float] = time.time,
        auth_service: Optional[AuthService] = None,
    ):
        self.store = store
        self.blueprint = blueprint or ExamBlueprint()
        self.clock = clock
        self.auth = auth_service or AuthService(store, clock=clock)
        self.engine = SessionEngine(
            bank=store.list_questions(),
            blueprint=self.blueprint,
            subject_name=subject_name,
            on_finalize=self._persist_result,
        )
        self._pending_results: list[StoredResult] = []
        self._pending_lock = threading.Lock()

    # -- result persistence --------------------------------------------

    def _persist_result(self, session: ExamSession, report) -> None:
        account = self.store.get_user(session.candidate)
        if account is not None:
            first, last = account.first_name, account.last_name
        else:
            first, last = session.candidate, ""
        result = StoredResult(
            first_name=first,
            last_name=last,
            per_category_score=dict(report.per_category_score),
            final_score=report.final_score,
            elapsed_seconds=report.elapsed_seconds,
            submitted_at=self.clock(),
        )
        try:
            self.store.append_result(result)
        except DurableWriteError:
            # The session stays finalized in memory; the append is retried
            # by the sweep loop and on shutdown.
            with self._pending_lock:
                self._pending_results.append(result)

    def flush_pending_results(self) -> None:
        with self._pending_lock:
            pending, self._pending_results = self._pending_results, []
        for result in pending:
            try:
                self.store.append_result(result)
            except DurableWriteError:
                with self._pending_lock:
                    self._pending_results.append(result)

    # -- request helpers --------------------------------------------------

    def identity(self, request: Request):
        header = request.headers.get("authorization", "")
        if not header.startswith("Bearer "):
            raise ApiError(401, "UNAUTHORIZED", "missing bearer token")
        try:
            return self.auth.authenticate(header[len("Bearer "):])
        except TokenRejectedError as exc:
            raise _translate(exc)

    def candidate_session(self, identity) -> ExamSession:
        if identity.role is not Role.CANDIDATE:
            raise ApiError(403, "FORBIDDEN", "only candidates take the test")
        session = self.engine.session_for(identity.username)
        if session is None:
            try:
                session = self.engine.create_session(identity.username)
            except DuplicateSessionError:
                # lost a same-candidate creation race; use the winner's
                session = self.engine.session_for(identity.username)
            except InsufficientBankError as exc:
                raise _translate(exc)
        return session

    def require_admin(self, identity) -> None:
        if identity.role is not Role.ADMIN:
            raise ApiError(403, "FORBIDDEN", "administrator role required")


def create_app(
    store: Store,
    blueprint: Optional[ExamBlueprint] = None,
    subject_name: str = "Computer Science",
    clock: Callable[[], float] = time.time,
    auth_service: Optional[AuthService] = None,
    webui_dir: Optional[str] = None,
    sweep_interval: float = 1.0,
) -> FastAPI:
    svc = ExamService(
        store,
        blueprint=blueprint,
        subject_name=subject_name,
        clock=clock,
        auth_service=auth_service,
    )

    @asynccontextmanager
    async def lifespan(app: FastAPI):
        stop = threading.Event()

        def sweep_loop():
            while not stop.wait(sweep_interval):
                svc.engine.expire_sweep(svc.clock())
                svc.flush_pending_results()

        sweeper = threading.Thread(target=sweep_loop, daemon=True, name="expire-sweep")
        sweeper.start()
        yield
        stop.set()
        sweeper.join(timeout=5)
        svc.engine.expire_sweep(svc.clock())
        svc.flush_pending_results()

    app = FastAPI(title="examd", lifespan=lifespan)
    app.state.service = svc

    @app.exception_handler(ApiError)
    async def on_api_error(request: Request, exc: ApiError):
        payload = {"code": exc.code, "message": exc.message}
        payload.update(exc.extra)
        return JSONResponse(status_code=exc.status, content=payload)

    def run(fn, *args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except ApiError:
            raise
        except Exception as exc:
            raise _translate(exc)

    # -- public ----------------------------------------------------------

    @app.get("/api/health")
    def health():
        return {"status": "ok"}

    @app.get("/api/time")
    def server_time():
        return {"server_time": svc.clock()}

    @app.post("/api/login")
    def login(body: LoginBody):
        token = run(svc.auth.login, body.username, body.password)
        return {
            "token": token.token,
            "username": token.username,
            "role": token.role.value,
            "expires_at": token.expires_at,
        }

    # -- candidate exam flow ----------------------------------------------

    @app.get("/api/exam/info")
    def exam_info(request: Request):
        session = svc.candidate_session(svc.identity(request))
        info = run(svc.engine.present_info, session)
        return {
            "subject_name": info.subject_name,
            "n_questions": info.n_questions,
            "duration_seconds": info.duration_seconds,
            "per_question_budget": info.per_question_budget,
            "schedule_policy": info.schedule_policy,
        }

    @app.post("/api/exam/start")
    def exam_start(request: Request):
        session = svc.candidate_session(svc.identity(request))
        now = svc.clock()
        deadline, questions = run(svc.engine.start_exam, session, now)
        return {
            "server_time": now,
            "deadline": deadline,
            "duration_seconds": svc.blueprint.duration_seconds,
            "per_question_budget": per_question_budget(svc.blueprint),
            "questions": questions,
        }

    @app.get("/api/exam/questions")
    def exam_questions(request: Request):
        session = svc.candidate_session(svc.identity(request))
        deadline, answers, questions = run(svc.engine.resume, session)
        return {"deadline": deadline, "answers": answers, "questions": questions}

    @app.post("/api/exam/answer")
    def exam_answer(request: Request, body: AnswerBody):
        session = svc.candidate_session(svc.identity(request))
        answered = run(
            svc.engine.record_answer,
            session,
            body.question_id,
            body.chosen_index,
            svc.clock(),
        )
        return {"recorded": True, "answered": answered}

    @app.post("/api/exam/submit")
    def exam_submit(request: Request):
        session = svc.candidate_session(svc.identity(request))
        report = run(svc.engine.submit, session, svc.clock())
        return report.to_dict() | {"state": session.phase.value}

    @app.get("/api/exam/feedback")
    def exam_feedback(request: Request):
        session = svc.candidate_session(svc.identity(request))
        items, report = run(svc.engine.feedback, session)
        return {
            "report": report.to_dict(),
            "state": session.phase.value,
            "items": [
                {
                    "number": item.number,
                    "question_id": item.question_id,
                    "text": item.text,
                    "choices": item.choices,
                    "chosen_index": item.chosen_index,
                    "correct_index": item.correct_index,
                    "verdict": item.verdict,
                }
                for item in items
            ],
        }

    # -- administration ----------------------------------------------------

    @app.post("/api/admin/users", status_code=201)
    def admin_add_user(request: Request, body: NewUserBody):
        identity = svc.identity(request)
        username, password = run(
            svc.auth.provision_candidate, identity.token, body.first_name, body.last_name
        )
        return {"username": username, "password": password}

    @app.delete("/api/admin/users/{username}")
    def admin_remove_user(request: Request, username: str):
        svc.require_admin(svc.identity(request))
        run(svc.store.remove_user, username)
        svc.auth.revoke_user(username)
        return {"removed": username}

    @app.post("/api/admin/questions", status_code=201)
    def admin_add_question(request: Request, body: QuestionBody):
        svc.require_admin(svc.identity(request))
        q = Question(
            id=body.id,
            category=body.category,
            text=body.text,
            choices=body.choices,
            correct_index=body.correct_index,
        )
        run(svc.store.put_question, q)
        svc.engine.bank = svc.store.list_questions()
        return {"stored": q.id}

    @app.get("/api/admin/results")
    def admin_results(request: Request):
        svc.require_admin(svc.identity(request))
        return {
            "results": [r.to_record() for r in svc.store.list_results()],
        }

    @app.get("/api/admin/results.csv")
    def admin_results_csv(request: Request):
        svc.require_admin(svc.identity(request))
        body = run(reporting.export_results_csv, svc.store.list_results())
        return PlainTextResponse(body, media_type="text/csv")

    if webui_dir and Path(webui_dir).is_dir():
        app.mount("/", StaticFiles(directory=webui_dir, html=True), name="webui")

    return app


def build_blueprint(
    n_questions: Optional[int] = None,
    duration_seconds: Optional[int] = None,
    weight: Optional[int] = None,
) -> ExamBlueprint:
    """Blueprint from CLI overrides; composition spreads over the canonical
    categories when the question count changes."""
    bp = ExamBlueprint()
    n = n_questions if n_questions is not None else bp.n_questions
    return ExamBlueprint(
        n_questions=n,
        duration_seconds=duration_seconds
        if duration_seconds is not None
        else bp.duration_seconds,
        per_question_weight=weight if weight is not None else bp.per_question_weight,
        composition=spread_composition(n, DEFAULT_CATEGORIES),
    )


def serve(config: ServiceConfig) -> None:
    """Run the HTTP service until interrupted. Blocking."""
    import uvicorn

    try:
        store = Store(config.store_path)
    except Exception as exc:
        raise ServiceStartupError(f"cannot open store {config.store_path}: {exc}")
    try:
        if config.bank_path:
            imported, rejected = import_bank(store, config.bank_path)
            if rejected:
                lines = "; ".join(f"{qid}: {', '.join(d)}" for qid, d in rejected)
                raise ServiceStartupError(f"bank import rejected questions: {lines}")
            print(f"imported {imported} questions from {config.bank_path}")
        deficits = validate_bank(store.list_questions(), config.blueprint)
        if deficits:
            print("warning: bank cannot cover the blueprint yet: " + "; ".join(deficits))
        app = create_app(
            store,
            blueprint=config.blueprint,
            subject_name=config.subject_name,
            webui_dir=config.webui_dir,
            sweep_interval=config.sweep_interval,
        )
        uvicorn.run(app, host=config.host, port=config.port, log_level="info")
    finally:
        store.close()
