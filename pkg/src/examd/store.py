"""Durable persistence for users, questions and results.

The backing file is UTF-8, one JSON object per line, each tagged with a
"kind" field ("user", "question" or "result"). Every write is appended,
flushed and fsynced before it is acknowledged, so a crash loses at most
the final partially-written line; opening the store drops that partial
line and keeps everything before it.

Users and questions are replayed into maps (questions are upsertable,
user removal is a tombstone line); results are append-only history.
"""

from __future__ import annotations

import enum
import json
import os
import threading
from dataclasses import dataclass
from pathlib import Path
from typing import Mapping, Optional

from .core import Category, Question, validate_question


class Role(str, enum.Enum):
    ADMIN = "admin"
    CANDIDATE = "candidate"


class DuplicateUserError(Exception):
    pass


class UnknownUserError(Exception):
    pass


class ProtectedUserError(Exception):
    """Admin accounts cannot be removed."""


class InvalidQuestionError(Exception):
    def __init__(self, defects: list[str]):
        super().__init__("; ".join(defects))
        self.defects = defects


class DurableWriteError(Exception):
    """The record could not be made durable; nothing was acknowledged."""


class StoreCorruptionError(Exception):
    """A non-final record line is unreadable; the file needs attention."""


@dataclass
class UserAccount:
    username: str
    password_digest: str
    role: Role
    first_name: str
    last_name: str

    def to_record(self) -> dict:
        return {
            "kind": "user",
            "username": self.username,
            "password_digest": self.password_digest,
            "role": self.role.value,
            "first_name": self.first_name,
            "last_name": self.last_name,
        }

    @classmethod
    def from_record(cls, rec: Mapping) -> "UserAccount":
        return cls(
            username=rec["username"],
            password_digest=rec["password_digest"],
            role=Role(rec["role"]),
            first_name=rec["first_name"],
            last_name=rec["last_name"],
        )


@dataclass
class StoredResult:
    first_name: str
    last_name: str
    per_category_score: dict[Category, int]
    final_score: int
    elapsed_seconds: int
    submitted_at: float

    @property
    def candidate_name(self) -> str:
        return f"{self.first_name} {self.last_name}"

    def to_record(self) -> dict:
        return {
            "kind": "result",
            "first_name": self.first_name,
            "last_name": self.last_name,
            "per_category_score": dict(self.per_category_score),
            "final_score": self.final_score,
            "elapsed_seconds": self.elapsed_seconds,
            "submitted_at": self.submitted_at,
        }

    @classmethod
    def from_record(cls, rec: Mapping) -> "StoredResult":
        return cls(
            first_name=rec["first_name"],
            last_name=rec["last_name"],
            per_category_score={k: int(v) for k, v in rec["per_category_score"].items()},
            final_score=int(rec["final_score"]),
            elapsed_seconds=int(rec["elapsed_seconds"]),
            submitted_at=float(rec["submitted_at"]),
        )


class Store:
    """Single-writer, multi-reader embedded record store."""

    def __init__(self, path: str | os.PathLike):
        self.path = Path(path)
        self._lock = threading.Lock()
        self._users: dict[str, UserAccount] = {}
        self._questions: dict[str, Question] = {}
        self._results: list[StoredResult] = []
        if not self.path.exists():
            self.path.touch()
        needs_newline = self._replay()
        self._fh = open(self.path, "ab")
        if needs_newline:
            self._fh.write(b"\n")
            self._fh.flush()
            os.fsync(self._fh.fileno())

    def _replay(self) -> bool:
        """Rebuild in-memory state from the file.

        Returns True when the final record is valid but lost its newline,
        so the next append must start on a fresh line. An unparseable tail
        (a torn write) is truncated away; an unparseable line anywhere
        else is corruption and raises.
        """
        raw = self.path.read_bytes()
        if not raw:
            return False
        parts = raw.split(b"\n")
        complete, tail = parts[:-1], parts[-1]
        offset = 0
        for lineno, line in enumerate(complete, start=1):
            if line.strip():
                try:
                    rec = json.loads(line.decode("utf-8"))
                    self._apply(rec, lineno)
                except (UnicodeDecodeError, json.JSONDecodeError):
                    raise StoreCorruptionError(f"unreadable record at line {lineno}")
            offset += len(line) + 1
        if tail:
            try:
                rec = json.loads(tail.decode("utf-8"))
            except (UnicodeDecodeError, json.JSONDecodeError):
                with open(self.path, "r+b") as f:
                    f.truncate(offset)
                return False
            self._apply(rec, len(complete) + 1)
            return True
        return False

    def _apply(self, rec: Mapping, lineno: int) -> None:
        kind = rec.get("kind")
        if kind == "user":
            if rec.get("deleted"):
                self._users.pop(rec["username"], None)
            else:
                account = UserAccount.from_record(rec)
                self._users[account.username] = account
        elif kind == "question":
            q = Question.from_dict(rec)
            self._questions[q.id] = q
        elif kind == "result":
            self._results.append(StoredResult.from_record(rec))
        else:
            raise StoreCorruptionError(f"unknown record kind {kind!r} at line {lineno}")

    def _append(self, rec: dict) -> None:
        line = json.dumps(rec, ensure_ascii=False).encode("utf-8") + b"\n"
        try:
            self._fh.write(line)
            self._fh.flush()
            os.fsync(self._fh.fileno())
        except OSError as exc:
            raise DurableWriteError(str(exc)) from exc

    # -- users ----------------------------------------------------------

    def put_user(self, account: UserAccount) -> None:
        if not account.username:
            raise ValueError("username must be non-empty")
        with self._lock:
            if account.username in self._users:
                raise DuplicateUserError(account.username)
            self._append(account.to_record())
            self._users[account.username] = account

    def get_user(self, username: str) -> Optional[UserAccount]:
        with self._lock:
            return self._users.get(username)

    def remove_user(self, username: str) -> None:
        with self._lock:
            account = self._users.get(username)
            if account is None:
                raise UnknownUserError(username)
            if account.role is Role.ADMIN:
                raise ProtectedUserError(username)
            self._append({"kind": "user", "username": username, "deleted": True})
            del self._users[username]

    def list_users(self) -> list[UserAccount]:
        with self._lock:
            return list(self._users.values())

    # -- questions --------------------------------------------------------

    def put_question(self, q: Question) -> None:
        defects = validate_question(q)
        if defects:
            raise InvalidQuestionError(defects)
        with self._lock:
            self._append(q.to_dict() | {"kind": "question"})
            self._questions[q.id] = q

    def list_questions(self, category: Optional[Category] = None) -> list[Question]:
        with self._lock:
            questions = list(self._questions.values())
        if category is not None:
            questions = [q for q in questions if q.category == category]
        return questions

    # -- results ----------------------------------------------------------

    def append_result(self, result: StoredResult) -> None:
        with self._lock:
            self._append(result.to_record())
            self._results.append(result)

    def list_results(self) -> list[StoredResult]:
        with self._lock:
            return list(self._results)

    # ----------------------------------------------------------------------

    def close(self) -> None:
        if not self._fh.closed:
            self._fh.flush()
            self._fh.close()

    def __enter__(self) -> "Store":
        return self

    def __exit__(self, *exc) -> None:
        self.close()
