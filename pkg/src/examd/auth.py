"""Credential provisioning, login, bearer tokens and role enforcement.

Candidates never self-register: an administrator provisions the account
and hands over the generated one-time password before the test. Plaintext
passwords are returned exactly once and never stored; the store only ever
sees the salted digest.
"""

from __future__ import annotations

import hashlib
import hmac
import re
import secrets
import threading
import time
from dataclasses import dataclass
from typing import Callable

from .store import Role, Store, UserAccount

DIGEST_SCHEME = "pbkdf2_sha256"
DEFAULT_ITERATIONS = 100_000
DEFAULT_TOKEN_TTL = 4 * 3600  # covers the 60-minute exam with ample margin
_TOKEN_BYTES = 32  # 256 bits of entropy


class BadCredentialsError(Exception):
    """Login rejected. Deliberately identical for unknown usernames and
    wrong passwords so accounts cannot be enumerated."""

    def __init__(self):
        super().__init__("wrong username or password")


class TokenRejectedError(Exception):
    """Expired, unknown or malformed bearer token."""


class ForbiddenError(Exception):
    """Authenticated, but the caller's role does not allow the operation."""


def hash_password(password: str, iterations: int = DEFAULT_ITERATIONS) -> str:
    salt = secrets.token_bytes(16)
    dk = hashlib.pbkdf2_hmac("sha256", password.encode("utf-8"), salt, iterations)
    return f"{DIGEST_SCHEME}${iterations}${salt.hex()}${dk.hex()}"


def verify_password(password: str, digest: str) -> bool:
    try:
        scheme, iterations, salt_hex, dk_hex = digest.split("$")
        if scheme != DIGEST_SCHEME:
            return False
        dk = hashlib.pbkdf2_hmac(
            "sha256", password.encode("utf-8"), bytes.fromhex(salt_hex), int(iterations)
        )
        return hmac.compare_digest(dk.hex(), dk_hex)
    except (ValueError, TypeError):
        return False


@dataclass
class AuthToken:
    token: str
    username: str
    role: Role
    issued_at: float
    expires_at: float


def _username_slug(first: str, last: str) -> str:
    slug = f"{first}.{last}".lower()
    slug = re.sub(r"\s+", "-", slug.strip())
    slug = re.sub(r"[^a-z0-9.\-]", "", slug)
    return slug or "user"


class AuthService:
    """Issues accounts and bearer tokens, backed by the store.

    The token table lives in memory only; a restart simply requires a new
    login, which matches the single-sitting nature of the test.
    """

    def __init__(
        self,
        store: Store,
        clock: Callable[[], float] = time.time,
        token_ttl: float = DEFAULT_TOKEN_TTL,
        iterations: int = DEFAULT_ITERATIONS,
    ):
        self.store = store
        self.clock = clock
        self.token_ttl = token_ttl
        self.iterations = iterations
        self._tokens: dict[str, AuthToken] = {}
        self._lock = threading.Lock()
        # Verified against for unknown usernames so the rejection path costs
        # the same as a real digest check.
        self._decoy_digest = hash_password(secrets.token_hex(8), iterations)

    # -- accounts -------------------------------------------------------

    def create_account(self, first: str, last: str, role: Role) -> tuple[str, str]:
        """Create an account with a fresh username and one-time password.

        The plaintext password is returned exactly once; only its digest is
        persisted. Name collisions get a numeric suffix.
        """
        base = _username_slug(first, last)
        username = base
        n = 2
        while self.store.get_user(username) is not None:
            username = f"{base}{n}"
            n += 1
        password = secrets.token_urlsafe(9)
        account = UserAccount(
            username=username,
            password_digest=hash_password(password, self.iterations),
            role=role,
            first_name=first,
            last_name=last,
        )
        self.store.put_user(account)
        return username, password

    def create_candidate(self, first: str, last: str) -> tuple[str, str]:
        return self.create_account(first, last, Role.CANDIDATE)

    def provision_candidate(self, token: str, first: str, last: str) -> tuple[str, str]:
        """Admin-gated candidate creation, as exposed over the API."""
        identity = self.authenticate(token)
        if identity.role is not Role.ADMIN:
            raise ForbiddenError("only administrators can provision candidates")
        return self.create_candidate(first, last)

    # -- login / tokens ---------------------------------------------------

    def login(self, username: str, password: str) -> AuthToken:
        account = self.store.get_user(username)
        if account is None:
            verify_password(password, self._decoy_digest)
            raise BadCredentialsError()
        if not verify_password(password, account.password_digest):
            raise BadCredentialsError()
        now = self.clock()
        token = AuthToken(
            token=secrets.token_urlsafe(_TOKEN_BYTES),
            username=account.username,
            role=account.role,
            issued_at=now,
            expires_at=now + self.token_ttl,
        )
        with self._lock:
            self._tokens[token.token] = token
        return token

    def authenticate(self, token: str) -> AuthToken:
        with self._lock:
            info = self._tokens.get(token)
        if info is None:
            raise TokenRejectedError("unknown token")
        if self.clock() >= info.expires_at:
            with self._lock:
                self._tokens.pop(token, None)
            raise TokenRejectedError("token expired")
        return info

    def revoke(self, token: str) -> None:
        with self._lock:
            self._tokens.pop(token, None)

    def revoke_user(self, username: str) -> None:
        with self._lock:
            stale = [t for t, info in self._tokens.items() if info.username == username]
            for t in stale:
                del self._tokens[t]
