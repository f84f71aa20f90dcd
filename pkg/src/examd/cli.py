"""examd: administrator command line.

Subcommands: serve, user add/rm, questions import, report
results/skills/chart. Exit status 0 on success, 1 on domain failure,
2 on usage errors (argparse's own convention).
"""

from __future__ import annotations

import argparse
import os
import sys
from typing import Optional

from .auth import AuthService
from .reporting import (
    ResultIntegrityError,
    chart_csv,
    results_csv,
    results_table,
    skills_csv,
    skills_table,
)
from .service import (
    ServiceConfig,
    ServiceStartupError,
    build_blueprint,
    import_bank,
    serve,
)
from .store import ProtectedUserError, Role, Store, StoreCorruptionError, UnknownUserError

EXIT_OK = 0
EXIT_FAILURE = 1


def _add_store_flag(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--store",
        default=os.environ.get("EXAMD_STORE", "./store.dat"),
        help="record store path (default ./store.dat, env EXAMD_STORE)",
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="examd", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p_serve = sub.add_parser("serve", help="run the exam HTTP service")
    p_serve.add_argument(
        "--listen",
        default=os.environ.get("EXAMD_LISTEN", "127.0.0.1:8080"),
        help="bind address as host:port; use 0.0.0.0:<port> to serve the lab LAN "
        "(env EXAMD_LISTEN)",
    )
    _add_store_flag(p_serve)
    p_serve.add_argument(
        "--bank",
        default=os.environ.get("EXAMD_BANK"),
        help="question bank JSON to import at boot (env EXAMD_BANK)",
    )
    p_serve.add_argument("--duration-seconds", type=int, help="test duration override")
    p_serve.add_argument("--questions", type=int, help="question count override")
    p_serve.add_argument("--weight", type=int, help="points per correct answer")
    p_serve.add_argument("--subject", default="Computer Science", help="subject shown on the info page")
    p_serve.add_argument("--webui", help="directory of built web client assets to serve at /")
    p_serve.set_defaults(func=cmd_serve)

    p_user = sub.add_parser("user", help="manage accounts")
    user_sub = p_user.add_subparsers(dest="user_command", required=True)
    p_add = user_sub.add_parser("add", help="create an account, printing its one-time password")
    p_add.add_argument("first_name")
    p_add.add_argument("last_name")
    p_add.add_argument("--admin", action="store_true", help="create an administrator account")
    _add_store_flag(p_add)
    p_add.set_defaults(func=cmd_user_add)
    p_rm = user_sub.add_parser("rm", help="remove a candidate account")
    p_rm.add_argument("username")
    _add_store_flag(p_rm)
    p_rm.set_defaults(func=cmd_user_rm)

    p_questions = sub.add_parser("questions", help="manage the question bank")
    q_sub = p_questions.add_subparsers(dest="questions_command", required=True)
    p_import = q_sub.add_parser("import", help="import a JSON question bank")
    p_import.add_argument("path")
    _add_store_flag(p_import)
    p_import.set_defaults(func=cmd_import_questions)

    p_report = sub.add_parser("report", help="render result reports")
    r_sub = p_report.add_subparsers(dest="report_command", required=True)
    for name, helptext in (
        ("results", "per-candidate scores table"),
        ("skills", "best/poor subject table"),
        ("chart", "long-format CSV for plotting"),
    ):
        p = r_sub.add_parser(name, help=helptext)
        _add_store_flag(p)
        if name != "chart":
            p.add_argument("--csv", action="store_true", help="emit CSV instead of a table")
        p.set_defaults(func=cmd_report, report=name)

    return parser


def build_config(args: argparse.Namespace) -> ServiceConfig:
    host, _, port_text = args.listen.rpartition(":")
    if not host or not port_text.isdigit():
        raise ValueError(f"invalid --listen address: {args.listen}")
    blueprint = build_blueprint(args.questions, args.duration_seconds, args.weight)
    return ServiceConfig(
        host=host,
        port=int(port_text),
        store_path=args.store,
        bank_path=args.bank,
        blueprint=blueprint,
        subject_name=args.subject,
        webui_dir=args.webui,
    )


def cmd_serve(args: argparse.Namespace) -> int:
    try:
        config = build_config(args)
    except ValueError as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_FAILURE
    try:
        serve(config)
    except ServiceStartupError as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_FAILURE
    return EXIT_OK


def cmd_user_add(args: argparse.Namespace) -> int:
    with _open_store(args.store) as store:
        auth = AuthService(store)
        role = Role.ADMIN if args.admin else Role.CANDIDATE
        username, password = auth.create_account(args.first_name, args.last_name, role)
    print(f"username: {username}")
    print(f"password: {password}")
    return EXIT_OK


def cmd_user_rm(args: argparse.Namespace) -> int:
    with _open_store(args.store) as store:
        try:
            store.remove_user(args.username)
        except UnknownUserError:
            print(f"no such user: {args.username}", file=sys.stderr)
            return EXIT_FAILURE
        except ProtectedUserError:
            print(f"refusing to remove administrator {args.username}", file=sys.stderr)
            return EXIT_FAILURE
    print(f"removed {args.username}")
    return EXIT_OK


def cmd_import_questions(args: argparse.Namespace) -> int:
    with _open_store(args.store) as store:
        try:
            imported, rejected = import_bank(store, args.path)
        except (OSError, ValueError) as exc:
            print(f"cannot import {args.path}: {exc}", file=sys.stderr)
            return EXIT_FAILURE
    print(f"imported {imported}")
    for qid, defects in rejected:
        print(f"rejected {qid}: {'; '.join(defects)}", file=sys.stderr)
    return EXIT_OK if imported > 0 and not rejected else EXIT_FAILURE


def cmd_report(args: argparse.Namespace) -> int:
    with _open_store(args.store) as store:
        results = store.list_results()
        try:
            if args.report == "results":
                text = results_csv(results) if args.csv else results_table(results)
            elif args.report == "skills":
                text = skills_csv(results) if args.csv else skills_table(results)
            else:
                text = chart_csv(results)
        except ResultIntegrityError as exc:
            print(f"integrity error: {exc}", file=sys.stderr)
            return EXIT_FAILURE
    sys.stdout.write(text)
    return EXIT_OK


def _open_store(path: str) -> Store:
    try:
        return Store(path)
    except StoreCorruptionError as exc:
        print(f"store {path} is corrupt: {exc}", file=sys.stderr)
        raise SystemExit(EXIT_FAILURE)


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
