"""Command-line surface: ``duality``, ``stepfn``, ``galois``, ``ivp`` and ``serve``.

Primary output goes to standard output (or ``--out``), logs to standard
error. Exit codes: 0 success, 2 a verdict or law failed (the witness is
printed), 3 the solver diverged or did not converge, 4 bad input.
"""

from __future__ import annotations

import argparse
import contextlib
import csv
import io
import json
import logging
import sys
from collections.abc import Iterator, Sequence
from pathlib import Path
from typing import Any, NoReturn, TextIO

from pydantic import BaseModel, ValidationError

from spectral_domains import __version__
from spectral_domains.exceptions import DomainError, InputError, IvpError
from spectral_domains.interval_domain import to_rational
from spectral_domains.ivp.oracles import Oracle
from spectral_domains.lattice_duality import PrimeFilterStrategy
from spectral_domains.models import (
    BoxModel,
    IvpProblemModel,
    LatticeModel,
    StepFnModel,
)
from spectral_domains.sampling import SUITES, run_suite
from spectral_domains.settings import Settings
from spectral_domains.step_functions import PreimageStrategy, WayBelowStrategy
from spectral_domains.verdicts import (
    ORDER_STRATEGIES,
    apriori_params,
    convergence_payload,
    eval_payload,
    galois_payload,
    oracle_payload,
    order_payload,
    preimage_payload,
    prime_filters_payload,
    roundtrip_payload,
    solve_rows,
    way_below_payload,
)

__all__ = ["EXIT_DIVERGED", "EXIT_FAILED", "EXIT_INPUT", "EXIT_OK", "build_parser", "run"]

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILED = 2
EXIT_DIVERGED = 3
EXIT_INPUT = 4


class _ArgumentParser(argparse.ArgumentParser):
    """Usage errors become :class:`InputError` so they map to the input exit code."""

    def error(self, message: str) -> NoReturn:
        raise InputError(f"{self.prog}: {message}")


def _load[M: BaseModel](model: type[M], path: Path) -> M:
    try:
        text = path.read_text(encoding="utf-8")
    except UnicodeDecodeError as exc:
        msg = f"{path} is not UTF-8 text: {exc.reason} at byte {exc.start}"
        raise InputError(msg) from exc
    return model.model_validate_json(text)


def _emit(out: TextIO, payload: dict[str, Any]) -> None:
    out.write(json.dumps(payload, sort_keys=True, ensure_ascii=False) + "\n")


def _settings_from(args: argparse.Namespace) -> Settings:
    overrides = {
        key: value
        for key, value in (
            ("seed", args.seed),
            ("cap_lattice", args.cap_lattice),
            ("cap_subsets", args.cap_subsets),
            ("log_level", args.log_level),
        )
        if value is not None
    }
    return Settings(**overrides)


# ---------------------------------------------------------------------------
# duality
# ---------------------------------------------------------------------------


def _duality_roundtrip(args: argparse.Namespace, settings: Settings, out: TextIO) -> int:
    lattice = _load(LatticeModel, args.lattice).to_domain()
    payload = roundtrip_payload(
        lattice, PrimeFilterStrategy(args.strategy), settings.cap_exhaustive
    )
    _emit(out, payload)
    return EXIT_OK if payload["iso"] else EXIT_FAILED


def _duality_primes(args: argparse.Namespace, settings: Settings, out: TextIO) -> int:
    lattice = _load(LatticeModel, args.lattice).to_domain()
    _emit(
        out,
        prime_filters_payload(
            lattice, PrimeFilterStrategy(args.strategy), settings.cap_exhaustive
        ),
    )
    return EXIT_OK


# ---------------------------------------------------------------------------
# stepfn
# ---------------------------------------------------------------------------


def _stepfn_eval(args: argparse.Namespace, settings: Settings, out: TextIO) -> int:
    f = _load(StepFnModel, args.lhs).to_domain()
    _emit(out, eval_payload(f, to_rational(args.at)))
    return EXIT_OK


def _stepfn_order(args: argparse.Namespace, settings: Settings, out: TextIO) -> int:
    f = _load(StepFnModel, args.lhs).to_domain()
    g = _load(StepFnModel, args.rhs).to_domain()
    payload = order_payload(f, g, args.strategy, settings.cap_lattice)
    _emit(out, payload)
    return EXIT_OK if payload["verdict"] else EXIT_FAILED


def _stepfn_waybelow(args: argparse.Namespace, settings: Settings, out: TextIO) -> int:
    f = _load(StepFnModel, args.lhs).to_domain()
    g = _load(StepFnModel, args.rhs).to_domain()
    payload = way_below_payload(f, g, WayBelowStrategy(args.strategy), settings.cap_subsets)
    _emit(out, payload)
    return EXIT_OK if payload["verdict"] else EXIT_FAILED


def _stepfn_preimage(args: argparse.Namespace, settings: Settings, out: TextIO) -> int:
    g = _load(StepFnModel, args.rhs).to_domain()
    b = _load(BoxModel, args.box).to_domain(g.dim)
    _emit(out, preimage_payload(g, b, PreimageStrategy(args.strategy), settings.cap_subsets))
    return EXIT_OK


# ---------------------------------------------------------------------------
# galois
# ---------------------------------------------------------------------------


def _galois_check(args: argparse.Namespace, settings: Settings, out: TextIO) -> int:
    f = _load(StepFnModel, args.f).to_domain()
    g = _load(StepFnModel, args.g).to_domain()
    payload = galois_payload(f, g)
    _emit(out, payload)
    return EXIT_OK if payload["agree"] else EXIT_FAILED


def _galois_fuzz(args: argparse.Namespace, settings: Settings, out: TextIO) -> int:
    reports = run_suite(args.suite, args.n, seed=settings.seed, settings=settings)
    for report in reports:
        agreements = report.checked - len(report.failures)
        out.write(
            f"{report.name}: checked={report.checked} agreements={agreements} "
            f"failures={len(report.failures)} skipped={report.skipped}\n"
        )
        for witness in report.failures:
            out.write(f"  witness: {witness}\n")
    return EXIT_OK if all(r.passed for r in reports) else EXIT_FAILED


# ---------------------------------------------------------------------------
# ivp
# ---------------------------------------------------------------------------


def _ivp_solve(args: argparse.Namespace, settings: Settings, out: TextIO) -> int:
    problem = _load(IvpProblemModel, args.problem).to_domain()
    rows, iterations = solve_rows(problem, args.pieces, apriori_params(settings))
    logger.info("Solved on %d pieces in %d iterations", args.pieces, iterations)
    csv.writer(out, lineterminator="\n").writerows(rows)
    return EXIT_OK


def _ivp_convergence(args: argparse.Namespace, settings: Settings, out: TextIO) -> int:
    problem = _load(IvpProblemModel, args.problem).to_domain()
    table = convergence_payload(problem, args.levels, args.start, apriori_params(settings))
    writer = csv.DictWriter(out, fieldnames=["k", "width", "ratio"], lineterminator="\n")
    writer.writeheader()
    writer.writerows(table)
    return EXIT_OK


def _ivp_check(args: argparse.Namespace, settings: Settings, out: TextIO) -> int:
    problem = _load(IvpProblemModel, args.problem).to_domain()
    payload = oracle_payload(
        problem,
        args.pieces,
        Oracle(args.oracle),
        args.samples,
        settings.seed,
        apriori_params(settings),
    )
    _emit(out, payload)
    return EXIT_OK if payload["verdict"] else EXIT_FAILED


# ---------------------------------------------------------------------------
# serve
# ---------------------------------------------------------------------------


def _serve(args: argparse.Namespace, settings: Settings, out: TextIO) -> int:
    from spectral_domains.server import mcp

    if settings.server_transport == "stdio":
        mcp.run(transport="stdio")
    else:
        mcp.run(
            transport=settings.server_transport,
            host=settings.server_host,
            port=settings.server_port,
            uvicorn_config={"log_config": None},
        )
    return EXIT_OK


# ---------------------------------------------------------------------------
# Parser
# ---------------------------------------------------------------------------


def _add_global_options(parser: argparse.ArgumentParser, *, default: object) -> None:
    parser.add_argument("--seed", type=int, default=default, help="seed for randomized suites")
    parser.add_argument("--cap-lattice", type=int, default=default, help="sublattice closure cap")
    parser.add_argument(
        "--cap-subsets", type=int, default=default, help="component cap of the formula preimage"
    )
    parser.add_argument(
        "--log-level", default=default, help="DEBUG, INFO, WARNING, ERROR or CRITICAL"
    )
    parser.add_argument(
        "--out", type=Path, default=default, help="write primary output here instead of stdout"
    )


def build_parser() -> argparse.ArgumentParser:
    parser = _ArgumentParser(
        prog="spectral-domains",
        description="Finite, exact checks of domain-theoretic constructions on rational data.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    _add_global_options(parser, default=None)
    # Leaf commands accept the same options after their own; SUPPRESS keeps root values.
    common = _ArgumentParser(add_help=False)
    _add_global_options(common, default=argparse.SUPPRESS)
    leaf = [common]
    commands = parser.add_subparsers(dest="command", required=True)

    duality = commands.add_parser("duality").add_subparsers(dest="action", required=True)
    strategies = [s.value for s in PrimeFilterStrategy]
    for name, handler in (("roundtrip", _duality_roundtrip), ("primes", _duality_primes)):
        sub = duality.add_parser(name, parents=leaf)
        sub.add_argument("--lattice", type=Path, required=True)
        sub.add_argument("--strategy", choices=strategies, default="join_irreducible")
        sub.set_defaults(handler=handler)

    stepfn = commands.add_parser("stepfn").add_subparsers(dest="action", required=True)
    sub = stepfn.add_parser("eval", parents=leaf)
    sub.add_argument("--lhs", type=Path, required=True)
    sub.add_argument("--at", required=True, help="rational point such as 3/2")
    sub.set_defaults(handler=_stepfn_eval)
    sub = stepfn.add_parser("order", parents=leaf)
    sub.add_argument("--lhs", type=Path, required=True)
    sub.add_argument("--rhs", type=Path, required=True)
    sub.add_argument("--strategy", choices=ORDER_STRATEGIES, default="cells")
    sub.set_defaults(handler=_stepfn_order)
    sub = stepfn.add_parser("waybelow", parents=leaf)
    sub.add_argument("--lhs", type=Path, required=True)
    sub.add_argument("--rhs", type=Path, required=True)
    sub.add_argument("--strategy", choices=[s.value for s in WayBelowStrategy], default="spectral")
    sub.set_defaults(handler=_stepfn_waybelow)
    sub = stepfn.add_parser("preimage", parents=leaf)
    sub.add_argument("--rhs", type=Path, required=True)
    sub.add_argument("--box", type=Path, required=True)
    sub.add_argument("--strategy", choices=[s.value for s in PreimageStrategy], default="formula")
    sub.set_defaults(handler=_stepfn_preimage)

    galois = commands.add_parser("galois").add_subparsers(dest="action", required=True)
    sub = galois.add_parser("check", parents=leaf)
    sub.add_argument("--f", type=Path, required=True)
    sub.add_argument("--g", type=Path, required=True)
    sub.set_defaults(handler=_galois_check)
    sub = galois.add_parser("fuzz", parents=leaf)
    sub.add_argument("--n", type=int, default=1000)
    sub.add_argument("--suite", choices=[*SUITES, "all"], default="galois")
    sub.set_defaults(handler=_galois_fuzz)

    ivp = commands.add_parser("ivp").add_subparsers(dest="action", required=True)
    sub = ivp.add_parser("solve", parents=leaf)
    sub.add_argument("--problem", type=Path, required=True)
    sub.add_argument("--pieces", type=int, default=16)
    sub.set_defaults(handler=_ivp_solve)
    sub = ivp.add_parser("convergence", parents=leaf)
    sub.add_argument("--problem", type=Path, required=True)
    sub.add_argument("--levels", type=int, default=5)
    sub.add_argument("--start", type=int, default=4)
    sub.set_defaults(handler=_ivp_convergence)
    sub = ivp.add_parser(
        "check", parents=leaf, help="compare the enclosure with an exact reference flow"
    )
    sub.add_argument("--problem", type=Path, required=True)
    sub.add_argument("--pieces", type=int, default=16)
    sub.add_argument("--oracle", choices=[o.value for o in Oracle], required=True)
    sub.add_argument("--samples", type=int, default=100)
    sub.set_defaults(handler=_ivp_check)

    serve = commands.add_parser("serve", parents=leaf, help="run the MCP tool surface")
    serve.set_defaults(handler=_serve)
    return parser


@contextlib.contextmanager
def _output(path: Path | None, stdout: TextIO) -> Iterator[TextIO]:
    if path is None:
        yield stdout
        return
    buffer = io.StringIO()
    yield buffer
    path.write_text(buffer.getvalue(), encoding="utf-8")


def run(argv: Sequence[str] | None = None, *, stdout: TextIO | None = None) -> int:
    """Parse ``argv``, run one command and return its exit code; never raises."""
    out = stdout if stdout is not None else sys.stdout
    try:
        args = build_parser().parse_args(argv)
        settings = _settings_from(args)
        logging.getLogger().setLevel(settings.log_level)
        with _output(args.out, out) as target:
            return args.handler(args, settings, target)
    except SystemExit as exc:  # --help and --version
        return exc.code if isinstance(exc.code, int) else EXIT_OK
    except IvpError as exc:
        logger.error("%s", exc)
        return EXIT_DIVERGED
    except (InputError, ValidationError, OSError, DomainError) as exc:
        logger.error("%s", exc)
        return EXIT_INPUT
