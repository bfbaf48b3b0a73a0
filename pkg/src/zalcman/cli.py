"""
Command-line interface.

Every command writes one JSON document (or a JSONL stream) to stdout;
diagnostics go to stderr through the structured logger.

Exit codes:
    0   success / proven
    1   runtime failure
    2   certificate refuted
    3   certificate budget exceeded
    64  invalid flags or configuration
"""
import argparse
import json
import sys
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, TextIO

import pydantic

from src.utils.logging import ToolkitLogger, create_toolkit_logger
from src.utils.reproducibility import get_environment_info

from .certify import AuxKind, certify_max, edge_profiles
from .classu import build_from_params, koebe
from .config import CertifyConfig, SamplerConfig, SearchConfig, ToolkitConfig
from .errors import ConfigurationError, InputError, ToolkitError
from .functionals import FunctionalSpec, bound, bound_status, evaluate
from .schwarz import SchurParams, lemma1_check
from .search import append_records, sample_functions, search_records
from .summary import (
    compute_sample_metrics,
    format_certificate_report,
    format_edge_report,
    summarize_lemma1,
)
from .validator import validate_class_u_function

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_REFUTED = 2
EXIT_BUDGET = 3
EXIT_USAGE = 64

_STATUS_EXIT = {'proven': EXIT_OK, 'refuted': EXIT_REFUTED, 'budget_exceeded': EXIT_BUDGET}


class _ArgumentParser(argparse.ArgumentParser):
    """ArgumentParser that raises instead of printing usage and exiting 2."""

    def error(self, message: str) -> None:  # type: ignore[override]
        raise ConfigurationError(f"{self.prog}: {message}")


def parse_complex(text: str) -> complex:
    """'RE,IM' -> complex."""
    parts = text.split(',')
    if len(parts) != 2:
        raise ConfigurationError(f"Expected RE,IM, got {text!r}")
    try:
        return complex(float(parts[0]), float(parts[1]))
    except ValueError as e:
        raise ConfigurationError(f"Expected RE,IM, got {text!r}") from e


def parse_gammas(text: str) -> List[complex]:
    """'RE,IM;RE,IM;...' -> list of complex; empty string means no parameters."""
    text = text.strip()
    if not text:
        return []
    return [parse_complex(item) for item in text.split(';')]


# Flags whose values may start with '-' (negative real parts)
_COMPLEX_FLAGS = ('--a2', '--gammas')


def join_complex_values(argv: Sequence[str]) -> List[str]:
    """
    Rewrite ``--a2 -1,0`` as ``--a2=-1,0``.

    argparse reads a separate token such as '-1,0' as an unknown flag.
    """
    joined: List[str] = []
    tokens = iter(argv)
    for token in tokens:
        value = next(tokens, None) if token in _COMPLEX_FLAGS else None
        joined.append(token if value is None else f"{token}={value}")
    return joined


def _pair(value: complex) -> List[float]:
    return [value.real, value.imag]


def _emit(document: Any, out: TextIO) -> None:
    out.write(json.dumps(document) + '\n')


def _write_report(path: Optional[Path], text: str, logger: ToolkitLogger) -> None:
    if path is None:
        return
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text + '\n', encoding='utf-8')
    logger.log_file_io('write', path)


def build_parser() -> argparse.ArgumentParser:
    """Argument parser for all commands."""
    parser = _ArgumentParser(
        prog='zalcman',
        description='Certified coefficient bounds and extremal search for class U'
    )
    parser.add_argument('--log-level', default='WARNING',
                        choices=['DEBUG', 'INFO', 'WARNING', 'ERROR'])
    parser.add_argument('--log-file', type=Path, default=None)
    commands = parser.add_subparsers(dest='command', required=True, parser_class=_ArgumentParser)

    certify = commands.add_parser('certify', help='Interval certificate of sup over G')
    certify.add_argument('--aux', required=True, choices=[k.value for k in AuxKind])
    certify.add_argument('--bound', type=float, default=None)
    certify.add_argument('--tol', type=float, default=1e-6)
    certify.add_argument('--max-boxes', type=int, default=10_000_000)
    certify.add_argument('--report', type=Path, default=None)

    edges = commands.add_parser('edges', help='Maxima of the edge restrictions')
    edges.add_argument('--aux', required=True, choices=[k.value for k in AuxKind])
    edges.add_argument('--tol', type=float, default=1e-6)
    edges.add_argument('--points', type=int, default=1000)
    edges.add_argument('--report', type=Path, default=None)

    koebe_cmd = commands.add_parser('koebe', help='Functional at a rotated Koebe function')
    koebe_cmd.add_argument('--theta', type=float, default=0.0)
    koebe_cmd.add_argument('--spec', required=True)

    evaluate_cmd = commands.add_parser('eval', help='Functional at a given (a2, gammas)')
    evaluate_cmd.add_argument('--spec', required=True)
    evaluate_cmd.add_argument('--a2', default='0,0', help="RE,IM")
    evaluate_cmd.add_argument('--gammas', default='', help='RE,IM;RE,IM;...')
    evaluate_cmd.add_argument('--koebe', action='store_true', help='Use the rotated Koebe function')
    evaluate_cmd.add_argument('--theta', type=float, default=0.0)
    evaluate_cmd.add_argument('--order', type=int, default=64)

    sample_cmd = commands.add_parser('sample', help='JSONL stream of random class-U functions')
    sample_cmd.add_argument('--count', type=int, default=10)
    sample_cmd.add_argument('--degree', type=int, default=4)
    sample_cmd.add_argument('--seed', type=int, default=20240531)
    sample_cmd.add_argument('--order', type=int, default=64)

    lemma1 = commands.add_parser('lemma1', help='Schwarz-coefficient bounds on random samples')
    lemma1.add_argument('--count', type=int, default=1000)
    lemma1.add_argument('--degree', type=int, default=4)
    lemma1.add_argument('--seed', type=int, default=20240531)
    lemma1.add_argument('--include-koebe', action='store_true')

    search = commands.add_parser('search', help='Randomized extremal search')
    search.add_argument('--spec', required=True)
    search.add_argument('--restarts', type=int, default=50)
    search.add_argument('--iters', type=int, default=500)
    search.add_argument('--seed', type=int, default=20240531)
    search.add_argument('--degree', type=int, default=4)
    search.add_argument('--workers', type=int, default=1)
    search.add_argument('--out', type=Path, default=None)

    return parser


def _cmd_certify(args: argparse.Namespace, out: TextIO, logger: ToolkitLogger) -> int:
    settings = CertifyConfig(tol=args.tol, max_boxes=args.max_boxes)
    logger.log_stage_start('certify', aux=args.aux, bound=args.bound, **settings.model_dump())
    cert = certify_max(AuxKind(args.aux), args.bound, settings.tol, settings.max_boxes)
    document = cert.model_dump()
    logger.log_certificate(document)
    _emit(document, out)
    _write_report(args.report, format_certificate_report(cert), logger)
    return _STATUS_EXIT[cert.status]


def _cmd_edges(args: argparse.Namespace, out: TextIO, logger: ToolkitLogger) -> int:
    settings = CertifyConfig(tol=args.tol, edge_points=args.points)
    logger.log_stage_start('edges', aux=args.aux)
    reports = edge_profiles(AuxKind(args.aux), settings.tol, settings.edge_points, settings.max_boxes)
    document = {
        'aux': args.aux,
        'maxima': [r.closed_form_max for r in reports],
        'edges': [r.model_dump() for r in reports],
    }
    _emit(document, out)
    _write_report(args.report, format_edge_report(args.aux, reports), logger)
    worst = max((_STATUS_EXIT[r.status] for r in reports), default=EXIT_OK)
    return worst


def _coefficients(f) -> Dict[str, List[float]]:
    return {f"a{n}": _pair(f.coefficient(n)) for n in range(2, 6)}


def _cmd_koebe(args: argparse.Namespace, out: TextIO, logger: ToolkitLogger) -> int:
    spec = FunctionalSpec.parse(args.spec)
    f = koebe(args.theta, order=max(64, spec.required_index))
    value = evaluate(spec, f)
    _emit({
        'spec': spec.label,
        'theta': args.theta,
        'coefficients': _coefficients(f),
        'value': value,
        'bound': bound(spec),
        'excess': value - bound(spec),
        'bound_status': bound_status(spec),
    }, out)
    return EXIT_OK


def _cmd_eval(args: argparse.Namespace, out: TextIO, logger: ToolkitLogger) -> int:
    spec = FunctionalSpec.parse(args.spec)
    order = max(args.order, spec.required_index)
    if args.koebe:
        f = koebe(args.theta, order=order)
    else:
        params = SchurParams(tuple(parse_gammas(args.gammas)))
        f = build_from_params(parse_complex(args.a2), params, order, lenient=True)
    report = validate_class_u_function(f)
    logger.log_validation_result(report.is_valid(), {'errors': report.errors})
    value = evaluate(spec, f)
    _emit({
        'spec': spec.label,
        'coefficients': _coefficients(f),
        'value': value,
        'bound': bound(spec),
        'excess': value - bound(spec),
        'bound_status': bound_status(spec),
        'margin': f.membership_margin,
        'pole_free': f.pole_free,
        'valid': report.is_valid(),
    }, out)
    return EXIT_OK


def _sampler_config(args: argparse.Namespace, order: int = 64) -> SamplerConfig:
    return SamplerConfig(degree=args.degree, seed=args.seed, order=order)


def _cmd_sample(args: argparse.Namespace, out: TextIO, logger: ToolkitLogger) -> int:
    if args.count < 0:
        raise ConfigurationError(f"--count must be >= 0, got {args.count}")
    config = _sampler_config(args, args.order)
    logger.log_configuration({'command': 'sample', 'count': args.count, **config.model_dump()})
    for f in sample_functions(config, args.count):
        _emit(compute_sample_metrics(f), out)
    return EXIT_OK


def _cmd_lemma1(args: argparse.Namespace, out: TextIO, logger: ToolkitLogger) -> int:
    if args.count < 0:
        raise ConfigurationError(f"--count must be >= 0, got {args.count}")
    config = _sampler_config(args)
    functions = list(sample_functions(config, args.count))
    if args.include_koebe:
        functions.append(koebe(0.0, order=config.order))
    reports = [lemma1_check(f.omega.c1, f.omega.c2, f.omega.c3) for f in functions]
    _emit(summarize_lemma1(reports), out)
    return EXIT_OK


def _cmd_search(args: argparse.Namespace, out: TextIO, logger: ToolkitLogger) -> int:
    config = SearchConfig(
        spec=args.spec,
        degree=args.degree,
        restarts=args.restarts,
        iterations=args.iters,
        rng_seed=args.seed,
        workers=args.workers,
    )
    logger.log_configuration({'command': 'search', **config.model_dump(mode='json')})
    records = search_records(config)
    if args.out is not None:
        append_records(args.out, records)
        logger.log_file_io('append', args.out, records=len(records))
    for record in records:
        _emit(record.to_json_record(), out)
    return EXIT_OK


_COMMANDS = {
    'certify': _cmd_certify,
    'edges': _cmd_edges,
    'koebe': _cmd_koebe,
    'eval': _cmd_eval,
    'sample': _cmd_sample,
    'lemma1': _cmd_lemma1,
    'search': _cmd_search,
}


def main(argv: Optional[Sequence[str]] = None, out: Optional[TextIO] = None) -> int:
    """
    Run one command.

    Args:
        argv: Arguments without the program name (defaults to sys.argv[1:])
        out: Stream receiving the JSON output (defaults to stdout)

    Returns:
        Process exit code
    """
    out = out or sys.stdout
    try:
        raw = sys.argv[1:] if argv is None else argv
        args = build_parser().parse_args(join_complex_values(raw))
        settings = ToolkitConfig(log_level=args.log_level, log_file=args.log_file)
    except (ConfigurationError, pydantic.ValidationError) as e:
        sys.stderr.write(f"error: {e}\n")
        return EXIT_USAGE

    logger = create_toolkit_logger(settings.log_level, settings.log_file)
    logger.logger.debug("Environment", extra={'extra_fields': get_environment_info()})

    try:
        code = _COMMANDS[args.command](args, out, logger)
        logger.log_stage_complete(args.command, exit_code=code)
        return code
    except (ConfigurationError, InputError, pydantic.ValidationError) as e:
        logger.logger.error(f"Invalid input: {e}")
        return EXIT_USAGE
    except ToolkitError as e:
        logger.logger.error(f"{type(e).__name__}: {e}", exc_info=True)
        return EXIT_FAILURE
    except OSError as e:
        logger.logger.error(f"I/O error: {e}", exc_info=True)
        return EXIT_FAILURE
