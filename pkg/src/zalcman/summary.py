"""
Per-sample metrics and human-readable reports.

Metric dictionaries are flat so they serialize directly as JSON lines.
"""
from typing import Any, Dict, Iterable, List, Sequence

from .certify import Certificate, EdgeReport
from .classu import ClassUFunction
from .functionals import excess, proven_specs
from .schwarz import Lemma1Report, lemma1_check


def compute_sample_metrics(f: ClassUFunction) -> Dict[str, Any]:
    """
    Metrics of one sampled function.

    Args:
        f: Class-U function

    Returns:
        Dictionary with a_2, membership data, the excess of each proven
        functional (keyed by spec label) and the three Lemma 1 slacks
    """
    lemma = lemma1_check(f.omega.c1, f.omega.c2, f.omega.c3)
    metrics: Dict[str, Any] = {
        'a2': [f.a2.real, f.a2.imag],
        'gammas': f.params.as_pairs(),
        'margin': f.membership_margin,
        'pole_free': f.pole_free,
        'excess': {spec.label: excess(spec, f) for spec in proven_specs()},
        'lemma1_slacks': list(lemma.slacks),
    }
    return metrics


def summarize_lemma1(reports: Iterable[Lemma1Report]) -> Dict[str, Any]:
    """
    Aggregate Lemma 1 checks.

    Returns:
        {checked, passed, min_slacks}; min_slacks is None when nothing
        was checked
    """
    checked = 0
    passed = 0
    minima: List[float] = []
    for report in reports:
        checked += 1
        passed += int(report.passed)
        if not minima:
            minima = list(report.slacks)
        else:
            minima = [min(m, s) for m, s in zip(minima, report.slacks)]
    return {
        'checked': checked,
        'passed': passed,
        'min_slacks': minima if checked else None,
    }


def format_certificate_report(cert: Certificate) -> str:
    """
    Format a branch-and-bound certificate as a text report.

    Args:
        cert: Certificate from certify_max or certify_univariate_max

    Returns:
        Formatted report string
    """
    lines = [
        "=" * 60,
        f"CERTIFICATE: sup {cert.kind} over G",
        "=" * 60,
        "",
        "CLAIM:",
        f"  Bound: {cert.claimed_bound:.12g}",
        f"  Status: {cert.status.upper()}",
        "",
        "ENCLOSURE:",
        f"  Certified sup <= {cert.certified_sup_hi:.17g}",
        f"  Attained value >= {cert.attained_lo:.17g}",
        f"  Gap: {cert.certified_sup_hi - cert.attained_lo:.3e}",
        "",
        "WITNESS:",
        f"  x = |c1|: {cert.witness_x:.12g}",
        f"  y = |c2|: {cert.witness_y:.12g}",
        "",
        "WORK:",
        f"  Boxes processed: {cert.boxes_processed}",
        f"  Max depth: {cert.max_depth}",
        "=" * 60,
    ]
    return "\n".join(lines)


def format_edge_report(kind: str, reports: Sequence[EdgeReport]) -> str:
    """Format the three edge restrictions of one auxiliary function."""
    lines = [
        "=" * 60,
        f"EDGE RESTRICTIONS OF {kind} ON THE BOUNDARY OF G",
        "=" * 60,
    ]
    for report in reports:
        lines.extend([
            "",
            f"{report.edge}:",
            f"  Profile: {report.closed_form}",
            f"  Max: {report.closed_form_max:.12g} at {report.argmax:.6g}",
            f"  Certified max <= {report.certified_max_hi:.17g} ({report.status})",
            f"  Closed form vs direct: {report.max_discrepancy:.2e}",
        ])
    lines.append("=" * 60)
    return "\n".join(lines)
