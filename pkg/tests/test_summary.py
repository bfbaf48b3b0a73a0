"""Unit tests for sample metrics and text reports."""
import json

import pytest

from src.zalcman.certify import AuxKind, certify_max, edge_profiles
from src.zalcman.schwarz import lemma1_check
from src.zalcman.summary import (
    compute_sample_metrics,
    format_certificate_report,
    format_edge_report,
    summarize_lemma1,
)


def test_sample_metrics_of_koebe(koebe_function) -> None:
    """Test Koebe has zero excess and zero slacks."""
    metrics = compute_sample_metrics(koebe_function)

    assert metrics['a2'] == [2.0, 0.0]
    assert metrics['margin'] == 0.0
    assert metrics['pole_free']
    assert set(metrics['excess']) == {'Z:2', 'Z:3', 'GZ:2,3', 'GZ:2,4', 'K:4,1', 'K:5,1'}
    for value in metrics['excess'].values():
        assert value == pytest.approx(0.0, abs=1e-12)
    assert metrics['lemma1_slacks'] == pytest.approx([0.0, 0.0, 0.0], abs=1e-15)


def test_sample_metrics_serialize(sample_batch) -> None:
    """Test metrics are plain JSON."""
    line = json.dumps(compute_sample_metrics(sample_batch[100]))

    assert json.loads(line)['pole_free'] is True


def test_summarize_lemma1_minima() -> None:
    """Test checked/passed counts and componentwise minimum slacks."""
    reports = [lemma1_check(0.5, 0.1, 0.0), lemma1_check(0.0, 0.0, 0.1), lemma1_check(0.5, 0.5, 0.0)]

    summary = summarize_lemma1(reports)

    assert summary['checked'] == 3
    assert summary['passed'] == 2
    assert summary['min_slacks'] == [min(r.slacks[k] for r in reports) for k in range(3)]


def test_summarize_lemma1_empty() -> None:
    """Test no reports gives min_slacks None."""
    assert summarize_lemma1([]) == {'checked': 0, 'passed': 0, 'min_slacks': None}


def test_format_certificate_report() -> None:
    """Test the certificate report contains its sections."""
    report = format_certificate_report(certify_max(AuxKind.F2))

    assert 'CERTIFICATE: sup f2 over G' in report
    assert 'Status: PROVEN' in report
    assert 'WITNESS:' in report
    assert report.startswith('=' * 60)


def test_format_edge_report() -> None:
    """Test every edge appears in the report."""
    report = format_edge_report('g', edge_profiles(AuxKind.G, points=50))

    for edge in ['x=0:', 'y=0:', 'y=(1-x^2)/2:']:
        assert edge in report
    assert '2 + 28/3 x - x^3/3' in report
