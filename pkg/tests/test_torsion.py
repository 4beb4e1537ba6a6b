"""Torsion pairs: radicals, axioms, exhaustive pair enumeration.

Frozen counts: the A2 fixture carries exactly 5 torsion pairs at bound
2 and the A3 fixture exactly 14 at bound 3; both counts follow the
Catalan pattern for linearly oriented type-A quivers and were confirmed
by the exhaustive subset scan before freezing.
"""

from __future__ import annotations

import pytest

from quivertilt.enumeration import universe
from quivertilt.modules import (
    direct_sum,
    hom_dim,
    projective_module,
    simple_module,
)
from quivertilt.torsion import (
    ClassSpec,
    TorsionPair,
    enumerate_torsion_pairs,
    free_indec_indices,
    is_torsion_pair,
    pair_from_torsion_indecs,
    reject_subspace,
    torsion_indec_indices,
    trace_subspace,
)


def std_pair(a2):
    """(add S1, add {S2, P1}) on the A2 fixture."""
    s1 = simple_module(a2, 0)
    s2 = simple_module(a2, 1)
    p1 = projective_module(a2, 0)
    return TorsionPair(ClassSpec((s1,), "torsion"),
                       ClassSpec((s2, p1), "free"))


def test_trace_examples(a2):
    s1 = simple_module(a2, 0)
    s2 = simple_module(a2, 1)
    p1 = projective_module(a2, 0)
    # S1 is not a submodule quotient chain inside P1, so its trace is 0.
    assert trace_subspace((s1,), p1).dim == 0
    # The trace of S2 in P1 is the one-dimensional socle.
    assert trace_subspace((s2,), p1).dim == 1
    # Iteration matters: the trace of {S1, S2} exhausts P1 in two steps.
    assert trace_subspace((s1, s2), p1).dim == 2
    both = direct_sum(a2, [s1, s2])[0]
    assert trace_subspace((s1,), both).dim == 1


def test_reject_examples(a2):
    s1 = simple_module(a2, 0)
    s2 = simple_module(a2, 1)
    p1 = projective_module(a2, 0)
    # No maps from P1 to S2, so nothing is rejected away.
    assert reject_subspace((s2,), p1).dim == 2
    assert reject_subspace((s2, p1), p1).dim == 0
    assert reject_subspace((s1,), s2).dim == 1
    # Iteration matters dually: {S1, S2} corejects P1 in two steps.
    assert reject_subspace((s1, s2), p1).dim == 0


def test_membership_std_pair(a2):
    pair = std_pair(a2)
    s1 = simple_module(a2, 0)
    s2 = simple_module(a2, 1)
    p1 = projective_module(a2, 0)
    assert pair.in_torsion(s1) and not pair.in_torsion(s2)
    assert not pair.in_torsion(p1)
    assert pair.in_free(s2) and pair.in_free(p1)
    assert not pair.in_free(s1)
    mixed = direct_sum(a2, [s2, p1])[0]
    assert pair.in_free(mixed)


def test_decompose_std_pair(a2):
    pair = std_pair(a2)
    s1 = simple_module(a2, 0)
    p1 = projective_module(a2, 0)
    whole = direct_sum(a2, [s1, p1])[0]
    ses = pair.decompose(whole)
    assert ses.sub.dim == 1 and ses.quot.dim == 2
    assert pair.in_torsion(ses.sub)
    assert pair.in_free(ses.quot)
    # P1 is torsion-free for the standard pair, so its trace vanishes.
    assert pair.torsion_subspace(p1).dim == 0


def test_axiom_report_valid(a2):
    uni = universe(a2, 2)
    report = is_torsion_pair(std_pair(a2), uni)
    assert report.ok
    assert report.failures == ()


def test_axiom_report_invalid(a2):
    s1 = simple_module(a2, 0)
    s2 = simple_module(a2, 1)
    # add S2 is not the full hom-perp of add S1 (P1 is missing).
    bad = TorsionPair(ClassSpec((s1,), "torsion"), ClassSpec((s2,), "free"))
    report = is_torsion_pair(bad, universe(a2, 2))
    assert not report.ok
    assert any("maximality" in f for f in report.failures)


def test_enumerate_pairs_a2(a2):
    uni = universe(a2, 2)
    pairs = enumerate_torsion_pairs(uni)
    assert len(pairs) == 5
    shape = [(torsion_indec_indices(pr, uni), free_indec_indices(pr, uni))
             for pr in pairs]
    # Indecomposables sort as [S2, S1, P1].
    assert shape == [
        ((), (0, 1, 2)),
        ((0,), (1,)),
        ((1,), (0, 2)),
        ((1, 2), (0,)),
        ((0, 1, 2), ()),
    ]


def test_enumerate_pairs_a3(a3):
    uni = universe(a3, 3)
    pairs = enumerate_torsion_pairs(uni)
    assert len(pairs) == 14
    for pr in pairs:
        t_idx = torsion_indec_indices(pr, uni)
        f_idx = free_indec_indices(pr, uni)
        for i in t_idx:
            for j in f_idx:
                assert hom_dim(uni.indecs[i], uni.indecs[j]) == 0


def test_pair_from_indices_roundtrip(a2):
    uni = universe(a2, 2)
    pair = pair_from_torsion_indecs(uni, (1,))
    assert torsion_indec_indices(pair, uni) == (1,)
    assert free_indec_indices(pair, uni) == (0, 2)
    report = is_torsion_pair(pair, uni)
    assert report.ok
