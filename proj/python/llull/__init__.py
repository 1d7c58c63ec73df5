"""Fraction-like rates from ballots and Llull matrices."""

from ._llull import (
    BallotSet,
    LlullError,
    Matrix,
    Projection,
    RateReport,
    aggregate,
    analyze,
    check_clc,
    check_clone_consistency,
    check_decomposition,
    clc_project,
    eigenvector_rates,
    fraction_like_rates,
    indirect_scores,
    mean_preference_scores,
    mean_ranks,
    parse_ballots,
    parse_matrix,
    solve,
)


def tally(text, ties="half", **solver):
    """Rates for a ballot file's contents."""
    return fraction_like_rates(aggregate(parse_ballots(text), ties), **solver)


__all__ = [name for name in dir() if not name.startswith("_")]
