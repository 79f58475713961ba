"""Robustified single-path differentiable architecture search."""

from ._rome import (  # noqa: F401
    __version__,
    collapse_metrics,
    default_config,
    enumerate_without_replacement,
    eval_genotype,
    genotype_to_dot,
    gumbel_max_draws,
    run_search,
    sample_gumbel,
    test_gumbel_top2_equivalence,
    top2_marginal_closed_form,
)
