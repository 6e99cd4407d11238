"""The walk command: drift, translation lengths and matching statistics of a random walk."""

import logging

from coarsequot.core import ExperimentBase
from coarsequot.randwalk.core import (
    Measure,
    estimate_drift,
    sample_walk,
    translation_statistics,
)
from coarsequot.randwalk.matching import match_statistics, self_match_audit

logger = logging.getLogger(__name__)


class WalkRunner(ExperimentBase):
    """Estimate ``Δ``, then turn the translation-length and matching claims into pass fractions."""

    command = "walk"

    def execute(self) -> None:
        """Run the three estimates and the self-match audit."""
        config = self.config
        presentation = config.presentation
        n = config.walk_length
        with self.stage("measure"):
            measure = Measure.uniform_generators(presentation)
        with self.stage("drift"):
            drift = estimate_drift(presentation, measure, n, config.trials, config.seed)
        conservative = drift.conservative(config.stderr_margin)
        with self.stage("translation"):
            taus = translation_statistics(
                presentation,
                measure,
                n,
                config.seeds,
                drift.mean,
                config.derived_seed(1),
                config.stderr_margin,
            )
        A = config.epsilon * max(conservative, 0.0) * n
        with self.stage("matching"):
            matches = match_statistics(
                presentation,
                measure,
                n,
                config.seeds,
                A,
                config.match_q,
                config.match_q,
                config.derived_seed(2),
            )
            walk = sample_walk(measure, n, config.derived_seed(3))
            audit = self_match_audit(presentation, walk.endpoint, A, config.match_q, config.match_q)
        logger.info(
            f"Δ̂ = {drift.mean:.4f} ± {drift.stderr:.4f}; τ pass {taus.pass_fraction:.2f}; "
            f"clean {matches.clean_fraction:.2f}"
        )
        self.record("translation_length", taus.pass_fraction >= config.aas_fraction)
        self.record("matching", matches.clean_fraction >= config.aas_fraction)
        self.record("self_match", audit.passed)
        self.figures = {
            "n": n,
            "drift": drift.mean,
            "tau_pass_fraction": taus.pass_fraction,
            "clean_fraction": matches.clean_fraction,
        }
        self.payload = {
            "config": config.to_dict(),
            "drift": drift,
            "drift_conservative": conservative,
            "translation": taus,
            "matching": matches,
            "self_match": audit,
        }
        self.rows = [
            {
                "seed": index,
                "n": n,
                "drift": drift.mean,
                "tau": tau,
                "length": length,
                "matched": matched,
            }
            for index, (tau, length, matched) in enumerate(
                zip(taus.taus, taus.lengths, matches.matched, strict=True)
            )
        ]

