"""The hhs-verify command: hierarchy axioms on a structure and optionally on its quotient."""

import logging
from collections.abc import Sequence
from pathlib import Path

from coarsequot.config import ExperimentConfig
from coarsequot.core import row_of
from coarsequot.errors import ConfigError
from coarsequot.graphs.measure import Sampling
from coarsequot.hhs.axioms import close_projections_check, distance_formula_fit, verify_hhs_axioms
from coarsequot.hhs.core import (
    BuiltinKind,
    HHSStructure,
    builtin_instance,
    read_structure,
    top_ball,
)
from coarsequot.hhs.quotient import QuotientHHS, peripheral_audit, unique_reps_check
from coarsequot.spinning.core import SpinningInstance
from coarsequot.spinning.quotient import QuotientGraph
from coarsequot.spinning.runner import QuotientRunner

logger = logging.getLogger(__name__)


class HhsVerifyRunner(QuotientRunner):
    """Verify a built-in or loaded structure, then optionally spin a quotient of it."""

    command = "hhs-verify"

    def __init__(
        self,
        config: ExperimentConfig,
        kind: BuiltinKind | None = None,
        structure_path: str | Path | None = None,
        factor_ranks: Sequence[int] = (),
        quotient: bool = False,
        out_dir: str | Path | None = None,
        verbose: bool = False,
    ) -> None:
        """Initialize with a built-in kind or a structure file.

        Raises:
            ConfigError: Unless exactly one source is given, or when a quotient is asked of a
                structure file.
        """
        super().__init__(config, out_dir, verbose)
        if (kind is None) == (structure_path is None):
            raise ConfigError("give either a built-in kind or a structure file")
        if quotient and structure_path is not None:
            raise ConfigError("quotients are only built over built-in structures")
        self.kind = kind
        self.structure_path = Path(structure_path) if structure_path is not None else None
        self.factor_ranks = tuple(factor_ranks)
        self.quotient = quotient

    def load(self) -> HHSStructure:
        """The structure under test."""
        if self.kind is None:
            return read_structure(self.structure_path)
        return builtin_instance(
            self.kind, self.config.ball_radius, self.config.presentation, self.factor_ranks
        )

    def execute(self) -> None:
        """Axioms, close projections and the distance-formula fit; then the quotient if asked."""
        config = self.config
        with self.stage("structure"):
            h = self.load()
        sampling = Sampling.auto(h.point_count, config.hhs_samples, config.seed)
        with self.stage("axioms"):
            axioms = verify_hhs_axioms(h, sampling)
            close = close_projections_check(h)
            fit = distance_formula_fit(h, sampling=sampling)
        self.record("axioms", axioms.passed)
        self.record("close_projections", close.passed)
        logger.info(f"{h.name}: {h.domain_count} domains, E = {h.E}, axioms {axioms.passed}")
        self.payload.update(structure=h.name, axioms=axioms, close=close, distance_formula=fit)
        self.figures.update(
            domains=h.domain_count,
            points=h.point_count,
            E=h.E,
            axioms=axioms.passed,
            close_projections=close.passed,
            multiplicative=fit.multiplicative,
            additive=fit.additive,
        )
        if self.quotient:
            with self.stage("ball"):
                ball = top_ball(h)
            spun = self.spin(ball)
            if spun is not None:
                q = self.report_structure(h, *spun)
                self.report_peripheral(h, q, *spun[:2])
        self.rows = [row_of(config.seed, self.figures)]

    def report_peripheral(
        self, h: HHSStructure, q: QuotientHHS, inst: SpinningInstance, quotient: QuotientGraph
    ) -> None:
        """Peripheral embedding for free products; the unique-representative dichotomy always."""
        with self.stage("unique_reps"):
            reps = unique_reps_check(q, Sampling.random(self.config.hhs_samples, self.config.seed))
        self.record("unique_reps", reps.passed)
        self.payload["unique_reps"] = reps
        if h.ball is None or not h.ball.presentation.factor_ranks:
            return
        with self.stage("peripheral_embedding"):
            audit = peripheral_audit(h, inst, quotient)
        self.record("peripheral_embedding", audit.passed)
        self.payload["peripheral"] = audit
        self.figures["peripheral_embedding"] = audit.passed
