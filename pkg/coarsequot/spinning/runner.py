"""The quotient command: the random-quotient pipeline from walks to triangle lifts."""

import dataclasses
import itertools
import logging
from fractions import Fraction

from coarsequot.coning.checks import check_spriano
from coarsequot.core import ExperimentBase, row_of
from coarsequot.errors import NotSmallCancellationError
from coarsequot.graphs.measure import (
    Sampling,
    covering_radius,
    fellow_travel_constant,
    slim_constant,
)
from coarsequot.groups.ball import CayleyBall, cayley_ball
from coarsequot.groups.presentation import Presentation, PresentationKind, piece_report
from coarsequot.groups.words import GroupElement, cyclic_reduce
from coarsequot.hhs.axioms import verify_hhs_axioms
from coarsequot.hhs.core import HHSStructure, trivial_instance
from coarsequot.hhs.quotient import QuotientHHS, build_quotient_structure, check_quotient_bounds
from coarsequot.ledger.core import BaseConstants, derive
from coarsequot.randwalk.axes import build_quasi_axis
from coarsequot.randwalk.core import Measure, estimate_drift, sample_walk
from coarsequot.randwalk.matching import find_match
from coarsequot.spinning.checks import quotient_slimness_check
from coarsequot.spinning.core import SpinningInstance, spinning_instance, verify_spinning
from coarsequot.spinning.lifting import lift_random_triangles
from coarsequot.spinning.quotient import (
    QuotientGraph,
    build_quotient,
    injectivity_report,
    isoproj_report,
)

logger = logging.getLogger(__name__)


def draw_relators(
    presentation: Presentation, measure: Measure, n: int, walks: int, seed: int, resamples: int
) -> tuple[list[GroupElement], int]:
    """Walk endpoints whose cyclic cores together satisfy C′(1/6), and the draws it took.

    Raises:
        NotSmallCancellationError: If no draw within ``resamples`` passes.
    """
    for attempt in range(resamples):
        endpoints = [
            sample_walk(measure, n, seed + attempt * walks + i).endpoint for i in range(walks)
        ]
        cores = [cyclic_reduce(w)[1] for w in endpoints]
        report = piece_report(cores)
        if report.small_cancellation:
            return endpoints, attempt + 1
        logger.warning(f"draw {attempt}: piece ratio {report.ratio} fails C′(1/6), redrawing")
    raise NotSmallCancellationError(f"no C′(1/6) relators in {resamples} draws")


def axis_radius(ball: CayleyBall, g: GroupElement) -> int:
    """Exponents needed for the translates of ``[y, g·y]`` to cross the ball."""
    return 2 * ball.radius // max(len(cyclic_reduce(g)[1]), 1) + 1


def spinning_M0(
    epsilon: float | Fraction,
    scale: int | Fraction,
    K: int | Fraction,
    E: int | Fraction,
    Phi: int | Fraction,
) -> Fraction:
    """``M₀ = ε·scale + 4K + 4E + 2Φ``, where ``scale`` is the conservative ``Δ̂n``."""
    epsilon = Fraction(epsilon).limit_denominator(1000)
    return epsilon * Fraction(scale) + 4 * Fraction(K) + 4 * Fraction(E) + 2 * Fraction(Phi)


class QuotientRunner(ExperimentBase):
    """Sample walks, spin their axes, build ``X̄`` and report on it."""

    command = "quotient"

    def execute(self) -> None:
        """Run every stage on the Cayley ball of the configured presentation."""
        config = self.config
        presentation = config.presentation
        with self.stage("ball"):
            ball = cayley_ball(presentation, config.ball_radius)
        spun = self.spin(ball)
        if spun is not None:
            inst, quotient, sampling = spun
            if config.hhs and presentation.kind is PresentationKind.FREE:
                with self.stage("hhs_quotient"):
                    h = trivial_instance(presentation, ball.radius, sampling)
                self.report_structure(h, inst, quotient, sampling)
            elif config.hhs:
                logger.warning("the hierarchy quotient needs a free base group, skipping it")
        self.rows = [row_of(config.seed, self.figures)]

    def spin(self, ball: CayleyBall) -> tuple[SpinningInstance, QuotientGraph, Sampling] | None:
        """Walks to ``X̄`` on ``ball``; ``None`` once a failed spinning check is recorded."""
        config = self.config
        presentation = ball.presentation
        n = config.walk_length
        with self.stage("walks"):
            measure = Measure.uniform_generators(presentation)
            drift = estimate_drift(presentation, measure, n, config.trials, config.seed)
            endpoints, draws = draw_relators(
                presentation, measure, n, config.walks, config.derived_seed(1), config.resamples
            )
            relators = [cyclic_reduce(w)[1] for w in endpoints]
            quotient_presentation = Presentation.small_cancellation(presentation.rank, relators)
        conservative = Fraction(drift.conservative(config.stderr_margin)).limit_denominator(1000)
        cross_matches = self.cross_matches(presentation, endpoints, float(conservative) * n)
        sampling = Sampling.auto(ball.vertex_count, config.samples, config.seed)
        with self.stage("axes"):
            delta = Fraction(slim_constant(ball.graph, sampling).value)
            axes = [build_quasi_axis(ball, w, delta, axis_radius(ball, w)) for w in endpoints]
            K = max(Fraction(axis.quasiconvexity.value) for axis in axes)
            pieces = [piece for axis in axes for piece in axis.pieces(ball)]
            Phi = Fraction(fellow_travel_constant(ball.graph, pieces).value)
        with self.stage("family"):
            inst = spinning_instance(
                ball,
                axes,
                0,
                quotient_presentation,
                config.translate_radius,
                config.min_overlap,
            )
            D = Fraction(check_spriano(inst.cone, sampling).value)
            R = covering_radius(ball.graph, inst.family)
        # hyperbolic base: no hierarchy constant
        E = Fraction(0)
        M0 = spinning_M0(config.epsilon, conservative * n, K, E, Phi)
        base = BaseConstants(
            delta=delta,
            K=K,
            M0=M0,
            R=R,
            E=E,
            D=D,
            Phi=Phi,
            measured=frozenset({"delta", "K", "R", "D", "Phi"}),
        )
        with self.stage("ledger"):
            derived = derive(base)
        L = conservative * n - 2 * derived.B
        inst = dataclasses.replace(inst, L=L, derived=derived)
        logger.info(f"Δ̂ = {drift.mean:.4f}, L = {L}, B = {derived.B}, τ(L) = {derived.tau(L)}")
        self.payload.update(
            config=config.to_dict(),
            drift=drift,
            relators=[str(r) for r in relators],
            draws=draws,
            cross_matches=cross_matches,
            axes=axes,
            base=base.to_dict(),
            ledger=derived.to_dict(L),
            L=L,
            instance=inst,
        )
        self.figures.update(n=n, drift=drift.mean, L=L, tau=derived.tau(L))
        self.figures["cross_matches"] = len(cross_matches)
        with self.stage("verify_spinning"):
            spinning = verify_spinning(inst, sampling)
        self.payload["spinning"] = spinning
        self.record("verify_spinning", spinning.passed)
        if not spinning.passed:
            return None
        with self.stage("build_quotient"):
            quotient = build_quotient(inst, config.budget)
        self.report_quotient(inst, quotient, sampling)
        return inst, quotient, sampling

    def report_quotient(
        self, inst: SpinningInstance, quotient: QuotientGraph, sampling: Sampling
    ) -> None:
        """Injectivity, slimness, the isoproj comparison and triangle lifts."""
        with self.stage("injectivity"):
            injectivity = injectivity_report(inst, quotient, sampling)
        with self.stage("hyperbolicity"):
            slimness = quotient_slimness_check(inst, quotient, sampling)
        with self.stage("isoproj"):
            isoproj = isoproj_report(inst, quotient, sampling)
        with self.stage("lift_triangle"):
            lifts = lift_random_triangles(
                inst, quotient, self.config.triangles, self.config.derived_seed(4)
            )
        self.record("injectivity", injectivity.passed)
        self.record("quotient_slimness", slimness.holds)
        self.record("isoproj", isoproj.passed)
        self.record("lift_triangle", lifts.closed == len(lifts.lifts) and lifts.descending)
        self.payload.update(
            quotient=quotient,
            injectivity=injectivity,
            slimness=slimness,
            isoproj=isoproj,
            lifts=lifts,
        )
        self.figures.update(
            delta_hat=slimness.bound,
            delta_bar=slimness.observed,
            min_displacement=injectivity.min_displacement,
            triangles_closed=lifts.closed,
            oracle_agreement=quotient.oracle_checked,
            injectivity=injectivity.passed,
            slimness=slimness.holds,
        )

    def report_structure(
        self, h: HHSStructure, inst: SpinningInstance, quotient: QuotientGraph, sampling: Sampling
    ) -> QuotientHHS:
        """The quotient of ``h`` by the spun normal subgroup, its bounds and its axioms."""
        with self.stage("hhs_quotient"):
            structure = build_quotient_structure(h, inst, quotient, sampling)
            bounds = check_quotient_bounds(
                structure, Sampling.random(self.config.hhs_samples, self.config.seed)
            )
            axioms = verify_hhs_axioms(structure.structure, sampling)
        self.record("quotient_bounds", bounds.passed)
        self.record("quotient_axioms", axioms.passed)
        self.payload.update(hhs=structure, bounds=bounds, hhs_axioms=axioms)
        self.figures.update(quotient_bounds=bounds.passed, quotient_axioms=axioms.passed)
        return structure

    def cross_matches(
        self, presentation: Presentation, endpoints: list[GroupElement], scale: float
    ) -> list[dict[str, object]]:
        """``(εΔ̂n, Q)``-matches between distinct walk geodesics; recorded, not asserted."""
        config = self.config
        if len(endpoints) < 2 or not presentation.is_free:
            return []
        A = config.epsilon * max(scale, 0.0)
        found = []
        with self.stage("matching"):
            for (i, p), (j, q) in itertools.combinations(enumerate(endpoints), 2):
                Q = config.match_q
                match = find_match(presentation, p.prefixes(), q.prefixes(), A, Q, Q)
                if match is not None:
                    logger.warning(f"walks {i} and {j} match via {match.g}")
                    found.append({"walks": [i, j], **match.to_dict()})
        return found
