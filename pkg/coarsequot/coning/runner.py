"""The coneoff command: cone a family off and check the cone-off lemmas at ledger constants."""

import logging
from fractions import Fraction
from pathlib import Path

from coarsequot.coning.checks import (
    check_spriano,
    close_in_x_check,
    cone_slimness,
    de_electrification_length_audit,
    strong_bgi_check,
)
from coarsequot.coning.core import build_cone_off
from coarsequot.config import ExperimentConfig
from coarsequot.core import ExperimentBase, row_of
from coarsequot.errors import FamilyTooSmallError
from coarsequot.graphs.io import read_family, read_graph
from coarsequot.graphs.measure import (
    Sampling,
    quasiconvexity_constant,
    separation_M0,
    slim_constant,
)
from coarsequot.ledger.core import BaseConstants, derive

logger = logging.getLogger(__name__)


class ConeOffRunner(ExperimentBase):
    """Build ``X̂`` over a family and audit strong BGI, closeness and de-electrification."""

    command = "coneoff"

    def __init__(
        self,
        config: ExperimentConfig,
        graph_path: str | Path,
        family_path: str | Path,
        t: int = 1,
        out_dir: str | Path | None = None,
        verbose: bool = False,
    ) -> None:
        """Initialize the run with the graph, its family and the closeness radius ``t``."""
        super().__init__(config, out_dir, verbose)
        self.graph_path = Path(graph_path)
        self.family_path = Path(family_path)
        self.t = t

    def execute(self) -> None:
        """Measure the base constants, cone off and check."""
        with self.stage("read"):
            graph = read_graph(self.graph_path)
            family = read_family(self.family_path, graph)
            if not family:
                raise FamilyTooSmallError(f"{self.family_path} lists no subspaces")
        sampling = Sampling.auto(graph.vertex_count, self.config.samples, self.config.seed)
        with self.stage("measure"):
            delta = Fraction(slim_constant(graph, sampling).value)
            K = max(Fraction(quasiconvexity_constant(graph, m, sampling).value) for m in family)
            M0 = Fraction(separation_M0(graph, family, delta, K) if len(family) > 1 else 0)
        with self.stage("cone_off"):
            cone = build_cone_off(graph, family)
            D = check_spriano(cone, sampling)
            delta_hat = cone_slimness(cone, sampling)
        base = BaseConstants(
            delta=delta,
            K=K,
            M0=M0,
            D=Fraction(D.value),
            measured=frozenset({"delta", "K", "M0", "D"}),
        )
        derived = derive(base)
        logger.info(f"cone-off: δ̂ = {delta_hat.value}, D = {D.value}, C = {derived.C}")
        with self.stage("checks"):
            bgi = strong_bgi_check(cone, derived.C, sampling)
            close = close_in_x_check(cone, self.t, base.D, K, sampling)
            audit = de_electrification_length_audit(cone, sampling)
        self.record("strong_bgi", bgi.passed)
        self.record("close_in_x", close.holds)
        self.record("de_electrification", audit.passed)
        self.payload = {
            "base": base.to_dict(),
            "delta_hat": delta_hat,
            "D": D,
            "C": derived.C,
            "strong_bgi": bgi,
            "close_in_x": close,
            "de_electrification": audit,
            "cones": len(cone.family),
        }
        values: dict[str, object] = {"delta": delta, "delta_hat": delta_hat.value, "D": D.value}
        values.update(C=derived.C, strong_bgi=bgi.passed, close_in_x=close.holds)
        self.rows = [row_of(self.config.seed, values)]
