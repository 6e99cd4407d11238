"""The analyze command: hyperbolicity, quasiconvexity and separation of a graph and its family."""

import logging
from fractions import Fraction
from pathlib import Path

from coarsequot.config import ExperimentConfig
from coarsequot.constants import NEIGHBORHOOD_RADIUS, PROPAGATION_RADII
from coarsequot.core import ExperimentBase, row_of
from coarsequot.graphs.core import MetricGraph, Subspace
from coarsequot.graphs.io import read_family, read_graph, to_dot
from coarsequot.graphs.measure import (
    Sampling,
    check_bounded_projections,
    check_lipschitz_projection,
    check_neighborhood_quasiconvex,
    check_separation_propagation,
    four_point_constant,
    quasiconvexity_constant,
    separation_M0,
    slim_constant,
)
from coarsequot.ledger.core import BaseConstants, derive

logger = logging.getLogger(__name__)


class AnalyzeRunner(ExperimentBase):
    """Measure ``δ``, each member's ``K`` and ``M₀``, then evaluate the ledger on them."""

    command = "analyze"

    def __init__(
        self,
        config: ExperimentConfig,
        graph_path: str | Path,
        family_path: str | Path | None = None,
        dot_path: str | Path | None = None,
        out_dir: str | Path | None = None,
        verbose: bool = False,
    ) -> None:
        """Initialize the run with its input files."""
        super().__init__(config, out_dir, verbose)
        self.graph_path = Path(graph_path)
        self.family_path = Path(family_path) if family_path is not None else None
        self.dot_path = Path(dot_path) if dot_path is not None else None

    def sampling(self, graph: MetricGraph) -> Sampling:
        """Exhaustive on small graphs, seeded samples otherwise."""
        return Sampling.auto(graph.vertex_count, self.config.samples, self.config.seed)

    def execute(self) -> None:
        """Read the inputs and measure them."""
        with self.stage("read"):
            graph = read_graph(self.graph_path)
            family: list[Subspace] = []
            if self.family_path is not None:
                family = read_family(self.family_path, graph)
        sampling = self.sampling(graph)
        with self.stage("hyperbolicity"):
            slim = slim_constant(graph, sampling)
            four_point = four_point_constant(graph, sampling)
        delta = Fraction(slim.value)
        self.payload = {
            "graph": {"vertices": graph.vertex_count, "edges": len(graph.edges)},
            "delta": slim,
            "four_point": four_point,
        }
        logger.info(f"{self.graph_path.name}: δ = {delta}, four-point = {four_point.value}")
        measured = {"delta"}
        K = Fraction(0)
        M0 = Fraction(0)
        if family:
            with self.stage("quasiconvexity"):
                constants = {m.name: quasiconvexity_constant(graph, m, sampling) for m in family}
            K = max(Fraction(m.value) for m in constants.values())
            measured.add("K")
            self.payload["quasiconvexity"] = constants
            with self.stage("neighborhoods"):
                checks = [
                    check_neighborhood_quasiconvex(graph, m, NEIGHBORHOOD_RADIUS, delta)
                    for m in family
                ]
            if len(family) >= 2:
                with self.stage("separation"):
                    M0 = Fraction(separation_M0(graph, family, delta, K))
                    checks += [
                        check_lipschitz_projection(graph, family, delta, K),
                        check_bounded_projections(graph, family, delta, K, M0),
                        *check_separation_propagation(
                            graph, family, delta, K, M0, PROPAGATION_RADII
                        ),
                    ]
                measured.add("M0")
            self.payload["lemmas"] = checks
            for name in dict.fromkeys(check.name for check in checks):
                self.record(name, all(c.holds for c in checks if c.name == name))
        base = BaseConstants(delta=delta, K=K, M0=M0, measured=frozenset(measured))
        with self.stage("ledger"):
            derived = derive(base)
        self.payload["ledger"] = derived.to_dict()
        values = {"delta": delta, "K": K, "M0": M0, "members": len(family)}
        self.rows = [row_of(self.config.seed, values)]
        if self.dot_path is not None:
            self.dot_path.write_text(to_dot(graph))

