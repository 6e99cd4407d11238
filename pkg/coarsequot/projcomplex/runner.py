"""The projcplx command: projection axioms and the projection complex of a family."""

import logging
from fractions import Fraction
from pathlib import Path

from coarsequot.coning.core import build_cone_off
from coarsequot.config import ExperimentConfig
from coarsequot.core import ExperimentBase, row_of
from coarsequot.errors import ConfigError, FamilyTooSmallError
from coarsequot.graphs.core import MetricGraph
from coarsequot.graphs.io import read_family, read_graph
from coarsequot.graphs.measure import (
    Sampling,
    covering_radius,
    quasiconvexity_constant,
    separation_M0,
    slim_constant,
)
from coarsequot.ledger.core import BaseConstants, DerivedConstants, derive
from coarsequot.projcomplex.core import (
    ProjectionFamily,
    augment_with_points,
    bounded_path_image_check,
    build_projection_complex,
    geometric_family,
    read_explicit_family,
    verify_projection_axioms,
)

logger = logging.getLogger(__name__)


class ProjComplexRunner(ExperimentBase):
    """Check the projection axioms on a geometric or explicit family and build ``P_Ж``."""

    command = "projcplx"

    def __init__(
        self,
        config: ExperimentConfig,
        graph_path: str | Path | None = None,
        family_path: str | Path | None = None,
        table_path: str | Path | None = None,
        theta: Fraction | None = None,
        out_dir: str | Path | None = None,
        verbose: bool = False,
    ) -> None:
        """Initialize with a graph and family, or with an explicit distance table.

        Raises:
            ConfigError: Unless exactly one of the two inputs is given.
        """
        super().__init__(config, out_dir, verbose)
        geometric = graph_path is not None and family_path is not None
        if geometric == (table_path is not None):
            raise ConfigError("give either a graph with its family or an explicit table")
        self.graph_path = Path(graph_path) if graph_path is not None else None
        self.family_path = Path(family_path) if family_path is not None else None
        self.table_path = Path(table_path) if table_path is not None else None
        self.theta = theta

    def execute(self) -> None:
        """Dispatch on the input kind."""
        if self.table_path is not None:
            self.run_explicit(self.table_path)
        elif self.graph_path is not None and self.family_path is not None:
            self.run_geometric(self.graph_path, self.family_path)

    def run_explicit(self, path: Path) -> None:
        """Check an explicit family at the given or claimed ``θ`` and build ``P_{33θ}``."""
        with self.stage("read"):
            family = read_explicit_family(path)
        theta = self.theta if self.theta is not None else family.theta_claimed
        if theta is None:
            raise ConfigError(f"{path} claims no θ; pass one on the command line")
        self.check_family("family", family, theta)
        self.build_complex(family, theta, 33 * theta)
        self.rows = [row_of(self.config.seed, {"size": family.size, "theta": theta})]

    def run_geometric(self, graph_path: Path, family_path: Path) -> None:
        """Cone the family off, measure its ledger and check both families at ledger constants."""
        with self.stage("read"):
            graph = read_graph(graph_path)
            members = read_family(family_path, graph)
            if len(members) < 2:
                raise FamilyTooSmallError("a projection family needs at least two members")
        sampling = Sampling.auto(graph.vertex_count, self.config.samples, self.config.seed)
        with self.stage("measure"):
            delta = Fraction(slim_constant(graph, sampling).value)
            K = max(Fraction(quasiconvexity_constant(graph, m, sampling).value) for m in members)
            M0 = Fraction(separation_M0(graph, members, delta, K))
            R = covering_radius(graph, members)
        base = BaseConstants(
            delta=delta, K=K, M0=M0, R=R, measured=frozenset({"delta", "K", "M0", "R"})
        )
        derived = derive(base)
        with self.stage("families"):
            cone = build_cone_off(graph, members)
            family = geometric_family(cone, derived.theta)
            augmented = augment_with_points(cone, R, derived.Theta)
        self.payload["base"] = base.to_dict()
        self.check_family("geometric", family, derived.theta, derived, graph)
        self.check_family("augmented", augmented, derived.Theta, derived, graph)
        self.build_complex(family, derived.theta, derived.Zhe)
        logger.info(f"θ = {derived.theta}, Θ = {derived.Theta}, Ж = {derived.Zhe}")
        values: dict[str, object] = {"size": family.size, "theta": derived.theta}
        values.update(Theta=derived.Theta, Zhe=derived.Zhe)
        self.rows = [row_of(self.config.seed, values)]

    def check_family(
        self,
        name: str,
        family: ProjectionFamily,
        theta: Fraction,
        derived: DerivedConstants | None = None,
        graph: MetricGraph | None = None,
    ) -> None:
        """Verify the axioms and record the verdict."""
        diameter = graph.diameter_of(graph.vertices()) if graph is not None else None
        D0 = derived.D0 if derived is not None else None
        with self.stage(f"axioms_{name}"):
            report = verify_projection_axioms(family, theta, D0, diameter)
        self.record(f"axioms_{name}", report.passed)
        self.payload[name] = {"theta": theta, "size": family.size, "axioms": report}

    def build_complex(self, family: ProjectionFamily, theta: Fraction, zhe: Fraction) -> None:
        """Build ``P_Ж`` and check bounded path images on it."""
        with self.stage("complex"):
            complex_ = build_projection_complex(family, zhe)
            images = bounded_path_image_check(complex_, theta)
        self.record("bounded_path_image", images.passed)
        self.payload["complex"] = {"complex": complex_, "path_images": images}
