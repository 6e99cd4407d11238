"""The constants command: the full ledger for a base, optionally swept over ``M₀``."""

import logging
from collections.abc import Sequence
from fractions import Fraction
from pathlib import Path

from coarsequot import formatting
from coarsequot.config import ExperimentConfig
from coarsequot.core import ExperimentBase, row_of
from coarsequot.ledger.core import (
    BaseConstants,
    check_identities,
    check_linear_in_M0,
    derive,
    ledger_table,
)

logger = logging.getLogger(__name__)

# Constants whose M₀ dependence is a single affine function.
AFFINE_IN_M0: tuple[str, ...] = ("B", "C", "theta", "Theta")
# Constants that are a maximum of affine branches.
PIECEWISE_IN_M0: tuple[str, ...] = ("Theta_tilde", "L_hyp", "L_min", "L_tilde")


class ConstantsRunner(ExperimentBase):
    """Derive every constant from a base file, check the identities and fit against ``M₀``."""

    command = "constants"

    def __init__(
        self,
        config: ExperimentConfig,
        base_path: str | Path | None = None,
        m0_sweep: Sequence[Fraction] = (),
        L: Fraction | None = None,
        markdown: bool = False,
        out_dir: str | Path | None = None,
        verbose: bool = False,
    ) -> None:
        """Initialize the run; without a base file the all-zero base is used."""
        super().__init__(config, out_dir, verbose)
        self.base_path = Path(base_path) if base_path is not None else None
        self.m0_sweep = tuple(m0_sweep)
        self.L = L
        self.markdown = markdown
        self.table = ""

    def execute(self) -> None:
        """Evaluate the ledger."""
        with self.stage("read"):
            base = BaseConstants.read(self.base_path) if self.base_path else BaseConstants()
        with self.stage("derive"):
            derived = derive(base)
        failing = check_identities(derived)
        self.record("identities", not failing)
        self.payload = {
            "base": base.to_dict(),
            "derived": derived.to_dict(self.L),
            "failing_identities": failing,
        }
        if self.m0_sweep:
            with self.stage("m0_sweep"):
                fits = [
                    check_linear_in_M0(base, name, self.m0_sweep)
                    for name in AFFINE_IN_M0 + PIECEWISE_IN_M0
                ]
            for fit in fits:
                if fit.name in AFFINE_IN_M0:
                    self.record(f"affine_{fit.name}", fit.affine)
            self.payload["m0_sweep"] = {"samples": list(self.m0_sweep), "fits": fits}
        logger.info(f"ledger: C = {derived.C}, θ = {derived.theta}, L_min = {derived.L_min}")
        self.table = ledger_table(derived)
        values: dict[str, object] = {"J": derived.J, "B": derived.B, "C": derived.C}
        values.update(theta=derived.theta, Theta=derived.Theta, Zhe=derived.Zhe)
        values["L_min"] = derived.L_min
        if self.L is not None:
            values["tau"] = derived.tau(self.L)
        self.rows = [row_of(self.config.seed, values)]

    def save_results(self) -> None:
        """Print the markdown table when asked, then save as usual."""
        if self.markdown:
            formatting.console.print(self.table, markup=False, highlight=False)
        super().save_results()
