"""Property checks on a built quotient ``X̄ = X̂/N``."""

from __future__ import annotations

import itertools
import logging
from collections import defaultdict
from collections.abc import Sequence
from fractions import Fraction

import numpy as np

from coarsequot.constants import OUT_OF_BALL, PAIR_CAP
from coarsequot.errors import BudgetExceededError, NotApplicableError
from coarsequot.graphs.measure import (
    CheckReport,
    LemmaCheck,
    Sampling,
    hausdorff_distance,
    slim_constant,
)
from coarsequot.groups.words import GroupElement, power_exponent
from coarsequot.groups.words import translation_length as cyclic_length
from coarsequot.spinning.core import SpinningInstance
from coarsequot.spinning.quotient import QuotientGraph

logger = logging.getLogger(__name__)


def quotient_slimness_check(
    inst: SpinningInstance, quotient: QuotientGraph, sampling: Sampling | None = None
) -> LemmaCheck:
    """The quotient is no less slim than the cone-off it came from."""
    cone = slim_constant(inst.cone.graph, sampling)
    reduced = slim_constant(quotient.graph, sampling)
    return LemmaCheck(
        "quotient_slimness",
        Fraction(cone.value),
        reduced.value,
        reduced.witness,
        {"delta_hat": str(cone.value), "delta_bar": str(reduced.value), "exact": reduced.exact},
    )


def _lifted_edges(
    inst: SpinningInstance, quotient: QuotientGraph
) -> dict[tuple[int, int], list[tuple[int, int]]]:
    """Source edges grouped by their quotient edge, base endpoint first when there is one."""
    lifted: dict[tuple[int, int], list[tuple[int, int]]] = defaultdict(list)
    for u, v in inst.cone.graph.edges:
        if inst.cone.is_cone(u):
            u, v = v, u
        a, b = quotient.class_of(u), quotient.class_of(v)
        if a != b:
            lifted[(a, b)].append((u, v))
    return lifted


def edge_orbit_check(
    inst: SpinningInstance, quotient: QuotientGraph, sampling: Sampling | None = None
) -> CheckReport:
    """All lifts of a quotient edge lie in one ``N``-orbit of edges."""
    lifted = _lifted_edges(inst, quotient)
    keys = sorted(lifted)
    sampling = sampling or Sampling.auto(len(keys))
    if not sampling.exact and sampling.count < len(keys):
        picks = sampling.rng().choice(len(keys), size=sampling.count, replace=False)
        keys = [keys[int(i)] for i in sorted(picks)]
    violations = []
    examined = 0
    for key in keys:
        (u0, v0), *others = lifted[key]
        for u, v in others:
            examined += 1
            n = inst.carry(u0, u)
            if inst.act(n, v0) != v:
                violations.append((u0, v0, u, v))
    return CheckReport("edge_orbit", examined, tuple(violations), {"quotient_edges": len(keys)})


def no_pivot_check(inst: SpinningInstance, quotient: QuotientGraph) -> CheckReport:
    """Two cone-free geodesic legs never join distinct vertices of one class.

    A leg from ``x`` to ``y`` avoids every cone vertex exactly when ``d_X(x, y) = d_X̂(x, y)``.

    Raises:
        BudgetExceededError: If the same-class pairs exceed the pair cap.
    """
    n = inst.base_count
    pairs = [
        pair
        for members in quotient.classes
        if members[0] < n
        for pair in itertools.combinations(members, 2)
    ]
    if len(pairs) > PAIR_CAP:
        raise BudgetExceededError(f"{len(pairs)} same-class pairs exceed the cap of {PAIR_CAP}")
    base, coned = inst.cone.base, inst.cone.graph
    rows: dict[int, np.ndarray] = {}

    def cone_free(x: int) -> np.ndarray:
        if x not in rows:
            rows[x] = base.distances_from(x) == coned.distances_from(x)[:n]
        return rows[x]

    violations = []
    for x, y in pairs:
        both = cone_free(x) & cone_free(y)
        if both.any():
            violations.append((x, y, int(np.argmax(both))))
    return CheckReport("no_pivot", len(pairs), tuple(violations))


def stabilizer_check(inst: SpinningInstance, quotient: QuotientGraph) -> CheckReport:
    """Elements of ``N`` fixing a member are powers of its generator; none fixes a ball vertex.

    Saturation elements are checked directly; loops closed while merging classes are checked
    through the element they carry.
    """
    violations = []
    examined = 0
    for j, member in enumerate(inst.members):
        for index, s in enumerate(quotient.saturation):
            if inst.member_image(s, j) != j:
                continue
            examined += 1
            if power_exponent(s, member.generator) is None:
                violations.append((j, index))
    n = inst.base_count
    loops = []
    for root, element in quotient.links.cycles:
        examined += 1
        if root < n or power_exponent(element, inst.members[root - n].generator) is None:
            violations.append((root, -1))
            loops.append(str(element))
    return CheckReport("stabilizer", examined, tuple(violations), {"loops": loops})


def orbit_growth_check(
    inst: SpinningInstance,
    quotient: QuotientGraph,
    f: GroupElement,
    x: int,
    powers: Sequence[int],
    slack: int | Fraction = 0,
) -> CheckReport:
    """Quotient orbits of ``f`` grow at least like ``k · τ(f) / (L/20 + 2C)``.

    Powers whose image leaves the ball are skipped and listed.

    Raises:
        NotApplicableError: Without a ledger.
    """
    if inst.derived is None:
        raise NotApplicableError("orbit growth needs the ledger constant C")
    rate = Fraction(cyclic_length(f)) / (inst.L / 20 + 2 * inst.derived.C)
    violations = []
    rows = []
    skipped = []
    for k in powers:
        image = inst.act(f**k, x)
        if image == OUT_OF_BALL:
            skipped.append(k)
            continue
        reduced = quotient.distance(x, image)
        floor = k * rate - Fraction(slack)
        rows.append({"k": k, "distance": reduced, "floor": str(floor)})
        if reduced < floor:
            violations.append((k, reduced))
    return CheckReport(
        "orbit_growth", len(rows), tuple(violations), {"rows": rows, "out_of_ball": skipped}
    )


def orbit_separation(
    inst: SpinningInstance,
    quotient: QuotientGraph,
    f: GroupElement,
    g: GroupElement,
    x: int,
    powers: Sequence[int],
) -> int:
    """Hausdorff distance in ``X̄`` between the in-ball orbit images of ``f`` and ``g``.

    Raises:
        EmptySubspaceError: If one orbit has no in-ball point.
    """
    orbits = []
    for element in (f, g):
        images = {inst.act(element**k, x) for k in powers} - {OUT_OF_BALL}
        orbits.append({quotient.class_of(v) for v in images})
    return hausdorff_distance(quotient.graph, orbits[0], orbits[1])
