"""Axiom checkers for hierarchy structures, plus instance-level sanity checks.

Every checker samples tuples from the structure the way the graph measurements do: exhaustively
when the tuple space is small and the sampling is exhaustive, otherwise ``sampling.count`` seeded
draws. One generator is shared by all checkers of a run, so a seed fixes the whole report.
"""

from __future__ import annotations

import itertools
import logging
import math
from collections.abc import Iterable, Iterator, Sequence
from dataclasses import dataclass, field
from fractions import Fraction
from typing import TypeVar

import networkx as nx
import numpy as np

from coarsequot.constants import (
    BGI_PAIRS_PER_DOMAIN,
    DISTANCE_FORMULA_THRESHOLD,
    HHS_CONSTANT_CAP,
    HHS_DOMAIN_SAMPLES,
    HHS_REALIZATION_SAMPLES,
    HHS_SAMPLES,
    PAIR_CAP,
    PASSING_UP_THRESHOLDS,
    UNIQUENESS_RADII,
)
from coarsequot.errors import MissingRhoError
from coarsequot.graphs.measure import CheckReport, Sampling, slim_constant
from coarsequot.hhs.core import NO_ANCHOR, TOP, HHSStructure, Relation
from coarsequot.results import AxiomReport, AxiomResult

logger = logging.getLogger(__name__)

T = TypeVar("T")


@dataclass
class _Context:
    h: HHSStructure
    sampling: Sampling
    rng: np.random.Generator

    def tuples(self, *sizes: int) -> Iterator[tuple[int, ...]]:
        """Index tuples: all of them when affordable under exhaustive sampling, else draws."""
        total = math.prod(sizes)
        if total == 0:
            return
        if self.sampling.exact and total <= PAIR_CAP:
            yield from itertools.product(*(range(size) for size in sizes))
            return
        for _ in range(self.sampling.count):
            yield tuple(int(self.rng.integers(0, size)) for size in sizes)

    def some(self, items: Sequence[T], cap: int) -> list[T]:
        """All items under exhaustive sampling, otherwise at most ``cap`` of them."""
        if self.sampling.exact or len(items) <= cap:
            return list(items)
        picks = self.rng.choice(len(items), size=cap, replace=False)
        return [items[int(i)] for i in sorted(picks)]


@dataclass
class _Tally:
    """Running maximum of a measured quantity against its bound."""

    bound: Fraction
    observed: Fraction = Fraction(0)
    violations: int = 0
    examined: int = 0
    witness: tuple[object, ...] = ()

    def record(self, value: int | Fraction, *witness: object) -> None:
        self.examined += 1
        self.observed = max(self.observed, Fraction(value))
        if value > self.bound:
            self.flag(*witness)

    def flag(self, *witness: object) -> None:
        self.violations += 1
        if not self.witness:
            self.witness = witness

    def to_dict(self) -> dict[str, object]:
        return {
            "bound": str(self.bound),
            "observed": str(self.observed),
            "examined": self.examined,
            "violations": self.violations,
        }


def _combine(
    name: str,
    E: Fraction,
    parts: dict[str, _Tally],
    informational: bool = False,
    **details: object,
) -> AxiomResult:
    count = sum(t.violations for t in parts.values())
    witness = next((t.witness for t in parts.values() if t.witness), ())
    payload: dict[str, object] = {key: t.to_dict() for key, t in parts.items()}
    payload.update(details)
    return AxiomResult(
        name, count == 0, count, tuple(witness), E, informational, payload
    )


# 1: projections


def _projections(ctx: _Context) -> AxiomResult:
    h = ctx.h
    lipschitz, sizes, onto = _Tally(2 * h.E), _Tally(h.E), _Tally(h.E)
    edges = sorted(h.space.edges)
    for u, i in ctx.tuples(h.domain_count, len(edges)):
        x, y = edges[i]
        lipschitz.record(h.distance(u, x, y), u, x, y)
    for u, x in ctx.tuples(h.domain_count, h.point_count):
        sizes.record(h.domains[u].diameter(h.proj(u, x)), u, x)
    for u in ctx.some(range(h.domain_count), HHS_DOMAIN_SAMPLES):
        image = frozenset().union(*(h.proj(u, x) for x in range(h.point_count)))
        reach = h.domains[u].space.distances_to_set(image)
        far = int(np.argmax(reach))
        onto.record(int(reach[far]), u, far)
    return _combine("1", h.E, {"lipschitz": lipschitz, "diameter": sizes, "onto": onto})


# 2: nesting


def _nesting(ctx: _Context) -> AxiomResult:
    h = ctx.h
    order = _Tally(Fraction(0))
    sources = {u for u, _ in h.nested}
    maxima = [u for u in range(h.domain_count) if u not in sources]
    order.examined += 1
    if maxima != [TOP]:
        order.flag("maxima", *maxima[:8])
    above: dict[int, list[int]] = {}
    for u, v in h.nested:
        above.setdefault(u, []).append(v)
    for u, v in sorted(h.nested):
        order.examined += 1
        if u == v or (v, u) in h.nested:
            order.flag("antisymmetry", u, v)
        for w in above.get(v, []):
            if (u, w) not in h.nested:
                order.flag("transitivity", u, v, w)
    sizes = _Tally(h.E)
    for u, v in ctx.some(sorted(h.nested), ctx.sampling.count):
        try:
            points = h.rho_of(u, v)
        except MissingRhoError:
            sizes.flag("missing", u, v)
            continue
        if not points:
            sizes.flag("empty", u, v)
            continue
        sizes.record(h.spread(v, points), u, v)
    return _combine("2", h.E, {"order": order, "rho_diameter": sizes}, maxima=maxima[:8])


# 3: finite complexity


def _complexity(ctx: _Context) -> AxiomResult:
    h = ctx.h
    tally = _Tally(h.E)
    dag = nx.DiGraph()
    dag.add_nodes_from(range(h.domain_count))
    dag.add_edges_from(h.nested)
    if not nx.is_directed_acyclic_graph(dag):
        tally.flag("cycle")
        return _combine("3", h.E, {"chain": tally})
    longest = nx.dag_longest_path(dag)
    tally.record(len(longest), *longest)
    return _combine("3", h.E, {"chain": tally})


# 4: orthogonality


def _orthogonality(ctx: _Context) -> AxiomResult:
    h = ctx.h
    tally = _Tally(Fraction(0))
    for u, v in sorted(h.orthogonal):
        tally.examined += 1
        if u == v or (u, v) in h.nested or (v, u) in h.nested:
            tally.flag("comparable", u, v)
        for w, other in ((u, v), (v, u)):
            for below in h.nested_in(w):
                tally.examined += 1
                if h.relation(below, other) is not Relation.ORTH:
                    tally.flag("inherit", below, w, other)
    return _combine("4", h.E, {"relations": tally})


# 5: containers


def _containers(ctx: _Context) -> AxiomResult:
    h = ctx.h
    tally = _Tally(Fraction(0))
    if not h.orthogonal:
        return _combine("5", h.E, {"containers": tally})
    for w in range(h.domain_count):
        below = h.nested_in(w)
        inside = (w, *below)
        for u in inside:
            perp = [v for v in inside if h.relation(u, v) is Relation.ORTH]
            if not perp:
                continue
            tally.examined += 1
            found = any(
                all(v == q or (v, q) in h.nested for v in perp) for q in below
            )
            if not found:
                tally.flag(w, u, *perp[:4])
    return _combine("5", h.E, {"containers": tally})


# 6: transversality


def _transversality(ctx: _Context) -> AxiomResult:
    h = ctx.h
    tally = _Tally(h.E)
    for u, v in ctx.tuples(h.domain_count, h.domain_count):
        if h.relation(u, v) is not Relation.TRANS:
            continue
        for a, b in ((u, v), (v, u)):
            try:
                points = h.rho_of(a, b)
            except MissingRhoError:
                tally.flag("missing", a, b)
                continue
            if not points:
                tally.flag("empty", a, b)
                continue
            tally.record(h.spread(b, points), a, b)
    return _combine("6", h.E, {"rho_diameter": tally})


# 7: consistency


def _consistency(ctx: _Context) -> AxiomResult:
    h = ctx.h
    transverse, nested = _Tally(h.E), _Tally(h.E)
    for x, v, w in ctx.tuples(h.point_count, h.domain_count, h.domain_count):
        if h.relation(v, w) is not Relation.TRANS:
            continue
        try:
            first = h.spread(w, h.proj(w, x), h.rho_of(v, w))
            second = h.spread(v, h.proj(v, x), h.rho_of(w, v))
        except MissingRhoError:
            transverse.flag("missing", x, v, w)
            continue
        transverse.record(min(first, second), x, v, w)
    targets = ctx.some(range(h.domain_count), HHS_DOMAIN_SAMPLES)
    for u, v in ctx.some(sorted(h.nested), ctx.sampling.count):
        for w in targets:
            if w in (u, v) or h.relation(w, u) is Relation.ORTH:
                continue
            if h.relation(v, w) not in (Relation.NESTED, Relation.TRANS):
                continue
            if h.relation(u, w) not in (Relation.NESTED, Relation.TRANS):
                continue
            try:
                gap = h.spread(w, h.rho_of(u, w), h.rho_of(v, w))
            except MissingRhoError:
                nested.flag("missing", u, v, w)
                continue
            nested.record(gap, u, v, w)
    return _combine("7", h.E, {"transverse": transverse, "nested": nested})


# 8: hyperbolicity


def _hyperbolicity(ctx: _Context) -> AxiomResult:
    h = ctx.h
    tally = _Tally(h.E)
    checked = [TOP, *(w for w in sorted(h.children) if w != TOP)]
    constants = {}
    for w in ctx.some(checked, HHS_DOMAIN_SAMPLES):
        space = h.domains[w].space
        measured = slim_constant(space, Sampling.auto(space.vertex_count, seed=ctx.sampling.seed))
        constants[h.domains[w].name] = str(measured.value)
        tally.record(measured.value, w, *measured.witness)
    return _combine("8", h.E, {"slimness": tally}, spaces=constants)


# 9: bounded geodesic image


def _bgi_pairs(ctx: _Context, anchors: Sequence[int]) -> Iterable[tuple[int, int]]:
    pairs = list(itertools.combinations(anchors, 2))
    if ctx.sampling.exact and len(pairs) <= HHS_CONSTANT_CAP * 4:
        return pairs
    picks = ctx.rng.integers(0, len(anchors), size=(BGI_PAIRS_PER_DOMAIN, 2))
    return [(anchors[int(i)], anchors[int(j)]) for i, j in picks if i != j]


def _bounded_geodesic_image(ctx: _Context) -> AxiomResult:
    h = ctx.h
    tally = _Tally(Fraction(0))
    radius = math.floor(h.E)
    for v, w in ctx.some(sorted(h.nested), ctx.sampling.count):
        anchors = [a for a in h.domains[v].anchors if a != NO_ANCHOR]
        if len(anchors) < 2:
            anchors = list(range(h.point_count))
        try:
            rho = h.rho_of(v, w)
        except MissingRhoError:
            tally.flag("missing", v, w)
            continue
        space = h.domains[w].space
        near = space.neighborhood(rho, radius)
        view = space.without(near)
        for x, y in _bgi_pairs(ctx, anchors):
            if h.distance(v, x, y) < h.E:
                continue
            tally.examined += 1
            p, q = min(h.proj(w, x)), min(h.proj(w, y))
            if p in near or q in near:
                continue
            try:
                detour = nx.shortest_path_length(view, p, q)
            except nx.NetworkXNoPath:
                continue
            if detour == space.distance(p, q):
                tally.flag(v, w, x, y)
    return _combine("9", h.E, {"geodesics": tally})


# 10: partial realization


def _realization_targets(ctx: _Context) -> list[tuple[tuple[int, int], ...]]:
    h = ctx.h
    singles = [
        ((v, p),)
        for v in range(h.domain_count)
        for p in range(h.domains[v].space.vertex_count)
    ]
    targets = ctx.some(singles, HHS_REALIZATION_SAMPLES)
    for u, v in ctx.some(sorted(h.orthogonal), HHS_REALIZATION_SAMPLES):
        p = int(ctx.rng.integers(0, h.domains[u].space.vertex_count))
        q = int(ctx.rng.integers(0, h.domains[v].space.vertex_count))
        targets.append(((u, p), (v, q)))
    return targets


def _realization_score(h: HHSStructure, target: tuple[tuple[int, int], ...], x: int) -> int | None:
    """Largest deviation at ``x``, or ``None`` when ``x`` misses a target point by more than E."""
    first = max(h.spread(v, h.proj(v, x), frozenset((p,))) for v, p in target)
    if first > h.E:
        return None
    worst = first
    for v, _ in target:
        for w in range(h.domain_count):
            if h.relation(v, w) not in (Relation.NESTED, Relation.TRANS):
                continue
            try:
                rho = h.rho_of(v, w)
            except MissingRhoError:
                return None
            worst = max(worst, h.spread(w, h.proj(w, x), rho))
    return worst


def _partial_realization(ctx: _Context) -> AxiomResult:
    h = ctx.h
    tally = _Tally(h.E)
    for target in _realization_targets(ctx):
        v, p = target[0]
        anchor = h.domains[v].anchors[p] if h.domains[v].anchors else NO_ANCHOR
        order = ([anchor] if anchor != NO_ANCHOR else []) + list(range(h.point_count))
        best: int | None = None
        tried = 0
        for x in order:
            score = _realization_score(h, target, x)
            if score is None:
                continue
            tried += 1
            best = score if best is None else min(best, score)
            if best <= h.E or tried >= HHS_CONSTANT_CAP:
                break
        if best is None:
            tally.flag(*(i for pair in target for i in pair))
            continue
        tally.record(best, *(i for pair in target for i in pair))
    return _combine("10", h.E, {"realization": tally})


# 11 and 12': uniqueness and passing up, from the coordinate vectors of sampled pairs


def _coordinate_samples(ctx: _Context) -> list[tuple[int, int, np.ndarray]]:
    h = ctx.h
    return [
        (x, y, h.coordinates(x, y))
        for x, y in ctx.tuples(h.point_count, h.point_count)
        if x < y
    ]


def _uniqueness(ctx: _Context, samples: Sequence[tuple[int, int, np.ndarray]]) -> AxiomResult:
    h = ctx.h
    theta = dict.fromkeys(range(1, UNIQUENESS_RADII + 1), 0)
    for x, y, coords in samples:
        largest = int(coords.max())
        d = h.space.distance(x, y)
        for r in theta:
            if largest < r:
                theta[r] = max(theta[r], d + 1)
    table = [{"r": r, "theta": value} for r, value in theta.items()]
    tally = _Tally(Fraction(HHS_CONSTANT_CAP))
    tally.examined = len(samples)
    return _combine("11", h.E, {"pairs": tally}, informational=True, theta=table)


def _passing_up(ctx: _Context, samples: Sequence[tuple[int, int, np.ndarray]]) -> AxiomResult:
    h = ctx.h
    tally = _Tally(Fraction(HHS_CONSTANT_CAP))
    tops = [v for v in range(h.domain_count) if v == TOP or h.nested_in(v)]
    table = []
    for t in PASSING_UP_THRESHOLDS:
        worst = 0
        for x, y, coords in samples:
            for v in tops:
                inside = (v, *h.nested_in(v))
                large = [u for u in inside if coords[u] > h.E]
                if not large:
                    continue
                passed = any(
                    coords[w] > t and (u, w) in h.nested
                    for u in large
                    for w in inside
                )
                if not passed:
                    worst = max(worst, len(large))
        table.append({"t": t, "P": worst + 1})
        tally.record(worst + 1, t)
    return _combine("12'", h.E, {"P": tally}, passing_up=table)


def verify_hhs_axioms(h: HHSStructure, sampling: Sampling | None = None) -> AxiomReport:
    """Check every hierarchy axiom, with passing up standing in for large links.

    Args:
        h: The structure.
        sampling: Tuple selection; exhaustive for small ``X``, ``HHS_SAMPLES`` draws otherwise.

    Returns:
        AxiomReport: One verdict per axiom, named ``"1"`` to ``"11"`` and ``"12'"``.
    """
    sampling = sampling or Sampling.auto(h.point_count, count=HHS_SAMPLES)
    ctx = _Context(h, sampling, sampling.rng())
    results = [
        _projections(ctx),
        _nesting(ctx),
        _complexity(ctx),
        _orthogonality(ctx),
        _containers(ctx),
        _transversality(ctx),
        _consistency(ctx),
        _hyperbolicity(ctx),
        _bounded_geodesic_image(ctx),
        _partial_realization(ctx),
    ]
    samples = _coordinate_samples(ctx)
    results.append(_uniqueness(ctx, samples))
    results.append(_passing_up(ctx, samples))
    report = AxiomReport(h.name, tuple(results))
    failures = report.failures()
    if failures:
        logger.warning(f"{h.name}: axioms {', '.join(failures)} fail")
    else:
        logger.info(f"{h.name}: all axioms pass with E = {h.E}")
    return report


# Instance-level checks


def close_projections_check(h: HHSStructure) -> CheckReport:
    """Non-transverse domains below ``S`` have ``d_X(ρ^U_S, ρ^V_S) ≤ 2E``."""
    pairs = [(u, v) for u, v in sorted(h.nested) if v != TOP] + sorted(h.orthogonal)
    violations = []
    for u, v in pairs:
        try:
            gap = h.top_space.set_distance(h.rho_of(u, TOP), h.rho_of(v, TOP))
        except MissingRhoError:
            violations.append((u, v, -1))
            continue
        if gap > 2 * h.E:
            violations.append((u, v, gap))
    return CheckReport("close_projections", len(pairs), tuple(violations))


@dataclass(frozen=True)
class DistanceFormulaFit:
    """How well ``Σ_U ⌊d_U(x, y)⌋_s`` tracks ``d_X(x, y)`` on sampled pairs.

    Attributes:
        multiplicative: Largest ratio either way between the sum and the distance.
        additive: Largest absolute difference.
    """

    threshold: int
    multiplicative: Fraction
    additive: int
    examined: int
    rows: tuple[tuple[int, int], ...] = field(default=(), repr=False)

    def to_dict(self) -> dict[str, object]:
        """JSON-ready form."""
        return {
            "threshold": self.threshold,
            "multiplicative": str(self.multiplicative),
            "additive": self.additive,
            "examined": self.examined,
        }


def distance_formula_fit(
    h: HHSStructure, threshold: int = DISTANCE_FORMULA_THRESHOLD, sampling: Sampling | None = None
) -> DistanceFormulaFit:
    """Measure the distance-formula constants at ``threshold``; nothing is asserted."""
    sampling = sampling or Sampling.auto(h.point_count, count=HHS_SAMPLES)
    ctx = _Context(h, sampling, sampling.rng())
    ratio = Fraction(1)
    additive = 0
    rows = []
    for x, y, coords in _coordinate_samples(ctx):
        total = int(coords[coords >= threshold].sum())
        d = h.space.distance(x, y)
        rows.append((d, total))
        additive = max(additive, abs(d - total))
        if d and total:
            ratio = max(ratio, Fraction(d, total), Fraction(total, d))
    return DistanceFormulaFit(threshold, ratio, additive, len(rows), tuple(rows))
