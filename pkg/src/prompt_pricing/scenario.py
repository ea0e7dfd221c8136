"""Scenario files: ingestion and validation for the command-line tool.

A scenario is an INI file with nested dotted sections::

    [scenario]
    name = two-tier-catalog

    [model.ml]
    utility = 1.0
    cost = 0.02
    price = 0.10        ; optional, used by the user-strategy command

    [model.mh]
    utility = 1.8
    cost = 0.04

    [distribution]
    kind = uniform      ; or "tabulated" with knots = ..., values = ...
    lo = 0.0
    hi = 1.0

    [quadrature]
    nodes = 2001

    [opp]
    alpha = 0.001
    refinement = true

    [sweep]
    variable = eps      ; or eps_min
    start = 0.001
    stop = 0.999
    points = 999

Validation reports every violation at once, naming the offending field
and the constraint it breaks.
"""

from __future__ import annotations

import configparser
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .core import (
    GaiModel,
    ModelSet,
    PriceSchedule,
    PromptPricingError,
    QuadratureConfig,
    TabulatedAmbiguity,
    UniformAmbiguity,
)
from .heterogeneous import OppConfig


class ScenarioError(PromptPricingError):
    """Scenario file rejected; ``violations`` lists every problem found."""

    def __init__(self, path: str, violations: list[str]) -> None:
        self.path = path
        self.violations = violations
        lines = "\n  - ".join(violations)
        super().__init__(f"invalid scenario {path}:\n  - {lines}")


@dataclass(frozen=True)
class SweepSpec:
    variable: str
    start: float
    stop: float
    points: int

    def values(self) -> np.ndarray:
        return np.linspace(self.start, self.stop, self.points)


@dataclass(frozen=True)
class Scenario:
    """A validated scenario ready to be turned into solver inputs."""

    name: str
    models: tuple[GaiModel, ...]
    prices: dict[str, float] = field(default_factory=dict)
    dist_kind: str = "uniform"
    dist_lo: float = 0.0
    dist_hi: float = 1.0
    dist_knots: tuple[float, ...] = ()
    dist_values: tuple[float, ...] = ()
    quad_nodes: int = 2001
    opp_alpha: float | None = None
    opp_refinement: bool = True
    sweep: SweepSpec | None = None

    def model_set(self) -> ModelSet:
        return ModelSet(self.models)

    def price_schedule(self) -> PriceSchedule:
        return PriceSchedule(self.prices)

    def distribution(self, lo_override: float | None = None):
        if self.dist_kind == "uniform":
            lo = self.dist_lo if lo_override is None else lo_override
            return UniformAmbiguity(lo, self.dist_hi)
        return TabulatedAmbiguity(self.dist_knots, self.dist_values)

    def quadrature(self, nodes_override: int | None = None) -> QuadratureConfig:
        return QuadratureConfig(nodes_override if nodes_override is not None else self.quad_nodes)

    def opp_config(
        self, nodes_override: int | None = None, alpha_override: float | None = None
    ) -> OppConfig:
        alpha = alpha_override if alpha_override is not None else self.opp_alpha
        return OppConfig(
            step_alpha=alpha,
            refinement=self.opp_refinement,
            quad=self.quadrature(nodes_override),
        )


def _parse_float(raw: str, where: str, bad: list[str]) -> float | None:
    try:
        v = float(raw)
    except ValueError:
        bad.append(f"{where}: not a decimal number: {raw!r}")
        return None
    if not math.isfinite(v):
        bad.append(f"{where}: must be finite, got {raw!r}")
        return None
    return v


def _parse_float_list(raw: str, where: str, bad: list[str]) -> tuple[float, ...]:
    out = []
    for piece in raw.replace(",", " ").split():
        v = _parse_float(piece, where, bad)
        if v is None:
            return ()
        out.append(v)
    return tuple(out)


def load_scenario(path: str | Path) -> Scenario:
    """Parse and fully validate a scenario file.

    Raises :class:`ScenarioError` carrying one message per violation; no
    computation happens against a partially valid scenario.
    """
    path = Path(path)
    bad: list[str] = []
    parser = configparser.ConfigParser(inline_comment_prefixes=(";", "#"))
    try:
        with open(path) as fh:
            parser.read_file(fh)
    except OSError as exc:
        raise ScenarioError(str(path), [f"cannot read file: {exc}"]) from exc
    except configparser.Error as exc:
        raise ScenarioError(str(path), [f"malformed INI: {exc}"]) from exc

    name = parser.get("scenario", "name", fallback=path.stem)

    models: list[GaiModel] = []
    prices: dict[str, float] = {}
    for section in parser.sections():
        if not section.startswith("model."):
            continue
        mid = section[len("model."):]
        if not mid:
            bad.append(f"[{section}]: empty model id")
            continue
        utility = _parse_float(parser.get(section, "utility", fallback="nan"), f"[{section}] utility", bad)
        cost = _parse_float(parser.get(section, "cost", fallback="0"), f"[{section}] cost", bad)
        if utility is not None and utility <= 0:
            bad.append(f"[{section}] utility: must be > 0, got {utility}")
            utility = None
        if cost is not None and cost < 0:
            bad.append(f"[{section}] cost: must be >= 0, got {cost}")
            cost = None
        if utility is not None and cost is not None:
            models.append(GaiModel(mid, utility, cost))
        if parser.has_option(section, "price"):
            p = _parse_float(parser.get(section, "price"), f"[{section}] price", bad)
            if p is not None and p < 0:
                bad.append(f"[{section}] price: must be >= 0, got {p}")
            elif p is not None:
                prices[mid] = p
    if not models:
        bad.append("no [model.<id>] sections found; at least one model is required")
    ids = [m.id for m in models]
    if len(set(ids)) != len(ids):
        bad.append(f"model ids must be distinct, got {ids}")
    if len(models) == 2 and models[0].utility == models[1].utility:
        bad.append("a two-model scenario needs distinct utilities")

    kind = parser.get("distribution", "kind", fallback="uniform").strip().lower()
    lo, hi = 0.0, 1.0
    knots: tuple[float, ...] = ()
    values: tuple[float, ...] = ()
    if kind == "uniform":
        lo = _parse_float(parser.get("distribution", "lo", fallback="0.0"), "[distribution] lo", bad) or 0.0
        hi_v = _parse_float(parser.get("distribution", "hi", fallback="1.0"), "[distribution] hi", bad)
        hi = 1.0 if hi_v is None else hi_v
        if not (0.0 <= lo < hi <= 1.0):
            bad.append(f"[distribution] lo/hi: need 0 <= lo < hi <= 1, got [{lo}, {hi}]")
    elif kind == "tabulated":
        knots = _parse_float_list(parser.get("distribution", "knots", fallback=""), "[distribution] knots", bad)
        values = _parse_float_list(parser.get("distribution", "values", fallback=""), "[distribution] values", bad)
        if len(knots) < 2 or len(knots) != len(values):
            bad.append("[distribution] knots/values: need >= 2 knots and one value per knot")
        elif any(b <= a for a, b in zip(knots, knots[1:])):
            bad.append("[distribution] knots: must be strictly ascending")
        elif not (0.0 <= knots[0] and knots[-1] <= 1.0):
            bad.append("[distribution] knots: support must lie inside [0, 1]")
        elif any(v < 0 for v in values):
            bad.append("[distribution] values: must be non-negative")
        elif all(v == 0 for v in values):
            bad.append("[distribution] values: must have positive mass")
    else:
        bad.append(f"[distribution] kind: must be 'uniform' or 'tabulated', got {kind!r}")

    nodes_raw = parser.get("quadrature", "nodes", fallback="2001")
    try:
        quad_nodes = int(nodes_raw)
    except ValueError:
        bad.append(f"[quadrature] nodes: not an integer: {nodes_raw!r}")
        quad_nodes = 2001
    if quad_nodes < 3:
        bad.append(f"[quadrature] nodes: must be >= 3, got {quad_nodes}")
        quad_nodes = 2001

    opp_alpha: float | None = None
    if parser.has_option("opp", "alpha"):
        opp_alpha = _parse_float(parser.get("opp", "alpha"), "[opp] alpha", bad)
        if opp_alpha is not None and opp_alpha <= 0:
            bad.append(f"[opp] alpha: must be > 0, got {opp_alpha}")
            opp_alpha = None
    try:
        opp_refinement = parser.getboolean("opp", "refinement", fallback=True)
    except ValueError:
        bad.append(f"[opp] refinement: not a boolean: {parser.get('opp', 'refinement')!r}")
        opp_refinement = True

    sweep: SweepSpec | None = None
    if parser.has_section("sweep"):
        variable = parser.get("sweep", "variable", fallback="").strip()
        start = _parse_float(parser.get("sweep", "start", fallback="nan"), "[sweep] start", bad)
        stop = _parse_float(parser.get("sweep", "stop", fallback="nan"), "[sweep] stop", bad)
        points_raw = parser.get("sweep", "points", fallback="0")
        try:
            points = int(points_raw)
        except ValueError:
            bad.append(f"[sweep] points: not an integer: {points_raw!r}")
            points = 0
        if variable not in ("eps", "eps_min"):
            bad.append(f"[sweep] variable: must be 'eps' or 'eps_min', got {variable!r}")
        if points < 1:
            bad.append(f"[sweep] points: must be >= 1, got {points_raw!r}")
        if start is not None and stop is not None:
            if points > 1 and not start < stop:
                bad.append(f"[sweep] start/stop: need start < stop, got {start} >= {stop}")
            if variable == "eps" and not (0.0 < start and stop < 1.0):
                bad.append(f"[sweep] start/stop: eps sweep must stay inside (0, 1), got [{start}, {stop}]")
            if variable == "eps_min" and not (0.0 <= start and stop < hi):
                bad.append(
                    f"[sweep] start/stop: eps_min sweep must stay inside [0, hi), got [{start}, {stop}] with hi={hi}")
        if not bad:
            sweep = SweepSpec(variable, float(start), float(stop), points)

    if bad:
        raise ScenarioError(str(path), bad)
    return Scenario(
        name=name,
        models=tuple(models),
        prices=prices,
        dist_kind=kind,
        dist_lo=lo,
        dist_hi=hi,
        dist_knots=knots,
        dist_values=values,
        quad_nodes=quad_nodes,
        opp_alpha=opp_alpha,
        opp_refinement=opp_refinement,
        sweep=sweep,
    )
