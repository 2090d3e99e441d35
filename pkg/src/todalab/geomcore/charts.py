from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Any, Callable, Sequence

from .scalars import exact, is_zero

Predicate = Callable[[Sequence[Any]], Any]


class ChartError(ValueError):
    pass


class SingularPoint(ValueError):
    def __init__(self, predicate: str):
        super().__init__(f"point lies on singular locus: {predicate} = 0")
        self.predicate = predicate


@dataclass(frozen=True, eq=False)
class Chart:
    """A coordinate system: labels plus named predicates that must not vanish.

    ``exact`` charts carry polynomial/rational data and are sampled with
    rationals; non-exact charts (exponentials present) are float only.
    """

    name: str
    labels: tuple[str, ...]
    singular: tuple[tuple[str, Predicate], ...] = ()
    exact: bool = True
    meta: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        if len(set(self.labels)) != len(self.labels):
            raise ChartError(f"duplicate labels in chart {self.name}")

    @property
    def dim(self) -> int:
        return len(self.labels)

    def index(self, label: str) -> int:
        try:
            return self.labels.index(label)
        except ValueError:
            raise ChartError(f"{label!r} is not a coordinate of {self.name}") from None

    def with_singular(self, *preds: tuple[str, Predicate]) -> "Chart":
        known = {n for n, _ in self.singular}
        extra = tuple(p for p in preds if p[0] not in known)
        if not extra:
            return self
        return Chart(self.name, self.labels, self.singular + extra, self.exact, self.meta)

    def violated(self, xs: Sequence[Any]) -> str | None:
        for name, pred in self.singular:
            if is_zero(pred(xs)):
                return name
        return None

    @cached_property
    def ring(self):
        """Polynomial ring over QQ in this chart's coordinates."""
        from sympy import QQ
        from sympy.polys.rings import ring

        if not self.labels:
            raise ChartError("dimension-0 chart has no coordinate ring")
        R, *_ = ring(",".join(self.labels), QQ)
        return R

    def point(self, coords: Sequence[Any]) -> "PhasePoint":
        return PhasePoint(self, tuple(coords))

    def same(self, other: "Chart") -> bool:
        return self.name == other.name and self.labels == other.labels


@dataclass(frozen=True)
class PhasePoint:
    chart: Chart
    coords: tuple

    def __post_init__(self):
        if len(self.coords) != self.chart.dim:
            raise ChartError(
                f"{self.chart.name} expects {self.chart.dim} coordinates, got {len(self.coords)}"
            )
        if self.chart.exact:
            object.__setattr__(self, "coords", tuple(exact(c) for c in self.coords))
        else:
            object.__setattr__(self, "coords", tuple(float(c) for c in self.coords))

    def __getitem__(self, label: str):
        return self.coords[self.chart.index(label)]

    def as_dict(self) -> dict[str, Any]:
        return dict(zip(self.chart.labels, self.coords))
