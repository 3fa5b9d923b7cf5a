"""Game-element catalog and the core -> element-tuple mapping.

The catalog is the five-dimension educational taxonomy (22 elements including
Avatar). Mappings are derived from expert vote tallies: per core, the
highest-voted feasible element of each configured dimension wins, with ties
broken by catalog listing order.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from enum import Enum
from importlib import resources
from typing import Iterable, Mapping, Sequence

import yaml

from .assessment import CognitiveCore
from .errors import DerivationError, ValidationError


class Dimension(str, Enum):
    ECOLOGICAL = "ecological"
    SOCIAL = "social"
    PERSONAL = "personal"
    FICTIONAL = "fictional"
    PERFORMANCE = "performance"


@dataclass(frozen=True)
class GameElement:
    element_id: str
    name: str
    dimension: Dimension
    description: str
    catalog_rank: int  # listing position within its dimension; tie-break order


@dataclass(frozen=True)
class ElementCatalog:
    elements: Mapping[str, GameElement]
    _aliases: Mapping[str, str] = field(default_factory=dict)

    def get(self, key: str) -> GameElement:
        """Look up by element_id, name, or a registered alias."""
        norm = key.strip().lower().replace(" ", "_")
        if norm in self.elements:
            return self.elements[norm]
        if norm in self._aliases:
            return self.elements[self._aliases[norm]]
        raise ValidationError(f"unknown game element {key!r}")

    def in_dimension(self, dimension: Dimension) -> list[GameElement]:
        return sorted(
            (e for e in self.elements.values() if e.dimension == dimension),
            key=lambda e: e.catalog_rank,
        )


@dataclass(frozen=True)
class ExpertTally:
    core: CognitiveCore
    dimension: Dimension
    votes: Mapping[str, int]  # element_id -> non-negative count


@dataclass(frozen=True)
class DerivationConfig:
    feasibility_exclusions: frozenset[str]
    # ordered per core: the derived tuple follows this dimension order
    dimension_subsets: Mapping[CognitiveCore, tuple[Dimension, ...]]
    tie_break: str = "catalog_rank"


@dataclass(frozen=True)
class ElementMapping:
    entries: Mapping[CognitiveCore, tuple[GameElement, ...]]

    def __post_init__(self):
        missing = [core for core in CognitiveCore if core not in self.entries]
        if missing:
            raise ValidationError(f"mapping not total: missing {[c.value for c in missing]}")
        for core, elements in self.entries.items():
            if not elements:
                raise ValidationError(f"empty element tuple for {core.value}")


def load_catalog(path=None) -> ElementCatalog:
    if path is None:
        text = resources.files("gamelearn.data").joinpath("element_catalog.yaml").read_text()
    else:
        with open(path) as fh:
            text = fh.read()
    raw = yaml.safe_load(text)
    elements: dict[str, GameElement] = {}
    aliases: dict[str, str] = {}
    for dim_name, entries in raw["dimensions"].items():
        dimension = Dimension(dim_name)
        for rank, entry in enumerate(entries, start=1):
            element = GameElement(
                element_id=entry["element_id"],
                name=entry["name"],
                dimension=dimension,
                description=entry["description"].strip(),
                catalog_rank=rank,
            )
            if element.element_id in elements:
                raise ValidationError(f"duplicate element id {element.element_id}")
            elements[element.element_id] = element
            aliases[element.name.lower().replace(" ", "_")] = element.element_id
            for alias in entry.get("aliases", []):
                aliases[alias.lower().replace(" ", "_")] = element.element_id
    return ElementCatalog(elements=elements, _aliases=aliases)


def load_tallies(path=None, catalog: ElementCatalog | None = None) -> list[ExpertTally]:
    """Read vote tallies from CSV (core, dimension, element, votes)."""
    catalog = catalog or default_catalog()
    if path is None:
        text = resources.files("gamelearn.data").joinpath("expert_tallies.csv").read_text()
    else:
        with open(path, newline="") as fh:
            text = fh.read()
    grouped: dict[tuple[CognitiveCore, Dimension], dict[str, int]] = {}
    for row in csv.DictReader(text.splitlines()):
        core = CognitiveCore(row["core"])
        dimension = Dimension(row["dimension"])
        element = catalog.get(row["element"])
        if element.dimension != dimension:
            raise ValidationError(
                f"element {element.element_id} tallied under {dimension.value}, "
                f"catalogued under {element.dimension.value}"
            )
        votes = int(row["votes"])
        if votes < 0:
            raise ValidationError(f"negative votes for {element.element_id}")
        grouped.setdefault((core, dimension), {})[element.element_id] = votes
    return [
        ExpertTally(core=core, dimension=dimension, votes=votes)
        for (core, dimension), votes in grouped.items()
    ]


def load_derivation_config(path=None) -> DerivationConfig:
    if path is None:
        text = resources.files("gamelearn.data").joinpath("derivation_config.yaml").read_text()
    else:
        with open(path) as fh:
            text = fh.read()
    raw = yaml.safe_load(text)
    subsets = {
        CognitiveCore(core): tuple(Dimension(d) for d in dims)
        for core, dims in raw["dimension_subsets"].items()
    }
    for core, dims in subsets.items():
        if not dims:
            raise ValidationError(f"empty dimension subset for {core.value}")
    return DerivationConfig(
        feasibility_exclusions=frozenset(raw.get("feasibility_exclusions", [])),
        dimension_subsets=subsets,
        tie_break=raw.get("tie_break", "catalog_rank"),
    )


def dimension_winner(
    tally: ExpertTally,
    exclusions: Iterable[str] = (),
    catalog: ElementCatalog | None = None,
) -> GameElement:
    """Highest-voted non-excluded element of the tally's dimension; ties fall
    to the lower catalog_rank."""
    catalog = catalog or default_catalog()
    excluded = set(exclusions)
    candidates = [
        catalog.get(element_id)
        for element_id in tally.votes
        if element_id not in excluded
    ]
    if not candidates:
        raise DerivationError(
            f"all candidates excluded for {tally.core.value} x {tally.dimension.value}"
        )
    return max(candidates, key=lambda e: (tally.votes[e.element_id], -e.catalog_rank))


def derive_mapping(
    tallies: Sequence[ExpertTally],
    config: DerivationConfig,
    catalog: ElementCatalog | None = None,
) -> ElementMapping:
    """Build the full core -> tuple mapping from tallies and config."""
    catalog = catalog or default_catalog()
    by_key = {(t.core, t.dimension): t for t in tallies}
    entries: dict[CognitiveCore, tuple[GameElement, ...]] = {}
    for core, dims in config.dimension_subsets.items():
        winners = []
        for dimension in dims:
            tally = by_key.get((core, dimension))
            if tally is None:
                raise DerivationError(f"missing tally for {core.value} x {dimension.value}")
            winners.append(dimension_winner(tally, config.feasibility_exclusions, catalog))
        entries[core] = tuple(winners)
    return ElementMapping(entries=entries)


_DEPLOYED_IDS = {
    CognitiveCore.NT: ("time_pressure", "competition", "puzzle"),
    CognitiveCore.ST: ("economy", "stats", "puzzle"),
    CognitiveCore.NF: ("progression", "choice", "competition"),
    CognitiveCore.SF: ("acknowledgement", "choice", "sensation"),
}


def deployed_mapping(catalog: ElementCatalog | None = None) -> ElementMapping:
    """The published production mapping:

    NT -> (Time Pressure, Competition, Puzzle)
    ST -> (Economy, Stats, Puzzle)
    NF -> (Progression, Choice, Competition)
    SF -> (Acknowledgement, Choice, Sensation)
    """
    catalog = catalog or default_catalog()
    return ElementMapping(
        entries={
            core: tuple(catalog.get(eid) for eid in ids)
            for core, ids in _DEPLOYED_IDS.items()
        }
    )


def active_elements(core: CognitiveCore, mapping: ElementMapping) -> tuple[GameElement, ...]:
    return mapping.entries[core]


_DEFAULT_CATALOG: ElementCatalog | None = None


def default_catalog() -> ElementCatalog:
    global _DEFAULT_CATALOG
    if _DEFAULT_CATALOG is None:
        _DEFAULT_CATALOG = load_catalog()
    return _DEFAULT_CATALOG
