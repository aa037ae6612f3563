"""Built-in ray sets and named states.

The 18-ray set is stored as its nine printed bases; the tesseract families
(24 face/square/vertex directions, 16 edge directions) are generated from
sign patterns and deduplicated projectively.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import lru_cache

from .errors import UnknownKey
from .rays import Basis, Ray, RaySet, enumerate_bases, factorize, inner

# Nine complete bases; each ray appears in exactly two of them.
CEG18_BASES: tuple[tuple[tuple[int, ...], ...], ...] = (
    ((0, 0, 0, 1), (0, 0, 1, 0), (1, 1, 0, 0), (1, -1, 0, 0)),
    ((0, 0, 0, 1), (0, 1, 0, 0), (1, 0, 1, 0), (1, 0, -1, 0)),
    ((1, -1, 1, -1), (1, -1, -1, 1), (1, 1, 0, 0), (0, 0, 1, 1)),
    ((1, -1, 1, -1), (1, 1, 1, 1), (1, 0, -1, 0), (0, 1, 0, -1)),
    ((0, 0, 1, 0), (0, 1, 0, 0), (1, 0, 0, 1), (1, 0, 0, -1)),
    ((1, -1, -1, 1), (1, 1, 1, 1), (1, 0, 0, -1), (0, 1, -1, 0)),
    ((1, 1, -1, 1), (1, 1, 1, -1), (1, -1, 0, 0), (0, 0, 1, 1)),
    ((1, 1, -1, 1), (-1, 1, 1, 1), (1, 0, 1, 0), (0, 1, 0, -1)),
    ((1, 1, 1, -1), (-1, 1, 1, 1), (1, 0, 0, 1), (0, 1, -1, 0)),
)

STATES: dict[str, tuple[int, ...]] = {
    "singlet": (0, 1, -1, 0),
    "hardy": (1, -1, -1, 0),
    "phi-xx": (1, 1, 1, 1),
}


class CatalogError(ValueError):
    """A catalog entry failed its load-time self-check."""


@dataclass(frozen=True)
class CatalogEntry:
    key: str
    ray_set: RaySet
    declared_bases: tuple[Basis, ...] | None = None
    notes: str = ""
    families: dict[str, int] = field(default_factory=dict, compare=False)

    def verify(self) -> None:
        for basis in self.declared_bases or ():
            if len(basis) != self.ray_set.dim:
                raise CatalogError(f"{self.key}: basis {basis} has wrong size")
            for i, j in itertools.combinations(basis, 2):
                if inner(self.ray_set[i], self.ray_set[j]) != 0:
                    raise CatalogError(f"{self.key}: rays {i},{j} of basis {basis} not orthogonal")


def _pattern_rays(weight: int, dim: int = 4) -> list[Ray]:
    out: list[Ray] = []
    seen: set[Ray] = set()
    for support in itertools.combinations(range(dim), weight):
        for signs in itertools.product((1, -1), repeat=weight):
            v = [0] * dim
            for pos, s in zip(support, signs):
                v[pos] = s
            r = Ray(v)
            if r not in seen:
                seen.add(r)
                out.append(r)
    return out


@lru_cache(maxsize=None)
def ceg18() -> CatalogEntry:
    rays: list[Ray] = []
    for basis in CEG18_BASES:
        for v in basis:
            r = Ray(v)
            if r not in rays:
                rays.append(r)
    rs = RaySet(rays)
    declared = tuple(rs.ids_of(basis) for basis in CEG18_BASES)
    entry = CatalogEntry(
        "ceg18", rs, declared,
        notes="18 rays in 9 bases, each ray in two bases (state-independent parity proof)",
    )
    entry.verify()
    if len(rs) != 18 or not set(declared) <= set(enumerate_bases(rs)):
        raise CatalogError("ceg18 failed self-check")
    return entry


@lru_cache(maxsize=None)
def peres24() -> CatalogEntry:
    families = {
        "cube-faces": _pattern_rays(1),
        "squares": _pattern_rays(2),
        "vertices": _pattern_rays(4),
    }
    rs = RaySet([r for fam in families.values() for r in fam])
    entry = CatalogEntry(
        "peres24", rs, None,
        notes="tesseract directions: 4 cube-face, 12 square and 8 vertex rays",
        families={k: len(v) for k, v in families.items()},
    )
    if [len(v) for v in families.values()] != [4, 12, 8]:
        raise CatalogError("peres24 family sizes")
    if not all(r in rs for r in ceg18().ray_set):
        raise CatalogError("peres24 must contain ceg18")
    return entry


@lru_cache(maxsize=None)
def hardy_rays() -> CatalogEntry:
    rays = _pattern_rays(3)
    rs = RaySet(rays)
    entry = CatalogEntry(
        "hardy16", rs, None,
        notes="16 tesseract edge-center directions, each a Hardy state",
    )
    p24 = peres24().ray_set
    if len(rs) != 16 or Ray(STATES["hardy"]) not in rs:
        raise CatalogError("hardy16 self-check")
    if any(r in p24 or factorize(r) is not None for r in rs):
        raise CatalogError("hardy16 rays must be entangled and outside peres24")
    return entry


_SETS = {"ceg18": ceg18, "peres24": peres24, "hardy16": hardy_rays}


def set_keys() -> list[str]:
    return list(_SETS)


def state_keys() -> list[str]:
    return list(STATES)


def get(key: str) -> CatalogEntry:
    try:
        return _SETS[key]()
    except KeyError:
        raise UnknownKey(f"unknown ray set {key!r}; known: {', '.join(_SETS)}") from None


def state(key: str):
    from .quantum import State

    try:
        return State(Ray(STATES[key]))
    except KeyError:
        raise UnknownKey(f"unknown state {key!r}; known: {', '.join(STATES)}") from None
