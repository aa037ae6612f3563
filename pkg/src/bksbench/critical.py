"""Census of critical (minimal uncolorable) subsets of a ray set.

Uncolorability is upward closed: adding rays only adds constraints.  The
census therefore walks downward from the full set one size level at a
time, keeping only uncolorable subsets; a subset is critical when every
one-ray deletion of it is colorable.  Colorability verdicts are memoized
on subset bitmasks and shared between worker threads.
"""
from __future__ import annotations

import hashlib
import json
from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Iterable

from .coloring import Mode, _ids, _mask, search_masks
from .errors import TooManyRays
from .rays import RaySet, enumerate_bases, orthogonal_pairs

MAX_RAYS = 64


def fingerprint(s: RaySet) -> str:
    text = "\n".join(" ".join(str(c) for c in r) for r in s)
    return hashlib.sha256(text.encode()).hexdigest()


class SubsetOracle:
    """Memoized colorability of induced subsystems of a parent set.

    The induced system of a subset consists of the parent bases (and, in
    pair mode, the orthogonal pairs) that lie wholly inside it.
    """

    def __init__(self, parent: RaySet, mode: Mode | str = Mode.BASES):
        if len(parent) > MAX_RAYS:
            raise TooManyRays(f"{len(parent)} rays exceeds the {MAX_RAYS}-ray bitmask budget")
        self.parent = parent
        self.mode = Mode(mode)
        self.bases = [_mask(b) for b in enumerate_bases(parent)]
        self.pairs = ([_mask(p) for p in orthogonal_pairs(parent)]
                      if self.mode is Mode.BASES_AND_PAIRS else [])
        self.full = (1 << len(parent)) - 1
        self._memo: dict[int, bool] = {}

    def compute(self, subset: int) -> bool:
        """Colorability without consulting the memo."""
        inside = [b for b in self.bases if b & subset == b]
        pairs = [p for p in self.pairs if p & subset == p]
        # rays outside every constraint never matter
        relevant = 0
        for m in inside:
            relevant |= m
        for m in pairs:
            relevant |= m
        return search_masks(relevant, inside, pairs) is not None

    def colorable(self, subset: int) -> bool:
        hit = self._memo.get(subset)
        if hit is None:
            # concurrent workers may both compute; they store equal values
            hit = self.compute(subset)
            self._memo[subset] = hit
        return hit

    def __len__(self) -> int:
        return len(self._memo)


@dataclass(frozen=True)
class CriticalSet:
    ray_ids: tuple[int, ...]

    @property
    def size(self) -> int:
        return len(self.ray_ids)


@dataclass
class Census:
    parent: RaySet
    mode: Mode
    size_min: int
    size_max: int
    sets: list[CriticalSet] = field(default_factory=list)

    @property
    def counts(self) -> dict[int, int]:
        return dict(sorted(Counter(c.size for c in self.sets).items()))

    def to_json_obj(self) -> dict:
        return {
            "parent": {
                "fingerprint": fingerprint(self.parent),
                "dim": self.parent.dim,
                "rays": len(self.parent),
            },
            "mode": self.mode.value,
            "size_min": self.size_min,
            "size_max": self.size_max,
            "counts": {str(k): v for k, v in self.counts.items()},
            "total": len(self.sets),
            "sets": [
                {
                    "size": c.size,
                    "ids": list(c.ray_ids),
                    "rays": sorted(str(self.parent[i]) for i in c.ray_ids),
                }
                for c in self.sets
            ],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_obj(), indent=2, sort_keys=False) + "\n"


def is_critical(parent: RaySet, ids: Iterable[int], mode: Mode | str = Mode.BASES,
                oracle: SubsetOracle | None = None) -> bool:
    oracle = oracle or SubsetOracle(parent, mode)
    m = _mask(ids)
    if oracle.colorable(m):
        return False
    return all(oracle.colorable(m & ~(1 << i)) for i in _ids(m))


def _expand(oracle: SubsetOracle, subset: int) -> tuple[bool, list[int]]:
    """Return (is critical, uncolorable one-ray deletions)."""
    below = []
    for i in _ids(subset):
        child = subset & ~(1 << i)
        if not oracle.colorable(child):
            below.append(child)
    return not below, below


def enumerate_critical(parent: RaySet, mode: Mode | str = Mode.BASES,
                       size_min: int = 1, size_max: int | None = None,
                       threads: int = 1, oracle: SubsetOracle | None = None) -> Census:
    """All critical subsets of ``parent`` with size in ``[size_min, size_max]``."""
    oracle = oracle or SubsetOracle(parent, mode)
    n = len(parent)
    size_max = n if size_max is None else size_max
    census = Census(parent, oracle.mode, size_min, size_max)
    if n == 0 or oracle.colorable(oracle.full):
        return census
    found: list[int] = []
    level = [oracle.full]
    size = n
    pool = ThreadPoolExecutor(max_workers=threads) if threads > 1 else None
    try:
        while level and size >= size_min:
            if pool is None:
                results = [_expand(oracle, m) for m in level]
            else:
                results = list(pool.map(lambda m: _expand(oracle, m), level))
            nxt: set[int] = set()
            for m, (crit, below) in zip(level, results):
                if crit:
                    if size <= size_max:
                        found.append(m)
                else:
                    nxt.update(below)
            level = sorted(nxt)
            size -= 1
    finally:
        if pool is not None:
            pool.shutdown()
    census.sets = sorted((CriticalSet(tuple(_ids(m))) for m in found),
                         key=lambda c: (c.size, c.ray_ids))
    return census

