"""Noncontextual {0,1} assignments.

A constraint system demands exactly one 1 in every complete basis and,
optionally, at most one 1 in every orthogonal pair.  Colorability is
decided by backtracking over ray-id bitmasks; parity certificates are
found by Gaussian elimination over GF(2).
"""
from __future__ import annotations

import enum
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Mapping

from .errors import UnknownRayId
from .rays import RaySet, enumerate_bases, orthogonal_pairs

Assignment = dict[int, int]


class Mode(str, enum.Enum):
    BASES = "bases"
    BASES_AND_PAIRS = "bases+pairs"

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True)
class ConstraintSystem:
    universe: RaySet
    sum_one: tuple[tuple[int, ...], ...]
    exclusivity_pairs: tuple[tuple[int, int], ...] = ()
    mode: Mode = Mode.BASES

    def __post_init__(self):
        n = len(self.universe)
        normalized = tuple(sorted({tuple(sorted(c)) for c in self.sum_one}))
        pairs = tuple(sorted({tuple(sorted(p)) for p in self.exclusivity_pairs}))
        for c in normalized + pairs:
            for i in c:
                if not 0 <= i < n:
                    raise UnknownRayId(i)
        object.__setattr__(self, "sum_one", normalized)
        object.__setattr__(self, "exclusivity_pairs", pairs)

    @property
    def n(self) -> int:
        return len(self.universe)

    def sum_one_masks(self) -> list[int]:
        return [_mask(c) for c in self.sum_one]

    def pair_masks(self) -> list[int]:
        return [_mask(p) for p in self.exclusivity_pairs]

    def restrict(self, ids: Iterable[int]) -> "ConstraintSystem":
        """Induced system on ``ids``: constraints lying wholly inside, ids renumbered."""
        keep = sorted(set(ids))
        remap = {old: new for new, old in enumerate(keep)}
        return ConstraintSystem(
            self.universe.subset(keep),
            tuple(tuple(remap[i] for i in c) for c in self.sum_one if all(i in remap for i in c)),
            tuple(tuple(remap[i] for i in p) for p in self.exclusivity_pairs
                  if all(i in remap for i in p)),
            self.mode,
        )


def _mask(ids: Iterable[int]) -> int:
    m = 0
    for i in ids:
        m |= 1 << i
    return m


def _ids(mask: int) -> list[int]:
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return out


def build_constraints(s: RaySet, mode: Mode | str = Mode.BASES) -> ConstraintSystem:
    mode = Mode(mode)
    pairs = orthogonal_pairs(s) if mode is Mode.BASES_AND_PAIRS else ()
    return ConstraintSystem(s, tuple(enumerate_bases(s)), tuple(pairs), mode)


# -- propagation with a trace ------------------------------------------------

@dataclass(frozen=True)
class Step:
    round: int
    ray: int
    value: int
    rule: str  # "last-free" | "one-taken" | "exclusive"
    source: tuple[int, ...]  # constraint members or the orthogonal pair
    constraint: int | None = None  # index into sum_one, None for pairs


@dataclass(frozen=True)
class Conflict:
    kind: str  # "two-ones" | "all-zero" | "pair" | "opposing"
    rays: tuple[int, ...]
    constraint: int | None = None


@dataclass
class Propagation:
    values: Assignment
    trace: list[Step] = field(default_factory=list)
    conflicts: list[Conflict] = field(default_factory=list)

    @property
    def contradiction(self) -> bool:
        return bool(self.conflicts)


def _violations(cs: ConstraintSystem, values: Mapping[int, int]) -> list[Conflict]:
    out = []
    for k, c in enumerate(cs.sum_one):
        vals = [values.get(i) for i in c]
        if vals.count(1) > 1:
            out.append(Conflict("two-ones", tuple(i for i in c if values.get(i) == 1), k))
        elif all(v == 0 for v in vals):
            out.append(Conflict("all-zero", c, k))
    for p in cs.exclusivity_pairs:
        if all(values.get(i) == 1 for i in p):
            out.append(Conflict("pair", p))
    return out


def propagate(cs: ConstraintSystem, assignment: Mapping[int, int]) -> Propagation:
    """Close ``assignment`` under the forcing rules, in synchronous rounds.

    Every round derives all implications of the current values at once and
    then applies them, so the trace groups simultaneous deductions.
    """
    values: Assignment = {}
    for i, v in assignment.items():
        if not 0 <= i < cs.n:
            raise UnknownRayId(i)
        if v not in (0, 1):
            raise ValueError(f"value for ray {i} must be 0 or 1, got {v!r}")
        values[i] = v
    result = Propagation(values)
    rnd = 0
    while True:
        result.conflicts = _violations(cs, values)
        if result.conflicts:
            return result
        rnd += 1
        steps: list[Step] = []
        for k, c in enumerate(cs.sum_one):
            ones = [i for i in c if values.get(i) == 1]
            free = [i for i in c if i not in values]
            if len(ones) == 1:
                steps += [Step(rnd, i, 0, "one-taken", c, k) for i in free]
            elif not ones and len(free) == 1:
                steps.append(Step(rnd, free[0], 1, "last-free", c, k))
        for p in cs.exclusivity_pairs:
            a, b = p
            if values.get(a) == 1 and b not in values:
                steps.append(Step(rnd, b, 0, "exclusive", p))
            elif values.get(b) == 1 and a not in values:
                steps.append(Step(rnd, a, 0, "exclusive", p))
        if not steps:
            return result
        result.trace.extend(steps)
        implied: dict[int, set[int]] = {}
        for st in steps:
            implied.setdefault(st.ray, set()).add(st.value)
        opposing = sorted(i for i, vs in implied.items() if len(vs) > 1)
        if opposing:
            result.conflicts = [Conflict("opposing", (i,)) for i in opposing]
            return result
        for i, vs in implied.items():
            values[i] = next(iter(vs))


# -- exhaustive search -------------------------------------------------------

def _propagate_masks(exactly_one, at_most_one, ones: int, zeros: int):
    changed = True
    while changed:
        changed = False
        for b in exactly_one:
            o = b & ones
            if o:
                if o & (o - 1):
                    return None
                rest = b & ~ones & ~zeros
                if rest:
                    zeros |= rest
                    changed = True
            else:
                free = b & ~zeros
                if not free:
                    return None
                if not free & (free - 1):
                    ones |= free
                    changed = True
        for p in at_most_one:
            o = p & ones
            if o:
                if o & (o - 1):
                    return None
                rest = p & ~ones & ~zeros
                if rest:
                    zeros |= rest
                    changed = True
    return ones, zeros


def search_masks(universe: int, exactly_one, at_most_one=(), ones: int = 0, zeros: int = 0):
    """Backtracking over rays in ``universe``; returns the mask of rays valued 1, or None.

    Branches on the lowest unassigned id, trying 1 before 0.
    """
    state = _propagate_masks(exactly_one, at_most_one, ones, zeros)
    if state is None:
        return None
    ones, zeros = state
    free = universe & ~ones & ~zeros
    if not free:
        return ones
    bit = free & -free
    found = search_masks(universe, exactly_one, at_most_one, ones | bit, zeros)
    if found is not None:
        return found
    return search_masks(universe, exactly_one, at_most_one, ones, zeros | bit)


@dataclass(frozen=True)
class Coloring:
    colorable: bool
    witness: Assignment | None = None

    def __bool__(self) -> bool:
        return self.colorable


def colorable(cs: ConstraintSystem) -> Coloring:
    universe = (1 << cs.n) - 1
    ones = search_masks(universe, cs.sum_one_masks(), cs.pair_masks())
    if ones is None:
        return Coloring(False)
    return Coloring(True, {i: (ones >> i) & 1 for i in range(cs.n)})


def check_witness(cs: ConstraintSystem, witness: Mapping[int, int]) -> bool:
    if set(witness) != set(range(cs.n)) or any(v not in (0, 1) for v in witness.values()):
        return False
    if any(sum(witness[i] for i in c) != 1 for c in cs.sum_one):
        return False
    return all(witness[a] + witness[b] <= 1 for a, b in cs.exclusivity_pairs)


# -- parity certificates -----------------------------------------------------

def gf2_solve(rows: list[int], rhs: list[int], nvars: int) -> int | None:
    """Solve ``rows . x = rhs`` over GF(2); rows are bitmasks over variables.

    Free variables are set to 0.  Returns the solution as a bitmask or None.
    """
    eqs = [(r, b & 1) for r, b in zip(rows, rhs)]
    pivots: list[tuple[int, int, int]] = []  # (pivot bit, row, rhs)
    for col in range(nvars):
        bit = 1 << col
        idx = next((k for k, (r, _) in enumerate(eqs) if r & bit), None)
        if idx is None:
            continue
        prow, pb = eqs.pop(idx)
        eqs = [(r ^ prow, b ^ pb) if r & bit else (r, b) for r, b in eqs]
        pivots = [(c, r ^ prow, b ^ pb) if r & bit else (c, r, b) for c, r, b in pivots]
        pivots.append((bit, prow, pb))
    if any(r == 0 and b for r, b in eqs):
        return None
    x = 0
    for bit, _, b in pivots:
        if b:
            x |= bit
    return x


@dataclass(frozen=True)
class ParityCertificate:
    constraint_indices: tuple[int, ...]

    def coverage(self, cs: ConstraintSystem) -> dict[int, int]:
        counts = Counter(i for k in self.constraint_indices for i in cs.sum_one[k])
        return {i: counts.get(i, 0) for i in range(cs.n)}

    def is_valid(self, cs: ConstraintSystem) -> bool:
        return len(self.constraint_indices) % 2 == 1 and all(
            c % 2 == 0 for c in self.coverage(cs).values())


def parity_certificate(cs: ConstraintSystem) -> ParityCertificate | None:
    """Odd family of sum-one constraints covering every ray an even number of times."""
    m = len(cs.sum_one)
    rows = [0] * cs.n
    for k, c in enumerate(cs.sum_one):
        for i in c:
            rows[i] |= 1 << k
    rows = [r for r in rows if r]
    rhs = [0] * len(rows)
    rows.append((1 << m) - 1)
    rhs.append(1)
    x = gf2_solve(rows, rhs, m)
    if x is None:
        return None
    return ParityCertificate(tuple(_ids(x)))
