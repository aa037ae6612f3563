"""Exact projective linear algebra over the rationals.

Rays are stored as coprime integer tuples whose first nonzero entry is
positive, so equality and hashing of rays are plain tuple operations.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Sequence, Union

from .errors import DimensionMismatch, MixedDimension, ParseError, DuplicateRay, ZeroVector

Scalar = Union[int, Fraction, str]


def _to_fraction(x: Scalar) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise TypeError("booleans are not ray components")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x.strip())
    raise TypeError(f"unsupported component type {type(x).__name__}")


def canonicalize(raw: Iterable[Scalar]) -> tuple[int, ...]:
    """Return the canonical integer representative of the ray through ``raw``.

    >>> canonicalize([Fraction(1, 2), Fraction(-1, 2), Fraction(-1, 2), 0])
    (1, -1, -1, 0)
    """
    fracs = [_to_fraction(x) for x in raw]
    if not any(fracs):
        raise ZeroVector("cannot canonicalize the zero vector")
    denom = math.lcm(*(f.denominator for f in fracs))
    ints = [int(f * denom) for f in fracs]
    g = math.gcd(*ints)
    sign = 1 if next(x for x in ints if x) > 0 else -1
    return tuple(sign * x // g for x in ints)


class Ray:
    """A one-dimensional subspace of rational space, held in canonical form."""

    __slots__ = ("components",)

    def __init__(self, components: Iterable[Scalar]):
        comps = canonicalize(components)
        if len(comps) < 2:
            raise ValueError("rays need dimension >= 2")
        object.__setattr__(self, "components", comps)

    def __setattr__(self, name, value):
        raise AttributeError("Ray is immutable")

    @property
    def dim(self) -> int:
        return len(self.components)

    def __iter__(self) -> Iterator[int]:
        return iter(self.components)

    def __getitem__(self, i: int) -> int:
        return self.components[i]

    def __len__(self) -> int:
        return len(self.components)

    def __eq__(self, other) -> bool:
        return isinstance(other, Ray) and self.components == other.components

    def __lt__(self, other: "Ray") -> bool:
        return self.components < other.components

    def __hash__(self) -> int:
        return hash(self.components)

    def __repr__(self) -> str:
        return f"Ray({self})"

    def __str__(self) -> str:
        return "(" + ",".join(str(c) for c in self.components) + ")"

    def norm2(self) -> int:
        return sum(c * c for c in self.components)


def as_ray(x: Union[Ray, Iterable[Scalar]]) -> Ray:
    return x if isinstance(x, Ray) else Ray(x)


def inner(a: Ray, b: Ray) -> int:
    if a.dim != b.dim:
        raise DimensionMismatch(f"dimension {a.dim} vs {b.dim}")
    return sum(x * y for x, y in zip(a.components, b.components))


def orthogonal(a: Ray, b: Ray) -> bool:
    return inner(a, b) == 0


class RaySet(Sequence[Ray]):
    """Ordered collection of distinct rays of one dimension; ids are list indices."""

    def __init__(self, rays: Iterable[Union[Ray, Iterable[Scalar]]], dim: int | None = None):
        self._rays: tuple[Ray, ...] = tuple(as_ray(r) for r in rays)
        if dim is None:
            dim = self._rays[0].dim if self._rays else 0
        self.dim = dim
        seen: dict[Ray, int] = {}
        for i, r in enumerate(self._rays):
            if r.dim != dim:
                raise DimensionMismatch(f"ray {r} has dimension {r.dim}, expected {dim}")
            if r in seen:
                raise ValueError(f"duplicate ray {r} at ids {seen[r]} and {i}")
            seen[r] = i
        self._index = seen

    def __getitem__(self, i):
        return self._rays[i]

    def __len__(self) -> int:
        return len(self._rays)

    def __eq__(self, other) -> bool:
        return isinstance(other, RaySet) and self.dim == other.dim and self._rays == other._rays

    def __hash__(self) -> int:
        return hash((self.dim, self._rays))

    def __repr__(self) -> str:
        return f"RaySet(dim={self.dim}, n={len(self)})"

    def index(self, ray) -> int:  # type: ignore[override]
        return self._index[as_ray(ray)]

    def __contains__(self, ray) -> bool:
        try:
            return as_ray(ray) in self._index
        except (TypeError, ValueError):
            return False

    def subset(self, ids: Iterable[int]) -> "RaySet":
        return RaySet([self._rays[i] for i in sorted(ids)], dim=self.dim)

    def ids_of(self, rays: Iterable) -> tuple[int, ...]:
        return tuple(sorted(self.index(r) for r in rays))


Basis = tuple[int, ...]
"""Sorted tuple of ``dim`` ray ids that are pairwise orthogonal."""


def orthogonality_graph(s: RaySet) -> dict[int, set[int]]:
    """Adjacency sets: ``j in graph[i]`` iff rays i and j are orthogonal."""
    adj: dict[int, set[int]] = {i: set() for i in range(len(s))}
    for i, j in itertools.combinations(range(len(s)), 2):
        if inner(s[i], s[j]) == 0:
            adj[i].add(j)
            adj[j].add(i)
    return adj


def orthogonal_pairs(s: RaySet) -> list[tuple[int, int]]:
    adj = orthogonality_graph(s)
    return sorted((i, j) for i in adj for j in adj[i] if i < j)


def enumerate_bases(s: RaySet) -> list[Basis]:
    """All complete orthogonal bases in ``s`` (``dim``-cliques of the graph), sorted."""
    adj = orthogonality_graph(s)
    d = s.dim
    out: list[Basis] = []

    def extend(clique: list[int], candidates: list[int]) -> None:
        if len(clique) == d:
            out.append(tuple(clique))
            return
        for k, v in enumerate(candidates):
            # only larger ids, so each clique is built in increasing order once
            extend(clique + [v], [w for w in candidates[k + 1:] if w in adj[v]])

    if d:
        extend([], list(range(len(s))))
    return sorted(out)


def _rank(rows: list[list[Fraction]]) -> int:
    m = [list(r) for r in rows]
    rank = 0
    ncols = len(m[0]) if m else 0
    for col in range(ncols):
        pivot = next((r for r in range(rank, len(m)) if m[r][col] != 0), None)
        if pivot is None:
            continue
        m[rank], m[pivot] = m[pivot], m[rank]
        for r in range(len(m)):
            if r != rank and m[r][col] != 0:
                f = m[r][col] / m[rank][col]
                m[r] = [x - f * y for x, y in zip(m[r], m[rank])]
        rank += 1
    return rank


def rank(vectors: Sequence[Ray]) -> int:
    return _rank([[Fraction(c) for c in v] for v in vectors])


def in_span(target: Ray, generators: Sequence[Ray]) -> bool:
    """True iff ``target`` is a rational linear combination of ``generators``."""
    for g in generators:
        if g.dim != target.dim:
            raise DimensionMismatch(f"dimension {g.dim} vs {target.dim}")
    if not generators:
        return False
    return rank(list(generators)) == rank(list(generators) + [target])


def projector(u: Ray) -> list[list[Fraction]]:
    n = u.norm2()
    return [[Fraction(a * b, n) for b in u] for a in u]


def tensor(a: Ray, b: Ray) -> Ray:
    """Kronecker product in the order |++>, |+->, |-+>, |-->."""
    if a.dim != 2 or b.dim != 2:
        raise DimensionMismatch("tensor expects two 2-dimensional rays")
    return Ray([x * y for x in a for y in b])


@dataclass(frozen=True)
class Factorization:
    first: Ray
    second: Ray

    def __str__(self) -> str:
        return f"{self.first}x{self.second}"


def is_factorizable(u: Ray) -> bool:
    if u.dim != 4:
        raise DimensionMismatch("factorization is defined for dimension 4")
    u0, u1, u2, u3 = u.components
    return u0 * u3 - u1 * u2 == 0


def factorize(u: Ray) -> Factorization | None:
    """Split a 4-dimensional ray into two qubit rays, or None if it is entangled."""
    if not is_factorizable(u):
        return None
    u0, u1, u2, u3 = u.components
    # rank-1 reshape: any nonzero row gives the second factor, any nonzero column the first
    second = Ray((u0, u1)) if (u0, u1) != (0, 0) else Ray((u2, u3))
    first = Ray((u0, u2)) if (u0, u2) != (0, 0) else Ray((u1, u3))
    f = Factorization(first, second)
    assert tensor(first, second) == u
    return f


@dataclass(frozen=True)
class SignedPermutation:
    """Coordinate map ``out[i] = signs[i] * v[perm[i]]``."""

    perm: tuple[int, ...]
    signs: tuple[int, ...]

    def __post_init__(self):
        if sorted(self.perm) != list(range(len(self.perm))):
            raise ValueError(f"not a permutation: {self.perm}")
        if len(self.signs) != len(self.perm) or any(s not in (1, -1) for s in self.signs):
            raise ValueError(f"bad signs: {self.signs}")

    @property
    def dim(self) -> int:
        return len(self.perm)

    @classmethod
    def identity(cls, dim: int) -> "SignedPermutation":
        return cls(tuple(range(dim)), (1,) * dim)

    @classmethod
    def all(cls, dim: int) -> Iterator["SignedPermutation"]:
        for perm in itertools.permutations(range(dim)):
            for signs in itertools.product((1, -1), repeat=dim):
                yield cls(perm, signs)

    def __call__(self, target):
        return apply_symmetry(self, target)


def apply_symmetry(p: SignedPermutation, target: Union[Ray, RaySet]):
    if isinstance(target, RaySet):
        if target.dim != p.dim:
            raise DimensionMismatch(f"dimension {target.dim} vs {p.dim}")
        return RaySet([apply_symmetry(p, r) for r in target], dim=target.dim)
    if target.dim != p.dim:
        raise DimensionMismatch(f"dimension {target.dim} vs {p.dim}")
    return Ray([s * target[j] for j, s in zip(p.perm, p.signs)])


# -- text format -------------------------------------------------------------

def parse_rayset_text(text: str) -> RaySet:
    """Parse the line-oriented ray format (``#`` comments, ints or ``p/q``)."""
    rays: list[Ray] = []
    first_seen: dict[Ray, int] = {}
    dim = None
    for lineno, line in enumerate(text.splitlines(), start=1):
        body = line.split("#", 1)[0].strip()
        if not body:
            continue
        try:
            comps = [Fraction(tok) for tok in body.split()]
        except (ValueError, ZeroDivisionError) as exc:
            raise ParseError(f"bad component in {body!r}: {exc}", line=lineno) from None
        if dim is None:
            dim = len(comps)
        elif len(comps) != dim:
            raise MixedDimension(f"expected {dim} components, got {len(comps)}", line=lineno)
        try:
            ray = Ray(comps)
        except ZeroVector:
            raise ParseError("zero vector", line=lineno) from None
        except ValueError as exc:
            raise ParseError(str(exc), line=lineno) from None
        if ray in first_seen:
            raise DuplicateRay(first_seen[ray], lineno, ray)
        first_seen[ray] = lineno
        rays.append(ray)
    return RaySet(rays, dim=dim or 0)


def parse_rayset(path) -> RaySet:
    with open(path, encoding="utf-8") as fh:
        return parse_rayset_text(fh.read())


def format_rayset(s: RaySet, header: str | None = None) -> str:
    lines = []
    if header:
        lines.extend(f"# {h}" for h in header.splitlines())
    lines.extend(" ".join(str(c) for c in r) for r in s)
    return "\n".join(lines) + "\n"
