"""Exact Born-rule layer for two qubits.

Probabilities are ratios of squared integer inner products, so the usual
1/sqrt(2) and 1/sqrt(3) normalizations cancel and every value is a
Fraction.  Basis order is |++>, |+->, |-+>, |--> with |+> the sigma_z=+1
eigenstate.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .coloring import Assignment, ConstraintSystem, Mode, Propagation, build_constraints, propagate
from .errors import (
    ConditionHasZeroProbability,
    DimensionMismatch,
    ImpossiblePostselection,
    NotFactorizable,
)
from .rays import Basis, Ray, RaySet, as_ray, enumerate_bases, factorize, in_span, inner, tensor


@dataclass(frozen=True)
class State:
    """Unnormalized pure state."""

    ray: Ray

    def __init__(self, ray):
        object.__setattr__(self, "ray", as_ray(ray))

    def __str__(self) -> str:
        return str(self.ray)


def _ray_of(x) -> Ray:
    return x.ray if isinstance(x, State) else as_ray(x)


def born(state, u) -> Fraction:
    """Probability that ``state`` passes the projector onto ``u``."""
    psi, u = _ray_of(state), _ray_of(u)
    if psi.dim != u.dim:
        raise DimensionMismatch(f"dimension {psi.dim} vs {u.dim}")
    return Fraction(inner(u, psi) ** 2, u.norm2() * psi.norm2())


# -- Pauli products ----------------------------------------------------------

PAULI = {
    "I": ((1, 0), (0, 1)),
    "X": ((0, 1), (1, 0)),
    "Z": ((1, 0), (0, -1)),
}


@dataclass(frozen=True)
class ProductObservable:
    factor1: str
    factor2: str

    def __post_init__(self):
        for f in (self.factor1, self.factor2):
            if f not in PAULI:
                raise ValueError(f"unknown factor {f!r}; use I, X or Z")

    @classmethod
    def parse(cls, text: str) -> "ProductObservable":
        t = text.upper().replace("⊗", "").replace("*", "")
        if len(t) != 2:
            raise ValueError(f"observable must name two factors, got {text!r}")
        return cls(t[0], t[1])

    def matrix(self) -> list[list[int]]:
        a, b = PAULI[self.factor1], PAULI[self.factor2]
        return [[a[i][k] * b[j][l] for k in range(2) for l in range(2)]
                for i in range(2) for j in range(2)]

    def __str__(self) -> str:
        return f"{self.factor1}{self.factor2}"


TWO_BODY = tuple(ProductObservable(a, b) for a in "ZX" for b in "ZX")


def eigen_check(u, obs: ProductObservable) -> int | None:
    """Eigenvalue (+1 or -1) of ``obs`` on ``u``, or None if ``u`` is not an eigenvector."""
    u = _ray_of(u)
    if u.dim != 4:
        raise DimensionMismatch("eigen_check needs a 4-dimensional ray")
    mu = [sum(m * x for m, x in zip(row, u)) for row in obs.matrix()]
    for lam in (1, -1):
        if mu == [lam * x for x in u]:
            return lam
    return None


def joint_eigenvalues(u, observables: Iterable[ProductObservable] = TWO_BODY) -> dict[str, int]:
    out = {}
    for obs in observables:
        lam = eigen_check(u, obs)
        if lam is not None:
            out[str(obs)] = lam
    return out


# -- local events ------------------------------------------------------------

_EIGEN = {
    ("z", 1): Ray((1, 0)),
    ("z", -1): Ray((0, 1)),
    ("x", 1): Ray((1, 1)),
    ("x", -1): Ray((1, -1)),
}


@dataclass(frozen=True)
class LocalEvent:
    """Outcome of sigma_axis on one particle."""

    particle: int
    axis: str
    outcome: int

    def __post_init__(self):
        if self.particle not in (1, 2) or self.axis not in ("x", "z") or self.outcome not in (1, -1):
            raise ValueError(f"bad local event {self.particle}, {self.axis}, {self.outcome}")

    @classmethod
    def parse(cls, text: str) -> "LocalEvent":
        """Parse compact forms such as ``z1-`` or ``x2+``."""
        t = text.strip().lower()
        if len(t) != 3 or t[0] not in "xz" or t[1] not in "12" or t[2] not in "+-":
            raise ValueError(f"bad event {text!r}; expected e.g. z1- or x2+")
        return cls(int(t[1]), t[0], 1 if t[2] == "+" else -1)

    @classmethod
    def from_ray(cls, particle: int, r: Ray) -> "LocalEvent | None":
        for (axis, outcome), e in _EIGEN.items():
            if e == r:
                return cls(particle, axis, outcome)
        return None

    @property
    def eigenvector(self) -> Ray:
        return _EIGEN[self.axis, self.outcome]

    def spanning_rays(self) -> tuple[Ray, Ray]:
        """Orthogonal integer pair spanning the rank-2 projector of this event."""
        up, down = Ray((1, 0)), Ray((0, 1))
        if self.particle == 1:
            return tensor(self.eigenvector, up), tensor(self.eigenvector, down)
        return tensor(up, self.eigenvector), tensor(down, self.eigenvector)

    def __str__(self) -> str:
        return f"sigma_{self.axis}({self.particle})={self.outcome:+d}"


def event_probability(state, event: LocalEvent) -> Fraction:
    return sum((born(state, r) for r in event.spanning_rays()), Fraction(0))


def joint_ray(a: LocalEvent, b: LocalEvent) -> Ray:
    if a.particle == b.particle:
        raise ValueError("joint events must concern different particles")
    first, second = (a, b) if a.particle == 1 else (b, a)
    return tensor(first.eigenvector, second.eigenvector)


def conditional_probability(state, a: LocalEvent, given: LocalEvent) -> Fraction:
    p_given = event_probability(state, given)
    if p_given == 0:
        raise ConditionHasZeroProbability(f"P({given}) = 0")
    return born(state, joint_ray(a, given)) / p_given


# -- pre/postselection -------------------------------------------------------

def _check_postselection(pre: Ray, post: Ray | None) -> None:
    if post is not None and inner(pre, post) == 0:
        raise ImpossiblePostselection(f"<{post}|{pre}> = 0")


def forced_values(s: RaySet, pre, post=None) -> Assignment:
    """Values fixed by preparing ``pre`` and (optionally) postselecting ``post``."""
    pre = _ray_of(pre)
    post = None if post is None else _ray_of(post)
    _check_postselection(pre, post)
    out: Assignment = {}
    for state in (pre, post):
        if state is None:
            continue
        for i, r in enumerate(s):
            if r == state:
                out[i] = 1
            elif inner(r, state) == 0:
                out[i] = 0
    return out


@dataclass(frozen=True)
class ReducedConstraint:
    basis_index: int
    members: tuple[int, ...]  # ids in the original set
    span_ok: bool


@dataclass
class ReducedSystem:
    parent: RaySet
    state: State
    removed: tuple[int, ...]
    kept: tuple[int, ...]
    constraints: list[ReducedConstraint]

    @property
    def flagged(self) -> list[ReducedConstraint]:
        return [c for c in self.constraints if not c.span_ok]

    def system(self) -> ConstraintSystem:
        """Constraint system over the kept rays (ids renumbered in ``kept`` order).

        Constraints whose span check failed only forbid two 1s.
        """
        remap = {old: new for new, old in enumerate(self.kept)}
        sums, pairs = [], []
        for c in self.constraints:
            ids = [remap[i] for i in c.members]
            if c.span_ok:
                sums.append(tuple(ids))
            else:
                pairs.extend((a, b) for k, a in enumerate(ids) for b in ids[k + 1:])
        mode = Mode.BASES_AND_PAIRS if pairs else Mode.BASES
        return ConstraintSystem(self.parent.subset(self.kept), tuple(sums), tuple(pairs), mode)


def state_reduce(s: RaySet, state, bases: Sequence[Basis] | None = None) -> ReducedSystem:
    """Drop the state's ray and everything orthogonal to it, shrinking each basis.

    A shrunken basis still sums to one on the state when its remaining
    members span a subspace containing the state; otherwise it is kept only
    as an exclusivity constraint and flagged.
    """
    st = state if isinstance(state, State) else State(state)
    psi = st.ray
    if psi.dim != s.dim:
        raise DimensionMismatch(f"dimension {psi.dim} vs {s.dim}")
    bases = enumerate_bases(s) if bases is None else list(bases)
    removed = {i for i, r in enumerate(s) if r == psi or inner(r, psi) == 0}
    kept = tuple(i for i in range(len(s)) if i not in removed)
    constraints = []
    for k, basis in enumerate(bases):
        if any(s[i] == psi for i in basis):
            continue
        members = tuple(i for i in basis if i not in removed)
        constraints.append(ReducedConstraint(k, members, in_span(psi, [s[i] for i in members])))
    return ReducedSystem(s, st, tuple(sorted(removed)), kept, constraints)


@dataclass
class HardyRun:
    system: ConstraintSystem
    forced: Assignment
    propagation: Propagation

    @property
    def contradiction(self) -> bool:
        return self.propagation.contradiction


def hardy_run(s: RaySet, pre, post=None) -> HardyRun:
    """Seed the pair-aware constraints of ``s`` with forced values and propagate."""
    forced = forced_values(s, pre, post)
    cs = build_constraints(s, Mode.BASES_AND_PAIRS)
    return HardyRun(cs, forced, propagate(cs, forced))


# -- Hardy nonlocality record ------------------------------------------------

_OTHER_AXIS = {"x": "z", "z": "x"}


@dataclass(frozen=True)
class LocalValue:
    particle: int
    ray: Ray
    value: int
    reason: str


@dataclass
class HardyRecord:
    pre: State
    post: State
    events: dict[str, LocalEvent]
    p34: Fraction  # P(c1 | b2)
    p35: Fraction  # P(c2 | a1)
    p36: Fraction  # P(c1, c2)
    p37: Fraction  # P(a1, b2)
    local_values: list[LocalValue] = field(default_factory=list)

    @property
    def is_hardy(self) -> bool:
        return self.p34 == 1 and self.p35 == 1 and self.p36 == 0 and self.p37 > 0


def _infer(pre: Ray, particle: int, own_post: LocalEvent, other_factor: Ray):
    """Local values on ``particle`` implied by preselection and the partner's postselection."""
    axis = _OTHER_AXIS[own_post.axis]
    values = []
    inferred = -1
    for s in (1, -1):
        e = _EIGEN[axis, s]
        product = tensor(e, other_factor) if particle == 1 else tensor(other_factor, e)
        if inner(product, pre) == 0:
            inferred = -s
            values.append(LocalValue(particle, e, 0, f"{product} orthogonal to preselected state"))
            values.append(LocalValue(particle, _EIGEN[axis, -s], 1, "completeness on one qubit"))
            break
    return LocalEvent(particle, axis, inferred), values


def nonlocality_report(pre, post) -> HardyRecord:
    pre_s = pre if isinstance(pre, State) else State(pre)
    post_s = post if isinstance(post, State) else State(post)
    _check_postselection(pre_s.ray, post_s.ray)
    f = factorize(post_s.ray)
    if f is None:
        raise NotFactorizable(f"postselected state {post_s} is entangled")
    a1 = LocalEvent.from_ray(1, f.first)
    b2 = LocalEvent.from_ray(2, f.second)
    if a1 is None or b2 is None:
        raise NotFactorizable(f"factors of {post_s} are not sigma_x / sigma_z eigenstates")
    c1, vals1 = _infer(pre_s.ray, 1, a1, f.second)
    c2, vals2 = _infer(pre_s.ray, 2, b2, f.first)
    local = [
        LocalValue(1, f.first, 1, "postselection factor"),
        LocalValue(2, f.second, 1, "postselection factor"),
        *vals1,
        *vals2,
    ]
    return HardyRecord(
        pre=pre_s,
        post=post_s,
        events={"a1": a1, "b2": b2, "c1": c1, "c2": c2},
        p34=conditional_probability(pre_s, c1, b2),
        p35=conditional_probability(pre_s, c2, a1),
        p36=born(pre_s, joint_ray(c1, c2)),
        p37=born(pre_s, post_s.ray),
        local_values=local,
    )
