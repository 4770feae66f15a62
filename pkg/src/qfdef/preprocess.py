"""Target decomposition: strip repeated entries out of a relation.

A k-tuple carries two independent pieces of information: which positions
hold equal entries (its pattern) and the sequence of distinct values in
first-appearance order (its squash).  Grouping a target relation by
pattern and squashing each group yields smaller repetition-free targets
whose joint definability is equivalent to the original's, and whose
defining formulas recombine into one for the original relation.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

from .algebra import And, Eq, Not, QfFormula, Relation, Var, substitute_formula
from .algebra import Algebra, formula_variables


@dataclass(frozen=True)
class Pattern:
    """Equality pattern of tuple positions, in canonical block form."""

    blocks: tuple[tuple[int, ...], ...]

    @property
    def arity(self) -> int:
        return sum(len(b) for b in self.blocks)

    @property
    def width(self) -> int:
        return len(self.blocks)

    @property
    def representatives(self) -> tuple[int, ...]:
        return tuple(b[0] for b in self.blocks)

    def to_json(self) -> list[list[int]]:
        return [list(b) for b in self.blocks]


def pattern(a: Sequence[int]) -> Pattern:
    """Positions i, j share a block exactly when a[i] == a[j]."""
    if not a:
        raise ValueError("empty tuple has no pattern")
    blocks: list[list[int]] = []
    seen: dict[int, int] = {}
    for i, x in enumerate(a):
        bi = seen.get(x)
        if bi is None:
            seen[x] = len(blocks)
            blocks.append([i])
        else:
            blocks[bi].append(i)
    return Pattern(tuple(tuple(b) for b in blocks))


def squash(a: Sequence[int]) -> tuple[int, ...]:
    """Drop every entry equal to a prior entry, keeping first occurrences."""
    if not a:
        raise ValueError("cannot squash an empty tuple")
    out: list[int] = []
    seen: set[int] = set()
    for x in a:
        if x not in seen:
            seen.add(x)
            out.append(x)
    return tuple(out)


def expand(pat: Pattern, squashed: Sequence[int]) -> tuple[int, ...]:
    """Inverse of squash for tuples of the given pattern."""
    if len(squashed) != pat.width:
        raise ValueError(f"tuple of length {len(squashed)} does not fit pattern width {pat.width}")
    out = [0] * pat.arity
    for j, block in enumerate(pat.blocks):
        for i in block:
            out[i] = squashed[j]
    return tuple(out)


@dataclass(frozen=True)
class BundleTarget:
    pattern: Pattern
    tuples: frozenset[tuple[int, ...]]

    @property
    def arity(self) -> int:
        return self.pattern.width


@dataclass(frozen=True)
class TargetBundle:
    """Decomposition of one relation into repetition-free per-pattern targets.

    Targets are ordered by (width ascending, canonical block order) so that
    membership vectors are comparable across runs.
    """

    original_arity: int
    targets: tuple[BundleTarget, ...]
    spec: tuple[int, ...]


def decompose(rel: Relation) -> TargetBundle:
    groups: dict[Pattern, set[tuple[int, ...]]] = {}
    for a in rel.tuples:
        groups.setdefault(pattern(a), set()).add(squash(a))
    ordered = sorted(groups, key=lambda p: (p.width, p.blocks))
    targets = tuple(BundleTarget(p, frozenset(groups[p])) for p in ordered)
    spec = tuple(sorted({t.arity for t in targets}))
    return TargetBundle(rel.arity, targets, spec)


def rel_type(a: Sequence[int], bundle: TargetBundle) -> tuple[bool, ...]:
    """Membership vector of a repetition-free tuple against every target.

    A tuple whose length differs from a target's arity is counted as not
    belonging to it, so one vector shape serves all tuples in the bundle.
    """
    a = tuple(a)
    return tuple(len(a) == t.arity and a in t.tuples for t in bundle.targets)


def distinct_tuples(alg: Algebra, k: int) -> Iterator[tuple[int, ...]]:
    """All repetition-free k-tuples over the universe, lexicographically.

    Empty when k exceeds the universe size.
    """
    if k < 1:
        raise ValueError(f"arity must be >= 1, got {k}")
    return itertools.permutations(range(alg.size), k)


def distinct_tuples_over(elements: Iterable[int], k: int) -> Iterator[tuple[int, ...]]:
    """Repetition-free k-tuples over an arbitrary element set, lexicographically."""
    return itertools.permutations(sorted(elements), k)


def recombine(pat: Pattern, phi: QfFormula, k: int) -> QfFormula:
    """Lift a formula over the squashed positions back to arity k.

    Variables x0..x{w-1} are renamed to the pattern's representative
    positions, equalities tie each block together, and disequalities
    separate the representatives, so the result holds exactly at the
    k-tuples whose pattern is `pat` and whose squash satisfies `phi`.
    """
    if pat.arity != k:
        raise ValueError(f"pattern covers {pat.arity} positions, arity is {k}")
    bad = [i for i in formula_variables(phi) if i >= pat.width]
    if bad:
        raise ValueError(f"formula uses x{max(bad)} but the pattern has width {pat.width}")
    reps = pat.representatives
    lifted = substitute_formula(phi, {j: reps[j] for j in range(pat.width)})
    literals: list[QfFormula] = []
    for block in pat.blocks:
        first = block[0]
        for i in block[1:]:
            literals.append(Eq(Var(first), Var(i)))
    for i, j in itertools.combinations(range(pat.width), 2):
        literals.append(Not(Eq(Var(reps[i]), Var(reps[j]))))
    if not literals:
        return lifted
    return And((lifted, *literals))


def assemble(results: Sequence[tuple[Pattern, QfFormula]], k: int) -> QfFormula:
    """Disjunction of the per-pattern formulas; empty input denotes nothing."""
    from .algebra import FALSE, Or

    formulas = [phi for _, phi in results]
    if not formulas:
        return FALSE
    if len(formulas) == 1:
        return formulas[0]
    return Or(tuple(formulas))
