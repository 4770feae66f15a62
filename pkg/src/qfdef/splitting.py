"""Definability by block splitting, with formula synthesis.

All repetition-free tuples of the target arity start in one block.  Each
step evaluates one pending term on the block's tuples and splits the
block by which established witness term the new term agrees with; the
leftover tuples form a complement block in which the new term becomes a
witness itself.  Blocks fully inside the target contribute a disjunct of
the output formula, blocks disjoint from it are dropped, and a mixed
block that runs out of terms to try is a counterexample: its tuples are
pairwise isomorphic, so any straddling pair plus the canonical map
between their generated subuniverses separates the target.

Block formulas are kept as flat literal tuples sharing structure between
parent and child blocks; they are only assembled into formula trees (and
flattened to disjunctive-normal-form-shaped text) on output.
"""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass
from typing import Callable, Sequence

from .algebra import (
    FALSE,
    TRUE,
    Algebra,
    And,
    App,
    Eq,
    Not,
    Or,
    QfFormula,
    Relation,
    Term,
    Var,
    eval_formula,
    eval_term,
)
from .decision import Decision, Definable, NotDefinable
from .isotype import Subisomorphism, iso_type, subiso_from_signatures
from .preprocess import assemble, decompose, expand, recombine

Trace = Callable[[str], None]


class Block:
    """One block of the refinement, with its term bookkeeping.

    `witnesses` are terms that pairwise disagree on every member tuple;
    `new_witnesses` are the witnesses added since the last term refill
    and drive the generation of the next term layer; `terms_to_process`
    is the queue of terms not yet evaluated on this block.  The literals
    accumulate the (dis)equalities that carve the block out of the
    initial tuple space.
    """

    __slots__ = ("tuples", "witnesses", "new_witnesses", "terms_to_process", "literals", "step")

    def __init__(
        self,
        tuples: frozenset[tuple[int, ...]],
        witnesses: tuple[Term, ...],
        new_witnesses: tuple[Term, ...],
        terms_to_process: list[Term],
        literals: tuple[QfFormula, ...],
        step: int,
    ):
        self.tuples = tuples
        self.witnesses = witnesses
        self.new_witnesses = new_witnesses
        self.terms_to_process = terms_to_process
        self.literals = literals
        self.step = step

    @property
    def formula(self) -> QfFormula:
        if not self.literals:
            return TRUE
        if len(self.literals) == 1:
            return self.literals[0]
        return And(self.literals)

    @property
    def is_terminal(self) -> bool:
        return not self.terms_to_process and not self.new_witnesses

    def depth(self) -> int:
        return max((t.depth for t in (*self.witnesses, *self.terms_to_process)), default=0)


@dataclass
class SplitStats:
    """Observable counters for the trace/debug surface and benchmarks."""

    blocks_created: int = 0
    steps: int = 0
    refills: int = 0
    full_blocks: int = 0
    max_depth: int = 0


def generate_terms(
    alg: Algebra, witnesses: Sequence[Term], new_witnesses: Sequence[Term]
) -> list[Term]:
    """Next layer of terms: every operation applied to witnesses, using at
    least one new witness, ordered by arity, then declared symbol order,
    then lexicographic argument positions."""
    if not new_witnesses:
        raise ValueError("term generation needs at least one new witness")
    new_set = set(new_witnesses)
    positions = range(len(witnesses))
    new_positions = {i for i, w in enumerate(witnesses) if w in new_set}
    out: list[Term] = []
    for r in alg.arities:
        index_tuples = [
            lt
            for lt in itertools.product(positions, repeat=r)
            if any(l in new_positions for l in lt)
        ]
        for op in alg.ops_of_arity(r):
            for lt in index_tuples:
                out.append(App(op.symbol, tuple(witnesses[l] for l in lt)))
    return out


def process_mixed_block(
    alg: Algebra,
    block: Block,
    value: Callable[[Term, tuple[int, ...]], int] | None = None,
    stats: SplitStats | None = None,
) -> list[Block]:
    """One refinement step on a mixed block.

    With an empty term queue the block is returned with the queue refilled
    from its witnesses and the new-witness list cleared.  Otherwise the
    first pending term is evaluated and the block is partitioned by which
    witness it agrees with; tuples agreeing with no witness form the
    complement block, which adopts the term as a new witness.  A lone
    successor keeps the parent's formula unchanged.
    """
    if block.is_terminal:
        raise ValueError("terminal block cannot be processed")
    if value is None:
        value = lambda t, v: eval_term(alg, t, v)
    if not block.terms_to_process:
        block.terms_to_process = generate_terms(alg, block.witnesses, block.new_witnesses)
        block.new_witnesses = ()
        if stats:
            stats.refills += 1
        return [block]
    t = block.terms_to_process.pop(0)
    block.step += 1
    if stats:
        stats.steps += 1
    remaining = block.terms_to_process
    successors: list[Block] = []
    complement = set(block.tuples)
    diseqs: list[QfFormula] = []
    for s in block.witnesses:
        eq_tuples = frozenset(v for v in block.tuples if value(t, v) == value(s, v))
        if eq_tuples:
            successors.append(
                Block(
                    eq_tuples,
                    block.witnesses,
                    block.new_witnesses,
                    list(remaining),
                    block.literals + (Eq(t, s),),
                    block.step,
                )
            )
            complement -= eq_tuples
            diseqs.append(Not(Eq(t, s)))
    if complement:
        successors.append(
            Block(
                frozenset(complement),
                block.witnesses + (t,),
                block.new_witnesses + (t,),
                list(remaining),
                block.literals + tuple(diseqs),
                block.step,
            )
        )
    if len(successors) == 1:
        successors[0].literals = block.literals
    if stats:
        stats.blocks_created += len(successors)
    return successors


def extract_counterexample(
    alg: Algebra, block: Block, target: frozenset[tuple[int, ...]]
) -> tuple[tuple[int, ...], tuple[int, ...], Subisomorphism]:
    """Witness pair and connecting map from a terminal mixed block."""
    if not block.is_terminal:
        raise ValueError("block still has terms to try; not terminal")
    inside = sorted(block.tuples & target)
    outside = sorted(block.tuples - target)
    if not inside or not outside:
        raise ValueError("block is pure; no counterexample here")
    a, b = inside[0], outside[0]
    gamma = subiso_from_signatures(alg, a, iso_type(alg, a), b, iso_type(alg, b))
    assert gamma is not None, "tuples of a terminal block must share their type"
    return a, b, gamma


class _DebugChecker:
    """Invariant suite evaluated at every mutation of the block system."""

    def __init__(self, alg: Algebra, target: frozenset, k: int, check_term_repr: bool):
        self.alg = alg
        self.target = target
        self.k = k
        self.check_term_repr = check_term_repr
        self.space = list(itertools.product(range(alg.size), repeat=k))
        self.distinct = frozenset(itertools.permutations(range(alg.size), k))

    def check_block(self, b: Block, value) -> None:
        # distinct witnesses never agree on a member tuple
        for s, t in itertools.combinations(b.witnesses, 2):
            for v in b.tuples:
                assert value(s, v) != value(t, v), "two witnesses coincide on a block tuple"
        # the block formula carves exactly the block out of the distinct tuples
        phi = b.formula
        ext = {v for v in self.space if eval_formula(self.alg, phi, v)}
        assert ext & self.distinct == b.tuples, "block formula extension drifted off its tuples"
        if self.check_term_repr:
            self._check_term_representation(b, value)

    def check_system(self, pending, full_blocks) -> None:
        seen: set[tuple[int, ...]] = set()
        for b in itertools.chain(pending, full_blocks):
            assert not (seen & b.tuples), "blocks overlap"
            seen |= b.tuples
        assert self.target <= seen, "target tuples leaked out of the block system"

    def check_split(self, successors: list[Block]) -> None:
        # a sample of tuples landing in different successors must differ in type
        for b1, b2 in itertools.combinations(successors, 2):
            a = sorted(b1.tuples)[0]
            b = sorted(b2.tuples)[0]
            assert iso_type(self.alg, a).partition != iso_type(self.alg, b).partition, (
                "isomorphic tuples were separated into different blocks"
            )

    def check_terminal(self, block: Block) -> None:
        sample = sorted(block.tuples)[:4]
        sigs = [iso_type(self.alg, t).partition for t in sample]
        assert all(s == sigs[0] for s in sigs), "terminal block holds non-isomorphic tuples"

    def _all_terms(self, depth: int) -> list[Term]:
        terms: list[Term] = [Var(i) for i in range(self.k)]
        seen = set(terms)
        for _ in range(depth):
            prev = list(terms)
            for op in self.alg.ops:
                for args in itertools.product(prev, repeat=op.arity):
                    t = App(op.symbol, args)
                    if t not in seen:
                        seen.add(t)
                        terms.append(t)
        return terms

    def _check_term_representation(self, b: Block, value) -> None:
        # every term up to the block's depth (capped at 2 to stay exhaustive
        # yet affordable) must agree on the block with a witness or a pending term
        d = min(b.depth(), 2)
        candidates = tuple(b.witnesses) + tuple(b.terms_to_process)

        def represented(t: Term) -> bool:
            return any(
                all(value(t, v) == value(c, v) for v in b.tuples) for c in candidates
            )

        for t in self._all_terms(d):
            assert represented(t), (
                f"term {t} of depth {t.depth} is not represented in the block"
            )


def _single_target(
    alg: Algebra,
    target: frozenset[tuple[int, ...]],
    k: int,
    stats: SplitStats,
    *,
    debug: bool = False,
    check_term_repr: bool = False,
    trace: Trace | None = None,
):
    """Run the block loop on one repetition-free target.

    Returns (True, formula) or (False, terminal_block).
    """
    memo: dict[tuple[Term, tuple[int, ...]], int] = {}

    def value(t: Term, v: tuple[int, ...]) -> int:
        key = (t, v)
        r = memo.get(key)
        if r is None:
            if isinstance(t, Var):
                r = v[t.index]
            else:
                r = alg.op(t.symbol).value([value(s, v) for s in t.args])
            memo[key] = r
        return r

    checker = _DebugChecker(alg, target, k, check_term_repr) if debug else None
    initial = Block(
        frozenset(itertools.permutations(range(alg.size), k)),
        (),
        (),
        [Var(i) for i in range(k)],
        (),
        0,
    )
    stats.blocks_created += 1
    pending: deque[Block] = deque([initial])
    disjunct_blocks: list[Block] = []
    while pending:
        b = pending.popleft()
        stats.max_depth = max(stats.max_depth, b.depth())
        if b.tuples <= target:
            disjunct_blocks.append(b)
            stats.full_blocks += 1
            if trace:
                trace(f"full block of {len(b.tuples)} tuples at step {b.step}")
            continue
        if not (b.tuples & target):
            if trace:
                trace(f"disposable block of {len(b.tuples)} tuples at step {b.step}")
            continue
        if b.is_terminal:
            if trace:
                trace(f"terminal mixed block of {len(b.tuples)} tuples")
            if checker:
                checker.check_terminal(b)
            return False, b
        successors = process_mixed_block(alg, b, value, stats)
        if checker:
            for s in successors:
                checker.check_block(s, value)
            if len(successors) > 1:
                checker.check_split(successors)
            checker.check_system(itertools.chain(successors, pending), disjunct_blocks)
        pending.extendleft(reversed(successors))
    if not disjunct_blocks:
        return True, FALSE
    formulas = [b.formula for b in disjunct_blocks]
    return True, (formulas[0] if len(formulas) == 1 else Or(tuple(formulas)))


def splitting_decide(
    alg: Algebra,
    rel: Relation,
    *,
    debug: bool = False,
    check_term_repr: bool = False,
    stats: SplitStats | None = None,
    trace: Trace | None = None,
) -> Decision:
    """Decide definability of `rel` by block splitting.

    Positive answers carry a formula whose extension is exactly `rel`;
    negative answers carry a separating witness pair and subisomorphism.
    """
    rel.check_over(alg)
    if stats is None:
        stats = SplitStats()
    bundle = decompose(rel)
    if not bundle.targets:
        return Definable(FALSE)
    parts = []
    for target in bundle.targets:
        if trace:
            trace(f"target of arity {target.arity} with {len(target.tuples)} tuples")
        ok, payload = _single_target(
            alg,
            target.tuples,
            target.arity,
            stats,
            debug=debug,
            check_term_repr=check_term_repr,
            trace=trace,
        )
        if not ok:
            a, b, gamma = extract_counterexample(alg, payload, target.tuples)
            return NotDefinable(expand(target.pattern, a), expand(target.pattern, b), gamma)
        parts.append((target.pattern, recombine(target.pattern, payload, rel.arity)))
    return Definable(assemble(parts, rel.arity))
