"""Brute-force ground truth for maximality, fixed-point, and feasibility claims.

Everything here enumerates rather than projects, so it can certify the fast
paths on desk-size instances.  The multiselector enumeration walks per-
disturbance subset assignments depth first, pruning a branch as soon as one
prefix equivalence class is provably violated; the visited stream is exactly
the set of chain-non-anticipative multiselectors.  Budgets cap the visited
assignments and are explicit errors, never silent truncation.
"""

from __future__ import annotations

import itertools
import random
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Iterator

from .errors import BudgetExceededError, ValidationError
from .multifunction import Instance, Multifunction
from .nonanticipation import meet_of_projections, project
from .timebase import PrefixChain


@dataclass(frozen=True)
class EnumBudget:
    """Work caps: subset assignments tried during enumeration, disturbance tuples walked."""

    max_multiselectors: int = 2**22
    max_tuples: int = 10**6

    def __post_init__(self) -> None:
        if self.max_multiselectors < 1 or self.max_tuples < 1:
            raise ValidationError("budgets must be positive")


DEFAULT_BUDGET = EnumBudget()


def _subsets_popcount_desc(elems: list[int]) -> list[frozenset[int]]:
    return [
        frozenset(c)
        for r in range(len(elems), -1, -1)
        for c in itertools.combinations(elems, r)
    ]


class _SearchPlan:
    """Static data for the pruned enumeration of chain-non-anticipative multiselectors.

    Disturbances are visited in lexicographic signal order, which makes every
    prefix equivalence class a contiguous run: a member only ever needs to
    match the restriction keyset of its class's first member, already
    assigned.  Restriction keys are interned to small ints per prefix.
    """

    def __init__(self, inst: Instance, h: PrefixChain, values: tuple[frozenset[int], ...]):
        inst.grid.check_prefix(h.prefixes[-1])
        self.inst = inst
        self.perm = sorted(range(len(inst.omega)), key=lambda w: inst.omega.signals[w].cells)
        n = len(self.perm)
        self.subsets = [_subsets_popcount_desc(sorted(values[w])) for w in self.perm]
        # constraints[k] lists (earlier position, prefix slot) pairs to match
        self.constraints: list[list[tuple[int, int]]] = [[] for _ in range(n)]
        key_ids = []
        for p in h.prefixes:
            ids: dict[tuple, int] = {}
            key_ids.append(
                tuple(ids.setdefault(s.cells[: p.len], len(ids)) for s in inst.z.signals)
            )
            first_of_class: dict[tuple, int] = {}
            for k, w in enumerate(self.perm):
                key = inst.omega.signals[w].cells[: p.len]
                if key in first_of_class:
                    self.constraints[k].append((first_of_class[key], len(key_ids) - 1))
                else:
                    first_of_class[key] = k
        needed: list[set[int]] = [set() for _ in range(n)]
        for k, cons in enumerate(self.constraints):
            for rep, slot in cons:
                needed[k].add(slot)
                needed[rep].add(slot)
        # keysets[k][slot][subset index] -> interned restriction keyset
        self.keysets: list[dict[int, list[frozenset[int]]]] = []
        for k in range(n):
            per: dict[int, list[frozenset[int]]] = {}
            for slot in sorted(needed[k]):
                kid = key_ids[slot]
                per[slot] = [frozenset(kid[j] for j in s) for s in self.subsets[k]]
            self.keysets.append(per)

    def assemble(self, chosen: list[int]) -> tuple[frozenset[int], ...]:
        out: list[frozenset[int]] = [frozenset()] * len(self.perm)
        for pos, w in enumerate(self.perm):
            out[w] = self.subsets[pos][chosen[pos]]
        return tuple(out)


def _walk(
    plan: _SearchPlan, budget: EnumBudget, first_indices: range | list[int] | None = None
) -> Iterator[tuple[frozenset[int], ...]]:
    n = len(plan.perm)
    chosen = [0] * n
    nodes = 0

    def rec(k: int) -> Iterator[tuple[frozenset[int], ...]]:
        nonlocal nodes
        if k == n:
            yield plan.assemble(chosen)
            return
        indices = first_indices if k == 0 and first_indices is not None else range(
            len(plan.subsets[k])
        )
        for si in indices:
            nodes += 1
            if nodes > budget.max_multiselectors:
                raise BudgetExceededError(
                    f"enumeration exceeded {budget.max_multiselectors} subset assignments"
                )
            if all(
                plan.keysets[k][slot][si] == plan.keysets[rep][slot][chosen[rep]]
                for rep, slot in plan.constraints[k]
            ):
                chosen[k] = si
                yield from rec(k + 1)
        return

    return rec(0)


def enumerate_na_multiselectors(
    a: Multifunction, h: PrefixChain, budget: EnumBudget = DEFAULT_BUDGET
) -> Iterator[Multifunction]:
    """Every chain-non-anticipative multiselector of `a` exactly once, the all-empty one included.

    Per-disturbance subsets are tried with larger sets first, so a running
    join saturates early.
    """
    plan = _SearchPlan(a.instance, h, a.values)

    def gen() -> Iterator[Multifunction]:
        for values in _walk(plan, budget):
            yield Multifunction(a.instance, values)

    return gen()


def brute_greatest(
    a: Multifunction,
    h: PrefixChain,
    budget: EnumBudget = DEFAULT_BUDGET,
    threads: int = 1,
) -> Multifunction:
    """Pointwise join of all chain-non-anticipative multiselectors of `a`.

    The meet of single-prefix projections bounds the join from above, so the
    single-thread walk stops as soon as the running join reaches it.  With
    several threads the search space is partitioned by the first visited
    disturbance's subset; joins commute, so the result stays deterministic.
    """
    inst = a.instance
    bound = meet_of_projections(a, h).values
    n = len(a.values)
    plan = _SearchPlan(inst, h, a.values)
    if threads <= 1:
        join = [frozenset()] * n
        for values in _walk(plan, budget):
            join = [u | v for u, v in zip(join, values)]
            if tuple(join) == bound:
                break
        return Multifunction(inst, tuple(join))

    def worker(slot: int) -> list[frozenset[int]]:
        join = [frozenset()] * n
        local = _SearchPlan(inst, h, a.values)
        for values in _walk(local, budget, list(range(len(local.subsets[0])))[slot::threads]):
            join = [u | v for u, v in zip(join, values)]
        return join

    with ThreadPoolExecutor(max_workers=threads) as pool:
        parts = list(pool.map(worker, range(threads)))
    join = [frozenset()] * n
    for part in parts:
        join = [u | v for u, v in zip(join, part)]
    return Multifunction(inst, tuple(join))


@dataclass(frozen=True)
class FixpointRun:
    result: Multifunction
    sweeps: int  # total sweeps, the final unchanged one included
    changed_sweeps: int  # sweeps that shrank at least one value set


def fixpoint_iterate(
    a: Multifunction,
    h: PrefixChain,
    schedule: str = "descending",
    seed: int = 0,
    max_sweeps: int = 64,
) -> FixpointRun:
    """Sweep the single-prefix projections in a fixed order until nothing changes.

    Schedules: "descending" (largest prefix first, the order that needs only
    one changing sweep), "ascending", or a seeded "shuffled" order.  The
    stable point is the same for every schedule.
    """
    a.instance.grid.check_prefix(h.prefixes[-1])
    order = sorted(h.prefixes)
    if schedule == "descending":
        order = order[::-1]
    elif schedule == "shuffled":
        random.Random(seed).shuffle(order)
    elif schedule != "ascending":
        raise ValidationError(f"unknown schedule {schedule!r}")
    cur = a
    sweeps = 0
    changed = 0
    while True:
        sweeps += 1
        if sweeps > max_sweeps:
            raise BudgetExceededError(f"no fixed point within {max_sweeps} sweeps")
        nxt = cur
        for p in order:
            nxt = project(nxt, p)
        if nxt.values == cur.values:
            return FixpointRun(cur, sweeps, changed)
        changed += 1
        cur = nxt
