"""Non-anticipativity: predicates, the prefix projection, chain composition, feasibility.

A multifunction is non-anticipative at a prefix when disturbances that agree
on the prefix receive value sets with identical restriction sets there.  The
projection at a prefix keeps, in each value set, exactly the trajectories
whose restriction survives intersecting the restriction sets over the whole
equivalence class of the disturbance; it is the greatest multiselector that
is non-anticipative at that prefix.

Composing projections along a chain of prefixes, largest first, yields the
greatest multiselector non-anticipative at every prefix of the chain.  The
descending order matters: projections at different prefixes do not commute,
and the projection is not monotone in the prefix.  Feasibility of a
partition's step-by-step conditions reduces to the composed multiselector
keeping every value set non-empty.

Emptiness is legal everywhere and propagates silently; it is a diagnostic
signal surfaced by `dom`/`is_total`, not an error.
"""

from __future__ import annotations

from dataclasses import dataclass

from .multifunction import Instance, Multifunction, is_total, mf_meet
from .signals import RestrictionKey, signal_classes
from .timebase import (
    Partition,
    Prefix,
    PrefixChain,
    partition_to_chain,
)


@dataclass(frozen=True)
class NaWitness:
    """A violating pair: two disturbances agreeing on `prefix` whose value sets differ there.

    `key` is a restriction present for exactly one of them; `key_holder` says which.
    """

    prefix: Prefix
    omega: int
    omega_prime: int
    key: RestrictionKey
    key_holder: int


@dataclass(frozen=True)
class NaReport:
    holds: bool
    witness: NaWitness | None = None

    def __post_init__(self) -> None:
        assert self.holds == (self.witness is None)

    def __bool__(self) -> bool:
        return self.holds


def _restriction_keysets(a: Multifunction, members, key_of) -> dict[int, frozenset]:
    return {w: frozenset(key_of[j] for j in a.values[w]) for w in members}


def is_prefix_na(a: Multifunction, p: Prefix) -> NaReport:
    """Check non-anticipativity at one prefix.

    On failure the witness is the lexicographically smallest violating pair
    of disturbance indices, with the smallest restriction key present on one
    side only.
    """
    inst = a.instance
    inst.grid.check_prefix(p)
    key_of = [s.cells[: p.len] for s in inst.z.signals]
    best: tuple[int, int] | None = None
    best_sets: dict[int, frozenset] = {}
    for cls in signal_classes(inst.omega, p):
        if len(cls) == 1:
            continue
        keysets = _restriction_keysets(a, cls, key_of)
        for pos, w in enumerate(cls):
            found = None
            for w2 in cls[pos + 1 :]:
                if keysets[w] != keysets[w2]:
                    found = (w, w2)
                    break
            if found is not None:
                if best is None or found < best:
                    best = found
                    best_sets = keysets
                break
    if best is None:
        return NaReport(True)
    w, w2 = best
    key = min(best_sets[w] ^ best_sets[w2])
    holder = w if key in best_sets[w] else w2
    return NaReport(False, NaWitness(p, w, w2, key, holder))


def is_chain_na(a: Multifunction, h: PrefixChain) -> NaReport:
    """Non-anticipativity at every prefix of the chain; the first failing prefix is reported."""
    a.instance.grid.check_prefix(h.prefixes[-1])
    for p in h.prefixes:
        report = is_prefix_na(a, p)
        if not report.holds:
            return report
    return NaReport(True)


def project(a: Multifunction, p: Prefix) -> Multifunction:
    """Greatest multiselector of `a` that is non-anticipative at `p`.

    Each value set keeps the trajectories whose restriction at `p` lies in
    the intersection of the restriction sets over the disturbance's
    equivalence class.  The intersection is computed once per class and
    reused for all members.
    """
    inst = a.instance
    inst.grid.check_prefix(p)
    key_of = [s.cells[: p.len] for s in inst.z.signals]
    out = list(a.values)
    for cls in signal_classes(inst.omega, p):
        if len(cls) == 1:
            continue
        keysets = [frozenset(key_of[j] for j in a.values[w]) for w in cls]
        core = frozenset.intersection(*keysets)
        for w, keys in zip(cls, keysets):
            if keys != core:
                out[w] = frozenset(j for j in a.values[w] if key_of[j] in core)
    return Multifunction(inst, tuple(out))


def compose_chain(a: Multifunction, h: PrefixChain) -> Multifunction:
    """Project along the chain, largest prefix first: the greatest chain-non-anticipative multiselector.

    Exactly one projection pass per chain element; descending order is what
    makes a single sweep sufficient.
    """
    a.instance.grid.check_prefix(h.prefixes[-1])
    out = a
    for p in reversed(h.prefixes):
        out = project(out, p)
    return out


def meet_of_projections(a: Multifunction, h: PrefixChain) -> Multifunction:
    """Entrywise meet of the single-prefix projections: an upper bound diagnostic.

    Every chain-non-anticipative multiselector of `a` sits below this meet,
    so a non-total meet rules out non-empty-valued chain-non-anticipative
    multiselectors altogether.
    """
    a.instance.grid.check_prefix(h.prefixes[-1])
    return mf_meet(project(a, p) for p in h.prefixes)


def _lcp_len(inst: Instance, w1: int, w2: int) -> int:
    s1 = inst.omega.signals[w1].cells
    s2 = inst.omega.signals[w2].cells
    n = 0
    for a, b in zip(s1, s2):
        if a != b:
            break
        n += 1
    return n


def stm_set(inst: Instance, w1: int, w2: int) -> frozenset[Prefix]:
    """All prefixes on which the two disturbances agree."""
    return frozenset(Prefix(k) for k in range(1, _lcp_len(inst, w1, w2) + 1))


def stmb(inst: Instance, w1: int, w2: int) -> Prefix | None:
    """The longest prefix of agreement, or None when the signals differ already on cell 0."""
    n = _lcp_len(inst, w1, w2)
    return Prefix(n) if n else None


def canonical_chain(inst: Instance) -> PrefixChain:
    """Sorted, deduplicated longest agreement prefixes over all disturbance pairs.

    Identical pairs contribute the full prefix, so the chain is never empty;
    pairs that disagree on cell 0 contribute nothing.
    """
    lens = set()
    count = len(inst.omega)
    for i in range(count):
        for j in range(i, count):
            lens.add(_lcp_len(inst, i, j))
    lens.discard(0)
    return PrefixChain(tuple(Prefix(k) for k in sorted(lens)))


def greatest_na(a: Multifunction) -> Multifunction:
    """Greatest multiselector of `a` non-anticipative at every prefix of the grid.

    With finitely many disturbances, composing projections along the
    canonical chain is enough; prefixes outside it never separate any pair.
    """
    return compose_chain(a, canonical_chain(a.instance))


def feasible(a: Multifunction, delta: Partition) -> tuple[bool, Multifunction | None]:
    """Decide the step-by-step conditions of `a` under `delta`.

    Returns (True, witness) with the greatest chain-non-anticipative
    multiselector when it is non-empty-valued, else (False, None).  The
    witness can serve as every step's selection multifunction.
    """
    g = compose_chain(a, partition_to_chain(a.instance.grid, delta))
    if is_total(g):
        return True, g
    return False, None
