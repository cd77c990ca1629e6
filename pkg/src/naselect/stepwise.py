"""Step-by-step trajectory construction against an adversary revealing the disturbance.

The controller never sees the disturbance directly.  At step i the adversary
extends the revealed prefix up to the partition's i-th stamp; the controller
reconstructs some admissible disturbance matching it and picks a trajectory
that is admissible for that disturbance and agrees with its earlier picks.
The selection multifunction for every step is the greatest chain-non-
anticipative multiselector; its non-emptiness is exactly what keeps the
procedure from getting stuck.
"""

from __future__ import annotations

import random
import sys
from dataclasses import dataclass, field
from typing import Iterator, Protocol, TextIO

from .errors import (
    AdversaryError,
    BudgetExceededError,
    InfeasibleError,
    ProcedureStuckError,
    ValidationError,
)
from .multifunction import Instance, Multifunction, is_total, mf_le
from .nonanticipation import compose_chain
from .signals import RestrictionKey, Signal, equiv_class, restriction_set
from .timebase import Partition, partition_to_chain


class Adversary(Protocol):
    """Reveals the disturbance prefix by prefix.

    `extend` returns the tokens between the already revealed prefix and the
    step's target length; every revealed prefix must stay consistent with at
    least one admissible disturbance.
    """

    def extend(self, step: int, revealed: RestrictionKey, new_len: int) -> RestrictionKey: ...


@dataclass(frozen=True)
class ScriptedAdversary:
    """Plays one fixed disturbance."""

    signal: Signal

    def extend(self, step: int, revealed: RestrictionKey, new_len: int) -> RestrictionKey:
        return self.signal.cells[len(revealed) : new_len]


def legal_extensions(inst: Instance, revealed: RestrictionKey, new_len: int) -> tuple[RestrictionKey, ...]:
    """Sorted distinct extensions realizable by some admissible disturbance."""
    opts = {
        s.cells[len(revealed) : new_len]
        for s in inst.omega.signals
        if s.cells[: len(revealed)] == revealed
    }
    return tuple(sorted(opts))


@dataclass
class InteractiveAdversary:
    """Line-oriented adversary on a text stream pair.

    Each step prints the legal extensions (one `#k  tokens` line each) to
    `err` and reads one line from `infile`: either `#k` picking an option or
    the literal comma-joined tokens.
    """

    instance: Instance
    infile: TextIO = field(default_factory=lambda: sys.stdin)
    err: TextIO = field(default_factory=lambda: sys.stderr)

    def extend(self, step: int, revealed: RestrictionKey, new_len: int) -> RestrictionKey:
        opts = legal_extensions(self.instance, revealed, new_len)
        self.err.write(f"step {step}: extend the disturbance to {new_len} cells\n")
        for k, o in enumerate(opts):
            self.err.write(f"  #{k}  {','.join(o)}\n")
        self.err.flush()
        line = self.infile.readline()
        if not line:
            raise AdversaryError(f"input ended before step {step}")
        line = line.strip()
        if line.startswith("#"):
            try:
                return opts[int(line[1:])]
            except (ValueError, IndexError):
                raise AdversaryError(f"no extension option {line!r} at step {step}") from None
        for o in opts:
            if ",".join(o) == line:
                return o
        raise AdversaryError(f"line {line!r} matches no legal extension at step {step}")


@dataclass(frozen=True)
class Step:
    """One control step: what was revealed, which disturbance and trajectory were picked."""

    index: int
    revealed: RestrictionKey
    omega: int
    h: int
    omega_consistent: bool
    h_consistent: bool
    h_admissible: bool


@dataclass(frozen=True)
class StepTrace:
    delta: Partition
    steps: tuple[Step, ...]
    final_h: int

    @property
    def consistent(self) -> bool:
        return all(s.omega_consistent and s.h_consistent and s.h_admissible for s in self.steps)


def run_stepwise(
    a: Multifunction,
    delta: Partition,
    adversary: Adversary,
    policy: str = "lex",
    seed: int = 0,
    check: bool = True,
    on_step=None,
) -> StepTrace:
    """Drive one step-by-step run.

    With `check` the conditions are verified first and an empty-valued
    composite raises `InfeasibleError` naming the offending disturbances.
    Without it the run proceeds until it completes or genuinely gets stuck,
    so success over every revelation path is exactly feasibility, observed
    rather than assumed.  `policy` picks among
    admissible trajectories: "lex" for the smallest index, "random" for a
    seeded draw.  `on_step` is called with each finished `Step`.
    """
    if policy not in ("lex", "random"):
        raise ValidationError(f"unknown selector policy {policy!r}")
    inst = a.instance
    chain = partition_to_chain(inst.grid, delta)
    phi = compose_chain(a, chain)
    if check and not is_total(phi):
        empty = tuple(i for i, v in enumerate(phi.values) if not v)
        names = ", ".join(inst.omega.names[i] for i in empty)
        raise InfeasibleError(
            f"conditions are infeasible: composed multiselector is empty at {names}",
            empty_omegas=empty,
            witness=phi,
        )
    rng = random.Random(seed)
    revealed: RestrictionKey = ()
    steps: list[Step] = []
    prev_w: int | None = None
    prev_h: int | None = None
    prev_len = 0
    for i, p in enumerate(chain.prefixes, start=1):
        ext = adversary.extend(i, revealed, p.len)
        if len(ext) != p.len - len(revealed):
            raise AdversaryError(
                f"step {i}: expected {p.len - len(revealed)} cells, got {len(ext)}"
            )
        revealed = revealed + tuple(ext)
        matches = [
            w for w, s in enumerate(inst.omega.signals) if s.cells[: p.len] == revealed
        ]
        if not matches:
            raise AdversaryError(f"step {i}: revealed prefix {revealed} matches no disturbance")
        w = matches[0]
        if prev_h is None:
            admissible = sorted(phi.values[w])
        else:
            prev_key = inst.z.signals[prev_h].cells[:prev_len]
            admissible = sorted(
                j for j in phi.values[w] if inst.z.signals[j].cells[:prev_len] == prev_key
            )
        if not admissible:
            raise ProcedureStuckError(
                f"step {i}: no admissible trajectory for {inst.omega.names[w]}", step=i, omega=w
            )
        h = admissible[0] if policy == "lex" else rng.choice(admissible)
        omega_ok = prev_w is None or (
            inst.omega.signals[w].cells[:prev_len] == inst.omega.signals[prev_w].cells[:prev_len]
        )
        h_ok = prev_h is None or (
            inst.z.signals[h].cells[:prev_len] == inst.z.signals[prev_h].cells[:prev_len]
        )
        step = Step(i, revealed, w, h, omega_ok, h_ok, h in phi.values[w] and h in a.values[w])
        steps.append(step)
        if on_step is not None:
            on_step(step)
        prev_w, prev_h, prev_len = w, h, p.len
    assert prev_h is not None
    return StepTrace(delta, tuple(steps), prev_h)


def run_exhaustive(
    a: Multifunction,
    delta: Partition,
    policy: str = "lex",
    seed: int = 0,
    check: bool = False,
) -> dict[int, StepTrace]:
    """One scripted run per admissible disturbance; raises if any path gets stuck."""
    inst = a.instance
    return {
        w: run_stepwise(a, delta, ScriptedAdversary(inst.omega.signals[w]), policy, seed, check)
        for w in range(len(inst.omega))
    }


def validate_trace(a: Multifunction, trace: StepTrace) -> list[str]:
    """Re-derive every consistency condition of a finished trace; empty means valid."""
    inst = a.instance
    chain = partition_to_chain(inst.grid, trace.delta)
    phi = compose_chain(a, chain)
    problems: list[str] = []
    if len(trace.steps) != len(chain.prefixes):
        return [f"trace has {len(trace.steps)} steps for {len(chain.prefixes)} control steps"]
    prev = None
    prev_len = 0
    for step, p in zip(trace.steps, chain.prefixes):
        if inst.omega.signals[step.omega].cells[: p.len] != step.revealed:
            problems.append(f"step {step.index}: picked disturbance does not match the revealed prefix")
        if step.h not in phi.values[step.omega]:
            problems.append(f"step {step.index}: trajectory outside the selection multifunction")
        if step.h not in a.values[step.omega]:
            problems.append(f"step {step.index}: trajectory outside the original multifunction")
        if prev is not None:
            if (
                inst.omega.signals[step.omega].cells[:prev_len]
                != inst.omega.signals[prev.omega].cells[:prev_len]
            ):
                problems.append(f"step {step.index}: disturbance disagrees with the previous step")
            if (
                inst.z.signals[step.h].cells[:prev_len]
                != inst.z.signals[prev.h].cells[:prev_len]
            ):
                problems.append(f"step {step.index}: trajectory disagrees with the previous step")
        prev, prev_len = step, p.len
    if trace.steps and trace.final_h != trace.steps[-1].h:
        problems.append("final trajectory differs from the last step's pick")
    return problems


def enumerate_omega_delta(inst: Instance, delta: Partition) -> Iterator[tuple[int, ...]]:
    """All disturbance tuples consistent across the partition's prefixes.

    A tuple fixes one disturbance per control step such that consecutive
    entries agree on the earlier step's prefix.  Generated by choosing the
    last entry and walking backwards through equivalence classes; yielded in
    ascending index order.
    """
    chain = partition_to_chain(inst.grid, delta)
    n = len(chain.prefixes)

    def extend(i: int, suffix: tuple[int, ...]) -> Iterator[tuple[int, ...]]:
        if i == 0:
            yield suffix
            return
        for w in sorted(equiv_class(inst.omega, suffix[0], chain.prefixes[i - 1])):
            yield from extend(i - 1, (w,) + suffix)

    for last in range(len(inst.omega)):
        yield from extend(n - 1, (last,))


@dataclass(frozen=True)
class WitnessViolation:
    kind: str  # "not-multiselector" | "empty-value" | "restriction-mismatch"
    step: int
    omegas: tuple[int, ...]
    detail: str


@dataclass(frozen=True)
class WitnessReport:
    ok: bool
    violation: WitnessViolation | None = None


def verify_witness(
    phis: list[Multifunction],
    delta: Partition,
    a: Multifunction,
    max_tuples: int = 10**6,
) -> WitnessReport:
    """Check a tuple of per-step multifunctions against the step-by-step conditions.

    Every entry must sit below `a`; for every consistent disturbance tuple the
    selected value sets must be non-empty and have matching restriction sets
    on each step's prefix.  The first violation, in enumeration order, is
    reported.
    """
    inst = a.instance
    chain = partition_to_chain(inst.grid, delta)
    n = len(chain.prefixes)
    if len(phis) != n:
        raise ValidationError(f"expected {n} multifunctions, got {len(phis)}")
    for i, phi in enumerate(phis, start=1):
        if not mf_le(phi, a):
            return WitnessReport(
                False, WitnessViolation("not-multiselector", i, (), "entry not below the target")
            )

    keyset_cache: dict[tuple[int, int, int], frozenset] = {}

    def keys_at(step: int, phi_index: int, w: int) -> frozenset:
        k = (step, phi_index, w)
        if k not in keyset_cache:
            keyset_cache[k] = restriction_set(
                inst.z, phis[phi_index].values[w], chain.prefixes[step]
            )
        return keyset_cache[k]

    count = 0
    for tup in enumerate_omega_delta(inst, delta):
        count += 1
        if count > max_tuples:
            raise BudgetExceededError(f"more than {max_tuples} disturbance tuples")
        for i, w in enumerate(tup):
            if not phis[i].values[w]:
                return WitnessReport(
                    False,
                    WitnessViolation(
                        "empty-value", i + 1, tup, f"empty value at {inst.omega.names[w]}"
                    ),
                )
        for i in range(n - 1):
            if keys_at(i, i, tup[i]) != keys_at(i, i + 1, tup[i + 1]):
                return WitnessReport(
                    False,
                    WitnessViolation(
                        "restriction-mismatch",
                        i + 1,
                        tup,
                        f"restriction sets differ between steps {i + 1} and {i + 2}",
                    ),
                )
    return WitnessReport(True)
