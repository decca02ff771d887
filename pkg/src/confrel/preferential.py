"""Conditional knowledge bases and their preferential closure.

A conditional "if phi then normally psi" is stored extensionally as a
disjoint pair of events: the worlds of the context where the consequent
holds, and those where it fails. Closing a base applies the five pair
rules below to a fixpoint; every derived pair remembers its rule and
premises so a derivation chain can be replayed. Deriving a pair whose
supporting side is empty is a consistency violation and stops the
closure immediately.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator, Optional

from .core import Event, StateSpace, submasks
from .errors import EmptyAntecedent, ReflexiveAssertion, SpaceMismatch
from .relations import ConfidenceRelation, Verdict

Pair = tuple[int, int]


@dataclass(frozen=True)
class Conditional:
    supporting: Event
    violating: Event

    def __post_init__(self):
        if self.supporting.space != self.violating.space:
            raise SpaceMismatch("conditional halves from different spaces")
        if self.supporting.bits & self.violating.bits:
            raise ValueError("conditional halves must be disjoint")

    @property
    def context(self) -> Event:
        return Event(
            self.supporting.space, self.supporting.bits | self.violating.bits
        )

    def pair(self) -> Pair:
        return (self.supporting.bits, self.violating.bits)


def conditional_from_formulas(universe, antecedent: str, consequent: str,
                              allow_trivial: bool = False) -> Conditional:
    """Normalize two formulas into a disjoint event pair over the universe.

    The antecedent must have at least one model. Assertions the context
    already entails carry no information and are rejected unless
    explicitly allowed.
    """
    ante = universe.models(universe.parse(antecedent))
    cons = universe.models(universe.parse(consequent))
    ctx = ante.bits
    if ctx == 0:
        raise EmptyAntecedent(f"antecedent {antecedent!r} has no models")
    supporting = ctx & cons.bits
    violating = ctx & ~cons.bits
    if violating == 0 and not allow_trivial:
        raise ReflexiveAssertion(
            f"{antecedent!r} already entails {consequent!r}; nothing is asserted"
        )
    space = ante.space
    return Conditional(Event(space, supporting), Event(space, violating))


@dataclass(frozen=True)
class Provenance:
    rule: str
    premises: tuple[Pair, ...]


@dataclass(frozen=True)
class ConditionalBase:
    space: StateSpace
    pairs: tuple[Pair, ...]
    closed: bool = False
    consistent: bool = True
    contradiction: Optional[Pair] = None
    provenance: Optional[dict] = field(default=None, compare=False)

    def __contains__(self, item) -> bool:
        key = item.pair() if isinstance(item, Conditional) else tuple(item)
        return key in set(self.pairs)

    def conditionals(self) -> Iterator[Conditional]:
        for e, f in self.pairs:
            yield Conditional(Event(self.space, e), Event(self.space, f))

    def derivation(self, pair: Pair) -> list[tuple[Pair, Provenance]]:
        """Premise-first replay of how the pair was obtained."""
        if self.provenance is None or pair not in self.provenance:
            raise KeyError(f"no derivation recorded for {pair}")
        steps: list[tuple[Pair, Provenance]] = []
        seen: set[Pair] = set()

        def walk(p: Pair) -> None:
            if p in seen:
                return
            seen.add(p)
            prov = self.provenance[p]
            for parent in prov.premises:
                walk(parent)
            steps.append((p, prov))

        walk(pair)
        return steps


def make_base(space: StateSpace, conditionals) -> ConditionalBase:
    pairs = set()
    for cond in conditionals:
        pairs.add(cond.pair() if isinstance(cond, Conditional) else tuple(cond))
    return ConditionalBase(space, tuple(sorted(pairs)))


# ---------------------------------------------------------------------------
# the five closure rules, in pair form

def rule_cand(p: Pair, q: Pair) -> Optional[Pair]:
    if p[0] | p[1] != q[0] | q[1]:
        return None
    return (p[0] & q[0], p[1] | q[1])


def rule_or(p: Pair, q: Pair) -> Optional[Pair]:
    if p[0] & q[1] or q[0] & p[1]:
        return None
    return (p[0] | q[0], p[1] | q[1])


def rule_rw(p: Pair) -> Iterator[Pair]:
    for x in submasks(p[1]):
        if x:
            yield (p[0] | x, p[1] & ~x)


def rule_cm(p: Pair, q: Pair) -> Optional[Pair]:
    if p[0] | p[1] != q[0] | q[1]:
        return None
    return (p[0] & q[0], p[0] & q[1])


def rule_cut(p: Pair, q: Pair) -> Optional[Pair]:
    if q[0] | q[1] != p[0]:
        return None
    return (q[0], p[1] | q[1])


_BINARY_RULES = (("CAND", rule_cand), ("OR", rule_or), ("CM", rule_cm),
                 ("CUT", rule_cut))


def close_p(base: ConditionalBase) -> ConditionalBase:
    """Least fixpoint of the five rules, with provenance.

    Deterministic: rules fire in a fixed order over sorted snapshots, and
    the first derivation of a pair is the one recorded. A pair with empty
    supporting side marks the base inconsistent and ends the closure.
    """
    if base.closed:
        return base
    pairs: dict[Pair, Provenance] = {}
    bad: Optional[Pair] = None
    for p in base.pairs:
        pairs[p] = Provenance("given", ())
        if p[0] == 0 and bad is None:
            bad = p
    while bad is None:
        snapshot = sorted(pairs)
        fresh: dict[Pair, Provenance] = {}

        def emit(candidate: Optional[Pair], rule: str, premises: tuple) -> None:
            if candidate is None or candidate in pairs or candidate in fresh:
                return
            fresh[candidate] = Provenance(rule, premises)

        for name, rule in _BINARY_RULES:
            for p in snapshot:
                for q in snapshot:
                    emit(rule(p, q), name, (p, q))
        for p in snapshot:
            for candidate in rule_rw(p):
                emit(candidate, "RW", (p,))
        if not fresh:
            break
        for candidate, prov in fresh.items():
            pairs[candidate] = prov
            if candidate[0] == 0:
                bad = candidate
                break
    return ConditionalBase(
        base.space,
        tuple(sorted(pairs)),
        closed=True,
        consistent=bad is None,
        contradiction=bad,
        provenance=pairs,
    )


def entails(base: ConditionalBase, query: Conditional) -> bool:
    if query.context.bits == 0:
        raise EmptyAntecedent("query antecedent has no models")
    closed = base if base.closed else close_p(base)
    return query.pair() in set(closed.pairs)


# ---------------------------------------------------------------------------
# round trips between bases and relations

def strict_disjoint_pairs(rel: ConfidenceRelation) -> set[Pair]:
    out = set()
    full = rel.space.full_mask
    for a in range(rel.space.size):
        for b in submasks(full & ~a):
            if rel.s(a, b):
                out.add((a, b))
    return out


def _pair_events(space, *pairs) -> tuple:
    return tuple(
        (Event(space, e), Event(space, f)) for e, f in pairs
    )


def roundtrip_kb(base: ConditionalBase) -> dict[str, Verdict]:
    """Check that a closed base's pairs form a strict acceptance order on
    disjoint events.

    Ordering instances that would leave the asserting context cannot be
    expressed by any conditional base, so the O check quantifies within
    each pair's own context: the supporting side may absorb part of the
    violating side and the rest may shrink. Transitivity and the
    acceptance axiom are checked on pair membership directly.
    """
    closed = base if base.closed else close_p(base)
    space = closed.space
    members = set(closed.pairs)
    by_support: dict[int, list[Pair]] = {}
    for p in members:
        by_support.setdefault(p[0], []).append(p)

    verdicts: dict[str, Verdict] = {}

    witness = None
    for e, f in sorted(members):
        if e == f:
            witness = _pair_events(space, (e, f))
            break
    verdicts["IR"] = Verdict("IR", witness is None, witness)

    witness = None
    for a, b in sorted(members):
        for b2, c in sorted(by_support.get(b, ())):
            if a & c == 0 and (a, c) not in members:
                witness = _pair_events(space, (a, b), (b, c), (a, c))
                break
        if witness:
            break
    verdicts["T"] = Verdict("T", witness is None, witness)

    witness = None
    for a, b in sorted(members):
        for x in submasks(b):
            for b2 in submasks(b & ~x):
                if (a | x, b2) not in members:
                    witness = _pair_events(space, (a, b), (a | x, b2))
                    break
            if witness:
                break
        if witness:
            break
    verdicts["O"] = Verdict("O", witness is None, witness)

    witness = None
    for p in sorted(members):
        for q in sorted(members):
            conclusion = rule_cand(p, q)
            if conclusion is not None and conclusion not in members:
                witness = _pair_events(space, p, q, conclusion)
                break
        if witness:
            break
    verdicts["Ac"] = Verdict("Ac", witness is None, witness)

    witness = None
    for e, f in sorted(members):
        if e == 0:
            witness = _pair_events(space, (e, f))
            break
    verdicts["CP"] = Verdict("CP", witness is None, witness)
    return verdicts


def roundtrip_relation(rel: ConfidenceRelation) -> dict[str, Verdict]:
    """Check that the strict disjoint part of a relation is stable under
    the five closure rules and violates no consistency requirement."""
    space = rel.space
    members = strict_disjoint_pairs(rel)
    ordered = sorted(members)
    verdicts: dict[str, Verdict] = {}

    for name, rule in _BINARY_RULES:
        witness = None
        for p in ordered:
            for q in ordered:
                conclusion = rule(p, q)
                if conclusion is not None and conclusion not in members:
                    witness = _pair_events(space, p, q, conclusion)
                    break
            if witness:
                break
        verdicts[name] = Verdict(name, witness is None, witness)

    witness = None
    for p in ordered:
        for conclusion in rule_rw(p):
            if conclusion not in members:
                witness = _pair_events(space, p, conclusion)
                break
        if witness:
            break
    verdicts["RW"] = Verdict("RW", witness is None, witness)

    witness = None
    for e, f in ordered:
        if e == 0:
            witness = _pair_events(space, (e, f))
            break
    verdicts["CP"] = Verdict("CP", witness is None, witness)
    return verdicts


def roundtrip_check(subject) -> dict[str, Verdict]:
    if isinstance(subject, ConditionalBase):
        return roundtrip_kb(subject)
    if isinstance(subject, ConfidenceRelation):
        return roundtrip_relation(subject)
    raise TypeError("expected a conditional base or a confidence relation")
