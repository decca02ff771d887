"""JSON file formats for relations, measures, knowledge bases and families.

Every loader accepts either an already-parsed dict or a path to a JSON
file; every dumper returns a plain dict that json.dump can write and the
matching loader can read back. Events are encoded as arrays of state
names, rationals as strings like "3/10" (whatever parse_rational takes).
"""

from __future__ import annotations

import json
from typing import Union

from .core import Event, StateSpace, make_space
from .errors import EmptySpace
from .logic import AtomUniverse, LabelledSpace
from .measures import MASS, POSSIBILITY, PROBABILITY, Measure, mass, possibility, probability
from .preferential import ConditionalBase, conditional_from_formulas, make_base
from .relations import ConfidenceRelation, close_strict_pairs, lift_strict
from .representation import Family

Source = Union[str, dict]


def _load(source: Source) -> dict:
    if isinstance(source, dict):
        return source
    with open(source, encoding="utf-8") as fh:
        return json.load(fh)


def _space(names, max_states) -> StateSpace:
    if max_states is None:
        return make_space(names)
    return make_space(names, max_states)


def _need(doc: dict, key: str, where: str):
    if key not in doc:
        raise ValueError(f"{where} file needs a {key!r} entry")
    return doc[key]


def load_event(space: StateSpace, names) -> Event:
    return space.event(names)


def event_names(event: Event) -> list[str]:
    return list(event.names())


# -- relations --------------------------------------------------------------

def load_relation(source: Source, max_states=None) -> ConfidenceRelation:
    doc = _load(source)
    space = _space(_need(doc, "states", "relation"), max_states)
    pairs = [
        (space.event(a), space.event(b))
        for a, b in _need(doc, "pairs", "relation")
    ]
    if doc.get("strict_only", False):
        return lift_strict(space, close_strict_pairs(space, pairs))
    return ConfidenceRelation.from_weak_pairs(space, pairs)


def dump_relation(rel: ConfidenceRelation) -> dict:
    pairs = [
        [event_names(a), event_names(b)]
        for a, b in rel.weak_pairs()
    ]
    return {"states": list(rel.space.states), "pairs": pairs}


# -- measures ---------------------------------------------------------------

def load_measure(source: Source, max_states=None) -> Measure:
    doc = _load(source)
    space = _space(_need(doc, "states", "measure"), max_states)
    kind = _need(doc, "type", "measure")
    values = _need(doc, "values", "measure")
    if kind in (PROBABILITY, POSSIBILITY):
        if isinstance(values, dict):
            stray = set(values) - set(space.states)
            if stray:
                raise ValueError(f"values for unknown states {sorted(stray)}")
            values = [values.get(s, 0) for s in space.states]
        maker = probability if kind == PROBABILITY else possibility
        return maker(space, values)
    if kind == MASS:
        focal = {}
        for key, v in values.items():
            focal[space.event(key.split(","))] = v
        return mass(space, focal)
    raise ValueError(f"unknown measure type {kind!r}")


def dump_measure(measure: Measure) -> dict:
    if measure.kind == MASS:
        values = {
            ",".join(measure.space.names_of(m)): str(v)
            for m, v in measure.weights
        }
    else:
        values = {
            measure.space.states[m.bit_length() - 1]: str(v)
            for m, v in measure.weights
        }
    return {
        "states": list(measure.space.states),
        "type": measure.kind,
        "values": values,
    }


# -- knowledge bases --------------------------------------------------------

def load_kb(source: Source, max_states=None):
    """Universe and base from a file of rules.

    Two shapes: {"atoms", "rules"} reads the rules over all valuations of
    the atoms; {"states", "atoms", "labels", "rules"} evaluates them over
    the declared states instead. Returns (universe, base).
    """
    doc = _load(source)
    rules = _need(doc, "rules", "knowledge base")
    if "states" in doc:
        universe = LabelledSpace(
            doc["states"], _need(doc, "atoms", "knowledge base"),
            doc.get("labels", {}),
        )
    elif max_states is None:
        universe = AtomUniverse(_need(doc, "atoms", "knowledge base"))
    else:
        universe = AtomUniverse(_need(doc, "atoms", "knowledge base"), max_states)
    conditionals = [
        conditional_from_formulas(
            universe, _need(r, "if", "rule"), _need(r, "then", "rule")
        )
        for r in rules
    ]
    return universe, make_base(universe.space, conditionals)


def _minterm(universe, state: str) -> str:
    if isinstance(universe, LabelledSpace):
        true_atoms = universe.labels[state]
    else:
        true_atoms = {a for i, a in enumerate(universe.atoms) if state[i] == "1"}
    return " & ".join(a if a in true_atoms else f"!{a}" for a in universe.atoms)


def _formula_for(universe, bits: int) -> str:
    if bits == 0:
        return "false"
    space = universe.space
    terms = [f"({_minterm(universe, s)})" for s in space.names_of(bits)]
    text = " | ".join(terms)
    if universe.models(text).bits != bits:
        raise ValueError(
            f"event {space.names_of(bits)} is not definable over these atoms"
        )
    return text


def dump_kb(universe, base: ConditionalBase) -> dict:
    """Rules file for the base; pair events become minterm disjunctions.

    Pairs with an empty violating side are skipped: the loader rejects
    rules that assert nothing, and closing the reloaded base derives them
    again anyway.
    """
    rules = []
    for e, f in base.pairs:
        if f == 0:
            continue
        rules.append({
            "if": _formula_for(universe, e | f),
            "then": _formula_for(universe, e),
        })
    doc: dict = {"atoms": list(universe.atoms)}
    if isinstance(universe, LabelledSpace):
        doc["states"] = list(universe.space.states)
        doc["labels"] = {s: sorted(universe.labels[s]) for s in universe.space.states}
    doc["rules"] = rules
    return doc


# -- families ---------------------------------------------------------------

def load_family(source: Source, max_states=None) -> Family:
    doc = _load(source)
    space = _space(_need(doc, "states", "family"), max_states)
    members = []
    for pairs in _need(doc, "members", "family"):
        members.append(ConfidenceRelation.from_weak_pairs(
            space, [(space.event(a), space.event(b)) for a, b in pairs]
        ))
    if not members:
        raise EmptySpace("a family needs at least one member")
    return Family(space, tuple(members))


def dump_family(family: Family) -> dict:
    return {
        "states": list(family.space.states),
        "members": [dump_relation(m)["pairs"] for m in family.members],
    }
