"""Exception types shared across the package."""


class ConfrelError(Exception):
    """Base class for all errors raised by this package."""


class DuplicateState(ConfrelError):
    pass


class EmptySpace(ConfrelError):
    pass


class TooLarge(ConfrelError):
    """A state space exceeds the cap for the requested operation."""


class SpaceMismatch(ConfrelError):
    """Two values from different state spaces were combined."""


class KindMismatch(ConfrelError):
    """A measure was evaluated with an incompatible set-function kind."""


class ZeroDenominator(ConfrelError):
    """Conditioning on a context whose measure value is zero."""


class StrictAxiomViolation(ConfrelError):
    """A strict order handed to lift_strict fails one of its preconditions.

    Carries the failed property name and a witness tuple of events.
    """

    def __init__(self, axiom, witness):
        self.axiom = axiom
        self.witness = witness
        super().__init__(f"strict order violates {axiom} at {witness}")


class FormulaSyntaxError(ConfrelError):
    """Malformed formula text; knows where and what was expected."""

    def __init__(self, position, expected, found):
        self.position = position
        self.expected = tuple(sorted(expected))
        self.found = found
        super().__init__(
            f"syntax error at position {position}: expected one of "
            f"{', '.join(self.expected)}, found {found!r}"
        )


class UnknownAtom(ConfrelError):
    pass


class EmptyAntecedent(ConfrelError):
    """A conditional assertion whose antecedent has no models."""


class ReflexiveAssertion(ConfrelError):
    """A conditional assertion that normalizes to (E, empty set)."""


class NotAcceptance(ConfrelError):
    """Operation requires an acceptance preorder; carries failing verdicts."""

    def __init__(self, verdicts):
        self.verdicts = verdicts
        failing = [v.axiom for v in verdicts if not v.holds]
        super().__init__(f"relation is not an acceptance preorder (fails {failing})")


class SharedEquivalenceViolated(ConfrelError):
    """Family members disagree on an equivalence pair."""

    def __init__(self, pair, members):
        self.pair = pair
        self.members = members
        super().__init__(
            f"members {members} disagree on equivalence of {pair}"
        )
