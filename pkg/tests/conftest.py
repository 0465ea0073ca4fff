"""Shared test helpers."""

from fractions import Fraction


class ScriptedElection:
    """Election hook that follows a predetermined list of option indices.

    Records every choice point (tag, options, picked index) so a driver can
    enumerate the engine's decision tree; once the script runs out, index 0
    is taken. `probability` is the likelihood of the followed path under
    uniform elections.
    """

    def __init__(self, script=()):
        self.script = list(script)
        self.log = []
        self.probability = Fraction(1)

    def __call__(self, tag, options):
        index = self.script.pop(0) if self.script else 0
        self.log.append((tag, tuple(options), index))
        self.probability *= Fraction(1, len(options))
        return options[index]


CHAIN_POSITIONS = ((0.0, 0.0), (90.0, 0.0), (180.0, 0.0))  # 0-1 and 1-2 in range only
PAIR_POSITIONS = ((0.0, 0.0), (50.0, 0.0))
