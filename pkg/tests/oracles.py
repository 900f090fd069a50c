"""Independent brute-force oracles used to freeze expected values.

Nothing here calls the config-set compiler, the tree enumerator or the
exploration kernel.
"""

import itertools

from pnpl.feature_model import compile_constraints
from pnpl.formula import evaluate


def all_assignments(features):
    features = list(features)
    for bits in itertools.product((False, True), repeat=len(features)):
        yield dict(zip(features, bits))


def brute_valid_configurations(fm):
    c = compile_constraints(fm)
    return [a for a in all_assignments(fm.features) if evaluate(c, a)]


def brute_models(f, fm):
    """Valid configurations satisfying f, as frozensets of selected features."""
    c = compile_constraints(fm)
    return {
        frozenset(k for k, v in a.items() if v)
        for a in all_assignments(fm.features)
        if evaluate(c, a) and evaluate(f, a)
    }


def brute_sat(f, fm):
    c = compile_constraints(fm)
    return any(evaluate(c, a) and evaluate(f, a) for a in all_assignments(fm.features))


def selected(a):
    return frozenset(k for k, v in a.items() if v)
