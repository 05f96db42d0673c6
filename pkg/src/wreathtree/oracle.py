"""Ground truth by direct simulation of the tree action.

Nothing in this module looks at incidence matrices or streams: levels
of the tree are enumerated word by word, which makes these functions
slow but independent cross-checks for the closed-form analysis.
"""

from __future__ import annotations

from dataclasses import dataclass

from .automaton import (
    AbelianLabels,
    AlphabetMismatchError,
    AutomatonError,
    InitialAutomaton,
    validate_cyclic,
)
from .modmath import abelian_vector

DEFAULT_WORD_CAP = 10**6


class LevelTooLargeError(AutomatonError):
    """A level enumeration would exceed the word cap."""


@dataclass(frozen=True)
class LevelOrbitReport:
    level: int
    orbit_count: int
    max_orbit: int
    transitive: bool


def _level_tables(g: InitialAutomaton, n: int, max_words: int, with_images: bool):
    """Images and section states for all k^n words, in lexicographic order.

    Words are their base-k indices; level j+1 tables come from level j
    by appending one symbol, so the whole run costs O(k^n).
    """
    k = g.k
    if k**n > max_words:
        raise LevelTooLargeError(
            f"level {n} holds {k ** n} words, above the cap of {max_words}"
        )
    delta, out = g.automaton.delta, g.automaton.out
    img = [0] if with_images else None
    states = [g.initial]
    for _ in range(n):
        if with_images:
            img = [
                img[u] * k + out[states[u]][a]
                for u in range(len(states))
                for a in range(k)
            ]
        states = [delta[s][a] for s in states for a in range(k)]
    return img, states


def level_transitive(
    g: InitialAutomaton, n: int, max_words: int = DEFAULT_WORD_CAP
) -> LevelOrbitReport:
    """Orbit structure of g on the k^n words of length n.

    Builds the explicit permutation of the level and merges each index
    with its image through a union-find, so the orbit count and the
    largest orbit come out of one linear pass.
    """
    img, _ = _level_tables(g, n, max_words, with_images=True)
    size = len(img)
    parent = list(range(size))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for i, j in enumerate(img):
        ri, rj = find(i), find(j)
        if ri != rj:
            parent[ri] = rj
    sizes: dict[int, int] = {}
    for i in range(size):
        r = find(i)
        sizes[r] = sizes.get(r, 0) + 1
    return LevelOrbitReport(n, len(sizes), max(sizes.values()), len(sizes) == 1)


def abelian_coefficient_bruteforce(
    g: InitialAutomaton,
    n: int,
    labels: AbelianLabels | None = None,
    component: int = 0,
    max_words: int = DEFAULT_WORD_CAP,
) -> int:
    """Sum of the section labels over all words of length n, mod m.

    Walks the transition table to every word of the level and adds up
    the chosen label component of the states reached there.
    """
    if labels is None:
        labels = validate_cyclic(g.automaton)
    vector = abelian_vector(labels, component)
    _, states = _level_tables(g, n, max_words, with_images=False)
    return sum(vector.residues[s] for s in states) % vector.modulus


def conjugate_by(h: InitialAutomaton, g: InitialAutomaton) -> InitialAutomaton:
    """The conjugate h g h^-1, minimized."""
    if h.k != g.k:
        raise AlphabetMismatchError(f"alphabet sizes differ: {h.k} != {g.k}")
    return h.compose(g).compose(h.inverse()).minimize()
