"""Decision procedures built on the abelianized coefficient stream.

A tree automorphism whose output rows are all powers of the standard
k-cycle lives in the infinitely iterated wreath product of Z/kZ.  Its
image in the abelianization of that group is a power series whose n-th
coefficient is the sum, over all vertices at depth n, of the shift
written at that vertex.  Two classical facts drive everything here:

* the automorphism moves every depth transitively iff every stream
  coefficient is a unit mod k, and
* two such transitive automorphisms are conjugate iff their streams
  agree.

The stream coefficients are ``(A^j v)[init]`` where A is the incidence
matrix of the machine and v holds the per-state shifts, so all of this
reduces to iterating a small integer matrix mod m.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from math import gcd

from .automaton import (
    AbelianLabels,
    AlphabetMismatchError,
    AutomatonError,
    BadComponentError,
    InitialAutomaton,
    validate_cyclic,
)
from .modmath import (
    DEFAULT_VISIT_CAP,
    DimensionMismatchError,
    EventuallyPeriodicStream,
    IncidenceMatrix,
    IntPolynomial,
    IterationCapError,
    ModVector,
    RationalSeries,
    abelian_vector,
    coefficient_stream,
    det_poly,
    incidence_matrix,
)


class NotBinaryError(AutomatonError):
    """The binary-alphabet shortcut was applied to a non-binary machine."""


class ModuliMismatchError(AutomatonError):
    """Two label sets over different moduli were compared."""


@dataclass(frozen=True)
class TransitivityVerdict:
    """Outcome of the transitivity test.

    ``first_bad_index`` is the least stream index carrying a non-unit
    mod k, or None; the automorphism is transitive on every level iff
    no such index exists.
    """

    transitive: bool
    first_bad_index: int | None
    stream: EventuallyPeriodicStream


class ConjugacyStatus(enum.Enum):
    CONJUGATE = "conjugate"
    NOT_CONJUGATE = "not_conjugate"
    UNDECIDED = "undecided"


@dataclass(frozen=True)
class ConjugacyVerdict:
    status: ConjugacyStatus
    reason: str


def _first_non_unit(stream: EventuallyPeriodicStream) -> int | None:
    """Least index with gcd(term, modulus) > 1, scanning one full cycle."""
    for j, c in enumerate(stream.preperiod + stream.period):
        if gcd(c, stream.modulus) != 1:
            return j
    return None


def _labels_for(g: InitialAutomaton, labels: AbelianLabels | None) -> AbelianLabels:
    if labels is None:
        return validate_cyclic(g.automaton)
    if len(labels.labels) != g.automaton.n_states:
        raise DimensionMismatchError(
            f"{len(labels.labels)} label rows for {g.automaton.n_states} states"
        )
    return labels


def is_spherically_transitive(
    g: InitialAutomaton, cap: int = DEFAULT_VISIT_CAP
) -> TransitivityVerdict:
    """Decide whether g acts transitively on every depth of the tree.

    Requires every output row to be a power of the standard cycle.  The
    full coefficient stream is computed in closed form and scanned for
    a non-unit; by periodicity, scanning the preperiod plus one period
    settles every index.
    """
    labels = validate_cyclic(g.automaton)
    matrix = incidence_matrix(g.automaton)
    vector = abelian_vector(labels, 0)
    stream = coefficient_stream(matrix, vector, g.initial, cap)
    bad = _first_non_unit(stream)
    return TransitivityVerdict(bad is None, bad, stream)


def transitive_k2_fast(g: InitialAutomaton) -> TransitivityVerdict:
    """Binary-alphabet shortcut for the transitivity test.

    Over a field the vectors v, Av, ..., A^n v are linearly dependent,
    which makes n+2 leading stream terms enough to decide: if none of
    them vanishes mod 2, none ever does.  Only those terms are ever
    computed; a transitive verdict reports them with the all-ones tail
    they provably continue into, a negative verdict stops at the first
    zero term and repeats it as a placeholder tail.
    """
    if g.k != 2:
        raise NotBinaryError(f"this shortcut needs alphabet size 2, got {g.k}")
    labels = validate_cyclic(g.automaton)
    matrix = incidence_matrix(g.automaton)
    vector = abelian_vector(labels, 0)
    n = g.automaton.n_states
    w = vector.residues
    terms = []
    for _ in range(n + 2):
        terms.append(w[g.initial])
        w = matrix.matvec_mod(w, 2)
    bad = next((j for j, t in enumerate(terms) if t == 0), None)
    if bad is None:
        stream = EventuallyPeriodicStream(2, tuple(terms), (1,))
        return TransitivityVerdict(True, None, stream)
    stream = EventuallyPeriodicStream(2, tuple(terms[:bad]), (0,))
    return TransitivityVerdict(False, bad, stream)


def _is_prime(m: int) -> bool:
    if m < 2:
        return False
    f = 2
    while f * f <= m:
        if m % f == 0:
            return False
        f += 1
    return True


def _stack(a: IncidenceMatrix, b: IncidenceMatrix) -> IncidenceMatrix:
    rows = [row + (0,) * b.n for row in a.rows]
    rows += [(0,) * a.n + row for row in b.rows]
    return IncidenceMatrix(tuple(rows))


def abelianization_equal(
    f: InitialAutomaton,
    g: InitialAutomaton,
    labels_f: AbelianLabels | None = None,
    labels_g: AbelianLabels | None = None,
    path: str = "auto",
    cap: int = DEFAULT_VISIT_CAP,
) -> tuple[bool, int | None]:
    """Whether f and g have the same abelianization series.

    Labels default to the cyclic shifts mod k; explicit labels allow any
    product of cyclic groups, compared component by component over the
    shared moduli.  Each component stacks the two incidence matrices
    into a block-diagonal matrix and asks whether the two marked
    coordinates of its iterates ever differ.  Returns (equal, witness)
    where the witness is the least series index at which any component
    differs, or None.

    For a prime component modulus the vectors live over a field, so
    only indices up to the number of stacked states minus one need
    checking; the generic path runs the full cycle detection.  ``path``
    may force "generic" or "prime" for cross-checking.
    """
    if f.k != g.k:
        raise AlphabetMismatchError(f"alphabet sizes differ: {f.k} != {g.k}")
    if path not in ("auto", "generic", "prime"):
        raise ValueError(f"unknown path {path!r}")
    labels_f = _labels_for(f, labels_f)
    labels_g = _labels_for(g, labels_g)
    if labels_f.moduli != labels_g.moduli:
        raise ModuliMismatchError(
            f"label moduli differ: {labels_f.moduli} != {labels_g.moduli}"
        )
    matrix = _stack(incidence_matrix(f.automaton), incidence_matrix(g.automaton))
    dim = matrix.n
    i_f = f.initial
    i_g = f.automaton.n_states + g.initial
    witness: int | None = None
    for component, m in enumerate(labels_f.moduli):
        v_f = abelian_vector(labels_f, component)
        v_g = abelian_vector(labels_g, component)
        w = v_f.residues + v_g.residues
        use_prime = path == "prime" or (path == "auto" and _is_prime(m))
        if use_prime and not _is_prime(m):
            raise ValueError(f"the prime path needs a prime modulus, got {m}")
        found: int | None = None
        if use_prime:
            for j in range(dim):
                if (w[i_f] - w[i_g]) % m != 0:
                    found = j
                    break
                w = matrix.matvec_mod(w, m)
        else:
            seen = {w: 0}
            j = 0
            while True:
                if (w[i_f] - w[i_g]) % m != 0:
                    found = j
                    break
                w = matrix.matvec_mod(w, m)
                if w in seen:
                    break
                if len(seen) >= cap:
                    raise IterationCapError(
                        f"visited more than {cap} distinct vectors without closing a cycle"
                    )
                j += 1
                seen[w] = j
        if found is not None and (witness is None or found < witness):
            witness = found
    return witness is None, witness


def conjugate(
    f: InitialAutomaton, g: InitialAutomaton, cap: int = DEFAULT_VISIT_CAP
) -> ConjugacyVerdict:
    """Three-valued conjugacy test inside the iterated wreath product.

    For two transitive automorphisms the abelianization series is a
    complete conjugacy invariant, so equality decides.  Transitivity
    itself is a conjugacy invariant, so a transitive and a
    non-transitive element are never conjugate.  When neither is
    transitive this criterion says nothing and the verdict is left
    undecided rather than guessed.
    """
    if f.k != g.k:
        raise AlphabetMismatchError(f"alphabet sizes differ: {f.k} != {g.k}")
    t_f = is_spherically_transitive(f, cap)
    t_g = is_spherically_transitive(g, cap)
    if t_f.transitive and t_g.transitive:
        equal, witness = abelianization_equal(f, g, cap=cap)
        if equal:
            return ConjugacyVerdict(
                ConjugacyStatus.CONJUGATE,
                "both spherically transitive with equal abelianization series",
            )
        return ConjugacyVerdict(
            ConjugacyStatus.NOT_CONJUGATE,
            f"both spherically transitive but the abelianization series "
            f"first differ at index {witness}",
        )
    if t_f.transitive != t_g.transitive:
        return ConjugacyVerdict(
            ConjugacyStatus.NOT_CONJUGATE,
            "spherical transitivity is a conjugacy invariant and only one "
            "element is spherically transitive",
        )
    return ConjugacyVerdict(
        ConjugacyStatus.UNDECIDED,
        "neither element is spherically transitive; the abelianization "
        "criterion only decides the transitive case",
    )


def rational_form(
    g: InitialAutomaton,
    labels: AbelianLabels | None = None,
    component: int = 0,
) -> RationalSeries:
    """The abelianization series as a quotient of polynomials mod m.

    The stream satisfies the linear recurrence of the incidence matrix,
    so the series equals the ``init`` coordinate of (I - At)^-1 v.  By
    Cramer's rule that is a quotient of two determinants, both computed
    exactly over Z[t] and only then reduced mod m: the denominator is
    det(I - At), the numerator replaces column ``init`` with the labels
    lifted to their canonical integer representatives.
    """
    labels = _labels_for(g, labels)
    if not 0 <= component < len(labels.moduli):
        raise BadComponentError(
            f"component {component} out of range, labels have {len(labels.moduli)}"
        )
    m = labels.moduli[component]
    matrix = incidence_matrix(g.automaton)
    n = matrix.n
    char = [
        [
            IntPolynomial((int(i == j), -matrix.rows[i][j]))
            for j in range(n)
        ]
        for i in range(n)
    ]
    denominator = det_poly(char)
    lifted = [row[component] for row in labels.labels]
    for i in range(n):
        char[i][g.initial] = IntPolynomial.constant(lifted[i])
    numerator = det_poly(char)
    return RationalSeries(m, numerator.coeffs, denominator.coeffs)
