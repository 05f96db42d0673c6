"""Invertible Mealy automata acting on the rooted k-ary tree.

An automaton has finitely many states, the alphabet {0, ..., k-1}, a
transition table and, for every state, an output row.  A state rewrites
a word letter by letter: it pushes the first letter through its output
row and hands the remaining letters to the successor state given by the
transition table.  When every output row is a permutation, a state
therefore computes an automorphism of the rooted k-ary tree whose
vertices are the finite words over the alphabet; sections of that
automorphism at vertices are again states of the same machine.

The module also defines the text format used to store automata on disk
and per-state labels in a product of finite cyclic groups, which the
analysis modules consume.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

_NAME_RE = re.compile(r"[A-Za-z0-9_]+\Z")


class AutomatonError(Exception):
    """Base class for every error raised by this package."""


class ParseError(AutomatonError):
    """Malformed automaton text."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(message if line is None else f"line {line}: {message}")


class MissingAlphabetError(ParseError):
    """No alphabet directive, or a state declared before it."""


class UnknownStateError(ParseError):
    """A state name is referenced but never declared."""

    def __init__(self, name: str, line: int | None = None):
        self.name = name
        super().__init__(f"unknown state '{name}'", line)


class BadPermutationError(AutomatonError):
    """An output row is not a bijection of the alphabet."""

    def __init__(self, state: str, row=None):
        self.state = state
        detail = "" if row is None else f" {tuple(row)}"
        super().__init__(
            f"output row{detail} of state '{state}' is not a permutation of the alphabet"
        )


class NotCyclicError(AutomatonError):
    """An output permutation is not a power of the cycle 0 -> 1 -> ... -> k-1."""

    def __init__(self, state: str):
        self.state = state
        super().__init__(
            f"output permutation of state '{state}' is not a power of the standard cycle"
        )


class BadSymbolError(AutomatonError):
    """A word contains a symbol outside the alphabet."""

    def __init__(self, position: int, symbol=None):
        self.position = position
        detail = "" if symbol is None else f" {symbol!r}"
        super().__init__(f"bad symbol{detail} at position {position}")


class AlphabetMismatchError(AutomatonError):
    """Two automata over different alphabets were combined."""


class MissingInitialError(AutomatonError):
    """An operation needs an initial state but none was given."""


class BadComponentError(AutomatonError):
    """A label component index is out of range."""


@dataclass(frozen=True)
class Permutation:
    """A permutation of {0, ..., k-1} in one-line notation."""

    images: tuple[int, ...]

    def __post_init__(self):
        images = tuple(self.images)
        object.__setattr__(self, "images", images)
        if sorted(images) != list(range(len(images))):
            raise ValueError(f"{images} is not a permutation of 0..{len(images) - 1}")

    @classmethod
    def identity(cls, k: int) -> "Permutation":
        return cls(tuple(range(k)))

    @classmethod
    def cycle_power(cls, k: int, e: int) -> "Permutation":
        """The e-th power of the cycle sending each i to i+1 mod k."""
        return cls(tuple((i + e) % k for i in range(k)))

    def __call__(self, a: int) -> int:
        return self.images[a]

    def __len__(self) -> int:
        return len(self.images)

    def compose(self, other: "Permutation") -> "Permutation":
        """self after other: i -> self(other(i))."""
        return Permutation(tuple(self.images[j] for j in other.images))

    def inverse(self) -> "Permutation":
        inv = [0] * len(self.images)
        for i, j in enumerate(self.images):
            inv[j] = i
        return Permutation(tuple(inv))

    def shift_amount(self) -> int | None:
        """The e with images[i] == i+e mod k for all i, or None."""
        k = len(self.images)
        e = self.images[0]
        if all(self.images[i] == (i + e) % k for i in range(k)):
            return e
        return None


@dataclass(frozen=True)
class MealyAutomaton:
    """A finite Mealy automaton over the alphabet {0, ..., k-1}.

    States are kept in declaration order; ``delta[q][a]`` is the state
    entered after reading symbol ``a`` in state ``q`` and ``out[q][a]``
    the symbol written.  Output rows are stored raw so that tables that
    fail to be invertible remain representable; ``validate`` rejects
    them, as does every operation that needs an inverse.
    """

    k: int
    names: tuple[str, ...]
    delta: tuple[tuple[int, ...], ...]
    out: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        object.__setattr__(self, "names", tuple(self.names))
        object.__setattr__(self, "delta", tuple(tuple(row) for row in self.delta))
        object.__setattr__(self, "out", tuple(tuple(row) for row in self.out))
        if self.k < 2:
            raise AutomatonError(f"alphabet size must be at least 2, got {self.k}")
        n = len(self.names)
        if n == 0:
            raise AutomatonError("an automaton needs at least one state")
        if len(set(self.names)) != n:
            raise AutomatonError("duplicate state names")
        for name in self.names:
            if not _NAME_RE.match(name):
                raise AutomatonError(f"bad state name {name!r}")
        if len(self.delta) != n or len(self.out) != n:
            raise AutomatonError("delta and out need one row per state")
        for q in range(n):
            if len(self.delta[q]) != self.k or len(self.out[q]) != self.k:
                raise AutomatonError(
                    f"rows of state '{self.names[q]}' must have {self.k} entries"
                )
            for a in range(self.k):
                if not 0 <= self.delta[q][a] < n:
                    raise AutomatonError(
                        f"transition of state '{self.names[q]}' at {a} is out of range"
                    )
                if not 0 <= self.out[q][a] < self.k:
                    raise AutomatonError(
                        f"output symbol of state '{self.names[q]}' at {a} is out of range"
                    )

    @property
    def n_states(self) -> int:
        return len(self.names)

    def state_index(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise UnknownStateError(name) from None

    def out_perm(self, q: int) -> Permutation:
        try:
            return Permutation(self.out[q])
        except ValueError:
            raise BadPermutationError(self.names[q], self.out[q]) from None

    def validate(self) -> None:
        """Check invertibility: every output row must be a bijection."""
        for q in range(self.n_states):
            self.out_perm(q)

    def is_invertible(self) -> bool:
        try:
            self.validate()
        except BadPermutationError:
            return False
        return True

    def with_initial(self, state: int | str) -> "InitialAutomaton":
        if isinstance(state, str):
            state = self.state_index(state)
        return InitialAutomaton(self, state)


@dataclass(frozen=True)
class AbelianLabels:
    """Per-state values in a product Z/m_1 x ... x Z/m_r of cyclic groups.

    ``labels[q][i]`` is the i-th component of the label of state q,
    stored as the canonical residue 0 <= c < m_i.
    """

    moduli: tuple[int, ...]
    labels: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        object.__setattr__(self, "moduli", tuple(self.moduli))
        object.__setattr__(self, "labels", tuple(tuple(row) for row in self.labels))
        if not self.moduli:
            raise AutomatonError("at least one modulus is required")
        for m in self.moduli:
            if m < 2:
                raise AutomatonError(f"modulus {m} must be at least 2")
        r = len(self.moduli)
        for row in self.labels:
            if len(row) != r:
                raise AutomatonError(f"label {row} must have {r} components")
            for c, m in zip(row, self.moduli):
                if not 0 <= c < m:
                    raise AutomatonError(f"label component {c} is out of range mod {m}")


def validate_cyclic(m: MealyAutomaton) -> AbelianLabels:
    """Derive labels mod k for an automaton whose output rows are shifts.

    Succeeds iff every state writes a -> a+e mod k for some shift e; the
    returned labels hold those shifts, one residue per state, with the
    single modulus k.
    """
    shifts = []
    for q in range(m.n_states):
        row = m.out[q]
        e = row[0]
        if any(row[a] != (a + e) % m.k for a in range(m.k)):
            raise NotCyclicError(m.names[q])
        shifts.append((e,))
    return AbelianLabels((m.k,), tuple(shifts))


def parse_word(text: str, k: int) -> tuple[int, ...]:
    """Read a word over {0, ..., k-1} from its text form.

    For k <= 10 a word is a string of digits; larger alphabets use
    comma-separated integers.  The empty string is the empty word.
    """
    if k <= 10:
        symbols = []
        for i, ch in enumerate(text):
            if not ch.isdigit() or int(ch) >= k:
                raise BadSymbolError(i, ch)
            symbols.append(int(ch))
        return tuple(symbols)
    if not text.strip():
        return ()
    symbols = []
    for i, tok in enumerate(text.split(",")):
        try:
            s = int(tok.strip())
        except ValueError:
            raise BadSymbolError(i, tok.strip()) from None
        if not 0 <= s < k:
            raise BadSymbolError(i, s)
        symbols.append(s)
    return tuple(symbols)


def format_word(symbols, k: int) -> str:
    if k <= 10:
        return "".join(str(s) for s in symbols)
    return ",".join(str(s) for s in symbols)


def _coerce_word(word, k: int):
    """Normalize a word argument to (tuple of symbols, came_as_text)."""
    if isinstance(word, str):
        return parse_word(word, k), True
    symbols = tuple(word)
    for i, s in enumerate(symbols):
        if not isinstance(s, int) or not 0 <= s < k:
            raise BadSymbolError(i, s)
    return symbols, False


def _dedupe_names(bases) -> tuple[str, ...]:
    used = set()
    names = []
    for base in bases:
        name = base
        i = 2
        while name in used:
            name = f"{base}_{i}"
            i += 1
        used.add(name)
        names.append(name)
    return tuple(names)


def _behavior_classes(k, delta, out):
    """Partition states by behavior; returns first-appearance class ids.

    Start from the output rows and refine by successor classes until
    stable.  Two states land in the same class iff they transform every
    word identically.
    """
    n = len(out)
    ids = {}
    labels = [ids.setdefault(tuple(out[q]), len(ids)) for q in range(n)]
    while True:
        ids = {}
        refined = [
            ids.setdefault(
                (labels[q], tuple(labels[delta[q][a]] for a in range(k))), len(ids)
            )
            for q in range(n)
        ]
        if refined == labels:
            return labels
        labels = refined


@dataclass(frozen=True)
class InitialAutomaton:
    """A Mealy automaton with a distinguished initial state.

    This is the object that acts on the tree: ``apply`` transforms a
    word, ``section`` restricts the action to the subtree below a word,
    and ``inverse``/``compose``/``minimize`` build new machines for the
    inverse map, the composite map and the minimal machine of the same
    map.
    """

    automaton: MealyAutomaton
    initial: int

    def __post_init__(self):
        if not 0 <= self.initial < self.automaton.n_states:
            raise AutomatonError(f"initial state index {self.initial} is out of range")

    @property
    def k(self) -> int:
        return self.automaton.k

    @property
    def initial_name(self) -> str:
        return self.automaton.names[self.initial]

    def apply(self, word):
        """Image of ``word`` under the tree map computed by this machine.

        Accepts either a sequence of symbols or the text form used by
        ``parse_word`` and answers in the same shape.
        """
        symbols, as_text = _coerce_word(word, self.k)
        delta, out = self.automaton.delta, self.automaton.out
        state = self.initial
        result = []
        for a in symbols:
            result.append(out[state][a])
            state = delta[state][a]
        return format_word(result, self.k) if as_text else tuple(result)

    def section(self, word) -> "InitialAutomaton":
        """The machine acting on the subtree below ``word``: same states, new start."""
        symbols, _ = _coerce_word(word, self.k)
        state = self.initial
        for a in symbols:
            state = self.automaton.delta[state][a]
        return InitialAutomaton(self.automaton, state)

    def inverse(self) -> "InitialAutomaton":
        """The machine computing the inverse tree map.

        Labels of the transition diagram swap sides: where a state reads
        a and writes b, the inverse state reads b, writes a and moves to
        the inverse of the original successor at a.
        """
        m = self.automaton
        m.validate()
        delta = []
        out = []
        for q in range(m.n_states):
            inv = m.out_perm(q).inverse()
            out.append(inv.images)
            delta.append(tuple(m.delta[q][inv(b)] for b in range(m.k)))
        inverted = MealyAutomaton(m.k, m.names, tuple(delta), tuple(out))
        return InitialAutomaton(inverted, self.initial)

    def compose(self, other: "InitialAutomaton") -> "InitialAutomaton":
        """The machine computing ``self(other(w))``.

        Product construction on the reachable state pairs (p, q): the
        pair writes p's output of q's output and, on reading a, moves to
        (p at q's output of a, q at a).
        """
        if self.k != other.k:
            raise AlphabetMismatchError(
                f"alphabet sizes differ: {self.k} != {other.k}"
            )
        f, g = self.automaton, other.automaton
        k = self.k
        index = {}
        order = []

        def visit(pair):
            if pair not in index:
                index[pair] = len(order)
                order.append(pair)
            return index[pair]

        visit((self.initial, other.initial))
        delta = []
        out = []
        i = 0
        while i < len(order):
            p, q = order[i]
            drow = []
            orow = []
            for a in range(k):
                b = g.out[q][a]
                orow.append(f.out[p][b])
                drow.append(visit((f.delta[p][b], g.delta[q][a])))
            delta.append(tuple(drow))
            out.append(tuple(orow))
            i += 1
        names = _dedupe_names(f"{f.names[p]}_{g.names[q]}" for p, q in order)
        product = MealyAutomaton(k, names, tuple(delta), tuple(out))
        return InitialAutomaton(product, 0)

    def minimize(self) -> "InitialAutomaton":
        """The smallest machine computing the same tree map.

        Keeps only states reachable from the start, then merges states
        that behave identically.  Merged states take the name of their
        earliest member in breadth-first discovery order.
        """
        m = self.automaton
        k = self.k
        order = [self.initial]
        pos = {self.initial: 0}
        i = 0
        while i < len(order):
            for a in range(k):
                t = m.delta[order[i]][a]
                if t not in pos:
                    pos[t] = len(order)
                    order.append(t)
            i += 1
        sub_delta = [tuple(pos[m.delta[q][a]] for a in range(k)) for q in order]
        sub_out = [m.out[q] for q in order]
        labels = _behavior_classes(k, sub_delta, sub_out)
        reps = []
        for i, c in enumerate(labels):
            if c == len(reps):
                reps.append(i)
        names = tuple(m.names[order[r]] for r in reps)
        delta = tuple(tuple(labels[sub_delta[r][a]] for a in range(k)) for r in reps)
        out = tuple(sub_out[r] for r in reps)
        return InitialAutomaton(MealyAutomaton(k, names, delta, out), labels[0])

    def equivalent(self, other: "InitialAutomaton") -> bool:
        """Whether both machines transform every word identically."""
        if self.k != other.k:
            raise AlphabetMismatchError(
                f"alphabet sizes differ: {self.k} != {other.k}"
            )
        f, g = self.automaton, other.automaton
        off = f.n_states
        delta = [tuple(row) for row in f.delta]
        delta += [tuple(x + off for x in row) for row in g.delta]
        out = list(f.out) + list(g.out)
        labels = _behavior_classes(self.k, delta, out)
        return labels[self.initial] == labels[off + other.initial]


@dataclass(frozen=True)
class AutomatonFile:
    """Parsed contents of an automaton text: machine, start, labels."""

    automaton: MealyAutomaton
    initial: int | None
    labels: AbelianLabels | None

    def initial_automaton(self) -> InitialAutomaton:
        if self.initial is None:
            raise MissingInitialError("the automaton text declares no initial state")
        return InitialAutomaton(self.automaton, self.initial)


def _int_token(tok: str, line: int) -> int:
    try:
        return int(tok)
    except ValueError:
        raise ParseError(f"expected an integer, got {tok!r}", line) from None


def parse_automaton(text: str) -> AutomatonFile:
    """Read an automaton from its text form.

    The format is line oriented; '#' starts a comment and blank lines
    are skipped.  Directives::

        alphabet <k>
        state <name> perm <k output symbols> to <k successor states>
        initial <name>
        abelian <m1> ... <mr>
        label <name> <c1> ... <cr>

    States may refer to states declared later.  When an ``abelian``
    directive is present, every state needs a ``label`` line.
    """
    k = None
    state_rows = []
    seen = {}
    initial_ref = None
    moduli = None
    label_rows = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        toks = raw.split("#", 1)[0].split()
        if not toks:
            continue
        head = toks[0]
        if head == "alphabet":
            if k is not None:
                raise ParseError("duplicate alphabet directive", lineno)
            if len(toks) != 2:
                raise ParseError("expected: alphabet <k>", lineno)
            k = _int_token(toks[1], lineno)
            if k < 2:
                raise ParseError(f"alphabet size must be at least 2, got {k}", lineno)
        elif head == "state":
            if k is None:
                raise MissingAlphabetError(
                    "alphabet must be declared before states", lineno
                )
            if len(toks) != 2 * k + 4 or toks[2] != "perm" or toks[3 + k] != "to":
                raise ParseError(
                    f"expected: state <name> perm <{k} symbols> to <{k} states>",
                    lineno,
                )
            name = toks[1]
            if not _NAME_RE.match(name):
                raise ParseError(f"bad state name {name!r}", lineno)
            if name in seen:
                raise ParseError(f"duplicate state '{name}'", lineno)
            seen[name] = len(state_rows)
            row = tuple(_int_token(t, lineno) for t in toks[3 : 3 + k])
            if sorted(row) != list(range(k)):
                raise BadPermutationError(name, row)
            targets = tuple(toks[4 + k : 4 + 2 * k])
            state_rows.append((name, row, targets, lineno))
        elif head == "initial":
            if len(toks) != 2:
                raise ParseError("expected: initial <state>", lineno)
            if initial_ref is not None:
                raise ParseError("duplicate initial directive", lineno)
            initial_ref = (toks[1], lineno)
        elif head == "abelian":
            if moduli is not None:
                raise ParseError("duplicate abelian directive", lineno)
            if len(toks) < 2:
                raise ParseError("expected: abelian <m1> ...", lineno)
            moduli = tuple(_int_token(t, lineno) for t in toks[1:])
            for m in moduli:
                if m < 2:
                    raise ParseError(f"modulus {m} must be at least 2", lineno)
        elif head == "label":
            if moduli is None:
                raise ParseError("abelian directive must come before labels", lineno)
            if len(toks) != 2 + len(moduli):
                raise ParseError(
                    f"expected: label <state> <{len(moduli)} residues>", lineno
                )
            name = toks[1]
            if name in label_rows:
                raise ParseError(f"duplicate label for state '{name}'", lineno)
            row = tuple(_int_token(t, lineno) for t in toks[2:])
            for c, m in zip(row, moduli):
                if not 0 <= c < m:
                    raise ParseError(f"label component {c} out of range mod {m}", lineno)
            label_rows[name] = (row, lineno)
        else:
            raise ParseError(f"unknown directive '{head}'", lineno)
    if k is None:
        raise MissingAlphabetError("no alphabet declared")
    if not state_rows:
        raise ParseError("no states declared")
    delta = []
    for name, row, targets, lineno in state_rows:
        drow = []
        for t in targets:
            if t not in seen:
                raise UnknownStateError(t, lineno)
            drow.append(seen[t])
        delta.append(tuple(drow))
    automaton = MealyAutomaton(
        k,
        tuple(name for name, _, _, _ in state_rows),
        tuple(delta),
        tuple(row for _, row, _, _ in state_rows),
    )
    initial = None
    if initial_ref is not None:
        name, lineno = initial_ref
        if name not in seen:
            raise UnknownStateError(name, lineno)
        initial = seen[name]
    labels = None
    if moduli is not None:
        for name, (_, lineno) in label_rows.items():
            if name not in seen:
                raise UnknownStateError(name, lineno)
        rows = []
        for name in automaton.names:
            if name not in label_rows:
                raise ParseError(f"missing label for state '{name}'")
            rows.append(label_rows[name][0])
        labels = AbelianLabels(moduli, tuple(rows))
    return AutomatonFile(automaton, initial, labels)


def serialize_automaton(
    m: MealyAutomaton,
    initial: int | None = None,
    labels: AbelianLabels | None = None,
) -> str:
    """Emit exactly the text form accepted by ``parse_automaton``."""
    lines = [f"alphabet {m.k}"]
    for q in range(m.n_states):
        perm = " ".join(str(x) for x in m.out[q])
        tos = " ".join(m.names[t] for t in m.delta[q])
        lines.append(f"state {m.names[q]} perm {perm} to {tos}")
    if initial is not None:
        lines.append(f"initial {m.names[initial]}")
    if labels is not None:
        lines.append("abelian " + " ".join(str(x) for x in labels.moduli))
        for q in range(m.n_states):
            lines.append(
                f"label {m.names[q]} " + " ".join(str(c) for c in labels.labels[q])
            )
    return "\n".join(lines) + "\n"


def to_dot(m: MealyAutomaton, initial: int | None = None) -> str:
    """Transition diagram in DOT format, edges labelled read|write."""
    lines = ["digraph automaton {", "  rankdir=LR;"]
    if initial is not None:
        start = "__start"
        while start in m.names:
            start += "_"
        lines.append(f'  "{start}" [shape=point];')
        lines.append(f'  "{start}" -> "{m.names[initial]}";')
    for name in m.names:
        lines.append(f'  "{name}" [shape=circle];')
    for q in range(m.n_states):
        for a in range(m.k):
            target = m.names[m.delta[q][a]]
            lines.append(
                f'  "{m.names[q]}" -> "{target}" [label="{a}|{m.out[q][a]}"];'
            )
    lines.append("}")
    return "\n".join(lines) + "\n"
