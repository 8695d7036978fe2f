"""Letters, words, finite presentations and the amalgam input format.

A letter is a ``(generator, sign)`` pair with sign ``+1`` or ``-1``; a word is
a tuple of letters.  Words are plain tuples so they hash, compare and slice
like any other sequence.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterable, Sequence

Letter = tuple  # (name, +1 | -1)
Word = tuple  # tuple[Letter, ...]

_NAME = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")
_TOKEN = re.compile(r"([A-Za-z_][A-Za-z0-9_]*)(?:\^(-?\d+))?\Z")


class WordError(ValueError):
    pass


class AmalgamFileError(ValueError):
    def __init__(self, message, line=None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


def is_identifier(name: str) -> bool:
    return bool(_NAME.match(name))


def inverse_letter(letter: Letter) -> Letter:
    return (letter[0], -letter[1])


def inverse(word: Sequence[Letter]) -> Word:
    return tuple((name, -sign) for name, sign in reversed(word))


def parse_word(text: str, alphabet: Iterable[str] | None = None) -> Word:
    """Parse ``"x y^-1 x^3"`` into letters, expanding powers.

    ``"1"`` and the empty string denote the empty word.
    """
    allowed = None if alphabet is None else set(alphabet)
    letters = []
    for token in text.split():
        if token == "1":
            continue
        m = _TOKEN.match(token)
        if m is None:
            raise WordError(f"malformed token {token!r}")
        name, exp = m.group(1), m.group(2)
        if allowed is not None and name not in allowed:
            raise WordError(f"unknown generator {name!r}")
        k = 1 if exp is None else int(exp)
        sign = 1 if k > 0 else -1
        letters.extend([(name, sign)] * abs(k))
    return tuple(letters)


def format_word(word: Sequence[Letter]) -> str:
    """Inverse of :func:`parse_word`; runs of one letter are written as powers."""
    if not word:
        return "1"
    parts = []
    i = 0
    while i < len(word):
        j = i
        while j < len(word) and word[j] == word[i]:
            j += 1
        name, sign = word[i]
        k = (j - i) * sign
        parts.append(name if k == 1 else f"{name}^{k}")
        i = j
    return " ".join(parts)


def free_reduce(word: Sequence[Letter]) -> Word:
    out = []
    for letter in word:
        if out and out[-1][0] == letter[0] and out[-1][1] == -letter[1]:
            out.pop()
        else:
            out.append(letter)
    return tuple(out)


def cyclic_reduce(word: Sequence[Letter]) -> Word:
    w = free_reduce(word)
    i, j = 0, len(w)
    while j - i >= 2 and w[i][0] == w[j - 1][0] and w[i][1] == -w[j - 1][1]:
        i += 1
        j -= 1
    return w[i:j]


def word_power(word: Sequence[Letter], k: int) -> Word:
    if k < 0:
        return tuple(inverse(word)) * (-k)
    return tuple(word) * k


@dataclass(frozen=True)
class GroupPresentation:
    generators: tuple
    relators: tuple = ()

    def __post_init__(self):
        for g in self.generators:
            if not is_identifier(g):
                raise WordError(f"bad generator name {g!r}")
        if len(set(self.generators)) != len(self.generators):
            raise WordError("repeated generator name")
        gens = set(self.generators)
        for r in self.relators:
            for name, _ in r:
                if name not in gens:
                    raise WordError(f"relator uses unknown generator {name!r}")

    @classmethod
    def parse(cls, generators, relators=()):
        gens = tuple(generators)
        rels = []
        for r in relators:
            w = free_reduce(parse_word(r, gens) if isinstance(r, str) else r)
            if w:
                rels.append(w)
        return cls(gens, tuple(rels))

    def __str__(self):
        rels = ", ".join(format_word(r) for r in self.relators)
        return f"gp< {', '.join(self.generators)} | {rels} >"


@dataclass(frozen=True)
class AmalgamSpec:
    """Two finite factors and the images of the edge generators.

    Only the syntactic part is checked here; the group-theoretic conditions
    (injectivity, properness of the edge subgroup) need coset enumeration
    and live in :func:`amalgraph.amalgam.validate_amalgam`.
    """

    factor1: GroupPresentation
    factor2: GroupPresentation
    edge_generators: tuple = ()
    phi1: dict = field(default_factory=dict)
    phi2: dict = field(default_factory=dict)

    def __post_init__(self):
        clash = set(self.factor1.generators) & set(self.factor2.generators)
        if clash:
            raise WordError(f"factor alphabets are not disjoint: {sorted(clash)}")
        for y in self.edge_generators:
            for i, (phi, fac) in enumerate(((self.phi1, self.factor1), (self.phi2, self.factor2)), 1):
                if y not in phi:
                    raise WordError(f"phi{i} has no image for edge generator {y!r}")
                for name, _ in phi[y]:
                    if name not in fac.generators:
                        raise WordError(f"phi{i}({y}) uses {name!r}, not a generator of factor {i}")

    @property
    def alphabet(self):
        return self.factor1.generators + self.factor2.generators

    def factor(self, i):
        return self.factor1 if i == 1 else self.factor2

    def phi(self, i):
        return self.phi1 if i == 1 else self.phi2

    def amalgamation_relators(self):
        return tuple(free_reduce(self.phi1[y] + inverse(self.phi2[y])) for y in self.edge_generators)

    def presentation(self) -> GroupPresentation:
        """The finite presentation of the whole amalgam."""
        rels = list(self.factor1.relators) + list(self.factor2.relators)
        rels += [r for r in self.amalgamation_relators() if r]
        return GroupPresentation(self.alphabet, tuple(rels))

    @classmethod
    def build(cls, gens1, rels1, gens2, rels2, edge_images=()):
        """Convenience constructor from strings.

        ``edge_images`` is a sequence of ``(name, image1, image2)`` triples.
        """
        f1 = GroupPresentation.parse(gens1, rels1)
        f2 = GroupPresentation.parse(gens2, rels2)
        ys, p1, p2 = [], {}, {}
        for y, w1, w2 in edge_images:
            ys.append(y)
            p1[y] = parse_word(w1, f1.generators)
            p2[y] = parse_word(w2, f2.generators)
        return cls(f1, f2, tuple(ys), p1, p2)

    def to_text(self) -> str:
        lines = [
            f"factor1.generators: {', '.join(self.factor1.generators)}",
            f"factor1.relators: {', '.join(format_word(r) for r in self.factor1.relators)}",
            f"factor2.generators: {', '.join(self.factor2.generators)}",
            f"factor2.relators: {', '.join(format_word(r) for r in self.factor2.relators)}",
            f"edge.generators: {', '.join(self.edge_generators)}",
        ]
        if self.edge_generators:
            lines.append("phi1: " + ", ".join(f"{y} = {format_word(self.phi1[y])}" for y in self.edge_generators))
            lines.append("phi2: " + ", ".join(f"{y} = {format_word(self.phi2[y])}" for y in self.edge_generators))
        return "\n".join(lines) + "\n"


_KEYS = (
    "factor1.generators",
    "factor1.relators",
    "factor2.generators",
    "factor2.relators",
    "edge.generators",
    "phi1",
    "phi2",
)


def _split_list(value):
    return [item.strip() for item in value.split(",") if item.strip()]


def parse_amalgam(text: str) -> AmalgamSpec:
    """Parse the line-oriented amalgam file format."""
    raw = {}
    where = {}
    phis = {"phi1": [], "phi2": []}
    for lineno, line in enumerate(text.splitlines(), 1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        key, sep, value = stripped.partition(":")
        key = key.strip()
        if not sep or key not in _KEYS:
            raise AmalgamFileError(f"unrecognised line {stripped!r}", lineno)
        if key in phis:
            for item in _split_list(value):
                name, eq, image = item.partition("=")
                if not eq:
                    raise AmalgamFileError(f"expected 'name = word' in {item!r}", lineno)
                phis[key].append((name.strip(), image.strip(), lineno))
            continue
        if key in raw:
            raise AmalgamFileError(f"duplicate key {key!r}", lineno)
        raw[key] = _split_list(value)
        where[key] = lineno

    for key in ("factor1.generators", "factor2.generators"):
        if key not in raw:
            raise AmalgamFileError(f"missing key {key!r}")

    def gens_of(key):
        out = []
        for item in raw[key]:
            out.extend(item.split())
        return tuple(out)

    try:
        f = []
        for i in (1, 2):
            gens = gens_of(f"factor{i}.generators")
            rels = raw.get(f"factor{i}.relators", [])
            f.append(GroupPresentation.parse(gens, rels))
    except WordError as exc:
        raise AmalgamFileError(str(exc), where.get(f"factor{i}.relators", where[f"factor{i}.generators"])) from None

    ys = gens_of("edge.generators") if "edge.generators" in raw else ()
    images = {}
    for i, key in ((1, "phi1"), (2, "phi2")):
        images[i] = {}
        for name, image, lineno in phis[key]:
            if name not in ys:
                raise AmalgamFileError(f"{key} maps undeclared edge generator {name!r}", lineno)
            try:
                images[i][name] = parse_word(image, f[i - 1].generators)
            except WordError as exc:
                raise AmalgamFileError(f"{key}({name}): {exc}", lineno) from None
    clash = set(f[0].generators) & set(f[1].generators)
    if clash:
        raise AmalgamFileError(f"factor alphabets are not disjoint: {sorted(clash)}", where["factor2.generators"])
    try:
        return AmalgamSpec(f[0], f[1], ys, images[1], images[2])
    except WordError as exc:
        raise AmalgamFileError(str(exc), where.get("edge.generators")) from None
