"""Normal forms in the amalgam.

Every element is written uniquely as ``a r_1 r_2 ... r_n`` with ``a`` in
``A`` and each ``r_k`` a fixed non-trivial right-coset representative of
``A`` in its factor, consecutive ``r_k`` from different factors.  The
A-part sits on the left and is recorded as an A-index (printed through
factor 1's image).
"""

from __future__ import annotations

from dataclasses import dataclass

from .amalgam import Amalgam
from .words import Word, format_word


@dataclass(frozen=True)
class NormalWord:
    prefix: int  # A-index
    syllables: tuple  # ((factor, coset index), ...)
    rep_words: tuple  # transversal word of each syllable
    original: Word = ()

    @property
    def length(self):
        # a non-trivial element of A is a single syllable on its own
        if not self.syllables:
            return 0 if self.prefix == 0 else 1
        return len(self.syllables)

    def is_identity(self):
        return not self.syllables and self.prefix == 0

    def key(self):
        return (self.prefix, self.syllables)

    def __eq__(self, other):
        if not isinstance(other, NormalWord):
            return NotImplemented
        return self.key() == other.key()

    def __hash__(self):
        return hash(self.key())


def _decompose(amalgam: Amalgam, f, e):
    """Split a factor-``f`` element as ``a * r``: returns (A-index, coset)."""
    coset_of, reps, _ = amalgam.transversal(f)
    c = coset_of[e]
    model = amalgam.models[f]
    a = model.mul(e, model.inv(reps[c]))
    return amalgam.a_index[f][a], c


def _push_left(amalgam, stack, k, a):
    """Move the A-element ``a`` (A-index) left through ``stack[:k]``; return the new prefix part."""
    while k > 0 and a != 0:
        k -= 1
        f, c = stack[k]
        model = amalgam.models[f]
        _, reps, _ = amalgam.transversal(f)
        e = model.mul(reps[c], amalgam.a_elements[f][a])
        a, c2 = _decompose(amalgam, f, e)
        stack[k] = (f, c2)
    return a


def normal_form(amalgam: Amalgam, word: Word) -> NormalWord:
    stack = []  # (factor, coset index)
    prefix = 0
    for letter in word:
        f = amalgam.colour[letter[0]]
        model = amalgam.models[f]
        if stack and stack[-1][0] == f:
            _, reps, _ = amalgam.transversal(f)
            e = model.step(reps[stack[-1][1]], letter)
            stack.pop()
        else:
            e = model.step(0, letter)
        a, c = _decompose(amalgam, f, e)
        if c != 0:
            stack.append((f, c))
            a = _push_left(amalgam, stack, len(stack) - 1, a)
        elif stack:
            # the syllable collapsed into A: absorb it into the previous one
            prev_f, prev_c = stack.pop()
            pm = amalgam.models[prev_f]
            _, reps, _ = amalgam.transversal(prev_f)
            e = pm.mul(reps[prev_c], amalgam.a_elements[prev_f][a])
            a, c = _decompose(amalgam, prev_f, e)
            stack.append((prev_f, c))
            a = _push_left(amalgam, stack, len(stack) - 1, a)
        prefix = amalgam.a_mul(prefix, a)
    syllables = tuple(stack)
    words = tuple(amalgam.transversal(f)[2][c] for f, c in syllables)
    return NormalWord(prefix, syllables, words, tuple(word))


def normal_word(amalgam: Amalgam, nf: NormalWord, factor_hint=1) -> Word:
    """A word spelling ``nf`` syllable by syllable.

    The A-part is merged into the first syllable; with no syllables it is
    written over factor ``factor_hint``.
    """
    if not nf.syllables:
        return amalgam.a_word(factor_hint, nf.prefix)
    return tuple(l for s in syllable_words(amalgam, nf) for l in s[1])


def syllable_words(amalgam: Amalgam, nf: NormalWord):
    """``[(factor, word), ...]``, the A-part folded into the first syllable."""
    out = []
    for k, (f, c) in enumerate(nf.syllables):
        if k == 0:
            model = amalgam.models[f]
            rep = amalgam.transversal(f)[1][c]
            e = model.mul(amalgam.a_elements[f][nf.prefix], rep)
            out.append((f, model.words[e]))
        else:
            out.append((f, nf.rep_words[k]))
    return out


def format_normal(amalgam: Amalgam, nf: NormalWord) -> str:
    parts = [f"[A: {format_word(amalgam.a_word(1, nf.prefix))}]"]
    parts += [f"({f}:{format_word(w)})" for (f, _), w in zip(nf.syllables, nf.rep_words)]
    return " ".join(parts)


def equal_in_g(amalgam: Amalgam, w1: Word, w2: Word) -> bool:
    return normal_form(amalgam, w1) == normal_form(amalgam, w2)


def syllable_length(amalgam: Amalgam, word: Word) -> int:
    return normal_form(amalgam, word).length


def is_identity(amalgam: Amalgam, word: Word) -> bool:
    return normal_form(amalgam, word).is_identity()
