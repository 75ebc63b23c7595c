"""Rule-table verb lemmatizer.

Deterministic and dictionary-free: an exceptions table for irregular forms,
then -ing/-ed/-es/-s stripping with consonant-undoubling and e-restoration
candidates. When a vocabulary of known lemmas is supplied, the first
candidate found in it wins, which removes most guesswork; without one a fixed
preference order applies and some stems come out wrong. That noise is
accepted: extraction recall matters more than exact coverage.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Optional

_VOWELS = "aeiou"
# Letters whose doubling before -ed/-ing usually signals a short stem
# ("stopped" -> stop) as opposed to a genuine double ("telling" -> tell).
_UNDOUBLE = "bdgkmnprt"


def _candidates(token: str) -> list[str]:
    """Possible lemmas for an inflected form, most plausible first."""
    cands = [token]
    for suffix in ("ing", "ed"):
        if token.endswith(suffix) and len(token) > len(suffix) + 1:
            stem = token[: -len(suffix)]
            cands.append(stem)
            if len(stem) > 2 and stem[-1] == stem[-2] and stem[-1] in _UNDOUBLE:
                cands.append(stem[:-1])
            if stem[-1] not in _VOWELS:
                cands.append(stem + "e")
    if token.endswith("ies") and len(token) > 3:
        cands.append(token[:-3] + "y")
    if token.endswith("es") and len(token) > 2:
        cands.append(token[:-2])
        cands.append(token[:-2] + "e")
    if token.endswith("s") and len(token) > 1 and not token.endswith("ss"):
        cands.append(token[:-1])
    seen: set[str] = set()
    out = []
    for c in cands:
        if c not in seen:
            seen.add(c)
            out.append(c)
    return out


@dataclass
class Lemmatizer:
    exceptions: dict[str, str]
    vocab: Optional[frozenset[str]] = None
    _cache: dict[str, str] = field(default_factory=dict, repr=False)

    def with_vocab(self, vocab) -> "Lemmatizer":
        return Lemmatizer(exceptions=self.exceptions, vocab=frozenset(vocab))

    def __call__(self, token: str) -> str:
        token = token.lower()
        hit = self._cache.get(token)
        if hit is not None:
            return hit
        lemma = self._lemmatize(token)
        self._cache[token] = lemma
        return lemma

    def _lemmatize(self, token: str) -> str:
        exc = self.exceptions.get(token)
        if exc is not None:
            return exc
        if self.vocab is not None:
            for c in _candidates(token):
                if c in self.vocab:
                    return c
        # No vocabulary evidence: undouble when the doubling rule fired,
        # restore e only after c/u/v/z, which rarely end English words.
        for suffix in ("ing", "ed"):
            if token.endswith(suffix) and len(token) > len(suffix) + 1:
                stem = token[: -len(suffix)]
                if len(stem) > 2 and stem[-1] == stem[-2] and stem[-1] in _UNDOUBLE:
                    return stem[:-1]
                if stem.endswith(("c", "u", "v", "z")):
                    return stem + "e"
                return stem
        if token.endswith("ies") and len(token) > 3:
            return token[:-3] + "y"
        if token.endswith("es") and len(token) > 2 and token[:-2].endswith(
            ("ch", "sh", "ss", "x", "z", "o")
        ):
            return token[:-2]
        if token.endswith("s") and len(token) > 1 and not token.endswith(("ss", "us", "is")):
            return token[:-1]
        return token


def load_exceptions(path: str | Path) -> dict[str, str]:
    """Read a ``form<TAB>lemma`` table; '#' lines are comments."""
    table: dict[str, str] = {}
    for lineno, line in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split("\t")
        if len(parts) != 2:
            raise ValueError(f"line {lineno}: expected form<TAB>lemma, got {line!r}")
        form, lemma = parts[0].strip().lower(), parts[1].strip().lower()
        if form in table and table[form] != lemma:
            raise ValueError(f"line {lineno}: conflicting entries for {form!r}")
        table[form] = lemma
    return table


def default_lemmatizer(vocab=None) -> Lemmatizer:
    source = resources.files("pparg").joinpath("data/verb_exceptions.tsv")
    with resources.as_file(source) as path:
        table = load_exceptions(path)
    return Lemmatizer(exceptions=table, vocab=frozenset(vocab) if vocab is not None else None)
