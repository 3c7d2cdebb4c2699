"""Surface-form normalization, tokenization, and suffix-stripping stemmer.

Every component that compares strings (graph store lookups, synonym
clustering, lexicon matching, the sparse index) must go through the same
three functions so their notions of equality agree:

    normalize(s)   canonical surface form (case-folded, ASCII dashes/quotes)
    tokenize(s)    normalized word tokens
    stem(token)    Porter-stemmed token
"""

from __future__ import annotations

import re

# Unicode dash/quote variants folded to their ASCII counterparts before
# comparison. Kept deliberately small and explicit.
_CHAR_FOLD = {
    "‐": "-", "‑": "-", "‒": "-", "–": "-",
    "—": "-", "―": "-", "−": "-",
    "‘": "'", "’": "'", "‚": "'", "‛": "'",
    "“": '"', "”": '"', "„": '"', "‟": '"',
    "«": '"', "»": '"',
}

_FOLD_RE = re.compile("|".join(map(re.escape, _CHAR_FOLD)))
_WS_RE = re.compile(r"\s+")
_TOKEN_RE = re.compile(r"[a-z0-9]+")


def normalize(text: str) -> str:
    """Canonical surface form: case-fold, trim, collapse internal
    whitespace, fold Unicode dashes/quotes to ASCII."""
    text = _FOLD_RE.sub(lambda m: _CHAR_FOLD[m.group(0)], text)
    return _WS_RE.sub(" ", text.casefold()).strip()


def tokenize(text: str) -> list[str]:
    """Alphanumeric word tokens of the normalized text. Hyphens and all
    other punctuation act as separators."""
    return _TOKEN_RE.findall(normalize(text))


def stem_tokens(text: str) -> list[str]:
    """Tokenize then stem; the shared preprocessing for title matching
    and sparse indexing."""
    return [stem(t) for t in tokenize(text)]


# ---------------------------------------------------------------------------
# Porter stemmer (1980 suffix-stripping algorithm), self-contained so the
# stems are identical on every platform and never drift with a dependency.
# ---------------------------------------------------------------------------

def stem(token: str) -> str:
    """Suffix-stripped stem of a single token.

    Runs the Porter pass repeatedly until the word stops changing, so
    stem(stem(x)) == stem(x) holds for every input (a single pass does
    not guarantee that: "agreed" -> "agre" -> "agr"). Case-folds first;
    tokens shorter than three characters are returned unchanged.
    """
    word = token.casefold()
    for _ in range(8):
        if len(word) <= 2:
            return word
        out = _Porter(word).run()
        if out == word:
            return out
        word = out
    return word


class _Porter:
    """One stemming pass over a single word buffer.

    `b` is the working buffer, `k` the index of its last live character,
    `j` the end of the stem established by the latest `ends` call.
    """

    def __init__(self, word: str):
        self.b = word
        self.k = len(word) - 1
        self.j = 0

    def run(self) -> str:
        self._step1ab()
        self._step1c()
        self._step2()
        self._step3()
        self._step4()
        self._step5()
        return self.b[: self.k + 1]

    # -- character classes -------------------------------------------------

    def _cons(self, i: int) -> bool:
        ch = self.b[i]
        if ch in "aeiou":
            return False
        if ch == "y":
            return True if i == 0 else not self._cons(i - 1)
        return True

    def _m(self) -> int:
        """Number of VC sequences in b[0..j]."""
        n = 0
        i = 0
        while True:
            if i > self.j:
                return n
            if not self._cons(i):
                break
            i += 1
        i += 1
        while True:
            while True:
                if i > self.j:
                    return n
                if self._cons(i):
                    break
                i += 1
            i += 1
            n += 1
            while True:
                if i > self.j:
                    return n
                if not self._cons(i):
                    break
                i += 1
            i += 1

    def _vowel_in_stem(self) -> bool:
        return any(not self._cons(i) for i in range(self.j + 1))

    def _double_cons(self, j: int) -> bool:
        if j < 1 or self.b[j] != self.b[j - 1]:
            return False
        return self._cons(j)

    def _cvc(self, i: int) -> bool:
        if i < 2 or not self._cons(i) or self._cons(i - 1) or not self._cons(i - 2):
            return False
        return self.b[i] not in "wxy"

    # -- buffer edits ------------------------------------------------------

    def _ends(self, s: str) -> bool:
        length = len(s)
        if length > self.k + 1:
            return False
        if self.b[self.k - length + 1 : self.k + 1] != s:
            return False
        self.j = self.k - length
        return True

    def _set_to(self, s: str) -> None:
        self.b = self.b[: self.j + 1] + s
        self.k = self.j + len(s)

    def _replace_if_m(self, s: str) -> None:
        if self._m() > 0:
            self._set_to(s)

    # -- algorithm steps ---------------------------------------------------

    def _step1ab(self) -> None:
        if self.b[self.k] == "s":
            if self._ends("sses"):
                self.k -= 2
            elif self._ends("ies"):
                self._set_to("i")
            elif self.b[self.k - 1] != "s":
                self.k -= 1
        if self._ends("eed"):
            if self._m() > 0:
                self.k -= 1
        elif (self._ends("ed") or self._ends("ing")) and self._vowel_in_stem():
            self.k = self.j
            if self._ends("at"):
                self._set_to("ate")
            elif self._ends("bl"):
                self._set_to("ble")
            elif self._ends("iz"):
                self._set_to("ize")
            elif self._double_cons(self.k):
                self.k -= 1
                if self.b[self.k] in "lsz":
                    self.k += 1
            elif self._m() == 1 and self._cvc(self.k):
                self._set_to("e")

    def _step1c(self) -> None:
        if self._ends("y") and self._vowel_in_stem():
            self.b = self.b[: self.k] + "i" + self.b[self.k + 1 :]

    def _step2(self) -> None:
        if self.k < 1:
            return
        ch = self.b[self.k - 1]
        if ch == "a":
            if self._ends("ational"):
                self._replace_if_m("ate")
            elif self._ends("tional"):
                self._replace_if_m("tion")
        elif ch == "c":
            if self._ends("enci"):
                self._replace_if_m("ence")
            elif self._ends("anci"):
                self._replace_if_m("ance")
        elif ch == "e":
            if self._ends("izer"):
                self._replace_if_m("ize")
        elif ch == "l":
            if self._ends("bli"):
                self._replace_if_m("ble")
            elif self._ends("alli"):
                self._replace_if_m("al")
            elif self._ends("entli"):
                self._replace_if_m("ent")
            elif self._ends("eli"):
                self._replace_if_m("e")
            elif self._ends("ousli"):
                self._replace_if_m("ous")
        elif ch == "o":
            if self._ends("ization"):
                self._replace_if_m("ize")
            elif self._ends("ation"):
                self._replace_if_m("ate")
            elif self._ends("ator"):
                self._replace_if_m("ate")
        elif ch == "s":
            if self._ends("alism"):
                self._replace_if_m("al")
            elif self._ends("iveness"):
                self._replace_if_m("ive")
            elif self._ends("fulness"):
                self._replace_if_m("ful")
            elif self._ends("ousness"):
                self._replace_if_m("ous")
        elif ch == "t":
            if self._ends("aliti"):
                self._replace_if_m("al")
            elif self._ends("iviti"):
                self._replace_if_m("ive")
            elif self._ends("biliti"):
                self._replace_if_m("ble")
        elif ch == "g":
            if self._ends("logi"):
                self._replace_if_m("log")

    def _step3(self) -> None:
        ch = self.b[self.k]
        if ch == "e":
            if self._ends("icate"):
                self._replace_if_m("ic")
            elif self._ends("ative"):
                self._replace_if_m("")
            elif self._ends("alize"):
                self._replace_if_m("al")
        elif ch == "i":
            if self._ends("iciti"):
                self._replace_if_m("ic")
        elif ch == "l":
            if self._ends("ical"):
                self._replace_if_m("ic")
            elif self._ends("ful"):
                self._replace_if_m("")
        elif ch == "s":
            if self._ends("ness"):
                self._replace_if_m("")

    def _step4(self) -> None:
        if self.k < 1:
            return
        ch = self.b[self.k - 1]
        if ch == "a":
            if not self._ends("al"):
                return
        elif ch == "c":
            if not (self._ends("ance") or self._ends("ence")):
                return
        elif ch == "e":
            if not self._ends("er"):
                return
        elif ch == "i":
            if not self._ends("ic"):
                return
        elif ch == "l":
            if not (self._ends("able") or self._ends("ible")):
                return
        elif ch == "n":
            if not (self._ends("ant") or self._ends("ement")
                    or self._ends("ment") or self._ends("ent")):
                return
        elif ch == "o":
            if not ((self._ends("ion") and self.j >= 0 and self.b[self.j] in "st")
                    or self._ends("ou")):
                return
        elif ch == "s":
            if not self._ends("ism"):
                return
        elif ch == "t":
            if not (self._ends("ate") or self._ends("iti")):
                return
        elif ch == "u":
            if not self._ends("ous"):
                return
        elif ch == "v":
            if not self._ends("ive"):
                return
        elif ch == "z":
            if not self._ends("ize"):
                return
        else:
            return
        if self._m() > 1:
            self.k = self.j

    def _step5(self) -> None:
        self.j = self.k
        if self.b[self.k] == "e":
            a = self._m()
            if a > 1 or (a == 1 and not self._cvc(self.k - 1)):
                self.k -= 1
        if self.b[self.k] == "l" and self._double_cons(self.k) and self._m() > 1:
            self.k -= 1
