"""Porter stemmer, the classic 1980 algorithm (steps 1a-5b).

This follows the originally published rule tables, without the departures
that later crept into the widely circulated C implementation (no early
return for short words, no LOGI rule, ABLI maps to ABLE). Within a step the
rule with the longest matching suffix is the only one considered; if its
condition fails, the step leaves the word unchanged.
"""

_VOWELS = "aeiou"


def _is_consonant(word: str, i: int) -> bool:
    ch = word[i]
    if ch in _VOWELS:
        return False
    if ch == "y":
        return i == 0 or not _is_consonant(word, i - 1)
    return True


def _measure(stem: str) -> int:
    """Count of vowel-consonant sequences: [C](VC)^m[V]."""
    m = 0
    prev_vowel = False
    for i in range(len(stem)):
        if _is_consonant(stem, i):
            if prev_vowel:
                m += 1
            prev_vowel = False
        else:
            prev_vowel = True
    return m


def _contains_vowel(stem: str) -> bool:
    return any(not _is_consonant(stem, i) for i in range(len(stem)))


def _ends_double_consonant(stem: str) -> bool:
    return (
        len(stem) >= 2
        and stem[-1] == stem[-2]
        and _is_consonant(stem, len(stem) - 1)
    )


def _ends_cvc(stem: str) -> bool:
    """Consonant-vowel-consonant ending where the final consonant is not w, x, y."""
    if len(stem) < 3:
        return False
    return (
        _is_consonant(stem, len(stem) - 3)
        and not _is_consonant(stem, len(stem) - 2)
        and _is_consonant(stem, len(stem) - 1)
        and stem[-1] not in "wxy"
    )


def _apply_first(word, rules):
    """Apply the rule with the longest matching suffix; None if no suffix matched.

    rules: list of (suffix, replacement, condition-on-stem or None). Returns
    the rewritten word, or the word untouched when the matched rule's
    condition fails (no further rule in the step is tried).
    """
    best = None
    for suffix, repl, cond in rules:
        if word.endswith(suffix) and (best is None or len(suffix) > len(best[0])):
            best = (suffix, repl, cond)
    if best is None:
        return None
    suffix, repl, cond = best
    stem = word[: len(word) - len(suffix)]
    if cond is None or cond(stem):
        return stem + repl
    return word


def _step1a(word):
    out = _apply_first(
        word,
        [("sses", "ss", None), ("ies", "i", None), ("ss", "ss", None), ("s", "", None)],
    )
    return word if out is None else out


def _step1b(word):
    if word.endswith("eed"):
        stem = word[:-3]
        return stem + "ee" if _measure(stem) > 0 else word
    if word.endswith("ed"):
        stem = word[:-2]
        if not _contains_vowel(stem):
            return word
    elif word.endswith("ing"):
        stem = word[:-3]
        if not _contains_vowel(stem):
            return word
    else:
        return word
    # ED or ING was removed: tidy up the stem
    if stem.endswith(("at", "bl", "iz")):
        return stem + "e"
    if _ends_double_consonant(stem) and stem[-1] not in "lsz":
        return stem[:-1]
    if _measure(stem) == 1 and _ends_cvc(stem):
        return stem + "e"
    return stem


def _step1c(word):
    if word.endswith("y") and _contains_vowel(word[:-1]):
        return word[:-1] + "i"
    return word


_M_POSITIVE = _measure  # conditions below read as m(stem) > 0 / > 1


def _cond_m_gt0(stem):
    return _measure(stem) > 0


def _cond_m_gt1(stem):
    return _measure(stem) > 1


_STEP2_RULES = [
    ("ational", "ate", _cond_m_gt0),
    ("tional", "tion", _cond_m_gt0),
    ("enci", "ence", _cond_m_gt0),
    ("anci", "ance", _cond_m_gt0),
    ("izer", "ize", _cond_m_gt0),
    ("abli", "able", _cond_m_gt0),
    ("alli", "al", _cond_m_gt0),
    ("entli", "ent", _cond_m_gt0),
    ("eli", "e", _cond_m_gt0),
    ("ousli", "ous", _cond_m_gt0),
    ("ization", "ize", _cond_m_gt0),
    ("ation", "ate", _cond_m_gt0),
    ("ator", "ate", _cond_m_gt0),
    ("alism", "al", _cond_m_gt0),
    ("iveness", "ive", _cond_m_gt0),
    ("fulness", "ful", _cond_m_gt0),
    ("ousness", "ous", _cond_m_gt0),
    ("aliti", "al", _cond_m_gt0),
    ("iviti", "ive", _cond_m_gt0),
    ("biliti", "ble", _cond_m_gt0),
]

_STEP3_RULES = [
    ("icate", "ic", _cond_m_gt0),
    ("ative", "", _cond_m_gt0),
    ("alize", "al", _cond_m_gt0),
    ("iciti", "ic", _cond_m_gt0),
    ("ical", "ic", _cond_m_gt0),
    ("ful", "", _cond_m_gt0),
    ("ness", "", _cond_m_gt0),
]


def _cond_ion(stem):
    return _measure(stem) > 1 and stem.endswith(("s", "t"))


_STEP4_RULES = [
    ("al", "", _cond_m_gt1),
    ("ance", "", _cond_m_gt1),
    ("ence", "", _cond_m_gt1),
    ("er", "", _cond_m_gt1),
    ("ic", "", _cond_m_gt1),
    ("able", "", _cond_m_gt1),
    ("ible", "", _cond_m_gt1),
    ("ant", "", _cond_m_gt1),
    ("ement", "", _cond_m_gt1),
    ("ment", "", _cond_m_gt1),
    ("ent", "", _cond_m_gt1),
    ("ion", "", _cond_ion),
    ("ou", "", _cond_m_gt1),
    ("ism", "", _cond_m_gt1),
    ("ate", "", _cond_m_gt1),
    ("iti", "", _cond_m_gt1),
    ("ous", "", _cond_m_gt1),
    ("ive", "", _cond_m_gt1),
    ("ize", "", _cond_m_gt1),
]


def _step2(word):
    out = _apply_first(word, _STEP2_RULES)
    return word if out is None else out


def _step3(word):
    out = _apply_first(word, _STEP3_RULES)
    return word if out is None else out


def _step4(word):
    out = _apply_first(word, _STEP4_RULES)
    return word if out is None else out


def _step5a(word):
    if word.endswith("e"):
        stem = word[:-1]
        m = _measure(stem)
        if m > 1 or (m == 1 and not _ends_cvc(stem)):
            return stem
    return word


def _step5b(word):
    if _measure(word) > 1 and _ends_double_consonant(word) and word.endswith("l"):
        return word[:-1]
    return word


def stem(token: str) -> str:
    """Stem a lowercase alphanumeric token; digits-only tokens pass through."""
    if not token or token.isdigit():
        return token
    word = _step1a(token)
    word = _step1b(word)
    word = _step1c(word)
    word = _step2(word)
    word = _step3(word)
    word = _step4(word)
    word = _step5a(word)
    word = _step5b(word)
    return word
