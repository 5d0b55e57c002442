"""Deterministic rule-based coarse part-of-speech tagger.

Five tags: NOUN, VERB, ADJ, ADV, OTHER.  Lookup order is verb lexicon,
function-word list, adverb lexicon, adjective lexicon, suffix rules, and
finally NOUN as the open-class default.  The rules are intentionally
simple; the point is a reproducible coarse signal, not treebank accuracy.
"""

from __future__ import annotations

TAGS = ("NOUN", "VERB", "ADJ", "ADV", "OTHER")

# be/have/do, modals, and frequent irregulars in their common surface forms
_VERBS = frozenset("""
be am is are was were been being do does did done have has had having
will would can could shall should may might must
go goes went gone going get gets got gotten make makes made know knows
knew known take takes took taken see sees saw seen come comes came say
says said find finds found give gives gave given tell tells told think
thinks thought become became leave leaves left feel feels felt put puts
bring brings brought begin begins began begun keep keeps kept hold holds
held write writes wrote written stand stands stood hear hears heard let
lets mean means meant meet meets met pay pays paid read reads run runs
ran sell sells sold send sends sent sit sits sat speak speaks spoke
spoken spend spends spent buy buys bought catch catches caught choose
chooses chose chosen draw draws drew drawn drive drives drove driven eat
eats ate eaten fall falls fell fallen fight fights fought fly flies flew
flown forget forgets forgot grow grows grew grown hide hides hid hit
hits lose loses lost rise rises rose risen sing sings sang sung sleep
sleeps slept swim swims swam throw throws threw thrown understand
understands understood wear wears wore worn win wins won wake wakes woke
break breaks broke broken
""".split())

# determiners, pronouns, prepositions, conjunctions, negation
_FUNCTION = frozenset("""
the a an this that these those each every some any no all both either
neither such
i you he she it we they me him her us them my your his its our their
mine yours hers ours theirs who whom whose which what myself yourself
himself herself itself ourselves themselves
of in to for with on at by from up about into over after under between
through during before above below around near without within along
across behind beyond off out down upon against among
and but or nor so yet because although though while if when since unless
until whether whereas than as
not there then
""".split())

_ADVERBS = frozenset("""
very too also never always often again soon quite rather almost already
here now just only really sometimes together away still even ever far
maybe perhaps instead once twice later early enough well
""".split())

_ADJECTIVES = frozenset("""
good bad big small new old high low long short hot cold easy hard late
young strong weak large little great same different important right
wrong white black red blue green few many much more most other own last
first second next third true false full empty deep wide heavy light
""".split())

_NOUN_SUFFIXES = ("tion", "sion", "ment", "ness", "ance", "ence", "ship", "hood", "ism", "ity", "ology")
_ADJ_SUFFIXES = ("ous", "ful", "less", "able", "ible", "ive", "ical", "ish")


def tag_token(token: str) -> str:
    if any(ch.isdigit() for ch in token):
        return "OTHER"
    if token in _VERBS:
        return "VERB"
    if token in _FUNCTION:
        return "OTHER"
    if token in _ADVERBS:
        return "ADV"
    if token in _ADJECTIVES:
        return "ADJ"
    if len(token) >= 5:
        if token.endswith("ly"):
            return "ADV"
        if token.endswith(("ing", "ed")):
            return "VERB"
        if token.endswith(_NOUN_SUFFIXES):
            return "NOUN"
        if token.endswith(_ADJ_SUFFIXES):
            return "ADJ"
    return "NOUN"


def tag_tokens(tokens: list[str]) -> list[str]:
    """One coarse tag per token, same length and order."""
    return [tag_token(tok) for tok in tokens]
