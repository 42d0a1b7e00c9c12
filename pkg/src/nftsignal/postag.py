"""Deterministic rule-based part-of-speech tagging into NOUN / VERB / OTHER.

The built-in tagger combines a closed-class stoplist, a curated lexicon of
crypto/market vocabulary, and suffix heuristics for everything else.  It is
intentionally simple: no model downloads, identical output everywhere.  Any
object with a ``tag(tokens) -> list[str]`` method can be dropped in instead
(e.g. an adapter around a statistical tagger).
"""

from __future__ import annotations

from typing import Sequence

NOUN = "NOUN"
VERB = "VERB"
OTHER = "OTHER"

# function words and other closed-class tokens that are never event words
_FUNCTION_WORDS = frozenset("""
    a an the and or but if then else when while because so than too very
    not no nor only just also even still yet again once ever never always
    here there where how why what which who whom whose this that these those
    i me my mine we us our ours you your yours he him his she her hers it its
    they them their theirs am is are was were be been being do does did done
    doing have has had having will would shall should may might must can
    could of at by for with about against between into through during before
    after above below to from up down in out on off over under further
    each few more most some such both all any other another same as
    ok okay oh hey hi hello yes yeah yep nah
    lol lmao omg wow hmm huh
""".split())

# words whose tag the suffix rules would get wrong, or that matter downstream
_LEXICON: dict[str, str] = {
    # market vocabulary
    "nft": NOUN, "nfts": NOUN, "eth": NOUN, "ethereum": NOUN, "crypto": NOUN,
    "bitcoin": NOUN, "btc": NOUN, "token": NOUN, "coin": NOUN, "wallet": NOUN,
    "floor": NOUN, "price": NOUN, "market": NOUN, "sale": NOUN, "volume": NOUN,
    "holder": NOUN, "owner": NOUN, "whale": NOUN, "gas": NOUN, "chain": NOUN,
    "block": NOUN, "opensea": NOUN, "money": NOUN, "profit": NOUN, "offer": NOUN,
    "transaction": NOUN, "supply": NOUN, "mint": VERB, "buy": VERB, "sell": VERB,
    "sold": VERB, "bought": VERB, "hold": VERB, "hodl": VERB, "trade": VERB,
    "flip": VERB, "earn": VERB, "stake": VERB, "burn": VERB, "claim": VERB,
    "list": VERB, "delist": VERB, "bid": VERB, "sweep": VERB, "pump": VERB,
    "dump": VERB, "own": VERB, "drop": VERB, "airdrop": NOUN, "whitelist": NOUN,
    # community / event vocabulary
    "team": NOUN, "project": NOUN, "community": NOUN, "roadmap": NOUN,
    "founder": NOUN, "member": NOUN, "artist": NOUN, "art": NOUN,
    "collection": NOUN, "avatar": NOUN, "pfp": NOUN, "meme": NOUN,
    "giveaway": NOUN, "event": NOUN, "launch": VERB, "release": VERB,
    "reveal": VERB, "announce": VERB, "join": VERB, "win": VERB, "check": VERB,
    "keep": VERB, "miss": VERB, "start": VERB, "use": VERB, "like": VERB,
    "love": VERB, "follow": VERB, "share": VERB, "vote": VERB, "congrats": NOUN,
    "congrat": NOUN, "gm": NOUN, "wagmi": NOUN, "fam": NOUN, "discord": NOUN,
    "twitter": NOUN, "news": NOUN, "derivative": NOUN, "serum": NOUN,
    "metaverse": NOUN, "game": NOUN, "land": NOUN, "world": NOUN,
    # creatures and collection mascots that show up constantly
    "ape": NOUN, "punk": NOUN, "cat": NOUN, "kitty": NOUN, "toad": NOUN,
    "bird": NOUN, "doodle": NOUN, "banana": NOUN, "nest": VERB, "milk": NOUN,
    # time words (nouns; kept so they stay extractable)
    "day": NOUN, "week": NOUN, "month": NOUN, "year": NOUN, "hour": NOUN,
    "today": NOUN, "tomorrow": NOUN, "tonight": NOUN, "holders": NOUN,
    # generic
    "people": NOUN, "guy": NOUN, "man": NOUN, "friend": NOUN, "thing": NOUN,
    "time": NOUN, "way": NOUN, "future": NOUN, "need": VERB, "want": VERB,
    "make": VERB, "get": VERB, "go": VERB, "come": VERB, "see": VERB,
    "know": VERB, "think": VERB, "look": VERB, "find": VERB, "give": VERB,
    "take": VERB, "say": VERB, "tell": VERB, "feel": VERB, "hit": VERB,
    "wait": VERB, "cancel": VERB, "fail": VERB, "lose": VERB, "afford": VERB,
    "raise": VERB, "suit": NOUN, "scammer": NOUN, "scam": NOUN,
}

_ING_EXCEPTIONS = frozenset(
    "thing king ring wing spring string sing bring morning evening "
    "nothing something anything everything during".split()
)
_ED_EXCEPTIONS = frozenset("hundred speed breed seed feed need indeed shed sled".split())
_NOUN_SUFFIXES = ("tion", "sion", "ment", "ness", "ship", "ance", "ence", "ity", "ism", "ist")
_VERB_SUFFIXES = ("ize", "ise", "ify")


def lexicon_words() -> tuple[str, ...]:
    """Sorted words of the built-in lexicon (handy as a synthetic text pool)."""
    return tuple(sorted(_LEXICON))


class LexiconTagger:
    """Lexicon lookup with suffix-heuristic fallback; defaults unknowns to NOUN."""

    def __init__(self, extra_lexicon: dict[str, str] | None = None):
        self._lexicon = dict(_LEXICON)
        if extra_lexicon:
            self._lexicon.update({w.lower(): t for w, t in extra_lexicon.items()})

    def tag(self, tokens: Sequence[str]) -> list[str]:
        return [self.tag_word(t) for t in tokens]

    def tag_word(self, token: str) -> str:
        w = token.lower()
        if not any(ch.isalpha() for ch in w):
            return OTHER
        if w in _FUNCTION_WORDS:
            return OTHER
        if w in self._lexicon:
            return self._lexicon[w]
        # plural lookup: holders -> holder, apes -> ape, punches -> punch
        if w.endswith("s") and len(w) >= 3:
            stem = w[:-1]
            if stem in self._lexicon:
                return self._lexicon[stem]
            if w.endswith("es") and w[:-2] in self._lexicon:
                return self._lexicon[w[:-2]]
        if w.endswith("ing") and len(w) >= 5 and w not in _ING_EXCEPTIONS:
            return VERB
        if w.endswith("ed") and len(w) >= 4 and w not in _ED_EXCEPTIONS:
            return VERB
        if w.endswith(_NOUN_SUFFIXES):
            return NOUN
        if w.endswith(_VERB_SUFFIXES):
            return VERB
        if w.endswith("ly") and len(w) >= 4:
            return OTHER  # adverbs
        return NOUN
