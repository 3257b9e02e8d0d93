#!/usr/bin/env python3
"""Regenerate crates/core/resources/lexicon.tsv.

Maps inflected English forms to a root form, with a corpus frequency used to
break ties when a form has several candidate roots. Requires `lemminflect`
and `wordfreq` (pip install lemminflect wordfreq).
"""
import sys

import lemminflect
import wordfreq

VOCAB_SIZE = 40000
MIN_ROOT_ZIPF = 2.8
SCALE = 1e9

# Derivational collapses the inflection tables do not cover.
OVERRIDES = {
    "sexual": "sex",
    "sexually": "sex",
    "relationship": "relation",
    "relationships": "relation",
    "definition": "define",
    "definitions": "define",
    "later": "late",
}


def freq(word):
    return max(1, int(round(wordfreq.word_frequency(word, "en") * SCALE)))


def main(out):
    rows = {}
    for word in wordfreq.top_n_list("en", VOCAB_SIZE):
        if not word.isalpha() or not word.isascii() or len(word) < 2:
            continue
        for lemmas in lemminflect.getAllLemmas(word).values():
            for root in lemmas:
                root = root.lower()
                if root == word or not root.isalpha():
                    continue
                if wordfreq.zipf_frequency(root, "en") < MIN_ROOT_ZIPF:
                    continue
                rows[(word, root)] = freq(root)
    for word, root in OVERRIDES.items():
        rows[(word, root)] = freq(root) * 100
    with open(out, "w", encoding="utf-8") as fh:
        fh.write("# inflected\troot\tfrequency\n")
        for (word, root), f in sorted(rows.items()):
            fh.write(f"{word}\t{root}\t{f}\n")
    print(f"{len(rows)} entries -> {out}", file=sys.stderr)


if __name__ == "__main__":
    main(sys.argv[1] if len(sys.argv) > 1 else "crates/core/resources/lexicon.tsv")
