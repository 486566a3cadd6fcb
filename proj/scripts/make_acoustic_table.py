#!/usr/bin/env python3
"""Regenerates data/acoustic_raw.csv, the shipped synthetic acoustic table.

The table plays the role of a phoneme-recognition log-likelihood matrix:
row = spoken phoneme, column = recognized phoneme, raw(i,i) = 0 and
raw(i,j) < 0 off the diagonal.  Values are synthetic but structured:

  * phonemes in the same linguistic cluster are acoustically close,
  * cross-cluster phonemes of the same broad class (vowel/stop/...) are
    moderately far,
  * everything else is far,
  * a hand-picked list of directional "confusable pairs" is pinned to
    fixed sub-0.5 dissimilarities so that worked examples and the demo
    corpus behave deterministically,
  * (hh, iy) is pinned to dissimilarity 1.0 so the normalization scale
    is exact.

Dissimilarity c(i,j) in [0,1] is mapped to raw(i,j) = -SCALE * c(i,j),
so normalizing (raw(i,i) - raw(i,j)) / max(...) recovers c exactly.

Deterministic: jitter comes from splitmix64 keyed on (i, j).
"""

import os

SCALE = 4.0

PHONEMES = [
    "aa", "ae", "ah", "ao", "aw", "ay", "b", "ch", "d", "dh",
    "eh", "er", "ey", "f", "g", "hh", "ih", "iy", "jh", "k",
    "l", "m", "n", "ng", "ow", "oy", "p", "r", "s", "sh",
    "t", "th", "uh", "uw", "v", "w", "y", "z", "zh",
]

CLUSTERS = [
    ["iy", "ih", "ay", "y"],
    ["uw", "uh", "w"],
    ["k", "g"],
    ["m"],
    ["ey", "eh"],
    ["er", "r", "l"],
    ["f", "v"],
    ["n", "ng"],
    ["ae", "aa", "ao", "ah", "aw"],
    ["p", "b"],
    ["s", "z", "sh", "zh"],
    ["th", "dh"],
    ["ow", "oy"],
    ["t", "d"],
    ["ch", "jh"],
    ["hh"],
]

CLASSES = {
    "vowel": ["aa", "ae", "ah", "ao", "aw", "ay", "eh", "er", "ey", "ih",
              "iy", "ow", "oy", "uh", "uw"],
    "glide": ["w", "y", "r", "l"],
    "nasal": ["m", "n", "ng"],
    "stop": ["p", "b", "t", "d", "k", "g"],
    "fricative": ["f", "v", "s", "z", "sh", "zh", "th", "dh", "hh"],
    "affricate": ["ch", "jh"],
}

ADJACENT_CLASSES = {
    frozenset(("stop", "affricate")),
    frozenset(("fricative", "affricate")),
    frozenset(("vowel", "glide")),
}

# Directional cross-cluster confusable pairs: (spoken, recognized) -> c.
# Rows "p", "ey" (beyond iy/ih) and "n" are deliberately left clean so the
# candidate-enumeration worked example holds at search radius 0.5.
CHEAP_PAIRS = {
    ("ey", "iy"): 0.35, ("iy", "ey"): 0.38,
    ("ey", "ih"): 0.42, ("ih", "ey"): 0.45,
    ("ah", "er"): 0.30, ("er", "ah"): 0.33,
    ("s", "th"): 0.25, ("th", "s"): 0.27,
    ("d", "dh"): 0.28, ("dh", "d"): 0.31,
    ("uw", "ow"): 0.34, ("ow", "uw"): 0.36,
    ("k", "t"): 0.40, ("t", "k"): 0.43,
    ("f", "th"): 0.38, ("th", "f"): 0.41,
    ("z", "dh"): 0.36, ("dh", "z"): 0.39,
}

FAR_PAIR = ("hh", "iy")  # pinned to exactly 1.0


def splitmix64(x):
    mask = (1 << 64) - 1
    x = (x + 0x9E3779B97F4A7C15) & mask
    z = x
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & mask
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & mask
    return z ^ (z >> 31)


def unit(i, j):
    """Deterministic jitter in [0, 1) for cell (i, j)."""
    return splitmix64(i * 39 + j) / float(1 << 64)


def build():
    idx = {s: k for k, s in enumerate(PHONEMES)}
    cluster_of = {}
    for c, members in enumerate(CLUSTERS):
        for s in members:
            cluster_of[s] = c
    class_of = {}
    for name, members in CLASSES.items():
        for s in members:
            class_of[s] = name

    n = len(PHONEMES)
    cost = [[0.0] * n for _ in range(n)]
    for a in PHONEMES:
        for b in PHONEMES:
            i, j = idx[a], idx[b]
            if i == j:
                continue
            u = unit(i, j)
            if cluster_of[a] == cluster_of[b]:
                c = 0.08 + 0.10 * u
            elif class_of[a] == class_of[b]:
                c = 0.55 + 0.30 * u
            elif frozenset((class_of[a], class_of[b])) in ADJACENT_CLASSES:
                c = 0.70 + 0.20 * u
            else:
                c = 0.82 + 0.18 * u
            cost[i][j] = c

    for (a, b), c in CHEAP_PAIRS.items():
        cost[idx[a]][idx[b]] = c
    cost[idx[FAR_PAIR[0]]][idx[FAR_PAIR[1]]] = 1.0
    return cost


def main():
    cost = build()
    out = os.path.join(os.path.dirname(__file__), "..", "data",
                       "acoustic_raw.csv")
    with open(out, "w") as f:
        f.write(",".join(PHONEMES) + "\n")
        for row in cost:
            f.write(",".join("%.17g" % (-SCALE * c) for c in row) + "\n")
    print("wrote", os.path.normpath(out))


if __name__ == "__main__":
    main()
