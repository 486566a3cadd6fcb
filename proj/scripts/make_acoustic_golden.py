#!/usr/bin/env python3
"""Regenerates data/acoustic_norm_golden.csv from data/acoustic_raw.csv.

Independent oracle for the acoustic normalization: reads the raw CSV,
applies

    cost(i,j) = max(0, raw(i,i) - raw(i,j)) / Z
    Z        = max over all (i,j) of (raw(i,i) - raw(i,j))

with an exactly-zero diagonal, and writes the result.  The normalization
test compares the library output against this file.
"""

import os


def main():
    data_dir = os.path.join(os.path.dirname(__file__), "..", "data")
    with open(os.path.join(data_dir, "acoustic_raw.csv")) as f:
        lines = [ln.strip() for ln in f if ln.strip()]
    symbols = lines[0].split(",")
    n = len(symbols)
    raw = [[float(v) for v in ln.split(",")] for ln in lines[1:]]
    assert len(raw) == n and all(len(r) == n for r in raw)

    z = max(raw[i][i] - raw[i][j] for i in range(n) for j in range(n))
    assert z > 0, "acoustic table has no contrast"

    out = os.path.join(data_dir, "acoustic_norm_golden.csv")
    with open(out, "w") as f:
        f.write(",".join(symbols) + "\n")
        for i in range(n):
            row = []
            for j in range(n):
                if i == j:
                    row.append("0")
                else:
                    row.append("%.17g" % (max(0.0, raw[i][i] - raw[i][j]) / z))
            f.write(",".join(row) + "\n")
    print("wrote", os.path.normpath(out))


if __name__ == "__main__":
    main()
