#!/usr/bin/env python3
# Copyright 2026 The rankagg Authors.
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     https://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""Writes the miniature LETOR fixture in the MQ column layout.

Each query has a latent relevance score per document. Grades are 2 for the
top 15%, 1 for the next 25%, 0 otherwise. Feature columns and rank-list
columns are noisy linear views of the latent score, min-max scaled within the
query.
"""

import argparse

import numpy as np

MQ_LISTS = set(range(11, 16)) | set(range(21, 41))
N_COLUMNS = 46


def minmax(v):
    lo, hi = v.min(), v.max()
    return (v - lo) / (hi - lo) if hi > lo else np.zeros_like(v)


def make_query(rng, n):
    s = rng.normal(size=n)
    order = np.argsort(-s)
    grades = np.zeros(n, dtype=int)
    grades[order[: int(round(0.4 * n))]] = 1
    grades[order[: int(round(0.15 * n))]] = 2
    cols = {}
    for j in range(1, N_COLUMNS + 1):
        if j in MQ_LISTS:
            weight, noise = rng.uniform(0.2, 1.0), rng.uniform(3.0, 6.0)
        else:
            weight, noise = rng.uniform(0.0, 1.0), 1.0
        cols[j] = minmax(weight * s + noise * rng.normal(size=n))
    return grades, cols


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--seed", type=int, default=20)
    ap.add_argument("--queries", type=int, default=5)
    ap.add_argument("output")
    args = ap.parse_args()
    rng = np.random.default_rng(args.seed)
    with open(args.output, "w") as out:
        for q in range(args.queries):
            qid = 10001 + q
            n = int(rng.integers(24, 33))
            grades, cols = make_query(rng, n)
            for i in range(n):
                feats = " ".join(f"{j}:{cols[j][i]:.6f}" for j in range(1, N_COLUMNS + 1))
                out.write(f"{grades[i]} qid:{qid} {feats} #docid = D{qid}-{i:02d}\n")


if __name__ == "__main__":
    main()
