#!/usr/bin/env python3
# Copyright 2026 The mushra-stereo Authors.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#      https://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Writes a synthetic MUSHRA score table and its independently computed oracle.

The table follows the session export schema (listener_id, item, series,
condition, score) for 16 listeners over the full 24-trial design. The oracle
holds arithmetic means and exact two-sided signed-rank p-values obtained by
enumerating every sign assignment, so it shares no code with the C++ analysis.
"""

import argparse
import itertools
import json
from pathlib import Path

import numpy as np

SH_ITEMS = ["glock", "Pop", "panDialogM", "panDialogF"]
QN_ITEMS = ["violin", "RnB", "panDialogM", "panDialogF"]
SH_PARAMS = [70, 50, 30, 20, 10]
QN_PARAMS = [0, 6, 12, 18, 24]
HARD_PANNED = {"panDialogM", "panDialogF"}


def series_conditions(series):
    kind = series[:2]
    params = SH_PARAMS if kind == "SH" else QN_PARAMS
    if series.endswith("mix"):
        levels = [2, 4] if kind == "SH" else [1, 2]
        conds = [f"{kind}{params[q]}-{m}" for q in levels for m in ("LR", "MS")] + ["mono"]
    else:
        mode = series[2:]
        conds = [f"{kind}{p}-{mode}" for p in params]
    return conds + ["LP3500", "LP7000", "ref"]


def true_score(item, series, cond, kind):
    if cond == "ref":
        return 97.0
    if cond == "LP3500":
        return 18.0
    if cond == "LP7000":
        return 38.0
    if cond == "mono":
        return 65.0
    name, mode = cond.split("-")
    param = int(name[2:])
    params = SH_PARAMS if kind == "SH" else QN_PARAMS
    q = params.index(param) + 1
    base = 25.0 + 14.0 * q
    if item in HARD_PANNED:
        base += 6.0 if mode == "LR" else -6.0
    if item == "RnB" and series == "QNmix":
        base += 7.0 if mode == "MS" else -7.0
    return base


def exact_signed_rank_p(a, b):
    d = np.asarray(b, float) - np.asarray(a, float)
    d = d[d != 0]
    if d.size == 0:
        return 1.0
    absd = np.abs(d)
    # doubled midranks are integers
    order = np.argsort(absd, kind="stable")
    ranks2 = np.empty(d.size, dtype=np.int64)
    i = 0
    while i < d.size:
        j = i
        while j < d.size and absd[order[j]] == absd[order[i]]:
            j += 1
        ranks2[order[i:j]] = i + j + 1
        i = j
    total = int(ranks2.sum())
    observed = abs(2 * int(ranks2[d > 0].sum()) - total)
    signs = np.array(list(itertools.product([0, 1], repeat=d.size)), dtype=np.int64)
    sums = signs @ ranks2
    return float(np.mean(np.abs(2 * sums - total) >= observed))


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", type=Path, default=Path(__file__).resolve().parents[1] / "tests" / "fixtures")
    ap.add_argument("--listeners", type=int, default=16)
    ap.add_argument("--seed", type=int, default=20260101)
    args = ap.parse_args()

    rng = np.random.default_rng(args.seed)
    listeners = [f"L{i:02d}" for i in range(1, args.listeners + 1)]
    bias = {l: rng.normal(0.0, 4.0) for l in listeners}
    trials = [(s, i) for s in ("SHLR", "SHMS", "SHmix") for i in SH_ITEMS]
    trials += [(s, i) for s in ("QNLR", "QNMS", "QNmix") for i in QN_ITEMS]

    rows = []
    for l in listeners:
        for series, item in trials:
            for cond in series_conditions(series):
                mu = true_score(item, series, cond, series[:2]) + bias[l]
                score = int(np.clip(np.rint(mu + rng.normal(0.0, 8.0)), 0, 100))
                rows.append((l, item, series, cond, score))
    rows.sort()

    args.out.mkdir(parents=True, exist_ok=True)
    with open(args.out / "synthetic_scores.csv", "w", newline="\n") as f:
        f.write("listener_id,item,series,condition,score\n")
        for r in rows:
            f.write(",".join(map(str, r)) + "\n")

    cells = {}
    for l, item, series, cond, score in rows:
        cells.setdefault((item, series, cond), {})[l] = score

    means = [
        {"item": i, "series": s, "condition": c, "n": len(v), "mean": float(np.mean(list(v.values())))}
        for (i, s, c), v in sorted(cells.items())
    ]

    pooled = {}
    for (item, series, cond), v in cells.items():
        for l, score in v.items():
            pooled.setdefault((series, cond), {}).setdefault(l, []).append(score)
    pooled_means = [
        {"series": s, "condition": c, "mean": float(np.mean([np.mean(x) for x in v.values()]))}
        for (s, c), v in sorted(pooled.items())
    ]
    by_condition = {}
    for (item, series, cond), v in cells.items():
        for l, score in v.items():
            by_condition.setdefault(cond, {}).setdefault(l, []).append(score)
    condition_means = {c: float(np.mean([np.mean(x) for x in v.values()])) for c, v in sorted(by_condition.items())}

    tests = []
    for (item, series, cond), v in sorted(cells.items()):
        if not cond.endswith("-LR"):
            continue
        kind = series[:2]
        ms_cond = cond[:-3] + "-MS"
        ms_series = series if series.endswith("mix") else kind + "MS"
        if series.endswith("MS"):
            continue
        other = cells[(item, ms_series, ms_cond)]
        a = [v[l] for l in listeners]
        b = [other[l] for l in listeners]
        tests.append({
            "item": item,
            "context": "mixed" if series.endswith("mix") else "separated",
            "lr_series": series, "lr_condition": cond,
            "ms_series": ms_series, "ms_condition": ms_cond,
            "p_value": exact_signed_rank_p(a, b),
        })

    expected = {"listeners": len(listeners), "rows": len(rows), "means": means,
                "pooled_means": pooled_means, "condition_means": condition_means, "tests": tests}
    with open(args.out / "synthetic_expected.json", "w") as f:
        json.dump(expected, f, indent=1, sort_keys=True)
        f.write("\n")
    print(f"wrote {len(rows)} rows and {len(tests)} paired tests to {args.out}")


if __name__ == "__main__":
    main()
