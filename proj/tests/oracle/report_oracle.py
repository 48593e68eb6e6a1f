#!/usr/bin/env python3
"""Brute-force metric recount, independent of the C++ scorer.

Reads a dataset manifest and a traces document, re-derives every position
from the declaration text, and prints the report document in the same
JSON layout the pipeline writes (sorted keys, two-space indent).

Type comparison is textual: whitespace and nullability keywords removed.
Subtask membership uses surface patterns. Both are sufficient for the
shipped fixtures, which avoid spellings where the shortcuts would diverge.

usage: report_oracle.py DATASET TRACES [--split eval|train|all] [--k 10]
"""

import argparse
import json
import re
import sys

NULLABILITY = re.compile(r"\b(_Nonnull|_Nullable|_Null_unspecified|nonnull|nullable|null_unspecified|__kindof)\b")
SCALARS = {
    "int", "BOOL", "long", "long long", "char", "short", "float", "double", "unsigned", "unsigned int",
    "unsigned long", "unsigned long long", "unsigned char", "unsigned short", "NSInteger", "NSUInteger",
}
COLLECTIONS = {"NSArray", "NSDictionary", "NSSet", "NSOrderedSet", "NSMutableArray", "NSMutableDictionary",
               "NSMutableSet"}
CATEGORIES = ["Conventional Types", "Generic Collections", "No ID Generics", "No Structs", "Selector Mismatch",
              "Struct Refs", "Method Not Parsed"]
DISPLAY = {
    "ConventionalTypes": "Conventional Types", "GenericCollections": "Generic Collections",
    "NoIdGenerics": "No ID Generics", "NoStructs": "No Structs", "SelectorMismatch": "Selector Mismatch",
    "StructRefs": "Struct Refs",
}


def norm(t):
    return re.sub(r"\s+", "", NULLABILITY.sub("", t))


def balanced(text, i):
    """text[i] == '('; returns (inner, index after the matching ')')."""
    depth = 0
    for j in range(i, len(text)):
        if text[j] == "(":
            depth += 1
        elif text[j] == ")":
            depth -= 1
            if depth == 0:
                return text[i + 1:j], j + 1
    return None, None


def positions(decl):
    """Position types of a declaration, or None when it does not look like one."""
    s = decl.strip()
    if not s or s[0] not in "+-":
        return None
    s = s[1:].lstrip()
    if not s.startswith("("):
        return None
    ret, i = balanced(s, 0)
    if ret is None:
        return None
    out = [ret]
    while True:
        colon = s.find(":", i)
        if colon < 0:
            break
        j = colon + 1
        while j < len(s) and s[j].isspace():
            j += 1
        if j >= len(s) or s[j] != "(":
            return None
        t, i = balanced(s, j)
        if t is None:
            return None
        out.append(t)
    return [norm(t) for t in out]


def untyped(t):
    return t in ("id", "void*")


def is_protocol(t):
    for group in re.findall(r"<([^<>]*)>", t):
        names = [g.strip() for g in group.split(",")]
        if all(re.fullmatch(r"[A-Za-z_]\w*", n) and n != "id" for n in names):
            return True
    return False


def membership(t):
    m = set()
    if t in {norm(s) for s in SCALARS}:
        m.add("s")
    base = re.match(r"([A-Za-z_]\w*)", t)
    if base and base.group(1) in COLLECTIONS and t.endswith("*"):
        m.add("c")
    if is_protocol(t):
        m.add("p")
    if "(^)" in t:
        m.add("b")
    return m


def frac(a, b):
    return None if b == 0 else a / b


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("dataset")
    ap.add_argument("traces")
    ap.add_argument("--split", default="eval")
    ap.add_argument("--k", type=int, default=10)
    args = ap.parse_args()

    dataset = json.load(open(args.dataset))
    traces = json.load(open(args.traces))
    records = [r for r in dataset["records"] if args.split == "all" or r.get("split") == args.split]

    by_fw_key, by_key = {}, {}
    for i, t in enumerate(traces):
        by_fw_key.setdefault((t["target"]["framework"], t["target"]["symbol"]), i)
        by_key.setdefault(t["target"]["symbol"], i)

    methods = []  # list of [(correct, membership)] over scored positions
    for r in records:
        gt = positions(r["ground_truth"])
        ti = by_fw_key.get((r["framework"], r["key"]), by_key.get(r["key"]))
        if ti is None:
            inferred = positions(r["stripped"])
        elif traces[ti]["final"] is not None:
            inferred = positions(traces[ti]["final"]["text"])
        else:
            inferred = None
        scored = []
        for idx, g in enumerate(gt):
            if untyped(g):
                continue
            ok = inferred is not None and idx < len(inferred) and inferred[idx] == g
            scored.append((ok, membership(g)))
        methods.append(scored)

    nonempty = [m for m in methods if m]
    pm = em = pooled = None
    if nonempty:
        total = 0.0
        for m in nonempty:
            total += sum(1 for ok, _ in m if ok) / len(m)
        pm = total / len(nonempty)
        em = sum(1 for m in nonempty if all(ok for ok, _ in m)) / len(nonempty)
        pooled = sum(ok for m in nonempty for ok, _ in m) / sum(len(m) for m in nonempty)

    sub = {}
    for key in "scpb":
        cells = [ok for m in methods for ok, mem in m if key in mem]
        sub[key] = frac(sum(cells), len(cells))
    applicable = [sub[k] for k in "scpb" if sub[k] is not None]
    avg = None
    if applicable:
        acc = 0.0
        for v in applicable:
            acc += v
        avg = acc / len(applicable)

    calls = bad = used = stable = 0
    hist = {c: 0 for c in CATEGORIES}
    for t in traces:
        n = 0
        for it in t["iterations"]:
            for d in it["dialogues"]:
                for turn in d["turns"]:
                    if turn["kind"] != "tool_call":
                        continue
                    n += 1
                    if turn.get("result", {}).get("verdict") != "valid":
                        bad += 1
            for entry in it["pool"]:
                unparsed = False
                for diag in entry["diagnostics"]["diagnostics"]:
                    if diag["constraint"] in ("SyntaxErrors", "MethodNotParsed"):
                        unparsed = True
                    else:
                        hist[DISPLAY[diag["constraint"]]] += 1
                if unparsed:
                    hist["Method Not Parsed"] += 1
        calls += n
        used += n > 0

        if t["converged"] and t["converged_at"] == 1:
            stable += 1
            continue
        chosen = []
        for it in t["iterations"][: args.k]:
            sel = it["selected"]
            chosen.append(None if sel is None else it["pool"][sel]["text"])
        for a, b in zip(chosen, chosen[1:]):
            if a is not None and b is not None and (positions(a) or a) == (positions(b) or b):
                stable += 1
                break

    report = {
        "pm": pm, "pm_pooled": pooled, "em": em,
        "tool_usage_rate": frac(used, len(traces)),
        "inference_stability": frac(stable, len(traces)),
        "tcc": frac(calls - bad, calls), "hr": frac(bad, calls),
        "btc": sub["s"], "ci": sub["c"], "dpi": sub["p"], "bti": sub["b"],
        "avg_subtask": avg,
        "diagnostic_histogram": hist,
        "counts": {"methods": len(records), "scored_positions": sum(len(m) for m in methods),
                   "traces": len(traces), "tool_calls": calls},
    }
    sys.stdout.write(json.dumps(report, indent=2, sort_keys=True) + "\n")


if __name__ == "__main__":
    main()
