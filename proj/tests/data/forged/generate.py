#!/usr/bin/env python3
# Copyright 2026 The tsforge Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Regenerates the forged traces from genuine sequential runs.

Usage: generate.py path/to/tsforge
"""

import copy
import json
import pathlib
import subprocess
import sys

HERE = pathlib.Path(__file__).resolve().parent


def genuine(tsforge, algo, n):
    out = subprocess.run(
        [tsforge, "run", "--algo", algo, "--n", str(n), "--policy", "sequential", "--no-meta"],
        check=True, capture_output=True, text=True).stdout
    doc = json.loads(out)
    doc.pop("verdicts", None)
    return doc


def write_step(doc, call, nth=0):
    hits = [s for s in doc["steps"] if s["call"] == call and s["op"] == "write"]
    return hits[nth]


def renumber(doc):
    for i, s in enumerate(doc["steps"]):
        s["i"] = i
    doc["stats"]["steps"] = len(doc["steps"])
    doc["stats"]["reads"] = sum(s["op"] == "read" for s in doc["steps"])
    doc["stats"]["writes"] = sum(s["op"] == "write" for s in doc["steps"])


def ordering_swapped(t):
    doc = genuine(t, "phase", 2)
    a, b = doc["calls"]
    a["ts"], b["ts"] = b["ts"], a["ts"]
    return doc


def claims_bottom_write(t):
    doc = genuine(t, "phase", 7)
    write_step(doc, "p3.1")["val"] = "⊥"
    return doc


def claims_gap(t):
    doc = genuine(t, "phase", 1)
    w = write_step(doc, "p1.1")
    w["reg"] = 2
    w["val"] = "<[p1.1],2>"
    doc["stats"]["max_reg_written"] = 2
    return doc


def invalidation_outside_prefix(t):
    doc = genuine(t, "phase", 3)
    w = write_step(doc, "p3.1")
    w["reg"] = 3
    doc["stats"]["max_reg_written"] = 3
    return doc


def space_sentinel_write(t):
    doc = genuine(t, "phase", 2)
    w = write_step(doc, "p2.1")
    w["reg"] = 3
    w["val"] = "<[p1.1,p2.1],3>"
    doc["stats"]["max_reg_written"] = 3
    return doc


def wait_freedom_extra_collect(t):
    doc = genuine(t, "phase", 1)
    steps = doc["steps"]
    scan = doc["scans"][0]
    first, last = scan["collects"][1]
    extra = [copy.deepcopy(s) for s in steps[first:last + 1]]
    steps[last + 1:last + 1] = extra
    width = last - first + 1
    scan["collects"].append([last + 1, last + width])
    scan["lin"] = last + 1
    doc["calls"][0]["response"] += width
    renumber(doc)
    return doc


def simple_decrement(t):
    doc = genuine(t, "simple", 2)
    write_step(doc, "p2.1")["val"] = "0"
    return doc


def simple_value_three(t):
    doc = genuine(t, "simple", 2)
    write_step(doc, "p2.1")["val"] = "3"
    doc["calls"][1]["ts"] = "3"
    return doc


def read_mismatch(t):
    doc = genuine(t, "phase", 2)
    r = next(s for s in doc["steps"] if s["call"] == "p2.1" and s["op"] == "read")
    r["val"] = "<[p2.1],1>"
    return doc


FORGERIES = [
    ordering_swapped, claims_bottom_write, claims_gap, invalidation_outside_prefix,
    space_sentinel_write, wait_freedom_extra_collect, simple_decrement, simple_value_three,
    read_mismatch,
]


def main():
    tsforge = sys.argv[1]
    for forge in FORGERIES:
        path = HERE / (forge.__name__ + ".json")
        path.write_text(json.dumps(forge(tsforge), indent=2, ensure_ascii=False) + "\n")
        print(path.name)


if __name__ == "__main__":
    main()
