"""Test double for the external classifier protocol: nearest-centroid scores.

``--garbage`` makes it answer predictions with a non-JSON line.
"""

import json
import math
import sys

garbage = "--garbage" in sys.argv
pos = neg = None

for line in sys.stdin:
    msg = json.loads(line)
    if "train" in msg:
        feats, labels = msg["train"]["features"], msg["train"]["labels"]

        def centroid(cls):
            rows = [f for f, y in zip(feats, labels) if y == cls]
            return [sum(col) / len(rows) for col in zip(*rows)]

        pos, neg = centroid(1), centroid(0)
        print(json.dumps({"status": "ok"}), flush=True)
        continue
    if garbage:
        print("not json", flush=True)
        continue
    x = msg["features"]
    dp, dn = math.dist(x, pos), math.dist(x, neg)
    p = 0.5 if dp + dn == 0 else dn / (dp + dn)
    print(json.dumps({"proba": p}), flush=True)
