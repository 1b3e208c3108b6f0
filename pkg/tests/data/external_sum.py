#!/usr/bin/env python3
"""External SUT speaking the line-JSON protocol: sums a list of floats."""

import json
import sys

for line in sys.stdin:
    line = line.strip()
    if not line:
        continue
    req = json.loads(line)
    if req.get("hello"):
        reply = {"hello": True, "input_kind": "list-float", "output_kind": "float"}
    else:
        xs = req["input"][0]
        if not isinstance(xs, list):
            reply = {"id": req.get("id"), "error": "kind-mismatch"}
        else:
            total = 0.0
            for v in xs:
                total += float(v)
            reply = {"id": req.get("id"), "output": total}
    sys.stdout.write(json.dumps(reply) + "\n")
    sys.stdout.flush()
