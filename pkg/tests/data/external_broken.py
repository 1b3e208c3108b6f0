#!/usr/bin/env python3
"""Misbehaving external SUT: answers every request with garbage."""

import sys

for _line in sys.stdin:
    sys.stdout.write("not json at all\n")
    sys.stdout.flush()
