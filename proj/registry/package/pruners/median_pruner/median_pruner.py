#!/usr/bin/env python3
"""Median stopping rule (reference, not run by the engine)."""
import statistics


def should_prune(step_values, value):
    if len(step_values) < 2:
        return False
    return value > statistics.median(step_values)
