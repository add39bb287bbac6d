#!/usr/bin/env python3
"""Plot the Pareto front of a bbohub result.json (needs matplotlib)."""
import json
import sys


def main(path, out):
    import matplotlib.pyplot as plt

    with open(path) as f:
        result = json.load(f)
    xs = [t["values"] for t in result["trials"] if t["state"] == "complete"]
    front = [t["values"] for t in result.get("pareto_front", [])]
    plt.scatter([v[0] for v in xs], [v[1] for v in xs], s=8, c="#999")
    plt.scatter([v[0] for v in front], [v[1] for v in front], s=14, c="#c33")
    plt.xlabel("objective 0")
    plt.ylabel("objective 1")
    plt.savefig(out, dpi=120)


if __name__ == "__main__":
    main(sys.argv[1], sys.argv[2])
