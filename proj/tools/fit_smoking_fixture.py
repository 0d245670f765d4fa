#!/usr/bin/env python3
"""Build data/smoking_fitted.json: a latent-variable model whose observed
joint over (S, T, C) is exactly the smoking table in data/smoking_joint.json.

The hidden H copies S: P(H) = P(S), S = H deterministically, P(T | S) read off
the joint, and P(C | T, H) = P(C | T, S = H)."""

import json
import pathlib
import re

DATA = pathlib.Path(__file__).resolve().parent.parent / "data"


def main() -> None:
    joint_file = json.loads((DATA / "smoking_joint.json").read_text())
    w = joint_file["joint"]

    def omega(s, t, c):
        return w[(s * 2 + t) * 2 + c]

    p_s = [sum(omega(s, t, c) for t in (0, 1) for c in (0, 1)) for s in (0, 1)]
    p_t_given_s = [[sum(omega(s, t, c) for c in (0, 1)) / p_s[s] for t in (0, 1)] for s in (0, 1)]
    # C's parents in declaration order are (T, H); column index = t * 2 + h.
    p_c = []
    for t in (0, 1):
        for h in (0, 1):
            mass = omega(h, t, 0) + omega(h, t, 1)
            p_c.append([omega(h, t, c) / mass for c in (0, 1)])

    model = {
        "variables": [
            {"name": "S", "cardinality": 2, "latent": False},
            {"name": "T", "cardinality": 2, "latent": False},
            {"name": "H", "cardinality": 2, "latent": True},
            {"name": "C", "cardinality": 2, "latent": False},
        ],
        "edges": [["H", "S"], ["S", "T"], ["T", "C"], ["H", "C"]],
        "cpts": {
            "S": [[1.0, 0.0], [0.0, 1.0]],
            "T": p_t_given_s,
            "H": [p_s],
            "C": p_c,
        },
    }
    text = json.dumps(model, indent=2)
    # Keep innermost lists and variable records on one line.
    text = re.sub(r"\[[^\[\]{}]*\]", lambda m: " ".join(m.group(0).split()), text)
    text = re.sub(r"\{[^\[\]{}]*\}", lambda m: " ".join(m.group(0).split()), text)
    (DATA / "smoking_fitted.json").write_text(text + "\n")


if __name__ == "__main__":
    main()
