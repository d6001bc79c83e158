#!/usr/bin/env python3
"""Generate the bundled CNF corpus.

Every problem combines one refutation kernel (propositional, relational or
equational) with distractor axioms drawn from a vocabulary disjoint from the
kernels. Distractors are light and generate many clauses, so a weight-driven
selection spends its budget on them.

    python3 scripts/gen_corpus.py [--out corpus] [--count 80] [--seed 7]
"""

import argparse
import random
from pathlib import Path

KERNEL_ATOMS = [f"k{i}" for i in range(24)]
CONSTS = [f"c{i}" for i in range(16)]
DISTRACT_ATOMS = [f"d{i}" for i in range(24)]
DISTRACT_CONSTS = [f"e{i}" for i in range(8)]


def prop_kernel(rng, n):
    atoms = rng.sample(KERNEL_ATOMS, n + 1)
    out = [("axiom", atoms[0])]
    for i in range(1, n + 1):
        if i >= 2 and rng.random() < 0.4:
            j = rng.randrange(0, i - 1)
            out.append(("axiom", f"~{atoms[j]} | ~{atoms[i - 1]} | {atoms[i]}"))
        else:
            out.append(("axiom", f"~{atoms[i - 1]} | {atoms[i]}"))
    # a dead-end branch that never reaches the goal
    spare = [a for a in KERNEL_ATOMS if a not in atoms]
    if spare:
        out.append(("axiom", f"~{atoms[rng.randrange(n)]} | {rng.choice(spare)}"))
    out.append(("negated_conjecture", f"~{atoms[n]}"))
    return out


def rel_kernel(rng, n):
    cs = rng.sample(CONSTS, n + 1)
    out = [("axiom", f"edge({cs[i]}, {cs[i + 1]})") for i in range(n)]
    out.append(("axiom", "~edge(X, Y) | path(X, Y)"))
    out.append(("axiom", "~path(X, Y) | ~edge(Y, Z) | path(X, Z)"))
    out.append(("negated_conjecture", f"~path({cs[0]}, {cs[n]})"))
    return out


def eq_kernel(rng, n):
    cs = rng.sample(CONSTS, n + 1)
    out = [("axiom", f"f({cs[i]}) = {cs[i + 1]}") for i in range(n)]
    out.append(("axiom", f"p({cs[n]})"))
    goal = cs[0]
    for _ in range(n):
        goal = f"f({goal})"
    out.append(("negated_conjecture", f"~p({goal})"))
    return out


def distractors(rng, m):
    out = []
    atoms = rng.sample(DISTRACT_ATOMS, min(len(DISTRACT_ATOMS), 4 + m))
    out.append(("axiom", atoms[0]))
    for _ in range(2 * m):
        a, b = rng.sample(atoms, 2)
        out.append(("axiom", f"~{a} | {b}"))
    for _ in range(m // 2):
        a, b, c = rng.sample(atoms, 3)
        out.append(("axiom", f"~{a} | {b} | {c}"))
    if m >= 2:
        es = rng.sample(DISTRACT_CONSTS, min(len(DISTRACT_CONSTS), 2 + m // 2))
        for i in range(len(es) - 1):
            out.append(("axiom", f"link({es[i]}, {es[i + 1]})"))
        out.append(("axiom", "~link(X, Y) | ~link(Y, Z) | link(X, Z)"))
        out.append(("axiom", "~link(X, Y) | link(Y, X)"))
    if m >= 4:
        e = rng.choice(DISTRACT_CONSTS)
        out.append(("axiom", f"g(g({e})) = {e}"))
        out.append(("axiom", f"q(g({e}))"))
        out.append(("axiom", "~q(X) | q(g(X))"))
    return out


KERNELS = {"prop": prop_kernel, "rel": rel_kernel, "eq": eq_kernel}


def render(name, clauses):
    lines = [f"% {name}"]
    for i, (role, body) in enumerate(clauses):
        lines.append(f"cnf(c{i}, {role}, {body}).")
    return "\n".join(lines) + "\n"


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--out", default="corpus")
    ap.add_argument("--count", type=int, default=80)
    ap.add_argument("--seed", type=int, default=7)
    args = ap.parse_args()
    rng = random.Random(args.seed)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    for old in out.glob("*.p"):
        old.unlink()
    kinds = list(KERNELS)
    for i in range(args.count):
        kind = kinds[i % len(kinds)]
        n = rng.randint(3, 10)
        m = rng.randint(0, 14)
        clauses = KERNELS[kind](rng, n) + distractors(rng, m)
        rng.shuffle(clauses)
        name = f"{kind}{i:03d}_n{n}_m{m}"
        (out / f"{name}.p").write_text(render(name, clauses))


if __name__ == "__main__":
    main()
