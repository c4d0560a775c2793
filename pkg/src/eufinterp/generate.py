"""Seeded random instance families for testing and benchmarking.

Three shapes, all unsatisfiable by construction:

* ``chain``: one long equality chain with alternating ownership segments and
  a final disequality between the chain ends.  Exercises factorization.
* ``ladder``: rungs u_k = h_k(u_{k-1}), v_k = h_k(v_{k-1}) with the rung
  function private to the owning side, alternating sides, seeded by
  u_0 = v_0 and refuted at the far end.  Exercises derived-edge recursion.
* ``split``: two applications of a shared function whose arguments meet
  through mixed-ownership chains, so the congruence between them may need a
  fresh shared application.  Exercises graph repair.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field


@dataclass
class GeneratedInstance:
    text: str
    family: str
    meta: dict = field(default_factory=dict)


class _Names:
    def __init__(self) -> None:
        self.counts: dict[str, int] = {}

    def fresh(self, prefix: str) -> str:
        n = self.counts.get(prefix, 0)
        self.counts[prefix] = n + 1
        return f"{prefix}{n}"


def _render(a_lits: list[str], b_lits: list[str]) -> str:
    return "(A " + " ".join(a_lits) + ")\n(B " + " ".join(b_lits) + ")\n"


def chain_instance(rng: random.Random, literals: int) -> GeneratedInstance:
    """A transitivity chain of ``literals`` literals (last one a disequality)."""
    if literals < 2:
        raise ValueError("chain needs at least 2 literals")
    edges = literals - 1
    names = _Names()
    sides: list[str] = []
    side = rng.choice("AB")
    remaining = edges
    while remaining > 0:
        seg = min(remaining, rng.randint(1, 4))
        sides.extend(side * seg)
        side = "B" if side == "A" else "A"
        remaining -= seg
    vertices = []
    for j in range(edges + 1):
        boundary = j == 0 or j == edges or sides[j - 1] != sides[j]
        if boundary:
            vertices.append(names.fresh("z"))
        else:
            vertices.append(names.fresh("x" if sides[j] == "A" else "y"))
    a_lits, b_lits = [], []
    a_factors = 0
    previous = None
    for j in range(edges):
        lit = f"(= {vertices[j]} {vertices[j + 1]})"
        (a_lits if sides[j] == "A" else b_lits).append(lit)
        if sides[j] == "A" and previous != "A":
            a_factors += 1
        previous = sides[j]
    rng.shuffle(a_lits)
    rng.shuffle(b_lits)
    b_lits.append(f"(not (= {vertices[0]} {vertices[edges]}))")
    return GeneratedInstance(
        _render(a_lits, b_lits), "chain", {"a_factors": a_factors}
    )


def ladder_instance(rng: random.Random, rungs: int) -> GeneratedInstance:
    """Alternating congruence ladder; A owns the seed equality u0 = v0."""
    if rungs < 1:
        raise ValueError("ladder needs at least 1 rung")
    a_lits = ["(= u0 v0)"]
    b_lits = []
    for k in range(1, rungs + 1):
        side = a_lits if k % 2 == 0 else b_lits
        if rng.random() < 0.5:
            left = f"(h{k} u{k - 1})"
            right = f"(h{k} v{k - 1})"
        else:
            left = f"(* x{k} u{k - 1})"
            right = f"(* x{k} v{k - 1})"
        side.append(f"(= {left} u{k})")
        side.append(f"(= {right} v{k})")
    diseq = f"(not (= u{rungs} v{rungs}))"
    # The disequality sits in the column after the last rung.
    (a_lits if rungs % 2 == 1 else b_lits).append(diseq)
    rng.shuffle(a_lits)
    rng.shuffle(b_lits)
    return GeneratedInstance(
        _render(a_lits, b_lits),
        "ladder",
        {"rungs": rungs, "diseq_side": "A" if rungs % 2 == 1 else "B"},
    )


def split_instance(rng: random.Random, width: int) -> GeneratedInstance:
    """Congruence between two applications joined through two-sided chains."""
    if width < 1:
        raise ValueError("split needs width >= 1")
    names = _Names()
    arity = rng.randint(1, min(3, width))
    a_lits, b_lits = [], []
    a_args, b_args = [], []
    for i in range(arity):
        if i == 0:
            len_a, len_b = rng.randint(1, 2), rng.randint(1, 2)
        elif rng.random() < 0.3:
            len_a = len_b = 0
        else:
            len_a, len_b = rng.randint(0, 2), rng.randint(0, 2)
        mid = names.fresh("z")
        cur = mid
        for _ in range(len_a):
            nxt = names.fresh("x")
            a_lits.append(f"(= {nxt} {cur})")
            cur = nxt
        a_args.append(cur)
        cur = mid
        for _ in range(len_b):
            nxt = names.fresh("y")
            b_lits.append(f"(= {cur} {nxt})")
            cur = nxt
        b_args.append(cur)
    target = names.fresh("z")
    a_app = "(g " + " ".join(a_args) + ")"
    b_app = "(g " + " ".join(b_args) + ")"
    if rng.random() < 0.5:
        a_lits.append(f"(= {a_app} {target})")
        b_lits.append(f"(not (= {b_app} {target}))")
        diseq_side = "B"
    else:
        b_lits.append(f"(= {b_app} {target})")
        a_lits.append(f"(not (= {a_app} {target}))")
        diseq_side = "A"
    # Pad with independent shared-chain noise up to the requested width.
    filler = width - (len(a_lits) + len(b_lits))
    prev = None
    for _ in range(max(0, filler)):
        cur = names.fresh("z")
        if prev is not None:
            lit = f"(= {prev} {cur})"
            (a_lits if rng.random() < 0.5 else b_lits).append(lit)
        prev = cur
    rng.shuffle(a_lits)
    rng.shuffle(b_lits)
    return GeneratedInstance(
        _render(a_lits, b_lits), "split", {"diseq_side": diseq_side}
    )


FAMILIES = {
    "chain": chain_instance,
    "ladder": ladder_instance,
    "split": split_instance,
}


def generate(family: str, size: int, seed: int) -> GeneratedInstance:
    """Deterministic instance for (family, size, seed)."""
    rng = random.Random(f"{family}:{size}:{seed}")
    return FAMILIES[family](rng, size)
