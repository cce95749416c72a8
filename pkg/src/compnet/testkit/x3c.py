"""Exact-cover-by-3-sets instances turned into communication-cut instances.

Each triple ``c_i`` becomes a gadget ``s1 -> u_i -> v_i -> t1`` with link
capacities ``k, 2, 1``.  Each element threads the ``(u_i, v_i)`` links of the
triples that contain it on a walk from ``s2`` to ``t2``; elements with the
same triple sequence share that walk.  ``s`` feeds ``s1`` and ``s2`` and
``t1``, ``t2`` feed ``t``, all with capacity ``k``.  Only ``s2`` and ``t1``
process.  For ``k >= 2m`` the minimum communication cut is ``m + q`` exactly
when an exact cover exists.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass

from ..network import ComputingNetwork, Link, Node
from .fixtures import REPORTED, Expectation, Fixture


@dataclass(frozen=True)
class X3CInstance:
    elements: tuple
    triples: tuple
    k: float | None = None

    def __post_init__(self):
        if len(self.elements) % 3:
            raise ValueError("number of elements must be a multiple of 3")
        universe = set(self.elements)
        for c in self.triples:
            if len(set(c)) != 3 or not set(c) <= universe:
                raise ValueError(f"invalid triple {c!r}")
        if self.k is not None and self.k < 2 * len(self.triples):
            raise ValueError("k must be at least 2m")

    @property
    def q(self) -> int:
        return len(self.elements) // 3

    @property
    def m(self) -> int:
        return len(self.triples)

    @property
    def capacity(self) -> float:
        return float(self.k if self.k is not None else 2 * self.m)


def build_x3c_reduction(inst: X3CInstance) -> tuple[ComputingNetwork, str, str]:
    k = inst.capacity
    links: dict = {}

    def add(u, v, cap):
        links.setdefault((u, v), cap)

    for i in range(1, inst.m + 1):
        add("s1", f"u{i}", k)
        add(f"u{i}", f"v{i}", 2.0)
        add(f"v{i}", "t1", 1.0)
    for x in inst.elements:
        members = [i for i, c in enumerate(inst.triples, start=1) if x in c]
        if not members:
            continue
        add("s2", f"u{members[0]}", k)
        for a, b in zip(members, members[1:]):
            add(f"v{a}", f"u{b}", k)
        add(f"v{members[-1]}", "t2", k)
    for u, v in (("s", "s1"), ("s", "s2"), ("t1", "t"), ("t2", "t")):
        add(u, v, k)
    names = ["s", "s1", "s2", "t1", "t2", "t"]
    names += [f"{p}{i}" for i in range(1, inst.m + 1) for p in "uv"]
    nodes = [Node(n, k if n in ("s2", "t1") else 0.0) for n in names]
    return ComputingNetwork(nodes, [Link(u, v, c) for (u, v), c in links.items()]), "s", "t"


def has_exact_cover(inst: X3CInstance) -> bool:
    universe = frozenset(inst.elements)
    for combo in itertools.combinations(inst.triples, inst.q):
        covered = [x for c in combo for x in c]
        if len(covered) == len(universe) and set(covered) == universe:
            return True
    return False


def example_instance() -> X3CInstance:
    return X3CInstance((1, 2, 3, 4, 5, 6), ((1, 2, 3), (1, 2, 4), (3, 5, 6)), k=6)


def x3c_example_fixture() -> Fixture:
    net, s, t = build_x3c_reduction(example_instance())
    return Fixture("x3c_example", net, s, t, {
        "comm_cut": Expectation(5.0, REPORTED, "min communication cut is 5 = m + q"),
    }, "reduction of X={1..6}, C={123,124,356}, k=6")


def planted_instance(q: int, extra: int, seed: int, cover_last: bool = True) -> X3CInstance:
    """A random instance that contains a hidden exact cover.

    Element walks share the ``u_i``/``v_i`` nodes, so a walk can enter along
    one element's prefix and leave along another's suffix.  With the cover
    triples threaded after all others every such mixed walk still crosses a
    cover link, and the cover cut of value ``m + q`` is valid; with
    ``cover_last=False`` the triples are shuffled and that can fail.
    """
    rng = random.Random(seed)
    elements = list(range(1, 3 * q + 1))
    shuffled = elements[:]
    rng.shuffle(shuffled)
    cover = [tuple(sorted(shuffled[3 * i:3 * i + 3])) for i in range(q)]
    others: list = []
    while len(others) < extra:
        c = tuple(sorted(rng.sample(elements, 3)))
        if c not in cover and c not in others:
            others.append(c)
    if cover_last:
        triples = others + cover
    else:
        triples = others + cover
        rng.shuffle(triples)
    return X3CInstance(tuple(elements), tuple(triples))


def no_cover_instance(q: int, m: int, seed: int, max_tries: int = 1000) -> X3CInstance:
    """A random instance certified (by exhaustive search) to have no exact cover."""
    rng = random.Random(seed)
    elements = list(range(1, 3 * q + 1))
    for _ in range(max_tries):
        triples = set()
        while len(triples) < m:
            triples.add(tuple(sorted(rng.sample(elements, 3))))
        inst = X3CInstance(tuple(elements), tuple(sorted(triples)))
        covered = {x for c in triples for x in c}
        # uncovered elements make the instance trivially negative
        if len(covered) == len(elements) and not has_exact_cover(inst):
            return inst
    raise RuntimeError("could not draw an instance without an exact cover")

