"""The standard example classes the test suite and CLI exercise.

Builders return fresh class objects; the registry maps the names used by the
workspace files under corpus/ to builders so tests can cross-check the two
construction routes.
"""

from __future__ import annotations

import itertools

from .classes import StructureClass, explicit_class, forbid_class
from .core import Structure, Vocabulary

GRAPH = Vocabulary("graph", relations=(("E", 2),))
CHAIN = Vocabulary("chain", relations=(("lt", 2),))
PURE = Vocabulary("pure")
MONOID = Vocabulary("monoid", functions=(("op", 2), ("e", 0)))
GROUPFULL = Vocabulary("groupfull", functions=(("op", 2), ("e", 0), ("inv", 1)))
ONECONST = Vocabulary("oneconst", functions=(("c", 0),))
TWOCONST = Vocabulary("twoconst", functions=(("c", 0), ("d", 0)))
ARROW = Vocabulary("arrow", relations=(("E", 2),))


# --------------------------------------------------------------------------
# structures


def graph(n: int, edges, symmetric: bool = True) -> Structure:
    es = set()
    for a, b in edges:
        es.add((a, b))
        if symmetric:
            es.add((b, a))
    return Structure.build(GRAPH, n, {"E": es})


def digraph(n: int, arcs) -> Structure:
    return Structure.build(ARROW, n, {"E": set(map(tuple, arcs))})


def pure_set(n: int) -> Structure:
    return Structure.build(PURE, n)


def linear_order(n: int) -> Structure:
    return Structure.build(CHAIN, n, {"lt": {(i, j) for i in range(n) for j in range(n) if i < j}})


def monoid_table(table, unit: int = 0) -> Structure:
    n = len(table)
    return Structure.build(
        MONOID,
        n,
        funs={"op": {(i, j): table[i][j] for i in range(n) for j in range(n)}, "e": {(): unit}},
    )


def cyclic_group(n: int) -> Structure:
    return monoid_table([[(i + j) % n for j in range(n)] for i in range(n)])


def klein_four() -> Structure:
    # Z2 x Z2 with elements coded in base 2
    def mul(i, j):
        return (i ^ j)

    return monoid_table([[mul(i, j) for j in range(4)] for i in range(4)])


def symmetric_group_3() -> Structure:
    perms = sorted(itertools.permutations(range(3)))
    index = {p: i for i, p in enumerate(perms)}

    def mul(i, j):
        p, q = perms[i], perms[j]
        return index[tuple(p[q[k]] for k in range(3))]

    return monoid_table([[mul(i, j) for j in range(6)] for i in range(6)], unit=index[(0, 1, 2)])


def group_with_inverse(n: int) -> Structure:
    return Structure.build(
        GROUPFULL,
        n,
        funs={
            "op": {(i, j): (i + j) % n for i in range(n) for j in range(n)},
            "e": {(): 0},
            "inv": {(i,): (-i) % n for i in range(n)},
        },
    )


K1 = graph(1, [])
K2 = graph(2, [(0, 1)])
K3 = graph(3, [(0, 1), (1, 2), (0, 2)])
P3 = graph(3, [(0, 1), (1, 2)])
C5 = graph(5, [(0, 1), (1, 2), (2, 3), (3, 4), (4, 0)])
LOOP = graph(1, [(0, 0)], symmetric=False)
ASYM = Structure.build(GRAPH, 2, {"E": {(0, 1)}})


# --------------------------------------------------------------------------
# classes


def all_structs(scale: int = 4) -> StructureClass:
    """Every E/2 structure: the empty forbidden list."""
    return forbid_class("allstructs", GRAPH, [], scale)


def triangle_free(scale: int = 4) -> StructureClass:
    return forbid_class("trianglefree", GRAPH, [K3], scale)


def simple_graphs(scale: int = 3) -> StructureClass:
    """Symmetric irreflexive E: forbid loops and one-way edges."""
    return forbid_class("simplegraphs", GRAPH, [LOOP, ASYM], scale)


def tf_simple(scale: int = 3) -> StructureClass:
    return forbid_class("tfsimple", GRAPH, [LOOP, ASYM, K3], scale)


def arcs(scale: int = 3) -> StructureClass:
    """Disjoint single arrows: every vertex meets at most one arc.  The
    forbidden configurations are computed as the substructure-minimal bad
    digraphs on up to three vertices.  Amalgamation fails over a shared
    endpoint (an out-arc and an in-arc cannot meet)."""
    from .core import (
        canonical_form,
        function_closure,
        induced_substructure,
        labeled_structures,
    )

    def good(M: Structure) -> bool:
        degree = [0] * M.size
        for a, b in M.rel_tuples("E"):
            degree[a] += 1
            degree[b] += 1
        return all(d <= 1 for d in degree)

    bad: dict[bytes, Structure] = {}
    for size in range(4):
        for M in labeled_structures(ARROW, size):
            if good(M):
                continue
            if all(
                not subset or good(induced_substructure(M, subset)[0])
                for r in range(size)
                for subset in itertools.combinations(range(size), r)
            ):
                cf = canonical_form(M)
                bad.setdefault(cf.code, cf.canonical)
    forbidden = [bad[c] for c in sorted(bad, key=lambda c: (bad[c].size, c))]
    return forbid_class("arcs", ARROW, forbidden, scale)


def sets_up_to_two(scale: int = 4) -> StructureClass:
    return explicit_class("sets2", PURE, [pure_set(0), pure_set(1), pure_set(2)], scale=scale)


def nonempty_sets(scale: int = 4) -> StructureClass:
    return explicit_class(
        "nonemptysets", PURE, [pure_set(n) for n in range(1, scale + 1)], scale=scale
    )


def initial_segments(scale: int = 4) -> StructureClass:
    """Nonempty linear orders, strong substructure = initial segment."""
    chains = [linear_order(n) for n in range(1, scale + 1)]
    pairs = [
        (chains[k - 1], chains[n - 1], tuple(range(k)))
        for k in range(1, scale + 1)
        for n in range(k, scale + 1)
    ]
    return explicit_class("initseg", CHAIN, chains, pairs=pairs, scale=scale)


def groups_mult_unit(scale: int = 6) -> StructureClass:
    """All groups of order up to 6 over multiplication and identity only."""
    members = [
        cyclic_group(1),
        cyclic_group(2),
        cyclic_group(3),
        cyclic_group(4),
        klein_four(),
        cyclic_group(5),
        cyclic_group(6),
        symmetric_group_3(),
    ]
    return explicit_class("groups", MONOID, members, scale=scale)


def one_constant(scale: int = 3) -> StructureClass:
    return forbid_class("oneconst", ONECONST, [], scale)


def two_constants(scale: int = 3) -> StructureClass:
    return forbid_class("twoconsts", TWOCONST, [], scale)


def discrete_pair(scale: int = 2) -> StructureClass:
    """Pure sets of sizes 1 and 2 where only the identity inclusions are
    strong: admits intersections, not pseudo-universal, and its minimal
    members form a polyinitial family that is not multiinitial."""
    return explicit_class(
        "discretepair", PURE, [pure_set(1), pure_set(2)], pairs=[], scale=scale
    )


def registry() -> dict[str, StructureClass]:
    return {
        c.name: c
        for c in (
            all_structs(),
            triangle_free(),
            simple_graphs(),
            tf_simple(),
            arcs(),
            sets_up_to_two(),
            nonempty_sets(),
            initial_segments(),
            groups_mult_unit(),
            one_constant(),
            two_constants(),
            discrete_pair(),
        )
    }
