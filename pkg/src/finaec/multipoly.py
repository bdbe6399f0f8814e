"""Multiinitial and polyinitial family search, bounded multicolimits, and
minimal generating sets.

A multiinitial family is a set of objects such that every object at scale
receives exactly one morphism from exactly one family member; polyinitial
weakens uniqueness of the morphism to uniqueness up to a unique automorphism
of the source.  Family members are forced: they are exactly the minimal
objects (objects receiving no morphism from any non-isomorphic object), so
the search reduces to certifying that forced family.  Certificates are valid
at the stamped scale only; a family valid at scale n may be refuted at n+1.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Callable, Mapping, Optional, Sequence

from .classes import (
    StructureClass,
    check_admits_intersections,
    closure,
    k_embeddings,
    member,
    members_at_scale,
    strong_subsets,
)
from .core import (
    EMB,
    Morphism,
    Structure,
    automorphism_perms,
    compose,
)
from .limits import Cone


@dataclass(frozen=True)
class ObjectFamily:
    """A certified multiinitial or polyinitial family (possibly empty)."""

    kind: str
    objects: tuple
    scale: int
    log: tuple[str, ...] = ()


@dataclass(frozen=True)
class FamilyResult:
    ok: bool
    family: Optional[ObjectFamily]
    witness: Optional[dict] = None
    log: tuple[str, ...] = ()


def _minimal_members(C: StructureClass, scale: Optional[int]) -> list[Structure]:
    """Members with no proper strong substructure: the only candidates for
    initial families, since any incoming strong embedding lands on a strong
    substructure."""
    out = []
    for M in members_at_scale(C, scale):
        subs = strong_subsets(C, M)
        if all(len(S) == M.size for S in subs):
            out.append(M)
    return out


def multiinitial_family(C: StructureClass, scale: Optional[int] = None) -> FamilyResult:
    """Search for a multiinitial family among minimal members and certify it
    against every member at scale: exactly one source, exactly one morphism."""
    bound = C.scale if scale is None else scale
    minimals = _minimal_members(C, scale)
    log = [f"candidates: {len(minimals)} minimal members"]
    for X in members_at_scale(C, scale):
        arrows = [(i, f) for i, m in enumerate(minimals) for f in k_embeddings(C, m, X)]
        if len(arrows) != 1:
            return FamilyResult(
                False,
                None,
                witness={"member": X, "arrows": len(arrows)},
                log=tuple(log + [f"violation: {len(arrows)} arrows from candidates"]),
            )
    log.append("each member receives exactly one arrow from exactly one candidate")
    return FamilyResult(True, ObjectFamily("multiinitial", tuple(minimals), bound, tuple(log)))


def _k_automorphisms(M: Structure) -> tuple[Morphism, ...]:
    return tuple(Morphism(M, M, p, EMB) for p in automorphism_perms(M))


def polyinitial_family(C: StructureClass, scale: Optional[int] = None) -> FamilyResult:
    """Existence-uniqueness of the source object, with morphism pairs from a
    family object related by a unique automorphism of it."""
    bound = C.scale if scale is None else scale
    minimals = _minimal_members(C, scale)
    log = [f"candidates: {len(minimals)} minimal members"]
    for X in members_at_scale(C, scale):
        sources = [
            (i, k_embeddings(C, m, X)) for i, m in enumerate(minimals)
        ]
        nonempty = [(i, fs) for i, fs in sources if fs]
        if len(nonempty) != 1:
            return FamilyResult(
                False,
                None,
                witness={"member": X, "sources": len(nonempty)},
                log=tuple(log + ["violation: source object not unique"]),
            )
        i, fs = nonempty[0]
        auts = _k_automorphisms(minimals[i])
        for f, g in itertools.product(fs, repeat=2):
            solutions = [h for h in auts if compose(f, h).map == g.map]
            if len(solutions) != 1:
                return FamilyResult(
                    False,
                    None,
                    witness={"member": X, "f": f.map, "g": g.map, "solutions": len(solutions)},
                    log=tuple(log + ["violation: no unique automorphism relating a pair"]),
                )
    log.append("sources unique; morphism pairs related by unique automorphisms")
    return FamilyResult(True, ObjectFamily("polyinitial", tuple(minimals), bound, tuple(log)))


# --------------------------------------------------------------------------
# multicolimits


@dataclass(frozen=True)
class Diagram:
    """A finite diagram of strong embeddings: objects and edge morphisms
    keyed by (source index, target index)."""

    objects: tuple[Structure, ...]
    edges: Mapping[tuple[int, int], Morphism] = None  # type: ignore[assignment]

    def __post_init__(self):
        if self.edges is None:
            object.__setattr__(self, "edges", {})


@dataclass(frozen=True)
class Cocone:
    apex: Structure
    legs: tuple[Morphism, ...]


def _cocones(C: StructureClass, D: Diagram, scale: Optional[int]) -> list[Cocone]:
    """All cocones on D with member apexes at scale, one representative per
    cocone isomorphism class (apex isomorphism commuting with every leg)."""
    reps: dict[tuple, Cocone] = {}
    for N in members_at_scale(C, scale):
        leg_choices = [k_embeddings(C, obj, N) for obj in D.objects]
        if any(not ch for ch in leg_choices):
            continue
        auts = automorphism_perms(N)
        for combo in itertools.product(*leg_choices):
            if not all(
                compose(combo[j], e).map == combo[i].map for (i, j), e in D.edges.items()
            ):
                continue
            legs = tuple(f.map for f in combo)
            key = min(
                tuple(tuple(a[x] for x in legmap) for legmap in legs) for a in auts
            )
            reps.setdefault((canonical_code(N), key), Cocone(N, combo))
    return [reps[k] for k in sorted(reps)]


def canonical_code(M: Structure) -> bytes:
    from .core import canonical_form

    return canonical_form(M).code


def _cocone_homs(C: StructureClass, a: Cocone, b: Cocone) -> list[Morphism]:
    return [
        m
        for m in k_embeddings(C, a.apex, b.apex)
        if all(compose(m, fa).map == fb.map for fa, fb in zip(a.legs, b.legs))
    ]


def multicolimit(
    C: StructureClass, D: Diagram, scale: Optional[int] = None
) -> FamilyResult:
    """Multiinitial family in the bounded category of cocones on D.

    The family is forced to be the minimal cocones; certification checks the
    multiinitial condition against every cocone at scale.  An empty family is
    legitimate: the diagram may admit no cocone at all (amalgamation
    failure)."""
    bound = C.scale if scale is None else scale
    for obj in D.objects:
        if not member(C, obj):
            raise ValueError("diagram objects must be members")
    for (i, j), e in D.edges.items():
        if e.source != D.objects[i] or e.target != D.objects[j]:
            raise ValueError(f"edge ({i},{j}) endpoints mismatch")
    cocones = _cocones(C, D, scale)
    log = [f"cocones at scale: {len(cocones)} isomorphism classes"]
    if not cocones:
        log.append("no cocone exists at scale: the empty family is multiinitial")
        return FamilyResult(True, ObjectFamily("multicolimit", (), bound, tuple(log)))
    n = len(cocones)
    incoming = [
        any(i != j and _cocone_homs(C, cocones[i], cocones[j]) for i in range(n))
        for j in range(n)
    ]
    minimals = [cocones[j] for j in range(n) if not incoming[j]]
    log.append(f"candidates: {len(minimals)} minimal cocones")
    for X in cocones:
        arrows = [(k, m) for k, cand in enumerate(minimals) for m in _cocone_homs(C, cand, X)]
        if len(arrows) != 1:
            return FamilyResult(
                False,
                None,
                witness={"apex": X.apex, "legs": tuple(f.map for f in X.legs), "arrows": len(arrows)},
                log=tuple(log + [f"violation: {len(arrows)} arrows from candidates"]),
            )
    log.append("each cocone receives exactly one arrow from exactly one candidate")
    return FamilyResult(True, ObjectFamily("multicolimit", tuple(minimals), bound, tuple(log)))


# --------------------------------------------------------------------------
# generation


def minimal_generating_set(
    C: StructureClass, M: Structure, bound: int
) -> Optional[tuple[int, ...]]:
    """A minimum-cardinality subset whose closure is all of M, when one of
    size strictly below ``bound`` exists."""
    if not member(C, M):
        raise ValueError("structure is not a member")
    if not check_admits_intersections(C).ok:
        raise ValueError("class does not admit intersections: closure is not total")
    full = frozenset(M.universe())
    for r in range(min(bound, M.size + 1)):
        for combo in itertools.combinations(range(M.size), r):
            if closure(C, M, combo).universe == full:
                return combo
    return None
