"""Categorical limits inside a structure class of strong embeddings.

Equalizers, wide pullbacks (intersections of strong substructures), and
directed colimits, each with exhaustive universal-property verification at
scale.  A missing limit is a value (`LimitFailure`), not an error: classes
without intersections legitimately lack some of these cones.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Mapping, Optional, Sequence

from .classes import (
    CheckResult,
    StructureClass,
    check_admits_intersections,
    check_universal,
    closure,
    is_k_embedding,
    k_embeddings,
    member,
    members_at_scale,
    strong,
    strong_subsets,
)
from .core import (
    EMB,
    Morphism,
    Structure,
    compose,
    function_closure,
    identity,
    induced_substructure,
)


@dataclass(frozen=True)
class Cone:
    """An apex with one strong embedding per diagram node, commuting with
    the diagram."""

    apex: Structure
    legs: tuple[Morphism, ...]


@dataclass(frozen=True)
class LimitCertificate:
    """A limit cone with, for every competing cone at scale, its unique
    mediating morphism."""

    cone: Cone
    mediators: tuple[tuple[Cone, Morphism], ...]
    notes: tuple[str, ...] = ()


@dataclass(frozen=True)
class LimitFailure:
    reason: str
    witness: dict
    notes: tuple[str, ...] = ()


def _mediator_unique(C: StructureClass, P: Structure, apex: Structure,
                     projections: Sequence[Morphism], legs: Sequence[Morphism]) -> list[Morphism]:
    """All strong embeddings P -> apex commuting with the given legs."""
    return [
        u
        for u in k_embeddings(C, P, apex)
        if all(compose(p, u).map == h.map for p, h in zip(projections, legs))
    ]


def equalizer(
    C: StructureClass,
    f: Morphism,
    g: Morphism,
    certify: bool = True,
    scale: Optional[int] = None,
) -> LimitCertificate | LimitFailure:
    """Equalizer of two strong embeddings f, g : M -> N.

    The agreement set must be its own closure and carry a strong
    substructure; the inclusion is then the equalizer.  The certificate
    enumerates every cone at scale and records its unique mediator.
    """
    if f.source != g.source or f.target != g.target:
        raise ValueError("equalizer needs a parallel pair")
    for h in (f, g):
        if not is_k_embedding(C, h):
            raise ValueError("equalizer arguments must be strong embeddings between members")
    M = f.source
    agreement = frozenset(x for x in M.universe() if f.map[x] == g.map[x])
    cl = closure(C, M, agreement)
    if cl.universe != agreement or not cl.is_strong:
        return LimitFailure(
            "agreement-set-not-closed",
            {
                "agreement": tuple(sorted(agreement)),
                "closure": tuple(sorted(cl.universe)),
                "closure_strong": cl.is_strong,
            },
        )
    apex, incl = cl.structure, cl.inclusion
    position = {x: i for i, x in enumerate(incl.map)}
    cone = Cone(apex, (incl,))
    if not certify:
        return LimitCertificate(cone, ())
    mediators = []
    for P in members_at_scale(C, scale):
        for h in k_embeddings(C, P, M):
            if compose(f, h).map != compose(g, h).map:
                continue
            u = Morphism(P, apex, tuple(position[h.map[x]] for x in P.universe()), EMB)
            candidates = _mediator_unique(C, P, apex, (incl,), (h,))
            if candidates != [u]:
                return LimitFailure(
                    "mediator-not-unique",
                    {"competitor": P, "leg": h.map, "count": len(candidates)},
                )
            mediators.append((Cone(P, (h,)), u))
    return LimitCertificate(cone, tuple(mediators))


def wide_pullback(
    C: StructureClass,
    target: Structure,
    legs: Sequence[Morphism],
    certify: bool = True,
    scale: Optional[int] = None,
) -> LimitCertificate | LimitFailure:
    """Limit of a family of strong embeddings into a common member.

    For inclusion legs the apex is the plain intersection of images with the
    induced structure; general legs are pulled back along their images and
    transported (a toolkit convention, reported in the notes).  The empty
    family has the target itself as its limit.
    """
    if not member(C, target):
        raise ValueError("pullback target must be a member")
    for f in legs:
        if f.target != target or not is_k_embedding(C, f):
            raise ValueError("pullback legs must be strong embeddings into the target")
    notes = ()
    if not legs:
        cone = Cone(target, (identity(target),))
        if not certify:
            return LimitCertificate(cone, (), ("empty family: limit is the target",))
        mediators = []
        for P in members_at_scale(C, scale):
            for h in k_embeddings(C, P, target):
                mediators.append((Cone(P, (h,)), h))
        return LimitCertificate(cone, tuple(mediators), ("empty family: limit is the target",))

    images = [frozenset(f.map) for f in legs]
    section = frozenset.intersection(*images)
    if function_closure(target, section) != section:
        return LimitFailure(
            "intersection-not-closed", {"intersection": tuple(sorted(section))}
        )
    apex, incl = induced_substructure(target, section)
    if not member(C, apex) or not strong(C, target, section):
        return LimitFailure(
            "intersection-not-strong",
            {"target": target, "intersection": tuple(sorted(section))},
        )
    projections = []
    for f in legs:
        back = {y: x for x, y in enumerate(f.map)}
        p = Morphism(apex, f.source, tuple(back[incl.map[i]] for i in apex.universe()), EMB)
        if not is_k_embedding(C, p):
            return LimitFailure(
                "projection-not-strong",
                {"leg": f.map, "projection": p.map},
                notes=("general legs are transported along images; failure reported as absent limit",),
            )
        projections.append(p)
    cone = Cone(apex, tuple(projections))
    if not certify:
        return LimitCertificate(cone, (), notes)
    mediators = []
    for P in members_at_scale(C, scale):
        leg_choices = [k_embeddings(C, P, f.source) for f in legs]
        if any(not ch for ch in leg_choices):
            continue
        for combo in itertools.product(*leg_choices):
            composites = [compose(f, h).map for f, h in zip(legs, combo)]
            if any(m != composites[0] for m in composites[1:]):
                continue
            pos = {incl.map[i]: i for i in apex.universe()}
            u = Morphism(P, apex, tuple(pos[composites[0][x]] for x in P.universe()), EMB)
            candidates = _mediator_unique(C, P, apex, projections, combo)
            if candidates != [u]:
                return LimitFailure(
                    "mediator-not-unique",
                    {"competitor": P, "legs": tuple(h.map for h in combo), "count": len(candidates)},
                )
            mediators.append((Cone(P, tuple(combo)), u))
    return LimitCertificate(cone, tuple(mediators), notes)


# --------------------------------------------------------------------------
# directed colimits


@dataclass(frozen=True)
class DirectedSystem:
    """A finite directed diagram of strong embeddings: objects plus edge
    morphisms keyed by (source index, target index)."""

    objects: tuple[Structure, ...]
    edges: Mapping[tuple[int, int], Morphism]


@dataclass(frozen=True)
class ColimitResult:
    colimit: Structure
    cocone: tuple[Morphism, ...]
    competitors: int
    notes: tuple[str, ...]


def _reachability(system: DirectedSystem) -> dict[int, dict[int, Morphism]]:
    """Composite morphism along edge paths from each node; path independence
    is required."""
    n = len(system.objects)
    reach: dict[int, dict[int, Morphism]] = {
        i: {i: identity(system.objects[i])} for i in range(n)
    }
    for (i, j), m in system.edges.items():
        if m.source != system.objects[i] or m.target != system.objects[j]:
            raise ValueError(f"edge ({i},{j}) endpoints mismatch")
    changed = True
    while changed:
        changed = False
        for (i, j), m in system.edges.items():
            for k, pre in list(reach.items()):
                if i in pre:
                    comp = compose(m, pre[i])
                    if j not in pre:
                        pre[j] = comp
                        changed = True
                    elif pre[j].map != comp.map:
                        raise ValueError(f"diagram does not commute between {k} and {j}")
    return reach


def directed_colimit(
    C: StructureClass, system: DirectedSystem, scale: Optional[int] = None
) -> ColimitResult:
    """Colimit of a finite directed system: its greatest element, with the
    edge composites as the cocone.  Finite directedness makes the union
    degenerate to the top; every report says so."""
    for m in system.edges.values():
        if not is_k_embedding(C, m):
            raise ValueError("system edges must be strong embeddings")
    for obj in system.objects:
        if not member(C, obj):
            raise ValueError("system objects must be members")
    reach = _reachability(system)
    n = len(system.objects)
    # for finite systems, directedness is equivalent to a common upper bound
    tops = [t for t in range(n) if all(t in reach[i] for i in range(n))]
    if not tops:
        raise ValueError("index diagram is not directed: no common upper bound")
    top = tops[0]
    cocone = tuple(reach[i][top] for i in range(n))
    notes = [
        "finite directed systems have a greatest element; the colimit is that"
        " element and the union axioms are immediate at this scale"
    ]
    competitors = 0
    for P in members_at_scale(C, scale):
        leg_choices = [k_embeddings(C, P_obj, P) for P_obj in system.objects]
        if any(not ch for ch in leg_choices):
            continue
        for combo in itertools.product(*leg_choices):
            ok = all(
                compose(combo[j], system.edges[(i, j)]).map == combo[i].map
                for (i, j) in system.edges
            )
            if not ok:
                continue
            mediator = combo[top]
            if any(compose(mediator, cocone[i]).map != combo[i].map for i in range(n)):
                raise AssertionError("smoothness failed against an enumerated cocone")
            competitors += 1
    notes.append(f"verified mediation against {competitors} competing cocones")
    return ColimitResult(system.objects[top], cocone, competitors, tuple(notes))


# --------------------------------------------------------------------------
# existence of all wide pullbacks


def check_wide_pullbacks_exist(C: StructureClass) -> CheckResult:
    """Wide pullbacks of strong-substructure inclusions exist at scale.

    Universal classes pass structurally.  Otherwise all pairs of strong
    substructures of every member are intersected; closure of pairwise
    intersections extends to arbitrary finite families by associativity,
    and the empty and singleton families are trivial.
    """

    def compute():
        if check_universal(C).ok:
            return CheckResult(
                True,
                "structural",
                notes=(
                    "substructure-closed with inclusion order: intersections of"
                    " substructures are substructures, hence strong members",
                ),
            )
        for N in members_at_scale(C):
            subs = strong_subsets(C, N)
            incls = {S: induced_substructure(N, S)[1] for S in subs}
            for S1, S2 in itertools.combinations_with_replacement(subs, 2):
                out = wide_pullback(C, N, [incls[S1], incls[S2]], certify=False)
                if isinstance(out, LimitFailure):
                    return CheckResult(
                        False,
                        "exhaustive",
                        witness={
                            "ambient": N,
                            "legs": (tuple(sorted(S1)), tuple(sorted(S2))),
                            "reason": out.reason,
                        },
                        notes=(
                            "pairwise intersections determine all finite families",
                        ),
                    )
        return CheckResult(
            True,
            "exhaustive",
            notes=("pairwise intersections determine all finite families",),
        )

    return C.cached(("check-wide-pullbacks",), compute)
