"""Finite first-order structures and their maps.

Vocabularies, structures over initial-segment universes, morphisms,
generated substructures, canonical forms, and bounded isomorph-free
enumeration.  Universes are always 0..n-1, so every isomorphism class
has a canonical representative and "closed under isomorphism" is a
property of codes, not of proper classes.

Everything in this module is a pure function of immutable values;
operations may run concurrently and results are deterministic.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Iterator, Mapping, Optional, Sequence

HOM = "homomorphism"
EMB = "embedding"

DEFAULT_CEILING = 2_000_000


class EnumerationLimit(RuntimeError):
    """Raised when a bounded enumeration would exceed its ceiling."""


# --------------------------------------------------------------------------
# vocabularies


@dataclass(frozen=True)
class Vocabulary:
    """Finitary relation and function symbols with arities (arity 0 function
    symbols are constants)."""

    name: str
    relations: tuple[tuple[str, int], ...] = ()
    functions: tuple[tuple[str, int], ...] = ()

    def __post_init__(self):
        seen = set()
        for sym, arity in self.relations + self.functions:
            if sym in seen:
                raise ValueError(f"duplicate symbol {sym!r} in vocabulary {self.name!r}")
            if not isinstance(arity, int) or arity < 0:
                raise ValueError(f"symbol {sym!r} has invalid arity {arity!r}")
            seen.add(sym)

    @property
    def rel_names(self) -> tuple[str, ...]:
        return tuple(s for s, _ in self.relations)

    @property
    def fun_names(self) -> tuple[str, ...]:
        return tuple(s for s, _ in self.functions)

    def rel_arity(self, sym: str) -> int:
        for s, a in self.relations:
            if s == sym:
                return a
        raise KeyError(sym)

    def fun_arity(self, sym: str) -> int:
        for s, a in self.functions:
            if s == sym:
                return a
        raise KeyError(sym)

    def arities(self) -> dict[str, int]:
        return dict(self.relations + self.functions)

    def extends(self, sub: "Vocabulary") -> bool:
        """True when every symbol of ``sub`` appears here with equal arity
        and kind."""
        return set(sub.relations) <= set(self.relations) and set(
            sub.functions
        ) <= set(self.functions)


# --------------------------------------------------------------------------
# structures


@dataclass(frozen=True)
class Structure:
    """A finite structure: universe 0..size-1, one tuple set per relation
    symbol and one total value table per function symbol.

    ``rels[i]`` is the sorted tuple of tuples interpreting ``vocab.relations[i]``.
    ``funs[i]`` is the flat value table of ``vocab.functions[i]``, indexed by
    the lexicographic rank of the argument tuple.
    """

    vocab: Vocabulary
    size: int
    rels: tuple[tuple[tuple[int, ...], ...], ...]
    funs: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if self.size < 0:
            raise ValueError("negative universe size")
        if len(self.rels) != len(self.vocab.relations):
            raise ValueError("relation interpretation count mismatch")
        if len(self.funs) != len(self.vocab.functions):
            raise ValueError("function interpretation count mismatch")
        for (sym, arity), tuples in zip(self.vocab.relations, self.rels):
            for t in tuples:
                if len(t) != arity or any(not 0 <= x < self.size for x in t):
                    raise ValueError(f"relation {sym!r}: bad tuple {t!r}")
            if tuple(sorted(set(tuples))) != tuples:
                raise ValueError(f"relation {sym!r}: tuples not sorted/deduplicated")
        for (sym, arity), table in zip(self.vocab.functions, self.funs):
            if len(table) != self.size**arity:
                raise ValueError(
                    f"function {sym!r} is not total: {len(table)} of "
                    f"{self.size ** arity} tuples interpreted"
                )
            if any(not 0 <= v < self.size for v in table):
                raise ValueError(f"function {sym!r}: value outside universe")

    @classmethod
    def build(
        cls,
        vocab: Vocabulary,
        size: int,
        rels: Mapping[str, Iterable[Sequence[int]]] | None = None,
        funs: Mapping[str, Mapping[tuple, int]] | None = None,
    ) -> "Structure":
        rels = dict(rels or {})
        funs = dict(funs or {})
        unknown = (set(rels) - set(vocab.rel_names)) | (set(funs) - set(vocab.fun_names))
        if unknown:
            raise ValueError(f"unknown symbols {sorted(unknown)} for vocabulary {vocab.name!r}")
        rel_part = []
        for sym, _arity in vocab.relations:
            tuples = sorted({tuple(t) for t in rels.get(sym, ())})
            rel_part.append(tuple(tuples))
        fun_part = []
        for sym, arity in vocab.functions:
            given = funs.get(sym)
            table = []
            for args in itertools.product(range(size), repeat=arity):
                if given is None or args not in given:
                    raise ValueError(f"function {sym!r} is missing tuple {args!r}")
                table.append(given[args])
            if given is not None and len(given) != size**arity:
                raise ValueError(f"function {sym!r} has spurious tuples")
            fun_part.append(tuple(table))
        return cls(vocab, size, tuple(rel_part), tuple(fun_part))

    # -- accessors --------------------------------------------------------

    def universe(self) -> range:
        return range(self.size)

    def rel_index(self, sym: str) -> int:
        return self.vocab.rel_names.index(sym)

    def fun_index(self, sym: str) -> int:
        return self.vocab.fun_names.index(sym)

    def rel_tuples(self, sym: str) -> tuple[tuple[int, ...], ...]:
        return self.rels[self.rel_index(sym)]

    def has(self, sym: str, args: Sequence[int]) -> bool:
        return tuple(args) in set(self.rels[self.rel_index(sym)])

    def app(self, sym: str, args: Sequence[int]) -> int:
        i = self.fun_index(sym)
        arity = self.vocab.functions[i][1]
        return self.funs[i][_rank(args, self.size, arity)]

    def fun_items(self, sym: str) -> Iterator[tuple[tuple[int, ...], int]]:
        i = self.fun_index(sym)
        arity = self.vocab.functions[i][1]
        for args, val in zip(itertools.product(range(self.size), repeat=arity), self.funs[i]):
            yield args, val


def _rank(args: Sequence[int], base: int, arity: int) -> int:
    r = 0
    for x in args:
        r = r * base + x
    return r


# --------------------------------------------------------------------------
# morphisms


@dataclass(frozen=True)
class Morphism:
    """A total element map between structures, tagged as homomorphism or
    embedding.  Validity is checked by :func:`morphism_violation`."""

    source: Structure
    target: Structure
    map: tuple[int, ...]
    kind: str = EMB

    def __call__(self, x: int) -> int:
        return self.map[x]

    def image(self) -> frozenset[int]:
        return frozenset(self.map)

    def is_bijective(self) -> bool:
        return self.source.size == self.target.size == len(set(self.map))


def identity(M: Structure) -> Morphism:
    return Morphism(M, M, tuple(range(M.size)), EMB)


def compose(f: Morphism, g: Morphism) -> Morphism:
    """The composite f.g (apply g first).  Embedding iff both are."""
    if g.target is not f.source and g.target != f.source:
        raise ValueError("composition boundary mismatch")
    kind = EMB if f.kind == EMB and g.kind == EMB else HOM
    return Morphism(g.source, f.target, tuple(f.map[x] for x in g.map), kind)


def hom_violation(source: Structure, target: Structure, fmap: Sequence[int]) -> Optional[tuple]:
    """First homomorphism violation as (reason, data), or None."""
    if source.vocab != target.vocab:
        raise ValueError("vocabulary mismatch")
    if len(fmap) != source.size or any(not 0 <= y < target.size for y in fmap):
        return ("not-total", tuple(fmap))
    for (sym, _), tuples in zip(source.vocab.relations, source.rels):
        tset = set(target.rel_tuples(sym))
        for t in tuples:
            if tuple(fmap[x] for x in t) not in tset:
                return ("relation-not-preserved", (sym, t))
    for sym, _arity in source.vocab.functions:
        for args, val in source.fun_items(sym):
            if fmap[val] != target.app(sym, tuple(fmap[x] for x in args)):
                return ("function-not-preserved", (sym, args))
    return None


def embedding_violation(source: Structure, target: Structure, fmap: Sequence[int]) -> Optional[tuple]:
    """First embedding violation: injectivity, hom conditions, and relation
    reflection (a tuple holding on the image must hold on the preimage)."""
    v = hom_violation(source, target, fmap)
    if v is not None:
        return v
    seen: dict[int, int] = {}
    for x, y in enumerate(fmap):
        if y in seen:
            return ("not-injective", (seen[y], x))
        seen[y] = x
    for (sym, arity), tuples in zip(source.vocab.relations, source.rels):
        tset = set(tuples)
        target_set = set(target.rel_tuples(sym))
        for t in itertools.product(range(source.size), repeat=arity):
            if t not in tset and tuple(fmap[x] for x in t) in target_set:
                return ("relation-not-reflected", (sym, t))
    return None


def morphism_violation(f: Morphism) -> Optional[tuple]:
    if f.kind == EMB:
        return embedding_violation(f.source, f.target, f.map)
    return hom_violation(f.source, f.target, f.map)


def is_embedding(f: Morphism) -> bool:
    return embedding_violation(f.source, f.target, f.map) is None


def make_embedding(source: Structure, target: Structure, fmap: Sequence[int]) -> Morphism:
    v = embedding_violation(source, target, fmap)
    if v is not None:
        raise ValueError(f"not an embedding: {v[0]} at {v[1]!r}")
    return Morphism(source, target, tuple(fmap), EMB)


def _search_maps(M: Structure, N: Structure, injective: bool, reflect: bool,
                 first_only: bool = False) -> list[tuple[int, ...]]:
    """Backtracking enumeration of homomorphisms (or embeddings when
    ``injective and reflect``), in lexicographic order of the map."""
    if M.vocab != N.vocab:
        raise ValueError("vocabulary mismatch")
    n, out = M.size, []
    rel_pairs = [
        (set(mt), set(N.rel_tuples(sym)), sym, arity)
        for (sym, arity), mt in zip(M.vocab.relations, M.rels)
    ]
    fun_syms = [sym for sym, _ in M.vocab.functions]

    def consistent(assigned: list[int], k: int) -> bool:
        # check everything whose mention set lies inside 0..k
        bound = k + 1
        for mset, nset, sym, arity in rel_pairs:
            for t in itertools.product(range(bound), repeat=arity):
                if k not in t and arity > 0:
                    continue
                holds = t in mset
                image = tuple(assigned[x] for x in t)
                if holds and image not in nset:
                    return False
                if reflect and not holds and image in nset:
                    return False
        for sym in fun_syms:
            arity = M.vocab.fun_arity(sym)
            for args in itertools.product(range(bound), repeat=arity):
                if arity > 0 and k not in args and M.app(sym, args) != k:
                    continue
                val = M.app(sym, args)
                if val < bound:
                    if N.app(sym, tuple(assigned[x] for x in args)) != assigned[val]:
                        return False
        return True

    def extend(assigned: list[int], used: set[int]):
        k = len(assigned)
        if k == n:
            out.append(tuple(assigned))
            return not first_only
        for y in range(N.size):
            if injective and y in used:
                continue
            assigned.append(y)
            used.add(y)
            ok = consistent(assigned, k)
            if ok and not extend(assigned, used):
                assigned.pop()
                used.discard(y)
                return False
            assigned.pop()
            used.discard(y)
        return True

    # 0-ary function symbols constrain the empty prefix
    if n == 0:
        if any(arity == 0 for _, arity in M.vocab.functions):
            return []
        return [()]
    extend([], set())
    return out


def enumerate_embeddings(M: Structure, N: Structure) -> tuple[Morphism, ...]:
    """All embeddings M -> N, lexicographic in the underlying map."""
    maps = _search_maps(M, N, injective=True, reflect=True)
    return tuple(Morphism(M, N, m, EMB) for m in maps)


def enumerate_homomorphisms(M: Structure, N: Structure) -> tuple[Morphism, ...]:
    maps = _search_maps(M, N, injective=False, reflect=False)
    return tuple(Morphism(M, N, m, HOM) for m in maps)


def embeds(M: Structure, N: Structure) -> bool:
    """True when some embedding M -> N exists."""
    if M.size > N.size:
        return False
    return bool(_search_maps(M, N, injective=True, reflect=True, first_only=True))


# --------------------------------------------------------------------------
# substructures


def function_closure(M: Structure, subset: Iterable[int]) -> frozenset[int]:
    """Least subset of the universe containing ``subset`` and closed under
    all function interpretations (constants included)."""
    closed = set(subset)
    if any(x not in M.universe() for x in closed):
        raise ValueError("subset outside universe")
    changed = True
    while changed:
        changed = False
        for sym, arity in M.vocab.functions:
            for args in itertools.product(sorted(closed), repeat=arity):
                v = M.app(sym, args)
                if v not in closed:
                    closed.add(v)
                    changed = True
    return frozenset(closed)


def induced_substructure(M: Structure, subset: Iterable[int]) -> tuple[Structure, Morphism]:
    """Substructure induced on a function-closed subset, relabeled onto an
    initial segment; returned with the inclusion embedding."""
    elems = sorted(set(subset))
    if function_closure(M, elems) != frozenset(elems):
        raise ValueError("subset not closed under functions")
    index = {x: i for i, x in enumerate(elems)}
    rels = tuple(
        tuple(sorted(tuple(index[x] for x in t) for t in tuples if all(x in index for x in t)))
        for tuples in M.rels
    )
    funs = []
    for sym, arity in M.vocab.functions:
        table = tuple(
            index[M.app(sym, tuple(elems[i] for i in args))]
            for args in itertools.product(range(len(elems)), repeat=arity)
        )
        funs.append(table)
    sub = Structure(M.vocab, len(elems), rels, tuple(funs))
    return sub, Morphism(sub, M, tuple(elems), EMB)


def generated_substructure(M: Structure, subset: Iterable[int]) -> tuple[Structure, Morphism]:
    """Substructure generated by ``subset``: close under functions, induce
    relations, return with the inclusion embedding."""
    return induced_substructure(M, function_closure(M, subset))


def reduct(M: Structure, sub: Vocabulary) -> Structure:
    """Restriction of M to a sub-vocabulary (same universe)."""
    if not M.vocab.extends(sub):
        raise ValueError(f"{sub.name!r} is not a sub-vocabulary of {M.vocab.name!r}")
    rels = tuple(M.rels[M.rel_index(sym)] for sym, _ in sub.relations)
    funs = tuple(M.funs[M.fun_index(sym)] for sym, _ in sub.functions)
    return Structure(sub, M.size, rels, funs)


# --------------------------------------------------------------------------
# canonical forms


def relabel(M: Structure, perm: Sequence[int]) -> Structure:
    """Copy of M with element i renamed perm[i]."""
    inv = [0] * M.size
    for i, p in enumerate(perm):
        inv[p] = i
    rels = tuple(
        tuple(sorted(tuple(perm[x] for x in t) for t in tuples)) for tuples in M.rels
    )
    funs = []
    for fi, (sym, arity) in enumerate(M.vocab.functions):
        table = [0] * (M.size**arity)
        for args, val in zip(itertools.product(range(M.size), repeat=arity), M.funs[fi]):
            table[_rank(tuple(perm[x] for x in args), M.size, arity)] = perm[val]
        funs.append(tuple(table))
    return Structure(M.vocab, M.size, rels, tuple(funs))


def _encode_key(M: Structure):
    return (M.size, M.rels, M.funs)


@dataclass(frozen=True)
class CanonicalForm:
    """Total-order key for an isomorphism class plus the relabeling morphism
    from the input onto the canonical representative."""

    code: bytes
    canonical: Structure
    witness: Morphism


@lru_cache(maxsize=None)
def canonical_form(M: Structure) -> CanonicalForm:
    """Lexicographically least encoding of M over all universe orderings.

    Equal codes iff isomorphic; idempotent.  The minimum is exact (full
    orbit); universes at desk scale keep the search cheap.
    """
    if M.size == 0:
        return CanonicalForm(repr(_encode_key(M)).encode(), M, Morphism(M, M, (), EMB))
    best_key = None
    best_perm = None
    for perm in itertools.permutations(range(M.size)):
        key = _encode_key(relabel(M, perm))
        if best_key is None or key < best_key:
            best_key = key
            best_perm = perm
    canon = relabel(M, best_perm)
    return CanonicalForm(repr(best_key).encode(), canon, Morphism(M, canon, best_perm, EMB))


def canonical_structure(M: Structure) -> Structure:
    return canonical_form(M).canonical


def is_isomorphic(M: Structure, N: Structure) -> bool:
    if M.vocab != N.vocab:
        raise ValueError("vocabulary mismatch")
    return canonical_form(M).code == canonical_form(N).code


@lru_cache(maxsize=None)
def automorphism_perms(M: Structure) -> tuple[tuple[int, ...], ...]:
    """All permutations of the universe fixing M (as relabelings)."""
    key = _encode_key(M)
    return tuple(
        perm
        for perm in itertools.permutations(range(M.size))
        if _encode_key(relabel(M, perm)) == key
    )


@lru_cache(maxsize=None)
def pointed_canonical(M: Structure, point: tuple[int, ...]) -> tuple[bytes, Structure, tuple[int, ...]]:
    """Canonical form of a structure with a distinguished tuple.

    The point is pinned to its first-occurrence pattern, then the remaining
    elements are minimized over; codes agree exactly for pointed-isomorphic
    pairs (an isomorphism carrying one tuple to the other positionwise).
    Returns (code, canonical structure, canonical point).
    """
    if any(not 0 <= x < M.size for x in point):
        raise ValueError("point outside universe")
    pinned: dict[int, int] = {}
    for x in point:
        if x not in pinned:
            pinned[x] = len(pinned)
    pattern = tuple(pinned[x] for x in point)
    rest = [x for x in M.universe() if x not in pinned]
    k = len(pinned)
    best_key = None
    best_perm = None
    for tail in itertools.permutations(range(k, M.size)):
        perm = [0] * M.size
        for x, i in pinned.items():
            perm[x] = i
        for x, i in zip(rest, tail):
            perm[x] = i
        key = _encode_key(relabel(M, perm))
        if best_key is None or key < best_key:
            best_key = key
            best_perm = perm
    canon = relabel(M, best_perm) if best_perm is not None else M
    new_point = tuple(best_perm[x] for x in point) if best_perm is not None else point
    code = repr((pattern, _encode_key(canon))).encode()
    return code, canon, new_point


# --------------------------------------------------------------------------
# pointed diagrams


@dataclass(frozen=True)
class DiagramType:
    """A finite structure with a distinguished generating tuple, stored in
    pointed canonical form.  Used both as a forbidden configuration and as a
    pointed-isomorphism-class representative."""

    shape: Structure
    point: tuple[int, ...]

    def __post_init__(self):
        if function_closure(self.shape, self.point) != frozenset(self.shape.universe()):
            raise ValueError("point does not generate the shape")

    def code(self) -> bytes:
        return pointed_canonical(self.shape, self.point)[0]


def diagram_of(M: Structure, point: Optional[Sequence[int]] = None) -> DiagramType:
    """Canonical pointed diagram of M.  When no point is given, the least
    generating subset (by size, then lexicographic order) is used."""
    if point is None:
        for r in range(M.size + 1):
            found = None
            for combo in itertools.combinations(range(M.size), r):
                if function_closure(M, combo) == frozenset(M.universe()):
                    found = combo
                    break
            if found is not None:
                point = found
                break
        assert point is not None
    _code, canon, cpoint = pointed_canonical(M, tuple(point))
    return DiagramType(canon, cpoint)


# --------------------------------------------------------------------------
# bounded enumeration


def count_labeled(vocab: Vocabulary, size: int) -> int:
    total = 1
    for _sym, arity in vocab.relations:
        total *= 2 ** (size**arity)
    for _sym, arity in vocab.functions:
        total *= size ** (size**arity) if size > 0 or arity > 0 else 0
        if size == 0 and arity == 0:
            return 0
    return total


def labeled_structures(vocab: Vocabulary, size: int,
                       ceiling: int = DEFAULT_CEILING) -> Iterator[Structure]:
    """All labeled structures with the given universe size, in a fixed
    deterministic order.  Guarded by ``ceiling``; memory stays flat."""
    n = count_labeled(vocab, size)
    if n > ceiling:
        raise EnumerationLimit(
            f"{n} labeled structures of size {size} over {vocab.name!r} "
            f"exceed the ceiling {ceiling}"
        )
    if n == 0:
        return
    rel_cells = [
        list(itertools.product(range(size), repeat=arity)) for _sym, arity in vocab.relations
    ]

    def rel_choices(i: int):
        cells = rel_cells[i]
        for bits in range(2 ** len(cells)):
            yield tuple(sorted(c for j, c in enumerate(cells) if bits >> j & 1))

    def fun_choices(i: int):
        arity = vocab.functions[i][1]
        yield from itertools.product(range(size), repeat=size**arity)

    def rec_fun(i: int, funs: list):
        if i == len(vocab.functions):
            yield tuple(funs)
            return
        for table in fun_choices(i):
            funs.append(table)
            yield from rec_fun(i + 1, funs)
            funs.pop()

    def rec_rel(i: int, rels: list):
        if i == len(vocab.relations):
            fixed = tuple(rels)
            for funs in rec_fun(0, []):
                yield fixed, funs
            return
        for tuples in rel_choices(i):
            rels.append(tuples)
            yield from rec_rel(i + 1, rels)
            rels.pop()

    for rels, funs in rec_rel(0, []):
        yield Structure(vocab, size, rels, funs)


def enumerate_structures(vocab: Vocabulary, max_size: int,
                         ceiling: int = DEFAULT_CEILING) -> Iterator[Structure]:
    """One canonical representative per isomorphism class with universe size
    at most ``max_size``, ordered by (size, canonical code)."""
    for size in range(max_size + 1):
        reps: dict[bytes, Structure] = {}
        for labeled in labeled_structures(vocab, size, ceiling):
            cf = canonical_form(labeled)
            if cf.code not in reps:
                reps[cf.code] = cf.canonical
        for code in sorted(reps):
            yield reps[code]
