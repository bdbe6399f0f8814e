"""Universal-theory extraction from substructure-closed classes.

A substructure-closed class at scale is exactly the class of structures
omitting its minimal forbidden configurations.  This module computes that
basis, decides membership by omission, and renders the basis as a universal
theory: one universally quantified negated diagram per forbidden
configuration.  Sentences carry a full syntax tree, a deterministic
renderer, a parser inverse to it, and direct evaluation by quantifier
expansion over finite universes.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterator, Sequence

from .classes import StructureClass, check_universal, member, members_at_scale
from .core import (
    DiagramType,
    Structure,
    Vocabulary,
    canonical_form,
    diagram_of,
    embeds,
    function_closure,
    induced_substructure,
    labeled_structures,
)


class UniversalityRequired(ValueError):
    """The class must pass the universality check first."""


@dataclass(frozen=True)
class ForbiddenBasis:
    """Minimal forbidden generated configurations, complete up to ``scale``.

    No member embeds into another (antichain minimality)."""

    gamma: tuple[DiagramType, ...]
    scale: int


def pointed_embeds(d: DiagramType, M: Structure) -> bool:
    """Does the diagram's shape embed into M?  The point only carries
    generation bookkeeping."""
    if d.shape.vocab != M.vocab:
        raise ValueError("vocabulary mismatch")
    return embeds(d.shape, M)


def minimal_forbidden(C: StructureClass, scale: int | None = None) -> ForbiddenBasis:
    """All substructure-minimal non-members at scale, canonically pointed.

    A structure enters the basis when it is not a member but every proper
    substructure is; completeness is certified only up to the scale stamped
    into the result.
    """
    result = check_universal(C)
    if not result.ok:
        raise UniversalityRequired(
            f"class {C.name!r} is not universal at scale; witness {result.witness!r}"
        )
    bound = C.scale if scale is None else scale
    found: dict[bytes, DiagramType] = {}
    for size in range(bound + 1):
        for M in labeled_structures(C.vocab, size):
            if member(C, M):
                continue
            minimal = True
            for r in range(size):
                for combo in itertools.combinations(range(size), r):
                    S = frozenset(combo)
                    if function_closure(M, S) != S:
                        continue
                    sub, _ = induced_substructure(M, S)
                    if not member(C, sub):
                        minimal = False
                        break
                if not minimal:
                    break
            if not minimal:
                continue
            d = diagram_of(M)
            found.setdefault(d.code(), d)
    gamma = tuple(
        found[c] for c in sorted(found, key=lambda c: (found[c].shape.size, c))
    )
    for a, b in itertools.permutations(gamma, 2):
        if embeds(a.shape, b.shape):
            raise AssertionError("forbidden basis is not an antichain")
    return ForbiddenBasis(gamma, bound)


def omits(M: Structure, basis: ForbiddenBasis) -> bool:
    """True when no basis diagram embeds into M."""
    return all(not pointed_embeds(d, M) for d in basis.gamma)


# --------------------------------------------------------------------------
# universal sentences


@dataclass(frozen=True)
class RelLit:
    sym: str
    args: tuple[int, ...]
    positive: bool

    def render(self) -> str:
        body = f"{self.sym}({', '.join(f'x{i}' for i in self.args)})"
        return body if self.positive else f"¬{body}"


@dataclass(frozen=True)
class FunLit:
    sym: str
    args: tuple[int, ...]
    value: int

    def render(self) -> str:
        return f"{self.sym}({', '.join(f'x{i}' for i in self.args)}) = x{self.value}"


@dataclass(frozen=True)
class NeqLit:
    left: int
    right: int

    def render(self) -> str:
        return f"x{self.left} ≠ x{self.right}"


Literal = RelLit | FunLit | NeqLit


@dataclass(frozen=True)
class Sentence:
    """A universally quantified negated conjunction of diagram literals."""

    nvars: int
    literals: tuple[Literal, ...]

    def render(self) -> str:
        vars_part = " ".join(f"x{i}" for i in range(self.nvars))
        body = " ∧ ".join(lit.render() for lit in self.literals) or "⊤"
        prefix = f"∀{vars_part} " if self.nvars else "∀ "
        return f"{prefix}¬({body})"

    def holds_in(self, M: Structure) -> bool:
        """Evaluate by direct quantifier expansion over the universe."""
        for assignment in itertools.product(range(M.size), repeat=self.nvars):
            if all(_eval_literal(lit, assignment, M) for lit in self.literals):
                return False
        return True


def _eval_literal(lit: Literal, assignment: Sequence[int], M: Structure) -> bool:
    if isinstance(lit, RelLit):
        holds = M.has(lit.sym, tuple(assignment[i] for i in lit.args))
        return holds if lit.positive else not holds
    if isinstance(lit, FunLit):
        return M.app(lit.sym, tuple(assignment[i] for i in lit.args)) == assignment[lit.value]
    return assignment[lit.left] != assignment[lit.right]


def sentence_of_diagram(d: DiagramType) -> Sentence:
    """The negated full diagram: atomic and negated-atomic relation facts,
    function equations, and pairwise distinctness.  Variables follow the
    point tuple, then the remaining elements ascending; literals are sorted
    by their rendering."""
    shape = d.shape
    order: list[int] = []
    for x in d.point:
        if x not in order:
            order.append(x)
    for x in shape.universe():
        if x not in order:
            order.append(x)
    var = {x: i for i, x in enumerate(order)}
    lits: list[Literal] = []
    for sym, arity in shape.vocab.relations:
        present = set(shape.rel_tuples(sym))
        for t in itertools.product(range(shape.size), repeat=arity):
            lits.append(RelLit(sym, tuple(var[x] for x in t), t in present))
    for sym, _arity in shape.vocab.functions:
        for args, val in shape.fun_items(sym):
            lits.append(FunLit(sym, tuple(var[x] for x in args), var[val]))
    for a, b in itertools.combinations(range(shape.size), 2):
        lits.append(NeqLit(min(var[a], var[b]), max(var[a], var[b])))
    lits.sort(key=lambda lit: lit.render())
    return Sentence(shape.size, tuple(lits))


HEADER = "# certified-scale:"


def emit_universal_theory(basis: ForbiddenBasis) -> str:
    """One sentence per forbidden configuration, deterministic order, with a
    header recording the certification scale."""
    lines = [f"{HEADER} {basis.scale}"]
    lines.extend(sentence_of_diagram(d).render() for d in basis.gamma)
    return "\n".join(lines) + "\n"


def theory_satisfied(M: Structure, sentences: Sequence[Sentence]) -> bool:
    return all(s.holds_in(M) for s in sentences)


# --------------------------------------------------------------------------
# theory parsing (inverse of the renderer)


class TheoryParseError(ValueError):
    pass


def parse_theory(text: str, vocab: Vocabulary) -> tuple[int, tuple[Sentence, ...]]:
    """Parse an emitted theory document back into (scale, sentences)."""
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines or not lines[0].startswith(HEADER):
        raise TheoryParseError("missing certified-scale header")
    try:
        scale = int(lines[0][len(HEADER):].strip())
    except ValueError as exc:
        raise TheoryParseError("bad scale header") from exc
    sentences = tuple(_parse_sentence(ln, vocab) for ln in lines[1:])
    return scale, sentences


def _parse_sentence(line: str, vocab: Vocabulary) -> Sentence:
    rest = line.strip()
    if not rest.startswith("∀"):
        raise TheoryParseError(f"sentence must start with ∀: {line!r}")
    rest = rest[1:]
    head, sep, body = rest.partition("¬(")
    if not sep or not body.rstrip().endswith(")"):
        raise TheoryParseError(f"malformed sentence body: {line!r}")
    vars_found = [v for v in head.split() if v]
    nvars = len(vars_found)
    for i, v in enumerate(vars_found):
        if v != f"x{i}":
            raise TheoryParseError(f"unexpected variable {v!r}")
    body = body.rstrip()[:-1].strip()
    lits: list[Literal] = []
    if body != "⊤":
        for part in body.split(" ∧ "):
            lits.append(_parse_literal(part.strip(), vocab, nvars))
    return Sentence(nvars, tuple(lits))


def _var(tok: str, nvars: int) -> int:
    tok = tok.strip()
    if not tok.startswith("x") or not tok[1:].isdigit():
        raise TheoryParseError(f"expected variable, got {tok!r}")
    i = int(tok[1:])
    if i >= nvars:
        raise TheoryParseError(f"variable {tok!r} out of range")
    return i


def _parse_literal(part: str, vocab: Vocabulary, nvars: int) -> Literal:
    if "≠" in part:
        left, right = part.split("≠")
        return NeqLit(_var(left, nvars), _var(right, nvars))
    positive = True
    if part.startswith("¬"):
        positive = False
        part = part[1:]
    sym, sep, rest = part.partition("(")
    sym = sym.strip()
    if not sep:
        raise TheoryParseError(f"malformed literal {part!r}")
    args_text, sep, tail = rest.partition(")")
    args = tuple(_var(a, nvars) for a in args_text.split(",") if a.strip()) if args_text.strip() else ()
    tail = tail.strip()
    if tail.startswith("="):
        if sym not in vocab.fun_names:
            raise TheoryParseError(f"unknown function symbol {sym!r}")
        return FunLit(sym, args, _var(tail[1:], nvars))
    if sym not in vocab.rel_names:
        raise TheoryParseError(f"unknown relation symbol {sym!r}")
    return RelLit(sym, args, positive)
