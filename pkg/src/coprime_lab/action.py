"""Coprime actions: an elementary abelian p-group A acting on a p'-group G.

A is never represented as a permutation group; it lives as exponent vectors
in (Z/p)^k together with a homomorphism into Aut(G) given by k commuting
basis automorphisms of order dividing p.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Iterable, Mapping

from . import fastset
from .errors import (
    InternalCheckError,
    PreconditionError,
    ValidationError,
)
from .groups import Group, generated_subgroup, subgroup_conjugate_sets, sylow_subgroup
from .perms import Perm
from .series import is_nilpotent


class Automorphism:
    """A group automorphism given by images of the generators.

    The full element map is tabulated on first use by extending over the
    Cayley graph; the extension verifies the homomorphism property on every
    (element, generator) edge and bijectivity, so a malformed image map is
    rejected with a ValidationError.
    """

    __slots__ = ("source", "images", "_table")

    def __init__(self, source: Group, images: Mapping[Perm, Perm]):
        self.source = source
        img = {}
        for g in source.generators:
            if g not in images:
                raise ValidationError("images must cover every generator of the source group")
            img[g] = images[g]
        self.images = img
        self._table: dict[Perm, Perm] | None = None

    @classmethod
    def identity(cls, source: Group) -> "Automorphism":
        return cls._from_table(source, {x: x for x in source.elements()})

    @classmethod
    def _from_table(cls, source: Group, table: dict[Perm, Perm]) -> "Automorphism":
        auto = cls.__new__(cls)
        auto.source = source
        auto.images = {g: table[g] for g in source.generators}
        auto._table = table
        return auto

    @property
    def table(self) -> dict[Perm, Perm]:
        if self._table is None:
            self._table = self._build_table()
        return self._table

    def _build_table(self) -> dict[Perm, Perm]:
        source = self.source
        for g, img in self.images.items():
            if not source.contains(img):
                raise ValidationError("a generator image lies outside the source group")
        ident = Perm.identity(source.degree)
        table = {ident: ident}
        frontier = [ident]
        pairs = list(self.images.items())
        while frontier:
            next_frontier = []
            for x in frontier:
                tx = table[x]
                for g, img in pairs:
                    y = x * g
                    ty = tx * img
                    known = table.get(y)
                    if known is None:
                        table[y] = ty
                        next_frontier.append(y)
                    elif known != ty:
                        raise ValidationError("generator images do not define a homomorphism")
            frontier = next_frontier
        if len(table) != source.order:
            raise InternalCheckError("automorphism table does not cover the group")
        if len(set(table.values())) != len(table):
            raise ValidationError("generator images define a non-bijective endomorphism")
        return table

    def apply(self, x: Perm) -> Perm:
        return self.table[x]

    def then(self, other: "Automorphism") -> "Automorphism":
        """Composite: apply self, then other."""
        t_other = other.table
        table = {x: t_other[y] for x, y in self.table.items()}
        return Automorphism._from_table(self.source, table)

    def power(self, n: int) -> "Automorphism":
        base = self.table
        table = {x: x for x in base}
        for _ in range(n):
            table = {x: base[y] for x, y in table.items()}
        return Automorphism._from_table(self.source, table)

    def is_identity(self) -> bool:
        return all(g == img for g, img in self.images.items())

    def agrees_with(self, other: "Automorphism") -> bool:
        return all(other.images[g] == img for g, img in self.images.items())

    def preserves_set(self, elements: frozenset[Perm]) -> bool:
        table = self.table
        return all(table[x] in elements for x in elements)


@dataclass(frozen=True)
class ASubgroupDescriptor:
    """A subgroup B <= A described by exponent vectors spanning it."""

    p: int
    k: int
    vectors: tuple[tuple[int, ...], ...]
    codim: int

    @classmethod
    def from_vectors(cls, p: int, k: int, vectors: Iterable) -> "ASubgroupDescriptor":
        span = _span(p, k, [tuple(int(c) % p for c in v) for v in vectors])
        dim = round(math.log(len(span), p))
        basis = _reduced_basis(p, k, span)
        return cls(p=p, k=k, vectors=basis, codim=k - dim)

    @classmethod
    def full(cls, p: int, k: int) -> "ASubgroupDescriptor":
        basis = [tuple(1 if i == j else 0 for i in range(k)) for j in range(k)]
        return cls.from_vectors(p, k, basis)

    @classmethod
    def generated_by(cls, p: int, k: int, vector) -> "ASubgroupDescriptor":
        return cls.from_vectors(p, k, [vector])

    def span_elements(self) -> frozenset[tuple[int, ...]]:
        return _span(self.p, self.k, list(self.vectors))

    def key(self) -> frozenset[tuple[int, ...]]:
        return self.span_elements()

    def contains_vector(self, v) -> bool:
        return tuple(v) in self.span_elements()


def _span(p: int, k: int, vectors: list[tuple[int, ...]]) -> frozenset[tuple[int, ...]]:
    zero = tuple(0 for _ in range(k))
    span = {zero}
    frontier = [zero]
    while frontier:
        nxt = []
        for u in frontier:
            for v in vectors:
                w = tuple((a + b) % p for a, b in zip(u, v))
                if w not in span:
                    span.add(w)
                    nxt.append(w)
        frontier = nxt
    return frozenset(span)


def _reduced_basis(p: int, k: int, span: frozenset[tuple[int, ...]]) -> tuple[tuple[int, ...], ...]:
    """Row-reduced echelon basis of a subspace given by its element set."""
    rows = [list(v) for v in sorted(span) if any(v)]
    basis: list[list[int]] = []
    pivot_cols: list[int] = []
    for col in range(k):
        cand = None
        for row in rows:
            if row[col] % p != 0 and all(row[c] % p == 0 for c in range(col)):
                cand = row
                break
        if cand is None:
            continue
        inv = pow(cand[col], -1, p)
        cand = [(c * inv) % p for c in cand]
        for row in rows:
            f = row[col] % p
            if f and row is not cand:
                for j in range(k):
                    row[j] = (row[j] - f * cand[j]) % p
        for prev, pcol in zip(basis, pivot_cols):
            f = prev[col] % p
            if f:
                for j in range(k):
                    prev[j] = (prev[j] - f * cand[j]) % p
        basis.append(cand)
        pivot_cols.append(col)
        rows = [row for row in rows if any(row)]
    return tuple(tuple(b) for b in basis)


def all_subspaces(p: int, k: int) -> list[ASubgroupDescriptor]:
    """Every subspace of (Z/p)^k, ordered by ascending codimension."""
    zero = tuple(0 for _ in range(k))
    all_vectors = [v for v in itertools.product(range(p), repeat=k)]
    seen: dict[frozenset, ASubgroupDescriptor] = {}
    trivial = ASubgroupDescriptor.from_vectors(p, k, [])
    seen[frozenset({zero})] = trivial
    frontier = [trivial]
    while frontier:
        nxt = []
        for desc in frontier:
            span = desc.span_elements()
            for v in all_vectors:
                if v in span:
                    continue
                bigger = ASubgroupDescriptor.from_vectors(p, k, list(desc.vectors) + [v])
                key = bigger.key()
                if key not in seen:
                    seen[key] = bigger
                    nxt.append(bigger)
        frontier = nxt
    return sorted(seen.values(), key=lambda d: (d.codim, d.vectors))


class ActionSetup:
    """The triple (G, A, phi): A = (Z/p)^k acting on the p'-group G.

    ``basis`` lists the automorphisms phi(e_1), ..., phi(e_k); general phi(u)
    values are composed (and cached) on demand.
    """

    __slots__ = ("G", "p", "k", "basis", "_phi_cache", "_fixed_cache", "_coset_cache")

    def __init__(self, G: Group, p: int, k: int, basis: Iterable[Automorphism]):
        basis = tuple(basis)
        if k < 1 or len(basis) != k:
            raise ValidationError(f"need exactly k={k} basis automorphisms, got {len(basis)}")
        if p < 2:
            raise ValidationError(f"p must be a prime, got {p}")
        for auto in basis:
            if auto.source is not G:
                raise ValidationError("basis automorphisms must act on the setup's group")
        self.G = G
        self.p = p
        self.k = k
        self.basis = basis
        self._phi_cache: dict[tuple[int, ...], Automorphism] = {}
        self._fixed_cache: dict[frozenset, Group] = {}
        self._coset_cache: dict[frozenset, tuple[dict, list]] = {}

    def zero_vector(self) -> tuple[int, ...]:
        return tuple(0 for _ in range(self.k))

    def basis_vectors(self) -> list[tuple[int, ...]]:
        return [tuple(1 if i == j else 0 for i in range(self.k)) for j in range(self.k)]

    def all_vectors(self) -> list[tuple[int, ...]]:
        return [v for v in itertools.product(range(self.p), repeat=self.k)]

    def nonzero_vectors(self) -> list[tuple[int, ...]]:
        return [v for v in self.all_vectors() if any(v)]

    def phi(self, vector) -> Automorphism:
        vector = tuple(int(c) % self.p for c in vector)
        if len(vector) != self.k:
            raise ValidationError("exponent vector length does not match k")
        cached = self._phi_cache.get(vector)
        if cached is not None:
            return cached
        table: dict[Perm, Perm] | None = None
        for exp, base in zip(vector, self.basis):
            for _ in range(exp):
                bt = base.table
                table = dict(bt) if table is None else {x: bt[y] for x, y in table.items()}
        if table is None:
            auto = Automorphism.identity(self.G)
        else:
            auto = Automorphism._from_table(self.G, table)
        self._phi_cache[vector] = auto
        return auto

    def table(self, vector) -> dict[Perm, Perm]:
        return self.phi(vector).table

    def is_invariant_set(self, elements: frozenset[Perm]) -> bool:
        return all(base.preserves_set(elements) for base in self.basis)

    def is_invariant_subgroup(self, H: Group) -> bool:
        if H.degree != self.G.degree:
            return False
        elements = H.elements()
        return all(base.table[g] in elements for base in self.basis for g in H.generators)

    def orbit_of_element(self, x: Perm) -> frozenset[Perm]:
        return frozenset(self.table(u)[x] for u in self.all_vectors())


@dataclass
class SetupReport:
    """Outcome of validate_setup: ok plus a list of human-readable problems."""

    ok: bool
    problems: list[str] = field(default_factory=list)


def validate_setup(setup: ActionSetup) -> SetupReport:
    """Confirm coprimality and that phi is a homomorphism into Aut(G)."""
    problems: list[str] = []
    if math.gcd(setup.G.order, setup.p) != 1:
        problems.append(f"|G| = {setup.G.order} is divisible by p = {setup.p}")
    tables = []
    for j, base in enumerate(setup.basis):
        try:
            tables.append(base.table)
        except ValidationError as exc:
            problems.append(f"basis automorphism {j}: {exc}")
            tables.append(None)
    for j, base in enumerate(setup.basis):
        if tables[j] is None:
            continue
        if not base.power(setup.p).is_identity():
            problems.append(f"basis automorphism {j} has order not dividing p = {setup.p}")
    for i in range(setup.k):
        if tables[i] is None:
            continue
        for j in range(i + 1, setup.k):
            if tables[j] is None:
                continue
            ij = setup.basis[i].then(setup.basis[j])
            ji = setup.basis[j].then(setup.basis[i])
            if not ij.agrees_with(ji):
                problems.append(f"basis automorphisms {i} and {j} do not commute")
    if not setup.phi(setup.zero_vector()).is_identity():
        problems.append("phi(0) is not the identity automorphism")
    return SetupReport(ok=not problems, problems=problems)


def maximal_subgroups(setup: ActionSetup) -> list[ASubgroupDescriptor]:
    """All index-p subgroups of A, exactly (p^k - 1)/(p - 1) of them."""
    p, k = setup.p, setup.k
    functionals = []
    for v in itertools.product(range(p), repeat=k):
        if not any(v):
            continue
        lead = next(c for c in v if c)
        if lead == 1:
            functionals.append(v)
    out = []
    for f in sorted(functionals):
        pivot = next(i for i, c in enumerate(f) if c)
        basis = []
        for j in range(k):
            if j == pivot:
                continue
            vec = [0] * k
            vec[j] = 1
            vec[pivot] = (-f[j] * pow(f[pivot], -1, p)) % p
            basis.append(tuple(vec))
        out.append(ASubgroupDescriptor.from_vectors(p, k, basis))
    expected = (p**k - 1) // (p - 1)
    if len(out) != expected:
        raise InternalCheckError(f"found {len(out)} maximal subgroups, expected {expected}")
    return out


def fixed_subgroup(setup: ActionSetup, B: ASubgroupDescriptor) -> Group:
    """C_G(B): the elements fixed by every automorphism phi(u), u in B."""
    key = B.key()
    cached = setup._fixed_cache.get(key)
    if cached is not None:
        return cached
    tables = [setup.table(u) for u in B.vectors]
    fixed = [x for x in setup.G.sorted_elements() if all(t[x] == x for t in tables)]
    result = Group.from_elements(setup.G.degree, fixed, cap=setup.G.cap)
    setup._fixed_cache[key] = result
    return result


def fixed_elements_in(setup: ActionSetup, B: ASubgroupDescriptor, elements: Iterable[Perm]) -> list[Perm]:
    """Elements of the given collection fixed by every phi(u), u in B."""
    tables = [setup.table(u) for u in B.vectors]
    return [x for x in sorted(elements) if all(t[x] == x for t in tables)]


def _require_invariant_normal(setup: ActionSetup, N: Group) -> None:
    if not N.is_subgroup_of(setup.G):
        raise PreconditionError("N is not a subgroup of G")
    if not N.is_normal_in(setup.G):
        raise PreconditionError("N is not normal in G")
    if not setup.is_invariant_subgroup(N):
        raise PreconditionError("N is not A-invariant")


def _coset_index_map(setup: ActionSetup, N: Group) -> tuple[dict[Perm, int], list[Perm]]:
    key = N.elements()
    cached = setup._coset_cache.get(key)
    if cached is not None:
        return cached
    coset_of: dict[Perm, int] = {}
    reps: list[Perm] = []
    for x in setup.G.sorted_elements():
        if x in coset_of:
            continue
        cid = len(reps)
        reps.append(x)
        for n in key:
            coset_of[x * n] = cid
    setup._coset_cache[key] = (coset_of, reps)
    return coset_of, reps


def check_fg1_quotient(setup: ActionSetup, N: Group, B: ASubgroupDescriptor) -> bool:
    """Fixed points in G/N equal the image of C_G(B): C_{G/N}(B) = C_G(B)N/N."""
    _require_invariant_normal(setup, N)
    coset_of, reps = _coset_index_map(setup, N)
    tables = [setup.table(u) for u in B.vectors]
    fixed_below = {
        cid for cid, rep in enumerate(reps) if all(coset_of[t[rep]] == cid for t in tables)
    }
    image = {coset_of[c] for c in fixed_subgroup(setup, B).elements()}
    return fixed_below == image


def check_fg2_generation(setup: ActionSetup, H: Group) -> bool:
    """H = <C_H(A_1), ..., C_H(A_s)>; for nilpotent H also the setwise product."""
    if setup.k < 2:
        raise PreconditionError("the generation lemma needs rank k >= 2")
    if not setup.is_invariant_subgroup(H):
        raise PreconditionError("H is not A-invariant")
    h_elements = H.elements()
    parts = []
    for A_j in maximal_subgroups(setup):
        fixed = fixed_elements_in(setup, A_j, h_elements)
        parts.append(Group.from_elements(setup.G.degree, fixed, cap=setup.G.cap))
    generated = generated_subgroup(setup.G.degree, parts, cap=setup.G.cap)
    if generated.order != H.order:
        return False
    if is_nilpotent(H):
        factor_sets = sorted((p.elements() for p in parts), key=len, reverse=True)
        if not fastset.setwise_product_covers(h_elements, factor_sets, setup.G.degree):
            return False
    return True


def invariant_sylow(setup: ActionSetup, H: Group, r: int) -> Group:
    """An A-invariant Sylow r-subgroup of the A-invariant subgroup H."""
    if not setup.is_invariant_subgroup(H):
        raise PreconditionError("H is not A-invariant")
    P = sylow_subgroup(H, r)
    if P.is_trivial or P.order == H.order:
        return P
    if setup.is_invariant_subgroup(P):
        return P
    for candidate in subgroup_conjugate_sets(H, P):
        if setup.is_invariant_set(candidate):
            return Group.from_elements(setup.G.degree, candidate, cap=setup.G.cap)
    raise InternalCheckError(
        "no A-invariant Sylow subgroup among the conjugates; coprime theory guarantees one"
    )


def induced_action_on_quotient(setup: ActionSetup, N: Group) -> ActionSetup:
    """The induced setup on a faithful permutation representation of G/N."""
    _require_invariant_normal(setup, N)
    coset_of, reps = _coset_index_map(setup, N)
    degree = max(len(reps), 1)

    def coset_perm(g: Perm) -> Perm:
        return Perm._raw(tuple(coset_of[rep * g] for rep in reps))

    gen_images = {g: coset_perm(g) for g in setup.G.generators}
    quotient = Group(degree, list(gen_images.values()), cap=setup.G.cap)
    if quotient.order != setup.G.order // N.order:
        raise InternalCheckError("coset action has the wrong order for the quotient")
    kept = set(quotient.generators)
    new_basis = []
    for base in setup.basis:
        images: dict[Perm, Perm] = {}
        for g, q in gen_images.items():
            if q not in kept:
                continue
            img = coset_perm(base.table[g])
            if q in images and images[q] != img:
                raise InternalCheckError("induced automorphism is not well-defined on cosets")
            images[q] = img
        new_basis.append(Automorphism(quotient, images))
    return ActionSetup(quotient, setup.p, setup.k, new_basis)
