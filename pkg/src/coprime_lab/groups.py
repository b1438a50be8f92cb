"""Finite permutation groups: membership chains, subgroup operations, abelian sections."""

from __future__ import annotations

import itertools
from typing import Iterable, Iterator

from .config import enumeration_cap
from .errors import (
    CapacityError,
    ContainmentError,
    InternalCheckError,
    PreconditionError,
    ValidationError,
)
from .perms import Perm, commutator


class _Node:
    """One level of a deterministic Schreier-Sims stabilizer chain.

    A node with ``point is None`` is the trivial group at the end of the
    chain.  The group of a node is generated by its own ``gens`` together
    with every generator of the deeper nodes; the transversal maps each
    fundamental-orbit point delta to a representative u with u(point) = delta.
    """

    __slots__ = ("degree", "point", "gens", "transversal", "transversal_inv", "stab")

    def __init__(self, degree: int):
        self.degree = degree
        self.point: int | None = None
        self.gens: list[Perm] = []
        self.transversal: dict[int, Perm] = {}
        self.transversal_inv: dict[int, Perm] = {}
        self.stab: "_Node | None" = None

    def order(self) -> int:
        if self.point is None:
            return 1
        return len(self.transversal) * self.stab.order()

    def cumulative_gens(self) -> list[Perm]:
        out = list(self.gens)
        if self.stab is not None:
            out.extend(self.stab.cumulative_gens())
        return out

    def sift(self, p: Perm) -> Perm:
        node = self
        while node is not None and node.point is not None:
            target = p.images[node.point]
            if target != node.point:
                u_inv = node.transversal_inv.get(target)
                if u_inv is None:
                    return p
                p = p * u_inv
            node = node.stab
        return p

    def contains(self, p: Perm) -> bool:
        return self.sift(p).is_identity()

    def extend(self, g: Perm) -> bool:
        """Add g to the group; return True when the group grew."""
        residue = self.sift(g)
        if residue.is_identity():
            return False
        self._add_nonmember(residue)
        return True

    def _add_nonmember(self, g: Perm) -> None:
        if self.point is None:
            self.point = min(i for i, j in enumerate(g.images) if i != j)
            self.stab = _Node(self.degree)
            ident = Perm.identity(self.degree)
            self.transversal = {self.point: ident}
            self.transversal_inv = {self.point: ident}
        if g.images[self.point] == self.point:
            self.stab._add_nonmember(g)
        else:
            self.gens.append(g)
        self._rebuild_tree()
        self._process_schreier()

    def _rebuild_tree(self) -> None:
        root = self.point
        ident = Perm.identity(self.degree)
        gens = self.cumulative_gens()
        self.transversal = {root: ident}
        self.transversal_inv = {root: ident}
        frontier = [root]
        while frontier:
            next_frontier = []
            for point in frontier:
                u = self.transversal[point]
                for h in gens:
                    target = h.images[point]
                    if target not in self.transversal:
                        rep = u * h
                        self.transversal[target] = rep
                        self.transversal_inv[target] = rep.inverse()
                        next_frontier.append(target)
            frontier = next_frontier

    def _process_schreier(self) -> None:
        # Schreier's lemma over a snapshot of the generators: every Schreier
        # generator of this level must land in the deeper chain.
        gens = self.cumulative_gens()
        for point in sorted(self.transversal):
            u = self.transversal[point]
            for h in gens:
                s = u * h * self.transversal_inv[h.images[point]]
                if not s.is_identity():
                    self.stab.extend(s)

    def iter_elements(self) -> Iterator[Perm]:
        if self.point is None:
            yield Perm.identity(self.degree)
            return
        for rest in self.stab.iter_elements():
            for u in self.transversal.values():
                yield rest * u

    def random_element(self, rng) -> Perm:
        p = Perm.identity(self.degree)
        node = self
        reps = []
        while node is not None and node.point is not None:
            reps.append(node.transversal)
            node = node.stab
        for transversal in reversed(reps):
            point = rng.choice(sorted(transversal))
            p = p * transversal[point]
        return p


class _Chain:
    """Thin wrapper holding the root node of a stabilizer chain."""

    __slots__ = ("degree", "root")

    def __init__(self, degree: int):
        self.degree = degree
        self.root = _Node(degree)

    def order(self) -> int:
        return self.root.order()

    def contains(self, p: Perm) -> bool:
        return self.root.contains(p)

    def extend(self, g: Perm) -> bool:
        return self.root.extend(g)

    def iter_elements(self) -> Iterator[Perm]:
        return self.root.iter_elements()

    def random_element(self, rng) -> Perm:
        return self.root.random_element(rng)


class Group:
    """A finite permutation group with generator set and membership structure.

    Immutable after construction; the full element set is cached lazily and
    only when the order fits under the enumeration cap.
    """

    __slots__ = ("degree", "generators", "cap", "_chain", "_elements", "_sorted")

    def __init__(self, degree: int, generators: Iterable = (), cap: int | None = None):
        if not isinstance(degree, int) or degree < 1:
            raise ValidationError(f"group degree must be a positive integer, got {degree!r}")
        self.degree = degree
        self.cap = enumeration_cap(cap)
        gens: list[Perm] = []
        seen: set[Perm] = set()
        for g in generators:
            if not isinstance(g, Perm):
                g = Perm(g)
            if g.degree != degree:
                raise ValidationError(f"generator degree {g.degree} != group degree {degree}")
            if g.is_identity() or g in seen:
                continue
            seen.add(g)
            gens.append(g)
        self.generators = tuple(gens)
        chain = _Chain(degree)
        for g in gens:
            chain.extend(g)
        self._chain = chain
        self._elements: frozenset[Perm] | None = None
        self._sorted: list[Perm] | None = None

    @classmethod
    def trivial(cls, degree: int, cap: int | None = None) -> "Group":
        return cls(degree, (), cap=cap)

    @classmethod
    def from_elements(cls, degree: int, elements: Iterable[Perm], cap: int | None = None) -> "Group":
        """Build a group from its full element set (must be closed)."""
        elements = frozenset(elements)
        target = len(elements)
        group = cls.__new__(cls)
        group.degree = degree
        group.cap = enumeration_cap(cap)
        chain = _Chain(degree)
        gens: list[Perm] = []
        for x in sorted(elements):
            if chain.extend(x):
                gens.append(x)
        if chain.order() != target:
            raise ValidationError(
                f"element set of size {target} is not closed (generated order {chain.order()})"
            )
        group.generators = tuple(gens)
        group._chain = chain
        group._elements = elements
        group._sorted = None
        return group

    @property
    def order(self) -> int:
        return self._chain.order()

    def contains(self, x: Perm) -> bool:
        if not isinstance(x, Perm):
            raise ValidationError(f"expected a Perm, got {type(x).__name__}")
        if x.degree != self.degree:
            raise ValidationError(f"element degree {x.degree} != group degree {self.degree}")
        if self._elements is not None:
            return x in self._elements
        return self._chain.contains(x)

    def elements(self) -> frozenset[Perm]:
        if self._elements is None:
            if self.order > self.cap:
                raise CapacityError(
                    f"group order {self.order} exceeds the enumeration cap {self.cap}"
                )
            self._elements = frozenset(self._chain.iter_elements())
            if len(self._elements) != self.order:
                raise InternalCheckError("element enumeration disagrees with chain order")
        return self._elements

    def element_key(self) -> frozenset[Perm]:
        """Canonical identity of this subgroup: its element set."""
        return self.elements()

    def sorted_elements(self) -> list[Perm]:
        if self._sorted is None:
            self._sorted = sorted(self.elements())
        return self._sorted

    @property
    def is_trivial(self) -> bool:
        return self.order == 1

    def is_abelian(self) -> bool:
        gens = self.generators
        return all(a * b == b * a for i, a in enumerate(gens) for b in gens[i + 1 :])

    def is_subgroup_of(self, other: "Group") -> bool:
        if self.degree != other.degree:
            return False
        return all(other.contains(g) for g in self.generators)

    def same_subgroup(self, other: "Group") -> bool:
        return (
            self.degree == other.degree
            and self.order == other.order
            and all(self.contains(g) for g in other.generators)
        )

    def is_normal_in(self, ambient: "Group") -> bool:
        for g in ambient.generators:
            g_inv = g.inverse()
            for x in self.generators:
                if not self.contains(g_inv * x * g):
                    return False
        return True

    def random_element(self, rng) -> Perm:
        return self._chain.random_element(rng)

    def __repr__(self) -> str:
        return f"Group(degree={self.degree}, order={self.order}, ngens={len(self.generators)})"


def group_from_generators(degree: int, gens: Iterable, cap: int | None = None) -> Group:
    """Group generated by ``gens`` on {0..degree-1}."""
    return Group(degree, gens, cap=cap)


def is_member(G: Group, x: Perm) -> bool:
    """Membership test; agrees with exhaustive enumeration when cached."""
    return G.contains(x)


def _require_subgroup(H: Group, ambient: Group, name: str) -> None:
    if H.degree != ambient.degree or not H.is_subgroup_of(ambient):
        raise ContainmentError(f"{name} is not a subgroup of the ambient group")


def normal_closure(generators: Iterable[Perm], ambient: Group) -> Group:
    """Smallest normal subgroup of ``ambient`` containing ``generators``."""
    seeds = []
    for x in generators:
        if not ambient.contains(x):
            raise ContainmentError("normal closure seed lies outside the ambient group")
        if not x.is_identity():
            seeds.append(x)
    chain = _Chain(ambient.degree)
    gens: list[Perm] = []
    queue: list[Perm] = []
    for x in sorted(set(seeds)):
        if chain.extend(x):
            gens.append(x)
            queue.append(x)
    conjugators = [(g, g.inverse()) for g in ambient.generators]
    while queue:
        x = queue.pop()
        for g, g_inv in conjugators:
            c = g_inv * x * g
            if chain.extend(c):
                gens.append(c)
                queue.append(c)
    result = Group.__new__(Group)
    result.degree = ambient.degree
    result.cap = ambient.cap
    result.generators = tuple(gens)
    result._chain = chain
    result._elements = None
    result._sorted = None
    return result


def commutator_subgroup(H: Group, K: Group, ambient: Group) -> Group:
    """The subgroup [H, K] generated by all commutators between H and K.

    Computed as the normal closure, inside <H, K>, of the generator-pair
    commutators; that closure equals the full commutator subgroup.
    """
    _require_subgroup(H, ambient, "H")
    _require_subgroup(K, ambient, "K")
    pair_comms = {
        commutator(x, y) for x in H.generators for y in K.generators
    }
    pair_comms.discard(Perm.identity(ambient.degree))
    if not pair_comms:
        return Group.trivial(ambient.degree, cap=ambient.cap)
    joined = Group(ambient.degree, H.generators + K.generators, cap=ambient.cap)
    return normal_closure(pair_comms, joined)


def intersection(H: Group, K: Group) -> Group:
    """H intersect K via the cached element sets."""
    if H.degree != K.degree:
        raise ValidationError("cannot intersect groups of different degree")
    if H.order > K.order:
        H, K = K, H
    common = H.elements() & K.elements()
    return Group.from_elements(H.degree, common, cap=H.cap)


def generated_subgroup(degree: int, parts: Iterable[Group], cap: int | None = None) -> Group:
    """Subgroup generated by the union of the given subgroups."""
    gens: list[Perm] = []
    for part in parts:
        gens.extend(part.generators)
    return Group(degree, gens, cap=cap)


def center(G: Group) -> Group:
    gens = G.generators
    central = [x for x in G.sorted_elements() if all(x * g == g * x for g in gens)]
    return Group.from_elements(G.degree, central, cap=G.cap)


def conjugate_element_set(elements: frozenset[Perm], g: Perm) -> frozenset[Perm]:
    g_inv = g.inverse()
    return frozenset(g_inv * x * g for x in elements)


def _r_part(n: int, r: int) -> int:
    m = 1
    while n % r == 0:
        n //= r
        m *= r
    return m


def sylow_subgroup(G: Group, r: int) -> Group:
    """Some Sylow r-subgroup of G."""
    target = _r_part(G.order, r)
    if target == 1:
        return Group.trivial(G.degree, cap=G.cap)
    if G.order == target:
        return G
    r_elements = [x for x in G.sorted_elements() if _r_part(x.order(), r) == x.order()]
    # unique-Sylow fast path: all r-elements form the subgroup
    if len(r_elements) == target:
        try:
            return Group.from_elements(G.degree, r_elements, cap=G.cap)
        except ValidationError:
            pass
    current = Group.trivial(G.degree, cap=G.cap)
    while current.order < target:
        extended = None
        for y in r_elements:
            if current.contains(y):
                continue
            candidate = Group(G.degree, current.generators + (y,), cap=G.cap)
            if candidate.order == _r_part(candidate.order, r):
                extended = candidate
                break
        if extended is None:
            raise InternalCheckError(f"could not extend an r-subgroup to Sylow order {target}")
        current = extended
    return current


def subgroup_conjugate_sets(G: Group, P: Group) -> list[frozenset[Perm]]:
    """Element sets of all G-conjugates of P (orbit under conjugation)."""
    start = P.elements()
    seen = {start}
    queue = [start]
    out = [start]
    conjugators = [g for g in G.generators]
    while queue:
        current = queue.pop()
        for g in conjugators:
            image = conjugate_element_set(current, g)
            if image not in seen:
                seen.add(image)
                queue.append(image)
                out.append(image)
    return out


class AbelianSection:
    """An abelian quotient numerator/denominator written additively.

    ``basis`` holds coset representatives whose classes decompose the quotient
    as a direct sum of cyclic groups with the given ``orders``; every element
    of the numerator has a unique exponent vector.
    """

    __slots__ = ("numerator", "denominator", "basis", "orders", "_vector_of")

    def __init__(self, numerator: Group, denominator: Group, basis, orders, vector_of):
        self.numerator = numerator
        self.denominator = denominator
        self.basis = tuple(basis)
        self.orders = tuple(orders)
        self._vector_of = vector_of

    @property
    def quotient_order(self) -> int:
        n = 1
        for m in self.orders:
            n *= m
        return n

    @property
    def rank(self) -> int:
        return len(self.basis)

    def decompose(self, x: Perm) -> tuple[int, ...]:
        """Exponent vector of the coset of x; x must lie in the numerator."""
        try:
            return self._vector_of[x]
        except KeyError:
            raise ContainmentError("element is not in the numerator of the section") from None

    def compose(self, vector) -> Perm:
        """A coset representative for the given exponent vector."""
        if len(vector) != len(self.basis):
            raise ValidationError("exponent vector length does not match the basis")
        rep = Perm.identity(self.numerator.degree)
        for b, e, m in zip(self.basis, vector, self.orders):
            rep = rep * (b ** (e % m))
        return rep

    def contains(self, x: Perm) -> bool:
        return x in self._vector_of


def abelian_section(numerator: Group, denominator: Group) -> AbelianSection:
    """Decompose the abelian quotient numerator/denominator into cyclic factors.

    Uses greedy order-maximal picks with a correction step so that the chosen
    representatives give an honest direct-sum decomposition; the construction
    ends with an exhaustive bijection check.
    """
    if denominator.degree != numerator.degree or not denominator.is_subgroup_of(numerator):
        raise PreconditionError("denominator is not a subgroup of the numerator")
    if not denominator.is_normal_in(numerator):
        raise PreconditionError("denominator is not normal in the numerator")
    for i, a in enumerate(numerator.generators):
        for b in numerator.generators[i:]:
            if not denominator.contains(commutator(a, b)):
                raise PreconditionError("quotient is not abelian")

    den_elements = denominator.elements()
    num_sorted = numerator.sorted_elements()
    current: set[Perm] = set(den_elements)
    basis: list[Perm] = []
    orders: list[int] = []

    def rel_order(x: Perm) -> int:
        m = 1
        power = x
        while power not in current:
            power = power * x
            m += 1
        return m

    while len(current) < numerator.order:
        best = None
        best_m = 0
        for x in num_sorted:
            if x in current:
                continue
            m = rel_order(x)
            if m > best_m:
                best, best_m = x, m
        if best is None:
            raise InternalCheckError("ran out of candidates before filling the quotient")
        # correct the representative so its class has the same order in the
        # full quotient: (best * d)^m must fall into the denominator
        chosen = None
        if (best ** best_m) in den_elements:
            chosen = best
        else:
            for d in sorted(current):
                candidate = best * d
                if (candidate ** best_m) in den_elements:
                    chosen = candidate
                    break
        if chosen is None:
            raise InternalCheckError("direct-sum correction step found no representative")
        basis.append(chosen)
        orders.append(best_m)
        new_current: set[Perm] = set()
        power = Perm.identity(numerator.degree)
        for _ in range(best_m):
            for x in current:
                new_current.add(x * power)
            power = power * chosen
        current = new_current

    vector_of: dict[Perm, tuple[int, ...]] = {}
    for exponents in itertools.product(*(range(m) for m in orders)):
        rep = Perm.identity(numerator.degree)
        for b, e in zip(basis, exponents):
            rep = rep * (b**e)
        for d in den_elements:
            key = rep * d
            if key in vector_of:
                raise InternalCheckError("exponent vectors do not decompose the quotient uniquely")
            vector_of[key] = exponents
    if len(vector_of) != numerator.order:
        raise InternalCheckError("section decomposition does not cover the numerator")
    return AbelianSection(numerator, denominator, basis, orders, vector_of)
