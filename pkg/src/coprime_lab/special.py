"""Recursive centralizer-commutator subgroup families and their property checks.

Two recursive families are built over an action setup:

* kind "a-special": degree 0 members are the C_G(A_j); a degree-i member is
  [J1, J2] intersect C_G(A_j) for degree-(i-1) members J1, J2.
* kind "gamma-a-special": degree 1 members are the C_G(A_j); a degree-i
  member is [J, C_G(A_j)] intersect C_G(A_n) for a degree-(i-1) member J.

Members are deduplicated by element-set equality and each keeps the first
recipe that produced it.
"""

from __future__ import annotations

from dataclasses import dataclass

from .action import (
    ASubgroupDescriptor,
    ActionSetup,
    all_subspaces,
    fixed_subgroup,
    invariant_sylow,
    maximal_subgroups,
)
from .errors import CapacityError, PreconditionError
from .groups import Group, commutator_subgroup, generated_subgroup
from .series import derived_term, lcs_term
from .status import CheckStatus

DEFAULT_MEMBER_CEILING = 512


@dataclass(frozen=True)
class SpecialFamily:
    """All members of one kind and degree, deduplicated, with provenance."""

    kind: str
    degree: int
    members: tuple[Group, ...]
    provenance: tuple[tuple, ...]

    def member_count(self) -> int:
        return len(self.members)


def _base_family(setup: ActionSetup, kind: str, degree: int) -> SpecialFamily:
    members: list[Group] = []
    provenance: list[tuple] = []
    seen: set[frozenset] = set()
    for j, A_j in enumerate(maximal_subgroups(setup)):
        C = fixed_subgroup(setup, A_j)
        key = C.elements()
        if key in seen:
            continue
        seen.add(key)
        members.append(C)
        provenance.append(("cent", j))
    return SpecialFamily(kind=kind, degree=degree, members=tuple(members), provenance=tuple(provenance))


def a_special_lattice(
    setup: ActionSetup, max_degree: int, member_ceiling: int = DEFAULT_MEMBER_CEILING
) -> list[SpecialFamily]:
    """Families of degrees 0..max_degree for the pairwise-commutator recursion."""
    if setup.k < 2:
        raise PreconditionError("special families need rank k >= 2")
    cents = [fixed_subgroup(setup, A_j) for A_j in maximal_subgroups(setup)]
    families = [_base_family(setup, "a-special", 0)]
    for degree in range(1, max_degree + 1):
        prev = families[-1].members
        candidates: dict[frozenset, tuple] = {}
        for a in range(len(prev)):
            for b in range(a, len(prev)):
                M = commutator_subgroup(prev[a], prev[b], setup.G)
                m_elements = M.elements()
                for j, C in enumerate(cents):
                    key = m_elements & C.elements()
                    if key not in candidates:
                        candidates[key] = ("comm-cent", a, b, j)
        if len(candidates) > member_ceiling:
            raise CapacityError(
                f"a-special degree {degree} would have {len(candidates)} members (ceiling {member_ceiling})"
            )
        members = tuple(
            Group.from_elements(setup.G.degree, key, cap=setup.G.cap) for key in candidates
        )
        families.append(
            SpecialFamily(
                kind="a-special",
                degree=degree,
                members=members,
                provenance=tuple(candidates.values()),
            )
        )
    return families


def gamma_a_special_lattice(
    setup: ActionSetup, max_degree: int, member_ceiling: int = DEFAULT_MEMBER_CEILING
) -> list[SpecialFamily]:
    """Families of degrees 1..max_degree for the centralizer-bracket recursion."""
    if setup.k < 2:
        raise PreconditionError("special families need rank k >= 2")
    cents = [fixed_subgroup(setup, A_j) for A_j in maximal_subgroups(setup)]
    families = [_base_family(setup, "gamma-a-special", 1)]
    for degree in range(2, max_degree + 1):
        prev = families[-1].members
        candidates: dict[frozenset, tuple] = {}
        for a in range(len(prev)):
            for j, C in enumerate(cents):
                M = commutator_subgroup(prev[a], C, setup.G)
                m_elements = M.elements()
                for n, Cn in enumerate(cents):
                    key = m_elements & Cn.elements()
                    if key not in candidates:
                        candidates[key] = ("comm-cent-cent", a, j, n)
        if len(candidates) > member_ceiling:
            raise CapacityError(
                f"gamma-a-special degree {degree} would have {len(candidates)} members (ceiling {member_ceiling})"
            )
        members = tuple(
            Group.from_elements(setup.G.degree, key, cap=setup.G.cap) for key in candidates
        )
        families.append(
            SpecialFamily(
                kind="gamma-a-special",
                degree=degree,
                members=members,
                provenance=tuple(candidates.values()),
            )
        )
    return families


def family_at(families: list[SpecialFamily], degree: int) -> SpecialFamily:
    for family in families:
        if family.degree == degree:
            return family
    raise PreconditionError(f"no family of degree {degree} was computed")


def check_aspecial_containment(families: list[SpecialFamily]) -> bool:
    """Every member of degree i sits inside some member of degree i-1."""
    for prev, family in zip(families, families[1:]):
        for member in family.members:
            if not any(member.is_subgroup_of(parent) for parent in prev.members):
                return False
    return True


def check_aspecial_generation(setup: ActionSetup, families: list[SpecialFamily]) -> bool:
    """<members of degree i> equals G^(i) (a-special) or gamma_i(G) (gamma)."""
    for family in families:
        generated = generated_subgroup(setup.G.degree, family.members, cap=setup.G.cap)
        if family.kind == "a-special":
            target = derived_term(setup.G, family.degree)
        else:
            target = lcs_term(setup.G, family.degree)
        if not generated.same_subgroup(target):
            return False
    return True


def check_aspecial_degree_bound(setup: ActionSetup, families: list[SpecialFamily]) -> CheckStatus:
    """Each member embeds into a derived/central term of C_G(B) for a small-index B.

    For an a-special member of degree i (with 2^i <= k-1) a witness B <= A
    with |A/B| <= p^(2^i) must satisfy H <= C_G(B)^(i); for a gamma member of
    degree i (with i <= k-1) the target is gamma_i(C_G(B)) with |A/B| <= p^i.
    Degrees outside the hypothesis are skipped.
    """
    subspaces = all_subspaces(setup.p, setup.k)
    term_cache: dict[tuple[frozenset, str, int], Group] = {}
    any_applicable = False
    for family in families:
        i = family.degree
        if family.kind == "a-special":
            if 2**i > setup.k - 1:
                continue
            max_codim = 2**i
        else:
            if i > setup.k - 1:
                continue
            max_codim = i
        any_applicable = True
        for member in family.members:
            if not _degree_bound_witness(setup, member, family.kind, i, max_codim, subspaces, term_cache):
                return CheckStatus.FAIL
    return CheckStatus.PASS if any_applicable else CheckStatus.NOT_APPLICABLE


def _degree_bound_witness(
    setup: ActionSetup,
    member: Group,
    kind: str,
    degree: int,
    max_codim: int,
    subspaces: list[ASubgroupDescriptor],
    term_cache: dict,
) -> bool:
    for B in subspaces:
        if B.codim > max_codim:
            break
        cache_key = (B.key(), kind, degree)
        target = term_cache.get(cache_key)
        if target is None:
            C = fixed_subgroup(setup, B)
            if kind == "a-special":
                target = derived_term(C, degree)
            else:
                target = lcs_term(C, degree)
            term_cache[cache_key] = target
        if member.is_subgroup_of(target):
            return True
    return False


def check_sylow_generation(
    setup: ActionSetup, d: int, r: int, families: list[SpecialFamily] | None = None
) -> bool:
    """An A-invariant Sylow r-subgroup R of G^(d) satisfies R = <R cap H_i>."""
    if setup.k < 2:
        raise PreconditionError("Sylow generation needs rank k >= 2")
    Gd = derived_term(setup.G, d)
    if Gd.order % r != 0:
        return True
    R = invariant_sylow(setup, Gd, r)
    if R.is_trivial:
        return True
    if families is None:
        families = a_special_lattice(setup, d)
    members = family_at(families, d).members
    r_elements = R.elements()
    parts = []
    for H in members:
        common = r_elements & H.elements()
        parts.append(Group.from_elements(setup.G.degree, common, cap=setup.G.cap))
    generated = generated_subgroup(setup.G.degree, parts, cap=setup.G.cap)
    return generated.same_subgroup(R)


def check_key_commutator_relation(
    setup: ActionSetup,
    families: list[SpecialFamily],
    c: int,
    mode: str,
    d: int | None = None,
) -> bool:
    """[C_G(A_j), c+1 copies of H_i] = 1 for all maximal A_j and members H_i.

    ``mode`` selects the member family: "derived" uses the a-special family of
    degree d (requires 2^d + 2 <= k); "gamma" uses the gamma family of degree
    k - 2.
    """
    if c < 1:
        raise PreconditionError("the class bound c must be a positive integer")
    if mode == "derived":
        if d is None:
            raise PreconditionError("mode 'derived' needs the degree d")
        if 2**d + 2 > setup.k:
            raise PreconditionError(f"hypothesis 2^d + 2 <= k fails: 2^{d} + 2 > {setup.k}")
        members = family_at(families, d).members
    elif mode == "gamma":
        if setup.k < 3:
            raise PreconditionError("gamma relation needs k >= 3")
        members = family_at(families, setup.k - 2).members
    else:
        raise PreconditionError(f"unknown mode {mode!r}")
    for A_j in maximal_subgroups(setup):
        C = fixed_subgroup(setup, A_j)
        for H in members:
            if H.is_trivial:
                continue
            X = C
            for _ in range(c + 1):
                if X.is_trivial:
                    break
                X = commutator_subgroup(X, H, setup.G)
            if not X.is_trivial:
                return False
    return True


def family_to_json(family: SpecialFamily) -> dict:
    """JSON-exportable view: member orders, generators, provenance recipes."""
    return {
        "kind": family.kind,
        "degree": family.degree,
        "members": [
            {
                "order": member.order,
                "generators": [list(g.images) for g in member.generators],
                "recipe": list(recipe),
            }
            for member, recipe in zip(family.members, family.provenance)
        ],
    }
