"""Coprime actions of elementary abelian p-groups on finite p'-groups.

Builds permutation-group instances, computes the recursive centralizer
subgroup families and the graded Lie ring of nilpotent groups, and checks
the family of centralizer, generation, and nilpotency properties that a
valid coprime action must satisfy.
"""

from .action import (
    ASubgroupDescriptor,
    ActionSetup,
    Automorphism,
    check_fg1_quotient,
    check_fg2_generation,
    fixed_subgroup,
    induced_action_on_quotient,
    invariant_sylow,
    maximal_subgroups,
    validate_setup,
)
from .groups import (
    AbelianSection,
    Group,
    abelian_section,
    commutator_subgroup,
    group_from_generators,
    is_member,
    normal_closure,
)
from .harness import (
    CheckReport,
    SuiteOptions,
    run_suite,
    verify_derived_theorem,
    verify_gamma_theorem,
)
from .instances import (
    FamilySpec,
    build_setup,
    gen_coordinate_permutation,
    gen_direct_sum,
    gen_extraspecial,
    gen_gl_module,
    load_instance,
    save_instance,
)
from .lie import (
    GradedLieRing,
    LieSubspace,
    check_centralizer_transfer,
    check_class_transfer,
    check_span_lemma,
    induced_a_action,
    lie_ring_of,
    lie_series,
    lie_subring_of_subgroup,
)
from .perms import Perm
from .series import (
    SeriesResult,
    derived_series,
    fitting_subgroup,
    lower_central_series,
    nilpotency_class,
    upper_central_series,
)
from .special import (
    SpecialFamily,
    a_special_lattice,
    check_aspecial_containment,
    check_aspecial_degree_bound,
    check_aspecial_generation,
    check_key_commutator_relation,
    check_sylow_generation,
    gamma_a_special_lattice,
)
from .status import CheckStatus

__version__ = "0.1.0"
