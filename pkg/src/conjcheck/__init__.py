"""Exact checking of conjugation monoids, split extensions, and connectors.

The layers build on each other: `core` holds carriers, morphisms, and the
law engine; `exact` the rational/complex/quaternion arithmetic; `builders`
the stock carriers; `laws` the axiom suites; `schreier` split epimorphisms
and monoid actions; `crossed` kernel-map grading and internal categorical
structures; `admissibility` connectors, commuting kernels, and relation
commutation; `arcs`, `descriptions`, `reports`, `gallery`, and `cli` the
showcase surface.
"""

from .core import (
    BOUNDED,
    CancellationFailureError,
    CarrierTooLargeError,
    CheckFailedError,
    ConditionFailedError,
    ConjError,
    ConjStructure,
    DescriptionError,
    EnumerationPlan,
    EXHAUSTIVE,
    FAILS,
    HOLDS_BOUNDED,
    HOLDS_EXHAUSTIVE,
    HOLDS_SAMPLED,
    Hom,
    HuqFailedError,
    INCONCLUSIVE,
    KindMismatchError,
    Law,
    NotKernelError,
    NotSchreierError,
    NotSplitError,
    PlanError,
    SAMPLED,
    TableError,
    Verdict,
    check_law,
    check_laws,
    combine,
    compose_homs,
    direct_product_structure,
    identity_hom,
    substructure,
    zero_hom,
)
from .exact import (
    GaussianRational,
    KEPoint,
    Q,
    RationalQuaternion,
    exact_sqrt,
    hurwitz_units,
    parse_rational,
    rational_text,
    unit_circle_point,
)
from .laws import (
    cancellation_laws,
    conjugation_axiom_laws,
    derived_identity_laws,
    hom_laws,
    is_group_table,
    law_suite,
    replay_law,
    verify_cancellation,
    verify_conjugation_axioms,
    verify_derived_identities,
    verify_hom,
    verify_ore,
)
from .builders import BUILDERS, build_named_structure
from .schreier import (
    ExternalAction,
    SchreierExtension,
    action_from_extension,
    direct_product_extension,
    find_schreier_retraction,
    finite_semidirect_extension,
    make_action,
    quaternion_conjugation_extension,
    roundtrip_iso,
    semidirect,
    trivial_action,
    verify_action_compatibility,
    verify_retraction_conjugation,
    verify_retraction_laws,
)
from .crossed import (
    Classification,
    CrossedData,
    InternalCategory,
    InternalGroupoid,
    LABEL_CROSSED,
    LABEL_CROSSED_MODULE,
    LABEL_NONE,
    LABEL_PRECROSSED,
    ReflexiveGraph,
    build_groupoid,
    build_internal_category,
    build_reflexive_graph,
    check_equivariance,
    check_invertibility,
    check_kernel_condition,
    check_peiffer,
    classify,
    codomain_map,
    make_crossed,
    unique_codomain_maps,
)
from .admissibility import (
    AdmissibilityDiagram,
    EquivalenceRelation,
    admissibility_family,
    attach_schreier_data,
    build_pullback,
    check_admissible_oracle,
    check_admissibility_criterion,
    check_commuting_kernels,
    check_huq_commute,
    check_three_way,
    check_twisted_commutation,
    compare_oracle_and_criterion,
    composition_diagram,
    congruence_from_normal_subgroup,
    diagram_from_extensions,
    enumerate_homs,
    generated_by_injections,
    huq_normalizations,
    normal_subgroups,
    relation_diagram,
    relation_from_pairs,
    smith_commutes,
    smith_is_huq,
    verify_diagram,
)
from .descriptions import (
    CROSSED_BUILDERS,
    EXTENSION_BUILDERS,
    decode_element,
    decode_witness,
    encode_element,
    load_document,
    normalize_to_unit,
    parse_crossed,
    parse_diagram,
    parse_extension,
    parse_map,
    parse_structure,
    structure_to_doc,
)
from .arcs import (
    Arc,
    ArcDemo,
    compose_arcs,
    inverse_escape_witness,
    read_arc_file,
    run_arc_demo,
    sample_composable_pair,
    validate_arc_doc,
    write_arc_file,
)
from .reports import Report
from .gallery import gallery_rows, run_gallery

__version__ = "0.1.0"
