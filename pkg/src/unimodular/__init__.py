"""Exact-arithmetic toolkit for unimodular symmetric bilinear forms.

Invariants and classification of indefinite forms, integer isometries
(reflections, hyperbolic-block generators, component and spinor
invariants), orbit-growth witnesses and coset certificates, the
exterior-square homomorphism onto the isometries of 3U, and the
cohomology ring of the Kodaira-Thurston nilmanifolds.  Everything runs
over exact integers and rationals; there is no floating point anywhere.
"""

__version__ = "0.1.0"

from .forms import (
    DEFINITE,
    EVEN,
    NEARLY_DEFINITE,
    ODD,
    STRONGLY_INDEFINITE,
    DegenerateFormError,
    E8_GRAM,
    FormInvariants,
    FormSpec,
    GramForm,
    U_GRAM,
    canonical_representative,
    e8_roots,
    is_full_isotropic_plane,
    is_primitive,
    make_standard,
    recognize_standard,
)
from .isometry import (
    FormMismatchError,
    GeneratorSet,
    Isometry,
    ReflectionError,
    component_invariant,
    reflection,
    spinor_factorization,
    spinor_norm,
    wall_generators,
)
from .orbits import (
    CertificateError,
    CosetCertificate,
    EscapeStep,
    EscapeTrace,
    IsotropicPlane,
    OrbitResult,
    TransitivityReport,
    characteristic_family,
    coset_certificate,
    enumerate_isotropic_planes,
    escape_even,
    escape_odd,
    orbit_bfs,
    plane_family_2U,
    plane_orbit_bfs,
    transitivity_probe,
)
from .exterior import (
    BASIS_PAIRS,
    BasisDictionary,
    IndexLowerBoundCertificate,
    Lambda2Report,
    NGenerator,
    NonRealizabilityTrace,
    exterior_square,
    functoriality_check,
    index_lower_bound_certificate,
    lambda2,
    n_subgroup_generators,
    non_realizability_replay,
    relation_suite,
)
from .topology import (
    CYTableRow,
    InconsistentSignsError,
    KTAlgebra,
    KodairaInput,
    PhiT,
    canonical_norm,
    cy_table,
    kodaira_dimension,
    kt_algebra,
    kt_infinite_index_witness,
    solve_phi_T,
    wedge_image,
)

__all__ = [name for name in dir() if not name.startswith("_")]
