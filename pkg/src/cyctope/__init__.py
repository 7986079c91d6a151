"""Finite verification toolkit for cyclic orders, paracycles, nerves and dense models."""

from .category import (
    FiniteCategory,
    FiniteFunctor,
    FiniteNatTrans,
    FinitePoset,
    TruncatedNerve,
    check_functor,
    check_nat_trans,
    finite_poset_to_category,
    nerve,
    single_object_aut,
    truncated_cyc,
    truncated_delta_inj,
)
from .cyclic import (
    CyclicOrder,
    LinearOrder,
    StructEmbedding,
    check_axioms,
    compose,
    enumerate_embeddings,
    from_linear,
    identity,
    standard_cycle,
    union_chain,
)
from .dense import (
    QZ,
    PartialIso,
    QZPoint,
    back_and_forth_extend,
    density_defect,
    double,
    map_double,
    qf_type,
    r_qz,
    same_type,
    t_stage,
    verify_density_step,
)
from .errors import CyctopeError, InputError, NoWitnessError, ResourceError, TruncationError
from .homology import ChainComplex, HomologyGroup, boundary_complex, homology, reduced_homology_vanishes, smith_normal_form
from .paracyclic import (
    ParaEmbedding,
    Paracycle,
    ShiftOrbit,
    enumerate_canonical,
    project_to_cyclic,
    shift_action,
    slice_poset,
    verify_horb,
    verify_square,
)

__version__ = "0.1.0"
