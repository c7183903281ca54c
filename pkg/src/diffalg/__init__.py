"""diffalg: exact differential-algebra workbench.

Differential polynomial arithmetic over Q and Q(t), Ritt division with
exact certificates, characteristic-set decomposition, Jacobi numbers,
linearization at points, and an independent truncated ideal-membership
oracle.
"""

from .fields import Field, FieldTag, QQ, QT, RatFunc
from .diffpoly import (
    NEG_INF,
    Context,
    Convention,
    DerVar,
    DiffPoly,
    ConcretePoint,
    GenericPoint,
    Monomial,
    ZeroTest,
)
from .ranking import (
    ConstantPolyError,
    RankKind,
    Ranking,
    RankedPoly,
    SeqRel,
    analyze,
    is_autoreduced,
    is_reduced,
    seq_compare,
)
from .reduction import (
    DiffOperator,
    NotAutoreducedError,
    ReductionCertificate,
    StepLimitExceeded,
    Verdict,
    apply_operator,
    member_saturated,
    ritt_reduce_one,
    ritt_reduce_seq,
    verify_certificate,
)
from .jacobi import JacobiResult, OrderMatrix, jacobi_assign, jacobi_brute, jacobi_number, order_matrix, ritt_bound
from .linearize import (
    LinearizedPoly,
    PointNotOnZeroSetError,
    extended_context,
    first_order_expansion,
    jacobi_after_linearization,
    linearize_at,
    linearize_sym,
    linearized_order,
    linearized_order_matrix,
    linearized_system,
    tangent_rename_check,
)
from .decompose import (
    CharSetComponent,
    DecompositionResult,
    JbcReport,
    JbcVerdict,
    SplitBounds,
    component_dimension,
    jbc_check,
    split_decompose,
    verify_component,
)
from .oracle import (
    MembershipWitness,
    OracleVerdict,
    TruncationBounds,
    radical_member,
    truncated_member,
    verify_witness,
)
from .sysfile import (
    ParseError,
    SysFileError,
    SystemFile,
    format_components,
    format_ranking,
    format_system,
    parse_components,
    parse_constant,
    parse_poly,
    parse_ranking,
    parse_system,
)

__all__ = [name for name in dir() if not name.startswith("_")]
