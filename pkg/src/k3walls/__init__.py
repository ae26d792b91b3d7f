"""Exact wall-and-chamber computations for Bridgeland stability conditions
on degree-10 polarized K3 surfaces, along the one-parameter path
sigma_t = sigma_{sqrt(t)/5 H, -2/5 H}, together with the descent of the
numerical data to the rank-two lattice of the associated threefold's
residual category.

All arithmetic is exact (rationals and integer polynomials); every sign
claim is certified by Sturm analysis and every enumeration carries a
derived completeness bound.
"""

from .exactq import (
    IsolatedRoot,
    Rat,
    RootIsolation,
    Sign,
    SignResult,
    TInterval,
    TPoly,
    ZeroPolynomialError,
    poly_eval,
    rat,
    sign_on_interval,
    sturm_roots,
)
from .mukai import (
    Exclusion,
    Hodge,
    K3Context,
    MukaiProfile,
    ReferenceClass,
    V1,
    V2,
    exclusion_check,
    gm10_context,
    hodge_ok,
    is_spherical,
    pairing_with_reference,
    self_pairing,
)
from .charge import (
    CertificationError,
    ChargeFamily,
    ChargeValue,
    ExistenceResult,
    charge,
    existence_check,
    existence_check_symbolic,
    gm10_family,
    heart_position,
    HeartPosition,
    re_ratio_sign,
)
from .walls import (
    ConditionEnumeration,
    TSResult,
    WallCondition,
    WallClassification,
    WallHit,
    WallReport,
    WallVerdict,
    classify_wall,
    enumerate_condition,
    totally_semistable_check,
    wall_equation,
    walls_on_path,
)
from .destab import (
    BoundChainError,
    CaseCertificate,
    DestabCandidate,
    DestabProblem,
    DestabResult,
    eliminate,
    phase_gap,
    standard_problems,
)
from .ku import (
    KuClass,
    KuIsometry,
    euler_ku,
    forg,
    inf,
    inf_reference,
    isometries,
    ku_charge,
    ku_charge_at,
    span_combination,
)

__version__ = "0.1.0"
