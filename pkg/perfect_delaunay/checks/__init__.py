from perfect_delaunay.checks.base_check import BaseCheck, Outcome, RecordContext, VerifyOptions
from perfect_delaunay.checks.basic_checks import (
    DelaunayEmptinessCheck,
    InferMatchesStoredCheck,
    OnSphereCheck,
    PerfectionCheck,
    ShortestCountCheck,
    SpectrumCheck,
    SymmetryTypeCheck,
)
from perfect_delaunay.checks.geometry_checks import LaminaCheck, SubpolytopesCheck
from perfect_delaunay.checks.group_checks import (
    GroupConsistencyCheck,
    IsoOrderCheck,
    LatticeAutOrderCheck,
    QuadInvDimCheck,
    SymmetricSubgroupCheck,
)

# report order
CHECKS: dict[str, BaseCheck] = {
    check.name: check
    for check in (
        OnSphereCheck(),
        DelaunayEmptinessCheck(),
        PerfectionCheck(),
        InferMatchesStoredCheck(),
        SpectrumCheck(),
        ShortestCountCheck(),
        IsoOrderCheck(),
        LatticeAutOrderCheck(),
        SymmetricSubgroupCheck(),
        QuadInvDimCheck(),
        GroupConsistencyCheck(),
        SymmetryTypeCheck(),
        LaminaCheck(),
        SubpolytopesCheck(),
    )
}

__all__ = ["BaseCheck", "CHECKS", "Outcome", "RecordContext", "VerifyOptions"]
