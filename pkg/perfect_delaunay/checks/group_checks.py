"""Checks on polytope and lattice automorphism groups."""

import logging
import math

from perfect_delaunay.checks.base_check import BaseCheck, Outcome, RecordContext
from perfect_delaunay.core.symmetry import coordinate_symmetric_subgroup, quad_inv_dim
from perfect_delaunay.exceptions import BudgetExceeded
from perfect_delaunay.schemas.report_schema import CheckStatus

log = logging.getLogger(__name__)

# records with isomorphic isometry groups
ISOMORPHIC_ISO_GROUPS = (
    ("D8_2", "D8_5"),
    ("D8_3", "D8_13"),
    ("D8_12", "D8_21"),
    ("D8_14", "D8_19", "D8_25"),
    ("D8_24", "D8_27"),
)


def _matrix_payload(matrices) -> list[list[list[int]]]:
    return [[list(row) for row in m] for m in matrices]


class IsoOrderCheck(BaseCheck):
    def __init__(self):
        super().__init__("iso-order")

    def run(self, ctx: RecordContext) -> Outcome:
        group = ctx.polytope_group()
        details = list(ctx.record.notes_for("iso_order"))
        if group.certification_failures:
            details.append(f"{len(group.certification_failures)} colour-preserving permutations "
                           f"without an integral affine extension")
        details.append(f"vertex differences span a sublattice of index {group.lattice_index}")
        if group.group.order != group.order:
            details.append(f"stabilizer chain gives {group.group.order}")
        payload = None
        if ctx.options.export_generators:
            payload = {
                "linear": _matrix_payload(group.linear_parts()),
                "translations": [list(g.translation) for g in group.generators],
            }
        log.info("%s: |Iso| = %d", ctx.record.id, group.order)
        return Outcome.compare(ctx.record.expected.iso_order, group.order, "; ".join(details), payload)


class LatticeAutOrderCheck(BaseCheck):
    def __init__(self):
        super().__init__("lattice-aut-order")

    def run(self, ctx: RecordContext) -> Outcome:
        group = ctx.lattice_group()
        payload = {"generators": _matrix_payload(group.generators)} if ctx.options.export_generators else None
        if not group.verify(ctx.form):
            return Outcome(CheckStatus.FAIL, str(ctx.record.expected.lattice_aut_order), str(group.order),
                           "a generator does not preserve the form", payload)
        log.info("%s: |O| = %d", ctx.record.id, group.order)
        return Outcome.compare(ctx.record.expected.lattice_aut_order, group.order,
                               f"{len(group.generators)} generators", payload)


class SymmetricSubgroupCheck(BaseCheck):
    def __init__(self):
        super().__init__("symmetric-subgroup")

    def run(self, ctx: RecordContext) -> Outcome:
        stored = ctx.record.expected.symmetric_subgroup_k
        found = coordinate_symmetric_subgroup(ctx.form)
        witness = "coordinates " + ",".join(str(i + 1) for i in found.witness)
        if found.k == stored:
            return Outcome.compare(stored, found.k, witness)
        order = ctx.record.expected.lattice_aut_order
        if found.k < stored and order % math.factorial(stored) == 0:
            return Outcome(CheckStatus.PASS, str(stored), f"{found.k} by coordinates",
                           f"S{stored} unwitnessed by coordinates; {stored}! divides |O| = {order}")
        return Outcome(CheckStatus.FAIL, str(stored), str(found.k), witness)


class QuadInvDimCheck(BaseCheck):
    def __init__(self):
        super().__init__("quadinv-dim")

    def run(self, ctx: RecordContext) -> Outcome:
        n = ctx.record.dim
        try:
            generators = list(ctx.lattice_group().generators)
            source = "lattice automorphism generators"
        except BudgetExceeded:
            minus_identity = tuple(tuple(-int(i == j) for j in range(n)) for i in range(n))
            generators = ctx.polytope_group().linear_parts() + [minus_identity]
            source = "polytope linear parts and -I"
        dim = quad_inv_dim(generators, n)
        return Outcome.compare(ctx.record.expected.quadinv_dim, dim, f"from {source}")


class GroupConsistencyCheck(BaseCheck):
    """|O| against |Iso| by symmetry type, and equal |Iso| inside isomorphic-group sets."""

    def __init__(self):
        super().__init__("group-consistency")

    def run(self, ctx: RecordContext) -> Outcome:
        e = ctx.record.expected
        factor = 2 if e.symmetry_type == "antisymmetric" else 1
        expected = f"|O| = {factor} x |Iso|"
        if e.lattice_aut_order % e.iso_order == 0:
            computed = f"|O| = {e.lattice_aut_order // e.iso_order} x |Iso|"
        else:
            computed = f"|O| / |Iso| = {e.lattice_aut_order}/{e.iso_order}"
        problems = []
        for members in ISOMORPHIC_ISO_GROUPS:
            if ctx.record.id not in members:
                continue
            for other_id in members:
                if other_id == ctx.record.id or other_id not in ctx.catalog.ids:
                    continue
                other = ctx.catalog.get(other_id)
                if other.is_placeholder:
                    continue
                if other.expected.iso_order != e.iso_order:
                    problems.append(f"{other_id} has |Iso| = {other.expected.iso_order}")
        status = CheckStatus.PASS if expected == computed and not problems else CheckStatus.FAIL
        return Outcome(status, expected, computed, "; ".join(problems))
