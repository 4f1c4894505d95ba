"""Filters and ultrafilters inside a finite sigma-algebra.

Classification is by direct definition (filter-base, filter, ultrafilter
criterion, countable intersection property, free/fixed); on a finite
algebra the countable clauses reduce to finite ones, and the c.i.p. flag
collapses to "nonempty kernel".  The test suite checks that collapse
against the subfamily definition rather than assuming it.

Also here: the dictionary between ultrafilters and nontrivial
{0,1}-valued measures, and the transfer of ultrafilters along sub- and
super-space inclusions (up-set lifting, trace restriction).
"""
from __future__ import annotations

from dataclasses import dataclass

from .core import (
    GroundSet,
    MeasureSpace,
    ONE,
    SigmaAlgebra,
    SubsetMask,
    ZERO,
    mask_key,
    trace_algebra,
    transfer_mask,
)
from .errors import GroundMismatchError, InputFormatError, PreconditionError


@dataclass(frozen=True)
class SetFamily:
    """A family of measurable sets inside one sigma-algebra."""

    algebra: SigmaAlgebra
    members: frozenset[SubsetMask]

    def __post_init__(self):
        members = frozenset(self.members)
        object.__setattr__(self, "members", members)
        for m in members:
            self.algebra.require_member(m)

    def sorted_members(self) -> list[SubsetMask]:
        return sorted(self.members, key=mask_key)


@dataclass(frozen=True)
class UltrafilterRecord:
    """A set family together with its kernel and classification flags.

    ``kernel`` is the intersection of all members (the whole ground set
    for an empty family).  In a finite algebra an ultrafilter's kernel is
    an atom, and has_cip / not is_free / nonempty kernel coincide.
    """

    family: SetFamily
    kernel: SubsetMask
    is_filter_base: bool
    is_filter: bool
    is_ultrafilter: bool
    has_cip: bool
    is_free: bool

    @property
    def algebra(self) -> SigmaAlgebra:
        return self.family.algebra

    @property
    def members(self) -> frozenset[SubsetMask]:
        return self.family.members


def classify_family(family: SetFamily) -> UltrafilterRecord:
    """Compute every classification flag by its direct definition.

    - filter-base: nonempty, and every two members contain a nonempty
      member below their intersection;
    - filter: filter-base, closed upward and under binary intersections;
    - ultrafilter: filter-base such that any measurable set meeting every
      member is itself a member;
    - c.i.p.: every finite subfamily has nonempty intersection, which for
      a finite family is equivalent to a nonempty kernel;
    - free: empty kernel.
    """
    algebra = family.algebra
    ground = algebra.ground
    # raw-int mirror of the members, smallest sets first so that the
    # "find a nonempty member below ..." scans exit early
    member_bits = sorted(
        (m.bits for m in family.members), key=lambda b: (b.bit_count(), b)
    )
    member_set = set(member_bits)
    all_bits = [s.bits for s in algebra.sets()]
    kernel_bits = (1 << ground.size) - 1
    for b in member_bits:
        kernel_bits &= b

    def nonempty_member_below(target: int) -> bool:
        return any(c and c & ~target == 0 for c in member_bits)

    is_filter_base = bool(member_bits) and all(
        nonempty_member_below(a & b) for a in member_bits for b in member_bits
    )
    upward_closed = all(
        b in member_set or not any(f & ~b == 0 for f in member_bits)
        for b in all_bits
    )
    intersection_closed = all(
        (a & b) in member_set for a in member_bits for b in member_bits
    )
    is_filter = is_filter_base and upward_closed and intersection_closed
    is_ultrafilter = is_filter_base and all(
        b in member_set or any(b & m == 0 for m in member_bits)
        for b in all_bits
    )
    kernel = SubsetMask(ground, kernel_bits)
    has_cip = kernel.bits != 0
    return UltrafilterRecord(
        family=family,
        kernel=kernel,
        is_filter_base=is_filter_base,
        is_filter=is_filter,
        is_ultrafilter=is_ultrafilter,
        has_cip=has_cip,
        is_free=not has_cip,
    )


def principal_ultrafilter(algebra: SigmaAlgebra, atom: SubsetMask) -> UltrafilterRecord:
    """The up-set of an atom, classified (and verified) as an ultrafilter."""
    if atom not in algebra.atoms:
        raise PreconditionError(f"{atom!r} is not an atom of the algebra")
    members = frozenset(s for s in algebra.sets() if atom.issubset(s))
    record = classify_family(SetFamily(algebra, members))
    assert record.is_ultrafilter and record.has_cip and not record.is_free
    assert record.kernel == atom
    return record


def enumerate_ultrafilters(algebra: SigmaAlgebra) -> list[UltrafilterRecord]:
    """All ultrafilters of a finite algebra: one per atom, all fixed.

    This is the finite shadow of the fact that a countable ground set
    admits no free ultrafilter with the countable intersection property.
    """
    return [principal_ultrafilter(algebra, atom) for atom in algebra.atoms]


def check_dichotomy(u: UltrafilterRecord, b: SubsetMask) -> bool:
    """True iff exactly one of ``b`` and its complement is a member."""
    if not u.is_ultrafilter:
        raise PreconditionError("dichotomy is only meaningful for ultrafilters")
    u.algebra.require_member(b)
    return (b in u.members) != (b.complement() in u.members)


def check_union_membership(u: UltrafilterRecord, bs: list[SubsetMask]) -> bool:
    """Whether (union in U) iff (some listed set in U) holds.

    A test predicate: for an ultrafilter with c.i.p. the biconditional is
    a theorem, so this must always return True.
    """
    if not (u.is_ultrafilter and u.has_cip):
        raise PreconditionError("needs an ultrafilter with c.i.p.")
    union = u.algebra.ground.empty
    for b in bs:
        u.algebra.require_member(b)
        union = union | b
    return (union in u.members) == any(b in u.members for b in bs)


def extend_to_ultrafilter(base: SetFamily) -> UltrafilterRecord:
    """A deterministic ultrafilter containing the given filter-base.

    The kernel of a filter-base in a finite algebra is nonempty and
    measurable; we take the principal ultrafilter of the least-index atom
    inside it, which makes repeated runs reproducible.
    """
    record = classify_family(base)
    if not record.is_filter_base:
        if not base.members:
            reason = "the family is empty"
        elif any(m.bits == 0 for m in base.members):
            reason = "the family contains the empty set"
        else:
            reason = "some pair of members has no nonempty member below it"
        raise PreconditionError(f"not a filter-base: {reason}")
    for atom in base.algebra.atoms:
        if atom.issubset(record.kernel):
            result = principal_ultrafilter(base.algebra, atom)
            assert base.members <= result.members
            return result
    raise AssertionError("a filter-base kernel contains an atom")


@dataclass(frozen=True)
class ZeroOneMeasure:
    """A measure space whose every value lies in {0, 1}.

    For all measurable sets to get values in {0, 1}, at most one atom may
    carry value 1; "nontrivial" means the whole space has measure 1.
    """

    ms: MeasureSpace

    def __post_init__(self):
        ones = [
            a for a, v in zip(self.ms.algebra.atoms, self.ms.atom_values) if v == ONE
        ]
        if any(v not in (ZERO, ONE) for v in self.ms.atom_values) or len(ones) > 1:
            raise InputFormatError(
                "a {0,1}-valued measure has at most one atom of value 1"
            )
        object.__setattr__(self, "_unit_atom", ones[0] if ones else None)

    @property
    def unit_atom(self) -> SubsetMask | None:
        return self._unit_atom  # type: ignore[attr-defined]

    @property
    def is_nontrivial(self) -> bool:
        return self.unit_atom is not None


def measure_from_ultrafilter(u: UltrafilterRecord) -> ZeroOneMeasure:
    """The {0,1}-valued measure with value 1 exactly on members of ``u``."""
    if not u.is_ultrafilter:
        raise PreconditionError("needs an ultrafilter")
    values = tuple(ONE if atom == u.kernel else ZERO for atom in u.algebra.atoms)
    return ZeroOneMeasure(MeasureSpace(u.algebra, values))


def ultrafilter_from_01_measure(m: ZeroOneMeasure) -> UltrafilterRecord:
    """The family of measure-1 sets of a nontrivial {0,1}-valued measure.

    Verified to be an ultrafilter with c.i.p.; inverse to
    :func:`measure_from_ultrafilter`.
    """
    if not m.is_nontrivial:
        raise PreconditionError("the measure is trivial (identically zero)")
    members = frozenset(s for s in m.ms.algebra.sets() if m.ms.measure_of(s) == ONE)
    record = classify_family(SetFamily(m.ms.algebra, members))
    assert record.is_ultrafilter and record.has_cip
    return record


def check_sup_property(m: ZeroOneMeasure, family: SetFamily) -> bool:
    """Whether measure(union of family) equals sup of member measures.

    Precondition (checked): the null sets of ``m`` cover the ground set.
    On a finite space this forces ``m`` to be trivial, so the check can
    only ever run against the zero measure; it exists to state the
    general property honestly, finite collapse included.
    """
    if family.algebra != m.ms.algebra:
        raise GroundMismatchError("family and measure live on different algebras")
    if not m.ms.null_sets_cover_ground():
        raise PreconditionError("the null sets of the measure do not cover the space")
    union = m.ms.algebra.ground.empty
    for member in family.members:
        union = union | member
    m.ms.algebra.require_member(union)
    supremum = ZERO
    for member in family.members:
        value = m.ms.measure_of(member)
        if supremum < value:
            supremum = value
    return m.ms.measure_of(union) == supremum


def lift_to_superspace(
    f: UltrafilterRecord, superalgebra: SigmaAlgebra
) -> UltrafilterRecord:
    """Lift an ultrafilter on a measurable subset X to the ambient algebra.

    Requires X to be measurable in the superalgebra and the ultrafilter's
    algebra to be exactly the trace on X.  The lift is the up-set
    {G : G contains some member of f}, an ultrafilter with c.i.p.; it is
    free iff ``f`` is free (never, finitely).
    """
    if not f.is_ultrafilter:
        raise PreconditionError("needs an ultrafilter")
    small_labels = f.algebra.ground.labels
    if not set(small_labels) <= set(superalgebra.ground.labels):
        raise GroundMismatchError("the ultrafilter's points are not in the superspace")
    x = superalgebra.ground.mask(small_labels)
    if not superalgebra.member(x):
        raise PreconditionError("X is not measurable in the superalgebra")
    if trace_algebra(superalgebra, x, f.algebra.ground) != f.algebra:
        raise PreconditionError(
            "the ultrafilter's algebra is not the trace of the superalgebra on X"
        )
    lifted = frozenset(
        g
        for g in superalgebra.sets()
        if any(transfer_mask(m, superalgebra.ground).issubset(g) for m in f.members)
    )
    record = classify_family(SetFamily(superalgebra, lifted))
    assert record.is_ultrafilter and record.has_cip
    assert record.is_free == f.is_free
    return record


def restrict_by_trace(h: UltrafilterRecord, x: SubsetMask) -> UltrafilterRecord:
    """Push an ultrafilter on Y down to the trace algebra on X.

    Requires every member of ``h`` to meet ``x`` (if some member misses
    X, the ultrafilter lives over the complement and has no trace).  The
    traces {H intersect X} form a filter-base, which is extended to an
    ultrafilter deterministically.
    """
    if x.ground != h.algebra.ground:
        raise GroundMismatchError("x is over a different ground set")
    if not (h.is_ultrafilter and h.has_cip):
        raise PreconditionError("needs an ultrafilter with c.i.p.")
    for member in h.family.sorted_members():
        if member.isdisjoint(x):
            raise PreconditionError(f"member {member!r} does not meet X")
    target = GroundSet(x.labels())
    small = trace_algebra(h.algebra, x, target)
    traces = frozenset(transfer_mask(m & x, target) for m in h.members)
    return extend_to_ultrafilter(SetFamily(small, traces))
