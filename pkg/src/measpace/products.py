"""Product measurable spaces and the ultrafilter lifting/projection calculus.

The product algebra is generated by the measurable rectangles; for finite
factors it equals the algebra whose atoms are the pairwise products of
the factor atoms (asserted at construction).  The product measure
multiplies atom values with the convention 0 * inf = 0.
"""
from __future__ import annotations

from dataclasses import dataclass

from .core import (
    GroundSet,
    MeasureSpace,
    SigmaAlgebra,
    SubsetMask,
    generate_sigma_algebra,
)
from .errors import GroundMismatchError, PreconditionError, SizeCapError
from .filters import SetFamily, UltrafilterRecord, extend_to_ultrafilter


def _escape(label: str) -> str:
    return label.replace("\\", "\\\\").replace("|", "\\|")


def pair_label(left: str, right: str) -> str:
    """Canonical composite label "(x|y)"; "|" in inputs is escaped."""
    return f"({_escape(left)}|{_escape(right)})"


@dataclass(frozen=True)
class ProductSpace:
    """A left and right factor plus their product measure space.

    Pair labels are ordered lexicographically by (left index, right
    index), so the point (i, j) sits at bit i * right_size + j.
    """

    left: MeasureSpace
    right: MeasureSpace
    product: MeasureSpace

    def pair_bit(self, i: int, j: int) -> int:
        return i * self.right.ground.size + j

    def rectangle(self, b: SubsetMask, c: SubsetMask) -> SubsetMask:
        """The product set B x C as a mask over the product ground."""
        if b.ground != self.left.ground or c.ground != self.right.ground:
            raise GroundMismatchError("rectangle sides must come from the factors")
        bits = 0
        for i in b.indices():
            for j in c.indices():
                bits |= 1 << self.pair_bit(i, j)
        return SubsetMask(self.product.ground, bits)


def product_space(left: MeasureSpace, right: MeasureSpace) -> ProductSpace:
    """Form the product of two measure spaces.

    The rectangle-generated algebra is recomputed independently and
    asserted equal to the atom-product algebra.
    """
    n = left.ground.size * right.ground.size
    if n > 16:
        raise SizeCapError(f"product would have {n} points; the cap is 16")
    labels = tuple(
        pair_label(lx, ry) for lx in left.ground.labels for ry in right.ground.labels
    )
    ground = GroundSet(labels)
    rsize = right.ground.size

    def rect_bits(b: SubsetMask, c: SubsetMask) -> int:
        bits = 0
        for i in b.indices():
            for j in c.indices():
                bits |= 1 << (i * rsize + j)
        return bits

    atoms = []
    values = []
    for la, lv in zip(left.algebra.atoms, left.atom_values):
        for ra, rv in zip(right.algebra.atoms, right.atom_values):
            atoms.append(SubsetMask(ground, rect_bits(la, ra)))
            values.append(lv * rv)
    algebra = SigmaAlgebra(ground, tuple(atoms))

    rectangles = [
        SubsetMask(ground, rect_bits(b, c))
        for b in left.algebra.sets()
        for c in right.algebra.sets()
    ]
    assert generate_sigma_algebra(ground, rectangles) == algebra

    order = {a: i for i, a in enumerate(atoms)}
    product = MeasureSpace(
        algebra, tuple(values[order[a]] for a in algebra.atoms)
    )
    return ProductSpace(left=left, right=right, product=product)


def y_section(ps: ProductSpace, product_set: SubsetMask, y: str) -> SubsetMask:
    """The section {x : (x, y) in the set}, measurable on the left factor."""
    ps.product.algebra.require_member(product_set)
    if y not in ps.right.ground.labels:
        raise PreconditionError(f"{y!r} is not a point of the right factor")
    j = ps.right.ground.index(y)
    bits = 0
    for i in range(ps.left.ground.size):
        if product_set.bits >> ps.pair_bit(i, j) & 1:
            bits |= 1 << i
    section = SubsetMask(ps.left.ground, bits)
    assert ps.left.algebra.member(section)
    return section


def lift_ultrafilter(ps: ProductSpace, f: UltrafilterRecord, y: str) -> UltrafilterRecord:
    """Lift a left-factor ultrafilter to the product along the slice at y.

    Requires {y} to be measurable on the right.  The rectangles
    F x {y} form a filter-base, extended deterministically to a product
    ultrafilter with c.i.p.; the y-section of each member stays in f.
    """
    if f.algebra != ps.left.algebra:
        raise GroundMismatchError("the ultrafilter is not over the left factor")
    if not f.is_ultrafilter:
        raise PreconditionError("needs an ultrafilter")
    if y not in ps.right.ground.labels:
        raise PreconditionError(f"{y!r} is not a point of the right factor")
    y_mask = ps.right.ground.singleton(y)
    if not ps.right.algebra.member(y_mask):
        raise PreconditionError(f"the singleton {{{y}}} is not measurable on the right")
    slices = frozenset(ps.rectangle(F, y_mask) for F in f.members)
    record = extend_to_ultrafilter(SetFamily(ps.product.algebra, slices))
    assert record.has_cip
    assert all(y_section(ps, member, y) in f.members for member in record.members)
    return record


def project_ultrafilter(
    ps: ProductSpace, h: UltrafilterRecord
) -> tuple[UltrafilterRecord, UltrafilterRecord]:
    """Project a product ultrafilter to its two factors.

    Requires singletons to be measurable in both factors and h to have
    c.i.p.  The left projection extends {B : B x Y in h}; the right one
    is symmetric.  The kernels reconstitute the kernel of h (asserted).
    """
    if h.algebra != ps.product.algebra:
        raise GroundMismatchError("the ultrafilter is not over the product")
    if not (h.is_ultrafilter and h.has_cip):
        raise PreconditionError("needs an ultrafilter with c.i.p.")
    for side, ms in (("left", ps.left), ("right", ps.right)):
        if not ms.algebra.is_discrete:
            raise PreconditionError(f"singletons are not measurable in the {side} factor")

    left_base = frozenset(
        b
        for b in ps.left.algebra.sets()
        if ps.rectangle(b, ps.right.ground.full) in h.members
    )
    right_base = frozenset(
        c
        for c in ps.right.algebra.sets()
        if ps.rectangle(ps.left.ground.full, c) in h.members
    )
    left = extend_to_ultrafilter(SetFamily(ps.left.algebra, left_base))
    right = extend_to_ultrafilter(SetFamily(ps.right.algebra, right_base))
    assert ps.rectangle(left.kernel, right.kernel) == h.kernel
    return left, right
