"""Embeddings of measure spaces and the extension-kit calculus.

A measure space (X, B, mu) is embedded in (Y, C, lambda) when X is a
subset of Y, B is exactly the trace of C on X, and lambda(C) = mu(C & X)
for every measurable C.  Every such extension is generated by an
*extension kit*: a pasted measurable space (Z, D) whose points can be
separated from X (and are necessarily null), a family D_B of admissible
pasted parts for each base set B, and blow-up fibers attached to atoms of
B whose points are measurably inseparable from the atom they stick to.

``construct_extension`` builds the extension a kit generates;
``decompose_extension`` recovers the canonical kit of a given extension;
``enumerate_extensions`` is the brute-force oracle that lists every
extension of a base space by finitely many fresh points.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping

from .core import (
    GroundSet,
    MeasureSpace,
    SigmaAlgebra,
    SubsetMask,
    mask_key,
    trace_algebra,
    transfer_mask,
)
from .errors import (
    GroundMismatchError,
    InputFormatError,
    InvalidKitError,
    PreconditionError,
    SizeCapError,
)
from .filters import SetFamily, classify_family
from .partitions import set_partitions

ENUMERATION_CAP = 8


def _embedded_mask(small: GroundSet, big: GroundSet) -> SubsetMask:
    if not set(small.labels) <= set(big.labels):
        raise GroundMismatchError("the small ground set is not a subset of the big one")
    return big.mask(small.labels)


def check_measurable_embedding(small: SigmaAlgebra, big: SigmaAlgebra) -> bool:
    """True iff the trace of ``big`` on the small ground set equals ``small``."""
    x = _embedded_mask(small.ground, big.ground)
    return trace_algebra(big, x, small.ground) == small


@dataclass(frozen=True)
class EmbeddingReport:
    """Outcome of a measure-embedding check, with a witness on failure."""

    ok: bool
    reason: str | None = None
    witness: SubsetMask | None = None


def measure_embedding_report(small: MeasureSpace, big: MeasureSpace) -> EmbeddingReport:
    """Check the embedding and, if it fails, name a concrete counterexample.

    The witness is either a big-side set whose trace is not measurable in
    the small algebra (or whose measure disagrees with the trace measure),
    or a small-side set that is not a trace at all.
    """
    x = _embedded_mask(small.ground, big.ground)
    traces = set()
    for c in big.algebra.sorted_sets():
        t = transfer_mask(c & x, small.ground)
        traces.add(t)
        if not small.algebra.member(t):
            return EmbeddingReport(False, "trace-mismatch", c)
    for s in small.algebra.sorted_sets():
        if s not in traces:
            return EmbeddingReport(False, "trace-mismatch", s)
    for c in big.algebra.sorted_sets():
        t = transfer_mask(c & x, small.ground)
        if big.measure_of(c) != small.measure_of(t):
            return EmbeddingReport(False, "measure-mismatch", c)
    return EmbeddingReport(True)


def check_measure_embedding(small: MeasureSpace, big: MeasureSpace) -> bool:
    """True iff ``small`` is embedded in ``big`` (trace and measure agree)."""
    return measure_embedding_report(small, big).ok


def check_thickness_equivalence(small: MeasureSpace, big: MeasureSpace) -> bool:
    """Test predicate: embedding holds iff X is thick and lambda = mu o trace.

    Requires the measurable-space embedding; under it, the measure
    embedding forces X to have full outer measure, so the biconditional
    must always come back True.
    """
    if not check_measurable_embedding(small.algebra, big.algebra):
        raise PreconditionError("the measurable-space embedding does not hold")
    x = _embedded_mask(small.ground, big.ground)
    lhs = check_measure_embedding(small, big)
    rhs = big.is_thick(x) and all(
        big.measure_of(c) == small.measure_of(transfer_mask(c & x, small.ground))
        for c in big.algebra.sets()
    )
    return lhs == rhs


@dataclass(frozen=True)
class ExtensionKit:
    """Generating data for an extension of a base measure space.

    - ``pasted``: a measurable space (Z, D) on fresh labels;
    - ``dfamily``: for each measurable base set B, the nonempty family
      D_B of pasted sets that may accompany B;
    - ``fibers``: for each chosen atom of the base algebra (the kernel of
      the fixed ultrafilter it represents), the nonempty tuple of fresh
      fiber labels blown up onto it.

    Validity (see :func:`validate_kit`): base, fiber, and pasted labels
    pairwise disjoint; the empty set belongs to D_empty; pasted
    complements of D_B land in D_(X minus B); and unions of selections
    from D_B1, D_B2 land in D_(B1 union B2).
    """

    base: MeasureSpace
    pasted: SigmaAlgebra
    dfamily: Mapping[SubsetMask, frozenset[SubsetMask]]
    fibers: Mapping[SubsetMask, tuple[str, ...]]

    def __post_init__(self):
        object.__setattr__(
            self, "dfamily", {k: frozenset(v) for k, v in self.dfamily.items()}
        )
        object.__setattr__(
            self, "fibers", {k: tuple(v) for k, v in self.fibers.items()}
        )


def identity_kit(base: MeasureSpace) -> ExtensionKit:
    """The kit whose extension is the base space itself."""
    pasted = SigmaAlgebra(GroundSet(()), ())
    empty = pasted.ground.empty
    dfamily = {b: frozenset({empty}) for b in base.algebra.sets()}
    return ExtensionKit(base, pasted, dfamily, {})


def full_dfamily(
    base_algebra: SigmaAlgebra, pasted: SigmaAlgebra
) -> dict[SubsetMask, frozenset[SubsetMask]]:
    """The constant-full family D_B = D, valid for any pasted space."""
    everything = frozenset(pasted.sets())
    return {b: everything for b in base_algebra.sets()}


def auto_fibers(sizes: Mapping[SubsetMask, int]) -> dict[SubsetMask, tuple[str, ...]]:
    """Generate fresh fiber labels "<u>#k" from requested fiber sizes.

    ``u`` is the least-index point of the kernel atom, so distinct atoms
    never collide.
    """
    out: dict[SubsetMask, tuple[str, ...]] = {}
    for kernel, size in sizes.items():
        if size < 1:
            raise InputFormatError("fiber sizes must be at least 1")
        u = kernel.labels()[0]
        out[kernel] = tuple(f"{u}#{k}" for k in range(1, size + 1))
    return out


def pasted_ground(names: Iterable[str]) -> GroundSet:
    """Ground set for a hand-built pasted space, namespaced "z:<name>"."""
    return GroundSet(tuple(f"z:{name}" for name in names))


def _fmt(mask: SubsetMask) -> str:
    return "{%s}" % ",".join(mask.labels())


def validate_kit(kit: ExtensionKit) -> list[str]:
    """Return the list of violated kit invariants (empty = valid).

    The union condition is checked for pairs only: a finite selection
    D_1, ..., D_n folds to pairwise unions ((D_1 | D_2) | D_3 ...), so
    pairwise closure over all B_1, B_2 already gives the finite case.
    The test suite re-checks selections of length three directly.
    """
    problems: list[str] = []
    base_alg = kit.base.algebra

    used: dict[str, str] = {label: "base" for label in base_alg.ground.labels}
    for kernel in sorted(kit.fibers, key=mask_key):
        labels = kit.fibers[kernel]
        if len(set(labels)) != len(labels):
            problems.append(f"fiber {_fmt(kernel)} repeats a label")
        for label in labels:
            if label in used:
                problems.append(
                    f"label {label!r} of fiber {_fmt(kernel)} collides with {used[label]}"
                )
            else:
                used[label] = f"fiber {_fmt(kernel)}"
    for label in kit.pasted.ground.labels:
        if label in used:
            problems.append(f"pasted label {label!r} collides with {used[label]}")
        else:
            used[label] = "pasted"

    atoms = set(base_alg.atoms)
    for kernel in sorted(kit.fibers, key=mask_key):
        if kernel not in atoms:
            problems.append(f"fiber key {_fmt(kernel)} is not an atom of the base algebra")
        if not kit.fibers[kernel]:
            problems.append(f"fiber {_fmt(kernel)} is empty")

    expected = set(base_alg.sets())
    keys = set(kit.dfamily)
    for b in sorted(expected - keys, key=mask_key):
        problems.append(f"no pasted family for base set {_fmt(b)}")
    for b in sorted(keys - expected, key=mask_key):
        problems.append(f"pasted family keyed by non-measurable set {_fmt(b)}")

    shared = sorted(keys & expected, key=mask_key)
    well_typed = keys == expected
    for b in shared:
        ds = kit.dfamily[b]
        if not ds:
            problems.append(f"pasted family for {_fmt(b)} is empty")
            well_typed = False
        for d in sorted(ds, key=mask_key):
            if d.ground != kit.pasted.ground or not kit.pasted.member(d):
                problems.append(
                    f"pasted family for {_fmt(b)} contains non-measurable {_fmt(d)}"
                )
                well_typed = False

    # the three closure conditions need a complete, measurable dfamily
    if well_typed:
        empty_base = base_alg.ground.empty
        if kit.pasted.ground.empty not in kit.dfamily[empty_base]:
            problems.append("the empty pasted set is missing from the family of the empty base set")
        for b in shared:
            comp = b.complement()
            for d in sorted(kit.dfamily[b], key=mask_key):
                if d.complement() not in kit.dfamily[comp]:
                    problems.append(
                        f"complement {_fmt(d.complement())} of {_fmt(d)} in the family of "
                        f"{_fmt(b)} is missing from the family of {_fmt(comp)}"
                    )
        for b1 in shared:
            for b2 in shared:
                target = kit.dfamily[b1 | b2]
                for d1 in sorted(kit.dfamily[b1], key=mask_key):
                    for d2 in sorted(kit.dfamily[b2], key=mask_key):
                        if (d1 | d2) not in target:
                            problems.append(
                                f"union {_fmt(d1 | d2)} of selections from {_fmt(b1)} and "
                                f"{_fmt(b2)} is missing from the family of {_fmt(b1 | b2)}"
                            )
    return problems


def construct_extension(kit: ExtensionKit) -> MeasureSpace:
    """Build the measure space a valid kit generates.

    The ground set is the base points followed by all outside labels in
    lexicographic order (a canonical choice, so reconstruction from a
    decomposed kit is reproducible).  Measurable sets are exactly
    B + (fibers of atoms inside B) + D with D in D_B, and such a set gets
    the base value of B.
    """
    problems = validate_kit(kit)
    if problems:
        raise InvalidKitError(problems)

    base = kit.base
    outside = sorted(
        [label for labels in kit.fibers.values() for label in labels]
        + list(kit.pasted.ground.labels)
    )
    all_labels = tuple(base.ground.labels) + tuple(outside)
    if len(all_labels) > 16:
        raise SizeCapError(f"extension would have {len(all_labels)} points; the cap is 16")
    ground = GroundSet(all_labels)
    x = ground.mask(base.ground.labels)

    fiber_bits: dict[SubsetMask, int] = {}
    for kernel, labels in kit.fibers.items():
        fiber_bits[kernel] = ground.mask(labels).bits

    family: set[int] = set()
    for b in base.algebra.sets():
        bits = transfer_mask(b, ground).bits
        for kernel, fb in fiber_bits.items():
            if kernel.issubset(b):
                bits |= fb
        for d in kit.dfamily[b]:
            family.add(bits | transfer_mask(d, ground).bits)

    # points are atom-mates iff no generated set separates them
    ordered = sorted(family)
    blocks: dict[tuple[int, ...], int] = {}
    for i in range(ground.size):
        signature = tuple(bits >> i & 1 for bits in ordered)
        blocks[signature] = blocks.get(signature, 0) | (1 << i)
    algebra = SigmaAlgebra(
        ground, tuple(SubsetMask(ground, bits) for bits in blocks.values())
    )
    assert len(family) == algebra.n_sets  # the generated family is already closed

    values = tuple(
        base.measure_of(transfer_mask(atom & x, base.ground)) for atom in algebra.atoms
    )
    result = MeasureSpace(algebra, values)
    assert check_measure_embedding(base, result)
    return result


@dataclass(frozen=True)
class PointAssignment:
    """Where an outside point of a decomposition lives.

    ``kind`` is "pasted" (separable from X by a measurable set) or
    "fiber" (stuck to the base atom ``kernel``).
    """

    kind: str
    kernel: SubsetMask | None = None


@dataclass(frozen=True)
class DecompositionRecord:
    """Canonical split of an extension into X-part, fibers, and pasted part."""

    z_part: SubsetMask
    kit: ExtensionKit
    point_assignment: dict[str, PointAssignment]

    @property
    def point_form(self) -> bool:
        """True when every fiber kernel is a single point (blow-up form).

        Otherwise the base algebra does not separate the points inside
        some kernel and the kit exists in ultrafilter form only.
        """
        return all(kernel.size == 1 for kernel in self.kit.fibers)


def _induced_base(big: MeasureSpace, x: SubsetMask) -> MeasureSpace:
    """The trace measure space on X, or an error if X does not embed."""
    target = GroundSet(x.labels())
    small_alg = trace_algebra(big.algebra, x, target)
    values = []
    for t in small_alg.atoms:
        t_bits = transfer_mask(t, big.ground).bits
        cover = 0
        for atom in big.algebra.atoms:
            inter = atom.bits & x.bits
            if inter and inter & ~t_bits == 0:
                cover |= atom.bits
        values.append(big.measure_of(SubsetMask(big.ground, cover)))
    small = MeasureSpace(small_alg, tuple(values))
    report = measure_embedding_report(small, big)
    if not report.ok:
        raise PreconditionError(
            f"the trace space on X is not embedded: {report.reason}"
            f" at {_fmt(report.witness)}"
        )
    return small


def decompose_extension(big: MeasureSpace, x: SubsetMask) -> DecompositionRecord:
    """Recover the canonical kit of an extension.

    Z collects the outside points covered by a measurable set disjoint
    from X; D_B collects the Z-traces of the sets whose X-trace is B; and
    every remaining outside point p determines the fixed ultrafilter
    {C & X : p in C}, whose kernel names the fiber p belongs to.
    """
    if x.ground != big.ground:
        raise GroundMismatchError("x is over a different ground set")
    small = _induced_base(big, x)

    z_bits = 0
    for atom in big.algebra.atoms:
        if atom.bits & x.bits == 0:
            z_bits |= atom.bits
    z_part = SubsetMask(big.ground, z_bits)
    z_ground = GroundSet(z_part.labels())
    pasted = SigmaAlgebra(
        z_ground,
        tuple(
            transfer_mask(atom, z_ground)
            for atom in big.algebra.atoms
            if atom.issubset(z_part)
        ),
    )

    dfamily: dict[SubsetMask, set[SubsetMask]] = {}
    for c in big.algebra.sets():
        b = transfer_mask(c & x, small.ground)
        d = transfer_mask(c & z_part, z_ground)
        dfamily.setdefault(b, set()).add(d)

    fibers: dict[SubsetMask, tuple[str, ...]] = {}
    assignment: dict[str, PointAssignment] = {}
    for label in z_part.labels():
        assignment[label] = PointAssignment("pasted")
    for atom in big.algebra.atoms:
        inside = atom & x
        stuck = atom - x
        if not inside or not stuck:
            continue
        members = frozenset(
            transfer_mask(c & x, small.ground)
            for c in big.algebra.sets()
            if atom.issubset(c)
        )
        record = classify_family(SetFamily(small.algebra, members))
        assert record.is_ultrafilter and record.has_cip
        kernel = record.kernel
        assert kernel == transfer_mask(inside, small.ground)
        fibers[kernel] = stuck.labels()
        for label in stuck.labels():
            assignment[label] = PointAssignment("fiber", kernel)

    kit = ExtensionKit(
        small, pasted, {b: frozenset(ds) for b, ds in dfamily.items()}, fibers
    )
    return DecompositionRecord(z_part=z_part, kit=kit, point_assignment=assignment)


@dataclass(frozen=True)
class OutsidePointClass:
    """Classification of an outside point of an extension.

    kind "pasted": covered by a measurable set missing X entirely;
    kind "sticks_to": inseparable from the named base points;
    kind "separated": separable from every base point but not pasted,
    which requires a free ultrafilter with c.i.p. and therefore never
    occurs on a finite space (its presence is a bug or a test failure).
    """

    kind: str
    anchors: tuple[str, ...] = ()


def classify_outside_points(
    big: MeasureSpace, x: SubsetMask
) -> dict[str, OutsidePointClass]:
    """Label every point of Y minus X as pasted / sticks_to / separated."""
    if x.ground != big.ground:
        raise GroundMismatchError("x is over a different ground set")
    _induced_base(big, x)
    out: dict[str, OutsidePointClass] = {}
    for atom in big.algebra.atoms:
        inside = atom & x
        outside = atom - x
        if not outside:
            continue
        if not inside:
            for label in outside.labels():
                out[label] = OutsidePointClass("pasted")
        else:
            kind = OutsidePointClass("sticks_to", inside.labels())
            for label in outside.labels():
                out[label] = kind
    return out


def enumerate_extensions(
    base: MeasureSpace, extra_labels: Iterable[str]
) -> list[MeasureSpace]:
    """Every extension of the base by the given fresh points.

    One candidate per set partition of the enlarged ground set; a
    partition survives iff its trace on X reproduces the base algebra,
    and then the measure is forced: each new atom weighs what its X-part
    weighs.  Output is canonically sorted and uses the canonical ground
    order (base points first, extra points sorted lexicographically).
    """
    extras = list(extra_labels)
    if len(set(extras)) != len(extras):
        raise InputFormatError("extra labels must be distinct")
    if set(extras) & set(base.ground.labels):
        raise InputFormatError("extra labels must be fresh")
    n = base.ground.size + len(extras)
    if n > ENUMERATION_CAP:
        raise SizeCapError(
            f"enumeration needs {n} points; the cap is {ENUMERATION_CAP}"
        )
    ground = GroundSet(tuple(base.ground.labels) + tuple(sorted(extras)))
    x = ground.mask(base.ground.labels)

    out = []
    for blocks in set_partitions(range(n)):
        atoms = tuple(
            SubsetMask(ground, sum(1 << i for i in block)) for block in blocks
        )
        algebra = SigmaAlgebra(ground, atoms)
        if trace_algebra(algebra, x, base.ground) != base.algebra:
            continue
        values = tuple(
            base.measure_of(transfer_mask(atom & x, base.ground))
            for atom in algebra.atoms
        )
        out.append(MeasureSpace(algebra, values))
    out.sort(key=lambda ms: tuple(atom.indices() for atom in ms.algebra.atoms))
    return out
