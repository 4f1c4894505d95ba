"""Finite measurable and measure spaces.

Ground sets are ordered label tuples, subsets are bitmasks, and a
sigma-algebra is stored canonically as its atom partition (every finite
sigma-algebra is atomic, so the partition determines it).  Measures carry
one exact extended-rational value per atom; there is no floating point
anywhere.  All values are immutable after construction and safe to share
between threads.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Iterator

from .errors import (
    GroundMismatchError,
    InputFormatError,
    NotMeasurableError,
    SizeCapError,
)
from .partitions import set_partitions

#: Hard cap on ground-set size (bitmask width).  Exhaustive enumeration is
#: only practical well below this; see ``enumerate_extensions``.
MAX_POINTS = 16


@dataclass(frozen=True)
class ExtReal:
    """A nonnegative exact rational or +infinity (``finite is None``).

    Addition is total with infinity absorbing; multiplication uses the
    measure-theoretic convention 0 * inf = 0.
    """

    finite: Fraction | None

    def __post_init__(self):
        if self.finite is not None:
            if not isinstance(self.finite, Fraction):
                raise InputFormatError(
                    f"ExtReal wants a Fraction or None, got {self.finite!r}"
                )
            if self.finite < 0:
                raise InputFormatError(f"measure values may not be negative: {self.finite}")

    @classmethod
    def of(cls, value) -> "ExtReal":
        """Coerce an int, Fraction, or string ("2/3", "0.5", "inf")."""
        if isinstance(value, ExtReal):
            return value
        if isinstance(value, bool) or isinstance(value, float):
            raise InputFormatError(
                f"floating point / boolean measure values are not accepted: {value!r}"
            )
        if isinstance(value, int):
            return cls(Fraction(value))
        if isinstance(value, Fraction):
            return cls(value)
        if isinstance(value, str):
            text = value.strip()
            if text == "inf":
                return cls(None)
            try:
                return cls(Fraction(text))
            except (ValueError, ZeroDivisionError):
                raise InputFormatError(f"bad measure value {value!r}") from None
        raise InputFormatError(f"bad measure value {value!r}")

    @property
    def is_infinite(self) -> bool:
        return self.finite is None

    def __add__(self, other: "ExtReal") -> "ExtReal":
        other = ExtReal.of(other)
        if self.finite is None or other.finite is None:
            return INFINITY
        return ExtReal(self.finite + other.finite)

    def __mul__(self, other: "ExtReal") -> "ExtReal":
        other = ExtReal.of(other)
        if self == ZERO or other == ZERO:
            return ZERO
        if self.finite is None or other.finite is None:
            return INFINITY
        return ExtReal(self.finite * other.finite)

    def __lt__(self, other: "ExtReal") -> bool:
        other = ExtReal.of(other)
        if self.finite is None:
            return False
        if other.finite is None:
            return True
        return self.finite < other.finite

    def __le__(self, other: "ExtReal") -> bool:
        other = ExtReal.of(other)
        return self == other or self < other

    def __str__(self) -> str:
        return "inf" if self.finite is None else str(self.finite)

    def __repr__(self) -> str:
        return f"ExtReal({self})"


ZERO = ExtReal(Fraction(0))
ONE = ExtReal(Fraction(1))
INFINITY = ExtReal(None)


@dataclass(frozen=True)
class GroundSet:
    """Ordered tuple of distinct point labels; label index = bit position.

    May be empty (e.g. an empty pasted part).  Labels are nonempty strings
    without commas, so that label lists serialize unambiguously.
    """

    labels: tuple[str, ...]

    def __post_init__(self):
        labels = tuple(self.labels)
        object.__setattr__(self, "labels", labels)
        if len(labels) > MAX_POINTS:
            raise SizeCapError(
                f"ground set has {len(labels)} points; the cap is {MAX_POINTS}"
            )
        seen = set()
        for label in labels:
            if not isinstance(label, str) or not label:
                raise InputFormatError(
                    f"point labels must be nonempty strings, got {label!r}"
                )
            if "," in label:
                raise InputFormatError(f"point label {label!r} may not contain ','")
            if label in seen:
                raise InputFormatError(f"duplicate point label {label!r}")
            seen.add(label)

    @cached_property
    def _position(self) -> dict[str, int]:
        return {label: i for i, label in enumerate(self.labels)}

    @property
    def size(self) -> int:
        return len(self.labels)

    def index(self, label: str) -> int:
        try:
            return self._position[label]
        except KeyError:
            raise InputFormatError(f"unknown point label {label!r}") from None

    def mask(self, labels: Iterable[str]) -> "SubsetMask":
        bits = 0
        for label in labels:
            bits |= 1 << self.index(label)
        return SubsetMask(self, bits)

    def singleton(self, label: str) -> "SubsetMask":
        return SubsetMask(self, 1 << self.index(label))

    @property
    def empty(self) -> "SubsetMask":
        return SubsetMask(self, 0)

    @property
    def full(self) -> "SubsetMask":
        return SubsetMask(self, (1 << self.size) - 1)

    def __repr__(self) -> str:
        return f"GroundSet({', '.join(self.labels)})"


@dataclass(frozen=True)
class SubsetMask:
    """Bitmask subset of a specific ground set.

    Masks are only comparable/combinable over equal ground sets; mixing
    grounds raises :class:`GroundMismatchError`.
    """

    ground: GroundSet
    bits: int

    def __post_init__(self):
        if not 0 <= self.bits < (1 << self.ground.size):
            raise InputFormatError("mask bits out of range for its ground set")

    def _same_ground(self, other: "SubsetMask") -> None:
        if self.ground != other.ground:
            raise GroundMismatchError("masks are over different ground sets")

    def __or__(self, other: "SubsetMask") -> "SubsetMask":
        self._same_ground(other)
        return SubsetMask(self.ground, self.bits | other.bits)

    def __and__(self, other: "SubsetMask") -> "SubsetMask":
        self._same_ground(other)
        return SubsetMask(self.ground, self.bits & other.bits)

    def __sub__(self, other: "SubsetMask") -> "SubsetMask":
        self._same_ground(other)
        return SubsetMask(self.ground, self.bits & ~other.bits)

    def complement(self) -> "SubsetMask":
        return SubsetMask(self.ground, self.bits ^ (1 << self.ground.size) - 1)

    def issubset(self, other: "SubsetMask") -> bool:
        self._same_ground(other)
        return self.bits & ~other.bits == 0

    __le__ = issubset

    def isdisjoint(self, other: "SubsetMask") -> bool:
        self._same_ground(other)
        return self.bits & other.bits == 0

    def __bool__(self) -> bool:
        return self.bits != 0

    @property
    def size(self) -> int:
        return self.bits.bit_count()

    def indices(self) -> tuple[int, ...]:
        return tuple(i for i in range(self.ground.size) if self.bits >> i & 1)

    def labels(self) -> tuple[str, ...]:
        return tuple(self.ground.labels[i] for i in self.indices())

    def __contains__(self, label: str) -> bool:
        return bool(self.bits >> self.ground.index(label) & 1)

    def __repr__(self) -> str:
        return "{%s}" % ",".join(self.labels())


def mask_key(mask: SubsetMask) -> tuple[int, ...]:
    """Canonical sort key for listing sets: the tuple of point indices."""
    return mask.indices()


@dataclass(frozen=True)
class SigmaAlgebra:
    """Sigma-algebra on a finite ground set, stored as its atom partition.

    Atoms are pairwise disjoint, nonempty, cover the ground set, and are
    kept sorted by least point index, so structural equality is canonical.
    A set is measurable exactly when it is a union of atoms.
    """

    ground: GroundSet
    atoms: tuple[SubsetMask, ...]

    def __post_init__(self):
        atoms = tuple(self.atoms)
        union = 0
        for atom in atoms:
            if atom.ground != self.ground:
                raise GroundMismatchError("atom over a different ground set")
            if atom.bits == 0:
                raise InputFormatError("atoms must be nonempty")
            if union & atom.bits:
                raise InputFormatError("atoms must be pairwise disjoint")
            union |= atom.bits
        if union != (1 << self.ground.size) - 1:
            raise InputFormatError("atoms must cover the ground set")
        object.__setattr__(
            self, "atoms", tuple(sorted(atoms, key=lambda a: a.bits & -a.bits))
        )

    @classmethod
    def discrete(cls, ground: GroundSet) -> "SigmaAlgebra":
        return cls(ground, tuple(SubsetMask(ground, 1 << i) for i in range(ground.size)))

    @classmethod
    def trivial(cls, ground: GroundSet) -> "SigmaAlgebra":
        if ground.size == 0:
            return cls(ground, ())
        return cls(ground, (ground.full,))

    @property
    def n_sets(self) -> int:
        return 1 << len(self.atoms)

    @property
    def is_discrete(self) -> bool:
        """True when all singletons are measurable."""
        return all(atom.size == 1 for atom in self.atoms)

    def member(self, s: SubsetMask) -> bool:
        """True iff ``s`` is a union of atoms."""
        if s.ground != self.ground:
            raise GroundMismatchError("set over a different ground set")
        for atom in self.atoms:
            inter = atom.bits & s.bits
            if inter and inter != atom.bits:
                return False
        return True

    def require_member(self, s: SubsetMask) -> None:
        if not self.member(s):
            raise NotMeasurableError(f"set {s!r} is not measurable")

    def sets(self) -> Iterator[SubsetMask]:
        """All measurable sets (unions of atoms), 2**n_atoms of them."""
        atom_bits = [atom.bits for atom in self.atoms]
        for combo in range(1 << len(atom_bits)):
            bits = 0
            for k, b in enumerate(atom_bits):
                if combo >> k & 1:
                    bits |= b
            yield SubsetMask(self.ground, bits)

    def sorted_sets(self) -> list[SubsetMask]:
        return sorted(self.sets(), key=mask_key)

    def atoms_within(self, s: SubsetMask) -> tuple[SubsetMask, ...]:
        return tuple(a for a in self.atoms if a.bits & ~s.bits == 0)

    def atom_containing(self, label: str) -> SubsetMask:
        bit = 1 << self.ground.index(label)
        for atom in self.atoms:
            if atom.bits & bit:
                return atom
        raise AssertionError("atoms cover the ground set")

    def __repr__(self) -> str:
        return "SigmaAlgebra[%s]" % "|".join(repr(a) for a in self.atoms)


def generate_sigma_algebra(
    ground: GroundSet, generators: Iterable[SubsetMask]
) -> SigmaAlgebra:
    """Smallest sigma-algebra containing the generators, in atom form.

    Two points land in the same atom exactly when no generator separates
    them, so the atoms are the blocks of the common refinement of the
    generators and their complements.
    """
    gens = list(generators)
    for g in gens:
        if g.ground != ground:
            raise GroundMismatchError("generator over a different ground set")
    blocks: dict[tuple[int, ...], int] = {}
    for i in range(ground.size):
        signature = tuple(g.bits >> i & 1 for g in gens)
        blocks[signature] = blocks.get(signature, 0) | (1 << i)
    atoms = tuple(SubsetMask(ground, bits) for bits in blocks.values())
    return SigmaAlgebra(ground, atoms)


def transfer_mask(mask: SubsetMask, target: GroundSet) -> SubsetMask:
    """Re-express a mask over another ground set containing its labels."""
    bits = 0
    for label in mask.labels():
        bits |= 1 << target.index(label)
    return SubsetMask(target, bits)


def trace_algebra(
    algebra: SigmaAlgebra, x: SubsetMask, target: GroundSet | None = None
) -> SigmaAlgebra:
    """The induced sigma-algebra {C intersect X : C measurable} on X.

    Its atoms are the nonempty intersections of the atoms with ``x``.
    ``target`` fixes the label order of the result (defaults to the order
    inherited from the ambient ground set).
    """
    if x.ground != algebra.ground:
        raise GroundMismatchError("trace set over a different ground set")
    if target is None:
        target = GroundSet(x.labels())
    atoms = []
    for atom in algebra.atoms:
        inter = atom & x
        if inter:
            atoms.append(transfer_mask(inter, target))
    return SigmaAlgebra(target, tuple(atoms))


@dataclass(frozen=True)
class MeasureSpace:
    """A sigma-algebra plus one extended-rational value per atom.

    Finite additivity is forced by the representation; on finite spaces
    countable additivity coincides with it.  The empty set has measure 0
    by construction.
    """

    algebra: SigmaAlgebra
    atom_values: tuple[ExtReal, ...]

    def __post_init__(self):
        values = tuple(ExtReal.of(v) for v in self.atom_values)
        if len(values) != len(self.algebra.atoms):
            raise InputFormatError(
                f"need one value per atom: {len(values)} values for "
                f"{len(self.algebra.atoms)} atoms"
            )
        object.__setattr__(self, "atom_values", values)

    @property
    def ground(self) -> GroundSet:
        return self.algebra.ground

    def measure_of(self, s: SubsetMask) -> ExtReal:
        """Sum of atom values over atoms contained in ``s``; inf absorbs."""
        self.algebra.require_member(s)
        total = ZERO
        for atom, value in zip(self.algebra.atoms, self.atom_values):
            if atom.bits & ~s.bits == 0:
                total = total + value
        return total

    def outer_measure(self, s: SubsetMask) -> ExtReal:
        """min over measurable C >= s of the measure of C.

        ``s`` need not be measurable.  Computed by exhaustive scan over
        the finite algebra; the minimum is attained.
        """
        if s.ground != self.ground:
            raise GroundMismatchError("set over a different ground set")
        return min(
            self.measure_of(c) for c in self.algebra.sets() if s.bits & ~c.bits == 0
        )

    def inner_measure(self, s: SubsetMask) -> ExtReal:
        """max over measurable C <= s of the measure of C."""
        if s.ground != self.ground:
            raise GroundMismatchError("set over a different ground set")
        return max(
            self.measure_of(c) for c in self.algebra.sets() if c.bits & ~s.bits == 0
        )

    def is_thick(self, x: SubsetMask) -> bool:
        """True iff the complement of ``x`` has inner measure zero.

        Equivalently: every measurable set disjoint from ``x`` is null,
        i.e. ``x`` has full outer measure.
        """
        return self.inner_measure(x.complement()) == ZERO

    @property
    def total(self) -> ExtReal:
        return self.measure_of(self.ground.full)

    @property
    def is_sigma_finite(self) -> bool:
        """True iff the ground set is a union of finite-measure sets.

        On a finite space that is equivalent to every atom carrying a
        finite value.  Reported, never required: products accept
        non-sigma-finite factors under the 0 * inf = 0 convention.
        """
        return all(not v.is_infinite for v in self.atom_values)

    def null_sets_cover_ground(self) -> bool:
        """True iff the union of all null measurable sets is the ground set."""
        bits = 0
        for atom, value in zip(self.algebra.atoms, self.atom_values):
            if value == ZERO:
                bits |= atom.bits
        return bits == (1 << self.ground.size) - 1

    def __repr__(self) -> str:
        pairs = ", ".join(
            f"{a!r}:{v}" for a, v in zip(self.algebra.atoms, self.atom_values)
        )
        return f"MeasureSpace({pairs})"


def all_sigma_algebras(ground: GroundSet) -> Iterator[SigmaAlgebra]:
    """Every sigma-algebra on the ground set, one per set partition."""
    for blocks in set_partitions(range(ground.size)):
        atoms = tuple(
            SubsetMask(ground, sum(1 << i for i in block)) for block in blocks
        )
        yield SigmaAlgebra(ground, atoms)
