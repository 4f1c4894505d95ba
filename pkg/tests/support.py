"""Shared builders and independent oracles for the test suite.

The oracles here intentionally avoid the library's own code paths: set
families are plain frozensets of bitmasks, partitions are enumerated via
restricted growth strings, and closure is computed by fixpoint iteration.
They exist so constructive results can be checked against brute force.
"""
from __future__ import annotations

from itertools import product as iproduct

from measpace import GroundSet, MeasureSpace, SigmaAlgebra


def G(*labels):
    return GroundSet(tuple(labels))


def alg(ground, *atom_groups):
    return SigmaAlgebra(ground, tuple(ground.mask(g) for g in atom_groups))


def space(ground, atom_groups, values):
    return MeasureSpace(alg(ground, *atom_groups), tuple(values))


def bits_of(ground, labels):
    return ground.mask(labels).bits


# ------------------------------------------------------------- oracles

def closure_oracle(n_points: int, generator_bits: list[int]) -> set[int]:
    """Brute-force sigma-algebra closure over all subsets of an n-point set.

    Starts from the generators, closes under complement and binary union
    until a fixpoint; countable unions reduce to binary ones finitely.
    """
    full = (1 << n_points) - 1
    family = {0, full} | set(generator_bits)
    while True:
        new = set()
        for a in family:
            new.add(a ^ full)
            for b in family:
                new.add(a | b)
        if new <= family:
            return family
        family |= new


def atoms_of_family(n_points: int, family: set[int]) -> set[int]:
    """Minimal nonempty members of a closed family."""
    atoms = set()
    for a in family:
        if a and not any(b and b != a and b | a == a for b in family):
            atoms.add(a)
    return atoms


def brute_force_ultrafilters(set_bits: list[int]) -> list[frozenset[int]]:
    """Every ultrafilter of a finite algebra, by scanning up-closed families.

    ``set_bits`` lists all measurable sets.  A family (subset of the
    algebra, encoded as an index bitmap) survives when it is up-closed,
    is a filter-base, and contains every measurable set that meets all of
    its members.
    """
    m = len(set_bits)
    supersets = []
    for i, s in enumerate(set_bits):
        sup = 0
        for j, t in enumerate(set_bits):
            if s | t == t:
                sup |= 1 << j
        supersets.append(sup)

    found = []
    for fam in range(1, 1 << m):
        # up-closed: every member's supersets are members
        probe = fam
        up_closed = True
        while probe:
            i = (probe & -probe).bit_length() - 1
            probe &= probe - 1
            if supersets[i] & ~fam:
                up_closed = False
                break
        if not up_closed:
            continue
        members = [set_bits[i] for i in range(m) if fam >> i & 1]
        if not _is_filter_base(members):
            continue
        if all(
            b in members or not all(b & a for a in members) for b in set_bits
        ):
            found.append(frozenset(members))
    return found


def _is_filter_base(members: list[int]) -> bool:
    return bool(members) and all(
        any(c and c | (a & b) == a & b for c in members)
        for a in members
        for b in members
    )


def has_cip_oracle(members: frozenset[int], full: int) -> bool:
    """Direct definition: every nonempty subfamily has nonempty intersection."""
    pool = list(members)
    for k in range(1 << len(pool)):
        if k == 0:
            continue
        inter = full
        for i, m in enumerate(pool):
            if k >> i & 1:
                inter &= m
        if inter == 0:
            return False
    return True


def rgs_partitions(n: int):
    """Set partitions of range(n) via restricted growth strings.

    Independent of measpace.partitions: a string a_0..a_{n-1} with a_0=0
    and a_i <= max(previous)+1 encodes which block each element joins.
    """
    if n == 0:
        yield ()
        return
    code = [0] * n

    def rec(i, top):
        if i == n:
            blocks = [[] for _ in range(top + 1)]
            for j, c in enumerate(code):
                blocks[c].append(j)
            yield tuple(tuple(b) for b in blocks)
            return
        for c in range(top + 2):
            code[i] = c
            yield from rec(i + 1, max(top, c))

    yield from rec(1, 0)


def family_of_algebra_bits(atom_bits: list[int]) -> set[int]:
    """All unions of atoms, as raw bitmasks."""
    out = set()
    for combo in range(1 << len(atom_bits)):
        bits = 0
        for k, a in enumerate(atom_bits):
            if combo >> k & 1:
                bits |= a
        out.add(bits)
    return out


def trace_family(family_bits: set[int], x_bits: int) -> set[int]:
    return {c & x_bits for c in family_bits}


def count_extensions_oracle(base: MeasureSpace, n_extra: int) -> int:
    """Independent count of σ-algebras on X + extras whose trace is the base.

    Uses restricted-growth-string partitions and set-of-sets trace
    comparison (never the library's partition generator or atom-level
    trace), so it can referee ``enumerate_extensions``.
    """
    nx = base.ground.size
    n = nx + n_extra
    x_bits = (1 << nx) - 1
    base_family = trace_family(
        family_of_algebra_bits([a.bits for a in base.algebra.atoms]), x_bits
    )
    count = 0
    for blocks in rgs_partitions(n):
        atom_bits = [sum(1 << i for i in blk) for blk in blocks]
        fam = family_of_algebra_bits(atom_bits)
        if trace_family(fam, x_bits) == base_family:
            count += 1
    return count


def all_value_tuples(n_atoms: int, choices):
    yield from iproduct(choices, repeat=n_atoms)
