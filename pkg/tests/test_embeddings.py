"""Embedding checks, extension kits, decomposition, enumeration oracle."""
from itertools import product as iproduct

import pytest

from measpace import (
    ExtensionKit,
    GroundMismatchError,
    GroundSet,
    INFINITY,
    InvalidKitError,
    MeasureSpace,
    ONE,
    PreconditionError,
    SigmaAlgebra,
    SizeCapError,
    ZERO,
    all_sigma_algebras,
    check_measurable_embedding,
    check_measure_embedding,
    check_thickness_equivalence,
    classify_outside_points,
    construct_extension,
    decompose_extension,
    enumerate_extensions,
    full_dfamily,
    identity_kit,
    measure_embedding_report,
    validate_kit,
)

from support import G, alg, count_extensions_oracle, space


# ------------------------------------------------------------- embedding checks

def test_check_measurable_embedding_examples():
    small = alg(G("a"), ["a"])
    big = alg(G("a", "p"), ["a", "p"])
    assert check_measurable_embedding(small, big)

    small2 = alg(G("a", "b"), ["a", "b"])
    big2 = alg(G("a", "b"), ["a"], ["b"])
    assert not check_measurable_embedding(small2, big2)  # trace too fine

    small3 = alg(G("a", "b"), ["a"], ["b"])
    big3 = alg(G("a", "b"), ["a", "b"])
    assert not check_measurable_embedding(small3, big3)  # trace too coarse

    with pytest.raises(GroundMismatchError):
        check_measurable_embedding(alg(G("x"), ["x"]), big)


def test_check_measure_embedding_examples():
    small = space(G("a"), (["a"],), (1,))
    big = space(G("a", "p"), (["a", "p"],), (1,))
    assert check_measure_embedding(small, big)

    big_bad = space(G("a", "p"), (["a", "p"],), (2,))
    report = measure_embedding_report(small, big_bad)
    assert not report.ok and report.reason == "measure-mismatch"
    assert report.witness.labels() == ("a", "p")

    big_split = space(G("a", "p"), (["a"], ["p"]), (1, 0))
    assert check_measure_embedding(small, big_split)  # all 4 big sets agree


def test_thickness_equivalence_examples():
    small = space(G("a"), (["a"],), (1,))
    big = space(G("a", "p"), (["a", "p"],), (1,))
    assert check_thickness_equivalence(small, big)

    # X not thick here, and no base measure embeds: both sides false
    big2 = space(G("a", "p"), (["a"], ["p"]), (0, 1))
    for v in (0, 1, 2, "inf"):
        small_v = space(G("a"), (["a"],), (v,))
        assert not check_measure_embedding(small_v, big2)
        assert check_thickness_equivalence(small_v, big2)

    assert check_thickness_equivalence(small, small)  # degenerate X = Y


# ------------------------------------------------------------- kits

def one_point_base(value=1):
    return space(G("a"), (["a"],), (value,))


def z_algebra():
    g = GroundSet(("z",))
    return SigmaAlgebra(g, (g.full,))


def test_validate_kit_examples():
    base = one_point_base()
    pasted = z_algebra()
    ok_kit = ExtensionKit(
        base, pasted, full_dfamily(base.algebra, pasted), {base.algebra.atoms[0]: ("p",)}
    )
    assert validate_kit(ok_kit) == []

    only_empty = {
        b: frozenset({pasted.ground.empty}) for b in base.algebra.sets()
    }
    bad_condition2 = ExtensionKit(base, pasted, only_empty, {})
    problems = validate_kit(bad_condition2)
    assert any("complement" in p for p in problems)

    collision = ExtensionKit(
        base, pasted, full_dfamily(base.algebra, pasted), {base.algebra.atoms[0]: ("z",)}
    )
    assert any("collides" in p for p in validate_kit(collision))


def test_validate_kit_more_violations():
    base = one_point_base()
    pasted = z_algebra()
    incomplete = ExtensionKit(
        base, pasted, {base.ground.full: frozenset({pasted.ground.full})}, {}
    )
    problems = validate_kit(incomplete)
    assert any("no pasted family" in p for p in problems)

    missing_empty = ExtensionKit(
        base,
        pasted,
        {
            base.ground.empty: frozenset({pasted.ground.full}),
            base.ground.full: frozenset({pasted.ground.empty}),
        },
        {},
    )
    assert any("empty pasted set" in p for p in validate_kit(missing_empty))

    not_atom = ExtensionKit(
        base,
        pasted,
        full_dfamily(base.algebra, pasted),
        {base.ground.empty: ("p",)},
    )
    assert any("not an atom" in p for p in validate_kit(not_atom))


def test_pairwise_condition3_detected():
    # empty-set and complement conditions hold, only the union condition
    # fails: selecting {z} for the empty base set and nothing for {b}
    # produces {z}, which the family of {b} lacks
    base = space(G("a", "b"), (["a"], ["b"]), (1, 1))
    pasted = z_algebra()
    zg = pasted.ground
    dfam = {
        base.ground.empty: frozenset({zg.empty, zg.full}),
        base.ground.mask(["a"]): frozenset({zg.full}),
        base.ground.mask(["b"]): frozenset({zg.empty}),
        base.ground.full: frozenset({zg.empty, zg.full}),
    }
    problems = validate_kit(ExtensionKit(base, pasted, dfam, {}))
    assert problems and all("union" in p for p in problems)


def test_kit_with_two_pasted_points_roundtrips():
    base = space(G("a", "b"), (["a"], ["b"]), (1, 1))
    g = GroundSet(("w", "z"))
    pasted = SigmaAlgebra(g, (g.singleton("z"), g.singleton("w")))
    d = {m.labels(): m for m in pasted.sets()}
    dfam = {
        base.ground.empty: frozenset({d[()]}),
        base.ground.mask(["a"]): frozenset({d[("z",)]}),
        base.ground.mask(["b"]): frozenset({d[("w",)]}),
        base.ground.full: frozenset({d[("w", "z")]}),
    }
    kit = ExtensionKit(base, pasted, dfam, {})
    assert validate_kit(kit) == []
    ext = construct_extension(kit)
    assert [a.labels() for a in ext.algebra.atoms] == [("a", "z"), ("b", "w")]
    rec = decompose_extension(ext, ext.ground.mask(["a", "b"]))
    assert construct_extension(rec.kit) == ext


def test_construct_identity_kit():
    base = space(G("a", "b"), (["a"], ["b"]), ("1/2", "inf"))
    assert construct_extension(identity_kit(base)) == base


def test_construct_single_fiber():
    base = one_point_base()
    pasted = SigmaAlgebra(GroundSet(()), ())
    kit = ExtensionKit(
        base,
        pasted,
        {b: frozenset({pasted.ground.empty}) for b in base.algebra.sets()},
        {base.algebra.atoms[0]: ("p",)},
    )
    ext = construct_extension(kit)
    assert ext.ground.labels == ("a", "p")
    assert [a.labels() for a in ext.algebra.atoms] == [("a", "p")]
    assert ext.atom_values == (ONE,)


def test_construct_pasted_point():
    base = one_point_base()
    pasted = z_algebra()
    kit = ExtensionKit(base, pasted, full_dfamily(base.algebra, pasted), {})
    ext = construct_extension(kit)
    assert ext.ground.labels == ("a", "z")
    assert [a.labels() for a in ext.algebra.atoms] == [("a",), ("z",)]
    assert ext.atom_values == (ONE, ZERO)


def test_construct_rejects_invalid():
    base = one_point_base()
    pasted = z_algebra()
    bad = ExtensionKit(
        base, pasted, {b: frozenset({pasted.ground.empty}) for b in base.algebra.sets()}, {}
    )
    with pytest.raises(InvalidKitError) as err:
        construct_extension(bad)
    assert err.value.problems


# ------------------------------------------------------------- decomposition

def test_decompose_fiber_example():
    big = space(G("a", "p"), (["a", "p"],), (1,))
    rec = decompose_extension(big, big.ground.mask(["a"]))
    assert rec.z_part == big.ground.empty
    assert {k.labels(): v for k, v in rec.kit.fibers.items()} == {("a",): ("p",)}
    assert all(ds == frozenset({rec.kit.pasted.ground.empty}) for ds in rec.kit.dfamily.values())
    assert rec.point_form


def test_decompose_pasted_example():
    big = space(G("a", "z"), (["a"], ["z"]), (1, 0))
    rec = decompose_extension(big, big.ground.mask(["a"]))
    assert rec.z_part.labels() == ("z",)
    assert rec.kit.fibers == {}
    zg = rec.kit.pasted.ground
    both = frozenset({zg.empty, zg.full})
    base_g = rec.kit.base.ground
    assert rec.kit.dfamily[base_g.empty] == both
    assert rec.kit.dfamily[base_g.full] == both
    assert rec.point_assignment["z"].kind == "pasted"


def test_decompose_identity_example():
    big = space(G("a", "b"), (["a"], ["b"]), (1, 2))
    rec = decompose_extension(big, big.ground.full)
    assert rec.z_part == big.ground.empty
    assert rec.kit.fibers == {}
    assert rec.kit.pasted.ground.size == 0
    assert construct_extension(rec.kit) == big


def test_decompose_requires_embedding():
    big = space(G("a", "z"), (["a"], ["z"]), (1, 1))  # z not null: X does not embed
    with pytest.raises(PreconditionError):
        decompose_extension(big, big.ground.mask(["a"]))


def test_decompose_ultrafilter_form_for_non_separating_base():
    # atom {a,b} has two points: the fiber kernel is not a singleton
    big = space(G("a", "b", "p"), (["a", "b", "p"],), (1,))
    rec = decompose_extension(big, big.ground.mask(["a", "b"]))
    assert not rec.point_form
    (kernel,) = rec.kit.fibers
    assert kernel.labels() == ("a", "b")
    assert construct_extension(rec.kit) == big


# ------------------------------------------------------------- classification

def test_classify_outside_points_examples():
    big = space(G("a", "p"), (["a", "p"],), (1,))
    out = classify_outside_points(big, big.ground.mask(["a"]))
    assert out["p"].kind == "sticks_to" and out["p"].anchors == ("a",)

    big2 = space(G("a", "z"), (["a"], ["z"]), (1, 0))
    out2 = classify_outside_points(big2, big2.ground.mask(["a"]))
    assert out2["z"].kind == "pasted"


def test_no_finite_extension_has_separated_points():
    # exhaustive over all bases on <= 3 points and extensions by <= 2 points
    for n in range(1, 4):
        g = GroundSet(tuple("abc"[:n]))
        for algebra in all_sigma_algebras(g):
            base = MeasureSpace(algebra, tuple(ONE for _ in algebra.atoms))
            for extras in ([], ["p"], ["p", "q"]):
                for ext in enumerate_extensions(base, extras):
                    x = ext.ground.mask(base.ground.labels)
                    for cls in classify_outside_points(ext, x).values():
                        assert cls.kind in ("pasted", "sticks_to")


# ------------------------------------------------------------- enumeration

def test_enumerate_examples():
    base = one_point_base()
    assert len(enumerate_extensions(base, ["p"])) == 2
    assert len(enumerate_extensions(base, ["p", "q"])) == 5

    base2 = space(G("a", "b"), (["a", "b"],), (1,))
    exts = enumerate_extensions(base2, [])
    assert len(exts) == 1 and exts[0] == base2


def test_enumerate_matches_independent_oracle():
    for n in range(1, 4):
        g = GroundSet(tuple("abc"[:n]))
        for algebra in all_sigma_algebras(g):
            base = MeasureSpace(algebra, tuple(ONE for _ in algebra.atoms))
            for extras in ([], ["p"], ["p", "q"]):
                got = enumerate_extensions(base, extras)
                assert len(got) == count_extensions_oracle(base, len(extras))
                assert len(set(got)) == len(got)


def test_enumerate_guards():
    base = one_point_base()
    with pytest.raises(SizeCapError):
        enumerate_extensions(base, [f"p{i}" for i in range(8)])
    with pytest.raises(Exception):
        enumerate_extensions(base, ["a"])  # not fresh
    with pytest.raises(Exception):
        enumerate_extensions(base, ["p", "p"])  # duplicate


def test_empty_base_space():
    # the empty space embeds exactly into the all-null spaces
    empty = MeasureSpace(SigmaAlgebra(GroundSet(()), ()), ())
    exts = enumerate_extensions(empty, ["p", "q"])
    assert len(exts) == 2
    for ext in exts:
        assert all(v == ZERO for v in ext.atom_values)
        rec = decompose_extension(ext, ext.ground.empty)
        assert all(pa.kind == "pasted" for pa in rec.point_assignment.values())
        assert construct_extension(rec.kit) == ext


def test_lambda_forced_and_thick_in_every_extension():
    values = (ZERO, ONE, INFINITY)
    for atoms in [(["a"],), (["a", "b"],), (["a"], ["b"])]:
        labels = sorted({l for grp in atoms for l in grp})
        g = GroundSet(tuple(labels))
        for vals in iproduct(values, repeat=len(atoms)):
            base = space(g, atoms, vals)
            for ext in enumerate_extensions(base, ["p", "q"]):
                x = ext.ground.mask(base.ground.labels)
                assert ext.is_thick(x)
                assert check_measure_embedding(base, ext)
                # the measure is pinned per atom by its X-part
                for atom, value in zip(ext.algebra.atoms, ext.atom_values):
                    from measpace import transfer_mask

                    assert value == base.measure_of(
                        transfer_mask(atom & x, base.ground)
                    )


# ------------------------------------------------------------- round trip

def test_roundtrip_all_small_extensions():
    for n in range(1, 4):
        g = GroundSet(tuple("abc"[:n]))
        for algebra in all_sigma_algebras(g):
            base = MeasureSpace(
                algebra, tuple(ExtReal_cycle(i) for i in range(len(algebra.atoms)))
            )
            for extras in ([], ["p"], ["p", "q"]):
                for ext in enumerate_extensions(base, extras):
                    rec = decompose_extension(ext, ext.ground.mask(base.ground.labels))
                    assert rec.kit.base == base
                    assert construct_extension(rec.kit) == ext


def ExtReal_cycle(i):
    from measpace import ExtReal

    return (ZERO, ONE, ExtReal.of(2), INFINITY)[i % 4]
