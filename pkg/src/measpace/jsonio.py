"""Canonical JSON for spaces, families, kits, and decompositions.

Canonical form: object keys sorted, points in declared order, set lists
sorted by point indices, measure values as exact strings ("1", "2/3",
"inf"), two-space indentation, trailing newline.  Everything the CLI
emits re-parses to an identical value.
"""
from __future__ import annotations

import json
from typing import Any

from .core import (
    ExtReal,
    GroundSet,
    MeasureSpace,
    SigmaAlgebra,
    SubsetMask,
    mask_key,
)
from .embeddings import DecompositionRecord, ExtensionKit
from .errors import InputFormatError
from .filters import SetFamily, UltrafilterRecord, classify_family
from .products import ProductSpace, product_space


def canonical_dumps(obj: Any) -> str:
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


# ---------------------------------------------------------------- values

def value_to_str(value: ExtReal) -> str:
    return str(value)


def value_from_obj(raw: Any) -> ExtReal:
    if isinstance(raw, float):
        raise InputFormatError(
            f"floating point value {raw!r}: use exact strings like \"1/3\""
        )
    return ExtReal.of(raw)


# ---------------------------------------------------------------- masks

def labels_list(mask: SubsetMask) -> list[str]:
    return list(mask.labels())


def _string_list(raw: Any, what: str) -> list[str]:
    if not isinstance(raw, list) or not all(isinstance(s, str) for s in raw):
        raise InputFormatError(f"{what} must be a list of strings")
    return raw


def mask_from_obj(ground: GroundSet, raw: Any, what: str = "set") -> SubsetMask:
    return ground.mask(_string_list(raw, what))


# ---------------------------------------------------------------- spaces

def algebra_to_obj(algebra: SigmaAlgebra) -> dict:
    return {
        "points": list(algebra.ground.labels),
        "atoms": [labels_list(a) for a in algebra.atoms],
    }


def space_to_obj(ms: MeasureSpace) -> dict:
    obj = algebra_to_obj(ms.algebra)
    obj["values"] = [value_to_str(v) for v in ms.atom_values]
    return obj


def algebra_from_obj(raw: Any, what: str = "space") -> SigmaAlgebra:
    if not isinstance(raw, dict):
        raise InputFormatError(f"{what} must be a JSON object")
    ground = GroundSet(tuple(_string_list(raw.get("points"), f"{what}.points")))
    atoms_raw = raw.get("atoms")
    if not isinstance(atoms_raw, list):
        raise InputFormatError(f"{what}.atoms must be a list of label lists")
    atoms = tuple(
        mask_from_obj(ground, a, f"{what}.atoms[{i}]") for i, a in enumerate(atoms_raw)
    )
    return SigmaAlgebra(ground, atoms)


def space_from_obj(raw: Any, what: str = "space") -> MeasureSpace:
    algebra = algebra_from_obj(raw, what)
    values_raw = raw.get("values")
    if not isinstance(values_raw, list):
        raise InputFormatError(f"{what}.values must be a list")
    if len(values_raw) != len(raw["atoms"]):
        raise InputFormatError(f"{what}.values must match the atoms one to one")
    # values are paired with atoms as written, then stored canonically
    ground = algebra.ground
    pairs = {
        mask_from_obj(ground, a, f"{what}.atoms"): value_from_obj(v)
        for a, v in zip(raw["atoms"], values_raw)
    }
    return MeasureSpace(algebra, tuple(pairs[a] for a in algebra.atoms))


def optional_space_from_obj(raw: Any, what: str = "space"):
    """MeasureSpace when "values" is present, else SigmaAlgebra."""
    if isinstance(raw, dict) and "values" in raw:
        return space_from_obj(raw, what)
    return algebra_from_obj(raw, what)


# ---------------------------------------------------------------- families

def family_to_obj(family: SetFamily, space_obj: dict | None = None) -> dict:
    return {
        "space": space_obj if space_obj is not None else algebra_to_obj(family.algebra),
        "members": [labels_list(m) for m in family.sorted_members()],
    }


def family_from_obj(raw: Any) -> tuple[SetFamily, MeasureSpace | None]:
    """Parse a family; the embedded space may optionally carry values."""
    if not isinstance(raw, dict):
        raise InputFormatError("family must be a JSON object")
    loaded = optional_space_from_obj(raw.get("space"), "family.space")
    ms = loaded if isinstance(loaded, MeasureSpace) else None
    algebra = loaded.algebra if ms is not None else loaded
    members_raw = raw.get("members")
    if not isinstance(members_raw, list):
        raise InputFormatError("family.members must be a list of label lists")
    members = frozenset(
        mask_from_obj(algebra.ground, m, "family.members") for m in members_raw
    )
    return SetFamily(algebra, members), ms


def record_to_obj(record: UltrafilterRecord, space_obj: dict | None = None) -> dict:
    obj = family_to_obj(record.family, space_obj)
    obj["kernel"] = labels_list(record.kernel)
    obj["flags"] = {
        "is_filter_base": record.is_filter_base,
        "is_filter": record.is_filter,
        "is_ultrafilter": record.is_ultrafilter,
        "has_cip": record.has_cip,
        "is_free": record.is_free,
    }
    return obj


def record_from_obj(raw: Any) -> tuple[UltrafilterRecord, MeasureSpace | None]:
    """Parse a family or record; flags are recomputed, never trusted."""
    family, ms = family_from_obj(raw)
    record = classify_family(family)
    if "kernel" in raw and set(raw["kernel"]) != set(record.kernel.labels()):
        raise InputFormatError("stored kernel does not match the family")
    return record, ms


# ---------------------------------------------------------------- kits

def _mask_dict_key(mask: SubsetMask) -> str:
    return ",".join(mask.labels())


def _mask_from_dict_key(ground: GroundSet, key: str) -> SubsetMask:
    return ground.mask(key.split(",") if key else [])


def kit_to_obj(kit: ExtensionKit) -> dict:
    dfamily = {
        _mask_dict_key(b): [labels_list(d) for d in sorted(ds, key=mask_key)]
        for b, ds in kit.dfamily.items()
    }
    fibers = {
        _mask_dict_key(kernel): list(labels)
        for kernel, labels in kit.fibers.items()
    }
    return {
        "base": space_to_obj(kit.base),
        "pasted": algebra_to_obj(kit.pasted),
        "dfamily": dfamily,
        "fibers": fibers,
    }


def kit_from_obj(raw: Any) -> ExtensionKit:
    if not isinstance(raw, dict):
        raise InputFormatError("kit must be a JSON object")
    base = space_from_obj(raw.get("base"), "kit.base")
    pasted = algebra_from_obj(raw.get("pasted"), "kit.pasted")
    dfamily_raw = raw.get("dfamily")
    if not isinstance(dfamily_raw, dict):
        raise InputFormatError("kit.dfamily must be an object keyed by base sets")
    dfamily = {}
    for key, ds in dfamily_raw.items():
        b = _mask_from_dict_key(base.ground, key)
        if not isinstance(ds, list):
            raise InputFormatError(f"kit.dfamily[{key!r}] must be a list of label lists")
        dfamily[b] = frozenset(
            mask_from_obj(pasted.ground, d, f"kit.dfamily[{key!r}]") for d in ds
        )
    fibers_raw = raw.get("fibers")
    if not isinstance(fibers_raw, dict):
        raise InputFormatError("kit.fibers must be an object keyed by kernels")
    fibers = {
        _mask_from_dict_key(base.ground, key): tuple(
            _string_list(labels, f"kit.fibers[{key!r}]")
        )
        for key, labels in fibers_raw.items()
    }
    return ExtensionKit(base, pasted, dfamily, fibers)


def decomposition_to_obj(record: DecompositionRecord) -> dict:
    obj = kit_to_obj(record.kit)
    obj["z_part"] = labels_list(record.z_part)
    assignment = {}
    for label in sorted(record.point_assignment):
        pa = record.point_assignment[label]
        if pa.kind == "pasted":
            assignment[label] = "pasted"
        else:
            assignment[label] = {"sticks_to": labels_list(pa.kernel)}
    obj["point_assignment"] = assignment
    obj["form"] = "point" if record.point_form else "ultrafilter"
    return obj


# ---------------------------------------------------------------- products

def product_to_obj(ps: ProductSpace) -> dict:
    obj = space_to_obj(ps.product)
    obj["factors"] = {"left": space_to_obj(ps.left), "right": space_to_obj(ps.right)}
    return obj


def product_from_obj(raw: Any) -> ProductSpace:
    """Rebuild a product from its factors; the composite must match."""
    if not isinstance(raw, dict) or not isinstance(raw.get("factors"), dict):
        raise InputFormatError("product space needs a \"factors\" object")
    left = space_from_obj(raw["factors"].get("left"), "factors.left")
    right = space_from_obj(raw["factors"].get("right"), "factors.right")
    ps = product_space(left, right)
    declared = space_from_obj(raw, "product")
    if declared != ps.product:
        raise InputFormatError("declared product does not match its factors")
    return ps
