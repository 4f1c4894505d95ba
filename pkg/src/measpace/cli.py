"""Command-line surface: every library operation over JSON files.

Exit codes: 0 success (or a check that came back true), 1 a check that
came back false, 2 malformed input or violated precondition.  Output is
always canonical JSON on stdout (or ``--out``); errors are emitted as
{"error": {"code", "message", "path"}}.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import jsonio
from .core import ZERO, GroundSet, generate_sigma_algebra, mask_key
from .embeddings import (
    classify_outside_points,
    construct_extension,
    decompose_extension,
    enumerate_extensions,
    measure_embedding_report,
    validate_kit,
)
from .errors import InputFormatError, MeaspaceError
from .filters import (
    ZeroOneMeasure,
    classify_family,
    enumerate_ultrafilters,
    extend_to_ultrafilter,
    measure_from_ultrafilter,
    ultrafilter_from_01_measure,
)
from .products import lift_ultrafilter, product_space, project_ultrafilter, y_section


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse would exit(2) with plain text
        raise InputFormatError(message)


def _read_json(path: str):
    try:
        text = sys.stdin.read() if path == "-" else Path(path).read_text()
    except OSError as exc:
        err = InputFormatError(f"cannot read {path}: {exc.strerror or exc}")
        err.path = path
        raise err from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        err = InputFormatError(f"not valid JSON: {exc}")
        err.path = path
        raise err from None


def _load(path: str, loader):
    raw = _read_json(path)
    try:
        return loader(raw)
    except MeaspaceError as exc:
        exc.path = path
        raise


def _set_arg(args) -> list[str]:
    try:
        labels = json.loads(args.set)
    except json.JSONDecodeError:
        raise InputFormatError("--set must be a JSON array of labels") from None
    if not isinstance(labels, list) or not all(isinstance(s, str) for s in labels):
        raise InputFormatError("--set must be a JSON array of labels")
    return labels


# ------------------------------------------------------------- handlers

def _cmd_generate(args):
    raw = _read_json(args.space)
    if not isinstance(raw, dict):
        raise InputFormatError("generate input must be a JSON object")
    ground = GroundSet(tuple(jsonio._string_list(raw.get("points"), "points")))
    gens_raw = raw.get("generators", [])
    if not isinstance(gens_raw, list):
        raise InputFormatError("generators must be a list of label lists")
    gens = [jsonio.mask_from_obj(ground, g, "generators") for g in gens_raw]
    return 0, jsonio.algebra_to_obj(generate_sigma_algebra(ground, gens))


def _cmd_atoms(args):
    loaded = _load(args.space, jsonio.optional_space_from_obj)
    if hasattr(loaded, "atom_values"):
        return 0, jsonio.space_to_obj(loaded)
    return 0, jsonio.algebra_to_obj(loaded)


def _measure_like(args, op):
    ms = _load(args.space, jsonio.space_from_obj)
    s = ms.ground.mask(_set_arg(args))
    return 0, {"value": jsonio.value_to_str(op(ms, s))}


def _cmd_measure(args):
    return _measure_like(args, lambda ms, s: ms.measure_of(s))


def _cmd_inner(args):
    return _measure_like(args, lambda ms, s: ms.inner_measure(s))


def _cmd_outer(args):
    return _measure_like(args, lambda ms, s: ms.outer_measure(s))


def _cmd_thick(args):
    ms = _load(args.space, jsonio.space_from_obj)
    x = ms.ground.mask(_set_arg(args))
    if ms.is_thick(x):
        return 0, {"ok": True}
    witness = next(
        c
        for c in sorted(ms.algebra.sets(), key=mask_key)
        if c.issubset(x.complement()) and ms.measure_of(c) != ZERO
    )
    return 1, {"ok": False, "witness": jsonio.labels_list(witness)}


def _cmd_ultrafilters(args):
    loaded = _load(args.space, jsonio.optional_space_from_obj)
    if hasattr(loaded, "atom_values"):
        space_obj, algebra = jsonio.space_to_obj(loaded), loaded.algebra
    else:
        space_obj, algebra = jsonio.algebra_to_obj(loaded), loaded
    records = enumerate_ultrafilters(algebra)
    items = []
    for record in records:
        obj = jsonio.record_to_obj(record)
        del obj["space"]
        items.append(obj)
    return 0, {"space": space_obj, "count": len(items), "ultrafilters": items}


def _cmd_classify_family(args):
    family, ms = _load(args.space, jsonio.family_from_obj)
    record = classify_family(family)
    space_obj = jsonio.space_to_obj(ms) if ms is not None else None
    return 0, jsonio.record_to_obj(record, space_obj)


def _cmd_extend_uf(args):
    family, ms = _load(args.space, jsonio.family_from_obj)
    record = extend_to_ultrafilter(family)
    space_obj = jsonio.space_to_obj(ms) if ms is not None else None
    return 0, jsonio.record_to_obj(record, space_obj)


def _cmd_uf_to_measure(args):
    record, _ = _load(args.space, jsonio.record_from_obj)
    zm = measure_from_ultrafilter(record)
    return 0, jsonio.space_to_obj(zm.ms)


def _cmd_measure_to_uf(args):
    ms = _load(args.space, jsonio.space_from_obj)
    record = ultrafilter_from_01_measure(ZeroOneMeasure(ms))
    return 0, jsonio.record_to_obj(record, jsonio.space_to_obj(ms))


def _cmd_check_embed(args):
    small = _load(args.small, jsonio.space_from_obj)
    big = _load(args.big, jsonio.space_from_obj)
    report = measure_embedding_report(small, big)
    if report.ok:
        return 0, {"ok": True}
    return 1, {
        "ok": False,
        "reason": report.reason,
        "witness": jsonio.labels_list(report.witness),
    }


def _cmd_decompose(args):
    big = _load(args.big, jsonio.space_from_obj)
    x = big.ground.mask(_set_arg(args))
    return 0, jsonio.decomposition_to_obj(decompose_extension(big, x))


def _cmd_construct(args):
    kit = _load(args.kit, jsonio.kit_from_obj)
    return 0, jsonio.space_to_obj(construct_extension(kit))


def _cmd_validate_kit(args):
    kit = _load(args.kit, jsonio.kit_from_obj)
    problems = validate_kit(kit)
    if problems:
        return 1, {"ok": False, "problems": problems}
    return 0, {"ok": True}


def _cmd_enumerate_extensions(args):
    base = _load(args.space, jsonio.space_from_obj)
    extras = [s for s in (args.extra or "").split(",") if s]
    spaces = enumerate_extensions(base, extras)
    return 0, {
        "count": len(spaces),
        "extensions": [jsonio.space_to_obj(ms) for ms in spaces],
    }


def _cmd_classify_points(args):
    big = _load(args.big, jsonio.space_from_obj)
    x = big.ground.mask(_set_arg(args))
    classes = classify_outside_points(big, x)
    out = {}
    for label in sorted(classes):
        cls = classes[label]
        if cls.kind == "sticks_to":
            out[label] = {"sticks_to": list(cls.anchors)}
        else:
            out[label] = cls.kind
    return 0, out


def _cmd_product(args):
    left = _load(args.small, jsonio.space_from_obj)
    right = _load(args.big, jsonio.space_from_obj)
    return 0, jsonio.product_to_obj(product_space(left, right))


def _cmd_section(args):
    ps = _load(args.space, jsonio.product_from_obj)
    s = ps.product.ground.mask(_set_arg(args))
    section = y_section(ps, s, args.point)
    return 0, {"section": jsonio.labels_list(section)}


def _cmd_lift_uf(args):
    family, ms = _load(args.space, jsonio.family_from_obj)
    if ms is None:
        raise InputFormatError("lift-uf needs measure values on the ultrafilter's space")
    right = _load(args.big, jsonio.space_from_obj)
    ps = product_space(ms, right)
    record = classify_family(family)
    lifted = lift_ultrafilter(ps, record, args.point)
    return 0, jsonio.record_to_obj(lifted, jsonio.product_to_obj(ps))


def _cmd_project_uf(args):
    raw = _read_json(args.space)
    if not isinstance(raw, dict):
        raise InputFormatError("project-uf input must be a JSON object")
    try:
        ps = jsonio.product_from_obj(raw.get("space"))
        record, _ = jsonio.record_from_obj(raw)
    except MeaspaceError as exc:
        exc.path = args.space
        raise
    left, right = project_ultrafilter(ps, record)
    return 0, {
        "left": jsonio.record_to_obj(left, jsonio.space_to_obj(ps.left)),
        "right": jsonio.record_to_obj(right, jsonio.space_to_obj(ps.right)),
    }


_VERBS = {
    "generate": (_cmd_generate, ["space"]),
    "atoms": (_cmd_atoms, ["space"]),
    "measure": (_cmd_measure, ["space", "set"]),
    "inner": (_cmd_inner, ["space", "set"]),
    "outer": (_cmd_outer, ["space", "set"]),
    "thick": (_cmd_thick, ["space", "set"]),
    "ultrafilters": (_cmd_ultrafilters, ["space"]),
    "classify-family": (_cmd_classify_family, ["space"]),
    "extend-uf": (_cmd_extend_uf, ["space"]),
    "uf-to-measure": (_cmd_uf_to_measure, ["space"]),
    "measure-to-uf": (_cmd_measure_to_uf, ["space"]),
    "check-embed": (_cmd_check_embed, ["small", "big"]),
    "decompose": (_cmd_decompose, ["big", "set"]),
    "construct": (_cmd_construct, ["kit"]),
    "validate-kit": (_cmd_validate_kit, ["kit"]),
    "enumerate-extensions": (_cmd_enumerate_extensions, ["space", "extra"]),
    "classify-points": (_cmd_classify_points, ["big", "set"]),
    "product": (_cmd_product, ["small", "big"]),
    "section": (_cmd_section, ["space", "set", "point"]),
    "lift-uf": (_cmd_lift_uf, ["space", "big", "point"]),
    "project-uf": (_cmd_project_uf, ["space"]),
}

_FLAG_HELP = {
    "space": "path to the verb's primary JSON input ('-' for stdin)",
    "small": "path to the small/left space",
    "big": "path to the big/right space",
    "kit": "path to an extension-kit JSON file",
    "set": "JSON array of point labels",
    "point": "a single point label",
    "extra": "comma-separated fresh labels (may be empty)",
}


def _parser() -> _Parser:
    parser = _Parser(prog="measpace", description=__doc__)
    sub = parser.add_subparsers(dest="verb", required=True)
    for verb, (_, flags) in _VERBS.items():
        p = sub.add_parser(verb)
        for flag in flags:
            required = flag != "extra"
            p.add_argument(f"--{flag}", required=required, help=_FLAG_HELP[flag])
        p.add_argument("--out", help="write output to this path instead of stdout")
    return parser


def _emit(payload: dict, out: str | None) -> None:
    text = jsonio.canonical_dumps(payload)
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def run(argv: list[str]) -> int:
    """Execute one verb; returns the process exit code."""
    out = None
    try:
        args = _parser().parse_args(argv)
        out = args.out
        handler, _ = _VERBS[args.verb]
        code, payload = handler(args)
    except MeaspaceError as exc:
        error = {
            "error": {
                "code": exc.code,
                "message": str(exc),
                "path": getattr(exc, "path", None),
            }
        }
        sys.stdout.write(jsonio.canonical_dumps(error))
        return 2
    _emit(payload, out)
    return code


def main(argv: list[str] | None = None) -> int:
    return run(sys.argv[1:] if argv is None else argv)


if __name__ == "__main__":
    raise SystemExit(main())
