"""JSON descriptions of carriers, extensions, crossed data, and diagrams.

Every CLI input travels as a JSON document.  A structure document is either a
pair of explicit finite tables or a reference into the builder registry; maps
between described structures are named ("identity", "zero",
"unit-normalization") or given by an image table.  Extensions, crossed
structures, and admissibility diagrams are nested documents built from those
two primitives.

Elements are serialized per carrier codec: finite elements by name, naturals
as integers, free words as strings, rationals as "p/q" text, complex and
quaternion values as coefficient objects, pairs as two-element arrays.  All
parse failures raise DescriptionError so the command line can map them to a
dedicated exit status.
"""

from __future__ import annotations

import json
from typing import Callable, Optional

from .core import (
    ConjStructure,
    DescriptionError,
    EnumerationPlan,
    Hom,
    Law,
    identity_hom,
    zero_hom,
)
from .exact import (
    GaussianRational,
    KEPoint,
    Q,
    RationalQuaternion,
    exact_sqrt,
    ke_point,
    parse_rational,
    rational_text,
)
from .builders import build_named_structure
from .schreier import (
    SchreierExtension,
    direct_product_extension,
    find_schreier_retraction,
    finite_semidirect_extension,
    make_action,
    quaternion_conjugation_extension,
    semidirect,
    trivial_action,
)
from .crossed import CrossedData, make_crossed
from .admissibility import (
    AdmissibilityDiagram,
    admissibility_family,
    composition_diagram,
    congruence_from_normal_subgroup,
    normal_subgroups,
    relation_diagram,
)

__all__ = [
    "load_document",
    "parse_structure",
    "structure_to_doc",
    "parse_map",
    "parse_extension",
    "parse_crossed",
    "parse_diagram",
    "encode_element",
    "decode_element",
    "decode_witness",
    "normalize_to_unit",
    "EXTENSION_BUILDERS",
    "CROSSED_BUILDERS",
]


def load_document(path: str) -> dict:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise DescriptionError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise DescriptionError(f"{path} is not valid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise DescriptionError(f"{path}: top-level document must be an object")
    return doc


def _require(doc: dict, field: str, where: str):
    if field not in doc:
        raise DescriptionError(f"{where}: missing field {field!r}")
    return doc[field]


def _kind_of(doc, where: str) -> str:
    if not isinstance(doc, dict):
        raise DescriptionError(f"{where}: expected an object, got {type(doc).__name__}")
    kind = _require(doc, "kind", where)
    if not isinstance(kind, str):
        raise DescriptionError(f"{where}: 'kind' must be a string")
    return kind


# -- element codecs ---------------------------------------------------------


def _decode_rational(doc, where: str) -> Q:
    if isinstance(doc, bool) or not isinstance(doc, (str, int)):
        raise DescriptionError(f"{where}: expected a rational as 'p/q' text or integer")
    try:
        return parse_rational(str(doc))
    except (ValueError, ZeroDivisionError) as exc:
        raise DescriptionError(f"{where}: bad rational {doc!r}: {exc}") from exc


def _decode_gaussian(doc, where: str) -> GaussianRational:
    if not isinstance(doc, dict):
        raise DescriptionError(f"{where}: complex value must be an object with 're'/'im'")
    return GaussianRational(
        _decode_rational(_require(doc, "re", where), where),
        _decode_rational(_require(doc, "im", where), where),
    )


def _decode_quaternion(doc, where: str) -> RationalQuaternion:
    if not isinstance(doc, dict):
        raise DescriptionError(f"{where}: quaternion value must be an object with 'a'..'d'")
    return RationalQuaternion(
        *(_decode_rational(_require(doc, field, where), where) for field in "abcd")
    )


def encode_element(S: ConjStructure, x) -> object:
    """Serialize one element of S as a JSON value."""
    codec = S.codec
    if codec == "pair" and len(S.components) == 2:
        left, right = S.components
        return [encode_element(left, x[0]), encode_element(right, x[1])]
    if codec == "rational":
        return rational_text(x)
    if codec == "gaussian":
        return {"re": rational_text(x.re), "im": rational_text(x.im)}
    if codec == "quaternion":
        return {
            "a": rational_text(x.a),
            "b": rational_text(x.b),
            "c": rational_text(x.c),
            "d": rational_text(x.d),
        }
    if codec == "kepoint":
        return {"scale": rational_text(x.alpha), "vector": [rational_text(c) for c in x.u]}
    if codec == "natural":
        return int(x)
    if codec == "word":
        return str(x)
    # finite table-backed carriers: element names are canonical
    if isinstance(x, int) and S.names is not None and 0 <= x < len(S.names):
        return S.names[x]
    return x


def decode_element(S: ConjStructure, doc) -> object:
    """Parse a JSON value back into an element of S, validating membership."""
    where = S.name
    codec = S.codec
    if codec == "pair" and len(S.components) == 2:
        if not isinstance(doc, list) or len(doc) != 2:
            raise DescriptionError(f"{where}: pair element must be a two-entry array")
        left, right = S.components
        return (decode_element(left, doc[0]), decode_element(right, doc[1]))
    if codec == "rational":
        x = _decode_rational(doc, where)
    elif codec == "gaussian":
        x = _decode_gaussian(doc, where)
    elif codec == "quaternion":
        x = _decode_quaternion(doc, where)
    elif codec == "kepoint":
        if not isinstance(doc, dict):
            raise DescriptionError(f"{where}: expected an object with 'scale'/'vector'")
        vector = _require(doc, "vector", where)
        if not isinstance(vector, list):
            raise DescriptionError(f"{where}: 'vector' must be an array")
        x = ke_point(
            len(vector),
            _decode_rational(_require(doc, "scale", where), where),
            tuple(_decode_rational(c, where) for c in vector),
        )
    elif codec == "natural":
        if isinstance(doc, bool) or not isinstance(doc, int) or doc < 0:
            raise DescriptionError(f"{where}: expected a non-negative integer")
        x = doc
    elif codec == "word":
        if not isinstance(doc, str):
            raise DescriptionError(f"{where}: expected a word as a string")
        x = doc
    else:
        x = _decode_finite(S, doc)
    if S.contains is not None and not S.contains(x):
        raise DescriptionError(f"{where}: {S.fmt(x)} is outside the carrier")
    return x


def _decode_finite(S: ConjStructure, doc) -> int:
    if S.elements is None:
        raise DescriptionError(f"{S.name}: cannot decode {doc!r} without a finite table")
    if isinstance(doc, str):
        if S.names is None:
            raise DescriptionError(f"{S.name}: carrier has no element names")
        try:
            return S.names.index(doc)
        except ValueError:
            raise DescriptionError(
                f"{S.name}: unknown element {doc!r} (names: {', '.join(S.names)})"
            ) from None
    if isinstance(doc, bool) or not isinstance(doc, int):
        raise DescriptionError(f"{S.name}: expected an element name or index, got {doc!r}")
    if not 0 <= doc < len(S.elements):
        raise DescriptionError(f"{S.name}: element index {doc} out of range")
    return S.elements[doc]


def decode_witness(law: Law, doc) -> tuple:
    """Parse a replay witness (JSON array) against the law's element spaces."""
    if law.spaces is None or len(law.spaces) == 0:
        raise DescriptionError(f"law {law.name!r} takes no witness")
    if not isinstance(doc, list):
        raise DescriptionError("witness must be a JSON array of elements")
    if len(doc) != len(law.spaces):
        raise DescriptionError(
            f"law {law.name!r} needs {len(law.spaces)} elements, got {len(doc)}"
        )
    return tuple(decode_element(space, entry) for space, entry in zip(law.spaces, doc))


# -- structures -------------------------------------------------------------


def _decode_table_entry(entry, names: Optional[tuple], n: int, where: str) -> int:
    if isinstance(entry, str):
        if names is None:
            raise DescriptionError(f"{where}: name {entry!r} used without an element list")
        try:
            return names.index(entry)
        except ValueError:
            raise DescriptionError(f"{where}: unknown element {entry!r}") from None
    if isinstance(entry, bool) or not isinstance(entry, int):
        raise DescriptionError(f"{where}: table entry {entry!r} is not a name or index")
    if not 0 <= entry < n:
        raise DescriptionError(f"{where}: index {entry} out of range for {n} elements")
    return entry


def parse_structure(doc: dict, where: str = "structure") -> ConjStructure:
    kind = _kind_of(doc, where)
    if kind == "builder":
        name = _require(doc, "name", where)
        params = doc.get("params", {})
        if not isinstance(params, dict):
            raise DescriptionError(f"{where}: 'params' must be an object")
        return build_named_structure(name, params)
    if kind != "finite":
        raise DescriptionError(f"{where}: unknown structure kind {kind!r}")

    name = doc.get("name", "described")
    elements = _require(doc, "elements", where)
    if not isinstance(elements, list) or not all(isinstance(e, str) for e in elements):
        raise DescriptionError(f"{where}: 'elements' must be an array of names")
    if len(set(elements)) != len(elements):
        raise DescriptionError(f"{where}: element names must be distinct")
    names = tuple(elements)
    n = len(names)
    op_doc = _require(doc, "op", where)
    conj_doc = _require(doc, "conj", where)
    if not isinstance(op_doc, list) or any(not isinstance(row, list) for row in op_doc):
        raise DescriptionError(f"{where}: 'op' must be an array of rows")
    if len(op_doc) != n or any(len(row) != n for row in op_doc):
        raise DescriptionError(f"{where}: 'op' must be {n}x{n}")
    if not isinstance(conj_doc, list) or len(conj_doc) != n:
        raise DescriptionError(f"{where}: 'conj' must list {n} entries")
    op_table = [
        [_decode_table_entry(v, names, n, f"{where}.op") for v in row] for row in op_doc
    ]
    conj_table = [_decode_table_entry(v, names, n, f"{where}.conj") for v in conj_doc]
    identity = None
    if "identity" in doc:
        identity = _decode_table_entry(doc["identity"], names, n, f"{where}.identity")
    return ConjStructure.from_tables(
        str(name), op_table, conj_table, identity=identity, names=names,
        kind=doc.get("kind_tag"),
    )


def structure_to_doc(S: ConjStructure) -> dict:
    """Emit the explicit-table document for a finite carrier."""
    if S.op_table is None or S.conj_table is None:
        raise DescriptionError(f"{S.name}: only table-backed carriers serialize to documents")
    names = S.names or tuple(str(i) for i in range(len(S.elements)))
    doc = {
        "kind": "finite",
        "name": S.name,
        "elements": list(names),
        "op": [[names[v] for v in row] for row in S.op_table],
        "conj": [names[v] for v in S.conj_table],
    }
    if S.identity is not None:
        doc["identity"] = names[S.identity]
    return doc


# -- maps between described structures --------------------------------------


def normalize_to_unit(x):
    """Scale a nonzero complex or quaternion value to norm one.

    Only defined when the norm is itself rational; carriers that admit this
    map keep their elements inside the rational-norm locus.
    """
    root = exact_sqrt(x.norm2())
    if root is None or root == 0:
        raise DescriptionError(f"element {x} has no exact unit normalization")
    return x.scale(Q(1) / root)


def parse_map(spec, source: ConjStructure, target: ConjStructure, label: str) -> Hom:
    if isinstance(spec, str):
        if spec == "identity":
            same = source is target
            if not same and source.op_table is not None:
                same = (
                    source.op_table == target.op_table
                    and source.conj_table == target.conj_table
                )
            elif not same:
                same = source.name == target.name and source.kind == target.kind
            if not same:
                raise DescriptionError(f"{label}: identity map needs equal source and target")
            return Hom(source, target, lambda x: x, name=label)
        if spec == "zero":
            return zero_hom(source, target, name=label)
        if spec == "unit-normalization":
            return Hom(source, target, normalize_to_unit, name=label)
        raise DescriptionError(f"{label}: unknown named map {spec!r}")
    if isinstance(spec, dict) and "table" in spec:
        spec = spec["table"]
    if not isinstance(spec, list):
        raise DescriptionError(f"{label}: map must be a name or an image table")
    if source.elements is None:
        raise DescriptionError(f"{label}: image tables need a finite source")
    if len(spec) != len(source.elements):
        raise DescriptionError(
            f"{label}: {len(spec)} images for {len(source.elements)} elements"
        )
    images = [decode_element(target, entry) for entry in spec]
    return Hom.from_table(source, target, images, name=label)


# -- extensions --------------------------------------------------------------


def _ext_direct_product(params: dict, plan: EnumerationPlan) -> SchreierExtension:
    X = parse_structure(_require(params, "kernel", "direct-product"), "kernel")
    B = parse_structure(_require(params, "base", "direct-product"), "base")
    return direct_product_extension(X, B, plan)


def _ext_semidirect_tables(params: dict, plan: EnumerationPlan) -> SchreierExtension:
    X = parse_structure(_require(params, "kernel", "semidirect-tables"), "kernel")
    B = parse_structure(_require(params, "base", "semidirect-tables"), "base")
    action_doc = _require(params, "action", "semidirect-tables")
    if X.elements is None or B.elements is None:
        raise DescriptionError("semidirect-tables: carriers must be finite")
    if not isinstance(action_doc, list) or len(action_doc) != len(B.elements):
        raise DescriptionError("semidirect-tables: 'action' needs one row per base element")
    rows = []
    for b, row in enumerate(action_doc):
        if not isinstance(row, list) or len(row) != len(X.elements):
            raise DescriptionError(f"semidirect-tables: action row {b} has wrong length")
        rows.append([_decode_finite(X, entry) for entry in row])
    return finite_semidirect_extension(X, B, rows, plan)


def _ext_complex_disk(params: dict, plan: EnumerationPlan) -> SchreierExtension:
    from .builders import gaussian_disk_rational_norm, unit_circle_group

    bound = params.get("bound", 12)
    X = gaussian_disk_rational_norm(bound)
    B = unit_circle_group(bound)
    return semidirect(trivial_action(B, X, plan), plan)


def _ext_natural_pairs(params: dict, plan: EnumerationPlan) -> SchreierExtension:
    from .builders import natural_numbers

    X = natural_numbers(params.get("conj", "zero"))
    B = natural_numbers(params.get("conj", "zero"))
    return semidirect(trivial_action(B, X, plan), plan)


def _ext_quaternion(params: dict, plan: EnumerationPlan) -> SchreierExtension:
    return quaternion_conjugation_extension(plan, bound=params.get("bound", 6))


EXTENSION_BUILDERS: dict[str, Callable[[dict, EnumerationPlan], SchreierExtension]] = {
    "direct-product": _ext_direct_product,
    "semidirect-tables": _ext_semidirect_tables,
    "complex-disk": _ext_complex_disk,
    "natural-pairs": _ext_natural_pairs,
    "quaternion-conjugation": _ext_quaternion,
}


def parse_extension(doc: dict, plan: EnumerationPlan, where: str = "extension") -> SchreierExtension:
    kind = _kind_of(doc, where)
    if kind == "extension-builder":
        name = _require(doc, "name", where)
        factory = EXTENSION_BUILDERS.get(name)
        if factory is None:
            known = ", ".join(sorted(EXTENSION_BUILDERS))
            raise DescriptionError(f"{where}: unknown extension builder {name!r} (known: {known})")
        params = doc.get("params", {})
        if not isinstance(params, dict):
            raise DescriptionError(f"{where}: 'params' must be an object")
        return factory(params, plan)
    if kind != "extension-tables":
        raise DescriptionError(f"{where}: unknown extension kind {kind!r}")
    X = parse_structure(_require(doc, "kernel", where), f"{where}.kernel")
    A = parse_structure(_require(doc, "total", where), f"{where}.total")
    B = parse_structure(_require(doc, "base", where), f"{where}.base")
    k = parse_map(_require(doc, "k", where), X, A, "k")
    f = parse_map(_require(doc, "f", where), A, B, "f")
    r = parse_map(_require(doc, "r", where), B, A, "r")
    q = parse_map(doc["q"], A, X, "q") if "q" in doc else None
    return find_schreier_retraction(k, f, r, plan, q=q)


# -- crossed structures ------------------------------------------------------


def _crossed_scaled_quaternions(params: dict, plan: EnumerationPlan) -> CrossedData:
    e = quaternion_conjugation_extension(plan, bound=params.get("bound", 6))
    h = Hom(e.X, e.B, normalize_to_unit, name="unit-normalization")
    return make_crossed(e, h, plan)


def _crossed_quaternion_zero_base(params: dict, plan: EnumerationPlan) -> CrossedData:
    from .builders import quaternion_group_q8, trivial_monoid

    X = quaternion_group_q8()
    B = trivial_monoid()
    e = direct_product_extension(X, B, plan)
    return make_crossed(e, zero_hom(X, B, name="collapse"), plan)


def _crossed_cyclic_identity(params: dict, plan: EnumerationPlan) -> CrossedData:
    from .builders import cyclic_group

    order = params.get("order", 3)
    X = cyclic_group(order)
    B = cyclic_group(order)
    e = direct_product_extension(X, B, plan)
    h = Hom.from_table(X, B, list(B.elements), name="relabel")
    return make_crossed(e, h, plan)


def _crossed_complex_disk(params: dict, plan: EnumerationPlan) -> CrossedData:
    e = _ext_complex_disk(params, plan)
    h = Hom(e.X, e.B, normalize_to_unit, name="unit-normalization")
    return make_crossed(e, h, plan)


def _crossed_natural_pairs(params: dict, plan: EnumerationPlan) -> CrossedData:
    e = _ext_natural_pairs(params, plan)
    h = Hom(e.X, e.B, lambda x: x, name="identity")
    return make_crossed(e, h, plan)


CROSSED_BUILDERS: dict[str, Callable[[dict, EnumerationPlan], CrossedData]] = {
    "scaled-quaternions": _crossed_scaled_quaternions,
    "quaternion-zero-base": _crossed_quaternion_zero_base,
    "cyclic-identity": _crossed_cyclic_identity,
    "complex-disk": _crossed_complex_disk,
    "natural-pairs": _crossed_natural_pairs,
}


def parse_crossed(doc: dict, plan: EnumerationPlan, where: str = "crossed") -> CrossedData:
    kind = _kind_of(doc, where)
    if kind == "crossed-builder":
        name = _require(doc, "name", where)
        factory = CROSSED_BUILDERS.get(name)
        if factory is None:
            known = ", ".join(sorted(CROSSED_BUILDERS))
            raise DescriptionError(f"{where}: unknown crossed builder {name!r} (known: {known})")
        params = doc.get("params", {})
        if not isinstance(params, dict):
            raise DescriptionError(f"{where}: 'params' must be an object")
        return factory(params, plan)
    if kind != "crossed":
        raise DescriptionError(f"{where}: unknown crossed kind {kind!r}")
    e = parse_extension(_require(doc, "extension", where), plan, f"{where}.extension")
    h = parse_map(_require(doc, "boundary", where), e.X, e.B, "boundary")
    return make_crossed(e, h, plan)


# -- admissibility diagrams --------------------------------------------------


def _diagram_tables(doc: dict, plan: EnumerationPlan, where: str) -> AdmissibilityDiagram:
    corners = {}
    for corner in ("A", "B", "C", "D"):
        corners[corner] = parse_structure(_require(doc, corner, where), f"{where}.{corner}")
    A, B, C, D = corners["A"], corners["B"], corners["C"], corners["D"]
    return AdmissibilityDiagram(
        A=A, B=B, C=C, D=D,
        f=parse_map(_require(doc, "f", where), A, B, "f"),
        r=parse_map(_require(doc, "r", where), B, A, "r"),
        g=parse_map(_require(doc, "g", where), C, B, "g"),
        s=parse_map(_require(doc, "s", where), B, C, "s"),
        alpha=parse_map(_require(doc, "alpha", where), A, D, "alpha"),
        beta=parse_map(_require(doc, "beta", where), B, D, "beta"),
        gamma=parse_map(_require(doc, "gamma", where), C, D, "gamma"),
        name=str(doc.get("name", "described diagram")),
    )


def _diagram_family(params: dict, plan: EnumerationPlan) -> AdmissibilityDiagram:
    index = params.get("index", 0)
    family = admissibility_family()
    if not isinstance(index, int) or not 0 <= index < len(family):
        raise DescriptionError(f"family index must lie in 0..{len(family) - 1}")
    return family[index]


def _diagram_relations(params: dict, plan: EnumerationPlan) -> AdmissibilityDiagram:
    X = parse_structure(_require(params, "object", "diagram-relations"), "object")
    subgroups = {tuple(sorted(n)): n for n in normal_subgroups(X)}

    def pick(field: str):
        chosen = _require(params, field, "diagram-relations")
        if not isinstance(chosen, list):
            raise DescriptionError(f"diagram-relations: {field!r} must list subgroup elements")
        members = tuple(sorted(_decode_finite(X, entry) for entry in chosen))
        if members not in subgroups:
            raise DescriptionError(
                f"diagram-relations: {field!r} is not a normal subgroup of {X.name}"
            )
        return subgroups[members]

    R = congruence_from_normal_subgroup(X, pick("first"), name="first")
    S = congruence_from_normal_subgroup(X, pick("second"), name="second")
    return relation_diagram(R, S)


def _diagram_composition(params: dict, plan: EnumerationPlan) -> AdmissibilityDiagram:
    d = parse_crossed(_require(params, "crossed", "diagram-composition"), plan, "crossed")
    return composition_diagram(d)


def parse_diagram(doc: dict, plan: EnumerationPlan, where: str = "diagram") -> AdmissibilityDiagram:
    kind = _kind_of(doc, where)
    if kind == "diagram-tables":
        return _diagram_tables(doc, plan, where)
    builders = {
        "diagram-family": _diagram_family,
        "diagram-relations": _diagram_relations,
        "diagram-composition": _diagram_composition,
    }
    factory = builders.get(kind)
    if factory is None:
        known = ", ".join(sorted(["diagram-tables", *builders]))
        raise DescriptionError(f"{where}: unknown diagram kind {kind!r} (known: {known})")
    params = doc.get("params", {})
    if not isinstance(params, dict):
        raise DescriptionError(f"{where}: 'params' must be an object")
    return factory(params, plan)
