"""Mesh and descriptor files: JSON in canonical form plus a minimal OFF reader."""

from __future__ import annotations

import json
from importlib import resources
from pathlib import Path
from typing import Any

import numpy as np

from .bounds import DescriptorError, ManifoldDescriptor
from .complex import ComplexError, OrientationError, SimplicialComplex, fundamental_class
from .metric import MetricComplex, MetricError


class MeshFormatError(ValueError):
    """Malformed mesh input; the message names the offending key or line."""


def _load_json(text: str, source: str) -> Any:
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise MeshFormatError(f"{source}: invalid JSON at line {exc.lineno}, "
                              f"column {exc.colno}: {exc.msg}") from None


def _int_list(value: Any, path: str) -> tuple[int, ...]:
    if not isinstance(value, list) or not all(isinstance(v, int) and not isinstance(v, bool)
                                              for v in value):
        raise MeshFormatError(f"{path}: expected a list of integers")
    return tuple(value)


def mesh_from_dict(doc: Any, source: str = "<mesh>") -> MetricComplex:
    if not isinstance(doc, dict):
        raise MeshFormatError(f"{source}: top level must be an object")
    missing = [k for k in ("dimension", "simplices") if k not in doc]
    if missing:
        raise MeshFormatError(f"{source}: missing key(s) {', '.join(missing)}")
    extra = set(doc) - {"dimension", "vertices", "edge_lengths", "simplices", "flags"}
    if extra:
        raise MeshFormatError(f"{source}: unknown key(s) {', '.join(sorted(extra))}")
    n = doc["dimension"]
    if not isinstance(n, int) or n < 1:
        raise MeshFormatError(f"{source}: dimension must be a positive integer")
    verts, lengths = doc.get("vertices"), doc.get("edge_lengths")
    if (verts is None) == (lengths is None):
        raise MeshFormatError(f"{source}: exactly one of 'vertices' and 'edge_lengths' must be given")
    simp = doc["simplices"]
    if not isinstance(simp, dict):
        raise MeshFormatError(f"{source}: simplices must be an object keyed by degree")
    listed: list[tuple[int, ...]] = []
    for key, items in simp.items():
        if not key.isdigit() or int(key) > n:
            raise MeshFormatError(f"{source}: simplices key {key!r} is not a degree in 0..{n}")
        if not isinstance(items, list):
            raise MeshFormatError(f"{source}: simplices.{key} must be a list")
        for i, s in enumerate(items):
            s = _int_list(s, f"{source}: simplices.{key}[{i}]")
            if len(s) != int(key) + 1:
                raise MeshFormatError(f"{source}: simplices.{key}[{i}] has {len(s)} vertices")
            if min(s) < 0:
                raise MeshFormatError(f"{source}: simplices.{key}[{i}] has a negative index")
            listed.append(s)
    if str(n) not in simp or not simp[str(n)]:
        raise MeshFormatError(f"{source}: simplices.{n} (top simplices) is empty")
    flags = doc.get("flags") or {}
    if not isinstance(flags, dict) or set(flags) - {"closed_pseudomanifold", "orientable"}:
        raise MeshFormatError(f"{source}: flags may only hold closed_pseudomanifold and orientable")
    closed = bool(flags.get("closed_pseudomanifold", False))
    vcount = None
    coords = None
    if verts is not None:
        if not isinstance(verts, list) or not all(isinstance(v, list) for v in verts):
            raise MeshFormatError(f"{source}: vertices must be a list of coordinate lists")
        try:
            coords = np.array(verts, dtype=float)
        except ValueError:
            raise MeshFormatError(f"{source}: vertices must have equal length numeric rows") from None
        if coords.ndim != 2:
            raise MeshFormatError(f"{source}: vertices must have equal length numeric rows")
        vcount = len(coords)
        top = max(max(s) for s in listed)
        if top >= vcount:
            raise MeshFormatError(f"{source}: simplex vertex index {top} out of range "
                                  f"(only {vcount} vertices)")
    try:
        K = SimplicialComplex.from_simplices(listed, closed_pseudomanifold=closed,
                                             vertex_count=vcount)
    except ComplexError as exc:
        raise MeshFormatError(f"{source}: simplices: {exc}") from None
    if K.dimension != n:
        raise MeshFormatError(f"{source}: dimension {n} does not match simplices ({K.dimension})")
    edge_map = None
    if lengths is not None:
        if not isinstance(lengths, dict):
            raise MeshFormatError(f"{source}: edge_lengths must be an object keyed 'i-j'")
        edge_map = {}
        for key, val in lengths.items():
            parts = key.split("-")
            if len(parts) != 2 or not all(x.isdigit() for x in parts):
                raise MeshFormatError(f"{source}: edge_lengths key {key!r} is not of the form 'i-j'")
            if not isinstance(val, (int, float)) or isinstance(val, bool):
                raise MeshFormatError(f"{source}: edge_lengths[{key!r}] must be a number")
            a, b = sorted(int(x) for x in parts)
            edge_map[(a, b)] = float(val)
        unknown = set(edge_map) - set(K.simplices[1])
        if unknown:
            raise MeshFormatError(f"{source}: edge_lengths has edge {min(unknown)} not in the complex")
    try:
        M = MetricComplex(K, edge_map, coords)
    except (MetricError, ComplexError) as exc:
        raise MeshFormatError(f"{source}: {exc}") from None
    if "orientable" in flags and closed:
        try:
            fundamental_class(K)
            orientable = True
        except OrientationError:
            orientable = False
        if orientable != bool(flags["orientable"]):
            raise MeshFormatError(f"{source}: flags.orientable={flags['orientable']} but the complex "
                                  f"is {'orientable' if orientable else 'non-orientable'}")
    return M


def mesh_to_dict(M: MetricComplex) -> dict[str, Any]:
    """Canonical document: every face listed, sorted, with lengths or coordinates."""
    K = M.complex
    doc: dict[str, Any] = {"dimension": K.dimension}
    if M.vertex_coords is not None:
        doc["vertices"] = [[float(x) for x in row] for row in M.vertex_coords]
        doc["edge_lengths"] = None
    else:
        doc["vertices"] = None
        doc["edge_lengths"] = {f"{a}-{b}": float(length)
                               for (a, b), length in zip(K.simplices[1], M.edge_lengths)}
    doc["simplices"] = {str(p): [list(s) for s in K.simplices[p]] for p in range(K.dimension + 1)}
    flags: dict[str, bool] = {"closed_pseudomanifold": K.closed_pseudomanifold}
    if K.closed_pseudomanifold:
        try:
            fundamental_class(K)
            flags["orientable"] = True
        except OrientationError:
            flags["orientable"] = False
    doc["flags"] = flags
    return doc


def dumps(doc: Any) -> str:
    return json.dumps(doc, indent=2, sort_keys=True, allow_nan=False) + "\n"


def read_mesh(path: str | Path) -> MetricComplex:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise MeshFormatError(f"{path}: {exc.strerror}") from None
    if path.suffix.lower() == ".off":
        return parse_off(text, str(path))
    return mesh_from_dict(_load_json(text, str(path)), str(path))


def write_mesh(M: MetricComplex, path: str | Path) -> None:
    Path(path).write_text(dumps(mesh_to_dict(M)))


def parse_off(text: str, source: str = "<off>") -> MetricComplex:
    """Minimal OFF reader: vertex coordinates and simplicial faces of equal size."""
    lines = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        body = raw.split("#", 1)[0].strip()
        if body:
            lines.append((lineno, body))
    if not lines or not lines[0][1].startswith("OFF"):
        raise MeshFormatError(f"{source}: line 1: missing OFF header")
    head = lines[0][1][3:].split()
    rest = lines[1:]
    if not head:
        if not rest:
            raise MeshFormatError(f"{source}: missing counts line")
        (lineno, body), rest = rest[0], rest[1:]
        head = body.split()
    else:
        lineno = lines[0][0]
    try:
        nv, nf = int(head[0]), int(head[1])
    except (IndexError, ValueError):
        raise MeshFormatError(f"{source}: line {lineno}: expected 'nv nf ne' counts") from None
    if len(rest) < nv + nf:
        raise MeshFormatError(f"{source}: expected {nv} vertices and {nf} faces, file is truncated")
    coords = []
    for lineno, body in rest[:nv]:
        try:
            coords.append([float(x) for x in body.split()])
        except ValueError:
            raise MeshFormatError(f"{source}: line {lineno}: bad vertex coordinates") from None
    if len({len(c) for c in coords}) != 1:
        raise MeshFormatError(f"{source}: vertices have differing coordinate counts")
    faces = []
    for lineno, body in rest[nv:nv + nf]:
        try:
            vals = [int(x) for x in body.split()]
        except ValueError:
            raise MeshFormatError(f"{source}: line {lineno}: bad face record") from None
        if not vals or len(vals) < vals[0] + 1:
            raise MeshFormatError(f"{source}: line {lineno}: face record shorter than its count")
        face = vals[1:vals[0] + 1]
        if any(not 0 <= v < nv for v in face):
            raise MeshFormatError(f"{source}: line {lineno}: vertex index out of range")
        faces.append(tuple(face))
    if len({len(f) for f in faces}) != 1:
        raise MeshFormatError(f"{source}: faces must all be simplices of one size")
    try:
        K = SimplicialComplex.from_simplices(faces, vertex_count=nv)
        closed = all(np.count_nonzero(row) == 2 for row in K.boundary_matrix(K.dimension))
        if closed:
            K = SimplicialComplex.from_simplices(faces, vertex_count=nv, closed_pseudomanifold=True)
        return MetricComplex(K, None, np.array(coords))
    except (MetricError, ComplexError) as exc:
        raise MeshFormatError(f"{source}: {exc}") from None


def read_descriptor(path: str | Path) -> ManifoldDescriptor:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise DescriptorError(f"{path}: {exc.strerror}") from None
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DescriptorError(f"{path}: invalid JSON at line {exc.lineno}: {exc.msg}") from None
    try:
        return ManifoldDescriptor.from_dict(doc)
    except DescriptorError as exc:
        raise DescriptorError(f"{path}: {exc}") from None
    except TypeError as exc:
        raise DescriptorError(f"{path}: {exc}") from None


def bundled_path(name: str) -> Path:
    """Path of a bundled data file such as ``genus2.json``."""
    return Path(str(resources.files("hodgenorm") / "data" / name))
