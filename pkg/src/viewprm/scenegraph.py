"""Scene descriptions: monitored objects, obstacles, and centroid targets.

Scenes are stored as versioned JSON. Objects are things the camera should
watch (they never occlude or collide); obstacles block sight lines and the
base disc.
"""

from __future__ import annotations

import itertools
import json
import warnings
from dataclasses import dataclass

from .errors import FileFormatError, SceneError
from .geometry import Box, Cylinder, Obstacle, Vec3, norm3, sub3, unit3

SCENE_FORMAT_VERSION = 1


@dataclass(frozen=True)
class ObjectNode:
    """One monitored (or monitorable) object in the scene.

    face_normal points out of the object's face; extent is an axis-aligned
    bounding size used only for description, not collision.
    """

    id: str
    class_name: str
    centroid: Vec3
    face_normal: Vec3
    extent: Vec3
    weight: float

    def __post_init__(self):
        if not self.id:
            raise SceneError("object id must be a non-empty string")
        if self.weight < 0.0:
            raise SceneError(f"object '{self.id}': weight must be >= 0")
        if any(e <= 0.0 for e in self.extent):
            raise SceneError(f"object '{self.id}': extent must be positive")
        if abs(norm3(self.face_normal) - 1.0) > 1e-9:
            raise SceneError(f"object '{self.id}': face_normal must be unit length")


@dataclass(frozen=True)
class SceneGraph:
    workspace_bounds: Box
    obstacles: tuple[Obstacle, ...]
    objects: tuple[ObjectNode, ...]
    class_vocabulary: tuple[str, ...]

    def __post_init__(self):
        seen: set[str] = set()
        for obj in self.objects:
            if obj.id in seen:
                raise SceneError(f"duplicate object id '{obj.id}'")
            seen.add(obj.id)
            if obj.class_name not in self.class_vocabulary:
                raise SceneError(
                    f"object '{obj.id}': class '{obj.class_name}' not in vocabulary")
            lo = self.workspace_bounds.min_corner
            hi = self.workspace_bounds.max_corner
            for i, axis in enumerate("xyz"):
                if not (lo[i] <= obj.centroid[i] <= hi[i]):
                    raise SceneError(
                        f"object '{obj.id}': centroid {axis} outside workspace bounds")

    def monitored(self) -> tuple[ObjectNode, ...]:
        """Objects with positive weight, in declaration order."""
        return tuple(o for o in self.objects if o.weight > 0.0)

    def object_by_id(self, object_id: str) -> ObjectNode:
        for o in self.objects:
            if o.id == object_id:
                return o
        raise SceneError(f"unknown object id '{object_id}'")

    def reweighted(self, weights: dict[str, float]) -> "SceneGraph":
        """Copy of the scene with some object weights replaced."""
        unknown = set(weights) - {o.id for o in self.objects}
        if unknown:
            raise SceneError(f"unknown object ids in reweighting: {sorted(unknown)}")
        objects = tuple(
            ObjectNode(o.id, o.class_name, o.centroid, o.face_normal, o.extent,
                       weights.get(o.id, o.weight))
            for o in self.objects)
        return SceneGraph(self.workspace_bounds, self.obstacles, objects,
                          self.class_vocabulary)


@dataclass(frozen=True)
class CentroidSet:
    """Labeled 3-D aim targets derived from a set of objects."""

    entries: tuple[tuple[str, Vec3], ...]

    def __len__(self) -> int:
        return len(self.entries)


def extract_centroids(objects) -> CentroidSet:
    """Aim targets: every object centroid, every pair midpoint, the collective mean.

    Pair and collective entries are unweighted means. Duplicates within 1e-6
    are removed keeping the first occurrence, so the entry order (objects,
    pairs, collective) is deterministic.
    """
    objects = tuple(objects)
    if not objects:
        raise SceneError("centroid extraction needs at least one object")
    entries: list[tuple[str, Vec3]] = []
    for o in objects:
        entries.append((f"obj:{o.id}", o.centroid))
    for a, b in itertools.combinations(objects, 2):
        mid = (
            0.5 * (a.centroid[0] + b.centroid[0]),
            0.5 * (a.centroid[1] + b.centroid[1]),
            0.5 * (a.centroid[2] + b.centroid[2]),
        )
        entries.append((f"pair:{a.id}+{b.id}", mid))
    if len(objects) > 1:
        n = float(len(objects))
        entries.append(("all", (
            sum(o.centroid[0] for o in objects) / n,
            sum(o.centroid[1] for o in objects) / n,
            sum(o.centroid[2] for o in objects) / n,
        )))

    kept: list[tuple[str, Vec3]] = []
    for label, c in entries:
        if all(norm3(sub3(c, k)) > 1e-6 for _, k in kept):
            kept.append((label, c))
    return CentroidSet(tuple(kept))


# ---------------------------------------------------------------------------
# serialization


def _vec(raw, name: str) -> Vec3:
    if not isinstance(raw, (list, tuple)) or len(raw) != 3:
        raise SceneError(f"{name} must be a 3-vector")
    try:
        return (float(raw[0]), float(raw[1]), float(raw[2]))
    except (TypeError, ValueError) as exc:
        raise SceneError(f"{name} has a non-numeric entry") from exc


def _normal(raw, name: str) -> Vec3:
    v = _vec(raw, name)
    n = norm3(v)
    if n == 0.0:
        raise SceneError(f"{name} must be a nonzero vector")
    if abs(n - 1.0) <= 1e-9:
        return v  # already unit: keep the stored bytes round-trip stable
    if abs(n - 1.0) > 1e-6:
        warnings.warn(f"{name} not unit length (|v|={n:.6f}); normalizing", stacklevel=2)
    return unit3(v)


def scene_to_dict(scene: SceneGraph) -> dict:
    obstacles = []
    for ob in scene.obstacles:
        if isinstance(ob, Box):
            obstacles.append({"kind": "box", "min": list(ob.min_corner),
                              "max": list(ob.max_corner)})
        else:
            obstacles.append({"kind": "cylinder", "center": list(ob.center),
                              "radius": ob.radius, "height": ob.height})
    return {
        "format": SCENE_FORMAT_VERSION,
        "workspace": {"min": list(scene.workspace_bounds.min_corner),
                      "max": list(scene.workspace_bounds.max_corner)},
        "classes": list(scene.class_vocabulary),
        "obstacles": obstacles,
        "objects": [
            {"id": o.id, "class": o.class_name, "centroid": list(o.centroid),
             "face_normal": list(o.face_normal), "extent": list(o.extent),
             "weight": o.weight}
            for o in scene.objects
        ],
    }


def scene_from_dict(data: dict) -> SceneGraph:
    if not isinstance(data, dict):
        raise SceneError("scene document must be a JSON object")
    version = data.get("format")
    if version != SCENE_FORMAT_VERSION:
        raise FileFormatError(f"unsupported scene format {version!r}")
    try:
        ws = data["workspace"]
        bounds = Box(_vec(ws["min"], "workspace.min"), _vec(ws["max"], "workspace.max"))
    except KeyError as exc:
        raise SceneError(f"scene missing field {exc}") from exc

    obstacles: list[Obstacle] = []
    for i, raw in enumerate(data.get("obstacles", [])):
        kind = raw.get("kind")
        if kind == "box":
            obstacles.append(Box(_vec(raw["min"], f"obstacles[{i}].min"),
                                 _vec(raw["max"], f"obstacles[{i}].max")))
        elif kind == "cylinder":
            obstacles.append(Cylinder(_vec(raw["center"], f"obstacles[{i}].center"),
                                      float(raw["radius"]), float(raw["height"])))
        else:
            raise SceneError(f"obstacles[{i}]: unknown kind {kind!r}")

    objects = []
    for i, raw in enumerate(data.get("objects", [])):
        try:
            objects.append(ObjectNode(
                id=str(raw["id"]),
                class_name=str(raw["class"]),
                centroid=_vec(raw["centroid"], f"objects[{i}].centroid"),
                face_normal=_normal(raw["face_normal"], f"objects[{i}].face_normal"),
                extent=_vec(raw["extent"], f"objects[{i}].extent"),
                weight=float(raw["weight"]),
            ))
        except KeyError as exc:
            raise SceneError(f"objects[{i}] missing field {exc}") from exc

    return SceneGraph(bounds, tuple(obstacles), tuple(objects),
                      tuple(str(c) for c in data.get("classes", [])))


def load_scene(path) -> SceneGraph:
    try:
        with open(path) as fh:
            data = json.load(fh)
    except json.JSONDecodeError as exc:
        raise FileFormatError(f"scene file {path}: invalid JSON ({exc})") from exc
    return scene_from_dict(data)


def save_scene(scene: SceneGraph, path) -> None:
    with open(path, "w") as fh:
        json.dump(scene_to_dict(scene), fh, indent=2, sort_keys=True)
        fh.write("\n")
