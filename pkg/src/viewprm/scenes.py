"""Stock scenes used by the benchmarks and the test suite.

Two rooms: an office with a row of monitors on a table, and a gallery
whose two facing paintings carry user-set weights so that re-weighting
flips which side of the central chair the planned path passes.
"""

from __future__ import annotations

import math

from .geometry import Box, Cylinder
from .scenegraph import ObjectNode, SceneGraph

OFFICE_CLASSES = ("monitor", "human")
GALLERY_CLASSES = ("monitor", "human", "painting")


def _monitor_row(count: int, weights=None) -> tuple[ObjectNode, ...]:
    # screens on the table edge at y=6.55, facing the room (-y); the two
    # outermost are toed in by ~10 degrees like a real desk setup
    if count == 1:
        xs = [6.0]
    else:
        step = 3.0 / (count - 1)
        xs = [4.5 + step * i for i in range(count)]
    toe = math.radians(10.0)
    nodes = []
    for i, x in enumerate(xs):
        if count > 1 and i == 0:
            normal = (math.sin(toe), -math.cos(toe), 0.0)
        elif count > 1 and i == count - 1:
            normal = (-math.sin(toe), -math.cos(toe), 0.0)
        else:
            normal = (0.0, -1.0, 0.0)
        w = 1.0 if weights is None else float(weights[i])
        nodes.append(ObjectNode(
            id=f"monitor_{i}", class_name="monitor",
            centroid=(x, 6.55, 1.0), face_normal=normal,
            extent=(0.5, 0.05, 0.3), weight=w))
    return tuple(nodes)


def make_office_scene(num_monitors: int = 4, monitor_weights=None) -> SceneGraph:
    """Office room, 12 x 8 m: a long desk along the far wall carries the
    monitored screens; a cabinet and two chairs clutter the floor."""
    if num_monitors < 1:
        raise ValueError("office scene needs at least one monitor")
    workspace = Box((0.0, 0.0, 0.0), (12.0, 8.0, 3.0))
    obstacles = (
        Box((4.2, 6.3, 0.0), (7.8, 7.1, 0.75)),   # desk
        Box((10.6, 0.0, 0.0), (11.4, 2.2, 1.8)),  # cabinet in the corner
        Cylinder((2.8, 4.6, 0.45), 0.35, 0.9),    # chair
        Cylinder((8.8, 3.4, 0.45), 0.35, 0.9),    # chair
    )
    objects = _monitor_row(num_monitors, monitor_weights) + (
        # bystander: present in the graph and vocabulary but not monitored
        ObjectNode(id="visitor", class_name="human",
                   centroid=(1.8, 1.6, 1.4), face_normal=(0.0, 1.0, 0.0),
                   extent=(0.5, 0.4, 1.7), weight=0.0),
    )
    return SceneGraph(workspace_bounds=workspace, obstacles=obstacles,
                      objects=objects, class_vocabulary=OFFICE_CLASSES)


# (x, z) slots on the 4 x 2 video wall, ordered so that every prefix of the
# activation order spans the wall instead of filling one corner
_SWEEP_SLOTS = (
    (5.0, 1.35),
    (6.5, 0.75),
    (6.0, 1.35),
    (5.5, 0.75),
    (5.5, 1.35),
    (6.0, 0.75),
    (6.5, 1.35),
    (5.0, 0.75),
)


def make_sweep_scene(num_active: int, total_monitors: int = 8) -> SceneGraph:
    """Scaling-study hall, 12 x 4 m, with a 4 x 2 video wall mid-corridor.

    The whole wall fits one field of view from the far side of the console
    desk, so the perception channel keeps real dynamic range: a well-aimed
    pass scores every active screen at once instead of fighting a large
    never-visible floor. The first `num_active` slots carry weight; the
    rest stay in the graph unweighted.
    """
    if not 1 <= num_active <= total_monitors:
        raise ValueError("active monitor count out of range")
    if total_monitors > len(_SWEEP_SLOTS):
        raise ValueError(f"video wall has {len(_SWEEP_SLOTS)} slots")
    workspace = Box((0.0, 0.0, 0.0), (12.0, 4.0, 3.0))
    obstacles = (
        Box((5.4, 1.1, 0.0), (6.6, 1.9, 0.8)),    # console desk under the wall
        Cylinder((3.0, 1.0, 0.45), 0.3, 0.9),     # chair
        Cylinder((9.0, 1.2, 0.45), 0.3, 0.9),     # chair
    )
    objects = tuple(
        ObjectNode(id=f"monitor_{i}", class_name="monitor",
                   centroid=(sx, 0.3, sz), face_normal=(0.0, 1.0, 0.0),
                   extent=(0.45, 0.05, 0.28),
                   weight=1.0 if i < num_active else 0.0)
        for i, (sx, sz) in enumerate(_SWEEP_SLOTS[:total_monitors]))
    return SceneGraph(workspace_bounds=workspace, obstacles=obstacles,
                      objects=objects, class_vocabulary=OFFICE_CLASSES)


def make_gallery_scene(weight_first: float = 1.0,
                       weight_second: float = 0.2) -> SceneGraph:
    """Gallery room, 10 x 8 m, with paintings on opposite walls at x=5.

    A sculpture plinth blocks the middle of the room, so a path crossing it
    must commit to the low-y or high-y side, and either detour runs within
    about 1.5 m of the wall on that side; which painting carries more weight
    decides the side. A monitor and a person near the start and another
    person near the goal are monitored too, but at weights small enough that
    the painting contrast stays the dominant signal.
    """
    workspace = Box((0.0, 0.0, 0.0), (10.0, 8.0, 3.0))
    obstacles = (
        Box((4.3, 0.0, 0.0), (5.7, 0.4, 1.0)),    # cabinet under painting_1
        Box((4.3, 7.6, 0.0), (5.7, 8.0, 1.0)),    # cabinet under painting_2
        Box((4.0, 3.0, 0.0), (6.0, 5.0, 1.6)),    # sculpture plinth mid-room
    )
    objects = (
        ObjectNode(id="desk_monitor", class_name="monitor",
                   centroid=(0.6, 4.0, 1.2), face_normal=(1.0, 0.0, 0.0),
                   extent=(0.5, 0.05, 0.3), weight=0.1),
        ObjectNode(id="person_start", class_name="human",
                   centroid=(1.5, 5.5, 1.4), face_normal=(0.0, -1.0, 0.0),
                   extent=(0.5, 0.4, 1.7), weight=0.1),
        ObjectNode(id="person_goal", class_name="human",
                   centroid=(8.5, 2.5, 1.4), face_normal=(0.0, 1.0, 0.0),
                   extent=(0.5, 0.4, 1.7), weight=0.1),
        ObjectNode(id="painting_1", class_name="painting",
                   centroid=(5.0, 0.2, 1.5), face_normal=(0.0, 1.0, 0.0),
                   extent=(1.0, 0.05, 0.7), weight=float(weight_first)),
        ObjectNode(id="painting_2", class_name="painting",
                   centroid=(5.0, 7.8, 1.5), face_normal=(0.0, -1.0, 0.0),
                   extent=(1.0, 0.05, 0.7), weight=float(weight_second)),
    )
    return SceneGraph(workspace_bounds=workspace, obstacles=obstacles,
                      objects=objects, class_vocabulary=GALLERY_CLASSES)
