"""Configurations, camera kinematics, visibility and collision primitives.

The robot is a planar base (x, y, theta) carrying a pan-tilt camera, five
degrees of freedom total. All heavy per-configuration math here is written
with plain floats on purpose: these kernels sit inside sampling and edge
evaluation loops where small-array numpy overhead dominates the arithmetic.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import InvalidConfigurationError

Vec3 = tuple[float, float, float]

TWO_PI = 2.0 * math.pi

# Per-DoF scale used by the configuration metric: meters for x/y, then
# heading, pan and tilt discounted so a radian does not swamp a meter.
DEFAULT_METRIC_WEIGHTS = (1.0, 1.0, 0.5, 0.25, 0.25)

_LIMIT_SLACK = 1e-9


def wrap_angle(a: float) -> float:
    """Wrap an angle to (-pi, pi]."""
    a = math.fmod(a, TWO_PI)
    if a <= -math.pi:
        a += TWO_PI
    elif a > math.pi:
        a -= TWO_PI
    return a


# ---------------------------------------------------------------------------
# small vector helpers (tuples, not numpy: these are called millions of times)


def dot3(a: Vec3, b: Vec3) -> float:
    return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]


def sub3(a: Vec3, b: Vec3) -> Vec3:
    return (a[0] - b[0], a[1] - b[1], a[2] - b[2])


def add3(a: Vec3, b: Vec3) -> Vec3:
    return (a[0] + b[0], a[1] + b[1], a[2] + b[2])


def scale3(a: Vec3, s: float) -> Vec3:
    return (a[0] * s, a[1] * s, a[2] * s)


def cross3(a: Vec3, b: Vec3) -> Vec3:
    return (
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    )


def norm3(a: Vec3) -> float:
    return math.sqrt(a[0] * a[0] + a[1] * a[1] + a[2] * a[2])


def unit3(a: Vec3) -> Vec3:
    n = norm3(a)
    if n == 0.0:
        raise ValueError("cannot normalize a zero vector")
    return (a[0] / n, a[1] / n, a[2] / n)


def rotate_about(v: Vec3, axis: Vec3, angle: float) -> Vec3:
    """Rodrigues rotation of v about a unit axis."""
    c = math.cos(angle)
    s = math.sin(angle)
    kxv = cross3(axis, v)
    kdv = dot3(axis, v)
    return (
        v[0] * c + kxv[0] * s + axis[0] * kdv * (1.0 - c),
        v[1] * c + kxv[1] * s + axis[1] * kdv * (1.0 - c),
        v[2] * c + kxv[2] * s + axis[2] * kdv * (1.0 - c),
    )


# ---------------------------------------------------------------------------
# configurations and the robot


@dataclass(frozen=True, slots=True)
class Configuration:
    """One robot configuration (x, y, theta, pan, tilt); theta is stored wrapped."""

    x: float
    y: float
    theta: float
    pan: float
    tilt: float

    def __post_init__(self):
        object.__setattr__(self, "theta", wrap_angle(self.theta))

    def as_tuple(self) -> tuple[float, float, float, float, float]:
        return (self.x, self.y, self.theta, self.pan, self.tilt)


@dataclass(frozen=True, slots=True)
class RobotModel:
    """Geometry of the base disc and the mast-mounted pan-tilt camera.

    camera_mount is expressed in the base frame; at theta = pan = tilt = 0 the
    optical axis points along +x, pan rotates it about the vertical and a
    negative tilt lowers it (tilt = -pi/2 looks straight down).
    """

    base_radius: float = 0.25
    camera_mount: Vec3 = (0.0, 0.0, 1.2)
    pan_limits: tuple[float, float] = (-math.pi, math.pi)
    tilt_limits: tuple[float, float] = (-math.pi / 2.0, math.pi / 2.0)
    fov_half_angle_h: float = 0.61
    fov_half_angle_v: float = 0.43
    max_range: float = 10.0
    metric_weights: tuple[float, float, float, float, float] = DEFAULT_METRIC_WEIGHTS

    def __post_init__(self):
        if self.base_radius <= 0.0:
            raise InvalidConfigurationError("base_radius must be positive")
        if self.pan_limits[0] > self.pan_limits[1]:
            raise InvalidConfigurationError("pan_limits must be ordered (lo, hi)")
        if self.tilt_limits[0] > self.tilt_limits[1]:
            raise InvalidConfigurationError("tilt_limits must be ordered (lo, hi)")
        for name, v in (("fov_half_angle_h", self.fov_half_angle_h),
                        ("fov_half_angle_v", self.fov_half_angle_v)):
            if not 0.0 < v < math.pi / 2.0:
                raise InvalidConfigurationError(f"{name} must lie in (0, pi/2)")
        if self.max_range <= 0.0:
            raise InvalidConfigurationError("max_range must be positive")
        if len(self.metric_weights) != 5 or any(w <= 0.0 for w in self.metric_weights):
            raise InvalidConfigurationError("metric_weights must be 5 positive floats")

    def check_limits(self, q: Configuration) -> None:
        if not (self.pan_limits[0] - _LIMIT_SLACK <= q.pan <= self.pan_limits[1] + _LIMIT_SLACK):
            raise InvalidConfigurationError(
                f"pan {q.pan:.6f} outside limits {self.pan_limits}")
        if not (self.tilt_limits[0] - _LIMIT_SLACK <= q.tilt <= self.tilt_limits[1] + _LIMIT_SLACK):
            raise InvalidConfigurationError(
                f"tilt {q.tilt:.6f} outside limits {self.tilt_limits}")

    def within_limits(self, q: Configuration) -> bool:
        return (self.pan_limits[0] - _LIMIT_SLACK <= q.pan <= self.pan_limits[1] + _LIMIT_SLACK
                and self.tilt_limits[0] - _LIMIT_SLACK <= q.tilt <= self.tilt_limits[1] + _LIMIT_SLACK)


def config_distance(a: Configuration, b: Configuration,
                    weights: tuple[float, ...] = DEFAULT_METRIC_WEIGHTS) -> float:
    """Weighted Euclidean distance between configurations.

    Heading is differenced on the circle. Pan and tilt are bounded joints that
    physically cannot cross the wrap, so they are differenced linearly.
    """
    dx = (a.x - b.x) * weights[0]
    dy = (a.y - b.y) * weights[1]
    dth = wrap_angle(a.theta - b.theta) * weights[2]
    dp = (a.pan - b.pan) * weights[3]
    dt = (a.tilt - b.tilt) * weights[4]
    return math.sqrt(dx * dx + dy * dy + dth * dth + dp * dp + dt * dt)


# ---------------------------------------------------------------------------
# camera model


@dataclass(frozen=True, slots=True)
class CameraPose:
    """Camera center plus an orthonormal (optical_axis, up) pair."""

    center: Vec3
    optical_axis: Vec3
    up: Vec3

    def __post_init__(self):
        if abs(norm3(self.optical_axis) - 1.0) > 1e-9 or abs(norm3(self.up) - 1.0) > 1e-9:
            raise InvalidConfigurationError("camera axes must be unit vectors")
        if abs(dot3(self.optical_axis, self.up)) > 1e-9:
            raise InvalidConfigurationError("optical_axis and up must be orthogonal")

    def left(self) -> Vec3:
        return cross3(self.up, self.optical_axis)


def forward_kinematics(q: Configuration, robot: RobotModel) -> CameraPose:
    """Camera pose for a configuration; raises if pan/tilt violate limits."""
    robot.check_limits(q)
    ct = math.cos(q.theta)
    st = math.sin(q.theta)
    mx, my, mz = robot.camera_mount
    center = (q.x + ct * mx - st * my, q.y + st * mx + ct * my, mz)
    psi = q.theta + q.pan
    cp = math.cos(psi)
    sp = math.sin(psi)
    ctl = math.cos(q.tilt)
    stl = math.sin(q.tilt)
    axis = (ctl * cp, ctl * sp, stl)
    up = (-stl * cp, -stl * sp, ctl)
    return CameraPose(center, axis, up)


def camera_jacobians(q: Configuration, robot: RobotModel):
    """Camera center m, optical axis z and their 3x5 Jacobians (as column tuples).

    Column order matches the configuration: x, y, theta, pan, tilt.
    """
    ct = math.cos(q.theta)
    st = math.sin(q.theta)
    mx, my, mz = robot.camera_mount
    m = (q.x + ct * mx - st * my, q.y + st * mx + ct * my, mz)
    psi = q.theta + q.pan
    cp = math.cos(psi)
    sp = math.sin(psi)
    ctl = math.cos(q.tilt)
    stl = math.sin(q.tilt)
    z = (ctl * cp, ctl * sp, stl)

    zero = (0.0, 0.0, 0.0)
    dm_dtheta = (-st * mx - ct * my, ct * mx - st * my, 0.0)
    jm = ((1.0, 0.0, 0.0), (0.0, 1.0, 0.0), dm_dtheta, zero, zero)

    dz_dyaw = (-ctl * sp, ctl * cp, 0.0)
    dz_dtilt = (-stl * cp, -stl * sp, ctl)
    jz = (zero, zero, dz_dyaw, dz_dyaw, dz_dtilt)
    return m, z, jm, jz


def lateral_residual(q: Configuration, target: Vec3, robot: RobotModel) -> Vec3:
    """Component of (target - camera center) orthogonal to the optical axis.

    Zero exactly when the camera looks straight at the target.
    """
    cam = forward_kinematics(q, robot)
    return residual_from_pose(cam.center, cam.optical_axis, target)


def residual_from_pose(center: Vec3, axis: Vec3, target: Vec3) -> Vec3:
    r = sub3(target, center)
    a = dot3(axis, r)
    return (r[0] - axis[0] * a, r[1] - axis[1] * a, r[2] - axis[2] * a)


def in_fov(cam: CameraPose, point: Vec3, robot: RobotModel) -> bool:
    """Pyramid field-of-view test: in front, in range, within both half-angles."""
    d = sub3(point, cam.center)
    fwd = dot3(cam.optical_axis, d)
    if fwd <= 0.0:
        return False
    if norm3(d) > robot.max_range:
        return False
    lat = dot3(cam.left(), d)
    if math.atan2(abs(lat), fwd) > robot.fov_half_angle_h:
        return False
    vert = dot3(cam.up, d)
    if math.atan2(abs(vert), fwd) > robot.fov_half_angle_v:
        return False
    return True


# ---------------------------------------------------------------------------
# obstacles


@dataclass(frozen=True, slots=True)
class Box:
    """Axis-aligned box given by two corners."""

    min_corner: Vec3
    max_corner: Vec3

    def __post_init__(self):
        for lo, hi in zip(self.min_corner, self.max_corner):
            if lo > hi:
                raise InvalidConfigurationError("box min_corner must not exceed max_corner")


@dataclass(frozen=True, slots=True)
class Cylinder:
    """Vertical cylinder; center is the midpoint of its axis."""

    center: Vec3
    radius: float
    height: float

    def __post_init__(self):
        if self.radius <= 0.0 or self.height <= 0.0:
            raise InvalidConfigurationError("cylinder radius and height must be positive")


Obstacle = Box | Cylinder


def _segment_hits_box(p: Vec3, q: Vec3, box: Box) -> bool:
    # Slab test; intersection must overlap the open parameter interval (0, 1)
    # so a segment that merely ends on the surface does not count.
    tmin = 0.0
    tmax = 1.0
    for i in range(3):
        d = q[i] - p[i]
        lo = box.min_corner[i]
        hi = box.max_corner[i]
        if d == 0.0:
            if p[i] < lo or p[i] > hi:
                return False
        else:
            t1 = (lo - p[i]) / d
            t2 = (hi - p[i]) / d
            if t1 > t2:
                t1, t2 = t2, t1
            if t1 > tmin:
                tmin = t1
            if t2 < tmax:
                tmax = t2
            if tmin > tmax:
                return False
    return tmax > 0.0 and tmin < 1.0 and tmin <= tmax


def _segment_hits_cylinder(p: Vec3, q: Vec3, cyl: Cylinder) -> bool:
    # Intersection with the solid: parameter interval inside the infinite
    # xy-circle intersected with the interval inside the z-range.
    cx, cy, cz = cyl.center
    z_lo = cz - 0.5 * cyl.height
    z_hi = cz + 0.5 * cyl.height

    dx = q[0] - p[0]
    dy = q[1] - p[1]
    fx = p[0] - cx
    fy = p[1] - cy
    a = dx * dx + dy * dy
    if a == 0.0:
        if fx * fx + fy * fy > cyl.radius * cyl.radius:
            return False
        t_lo_xy, t_hi_xy = 0.0, 1.0
    else:
        b = fx * dx + fy * dy
        c = fx * fx + fy * fy - cyl.radius * cyl.radius
        disc = b * b - a * c
        if disc < 0.0:
            return False
        root = math.sqrt(disc)
        t_lo_xy = (-b - root) / a
        t_hi_xy = (-b + root) / a

    dz = q[2] - p[2]
    if dz == 0.0:
        if p[2] < z_lo or p[2] > z_hi:
            return False
        t_lo_z, t_hi_z = 0.0, 1.0
    else:
        t1 = (z_lo - p[2]) / dz
        t2 = (z_hi - p[2]) / dz
        t_lo_z, t_hi_z = (t1, t2) if t1 <= t2 else (t2, t1)

    lo = max(t_lo_xy, t_lo_z, 0.0)
    hi = min(t_hi_xy, t_hi_z, 1.0)
    return lo <= hi and hi > 0.0 and lo < 1.0


def occluded(cam_center: Vec3, point: Vec3, obstacles) -> bool:
    """True when any obstacle blocks the open sight segment camera -> point."""
    for ob in obstacles:
        if isinstance(ob, Box):
            if _segment_hits_box(cam_center, point, ob):
                return True
        else:
            if _segment_hits_cylinder(cam_center, point, ob):
                return True
    return False


def config_in_collision(q: Configuration, obstacles, robot: RobotModel) -> bool:
    """Base-disc collision against obstacle footprints on the ground plane.

    Obstacles project to the plane regardless of height; the camera itself is
    assumed never to collide (mast above obstacle tops is the caller's
    responsibility at scene design time).
    """
    r = robot.base_radius
    for ob in obstacles:
        if isinstance(ob, Box):
            nx = min(max(q.x, ob.min_corner[0]), ob.max_corner[0])
            ny = min(max(q.y, ob.min_corner[1]), ob.max_corner[1])
            dx = q.x - nx
            dy = q.y - ny
            if dx * dx + dy * dy <= r * r:
                return True
        else:
            dx = q.x - ob.center[0]
            dy = q.y - ob.center[1]
            reach = r + ob.radius
            if dx * dx + dy * dy <= reach * reach:
                return True
    return False


# ---------------------------------------------------------------------------
# rotation <-> quaternion, used by the dataset file format


def pose_to_quaternion(cam: CameraPose) -> tuple[float, float, float, float]:
    """Unit quaternion (w, x, y, z) of the camera rotation.

    Columns of the rotation are (optical_axis, left, up).
    """
    f = cam.optical_axis
    l = cam.left()
    u = cam.up
    m00, m01, m02 = f[0], l[0], u[0]
    m10, m11, m12 = f[1], l[1], u[1]
    m20, m21, m22 = f[2], l[2], u[2]
    tr = m00 + m11 + m22
    if tr > 0.0:
        s = math.sqrt(tr + 1.0) * 2.0
        w = 0.25 * s
        x = (m21 - m12) / s
        y = (m02 - m20) / s
        z = (m10 - m01) / s
    elif m00 > m11 and m00 > m22:
        s = math.sqrt(1.0 + m00 - m11 - m22) * 2.0
        w = (m21 - m12) / s
        x = 0.25 * s
        y = (m01 + m10) / s
        z = (m02 + m20) / s
    elif m11 > m22:
        s = math.sqrt(1.0 + m11 - m00 - m22) * 2.0
        w = (m02 - m20) / s
        x = (m01 + m10) / s
        y = 0.25 * s
        z = (m12 + m21) / s
    else:
        s = math.sqrt(1.0 + m22 - m00 - m11) * 2.0
        w = (m10 - m01) / s
        x = (m02 + m20) / s
        y = (m12 + m21) / s
        z = 0.25 * s
    n = math.sqrt(w * w + x * x + y * y + z * z)
    return (w / n, x / n, y / n, z / n)


def quaternion_to_pose(center: Vec3, quat: tuple[float, float, float, float]) -> CameraPose:
    w, x, y, z = quat
    n = math.sqrt(w * w + x * x + y * y + z * z)
    w, x, y, z = w / n, x / n, y / n, z / n
    axis = (1.0 - 2.0 * (y * y + z * z), 2.0 * (x * y + w * z), 2.0 * (x * z - w * y))
    up = (2.0 * (x * z + w * y), 2.0 * (y * z - w * x), 1.0 - 2.0 * (x * x + y * y))
    return CameraPose(center, unit3(axis), unit3(up))
