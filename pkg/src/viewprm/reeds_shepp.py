"""Shortest bidirectional curvature-bounded paths between planar poses.

Candidate paths are generated from the classical closed-form word families
(turn-straight-turn, triple turns, and the cusped four- and five-segment
words), expanded through the timeflip / reflect / reverse symmetries. Every
candidate is verified by forward integration before it may win, so a formula
edge case can only lose a candidate, never return a wrong path.

All solving happens in scaled coordinates (turning radius 1); lengths are
multiplied back by the radius at the end.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

# segment: (letter, signed length in radius units); letter in {"L", "S", "R"}
Segment = tuple[str, float]

_EPS = 1e-12
_ENDPOINT_TOL = 1e-6


@dataclass(frozen=True)
class RSPath:
    """A feasible curvature-bounded path.

    Segments stay in radius units (turn lengths are radians); `length` is
    the real arc length, i.e. radius times the summed segment magnitudes.
    """

    segments: tuple[Segment, ...]
    length: float

    @property
    def word(self) -> str:
        return "".join(f"{t}{'+' if s >= 0 else '-'}" for t, s in self.segments)


def _wrap(a: float) -> float:
    a = math.fmod(a, 2.0 * math.pi)
    if a <= -math.pi:
        a += 2.0 * math.pi
    elif a > math.pi:
        a -= 2.0 * math.pi
    return a


def _polar(x: float, y: float) -> tuple[float, float]:
    return math.hypot(x, y), math.atan2(y, x)


def integrate(segments, x: float = 0.0, y: float = 0.0, th: float = 0.0,
              radius: float = 1.0) -> tuple[float, float, float]:
    """Endpoint of driving the segments from (x, y, th)."""
    for letter, s in segments:
        if letter == "S":
            x += s * radius * math.cos(th)
            y += s * radius * math.sin(th)
        elif letter == "L":
            nth = th + s
            x += radius * (math.sin(nth) - math.sin(th))
            y += radius * (-math.cos(nth) + math.cos(th))
            th = nth
        else:
            nth = th - s
            x += radius * (-math.sin(nth) + math.sin(th))
            y += radius * (math.cos(nth) - math.cos(th))
            th = nth
    return x, y, th


# ---------------------------------------------------------------------------
# base words; each yields segments solving (x, y, phi) when its branch applies


def _lp_sp_lp(x, y, phi):
    u, t = _polar(x - math.sin(phi), y - 1.0 + math.cos(phi))
    if t >= -_EPS:
        v = _wrap(phi - t)
        if v >= -_EPS:
            yield (("L", t), ("S", u), ("L", v))


def _lp_sp_rp(x, y, phi):
    u1, t1 = _polar(x + math.sin(phi), y - 1.0 - math.cos(phi))
    if u1 * u1 >= 4.0:
        u = math.sqrt(u1 * u1 - 4.0)
        t = _wrap(t1 + math.atan2(2.0, u))
        v = _wrap(t - phi)
        if t >= -_EPS and v >= -_EPS:
            yield (("L", t), ("S", u), ("R", v))


def _lp_rm_l(x, y, phi):
    xi = x - math.sin(phi)
    eta = y - 1.0 + math.cos(phi)
    u1, theta = _polar(xi, eta)
    if u1 <= 4.0:
        u = -2.0 * math.asin(0.25 * u1)
        t = _wrap(theta + 0.5 * u + math.pi)
        v = _wrap(phi - t + u)
        if t >= -_EPS and u <= _EPS:
            yield (("L", t), ("R", u), ("L", v))


def _tau_omega(u, v, xi, eta, phi):
    delta = _wrap(u - v)
    a = math.sin(u) - math.sin(delta)
    b = math.cos(u) - math.cos(delta) - 1.0
    t1 = math.atan2(eta * a - xi * b, xi * a + eta * b)
    t2 = 2.0 * (math.cos(delta) - math.cos(v) - math.cos(u)) + 3.0
    tau = _wrap(t1 + math.pi) if t2 < 0.0 else _wrap(t1)
    return tau, _wrap(tau - u + v - phi)


def _lp_rup_lum_rm(x, y, phi):
    xi = x + math.sin(phi)
    eta = y - 1.0 - math.cos(phi)
    rho = 0.25 * (2.0 + math.hypot(xi, eta))
    if rho <= 1.0:
        u = math.acos(rho)
        t, v = _tau_omega(u, -u, xi, eta, phi)
        if t >= -_EPS and v <= _EPS:
            yield (("L", t), ("R", u), ("L", -u), ("R", v))


def _lp_rum_lum_rp(x, y, phi):
    xi = x + math.sin(phi)
    eta = y - 1.0 - math.cos(phi)
    rho = (20.0 - xi * xi - eta * eta) / 16.0
    if 0.0 <= rho <= 1.0:
        u = -math.acos(rho)
        if u >= -0.5 * math.pi:
            t, v = _tau_omega(u, u, xi, eta, phi)
            if t >= -_EPS and v >= -_EPS:
                yield (("L", t), ("R", u), ("L", u), ("R", v))


def _lp_rm_sm_lm(x, y, phi):
    xi = x - math.sin(phi)
    eta = y - 1.0 + math.cos(phi)
    rho, theta = _polar(xi, eta)
    if rho >= 2.0:
        r = math.sqrt(rho * rho - 4.0)
        u = 2.0 - r
        t = _wrap(theta + math.atan2(r, -2.0))
        v = _wrap(phi - 0.5 * math.pi - t)
        if t >= -_EPS and u <= _EPS and v <= _EPS:
            yield (("L", t), ("R", -0.5 * math.pi), ("S", u), ("L", v))


def _lp_rm_sm_rm(x, y, phi):
    xi = x + math.sin(phi)
    eta = y - 1.0 - math.cos(phi)
    rho, theta = _polar(-eta, xi)
    if rho >= 2.0:
        t = theta
        u = 2.0 - rho
        v = _wrap(t + 0.5 * math.pi - phi)
        if t >= -_EPS and u <= _EPS and v <= _EPS:
            yield (("L", t), ("R", -0.5 * math.pi), ("S", u), ("R", v))


def _lp_rm_s_lm_rp(x, y, phi):
    xi = x + math.sin(phi)
    eta = y - 1.0 - math.cos(phi)
    rho, _ = _polar(xi, eta)
    if rho >= 2.0:
        u = 4.0 - math.sqrt(rho * rho - 4.0)
        if u <= _EPS:
            t = _wrap(math.atan2((4.0 - u) * xi - 2.0 * eta,
                                 -2.0 * xi + (u - 4.0) * eta))
            v = _wrap(t - phi)
            if t >= -_EPS and v >= -_EPS:
                yield (("L", t), ("R", -0.5 * math.pi), ("S", u),
                       ("L", -0.5 * math.pi), ("R", v))


_BASE_WORDS = (
    _lp_sp_lp,
    _lp_sp_rp,
    _lp_rm_l,
    _lp_rup_lum_rm,
    _lp_rum_lum_rp,
    _lp_rm_sm_lm,
    _lp_rm_sm_rm,
    _lp_rm_s_lm_rp,
)

_SWAP = {"L": "R", "R": "L", "S": "S"}


def _candidates(x: float, y: float, phi: float):
    """All symmetry-expanded candidates for goal (x, y, phi), unverified."""
    for timeflip in (False, True):
        for reflect in (False, True):
            for backwards in (False, True):
                xs, ys, ph = x, y, phi
                if backwards:
                    xs, ys = xs * math.cos(ph) + ys * math.sin(ph), \
                        xs * math.sin(ph) - ys * math.cos(ph)
                if timeflip:
                    xs, ph = -xs, -ph
                if reflect:
                    ys, ph = -ys, -ph
                for base in _BASE_WORDS:
                    for segs in base(xs, ys, ph):
                        out = segs
                        if reflect:
                            out = tuple((_SWAP[t], s) for t, s in out)
                        if timeflip:
                            out = tuple((t, -s) for t, s in out)
                        if backwards:
                            out = tuple(reversed(out))
                        yield out


def solve(x: float, y: float, phi: float, radius: float = 1.0) -> RSPath:
    """Shortest verified path from the origin pose to (x, y, phi).

    Ties within 1e-9 of the minimum length break on lexicographic word order
    so the result is deterministic across platforms.
    """
    if radius <= 0.0:
        raise ValueError("turning radius must be positive")
    xs = x / radius
    ys = y / radius
    phi = _wrap(phi)

    best: RSPath | None = None
    for segs in _candidates(xs, ys, phi):
        ex, ey, eth = integrate(segs)
        if (abs(ex - xs) > _ENDPOINT_TOL or abs(ey - ys) > _ENDPOINT_TOL
                or abs(_wrap(eth - phi)) > _ENDPOINT_TOL):
            continue
        cleaned = tuple((t, s) for t, s in segs if abs(s) > _EPS)
        if not cleaned:
            cleaned = (("S", 0.0),)
        cand = RSPath(cleaned, radius * sum(abs(s) for _, s in cleaned))
        if best is None or cand.length < best.length - 1e-9 or (
                cand.length < best.length + 1e-9 and cand.word < best.word):
            best = cand
    if best is None:
        raise ArithmeticError(f"no feasible word for goal ({x}, {y}, {phi})")
    return best


def path_between(start: tuple[float, float, float],
                 goal: tuple[float, float, float], radius: float = 1.0) -> RSPath:
    """Shortest path between two world poses (x, y, heading)."""
    dx = goal[0] - start[0]
    dy = goal[1] - start[1]
    c = math.cos(start[2])
    s = math.sin(start[2])
    local_x = c * dx + s * dy
    local_y = -s * dx + c * dy
    dphi = _wrap(goal[2] - start[2])
    return solve(local_x, local_y, dphi, radius)


def sample_pose(path: RSPath, start: tuple[float, float, float], radius: float,
                fraction: float) -> tuple[float, float, float]:
    """Pose after driving a fraction of the path's arc length from start.

    Walks the segments in radius units so the arithmetic stays independent
    of the radius scaling applied to `length`.
    """
    if fraction <= 0.0:
        return start
    total = sum(abs(s) for _, s in path.segments)
    target = min(fraction, 1.0) * total
    x, y, th = start
    travelled = 0.0
    for letter, s in path.segments:
        seg_len = abs(s)
        if travelled + seg_len >= target - 1e-15:
            remaining = target - travelled
            partial = math.copysign(remaining, s) if s != 0.0 else 0.0
            return integrate(((letter, partial),), x, y, th, radius)
        x, y, th = integrate(((letter, s),), x, y, th, radius)
        travelled += seg_len
    return x, y, th
