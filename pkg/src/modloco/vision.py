"""Target bearing: pinhole pixel-to-angle model and field-of-view policies.

The bearing angle is signed in degrees, negative when the target is left of
the robot's heading, and always clipped to the camera half field of view.
When the target has never been seen the robot searches by assuming a bearing
of half the FOV on a configurable side; once seen and then lost, the last
bearing is held so the robot keeps its current behaviour.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

DEFAULT_N_COLS = 3280
DEFAULT_BETA_DEG = 31.1


class DegenerateGeometryError(ValueError):
    """Robot and target coincide; the bearing is undefined."""


@dataclass(frozen=True)
class CameraModel:
    n_cols: int = DEFAULT_N_COLS
    beta_deg: float = DEFAULT_BETA_DEG  # half field of view

    def __post_init__(self):
        if self.n_cols <= 0:
            raise ValueError("n_cols must be positive")
        if not 0.0 < self.beta_deg < 90.0:
            raise ValueError("beta_deg must be in (0, 90)")


@dataclass
class BearingState:
    alpha_deg: float
    has_ever_seen: bool = False
    search_side: str = "right"  # side assumed while the target was never seen


def focal_factor(cam: CameraModel) -> float:
    """Focal length in pixels implied by the column count and half FOV."""
    return (cam.n_cols / 2.0) / math.tan(math.radians(cam.beta_deg))


def pixel_to_angle(cam: CameraModel, x_pixel: float) -> float:
    """Bearing of an image column, degrees; image center maps to zero."""
    if not 0.0 <= x_pixel <= cam.n_cols:
        raise ValueError(f"pixel column {x_pixel} outside [0, {cam.n_cols}]")
    return math.degrees(math.atan((x_pixel - cam.n_cols / 2.0) / focal_factor(cam)))


def angle_to_pixel(cam: CameraModel, alpha_deg: float) -> float:
    """Inverse of ``pixel_to_angle`` for bearings within the FOV."""
    if abs(alpha_deg) > cam.beta_deg:
        raise ValueError(f"bearing {alpha_deg} outside half FOV {cam.beta_deg}")
    return cam.n_cols / 2.0 + focal_factor(cam) * math.tan(math.radians(alpha_deg))


def simulated_bearing(
    pose_x: float,
    pose_y: float,
    heading_rad: float,
    target_x: float,
    target_y: float,
    cam: CameraModel,
) -> float | None:
    """Signed bearing to the target, or None when it is outside the FOV."""
    dx = target_x - pose_x
    dy = target_y - pose_y
    if dx == 0.0 and dy == 0.0:
        raise DegenerateGeometryError("target coincides with robot position")
    offset = math.atan2(dy, dx) - heading_rad
    # wrap to (-pi, pi]; positive offset is counterclockwise, i.e. left
    offset = -((-offset + math.pi) % (2.0 * math.pi) - math.pi)
    alpha = -math.degrees(offset)
    if abs(alpha) > cam.beta_deg:
        return None
    return alpha


def initial_bearing_state(cam: CameraModel, search_side: str = "right") -> BearingState:
    if search_side not in ("left", "right"):
        raise ValueError("search_side must be 'left' or 'right'")
    half = cam.beta_deg / 2.0
    alpha = half if search_side == "right" else -half
    return BearingState(alpha_deg=alpha, has_ever_seen=False, search_side=search_side)


def bearing_policy(
    state: BearingState,
    detection: float | None,
    cam: CameraModel,
    is_initial: bool | None = None,
) -> BearingState:
    """Fold one detection into the bearing state.

    A detection replaces the bearing. Without one, the bearing is the search
    angle (half FOV on the search side) while the target was never seen, and
    the previously held value afterwards.
    """
    never_seen = (not state.has_ever_seen) if is_initial is None else is_initial
    if detection is not None:
        return BearingState(detection, has_ever_seen=True, search_side=state.search_side)
    if never_seen:
        half = cam.beta_deg / 2.0
        alpha = half if state.search_side == "right" else -half
        return BearingState(alpha, has_ever_seen=False, search_side=state.search_side)
    return state
