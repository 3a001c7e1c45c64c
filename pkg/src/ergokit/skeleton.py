"""Articulated body model: joints, per-DoF motion ranges, link topology,
segment mass parameters and the ergonomic reference posture.

A skeleton is loaded from a YAML config file (angles in degrees there,
radians in memory) and is immutable after validation, so a single descriptor
can be shared freely between concurrent evaluators.

Whole-body CoM uses fixed per-segment mass fractions and offsets: the CoM of
each link is ``p_link + R(q_link) @ com_offset`` and the body CoM is the
mass-fraction weighted sum over all segments.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from importlib import resources
from typing import TYPE_CHECKING, Iterable

import yaml

from .errors import IncompleteFrameError, SkeletonConfigError
from .quat import Quat, Vec3, norm as quat_norm, rotate

if TYPE_CHECKING:  # pragma: no cover
    from .frames import MotionFrame


class BodyPart(enum.Enum):
    VERTEBRAL_COLUMN = "vertebral_column"
    LEFT_UPPER_LIMB = "left_upper_limb"
    RIGHT_UPPER_LIMB = "right_upper_limb"
    LEFT_LOWER_LIMB = "left_lower_limb"
    RIGHT_LOWER_LIMB = "right_lower_limb"


# Canonical 15-row grouping used by comparison tables: joint ids that match
# these names must carry the listed body part.
CANONICAL_BODY_PARTS: dict[str, BodyPart] = {
    "head": BodyPart.VERTEBRAL_COLUMN,
    "neck": BodyPart.VERTEBRAL_COLUMN,
    "pelvis": BodyPart.VERTEBRAL_COLUMN,
    "l_shoulder": BodyPart.LEFT_UPPER_LIMB,
    "l_elbow": BodyPart.LEFT_UPPER_LIMB,
    "l_wrist": BodyPart.LEFT_UPPER_LIMB,
    "r_shoulder": BodyPart.RIGHT_UPPER_LIMB,
    "r_elbow": BodyPart.RIGHT_UPPER_LIMB,
    "r_wrist": BodyPart.RIGHT_UPPER_LIMB,
    "l_hip": BodyPart.LEFT_LOWER_LIMB,
    "l_knee": BodyPart.LEFT_LOWER_LIMB,
    "l_ankle": BodyPart.LEFT_LOWER_LIMB,
    "r_hip": BodyPart.RIGHT_LOWER_LIMB,
    "r_knee": BodyPart.RIGHT_LOWER_LIMB,
    "r_ankle": BodyPart.RIGHT_LOWER_LIMB,
}


@dataclass(frozen=True)
class DoFLimit:
    """Admissible interval of one rotational coordinate, radians."""

    joint_id: str
    dof_index: int
    theta_min: float
    theta_max: float

    @property
    def span(self) -> float:
        return self.theta_max - self.theta_min

    @property
    def midpoint(self) -> float:
        return 0.5 * (self.theta_min + self.theta_max)


@dataclass(frozen=True)
class JointDescriptor:
    joint_id: str
    name: str
    parent_link: str
    child_link: str
    dof_count: int
    limits: tuple[DoFLimit, ...]
    body_part: BodyPart


@dataclass(frozen=True)
class SegmentParameter:
    """Mass fraction and local CoM offset of one link."""

    link_id: str
    mass_fraction: float
    com_offset: Vec3


@dataclass(frozen=True)
class ReferencePosture:
    """Ergonomic reference pose per link: position p_star, orientation eps_star."""

    poses: dict[str, tuple[Vec3, Quat]]

    def links(self) -> Iterable[str]:
        return self.poses.keys()

    def __contains__(self, link_id: str) -> bool:
        return link_id in self.poses


@dataclass(frozen=True)
class SkeletonDescriptor:
    joints: tuple[JointDescriptor, ...]
    links: tuple[str, ...]
    segments: tuple[SegmentParameter, ...]
    reference: ReferencePosture
    world_frame: str = "world"
    root_link: str = "pelvis"

    # derived lookup, filled in __post_init__
    joint_map: dict[str, JointDescriptor] = field(
        default=None, repr=False, compare=False  # type: ignore[assignment]
    )

    def __post_init__(self):
        object.__setattr__(self, "joint_map", {j.joint_id: j for j in self.joints})

    def joint(self, joint_id: str) -> JointDescriptor:
        return self.joint_map[joint_id]

    def joints_of(self, part: BodyPart) -> list[JointDescriptor]:
        return [j for j in self.joints if j.body_part is part]

    def total_dofs(self) -> int:
        return sum(j.dof_count for j in self.joints)


@dataclass(frozen=True)
class ValidationResult:
    ok: bool
    violations: tuple[str, ...]

    def __bool__(self) -> bool:
        return self.ok


MASS_FRACTION_TOL = 1e-9
REFERENCE_QUAT_TOL = 1e-9


def validate_skeleton(desc: SkeletonDescriptor) -> ValidationResult:
    """Check every structural invariant and return the complete violation list.

    Violations are data, not faults: an invalid descriptor never raises here.
    """
    violations: list[str] = []
    links = set(desc.links)

    if len(links) != len(desc.links):
        violations.append("duplicate link ids")

    seen_joints: set[str] = set()
    for j in desc.joints:
        if j.joint_id in seen_joints:
            violations.append(f"duplicate joint id '{j.joint_id}'")
        seen_joints.add(j.joint_id)

        if not 1 <= j.dof_count <= 3:
            violations.append(f"joint '{j.joint_id}': dof_count {j.dof_count} not in 1..3")
        if j.dof_count != len(j.limits):
            violations.append(
                f"joint '{j.joint_id}': dof_count {j.dof_count} != {len(j.limits)} limits"
            )
        for lim in j.limits:
            if not lim.theta_min < lim.theta_max:
                violations.append(
                    f"joint '{j.joint_id}' dof {lim.dof_index}: degenerate RoM "
                    f"[{lim.theta_min}, {lim.theta_max}]"
                )
        if j.parent_link not in links:
            violations.append(f"joint '{j.joint_id}': unknown parent link '{j.parent_link}'")
        if j.child_link not in links:
            violations.append(f"joint '{j.joint_id}': unknown child link '{j.child_link}'")
        canonical = CANONICAL_BODY_PARTS.get(j.joint_id)
        if canonical is not None and j.body_part is not canonical:
            violations.append(
                f"joint '{j.joint_id}': body part {j.body_part.value} does not match "
                f"the canonical grouping ({canonical.value})"
            )

    # topology: every non-root link is the child of exactly one joint,
    # and walking parents from any link reaches the root
    child_counts: dict[str, int] = {}
    parent_of: dict[str, str] = {}
    for j in desc.joints:
        child_counts[j.child_link] = child_counts.get(j.child_link, 0) + 1
        parent_of[j.child_link] = j.parent_link
    for link, n in child_counts.items():
        if n > 1:
            violations.append(f"link '{link}' is the child of {n} joints (not a tree)")
    if desc.root_link not in links:
        violations.append(f"root link '{desc.root_link}' not in links")
    else:
        if desc.root_link in parent_of:
            violations.append(f"root link '{desc.root_link}' has a parent joint")
        for link in desc.links:
            cursor, hops = link, 0
            while cursor != desc.root_link and hops <= len(desc.links):
                if cursor not in parent_of:
                    violations.append(f"link '{link}' is not connected to root '{desc.root_link}'")
                    break
                cursor = parent_of[cursor]
                hops += 1
            else:
                if cursor != desc.root_link:
                    violations.append(f"cycle detected while walking up from link '{link}'")

    seen_segments: set[str] = set()
    total = 0.0
    for seg in desc.segments:
        if seg.link_id not in links:
            violations.append(f"segment references unknown link '{seg.link_id}'")
        if seg.link_id in seen_segments:
            violations.append(f"duplicate segment for link '{seg.link_id}'")
        seen_segments.add(seg.link_id)
        if not 0.0 < seg.mass_fraction < 1.0:
            violations.append(
                f"segment '{seg.link_id}': mass fraction {seg.mass_fraction} not in (0, 1)"
            )
        total += seg.mass_fraction
    if abs(total - 1.0) > MASS_FRACTION_TOL:
        violations.append(f"mass fractions sum to {total!r}, expected 1.0")

    for link_id, (_, eps) in desc.reference.poses.items():
        if link_id not in links:
            violations.append(f"reference posture references unknown link '{link_id}'")
        if abs(quat_norm(eps) - 1.0) > REFERENCE_QUAT_TOL:
            violations.append(
                f"reference quaternion for '{link_id}' has norm {quat_norm(eps)!r}"
            )

    return ValidationResult(ok=not violations, violations=tuple(violations))


def com_position(frame: "MotionFrame", desc: SkeletonDescriptor) -> Vec3:
    """Whole-body CoM of one frame: sum of mass_fraction * (p + R(eps) @ offset).

    Raises IncompleteFrameError naming the first link whose pose is missing.
    """
    cx = cy = cz = 0.0
    for seg in desc.segments:
        pose = frame.poses.get(seg.link_id)
        if pose is None:
            raise IncompleteFrameError(
                f"incomplete frame: no pose for link '{seg.link_id}'"
            )
        ox, oy, oz = rotate(pose.eps, seg.com_offset)
        f = seg.mass_fraction
        cx += f * (pose.p[0] + ox)
        cy += f * (pose.p[1] + oy)
        cz += f * (pose.p[2] + oz)
    return (cx, cy, cz)


# ---------------------------------------------------------------------------
# config loading

_TOP_KEYS = {"skeleton"}
_SKEL_KEYS = {"world_frame", "root_link", "links", "joints", "segments", "reference_posture"}
_JOINT_KEYS = {"id", "name", "parent_link", "child_link", "body_part", "limits_deg"}
_SEGMENT_KEYS = {"link", "mass_fraction", "com_offset_m"}
_REF_KEYS = {"link", "position_m", "quaternion_wxyz"}


def _reject_unknown(mapping: dict, allowed: set[str], where: str) -> None:
    unknown = set(mapping) - allowed
    if unknown:
        raise SkeletonConfigError(
            f"unknown key(s) {sorted(unknown)} in {where}; allowed: {sorted(allowed)}"
        )


def _floats(value, n: int, where: str) -> tuple[float, ...]:
    if not isinstance(value, (list, tuple)) or len(value) != n:
        raise SkeletonConfigError(f"{where}: expected a list of {n} numbers, got {value!r}")
    try:
        return tuple(float(v) for v in value)
    except (TypeError, ValueError) as exc:
        raise SkeletonConfigError(f"{where}: non-numeric entry ({exc})") from exc


def load_skeleton_config(source) -> SkeletonDescriptor:
    """Parse a skeleton config document (path, text, or open file).

    Angles appear in degrees in the file and are converted to radians here.
    Unknown keys are rejected outright. Structural problems raise
    SkeletonConfigError; invariant violations are left for validate_skeleton.
    """
    if hasattr(source, "read"):
        text = source.read()
    else:
        source = str(source)
        if "\n" in source:
            text = source
        else:
            with open(source, "r", encoding="utf-8") as fh:
                text = fh.read()

    try:
        doc = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        raise SkeletonConfigError(f"not valid YAML: {exc}") from exc
    if not isinstance(doc, dict):
        raise SkeletonConfigError("config root must be a mapping")
    _reject_unknown(doc, _TOP_KEYS, "config root")
    skel = doc.get("skeleton")
    if not isinstance(skel, dict):
        raise SkeletonConfigError("missing 'skeleton' section")
    _reject_unknown(skel, _SKEL_KEYS, "skeleton")

    links_raw = skel.get("links")
    if not isinstance(links_raw, list) or not all(isinstance(l, str) for l in links_raw):
        raise SkeletonConfigError("'links' must be a list of identifiers")
    links = tuple(links_raw)

    joints: list[JointDescriptor] = []
    for idx, jraw in enumerate(skel.get("joints") or []):
        where = f"joints[{idx}]"
        if not isinstance(jraw, dict):
            raise SkeletonConfigError(f"{where}: expected a mapping")
        _reject_unknown(jraw, _JOINT_KEYS, where)
        try:
            joint_id = str(jraw["id"])
            parent_link = str(jraw["parent_link"])
            child_link = str(jraw["child_link"])
            part_raw = str(jraw["body_part"])
            limits_deg = jraw["limits_deg"]
        except KeyError as exc:
            raise SkeletonConfigError(f"{where}: missing key {exc}") from exc
        try:
            body_part = BodyPart(part_raw)
        except ValueError as exc:
            raise SkeletonConfigError(
                f"{where}: unknown body part '{part_raw}' "
                f"(one of {[p.value for p in BodyPart]})"
            ) from exc
        if not isinstance(limits_deg, list) or not limits_deg:
            raise SkeletonConfigError(f"{where}: limits_deg must be a non-empty list")
        limits = []
        for d, pair in enumerate(limits_deg):
            lo, hi = _floats(pair, 2, f"{where}.limits_deg[{d}]")
            limits.append(
                DoFLimit(joint_id, d, math.radians(lo), math.radians(hi))
            )
        joints.append(
            JointDescriptor(
                joint_id=joint_id,
                name=str(jraw.get("name", joint_id)),
                parent_link=parent_link,
                child_link=child_link,
                dof_count=len(limits),
                limits=tuple(limits),
                body_part=body_part,
            )
        )

    segments: list[SegmentParameter] = []
    for idx, sraw in enumerate(skel.get("segments") or []):
        where = f"segments[{idx}]"
        if not isinstance(sraw, dict):
            raise SkeletonConfigError(f"{where}: expected a mapping")
        _reject_unknown(sraw, _SEGMENT_KEYS, where)
        try:
            segments.append(
                SegmentParameter(
                    link_id=str(sraw["link"]),
                    mass_fraction=float(sraw["mass_fraction"]),
                    com_offset=_floats(sraw["com_offset_m"], 3, f"{where}.com_offset_m"),
                )
            )
        except KeyError as exc:
            raise SkeletonConfigError(f"{where}: missing key {exc}") from exc

    ref_poses: dict[str, tuple[Vec3, Quat]] = {}
    for idx, rraw in enumerate(skel.get("reference_posture") or []):
        where = f"reference_posture[{idx}]"
        if not isinstance(rraw, dict):
            raise SkeletonConfigError(f"{where}: expected a mapping")
        _reject_unknown(rraw, _REF_KEYS, where)
        try:
            link = str(rraw["link"])
            pos = _floats(rraw["position_m"], 3, f"{where}.position_m")
            quat = _floats(rraw["quaternion_wxyz"], 4, f"{where}.quaternion_wxyz")
        except KeyError as exc:
            raise SkeletonConfigError(f"{where}: missing key {exc}") from exc
        ref_poses[link] = (pos, quat)

    return SkeletonDescriptor(
        joints=tuple(joints),
        links=links,
        segments=tuple(segments),
        reference=ReferencePosture(poses=ref_poses),
        world_frame=str(skel.get("world_frame", "world")),
        root_link=str(skel.get("root_link", "pelvis")),
    )


def default_skeleton() -> SkeletonDescriptor:
    """The shipped 15-joint descriptor (always passes validate_skeleton)."""
    text = resources.files("ergokit.data").joinpath("default_skeleton.cfg").read_text()
    return load_skeleton_config(text)
