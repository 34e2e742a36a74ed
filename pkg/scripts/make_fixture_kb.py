"""Regenerate the hand-built embedding fixture KB.

Each term gets a topic profile over eight hand-chosen axes; a small
deterministic per-term offset keeps vectors distinct inside a topic.

    python scripts/make_fixture_kb.py src/designnet/data/fixture_embedding.kb
"""
import sys
import zlib

AXES = ["shape", "motion", "body", "drive", "control", "power", "material", "context"]

PROFILES = {
    # shape and geometry
    "spherical": {"shape": 1.0, "body": 0.2},
    "ball_shaped": {"shape": 1.0, "body": 0.1},
    "shape": {"shape": 0.9, "context": 0.3},
    "external_shape": {"shape": 0.9, "body": 0.4},
    "spherical_coordinate_system": {"shape": 0.7, "control": 0.3, "context": 0.4},
    "coordinate_system": {"shape": 0.5, "control": 0.3, "context": 0.5},
    # robots
    "robot": {"body": 0.6, "control": 0.5, "motion": 0.4},
    "spherical_robot": {"shape": 0.7, "body": 0.6, "motion": 0.4},
    "mobile_robot": {"motion": 0.8, "body": 0.5, "control": 0.3},
    "spherical_mobile_robot": {"shape": 0.6, "motion": 0.7, "body": 0.5},
    "stationary": {"motion": -0.4, "body": 0.4, "context": 0.6},
    "stanford_arm": {"body": 0.6, "drive": 0.5, "context": 0.3},
    "arm": {"body": 0.7, "drive": 0.3},
    # locomotion
    "mobile": {"motion": 0.9, "context": 0.2},
    "mobility": {"motion": 0.9, "control": 0.2},
    "move": {"motion": 0.8, "context": 0.5},
    "rolling": {"motion": 1.0, "shape": 0.3},
    "rolling_motion": {"motion": 1.0, "shape": 0.4, "drive": 0.2},
    "motion": {"motion": 0.9, "context": 0.3},
    "surface": {"motion": 0.4, "material": 0.4, "context": 0.4},
    "operate": {"control": 0.5, "motion": 0.3, "context": 0.6},
    "transform": {"shape": 0.5, "body": 0.5, "context": 0.4},
    "reconfigurable": {"shape": 0.5, "body": 0.6, "control": 0.2},
    # body and structure
    "body": {"body": 0.9, "context": 0.4},
    "shell": {"body": 0.8, "material": 0.4, "shape": 0.3},
    "spherical_shell": {"body": 0.8, "shape": 0.6, "material": 0.3},
    "structure": {"body": 0.8, "context": 0.3},
    "seal": {"body": 0.6, "material": 0.5},
    "closed": {"body": 0.5, "material": 0.3, "context": 0.4},
    "nature": {"context": 0.9},
    "sense": {"context": 1.0},
    "outside_environment": {"context": 0.7, "material": 0.2, "body": 0.3},
    "environment": {"context": 0.8, "motion": 0.2},
    # drive train
    "internal_driving_unit": {"drive": 1.0, "body": 0.3, "power": 0.2},
    "driving": {"drive": 0.9, "motion": 0.4},
    "drive": {"drive": 1.0, "motion": 0.3},
    "drive_mechanism": {"drive": 1.0, "body": 0.2},
    "mechanism": {"drive": 0.8, "body": 0.3},
    "pendulum_driven_system": {"drive": 0.9, "motion": 0.5},
    "center_of_mass": {"drive": 0.6, "motion": 0.5, "body": 0.3},
    "mass": {"drive": 0.4, "body": 0.4, "context": 0.3},
    "joint": {"drive": 0.6, "body": 0.5},
    "rotary_joint": {"drive": 0.7, "body": 0.5, "motion": 0.2},
    "prismatic_joint": {"drive": 0.7, "body": 0.5},
    "unit": {"drive": 0.4, "control": 0.4, "context": 0.4},
    "internal": {"body": 0.5, "context": 0.5},
    "idu": {"drive": 0.9, "body": 0.3, "power": 0.2},
    "system": {"control": 0.4, "context": 0.6},
    # control and electronics
    "control": {"control": 1.0},
    "external_control_unit": {"control": 1.0, "body": 0.2},
    "remotely_controlled": {"control": 0.9, "motion": 0.3},
    "teleoperated": {"control": 0.9, "motion": 0.3},
    "autonomous": {"control": 0.8, "motion": 0.4},
    "communication": {"control": 0.9, "power": 0.2},
    "wireless": {"control": 0.8, "power": 0.3},
    "data": {"control": 0.7, "context": 0.3},
    "data_logging": {"control": 0.9, "context": 0.2},
    "navigation": {"control": 0.8, "motion": 0.4},
    "navigation_system": {"control": 0.9, "motion": 0.4},
    "external": {"context": 0.6, "body": 0.3},
    "application": {"context": 0.9, "control": 0.2},
    "utilize": {"context": 0.8, "power": 0.2},
    # power
    "power": {"power": 1.0},
    "power_source": {"power": 1.0, "drive": 0.2},
    "battery": {"power": 1.0, "material": 0.2},
    "solar_cell": {"power": 0.9, "material": 0.4},
    # materials
    "material": {"material": 1.0},
    "solid_transparent_material": {"material": 1.0, "body": 0.3},
    "transparent": {"material": 0.9, "shape": 0.1},
    "opaque": {"material": 0.9, "shape": 0.1},
    "flexible": {"material": 0.8, "body": 0.3},
    "flexible_material": {"material": 1.0, "body": 0.3},
}


def vector(term: str) -> list[float]:
    profile = PROFILES[term]
    base = [profile.get(axis, 0.0) for axis in AXES]
    h = zlib.crc32(term.encode("utf-8"))
    # offsets in [-0.05, 0.05], stable across Python versions
    return [round(v + ((h >> (4 * k)) % 11 - 5) / 100.0, 4) for k, v in enumerate(base)]


def main(path: str) -> None:
    lines = [f"{len(PROFILES)} {len(AXES)}"]
    for term in PROFILES:
        lines.append(" ".join([term, *(repr(c) for c in vector(term))]))
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")


if __name__ == "__main__":
    main(sys.argv[1] if len(sys.argv) > 1 else "fixture_embedding.kb")
