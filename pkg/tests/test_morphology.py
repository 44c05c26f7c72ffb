import pytest

from modloco.morphology import (
    Attachment,
    BodyGraph,
    MalformedBodyError,
    Module,
    ModuleKind,
    Side,
    UnknownPresetError,
    assign_coordinates,
    body_from_dict,
    body_to_dict,
    cpg_topology,
    mirror_east_west,
    preset,
    validate,
)

EXPECTED_DIMENSIONS = {"spider": 18, "gecko": 13, "baby": 16}
EXPECTED_JOINTS = {"spider": 8, "gecko": 6, "baby": 7}


def single_core():
    return BodyGraph("lone", (Module("core", ModuleKind.CORE),), ())


def core_with_one_joint(face="W"):
    return BodyGraph(
        "one-joint",
        (Module("core", ModuleKind.CORE), Module("j", ModuleKind.JOINT)),
        (Attachment("core", "j", face),),
    )


@pytest.mark.parametrize("name", EXPECTED_DIMENSIONS)
def test_preset_genome_dimensions(name):
    topo = cpg_topology(preset(name))
    assert len(topo.joints) == EXPECTED_JOINTS[name]
    assert topo.genome_dimension == EXPECTED_DIMENSIONS[name]


def test_presets_are_valid():
    for name in EXPECTED_DIMENSIONS:
        assert validate(preset(name)) == []


def test_spider_coordinates_match_layout():
    coords = assign_coordinates(preset("spider"))
    assert coords["leg_e1"] == (1, 0)
    assert coords["leg_e2"] == (2, 0)
    assert coords["leg_w1"] == (-1, 0)
    assert coords["leg_n2"] == (0, 2)
    assert sorted(coords.values()) == sorted(
        [(1, 0), (2, 0), (-1, 0), (-2, 0), (0, 1), (0, 2), (0, -1), (0, -2)]
    )


def test_spider_edge_structure():
    topo = cpg_topology(preset("spider"))
    assert len(topo.edges) == 10
    # the four innermost joints are pairwise coupled
    inner = {"leg_n1", "leg_e1", "leg_s1", "leg_w1"}
    inner_edges = [e for e in topo.edges if set(e) <= inner]
    assert len(inner_edges) == 6
    # each limb couples its two joints
    for a, b in (("leg_n1", "leg_n2"), ("leg_e1", "leg_e2"),
                 ("leg_s1", "leg_s2"), ("leg_w1", "leg_w2")):
        assert tuple(sorted((a, b), key=lambda x: x)) in {tuple(sorted(e)) for e in topo.edges}


def test_baby_has_elongated_right_limb():
    coords = assign_coordinates(preset("baby"))
    assert coords["arm_e2"] == (3, 0)
    topo = cpg_topology(preset("baby"))
    sides = [j.side for j in topo.joints]
    assert sides.count(Side.RIGHT) == 2
    assert sides.count(Side.LEFT) == 1
    assert sides.count(Side.MIDDLE) == 4


def test_single_core_has_no_joints():
    assert assign_coordinates(single_core()) == {}
    assert cpg_topology(single_core()).genome_dimension == 0


def test_west_joint_is_left():
    topo = cpg_topology(core_with_one_joint("W"))
    (j,) = topo.joints
    assert j.coord == (-1, 0)
    assert j.side is Side.LEFT


def test_side_partition_covers_all_joints():
    for name in EXPECTED_DIMENSIONS:
        topo = cpg_topology(preset(name))
        counts = sum(
            j.side in (Side.LEFT, Side.MIDDLE, Side.RIGHT) for j in topo.joints
        )
        assert counts == len(topo.joints)


def test_mirroring_swaps_left_and_right():
    for name in EXPECTED_DIMENSIONS:
        topo = cpg_topology(preset(name))
        mirrored = cpg_topology(mirror_east_west(preset(name)))
        lefts = {j.joint_id for j in topo.joints if j.side is Side.LEFT}
        rights = {j.joint_id for j in topo.joints if j.side is Side.RIGHT}
        m_lefts = {j.joint_id for j in mirrored.joints if j.side is Side.LEFT}
        m_rights = {j.joint_id for j in mirrored.joints if j.side is Side.RIGHT}
        assert m_lefts == rights
        assert m_rights == lefts
        assert len(mirrored.edges) == len(topo.edges)


def test_topology_is_deterministic():
    a = cpg_topology(preset("gecko"))
    b = cpg_topology(body_from_dict(body_to_dict(preset("gecko"))))
    assert a == b


def test_duplicate_core_detected():
    body = BodyGraph(
        "twin",
        (Module("core", ModuleKind.CORE), Module("core2", ModuleKind.CORE)),
        (Attachment("core", "core2", "N"),),
    )
    assert "duplicate-core" in validate(body)


def test_coordinate_collision_detected():
    # Four modules looping back onto the core's cell: E then N then W lands
    # on (0, 1), then S collides with the core at (0, 0).
    body = BodyGraph(
        "loopback",
        (
            Module("core", ModuleKind.CORE),
            Module("a", ModuleKind.BRICK),
            Module("b", ModuleKind.BRICK),
            Module("c", ModuleKind.BRICK),
        ),
        (
            Attachment("core", "a", "E"),
            Attachment("a", "b", "N"),
            Attachment("b", "c", "W"),
        ),
    )
    # c sits at (0, 1): no collision yet
    assert validate(body) == []
    looped = BodyGraph(
        "loopback2",
        body.modules + (Module("d", ModuleKind.BRICK),),
        body.attachments + (Attachment("c", "d", "S"),),
    )
    assert "coordinate-collision" in validate(looped)
    with pytest.raises(MalformedBodyError):
        assign_coordinates(looped)


def test_face_reuse_detected():
    body = BodyGraph(
        "reuse",
        (
            Module("core", ModuleKind.CORE),
            Module("a", ModuleKind.BRICK),
            Module("b", ModuleKind.BRICK),
        ),
        (Attachment("core", "a", "E"), Attachment("core", "b", "E")),
    )
    assert "face-reuse" in validate(body)


def test_unknown_preset():
    with pytest.raises(UnknownPresetError):
        preset("newt")


def test_body_json_round_trip():
    body = preset("baby")
    assert body_from_dict(body_to_dict(body)) == body
