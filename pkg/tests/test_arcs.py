import itertools
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from localarc.arcs import (
    KArc,
    LocalArcFamily,
    NotAnArc,
    NotVerified,
    TooLarge,
    derive_phi,
    family_from_dict,
    family_to_dict,
    is_arc,
    is_semiarc,
    is_t_quasiarc,
    lrc_params,
    reduce_uniformity,
    sample_verify,
    secant_family,
    secants_of,
    tangent_profile,
    uncovered_line_count,
    verify_local_arc,
    verify_local_arc_oracle,
    verify_mwise,
)
from localarc.plane import make_plane

P5 = make_plane(5, "planar")
P7 = make_plane(7, "planar")
P13 = make_plane(13, "planar")
H4 = make_plane(4, "homogeneous")


def column_pairs(plane):
    f = plane.field
    return [
        (plane.affine_point(0, c), plane.affine_point(1, f.add(c, 1)))
        for c in range(plane.q)
    ]


def conic(plane):
    f = plane.field
    return [plane.affine_point(x, f.mul(2, f.mul(x, x))) for x in range(plane.q)]


def oval(plane):
    return conic(plane) + [plane.infinity_point]


def test_column_pair_family_is_valid():
    fam = LocalArcFamily(P5, column_pairs(P5))
    assert verify_local_arc(fam).ok
    assert verify_local_arc_oracle(fam).ok
    assert fam.k == 2 and fam.n_sets == 5 and fam.total_points == 10


def test_overlap_detected_with_witness():
    fam = LocalArcFamily(P5, [(0, 6), (6, 12)])
    rep = verify_local_arc(fam)
    assert not rep.ok
    assert rep.violation.kind == "overlap"
    assert rep.violation.points == (6,)
    assert rep.violation.sets == (0, 1)
    assert not verify_local_arc_oracle(fam).ok


def test_single_set_collinearity_detected():
    pts = tuple(P5.affine_point(0, y) for y in range(3))
    fam = LocalArcFamily(P5, [pts])
    rep = verify_local_arc(fam)
    assert not rep.ok and rep.violation.kind == "collinear"
    assert rep.violation.line == P5.vertical_line(0)
    assert len(rep.violation.points) >= 3
    assert all(P5.incident(p, rep.violation.line) for p in rep.violation.points)


def test_cross_set_secant_violation():
    a = (P5.affine_point(0, 0), P5.affine_point(0, 1))
    b = (P5.affine_point(0, 2), P5.affine_point(1, 0))
    fam = LocalArcFamily(P5, [a, b])
    rep = verify_local_arc(fam)
    assert not rep.ok
    assert rep.violation.sets == (0, 1)
    assert not verify_local_arc_oracle(fam).ok


def test_three_singletons_on_a_line_pass_pairwise_fail_triplewise():
    fam = LocalArcFamily(P5, [(P5.affine_point(0, y),) for y in range(3)])
    assert verify_local_arc(fam).ok
    assert verify_mwise(fam, 2).ok
    rep = verify_mwise(fam, 3)
    assert not rep.ok and len(rep.violation.sets) == 3
    with pytest.raises(ValueError):
        verify_mwise(fam, 1)
    with pytest.raises(ValueError):
        verify_mwise(fam, 4)


def test_mwise_agrees_with_pairwise_at_m2():
    fams = [
        LocalArcFamily(P5, column_pairs(P5)),
        LocalArcFamily(P5, [(0, 6), (12, 18)]),
        LocalArcFamily(P5, [(P5.affine_point(0, y),) for y in range(3)]),
    ]
    for fam in fams:
        assert verify_mwise(fam, 2).ok == verify_local_arc(fam).ok


def test_oval_partition_is_mwise_for_every_m():
    for q in (5, 7, 9, 11):
        plane = make_plane(q, "planar")
        pts = oval(plane)
        for k in (2, 3):
            n = len(pts) // k
            fam = LocalArcFamily(plane, [tuple(pts[i * k:(i + 1) * k]) for i in range(n)])
            for m in range(2, n + 1):
                assert verify_mwise(fam, m).ok


@settings(deadline=None, max_examples=250)
@given(data=st.data())
def test_fast_matches_oracle_on_random_families(data):
    plane = data.draw(st.sampled_from([P5, P7, H4]))
    k = data.draw(st.integers(min_value=1, max_value=3))
    n_sets = data.draw(st.integers(min_value=1, max_value=5))
    pts = data.draw(
        st.lists(
            st.integers(min_value=0, max_value=plane.n_points - 1),
            min_size=k * n_sets,
            max_size=k * n_sets,
            unique=True,
        )
    )
    fam = LocalArcFamily(plane, [tuple(pts[i * k:(i + 1) * k]) for i in range(n_sets)])
    rf, ro = verify_local_arc(fam), verify_local_arc_oracle(fam)
    assert rf.ok == ro.ok
    if not rf.ok and rf.violation.kind == "collinear":
        ln = rf.violation.line
        assert all(plane.incident(p, ln) for p in rf.violation.points)
        assert len(rf.violation.points) >= 3
        assert len(rf.violation.sets) <= 2


def random_perturbed_family(rng):
    """A family built by construction then optional sabotage."""
    q = rng.choice([5, 7, 9])
    plane = make_plane(q, rng.choice(["planar", "homogeneous"]))
    style = rng.randrange(3)
    if style == 0:
        pts = [plane.affine_point(x, rng.randrange(q)) for x in range(q)]
        k = rng.choice([1, 2])
    else:
        f = plane.field
        pts = [plane.affine_point(x, f.mul(2, f.mul(x, x))) for x in range(q)]
        if style == 2:
            pts.append(plane.infinity_point)
        k = rng.choice([2, 3, 4])
    rng.shuffle(pts)
    n = max(1, len(pts) // k)
    sets = [list(pts[i * k:(i + 1) * k]) for i in range(n)]
    move = rng.randrange(4)
    if move == 0 and len(sets) >= 2:  # plant an overlap
        sets[0][0] = sets[1][0]
    elif move == 1:  # swap in a random point
        s = rng.randrange(len(sets))
        sets[s][rng.randrange(len(sets[s]))] = rng.randrange(plane.n_points)
    elif move == 2:  # add an unrelated random set
        extra = rng.sample(range(plane.n_points), k)
        sets.append(extra)
    return LocalArcFamily(plane, [tuple(s) for s in sets])


def test_equivalence_suite_500_cases():
    rng = random.Random(0xA5C3)
    disagreements = 0
    for _ in range(500):
        fam = random_perturbed_family(rng)
        assert fam.total_points <= 60
        if verify_local_arc(fam).ok != verify_local_arc_oracle(fam).ok:
            disagreements += 1
    assert disagreements == 0


def test_subfamily_of_verified_family_verifies():
    fam = LocalArcFamily(P7, column_pairs(P7))
    assert verify_local_arc(fam).ok
    for keep in itertools.combinations(range(fam.n_sets), 3):
        sub = LocalArcFamily(P7, [fam.sets[i] for i in keep])
        assert verify_local_arc(sub).ok


def test_oracle_size_guard():
    fam = LocalArcFamily(P5, column_pairs(P5))
    with pytest.raises(TooLarge):
        verify_local_arc_oracle(fam, limit=5)


def test_sample_verify_is_deterministic_and_replayable():
    bad = LocalArcFamily(
        P5,
        [
            (P5.affine_point(0, 0), P5.affine_point(0, 1)),
            (P5.affine_point(0, 2), P5.affine_point(1, 0)),
        ],
    )
    r1 = sample_verify(bad, 64, seed=42)
    r2 = sample_verify(bad, 64, seed=42)
    assert r1 == r2
    assert not r1.ok and r1.seed == 42
    good = LocalArcFamily(P5, column_pairs(P5))
    rep = sample_verify(good, 512, seed=7)
    assert rep.ok and rep.pairs_checked == 512
    with pytest.raises(ValueError):
        sample_verify(good, 0)


def test_sample_verify_finds_planted_overlap():
    fam = LocalArcFamily(P5, [(0, 6), (6, 12)])
    rep = sample_verify(fam, 16, seed=0)
    assert not rep.ok and rep.violation.kind == "overlap"


def test_is_arc_and_secants():
    pts = conic(P7)
    assert is_arc(P7, pts)
    assert not is_arc(P7, [P7.affine_point(0, y) for y in range(3)])
    with pytest.raises(ValueError):
        is_arc(P7, [0, 0, 1])
    assert len(secants_of(P7, pts)) == len(pts) * (len(pts) - 1) // 2
    with pytest.raises(NotAnArc):
        secants_of(P7, [P7.affine_point(0, y) for y in range(3)])


def test_squares_on_the_parabola_are_collinear():
    # (0,0), (1,1), (2,4) all satisfy y = x^2, which is a line here
    pts = [P13.affine_point(0, 0), P13.affine_point(1, 1), P13.affine_point(2, 4)]
    assert not is_arc(P13, pts)
    assert P13.join(pts[0], pts[1]) == P13.parse_line("[0,0]")


def test_conic_with_infinity_is_an_oval():
    pts = oval(P7)
    assert len(pts) == P7.q + 1
    assert is_arc(P7, pts)
    assert is_semiarc(P7, pts, 1)
    assert is_t_quasiarc(P7, pts, 1)
    assert not is_t_quasiarc(P7, pts, 2)
    assert sorted(tangent_profile(P7, conic(P7)).values()) == [2] * P7.q
    assert is_t_quasiarc(P7, conic(P7), 2)


def test_karc_validates_unless_trusted():
    arc = KArc(P5, conic(P5))
    assert arc.secants == secants_of(P5, arc.points)
    with pytest.raises(NotAnArc):
        KArc(P5, [P5.affine_point(0, y) for y in range(3)])
    a = KArc(P5, [P5.affine_point(0, y) for y in range(3)], trusted=True)
    assert a.k == 3 and a.points[0] in a


def test_secant_family_alignment():
    fam = LocalArcFamily(P5, column_pairs(P5))
    secs = secant_family(fam)
    assert len(secs) == fam.n_sets
    for s, lines in zip(fam.sets, secs):
        assert lines == (P5.join(s[0], s[1]),)


def test_derive_phi_is_an_induced_matching():
    fam = LocalArcFamily(P5, column_pairs(P5))
    phi, dual_ok = derive_phi(fam)
    assert dual_ok
    assert len(set(phi)) == fam.n_sets
    for i, ln in enumerate(phi):
        hit = [p for p in fam.sets[i] if P5.incident(p, ln)]
        assert len(hit) == 2
        for j in range(fam.n_sets):
            if j != i:
                assert not any(P5.incident(p, ln) for p in fam.sets[j])


def test_derive_phi_flags_shared_secants():
    # two sets on the same vertical line share their only secant
    fam = LocalArcFamily(
        P5,
        [
            (P5.affine_point(0, 0), P5.affine_point(0, 1)),
            (P5.affine_point(0, 2), P5.affine_point(0, 3)),
        ],
    )
    phi, dual_ok = derive_phi(fam)
    assert len(set(phi)) == 1 and not dual_ok


def test_reduce_uniformity_chain():
    pts = oval(P7)
    fam = LocalArcFamily(P7, [tuple(pts[:4]), tuple(pts[4:])], provenance="seed")
    assert fam.k == 4
    red3 = reduce_uniformity(fam)
    assert red3.k == 3 and red3.n_sets == 2
    assert verify_local_arc(red3).ok
    assert red3.provenance == "seed|reduced"
    red2 = reduce_uniformity(red3)
    assert red2.k == 2
    pairs = reduce_uniformity(red2)
    assert len(pairs) == 2
    for pt, ln in pairs:
        assert P7.incident(pt, ln)


def test_reduce_uniformity_rejects_bad_input():
    with pytest.raises(NotVerified):
        reduce_uniformity(LocalArcFamily(P5, [(0, 6), (6, 12)]))
    with pytest.raises(ValueError):
        reduce_uniformity(LocalArcFamily(P5, [(0,), (6,)]))
    with pytest.raises(ValueError):
        reduce_uniformity(LocalArcFamily(P5, [(0, 6), (12,)]))


def test_column_pairs_reduce_to_matching():
    fam = LocalArcFamily(P5, column_pairs(P5))
    pairs = reduce_uniformity(fam)
    assert len(pairs) == 5
    for i, (pt, ln) in enumerate(pairs):
        assert P5.incident(pt, ln)
        for j, (qt, kn) in enumerate(pairs):
            if i != j:
                assert not P5.incident(pt, kn)
                assert not P5.incident(qt, ln)


def test_lrc_export_on_four_uniform_family():
    pts = oval(P7)
    fam = LocalArcFamily(P7, [tuple(pts[:4]), tuple(pts[4:])])
    assert verify_local_arc(fam).ok
    code = lrc_params(fam)
    assert (code.n, code.dim, code.d, code.locality, code.q) == (8, 3, 6, 3, 7)
    assert code.singleton_optimal
    assert code.d == code.n - code.dim - -(-code.dim // code.locality) + 2
    with pytest.raises(ValueError):
        lrc_params(LocalArcFamily(P5, column_pairs(P5)))
    with pytest.raises(ValueError):
        lrc_params(LocalArcFamily(P7, [tuple(pts[:4])]))


def test_uncovered_line_count_per_point():
    empty = LocalArcFamily(P5, [])
    assert uncovered_line_count(empty, P5.affine_point(2, 2)) == P5.q + 1
    one = LocalArcFamily(P5, [(P5.affine_point(0, 0), P5.affine_point(1, 1))])
    # the set's own point sits on exactly one secant
    assert uncovered_line_count(one, P5.affine_point(0, 0)) == P5.q
    # a point off the single secant keeps its full pencil
    off = P5.affine_point(0, 1)
    sec = P5.join(P5.affine_point(0, 0), P5.affine_point(1, 1))
    assert not P5.incident(off, sec)
    assert uncovered_line_count(one, off) == P5.q + 1


def test_family_serialisation_roundtrip():
    fam = LocalArcFamily(P5, column_pairs(P5), provenance="seed")
    data = family_to_dict(fam)
    assert data["q"] == 5
    assert data["sets"][0] == ["(0,0)", "(1,1)"]
    back = family_from_dict(data)
    assert back.materialize() == fam.materialize()
    assert back.provenance == "seed"
    assert back.plane.kind == "planar" and back.plane.q == 5


def test_mixed_sizes_are_data_not_errors():
    fam = LocalArcFamily(P5, [(0, 6), (12,)])
    assert fam.k == 0 and fam.total_points == 3
    assert verify_local_arc(fam).ok
    with pytest.raises(ValueError):
        LocalArcFamily(P5, [(0, 6), (6, 12)], validate=True)
