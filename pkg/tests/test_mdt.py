"""Tests for lambda symbols, the rule checker, the enumerator and generators."""

import pathlib

import pytest

from quadmdt.chow import Cycle, h, l
from quadmdt.corr import compose
from quadmdt.errors import (
    ArityMismatch,
    BoundExceeded,
    NotHeightOne,
    NotNeighbourEligible,
    OutOfWindow,
)
from quadmdt.mdt import (
    MdtPartition,
    RuleSet,
    ShellPattern,
    alpha_cycle,
    check_partition,
    enumerate_mdt,
    forced_connections,
    lambda_set,
    lo,
    mdt_height_one,
    mdt_isotropic_lift,
    mdt_pfister_neighbour,
    mdt_strongly_excellent,
    render_ascii,
    render_svg,
    shell_diagram,
    up,
    vpn_connections,
)
from quadmdt.profile import excellent_pairs, mk_profile, pattern_enumerate

GOLDEN = pathlib.Path(__file__).parent / "golden"


def prof(dim, r, s, pattern=None):
    if pattern is None:
        pattern = [0] + list(range(1, r + 1))
    return mk_profile(dim, r, s, pattern)


P22 = prof(6, 2, 2, [0, 2])


# -- lambda symbols and idempotents ------------------------------------------------


def test_lambda_set_examples():
    assert lambda_set(P22) == (lo(0), lo(1), up(3), up(4))
    p1 = prof(5, 1, 3)
    assert lambda_set(p1) == (lo(0), up(3))
    for r, s in [(3, 0), (4, 2)]:
        p = prof(2 * r + s, r, s)
        assert len(lambda_set(p)) == 2 * r


def test_alpha_cycle_definitions():
    p = prof(8, 3, 2)
    assert alpha_cycle(lo(0), p).cycle == Cycle.of_basis((p, p), (h(0), l(0)))
    assert alpha_cycle(up(p.d_x), p).cycle == Cycle.of_basis((p, p), (l(0), h(0)))
    with pytest.raises(OutOfWindow):
        alpha_cycle(lo(3), p)
    with pytest.raises(OutOfWindow):
        alpha_cycle(up(2), p)


@pytest.mark.parametrize(
    "r,s,pattern",
    [(2, 2, [0, 2]), (3, 2, None), (4, 0, [0, 4]), (4, 1, None), (3, 0, [0, 1, 3])],
)
def test_alpha_cycles_idempotent_and_orthogonal(r, s, pattern):
    p = prof(2 * r + s, r, s, pattern)
    exceptional = p.s == 0 and p.dim % 4 == 2
    symbols = lambda_set(p)
    for a in symbols:
        ca = alpha_cycle(a, p)
        assert compose(ca, ca).cycle == ca.cycle
        for b in symbols:
            if a == b:
                continue
            cb = alpha_cycle(b, p)
            product = compose(ca, cb)
            # The one exception to orthogonality: composing the lower
            # middle-dimensional idempotent into the upper one hits the
            # exceptional product l_{r-1} l_{r-1} = l_0.
            is_exceptional_pair = exceptional and (a, b) == (
                lo(p.r - 1),
                up(p.d_x - (p.r - 1)),
            )
            if is_exceptional_pair:
                assert product.cycle == Cycle.of_basis(
                    (p, p), (h(p.r - 1), h(p.r - 1))
                )
            else:
                assert not product, (str(a), str(b))


def test_exceptional_pair_exists_for_hyperbolic_like_dims():
    # dim = 6, s = 0: the pair (2_lo, 2^up) composes to h^2 x h^2
    p = prof(6, 3, 0, [0, 1, 3])
    out = compose(alpha_cycle(lo(2), p), alpha_cycle(up(2), p))
    assert out.cycle == Cycle.of_basis((p, p), (h(2), h(2)))


# -- forced connections -------------------------------------------------------------


def test_forced_connections_examples():
    assert forced_connections(prof(5, 2, 1)) == ((lo(0), up(3)), (lo(1), up(2)))
    assert forced_connections(prof(7, 2, 3)) == ((lo(0), up(5)), (lo(1), up(4)))
    assert forced_connections(P22) == ((lo(0), up(3)), (lo(1), up(4)))


def test_forced_connections_cover_lambda():
    for r, s in [(3, 0), (4, 2), (5, 1)]:
        for pattern in pattern_enumerate(r, s):
            p = prof(2 * r + s, r, s, pattern)
            pairs = forced_connections(p)
            los = {a for a, _ in pairs}
            ups = {b for _, b in pairs}
            assert los == set(lambda_set(p)[: p.r])
            assert ups == set(lambda_set(p)[p.r :])


def test_vpn_connections_gating():
    # dim 6 type (2,2): m = 2 in every pattern since r = 2
    assert vpn_connections(prof(6, 2, 2, [0, 1, 2])) == ((lo(0), up(3)), (lo(1), up(4)))
    # dim 8 type (3,2): the form itself is not forced, but kernel 1 is (2,2)
    assert vpn_connections(prof(8, 3, 2, [0, 1, 2, 3])) == (
        (lo(1), up(4)),
        (lo(2), up(5)),
    )
    # dim 10 type (3,4) pattern [0,1,3]: nothing is forced
    assert vpn_connections(prof(10, 3, 4, [0, 1, 3])) == ()
    # ... unless the caller asserts VPN-ness
    assert vpn_connections(prof(10, 3, 4, [0, 1, 3]), assumed=True) == (
        (lo(0), up(7)),
        (lo(1), up(8)),
    )


# -- the checker ---------------------------------------------------------------------


def blocks(profile, *groups):
    return MdtPartition.of(profile, [tuple(g) for g in groups])


def test_check_height_one_clean():
    part = blocks(P22, [lo(0), up(3)], [lo(1), up(4)])
    assert check_partition(P22, part) == ()


def test_check_dual_violation():
    part = blocks(P22, [lo(0), lo(1)], [up(3), up(4)])
    rules = {v.rule for v in check_partition(P22, part)}
    assert "R-DUAL" in rules


def test_check_parity_violation_on_singleton():
    part = blocks(P22, [lo(0)], [lo(1), up(3), up(4)])
    rules = {v.rule for v in check_partition(P22, part)}
    assert "R-PARITY" in rules


def test_check_endpoint_violation():
    # merge everything: b of the 0-block becomes 4, expected 3
    part = blocks(P22, [lo(0), lo(1), up(3), up(4)])
    rules = {v.rule for v in check_partition(P22, part)}
    assert "R-ENDPOINT" in rules


def test_check_shift_orbit_violation():
    p = prof(8, 3, 2, [0, 1, 3])  # duals: 0-6, 1-4, 2-5
    # pair shell-2 blocks inconsistently: {1,5}, {2,4} instead of {1,4},{2,5}
    part = blocks(p, [lo(0), up(6)], [lo(1), up(5)], [lo(2), up(4)])
    rules = {v.rule for v in check_partition(p, part)}
    assert "R-SHIFT" in rules or "R-DUAL" in rules


def test_check_arity_mismatch():
    part = blocks(P22, [lo(0), up(3)], [lo(1), up(4)])
    other = prof(8, 3, 2)
    with pytest.raises(ArityMismatch):
        check_partition(other, part)


def test_partition_validation():
    with pytest.raises(ArityMismatch):
        blocks(P22, [lo(0), up(3)])  # missing symbols
    with pytest.raises(ArityMismatch):
        blocks(P22, [lo(0), lo(0), up(3)], [lo(1), up(4)])  # duplicate
    with pytest.raises(ArityMismatch):
        blocks(P22, [lo(0), lo(2), up(3)], [lo(1), up(4)])  # out of window


def test_partition_json_round_trip():
    part = blocks(P22, [lo(0), up(3)], [lo(1), up(4)])
    data = part.to_json_dict()
    assert MdtPartition.from_json_dict(data, P22) == part


# -- enumerator ----------------------------------------------------------------------


def _raw_set_partitions(items):
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for smaller in _raw_set_partitions(rest):
        for k in range(len(smaller)):
            yield smaller[:k] + [[first] + smaller[k]] + smaller[k + 1 :]
        yield [[first]] + smaller


@pytest.mark.parametrize(
    "dim,r,s,pattern,rules",
    [
        (6, 2, 2, [0, 2], None),
        (6, 2, 2, [0, 1, 2], None),
        (4, 2, 0, [0, 1, 2], None),
        (6, 3, 0, [0, 1, 3], None),
        (8, 3, 2, [0, 1, 3], None),
        (10, 3, 4, [0, 1, 3], None),
        (10, 3, 4, [0, 1, 3], RuleSet.proven().enable("R-EXC")),
        (7, 3, 1, [0, 1, 2, 3], None),
        (8, 3, 2, [0, 1, 2, 3], RuleSet.proven().enable("R-VISHIK")),
    ],
)
def test_enumerator_matches_raw_filter(dim, r, s, pattern, rules):
    # independent check of the atom optimization: filter ALL partitions
    profile = mk_profile(dim, r, s, pattern)
    symbols = list(lambda_set(profile))
    expected = []
    for grouping in _raw_set_partitions(symbols):
        part = MdtPartition.of(profile, [tuple(g) for g in grouping])
        if not check_partition(profile, part, rules):
            expected.append(part)
    expected.sort(key=lambda part: part.blocks)
    got = list(enumerate_mdt(profile, rules))
    assert got == expected


def test_enumerate_height_one_unique():
    out = enumerate_mdt(P22)
    assert out == (mdt_height_one(P22),)


def test_enumerate_pfister_blocks():
    for k in (2, 3):
        p = prof(1 << (k + 1), 1 << k, 0, [0, 1 << k])
        out = enumerate_mdt(p)
        assert len(out) == 1
        assert out[0] == MdtPartition.of(
            p, [(lo(i), up((1 << k) - 1 + i)) for i in range(1 << k)]
        )


def test_enumerate_open_case_dim10():
    p = prof(10, 3, 4, [0, 1, 3])
    proven = enumerate_mdt(p)
    # proven rules must NOT force the excellent pair (1, 8) ...
    assert any(not part.co_blocked(lo(1), up(8)) for part in proven)
    # ... yet must leave at least one partition realizing it
    assert any(part.co_blocked(lo(1), up(8)) for part in proven)
    conjectural = enumerate_mdt(p, RuleSet.proven().enable("R-EXC"))
    assert conjectural
    assert all(part.co_blocked(lo(1), up(8)) for part in conjectural)
    assert all(part.co_blocked(lo(0), up(7)) for part in conjectural)


def test_enumerator_matches_raw_filter_r4():
    # one Bell(8)-sized cross-check with nontrivial shells
    profile = mk_profile(10, 4, 2, [0, 2, 4])
    expected = []
    for grouping in _raw_set_partitions(list(lambda_set(profile))):
        part = MdtPartition.of(profile, [tuple(g) for g in grouping])
        if not check_partition(profile, part):
            expected.append(part)
    expected.sort(key=lambda part: part.blocks)
    assert list(enumerate_mdt(profile)) == expected


def test_enumerate_results_pass_checker():
    for r, s in [(2, 2), (3, 0), (3, 2), (4, 0), (5, 0), (5, 2)]:
        for pattern in pattern_enumerate(r, s):
            p = prof(2 * r + s, r, s, pattern)
            for part in enumerate_mdt(p):
                assert check_partition(p, part) == ()


def test_enumerate_bound_exceeded():
    p = prof(18, 9, 0, [0] + list(range(1, 10)))
    with pytest.raises(BoundExceeded):
        enumerate_mdt(p)
    assert enumerate_mdt(p, max_r=9)  # raising the bound works


def test_rule_set_unknown_id():
    with pytest.raises(ValueError):
        RuleSet.proven().enable("R-NOPE")
    with pytest.raises(ValueError):
        RuleSet(enabled=frozenset({"R-BOGUS"}))


def test_endpoint_reflected_variant_is_auditable():
    # the reflected reading rejects the true height-1 blocks at a > 0,
    # which is exactly why the shifted reading is the default
    part = mdt_height_one(P22)
    reflected = RuleSet(endpoint_variant="reflected")
    rules = {v.rule for v in check_partition(P22, part, reflected)}
    assert "R-ENDPOINT" in rules
    assert check_partition(P22, part) == ()


def test_vishik_rule_behaviour():
    p = prof(8, 4, 0, [0, 2, 4])
    vishik = RuleSet.proven().enable("R-VISHIK")
    # the true MDT (two orbit blocks) passes
    for part in enumerate_mdt(p, vishik):
        assert check_partition(p, part, vishik) == ()
    # the finest dual-pair partition misses 2_lo in the upper block
    finest = blocks(
        p, [lo(0), up(5)], [lo(1), up(6)], [lo(2), up(3)], [lo(3), up(4)]
    )
    rules_hit = {v.rule for v in check_partition(p, finest, vishik)}
    assert "R-VISHIK" in rules_hit


# -- closed-form generators ------------------------------------------------------------


def test_mdt_height_one_examples():
    assert mdt_height_one(P22) == blocks(P22, [lo(0), up(3)], [lo(1), up(4)])
    p1 = prof(5, 1, 3)
    assert mdt_height_one(p1) == blocks(p1, [lo(0), up(3)])
    with pytest.raises(NotHeightOne):
        mdt_height_one(prof(8, 3, 2, [0, 1, 3]))


def test_height_one_inside_enumeration():
    for dim, r, s in [(5, 1, 3), (7, 3, 1), (6, 2, 2), (8, 4, 0)]:
        p = prof(dim, r, s, [0, r])
        assert mdt_height_one(p) in enumerate_mdt(p)


def test_vpn_assumed_contradicts_pattern():
    # asserting VPN-ness on a profile whose pattern lacks m is contradictory:
    # every partition then carries the "m not in pattern" violation
    p = prof(10, 3, 4, [0, 1, 3])
    rules = RuleSet.proven().enable("R-VPN")
    assert enumerate_mdt(p, rules) == ()
    part = enumerate_mdt(p)[0]
    assert any(v.rule == "R-VPN" for v in check_partition(p, part, rules))


def test_mdt_pfister_neighbour_pure():
    p = prof(8, 4, 0, [0, 4])  # a 3-fold general Pfister profile: r = m = 4
    part = mdt_pfister_neighbour(p)
    assert part == mdt_height_one(p)
    with pytest.raises(ArityMismatch):
        mdt_pfister_neighbour(p, mdt_height_one(P22))


def test_mdt_pfister_neighbour_assembled():
    # dim 10 = 2^3 + 2, type (4,2): complementary form is the (2,2) profile
    p = prof(10, 4, 2, [0, 2, 4])
    part = mdt_pfister_neighbour(p, mdt_height_one(P22))
    assert part == blocks(
        p, [lo(0), up(7)], [lo(1), up(8)], [lo(2), up(5)], [lo(3), up(6)]
    )
    # cross-check: the assembled partition is among the enumerated ones
    assert part in enumerate_mdt(p)
    assert check_partition(p, part) == ()


def test_mdt_pfister_neighbour_errors():
    with pytest.raises(NotNeighbourEligible):
        mdt_pfister_neighbour(prof(12, 3, 6, [0, 1, 3]))  # r + s > 2^n
    p = prof(10, 4, 2, [0, 2, 4])
    with pytest.raises(ArityMismatch):
        mdt_pfister_neighbour(p)  # r > m needs the inner partition
    inner_wrong = mdt_height_one(prof(5, 1, 3))
    with pytest.raises(ArityMismatch):
        mdt_pfister_neighbour(p, inner_wrong)


def test_mdt_strongly_excellent_example():
    p, part = mdt_strongly_excellent([4, 2], 1)
    expected = [(lo(i), up(7 + i)) for i in range(5)] + [(lo(5), up(6))]
    assert part == MdtPartition.of(p, expected)
    assert check_partition(p, part) == ()


def test_mdt_strongly_excellent_pfister():
    for k in (2, 3):
        p, part = mdt_strongly_excellent([k + 1], 0)
        assert part == mdt_height_one(p)


def test_mdt_strongly_excellent_small_inside_enumeration():
    p, part = mdt_strongly_excellent([3, 1], 0)  # dim 6, r = 3
    assert part in enumerate_mdt(p)


def test_generators_unique_under_proven_rules():
    # in these cases the closed form is the only partition left standing
    inner = mdt_height_one(prof(4, 1, 2, [0, 1]))
    p = prof(12, 5, 2, [0, 4, 5])
    assert enumerate_mdt(p) == (mdt_pfister_neighbour(p, inner),)
    for n_list, s in [([4, 2], 1), ([4, 2], 0)]:
        sx_profile, sx = mdt_strongly_excellent(n_list, s)
        assert enumerate_mdt(sx_profile) == (sx,)


def test_mdt_isotropic_lift():
    inner = mdt_height_one(P22)
    lifted = mdt_isotropic_lift(1, inner, P22)
    assert lifted.r == 3 and lifted.d_x == 6
    assert lifted.blocks == (
        (lo(0),),
        (lo(1), up(4)),
        (lo(2), up(5)),
        (up(6),),
    )
    singletons = [b for b in lifted.blocks if len(b) == 1]
    assert len(singletons) == 2
    with pytest.raises(ValueError):
        mdt_isotropic_lift(0, inner, P22)


def test_mdt_isotropic_lift_singleton_count():
    inner = mdt_height_one(prof(8, 4, 0, [0, 4]))
    for w in (1, 2, 3):
        lifted = mdt_isotropic_lift(w, inner, prof(8, 4, 0, [0, 4]))
        assert sum(1 for b in lifted.blocks if len(b) == 1) == 2 * w


# -- shell diagrams -------------------------------------------------------------------


def test_shell_diagram_structure():
    d = shell_diagram(ShellPattern(12, [0, 2, 8, 12]))
    assert d.base_widths() == (2, 6, 4)
    assert sum(1 for n in d.nodes if n.row == 0) == 24
    shells = {n.shell for n in d.nodes}
    assert shells == {1, 2, 3}
    assert d.max_row == 5  # tallest pyramid has base width 6


def test_shell_diagram_height_one():
    d = shell_diagram(P22)
    assert d.base_widths() == (2,)
    assert sum(1 for n in d.nodes if n.row == 0) == 4


def test_shell_diagram_golden():
    text = render_ascii(shell_diagram(ShellPattern(12, [0, 2, 8, 12])))
    golden = (GOLDEN / "shell_r12.txt").read_text()
    assert text == golden


def test_render_deterministic():
    shape = ShellPattern(12, [0, 2, 8, 12])
    assert render_svg(shell_diagram(shape)) == render_svg(shell_diagram(shape))
    assert render_ascii(shell_diagram(shape)) == render_ascii(shell_diagram(shape))


def test_shell_diagram_accepts_profiles():
    d = shell_diagram(prof(8, 3, 2, [0, 1, 3]))
    assert d.base_widths() == (1, 2)
    label_row = render_ascii(d).splitlines()[-1]
    assert "0" in label_row and "1" in label_row


# -- structural invariants over enumerated outputs ---------------------------------------


def test_enumerated_partitions_structure():
    for r, s in [(2, 2), (3, 2), (4, 0), (4, 2)]:
        for pattern in pattern_enumerate(r, s):
            p = prof(2 * r + s, r, s, pattern)
            pairs = [(lo(e.a), up(e.b)) for e in excellent_pairs(p)]
            for part in enumerate_mdt(p):
                for block in part.blocks:
                    assert len(block) % 2 == 0
                zero_block = part.block_of(lo(0))
                ups = [sym.index for sym in zero_block if sym.kind == "up"]
                assert max(ups) == p.izhboldin_dim - 1
                # shift orbits: blocks based in a shell come in full orbits
                by_a = {}
                for block in part.blocks:
                    los = [sym.index for sym in block if sym.kind == "lo"]
                    if los:
                        by_a[min(los)] = block
                for t in range(1, p.height + 1):
                    lo_b, hi_b = p.pattern[t - 1], p.pattern[t]
                    members = {a for a in by_a if lo_b <= a < hi_b}
                    if members:
                        assert members == set(range(lo_b, hi_b))
