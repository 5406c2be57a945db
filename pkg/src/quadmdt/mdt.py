"""Lambda symbols, MDT partitions, the rule library, and the enumerator.

Lambda(X) consists of 2r formal symbols: i_lo for 0 <= i < r and i^up for
d_X - r < i <= d_X, indexing the diagonal idempotents h^i x l_i and
l_{d_X-i} x h^{d_X-i}.  A candidate MDT is a partition of Lambda(X); the
checker evaluates a configurable library of necessary conditions against
it, and the enumerator lists every partition that no enabled condition
excludes.

The engine computes "partitions not excluded by the selected necessary
conditions given (dim, type, pattern)" -- it does not decide which of
them is the MDT of an actual form.

Rule identifiers and provenance:

  R-PARITY    proven        blocks of odd size only occur for isotropic forms
  R-DUAL      proven        splitting-pattern connections must be co-blocked
  R-ENDPOINT  proven        b(L) = a(L) + d_X + 1 - j_{t-1} - j_t per block
  R-SHIFT     proven        blocks based in a shell form a full shift orbit
  R-UPPER     proven        structure of the block containing 0_lo
  R-KARPENKO  proven        2-adic divisibility inside the upper block
  R-EXC       proven s<=1   excellent pairs co-blocked (conjectural for s>=2)
  R-VPN       proven*       virtual-Pfister-neighbour connections; applied
                            automatically when the discrete data forces
                            VPN-ness (maximal splitting, m=1, or m=2 with 2
                            in the pattern) at any tower level; enabling the
                            rule explicitly asserts the form itself is a VPN
  R-VISHIK    off           interpretation-sensitive reading of the
                            stable-birational connection theorem

The default ("proven") set enables the first eight in their automatic
scope.  Enabling R-EXC / R-VPN / R-VISHIK by name widens them to their
asserted, unconditional form.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .chow import Cycle, h, l
from .corr import Correspondence
from .errors import (
    ArityMismatch,
    BoundExceeded,
    NotHeightOne,
    NotNeighbourEligible,
    OutOfWindow,
    PatternInvalid,
)
from .profile import QuadricProfile, alternating_2adic, strongly_excellent_profile, v2

LO = "lo"
UP = "up"


@dataclass(frozen=True)
class Rule:
    """Registry entry for a necessary condition."""

    id: str
    provenance: str  # "proven" | "conjectural" | "interpretation-sensitive"
    summary: str


RULES = {
    rule.id: rule
    for rule in (
        Rule("R-PARITY", "proven", "blocks have even cardinality"),
        Rule("R-DUAL", "proven", "splitting-pattern connections co-blocked"),
        Rule("R-ENDPOINT", "proven", "b(L) determined by a(L) and the shell"),
        Rule("R-SHIFT", "proven", "shell blocks form a full shift orbit"),
        Rule("R-UPPER", "proven", "structure of the block containing 0_lo"),
        Rule("R-KARPENKO", "proven", "2-adic bounds inside the upper block"),
        Rule(
            "R-EXC",
            "conjectural",
            "excellent pairs co-blocked (proven, and auto-applied, for s <= 1)",
        ),
        Rule(
            "R-VPN",
            "proven",
            "virtual-Pfister-neighbour connections (auto-applied when forced)",
        ),
        Rule(
            "R-VISHIK",
            "interpretation-sensitive",
            "expansion-determined lower positions in shell-based blocks",
        ),
    )
}

RULE_IDS = tuple(RULES)

PROVEN_RULE_IDS = frozenset(RULE_IDS) - {"R-VISHIK"}

SEMANTICS_NOTE = (
    "partitions not excluded by the selected necessary conditions "
    "given (dim, type, pattern); not a realizability statement"
)


@dataclass(frozen=True, order=True)
class LambdaSymbol:
    """Formal symbol i_lo or i^up; shifts act by adding to the index."""

    kind: str
    index: int

    def __post_init__(self):
        if self.kind not in (LO, UP):
            raise ValueError("kind must be 'lo' or 'up'")

    def shift(self, j: int) -> "LambdaSymbol":
        return LambdaSymbol(self.kind, self.index + j)

    def __str__(self):
        return "%d_lo" % self.index if self.kind == LO else "%d^up" % self.index


def lo(i: int) -> LambdaSymbol:
    return LambdaSymbol(LO, i)


def up(i: int) -> LambdaSymbol:
    return LambdaSymbol(UP, i)


def lambda_set(profile: QuadricProfile) -> tuple:
    """The 2r symbols of Lambda(X), lower ones first."""
    return tuple(lo(i) for i in range(profile.r)) + tuple(
        up(i) for i in range(profile.d_x - profile.r + 1, profile.d_x + 1)
    )


def alpha_cycle(sym: LambdaSymbol, profile: QuadricProfile) -> Correspondence:
    """Diagonal idempotent attached to a lambda symbol."""
    d_x = profile.d_x
    if sym.kind == LO:
        if not 0 <= sym.index < profile.r:
            raise OutOfWindow("%s outside [0, %d)" % (sym, profile.r))
        pair = (h(sym.index), l(sym.index))
    else:
        if not d_x - profile.r < sym.index <= d_x:
            raise OutOfWindow(
                "%s outside (%d, %d]" % (sym, d_x - profile.r, d_x)
            )
        pair = (l(d_x - sym.index), h(d_x - sym.index))
    return Correspondence(Cycle.of_basis((profile, profile), pair), 1)


def forced_connections(profile: QuadricProfile) -> tuple:
    """Symbol pairs connected by the splitting pattern.

    For each shell t and 0 <= i < i_t this pairs (j_{t-1} + i)_lo with
    (d_X - (j_t - 1 - i))^up.  The range is inclusive of i = i_t - 1:
    stopping one short would leave width-1 shells without connections,
    contradicting the worked low-dimensional cases.
    """
    pairs = []
    p = profile.pattern
    for t in range(1, profile.height + 1):
        for i in range(p[t] - p[t - 1]):
            pairs.append(
                (lo(p[t - 1] + i), up(profile.d_x - (p[t] - 1 - i)))
            )
    return tuple(pairs)


@dataclass(frozen=True)
class MdtPartition:
    """Partition of Lambda(X) into blocks, canonically ordered."""

    blocks: tuple
    r: int
    d_x: int

    def __post_init__(self):
        blocks = tuple(
            tuple(sorted(block)) for block in self.blocks
        )
        blocks = tuple(sorted(blocks, key=lambda b: b[0]))
        object.__setattr__(self, "blocks", blocks)
        seen = set()
        for block in blocks:
            if not block:
                raise ArityMismatch("empty block")
            for sym in block:
                if sym in seen:
                    raise ArityMismatch("symbol %s appears twice" % sym)
                seen.add(sym)
                if sym.kind == LO and not 0 <= sym.index < self.r:
                    raise ArityMismatch("%s outside the lo window" % sym)
                if sym.kind == UP and not self.d_x - self.r < sym.index <= self.d_x:
                    raise ArityMismatch("%s outside the up window" % sym)
        expected = set(
            [lo(i) for i in range(self.r)]
            + [up(i) for i in range(self.d_x - self.r + 1, self.d_x + 1)]
        )
        if seen != expected:
            raise ArityMismatch("blocks do not cover Lambda(X) exactly")

    @classmethod
    def of(cls, profile: QuadricProfile, blocks) -> "MdtPartition":
        return cls(blocks=tuple(tuple(b) for b in blocks), r=profile.r, d_x=profile.d_x)

    def block_of(self, sym: LambdaSymbol) -> tuple:
        for block in self.blocks:
            if sym in block:
                return block
        raise KeyError(sym)

    def co_blocked(self, a: LambdaSymbol, b: LambdaSymbol) -> bool:
        return self.block_of(a) is self.block_of(b)

    def to_json_dict(self) -> dict:
        return {
            "blocks": [
                [{"kind": sym.kind, "i": sym.index} for sym in block]
                for block in self.blocks
            ]
        }

    @classmethod
    def from_json_dict(cls, data: dict, profile: QuadricProfile) -> "MdtPartition":
        try:
            blocks = [
                tuple(LambdaSymbol(entry["kind"], int(entry["i"])) for entry in block)
                for block in data["blocks"]
            ]
        except (KeyError, TypeError, ValueError) as exc:
            raise ArityMismatch("malformed partition JSON: %s" % exc) from exc
        return cls.of(profile, blocks)

    def __str__(self):
        return " | ".join(
            "{" + ", ".join(str(sym) for sym in block) + "}" for block in self.blocks
        )


def _block_a(block):
    los = [sym.index for sym in block if sym.kind == LO]
    return min(los) if los else None


def _block_b(block):
    ups = [sym.index for sym in block if sym.kind == UP]
    return max(ups) if ups else None


def _shift_block(block, j):
    return tuple(sorted(sym.shift(j) for sym in block))


# -- rule set ------------------------------------------------------------------


@dataclass(frozen=True)
class RuleSet:
    """Enabled rule ids plus scope and reading options.

    ``assumed`` widens R-EXC / R-VPN / R-VISHIK beyond their automatic
    (profile-forced) scope: R-EXC then checks excellent pairs for every s,
    R-VPN asserts the form itself is a virtual Pfister neighbour.
    """

    enabled: frozenset = field(default_factory=lambda: PROVEN_RULE_IDS)
    assumed: frozenset = field(default_factory=frozenset)
    endpoint_variant: str = "shifted"  # or "reflected" (audit only)
    vishik_reading: str = "relative"  # or "absolute" (audit only)

    def __post_init__(self):
        for rule in self.enabled | self.assumed:
            if rule not in RULE_IDS:
                raise ValueError("unknown rule id %r" % (rule,))
        if self.endpoint_variant not in ("shifted", "reflected"):
            raise ValueError("endpoint_variant must be 'shifted' or 'reflected'")
        if self.vishik_reading not in ("relative", "absolute"):
            raise ValueError("vishik_reading must be 'relative' or 'absolute'")

    @classmethod
    def proven(cls) -> "RuleSet":
        return cls()

    def enable(self, *rule_ids: str) -> "RuleSet":
        """Opt in to extra rules; scoped rules become unconditional."""
        extra = frozenset(rule_ids)
        for rule in extra:
            if rule not in RULE_IDS:
                raise ValueError("unknown rule id %r" % (rule,))
        return RuleSet(
            enabled=self.enabled | extra,
            assumed=self.assumed | (extra & {"R-EXC", "R-VPN", "R-VISHIK"}),
            endpoint_variant=self.endpoint_variant,
            vishik_reading=self.vishik_reading,
        )


@dataclass(frozen=True)
class Violation:
    rule: str
    witness: str

    def to_json_dict(self) -> dict:
        return {"rule": self.rule, "witness": self.witness}


def _vpn_invariants(profile: QuadricProfile):
    # dim = 2^n + m with 1 <= m <= 2^n
    n = (profile.dim - 1).bit_length() - 1
    return n, profile.dim - (1 << n)


def _vpn_forced(profile: QuadricProfile) -> bool:
    """Discrete data that forces the form to be a virtual Pfister neighbour."""
    _, m = _vpn_invariants(profile)
    if profile.steps[0] == m:  # maximal splitting
        return True
    if m == 1:
        return True
    return m == 2 and 2 in profile.pattern


def vpn_connections(profile: QuadricProfile, assumed: bool = False) -> tuple:
    """Connections contributed by the virtual-Pfister-neighbour lemma.

    Automatic scope walks the splitting tower: whenever the t-th kernel is
    provably a VPN, its connections i_lo -- (2^n + i - 1)^up transport to
    Lambda(X) shifted by j_t.  With ``assumed`` the connections for the
    form itself are added unconditionally.
    """
    pairs = []
    for t in range(profile.height):
        kernel = profile.kernel(t)
        if not (_vpn_forced(kernel) or (assumed and t == 0)):
            continue
        w = profile.pattern[t]
        n, m = _vpn_invariants(kernel)
        for i in range(m):
            pairs.append((lo(i + w), up((1 << n) + i - 1 + w)))
    # dedupe, preserving order
    seen = set()
    out = []
    for pair in pairs:
        if pair not in seen:
            seen.add(pair)
            out.append(pair)
    return tuple(out)


def _excellent_pair_symbols(profile: QuadricProfile) -> tuple:
    from .profile import excellent_pairs

    return tuple((lo(p.a), up(p.b)) for p in excellent_pairs(profile))


def _required_pairs(profile: QuadricProfile, rules: RuleSet) -> tuple:
    """All symbol pairs the enabled rules force into a common block."""
    pairs = []
    if "R-DUAL" in rules.enabled:
        pairs.extend(forced_connections(profile))
    if "R-EXC" in rules.enabled and (profile.s <= 1 or "R-EXC" in rules.assumed):
        pairs.extend(_excellent_pair_symbols(profile))
    if "R-VPN" in rules.enabled:
        pairs.extend(vpn_connections(profile, assumed="R-VPN" in rules.assumed))
    return tuple(pairs)


# -- checker -------------------------------------------------------------------


def check_partition(profile: QuadricProfile, partition: MdtPartition, rules=None):
    """Evaluate every enabled necessary condition; return the violations."""
    if rules is None:
        rules = RuleSet.proven()
    if partition.r != profile.r or partition.d_x != profile.d_x:
        raise ArityMismatch(
            "partition is over (r=%d, d_X=%d), profile needs (r=%d, d_X=%d)"
            % (partition.r, partition.d_x, profile.r, profile.d_x)
        )
    violations = []

    if "R-PARITY" in rules.enabled:
        for block in partition.blocks:
            if len(block) % 2:
                violations.append(
                    Violation("R-PARITY", "odd block {%s}" % _fmt_block(block))
                )

    if "R-DUAL" in rules.enabled:
        for a, b in forced_connections(profile):
            if not partition.co_blocked(a, b):
                violations.append(
                    Violation("R-DUAL", "%s and %s must be co-blocked" % (a, b))
                )

    if "R-ENDPOINT" in rules.enabled:
        violations.extend(_check_endpoint(profile, partition, rules.endpoint_variant))

    if "R-SHIFT" in rules.enabled:
        violations.extend(_check_shift(profile, partition))

    if "R-UPPER" in rules.enabled:
        violations.extend(_check_upper(profile, partition))

    if "R-KARPENKO" in rules.enabled:
        violations.extend(_check_karpenko(profile, partition))

    if "R-EXC" in rules.enabled and (profile.s <= 1 or "R-EXC" in rules.assumed):
        for a, b in _excellent_pair_symbols(profile):
            if not partition.co_blocked(a, b):
                violations.append(
                    Violation("R-EXC", "excellent pair %s, %s split" % (a, b))
                )

    if "R-VPN" in rules.enabled:
        assumed = "R-VPN" in rules.assumed
        if assumed:
            _, m = _vpn_invariants(profile)
            if m not in profile.pattern:
                violations.append(
                    Violation(
                        "R-VPN",
                        "m = %d not in the splitting pattern %s"
                        % (m, list(profile.pattern)),
                    )
                )
        for a, b in vpn_connections(profile, assumed=assumed):
            if not partition.co_blocked(a, b):
                violations.append(
                    Violation("R-VPN", "%s and %s must be co-blocked" % (a, b))
                )

    if "R-VISHIK" in rules.enabled:
        violations.extend(_check_vishik(profile, partition, rules.vishik_reading))

    return tuple(violations)


def _fmt_block(block) -> str:
    return ", ".join(str(sym) for sym in block)


def _check_endpoint(profile, partition, variant):
    out = []
    p = profile.pattern
    for block in partition.blocks:
        a, b = _block_a(block), _block_b(block)
        if a is None or b is None:
            out.append(
                Violation(
                    "R-ENDPOINT",
                    "one-sided block {%s} has no endpoint pair" % _fmt_block(block),
                )
            )
            continue
        t = profile.shell_of(a)
        if variant == "shifted":
            expected = a + profile.d_x + 1 - p[t - 1] - p[t]
        else:  # "reflected" audit reading: b mirrors a about the shell
            expected = profile.d_x - (a + (p[t] - p[t - 1]) - 1)
        if b != expected:
            out.append(
                Violation(
                    "R-ENDPOINT",
                    "block {%s}: b = %d, expected %d" % (_fmt_block(block), b, expected),
                )
            )
    return out


def _check_shift(profile, partition):
    out = []
    p = profile.pattern
    by_a = {}
    for block in partition.blocks:
        a = _block_a(block)
        if a is not None:
            by_a[a] = block
    for t in range(1, profile.height + 1):
        lo_bound, hi_bound = p[t - 1], p[t]
        members = {a: blk for a, blk in by_a.items() if lo_bound <= a < hi_bound}
        if not members:
            continue
        step = hi_bound - lo_bound
        base = members.get(lo_bound)
        if base is None:
            out.append(
                Violation(
                    "R-SHIFT",
                    "shell %d has blocks based at %s but none at j_%d = %d"
                    % (t, sorted(members), t - 1, lo_bound),
                )
            )
            continue
        for k in range(1, step):
            expected = _shift_block(base, k)
            actual = members.get(lo_bound + k)
            if actual is None or tuple(actual) != expected:
                out.append(
                    Violation(
                        "R-SHIFT",
                        "shell %d: block at a = %d must be the base block "
                        "shifted by %d" % (t, lo_bound + k, k),
                    )
                )
        # part (2): lo members of the base block respect the shell widths
        for sym in base:
            if sym.kind != LO:
                continue
            t2 = profile.shell_of(sym.index)
            if sym.index + step > p[t2]:
                out.append(
                    Violation(
                        "R-SHIFT",
                        "base block of shell %d contains %s with %d + %d > j_%d = %d"
                        % (t, sym, sym.index, step, t2, p[t2]),
                    )
                )
    return out


def _check_upper(profile, partition):
    out = []
    upper = partition.block_of(lo(0))
    b = _block_b(upper)
    expected_b = profile.izhboldin_dim - 1
    if b != expected_b:
        out.append(
            Violation(
                "R-UPPER",
                "upper block has b = %s, expected Izh - 1 = %d" % (b, expected_b),
            )
        )
    los = sorted(sym.index for sym in upper if sym.kind == LO)
    if len(upper) != 2:
        if len(los) < 2:
            out.append(
                Violation("R-UPPER", "upper block of size > 2 needs >= 2 lower symbols")
            )
        else:
            mn = los[1]  # smallest positive (los[0] == 0)
            if mn not in profile.pattern[1:-1]:
                out.append(
                    Violation(
                        "R-UPPER",
                        "smallest positive lower index %d is not some j_t, t < h" % mn,
                    )
                )
    if profile.height >= 2:
        j1, j2 = profile.pattern[1], profile.pattern[2]
        inside = [i for i in los if j1 <= i < j2]
        if inside:
            i1, i2 = profile.steps[0], profile.steps[1]
            if i2 % i1:
                out.append(
                    Violation("R-UPPER", "i_1 = %d does not divide i_2 = %d" % (i1, i2))
                )
            expected = list(range(i1, j2 - i1 + 1, i1))
            if inside != expected:
                out.append(
                    Violation(
                        "R-UPPER",
                        "lower indices %s in [j_1, j_2) must be %s" % (inside, expected),
                    )
                )
    return out


def _check_karpenko(profile, partition):
    out = []
    upper = partition.block_of(lo(0))
    if len(upper) <= 2:
        return out
    i1 = profile.steps[0]
    v = (i1 - 1).bit_length()  # smallest v with i1 <= 2^v
    positives = sorted(
        sym.index for sym in upper if sym.kind == LO and sym.index > 0
    )
    for i in positives:
        if i % (1 << v):
            out.append(
                Violation(
                    "R-KARPENKO",
                    "lower index %d in the upper block not divisible by 2^%d" % (i, v),
                )
            )
    if not positives:
        return out
    mn = positives[0]
    interior = list(profile.pattern[1:-1])
    if mn not in interior:
        out.append(
            Violation(
                "R-KARPENKO",
                "smallest positive lower index %d is not some j_t, t < h" % mn,
            )
        )
        return out
    t = interior.index(mn) + 1
    i_next = profile.steps[t]
    if v2(i_next) < v2(i1):
        out.append(
            Violation(
                "R-KARPENKO",
                "v2(i_%d) = %d < v2(i_1) = %d" % (t + 1, v2(i_next), v2(i1)),
            )
        )
    # second theorem; v2(0) counts as +infinity
    gap = mn - i1
    if (gap == 0 or v2(gap) >= v2(i1) + 2) and v2(i_next) > v2(i1) + 1:
        out.append(
            Violation(
                "R-KARPENKO",
                "v2(i_%d) = %d exceeds v2(i_1) + 1 = %d" % (t + 1, v2(i_next), v2(i1) + 1),
            )
        )
    return out


def _check_vishik(profile, partition, reading):
    out = []
    p = profile.pattern
    by_a = {}
    for block in partition.blocks:
        a = _block_a(block)
        if a is not None:
            by_a[a] = block
    for t in range(1, profile.height):
        base = by_a.get(p[t - 1])
        if base is None:
            continue
        m_val = profile.dim - 2 * p[t - 1] - p[t]
        exp = alternating_2adic(m_val)
        tail = 0
        tails = []
        # suffix alternating sums T_k = 2^{n_k} - 2^{n_{k+1}} + ...
        for n_k in reversed(exp.n):
            tail = (1 << n_k) - tail
            tails.append(tail)
        tails.reverse()
        for k in range(1, exp.j + 1):
            pos = (m_val - tails[k - 1]) // 2
            if reading == "relative":
                pos += p[t - 1]
            if not 0 <= pos < profile.r:
                continue
            if lo(pos) not in base:
                out.append(
                    Violation(
                        "R-VISHIK",
                        "block at a = j_%d must contain %s (k = %d)"
                        % (t - 1, lo(pos), k),
                    )
                )
    return out


# -- enumerator ----------------------------------------------------------------


def _set_partitions(items):
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for smaller in _set_partitions(rest):
        for k in range(len(smaller)):
            yield smaller[:k] + [[first] + smaller[k]] + smaller[k + 1 :]
        yield [[first]] + smaller


def enumerate_mdt(profile: QuadricProfile, rules=None, max_r: int = 8) -> tuple:
    """All partitions of Lambda(X) passing every enabled rule.

    Connection-forcing rules (R-DUAL, scoped R-EXC/R-VPN) are propagated
    up front as union-find merges; the surviving atoms are partitioned
    exhaustively and each candidate runs through the full checker, so the
    output agrees with check_partition by construction.  The result is
    canonically sorted and independent of evaluation order (the search is
    embarrassingly parallel; this implementation is sequential).
    """
    if rules is None:
        rules = RuleSet.proven()
    if profile.r > max_r:
        raise BoundExceeded(
            "r = %d exceeds the enumeration bound %d" % (profile.r, max_r)
        )
    symbols = lambda_set(profile)
    parent = {sym: sym for sym in symbols}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(x, y):
        rx, ry = find(x), find(y)
        if rx != ry:
            parent[rx] = ry

    for a, b in _required_pairs(profile, rules):
        union(a, b)
    atoms = {}
    for sym in symbols:
        atoms.setdefault(find(sym), []).append(sym)
    atom_list = sorted(atoms.values(), key=lambda a: min(a))
    # Bell(10) candidate partitions is the practical ceiling; rule sets
    # without R-DUAL leave 2r single-symbol atoms and hit this early.
    if len(atom_list) > 10:
        raise BoundExceeded(
            "%d unconstrained atoms exceed the search bound" % len(atom_list)
        )
    results = []
    for grouping in _set_partitions(atom_list):
        blocks = [tuple(itertools.chain.from_iterable(group)) for group in grouping]
        partition = MdtPartition.of(profile, blocks)
        if not check_partition(profile, partition, rules):
            results.append(partition)
    return tuple(sorted(results, key=lambda part: part.blocks))


# -- closed-form generators ----------------------------------------------------


def mdt_height_one(profile: QuadricProfile) -> MdtPartition:
    """The unique MDT of a nondefective height-1 form: r binary blocks."""
    if profile.height != 1:
        raise NotHeightOne("profile has height %d" % profile.height)
    base = profile.r + profile.s - 1
    blocks = [(lo(i), up(base + i)) for i in range(profile.r)]
    return MdtPartition.of(profile, blocks)


def mdt_pfister_neighbour(profile: QuadricProfile, inner=None) -> MdtPartition:
    """Assemble the MDT of a Pfister neighbour from its complementary form.

    With dim = 2^n + m: the first m blocks are {i_lo, (2^n - 1 + i)^up};
    the rest is the complementary form's partition shifted by m.  The
    complementary profile has type (r - m, s); pass its partition as
    ``inner`` (omit it when r = m).
    """
    n = (profile.dim - 1).bit_length() - 1
    m = profile.dim - (1 << n)
    if profile.r + profile.s > 1 << n:
        raise NotNeighbourEligible(
            "r + s = %d exceeds 2^n = %d" % (profile.r + profile.s, 1 << n)
        )
    if profile.r < m:
        raise NotNeighbourEligible("neighbour profile needs r >= m = %d" % m)
    blocks = [(lo(i), up((1 << n) - 1 + i)) for i in range(m)]
    if profile.r == m:
        if inner:
            raise ArityMismatch("r = m: no complementary partition expected")
    else:
        if inner is None:
            raise ArityMismatch("r > m: need the complementary form's partition")
        if inner.r != profile.r - m or inner.d_x != profile.d_x - 2 * m:
            raise ArityMismatch(
                "inner partition is over (r=%d, d_X=%d); expected (r=%d, d_X=%d)"
                % (inner.r, inner.d_x, profile.r - m, profile.d_x - 2 * m)
            )
        for block in inner.blocks:
            blocks.append(_shift_block(block, m))
    return MdtPartition.of(profile, blocks)


def mdt_strongly_excellent(n_list, s: int):
    """Closed-form MDT of a strongly excellent form.

    Returns (profile, partition); the blocks are
    {0_lo, (2^{n_{i+1}-1} - 1)^up}[m_1 + ... + m_i + j].
    """
    prof, dims = strongly_excellent_profile(n_list, s)
    n_list = tuple(int(n) for n in n_list)
    blocks = []
    offset = 0
    for i, n_i in enumerate(n_list):
        m_i = dims[i] - (1 << (n_i - 1))
        top = (1 << (n_i - 1)) - 1
        for j in range(m_i):
            blocks.append((lo(offset + j), up(top + offset + j)))
        offset += m_i
    partition = MdtPartition.of(prof, blocks)
    return prof, partition


def mdt_isotropic_lift(w: int, inner: MdtPartition, inner_profile: QuadricProfile) -> MdtPartition:
    """MDT of an isotropic form with Witt index w over the given anisotropic part.

    Adds w lower and w upper singletons and shifts the inner blocks by w.
    The result lives over the lifted symbol set (r + w, d_X + 2w); it is
    not a QuadricProfile partition since profiles model anisotropic forms.
    """
    if w < 1:
        raise ValueError("Witt index w must be >= 1")
    if inner.r != inner_profile.r or inner.d_x != inner_profile.d_x:
        raise ArityMismatch("inner partition does not match the inner profile")
    r = inner_profile.r + w
    d_x = inner_profile.d_x + 2 * w
    blocks = [(lo(i),) for i in range(w)]
    blocks += [(up(d_x - i),) for i in range(w)]
    blocks += [_shift_block(block, w) for block in inner.blocks]
    return MdtPartition(blocks=tuple(blocks), r=r, d_x=d_x)


# -- shell diagrams ------------------------------------------------------------


@dataclass(frozen=True)
class ShellPattern:
    """Bare (r, pattern) data for diagram rendering.

    Diagram shape is pure pattern combinatorics; it is deliberately not
    subject to the i_1-bound validation of QuadricProfile, because the
    classical illustration pattern {2, 8, 12} (steps 2, 6, 4) is not
    attainable by any actual splitting tower yet is the canonical picture.
    """

    r: int
    pattern: tuple

    def __post_init__(self):
        object.__setattr__(self, "pattern", tuple(self.pattern))
        p = self.pattern
        if len(p) < 2 or p[0] != 0 or p[-1] != self.r:
            raise PatternInvalid("pattern must run from 0 to r, got %r" % (p,))
        if any(a >= b for a, b in zip(p, p[1:])):
            raise PatternInvalid("pattern must be strictly increasing, got %r" % (p,))

    @property
    def height(self) -> int:
        return len(self.pattern) - 1

    @property
    def steps(self) -> tuple:
        return tuple(b - a for a, b in zip(self.pattern, self.pattern[1:]))


@dataclass(frozen=True)
class ShellNode:
    """One node of the pyramid diagram: h^i x l_{i+j} (left) or mirrored."""

    i: int
    row: int
    side: str  # "left" or "right"
    shell: int  # 1-based internal shell index; rendered label is shell - 1


@dataclass(frozen=True)
class ShellDiagram:
    r: int
    pattern: tuple
    nodes: tuple

    @property
    def max_row(self) -> int:
        return max((node.row for node in self.nodes), default=0)

    def base_widths(self) -> tuple:
        return tuple(b - a for a, b in zip(self.pattern, self.pattern[1:]))


def shell_diagram(shape) -> ShellDiagram:
    """Arrange the essential pairs h^i x l_{i+j} into shells.

    ``shape`` is a QuadricProfile or a ShellPattern.  A node (i, j) with
    j >= 1 exists iff j_{t-1} <= i < j_t - j for some shell t; row 0
    holds all 2r nodes.
    """
    nodes = []
    p = tuple(shape.pattern)
    for t in range(1, len(p)):
        width = p[t] - p[t - 1]
        for j in range(width):
            for i in range(p[t - 1], p[t] - j):
                for side in ("left", "right"):
                    nodes.append(ShellNode(i=i, row=j, side=side, shell=t))
    return ShellDiagram(r=shape.r, pattern=p, nodes=tuple(nodes))


_GAP = 3


def _column(diagram: ShellDiagram, node: ShellNode) -> int:
    if node.side == "left":
        return node.i
    return 2 * diagram.r + _GAP - 1 - node.i


def render_ascii(diagram: ShellDiagram) -> str:
    """Deterministic ASCII rendering, shells labeled 0..h-1 beneath the bases."""
    r = diagram.r
    width = 2 * r + _GAP
    rows = []
    for j in range(diagram.max_row, -1, -1):
        line = [" "] * width
        for node in diagram.nodes:
            if node.row == j:
                line[_column(diagram, node)] = "*"
        rows.append("".join(line).rstrip())
    label = [" "] * width
    p = diagram.pattern
    for t in range(1, len(p)):
        text = str(t - 1)
        left_center = (p[t - 1] + p[t] - 1) // 2
        right_center = (
            (2 * r + _GAP - p[t]) + (2 * r + _GAP - 1 - p[t - 1])
        ) // 2
        for center in (left_center, right_center):
            for offset, ch in enumerate(text):
                pos = center + offset
                if 0 <= pos < width:
                    label[pos] = ch
    rows.append("".join(label).rstrip())
    return "\n".join(rows) + "\n"


def render_svg(diagram: ShellDiagram) -> str:
    """Deterministic SVG rendering of the pyramid diagram."""
    scale = 20
    width = (2 * diagram.r + _GAP + 1) * scale
    height = (diagram.max_row + 3) * scale
    parts = [
        '<svg xmlns="http://www.w3.org/2000/svg" width="%d" height="%d" '
        'viewBox="0 0 %d %d">' % (width, height, width, height)
    ]
    for node in sorted(diagram.nodes, key=lambda n: (n.row, _column(diagram, n))):
        cx = (_column(diagram, node) + 1) * scale
        cy = (diagram.max_row - node.row + 1) * scale
        parts.append('<circle cx="%d" cy="%d" r="6" fill="black"/>' % (cx, cy))
    p = diagram.pattern
    label_y = (diagram.max_row + 2) * scale
    for t in range(1, len(p)):
        left_cx = (p[t - 1] + p[t] - 1) * scale // 2 + scale
        right_cx = (
            (2 * diagram.r + _GAP - p[t]) + (2 * diagram.r + _GAP - 1 - p[t - 1])
        ) * scale // 2 + scale
        for cx in (left_cx, right_cx):
            parts.append(
                '<text x="%d" y="%d" font-size="12" text-anchor="middle">%d</text>'
                % (cx, label_y, t - 1)
            )
    parts.append("</svg>")
    return "\n".join(parts) + "\n"
