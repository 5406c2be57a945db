"""Discrete invariants of quadratic forms in characteristic 2.

A profile records the data (dim, type (r, s), nondefective splitting
pattern) of an anisotropic nondefective nonquasilinear quadratic form.
No field arithmetic happens here: everything downstream (the cycle ring,
the MDT engine) is driven by these integers alone.

Conventions:
  * dim = 2r + s, r >= 1; the quasilinear part has dimension s.
  * pattern = (j_0, ..., j_h) with j_0 = 0 < j_1 < ... < j_h = r; the
    steps i_t = j_t - j_{t-1} are the higher Witt indices, h is the
    nondefective height.
  * d_X = dim - 2 is the dimension of the projective quadric.

Isotropic forms are not modelled as profiles; they enter through the
lift operation in the mdt module.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

from .errors import (
    ConstraintViolated,
    DimMismatch,
    NotNeighbourEligible,
    PatternInvalid,
    StepViolatesI1Bound,
)

I1_BASE = "base"
I1_SINGULAR = "singular"
I1_CONJECTURAL = "conjectural"
I1_RULE_NAMES = (I1_BASE, I1_SINGULAR, I1_CONJECTURAL)

# Proven filters only; the conjectural one is strictly opt-in.
DEFAULT_I1_RULES = frozenset({I1_BASE, I1_SINGULAR})


def v2(n: int) -> int:
    """2-adic valuation of a positive integer."""
    if n <= 0:
        raise ValueError("v2 requires a positive integer, got %r" % (n,))
    return (n & -n).bit_length() - 1


def _check_i1_rules(rules) -> frozenset:
    if rules is None:
        return DEFAULT_I1_RULES
    rules = frozenset(rules)
    unknown = rules - frozenset(I1_RULE_NAMES)
    if unknown:
        raise ValueError("unknown i1 rule(s): %s" % ", ".join(sorted(unknown)))
    return rules


@dataclass(frozen=True)
class QuadricProfile:
    """Anisotropic nondefective nonquasilinear form of type (r, s)."""

    dim: int
    r: int
    s: int
    pattern: tuple
    anisotropic: bool = True

    def __post_init__(self):
        object.__setattr__(self, "pattern", tuple(self.pattern))
        if self.r < 1 or self.s < 0 or self.dim != 2 * self.r + self.s:
            raise DimMismatch(
                "need dim = 2r + s with r >= 1, got dim=%d r=%d s=%d"
                % (self.dim, self.r, self.s)
            )
        if not self.anisotropic:
            raise PatternInvalid("profiles model anisotropic forms only")
        p = self.pattern
        if len(p) < 2 or p[0] != 0 or p[-1] != self.r:
            raise PatternInvalid("pattern must run from 0 to r, got %r" % (p,))
        if any(a >= b for a, b in zip(p, p[1:])):
            raise PatternInvalid("pattern must be strictly increasing, got %r" % (p,))
        # Each step must obey the 2-adic bound applied to its kernel form
        # (of dimension dim - 2 j_{t-1}): i_t <= 2^{v2(kernel dim - i_t)}.
        for t in range(1, len(p)):
            step = p[t] - p[t - 1]
            kernel_dim = self.dim - 2 * p[t - 1]
            if step > 1 << v2(kernel_dim - step):
                raise StepViolatesI1Bound(
                    "step i_%d = %d exceeds bound %d for kernel dimension %d"
                    % (t, step, 1 << v2(kernel_dim - step), kernel_dim)
                )

    @property
    def d_x(self) -> int:
        """Dimension of the projective quadric."""
        return self.dim - 2

    @property
    def height(self) -> int:
        """Nondefective height h."""
        return len(self.pattern) - 1

    @property
    def steps(self) -> tuple:
        """Higher Witt indices (i_1, ..., i_h)."""
        return tuple(b - a for a, b in zip(self.pattern, self.pattern[1:]))

    @property
    def izhboldin_dim(self) -> int:
        return self.dim - self.pattern[1]

    def kernel(self, t: int) -> "QuadricProfile":
        """Profile of the t-th anisotropic kernel form, 0 <= t < height."""
        if not 0 <= t < self.height:
            raise ValueError("kernel level %d out of range [0, %d)" % (t, self.height))
        w = self.pattern[t]
        return QuadricProfile(
            dim=self.dim - 2 * w,
            r=self.r - w,
            s=self.s,
            pattern=tuple(j - w for j in self.pattern[t:]),
        )

    def shell_of(self, i: int) -> int:
        """1-based shell index t with j_{t-1} <= i < j_t, for 0 <= i < r."""
        if not 0 <= i < self.r:
            raise ValueError("index %d outside [0, r)" % i)
        for t in range(1, len(self.pattern)):
            if i < self.pattern[t]:
                return t
        raise AssertionError("unreachable")

    def to_json_dict(self) -> dict:
        return {"dim": self.dim, "r": self.r, "s": self.s, "pattern": list(self.pattern)}

    @classmethod
    def from_json_dict(cls, data: dict) -> "QuadricProfile":
        try:
            return cls(
                dim=int(data["dim"]),
                r=int(data["r"]),
                s=int(data["s"]),
                pattern=tuple(int(j) for j in data["pattern"]),
            )
        except (KeyError, TypeError) as exc:
            raise PatternInvalid("malformed profile JSON: %s" % exc) from exc

    @classmethod
    def from_json(cls, text: str) -> "QuadricProfile":
        return cls.from_json_dict(json.loads(text))

    def __str__(self):
        return "(%d, (%d,%d), %s)" % (self.dim, self.r, self.s, list(self.pattern))


def mk_profile(dim: int, r: int, s: int, pattern) -> QuadricProfile:
    """Validated profile constructor (alias for the dataclass)."""
    return QuadricProfile(dim=dim, r=r, s=s, pattern=tuple(pattern))


def izhboldin_dim(profile: QuadricProfile) -> int:
    """dim - i_1; a stable birational invariant of the quadric."""
    return profile.izhboldin_dim


def i1_max_by_theorem(dim: int) -> int:
    """Largest first higher isotropy index allowed in the given dimension.

    Scans i >= 1 against the bound i <= 2^{v2(dim - i)}.
    """
    if dim < 2:
        raise ValueError("dim must be >= 2")
    return max(i for i in range(1, dim) if i <= 1 << v2(dim - i))


def _i1_singular_ok(r: int, s: int, i: int) -> bool:
    # Consequence of the i_1 >= s theorem: with u = v2(Izh) and
    # x2^u < r <= (x+1)2^u, an actual form must satisfy s < 2^u and
    # i_1 <= r - x 2^u <= 2^u - s.  Values of i that would contradict
    # this cannot occur, so they are filtered out.
    if i < s:
        return True
    u = v2(2 * r + s - i)
    x = (r - 1) >> u
    slack = r - (x << u)
    return s < (1 << u) and i <= slack and slack <= (1 << u) - s


def _i1_conjectural_ok(r: int, s: int, i: int) -> bool:
    # Two implications of the excellent-connections conjecture:
    # (a) writing dim = 2^n + m with 1 <= m <= 2^n: r < m forces i_1 <= m - r;
    # (b) if s < 2^u + i_1 then i_1 <= r - x 2^u <= 2^u - s.
    dim = 2 * r + s
    n = (dim - 1).bit_length() - 1
    m = dim - (1 << n)
    if r < m and i > m - r:
        return False
    u = v2(dim - i)
    x = (r - 1) >> u
    slack = r - (x << u)
    if s < (1 << u) + i and not (i <= slack and slack <= (1 << u) - s):
        return False
    return True


def i1_admissible_set(r: int, s: int, rules=None) -> frozenset:
    """Values of i_1 not excluded by the selected filters for type (r, s).

    ``base`` is the plain 2-adic bound (plus i <= r), ``singular`` the
    theorem that applies when i_1 >= s, ``conjectural`` the implications
    of the excellent-connections conjecture.  Output is a "not excluded"
    set; realizability is a separate question.
    """
    if r < 1:
        raise ValueError("r must be >= 1")
    if s < 0:
        raise ValueError("s must be >= 0")
    rules = _check_i1_rules(rules)
    dim = 2 * r + s
    out = set()
    for i in range(1, r + 1):
        if I1_BASE in rules and i > 1 << v2(dim - i):
            continue
        if I1_SINGULAR in rules and not _i1_singular_ok(r, s, i):
            continue
        if I1_CONJECTURAL in rules and not _i1_conjectural_ok(r, s, i):
            continue
        out.add(i)
    return frozenset(out)


def pattern_enumerate(r: int, s: int, rules=None) -> tuple:
    """All splitting patterns whose every step passes the selected filters.

    Each step i_t is tested against the admissible set of the current
    kernel type (r - j_{t-1}, s).  Output patterns are canonical tuples
    (0, ..., r), sorted; they are "not excluded", not necessarily realized.
    """
    if r < 1:
        raise ValueError("r must be >= 1")
    if s < 0:
        raise ValueError("s must be >= 0")
    rules = _check_i1_rules(rules)

    def extend(r_rem: int):
        if r_rem == 0:
            yield ()
            return
        for i in sorted(i1_admissible_set(r_rem, s, rules)):
            for rest in extend(r_rem - i):
                yield (i,) + rest

    patterns = []
    for steps in extend(r):
        acc = [0]
        for i in steps:
            acc.append(acc[-1] + i)
        patterns.append(tuple(acc))
    return tuple(sorted(patterns))


@dataclass(frozen=True)
class AlternatingExpansion:
    """The unique expansion value = 2^{n_1} - 2^{n_2} + ... +- 2^{n_j}.

    The exponents strictly decrease and the final gap exceeds 1
    (n_{j-1} > n_j + 1), which pins the expansion down uniquely.
    ``m`` holds m_i = 2^{n_i - 1} - 2^{n_{i+1}} + ... for 1 <= i <= j';
    for odd values the formal m_j would be the half-integer 2^{-1} and is
    not stored (it is never consulted: excellent pairs use k <= j' only).
    """

    value: int
    n: tuple
    m: tuple

    @property
    def j(self) -> int:
        return len(self.n)

    @property
    def j_prime(self) -> int:
        return self.j if self.value % 2 == 0 else self.j - 1


def alternating_2adic(value: int) -> AlternatingExpansion:
    """Compute the alternating 2-adic expansion of a positive integer."""
    if value < 1:
        raise ValueError("value must be >= 1")
    n = []
    rem = value
    while rem:
        k = (rem - 1).bit_length()  # smallest k with 2^k >= rem
        n.append(k)
        rem = (1 << k) - rem
    n_tuple = tuple(n)
    j = len(n_tuple)
    j_prime = j if value % 2 == 0 else j - 1
    m = []
    for i in range(j_prime):
        acc = 1 << (n_tuple[i] - 1)
        sign = -1
        for u in range(i + 1, j):
            acc += sign * (1 << n_tuple[u])
            sign = -sign
        m.append(acc)
    return AlternatingExpansion(value=value, n=n_tuple, m=tuple(m))


@dataclass(frozen=True)
class ExcellentPair:
    """Index pair (a, b) excellent for the profile, witnessed by k."""

    a: int
    b: int
    k: int


def excellent_pairs(profile: QuadricProfile) -> tuple:
    """All excellent pairs of the profile, sorted by (a, b).

    A pair (a, b) with 0 <= a < r and 0 <= d_X - b < r is excellent when
    some 1 <= k <= j' has b - a = 2^{n_k - 1} - 1 and both a and d_X - b
    lie in [m_1 + ... + m_{k-1}, m_1 + ... + m_k).
    """
    exp = alternating_2adic(profile.dim)
    d_x = profile.d_x
    r = profile.r
    pairs = []
    prefix = 0
    for k in range(1, exp.j_prime + 1):
        m_k = exp.m[k - 1]
        width = (1 << (exp.n[k - 1] - 1)) - 1
        for a in range(max(prefix, 0), min(prefix + m_k, r)):
            b = a + width
            cob = d_x - b
            if 0 <= cob < r and prefix <= cob < prefix + m_k:
                pairs.append(ExcellentPair(a=a, b=b, k=k))
        prefix += m_k
    return tuple(sorted(pairs, key=lambda p: (p.a, p.b)))


def strongly_excellent_profile(n_list, s: int):
    """Profile and kernel dimensions of a strongly excellent form.

    ``n_list`` holds the exponents n_1 > n_2 > ... > n_h of the ambient
    Pfister forms along the tower; the form has dimension
    2^{n_1} - 2^{n_2} + ... + (-1)^{h-1} 2^{n_h} + (-1)^h s.

    Gap conditions: for s >= 1 the last exponent must satisfy
    s < 2^{n_h - 1} (i.e. n_h > log2(s) + 1); for s = 0 and h >= 2 the
    form tower degenerates unless n_{h-1} > n_h + 1.

    Returns (profile, kernel_dims) where kernel_dims lists the dimensions
    of the successive anisotropic kernels, ending with the quasilinear
    part of dimension s.
    """
    n_list = tuple(int(n) for n in n_list)
    h = len(n_list)
    if h < 1:
        raise ConstraintViolated("need at least one exponent")
    if s < 0:
        raise ConstraintViolated("s must be >= 0")
    if any(n < 1 for n in n_list):
        raise ConstraintViolated("exponents must be >= 1")
    if any(a <= b for a, b in zip(n_list, n_list[1:])):
        raise ConstraintViolated("exponents must strictly decrease")
    if s >= 1 and s >= 1 << (n_list[-1] - 1):
        raise ConstraintViolated(
            "quasilinear part too large: need s < 2^(n_h - 1) = %d" % (1 << (n_list[-1] - 1))
        )
    if s == 0 and h >= 2 and n_list[-2] <= n_list[-1] + 1:
        raise ConstraintViolated(
            "with trivial quasilinear part the last two exponents need a gap > 1"
        )

    def kernel_dim(i: int) -> int:
        acc = 0
        sign = 1
        for u in range(i, h):
            acc += sign * (1 << n_list[u])
            sign = -sign
        return acc + sign * s

    dims = [kernel_dim(i) for i in range(h)] + [s]
    m = [dims[i] - (1 << (n_list[i] - 1)) for i in range(h)]
    if any(x < 1 for x in m) or any(a <= b for a, b in zip(dims, dims[1:])):
        raise ConstraintViolated("exponent data does not define a valid tower")
    pattern = [0]
    for x in m:
        pattern.append(pattern[-1] + x)
    dim = dims[0]
    r = (dim - s) // 2
    if pattern[-1] != r:
        raise ConstraintViolated("pattern does not terminate at r")
    prof = QuadricProfile(dim=dim, r=r, s=s, pattern=tuple(pattern))
    return prof, tuple(dims)


@dataclass(frozen=True)
class PfisterNeighbourInvariants:
    n: int
    m: int
    complementary_dim: int
    close_neighbour: bool


def pfister_neighbour_invariants(dim: int, s: int) -> PfisterNeighbourInvariants:
    """Numerology of a would-be Pfister neighbour of the given dimension.

    n is fixed by 2^n < dim <= 2^{n+1}; a neighbour must satisfy
    r + s <= 2^n, else NotNeighbourEligible.  The neighbour is close
    (nondefective height 1) exactly when dim = 2^{n+1} - s.
    """
    if dim < 2:
        raise ValueError("dim must be >= 2")
    if s < 0 or (dim - s) % 2 or dim - s < 2:
        raise ValueError("no type (r, s) with r >= 1 matches dim=%d s=%d" % (dim, s))
    r = (dim - s) // 2
    n = (dim - 1).bit_length() - 1
    if r + s > 1 << n:
        raise NotNeighbourEligible(
            "r + s = %d exceeds 2^n = %d" % (r + s, 1 << n)
        )
    return PfisterNeighbourInvariants(
        n=n,
        m=dim - (1 << n),
        complementary_dim=(1 << (n + 1)) - dim,
        close_neighbour=dim == (1 << (n + 1)) - s,
    )
