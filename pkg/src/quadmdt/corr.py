"""Correspondence calculus on products of quadrics.

A correspondence is a cycle over a context split into a left and a right
block of factors.  Composition follows the bilinear law

    (b' x c) o (a x b) = deg(b b') a x c

evaluated entirely inside R: the middle product is computed with the
multiplication table and deg picks the all-l_0 coefficient.  This makes
composition total on mixed-degree cycles.

Isotropic reduction (reduce_f / reduce_g) shifts every index down/up by
the Witt index of the chosen splitting-tower level.  Both h- and l-symbols
shift the same way: that is the only convention under which f o g = id and
the idempotent-transport identities hold (derived multiplicatively in the
tests).
"""

from __future__ import annotations

from dataclasses import dataclass

from . import chow
from .chow import Cycle, FactorSymbol, h, l
from .errors import ContextMismatch, DegreeUnderflow, InvalidLevel
from .profile import QuadricProfile


@dataclass(frozen=True)
class Correspondence:
    """Cycle over a split context (left factors | right factors)."""

    cycle: Cycle
    split: int

    def __post_init__(self):
        if not 0 <= self.split <= self.cycle.arity:
            raise ContextMismatch(
                "split %d outside [0, %d]" % (self.split, self.cycle.arity)
            )

    @property
    def left_context(self) -> tuple:
        return self.cycle.context[: self.split]

    @property
    def right_context(self) -> tuple:
        return self.cycle.context[self.split :]

    def __add__(self, other: "Correspondence") -> "Correspondence":
        if self.split != other.split:
            raise ContextMismatch("cannot add correspondences with different splits")
        return Correspondence(self.cycle + other.cycle, self.split)

    def __bool__(self):
        return bool(self.cycle)

    def to_json_dict(self) -> dict:
        data = self.cycle.to_json_dict()
        data["split"] = self.split
        return data

    @classmethod
    def from_json_dict(cls, data: dict) -> "Correspondence":
        return cls(Cycle.from_json_dict(data), int(data["split"]))

    def __str__(self):
        return "%s | split=%d" % (self.cycle, self.split)


def compose(f: Correspondence, g: Correspondence) -> Correspondence:
    """Composite correspondence "f then g": Corr(X,Y) x Corr(Y,Z) -> Corr(X,Z)."""
    middle = f.right_context
    if middle != g.left_context:
        raise ContextMismatch("middle contexts do not match")
    context = f.left_context + g.right_context
    support = set()
    for ef in f.cycle.support:
        left, mid_f = ef[: f.split], ef[f.split :]
        for eg in g.cycle.support:
            mid_g, right = eg[: g.split], eg[g.split :]
            if _middle_degree(mid_f, mid_g, middle):
                support.symmetric_difference_update({left + right})
    return Correspondence(Cycle(context, frozenset(support)), f.split)


def _middle_degree(mid_f, mid_g, middle) -> int:
    # deg of the product of two basis tuples: 1 iff every factor product is l_0.
    for sa, sb, prof in zip(mid_f, mid_g, middle):
        prod = chow.mul_factor(sa, sb, prof)
        if prod is None or prod != l(0):
            return 0
    return 1


def diagonal_class(profile: QuadricProfile) -> Correspondence:
    """Class of the diagonal in R_{X^2}; the identity for composition.

    Sum of h^i x l_i + l_i x h^i over 0 <= i < r, plus the extra term
    h^{r-1} x h^{r-1} in the exceptional case s = 0, dim == 2 (mod 4)
    (there the two rulings of middle-dimensional planes both contribute
    and their cross terms survive mod 2).
    """
    context = (profile, profile)
    elements = []
    for i in range(profile.r):
        elements.append((h(i), l(i)))
        elements.append((l(i), h(i)))
    if profile.s == 0 and profile.dim % 4 == 2:
        elements.append((h(profile.r - 1), h(profile.r - 1)))
    return Correspondence(Cycle.of_basis(context, *elements), 1)


def transpose(f: Correspondence) -> Correspondence:
    """Swap the left and right factor blocks."""
    context = f.right_context + f.left_context
    support = {elt[f.split :] + elt[: f.split] for elt in f.cycle.support}
    return Correspondence(
        Cycle(context, frozenset(support)), len(f.right_context)
    )


def derivative(k1: int, k2: int, f: Correspondence) -> Correspondence:
    """D^{k1,k2}: multiplication by h^{k1} x h^{k2} on a homogeneous input.

    The input must live over X^2 in dimension d_X + j with k1 + k2 <= j.
    """
    if k1 < 0 or k2 < 0:
        raise ValueError("derivative orders must be >= 0")
    if f.cycle.arity != 2 or f.cycle.context[0] != f.cycle.context[1]:
        raise ContextMismatch("derivative expects a correspondence over X^2")
    profile = f.cycle.context[0]
    if not f.cycle.is_homogeneous():
        raise DegreeUnderflow("derivative requires a homogeneous input")
    if f.cycle.support:
        j = f.cycle.dimension() - profile.d_x
        if k1 + k2 > j:
            raise DegreeUnderflow(
                "D^{%d,%d} drops below the diagonal grading (j = %d)" % (k1, k2, j)
            )
    if k1 >= profile.r or k2 >= profile.r:
        # h^k vanishes for k >= r, so the operator is identically zero
        return Correspondence(Cycle.zero(f.cycle.context), f.split)
    multiplier = Cycle.of_basis(f.cycle.context, (h(k1), h(k2)))
    return Correspondence(chow.mul(f.cycle, multiplier), f.split)


def _as_cycle(x):
    return x.cycle if isinstance(x, Correspondence) else x


def _like(template, cycle: Cycle):
    if isinstance(template, Correspondence):
        return Correspondence(cycle, template.split)
    return cycle


def essential(x):
    """Drop every all-h basis tuple from the support."""
    c = _as_cycle(x)
    support = frozenset(
        elt for elt in c.support if any(sym.kind == chow.L for sym in elt)
    )
    return _like(x, Cycle(c.context, support))


def cap(a, b):
    """Sum of the standard basis elements involved in both arguments."""
    ca, cb = _as_cycle(a), _as_cycle(b)
    if ca.context != cb.context:
        raise ContextMismatch("cap requires a common context")
    return _like(a, Cycle(ca.context, ca.support & cb.support))


def contains(outer, inner) -> bool:
    """True when inner is a sub-sum of outer (inner cap outer == inner)."""
    co, ci = _as_cycle(outer), _as_cycle(inner)
    if co.context != ci.context:
        raise ContextMismatch("containment requires a common context")
    return ci.support <= co.support


def diagonal_mult(c: Cycle) -> Cycle:
    """Multiply the two halves of each basis tuple: R_{X^{2m}} -> R_{X^m}."""
    arity = c.arity
    if arity % 2:
        raise ContextMismatch("diagonal_mult needs an even number of factors")
    m = arity // 2
    if c.context[:m] != c.context[m:]:
        raise ContextMismatch("diagonal_mult needs two equal factor blocks")
    half = c.context[:m]
    support = set()
    for elt in c.support:
        out = []
        for sa, sb, prof in zip(elt[:m], elt[m:], half):
            prod = chow.mul_factor(sa, sb, prof)
            if prod is None:
                break
            out.append(prod)
        else:
            support.symmetric_difference_update({tuple(out)})
    return Cycle(half, frozenset(support))


def _check_level(profile: QuadricProfile, t: int):
    if not 0 <= t < profile.height:
        raise InvalidLevel(
            "tower level %d outside [0, %d)" % (t, profile.height)
        )


def reduction_correspondence(profile: QuadricProfile, t: int) -> Correspondence:
    """The rational correspondence connecting X with its t-th kernel.

    This is the canonical representative sum((h^{i+w} x l_i) + (l_{i+w} x h^i))
    with w = j_t.  Composing with it reproduces reduce_f / reduce_g on the
    nose when s >= 1; for s = 0 the middle-dimensional orientation ambiguity
    (the representative is only pinned down up to h^{r-1} x h^{r-1-w}) leaks
    exceptional h-terms into the exchange, which is why the reduction maps
    themselves are implemented as plain index shifts.
    """
    _check_level(profile, t)
    w = profile.pattern[t]
    kernel = profile.kernel(t)
    elements = []
    for i in range(profile.r - w):
        elements.append((h(i + w), l(i)))
        elements.append((l(i + w), h(i)))
    return Correspondence(Cycle.of_basis((profile, kernel), *elements), 1)


def _uniform_context(x, profile):
    c = _as_cycle(x)
    if any(p != profile for p in c.context):
        raise ContextMismatch("reduction expects all factors equal to the profile")
    return c


def reduce_f(profile: QuadricProfile, t: int, x):
    """Isotropic reduction f_t: shift every index down by j_t, killing small ones."""
    _check_level(profile, t)
    c = _uniform_context(x, profile)
    w = profile.pattern[t]
    kernel = profile.kernel(t)
    support = set()
    for elt in c.support:
        if all(sym.index >= w for sym in elt):
            support.add(tuple(FactorSymbol(sym.kind, sym.index - w) for sym in elt))
    return _like(x, Cycle(tuple(kernel for _ in c.context), frozenset(support)))


def reduce_g(profile: QuadricProfile, t: int, x):
    """Section g_t of f_t: shift every index up by j_t (input over the kernel)."""
    _check_level(profile, t)
    kernel = profile.kernel(t)
    c = _uniform_context(x, kernel)
    w = profile.pattern[t]
    support = {
        tuple(FactorSymbol(sym.kind, sym.index + w) for sym in elt)
        for elt in c.support
    }
    return _like(x, Cycle(tuple(profile for _ in c.context), frozenset(support)))
