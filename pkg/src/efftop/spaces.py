"""Represented spaces, set lattices, and separation-property witnesses.

A point is a name together with the space it lives in.  Open sets,
overt sets, and the discreteness/Hausdorffness/regularity/normality
witnesses are all realized by monotone fuel-indexed code; meta-equality
of points lives in the space descriptor and is used only by tests.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import islice
from typing import Callable, Iterable, List, Optional, Sequence, Tuple

from .kernel import (
    NOT_YET,
    Name,
    SierpObservation,
    Transducer,
    Word,
    decode_word,
    dovetail,
    interleave,
    is_prefix,
    pair,
    semidecide,
    monotone_semidecider,
    semidecider,
    unpair,
)


# ---------------------------------------------------------------------------
# Spaces and points


@dataclass
class SpaceDescriptor:
    """Tagged description of a represented space.

    ``meta_equal(p, q, fuel)`` decides (to the test harness's satisfaction)
    whether two valid names denote the same point.  Realizers never see it.
    """

    tag: str
    meta_equal: Callable[[Name, Name, int], bool] = None
    data: dict = field(default_factory=dict)

    def equal(self, p: Name, q: Name, fuel: int) -> bool:
        if self.meta_equal is None:
            raise ValueError(f"space {self.tag!r} has no meta-equality")
        return self.meta_equal(p, q, fuel)


@dataclass
class Point:
    space: Optional[SpaceDescriptor]
    name: Name


def _as_name(x) -> Name:
    return x.name if isinstance(x, Point) else x


def nat_name(n: int) -> Name:
    """delta_N(p) = p(0); the constant stream is the canonical name."""
    return Name.constant(n, label=("nat", n))


def nat_space() -> SpaceDescriptor:
    return SpaceDescriptor(
        tag="Nat",
        meta_equal=lambda p, q, fuel: p.at(0, fuel) == q.at(0, fuel),
    )


def nat_point(n: int) -> Point:
    return Point(nat_space(), nat_name(n))


def sierp_top_name(delay: int = 0) -> Name:
    """Name of ⊤: a stream with a 1 at position ``delay``."""
    return Name.total(lambda k: 1 if k == delay else 0, label=("sierp", True))


def sierp_bottom_name() -> Name:
    return Name.constant(0, label=("sierp", False))


def product_space(x: SpaceDescriptor, y: SpaceDescriptor) -> SpaceDescriptor:
    from .kernel import project

    def eq(p, q, fuel):
        return x.equal(project(p, "left"), project(q, "left"), fuel) and y.equal(
            project(p, "right"), project(q, "right"), fuel
        )

    return SpaceDescriptor(tag=f"Product({x.tag},{y.tag})", meta_equal=eq,
                           data={"left": x, "right": y})


# ---------------------------------------------------------------------------
# Open, closed, and overt set codes


class OpenSetCode:
    """Semidecidable membership: a transducer from names to Sierpinski
    observations.  Extensional on valid names by contract."""

    __slots__ = ("code", "_member")

    def __init__(self, code: Optional[Transducer] = None,
                 member: Optional[Callable[[Name], SierpObservation]] = None):
        if code is None and member is None:
            raise ValueError("need a transducer or a member function")
        self.code = code
        self._member = member

    def member(self, x) -> SierpObservation:
        name = _as_name(x)
        if self._member is not None:
            return self._member(name)
        return semidecide(self.code, name)

    @staticmethod
    def from_prefix_predicate(accept: Callable[[Word], bool]) -> "OpenSetCode":
        return OpenSetCode(code=monotone_semidecider(accept))

    @staticmethod
    def everything() -> "OpenSetCode":
        return OpenSetCode.from_prefix_predicate(lambda w: True)

    @staticmethod
    def nothing() -> "OpenSetCode":
        return OpenSetCode.from_prefix_predicate(lambda w: False)

    def union(self, other: "OpenSetCode") -> "OpenSetCode":
        return OpenSetCode(member=lambda name: SierpObservation(
            lambda fuel: self.member(name).confirmed_at(fuel)
            or other.member(name).confirmed_at(fuel)))

    def intersection(self, other: "OpenSetCode") -> "OpenSetCode":
        return OpenSetCode(member=lambda name: SierpObservation(
            lambda fuel: self.member(name).confirmed_at(fuel)
            and other.member(name).confirmed_at(fuel)))


@dataclass
class ClosedSetCode:
    complement_open: OpenSetCode


class OvertCode:
    """Nonempty-intersection semidecision: maps open-set codes to
    Sierpinski observations."""

    __slots__ = ("_query",)

    def __init__(self, query: Callable[[OpenSetCode], SierpObservation]):
        self._query = query

    def query(self, u: OpenSetCode) -> SierpObservation:
        return self._query(u)

    @staticmethod
    def from_name_stream(names: Callable[[int], Name],
                         count: Optional[int] = None) -> "OvertCode":
        """Overt code of the closure of a listed set of points: dovetails
        the open over the listed names."""
        return OvertCode(lambda u: dovetail(lambda i: u.member(names(i)), count=count))


def open_member(u: OpenSetCode, x, fuel: int):
    """Verdict of membership of ``x`` in ``u`` at the given fuel."""
    return u.member(x).observe(fuel)


class PairWitness:
    """Shared machinery for discreteness / Hausdorffness witnesses: a
    transducer on product names, confirming equality resp. inequality."""

    __slots__ = ("code", "_check")

    def __init__(self, code: Optional[Transducer] = None,
                 check: Optional[Callable[[Name, Name], SierpObservation]] = None):
        if code is None and check is None:
            raise ValueError("need a transducer or a check function")
        self.code = code
        self._check = check

    def check(self, p, q) -> SierpObservation:
        p, q = _as_name(p), _as_name(q)
        if self._check is not None:
            return self._check(p, q)
        return semidecide(self.code, interleave(p, q))


class DiscretenessWitness(PairWitness):
    """Confirms exactly when the two names denote equal points."""


class HausdorffWitness(PairWitness):
    """Confirms exactly when the two names denote distinct points."""


def nat_discreteness() -> DiscretenessWitness:
    def accept(w: Word) -> bool:
        return len(w) >= 2 and w[0] == w[1]

    return DiscretenessWitness(code=monotone_semidecider(accept))


def nat_hausdorff() -> HausdorffWitness:
    def accept(w: Word) -> bool:
        return len(w) >= 2 and w[0] != w[1]

    return HausdorffWitness(code=monotone_semidecider(accept))


# ---------------------------------------------------------------------------
# Serialized open-set codes: a toy program plus a finite parameter word.
# The program semidecides membership of word-coded prefixes: the open
# confirms on a name once the program halts with nonzero output on
# pair(encode(param), encode(prefix)) for some available prefix, under
# the round-robin budget schedule over prefix lengths.


def open_code_from_program(prog, param: Sequence = ()) -> OpenSetCode:
    from .kernel import encode_word, interpret, Halted

    param_code = encode_word(tuple(param))

    def member(name: Name) -> SierpObservation:
        def confirmed(fuel: int) -> bool:
            w = name.prefix(fuel)
            for j in range(min(len(w), fuel) + 1):
                budget = fuel // (j + 2)
                if budget == 0:
                    break
                res = interpret(prog, pair(param_code, encode_word(w[:j])), budget)
                if isinstance(res, Halted) and res.output != 0:
                    return True
            return False

        return SierpObservation(confirmed)

    return OpenSetCode(member=member)


def parse_open_code(text: str):
    """`open v1` header, a `param <naturals>` line, then toy program text.
    Returns (OpenSetCode, program, param word)."""
    from .kernel import parse_program

    lines = text.splitlines()
    if not lines or lines[0].strip() != "open v1":
        raise ValueError("expected header 'open v1'")
    if len(lines) < 2 or not lines[1].strip().startswith("param"):
        raise ValueError("expected 'param <naturals>' line")
    param = tuple(int(t) for t in lines[1].split()[1:])
    prog = parse_program("\n".join(lines[2:]))
    return open_code_from_program(prog, param), prog, param


def format_open_code(prog, param: Sequence = ()) -> str:
    from .kernel import format_program

    return ("open v1\nparam " + " ".join(str(s) for s in param)).rstrip() \
        + "\n" + format_program(prog)


# ---------------------------------------------------------------------------
# Adjoining a bottom point (subspace-of-countably-based construction)


def adjoin_bottom(x: SpaceDescriptor) -> SpaceDescriptor:
    """Space over X ⊎ {⊥}: a name ⟨p,q⟩ denotes ⊥ when p has infinitely
    many 1s, else the X-point named by q."""
    from .kernel import project

    def eq(n1, n2, fuel):
        l1, l2 = n1.label, n2.label
        if l1 == "bottom" or l2 == "bottom":
            return l1 == l2
        return x.equal(project(n1, "right"), project(n2, "right"), fuel)

    return SpaceDescriptor(tag=f"AdjoinBottom({x.tag})", meta_equal=eq,
                           data={"inner": x})


def adjoin_bottom_embed(q: Name) -> Name:
    """Name of the embedded X-point: flag track all zeros."""
    out = interleave(Name.constant(0), q)
    out.label = q.label
    return out


def adjoin_bottom_name_of_bottom(q: Name = None) -> Name:
    """Name of ⊥: flag track all ones (infinitely many 1s)."""
    out = interleave(Name.constant(1), q if q is not None else Name.constant(0))
    out.label = "bottom"
    return out


# ---------------------------------------------------------------------------
# The gamma representation of O(N) and the cylinder basis of Baire space


def gamma_decode(p: Name, fuel: int) -> frozenset:
    """Enumerated subset {n | some position of p holds n+1}, up to fuel."""
    return frozenset(v - 1 for v in p.prefix(fuel) if v > 0)


def gamma_encode(a: Iterable[int]) -> Name:
    """Name of a finite enumerable set under the gamma coding."""
    items = sorted(set(a))
    return Name.total(lambda k: items[k] + 1 if k < len(items) else 0,
                      label=("gamma", tuple(items)))


def gamma_encode_stream(fn: Callable[[int], Optional[int]]) -> Name:
    """Gamma name from an enumerator: fn(k) is the k-th emission or None
    for a pause step."""
    return Name.total(lambda k: 0 if fn(k) is None else fn(k) + 1)


def baire_basis(index: int) -> OpenSetCode:
    """Cylinder basic open of Baire space: accepts names extending the
    word decoded from ``index``."""
    w = decode_word(index)
    return OpenSetCode.from_prefix_predicate(lambda v: is_prefix(w, v))


def baire_cylinder(word: Sequence) -> OpenSetCode:
    w = tuple(word)
    return OpenSetCode.from_prefix_predicate(lambda v: is_prefix(w, v))


# ---------------------------------------------------------------------------
# Effective bases and the embedding into O(N)


@dataclass
class EffectiveBasis:
    """Computable basis with a multi-valued decomposition right-inverse.

    ``basis_at(n)`` is the n-th basic open; ``decompose(U)`` returns a
    gamma-name of an index set whose union reproduces U.
    """

    basis_at: Callable[[int], OpenSetCode]
    decompose: Callable[[OpenSetCode], Name]


def nat_singleton_basis() -> EffectiveBasis:
    """Basis of N with B_n = {n}."""

    def basis_at(n: int) -> OpenSetCode:
        return OpenSetCode.from_prefix_predicate(lambda w: len(w) >= 1 and w[0] == n)

    def decompose(u: OpenSetCode) -> Name:
        def value(k: int) -> int:
            n, s = unpair(k)
            return n + 1 if u.member(nat_name(n)).confirmed_at(s) else 0

        return Name.total(value)

    return EffectiveBasis(basis_at=basis_at, decompose=decompose)


def embed_into_opens_of_nat(basis: EffectiveBasis, x) -> Name:
    """Gamma-name of {n | x ∈ B_n}; injective across inequal points when
    the basis separates them."""
    name = _as_name(x)

    def value(k: int) -> int:
        n, s = unpair(k)
        obs = basis.basis_at(n).member(name)
        return n + 1 if obs.confirmed_at(s) else 0

    return Name.total(value)


# ---------------------------------------------------------------------------
# Fibre-overt representations and open-set extension


@dataclass
class FibreOvertRep:
    """Representation whose name fibres are uniformly overt.

    ``preimage(x)`` returns some valid name of x; ``fibre_overt(x)`` is
    the overt code of the closure of the fibre over x.
    """

    space: SpaceDescriptor
    preimage: Callable[[object], Name]
    fibre_overt: Callable[[object], OvertCode]


def extend_open(y: FibreOvertRep, v: OpenSetCode) -> OpenSetCode:
    """Open U on Y with U ∩ X = V, where V is an open of a name-subspace X.

    U accepts a Y-point when the fibre of names over it meets the set of
    names accepted by V.
    """
    return OpenSetCode(member=lambda name: y.fibre_overt(Point(y.space, name)).query(v))


# ---------------------------------------------------------------------------
# Separation-property realizers


def reg_from_discrete_hausdorff(d: DiscretenessWitness, h: HausdorffWitness,
                                x, a: ClosedSetCode = None
                                ) -> Tuple[OpenSetCode, OpenSetCode]:
    """Regularity data from discreteness + Hausdorffness: the closed set is
    ignored and ({x}, X∖{x}) is returned."""
    xname = _as_name(x)
    singleton = OpenSetCode(member=lambda q: d.check(xname, q))
    complement = OpenSetCode(member=lambda q: h.check(xname, q))
    return singleton, complement


def henorm_to_normsub(he: Callable[[ClosedSetCode, ClosedSetCode],
                                   Tuple[OpenSetCode, OpenSetCode]]):
    """A hereditary-normality realizer already solves the relativized
    normality problem: the open Y is ignored."""

    def normsub(y: OpenSetCode, a: ClosedSetCode, b: ClosedSetCode):
        return he(a, b)

    return normsub


def normsub_to_henorm(ns: Callable[[OpenSetCode, ClosedSetCode, ClosedSetCode],
                                   Tuple[OpenSetCode, OpenSetCode]],
                      a: ClosedSetCode, b: ClosedSetCode
                      ) -> Tuple[OpenSetCode, OpenSetCode]:
    """Hereditary normality from relativized normality: take Y to be the
    complement of A ∩ B and trim the answer to Y."""
    y = a.complement_open.union(b.complement_open)
    u, v = ns(y, a, b)
    return y.intersection(u), y.intersection(v)


# ---------------------------------------------------------------------------
# Ball separation at finite dimension with dyadic rationals


class DimensionMismatch(Exception):
    pass


def dyadic(numerator: int, exponent: int) -> Fraction:
    """The dyadic rational numerator / 2**exponent."""
    if exponent < 0:
        raise ValueError("precision exponent must be >= 0")
    return Fraction(numerator, 2 ** exponent)


def _check_dyadic_unit(value: Fraction):
    if not 0 <= value <= 1:
        raise ValueError(f"coordinate {value} outside [0,1]")
    denom = value.denominator
    if denom & (denom - 1):
        raise ValueError(f"{value} is not dyadic")


@dataclass(frozen=True)
class DyadicPoint:
    """Finite-dimensional point with dyadic coordinates in [0,1]."""

    coordinates: Tuple[Fraction, ...]

    def __post_init__(self):
        for c in self.coordinates:
            _check_dyadic_unit(c)

    @property
    def dimension(self) -> int:
        return len(self.coordinates)

    @staticmethod
    def of(*coords) -> "DyadicPoint":
        return DyadicPoint(tuple(Fraction(c) for c in coords))


@dataclass(frozen=True)
class DyadicBall:
    """Ball with dyadic centre and radius (Euclidean metric)."""

    center: Tuple[Fraction, ...]
    radius: Fraction

    @staticmethod
    def of(center, radius) -> "DyadicBall":
        return DyadicBall(tuple(Fraction(c) for c in center), Fraction(radius))

    def _dist2(self, p: DyadicPoint) -> Fraction:
        if len(self.center) != p.dimension:
            raise DimensionMismatch(
                f"ball dimension {len(self.center)} vs point dimension {p.dimension}")
        return sum((a - b) ** 2 for a, b in zip(self.center, p.coordinates))

    def open_contains(self, p: DyadicPoint) -> bool:
        return self._dist2(p) < self.radius ** 2

    def closed_contains(self, p: DyadicPoint) -> bool:
        return self._dist2(p) <= self.radius ** 2


@dataclass
class BallRegion:
    """Open region given by an alternating-difference union of balls."""

    positive: List[DyadicBall]       # open balls contributing to the union
    blockers: List[DyadicBall]       # closed balls subtracted stage by stage
    blocker_cutoff: Callable[[int], int]  # how many blockers apply at stage n

    def contains(self, p: DyadicPoint) -> bool:
        for n, ball in enumerate(self.positive):
            if ball.open_contains(p):
                cut = min(self.blocker_cutoff(n), len(self.blockers))
                if not any(self.blockers[k].closed_contains(p) for k in range(cut)):
                    return True
        return False


def separate_by_balls(dimension: int, enum_a, enum_b, fuel: int
                      ) -> Tuple[BallRegion, BallRegion]:
    """Disjoint open regions covering A∖B and B∖A.

    ``enum_a`` lists closed balls missing A, ``enum_b`` closed balls
    missing B; at most ``fuel`` balls of each enumeration are consumed.
    The first region unions the B-missing balls (open versions), each
    minus the strictly earlier A-missing closed balls; the second unions
    the A-missing balls, each minus the non-strictly earlier B-missing
    closed balls.  The index asymmetry is what makes the regions disjoint.
    """
    balls_a = list(islice(iter(enum_a), fuel))
    balls_b = list(islice(iter(enum_b), fuel))
    for ball in balls_a + balls_b:
        if len(ball.center) != dimension:
            raise DimensionMismatch(
                f"ball dimension {len(ball.center)} vs requested {dimension}")
    u = BallRegion(positive=balls_b, blockers=balls_a, blocker_cutoff=lambda n: n)
    v = BallRegion(positive=balls_a, blockers=balls_b, blocker_cutoff=lambda m: m + 1)
    return u, v


def _region_mask(region: BallRegion, coords):
    """Boolean membership of an (N, d) float64 coordinate array in the
    region.  Exact for dyadic inputs of modest exponent: every quantity
    compared is a dyadic rational representable in float64."""
    import numpy as np

    acc = np.zeros(coords.shape[0], dtype=bool)
    cache = {}

    def dist2(ball: DyadicBall):
        key = id(ball)
        if key not in cache:
            center = np.array([float(c) for c in ball.center])
            diff = coords - center
            cache[key] = (diff * diff).sum(axis=1)
        return cache[key]

    for n, ball in enumerate(region.positive):
        mask = dist2(ball) < float(ball.radius ** 2)
        cut = min(region.blocker_cutoff(n), len(region.blockers))
        for k in range(cut):
            blocker = region.blockers[k]
            mask &= ~(dist2(blocker) <= float(blocker.radius ** 2))
        acc |= mask
    return acc


def audit_disjoint_on_grid(u: BallRegion, v: BallRegion, dimension: int,
                           exponent: int) -> int:
    """Number of points of the full 2^-exponent grid on [0,1]^d lying in
    both regions (0 means disjoint on the grid).

    Processes one slab of the leading coordinate at a time to keep memory
    bounded at dimension 3.
    """
    import numpy as np

    side = np.arange(2 ** exponent + 1, dtype=np.float64) / 2 ** exponent
    if dimension == 1:
        slabs = [side[:, None]]
    else:
        rest = np.meshgrid(*([side] * (dimension - 1)), indexing="ij")
        rest = np.stack([g.ravel() for g in rest], axis=1)
        slabs = None
    overlaps = 0
    if slabs is not None:
        for coords in slabs:
            overlaps += int((_region_mask(u, coords) & _region_mask(v, coords)).sum())
        return overlaps
    lead = np.empty((rest.shape[0], 1))
    for x in side:
        lead[:] = x
        coords = np.concatenate([lead, rest], axis=1)
        overlaps += int((_region_mask(u, coords) & _region_mask(v, coords)).sum())
    return overlaps


# ---------------------------------------------------------------------------
# Computable witnesses of Hausdorffness (sequence form)


@dataclass
class HausdorffWitnessSequence:
    """Sequences (U_i), (V_i) of opens with ∪ U_i × V_i = X² ∖ Δ."""

    u_seq: Callable[[int], OpenSetCode]
    v_seq: Callable[[int], OpenSetCode]


@dataclass
class WitnessSequenceReport:
    covered: list        # (pair_index, i, step_x, step_y) for unequal pairs found
    failures: list       # pair indices of unequal pairs with no covering i at fuel
    violations: list     # (pair_index, i) for equal pairs wrongly covered

    @property
    def ok(self) -> bool:
        return not self.failures and not self.violations


def check_hausdorff_witness_sequence(ws: HausdorffWitnessSequence,
                                     samples: Sequence[Tuple[object, object, bool]],
                                     fuel: int) -> WitnessSequenceReport:
    """Audit a witness sequence on sampled point pairs.

    ``samples`` holds (x, y, equal) triples; for unequal pairs some index
    must cover (x, y), for equal pairs none may.
    """
    covered, failures, violations = [], [], []
    for idx, (x, y, equal) in enumerate(samples):
        xname, yname = _as_name(x), _as_name(y)
        hit = None
        i = 0
        while i + 2 <= fuel:
            budget = fuel // (i + 2)
            ox = ws.u_seq(i).member(xname)
            oy = ws.v_seq(i).member(yname)
            if ox.confirmed_at(budget) and oy.confirmed_at(budget):
                hit = (i, ox.observe(budget).step, oy.observe(budget).step)
                break
            i += 1
        if equal:
            if hit is not None:
                violations.append((idx, hit[0]))
        else:
            if hit is None:
                failures.append(idx)
            else:
                covered.append((idx, *hit))
    return WitnessSequenceReport(covered=covered, failures=failures,
                                 violations=violations)


def singleton_witness_sequence_for_nat() -> HausdorffWitnessSequence:
    """Witness of Hausdorffness for N from singleton opens: index i codes
    the pair (n, m) with n ≠ m, U_i = {n}, V_i = {m}."""

    def nth_pair(i: int) -> Tuple[int, int]:
        n, m = unpair(i)
        return n, m

    def u_seq(i: int) -> OpenSetCode:
        n, m = nth_pair(i)
        if n == m:
            return OpenSetCode.nothing()
        return OpenSetCode.from_prefix_predicate(lambda w: len(w) >= 1 and w[0] == n)

    def v_seq(i: int) -> OpenSetCode:
        n, m = nth_pair(i)
        if n == m:
            return OpenSetCode.nothing()
        return OpenSetCode.from_prefix_predicate(lambda w: len(w) >= 1 and w[0] == m)

    return HausdorffWitnessSequence(u_seq=u_seq, v_seq=v_seq)
