"""The separating example spaces and their realizers and adversaries.

Non-computable parameters (a non-c.e. set A, a non-computable stream p)
are modeled as finite oracle tables loaded from files; impossibility
results become adversarial constructions that defeat supplied candidate
realizers and hand back machine-checkable certificates.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Dict, List, Optional, Sequence, Set, Tuple

from .ceers import FuelExhausted, _interp_cached
from .kernel import (
    DecJz,
    Goto,
    Halt,
    Halted,
    Inc,
    Name,
    SierpObservation,
    ToyProgram,
    Word,
    decode_word,
    encode_word,
    enumerate_program,
    interleave,
    interpret,
    is_prefix,
    pair,
    monotone_semidecider,
    semidecider,
    unpair,
)
from .spaces import (
    ClosedSetCode,
    DiscretenessWitness,
    HausdorffWitness,
    OpenSetCode,
    OvertCode,
    FibreOvertRep,
    Point,
    SpaceDescriptor,
    _as_name,
    baire_cylinder,
)


# ---------------------------------------------------------------------------
# Oracle sets


class OracleError(Exception):
    pass


@dataclass
class OracleSet:
    """Finite-table stand-in for a subset of N.

    ``members`` fixes final membership over ``universe``; numbers at or
    beyond the universe are outside the set.  A d.c.e. stage table must
    change each n's bit at most twice, following the pattern 0 -> 1 -> 0;
    a limit table must converge per n to the final membership.
    """

    members: frozenset
    universe: int
    dce_stages: Optional[Tuple[Tuple[int, int, int], ...]] = None
    lim_stages: Optional[Tuple[Tuple[int, int, int], ...]] = None

    def __post_init__(self):
        self.members = frozenset(self.members)
        if any(n >= self.universe or n < 0 for n in self.members):
            raise OracleError("member outside the table universe")
        if self.dce_stages is not None:
            self.dce_stages = tuple(sorted(self.dce_stages))
            for n in range(self.universe):
                hist = self.bit_history(n, self.dce_stages)
                changes = _change_points(hist)
                if len(changes) > 2:
                    raise OracleError(f"d.c.e. table: {n} changes more than twice")
                pattern = [b for _, b in changes]
                if pattern not in ([], [1], [1, 0]):
                    raise OracleError(f"d.c.e. table: {n} violates 0->1->0")
                final = pattern[-1] if pattern else 0
                if bool(final) != (n in self.members):
                    raise OracleError(f"d.c.e. table: {n} final bit disagrees with membership")
        if self.lim_stages is not None:
            self.lim_stages = tuple(sorted(self.lim_stages))
            for n in range(self.universe):
                hist = self.bit_history(n, self.lim_stages)
                final = hist[-1][1] if hist else 0
                if bool(final) != (n in self.members):
                    raise OracleError(f"limit table: {n} does not converge to membership")

    @staticmethod
    def bit_history(n: int, stages) -> List[Tuple[int, int]]:
        return [(s, b) for (s, m, b) in stages if m == n]

    def contains(self, n: int) -> bool:
        return n in self.members

    def complement(self, bound: Optional[int] = None) -> List[int]:
        bound = self.universe if bound is None else bound
        return [n for n in range(bound) if n not in self.members]

    def enumeration(self) -> List[int]:
        """Deterministic enumeration of the members: by entry stage when a
        d.c.e. table is present, else ascending."""
        if self.dce_stages is not None:
            order = []
            for (s, n, b) in self.dce_stages:
                if b == 1 and n in self.members and n not in order:
                    order.append(n)
            return order
        return sorted(self.members)

    def entry_stage(self, n: int) -> Optional[int]:
        """Stage at which n first enters, per the d.c.e. table (or its
        enumeration index when no table is given)."""
        if self.dce_stages is not None:
            for (s, m, b) in self.dce_stages:
                if m == n and b == 1:
                    return s
            return None
        order = self.enumeration()
        return order.index(n) if n in order else None

    def exit_stage(self, n: int) -> Optional[int]:
        if self.dce_stages is None:
            return None
        entered = False
        for (s, m, b) in self.dce_stages:
            if m != n:
                continue
            if b == 1:
                entered = True
            elif entered:
                return s
        return None

    def ever_entered(self, n: int) -> bool:
        return self.entry_stage(n) is not None or n in self.members

    def limit_bit(self, n: int) -> int:
        return 1 if n in self.members else 0

    @staticmethod
    def from_members(members, universe: Optional[int] = None) -> "OracleSet":
        members = frozenset(members)
        if universe is None:
            universe = (max(members) + 1) if members else 1
        return OracleSet(members=members, universe=universe)


def _change_points(history: List[Tuple[int, int]]) -> List[Tuple[int, int]]:
    current = 0
    out = []
    for s, b in history:
        if b != current:
            out.append((s, b))
            current = b
    return out


# --- oracle file formats ---------------------------------------------------


def parse_oracle(text: str) -> OracleSet:
    """`oracle v1` header, then lines `n bit`."""
    lines = text.splitlines()
    if not lines or lines[0].strip() != "oracle v1":
        raise OracleError("expected header 'oracle v1'")
    members = set()
    top = 0
    for ln in lines[1:]:
        stripped = ln.split("#", 1)[0].strip()
        if not stripped:
            continue
        n, bit = (int(t) for t in stripped.split())
        top = max(top, n + 1)
        if bit:
            members.add(n)
    return OracleSet(members=frozenset(members), universe=max(top, 1))


def format_oracle(a: OracleSet) -> str:
    lines = ["oracle v1"]
    for n in range(a.universe):
        lines.append(f"{n} {1 if n in a.members else 0}")
    return "\n".join(lines) + "\n"


def _parse_staged(text: str, header: str) -> Tuple[Tuple[Tuple[int, int, int], ...], int]:
    lines = text.splitlines()
    if not lines or lines[0].strip() != header:
        raise OracleError(f"expected header {header!r}")
    stages = []
    top = 0
    for ln in lines[1:]:
        stripped = ln.split("#", 1)[0].strip()
        if not stripped:
            continue
        s, n, b = (int(t) for t in stripped.split())
        stages.append((s, n, b))
        top = max(top, n + 1)
    return tuple(sorted(stages)), max(top, 1)


def parse_dce(text: str) -> OracleSet:
    """`dce v1` header, then lines `stage n bit`."""
    stages, universe = _parse_staged(text, "dce v1")
    members = _final_members(stages, universe)
    return OracleSet(members=members, universe=universe, dce_stages=stages)


def parse_lim(text: str) -> OracleSet:
    """`lim v1` header, then lines `stage n bit` converging per n."""
    stages, universe = _parse_staged(text, "lim v1")
    members = _final_members(stages, universe)
    return OracleSet(members=members, universe=universe, lim_stages=stages)


def format_dce(a: OracleSet) -> str:
    if a.dce_stages is None:
        raise OracleError("oracle has no d.c.e. stage table")
    return "dce v1\n" + "".join(f"{s} {n} {b}\n" for s, n, b in a.dce_stages)


def _final_members(stages, universe: int) -> frozenset:
    final = {}
    for s, n, b in sorted(stages):
        final[n] = b
    return frozenset(n for n, b in final.items() if b == 1)


# ---------------------------------------------------------------------------
# Stage logs


class StageLog:
    """Append-only, replay-deterministic record of phased constructions.

    Serializes as JSON lines with `stage`, `event`, `data` fields.
    """

    def __init__(self):
        self.events: List[dict] = []

    def record(self, stage, event: str, data=None):
        self.events.append({"stage": stage, "event": event,
                            "data": data if data is not None else {}})

    def to_jsonl(self) -> str:
        return "".join(json.dumps(e, sort_keys=True) + "\n" for e in self.events)

    @staticmethod
    def from_jsonl(text: str) -> "StageLog":
        log = StageLog()
        for ln in text.splitlines():
            if ln.strip():
                log.events.append(json.loads(ln))
        return log


# ---------------------------------------------------------------------------
# The complement of the halting problem


def halting_complement_refute(n: int, fuel_ignored: int = 0) -> SierpObservation:
    """Refutation of membership in the halting complement: confirms once
    program n halts on input n."""
    return SierpObservation(lambda fuel: _interp_cached(n, n, fuel) is not None)


# ---------------------------------------------------------------------------
# The injection diagonalizer (no computable injection into N)


@dataclass
class WitnessClause:
    """One clause of a Hausdorffness witness for a subspace of O(N):
    enumerations covering `requires_all` name a different point than
    enumerations containing `distinguishes`."""

    requires_all: Tuple[int, ...]
    distinguishes: int
    vacuous: bool = False


def injection_diagonalizer(candidate: int, fuel: int):
    """Defeat a candidate injection-into-N realizer on a finite subspace
    of O(N), running the three-phase construction.

    The candidate program is fed word-coded finite enumerations (symbol 0
    pads, symbol v+1 emits v).  Returns the final space state, the
    accumulated Hausdorffness witness clauses, and the stage log.
    """
    prog = enumerate_program(candidate)
    log = StageLog()
    clauses: List[WitnessClause] = []
    state = {"phase": 1, "space": "{N}", "points": None}
    log.record(0, "phase", {"phase": 1})

    first = _search_enumeration_output(prog, range(fuel), fuel, exclude=None)
    if first is None:
        log.record(1, "stalled", {"note": "candidate produced no output"})
        return state, clauses, log
    t1, j_set, m = first
    i_set = tuple(range((max(j_set) if j_set else -1) + 2))
    state = {"phase": 2, "space": "{I, N\\I}", "points": {"I": list(i_set)},
             "claimed_output": m}
    clause2 = WitnessClause(requires_all=i_set, distinguishes=i_set[-1] + 1)
    clauses.append(clause2)
    log.record(1, "phase", {"phase": 2, "J": sorted(j_set), "m": m,
                            "I": list(i_set), "found_at": t1})

    second = _search_enumeration_output(prog, range(t1 + 1, fuel), fuel,
                                        exclude=set(i_set), differ_from=m)
    if second is None:
        log.record(2, "stalled", {"note": "constant m", "m": m})
        return state, clauses, log
    t2, k_set, ell = second
    final_i = tuple(sorted(set(j_set) | set(k_set)))
    clause2.vacuous = True  # no valid point meets the phase-2 requirement now
    clauses.append(WitnessClause(requires_all=final_i,
                                 distinguishes=(max(k_set) if k_set else max(final_i, default=-1)) + 1))
    state = {"phase": 3, "space": "{I, N\\I}", "points": {"I": list(final_i)},
             "certificate": {"J": sorted(j_set), "K": sorted(k_set),
                             "m": m, "l": ell,
                             "note": "candidate non-extensional on names of I"}}
    log.record(2, "phase", {"phase": 3, "K": sorted(k_set), "l": ell,
                            "I": list(final_i), "found_at": t2})
    return state, clauses, log


def _search_enumeration_output(prog, t_range, fuel, exclude=None, differ_from=None):
    """Scan (word index, step budget) codes for a finite enumeration the
    program answers on; deterministic discovery order."""
    for t in t_range:
        j, steps = unpair(t)
        if steps == 0:
            continue
        w = decode_word(j)
        emitted = frozenset(c - 1 for c in w if c > 0)
        if exclude is not None and emitted & exclude:
            continue
        res = interpret(prog, encode_word(w), steps)
        if isinstance(res, Halted):
            if differ_from is not None and res.output == differ_from:
                continue
            return t, emitted, res.output
    return None


# ---------------------------------------------------------------------------
# S_A: the subspace {(n, [n in A])} of N x S


def sa_name(n: int, flag: Name) -> Name:
    out = interleave(Name.constant(n), flag)
    out.label = ("sa", n)
    return out


def sa_point_name(a: OracleSet, n: int) -> Name:
    """Canonical name of the S_A point over n: the flag track shows a 1
    from the entry stage on iff n is a member."""
    if n in a.members:
        stage = a.entry_stage(n)
        stage = 0 if stage is None else stage
        flag = Name.total(lambda k: 1 if k >= stage else 0)
    else:
        flag = Name.constant(0)
    return sa_name(n, flag)


def sa_space(a: OracleSet) -> SpaceDescriptor:
    def eq(p, q, fuel):
        return p.at(0, fuel) == q.at(0, fuel)

    return SpaceDescriptor(tag="SA", meta_equal=eq, data={"oracle": a})


def sa_witnesses(a: OracleSet = None) -> Tuple[DiscretenessWitness, HausdorffWitness]:
    """Both witnesses compare the first coordinates only; correct on all
    valid names because the first coordinate determines the point."""
    d = DiscretenessWitness(code=monotone_semidecider(
        lambda w: len(w) >= 2 and w[0] == w[1]))
    h = HausdorffWitness(code=monotone_semidecider(
        lambda w: len(w) >= 2 and w[0] != w[1]))
    return d, h


def sa_iso_when_ce(a: OracleSet):
    """For enumerable A: forward map n -> (n, [n in A]) raising the flag
    at the enumeration step of n, and the projection back."""
    order = a.enumeration()
    index = {n: i for i, n in enumerate(order)}

    def forward(n: int) -> Point:
        if n in index:
            i = index[n]
            flag = Name.total(lambda k, i=i: 1 if k >= i else 0)
        else:
            flag = Name.constant(0)
        return Point(sa_space(a), sa_name(n, flag))

    def backward(x, fuel: int) -> Optional[int]:
        return _as_name(x).at(0, fuel)

    return forward, backward


# --- normality protocol ----------------------------------------------------


def sa_closed_column(n: int) -> ClosedSetCode:
    """({n} x S) ∩ S_A: complement open accepts names with a different
    first coordinate."""
    return ClosedSetCode(complement_open=OpenSetCode(code=monotone_semidecider(
        lambda w: len(w) >= 1 and w[0] != n)))


def sa_closed_bottom(n: int) -> ClosedSetCode:
    """{(n, ⊥)} ∩ S_A: complement open accepts a different coordinate or
    a raised flag."""
    return ClosedSetCode(complement_open=OpenSetCode(code=monotone_semidecider(
        lambda w: (len(w) >= 1 and w[0] != n)
        or any(w[k] != 0 for k in range(1, len(w), 2)))))


def sa_closed_empty() -> ClosedSetCode:
    return ClosedSetCode(complement_open=OpenSetCode.everything())


def reference_norm_realizer(a: OracleSet):
    """Normality realizer for S_A built from a d.c.e. stage table.

    The first open accepts a raised-flag name once its coordinate has
    entered A by the current stage; the second accepts a name once its
    coordinate's final membership is outside A and any recorded reversion
    stage has passed.  Disjoint on valid points; containment holds for
    every valid input pair.
    """

    def norm(c1: ClosedSetCode, c2: ClosedSetCode) -> Tuple[OpenSetCode, OpenSetCode]:
        def u_member(name: Name) -> SierpObservation:
            def confirmed(fuel: int) -> bool:
                n = name.at(0, fuel)
                if n is None:
                    return False
                stage = a.entry_stage(n)
                if stage is None or stage > fuel:
                    return False
                w = name.prefix(fuel)
                return any(w[k] != 0 for k in range(1, len(w), 2))

            return SierpObservation(confirmed)

        def v_member(name: Name) -> SierpObservation:
            def confirmed(fuel: int) -> bool:
                n = name.at(0, fuel)
                if n is None:
                    return False
                if n in a.members:
                    return False
                exit = a.exit_stage(n)
                return exit is None or exit <= fuel

            return SierpObservation(confirmed)

        return OpenSetCode(member=u_member), OpenSetCode(member=v_member)

    return norm


def norm_to_dce(norm_realizer, n: int, fuel: int):
    """Extract a two-flip membership proclamation stream for n from a
    normality realizer for S_A.

    Feed ({n} x S) ∩ S_A against {(n,⊥)}; flip to membership when the
    first returned open accepts (n,⊤); then feed ∅ against {(n,⊥)} and
    flip back exactly when the second returned open accepts (n,⊥).
    """
    log = StageLog()
    proclamations = [(0, 0)]
    log.record(0, "proclaim", {"n": n, "bit": 0})
    top = sa_name(n, Name.constant(1))
    bottom = sa_name(n, Name.constant(0))
    u1, _v1 = norm_realizer(sa_closed_column(n), sa_closed_bottom(n))
    obs = u1.member(top)
    if obs.confirmed_at(fuel):
        t1 = obs.observe(fuel).step
        proclamations.append((t1, 1))
        log.record(1, "proclaim", {"n": n, "bit": 1, "step": t1})
        _u2, v2 = norm_realizer(sa_closed_empty(), sa_closed_bottom(n))
        obs2 = v2.member(bottom)
        if obs2.confirmed_at(fuel):
            t2 = obs2.observe(fuel).step
            proclamations.append((max(t2, t1), 0))
            log.record(2, "proclaim", {"n": n, "bit": 0, "step": t2})
    return proclamations, log


# --- the embedding into N x [0,1] ------------------------------------------


class PrecisionExhausted(Exception):
    pass


def dce_to_embedding(a: OracleSet, precision: int):
    """Embedding of S_A into N x [0,1] (dyadic grid) driven by the d.c.e.
    stage table, with a partial inverse.

    For each coordinate n the embedding replays three phases: approximate
    (n, b) by (n, 0); on entry of n choose the largest dyadic still
    consistent with the approximations emitted so far and send (n,⊤)
    there; on reversion send (n,⊥) back to (n, 0).
    """

    def epsilon(n: int) -> Fraction:
        stage = a.entry_stage(n)
        if stage is None:
            raise ValueError(f"{n} never enters A")
        if stage > precision:
            raise PrecisionExhausted(
                f"epsilon 2^-{stage} underflows the 2^-{precision} grid")
        return Fraction(1, 2 ** stage)

    def iota(n: int, flag: bool) -> Tuple[int, Fraction]:
        if flag != (n in a.members):
            raise ValueError(f"({n}, {flag}) is not a point of S_A")
        if flag:
            return (n, epsilon(n))
        return (n, Fraction(0))

    def iota_inv(n: int, x: Fraction) -> Optional[Tuple[int, bool]]:
        x = Fraction(x)
        if x == 0:
            if a.ever_entered(n) and n in a.members:
                return None  # phase 2 provides no information at 0
            return (n, False)
        if a.ever_entered(n):
            eps = Fraction(1, 2 ** min(a.entry_stage(n), precision))
            if x > eps / 2:
                return (n, True)
        return None

    def approximation_trail(n: int, flag: bool) -> List[Tuple[Fraction, Fraction]]:
        """Emitted interval refinements for the name of (n, flag); each
        later interval is contained in the earlier ones."""
        if flag != (n in a.members):
            raise ValueError(f"({n}, {flag}) is not a point of S_A")
        if flag:
            stage = a.entry_stage(n)
            eps = epsilon(n)
            trail = [(Fraction(0), Fraction(1, 2 ** k)) for k in range(stage + 1)]
            trail.append((eps, eps))
            return trail
        stage = a.entry_stage(n)
        if stage is None:
            return [(Fraction(0), Fraction(1, 2 ** k)) for k in range(precision + 1)]
        # entered and reverted: the bottom point re-enters at (n, 0)
        trail = [(Fraction(0), Fraction(1, 2 ** k)) for k in range(stage + 1)]
        trail.append((Fraction(0), Fraction(0)))
        return trail

    return iota, iota_inv, approximation_trail


# --- the Delta^0_2 subspace description ------------------------------------


@dataclass
class SubspaceDescription:
    """Countable conjunction (over coordinates) of stabilization
    conditions carving S_A out of N x S."""

    clauses: List[dict]
    degenerate: bool

    def accepts(self, n: int, flag: bool) -> bool:
        for clause in self.clauses:
            if clause["n"] == n:
                return flag == bool(clause["limit"])
        return flag is False  # outside the table everything is a non-member


def delta02_subspace_code(a: OracleSet) -> SubspaceDescription:
    """Pi^0_2 description of S_A inside N x S from a limit table."""
    stages = a.lim_stages if a.lim_stages is not None else tuple(
        (0, n, 1) for n in sorted(a.members))
    clauses = []
    for n in range(a.universe):
        history = OracleSet.bit_history(n, stages)
        clauses.append({
            "n": n,
            "history": history,
            "mind_changes": len(_change_points(history)),
            "limit": a.limit_bit(n),
        })
    degenerate = all(c["mind_changes"] <= 1 for c in clauses)
    return SubspaceDescription(clauses=clauses, degenerate=degenerate)


# ---------------------------------------------------------------------------
# D_A: discrete but not Hausdorff


def da_name(member_of: frozenset, flipped: frozenset, horizon: int = 1 << 30) -> Name:
    """Characteristic stream of a set with finitely many 1s flipped to 0."""
    member_of = frozenset(member_of)
    flipped = frozenset(flipped)

    def value(k: int) -> int:
        return 1 if (k in member_of and k not in flipped) else 0

    return Name.total(value, label=("da", member_of))


def da_space(a: OracleSet) -> SpaceDescriptor:
    def eq(p, q, fuel):
        return p.label == q.label if (p.label and q.label) else False

    return SpaceDescriptor(tag="DA", meta_equal=eq, data={"oracle": a})


def da_discreteness(a: OracleSet = None) -> DiscretenessWitness:
    """Confirms exactly when the two bitstreams share a 1 at a common
    position (valid names sharing a 1 denote the same point)."""

    def accept(w: Word) -> bool:
        return any(w[2 * k] == 1 and w[2 * k + 1] == 1
                   for k in range(len(w) // 2))

    return DiscretenessWitness(code=monotone_semidecider(accept))


# --- the Hausdorffness diagonalizer ---------------------------------------


class WitnessCandidate:
    """Candidate Hausdorffness realizer: a deterministic stream of prefix
    pairs (w, u) claimed to separate points."""

    def __init__(self, pairs: Sequence[Tuple[Sequence, Sequence]]):
        self.pairs = [(tuple(w), tuple(u)) for w, u in pairs]

    def pairs_within(self, fuel: int) -> List[Tuple[tuple, tuple]]:
        return self.pairs[:fuel]


def parse_hwit(text: str) -> List[WitnessCandidate]:
    """`hwit v1` header; candidates separated by `candidate` lines; pairs
    as `pair <w bits> | <u bits>`."""
    lines = text.splitlines()
    if not lines or lines[0].strip() != "hwit v1":
        raise ValueError("expected header 'hwit v1'")
    candidates: List[List[Tuple[tuple, tuple]]] = []
    current: Optional[List[Tuple[tuple, tuple]]] = None
    for ln in lines[1:]:
        stripped = ln.split("#", 1)[0].strip()
        if not stripped:
            continue
        if stripped == "candidate":
            current = []
            candidates.append(current)
            continue
        if not stripped.startswith("pair"):
            raise ValueError(f"bad hwit line: {ln!r}")
        if current is None:
            current = []
            candidates.append(current)
        body = stripped[len("pair"):]
        left, right = body.split("|")
        w = tuple(int(t) for t in left.split())
        u = tuple(int(t) for t in right.split())
        current.append((w, u))
    return [WitnessCandidate(pairs) for pairs in candidates]


def format_hwit(candidates: Sequence[WitnessCandidate]) -> str:
    lines = ["hwit v1"]
    for cand in candidates:
        lines.append("candidate")
        for w, u in cand.pairs:
            lines.append("pair " + " ".join(map(str, w)) + " | " + " ".join(map(str, u)))
    return "\n".join(lines) + "\n"


@dataclass
class OmissionCertificate:
    """The candidate never supplies a pair of prefixes starting with the
    required run of zeros, so it answers nothing on some names."""

    stage: int
    required_zero_run: int
    scanned: int


@dataclass
class ConfusionCertificate:
    """The candidate separates two names that both denote the point a:
    its pair at ``step`` has all its 1-positions placed inside A."""

    stage: int
    step: int
    w: tuple
    u: tuple
    forced_members: tuple
    horizon: int


class CandidateStalls(Exception):
    pass


def da_diagonalize(candidates: Sequence[WitnessCandidate], fuel: int):
    """Defeat each candidate Hausdorffness witness while building A.

    Per stage: either certify the candidate omits a required all-zero
    prefix pair (and extend A freely), or absorb the chosen pair's
    1-positions into A so the pair wrongly separates two names of a.
    Returns the A-prefix bits, the certificates, and the stage log.
    """
    bits: Dict[int, int] = {}
    bound = 0  # positions < bound are determined
    log = StageLog()
    certificates = []
    for stage, cand in enumerate(candidates):
        pairs = cand.pairs_within(fuel)
        chosen = None
        zero_run = (0,) * bound
        for step, (w, u) in enumerate(pairs):
            if is_prefix(zero_run, w) and is_prefix(zero_run, u):
                chosen = (step, w, u)
                break
        if chosen is None:
            bits[bound] = 0
            bits[bound + 1] = 1
            bits[bound + 2] = 0
            new_bound = bound + 3
            certificates.append(OmissionCertificate(
                stage=stage, required_zero_run=bound, scanned=len(pairs)))
            log.record(stage, "omission", {"required_zero_run": bound,
                                           "member": bound + 1,
                                           "nonmember": bound + 2})
        else:
            step, w, u = chosen
            new_bound = max(len(w), len(u), bound) + 3
            forced = sorted({k for k in range(len(w)) if w[k] == 1}
                            | {k for k in range(len(u)) if u[k] == 1})
            for k in range(bound, new_bound):
                bits.setdefault(k, 0)
            for k in forced:
                bits[k] = 1
            bits[new_bound - 1] = 1  # keep A infinite
            certificates.append(ConfusionCertificate(
                stage=stage, step=step, w=w, u=u,
                forced_members=tuple(forced), horizon=new_bound))
            log.record(stage, "confusion", {"step": step,
                                            "forced_members": forced,
                                            "member": new_bound - 1,
                                            "nonmember": new_bound - 2})
        bound = new_bound
    prefix = [bits.get(k, 0) for k in range(bound)]
    return prefix, certificates, log


def replay_da_certificate(cert, candidates: Sequence[WitnessCandidate],
                          prefix: Sequence[int], fuel: int) -> bool:
    """Re-check a diagonalization certificate against the candidate list
    and the produced A-prefix."""
    cand = candidates[cert.stage]
    if isinstance(cert, OmissionCertificate):
        zero_run = (0,) * cert.required_zero_run
        return not any(is_prefix(zero_run, w) and is_prefix(zero_run, u)
                       for w, u in cand.pairs_within(fuel))
    if cert.step >= fuel:
        raise CandidateStalls(
            f"stage {cert.stage}: confirmation step {cert.step} exceeds fuel {fuel}")
    pairs = cand.pairs_within(fuel)
    if cert.step >= len(pairs) or pairs[cert.step] != (cert.w, cert.u):
        return False
    # both constructed names must denote a: every 1-position lies in A
    members = {k for k, b in enumerate(prefix) if b == 1}
    ones = {k for k in range(len(cert.w)) if cert.w[k] == 1} \
        | {k for k in range(len(cert.u)) if cert.u[k] == 1}
    return ones <= members


def da_partition_variant(a: OracleSet, partition: Sequence[Sequence[int]]
                         ) -> SpaceDescriptor:
    """Split the complement point into one point per partition block; the
    shared-1 discreteness argument survives unchanged."""
    blocks = [frozenset(b) for b in partition]
    comp = set(a.complement())
    flat: Set[int] = set()
    for b in blocks:
        if flat & b:
            raise ValueError("partition blocks must be disjoint")
        flat |= b
    if not flat <= comp:
        raise ValueError("partition blocks must avoid A")

    def eq(p, q, fuel):
        return p.label == q.label if (p.label and q.label) else False

    return SpaceDescriptor(tag="DAPartition", meta_equal=eq,
                           data={"oracle": a, "blocks": blocks})


def da_partition_name(space: SpaceDescriptor, block_index: Optional[int],
                      flipped=()) -> Name:
    """Name of b_i (block index) or of a (None) in the partition variant."""
    if block_index is None:
        base = space.data["oracle"].members
        label = ("da", "a")
    else:
        base = space.data["blocks"][block_index]
        label = ("da", f"b{block_index}")
    out = da_name(frozenset(base), frozenset(flipped))
    out.label = label
    return out


# ---------------------------------------------------------------------------
# H_A: Hausdorff but not discrete


def ha_name(head: int, tail: Sequence[Optional[int]]) -> Name:
    """Name ⟨head, enumeration⟩; tail entries are emissions or None for a
    pause, coded as v+1 / 0; past the given tail the name pauses forever."""
    tail = tuple(tail)

    def value(k: int) -> int:
        if k == 0:
            return head
        j = k - 1
        if j < len(tail):
            v = tail[j]
            return 0 if v is None else v + 1
        return 0

    return Name.total(value)


def ha_a_name(a: OracleSet, head: Optional[int] = None) -> Name:
    """Canonical name of a: a head outside A followed by an enumeration
    of A."""
    comp = a.complement()
    if not comp:
        raise OracleError("A must be a proper subset")
    head = comp[0] if head is None else head
    if head in a.members:
        raise OracleError(f"head {head} must lie outside A")
    members = sorted(a.members)
    out = ha_name(head, members)
    out.label = ("ha", "a")
    return out


def ha_b_name(a: OracleSet, head: Optional[int] = None,
              tail: Sequence[Optional[int]] = ()) -> Name:
    """Canonical name of b: a head inside A followed by an enumeration of
    a subset of the complement (empty by default)."""
    if not a.members:
        raise OracleError("A must be non-empty")
    head = sorted(a.members)[0] if head is None else head
    if head not in a.members:
        raise OracleError(f"head {head} must lie in A")
    if any(v is not None and v in a.members for v in tail):
        raise OracleError("b-tail must avoid A")
    out = ha_name(head, tail)
    out.label = ("ha", "b")
    return out


def ha_space(a: OracleSet) -> SpaceDescriptor:
    def eq(p, q, fuel):
        return p.label == q.label if (p.label and q.label) else False

    return SpaceDescriptor(tag="HA", meta_equal=eq, data={"oracle": a})


def ha_hausdorff(a: OracleSet = None) -> HausdorffWitness:
    """Confirms exactly when one name's head shows up in the other's
    enumerated tail; names of distinct points always reach this."""

    def accept(w: Word) -> bool:
        x = [w[k] for k in range(0, len(w), 2)]
        y = [w[k] for k in range(1, len(w), 2)]
        if not x or not y:
            return False
        head_x, head_y = x[0], y[0]
        tail_x = {v - 1 for v in x[1:] if v > 0}
        tail_y = {v - 1 for v in y[1:] if v > 0}
        return head_x in tail_y or head_y in tail_x

    return HausdorffWitness(code=monotone_semidecider(accept))


def ha_medvedev(a: OracleSet):
    """Medvedev translations between enumerations of A and codes of the
    open {b}."""
    if not a.members or not a.complement():
        raise OracleError("A must be non-empty and proper")

    def enum_to_singleton_b(enum: Name) -> OpenSetCode:
        def member(name: Name) -> SierpObservation:
            def confirmed(fuel: int) -> bool:
                head = name.at(0, fuel)
                if head is None:
                    return False
                seen = {v - 1 for v in enum.prefix(fuel) if v > 0}
                return head in seen

            return SierpObservation(confirmed)

        return OpenSetCode(member=member)

    def singleton_b_to_enum(code: OpenSetCode) -> Callable[[int], Optional[int]]:
        """Enumeration of A from a correct {b}-code: probe pause-tailed
        heads and emit on acceptance."""
        def emission(k: int) -> Optional[int]:
            n, s = unpair(k)
            if code.member(ha_name(n, ())).confirmed_at(s):
                return n
            return None

        return emission

    return enum_to_singleton_b, singleton_b_to_enum


def enumeration_to_set(emission: Callable[[int], Optional[int]], fuel: int) -> Set[int]:
    return {v for v in (emission(k) for k in range(fuel)) if v is not None}


def ha_reference_overt(a: OracleSet) -> OvertCode:
    """Overt code for H_A built from the oracle table: dovetails a given
    open over the canonical names of a and b."""
    names = [ha_a_name(a), ha_b_name(a)]
    return OvertCode.from_name_stream(lambda i: names[i], count=2)


def ha_overt_to_cototal(overt: OvertCode, complement_enum: Name, fuel: int) -> Set[int]:
    """Enumerate A from an enumeration of its complement, through the
    overtness of H_A.

    For each k the probe open accepts ⟨n, V⟩ once n is confirmed outside
    A (via the complement enumeration) and k has appeared in V; it is
    nonempty exactly when k ∈ A.
    """

    def probe(k: int) -> OpenSetCode:
        def member(name: Name) -> SierpObservation:
            def confirmed(f: int) -> bool:
                head = name.at(0, f)
                if head is None:
                    return False
                outside = {v - 1 for v in complement_enum.prefix(f) if v > 0}
                if head not in outside:
                    return False
                tail = {v - 1 for v in name.prefix(f)[1:] if v > 0}
                return k in tail

            return SierpObservation(confirmed)

        return OpenSetCode(member=member)

    out = set()
    k = 0
    while k + 2 <= fuel:
        if overt.query(probe(k)).confirmed_at(fuel // (k + 2)):
            out.add(k)
        k += 1
    return out


# ---------------------------------------------------------------------------
# Finite spaces


def first_symbol_fibre_overt(size: int) -> FibreOvertRep:
    """Fibre-overt representation of the n-point space whose names are the
    streams with a fixed first symbol below ``size``."""

    def eq(p, q, fuel):
        return p.at(0, fuel) == q.at(0, fuel)

    space = SpaceDescriptor(tag=f"Finite({size})", meta_equal=eq)

    def preimage(x) -> Name:
        return _as_name(x)

    def fibre_overt(x) -> OvertCode:
        name = _as_name(x)

        def query(u: OpenSetCode) -> SierpObservation:
            def confirmed(fuel: int) -> bool:
                s = name.at(0, fuel)
                if s is None:
                    return False
                return u.member(Name.constant(s)).confirmed_at(fuel)

            return SierpObservation(confirmed)

        return OvertCode(query)

    return FibreOvertRep(space=space, preimage=preimage, fibre_overt=fibre_overt)


def finite_injection(rep: FibreOvertRep, prefixes: Sequence[Sequence]):
    """Injection into {0..n-1} from pairwise incompatible covering
    prefixes, by querying fibre-overtness against each cylinder."""
    prefixes = [tuple(w) for w in prefixes]

    def classify(x, fuel: int) -> int:
        overt = rep.fibre_overt(x)
        obs = [overt.query(baire_cylinder(w)) for w in prefixes]
        i = 0
        while i + 2 <= fuel:
            if i < len(obs) and obs[i].confirmed_at(fuel // (i + 2)):
                return i
            i += 1
        raise FuelExhausted("no prefix query confirmed")

    return classify


def bijection_upgrade(points: Sequence[Point], witness):
    """Inverse of a finite bijection from either separation witness.

    Discrete case: return the first index whose image is confirmed equal.
    Hausdorff case: return the unique index not eliminated once all other
    images are confirmed distinct.
    """
    n = len(points)
    discrete = isinstance(witness, DiscretenessWitness)

    def invert(x, fuel: int) -> int:
        if n == 1:
            return 0
        xname = _as_name(x)
        obs = [witness.check(_as_name(p), xname) for p in points]
        if discrete:
            i = 0
            while i + 2 <= fuel:
                if i < n and obs[i].confirmed_at(fuel // (i + 2)):
                    return i
                i += 1
            raise FuelExhausted("no equality confirmed")
        eliminated = {i for i in range(n) if obs[i].confirmed_at(fuel)}
        remaining = set(range(n)) - eliminated
        if len(remaining) == 1:
            return remaining.pop()
        if not remaining:
            raise ValueError("witness eliminated every index; input is not in range")
        raise FuelExhausted(f"only {len(eliminated)} of {n - 1} eliminations confirmed")

    return invert


# ---------------------------------------------------------------------------
# pN: discrete, Hausdorff, overt, not admissible


def pn_name(n: int, tail: Name) -> Name:
    """Name 0^n 1 q of the point n."""

    def value(k: int, fuel: int) -> Optional[int]:
        if k < n:
            return 0
        if k == n:
            return 1
        return tail.at(k - n - 1, fuel)

    return Name(value, label=("pn", n))


def _zero_run_length(w: Word) -> Optional[int]:
    for i, v in enumerate(w):
        if v != 0:
            return i
    return None


def pn_space(p: Name):
    """The space with names 0^n 1 q (q tied to the oracle stream p):
    descriptor, both separation witnesses, and the p-relative overt code."""

    def eq(nm1, nm2, fuel):
        a = _zero_run_length(nm1.prefix(fuel))
        b = _zero_run_length(nm2.prefix(fuel))
        return a is not None and a == b

    space = SpaceDescriptor(tag="PN", meta_equal=eq, data={"oracle_stream": p})

    def d_accept(w: Word) -> bool:
        x = tuple(w[k] for k in range(0, len(w), 2))
        y = tuple(w[k] for k in range(1, len(w), 2))
        a, b = _zero_run_length(x), _zero_run_length(y)
        return a is not None and b is not None and a == b

    def h_accept(w: Word) -> bool:
        x = tuple(w[k] for k in range(0, len(w), 2))
        y = tuple(w[k] for k in range(1, len(w), 2))
        a, b = _zero_run_length(x), _zero_run_length(y)
        return a is not None and b is not None and a != b

    d = DiscretenessWitness(code=monotone_semidecider(d_accept))
    h = HausdorffWitness(code=monotone_semidecider(h_accept))
    overt = OvertCode.from_name_stream(lambda n: pn_name(n, p))
    return space, d, h, overt


def parse_oracle_stream(text: str) -> Name:
    """`stream v1` header, then one value per line; past the file the
    stream continues with 0s."""
    lines = text.splitlines()
    if not lines or lines[0].strip() != "stream v1":
        raise OracleError("expected header 'stream v1'")
    values = []
    for ln in lines[1:]:
        stripped = ln.split("#", 1)[0].strip()
        if stripped:
            values.append(int(stripped))
    return Name.from_word(values, tail=0)


# ---------------------------------------------------------------------------
# N': the busy-beaver-timed copy of N


class CutoffExceeded(Exception):
    pass


@dataclass
class BBTable:
    """Audited maxima of halting step counts over bounded toy programs.

    Entries are maxima within the recorded brute-force fuel bound, not
    claims about the true function beyond it.
    """

    cutoff: int
    entries: Dict[int, int]
    audit_fuel: int

    def __getitem__(self, m: int) -> int:
        if m > self.cutoff or m not in self.entries:
            raise CutoffExceeded(f"size {m} beyond audited cutoff {self.cutoff}")
        return self.entries[m]


def compute_bb_table(cutoff: int, fuel: int) -> BBTable:
    """Brute-force the table: run every program of each size up to the
    cutoff on input 0 with the given fuel ceiling.

    A size-m program has at most m instructions drawn from HALT, INC r
    and DECJZ r l with r < m, and GOTO l with l inside the program.
    """
    from itertools import product as iproduct

    entries: Dict[int, int] = {}
    best = 0
    for m in range(1, cutoff + 1):
        for length in range(1, m + 1):
            alphabet = [Halt()]
            alphabet += [Inc(r) for r in range(m)]
            alphabet += [Goto(l) for l in range(length)]
            alphabet += [DecJz(r, l) for r in range(m) for l in range(length)]
            for combo in iproduct(alphabet, repeat=length):
                res = interpret(ToyProgram(combo), 0, fuel)
                if isinstance(res, Halted) and res.steps > best:
                    best = res.steps
        entries[m] = best
    return BBTable(cutoff=cutoff, entries=entries, audit_fuel=fuel)


def parse_bb(text: str) -> BBTable:
    """`bb v1` header, `audit <fuel>` line, then `m steps` lines."""
    lines = text.splitlines()
    if not lines or lines[0].strip() != "bb v1":
        raise ValueError("expected header 'bb v1'")
    audit = None
    entries = {}
    for ln in lines[1:]:
        stripped = ln.split("#", 1)[0].strip()
        if not stripped:
            continue
        parts = stripped.split()
        if parts[0] == "audit":
            audit = int(parts[1])
        else:
            entries[int(parts[0])] = int(parts[1])
    if audit is None:
        raise ValueError("missing 'audit <fuel>' line")
    return BBTable(cutoff=max(entries) if entries else 0, entries=entries,
                   audit_fuel=audit)


def format_bb(bb: BBTable) -> str:
    lines = ["bb v1", f"audit {bb.audit_fuel}"]
    for m in sorted(bb.entries):
        lines.append(f"{m} {bb.entries[m]}")
    return "\n".join(lines) + "\n"


def nprime_space(bb: BBTable):
    """The space N' where a name p denotes p(BB(p(0))): decode, encode,
    and the bound extractor that timing-attacks open-set realizers."""

    def decode(name: Name, fuel: int) -> Optional[int]:
        m = name.at(0, fuel)
        if m is None:
            return None
        position = bb[m]  # raises CutoffExceeded past the audit
        return name.at(position, fuel)

    def encode(n: int) -> Name:
        return Name.constant(n, label=("nprime", n))

    def bound_extractor(open_code: OpenSetCode, m: int, n: int, fuel: int) -> int:
        """Confirmation step of the name m n^ω; an upper bound for BB(m)
        whenever the open is neither empty nor everything."""
        name = Name.from_word((m,), tail=n)
        obs = open_code.member(name)
        verdict = obs.observe(fuel)
        if verdict is None or not obs.confirmed_at(fuel):
            raise FuelExhausted(f"open did not accept {m} {n}^w within {fuel}")
        return verdict.step

    return decode, encode, bound_extractor


def nprime_singleton_open(bb: BBTable, target: int) -> OpenSetCode:
    """Canonical realizer of the open {target} of N': accepts a name once
    the symbol at position BB(first symbol) is visible and equals the
    target."""

    def accept(w: Word) -> bool:
        if not w:
            return False
        m = w[0]
        if m > bb.cutoff:
            return False
        position = bb[m]
        return len(w) > position and w[position] == target

    return OpenSetCode(code=monotone_semidecider(accept))
