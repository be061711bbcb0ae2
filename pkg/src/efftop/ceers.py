"""Ceer presentations, saturation, quotient spaces, and the constructive
content of the ceer / discrete-space correspondence.

A ceer is presented by a deterministic stream of generator pairs; the
saturation engine is an incremental union-find fed by that stream, with
fuel bounding both stream consumption and merges.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from .kernel import (
    Halted,
    Name,
    SierpObservation,
    ToyProgram,
    Transducer,
    decode_word,
    enumerate_program,
    interleave_words,
    interpret,
    pair,
    unpair,
)
from .spaces import (
    DiscretenessWitness,
    OpenSetCode,
    Point,
    SpaceDescriptor,
    _as_name,
)


class FuelExhausted(Exception):
    pass


class IndexUnavailable(Exception):
    pass


class NotInfinite(Exception):
    def __init__(self, size: int):
        super().__init__(f"the enumerated space is finite with {size} elements")
        self.size = size


# ---------------------------------------------------------------------------
# Union-find closure state


class ClosureState:
    """Union-find over the naturals seen so far, with a merge log."""

    def __init__(self):
        self.parent: Dict[int, int] = {}
        self.cursor = 0
        self.events: List[Tuple[int, int, int]] = []  # (fuel, m, n) per merge

    def find(self, k: int) -> int:
        parent = self.parent
        if k not in parent:
            parent[k] = k
            return k
        root = k
        while parent[root] != root:
            root = parent[root]
        while parent[k] != root:
            parent[k], k = root, parent[k]
        return root

    def union(self, a: int, b: int, fuel_stamp: int = 0) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        # deterministic orientation: smaller root wins
        if rb < ra:
            ra, rb = rb, ra
        self.parent[rb] = ra
        self.events.append((fuel_stamp, a, b))
        return True

    def same(self, a: int, b: int) -> bool:
        return a == b or self.find(a) == self.find(b)

    def classes(self) -> List[frozenset]:
        groups: Dict[int, set] = {}
        for k in self.parent:
            groups.setdefault(self.find(k), set()).add(k)
        return [frozenset(g) for g in groups.values()]

    def event_log(self) -> List[str]:
        return [f"fuel={f} merge {m} {n}" for f, m, n in self.events]


def brute_force_closure(pairs: Sequence[Tuple[int, int]], universe: Sequence[int]):
    """Independent oracle: reflexive-symmetric-transitive closure over an
    explicit universe, by fixpoint iteration on the full relation."""
    universe = list(universe)
    related = {(a, a) for a in universe}
    for a, b in pairs:
        related.add((a, b))
        related.add((b, a))
        related.add((a, a))
        related.add((b, b))
    changed = True
    while changed:
        changed = False
        for (a, b) in list(related):
            for (c, d) in list(related):
                if b == c and (a, d) not in related:
                    related.add((a, d))
                    changed = True
    return related


# ---------------------------------------------------------------------------
# Presentations


class CeerPresentation:
    """Deterministic generator stream for a ceer.

    Backed by an explicit pair list, a toy program enumerating pair codes,
    or an arbitrary deterministic ``pair_fn(fuel) -> pairs`` (used by the
    derived constructions).  Consuming one generator costs one fuel unit;
    program-backed streams run under the round-robin budget schedule.
    """

    def __init__(self, pairs: Optional[Sequence[Tuple[int, int]]] = None,
                 program: Optional[ToyProgram] = None,
                 pair_fn: Optional[Callable[[int], List[Tuple[int, int]]]] = None,
                 label: str = ""):
        sources = sum(x is not None for x in (pairs, program, pair_fn))
        if sources != 1:
            raise ValueError("exactly one generator source required")
        self.pairs = [tuple(p) for p in pairs] if pairs is not None else None
        self.program = program
        self.pair_fn = pair_fn
        self.label = label
        self._gen_cache: Dict[int, List[Tuple[int, int]]] = {}
        self._sat_cache: Dict[int, ClosureState] = {}

    def generators_within(self, fuel: int) -> List[Tuple[int, int]]:
        if fuel in self._gen_cache:
            return self._gen_cache[fuel]
        if self.pairs is not None:
            out = self.pairs[:fuel]
        elif self.pair_fn is not None:
            out = list(self.pair_fn(fuel))
        else:
            out = []
            for i in range(fuel):
                budget = fuel // (i + 2)
                if budget == 0:
                    break
                res = interpret(self.program, i, budget)
                if isinstance(res, Halted):
                    out.append(unpair(res.output))
        self._gen_cache[fuel] = out
        return out


def saturate(pres: CeerPresentation, fuel: int) -> ClosureState:
    """RST-closure of the generators consumed within fuel; monotone."""
    if fuel in pres._sat_cache:
        return pres._sat_cache[fuel]
    state = ClosureState()
    for idx, (m, n) in enumerate(pres.generators_within(fuel)):
        state.union(m, n, fuel_stamp=idx + 1)
        state.cursor = idx + 1
    pres._sat_cache[fuel] = state
    return state


def ceer_equal(pres: CeerPresentation, n: int, m: int) -> SierpObservation:
    """Semidecide [n]_R = [m]_R; Confirmed exactly when saturation merges
    them, reflexive pairs immediately.  Verdict-level transitivity holds
    with saturation bound F(f) = f: merges at fuel f coexist in one state."""
    if n == m:
        return SierpObservation.always()
    return SierpObservation(lambda fuel: saturate(pres, fuel).same(n, m))


# ---------------------------------------------------------------------------
# Quotient space N/R


def quotient_space(pres: CeerPresentation, meta_fuel: int = 10_000) -> SpaceDescriptor:
    """N/R with names carrying a representative in position 0."""

    def eq(p: Name, q: Name, fuel: int) -> bool:
        a, b = p.at(0, fuel), q.at(0, fuel)
        if a is None or b is None:
            return False
        return ceer_equal(pres, a, b).confirmed_at(max(fuel, meta_fuel))

    return SpaceDescriptor(tag="CeerQuotient", meta_equal=eq,
                           data={"presentation": pres})


def quotient_point(pres: CeerPresentation, n: int) -> Point:
    return Point(quotient_space(pres), Name.constant(n, label=("class", n)))


def quotient_discreteness(pres: CeerPresentation) -> DiscretenessWitness:
    def check(p: Name, q: Name) -> SierpObservation:
        def confirmed(fuel: int) -> bool:
            a, b = p.at(0, fuel), q.at(0, fuel)
            if a is None or b is None:
                return False
            return ceer_equal(pres, a, b).confirmed_at(fuel)

        return SierpObservation(confirmed)

    return DiscretenessWitness(check=check)


def quotient_singleton_open(pres: CeerPresentation, m: int) -> OpenSetCode:
    """The open {[m]_R} of N/R."""

    def member(name: Name) -> SierpObservation:
        def confirmed(fuel: int) -> bool:
            a = name.at(0, fuel)
            return a is not None and ceer_equal(pres, a, m).confirmed_at(fuel)

        return SierpObservation(confirmed)

    return OpenSetCode(member=member)


def quotient_admissibility_decode(pres: CeerPresentation,
                                  filter_code: Callable[[OpenSetCode], SierpObservation],
                                  fuel: int) -> int:
    """Recover a representative from a neighbourhood-filter name.

    Searches for the first m (under the round-robin schedule) whose class
    singleton is accepted by the filter.  Any valid selection would do;
    first-confirmed-under-schedule keeps the result deterministic.
    """
    obs_cache: Dict[int, SierpObservation] = {}
    m = 0
    while m + 2 <= fuel:
        if m not in obs_cache:
            obs_cache[m] = filter_code(quotient_singleton_open(pres, m))
        if obs_cache[m].confirmed_at(fuel // (m + 2)):
            return m
        m += 1
    raise FuelExhausted(f"no representative found within fuel {fuel}")


def neighborhood_filter_of_class(pres: CeerPresentation, n: int,
                                 probe_fuel: int) -> Callable[[OpenSetCode], SierpObservation]:
    """The filter {U | [n] ∈ U} as a semidecision on open codes, probing
    membership of the canonical representative name."""

    def filt(u: OpenSetCode) -> SierpObservation:
        return u.member(Name.constant(n))

    return filt


# ---------------------------------------------------------------------------
# Constructive content of the discrete-space characterization


def extract_equality_prefixes(e: Transducer, fuel: int) -> List[tuple]:
    """Words w (in canonical enumeration order) on which the equality
    realizer confirms the diagonal pair (w, w) within the schedule."""
    out = []
    for j in range(fuel):
        budget = fuel // (j + 2)
        if budget == 0:
            break
        w = decode_word(j)
        result = e.run(interleave_words(w, w), budget)
        if any(s != 0 for s in result):
            out.append(w)
    return out


def surjection_from_prefixes(ws: Sequence[tuple],
                             space: Optional[SpaceDescriptor] = None):
    """Computable map i -> point realized by w_i 0^ω."""
    ws = [tuple(w) for w in ws]

    def s(i: int) -> Point:
        if i >= len(ws):
            raise IndexUnavailable(f"prefix {i} not yet emitted ({len(ws)} available)")
        return Point(space, Name.from_word(ws[i], tail=0))

    return s


@dataclass
class QuotientIso:
    """Isomorphism between X (with surjection s and discreteness d) and
    the quotient of N by n ≅ m iff s(n) = s(m)."""

    presentation: CeerPresentation
    s: Callable[[int], Point]
    d: DiscretenessWitness

    def phi(self, n: int) -> Point:
        return self.s(n)

    def phi_inv(self, x, fuel: int) -> int:
        xname = _as_name(x)
        obs: Dict[int, SierpObservation] = {}
        n = 0
        while n + 2 <= fuel:
            if n not in obs:
                obs[n] = self.d.check(_as_name(self.s(n)), xname)
            if obs[n].confirmed_at(fuel // (n + 2)):
                return n
            n += 1
        raise FuelExhausted(f"no s-preimage found within fuel {fuel}")


def iso_with_quotient(s: Callable[[int], Point], d: DiscretenessWitness) -> QuotientIso:
    """Build the induced ceer n ≅ m iff s(n) = s(m) (detected through the
    discreteness witness under the round-robin schedule) and the pair of
    maps realizing the isomorphism."""
    point_cache: Dict[int, Point] = {}

    def pt(n: int) -> Point:
        if n not in point_cache:
            point_cache[n] = s(n)
        return point_cache[n]

    obs_cache: Dict[int, SierpObservation] = {}

    def pair_fn(fuel: int) -> List[Tuple[int, int]]:
        out = []
        for k in range(fuel):
            budget = fuel // (k + 2)
            if budget == 0:
                break
            if k not in obs_cache:
                a, b = unpair(k)
                obs_cache[k] = d.check(_as_name(pt(a)), _as_name(pt(b)))
            if obs_cache[k].confirmed_at(budget):
                out.append(unpair(k))
        return out

    pres = CeerPresentation(pair_fn=pair_fn, label="induced-by-surjection")
    return QuotientIso(presentation=pres, s=pt, d=d)


def injection_when_decidable(s: Callable[[int], Point],
                             eq: Callable[[int, int], bool],
                             universe: int):
    """The decidable-equality case: S = {n | ∀i<n. s(i) ≠ s(n)}, the order
    map σ onto S, and ι sending (the index of) a point to its S-element.

    ``eq`` is a correct total decision table for s(i) = s(j) on the given
    universe.
    """
    members = [n for n in range(universe)
               if all(not eq(i, n) for i in range(n))]

    def sigma(k: int) -> int:
        if k >= len(members):
            raise NotInfinite(len(members))
        return members[k]

    def iota(n: int) -> int:
        for m in members:
            if m == n or eq(m, n):
                return m
        raise FuelExhausted(f"{n} matches no canonical element (incomplete table?)")

    return members, sigma, iota


# ---------------------------------------------------------------------------
# The quotient with no non-trivial decidable properties


_interp_cache: Dict[Tuple[int, int], object] = {}
_interp_running: Dict[Tuple[int, int], tuple] = {}
_prog_cache: Dict[int, ToyProgram] = {}


def _interp_cached(prog_index: int, input: int, fuel: int):
    """interpret(enumerate_program(prog_index), input, fuel) with halting
    results cached and in-progress runs resumed from a saved machine
    state; equivalent to a fresh run because the machine is deterministic.
    """
    key = (prog_index, input)
    hit = _interp_cache.get(key)
    if hit is not None:
        return hit if hit.steps <= fuel else None
    if prog_index not in _prog_cache:
        _prog_cache[prog_index] = enumerate_program(prog_index)
    prog = _prog_cache[prog_index]
    snapshot = _interp_running.get(key)
    if snapshot is None:
        steps, pc, regs = 0, 0, {0: input}
    else:
        steps, pc, regs = snapshot[0], snapshot[1], dict(snapshot[2])
        if steps >= fuel:
            return None
    instructions = prog.instructions
    n = len(instructions)
    from .kernel import DecJz, Goto, Halt as HaltIns, Inc

    while True:
        if pc >= n:
            res = Halted(regs.get(0, 0), steps)
            _interp_cache[key] = res
            return res
        if steps >= fuel:
            _interp_running[key] = (steps, pc, dict(regs))
            return None
        ins = instructions[pc]
        steps += 1
        kind = type(ins)
        if kind is HaltIns:
            res = Halted(regs.get(0, 0), steps)
            _interp_cache[key] = res
            return res
        if kind is Inc:
            regs[ins.reg] = regs.get(ins.reg, 0) + 1
            pc += 1
        elif kind is DecJz:
            v = regs.get(ins.reg, 0)
            if v == 0:
                pc = ins.target
            else:
                regs[ins.reg] = v - 1
                pc += 1
        else:
            pc = ins.target


def _example35_edge(n: int, budget: int) -> Optional[Tuple[int, int, int]]:
    """The out-edge of vertex n at the given budget, or None.

    Two-stage search: wait for program n to halt on input n with output
    a_n, then scan (candidate, steps) codes in increasing order for the
    first m ≠ n where the program halts with a different output.  The
    discovery order is fixed, so the chosen edge is stable under larger
    budgets.
    """
    own = _interp_cached(n, n, budget)
    if own is None:
        return None
    a_n = own.output
    for t in range(budget):
        mi, steps = unpair(t)
        m = mi if mi < n else mi + 1  # enumerate all m != n
        if steps == 0:
            continue
        r = _interp_cached(n, m, steps)
        if r is not None and r.output != a_n:
            return (n, m, t)
    return None


def example35_ceer() -> CeerPresentation:
    """Ceer generated by the out-degree-≤1 graph: vertex n points at the
    first found m ≠ n on which program n halts with a different output
    than on its own index."""

    def pair_fn(fuel: int) -> List[Tuple[int, int]]:
        out = []
        for n in range(fuel):
            budget = fuel // (n + 2)
            if budget == 0:
                break
            edge = _example35_edge(n, budget)
            if edge is not None:
                out.append((edge[0], edge[1]))
        return out

    return CeerPresentation(pair_fn=pair_fn, label="no-decidable-properties")


@dataclass
class NonTotal:
    input: int
    fuel: int


@dataclass
class Constant:
    value: int
    samples: List[Tuple[int, int]]


@dataclass
class NonExtensional:
    n: int
    m: int
    output_n: int
    output_m: int
    merge_step: int


@dataclass
class Inconclusive:
    reason: str


def check_no_decidable_property(pres: CeerPresentation, candidate: int,
                                fuel: int, sample_count: int = 20):
    """Certificate that the candidate program fails to compute a
    non-constant function on the quotient.

    Returns NonTotal, Constant, NonExtensional, or Inconclusive; each
    certificate replays through the interpreter and the closure engine.
    """
    samples = sorted(set(range(sample_count)) | {candidate})
    outputs = {}
    for i, x in enumerate(samples):
        budget = max(1, fuel // (i + 2))
        r = _interp_cached(candidate, x, budget)
        if r is None:
            return NonTotal(input=x, fuel=budget)
        outputs[x] = r.output
    # the construction's own edge for this vertex gives the extensionality failure
    for (a, b) in pres.generators_within(fuel):
        if a == candidate or b == candidate:
            ra = _interp_cached(candidate, a, fuel)
            rb = _interp_cached(candidate, b, fuel)
            if ra is not None and rb is not None and ra.output != rb.output:
                eq = ceer_equal(pres, a, b)
                if eq.confirmed_at(fuel):
                    return NonExtensional(n=a, m=b, output_n=ra.output,
                                          output_m=rb.output,
                                          merge_step=eq.observe(fuel).step)
    if len(set(outputs.values())) == 1:
        return Constant(value=next(iter(outputs.values())),
                        samples=sorted(outputs.items()))
    return Inconclusive(reason="non-constant on samples but no merged "
                               "witness pair found at this fuel")


@dataclass
class SeparatorNonTotal:
    input: int
    fuel: int


@dataclass
class SeparatorNonExtensional:
    n: int
    m: int
    output_n: int
    output_m: int


@dataclass
class SeparatesOnSamples:
    correct: bool
    table: List[Tuple[int, int, int]]  # (sample, class marker, separator output)


def inseparability_probe(pres: CeerPresentation, class_a: int, class_b: int,
                         separator: int, fuel: int, sample_bound: int = 40):
    """Probe a candidate separator of two ceer classes on sampled members.

    Verdicts carry replayable data; a SeparatesOnSamples verdict records
    whether the candidate actually maps class A to 0 and class B to 1.
    """
    state = saturate(pres, fuel)
    if state.same(class_a, class_b):
        raise ValueError("classes are merged at this fuel; nothing to separate")
    sample_pool = sorted(set(range(sample_bound)) | {class_a, class_b})
    members = [x for x in sample_pool
               if state.same(x, class_a) or state.same(x, class_b)]
    outputs = {}
    for i, x in enumerate(members):
        budget = max(1, fuel // (i + 2))
        r = _interp_cached(separator, x, budget)
        if r is None:
            return SeparatorNonTotal(input=x, fuel=budget)
        outputs[x] = r.output
    for x in members:
        for y in members:
            if x < y and state.same(x, y) and outputs[x] != outputs[y]:
                return SeparatorNonExtensional(n=x, m=y, output_n=outputs[x],
                                               output_m=outputs[y])
    table = []
    correct = True
    for x in members:
        marker = 0 if state.same(x, class_a) else 1
        table.append((x, marker, outputs[x]))
        if outputs[x] != marker:
            correct = False
    return SeparatesOnSamples(correct=correct, table=table)


# ---------------------------------------------------------------------------
# Ceer file format: header `ceer v1`, then `pairs` with `m n` lines or
# `prog` with a toy program whose outputs are pair codes.


def parse_ceer(text: str) -> CeerPresentation:
    lines = text.splitlines()
    if not lines or lines[0].strip() != "ceer v1":
        raise ValueError("expected header 'ceer v1'")
    body = [ln for ln in lines[1:]]
    mode = None
    idx = 0
    for idx, ln in enumerate(body):
        stripped = ln.split("#", 1)[0].strip()
        if stripped:
            mode = stripped
            break
    if mode == "pairs":
        pairs = []
        for ln in body[idx + 1:]:
            stripped = ln.split("#", 1)[0].strip()
            if not stripped:
                continue
            m, n = stripped.split()
            pairs.append((int(m), int(n)))
        return CeerPresentation(pairs=pairs)
    if mode == "prog":
        from .kernel import parse_program

        return CeerPresentation(program=parse_program("\n".join(body[idx + 1:])))
    raise ValueError(f"expected 'pairs' or 'prog' section, got {mode!r}")


def format_ceer(pres: CeerPresentation) -> str:
    if pres.pairs is not None:
        lines = ["ceer v1", "pairs"] + [f"{m} {n}" for m, n in pres.pairs]
        return "\n".join(lines) + "\n"
    if pres.program is not None:
        from .kernel import format_program

        return "ceer v1\nprog\n" + format_program(pres.program)
    raise ValueError("derived presentations have no file form")
