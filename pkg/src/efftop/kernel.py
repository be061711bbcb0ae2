"""Fuel-indexed partial computation.

Everything here is pure in (code, input, fuel).  A computation never
"runs forever": it is queried with an explicit step budget (fuel) and
either produces a stable answer or reports that it has not yet done so.
All observations are monotone in fuel, so answers never get retracted.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Iterable, Optional, Sequence, Union

Word = tuple  # finite word over the naturals


# ---------------------------------------------------------------------------
# Words and coding


def is_prefix(w: Word, v: Word) -> bool:
    return len(w) <= len(v) and tuple(v[: len(w)]) == tuple(w)


def pair(m: int, n: int) -> int:
    """Cantor pairing; a bijection NxN -> N."""
    return (m + n) * (m + n + 1) // 2 + n


def unpair(k: int) -> tuple:
    w = (math.isqrt(8 * k + 1) - 1) // 2
    n = k - w * (w + 1) // 2
    return (w - n, n)


def encode_word(w: Sequence) -> int:
    """Length-prefixed iterated pairing; encode_word(()) == 0."""
    w = tuple(w)
    if not w:
        return 0
    payload = w[-1]
    for s in reversed(w[:-1]):
        payload = pair(s, payload)
    return pair(len(w) - 1, payload) + 1


def decode_word(n: int) -> Word:
    """Total inverse of encode_word; surjective onto all finite words."""
    if n == 0:
        return ()
    length_minus_one, payload = unpair(n - 1)
    out = []
    for _ in range(length_minus_one):
        s, payload = unpair(payload)
        out.append(s)
    out.append(payload)
    return tuple(out)


def interleave_words(w: Sequence, u: Sequence) -> Word:
    """The longest product-name prefix determined by coordinate prefixes w, u.

    Position 2k holds w[k] and position 2k+1 holds u[k]; the result stops
    at the first coordinate that runs out.
    """
    out = []
    for a, b in zip(w, u):
        out.append(a)
        out.append(b)
    if len(w) > len(u):
        out.append(w[len(u)])
    return tuple(out)


# ---------------------------------------------------------------------------
# Names


class Name:
    """A total stream of naturals with step-indexed availability.

    ``producer(position, fuel)`` returns the value at ``position`` or None
    when the position is still pending at that fuel.  Valid names make
    every position available at some fuel, and a position never changes
    value once available.
    """

    __slots__ = ("_producer", "label")

    def __init__(self, producer: Callable[[int, int], Optional[int]], label=None):
        self._producer = producer
        self.label = label  # test-harness annotation, never read by realizers

    def at(self, position: int, fuel: int) -> Optional[int]:
        return self._producer(position, fuel)

    def prefix(self, fuel: int) -> Word:
        """Available prefix at the given fuel: at most ``fuel`` symbols,
        stopping at the first pending position."""
        out = []
        for k in range(fuel):
            v = self._producer(k, fuel)
            if v is None:
                break
            out.append(v)
        return tuple(out)

    @staticmethod
    def total(fn: Callable[[int], int], label=None) -> "Name":
        return Name(lambda k, fuel: fn(k), label=label)

    @staticmethod
    def constant(value: int, label=None) -> "Name":
        return Name(lambda k, fuel: value, label=label)

    @staticmethod
    def from_word(w: Sequence, tail: int = 0, label=None) -> "Name":
        w = tuple(w)
        return Name(lambda k, fuel: w[k] if k < len(w) else tail, label=label)

    @staticmethod
    def from_function_with_delay(fn: Callable[[int], int], delay: Callable[[int], int],
                                 label=None) -> "Name":
        """Position k becomes available once fuel reaches delay(k)."""
        return Name(lambda k, fuel: fn(k) if fuel >= delay(k) else None, label=label)


def interleave(p: Name, q: Name) -> Name:
    return Name(lambda k, fuel: p.at(k // 2, fuel) if k % 2 == 0 else q.at(k // 2, fuel))


def project(r: Name, side: str) -> Name:
    if side == "left":
        return Name(lambda k, fuel: r.at(2 * k, fuel))
    if side == "right":
        return Name(lambda k, fuel: r.at(2 * k + 1, fuel))
    raise ValueError(f"side must be 'left' or 'right', got {side!r}")


# ---------------------------------------------------------------------------
# Sierpinski observations


@dataclass(frozen=True)
class Confirmed:
    step: int


class _NotYet:
    def __repr__(self):
        return "NotYet"


NOT_YET = _NotYet()


class SierpObservation:
    """A monotone semidecision process.

    Backed by a predicate ``confirmed_at(fuel)`` that is monotone in fuel.
    ``observe`` reports the least confirming fuel (stable across queries).
    """

    __slots__ = ("_confirmed_at", "_cache", "_least")

    def __init__(self, confirmed_at: Callable[[int], bool]):
        self._confirmed_at = confirmed_at
        self._cache = {}
        self._least = None

    def confirmed_at(self, fuel: int) -> bool:
        if self._least is not None:
            return fuel >= self._least
        if fuel not in self._cache:
            self._cache[fuel] = bool(self._confirmed_at(fuel))
        return self._cache[fuel]

    def observe(self, fuel: int):
        if not self.confirmed_at(fuel):
            return NOT_YET
        if self._least is None:
            # binary search for the least confirming fuel; valid by monotonicity
            lo, hi = 0, fuel
            while lo < hi:
                mid = (lo + hi) // 2
                if self.confirmed_at(mid):
                    hi = mid
                else:
                    lo = mid + 1
            self._least = lo
        return Confirmed(self._least)

    @staticmethod
    def never() -> "SierpObservation":
        return SierpObservation(lambda fuel: False)

    @staticmethod
    def always() -> "SierpObservation":
        return SierpObservation(lambda fuel: True)

    @staticmethod
    def from_predicate(p: Callable[[int], bool]) -> "SierpObservation":
        return SierpObservation(p)


def dovetail(tasks, count: Optional[int] = None) -> SierpObservation:
    """Run countably many observations under a deterministic round-robin.

    At fuel f, task i has received floor(f / (i + 2)) fuel.  Confirms iff
    some task confirms under that schedule; the result is reproducible.

    ``tasks`` is either a sequence of SierpObservation or a function
    i -> SierpObservation; ``count`` caps the index range when given.
    """
    if callable(tasks):
        get = tasks
        limit = count
    else:
        seq = list(tasks)
        get = seq.__getitem__
        limit = len(seq) if count is None else min(count, len(seq))
    memo = {}

    def confirmed(fuel: int) -> bool:
        i = 0
        while i + 2 <= fuel and (limit is None or i < limit):
            if i not in memo:
                memo[i] = get(i)
            if memo[i].confirmed_at(fuel // (i + 2)):
                return True
            i += 1
        return False

    return SierpObservation(confirmed)


# ---------------------------------------------------------------------------
# Transducers


class Transducer:
    """A monotone, fuel-indexed map from finite words to finite words.

    Constructors in this package only build transducers that are monotone
    in the prefix order of the input and in fuel, and deterministic.
    """

    __slots__ = ("_run",)

    def __init__(self, run: Callable[[Word, int], Word]):
        self._run = run

    def run(self, word: Sequence, fuel: int) -> Word:
        return tuple(self._run(tuple(word), int(fuel)))


def semidecider(accept: Callable[[Word], bool]) -> Transducer:
    """Transducer emitting a single 1 once some prefix of the input is
    accepted.  Monotone regardless of the predicate supplied."""

    def run(word: Word, fuel: int) -> Word:
        w = word[:fuel]
        for j in range(len(w) + 1):
            if accept(w[:j]):
                return (1,)
        return ()

    return Transducer(run)


def monotone_semidecider(accept: Callable[[Word], bool]) -> Transducer:
    """Semidecider for predicates the caller guarantees to be monotone
    under prefix extension: only the longest available prefix is tested.

    Linear instead of quadratic in the prefix length; use ``semidecider``
    when monotonicity of the predicate is not established.
    """

    def run(word: Word, fuel: int) -> Word:
        return (1,) if accept(word[:fuel]) else ()

    return Transducer(run)


def fueled_semidecider(accept: Callable[[Word, int], bool]) -> Transducer:
    """Like ``semidecider`` but the predicate also sees the fuel.

    The caller must ensure ``accept`` is monotone in fuel; monotonicity in
    the input prefix is forced here.
    """

    def run(word: Word, fuel: int) -> Word:
        w = word[:fuel]
        for j in range(len(w) + 1):
            if accept(w[:j], fuel):
                return (1,)
        return ()

    return Transducer(run)


def semidecide(t: Transducer, name: Name) -> SierpObservation:
    """Observe a Sierpinski-valued transducer on a name: confirmed once the
    output word contains a nonzero symbol."""
    return SierpObservation(
        lambda fuel: any(s != 0 for s in t.run(name.prefix(fuel), fuel))
    )


def check_transducer_monotone(t: Transducer, words: Iterable[Word], fuels: Iterable[int]):
    """Return a list of monotonicity violations (empty when none).

    Checks prefix monotonicity across the given words at each fuel and
    fuel monotonicity for each word across the given fuels.
    """
    words = [tuple(w) for w in words]
    fuels = sorted(set(fuels))
    bad = []
    for w in words:
        for v in words:
            if is_prefix(w, v):
                for f in fuels:
                    for g in fuels:
                        if f <= g and not is_prefix(t.run(w, f), t.run(v, g)):
                            bad.append((w, f, v, g))
    return bad


# ---------------------------------------------------------------------------
# Toy machine: Minsky-style counter programs


class InvalidProgram(Exception):
    pass


@dataclass(frozen=True)
class Inc:
    reg: int


@dataclass(frozen=True)
class DecJz:
    reg: int
    target: int


@dataclass(frozen=True)
class Goto:
    target: int


@dataclass(frozen=True)
class Halt:
    pass


Instruction = Union[Inc, DecJz, Goto, Halt]


class ToyProgram:
    """Counter-machine program: INC r, DECJZ r l, GOTO l, HALT.

    Input arrives in r0, output is r0 at halt, one instruction is one
    fuel unit.  Jump targets must address instructions of the program.
    """

    __slots__ = ("instructions",)

    def __init__(self, instructions: Sequence[Instruction]):
        instructions = tuple(instructions)
        n = len(instructions)
        for idx, ins in enumerate(instructions):
            if isinstance(ins, Inc):
                if ins.reg < 0:
                    raise InvalidProgram(f"instruction {idx}: negative register")
            elif isinstance(ins, DecJz):
                if ins.reg < 0:
                    raise InvalidProgram(f"instruction {idx}: negative register")
                if not 0 <= ins.target < n:
                    raise InvalidProgram(f"instruction {idx}: jump target {ins.target} out of range")
            elif isinstance(ins, Goto):
                if not 0 <= ins.target < n:
                    raise InvalidProgram(f"instruction {idx}: jump target {ins.target} out of range")
            elif isinstance(ins, Halt):
                pass
            else:
                raise InvalidProgram(f"instruction {idx}: unknown instruction {ins!r}")
        self.instructions = instructions

    def __eq__(self, other):
        return isinstance(other, ToyProgram) and self.instructions == other.instructions

    def __hash__(self):
        return hash(self.instructions)

    def __repr__(self):
        return f"ToyProgram({self.instructions!r})"


@dataclass(frozen=True)
class Halted:
    output: int
    steps: int


class _Running:
    def __repr__(self):
        return "Running"


RUNNING = _Running()


def interpret(prog: ToyProgram, input: int, fuel: int):
    """Run ``prog`` on ``input`` for at most ``fuel`` steps.

    Deterministic and fuel-monotone: once Halted, larger fuels return the
    same answer.  Falling off the end of the program halts implicitly.
    """
    instructions = prog.instructions
    n = len(instructions)
    regs = {0: input}
    pc = 0
    steps = 0
    while True:
        if pc >= n:
            return Halted(regs.get(0, 0), steps)
        if steps >= fuel:
            return RUNNING
        ins = instructions[pc]
        steps += 1
        kind = type(ins)
        if kind is Halt:
            return Halted(regs.get(0, 0), steps)
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
        else:  # Goto
            pc = ins.target


# ---------------------------------------------------------------------------
# Goedel numbering of toy programs


@dataclass(frozen=True)
class GoedelIndex:
    index: int


def _instruction_code(ins: Instruction) -> int:
    if isinstance(ins, Halt):
        return 0
    if isinstance(ins, Inc):
        return 4 * ins.reg + 1
    if isinstance(ins, Goto):
        return 4 * ins.target + 2
    return 4 * pair(ins.reg, ins.target) + 3


def _instruction_from_code(code: int, length: int) -> Instruction:
    op = code % 4
    arg = code // 4
    if op == 0:
        return Halt()
    if op == 1:
        return Inc(arg)
    if op == 2:
        return Goto(arg % length)
    reg, target = unpair(arg)
    return DecJz(reg, target % length)


def enumerate_program(i) -> ToyProgram:
    """Total enumeration of syntactically valid programs.

    Index 0 is the canonical HALT program, and every valid program occurs
    (its instruction codes, word-encoded, are one of its indices).
    """
    if isinstance(i, GoedelIndex):
        i = i.index
    w = decode_word(i)
    if not w:
        return ToyProgram((Halt(),))
    n = len(w)
    return ToyProgram(tuple(_instruction_from_code(c, n) for c in w))


def program_index(prog: ToyProgram) -> int:
    """An index of ``prog`` under enumerate_program."""
    return encode_word(tuple(_instruction_code(ins) for ins in prog.instructions))


# ---------------------------------------------------------------------------
# Program text format
#
# One instruction per line: `INC r<k>`, `DECJZ r<k> <label>`, `GOTO <label>`,
# `HALT`.  Labels are zero-based instruction positions (comment and blank
# lines do not count).  Comments start with `#`.


def parse_program(text: str) -> ToyProgram:
    instructions = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        op = parts[0].upper()
        try:
            if op == "HALT" and len(parts) == 1:
                instructions.append(Halt())
            elif op == "INC" and len(parts) == 2:
                instructions.append(Inc(_parse_reg(parts[1])))
            elif op == "GOTO" and len(parts) == 2:
                instructions.append(Goto(int(parts[1])))
            elif op == "DECJZ" and len(parts) == 3:
                instructions.append(DecJz(_parse_reg(parts[1]), int(parts[2])))
            else:
                raise ValueError("bad instruction")
        except ValueError as exc:
            raise InvalidProgram(f"line {lineno}: {raw.strip()!r}: {exc}") from None
    return ToyProgram(instructions)


def _parse_reg(token: str) -> int:
    if not token.startswith("r"):
        raise ValueError(f"expected register like r0, got {token!r}")
    return int(token[1:])


def format_program(prog: ToyProgram) -> str:
    lines = []
    for ins in prog.instructions:
        if isinstance(ins, Halt):
            lines.append("HALT")
        elif isinstance(ins, Inc):
            lines.append(f"INC r{ins.reg}")
        elif isinstance(ins, Goto):
            lines.append(f"GOTO {ins.target}")
        else:
            lines.append(f"DECJZ r{ins.reg} {ins.target}")
    return "\n".join(lines) + "\n"
