"""Bounded-counter automaton over the instance variables plus one 'b' step.

States are pairs of a bit and an m-vector of residues; reading a variable
symbol adds its column, reading 'b' (once) subtracts the right-hand side.
A word that drives the residues back to zero with the bit set spells out a
solution in unary, so feasibility is plain state reachability.  The same
machine also prints as a linear-size guarded-command program (BP-v1) whose
target-location reachability gives the identical verdict.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

from ilpath import _kernels
from ilpath.instance import (
    RESERVED_SYMBOL,
    IlpError,
    IlpInstance,
    ParseError,
)
from ilpath.decomposition import REDUCE, ScheduleTrace

FEASIBLE = "feasible"
INFEASIBLE = "infeasible"  # within the residue bounds; see check_feasible
INCONCLUSIVE = "inconclusive"

REACHABLE = "reachable"
UNREACHABLE = "unreachable"

DEFAULT_MULTIPLIER = 2
DEFAULT_MAX_STATES = 5_000_000
DEFAULT_EXPORT_STATES = 10_000


class StateLimitExceeded(IlpError):
    """The explicit state budget ran out before the search finished."""


def residue_bounds(inst: IlpInstance, multiplier: int = DEFAULT_MULTIPLIER) -> tuple[int, ...]:
    """Per-constraint residue bound ``multiplier * (n+1) * max(max|a_j|, |b_j|)``.

    The ``n+1`` factor makes room for the right-hand-side column, so every
    solution keeps a bounded run at the default multiplier.  Residues are
    signed; the bound caps their absolute value.
    """
    if multiplier < 1:
        raise IlpError("multiplier must be at least 1")
    n = inst.num_vars
    return tuple(
        multiplier * (n + 1) * max(inst.max_abs_coeff(j), abs(inst.rhs[j - 1]))
        for j in range(1, inst.num_constraints + 1)
    )


@dataclass(frozen=True)
class CounterAutomaton:
    """The transition structure: columns, right-hand side and bounds."""

    inst: IlpInstance
    multiplier: int = DEFAULT_MULTIPLIER

    @cached_property
    def bounds(self) -> tuple[int, ...]:
        return residue_bounds(self.inst, self.multiplier)

    @cached_property
    def alphabet(self) -> tuple[str, ...]:
        return self.inst.var_names + (RESERVED_SYMBOL,)

    @property
    def initial(self) -> tuple[int, tuple[int, ...]]:
        return (0, (0,) * self.inst.num_constraints)

    def is_final(self, state) -> bool:
        used, r = state
        return used == 1 and not any(r)

    def step(self, state, symbol: str):
        """Successor of ``state`` under ``symbol``, or None when the move is
        disabled (residue bound exceeded, or a second 'b')."""
        used, r = state
        if symbol == RESERVED_SYMBOL:
            if used:
                return None
            delta = tuple(-b for b in self.inst.rhs)
            nxt_used = 1
        else:
            try:
                i = self.inst.var_names.index(symbol) + 1
            except ValueError:
                raise IlpError(f"unknown symbol {symbol!r}") from None
            delta = self.inst.column(i)
            nxt_used = used
        bounds = self.bounds
        nr = tuple(v + d for v, d in zip(r, delta))
        if any(abs(v) > bound for v, bound in zip(nr, bounds)):
            return None
        return (nxt_used, nr)

    def run(self, word: Iterable[str]):
        """Final state after reading ``word`` from the initial state, or
        None when some prefix dies."""
        state = self.initial
        for symbol in word:
            state = self.step(state, symbol)
            if state is None:
                return None
        return state

    def accepts(self, word: Iterable[str]) -> bool:
        state = self.run(word)
        return state is not None and self.is_final(state)


def step(inst: IlpInstance, state, symbol: str, multiplier: int = DEFAULT_MULTIPLIER):
    """One-off transition; see `CounterAutomaton.step`."""
    return CounterAutomaton(inst, multiplier).step(state, symbol)


@dataclass(frozen=True)
class FeasibilityResult:
    """Outcome of the reachability search.

    ``infeasible`` means no accepting state is reachable within the residue
    bounds; ``inconclusive`` means the state budget ran out first.  The
    witness, when present, is a shortest accepted word (ties broken by
    symbol order: variables in declaration order, then 'b').
    """

    status: str
    witness: tuple[str, ...] | None
    states_explored: int
    bounds: tuple[int, ...]
    multiplier: int

    def __bool__(self) -> bool:
        return self.status == FEASIBLE


def check_feasible(
    inst: IlpInstance,
    multiplier: int = DEFAULT_MULTIPLIER,
    max_states: int = DEFAULT_MAX_STATES,
) -> FeasibilityResult:
    """Decide feasibility by breadth-first reachability."""
    columns = [inst.column(i) for i in range(1, inst.num_vars + 1)]
    bounds = residue_bounds(inst, multiplier)
    status, path, states = _kernels.automaton_reach(
        columns, inst.rhs, bounds, max_states
    )
    if status == _kernels.REACHED:
        names = inst.var_names + (RESERVED_SYMBOL,)
        witness = tuple(names[sym] for sym in path)
        return FeasibilityResult(FEASIBLE, witness, states, bounds, multiplier)
    if status == _kernels.BUDGET:
        return FeasibilityResult(INCONCLUSIVE, None, states, bounds, multiplier)
    return FeasibilityResult(INFEASIBLE, None, states, bounds, multiplier)


def parikh(word: Sequence[str], var_names: Sequence[str]) -> tuple[int, ...]:
    """Occurrence counts of each variable symbol; 'b' is projected away."""
    counts = dict.fromkeys(var_names, 0)
    for symbol in word:
        if symbol == RESERVED_SYMBOL:
            continue
        if symbol not in counts:
            raise IlpError(f"unknown symbol {symbol!r}")
        counts[symbol] += 1
    return tuple(counts[name] for name in var_names)


def schedule_to_word(
    inst: IlpInstance, trace: ScheduleTrace, multiplier: int = DEFAULT_MULTIPLIER
) -> tuple[str, ...]:
    """Turn a counter schedule into an accepted word.

    The increment steps map, in order, to their variable symbols; the 'b'
    symbol is inserted at the earliest position at which every prefix stays
    within the residue bounds.  At the default multiplier the front always
    works, because schedule prefixes obey the same bound that sizes the
    automaton.
    """
    machine = CounterAutomaton(inst, multiplier)
    body = [
        inst.var_names[step - 1] for step in trace.steps if step != REDUCE
    ]
    for position in range(len(body) + 1):
        word = tuple(body[:position]) + (RESERVED_SYMBOL,) + tuple(body[position:])
        if machine.accepts(word):
            return word
    raise IlpError(
        "no placement of the 'b' symbol keeps the word within the residue "
        "bounds; the bound multiplier is too small for this solution"
    )


# --------------------------------------------------------------------------
# explicit state-graph export

@dataclass(frozen=True)
class AutomatonGraph:
    """Explicitly enumerated reachable states and labelled transitions."""

    states: tuple[tuple[int, tuple[int, ...]], ...]
    transitions: tuple[tuple[int, str, int], ...]
    initial: int
    finals: tuple[int, ...]


def export_automaton(
    inst: IlpInstance,
    multiplier: int = DEFAULT_MULTIPLIER,
    max_states: int = DEFAULT_EXPORT_STATES,
) -> AutomatonGraph:
    """Enumerate the reachable state graph, breadth first.

    The reachable space is exponential in general, hence the hard
    ``max_states`` gate; exceeding it raises `StateLimitExceeded`.
    """
    machine = CounterAutomaton(inst, multiplier)
    index = {machine.initial: 0}
    states = [machine.initial]
    transitions = []
    head = 0
    while head < len(states):
        state = states[head]
        for symbol in machine.alphabet:
            succ = machine.step(state, symbol)
            if succ is None:
                continue
            if succ not in index:
                if len(states) >= max_states:
                    raise StateLimitExceeded(
                        f"more than {max_states} reachable states"
                    )
                index[succ] = len(states)
                states.append(succ)
            transitions.append((head, symbol, index[succ]))
        head += 1
    finals = tuple(k for k, s in enumerate(states) if machine.is_final(s))
    return AutomatonGraph(tuple(states), tuple(transitions), 0, finals)


def _state_label(state) -> str:
    used, r = state
    return f"{used}|{','.join(str(v) for v in r)}"


def automaton_to_dot(ag: AutomatonGraph) -> str:
    lines = ["digraph ilp_automaton {", "  rankdir=LR;", "  __start [shape=point];"]
    final_set = set(ag.finals)
    for k, state in enumerate(ag.states):
        shape = "doublecircle" if k in final_set else "circle"
        lines.append(f'  q{k} [label="{_state_label(state)}", shape={shape}];')
    lines.append(f"  __start -> q{ag.initial};")
    for src, symbol, dst in ag.transitions:
        lines.append(f'  q{src} -> q{dst} [label="{symbol}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"


def automaton_to_text(ag: AutomatonGraph) -> str:
    """Adjacency listing: one state line per state, one line per transition."""
    final_set = set(ag.finals)
    lines = [f"states {len(ag.states)}"]
    for k, state in enumerate(ag.states):
        marks = []
        if k == ag.initial:
            marks.append("initial")
        if k in final_set:
            marks.append("final")
        suffix = (" " + " ".join(marks)) if marks else ""
        lines.append(f"q{k} {_state_label(state)}{suffix}")
    for src, symbol, dst in ag.transitions:
        lines.append(f"trans q{src} {symbol} q{dst}")
    return "\n".join(lines) + "\n"


# --------------------------------------------------------------------------
# BP-v1: a nondeterministic guarded-command rendering of the same machine
#
#     bp 1
#     var r1 in [-24, 24] init 0
#     bit B init 0
#     rule x1: true -> r1 += -2, r2 += 1
#     rule b: B == 0 -> r1 += -1, B := 1
#     target: B == 1 && r1 == 0 && r2 == 0
#
# Zero-coefficient updates are omitted (that keeps the text linear in the
# instance size); a rule with no updates at all is written `skip`.  An
# update that would leave a variable's range disables the rule.


def emit_boolean_program(inst: IlpInstance, multiplier: int = DEFAULT_MULTIPLIER) -> str:
    """Print the instance as a BP-v1 guarded-command program."""
    bounds = residue_bounds(inst, multiplier)
    lines = ["bp 1"]
    for j in range(1, inst.num_constraints + 1):
        lines.append(f"var r{j} in [-{bounds[j - 1]}, {bounds[j - 1]}] init 0")
    lines.append("bit B init 0")
    for i, name in enumerate(inst.var_names, start=1):
        updates = [
            f"r{j} += {inst.coeff(j, i)}"
            for j in range(1, inst.num_constraints + 1)
            if inst.coeff(j, i) != 0
        ]
        body = ", ".join(updates) if updates else "skip"
        lines.append(f"rule {name}: true -> {body}")
    b_updates = [
        f"r{j} += {-inst.rhs[j - 1]}"
        for j in range(1, inst.num_constraints + 1)
        if inst.rhs[j - 1] != 0
    ]
    b_updates.append("B := 1")
    lines.append(f"rule {RESERVED_SYMBOL}: B == 0 -> " + ", ".join(b_updates))
    target = " && ".join(
        ["B == 1"] + [f"r{j} == 0" for j in range(1, inst.num_constraints + 1)]
    )
    lines.append(f"target: {target}")
    return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class BoolVar:
    name: str
    lo: int
    hi: int
    init: int


@dataclass(frozen=True)
class BoolRule:
    name: str
    guard: tuple[tuple[str, int], ...]  # conjunction of equality tests
    updates: tuple[tuple[str, str, int], ...]  # (op, var, value), op in {+=, :=}


@dataclass(frozen=True)
class BooleanProgram:
    variables: tuple[BoolVar, ...]
    rules: tuple[BoolRule, ...]
    target: tuple[tuple[str, int], ...]


@dataclass(frozen=True)
class BpResult:
    status: str  # reachable / unreachable / inconclusive
    states_explored: int

    def __bool__(self) -> bool:
        return self.status == REACHABLE


_BP_VAR_RE = re.compile(r"var (\w+) in \[(-?\d+), (-?\d+)\] init (-?\d+)")
_BP_BIT_RE = re.compile(r"bit (\w+) init ([01])")
_BP_RULE_RE = re.compile(r"rule (\w+): (.+?) -> (.+)")
_BP_EQ_RE = re.compile(r"(\w+) == (-?\d+)")
_BP_ADD_RE = re.compile(r"(\w+) \+= (-?\d+)")
_BP_SET_RE = re.compile(r"(\w+) := (-?\d+)")


def parse_boolean_program(text: str) -> BooleanProgram:
    """Parse BP-v1 text; raises `ParseError` with the offending line."""
    lines = [
        (no, line.strip())
        for no, line in enumerate(text.splitlines(), start=1)
        if line.strip()
    ]
    if not lines or lines[0][1] != "bp 1":
        raise ParseError("expected header 'bp 1'", lines[0][0] if lines else 1)

    variables: list[BoolVar] = []
    rules: list[BoolRule] = []
    target: tuple[tuple[str, int], ...] | None = None
    names = set()

    def parse_guard(no, text_):
        if text_ == "true":
            return ()
        tests = []
        for part in text_.split("&&"):
            m = _BP_EQ_RE.fullmatch(part.strip())
            if not m:
                raise ParseError(f"bad guard clause {part.strip()!r}", no)
            if m.group(1) not in names:
                raise ParseError(f"guard tests unknown variable {m.group(1)!r}", no)
            tests.append((m.group(1), int(m.group(2))))
        return tuple(tests)

    for no, line in lines[1:]:
        if m := _BP_VAR_RE.fullmatch(line):
            name, lo, hi, init = m.group(1), int(m.group(2)), int(m.group(3)), int(m.group(4))
            if name in names:
                raise ParseError(f"duplicate variable {name!r}", no)
            if not lo <= init <= hi:
                raise ParseError(f"init value {init} outside [{lo}, {hi}]", no)
            names.add(name)
            variables.append(BoolVar(name, lo, hi, init))
        elif m := _BP_BIT_RE.fullmatch(line):
            name, init = m.group(1), int(m.group(2))
            if name in names:
                raise ParseError(f"duplicate variable {name!r}", no)
            names.add(name)
            variables.append(BoolVar(name, 0, 1, init))
        elif m := _BP_RULE_RE.fullmatch(line):
            guard = parse_guard(no, m.group(2).strip())
            updates = []
            body = m.group(3).strip()
            if body != "skip":
                for part in body.split(","):
                    part = part.strip()
                    if um := _BP_ADD_RE.fullmatch(part):
                        op = "+="
                    elif um := _BP_SET_RE.fullmatch(part):
                        op = ":="
                    else:
                        raise ParseError(f"bad update {part!r}", no)
                    if um.group(1) not in names:
                        raise ParseError(f"update on unknown variable {um.group(1)!r}", no)
                    updates.append((op, um.group(1), int(um.group(2))))
            rules.append(BoolRule(m.group(1), guard, tuple(updates)))
        elif line.startswith("target:"):
            if target is not None:
                raise ParseError("duplicate target line", no)
            target = parse_guard(no, line[len("target:"):].strip())
        else:
            raise ParseError(f"unrecognized line {line!r}", no)

    if not variables:
        raise ParseError("program declares no variables")
    if target is None:
        raise ParseError("program has no target line")
    return BooleanProgram(tuple(variables), tuple(rules), target)


def _as_counter_search(prog: BooleanProgram):
    """Recognize the counter shape emitted above and map it onto the fast
    reachability kernel: symmetric zero-initialized counters, one bit, one
    bit-guarded rule that sets the bit, and an all-zero target.  Returns
    (columns, bvec, bounds) or None when the program is more general."""
    bits = [v for v in prog.variables if (v.lo, v.hi) == (0, 1)]
    counters = [v for v in prog.variables if (v.lo, v.hi) != (0, 1)]
    if len(bits) != 1:
        return None
    bit = bits[0]
    if bit.init != 0:
        return None
    order = {v.name: k for k, v in enumerate(counters)}
    for v in counters:
        if v.init != 0 or v.lo != -v.hi:
            return None

    want_target = {(v.name, 0) for v in counters} | {(bit.name, 1)}
    if set(prog.target) != want_target or len(prog.target) != len(want_target):
        return None

    columns = []
    bvec = None
    for rule in prog.rules:
        deltas = [0] * len(counters)
        sets_bit = False
        for op, var, value in rule.updates:
            if op == "+=" and var in order:
                deltas[order[var]] += value
            elif op == ":=" and var == bit.name and value == 1:
                sets_bit = True
            else:
                return None
        if rule.guard == () and not sets_bit:
            columns.append(tuple(deltas))
        elif set(rule.guard) == {(bit.name, 0)} and sets_bit:
            if bvec is not None:
                return None
            bvec = tuple(-d for d in deltas)
        else:
            return None
    if bvec is None:
        return None
    return columns, bvec, tuple(v.hi for v in counters)


def interpret_boolean_program(
    text: str, max_states: int = DEFAULT_MAX_STATES
) -> BpResult:
    """Decide reachability of the target location of a BP-v1 program.

    Programs in the shape produced by `emit_boolean_program` run on the
    fast reachability kernel; anything else falls back to a generic
    breadth-first interpreter over the declared variable ranges.
    """
    prog = parse_boolean_program(text)

    recognized = _as_counter_search(prog)
    if recognized is not None:
        columns, bvec, bounds = recognized
        status, _path, states = _kernels.automaton_reach(
            columns, bvec, bounds, max_states
        )
        if status == _kernels.REACHED:
            return BpResult(REACHABLE, states)
        if status == _kernels.BUDGET:
            return BpResult(INCONCLUSIVE, states)
        return BpResult(UNREACHABLE, states)

    order = {v.name: k for k, v in enumerate(prog.variables)}
    los = [v.lo for v in prog.variables]
    his = [v.hi for v in prog.variables]
    initial = tuple(v.init for v in prog.variables)

    def holds(guard, state) -> bool:
        return all(state[order[name]] == value for name, value in guard)

    if holds(prog.target, initial):
        return BpResult(REACHABLE, 1)
    visited = {initial}
    frontier = [initial]
    while frontier:
        nxt_frontier = []
        for state in frontier:
            for rule in prog.rules:
                if not holds(rule.guard, state):
                    continue
                values = list(state)
                alive = True
                for op, var, value in rule.updates:
                    k = order[var]
                    values[k] = values[k] + value if op == "+=" else value
                    if not los[k] <= values[k] <= his[k]:
                        alive = False
                        break
                if not alive:
                    continue
                succ = tuple(values)
                if succ in visited:
                    continue
                visited.add(succ)
                if holds(prog.target, succ):
                    return BpResult(REACHABLE, len(visited))
                if len(visited) > max_states:
                    return BpResult(INCONCLUSIVE, len(visited))
                nxt_frontier.append(succ)
        frontier = nxt_frontier
    return BpResult(UNREACHABLE, len(visited))
