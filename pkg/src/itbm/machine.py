"""The ITBM core: programs, successor steps, and transfinite limit resolution.

A program is a numbered list of commands over finitely many registers
holding exact rationals.  An ``Assign`` replaces a register with the
value of a rational function of the registers; a ``Node`` jumps to one
of two lines depending on whether its function is positive.  Control at
line == program length means halt; the output is register 0.

Successor steps are evaluated directly.  Limit stages are resolved by
certification: when the recent history shows a repeating control path,
the loop body is composed symbolically into a register map.  If that map
is affine with an acyclic dependency structure, every register and every
branch test along the body has an exponential-polynomial closed form in
the iteration index, and the engine decides exactly whether the branch
signs stay put forever.  If they do, the run really does reach the limit
stage: the active line becomes the least line of the repeating body (the
inferior limit of the line sequence) and each register receives the
limit of its closed form; a register without a limit makes the whole
computation undefined.  Anything outside the certified class is reported
as unknown, never guessed.

Cycles among level-k limit snapshots are detected by the same machinery
and resolved at level k+1, with the branch-stability obligations of
inner limits carried outward symbolically.  For nesting, inner maps must
be componentwise affine with contracting (|a| < 1) or untouched
registers; this keeps every propagated condition a conjunction of affine
sign constraints.

Time is accounted exactly: +1 per successor step, and the least multiple
of w^k above the head stage for a level-k limit.  A run whose clock
reaches w^(node_count+1) is reported as certified non-halting, since a
program with n nodes halts before w^(n+1) or never.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .limits import ClosedForm, decide_for_all, solve_recurrence
from .numeric import DivisionByZero, format_rational
from .ordinal import ZERO, Ordinal, omega_pow, render, round_up_to_limit
from .rfn import Polynomial, RationalFn


@dataclass(frozen=True)
class Assign:
    target: int
    fn: RationalFn


@dataclass(frozen=True)
class Node:
    fn: RationalFn
    if_positive: int
    if_not: int


Command = Assign | Node


@dataclass(frozen=True)
class Program:
    commands: tuple[Command, ...] = ()

    def __post_init__(self) -> None:
        n = len(self.commands)
        for idx, cmd in enumerate(self.commands):
            if isinstance(cmd, Assign):
                if cmd.target < 0:
                    raise ValueError(f"line {idx}: negative register")
            else:
                for tgt in (cmd.if_positive, cmd.if_not):
                    if not 0 <= tgt <= n:
                        raise ValueError(f"line {idx}: jump target {tgt} out of range")

    def __len__(self) -> int:
        return len(self.commands)

    @property
    def node_count(self) -> int:
        return sum(1 for c in self.commands if isinstance(c, Node))

    @property
    def register_count(self) -> int:
        """One past the highest register index mentioned; at least 1."""
        top = 0
        for cmd in self.commands:
            if isinstance(cmd, Assign):
                top = max(top, cmd.target)
            vars_ = cmd.fn.variables()
            if vars_:
                top = max(top, max(vars_))
        return top + 1


@dataclass(frozen=True)
class Snapshot:
    time: Ordinal
    line: int
    registers: tuple[Fraction, ...]


@dataclass(frozen=True)
class Budget:
    max_successor_steps: int = 200_000
    max_limit_events: int = 1_000


@dataclass(frozen=True)
class Verdict:
    kind: str  # "halted" | "nonhalting" | "undefined" | "unknown"
    time: Ordinal
    output: Fraction | None = None
    reason: str | None = None

    @staticmethod
    def halted(output: Fraction, time: Ordinal) -> "Verdict":
        return Verdict("halted", time, output=output)

    @staticmethod
    def nonhalting(reason: str, time: Ordinal) -> "Verdict":
        return Verdict("nonhalting", time, reason=reason)

    @staticmethod
    def undefined(reason: str, time: Ordinal) -> "Verdict":
        return Verdict("undefined", time, reason=reason)

    @staticmethod
    def unknown(reason: str, time: Ordinal) -> "Verdict":
        return Verdict("unknown", time, reason=reason)

    @property
    def is_halted(self) -> bool:
        return self.kind == "halted"

    def to_json(self) -> dict:
        out = {"verdict": self.kind, "time": render(self.time)}
        if self.output is not None:
            out["output"] = format_rational(self.output)
        if self.reason is not None:
            out["reason"] = self.reason
        return out


@dataclass(frozen=True)
class TraceEvent:
    time: Ordinal
    line: int
    registers: tuple[Fraction, ...]
    event: str  # "step" | "limit" | "verdict"

    def to_json(self) -> dict:
        return {
            "t": render(self.time),
            "line": self.line,
            "regs": [format_rational(q) for q in self.registers],
            "event": self.event,
        }


@dataclass
class RunResult:
    verdict: Verdict
    trace: list[TraceEvent] | None = None


class NonHaltingError(Exception):
    """Raised by clock() when the run did not halt."""

    def __init__(self, verdict: Verdict) -> None:
        super().__init__(f"computation did not halt: {verdict.kind} ({verdict.reason})")
        self.verdict = verdict


# --------------------------------------------------------------------------
# successor semantics


def step(program: Program, snap: Snapshot) -> Snapshot:
    """One successor step.  Raises DivisionByZero on a zero denominator."""
    if snap.line >= len(program):
        raise ValueError("machine already halted")
    nxt, _ = _step_with_event(program, snap)
    return nxt


def _step_with_event(program: Program, snap: Snapshot):
    cmd = program.commands[snap.line]
    if isinstance(cmd, Assign):
        value = cmd.fn.evaluate(snap.registers)
        regs = list(snap.registers)
        regs[cmd.target] = value
        return (
            Snapshot(snap.time + 1, snap.line + 1, tuple(regs)),
            StepEvent(snap.line, None),
        )
    value = cmd.fn.evaluate(snap.registers)
    branch = value > 0
    target = cmd.if_positive if branch else cmd.if_not
    return Snapshot(snap.time + 1, target, snap.registers), StepEvent(snap.line, branch)


# --------------------------------------------------------------------------
# loop certification


@dataclass(frozen=True)
class StepEvent:
    line: int
    branch: bool | None


@dataclass(frozen=True)
class LimitEvent:
    level: int
    body: tuple
    liminf_line: int
    lines: frozenset[int]


class _Structural(Exception):
    """Certification failed for a structural reason (not a sign flip)."""


class _SignMismatch(Exception):
    """A propagated inner condition is a constant and false."""


def _weaken(rel: str) -> str:
    return {">0": ">=0", "<0": "<=0"}.get(rel, rel)


def _substitute_fn(fn: RationalFn, mapping: dict[int, Polynomial]):
    """fn composed with the symbolic state; denominator must stay constant."""
    den = fn.den.substitute(mapping)
    if not den.is_constant():
        raise _Structural("non-constant denominator along the loop body")
    d = den.constant_value()
    if d == 0:
        raise _Structural("denominator vanishes identically along the loop body")
    num = fn.num.substitute(mapping)
    return num, d


def _collect_lines(body) -> frozenset[int]:
    lines: set[int] = set()
    for ev in body:
        if isinstance(ev, StepEvent):
            lines.add(ev.line)
        else:
            lines |= ev.lines
    return frozenset(lines)


@dataclass
class _BodyAnalysis:
    """Head-independent part of certification, cached per body."""

    failure: str | None = None  # "structural" | "sign"
    detail: str = ""
    reg_map: tuple = ()
    obligations: tuple = ()  # (poly, rel, const, coeffs)
    identity: tuple = ()
    parts: tuple = ()  # affine (const, coeffs) per register, None where non-affine
    order: tuple = ()  # moving registers in dependency order


class _Composer:
    """Walks event paths symbolically; caches per-body results."""

    def __init__(self, program: Program) -> None:
        self.program = program
        self.rc = program.register_count
        self._body_cache: dict = {}
        self._limit_cache: dict = {}
        self._analysis_cache: dict = {}

    def compose(self, body):
        """(register map, obligations) over entry variables, cached by body."""
        if body in self._body_cache:
            return self._body_cache[body]
        sym = [Polynomial.var(i) for i in range(self.rc)]
        obligations: list[tuple[Polynomial, str]] = []
        for ev in body:
            if isinstance(ev, StepEvent):
                cmd = self.program.commands[ev.line]
                mapping = dict(enumerate(sym))
                num, den_c = _substitute_fn(cmd.fn, mapping)
                if isinstance(cmd, Assign):
                    sym[cmd.target] = num.scale(1 / den_c)
                else:
                    tst = num.scale(1 if den_c > 0 else -1)
                    rel = ">0" if ev.branch else "<=0"
                    if tst.is_constant():
                        if not _holds(tst.constant_value(), rel):
                            raise _SignMismatch("recorded branch contradicts the map")
                    else:
                        obligations.append((tst, rel))
            else:
                self._apply_limit(ev, sym, obligations)
        result = (tuple(sym), tuple(obligations))
        self._body_cache[body] = result
        return result

    def analyze(self, body) -> _BodyAnalysis:
        got = self._analysis_cache.get(body)
        if got is not None:
            return got
        ana = self._analyze(body)
        self._analysis_cache[body] = ana
        return ana

    def _analyze(self, body) -> _BodyAnalysis:
        try:
            reg_map, raw_obligations = self.compose(body)
        except _Structural as exc:
            return _BodyAnalysis(failure="structural", detail=str(exc))
        except _SignMismatch as exc:
            return _BodyAnalysis(failure="sign", detail=str(exc))
        identity = tuple(reg_map[i] == Polynomial.var(i) for i in range(self.rc))
        parts = []
        for i in range(self.rc):
            p = reg_map[i].affine_parts()
            if p is None and not identity[i]:
                return _BodyAnalysis(
                    failure="structural", detail=f"register {i} updates non-affinely"
                )
            parts.append(p)
        moving = [i for i in range(self.rc) if not identity[i]]
        pending = {
            i: {
                j
                for j, a in parts[i][1].items()
                if j != i and a != 0 and not identity[j]
            }
            for i in moving
        }
        order: list[int] = []
        ready = [i for i in moving if not pending[i]]
        placed = set(ready)
        while ready:
            i = ready.pop()
            order.append(i)
            for j in moving:
                if i in pending[j]:
                    pending[j].discard(i)
                    if not pending[j] and j not in placed:
                        placed.add(j)
                        ready.append(j)
        if len(order) != len(moving):
            return _BodyAnalysis(failure="structural", detail="cyclic register dependencies")
        obligations = []
        for e, rel in raw_obligations:
            aff = e.affine_parts()
            if aff is None:
                return _BodyAnalysis(failure="structural", detail="non-affine branch test")
            obligations.append((e, rel, aff[0], aff[1]))
        return _BodyAnalysis(
            reg_map=reg_map,
            obligations=tuple(obligations),
            identity=identity,
            parts=tuple(parts),
            order=tuple(order),
        )

    def _limit_template(self, ev: LimitEvent):
        """Classification of a nested limit, cached by its body."""
        if ev.body in self._limit_cache:
            return self._limit_cache[ev.body]
        inner_map, inner_obls = self.compose(ev.body)
        identity = [inner_map[i] == Polynomial.var(i) for i in range(self.rc)]
        alphas: dict[int, Fraction] = {}
        fixed_points: dict[int, Polynomial] = {}
        for i in range(self.rc):
            if identity[i]:
                continue
            parts = inner_map[i].affine_parts()
            if parts is None:
                raise _Structural("nested limit with a non-affine register map")
            const, coeffs = parts
            alpha = coeffs.get(i, Fraction(0))
            if abs(alpha) >= 1:
                raise _Structural("nested limit with a non-contracting register")
            drive = Polynomial.const(const)
            for j, a in coeffs.items():
                if j == i:
                    continue
                if not identity[j]:
                    raise _Structural("nested limit coupling two moving registers")
                drive = drive + Polynomial.var(j).scale(a)
            alphas[i] = alpha
            fixed_points[i] = drive.scale(1 / (1 - alpha))
        conditions = []
        for e, rel in inner_obls:
            conditions.extend(
                self._translate_inner(e, rel, identity, alphas, fixed_points)
            )
        template = (identity, fixed_points, tuple(conditions))
        self._limit_cache[ev.body] = template
        return template

    def _translate_inner(self, e, rel, identity, alphas, fixed_points):
        """Turn an inner branch condition into entry-state conditions.

        The inner test has closed form u + w*a^k along the nested run; the
        table below is exactly "same sign at k=0 (and k=1 for negative a)
        and a compatible sign in the limit", which is necessary and
        sufficient for a monotone (or split-monotone) geometric sequence.
        """
        parts = e.affine_parts()
        if parts is None:
            raise _Structural("nested limit with a non-affine branch test")
        const, coeffs = parts
        u = Polynomial.const(const)
        groups: dict[Fraction, Polynomial] = {}
        for i, a in coeffs.items():
            if identity[i]:
                u = u + Polynomial.var(i).scale(a)
            else:
                p_i = fixed_points[i]
                u = u + p_i.scale(a)
                w = (Polynomial.var(i) - p_i).scale(a)
                if not w.is_zero():
                    groups[alphas[i]] = groups.get(alphas[i], Polynomial()) + w
        groups = {g: w for g, w in groups.items() if not w.is_zero()}
        if rel == "==0":
            return [(u, "==0")] + [(w, "==0") for w in groups.values()]
        if not groups:
            return [(u, rel)]
        if len(groups) > 1:
            raise _Structural("nested branch test mixes convergence rates")
        alpha, w = next(iter(groups.items()))
        first = u + w
        if alpha > 0:
            return [(first, rel), (u, _weaken(rel))]
        if alpha == 0:
            return [(first, rel), (u, rel)]
        second = u + w.scale(alpha)
        return [(first, rel), (second, rel), (u, _weaken(rel))]

    def _apply_limit(self, ev: LimitEvent, sym, obligations) -> None:
        identity, fixed_points, conditions = self._limit_template(ev)
        mapping = dict(enumerate(sym))
        for poly, rel in conditions:
            cond = poly.substitute(mapping)
            if cond.is_constant():
                if not _holds(cond.constant_value(), rel):
                    raise _SignMismatch("nested limit condition fails")
            else:
                obligations.append((cond, rel))
        new_sym = list(sym)
        for i in range(self.rc):
            if not identity[i]:
                new_sym[i] = fixed_points[i].substitute(mapping)
        sym[:] = new_sym


def _holds(value: Fraction, rel: str) -> bool:
    return {
        ">0": value > 0,
        ">=0": value >= 0,
        "<=0": value <= 0,
        "<0": value < 0,
        "==0": value == 0,
    }[rel]


@dataclass
class _CertResult:
    status: str  # "certified" | "sign" | "structural" | "divergent"
    snapshot: Snapshot | None = None
    stationary: bool = False
    body: tuple = ()
    divergent_register: int | None = None
    time: Ordinal | None = None
    detail: str = ""


def _certify(composer: _Composer, body, head: Snapshot, level: int) -> _CertResult:
    """Try to prove the body repeats forever from the head state.

    On success the limit snapshot is exact: liminf line, closed-form
    register limits, and the rounded-up clock value.
    """
    rc = composer.rc
    ana = composer.analyze(body)
    if ana.failure is not None:
        return _CertResult(ana.failure, detail=ana.detail)
    reg_map = ana.reg_map

    states: list[tuple[Fraction, ...]] = [head.registers]

    def state(m: int) -> tuple[Fraction, ...]:
        while len(states) <= m:
            prev = states[-1]
            states.append(tuple(g.evaluate(prev) for g in reg_map))
        return states[m]

    # Cheap rejection: the first two iterates already violate most
    # transient candidates, long before closed forms are worth building.
    for m in (0, 1):
        regs = state(m)
        for e, rel, _, _ in ana.obligations:
            if not _holds(e.evaluate(regs), rel):
                return _CertResult("sign", detail="branch sign is not stable")

    forms: dict[int, ClosedForm] = {}
    for i in range(rc):
        if ana.identity[i]:
            forms[i] = ClosedForm.constant(head.registers[i])
    for i in ana.order:
        const, coeffs = ana.parts[i]
        alpha = coeffs.get(i, Fraction(0))
        forcing = ClosedForm.constant(const)
        for j, a in coeffs.items():
            if j != i:
                forcing = forcing.add(forms[j].scale(a))
        forms[i] = solve_recurrence(alpha, forcing, lambda m, i=i: state(m)[i])

    for e, rel, const, coeffs in ana.obligations:
        cf = ClosedForm.constant(const)
        for j, a in coeffs.items():
            cf = cf.add(forms[j].scale(a))
        verdict = decide_for_all(cf, rel, lambda m, e=e: e.evaluate(state(m)))
        if verdict is None:
            return _CertResult("structural", detail="branch sign analysis exhausted")
        if verdict is False:
            return _CertResult("sign", detail="branch sign is not stable")

    limit_time = round_up_to_limit(head.time, level)
    limits = []
    for i in range(rc):
        if not forms[i].converges():
            return _CertResult(
                "divergent", divergent_register=i, time=limit_time, body=body
            )
        limits.append(forms[i].limit())

    lines = _collect_lines(body)
    liminf = min(lines)
    snap = Snapshot(limit_time, liminf, tuple(limits))
    stationary = liminf == head.line and snap.registers == head.registers
    return _CertResult("certified", snapshot=snap, stationary=stationary, body=body)


# --------------------------------------------------------------------------
# public cycle API


@dataclass(frozen=True)
class LoopEvidence:
    head_line: int
    body: tuple
    register_map: dict[int, Polynomial]
    sign_pattern: tuple[bool, ...]


@dataclass(frozen=True)
class LimitOutcome:
    kind: str  # "limit" | "stationary" | "diverged" | "unresolved"
    snapshot: Snapshot | None = None
    register: int | None = None
    detail: str = ""


def detect_cycle(program: Program, snapshots) -> LoopEvidence | None:
    """Loop evidence from consecutive visits to one head line, or None.

    Re-simulates one traversal from each of the last two snapshots and
    requires the paths (lines and branch outcomes) to agree.
    """
    snapshots = list(snapshots)
    if not snapshots:
        return None
    head_line = snapshots[-1].line
    if any(s.line != head_line for s in snapshots):
        raise ValueError("snapshots must all sit at the loop-head line")
    paths = []
    for snap in snapshots[-2:]:
        path = _trace_to_head(program, snap, head_line)
        if path is None:
            return None
        paths.append(path)
    if len(paths) == 2 and paths[0] != paths[1]:
        return None
    body = paths[-1]
    composer = _Composer(program)
    try:
        reg_map, _ = composer.compose(body)
    except (_Structural, _SignMismatch):
        reg_map = tuple(Polynomial.var(i) for i in range(program.register_count))
    moved = {
        i: reg_map[i]
        for i in range(program.register_count)
        if reg_map[i] != Polynomial.var(i)
    }
    pattern = tuple(ev.branch for ev in body if ev.branch is not None)
    return LoopEvidence(head_line, body, moved, pattern)


def _trace_to_head(program: Program, snap: Snapshot, head_line: int, cap: int = 10_000):
    events = []
    cur = snap
    for _ in range(cap):
        if cur.line >= len(program):
            return None
        try:
            cur, ev = _step_with_event(program, cur)
        except DivisionByZero:
            return None
        events.append(ev)
        if cur.line == head_line:
            return tuple(events)
    return None


def resolve_limit(
    program: Program, evidence: LoopEvidence, head: Snapshot, level: int = 1
) -> LimitOutcome:
    """Resolve the limit of a certified cycle from the given head state."""
    res = _certify(_Composer(program), evidence.body, head, level)
    if res.status == "certified":
        if res.stationary:
            return LimitOutcome("stationary", snapshot=res.snapshot)
        return LimitOutcome("limit", snapshot=res.snapshot)
    if res.status == "divergent":
        return LimitOutcome("diverged", register=res.divergent_register, detail=res.detail)
    return LimitOutcome("unresolved", detail=res.detail)


# --------------------------------------------------------------------------
# the run engine


@dataclass
class _Levels:
    snaps: list = field(default_factory=list)
    arrivals: dict = field(default_factory=dict)
    buffers: dict = field(default_factory=lambda: {1: []})
    checkpoints: dict = field(default_factory=dict)


class _Engine:
    def __init__(self, program: Program, budget: Budget, trace) -> None:
        self.program = program
        self.budget = budget
        self.trace = trace
        self.composer = _Composer(program)
        self.bound = omega_pow(program.node_count + 1)
        self.steps = 0
        self.limit_events = 0
        self.struct_fails: dict = {}
        self.lv = _Levels()

    def _record(self, snap: Snapshot, kind: str) -> None:
        if self.trace is not None:
            self.trace.append(TraceEvent(snap.time, snap.line, snap.registers, kind))

    def run(self, snap: Snapshot) -> Verdict:
        self._reset_epoch(snap)
        current = snap
        while True:
            if current.line >= len(self.program):
                verdict = Verdict.halted(current.registers[0], current.time)
                self._record(current, "verdict")
                return verdict
            if self.steps >= self.budget.max_successor_steps:
                verdict = Verdict.unknown("step_budget", current.time)
                self._record(current, "verdict")
                return verdict
            try:
                nxt, event = _step_with_event(self.program, current)
            except DivisionByZero:
                verdict = Verdict.undefined("division_by_zero", current.time)
                self._record(current, "verdict")
                return verdict
            self.steps += 1
            for buf in self.lv.buffers.values():
                buf.append(event)
            self.lv.snaps.append(nxt)
            self.lv.arrivals.setdefault(nxt.line, []).append(len(self.lv.snaps) - 1)
            self._record(nxt, "step")
            current = nxt
            outcome = self._try_level_one(current)
            if isinstance(outcome, Verdict):
                self._record_final(outcome)
                return outcome
            if isinstance(outcome, Snapshot):
                current = outcome

    def _record_final(self, verdict: Verdict) -> None:
        if self.trace is not None and self.trace:
            last = self.trace[-1]
            self.trace.append(
                TraceEvent(verdict.time, last.line, last.registers, "verdict")
            )

    def _reset_epoch(self, snap: Snapshot) -> None:
        self.lv.snaps = [snap]
        self.lv.arrivals = {snap.line: [0]}
        self.lv.buffers[1] = []

    def _try_level_one(self, current: Snapshot):
        idxs = self.lv.arrivals.get(current.line, [])
        if len(idxs) < 2:
            return None
        n = len(idxs)
        if n > 8 and (n & (n - 1)) != 0:
            return None  # throttle repeated attempts on long finite loops
        events = self.lv.buffers[1]
        cur = idxs[-1]
        for back in range(1, n):
            prev = idxs[-1 - back]
            period = cur - prev
            body = tuple(events[prev:cur])
            if not body:
                continue
            # Only the minimum-line phase of a cycle needs certifying; the
            # rotated phases describe the same limit and would triple the
            # work for every traversal of a long finite loop.
            if current.line != min(ev.line for ev in body):
                continue
            # A candidate period must have been observed twice before it is
            # worth composing; symbolic composition is the expensive part
            # and a repeated path almost always certifies.
            if prev - period < 0 or tuple(events[prev - period : prev]) != body:
                continue
            res = _certify(self.composer, body, current, level=1)
            out = self._handle_cert(res, current, 1, body)
            if out is not None:
                return out
        return None

    def _handle_cert(self, res: _CertResult, head: Snapshot, level: int, body):
        if res.status == "sign":
            return None
        if res.status == "structural":
            key = (level, head.line, hash(body))
            self.struct_fails[key] = self.struct_fails.get(key, 0) + 1
            if self.struct_fails[key] >= 3:
                return Verdict.unknown("unresolvable_limit", head.time)
            return None
        return self._emit(res, head, level)

    def _emit(self, res: _CertResult, head: Snapshot, level: int):
        self.limit_events += 1
        if self.limit_events > self.budget.max_limit_events:
            return Verdict.unknown("step_budget", head.time)
        if res.status == "divergent":
            return Verdict.undefined("register_divergence", res.time)
        snap = res.snapshot
        if not snap.time < self.bound:
            return Verdict.nonhalting("bound_exceeded", snap.time)
        if res.stationary:
            return Verdict.nonhalting("stationary_cycle", snap.time)
        event = LimitEvent(level, res.body, snap.line, _collect_lines(res.body))
        self._record(snap, "limit")

        seg = tuple(self.lv.buffers.get(level, ())) + (event,)
        self.lv.checkpoints.setdefault(level, []).append((snap, seg))
        for k in list(self.lv.checkpoints):
            if k < level:
                del self.lv.checkpoints[k]
        self.lv.buffers.setdefault(level + 1, [])
        for k in list(self.lv.buffers):
            if k <= level:
                self.lv.buffers[k] = []
            else:
                self.lv.buffers[k].append(event)
        self._reset_epoch(snap)

        cascade = self._try_checkpoint_level(level + 1)
        if cascade is not None:
            return cascade
        return snap

    def _try_checkpoint_level(self, level: int):
        cps = self.lv.checkpoints.get(level - 1, [])
        if len(cps) < 2:
            return None
        cur_snap, _ = cps[-1]
        for back in range(1, min(8, len(cps) - 1) + 1):
            prev_snap, _ = cps[-1 - back]
            if prev_snap.line != cur_snap.line:
                continue
            if len(cps) < 2 * back:
                continue
            last = [seg for _, seg in cps[-back:]]
            before = [seg for _, seg in cps[-2 * back : -back]]
            if last != before:
                continue
            body: tuple = ()
            for _, seg in cps[-back:]:
                body = body + seg
            res = _certify(self.composer, body, cur_snap, level)
            out = self._handle_cert(res, cur_snap, level, body)
            if out is not None:
                return out
        return None


def run(
    program: Program,
    input_value=0,
    budget: Budget | None = None,
    record_trace: bool = False,
) -> RunResult:
    """Execute a program on one rational input.

    Register 0 starts at the input, all others at 0; the output is
    register 0 at the halting stage.
    """
    budget = budget or Budget()
    regs = [Fraction(0)] * program.register_count
    regs[0] = Fraction(input_value)
    snap = Snapshot(ZERO, 0, tuple(regs))
    trace: list[TraceEvent] | None = [] if record_trace else None
    engine = _Engine(program, budget, trace)
    verdict = engine.run(snap)
    return RunResult(verdict, trace)


def clock(program: Program, input_value=0, budget: Budget | None = None) -> Ordinal:
    """Exact halting time; raises NonHaltingError otherwise.

    Checks the node-count bound on the way out: a halting time is always
    below w^(node_count+1).
    """
    verdict = run(program, input_value, budget).verdict
    if not verdict.is_halted:
        raise NonHaltingError(verdict)
    if not verdict.time < omega_pow(program.node_count + 1):
        raise AssertionError("halting time at or above the node-count bound")
    return verdict.time
