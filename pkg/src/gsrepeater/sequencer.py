"""Gate-level schedules for the published graph-state generation flows.

Replays the four (protocol, scheme) generation recipes event by event on a
single emitter: plain emissions for bottom-level photons, entangling
emissions for interior nodes, spin-photon scattering for feedback returns,
and spin-ancilla gates plus re-encodings for the ancilla scheme.  Gates are
packed greedily earliest-first with no idle time, so a schedule's makespan
reproduces the closed-form generation time exactly; the schedule exists as
a structural consistency oracle for the timing and loss models, not as a
second rate path.

Feedback bookkeeping: every photon carries the number of loop transits it
is charged in the feedback line.  Bottom-level photons are emitted straight
into the channel (zero), photons scattered back once before their parent
detaches circulate once, doubly scattered photons circulate twice, and
photons parked across another level's construction are charged the
two-transit cap.  Degenerate single-child chains collapse the parking
window and replay as one transit; the loss model keeps its conservative
per-level charge there.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import prod

from gsrepeater.params import (
    DEFAULT_V_M_S,
    ConfigError,
    GateTimes,
    RgsGeometry,
    TreeGeometry,
)

GATE_KINDS = ("P", "E", "CZ_spin_ancilla", "CZ_spin_photon", "Hadamard", "Measure")

SPIN = "spin"
ANCILLA = "anc"


@dataclass(frozen=True)
class GateEvent:
    """One emitter operation: kind, start/duration (s), target id, level tag."""

    kind: str
    start: float
    duration: float
    target: str
    photon_level: str = ""


@dataclass(frozen=True)
class Schedule:
    """Immutable replay of one generation flow.

    ``emission_order`` lists photon ids in the order their emitting gate
    runs; ``feedback_passes`` maps each photon to its loop-transit charge
    (all zero for ancilla schedules); ``feedback_occupancy`` is the peak
    number of photons circulating simultaneously.
    """

    events: tuple[GateEvent, ...]
    makespan: float
    emission_order: tuple[str, ...]
    feedback_passes: dict[str, int] = field(default_factory=dict)
    feedback_occupancy: int = 0


class _Tape:
    """Append-only single-emitter timeline; gates abut with no idle."""

    def __init__(self, gates: GateTimes):
        self.gates = gates
        self.t = 0.0
        self.events: list[GateEvent] = []
        self.emission: list[str] = []
        self.parent: dict[str, str] = {}
        self.level: dict[str, str] = {}

    def gate(self, kind: str, duration: float, target: str, level: str = "") -> None:
        self.events.append(GateEvent(kind, self.t, duration, target, level))
        self.t += duration

    def emit(self, kind: str, duration: float, pid: str, level: str) -> None:
        self.gate(kind, duration, pid, level)
        self.emission.append(pid)
        self.level[pid] = level


def _tree_ids(b: tuple[int, ...]) -> dict[int, list[str]]:
    """Photon ids per level, globally indexed left to right."""
    ids: dict[int, list[str]] = {}
    count = 1
    for level, width in enumerate(b, start=1):
        count *= width
        ids[level] = [f"{level}.{k}" for k in range(1, count + 1)]
    return ids


def _build_tree_feedback(b: tuple[int, ...], tape: _Tape) -> None:
    """Whole-tree bottom-up flow: small trees, then each level, then root."""
    d = len(b)
    g = tape.gates
    ids = _tree_ids(b)
    # small trees: bottom-level emissions, then the level-(d-1) photon
    for k, pid in enumerate(ids[d - 1] if d > 1 else [], start=1):
        for j in range(1, b[d - 1] + 1):
            leaf = ids[d][(k - 1) * b[d - 1] + j - 1]
            tape.parent[leaf] = pid
            tape.emit("P", g.t_P, leaf, str(d))
        tape.emit("E", g.t_E, pid, str(d - 1))
    # interior levels: scatter the children back, then detach the node
    for level in range(d - 2, 0, -1):
        for k, pid in enumerate(ids[level], start=1):
            for j in range(1, b[level] + 1):
                child = ids[level + 1][(k - 1) * b[level] + j - 1]
                tape.parent[child] = pid
                tape.gate("CZ_spin_photon", g.t_CZ, child, str(level + 1))
            tape.emit("E", g.t_E, pid, str(level))
    for pid in ids[1]:
        tape.parent[pid] = SPIN
        tape.gate("CZ_spin_photon", g.t_CZ, pid, "1")


def _build_tree_ancilla(b: tuple[int, ...], tape: _Tape) -> None:
    """Per-branch bottom-up flow with ancilla re-encoding at every node."""
    d = len(b)
    g = tape.gates
    ids = _tree_ids(b)

    def build(level: int, k: int, parent: str) -> None:
        pid = ids[level][k - 1]
        tape.parent[pid] = parent
        if level == d:
            tape.emit("P", g.t_P, pid, str(level))
            return
        for j in range(1, b[level] + 1):
            build(level + 1, (k - 1) * b[level] + j, pid)
        tape.gate("CZ_spin_ancilla", g.t_CZ, ANCILLA)
        # top-level photons are stretched by beta for the late channel CZ
        duration = g.beta * g.t_E if level == 1 else g.t_E
        tape.emit("E", duration, pid, str(level))

    for k in range(1, b[0] + 1):
        build(1, k, SPIN)


def _rgs_core_ids(core: int, b: tuple[int, ...]) -> dict[int, list[str]]:
    ids: dict[int, list[str]] = {}
    count = 1
    for level, width in enumerate(b, start=1):
        count *= width
        ids[level] = [f"c{core}.{level}.{k}" for k in range(1, count + 1)]
    return ids


def _build_rgs_feedback(n_arms: int, b: tuple[int, ...], tape: _Tape) -> None:
    """All small trees first, per-core assembly, then the second scatters."""
    d = len(b)
    g = tape.gates
    cores = [_rgs_core_ids(core, b) for core in range(1, n_arms + 1)]
    for ids in cores:
        for k, pid in enumerate(ids[d - 1] if d > 1 else [], start=1):
            for j in range(1, b[d - 1] + 1):
                leaf = ids[d][(k - 1) * b[d - 1] + j - 1]
                tape.parent[leaf] = pid
                tape.emit("P", g.t_P, leaf, str(d))
            tape.emit("E", g.t_E, pid, str(d - 1))
    for core, ids in enumerate(cores, start=1):
        for level in range(d - 2, 0, -1):
            for k, pid in enumerate(ids[level], start=1):
                for j in range(1, b[level] + 1):
                    child = ids[level + 1][(k - 1) * b[level] + j - 1]
                    tape.parent[child] = pid
                    tape.gate("CZ_spin_photon", g.t_CZ, child, str(level + 1))
                tape.emit("E", g.t_E, pid, str(level))
        arm = f"c{core}.arm"
        for pid in ids[1]:
            tape.parent[pid] = arm
            tape.gate("CZ_spin_photon", g.t_CZ, pid, "1")
        # the arm inherits the level-1 bonds through a short emission
        tape.parent[arm] = SPIN
        tape.emit("E", g.t_E / g.beta, arm, "arm")
    for ids in cores:
        for pid in ids[1]:
            tape.gate("CZ_spin_photon", g.t_CZ, pid, "1")
    tape.gate("Measure", g.t_M, SPIN)


def _build_rgs_ancilla(n_arms: int, b: tuple[int, ...], tape: _Tape) -> None:
    """Per-core ancilla recipe ending with the arm emission; final measure."""
    d = len(b)
    g = tape.gates

    def build(ids: dict[int, list[str]], level: int, k: int, parent: str) -> None:
        pid = ids[level][k - 1]
        tape.parent[pid] = parent
        if level == d:
            tape.emit("P", g.t_P, pid, str(level))
            return
        for j in range(1, b[level] + 1):
            build(ids, level + 1, (k - 1) * b[level] + j, pid)
        tape.gate("CZ_spin_ancilla", g.t_CZ, ANCILLA)
        tape.emit("E", g.t_E, pid, str(level))

    for core in range(1, n_arms + 1):
        ids = _rgs_core_ids(core, b)
        arm = f"c{core}.arm"
        tape.gate("CZ_spin_ancilla", g.t_CZ, ANCILLA)
        tape.gate("Measure", g.t_M, ANCILLA)
        for k in range(1, b[0] + 1):
            build(ids, 1, k, arm)
        tape.parent[arm] = SPIN
        tape.emit("P", g.t_P, arm, "arm")
        tape.gate("CZ_spin_ancilla", g.t_CZ, ANCILLA)
        tape.gate("Measure", g.t_M, ANCILLA)
    tape.gate("Measure", g.t_M, SPIN)


def _assign_passes(tape: _Tape) -> dict[str, int]:
    """Loop-transit charge per photon, read off the replayed events.

    Unscattered photons never enter the line.  A single scatter before the
    parent's detaching emission is one return; a second scatter doubles it.
    Root-phase scatters park through any other level's scattering window
    and take the two-transit cap when one intervenes.
    """
    emitted: dict[str, GateEvent] = {}
    czs: dict[str, list[GateEvent]] = {}
    for ev in tape.events:
        if ev.kind in ("P", "E") and ev.target not in emitted:
            emitted[ev.target] = ev
        elif ev.kind == "CZ_spin_photon":
            czs.setdefault(ev.target, []).append(ev)
    passes: dict[str, int] = {}
    for pid, emit_ev in emitted.items():
        hits = czs.get(pid, [])
        if not hits:
            passes[pid] = 0
            continue
        if len(hits) >= 2:
            passes[pid] = 2
            continue
        cz = hits[0]
        parent = tape.parent.get(pid, SPIN)
        parent_emit = emitted.get(parent)
        if parent_emit is not None and parent_emit.start > cz.start:
            passes[pid] = 1
            continue
        born = emit_ev.start + emit_ev.duration
        parked = any(
            born < other.start < cz.start
            for target, evs in czs.items()
            if tape.level.get(target) != tape.level.get(pid)
            for other in evs
        )
        passes[pid] = 2 if parked else 1
    return passes


def _peak_occupancy(tape: _Tape, passes: dict[str, int]) -> int:
    """Peak simultaneous circulation: emission end to last scatter end."""
    edges: list[tuple[float, int]] = []
    emitted: dict[str, GateEvent] = {}
    last_cz: dict[str, GateEvent] = {}
    for ev in tape.events:
        if ev.kind in ("P", "E") and ev.target not in emitted:
            emitted[ev.target] = ev
        elif ev.kind == "CZ_spin_photon":
            last_cz[ev.target] = ev
    for pid, count in passes.items():
        if count == 0 or pid not in last_cz:
            continue
        enter = emitted[pid].start + emitted[pid].duration
        leave = last_cz[pid].start + last_cz[pid].duration
        edges.append((enter, 1))
        edges.append((leave, -1))
    peak = level = 0
    for _, step in sorted(edges):
        level += step
        peak = max(peak, level)
    return peak


def build_schedule(
    protocol: str,
    scheme: str,
    geometry: TreeGeometry | RgsGeometry,
    gates: GateTimes,
) -> Schedule:
    """Replay one generation flow and return the packed schedule."""
    if protocol == "tree":
        if not isinstance(geometry, TreeGeometry):
            raise ConfigError("geometry", "tree protocol requires a tree geometry")
        encoding = geometry
    elif protocol == "rgs":
        if not isinstance(geometry, RgsGeometry):
            raise ConfigError("geometry", "rgs protocol requires an rgs geometry")
        encoding = geometry.encoding
    else:
        raise ConfigError("protocol", "must be 'tree' or 'rgs'")
    if scheme not in ("ancilla", "feedback"):
        raise ConfigError("scheme", "must be 'ancilla' or 'feedback'")
    if encoding.depth < 2:
        raise ConfigError("branchings", "schedules need encoding depth >= 2")

    tape = _Tape(gates)
    if protocol == "tree":
        if scheme == "feedback":
            _build_tree_feedback(encoding.branchings, tape)
        else:
            _build_tree_ancilla(encoding.branchings, tape)
    else:
        n_arms = geometry.n_arms  # type: ignore[union-attr]
        if scheme == "feedback":
            _build_rgs_feedback(n_arms, encoding.branchings, tape)
        else:
            _build_rgs_ancilla(n_arms, encoding.branchings, tape)

    if scheme == "feedback":
        passes = _assign_passes(tape)
        occupancy = _peak_occupancy(tape, passes)
    else:
        passes = {pid: 0 for pid in tape.emission}
        occupancy = 0
    return Schedule(
        events=tuple(tape.events),
        makespan=tape.t,
        emission_order=tuple(tape.emission),
        feedback_passes=passes,
        feedback_occupancy=occupancy,
    )


def _exit_times(schedule: Schedule) -> dict[str, float]:
    """Channel handoff per photon: last scatter end, else emission end."""
    out: dict[str, float] = {}
    for ev in schedule.events:
        if ev.kind in ("P", "E") and ev.target not in out:
            out[ev.target] = ev.start + ev.duration
    for ev in schedule.events:
        if ev.kind == "CZ_spin_photon":
            out[ev.target] = ev.start + ev.duration
    return out


def _delay_groups(schedule: Schedule, protocol: str) -> list[tuple[str, list[str]]]:
    """(priority photon, members) per branch: level-1 roots or core arms."""
    groups: dict[str, list[str]] = {}
    heads: dict[str, str] = {}
    for pid in schedule.emission_order:
        if protocol == "tree":
            if pid.startswith("1."):
                heads[pid.split(".")[1]] = pid
        else:
            core = pid.split(".")[0]
            groups.setdefault(core, []).append(pid)
            if pid.endswith(".arm"):
                heads[core] = pid
    if protocol == "rgs":
        return [(heads[key], members) for key, members in groups.items()]
    # tree branches need the level-1 ancestor of every id
    widths: dict[int, int] = {}
    for pid in schedule.emission_order:
        level, k = (int(x) for x in pid.split("."))
        widths[level] = max(widths.get(level, 0), k)
    per_branch = {level: widths[level] // widths[1] for level in widths}
    for pid in schedule.emission_order:
        level, k = (int(x) for x in pid.split("."))
        branch = str((k - 1) // per_branch[level] + 1)
        groups.setdefault(branch, []).append(pid)
    return [(heads[key], members) for key, members in groups.items()]


def required_delay(schedule: Schedule, protocol: str) -> float:
    """Smallest uniform hold (s) putting each branch head first.

    Non-priority photons ride a fixed delay line; the branch head (a tree's
    level-1 photon, a repeater core's arm) bypasses it and must arrive no
    later than any photon of its own branch.
    """
    exits = _exit_times(schedule)
    delay = 0.0
    for head, members in _delay_groups(schedule, protocol):
        first = min(exits[pid] for pid in members)
        delay = max(delay, exits[head] - first)
    return delay


def feedback_audit(schedule: Schedule) -> tuple[int, float]:
    """(max transit count, implied line length in meters).

    The implied length is the longest per-transit circulation interval,
    emission start to scatter start, over all circulating photons,
    converted with the stock fiber velocity.
    """
    emitted: dict[str, GateEvent] = {}
    last_cz: dict[str, GateEvent] = {}
    for ev in schedule.events:
        if ev.kind in ("P", "E") and ev.target not in emitted:
            emitted[ev.target] = ev
        elif ev.kind == "CZ_spin_photon":
            last_cz[ev.target] = ev
    max_passes = max(schedule.feedback_passes.values(), default=0)
    longest = 0.0
    for pid, count in schedule.feedback_passes.items():
        if count == 0 or pid not in last_cz:
            continue
        interval = last_cz[pid].start - emitted[pid].start
        longest = max(longest, interval / count)
    return max_passes, longest * DEFAULT_V_M_S


def class_passes(schedule: Schedule) -> dict[str, int]:
    """Worst transit count per level tag ('1'..'d' and 'arm')."""
    levels: dict[str, str] = {}
    for ev in schedule.events:
        if ev.kind in ("P", "E") and ev.target not in levels:
            levels[ev.target] = ev.photon_level
    out: dict[str, int] = {}
    for pid, count in schedule.feedback_passes.items():
        tag = levels[pid]
        out[tag] = max(out.get(tag, 0), count)
    return out


def trace(schedule: Schedule) -> str:
    """Line-oriented export: kind, start, duration, target per event."""
    lines = [
        f"{ev.kind} {ev.start!r} {ev.duration!r} {ev.target}"
        for ev in schedule.events
    ]
    return "\n".join(lines) + "\n"
