"""Receiver-side model: block placement and a successive peeling decoder.

Peeling runs a fixpoint at single-bit granularity with two mechanisms:

* a receive level with exactly one unknown contributing pipe reveals that
  pipe's message bit (a bit revealed through one twin copy is thereby known
  in the other copy);
* a level whose unknowns reduce to exactly two bits pins down their XOR as a
  known aggregate; aggregates cancel at other levels where the same two bits
  reappear (twin copies land aligned at several levels), and an aggregate
  with one known endpoint reveals the other.

The second mechanism is required: several catalog rows place twin pairs so
that the pair is only ever observed through its sum, which is then removable
elsewhere.  Both mechanisms are value-independent, so the schedule is
deterministic and identical for every transmitted message; the whole decoder
remains a restricted linear solver (success still implies rank decodability).
Passes use snapshot semantics: a pass only consumes knowledge committed by
earlier passes.  Success means the receiver's own pair's message bits are all
known; interference is only ever decoded as a means of removal.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .channel import ChannelParams
from .gf2 import BitVec, DimensionMismatchError
from .scheme import AssignmentMatrix, TWIN_FIRST, TWIN_SECOND

DIRECT = "direct"
V_PATH = "v"
W_PATH = "w"

RULE_DIRECT = "direct-readout"
RULE_TWIN = "twin-peel"
RULE_MIXED = "mixed"


class InconsistentSignalError(ValueError):
    """Received word is not in the code's image."""


@dataclass(frozen=True)
class PlacedBlock:
    """A transmit segment as seen at a receiver (levels and pipes 1-based)."""

    sender: int
    path: str
    symbol_id: int
    level_top: int
    length: int
    pipe_lo: int
    orientation: str  # forward | reversed

    @property
    def level_bottom(self) -> int:
        return self.level_top + self.length - 1

    def to_json_dict(self) -> dict:
        return {
            "sender": self.sender,
            "path": self.path,
            "symbol": self.symbol_id,
            "levels": [self.level_top, self.level_bottom],
            "pipes": [self.pipe_lo, self.pipe_lo + self.length - 1],
            "orientation": self.orientation,
        }


@dataclass(frozen=True)
class ReceiverView:
    receiver: int
    params: ChannelParams
    assign: AssignmentMatrix
    blocks: tuple[PlacedBlock, ...]


@dataclass(frozen=True)
class PeelStep:
    pass_index: int
    rule: str
    sender: int
    symbol_id: int
    bits: tuple[int, ...]
    levels: tuple[int, ...]  # 1-based levels consumed for these bits

    def to_json_dict(self) -> dict:
        return {
            "pass": self.pass_index,
            "rule": self.rule,
            "sender": self.sender,
            "symbol": self.symbol_id,
            "bits": list(self.bits),
            "levels": [min(self.levels), max(self.levels)] if self.levels else [],
        }


@dataclass(frozen=True)
class DecodeTrace:
    steps: tuple[PeelStep, ...]

    @property
    def passes(self) -> int:
        return max((s.pass_index for s in self.steps), default=0)

    def rule_counts(self) -> dict[str, int]:
        out: dict[str, int] = {}
        for s in self.steps:
            out[s.rule] = out.get(s.rule, 0) + 1
        return out

    def to_json_dict(self) -> dict:
        return {"passes": self.passes, "steps": [s.to_json_dict() for s in self.steps]}


def _path_senders(ch: ChannelParams, receiver: int) -> dict[str, int]:
    if not 1 <= receiver <= ch.k:
        raise DimensionMismatchError(f"receiver {receiver} outside 1..{ch.k}")
    return {
        DIRECT: receiver,
        V_PATH: receiver % ch.k + 1,
        W_PATH: (receiver - 2) % ch.k + 1,
    }


def _path_base(ch: ChannelParams, path: str) -> int:
    """0-based receive level of pipe 0 on this path."""
    if path == DIRECT:
        return ch.n
    if path == V_PATH:
        return ch.n - ch.up_shift
    return ch.n + ch.down_shift


def receiver_view(assign: AssignmentMatrix, ch: ChannelParams, receiver: int) -> ReceiverView:
    """Place every data segment of the three contributing signals.

    Direct pipes land at levels N+p; the next pair's pipes are shifted up by
    (alpha-1)N; the previous pair's pipes are shifted down by (1-beta)N and
    only its top beta*N pipes stay inside the 2N window (segments straddling
    that boundary are clipped).  Zero segments are omitted.
    """
    if assign.n != ch.n:
        raise DimensionMismatchError(f"assignment N = {assign.n} != channel N = {ch.n}")
    senders = _path_senders(ch, receiver)
    blocks: list[PlacedBlock] = []
    for path in (DIRECT, V_PATH, W_PATH):
        base = _path_base(ch, path)
        limit = ch.surviving_pipes if path == W_PATH else ch.n
        for seg in assign.segments:
            if not seg.role.is_data or seg.count == 0:
                continue
            count = min(seg.count, limit - seg.pipe_lo)
            if count <= 0:
                continue
            blocks.append(
                PlacedBlock(
                    sender=senders[path],
                    path=path,
                    symbol_id=seg.role.symbol_id,
                    level_top=base + seg.pipe_lo + 1,
                    length=count,
                    pipe_lo=seg.pipe_lo + 1,
                    orientation="reversed" if seg.role.kind == TWIN_SECOND else "forward",
                )
            )
    return ReceiverView(receiver, ch, assign, tuple(blocks))


def reconstruct_output(view: ReceiverView, messages: list[np.ndarray]) -> BitVec:
    """XOR of all placed contributions given concrete message bits.

    Must reproduce the channel output exactly; used as a placement oracle.
    """
    ch = view.params
    y = np.zeros(2 * ch.n, dtype=np.uint8)
    for b in view.blocks:
        msg = messages[b.sender - 1]
        for i in range(b.length):
            bit = view.assign.pipe_to_bit[b.pipe_lo - 1 + i]
            y[b.level_top - 1 + i] ^= msg[bit]
    return y


def _level_contributors(view: ReceiverView) -> dict[int, list[tuple[int, int]]]:
    """0-based level -> [(sender, pipe0)] over data pipes of all three paths."""
    ch = view.params
    assign = view.assign
    senders = _path_senders(ch, view.receiver)
    levels: dict[int, list[tuple[int, int]]] = {}
    for path in (DIRECT, V_PATH, W_PATH):
        base = _path_base(ch, path)
        limit = ch.surviving_pipes if path == W_PATH else ch.n
        for p in range(limit):
            if assign.pipe_to_bit[p] is None:
                continue
            levels.setdefault(base + p, []).append((senders[path], p))
    return levels


def _symbol_of_pipe(assign: AssignmentMatrix, pipe: int) -> int:
    for seg in assign.segments:
        if seg.pipe_lo <= pipe < seg.pipe_hi:
            return seg.role.symbol_id
    # No segment metadata (e.g. search witnesses): one symbol per bit.
    bit = assign.pipe_to_bit[pipe]
    return bit + 1 if bit is not None else 0


def _twin_symbols(assign: AssignmentMatrix) -> set[int]:
    if assign.segments:
        return {
            seg.role.symbol_id
            for seg in assign.segments
            if seg.role.kind in (TWIN_FIRST, TWIN_SECOND)
        }
    return {
        bit + 1 for bit, pipes in enumerate(assign.bit_pipes()) if len(pipes) == 2
    }


def _symbol_bits(assign: AssignmentMatrix) -> dict[int, set[int]]:
    out: dict[int, set[int]] = {}
    if assign.segments:
        for seg in assign.segments:
            if seg.role.is_data and seg.count:
                out.setdefault(seg.role.symbol_id, set()).update(
                    range(seg.bit_lo, seg.bit_lo + seg.count)
                )
    else:
        for bit in range(assign.m):
            out[bit + 1] = {bit}
    return out


Bit = tuple[int, int]  # (sender, bit index)


@dataclass
class _PeelState:
    known: dict[int, np.ndarray]
    values: dict[int, np.ndarray] | None
    pairs: dict[frozenset, int] = field(default_factory=dict)  # {bit, bit} -> XOR value
    steps: list[PeelStep] = field(default_factory=list)


def _reduce_level(
    unknowns: list[Bit], acc: int, pairs: dict[frozenset, int]
) -> tuple[list[Bit], int]:
    """Cancel known pair-aggregates out of a level's unknown set, canonically."""
    live = set(unknowns)
    changed = True
    while changed:
        changed = False
        for pair in sorted(pairs, key=sorted):
            if pair <= live:
                live -= pair
                acc ^= pairs[pair]
                changed = True
    return sorted(live), acc


def _run_peel(view: ReceiverView, y: BitVec | None) -> tuple[bool, DecodeTrace, _PeelState]:
    ch = view.params
    assign = view.assign
    bits_mode = y is not None
    if bits_mode and y.shape[0] != 2 * ch.n:
        raise DimensionMismatchError(f"received word length {y.shape[0]} != 2N = {2 * ch.n}")
    levels = _level_contributors(view)
    pipe_bit = assign.pipe_to_bit
    y_list = [int(v) for v in y] if bits_mode else None
    level_items = [
        (level0, [(s, p, pipe_bit[p]) for s, p in levels[level0]])
        for level0 in sorted(levels)
    ]
    state = _PeelState(
        known={s: np.zeros(assign.m, dtype=bool) for s in range(1, ch.k + 1)},
        values={s: np.zeros(assign.m, dtype=np.uint8) for s in range(1, ch.k + 1)}
        if bits_mode
        else None,
    )
    known = {s: [False] * assign.m for s in range(1, ch.k + 1)}
    values = {s: [0] * assign.m for s in range(1, ch.k + 1)} if bits_mode else None
    twin_syms = _twin_symbols(assign)
    sym_bits = _symbol_bits(assign)

    pass_index = 0
    while True:
        pass_index += 1
        resolved: dict[Bit, tuple[int, int, int]] = {}  # bit -> (level0, pipe, value)
        new_pairs: dict[frozenset, int] = {}
        for level0, contribs in level_items:
            acc = y_list[level0] if bits_mode else 0
            unknowns: list[Bit] = []
            pipe_of: dict[Bit, int] = {}
            for s, p, bit in contribs:
                if known[s][bit]:
                    if bits_mode:
                        acc ^= values[s][bit]
                else:
                    # One path per sender per receiver, so a (sender, bit)
                    # appears at most once per level.
                    unknowns.append((s, bit))
                    pipe_of[(s, bit)] = p
            if state.pairs and len(unknowns) > 1:
                unknowns, acc = _reduce_level(unknowns, acc, state.pairs)
            if len(unknowns) == 0:
                if bits_mode and acc != 0:
                    raise InconsistentSignalError(
                        f"level {level0 + 1}: received word disagrees with decoded bits"
                    )
            elif len(unknowns) == 1:
                b = unknowns[0]
                prior = resolved.get(b)
                if prior is not None:
                    if bits_mode and prior[2] != acc:
                        raise InconsistentSignalError(
                            f"bit {b[1]} of sender {b[0]} resolves to conflicting values"
                        )
                    continue
                resolved[b] = (level0, pipe_of.get(b, _any_pipe(assign, b[1])), acc)
            elif len(unknowns) == 2:
                key = frozenset(unknowns)
                if key not in state.pairs and key not in new_pairs:
                    new_pairs[key] = acc
                elif bits_mode and key in new_pairs and new_pairs[key] != acc:
                    raise InconsistentSignalError(
                        f"level {level0 + 1}: aggregate resolves to conflicting values"
                    )
        # A known aggregate with one known endpoint reveals the other.
        for pair in sorted(state.pairs, key=sorted):
            (s1, b1), (s2, b2) = sorted(pair)
            k1, k2 = known[s1][b1], known[s2][b2]
            if k1 == k2:
                continue
            target = (s2, b2) if k1 else (s1, b1)
            source = (s1, b1) if k1 else (s2, b2)
            if target in resolved:
                continue
            value = 0
            if bits_mode:
                value = state.pairs[pair] ^ values[source[0]][source[1]]
            resolved[target] = (-1, _any_pipe(assign, target[1]), value)
        if not resolved and not new_pairs:
            break
        if resolved:
            _record_steps(state, view, resolved, pass_index, twin_syms, sym_bits, known)
        for (s, bit), (_, _, value) in resolved.items():
            known[s][bit] = True
            if bits_mode:
                values[s][bit] = value
        state.pairs.update(new_pairs)

    for s in range(1, ch.k + 1):
        state.known[s][:] = known[s]
        if bits_mode:
            state.values[s][:] = values[s]
    success = bool(state.known[view.receiver].all())
    return success, DecodeTrace(tuple(state.steps)), state


def _any_pipe(assign: AssignmentMatrix, bit: int) -> int:
    for p, b in enumerate(assign.pipe_to_bit):
        if b == bit:
            return p
    raise ValueError(f"bit {bit} carried by no pipe")


def _record_steps(
    state: _PeelState,
    view: ReceiverView,
    resolved: dict[Bit, tuple[int, int, int]],
    pass_index: int,
    twin_syms: set[int],
    sym_bits: dict[int, set[int]],
    known: dict[int, list[bool]],
) -> None:
    assign = view.assign
    groups: dict[tuple[int, int], list[tuple[int, int]]] = {}  # (sender, symbol) -> [(bit, level0)]
    via_pair: set[tuple[int, int]] = set()
    for (s, bit), (level0, pipe, _) in resolved.items():
        sym = _symbol_of_pipe(assign, pipe)
        groups.setdefault((s, sym), []).append((bit, level0))
        if level0 < 0:
            via_pair.add((s, sym))
    pass_steps = []
    for (s, sym), items in sorted(groups.items()):
        bits = tuple(sorted(b for b, _ in items))
        lvls = tuple(sorted(l + 1 for _, l in items if l >= 0))
        full = not any(known[s][b] for b in sym_bits[sym]) and set(bits) == sym_bits[sym]
        if (s, sym) in via_pair:
            rule = RULE_MIXED
        elif full and sym not in twin_syms:
            rule = RULE_DIRECT
        elif sym in twin_syms:
            rule = RULE_DIRECT if full else RULE_TWIN
        else:
            rule = RULE_MIXED
        pass_steps.append(PeelStep(pass_index, rule, s, sym, bits, lvls))
    # Whole-block readouts first, then twin progress, then aggregate work.
    order = {RULE_DIRECT: 0, RULE_TWIN: 1, RULE_MIXED: 2}
    pass_steps.sort(key=lambda st: (order[st.rule], st.sender, st.symbol_id))
    state.steps.extend(pass_steps)


def peel_structure(view: ReceiverView) -> tuple[bool, DecodeTrace]:
    """Value-free peeling: does the schedule recover the receiver's own bits?"""
    success, trace, _ = _run_peel(view, None)
    return success, trace


def peel_bits(view: ReceiverView, y: BitVec) -> tuple[np.ndarray | None, DecodeTrace]:
    """Run the peeling schedule on an actual received word.

    Returns the receiver's own m message bits (None on failure) and the
    trace; the schedule never depends on the bit values.  Raises
    InconsistentSignalError when y is not a codeword image.
    """
    success, trace, state = _run_peel(view, y)
    _check_residual(view, state, y)
    if not success:
        return None, trace
    return np.array(state.values[view.receiver], copy=True), trace


def _check_residual(view: ReceiverView, state: _PeelState, y: BitVec) -> None:
    """Fully-known levels must reproduce y; data-free levels must be zero."""
    levels = _level_contributors(view)
    for level0 in range(2 * view.params.n):
        contribs = levels.get(level0)
        if contribs is None:
            if int(y[level0]) != 0:
                raise InconsistentSignalError(f"level {level0 + 1}: nonzero outside all blocks")
            continue
        acc = int(y[level0])
        complete = True
        for s, p in contribs:
            bit = view.assign.pipe_to_bit[p]
            if state.known[s][bit]:
                acc ^= int(state.values[s][bit])
            else:
                complete = False
        if complete and acc != 0:
            raise InconsistentSignalError(
                f"level {level0 + 1}: received word disagrees with decoded bits"
            )
