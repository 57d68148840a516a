"""The (N, alpha, beta) cyclically symmetric binary deterministic channel.

Each of K >= 3 sender/receiver pairs feeds N bit pipes; receivers observe 2N
levels (level 1 is the top).  A receiver hears its own sender's zero-padded
input in the bottom half, the next pair's input shifted up by (alpha-1)N, and
the previous pair's input shifted down by (1-beta)N, XORed together.
Cross-link strengths alpha in [1,2] and beta in [0,1] must give integral
shifts at the chosen N.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .exactmath import Rat, format_rat
from .gf2 import BitVec, DimensionMismatchError, shift_down, shift_up, zero_pad


class BadShapeError(ValueError):
    """Channel parameters violate a validity constraint."""


class UndefinedTopPartError(ValueError):
    """Top overlap part only exists when alpha - beta < 1."""


@dataclass(frozen=True)
class ChannelParams:
    k: int
    n: int
    alpha: Rat
    beta: Rat

    @property
    def up_shift(self) -> int:
        """Integral upshift (alpha-1)N applied to the next pair's signal."""
        return int((self.alpha - 1) * self.n)

    @property
    def down_shift(self) -> int:
        """Integral downshift (1-beta)N applied to the previous pair's signal."""
        return int((1 - self.beta) * self.n)

    @property
    def surviving_pipes(self) -> int:
        """Number of top pipes that survive the downshift, beta*N."""
        return int(self.beta * self.n)

    def to_json_dict(self) -> dict:
        return {
            "K": self.k,
            "N": self.n,
            "alpha": format_rat(self.alpha),
            "beta": format_rat(self.beta),
        }


def make_channel(k: int, n: int, alpha, beta) -> ChannelParams:
    """Validate and build channel parameters; raises BadShapeError with the violated clause."""
    alpha = Fraction(alpha)
    beta = Fraction(beta)
    if k < 3:
        raise BadShapeError(f"K >= 3 required, got K = {k}")
    if n < 1:
        raise BadShapeError(f"N >= 1 required, got N = {n}")
    if not 1 <= alpha <= 2:
        raise BadShapeError(f"alpha in [1, 2] required, got {format_rat(alpha)}")
    if not 0 <= beta <= 1:
        raise BadShapeError(f"beta in [0, 1] required, got {format_rat(beta)}")
    if (alpha * n).denominator != 1:
        raise BadShapeError(f"alpha*N must be an integer, got {format_rat(alpha * n)}")
    if (beta * n).denominator != 1:
        raise BadShapeError(f"beta*N must be an integer, got {format_rat(beta * n)}")
    return ChannelParams(k, n, alpha, beta)


def _check_input(ch: ChannelParams, x: BitVec) -> None:
    if x.shape[0] != ch.n:
        raise DimensionMismatchError(f"input length {x.shape[0]} != N = {ch.n}")


def signal_v(ch: ChannelParams, x: BitVec) -> BitVec:
    """Up-shifted interference image: zero-pad, then shift up by (alpha-1)N."""
    _check_input(ch, x)
    return shift_up(zero_pad(x), ch.up_shift)


def signal_w(ch: ChannelParams, x: BitVec) -> BitVec:
    """Down-shifted interference image: zero-pad, then shift down by (1-beta)N.

    Only the top beta*N pipes of x stay above the bottom of the 2N window.
    """
    _check_input(ch, x)
    return shift_down(zero_pad(x), ch.down_shift)


def extract_top(ch: ChannelParams, x: BitVec) -> BitVec:
    """Top (1-(alpha-beta))N pipes of an input.

    This is the segment that resolves the overlap between the two interference
    images; it is only defined when they overlap, i.e. alpha - beta < 1.
    """
    if ch.alpha - ch.beta >= 1:
        raise UndefinedTopPartError(
            f"top part undefined: alpha - beta = {format_rat(ch.alpha - ch.beta)} >= 1"
        )
    _check_input(ch, x)
    size = int((1 - (ch.alpha - ch.beta)) * ch.n)
    return np.array(x[:size], copy=True)


def transmit(ch: ChannelParams, inputs: list[BitVec]) -> list[BitVec]:
    """All K received signals; receiver i hears senders i (direct), i+1 (up), i-1 (down)."""
    if len(inputs) != ch.k:
        raise DimensionMismatchError(f"need {ch.k} inputs, got {len(inputs)}")
    for x in inputs:
        _check_input(ch, x)
    outputs = []
    for i in range(ch.k):
        direct = zero_pad(inputs[i])
        up = signal_v(ch, inputs[(i + 1) % ch.k])
        down = signal_w(ch, inputs[(i - 1) % ch.k])
        outputs.append(direct ^ up ^ down)
    return outputs


def interleave_expand(ch: ChannelParams, l_uses: int) -> ChannelParams:
    """Parameters of the channel seen by stride-interleaved supersymbols over L uses."""
    if l_uses < 1:
        raise BadShapeError(f"L >= 1 required, got {l_uses}")
    return ChannelParams(ch.k, ch.n * l_uses, ch.alpha, ch.beta)


def interleave(vectors: list[BitVec]) -> BitVec:
    """Stride-interleave L equal-length vectors: pipe p of use l -> super-pipe p*L + l.

    With this bit order, applying the channel per use and interleaving the
    outputs equals one use of the expanded channel on interleaved inputs.
    """
    l_uses = len(vectors)
    if l_uses == 0:
        raise ValueError("need at least one vector")
    size = vectors[0].shape[0]
    if any(v.shape[0] != size for v in vectors):
        raise DimensionMismatchError("interleaved vectors must share a length")
    out = np.empty(size * l_uses, dtype=np.uint8)
    for l, v in enumerate(vectors):
        out[l::l_uses] = v
    return out


def deinterleave(v: BitVec, l_uses: int) -> list[BitVec]:
    """Inverse of interleave."""
    if l_uses < 1 or v.shape[0] % l_uses != 0:
        raise DimensionMismatchError(f"length {v.shape[0]} not divisible into {l_uses} uses")
    return [np.array(v[l::l_uses], copy=True) for l in range(l_uses)]
