"""Chip quantization and sparse hypothesis registers.

Every candidate received waveform is quantized chip by chip and packed into
a single basis index of an N_Q-bit register (N_Q = N_ch * PG).  A user's
hypothesis register for bit b is the set of indices reachable from that
bit: own-signature delay variants, every interferer bit pattern, and a
bounded lattice of per-chip noise offsets.  Registers carry implicit
uniform amplitudes 1/sqrt(N_s), so membership alone fixes the state.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .config import QuantizerSpec, Scenario
from .errors import (BudgetExceeded, CodeOutOfRange, DelayOutOfRange,
                     EmptyRegister, ValidationError)

# Cap on delays x interferer patterns x noise-lattice points per register.
ENUMERATION_BUDGET = 10**6


def quantize_chip(x: float, spec: QuantizerSpec) -> int:
    """Uniform mid-rise code with saturation at both rails.

    code = clamp(floor((x + A) / step), 0, 2**n_ch - 1).
    """
    code = math.floor((x + spec.amplitude) / spec.step)
    return min(max(code, 0), spec.levels - 1)


def quantize_waveform(chips, spec: QuantizerSpec) -> tuple[int, ...]:
    """Quantize every chip of a waveform."""
    return tuple(quantize_chip(float(x), spec) for x in chips)


def pack_basis(codes, spec: QuantizerSpec) -> int:
    """Pack chip codes into one basis index, chip 0 in the most significant bits."""
    index = 0
    for code in codes:
        code = int(code)
        if not 0 <= code < spec.levels:
            raise CodeOutOfRange(f"chip code {code} does not fit in {spec.n_ch} bits")
        index = (index << spec.n_ch) | code
    return index


def unpack_basis(index: int, spec: QuantizerSpec, pg: int) -> tuple[int, ...]:
    """Inverse of pack_basis; used by dump tooling and tests."""
    mask = spec.levels - 1
    return tuple((index >> (spec.n_ch * (pg - 1 - n))) & mask for n in range(pg))


def shift_variants(chips, delays) -> list[tuple[float, ...]]:
    """Right-shifted copies of a chip sequence, zero-filled, duplicates removed.

    Shifts emulate delayed-path arrivals of a signature within the single
    symbol window; there is no preceding chip to wrap around.
    """
    chips = tuple(float(x) for x in chips)
    pg = len(chips)
    variants: list[tuple[float, ...]] = []
    for d in sorted(set(int(d) for d in delays)):
        if not 0 <= d < pg:
            raise DelayOutOfRange(f"delay {d} outside [0, {pg})")
        shifted = (0.0,) * d + chips[: pg - d]
        if shifted not in variants:
            variants.append(shifted)
    return variants


@dataclass(frozen=True)
class SparseRegister:
    """Uniform-amplitude superposition stored as a set of basis indices."""

    members: frozenset[int]
    n_q: int

    def __post_init__(self):
        object.__setattr__(self, "members", frozenset(int(v) for v in self.members))
        limit = 1 << self.n_q
        for v in self.members:
            if not 0 <= v < limit:
                raise ValidationError(f"basis index {v} outside [0, 2**{self.n_q})")

    @property
    def n_s(self) -> int:
        return len(self.members)

    def sorted_members(self) -> list[int]:
        return sorted(self.members)


@dataclass(frozen=True)
class QubitState:
    """Two-level reduction of a register relative to one basis index."""

    c0: float
    c1: float

    def __post_init__(self):
        if abs(self.c0 * self.c0 + self.c1 * self.c1 - 1.0) > 1e-12:
            raise ValidationError(f"qubit amplitudes not normalized: ({self.c0}, {self.c1})")

    @classmethod
    def absent(cls) -> "QubitState":
        return cls(1.0, 0.0)

    @classmethod
    def present(cls, n_s: int) -> "QubitState":
        return cls(*present_qubit_amplitudes(n_s))


@lru_cache(maxsize=None)
def present_qubit_amplitudes(n_s: int) -> tuple[float, float]:
    """(c0, c1) of the reduced qubit when the probed index is stored.

    Shared by the register reduction and the measurement operators so both
    sides use bit-identical floats; the unambiguous-discrimination zero
    probabilities then cancel exactly.
    """
    if n_s < 1:
        raise EmptyRegister("population must be >= 1")
    return math.sqrt((n_s - 1.0) / n_s), math.sqrt(1.0 / n_s)


def membership_amplitude(reg: SparseRegister, v: int) -> float:
    """Amplitude of basis index v in the register: 1/sqrt(N_s) or 0."""
    if reg.n_s == 0:
        raise EmptyRegister("register holds no states")
    return 1.0 / math.sqrt(reg.n_s) if v in reg.members else 0.0


def reduce_to_qubit(reg: SparseRegister, v: int) -> QubitState:
    """Collapse the register to the two-level state seen by the measurement.

    The component along |v> carries amplitude 1/sqrt(N_s) if stored, else
    the state is exactly the reference state (1, 0).
    """
    if reg.n_s == 0:
        raise EmptyRegister("register holds no states")
    if v in reg.members:
        return QubitState.present(reg.n_s)
    return QubitState.absent()


def hypothesis_budget(scenario: Scenario) -> int:
    """Number of raw waveform hypotheses per register, before dedup."""
    lattice = (2 * scenario.gamma + 1) ** scenario.PG
    return lattice * len(scenario.delays) * 2 ** (scenario.K - 1)


def enumerate_hypotheses(scenario: Scenario, user: int, bit: int) -> SparseRegister:
    """Hypothesis register of `user` for transmitted `bit` (+1 or -1).

    Members are the quantized indices of every waveform

        sqrt(E_u) a_u b s_u^(d)  +  sum_{l != u} sqrt(E_l) a_l b_l s_l  +  eps

    over own-signature delays d, all interferer bit patterns, and per-chip
    noise offsets eps[n] in {-gamma*step, ..., 0, ..., +gamma*step}.
    Duplicate indices collapse.
    """
    if not 0 <= user < scenario.K:
        raise ValidationError(f"user index {user} outside [0, {scenario.K})")
    if bit not in (-1, 1):
        raise ValidationError(f"bit must be +1 or -1, got {bit}")
    if hypothesis_budget(scenario) > ENUMERATION_BUDGET:
        raise BudgetExceeded(
            f"{hypothesis_budget(scenario)} hypotheses exceed budget {ENUMERATION_BUDGET}")

    spec = scenario.quantizer
    amp = scenario.amplitude_vector()
    sig = scenario.signature_matrix()
    others = [l for l in range(scenario.K) if l != user]

    own_variants = [
        bit * amp[user] * np.array(v)
        for v in shift_variants(sig[user], scenario.delays)
    ]
    offsets = spec.step * np.array(
        list(itertools.product(range(-scenario.gamma, scenario.gamma + 1),
                               repeat=scenario.PG)),
        dtype=float,
    )
    weights = np.array(
        [spec.levels ** (scenario.PG - 1 - n) for n in range(scenario.PG)],
        dtype=np.int64,
    )

    members: set[int] = set()
    for own in own_variants:
        for pattern in itertools.product((-1.0, 1.0), repeat=len(others)):
            base = own.copy()
            for l, b_l in zip(others, pattern):
                base += amp[l] * b_l * sig[l]
            waves = base[None, :] + offsets
            codes = np.clip(
                np.floor((waves + spec.amplitude) / spec.step).astype(np.int64),
                0, spec.levels - 1)
            members.update((codes @ weights).tolist())
    return SparseRegister(frozenset(members), scenario.register_bits)


def dump_register(reg: SparseRegister) -> str:
    """Text dump: header line, then one decimal basis index per line, sorted."""
    lines = [f"N_Q={reg.n_q} N_s={reg.n_s}"]
    lines.extend(str(v) for v in reg.sorted_members())
    return "\n".join(lines) + "\n"


def load_register(text: str) -> SparseRegister:
    """Parse a dump produced by dump_register."""
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines or not lines[0].startswith("N_Q="):
        raise ValidationError("register dump must start with an 'N_Q=<n> N_s=<m>' header")
    try:
        fields = dict(part.split("=") for part in lines[0].split())
        n_q = int(fields["N_Q"])
        n_s = int(fields["N_s"])
        members = frozenset(int(ln) for ln in lines[1:])
    except (KeyError, ValueError) as exc:
        raise ValidationError(f"malformed register dump: {exc}") from exc
    if len(members) != n_s:
        raise ValidationError(f"header says N_s={n_s} but dump lists {len(members)} indices")
    return SparseRegister(members, n_q)
