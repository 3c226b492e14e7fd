"""Nested-interferometer bit transmission and its chained generalization.

The basic layout is a small interferometer (two 50-50 couplers enclosing the
emitter's blockable arm) nested inside one arm of an outer interferometer.
The receiver, Alice, injects a single excitation; the emitter, Bob, blocks
his arm to send ``b = 0`` and does nothing to send ``b = 1``; the middleman,
Charlie, owns the inner couplers.  Detector D1 sits on the outer arm that
never enters the inner loop and decodes as ``a = 1``; detector D2 sits on
the other outer arm and decodes as ``a = 0``.

Leg checkpoints record the amplitude on every directed inter-party segment,
so tests can verify that for each bit value one of the emitter-receiver legs
carries exactly zero amplitude.

Mode layout (3 modes): mode 0 is Alice's upper arm (D1), mode 1 the lower
outer arm (D2), mode 2 the inner far arm on Bob's side.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Dict, Mapping, NamedTuple, Optional, Tuple

from .core import (
    BeamSplitter,
    Blocker,
    Checkpoint,
    Discard,
    ModeState,
    Network,
    propagate,
)
from .errors import DomainError, MalformedOutcomeError, UndecidableDecodingError

__all__ = [
    "LEG_NAMES",
    "NestedConfig",
    "ChainConfig",
    "ProtocolOutcome",
    "ChainOutcome",
    "BrightPulseReading",
    "build_nested_network",
    "run_protocol",
    "counterfactual_witness",
    "run_bright_pulse",
    "build_chain_network",
    "run_chain",
]

LEG_NAMES = ("alice_to_charlie", "charlie_to_bob", "bob_to_charlie", "charlie_to_alice")

# Mode whose amplitude constitutes the leg at each checkpoint.
_LEG_MODE = {
    "alice_to_charlie": 1,
    "charlie_to_bob": 2,
    "bob_to_charlie": 2,
    "charlie_to_alice": 1,
}


def _validate_bit(bit) -> int:
    if bit not in (0, 1) or isinstance(bit, bool):
        raise DomainError(f"sender bit must be 0 or 1, got {bit!r}")
    return int(bit)


def _validate_angle(name: str, value) -> float:
    try:
        angle = float(value)
    except (TypeError, ValueError):
        raise DomainError(f"{name} must be a real angle in radians") from None
    if not math.isfinite(angle) or not -math.pi < angle <= math.pi:
        raise DomainError(f"{name} must be finite and in (-pi, pi], got {value!r}")
    return angle


@dataclass(frozen=True)
class NestedConfig:
    """Angles of the two outer couplers; the inner pair is fixed at pi/4.

    ``inner_offset`` detunes both inner couplers away from pi/4.  It exists
    only as a diagnostic to show how fragile the exact return-leg
    cancellation is, and defaults to off.
    """

    theta1: float
    theta2: float
    inner_offset: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "theta1", _validate_angle("theta1", self.theta1))
        object.__setattr__(self, "theta2", _validate_angle("theta2", self.theta2))
        if not math.isfinite(self.inner_offset):
            raise DomainError("inner_offset must be finite")

    @property
    def inner_angle(self) -> float:
        return math.pi / 4 + self.inner_offset


@dataclass(frozen=True)
class ProtocolOutcome:
    """Detector probabilities, absorption breakdown and leg amplitudes of one run."""

    p_d1: float
    p_d2: float
    absorbed: Mapping[str, float]
    legs: Mapping[str, complex]


class BrightPulseReading(NamedTuple):
    i_d1: float
    i_d2: float
    decoded: int


def build_nested_network(config: NestedConfig, bit: int) -> Network:
    """Element list for one run at sender bit ``bit``.

    Order: outer coupler theta1 on modes (0, 1); 50-50 coupler on (1, 2);
    Bob's blocker on mode 2 iff ``bit == 0``; the second 50-50 coupler on
    (1, 2); discard of mode 2; outer coupler theta2 on (0, 1).  Leg
    checkpoints surround the blocker slot and the inner couplers.
    """
    bit = _validate_bit(bit)
    inner = config.inner_angle
    elements = [
        BeamSplitter(0, 1, config.theta1),
        Checkpoint("alice_to_charlie"),
        BeamSplitter(1, 2, inner),
        Checkpoint("charlie_to_bob"),
    ]
    if bit == 0:
        elements.append(Blocker(2, "bob"))
    elements += [
        Checkpoint("bob_to_charlie"),
        BeamSplitter(1, 2, inner),
        Checkpoint("charlie_to_alice"),
        Discard(2, "discard"),
        BeamSplitter(0, 1, config.theta2),
    ]
    return Network(3, tuple(elements))


def run_protocol(config: NestedConfig, bit: int) -> ProtocolOutcome:
    """Propagate a single excitation and collect detector/leg statistics."""
    network = build_nested_network(config, bit)
    final, checkpoints = propagate(network, ModeState.single_photon(3))
    legs = {
        name: complex(checkpoints[name][_LEG_MODE[name]]) for name in LEG_NAMES
    }
    absorbed = {
        "bob": final.absorbed.get("bob", 0.0),
        "discard": final.absorbed.get("discard", 0.0),
    }
    return ProtocolOutcome(
        p_d1=float(abs(final.amplitudes[0]) ** 2),
        p_d2=float(abs(final.amplitudes[1]) ** 2),
        absorbed=absorbed,
        legs=legs,
    )


def counterfactual_witness(outcome: ProtocolOutcome, bit: int) -> Tuple[float, float]:
    """Probabilities on the two emitter-receiver legs of ``outcome``.

    Returns ``(|bob_to_charlie|^2, |charlie_to_alice|^2)``.  The first is
    exactly zero whenever ``bit == 0`` (the blocker empties the arm); the
    second vanishes for ``bit == 1`` with exact 50-50 inner couplers.
    """
    _validate_bit(bit)
    try:
        forward = outcome.legs["bob_to_charlie"]
        backward = outcome.legs["charlie_to_alice"]
    except (KeyError, TypeError) as exc:
        raise MalformedOutcomeError(f"outcome is missing leg amplitudes: {exc}") from None
    return abs(forward) ** 2, abs(backward) ** 2


def run_bright_pulse(config: NestedConfig, bit: int, intensity: float) -> BrightPulseReading:
    """Classical-pulse variant: every photon of a bright input pulse follows
    the same linear evolution, so detector intensities are
    ``intensity * p_dk``.  Decoding is argmax over the two detectors; an
    exact tie is refused rather than silently broken."""
    if not isinstance(intensity, (int, float)) or isinstance(intensity, bool):
        raise DomainError("intensity must be a positive number")
    if not math.isfinite(intensity) or intensity <= 0:
        raise DomainError(f"intensity must be positive and finite, got {intensity!r}")
    outcome = run_protocol(config, bit)
    i_d1 = intensity * outcome.p_d1
    i_d2 = intensity * outcome.p_d2
    if i_d1 > i_d2:
        decoded = 1
    elif i_d2 > i_d1:
        decoded = 0
    else:
        raise UndecidableDecodingError(
            f"detector intensities tie exactly at {i_d1!r}; decoding is undefined"
        )
    return BrightPulseReading(i_d1, i_d2, decoded)


@dataclass(frozen=True)
class ChainConfig:
    """Chained generalization: ``outer_cycles`` outer loops, each feeding an
    inner chain of ``inner_cycles`` blockable loops.

    Defaults put every coupler at the angle that composes to a quarter turn
    over its chain (``pi / (2 (cycles + 1))``), the regime where repeated
    weak coupling makes both error and loss vanish as the cycle counts grow.
    ``final_angle`` lets the closing outer coupler differ from the others;
    with one cycle each, ``outer_angle = theta1``, ``final_angle = theta2``
    and ``inner_angle = pi/4`` this reduces element-for-element to
    :func:`build_nested_network`.
    """

    outer_cycles: int
    inner_cycles: int
    outer_angle: Optional[float] = None
    inner_angle: Optional[float] = None
    final_angle: Optional[float] = None

    def __post_init__(self):
        for name, value in (("outer_cycles", self.outer_cycles), ("inner_cycles", self.inner_cycles)):
            if not isinstance(value, int) or isinstance(value, bool) or value < 1:
                raise DomainError(f"{name} must be a positive integer, got {value!r}")
        if self.outer_angle is None:
            object.__setattr__(self, "outer_angle", math.pi / (2 * (self.outer_cycles + 1)))
        if self.inner_angle is None:
            object.__setattr__(self, "inner_angle", math.pi / (2 * (self.inner_cycles + 1)))
        if self.final_angle is None:
            object.__setattr__(self, "final_angle", self.outer_angle)
        for name in ("outer_angle", "inner_angle", "final_angle"):
            object.__setattr__(self, name, _validate_angle(name, getattr(self, name)))


@dataclass(frozen=True)
class ChainOutcome:
    """Detector and witness statistics of one chained run."""

    bit: int
    p_d1: float
    p_d2: float
    absorbed: Mapping[str, float]
    leg_peaks: Mapping[str, float]

    @property
    def p_correct(self) -> float:
        """Probability that argmax decoding recovers the sender bit."""
        return self.p_d2 if self.bit == 0 else self.p_d1


def build_chain_network(chain: ChainConfig, bit: int) -> Network:
    """Chained network on the same 3 modes as the basic layout.

    Each outer cycle couples modes (0, 1) and routes mode 1 through an inner
    chain of couplers on (1, 2) whose far arm holds Bob's blocker slot in
    every cycle; the inner chain's far output is discarded before control
    returns to the outer loop.  Checkpoints carry the cycle index so leg
    amplitudes stay inspectable at any depth.
    """
    bit = _validate_bit(bit)
    elements = []
    for k in range(1, chain.outer_cycles + 1):
        elements.append(BeamSplitter(0, 1, chain.outer_angle))
        elements.append(Checkpoint(f"alice_to_charlie[{k}]"))
        for j in range(1, chain.inner_cycles + 1):
            elements.append(BeamSplitter(1, 2, chain.inner_angle))
            elements.append(Checkpoint(f"charlie_to_bob[{k}.{j}]"))
            if bit == 0:
                elements.append(Blocker(2, "bob"))
            elements.append(Checkpoint(f"bob_to_charlie[{k}.{j}]"))
        elements.append(BeamSplitter(1, 2, chain.inner_angle))
        elements.append(Checkpoint(f"charlie_to_alice[{k}]"))
        elements.append(Discard(2, "discard"))
    elements.append(BeamSplitter(0, 1, chain.final_angle))
    return Network(3, tuple(elements))


def run_chain(chain: ChainConfig, bit: int) -> ChainOutcome:
    """Propagate one excitation through the chained network.

    ``leg_peaks`` holds, per leg family, the maximum probability seen over
    all same-named checkpoints; the counterfactual statements then read
    ``leg_peaks["bob_to_charlie"] == 0`` for ``bit == 0`` and
    ``leg_peaks["charlie_to_alice"] ~ 0`` for ``bit == 1`` at default angles.
    """
    network = build_chain_network(chain, bit)
    final, checkpoints = propagate(network, ModeState.single_photon(3))
    peaks: Dict[str, float] = {name: 0.0 for name in LEG_NAMES}
    for name, vector in checkpoints.items():
        leg = name.split("[", 1)[0]
        peaks[leg] = max(peaks[leg], float(abs(vector[_LEG_MODE[leg]]) ** 2))
    absorbed = {
        "bob": final.absorbed.get("bob", 0.0),
        "discard": final.absorbed.get("discard", 0.0),
    }
    return ChainOutcome(
        bit=bit,
        p_d1=float(abs(final.amplitudes[0]) ** 2),
        p_d2=float(abs(final.amplitudes[1]) ** 2),
        absorbed=absorbed,
        leg_peaks=peaks,
    )
