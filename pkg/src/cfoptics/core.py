"""Single-excitation amplitude propagation through linear-optical networks.

A network is an ordered list of elements acting on a fixed number of optical
modes.  Lossless two-mode beam splitters rotate amplitude pairs, perfectly
absorbing blockers move modal probability into a per-label ledger, discards
do the same for modes that never reach a detector, and checkpoints record
amplitude snapshots without any physical effect.  For every normalized input
the sum of modal probabilities and ledger entries stays 1 up to rounding.

Beam-splitter convention: a coupler of angle ``theta`` on modes ``(a, b)``
applies the unitary ``[[cos t, i sin t], [i sin t, cos t]]`` to the pair
``(amp_a, amp_b)``.  A 50-50 splitter is ``theta = pi/4``.  Angles are
radians everywhere.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Dict, NamedTuple, Tuple, Union

import numpy as np

from . import kernel
from ._kernel_py import OP_ABSORB, OP_SNAPSHOT, OP_SPLIT
from .errors import InvalidNetworkError

__all__ = [
    "BeamSplitter",
    "Blocker",
    "Checkpoint",
    "Discard",
    "Element",
    "ModeState",
    "Network",
    "apply_beam_splitter",
    "apply_blocker",
    "propagate",
    "total_probability",
]


@dataclass(frozen=True)
class BeamSplitter:
    """Lossless two-mode coupler of angle ``theta`` on modes (mode_a, mode_b)."""

    mode_a: int
    mode_b: int
    theta: float


@dataclass(frozen=True)
class Blocker:
    """Perfect absorber on one mode; absorbed probability is booked under ``label``."""

    mode: int
    label: str


@dataclass(frozen=True)
class Discard:
    """Same mechanics as :class:`Blocker`, reserved for modes that simply
    never reach a detector (kept distinct so ledgers stay interpretable)."""

    mode: int
    label: str


@dataclass(frozen=True)
class Checkpoint:
    """Records a snapshot of all amplitudes at its position; no physical effect."""

    name: str


Element = Union[BeamSplitter, Blocker, Discard, Checkpoint]


class ModeState:
    """Complex amplitudes over the optical modes plus an absorption ledger.

    Parameters
    ----------
    amplitudes : sequence of complex
        One amplitude per mode; copied into a complex128 vector.
    absorbed : mapping str -> float, optional
        Probability already absorbed, keyed by absorber label.
    """

    __slots__ = ("amplitudes", "absorbed")

    def __init__(self, amplitudes, absorbed=None):
        amps = np.array(amplitudes, dtype=np.complex128)
        if amps.ndim != 1 or amps.size == 0:
            raise InvalidNetworkError("amplitudes must be a non-empty vector")
        ledger = dict(absorbed) if absorbed else {}
        for label, value in ledger.items():
            if not isinstance(label, str):
                raise InvalidNetworkError("absorber labels must be strings")
            if not math.isfinite(value) or value < 0.0:
                raise InvalidNetworkError(
                    f"absorbed[{label!r}] must be a finite non-negative probability"
                )
        self.amplitudes = amps
        self.absorbed = ledger

    @classmethod
    def single_photon(cls, mode_count: int, mode: int = 0) -> "ModeState":
        """Unit amplitude in one mode, vacuum elsewhere, empty ledger."""
        if mode_count < 1 or not 0 <= mode < mode_count:
            raise InvalidNetworkError("mode index out of range")
        amps = np.zeros(mode_count, dtype=np.complex128)
        amps[mode] = 1.0
        return cls(amps)

    @property
    def mode_count(self) -> int:
        return int(self.amplitudes.size)

    def __repr__(self):  # pragma: no cover - debugging aid
        return f"ModeState(amplitudes={self.amplitudes!r}, absorbed={self.absorbed!r})"


def _check_mode(index, mode_count, what):
    if not isinstance(index, int) or isinstance(index, bool):
        raise InvalidNetworkError(f"{what} must be an integer mode index")
    if not 0 <= index < mode_count:
        raise InvalidNetworkError(
            f"{what} {index} out of range for {mode_count} modes"
        )


def _validate_element(element, mode_count, seen_checkpoints):
    if isinstance(element, BeamSplitter):
        _check_mode(element.mode_a, mode_count, "beam-splitter mode_a")
        _check_mode(element.mode_b, mode_count, "beam-splitter mode_b")
        if element.mode_a == element.mode_b:
            raise InvalidNetworkError("beam splitter needs two distinct modes")
        if not math.isfinite(element.theta):
            raise InvalidNetworkError("beam-splitter angle must be finite")
    elif isinstance(element, (Blocker, Discard)):
        _check_mode(element.mode, mode_count, "absorber mode")
        if not isinstance(element.label, str) or not element.label:
            raise InvalidNetworkError("absorber label must be a non-empty string")
    elif isinstance(element, Checkpoint):
        if not isinstance(element.name, str) or not element.name:
            raise InvalidNetworkError("checkpoint name must be a non-empty string")
        if element.name in seen_checkpoints:
            raise InvalidNetworkError(f"duplicate checkpoint name {element.name!r}")
        seen_checkpoints.add(element.name)
    else:
        raise InvalidNetworkError(f"unknown element type {type(element).__name__}")


@dataclass(frozen=True)
class Network:
    """Ordered element list over a fixed mode count, validated on construction."""

    mode_count: int
    elements: Tuple[Element, ...] = field(default_factory=tuple)

    def __post_init__(self):
        if not isinstance(self.mode_count, int) or isinstance(self.mode_count, bool):
            raise InvalidNetworkError("mode_count must be an integer")
        if self.mode_count < 1:
            raise InvalidNetworkError("mode_count must be positive")
        object.__setattr__(self, "elements", tuple(self.elements))
        seen = set()
        for element in self.elements:
            _validate_element(element, self.mode_count, seen)


class _Plan(NamedTuple):
    """Flat element arrays consumed by the propagation kernels."""

    ops: np.ndarray
    arg_a: np.ndarray
    arg_b: np.ndarray
    theta: np.ndarray
    ledger_labels: Tuple[str, ...]
    checkpoint_names: Tuple[str, ...]


def compile_network(network: Network) -> _Plan:
    """Lower a validated network to the kernel's array representation."""
    count = len(network.elements)
    ops = np.zeros(count, dtype=np.int32)
    arg_a = np.zeros(count, dtype=np.int32)
    arg_b = np.zeros(count, dtype=np.int32)
    theta = np.zeros(count, dtype=np.float64)
    slots: Dict[str, int] = {}
    checkpoint_names = []
    for k, element in enumerate(network.elements):
        if isinstance(element, BeamSplitter):
            ops[k] = OP_SPLIT
            arg_a[k] = element.mode_a
            arg_b[k] = element.mode_b
            theta[k] = element.theta
        elif isinstance(element, (Blocker, Discard)):
            ops[k] = OP_ABSORB
            arg_a[k] = element.mode
            arg_b[k] = slots.setdefault(element.label, len(slots))
        else:
            ops[k] = OP_SNAPSHOT
            arg_a[k] = len(checkpoint_names)
            checkpoint_names.append(element.name)
    return _Plan(ops, arg_a, arg_b, theta, tuple(slots), tuple(checkpoint_names))


def apply_beam_splitter(state: ModeState, mode_a: int, mode_b: int, theta: float) -> ModeState:
    """Couple two modes with angle ``theta``; pure, returns a fresh state.

    The pair transform is ``(c*za + i*s*zb, i*s*za + c*zb)`` with
    ``c = cos(theta)``, ``s = sin(theta)``; unitary for every angle.
    """
    n = state.mode_count
    _check_mode(mode_a, n, "mode_a")
    _check_mode(mode_b, n, "mode_b")
    if mode_a == mode_b:
        raise InvalidNetworkError("beam splitter needs two distinct modes")
    if not math.isfinite(theta):
        raise InvalidNetworkError("beam-splitter angle must be finite")
    c = math.cos(theta)
    s = math.sin(theta)
    amps = state.amplitudes.copy()
    za = complex(amps[mode_a])
    zb = complex(amps[mode_b])
    amps[mode_a] = c * za + 1j * s * zb
    amps[mode_b] = 1j * s * za + c * zb
    return ModeState(amps, state.absorbed)


def apply_blocker(state: ModeState, mode: int, label: str) -> ModeState:
    """Absorb one mode completely, booking its probability under ``label``."""
    _check_mode(mode, state.mode_count, "mode")
    amps = state.amplitudes.copy()
    za = complex(amps[mode])
    amps[mode] = 0j
    ledger = dict(state.absorbed)
    ledger[label] = ledger.get(label, 0.0) + (za.real * za.real + za.imag * za.imag)
    return ModeState(amps, ledger)


def propagate(network: Network, state: ModeState):
    """Apply all elements in order.

    Returns
    -------
    (final, checkpoints)
        ``final`` is the output :class:`ModeState` (input ledger carried
        over and extended); ``checkpoints`` maps each checkpoint name to a
        copy of the full amplitude vector at its position.
    """
    if state.mode_count != network.mode_count:
        raise InvalidNetworkError(
            f"state has {state.mode_count} modes, network expects {network.mode_count}"
        )
    plan = compile_network(network)
    amps = state.amplitudes.copy()
    absorbed = np.zeros(len(plan.ledger_labels), dtype=np.float64)
    snaps = np.zeros((len(plan.checkpoint_names), network.mode_count), dtype=np.complex128)
    kernel.run_plan(plan.ops, plan.arg_a, plan.arg_b, plan.theta, amps, absorbed, snaps)
    ledger = dict(state.absorbed)
    for slot, label in enumerate(plan.ledger_labels):
        ledger[label] = ledger.get(label, 0.0) + float(absorbed[slot])
    checkpoints = {name: snaps[row].copy() for row, name in enumerate(plan.checkpoint_names)}
    return ModeState(amps, ledger), checkpoints


def total_probability(state: ModeState) -> float:
    """Modal probability plus everything already absorbed; 1 for any state
    propagated from a normalized input."""
    modal = float(np.sum(np.abs(state.amplitudes) ** 2))
    return modal + float(sum(state.absorbed.values()))
