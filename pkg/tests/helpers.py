"""Independent oracles shared by the test modules.

Everything here is deliberately written against the math, not against the
package internals: detector amplitudes come from the final-state closed
forms, chained networks from 2x2 matrix products with scalar inner-chain
transfer factors, and mutual information from a direct joint-table
summation.  Tests compare the simulator's propagated results to these.
"""

import cmath
import math

import numpy as np


def closed_form_final(theta1, theta2, bit):
    """Detector-mode amplitudes (mode 0, mode 1) of the basic protocol.

    For an open emitter arm (bit 1) the detector amplitudes are
    ``(c1 c2, i c1 s2)``; for a blocked arm (bit 0) they are
    ``(c1 c2 - s1 s2 / 2, i (c1 s2 + s1 c2 / 2))``.
    """
    c1, s1 = math.cos(theta1), math.sin(theta1)
    c2, s2 = math.cos(theta2), math.sin(theta2)
    if bit == 1:
        return complex(c1 * c2, 0.0), complex(0.0, c1 * s2)
    return complex(c1 * c2 - 0.5 * s1 * s2, 0.0), complex(0.0, c1 * s2 + 0.5 * s1 * c2)


def closed_form_success(theta1, theta2):
    """(p00, p11) from the closed forms."""
    amp0_b0, amp1_b0 = closed_form_final(theta1, theta2, 0)
    amp0_b1, amp1_b1 = closed_form_final(theta1, theta2, 1)
    return abs(amp1_b0) ** 2, abs(amp0_b1) ** 2


def chain_matrix_oracle(outer_cycles, inner_cycles, outer_angle, inner_angle, final_angle, bit):
    """(p_d1, p_d2) of the chained network via 2x2 matrix products.

    Each inner chain acts on the lower outer arm as a scalar transfer:
    cos((M+1) beta) with the blockers absent (everything that crossed to the
    far arm is discarded at the chain output), cos(beta)^(M+1) with a
    blocker zeroing the far arm after each of the first M couplers.
    """
    if bit == 1:
        transfer = math.cos((inner_cycles + 1) * inner_angle)
    else:
        transfer = math.cos(inner_angle) ** (inner_cycles + 1)

    def coupler(theta):
        return np.array(
            [
                [math.cos(theta), 1j * math.sin(theta)],
                [1j * math.sin(theta), math.cos(theta)],
            ]
        )

    state = np.array([1.0 + 0j, 0.0 + 0j])
    for _ in range(outer_cycles):
        state = coupler(outer_angle) @ state
        state[1] *= transfer
    state = coupler(final_angle) @ state
    return abs(state[0]) ** 2, abs(state[1]) ** 2


def mi_direct_joint(rows, p0):
    """Mutual information by explicit summation over the 2x3 joint table."""
    weights = (p0, 1.0 - p0)
    joint = [[weights[b] * rows[b][y] for y in range(3)] for b in range(2)]
    marginal = [joint[0][y] + joint[1][y] for y in range(3)]
    info = 0.0
    for b in range(2):
        for y in range(3):
            if joint[b][y] > 0.0 and weights[b] > 0.0 and marginal[y] > 0.0:
                info += joint[b][y] * math.log2(joint[b][y] / (weights[b] * marginal[y]))
    return info


def random_channel_rows(rng):
    """A random valid 2x3 row-stochastic matrix."""
    raw = rng.uniform(0.0, 1.0, size=(2, 3))
    return raw / raw.sum(axis=1, keepdims=True)


def random_config_angles(rng):
    """Random (theta1, theta2) over the full validated config domain."""
    return rng.uniform(-math.pi + 1e-9, math.pi), rng.uniform(-math.pi + 1e-9, math.pi)


def fold_elements(state, elements):
    """Sequentially apply beam splitters / blockers with the standalone ops;
    dual route against the kernel-based propagate."""
    from cfoptics import BeamSplitter, Blocker, Discard, apply_beam_splitter, apply_blocker

    for element in elements:
        if isinstance(element, BeamSplitter):
            state = apply_beam_splitter(state, element.mode_a, element.mode_b, element.theta)
        elif isinstance(element, (Blocker, Discard)):
            state = apply_blocker(state, element.mode, element.label)
    return state
