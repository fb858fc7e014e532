"""Dense statevector simulation of the native gate set.

States are ndarrays of shape (2,)*n with axis k holding local qubit k.
Circuits are simulated over the compact sorted set of qubits they touch,
so cost scales with the circuit, not the device.  Measurement is terminal
per qubit, so all unitaries can be applied first and the measured-qubit
marginal read off at the end.
"""

from __future__ import annotations

import math

import numpy as np

from .circuits import Circuit

_SX = np.array([[0, 1], [1, 0]], dtype=complex)
_SY = np.array([[0, -1j], [1j, 0]], dtype=complex)
_SZ = np.array([[1, 0], [0, -1]], dtype=complex)
PAULIS_1Q = (_SX, _SY, _SZ)  # codes 0, 1, 2


def prx_matrix(theta: float, phi: float) -> np.ndarray:
    """Phased-RX: rotation by theta about the axis at angle phi in the XY plane."""
    c = math.cos(theta / 2.0)
    s = math.sin(theta / 2.0)
    return np.array(
        [
            [c, -1j * s * np.exp(-1j * phi)],
            [-1j * s * np.exp(1j * phi), c],
        ],
        dtype=complex,
    )


def apply_1q(state: np.ndarray, axis: int, matrix: np.ndarray) -> np.ndarray:
    moved = np.moveaxis(state, axis, 0)
    shape = moved.shape
    out = matrix @ moved.reshape(2, -1)
    return np.moveaxis(out.reshape(shape), 0, axis)


def apply_prx(state: np.ndarray, axis: int, theta: float, phi: float) -> np.ndarray:
    return apply_1q(state, axis, prx_matrix(theta, phi))


def apply_cz(state: np.ndarray, axis_a: int, axis_b: int) -> np.ndarray:
    out = state.copy()
    idx = [slice(None)] * state.ndim
    idx[axis_a] = 1
    idx[axis_b] = 1
    out[tuple(idx)] *= -1.0
    return out


def apply_pauli(state: np.ndarray, axis: int, code: int) -> np.ndarray:
    """code 0/1/2 -> X/Y/Z."""
    return apply_1q(state, axis, PAULIS_1Q[code])


def apply_pauli_pair(state: np.ndarray, axis_a: int, axis_b: int, code: int) -> np.ndarray:
    """code 0..14 -> the 15 non-identity two-qubit Paulis, (pa, pb) = divmod(code+1, 4)
    with 0=I, 1=X, 2=Y, 3=Z."""
    pa, pb = divmod(code + 1, 4)
    if pa:
        state = apply_pauli(state, axis_a, pa - 1)
    if pb:
        state = apply_pauli(state, axis_b, pb - 1)
    return state


def zero_state(n: int) -> np.ndarray:
    state = np.zeros((2,) * n, dtype=complex)
    state[(0,) * n] = 1.0
    return state


def simulate_ideal(circuit: Circuit) -> tuple[np.ndarray, list[int]]:
    """Noise-free final state over the circuit's used qubits (sorted ascending).

    Measure gates are skipped; returns (state of shape (2,)*k, used-qubit list).
    """
    used = sorted(circuit.used_qubits())
    local = {q: i for i, q in enumerate(used)}
    state = zero_state(len(used))
    for g in circuit.gates:
        if g.op == "prx":
            state = apply_prx(state, local[g.qubits[0]], *g.params)
        elif g.op == "cz":
            state = apply_cz(state, local[g.qubits[0]], local[g.qubits[1]])
    return state, used


def measured_marginal(state: np.ndarray, local_axes: list[int]) -> np.ndarray:
    """Outcome probabilities over the given axes, in the given order.

    Flattened C-order: the first axis in local_axes is the most significant
    bit of the outcome index.
    """
    probs = np.abs(state) ** 2
    keep = list(local_axes)
    drop = tuple(i for i in range(state.ndim) if i not in keep)
    if drop:
        probs = probs.sum(axis=drop)
    # remaining axes are sorted(keep); permute into requested order
    order = [sorted(keep).index(a) for a in keep]
    probs = np.transpose(probs, order)
    return probs.reshape(-1)


def ideal_probabilities(circuit: Circuit) -> tuple[np.ndarray, list[int]]:
    """Noise-free outcome distribution over measured bits, in measure order."""
    state, used = simulate_ideal(circuit)
    local = {q: i for i, q in enumerate(used)}
    meas = circuit.measured_qubits()
    if not meas:
        raise ValueError("circuit has no measurements")
    return measured_marginal(state, [local[q] for q in meas]), meas


def indices_to_bits(indices: np.ndarray, n_bits: int) -> np.ndarray:
    """Outcome indices -> (len, n_bits) bit array; bit 0 is the most significant."""
    shifts = np.arange(n_bits - 1, -1, -1, dtype=np.int64)
    return ((indices[:, None] >> shifts) & 1).astype(np.uint8)


def bits_to_strings(bits: np.ndarray) -> list[str]:
    return ["".join("1" if b else "0" for b in row) for row in bits]
