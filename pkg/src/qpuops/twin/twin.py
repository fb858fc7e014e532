"""Digital twin of the 20-qubit device: calibration drift plus noisy execution.

The noise model is deliberately plain.  After every gate, with probability
1 - f for that gate's current fidelity, one uniformly chosen non-identity
Pauli hits the gate's qubits.  Readout misassigns each measured bit with
probability 1 - f_ro, realised either as a direct bit flip or, when IQ data
is requested, by thresholding a Gaussian blob whose separation

    d = 2 * ndtri(f_ro)

puts exactly that much probability mass on the wrong side of zero.

Shots with no sampled gate error are drawn in one batch from the ideal
outcome distribution; only the (rare) shots that did draw an error pay for
a full statevector re-simulation with the Paulis inserted.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.special import ndtri

from .calibration import DriftParams, drifted_fidelity
from .circuits import Circuit, CircuitError, ghz_chain_circuit
from .statevector import (
    apply_cz,
    apply_pauli,
    apply_pauli_pair,
    apply_prx,
    bits_to_strings,
    indices_to_bits,
    measured_marginal,
    zero_state,
)
from .topology import QpuTopology


@dataclass
class TwinConfig:
    rows: int = 4
    cols: int = 5
    f_1q_ceiling: float = 0.999
    f_ro_ceiling: float = 0.98
    f_cz_ceiling: float = 0.99
    drift: DriftParams = field(default_factory=DriftParams)
    quick_fraction: float = 0.9
    quick_cal_duration_s: float = 2400.0
    full_cal_duration_s: float = 6000.0
    prx_duration_s: float = 20e-9
    cz_duration_s: float = 40e-9
    readout_duration_s: float = 2e-6
    reset_duration_s: float = 300e-6
    cal_jitter_sigma: float = 0.0

    def __post_init__(self):
        for name in ("f_1q_ceiling", "f_ro_ceiling", "f_cz_ceiling"):
            v = getattr(self, name)
            if not (0.0 < v <= 1.0):
                raise ValueError(f"{name} must lie in (0, 1]")
            if v - self.drift.floor_drop <= 0.0:
                raise ValueError(f"{name} sits below the drift floor")
        if self.f_ro_ceiling - self.drift.floor_drop <= 0.5:
            raise ValueError("readout floor must stay above 0.5 for IQ separation")
        if not (0.0 < self.quick_fraction < 1.0):
            raise ValueError("quick_fraction must lie strictly inside (0, 1)")
        if self.quick_cal_duration_s <= 0 or self.full_cal_duration_s <= 0:
            raise ValueError("calibration durations must be positive")
        if min(self.prx_duration_s, self.cz_duration_s,
               self.readout_duration_s, self.reset_duration_s) <= 0:
            raise ValueError("gate and reset durations must be positive")

    def ceiling_for(self, family: str) -> float:
        return {"1q": self.f_1q_ceiling, "ro": self.f_ro_ceiling,
                "cz": self.f_cz_ceiling}[family]

    def floor_for(self, family: str) -> float:
        return self.ceiling_for(family) - self.drift.floor_drop

    @classmethod
    def from_dict(cls, d: dict) -> "TwinConfig":
        d = dict(d)
        drift = d.pop("drift", None)
        kwargs = {k: v for k, v in d.items()}
        if drift is not None:
            kwargs["drift"] = DriftParams(**drift)
        return cls(**kwargs)


@dataclass
class ExecutionResult:
    histogram: dict[str, int]
    shots: int
    measured_qubits: list[int]
    duration_s: float
    bitstrings: list[str] | None = None
    iq: np.ndarray | None = None  # (shots, n_measured) complex, I + jQ

    def frequency(self, bitstring: str) -> float:
        return self.histogram.get(bitstring, 0) / self.shots


class QpuTwin:
    """Calibration-tracking noisy simulator of one square-grid device."""

    def __init__(self, config: TwinConfig | None = None, seed: int = 0):
        self.config = config if config is not None else TwinConfig()
        self.topology = QpuTopology(self.config.rows, self.config.cols)
        self._time = 0.0
        self._rng = np.random.default_rng(seed)
        self.last_full_cal_s: float = 0.0
        self.last_quick_cal_s: float | None = None
        # per element: (level right after last calibration, time of that calibration)
        # device is handed over freshly benchmarked, so everything starts at ceiling
        self._cal: dict[str, dict] = {
            "1q": {q: (self.config.f_1q_ceiling, 0.0) for q in range(self.topology.n_qubits)},
            "ro": {q: (self.config.f_ro_ceiling, 0.0) for q in range(self.topology.n_qubits)},
            "cz": {e: (self.config.f_cz_ceiling, 0.0) for e in self.topology.couplers()},
        }

    # -- clock -------------------------------------------------------------

    @property
    def now(self) -> float:
        return self._time

    def advance_to(self, t: float) -> None:
        if t < self._time:
            raise ValueError(f"cannot rewind twin clock from {self._time} to {t}")
        self._time = float(t)

    # -- calibration state ---------------------------------------------------

    def _edge(self, pair) -> tuple[int, int]:
        a, b = int(pair[0]), int(pair[1])
        edge = (a, b) if a < b else (b, a)
        if edge not in self._cal["cz"]:
            raise CircuitError(f"qubits {a} and {b} share no coupler")
        return edge

    def fidelity(self, family: str, element, t: float | None = None) -> float:
        t = self._time if t is None else t
        key = self._edge(element) if family == "cz" else int(element)
        level, cal_time = self._cal[family][key]
        return drifted_fidelity(level, self.config.floor_for(family),
                                t - cal_time, self.config.drift.tau_for(family))

    def f_1q(self, qubit: int, t: float | None = None) -> float:
        return self.fidelity("1q", qubit, t)

    def f_ro(self, qubit: int, t: float | None = None) -> float:
        return self.fidelity("ro", qubit, t)

    def f_cz(self, pair, t: float | None = None) -> float:
        return self.fidelity("cz", pair, t)

    def cal_duration(self, kind: str) -> float:
        if kind == "full":
            return self.config.full_cal_duration_s
        if kind == "quick":
            return self.config.quick_cal_duration_s
        raise ValueError(f"unknown calibration kind {kind!r}")

    def recalibrate(self, kind: str = "full", t: float | None = None) -> float:
        """Reset calibration levels at time t; returns the procedure duration.

        Full calibration restores every metric to its ceiling.  Quick
        calibration lifts metrics to quick_fraction of the floor-to-ceiling
        span; it never degrades an element already above that level.
        """
        t = self._time if t is None else t
        self.advance_to(t)
        for family, table in self._cal.items():
            ceiling = self.config.ceiling_for(family)
            floor = self.config.floor_for(family)
            for element in table:
                if kind == "full":
                    level = ceiling
                elif kind == "quick":
                    target = floor + self.config.quick_fraction * (ceiling - floor)
                    level = max(self.fidelity(family, element, t), target)
                else:
                    raise ValueError(f"unknown calibration kind {kind!r}")
                if self.config.cal_jitter_sigma > 0.0:
                    level += self._rng.normal(0.0, self.config.cal_jitter_sigma)
                    level = min(max(level, floor + 1e-9), ceiling)
                table[element] = (level, t)
        if kind == "full":
            self.last_full_cal_s = t
        else:
            self.last_quick_cal_s = t
        return self.cal_duration(kind)

    def snapshot(self, t: float | None = None) -> dict:
        """JSON-ready view of every drifted metric at time t."""
        t = self._time if t is None else t
        return {
            "time_s": t,
            "f_1q": {str(q): self.f_1q(q, t) for q in range(self.topology.n_qubits)},
            "f_ro": {str(q): self.f_ro(q, t) for q in range(self.topology.n_qubits)},
            "f_cz": {f"{a}-{b}": self.f_cz((a, b), t) for a, b in self.topology.couplers()},
            "last_full_cal_s": self.last_full_cal_s,
            "last_quick_cal_s": self.last_quick_cal_s,
        }

    # -- execution ------------------------------------------------------------

    def _check_device_fit(self, circuit: Circuit) -> None:
        if circuit.width > self.topology.n_qubits:
            raise CircuitError(
                f"circuit width {circuit.width} exceeds device size {self.topology.n_qubits}")
        for g in circuit.gates:
            if g.op == "cz":
                self._edge(g.qubits)

    def estimate_duration(self, circuit: Circuit) -> float:
        """Wall-clock seconds on device: shots x (reset + every gate in series)."""
        per_shot = self.config.reset_duration_s
        for g in circuit.gates:
            if g.op == "prx":
                per_shot += self.config.prx_duration_s
            elif g.op == "cz":
                per_shot += self.config.cz_duration_s
            else:
                per_shot += self.config.readout_duration_s
        return circuit.shots * per_shot

    def _evolve(self, unitaries, local, n, err_row=None, code_row=None) -> np.ndarray:
        state = zero_state(n)
        for j, g in enumerate(unitaries):
            if g.op == "prx":
                state = apply_prx(state, local[g.qubits[0]], *g.params)
            else:
                state = apply_cz(state, local[g.qubits[0]], local[g.qubits[1]])
            if err_row is not None and err_row[j]:
                if g.op == "prx":
                    state = apply_pauli(state, local[g.qubits[0]], int(code_row[j]) % 3)
                else:
                    state = apply_pauli_pair(state, local[g.qubits[0]],
                                             local[g.qubits[1]], int(code_row[j]))
        return state

    def execute(self, circuit: Circuit, rng: np.random.Generator | None = None, *,
                return_bitstrings: bool = False,
                return_iq: bool = False) -> ExecutionResult:
        rng = self._rng if rng is None else rng
        self._check_device_fit(circuit)
        meas = circuit.measured_qubits()
        if not meas:
            raise CircuitError("circuit has no measurements")
        used = sorted(circuit.used_qubits())
        local = {q: i for i, q in enumerate(used)}
        n = len(used)
        m = len(meas)
        shots = circuit.shots
        unitaries = [g for g in circuit.gates if g.op != "measure"]

        f_gate = np.array([
            self.f_1q(g.qubits[0]) if g.op == "prx" else self.f_cz(g.qubits)
            for g in unitaries
        ])
        f_read = np.array([self.f_ro(q) for q in meas])

        psi = self._evolve(unitaries, local, n)
        probs = measured_marginal(psi, [local[q] for q in meas])
        probs = probs / probs.sum()

        pre = np.empty((shots, m), dtype=np.uint8)
        if unitaries:
            err = rng.random((shots, len(unitaries))) < (1.0 - f_gate)[None, :]
            # one draw covers both gate arities: %3 for single-qubit Paulis
            # (15 % 3 == 0 keeps it uniform), raw value for the 15 pair Paulis
            codes = rng.integers(0, 15, size=(shots, len(unitaries)))
            dirty = err.any(axis=1)
        else:
            dirty = np.zeros(shots, dtype=bool)
        n_clean = int((~dirty).sum())
        if n_clean:
            drawn = rng.choice(probs.size, size=n_clean, p=probs)
            pre[~dirty] = indices_to_bits(drawn, m)
        for s in np.flatnonzero(dirty):
            state = self._evolve(unitaries, local, n, err[s], codes[s])
            p_s = measured_marginal(state, [local[q] for q in meas])
            k = rng.choice(p_s.size, p=p_s / p_s.sum())
            pre[s] = indices_to_bits(np.array([k]), m)[0]

        iq = None
        if return_iq:
            sep = 2.0 * ndtri(np.clip(f_read, 0.5 + 1e-12, 1.0 - 1e-15))
            centers = (2.0 * pre.astype(float) - 1.0) * (sep / 2.0)[None, :]
            noise = rng.standard_normal((shots, m, 2))
            i_vals = centers + noise[:, :, 0]
            post = (i_vals > 0.0).astype(np.uint8)
            iq = i_vals + 1j * noise[:, :, 1]
        else:
            flips = rng.random((shots, m)) < (1.0 - f_read)[None, :]
            post = pre ^ flips.astype(np.uint8)

        shifts = np.arange(m - 1, -1, -1, dtype=np.int64)
        packed = (post.astype(np.int64) << shifts[None, :]).sum(axis=1)
        values, counts = np.unique(packed, return_counts=True)
        histogram = {format(int(v), f"0{m}b"): int(c) for v, c in zip(values, counts)}

        return ExecutionResult(
            histogram=histogram,
            shots=shots,
            measured_qubits=meas,
            duration_s=self.estimate_duration(circuit),
            bitstrings=bits_to_strings(post) if return_bitstrings else None,
            iq=iq,
        )

    # -- benchmarking ------------------------------------------------------

    def ghz_benchmark(self, rng: np.random.Generator | None = None,
                      n: int | None = None,
                      shots: int = 500) -> tuple[float, ExecutionResult]:
        """GHZ chain along the snake path; returns the extreme-state population.

        For the ideal state that population is 1.0; decoherence and readout
        error pull it down, which makes it a cheap whole-device health number.
        """
        circuit = ghz_chain_circuit(self.topology, n, shots=shots)
        result = self.execute(circuit, rng)
        width = len(result.measured_qubits)
        pop = (result.histogram.get("0" * width, 0)
               + result.histogram.get("1" * width, 0)) / shots
        return pop, result
