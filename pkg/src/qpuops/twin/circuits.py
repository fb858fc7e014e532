"""Native-gate circuit container and JSON wire format.

Ops are the device natives only: prx(theta, phi), cz, measure.  Anything
else must be decomposed by the caller before it gets here.  Measurement is
terminal per qubit; bit i of a result string is the outcome of the i-th
measure gate in program order.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

from .topology import QpuTopology

NATIVE_OPS = ("prx", "cz", "measure")


class CircuitError(ValueError):
    pass


@dataclass(frozen=True)
class Gate:
    op: str
    qubits: tuple[int, ...]
    params: tuple[float, ...] = ()

    def to_dict(self) -> dict:
        d = {"op": self.op, "qubits": list(self.qubits)}
        if self.params:
            d["params"] = list(self.params)
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "Gate":
        return cls(
            op=str(d["op"]),
            qubits=tuple(int(q) for q in d["qubits"]),
            params=tuple(float(p) for p in d.get("params", ())),
        )


@dataclass
class Circuit:
    width: int
    gates: list[Gate] = field(default_factory=list)
    shots: int = 1024
    name: str = "circuit"

    def __post_init__(self):
        if self.width < 1:
            raise CircuitError("width must be positive")
        if self.shots < 1:
            raise CircuitError("shots must be positive")
        self.validate()

    def validate(self) -> None:
        measured: set[int] = set()
        for i, g in enumerate(self.gates):
            if g.op not in NATIVE_OPS:
                raise CircuitError(f"gate {i}: unknown op {g.op!r}")
            for q in g.qubits:
                if not (0 <= q < self.width):
                    raise CircuitError(f"gate {i}: qubit {q} outside width {self.width}")
                if q in measured:
                    raise CircuitError(f"gate {i}: qubit {q} used after measurement")
            if g.op == "prx":
                if len(g.qubits) != 1 or len(g.params) != 2:
                    raise CircuitError(f"gate {i}: prx takes one qubit and (theta, phi)")
            elif g.op == "cz":
                if len(g.qubits) != 2 or g.qubits[0] == g.qubits[1]:
                    raise CircuitError(f"gate {i}: cz takes two distinct qubits")
                if g.params:
                    raise CircuitError(f"gate {i}: cz takes no parameters")
            else:
                if len(g.qubits) != 1 or g.params:
                    raise CircuitError(f"gate {i}: measure takes one qubit, no parameters")
                measured.add(g.qubits[0])

    # -- builder helpers ------------------------------------------------

    def prx(self, qubit: int, theta: float, phi: float) -> "Circuit":
        self.gates.append(Gate("prx", (qubit,), (float(theta), float(phi))))
        self.validate()
        return self

    def h(self, qubit: int) -> "Circuit":
        """Hadamard up to global phase: PRX(pi/2, pi/2) then PRX(pi, 0)."""
        self.gates.append(Gate("prx", (qubit,), (math.pi / 2, math.pi / 2)))
        self.gates.append(Gate("prx", (qubit,), (math.pi, 0.0)))
        self.validate()
        return self

    def cz(self, a: int, b: int) -> "Circuit":
        self.gates.append(Gate("cz", (a, b)))
        self.validate()
        return self

    def measure(self, qubit: int) -> "Circuit":
        self.gates.append(Gate("measure", (qubit,)))
        self.validate()
        return self

    def measure_all(self, qubits=None) -> "Circuit":
        targets = sorted(self.used_qubits()) if qubits is None else list(qubits)
        for q in targets:
            self.measure(q)
        return self

    # -- introspection ---------------------------------------------------

    def used_qubits(self) -> set[int]:
        used: set[int] = set()
        for g in self.gates:
            used.update(g.qubits)
        return used

    def measured_qubits(self) -> list[int]:
        """Qubits in measure-gate order; index here is the result bit index."""
        return [g.qubits[0] for g in self.gates if g.op == "measure"]

    def counts(self) -> dict[str, int]:
        out = {op: 0 for op in NATIVE_OPS}
        for g in self.gates:
            out[g.op] += 1
        return out

    # -- wire format -----------------------------------------------------

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "width": self.width,
            "shots": self.shots,
            "gates": [g.to_dict() for g in self.gates],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    @classmethod
    def from_dict(cls, d: dict) -> "Circuit":
        try:
            gates = [Gate.from_dict(g) for g in d.get("gates", [])]
            return cls(
                width=int(d["width"]),
                gates=gates,
                shots=int(d.get("shots", 1024)),
                name=str(d.get("name", "circuit")),
            )
        except (KeyError, TypeError) as exc:
            raise CircuitError(f"malformed circuit document: {exc}") from exc

    @classmethod
    def from_json(cls, text: str) -> "Circuit":
        try:
            d = json.loads(text)
        except json.JSONDecodeError as exc:
            raise CircuitError(f"invalid JSON: {exc}") from exc
        return cls.from_dict(d)


def ghz_chain_circuit(topology: QpuTopology, n: int | None = None,
                      shots: int = 1024) -> Circuit:
    """GHZ state along the snake path: H on the head, then H-CZ-H per link.

    The H/CZ/H sandwich on each link is a CNOT in natives, so the state
    grows one qubit per link.  Measures every path qubit in path order.
    """
    path = topology.snake_path()
    if n is not None:
        if not (1 <= n <= len(path)):
            raise CircuitError(f"chain length {n} outside 1..{len(path)}")
        path = path[:n]
    circ = Circuit(width=topology.n_qubits, shots=shots, name=f"ghz{len(path)}")
    circ.h(path[0])
    for a, b in zip(path, path[1:]):
        circ.h(b)
        circ.cz(a, b)
        circ.h(b)
    for q in path:
        circ.measure(q)
    return circ
