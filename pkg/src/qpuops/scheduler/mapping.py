"""Calibration-aware placement and routing onto the device grid.

The objective is the product of current fidelities over every gate the
routed circuit actually executes (prx, cz, and readout), which is the
usual crude estimate of whole-circuit success probability.  Small circuits
(at most three active qubits) get an exhaustive placement search; larger
ones a multi-start greedy construction refined by hill climbing.  Both
paths share one router, so their scores are directly comparable.

Routing inserts SWAPs along a two-key shortest path: fewest hops first,
then the best product of CZ fidelities along the way.  A SWAP costs three
CZs and twelve PRX pulses (three CNOTs, each one CZ wrapped in Hadamard
pairs on the target).

Measurements are emitted after all unitaries, in the original measurement
order, on wherever each logical qubit finally ended up.  That is exact
because measurement is terminal per logical qubit.
"""

from __future__ import annotations

import heapq
import itertools
import math
from dataclasses import dataclass

from ..twin.circuits import Circuit, CircuitError, Gate
from ..twin.topology import QpuTopology

_HALF_PI = math.pi / 2.0


@dataclass
class MappedCircuit:
    circuit: Circuit
    initial_layout: dict[int, int]  # logical -> physical, used logicals only
    final_layout: dict[int, int]
    score: float
    n_swaps: int

    def layouts_json(self) -> dict:
        return {
            "initial": {str(k): v for k, v in sorted(self.initial_layout.items())},
            "final": {str(k): v for k, v in sorted(self.final_layout.items())},
        }


def _fidelity_tables(snapshot) -> tuple[dict, dict, dict]:
    """Accept a DeviceSnapshot or a plain dict with the same three tables."""
    if hasattr(snapshot, "f_1q"):
        return dict(snapshot.f_1q), dict(snapshot.f_ro), dict(snapshot.f_cz)
    return dict(snapshot["f_1q"]), dict(snapshot["f_ro"]), dict(snapshot["f_cz"])


class _Router:
    def __init__(self, topology: QpuTopology, f_1q: dict, f_ro: dict, f_cz: dict,
                 placement: dict[int, int], path_cache: dict | None = None):
        self.topology = topology
        self.f_1q = f_1q
        self.f_ro = f_ro
        self.f_cz = f_cz
        self.l2p = dict(placement)
        self.p2l = {p: l for l, p in placement.items()}
        self.gates: list[Gate] = []
        self.score = 1.0
        self.n_swaps = 0
        # paths depend only on the CZ table, so one cache serves every
        # placement candidate scored against the same snapshot
        self._paths = path_cache if path_cache is not None else {}

    def _edge(self, a: int, b: int) -> tuple[int, int]:
        return (a, b) if a < b else (b, a)

    def emit_prx(self, p: int, theta: float, phi: float) -> None:
        self.gates.append(Gate("prx", (p,), (theta, phi)))
        self.score *= self.f_1q[p]

    def emit_cz(self, a: int, b: int) -> None:
        self.gates.append(Gate("cz", (a, b)))
        self.score *= self.f_cz[self._edge(a, b)]

    def emit_measure(self, p: int) -> None:
        self.gates.append(Gate("measure", (p,)))
        self.score *= self.f_ro[p]

    def emit_h(self, p: int) -> None:
        self.emit_prx(p, _HALF_PI, _HALF_PI)
        self.emit_prx(p, math.pi, 0.0)

    def emit_cnot(self, control: int, target: int) -> None:
        self.emit_h(target)
        self.emit_cz(control, target)
        self.emit_h(target)

    def emit_swap(self, a: int, b: int) -> None:
        self.emit_cnot(a, b)
        self.emit_cnot(b, a)
        self.emit_cnot(a, b)
        self.n_swaps += 1
        la, lb = self.p2l.get(a), self.p2l.get(b)
        if la is not None:
            self.l2p[la] = b
        if lb is not None:
            self.l2p[lb] = a
        self.p2l.pop(a, None)
        self.p2l.pop(b, None)
        if la is not None:
            self.p2l[b] = la
        if lb is not None:
            self.p2l[a] = lb

    def _best_path(self, src: int, dst: int) -> list[int]:
        """Fewest hops, then highest CZ-fidelity product; deterministic ties."""
        cached = self._paths.get((src, dst))
        if cached is not None:
            return cached
        inf = (math.inf, math.inf)
        best: dict[int, tuple[float, float]] = {src: (0, 0.0)}
        prev: dict[int, int] = {}
        heap: list[tuple[float, float, int]] = [(0, 0.0, src)]
        while heap:
            hops, cost, node = heapq.heappop(heap)
            if (hops, cost) > best.get(node, inf):
                continue
            if node == dst:
                break
            for nb in self.topology.neighbours(node):
                w = -math.log(max(self.f_cz[self._edge(node, nb)], 1e-300))
                cand = (hops + 1, cost + w)
                if cand < best.get(nb, inf):
                    best[nb] = cand
                    prev[nb] = node
                    heapq.heappush(heap, (cand[0], cand[1], nb))
        path = [dst]
        while path[-1] != src:
            path.append(prev[path[-1]])
        path.reverse()
        self._paths[(src, dst)] = path
        return path

    def route_cz(self, la: int, lb: int) -> None:
        pa, pb = self.l2p[la], self.l2p[lb]
        if not self.topology.is_coupled(pa, pb):
            path = self._best_path(pa, pb)
            # walk the first operand down the path until it sits next to pb
            for i in range(len(path) - 2):
                self.emit_swap(path[i], path[i + 1])
            pa = self.l2p[la]
        self.emit_cz(pa, self.l2p[lb])


def route_with_layout(circuit: Circuit, topology: QpuTopology, snapshot,
                      placement: dict[int, int],
                      path_cache: dict | None = None) -> MappedCircuit:
    """Route a logical circuit through a fixed initial placement."""
    f_1q, f_ro, f_cz = _fidelity_tables(snapshot)
    used = sorted(circuit.used_qubits())
    if set(placement) != set(used):
        raise CircuitError("placement must cover exactly the circuit's active qubits")
    if len(set(placement.values())) != len(placement):
        raise CircuitError("placement must be injective")
    router = _Router(topology, f_1q, f_ro, f_cz, placement, path_cache)
    initial = dict(router.l2p)
    deferred: list[int] = []
    for g in circuit.gates:
        if g.op == "prx":
            router.emit_prx(router.l2p[g.qubits[0]], *g.params)
        elif g.op == "cz":
            router.route_cz(g.qubits[0], g.qubits[1])
        else:
            deferred.append(g.qubits[0])
    final = dict(router.l2p)
    for logical in deferred:
        router.emit_measure(final[logical])
    mapped = Circuit(width=topology.n_qubits, gates=router.gates,
                     shots=circuit.shots, name=circuit.name)
    return MappedCircuit(circuit=mapped, initial_layout=initial,
                         final_layout=final, score=router.score,
                         n_swaps=router.n_swaps)


# -- placement search -----------------------------------------------------------


def _interaction_weights(circuit: Circuit) -> dict[tuple[int, int], int]:
    weights: dict[tuple[int, int], int] = {}
    for g in circuit.gates:
        if g.op == "cz":
            a, b = sorted(g.qubits)
            weights[(a, b)] = weights.get((a, b), 0) + 1
    return weights


def _gate_load(circuit: Circuit) -> dict[int, int]:
    load: dict[int, int] = {}
    for g in circuit.gates:
        for q in g.qubits:
            load[q] = load.get(q, 0) + 1
    return load


def _brute_force(circuit: Circuit, topology: QpuTopology, snapshot,
                 logicals: list[int]) -> MappedCircuit:
    best: MappedCircuit | None = None
    cache: dict = {}
    for phys in itertools.permutations(range(topology.n_qubits), len(logicals)):
        placement = dict(zip(logicals, phys))
        cand = route_with_layout(circuit, topology, snapshot, placement, cache)
        if best is None or cand.score > best.score:
            best = cand
    return best


def _complete_placement(topology: QpuTopology, weights, logicals, placement,
                        f_cz: dict) -> dict[int, int]:
    """Attach remaining logicals one at a time next to their placed partners."""
    remaining = [l for l in logicals if l not in placement]
    free = sorted(set(range(topology.n_qubits)) - set(placement.values()))
    attach: dict[int, int] = {}
    for (a, b), w in weights.items():
        attach[a] = attach.get(a, 0) + w
        attach[b] = attach.get(b, 0) + w
    while remaining:
        def placed_weight(l):
            return sum(w for (a, b), w in weights.items()
                       if (a == l and b in placement) or (b == l and a in placement))
        remaining.sort(key=lambda l: (-placed_weight(l), -attach.get(l, 0), l))
        l = remaining.pop(0)
        partners = [(placement[m], w) for (a, b), w in weights.items()
                    for m in ((b,) if a == l else (a,) if b == l else ())
                    if m in placement]

        def site_key(p):
            util = 0.0
            for pm, w in partners:
                if topology.is_coupled(p, pm):
                    e = (p, pm) if p < pm else (pm, p)
                    util += w * (1.0 + f_cz[e])
                else:
                    util -= w * topology.hop_distance(p, pm)
            return (-util, p)

        site = min(free, key=site_key)
        placement[l] = site
        free.remove(site)
    return placement


def _hill_climb(circuit, topology, snapshot, best: MappedCircuit,
                logicals: list[int], max_passes: int = 40,
                path_cache: dict | None = None) -> MappedCircuit:
    n = topology.n_qubits
    cache = path_cache if path_cache is not None else {}
    for _ in range(max_passes):
        layout = best.initial_layout
        occupied = set(layout.values())
        free = [p for p in range(n) if p not in occupied]
        improved = None
        for l in logicals:
            for p in free:
                cand_placement = dict(layout)
                cand_placement[l] = p
                cand = route_with_layout(circuit, topology, snapshot, cand_placement, cache)
                if cand.score > best.score and (improved is None or cand.score > improved.score):
                    improved = cand
        for la, lb in itertools.combinations(logicals, 2):
            cand_placement = dict(layout)
            cand_placement[la], cand_placement[lb] = layout[lb], layout[la]
            cand = route_with_layout(circuit, topology, snapshot, cand_placement, cache)
            if cand.score > best.score and (improved is None or cand.score > improved.score):
                improved = cand
        if improved is None:
            return best
        best = improved
    return best


def _greedy(circuit: Circuit, topology: QpuTopology, snapshot,
            logicals: list[int]) -> MappedCircuit:
    f_1q, f_ro, f_cz = _fidelity_tables(snapshot)
    weights = _interaction_weights(circuit)
    candidates: list[dict[int, int]] = []
    if weights:
        heavy = max(weights, key=lambda e: (weights[e], e))
        for (p, q) in topology.couplers():
            for seed in ((p, q), (q, p)):
                placement = {heavy[0]: seed[0], heavy[1]: seed[1]}
                candidates.append(
                    _complete_placement(topology, weights, logicals, placement, f_cz))
    else:
        # no two-qubit structure: put the busiest logicals on the best qubits
        load = _gate_load(circuit)
        order = sorted(logicals, key=lambda l: (-load.get(l, 0), l))
        sites = sorted(range(topology.n_qubits),
                       key=lambda p: (-(f_1q[p] * f_ro[p]), p))
        candidates.append(dict(zip(order, sites)))

    best: MappedCircuit | None = None
    cache: dict = {}
    for placement in candidates:
        cand = route_with_layout(circuit, topology, snapshot, placement, cache)
        if best is None or cand.score > best.score:
            best = cand
    return _hill_climb(circuit, topology, snapshot, best, logicals, path_cache=cache)


def map_circuit(circuit: Circuit, topology: QpuTopology, snapshot,
                max_bruteforce_width: int = 3) -> MappedCircuit:
    """Choose a placement and route; exhaustive for small circuits."""
    logicals = sorted(circuit.used_qubits())
    if not logicals:
        raise CircuitError("circuit touches no qubits")
    if len(logicals) > topology.n_qubits:
        raise CircuitError(
            f"{len(logicals)} active qubits exceed the {topology.n_qubits}-qubit device")
    if len(logicals) <= max_bruteforce_width:
        return _brute_force(circuit, topology, snapshot, logicals)
    return _greedy(circuit, topology, snapshot, logicals)
