"""Placement search and SWAP routing against brute-force references."""

import numpy as np
import pytest

import oracles
from qpuops.scheduler.mapping import MappedCircuit, map_circuit, route_with_layout
from qpuops.twin.circuits import Circuit, CircuitError
from qpuops.twin.topology import QpuTopology
from qpuops.twin.twin import QpuTwin, TwinConfig

TOPO = QpuTopology()


def _uniform_snapshot():
    return {
        "f_1q": {q: 0.999 for q in range(20)},
        "f_ro": {q: 0.98 for q in range(20)},
        "f_cz": {(a, b): 0.99 for a, b in TOPO.couplers()},
    }


def _random_snapshot(rng):
    return {
        "f_1q": {q: float(rng.uniform(0.97, 0.9995)) for q in range(20)},
        "f_ro": {q: float(rng.uniform(0.94, 0.99)) for q in range(20)},
        "f_cz": {(a, b): float(rng.uniform(0.95, 0.995)) for a, b in TOPO.couplers()},
    }


def _tables(snapshot):
    return snapshot["f_1q"], snapshot["f_ro"], snapshot["f_cz"]


def test_bell_on_uniform_snapshot_takes_first_lexicographic_placement():
    c = Circuit(width=2).h(0).h(1).cz(0, 1).h(1).measure_all()
    m = map_circuit(c, TOPO, _uniform_snapshot())
    assert m.initial_layout == {0: 0, 1: 1}
    assert m.n_swaps == 0


def test_adjacent_placement_needs_no_swaps():
    c = Circuit(width=2).cz(0, 1).measure_all()
    m = map_circuit(c, TOPO, _random_snapshot(np.random.default_rng(0)))
    assert m.n_swaps == 0
    assert TOPO.is_coupled(m.initial_layout[0], m.initial_layout[1])


def test_every_emitted_cz_is_on_a_coupler():
    rng = np.random.default_rng(4)
    snap = _random_snapshot(rng)
    c = Circuit(width=3).h(0).cz(0, 1).cz(1, 2).cz(0, 2).measure_all()
    m = map_circuit(c, TOPO, snap)
    for g in m.circuit.gates:
        if g.op == "cz":
            assert TOPO.is_coupled(*g.qubits)


def test_measures_are_terminal_and_on_final_layout():
    snap = _random_snapshot(np.random.default_rng(5))
    c = Circuit(width=3).h(0).cz(0, 1).measure(0).cz(1, 2).measure(1).measure(2)
    m = map_circuit(c, TOPO, snap)
    ops = [g.op for g in m.circuit.gates]
    first_measure = ops.index("measure")
    assert all(op == "measure" for op in ops[first_measure:])
    measured = [g.qubits[0] for g in m.circuit.gates if g.op == "measure"]
    assert measured == [m.final_layout[q] for q in (0, 1, 2)]


def test_score_matches_independent_product():
    rng = np.random.default_rng(6)
    snap = _random_snapshot(rng)
    f1, fr, fc = _tables(snap)
    c = Circuit(width=3).h(1).cz(0, 1).cz(0, 2).cz(1, 2).measure_all()
    m = map_circuit(c, TOPO, snap)
    assert m.score == pytest.approx(oracles.product_score(m.circuit, f1, fr, fc),
                                    rel=1e-12)


def test_brute_force_agrees_with_oracle_argmax():
    rng = np.random.default_rng(7)
    c = Circuit(width=2).h(0).h(1).cz(0, 1).h(1).measure_all()
    for trial in range(5):
        snap = _random_snapshot(rng)
        m = map_circuit(c, TOPO, snap)
        placement, score = oracles.exhaustive_best_placement(
            c, TOPO, snap, route_with_layout)
        assert m.initial_layout == placement
        assert m.score == pytest.approx(score, rel=1e-12)


def test_swap_costs_twelve_prx_and_three_cz():
    # pin both logicals two hops apart: one swap hop expected
    snap = _uniform_snapshot()
    c = Circuit(width=2).cz(0, 1).measure_all()
    m = route_with_layout(c, TOPO, snap, {0: 0, 1: 2})
    assert m.n_swaps == 1
    counts = m.circuit.counts()
    assert counts["prx"] == 12
    assert counts["cz"] == 1 + 3
    assert counts["measure"] == 2


def test_swap_updates_final_layout():
    snap = _uniform_snapshot()
    c = Circuit(width=2).cz(0, 1).measure_all()
    m = route_with_layout(c, TOPO, snap, {0: 0, 1: 2})
    # logical 0 walked from 0 to 1; logical 1 stayed
    assert m.final_layout == {0: 1, 1: 2}
    assert m.initial_layout == {0: 0, 1: 2}


def test_mapped_circuit_statevector_equivalent_after_swaps():
    snap = _random_snapshot(np.random.default_rng(8))
    c = Circuit(width=2).h(0).h(1).cz(0, 1).h(1).measure_all()
    m = route_with_layout(c, TOPO, snap, {0: 0, 1: 7})  # 3 hops apart
    assert m.n_swaps >= 1
    assert oracles.mapped_state_fidelity(c, m) >= 1.0 - 1e-9


def test_triangle_interaction_statevector_equivalent():
    snap = _random_snapshot(np.random.default_rng(9))
    c = (Circuit(width=3).h(0).h(1).cz(0, 1).h(1)
         .h(2).cz(1, 2).h(2).cz(0, 2).measure_all())
    m = map_circuit(c, TOPO, snap)
    # the grid is bipartite, so a triangle cannot embed without swaps
    assert m.n_swaps >= 1
    assert oracles.mapped_state_fidelity(c, m) >= 1.0 - 1e-9


def test_placement_must_cover_active_qubits():
    c = Circuit(width=2).cz(0, 1).measure_all()
    with pytest.raises(CircuitError, match="cover exactly"):
        route_with_layout(c, TOPO, _uniform_snapshot(), {0: 0})
    with pytest.raises(CircuitError, match="injective"):
        route_with_layout(c, TOPO, _uniform_snapshot(), {0: 3, 1: 3})


def test_map_circuit_rejects_empty_and_oversized():
    with pytest.raises(CircuitError, match="touches no qubits"):
        map_circuit(Circuit(width=1), TOPO, _uniform_snapshot())
    wide = Circuit(width=21, gates=[], shots=1)
    for q in range(21):
        wide.measure(q)
    with pytest.raises(CircuitError, match="exceed"):
        map_circuit(wide, TOPO, _uniform_snapshot())


def test_greedy_path_handles_wider_circuits():
    rng = np.random.default_rng(10)
    snap = _random_snapshot(rng)
    f1, fr, fc = _tables(snap)
    c = Circuit(width=6)
    for q in range(6):
        c.h(q)
    for a, b in [(0, 1), (1, 2), (2, 3), (3, 4), (4, 5)]:
        c.cz(a, b)
    c.measure_all()
    m = map_circuit(c, TOPO, snap)
    assert isinstance(m, MappedCircuit)
    assert set(m.initial_layout) == set(range(6))
    assert m.score == pytest.approx(oracles.product_score(m.circuit, f1, fr, fc),
                                    rel=1e-12)
    for g in m.circuit.gates:
        if g.op == "cz":
            assert TOPO.is_coupled(*g.qubits)


def test_mapping_is_deterministic():
    snap = _random_snapshot(np.random.default_rng(11))
    c = (Circuit(width=4).h(0).cz(0, 1).cz(1, 2).cz(2, 3).cz(0, 3)
         .measure_all())
    a = map_circuit(c, TOPO, snap)
    b = map_circuit(c, TOPO, snap)
    assert a.initial_layout == b.initial_layout
    assert a.score == b.score
    assert a.circuit.to_dict() == b.circuit.to_dict()


def test_mapped_circuit_runs_on_twin():
    from qpuops.telemetry import DeviceSnapshot

    twin = QpuTwin(TwinConfig(), seed=3)
    snap = DeviceSnapshot.from_twin(twin, 0.0)
    c = Circuit(width=2, shots=200).h(0).h(1).cz(0, 1).h(1).measure_all()
    m = map_circuit(c, TOPO, snap)
    res = twin.execute(m.circuit, np.random.default_rng(0))
    assert sum(res.histogram.values()) == 200
    assert len(res.measured_qubits) == 2
