"""Square-lattice qubit connectivity.

Qubits are indexed row-major on a rows x cols grid; couplers sit on every
nearest-neighbour edge.  The default device is the 4x5 / 20-qubit layout.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field


@dataclass(frozen=True)
class QpuTopology:
    rows: int = 4
    cols: int = 5

    def __post_init__(self):
        if self.rows < 1 or self.cols < 1:
            raise ValueError("grid must have at least one row and column")

    @property
    def n_qubits(self) -> int:
        return self.rows * self.cols

    def qubit_at(self, row: int, col: int) -> int:
        if not (0 <= row < self.rows and 0 <= col < self.cols):
            raise ValueError(f"({row},{col}) outside {self.rows}x{self.cols} grid")
        return row * self.cols + col

    def position(self, qubit: int) -> tuple[int, int]:
        if not (0 <= qubit < self.n_qubits):
            raise ValueError(f"qubit {qubit} out of range")
        return divmod(qubit, self.cols)

    def couplers(self) -> list[tuple[int, int]]:
        """All nearest-neighbour edges, each as an ordered (low, high) pair."""
        edges = []
        for r in range(self.rows):
            for c in range(self.cols):
                q = r * self.cols + c
                if c + 1 < self.cols:
                    edges.append((q, q + 1))
                if r + 1 < self.rows:
                    edges.append((q, q + self.cols))
        return sorted(edges)

    def is_coupled(self, a: int, b: int) -> bool:
        ra, ca = self.position(a)
        rb, cb = self.position(b)
        return abs(ra - rb) + abs(ca - cb) == 1

    def neighbours(self, qubit: int) -> list[int]:
        r, c = self.position(qubit)
        out = []
        if c > 0:
            out.append(qubit - 1)
        if c + 1 < self.cols:
            out.append(qubit + 1)
        if r > 0:
            out.append(qubit - self.cols)
        if r + 1 < self.rows:
            out.append(qubit + self.cols)
        return sorted(out)

    def snake_path(self) -> list[int]:
        """Hamiltonian path covering the grid row by row, alternating direction."""
        path = []
        for r in range(self.rows):
            cols = range(self.cols) if r % 2 == 0 else range(self.cols - 1, -1, -1)
            for c in cols:
                path.append(r * self.cols + c)
        return path

    def hop_distance(self, a: int, b: int) -> int:
        ra, ca = self.position(a)
        rb, cb = self.position(b)
        return abs(ra - rb) + abs(ca - cb)

    def shortest_path(self, a: int, b: int) -> list[int]:
        """One unweighted shortest path from a to b (BFS, lowest-index ties)."""
        self.position(a), self.position(b)
        if a == b:
            return [a]
        prev = {a: None}
        queue = deque([a])
        while queue:
            q = queue.popleft()
            for n in self.neighbours(q):
                if n not in prev:
                    prev[n] = q
                    if n == b:
                        queue.clear()
                        break
                    queue.append(n)
        path = [b]
        while prev[path[-1]] is not None:
            path.append(prev[path[-1]])
        return path[::-1]
