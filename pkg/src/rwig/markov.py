"""Walker policies, state-vector propagation and steady states.

All numeric work uses 64-bit floats.  Constructors reject bad input
(rows not summing to 1, negative probabilities) instead of silently
repairing it; the construction tolerance on row sums is 1e-12.
"""

from __future__ import annotations

import csv
import io
import json
from typing import Iterable, Sequence

import numpy as np

ROW_SUM_TOL = 1e-12


class SteadyStateError(RuntimeError):
    """Raised when the iteration does not reach a stationary vector."""

    def __init__(self, message: str, residual: float):
        super().__init__(f"{message} (residual {residual:.3e})")
        self.residual = residual


def _readonly(values, dtype=float) -> np.ndarray:
    arr = np.array(values, dtype=dtype)
    arr.setflags(write=False)
    return arr


class TransitionMatrix:
    """A row-stochastic N x N walker policy."""

    def __init__(self, rows):
        entries = _readonly(rows)
        if entries.ndim != 2 or entries.shape[0] != entries.shape[1]:
            raise ValueError("transition matrix must be square")
        if entries.shape[0] < 1:
            raise ValueError("transition matrix must be at least 1x1")
        if np.any(entries < 0.0) or np.any(entries > 1.0 + ROW_SUM_TOL):
            raise ValueError("transition probabilities must lie in [0, 1]")
        row_err = np.abs(entries.sum(axis=1) - 1.0).max()
        if row_err > ROW_SUM_TOL:
            raise ValueError(
                f"rows must sum to 1 within {ROW_SUM_TOL:g} (worst error {row_err:.3e})"
            )
        self.entries = entries

    @property
    def n_states(self) -> int:
        return self.entries.shape[0]

    def __eq__(self, other) -> bool:
        return isinstance(other, TransitionMatrix) and np.array_equal(
            self.entries, other.entries
        )

    def __hash__(self):
        return hash(self.entries.tobytes())

    def __repr__(self) -> str:
        return f"TransitionMatrix(n_states={self.n_states})"


class StateVector:
    """A length-N probability row vector."""

    def __init__(self, probs):
        arr = _readonly(probs)
        if arr.ndim != 1 or arr.shape[0] < 1:
            raise ValueError("state vector must be a non-empty 1-D array")
        if np.any(arr < 0.0):
            raise ValueError("state probabilities must be non-negative")
        if abs(arr.sum() - 1.0) > ROW_SUM_TOL:
            raise ValueError(
                f"state vector must sum to 1 within {ROW_SUM_TOL:g} (got {arr.sum()!r})"
            )
        self.probs = arr

    @classmethod
    def _wrap(cls, arr: np.ndarray) -> "StateVector":
        # Internal: trusted result of propagation; skips the strict sum check
        # (repeated products drift by a few ulp per step).
        obj = cls.__new__(cls)
        obj.probs = _readonly(arr)
        return obj

    @classmethod
    def basis(cls, n: int, i: int) -> "StateVector":
        """Point mass on state i (0-based)."""
        v = np.zeros(n)
        v[i] = 1.0
        return cls(v)

    @classmethod
    def uniform(cls, n: int) -> "StateVector":
        return cls(np.full(n, 1.0 / n))

    @property
    def n_states(self) -> int:
        return self.probs.shape[0]

    def __eq__(self, other) -> bool:
        return isinstance(other, StateVector) and np.array_equal(self.probs, other.probs)

    def __hash__(self):
        return hash(self.probs.tobytes())

    def __repr__(self) -> str:
        return f"StateVector({self.probs.tolist()})"


def uniform_policy(adjacency) -> TransitionMatrix:
    """Degree-normalized policy on an undirected 0/1 adjacency matrix.

    Row i is the adjacency row divided by the degree of node i, so every
    neighbouring state is reached with equal probability.
    """
    adj = np.asarray(adjacency, dtype=float)
    if adj.ndim != 2 or adj.shape[0] != adj.shape[1]:
        raise ValueError("adjacency must be square")
    if not np.array_equal(adj, adj.T):
        raise ValueError("adjacency must be symmetric")
    if not np.all(np.isin(adj, (0.0, 1.0))):
        raise ValueError("adjacency entries must be 0 or 1")
    degrees = adj.sum(axis=1)
    if np.any(degrees == 0):
        dead = int(np.flatnonzero(degrees == 0)[0])
        raise ValueError(f"zero degree row {dead}: isolated node has no policy")
    return TransitionMatrix(adj / degrees[:, None])


def validate_policy(policy: TransitionMatrix, adjacency) -> list[tuple[int, int]]:
    """Check that a policy only moves along links of the underlying graph.

    Self-transitions are always permitted (staying put needs no physical
    path).  Returns the list of off-support (i, j) pairs; empty means ok.
    """
    adj = np.asarray(adjacency, dtype=float)
    if adj.shape != policy.entries.shape:
        raise ValueError(
            f"dimension mismatch: adjacency {adj.shape} vs policy "
            f"{policy.entries.shape}"
        )
    allowed = (adj != 0) | np.eye(policy.n_states, dtype=bool)
    bad = (policy.entries > 0.0) & ~allowed
    return [(int(i), int(j)) for i, j in zip(*np.nonzero(bad))]


def propagate(s0: StateVector, policy: TransitionMatrix, k: int) -> StateVector:
    """Distribution after k steps, s0 applied to the policy k times.

    Uses iterated vector-matrix products; the k-th matrix power is never
    materialized.
    """
    if k < 0:
        raise ValueError("k must be non-negative")
    if s0.n_states != policy.n_states:
        raise ValueError("state vector and policy dimensions differ")
    if k == 0:
        return s0
    probs = s0.probs
    for _ in range(k):
        probs = probs @ policy.entries
    return StateVector._wrap(probs)


def steady_state(
    policy: TransitionMatrix, tol: float = 1e-12, max_iters: int = 1_000_000
) -> StateVector:
    """Stationary vector of the policy, found by damped power iteration.

    Starts from the uniform vector and iterates the half-lazy update
    s <- (s + sP) / 2, whose fixed points coincide with those of P but
    which also converges on periodic chains.  Convergence is declared on
    the true residual ||sP - s||_inf <= tol and the result is renormalized
    to sum exactly 1.  Raises SteadyStateError, carrying the last residual,
    if max_iters steps do not reach tol.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    if max_iters < 1:
        raise ValueError("max_iters must be positive")
    n = policy.n_states
    s = np.full(n, 1.0 / n)
    residual = np.inf
    for _ in range(max_iters):
        stepped = s @ policy.entries
        residual = float(np.abs(stepped - s).max())
        if residual <= tol:
            return StateVector(s / s.sum())
        s = 0.5 * (s + stepped)
    raise SteadyStateError("no steady state reached", residual)


class WalkerEnsemble:
    """An ordered collection of walkers sharing one underlying state space.

    Each walker is a (label, initial StateVector, TransitionMatrix) triple;
    list order defines the canonical walker indexing.
    """

    def __init__(self, walkers: Sequence[tuple[str, StateVector, TransitionMatrix]]):
        walkers = tuple(walkers)
        if not walkers:
            raise ValueError("ensemble needs at least one walker")
        n = walkers[0][1].n_states
        labels = []
        for label, s0, policy in walkers:
            if s0.n_states != n or policy.n_states != n:
                raise ValueError("all walkers must share the same number of states")
            labels.append(label)
        if len(set(labels)) != len(labels):
            raise ValueError("walker labels must be distinct")
        self.walkers = walkers
        self.n_states = n
        self.labels = tuple(labels)
        self.index = {label: i for i, label in enumerate(labels)}

    @classmethod
    def common_policy(
        cls,
        labels: Iterable[str],
        initial: Sequence[StateVector],
        policy: TransitionMatrix,
    ) -> "WalkerEnsemble":
        """All walkers follow the same policy (possibly distinct starts)."""
        return cls([(l, s0, policy) for l, s0 in zip(labels, initial)])

    @property
    def n_walkers(self) -> int:
        return len(self.walkers)

    def state_matrix(self, k: int) -> np.ndarray:
        """M x N matrix whose row j is walker j's distribution after k steps."""
        return np.stack(
            [propagate(s0, policy, k).probs for _, s0, policy in self.walkers]
        )

    def __repr__(self) -> str:
        return f"WalkerEnsemble(M={self.n_walkers}, N={self.n_states})"


# --- file formats -----------------------------------------------------------
#
# Matrices: JSON {"n": N, "rows": [[...], ...]} or CSV with one row per line.
# Vectors:  JSON {"probs": [...]} or a single CSV line.
# Ensembles: JSON {"n_states": N, "walkers": [{"label", "s0", "policy"}...],
#            "adjacency": [[...]] (optional, enforces the support rule)}.


def matrix_from_json(obj: dict) -> TransitionMatrix:
    rows = obj["rows"]
    if len(rows) != obj["n"]:
        raise ValueError(f'matrix declares n={obj["n"]} but has {len(rows)} rows')
    return TransitionMatrix(rows)


def matrix_to_json(matrix: TransitionMatrix) -> dict:
    return {"n": matrix.n_states, "rows": matrix.entries.tolist()}


def vector_from_json(obj: dict) -> StateVector:
    return StateVector(obj["probs"])


def vector_to_json(vector: StateVector) -> dict:
    return {"probs": vector.probs.tolist()}


def matrix_from_csv(text: str) -> TransitionMatrix:
    rows = [[float(x) for x in row] for row in csv.reader(io.StringIO(text)) if row]
    return TransitionMatrix(rows)


def vector_from_csv(text: str) -> StateVector:
    rows = [row for row in csv.reader(io.StringIO(text)) if row]
    if len(rows) != 1:
        raise ValueError("vector CSV must contain exactly one row")
    return StateVector([float(x) for x in rows[0]])


def ensemble_from_json(obj: dict) -> WalkerEnsemble:
    """Parse an ensemble document, enforcing the adjacency support rule."""
    n = obj["n_states"]
    walkers = []
    for w in obj["walkers"]:
        s0 = StateVector(w["s0"])
        policy = TransitionMatrix(w["policy"])
        if s0.n_states != n or policy.n_states != n:
            raise ValueError(f'walker {w["label"]!r} does not match n_states={n}')
        walkers.append((w["label"], s0, policy))
    ensemble = WalkerEnsemble(walkers)
    if "adjacency" in obj:
        for label, _, policy in ensemble.walkers:
            bad = validate_policy(policy, obj["adjacency"])
            if bad:
                raise ValueError(
                    f"policy of walker {label!r} moves off the underlying graph "
                    f"at {bad}"
                )
    return ensemble


def ensemble_to_json(ensemble: WalkerEnsemble) -> dict:
    return {
        "n_states": ensemble.n_states,
        "walkers": [
            {"label": label, "s0": s0.probs.tolist(), "policy": policy.entries.tolist()}
            for label, s0, policy in ensemble.walkers
        ],
    }


def load_matrix(path: str) -> TransitionMatrix:
    with open(path, "r", encoding="utf-8") as fh:
        text = fh.read()
    if path.endswith(".json"):
        return matrix_from_json(json.loads(text))
    return matrix_from_csv(text)


def load_vector(path: str) -> StateVector:
    with open(path, "r", encoding="utf-8") as fh:
        text = fh.read()
    if path.endswith(".json"):
        return vector_from_json(json.loads(text))
    return vector_from_csv(text)
