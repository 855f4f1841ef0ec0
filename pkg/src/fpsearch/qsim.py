"""Dense statevector engine for generalized Grover sequences.

Qubit 0 is the least significant bit of a basis index.  Circuit-level
reflections use one ancilla stored as qubit n (the most significant bit), so
a state with ancilla has 2^(n+1) amplitudes laid out as [ancilla=0 block,
ancilla=1 block].

Two engines are provided: ``direct`` applies S_t and S_s as operators, and
``circuit`` realizes them with an oracle that flips the ancilla, z-rotations
on the ancilla, and a register-all-zeros conditional flip.  The multiply
controlled NOT is applied directly rather than decomposed into gates.
"""

from __future__ import annotations

import cmath
import math
import struct
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Literal

import numpy as np

from fpsearch.schedule import AMPLIFY, PhaseSchedule

MAX_QUBITS = 16
UNITARY_TOL = 1e-12

DUMP_MAGIC = b"FPQS"
DUMP_VERSION = 1
FLAG_ANCILLA = 1

Engine = Literal["direct", "circuit"]


class AncillaLeakError(RuntimeError):
    """The ancilla failed to return to |0> after a circuit reflection."""


@dataclass(frozen=True)
class ProblemInstance:
    """n-qubit search problem with a nonempty marked set.

    ``prep`` is the state-preparation unitary A as a dense 2^n x 2^n matrix;
    None means A = H^n (uniform superposition).
    """

    n: int
    marked: frozenset[int]
    prep: np.ndarray | None = field(default=None, compare=False)

    def __post_init__(self):
        if not 1 <= self.n <= MAX_QUBITS:
            raise ValueError(f"n must be in [1, {MAX_QUBITS}], got {self.n}")
        marked = frozenset(int(i) for i in self.marked)
        if not marked:
            raise ValueError("marked set must be nonempty")
        dim = 1 << self.n
        bad = [i for i in marked if not 0 <= i < dim]
        if bad:
            raise ValueError(f"marked indices out of range [0, {dim}): {sorted(bad)}")
        object.__setattr__(self, "marked", marked)
        if self.prep is not None:
            u = np.asarray(self.prep, dtype=complex)
            if u.shape != (dim, dim):
                raise ValueError(f"custom prep must be {dim}x{dim}, got {u.shape}")
            if not np.allclose(u.conj().T @ u, np.eye(dim), atol=UNITARY_TOL, rtol=0):
                raise ValueError("custom prep is not unitary")
            object.__setattr__(self, "prep", u)

    @classmethod
    def uniform(cls, n: int, marked: Iterable[int]) -> "ProblemInstance":
        return cls(n, frozenset(marked))

    @property
    def dim(self) -> int:
        return 1 << self.n

    @property
    def marked_index(self) -> np.ndarray:
        return np.fromiter(sorted(self.marked), dtype=np.intp)

    @property
    def lam(self) -> float:
        if self.prep is None:
            return len(self.marked) / self.dim
        s = prepare(self)
        return float(np.sum(np.abs(s[self.marked_index]) ** 2))


def _hadamard_all(state: np.ndarray, n: int) -> np.ndarray:
    out = np.array(state, dtype=complex)
    r = 1.0 / math.sqrt(2.0)
    for q in range(n):
        v = out.reshape(-1, 2, 1 << q)
        a, b = v[:, 0, :].copy(), v[:, 1, :].copy()
        v[:, 0, :] = (a + b) * r
        v[:, 1, :] = (a - b) * r
    return out


def apply_prep(state: np.ndarray, instance: ProblemInstance, inverse: bool = False) -> np.ndarray:
    """Apply A (or A^dagger) to a register state."""
    if instance.prep is None:
        return _hadamard_all(state, instance.n)
    u = instance.prep.conj().T if inverse else instance.prep
    return u @ state


def prepare(instance: ProblemInstance) -> np.ndarray:
    """|s> = A |0...0>."""
    if instance.prep is None:
        return np.full(instance.dim, 1.0 / math.sqrt(instance.dim), dtype=complex)
    return instance.prep[:, 0].copy()


def with_ancilla(state: np.ndarray) -> np.ndarray:
    return np.concatenate([state, np.zeros_like(state)])


def ancilla_leak(state_anc: np.ndarray) -> float:
    """Population on the ancilla = 1 branch."""
    half = state_anc.size // 2
    return float(np.sum(np.abs(state_anc[half:]) ** 2))


def direct_reflect_t(state: np.ndarray, beta: float, marked: Iterable[int]) -> np.ndarray:
    out = np.array(state, dtype=complex)
    idx = np.fromiter(marked, dtype=np.intp)
    out[idx] *= cmath.exp(1j * beta)
    return out


def direct_reflect_s(state: np.ndarray, alpha: float, instance: ProblemInstance) -> np.ndarray:
    s = prepare(instance)
    return state - (1.0 - cmath.exp(-1j * alpha)) * np.vdot(s, state) * s


def _flip_ancilla(state_anc: np.ndarray, cols: np.ndarray) -> None:
    v = state_anc.reshape(2, -1)
    v[0, cols], v[1, cols] = v[1, cols].copy(), v[0, cols].copy()


def _rz_ancilla(state_anc: np.ndarray, theta: float) -> None:
    v = state_anc.reshape(2, -1)
    v[0] *= cmath.exp(-0.5j * theta)
    v[1] *= cmath.exp(0.5j * theta)


def circuit_reflect_t(state_anc: np.ndarray, beta: float, marked: Iterable[int]) -> np.ndarray:
    """Oracle, R_0(beta) on the ancilla, oracle: e^{-i beta/2} S_t(beta) on the register."""
    out = np.array(state_anc, dtype=complex)
    cols = np.fromiter(marked, dtype=np.intp)
    _flip_ancilla(out, cols)
    _rz_ancilla(out, beta)
    _flip_ancilla(out, cols)
    return out


def circuit_reflect_s(state_anc: np.ndarray, alpha: float, instance: ProblemInstance) -> np.ndarray:
    """A^dagger, conditional ancilla flip on register |0...0>, R_0(-alpha), flip, A.

    Net effect on the register is e^{i alpha/2} S_s(alpha).
    """
    v = np.array(state_anc, dtype=complex).reshape(2, -1)
    for branch in range(2):
        v[branch] = apply_prep(v[branch], instance, inverse=True)
    out = v.reshape(-1)
    zero = np.array([0], dtype=np.intp)
    _flip_ancilla(out, zero)
    _rz_ancilla(out, -alpha)
    _flip_ancilla(out, zero)
    v = out.reshape(2, -1)
    for branch in range(2):
        v[branch] = apply_prep(v[branch], instance)
    return v.reshape(-1)


@dataclass
class RunResult:
    p: float  # population on the marked states (or off them, in avoid mode)
    state: np.ndarray  # final register state
    queries: int
    max_leak: float = 0.0


def run(schedule: PhaseSchedule, instance: ProblemInstance, engine: Engine = "direct",
        check: bool = True) -> RunResult:
    """Apply G(alpha_j, beta_j) = -S_s(alpha_j) S_t(beta_j), j = 1..l, to |s>.

    In amplify mode ``p`` is the marked population; in avoid mode it is the
    unmarked population.
    """
    marked = instance.marked_index
    psi = prepare(instance)
    leak = 0.0
    if engine == "direct":
        for alpha, beta in zip(schedule.alphas, schedule.betas):
            psi = -direct_reflect_s(direct_reflect_t(psi, beta, marked), alpha, instance)
    elif engine == "circuit":
        full = with_ancilla(psi)
        for alpha, beta in zip(schedule.alphas, schedule.betas):
            full = circuit_reflect_t(full, beta, marked)
            leak = max(leak, ancilla_leak(full))
            full = -circuit_reflect_s(full, alpha, instance)
            leak = max(leak, ancilla_leak(full))
            if check and leak > 1e-20:
                raise AncillaLeakError(f"ancilla population {leak:.3e} after reflection")
        psi = full[: instance.dim].copy()
    else:
        raise ValueError(f"unknown engine {engine!r}")
    p_marked = float(np.sum(np.abs(psi[marked]) ** 2))
    p = p_marked if schedule.mode == AMPLIFY else float(np.sum(np.abs(psi) ** 2)) - p_marked
    return RunResult(p=p, state=psi, queries=schedule.queries, max_leak=leak)


def state_fidelity(a: np.ndarray, b: np.ndarray) -> float:
    """|<a|b>| for normalized states; insensitive to global phase."""
    return float(abs(np.vdot(a, b)))


def dump_state(path: str | Path, state: np.ndarray, n: int, ancilla: bool = False) -> None:
    """Write ``state`` as: b"FPQS", u32 version, u32 n, u32 flags, then
    little-endian interleaved (re, im) float64 pairs."""
    flags = FLAG_ANCILLA if ancilla else 0
    expected = 1 << (n + (1 if ancilla else 0))
    if state.size != expected:
        raise ValueError(f"state has {state.size} amplitudes, expected {expected}")
    with open(path, "wb") as fh:
        fh.write(DUMP_MAGIC + struct.pack("<III", DUMP_VERSION, n, flags))
        fh.write(np.asarray(state, dtype="<c16").tobytes())


def load_state(path: str | Path) -> tuple[np.ndarray, int, int]:
    """Read a dump written by :func:`dump_state`; returns (state, n, flags)."""
    data = Path(path).read_bytes()
    if data[:4] != DUMP_MAGIC:
        raise ValueError("not a statevector dump (bad magic)")
    version, n, flags = struct.unpack("<III", data[4:16])
    if version != DUMP_VERSION:
        raise ValueError(f"unsupported dump version {version}")
    state = np.frombuffer(data[16:], dtype="<c16").astype(complex)
    expected = 1 << (n + (1 if flags & FLAG_ANCILLA else 0))
    if state.size != expected:
        raise ValueError(f"dump holds {state.size} amplitudes, expected {expected}")
    return state, n, flags
