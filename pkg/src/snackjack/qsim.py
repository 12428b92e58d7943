"""Sparse state-vector simulator for the 37-qubit game register.

States live in a dict keyed by basis index; snackjack circuits touch
at most a few thousand of the 2^37 basis states, so gates are sparse
passes over the support.  Amplitudes below PRUNE_EPS are dropped, the
norm is checked after every gate, and the support is capped as a
runaway guard.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from math import fsum, sqrt
from typing import Callable, Iterable, Sequence, Union

import numpy as np

PRUNE_EPS = 1e-14
NORM_TOL = 1e-10
MAX_SUPPORT = 4096
UNITARY_ATOL = 1e-10


class SimulationError(RuntimeError):
    """The state violated an invariant (norm, support, involution)."""


class ConfigurationError(ValueError):
    """A gate or layout was built from inconsistent pieces."""


@dataclass(frozen=True)
class Field:
    """A named contiguous run of qubits inside the register."""

    name: str
    offset: int
    width: int

    @property
    def mask(self) -> int:
        return ((1 << self.width) - 1) << self.offset

    def extract(self, key: int) -> int:
        return (key >> self.offset) & ((1 << self.width) - 1)

    def insert(self, key: int, value: int) -> int:
        return (key & ~self.mask) | ((value << self.offset) & self.mask)

    @property
    def bits(self) -> tuple[int, ...]:
        return tuple(range(self.offset, self.offset + self.width))


class RegisterLayout:
    """Disjoint named fields covering an n-qubit register."""

    def __init__(self, fields: Sequence[Field]):
        seen = 0
        for f in fields:
            if f.width <= 0:
                raise ConfigurationError(f"field {f.name} has width {f.width}")
            if seen & f.mask:
                raise ConfigurationError(f"field {f.name} overlaps another field")
            seen |= f.mask
        self.fields = tuple(fields)
        self._by_name = {f.name: f for f in fields}
        self.n_qubits = max(f.offset + f.width for f in fields)

    def field(self, name: str) -> Field:
        try:
            return self._by_name[name]
        except KeyError:
            raise ConfigurationError(f"no field named {name!r}") from None


#: Register order: deck, its copy, player hand, draw control, player
#: strategy bit, dealer hand, dealer strategy bit.
GAME_LAYOUT = RegisterLayout([
    Field("deck", 0, 8),
    Field("deck_copy", 8, 8),
    Field("p_hand", 16, 8),
    Field("control", 24, 3),
    Field("p_strategy", 27, 1),
    Field("d_hand", 28, 8),
    Field("d_strategy", 36, 1),
])


class SparseState:
    """A normalized sparse amplitude map over basis indices."""

    __slots__ = ("amps", "n_qubits")

    def __init__(self, amps: dict[int, complex], n_qubits: int):
        self.amps = amps
        self.n_qubits = n_qubits

    @classmethod
    def basis(cls, key: int, n_qubits: int) -> "SparseState":
        if not 0 <= key < (1 << n_qubits):
            raise ConfigurationError(f"basis key {key:#x} outside {n_qubits} qubits")
        return cls({key: 1.0 + 0.0j}, n_qubits)

    def norm_sq(self) -> float:
        return sum((a * a.conjugate()).real for a in self.amps.values())

    @property
    def support(self) -> int:
        return len(self.amps)

    def items(self) -> Iterable[tuple[int, complex]]:
        return self.amps.items()

    def copy(self) -> "SparseState":
        return SparseState(dict(self.amps), self.n_qubits)


def _check_unitary(matrix: np.ndarray, dim: int) -> np.ndarray:
    m = np.asarray(matrix, dtype=complex)
    if m.shape != (dim, dim):
        raise ConfigurationError(f"expected a {dim}x{dim} matrix, got {m.shape}")
    if not np.allclose(m @ m.conj().T, np.eye(dim), atol=UNITARY_ATOL):
        raise ConfigurationError("matrix is not unitary")
    return m


@dataclass(frozen=True, eq=False)
class OneQubit:
    """A 2x2 unitary on one target qubit."""

    matrix: np.ndarray
    target: int

    def __post_init__(self) -> None:
        object.__setattr__(self, "matrix", _check_unitary(self.matrix, 2))


@dataclass(frozen=True, eq=False)
class TwoQubit:
    """A 4x4 unitary; targets are (high bit, low bit) of the matrix index."""

    matrix: np.ndarray
    targets: tuple[int, int]

    def __post_init__(self) -> None:
        object.__setattr__(self, "matrix", _check_unitary(self.matrix, 4))
        if self.targets[0] == self.targets[1]:
            raise ConfigurationError("two-qubit gate needs distinct targets")


@dataclass(frozen=True)
class PredicatedPermutation:
    """Classical reversible update: where the predicate holds, swap the
    given bit pairs and flip the given bits.

    The predicate must not depend on any bit it moves, which makes the
    operation an involution; `apply` verifies this on every basis state
    it actually touches.
    """

    predicate: Callable[[int], bool]
    swaps: tuple[tuple[int, int], ...] = ()
    flips: tuple[int, ...] = ()

    def permute(self, key: int) -> int:
        for a, b in self.swaps:
            if ((key >> a) ^ (key >> b)) & 1:
                key ^= (1 << a) | (1 << b)
        for f in self.flips:
            key ^= 1 << f
        return key


Gate = Union[OneQubit, TwoQubit, PredicatedPermutation]


def _finalize(amps: dict[int, complex], n_qubits: int, exact_norm: bool) -> SparseState:
    out = {k: a for k, a in amps.items() if abs(a) > PRUNE_EPS}
    state = SparseState(out, n_qubits)
    if not exact_norm:
        n = state.norm_sq()
        if abs(n - 1.0) > NORM_TOL:
            raise SimulationError(f"norm drifted to {n}")
    if state.support > MAX_SUPPORT:
        raise SimulationError(f"support {state.support} exceeds {MAX_SUPPORT}")
    return state


def apply(state: SparseState, gate: Gate) -> SparseState:
    """Apply one gate and return the new state."""
    if isinstance(gate, OneQubit):
        m = gate.matrix
        t = gate.target
        out: dict[int, complex] = {}
        for key, amp in state.amps.items():
            b = (key >> t) & 1
            base = key & ~(1 << t)
            for b2 in (0, 1):
                coeff = m[b2, b]
                if coeff != 0:
                    k2 = base | (b2 << t)
                    out[k2] = out.get(k2, 0j) + coeff * amp
        return _finalize(out, state.n_qubits, exact_norm=False)

    if isinstance(gate, TwoQubit):
        m = gate.matrix
        hi, lo = gate.targets
        out = {}
        for key, amp in state.amps.items():
            b = (((key >> hi) & 1) << 1) | ((key >> lo) & 1)
            base = key & ~((1 << hi) | (1 << lo))
            for b2 in range(4):
                coeff = m[b2, b]
                if coeff != 0:
                    k2 = base | ((b2 >> 1) << hi) | ((b2 & 1) << lo)
                    out[k2] = out.get(k2, 0j) + coeff * amp
        return _finalize(out, state.n_qubits, exact_norm=False)

    if isinstance(gate, PredicatedPermutation):
        out = {}
        for key, amp in state.amps.items():
            if gate.predicate(key):
                k2 = gate.permute(key)
                if not gate.predicate(k2):
                    raise SimulationError(
                        "permutation predicate depends on a moved bit"
                    )
            else:
                k2 = key
            if k2 in out:
                raise SimulationError("permutation is not injective on the support")
            out[k2] = amp
        return _finalize(out, state.n_qubits, exact_norm=True)

    raise ConfigurationError(f"unknown gate type: {type(gate).__name__}")


def _bits_of(which: Union[Field, Sequence[int]]) -> tuple[int, ...]:
    if isinstance(which, Field):
        return which.bits
    return tuple(which)


def _value_of(key: int, bits: tuple[int, ...]) -> int:
    v = 0
    for i, b in enumerate(bits):
        v |= ((key >> b) & 1) << i
    return v


def expectation_probe(state: SparseState, which: Union[Field, Sequence[int]]) -> dict[int, float]:
    """Exact outcome distribution of measuring ``which``, without collapse.

    Bucket weights and the total use correctly-rounded summation and
    are normalized by the state's weight, so a uniform branch
    structure probes to exact dyadic fractions.
    """
    bits = _bits_of(which)
    buckets: dict[int, list[float]] = {}
    for key, amp in state.amps.items():
        v = _value_of(key, bits)
        buckets.setdefault(v, []).append((amp * amp.conjugate()).real)
    raw = {v: fsum(ps) for v, ps in buckets.items()}
    total = fsum(raw.values())
    if total <= 0.0:
        raise SimulationError("probe on an empty state")
    return {v: p / total for v, p in sorted(raw.items())}


def measure(
    state: SparseState,
    which: Union[Field, Sequence[int]],
    rng: random.Random,
) -> tuple[int, SparseState]:
    """Projectively measure ``which``; returns (outcome, collapsed state)."""
    bits = _bits_of(which)
    probs = expectation_probe(state, bits)
    r = rng.random()
    acc = 0.0
    outcome = next(iter(probs))
    for v, p in probs.items():
        acc += p
        outcome = v
        if r < acc:
            break
    kept = {
        key: amp
        for key, amp in state.amps.items()
        if _value_of(key, bits) == outcome
    }
    weight = sum((a * a.conjugate()).real for a in kept.values())
    if weight <= 0.0:
        raise SimulationError("measurement collapsed to an empty branch")
    scale = 1.0 / sqrt(weight)
    collapsed = {k: a * scale for k, a in kept.items()}
    return outcome, _finalize(collapsed, state.n_qubits, exact_norm=False)
