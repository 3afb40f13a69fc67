"""Partitioned Pauli-string Hamiltonians and their dense realizations.

A Hamiltonian is stored as a small number of labeled term groups, each a
weighted sum of Pauli strings. Each group is meant to be exponentiated
directly (fast-forwardable), so the partition is the unit every product
formula works with.

Conventions fixed here and shared by all modules:
  * qubit 0 is the leftmost tensor factor,
  * lattices use open boundary conditions,
  * dense matrices are plain complex ndarrays.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass
from functools import lru_cache, reduce
from pathlib import Path

import numpy as np

MAX_QUBITS = 14

PAULI_MATRICES = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex),
    "Y": np.array([[0.0, -1.0j], [1.0j, 0.0]], dtype=complex),
    "Z": np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex),
}


class QubitCountError(ValueError):
    """Dense realization would exceed the configured qubit maximum."""


@dataclass(frozen=True)
class PauliString:
    """One weighted Pauli string; ``letters[k]`` acts on qubit k."""

    letters: str
    weight: float

    def __post_init__(self):
        if not self.letters:
            raise ValueError("empty Pauli string")
        bad = set(self.letters) - set(PAULI_MATRICES)
        if bad:
            raise ValueError(f"invalid Pauli letters {sorted(bad)}")
        if not np.isfinite(self.weight):
            raise ValueError("Pauli weight must be finite")

    @property
    def qubit_count(self) -> int:
        return len(self.letters)


@dataclass(frozen=True)
class HamTerm:
    """A labeled fast-forwardable group: a real combination of Pauli strings."""

    label: str
    strings: tuple[PauliString, ...]

    def __post_init__(self):
        if not self.strings:
            raise ValueError(f"term {self.label!r} has no strings")
        counts = {s.qubit_count for s in self.strings}
        if len(counts) != 1:
            raise ValueError(f"term {self.label!r} mixes qubit counts {sorted(counts)}")

    @property
    def qubit_count(self) -> int:
        return self.strings[0].qubit_count


@dataclass(frozen=True)
class PartitionedHamiltonian:
    """H = sum of labeled terms, all on the same qubit register."""

    qubit_count: int
    terms: tuple[HamTerm, ...]

    def __post_init__(self):
        if not self.terms:
            raise ValueError("need at least one term")
        labels = [t.label for t in self.terms]
        if len(set(labels)) != len(labels):
            raise ValueError(f"duplicate term labels in {labels}")
        for t in self.terms:
            if t.qubit_count != self.qubit_count:
                raise ValueError(
                    f"term {t.label!r} acts on {t.qubit_count} qubits, expected {self.qubit_count}"
                )

    @property
    def labels(self) -> tuple[str, ...]:
        return tuple(t.label for t in self.terms)

    @property
    def dim(self) -> int:
        return 2**self.qubit_count

    def term(self, label: str) -> HamTerm:
        for t in self.terms:
            if t.label == label:
                return t
        raise KeyError(f"no term labeled {label!r}")


def pauli_dense(p: PauliString, max_qubits: int = MAX_QUBITS) -> np.ndarray:
    """Dense matrix of a weighted Pauli string (qubit 0 leftmost in the kron chain)."""
    if p.qubit_count > max_qubits:
        raise QubitCountError(f"{p.qubit_count} qubits exceeds the maximum of {max_qubits}")
    factors = [PAULI_MATRICES[ch] for ch in p.letters]
    return p.weight * reduce(np.kron, factors)


@lru_cache(maxsize=16)
def term_dense(t: HamTerm) -> np.ndarray:
    """Dense Hermitian matrix of a term group. Cached; do not mutate the result."""
    dim = 2**t.qubit_count
    acc = np.zeros((dim, dim), dtype=complex)
    for s in t.strings:
        acc += pauli_dense(s)
    dev = np.abs(acc - acc.conj().T).max()
    if dev >= 1e-12:
        raise ValueError(f"term {t.label!r} is not Hermitian (max deviation {dev:.2e})")
    acc.flags.writeable = False
    return acc


@lru_cache(maxsize=16)
def total_dense(h: PartitionedHamiltonian) -> np.ndarray:
    """Dense matrix of the full Hamiltonian (sum over term groups)."""
    acc = sum(term_dense(t) for t in h.terms)
    acc.flags.writeable = False
    return acc


@lru_cache(maxsize=16)
def term_eigensystem(t: HamTerm) -> tuple[np.ndarray, np.ndarray]:
    """Eigenvalues and eigenvectors of a term, cached for fast stage exponentials."""
    w, v = np.linalg.eigh(term_dense(t))
    w.flags.writeable = False
    v.flags.writeable = False
    return w, v


def term_spectral_norm(t: HamTerm) -> float:
    w, _ = term_eigensystem(t)
    return float(np.abs(w).max())


def build_xy_lattice(rows: int, cols: int, jx: float, jy: float) -> PartitionedHamiltonian:
    """XY model on an open-boundary rows x cols grid, split into the two
    interaction groups A = -(jx/2) sum XX and B = -(jy/2) sum YY over
    nearest-neighbor edges. Qubit index is row * cols + col.
    """
    if rows < 1 or cols < 1:
        raise ValueError("grid dimensions must be positive")
    n = rows * cols
    if n > MAX_QUBITS:
        raise QubitCountError(f"{rows}x{cols} grid needs {n} qubits, maximum is {MAX_QUBITS}")
    edges = []
    for r in range(rows):
        for c in range(cols):
            if c + 1 < cols:
                edges.append((r * cols + c, r * cols + c + 1))
            if r + 1 < rows:
                edges.append((r * cols + c, (r + 1) * cols + c))

    def edge_strings(letter: str, coupling: float) -> tuple[PauliString, ...]:
        out = []
        for i, j in edges:
            chars = ["I"] * n
            chars[i] = letter
            chars[j] = letter
            out.append(PauliString("".join(chars), -coupling / 2.0))
        return tuple(out)

    return PartitionedHamiltonian(
        qubit_count=n,
        terms=(
            HamTerm("A", edge_strings("X", jx)),
            HamTerm("B", edge_strings("Y", jy)),
        ),
    )


def build_random_two_term(
    n_qubits: int, strings_per_term: int, seed: int
) -> PartitionedHamiltonian:
    """Two-term Hamiltonian of random Pauli strings, deterministic in the seed.

    Each string gets a support size uniform in 1..n_qubits, support qubits
    drawn without replacement, letters uniform over {X, Y, Z} on the support,
    and a weight uniform in [-1, 1].
    """
    if n_qubits < 1 or strings_per_term < 1:
        raise ValueError("n_qubits and strings_per_term must be positive")
    if n_qubits > MAX_QUBITS:
        raise QubitCountError(f"{n_qubits} qubits exceeds the maximum of {MAX_QUBITS}")
    rng = np.random.default_rng(seed)
    terms = []
    for label in ("A", "B"):
        strings = []
        for _ in range(strings_per_term):
            size = int(rng.integers(1, n_qubits + 1))
            support = rng.choice(n_qubits, size=size, replace=False)
            chars = ["I"] * n_qubits
            for q in support:
                chars[q] = "XYZ"[rng.integers(0, 3)]
            strings.append(PauliString("".join(chars), float(rng.uniform(-1.0, 1.0))))
        terms.append(HamTerm(label, tuple(strings)))
    return PartitionedHamiltonian(qubit_count=n_qubits, terms=tuple(terms))


def hamiltonian_digest(h: PartitionedHamiltonian) -> str:
    """Short stable content hash, used to tag report rows."""
    parts = [str(h.qubit_count)]
    for t in h.terms:
        parts.append(t.label)
        parts.extend(f"{s.letters}:{s.weight!r}" for s in t.strings)
    return hashlib.sha1("|".join(parts).encode()).hexdigest()[:12]


# Hamiltonian spec files are plain "key = value" text. Keys:
#   kind = xy      -> rows, cols, jx, jy
#   kind = random  -> n_qubits, strings_per_term, seed
_XY_KEYS = {"rows", "cols", "jx", "jy"}
_RANDOM_KEYS = {"n_qubits", "strings_per_term", "seed"}


def parse_hamiltonian_spec(text: str) -> PartitionedHamiltonian:
    entries: dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"line {lineno}: expected 'key = value', got {raw!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        if key in entries:
            raise ValueError(f"line {lineno}: duplicate key {key!r}")
        entries[key] = value

    kind = entries.pop("kind", None)
    if kind == "xy":
        missing = _XY_KEYS - entries.keys()
        extra = entries.keys() - _XY_KEYS
    elif kind == "random":
        missing = _RANDOM_KEYS - entries.keys()
        extra = entries.keys() - _RANDOM_KEYS
    else:
        raise ValueError(f"kind must be 'xy' or 'random', got {kind!r}")
    if missing or extra:
        raise ValueError(
            f"bad keys for kind={kind}: missing {sorted(missing)}, unexpected {sorted(extra)}"
        )

    if kind == "xy":
        return build_xy_lattice(
            rows=int(entries["rows"]),
            cols=int(entries["cols"]),
            jx=float(entries["jx"]),
            jy=float(entries["jy"]),
        )
    return build_random_two_term(
        n_qubits=int(entries["n_qubits"]),
        strings_per_term=int(entries["strings_per_term"]),
        seed=int(entries["seed"]),
    )


def load_hamiltonian_file(path: str | Path) -> PartitionedHamiltonian:
    return parse_hamiltonian_spec(Path(path).read_text())
