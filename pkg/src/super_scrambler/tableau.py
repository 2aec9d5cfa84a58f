"""Super-stabilizer tableau: polynomial-cost simulation of X/Y-string scrambling.

The state is N mutually commuting, independent super-Paulis (the columns of
the 2N x N binary matrix of stabilizer vectors).  X and Z exponent planes
are stored separately, bit-packed 64 bits per word, one row per stabilizer.
Signs are not tracked; they do not affect entanglement.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, List, Sequence, Set

import numpy as np

from .gf2 import gf2_rank
from .model import C3, OperatorProgram, SuperGate, SuperPauli, Swap, T, validate_gate

_ONE = np.uint64(1)


class TableauError(ValueError):
    pass


@dataclass(frozen=True)
class Region:
    """A subset of site indices (1-based)."""

    sites: frozenset

    def __init__(self, sites: Iterable[int]):
        object.__setattr__(self, "sites", frozenset(int(s) for s in sites))

    @classmethod
    def prefix(cls, p: int) -> "Region":
        if p < 0:
            raise ValueError("prefix size must be non-negative")
        return cls(range(1, p + 1))

    def complement(self, n_qubits: int) -> "Region":
        return Region(set(range(1, n_qubits + 1)) - self.sites)

    def validate(self, n_qubits: int) -> None:
        for s in self.sites:
            if not 1 <= s <= n_qubits:
                raise ValueError(f"region site {s} out of range 1..{n_qubits}")

    def __len__(self) -> int:
        return len(self.sites)


def _words(n_qubits: int) -> int:
    return (n_qubits + 63) // 64


class SuperStabilizerTableau:
    """N super-stabilizers evolving under the {T, SWAP, C3} super-gate set."""

    def __init__(self, n_qubits: int, x_words: np.ndarray, z_words: np.ndarray):
        if n_qubits < 1:
            raise TableauError("n_qubits must be positive")
        w = _words(n_qubits)
        if x_words.shape != (n_qubits, w) or z_words.shape != (n_qubits, w):
            raise TableauError("word array shape mismatch")
        self.n_qubits = n_qubits
        self._x = np.ascontiguousarray(x_words, dtype=np.uint64)
        self._z = np.ascontiguousarray(z_words, dtype=np.uint64)

    @classmethod
    def new_all_x(cls, n_qubits: int) -> "SuperStabilizerTableau":
        """Tableau for the unentangled all-X string: stabilizer alpha is Z_alpha."""
        if n_qubits < 1:
            raise TableauError("n_qubits must be positive")
        w = _words(n_qubits)
        x = np.zeros((n_qubits, w), dtype=np.uint64)
        z = np.zeros((n_qubits, w), dtype=np.uint64)
        for i in range(n_qubits):
            z[i, i >> 6] = _ONE << np.uint64(i & 63)
        return cls(n_qubits, x, z)

    def copy(self) -> "SuperStabilizerTableau":
        return SuperStabilizerTableau(self.n_qubits, self._x.copy(), self._z.copy())

    # -- mask access -------------------------------------------------------

    def _row_int(self, plane: np.ndarray, i: int) -> int:
        return int.from_bytes(plane[i].tobytes(), "little")

    def stabilizer(self, i: int) -> SuperPauli:
        """The i-th stabilizer (0-based) as a SuperPauli."""
        return SuperPauli(
            self.n_qubits, self._row_int(self._x, i), self._row_int(self._z, i)
        )

    @property
    def stabilizers(self) -> List[SuperPauli]:
        return [self.stabilizer(i) for i in range(self.n_qubits)]

    # -- gate updates ------------------------------------------------------

    def _check_site(self, site: int) -> None:
        if not 1 <= site <= self.n_qubits:
            raise TableauError(f"site {site} out of range 1..{self.n_qubits}")

    def apply_t(self, site: int) -> None:
        """Exchange the x and z exponents at `site` in every stabilizer."""
        self._check_site(site)
        i = site - 1
        w, b = i >> 6, np.uint64(i & 63)
        bit = _ONE << b
        diff = (self._x[:, w] ^ self._z[:, w]) & bit
        self._x[:, w] ^= diff
        self._z[:, w] ^= diff

    def apply_swap(self, site_a: int, site_b: int) -> None:
        """Exchange the (x, z) exponent pairs of two sites."""
        self._check_site(site_a)
        self._check_site(site_b)
        if site_a == site_b:
            raise TableauError("swap sites must be distinct")
        ia, ib = site_a - 1, site_b - 1
        wa, ba = ia >> 6, np.uint64(ia & 63)
        wb, bb = ib >> 6, np.uint64(ib & 63)
        for plane in (self._x, self._z):
            abit = (plane[:, wa] >> ba) & _ONE
            bbit = (plane[:, wb] >> bb) & _ONE
            d = abit ^ bbit
            plane[:, wa] ^= d << ba
            plane[:, wb] ^= d << bb

    def apply_c3(self, control: int, target_1: int, target_2: int) -> None:
        """Controlled-Y-pair update of every stabilizer vector, mod 2."""
        sites = (control, target_1, target_2)
        for s in sites:
            self._check_site(s)
        if len(set(sites)) != 3:
            raise TableauError("C3 sites must be distinct")
        ic, i1, i2 = control - 1, target_1 - 1, target_2 - 1
        wc, bc = ic >> 6, np.uint64(ic & 63)
        w1, b1 = i1 >> 6, np.uint64(i1 & 63)
        w2, b2 = i2 >> 6, np.uint64(i2 & 63)
        vcx = (self._x[:, wc] >> bc) & _ONE
        s = (
            ((self._x[:, w1] >> b1) & _ONE)
            ^ ((self._z[:, w1] >> b1) & _ONE)
            ^ ((self._x[:, w2] >> b2) & _ONE)
            ^ ((self._z[:, w2] >> b2) & _ONE)
        )
        self._z[:, wc] ^= s << bc
        self._x[:, w1] ^= vcx << b1
        self._z[:, w1] ^= vcx << b1
        self._x[:, w2] ^= vcx << b2
        self._z[:, w2] ^= vcx << b2

    def apply_gate(self, gate: SuperGate) -> None:
        if isinstance(gate, T):
            self.apply_t(gate.site)
        elif isinstance(gate, Swap):
            self.apply_swap(gate.site_a, gate.site_b)
        elif isinstance(gate, C3):
            self.apply_c3(gate.control, gate.target_1, gate.target_2)
        else:
            raise TypeError(f"not a super-gate: {gate!r}")

    def apply_program(self, program: OperatorProgram, check: str = "none") -> None:
        """Apply gates in program order (index 0 first).

        check="gate" validates the tableau invariants after every gate,
        check="none" skips validation (the release-mode default).
        """
        if program.n_qubits != self.n_qubits:
            raise TableauError("program/tableau dimension mismatch")
        for gate in program.gates:
            self.apply_gate(gate)
            if check == "gate":
                self.check_invariants()

    # -- entropy -----------------------------------------------------------

    def _region_rows(self, sites: Sequence[int]) -> List[int]:
        """Stabilizer rows restricted to the 2|A| exponent bits of `sites`."""
        k = len(sites)
        rows = []
        for i in range(self.n_qubits):
            x = self._row_int(self._x, i)
            z = self._row_int(self._z, i)
            row = 0
            for j, site in enumerate(sites):
                row |= ((x >> (site - 1)) & 1) << j
                row |= ((z >> (site - 1)) & 1) << (k + j)
            rows.append(row)
        return rows

    def _prefix_rows(self, p: int) -> List[int]:
        mask = (1 << p) - 1
        rows = []
        for i in range(self.n_qubits):
            x = self._row_int(self._x, i) & mask
            z = self._row_int(self._z, i) & mask
            rows.append(x | (z << p))
        return rows

    def entropy(self, region: Region) -> int:
        """Operator entanglement across `region`: GF(2) rank of the
        region-restricted stabilizer matrix minus the region size."""
        region.validate(self.n_qubits)
        p = len(region)
        if p == 0 or p == self.n_qubits:
            return 0
        sites = sorted(region.sites)
        if sites == list(range(1, p + 1)):
            rows = self._prefix_rows(p)
        else:
            rows = self._region_rows(sites)
        return gf2_rank(rows) - p

    # -- invariants --------------------------------------------------------

    def check_invariants(self) -> None:
        """Assert mutual commutation and GF(2) independence of the stabilizers."""
        n = self.n_qubits
        xs = [self._row_int(self._x, i) for i in range(n)]
        zs = [self._row_int(self._z, i) for i in range(n)]
        for a in range(n):
            for b in range(a + 1, n):
                sym = (xs[a] & zs[b]).bit_count() + (zs[a] & xs[b]).bit_count()
                if sym % 2:
                    raise TableauError(
                        f"stabilizers {a} and {b} anticommute"
                    )
        full = [xs[i] | (zs[i] << n) for i in range(n)]
        if gf2_rank(full) != n:
            raise TableauError("stabilizers are GF(2)-dependent")

    # -- serialization -----------------------------------------------------

    def dumps(self) -> str:
        """One stabilizer per line over {I, X, Z, Y}, final newline included."""
        return "\n".join(self.stabilizer(i).label() for i in range(self.n_qubits)) + "\n"

    @classmethod
    def loads(cls, text: str) -> "SuperStabilizerTableau":
        lines = text.splitlines()
        if not lines:
            raise TableauError("empty stabilizer dump")
        n = len(lines[0])
        if n == 0:
            raise TableauError("empty stabilizer line")
        if len(lines) != n:
            raise TableauError(f"expected {n} lines of length {n}, got {len(lines)}")
        w = _words(n)
        x = np.zeros((n, w), dtype=np.uint64)
        z = np.zeros((n, w), dtype=np.uint64)
        for i, line in enumerate(lines):
            if len(line) != n:
                raise TableauError(f"line {i + 1}: length {len(line)}, expected {n}")
            try:
                sp = SuperPauli.from_label(line)
            except ValueError as e:
                raise TableauError(f"line {i + 1}: {e}")
            x[i] = np.frombuffer(
                sp.x_mask.to_bytes(w * 8, "little"), dtype=np.uint64
            )
            z[i] = np.frombuffer(
                sp.z_mask.to_bytes(w * 8, "little"), dtype=np.uint64
            )
        tab = cls(n, x, z)
        tab.check_invariants()
        return tab
