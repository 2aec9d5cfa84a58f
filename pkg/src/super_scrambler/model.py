"""Core data model: X/Y-string operator basis, super-gates, and programs.

Site indices are 1-based everywhere in the public API (and in the program
text format); bit positions inside masks are 0-based, with site i stored at
bit i-1.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, List, Sequence, Tuple, Union


class ProgramError(ValueError):
    """Invalid gate indices or malformed program text."""


@dataclass(frozen=True)
class XYStringIndex:
    """Basis label for the operator space spanned by X/Y strings.

    Bit i-1 of ``y_mask`` set means Pauli Y at site i, clear means X.
    Identity and Z factors are not representable.
    """

    n_qubits: int
    y_mask: int

    def __post_init__(self):
        if self.n_qubits < 1:
            raise ValueError("n_qubits must be positive")
        if not 0 <= self.y_mask < (1 << self.n_qubits):
            raise ValueError("y_mask out of range for n_qubits")

    def label(self) -> str:
        return "".join(
            "Y" if (self.y_mask >> i) & 1 else "X" for i in range(self.n_qubits)
        )


@dataclass(frozen=True)
class SuperPauli:
    """A super-Pauli operator on the X/Y string space, sign untracked.

    ``x_mask`` bit i-1 is the X-type exponent at site i, ``z_mask`` the
    Z-type exponent.  Serialization order interleaves (x, z) per site.
    """

    n_qubits: int
    x_mask: int
    z_mask: int

    def __post_init__(self):
        if self.n_qubits < 1:
            raise ValueError("n_qubits must be positive")
        top = 1 << self.n_qubits
        if not (0 <= self.x_mask < top and 0 <= self.z_mask < top):
            raise ValueError("mask out of range for n_qubits")

    def interleaved_vector(self) -> Tuple[int, ...]:
        """Binary vector (v_1x, v_1z, ..., v_Nx, v_Nz)."""
        out = []
        for i in range(self.n_qubits):
            out.append((self.x_mask >> i) & 1)
            out.append((self.z_mask >> i) & 1)
        return tuple(out)

    def commutes_with(self, other: "SuperPauli") -> bool:
        if self.n_qubits != other.n_qubits:
            raise ValueError("dimension mismatch")
        sym = (self.x_mask & other.z_mask).bit_count() + (
            self.z_mask & other.x_mask
        ).bit_count()
        return sym % 2 == 0

    def label(self) -> str:
        """One character per site over {I, X, Z, Y}."""
        chars = []
        for i in range(self.n_qubits):
            x = (self.x_mask >> i) & 1
            z = (self.z_mask >> i) & 1
            chars.append("IXZY"[x + 2 * z])
        return "".join(chars)

    @classmethod
    def from_label(cls, label: str) -> "SuperPauli":
        x_mask = z_mask = 0
        for i, c in enumerate(label):
            if c not in "IXZY":
                raise ValueError(f"bad stabilizer character {c!r}")
            code = "IXZY".index(c)
            x_mask |= (code & 1) << i
            z_mask |= (code >> 1) << i
        return cls(len(label), x_mask, z_mask)


@dataclass(frozen=True)
class T:
    site: int


@dataclass(frozen=True)
class Swap:
    site_a: int
    site_b: int


@dataclass(frozen=True)
class C3:
    """Doubly-targeted controlled-Y super-gate; symmetric in its targets."""

    control: int
    target_1: int
    target_2: int

    def canonical(self) -> "C3":
        a, b = sorted((self.target_1, self.target_2))
        return C3(self.control, a, b)


SuperGate = Union[T, Swap, C3]


def gate_sites(gate: SuperGate) -> Tuple[int, ...]:
    if isinstance(gate, T):
        return (gate.site,)
    if isinstance(gate, Swap):
        return (gate.site_a, gate.site_b)
    if isinstance(gate, C3):
        return (gate.control, gate.target_1, gate.target_2)
    raise TypeError(f"not a super-gate: {gate!r}")


def validate_gate(gate: SuperGate, n_qubits: int) -> None:
    sites = gate_sites(gate)
    for s in sites:
        if not 1 <= s <= n_qubits:
            raise ProgramError(f"site {s} out of range 1..{n_qubits} in {gate!r}")
    if len(set(sites)) != len(sites):
        raise ProgramError(f"repeated index in {gate!r}")


@dataclass(frozen=True)
class OperatorProgram:
    """Gate sequence in operator-space application order (index 0 first)."""

    n_qubits: int
    gates: Tuple[SuperGate, ...] = field(default_factory=tuple)

    def __post_init__(self):
        if self.n_qubits < 1:
            raise ValueError("n_qubits must be positive")
        object.__setattr__(self, "gates", tuple(self.gates))
        for g in self.gates:
            validate_gate(g, self.n_qubits)

    def __len__(self) -> int:
        return len(self.gates)


def reverse_from_state_space(
    gates: Sequence[SuperGate], n_qubits: int
) -> OperatorProgram:
    """Convert a state-space circuit (first gate first) into operator order.

    Heisenberg evolution applies the final state-space gate first in
    operator space, so the list is simply reversed.
    """
    return OperatorProgram(n_qubits, tuple(reversed(gates)))


def localize_c3(c3: C3, n_qubits: int) -> List[SuperGate]:
    """Rewrite a long-range C3 as nearest-neighbor SWAPs around a local C3.

    The targets are shuttled next to the control with adjacent SWAPs,
    the C3 acts on the contiguous triple, and the SWAPs are undone in
    reverse.  SWAP count is at most 2(|c-t1| + |c-t2|).
    """
    validate_gate(c3, n_qubits)
    c = c3.control
    lo, hi = sorted((c3.target_1, c3.target_2))

    moves: List[Tuple[int, int]] = []  # (from, to) single-step shuttles

    def shuttle(src: int, dst: int) -> None:
        step = 1 if dst > src else -1
        for pos in range(src, dst, step):
            moves.append((pos, pos + step))

    if lo > c:  # both targets above the control
        shuttle(lo, c + 1)
        shuttle(hi, c + 2)
        local = C3(c, c + 1, c + 2)
    elif hi < c:  # both below
        shuttle(hi, c - 1)
        shuttle(lo, c - 2)
        local = C3(c, c - 2, c - 1)
    else:  # one on each side
        shuttle(lo, c - 1)
        shuttle(hi, c + 1)
        local = C3(c, c - 1, c + 1)

    swaps = [Swap(min(a, b), max(a, b)) for a, b in moves]
    return [*swaps, local, *reversed(swaps)]


STATE_SPACE_DIRECTIVE = "@state-space-order"


def format_program(program: OperatorProgram) -> str:
    lines = [f"N {program.n_qubits}"]
    for g in program.gates:
        if isinstance(g, T):
            lines.append(f"T {g.site}")
        elif isinstance(g, Swap):
            lines.append(f"SWAP {g.site_a} {g.site_b}")
        else:
            lines.append(f"C3 {g.control} {g.target_1} {g.target_2}")
    return "\n".join(lines) + "\n"


def parse_program(text: str) -> OperatorProgram:
    """Parse the program text format.

    One gate per line (``T i``, ``SWAP i j``, ``C3 c t1 t2``), header line
    ``N <n_qubits>``, ``#`` comments.  A leading ``@state-space-order``
    directive means the file lists gates in state-space order and the
    result is reversed.
    """
    state_space = False
    n_qubits = None
    gates: List[SuperGate] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line == STATE_SPACE_DIRECTIVE:
            if n_qubits is not None or gates:
                raise ProgramError(
                    f"line {lineno}: {STATE_SPACE_DIRECTIVE} must come first"
                )
            state_space = True
            continue
        fields = line.split()
        kind, args = fields[0].upper(), fields[1:]
        try:
            ints = [int(a) for a in args]
        except ValueError:
            raise ProgramError(f"line {lineno}: non-integer argument in {line!r}")
        if kind == "N":
            if n_qubits is not None:
                raise ProgramError(f"line {lineno}: duplicate N header")
            if len(ints) != 1 or ints[0] < 1:
                raise ProgramError(f"line {lineno}: bad N header {line!r}")
            n_qubits = ints[0]
            continue
        if n_qubits is None:
            raise ProgramError(f"line {lineno}: gate before N header")
        if kind == "T" and len(ints) == 1:
            gate: SuperGate = T(ints[0])
        elif kind == "SWAP" and len(ints) == 2:
            gate = Swap(ints[0], ints[1])
        elif kind == "C3" and len(ints) == 3:
            gate = C3(ints[0], ints[1], ints[2])
        else:
            raise ProgramError(f"line {lineno}: unrecognized gate line {line!r}")
        try:
            validate_gate(gate, n_qubits)
        except ProgramError as e:
            raise ProgramError(f"line {lineno}: {e}")
        gates.append(gate)
    if n_qubits is None:
        raise ProgramError("missing N header")
    if state_space:
        return reverse_from_state_space(gates, n_qubits)
    return OperatorProgram(n_qubits, tuple(gates))
