"""Exact bosonic creation-operator algebra for lossless linear optics.

Photonic states live in two interchangeable representations: sums of
creation-operator monomials acting on vacuum (convenient while propagating
through a multiport) and occupation-number amplitudes (convenient for
detection statistics).  Everything here is pure and immutable after
construction; coefficients with magnitude below ``MERGE_TOL`` are dropped
during canonicalisation.
"""

from __future__ import annotations

import math
from typing import Iterable, Mapping, NamedTuple

MERGE_TOL = 1e-12
NORM_TOL = 1e-9
#: refuse symbolic expansions beyond this many intermediate terms
MAX_TERMS = 10_000_000

_POLS = ("", "H", "V")


class CapacityError(RuntimeError):
    """Raised when an expansion would exceed ``MAX_TERMS`` terms."""


class DimensionMismatch(ValueError):
    """A mode refers to a port outside the interferometer."""

    def __init__(self, port: int, dim: int):
        self.port = port
        self.dim = dim
        super().__init__(f"mode on port {port} exceeds interferometer dimension {dim}")


class PortCollision(ValueError):
    """Two states share a photonic port and no offset was given."""


class RegisterMismatch(ValueError):
    """Atomic registers of two states have different lengths."""


class Mode(NamedTuple):
    """A single bosonic mode: spatial port (1-based) plus polarization.

    ``pol`` is ``"H"``/``"V"`` for polarization-encoded photons or ``""``
    for number-encoded (single-rail) photons.
    """

    port: int
    pol: str = ""

    def shifted(self, offset: int) -> "Mode":
        return Mode(self.port + offset, self.pol)

    def label(self) -> str:
        return f"{self.pol.lower()}{self.port}" if self.pol else f"{self.port}"


def mode(port: int, pol: str = "") -> Mode:
    """Validated :class:`Mode` constructor."""
    if port < 1:
        raise ValueError(f"port must be >= 1, got {port}")
    if pol not in _POLS:
        raise ValueError(f"polarization must be one of {_POLS}, got {pol!r}")
    return Mode(port, pol)


# A monomial is a sorted tuple of modes; repetition encodes operator powers.
Monomial = tuple[Mode, ...]


def _merge(acc: dict, key, amp: complex) -> None:
    new = acc.get(key, 0j) + amp
    if abs(new) < MERGE_TOL:
        acc.pop(key, None)
    else:
        acc[key] = new


class PhotonPolynomial:
    """Sum of creation-operator monomials with complex coefficients.

    ``terms`` maps a canonical (sorted) monomial to its coefficient.  The
    empty monomial stands for the identity, so ``{(): 1}`` applied to vacuum
    is the vacuum itself.
    """

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[Monomial, complex] | Iterable[tuple[complex, Iterable[Mode]]] = ()):
        acc: dict[Monomial, complex] = {}
        items = terms.items() if isinstance(terms, Mapping) else ((tuple(m), c) for c, m in terms)
        for mono, coeff in items:
            _merge(acc, tuple(sorted(mono)), complex(coeff))
        self.terms = acc

    @classmethod
    def vacuum(cls) -> "PhotonPolynomial":
        return cls({(): 1.0 + 0j})

    @classmethod
    def creation(cls, m: Mode, coeff: complex = 1.0) -> "PhotonPolynomial":
        return cls({(m,): complex(coeff)})

    def __mul__(self, other: "PhotonPolynomial") -> "PhotonPolynomial":
        if len(self.terms) * len(other.terms) > MAX_TERMS:
            raise CapacityError("polynomial product would exceed the term budget")
        acc: dict[Monomial, complex] = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                _merge(acc, tuple(sorted(m1 + m2)), c1 * c2)
        out = PhotonPolynomial()
        out.terms = acc
        return out

    def __add__(self, other: "PhotonPolynomial") -> "PhotonPolynomial":
        acc = dict(self.terms)
        for mono, c in other.terms.items():
            _merge(acc, mono, c)
        out = PhotonPolynomial()
        out.terms = acc
        return out

    def scaled(self, factor: complex) -> "PhotonPolynomial":
        out = PhotonPolynomial()
        out.terms = {m: c * factor for m, c in self.terms.items() if abs(c * factor) >= MERGE_TOL}
        return out

    def max_port(self) -> int:
        return max((m.port for mono in self.terms for m in mono), default=0)

    def norm_sq(self) -> float:
        """Norm of the state obtained by applying the polynomial to vacuum."""
        total = 0.0
        for mono, c in self.terms.items():
            fact = 1.0
            for m in set(mono):
                fact *= math.factorial(mono.count(m))
            total += abs(c) ** 2 * fact
        return total

    def __eq__(self, other) -> bool:
        if not isinstance(other, PhotonPolynomial):
            return NotImplemented
        keys = set(self.terms) | set(other.terms)
        return all(abs(self.terms.get(k, 0) - other.terms.get(k, 0)) < NORM_TOL for k in keys)

    def __repr__(self) -> str:
        parts = [f"({c:.4g})*{'*'.join(m.label() for m in mono) or '1'}"
                 for mono, c in sorted(self.terms.items())]
        return "PhotonPolynomial[" + " + ".join(parts) + "]"


class FockState:
    """Occupation-number state over a set of modes (zero entries absent)."""

    __slots__ = ("key",)

    def __init__(self, occupations: Mapping[Mode, int] | Iterable[tuple[Mode, int]] = ()):
        items = occupations.items() if isinstance(occupations, Mapping) else occupations
        occ = {}
        for m, k in items:
            if k < 0:
                raise ValueError("occupation numbers must be nonnegative")
            if k:
                occ[m] = occ.get(m, 0) + k
        self.key = tuple(sorted(occ.items()))

    @classmethod
    def from_key(cls, key) -> "FockState":
        out = cls.__new__(cls)
        out.key = tuple(key)
        return out

    @classmethod
    def from_monomial(cls, mono: Monomial) -> "FockState":
        occ: dict[Mode, int] = {}
        for m in mono:
            occ[m] = occ.get(m, 0) + 1
        return cls(occ)

    @property
    def occupations(self) -> dict[Mode, int]:
        return dict(self.key)

    def total(self) -> int:
        return sum(k for _, k in self.key)

    def monomial(self) -> Monomial:
        return tuple(sorted(m for m, k in self.key for _ in range(k)))

    def label(self) -> str:
        if not self.key:
            return "-"
        ordered = sorted(self.key, key=lambda item: (item[0].pol, item[0].port))
        return " ".join(m.label() + (f"^{k}" if k > 1 else "") for m, k in ordered)

    def __eq__(self, other) -> bool:
        return isinstance(other, FockState) and self.key == other.key

    def __hash__(self) -> int:
        return hash(self.key)

    def __repr__(self) -> str:
        return f"FockState({self.label()})"


VACUUM = FockState()


class HybridState:
    """Superposition of (atomic bitstring x photonic Fock state) terms."""

    __slots__ = ("n_atoms", "terms")

    def __init__(self, n_atoms: int, terms: Mapping[tuple[str, tuple], complex]):
        self.n_atoms = n_atoms
        acc: dict[tuple[str, tuple], complex] = {}
        for (atoms, fkey), amp in terms.items():
            if len(atoms) != n_atoms:
                raise RegisterMismatch(
                    f"atomic bitstring {atoms!r} does not have length {n_atoms}")
            _merge(acc, (atoms, tuple(fkey)), complex(amp))
        self.terms = acc

    @classmethod
    def single(cls, atoms: str, photons: FockState = VACUUM, amp: complex = 1.0) -> "HybridState":
        return cls(len(atoms), {(atoms, photons.key): complex(amp)})

    def norm_sq(self) -> float:
        return sum(abs(a) ** 2 for a in self.terms.values())

    def items(self):
        """Iterate (atoms, FockState, amplitude) in canonical order."""
        for (atoms, fkey), amp in sorted(self.terms.items()):
            yield atoms, FockState.from_key(fkey), amp

    def __repr__(self) -> str:
        n = len(self.terms)
        return f"HybridState(n_atoms={self.n_atoms}, terms={n}, norm^2={self.norm_sq():.6f})"


def apply_mode_transform(poly: PhotonPolynomial, inverse_matrix) -> PhotonPolynomial:
    """Rewrite input creation operators in terms of output operators.

    ``inverse_matrix`` is the *inverse* multiport transform, so that the
    operator on input port ``j`` becomes ``sum_k inv[j, k] b_k`` on the
    output ports.  The same spatial matrix acts on each polarization
    independently.

    Args:
        poly: canonical input-operator polynomial.
        inverse_matrix: a :class:`~entnet.interferometers.MultiportMatrix`
            (or any object with ``dim`` and ``entries``).

    Raises:
        DimensionMismatch: some mode's port exceeds the matrix dimension.
        CapacityError: the expansion would exceed the term budget.
    """
    dim = inverse_matrix.dim
    entries = inverse_matrix.entries
    budget = 0
    for mono in poly.terms:
        for m in mono:
            if m.port > dim:
                raise DimensionMismatch(m.port, dim)
        budget += dim ** len(mono)
        if budget > MAX_TERMS:
            raise CapacityError(
                f"transforming this polynomial needs > {MAX_TERMS} intermediate terms")
    acc: dict[Monomial, complex] = {}
    for mono, coeff in poly.terms.items():
        partial: dict[Monomial, complex] = {(): coeff}
        for m in mono:
            row = entries[m.port - 1]
            nxt: dict[Monomial, complex] = {}
            for pmono, c in partial.items():
                for k in range(dim):
                    _merge(nxt, tuple(sorted(pmono + (Mode(k + 1, m.pol),))), c * row[k])
            partial = nxt
        for pmono, c in partial.items():
            _merge(acc, pmono, c)
    out = PhotonPolynomial()
    out.terms = acc
    return out


def expand_to_fock(poly: PhotonPolynomial, atoms: str = "") -> HybridState:
    """Apply the polynomial to vacuum and normal-order into Fock amplitudes.

    Each monomial ``{m -> k_m}`` contributes amplitude
    ``coeff * prod_m sqrt(k_m!)`` on the occupation state ``|k_m>``.
    """
    acc: dict[tuple[str, tuple], complex] = {}
    for mono, coeff in poly.terms.items():
        fock = FockState.from_monomial(mono)
        fact = 1.0
        for _, k in fock.key:
            fact *= math.sqrt(math.factorial(k))
        _merge(acc, (atoms, fock.key), coeff * fact)
    state = HybridState.__new__(HybridState)
    state.n_atoms = len(atoms)
    state.terms = acc
    return state


def fock_to_polynomial(fock: FockState, coeff: complex = 1.0) -> PhotonPolynomial:
    """Inverse of :func:`expand_to_fock` for a single occupation state."""
    fact = 1.0
    for _, k in fock.key:
        fact *= math.sqrt(math.factorial(k))
    return PhotonPolynomial({fock.monomial(): coeff / fact})


def inner_product(a: HybridState, b: HybridState) -> complex:
    """``<a|b>`` over matching (atoms, photons) basis labels."""
    if a.n_atoms != b.n_atoms:
        raise RegisterMismatch(
            f"atomic registers differ: {a.n_atoms} vs {b.n_atoms} qubits")
    small, big = (a.terms, b.terms) if len(a.terms) <= len(b.terms) else (b.terms, a.terms)
    total = 0j
    for key, amp in small.items():
        other = big.get(key)
        if other is not None:
            if small is a.terms:
                total += amp.conjugate() * other
            else:
                total += other.conjugate() * amp
    return total


def tensor(a: HybridState, b: HybridState, port_offset: int | None = None) -> HybridState:
    """Tensor product with concatenated atomic registers and merged photons.

    ``b``'s ports are shifted by ``port_offset`` when given; otherwise the
    two states must already occupy disjoint port ranges.
    """
    ports_a = {m.port for (_, fkey) in a.terms for m, _ in fkey}
    if port_offset is None:
        ports_b = {m.port for (_, fkey) in b.terms for m, _ in fkey}
        clash = ports_a & ports_b
        if clash:
            raise PortCollision(f"states share ports {sorted(clash)}; pass port_offset")
        port_offset = 0
    acc: dict[tuple[str, tuple], complex] = {}
    for (at_a, fk_a), amp_a in a.terms.items():
        for (at_b, fk_b), amp_b in b.terms.items():
            occ = dict(fk_a)
            for m, k in fk_b:
                m2 = m.shifted(port_offset)
                occ[m2] = occ.get(m2, 0) + k
            key = (at_a + at_b, tuple(sorted(occ.items())))
            _merge(acc, key, amp_a * amp_b)
    state = HybridState.__new__(HybridState)
    state.n_atoms = a.n_atoms + b.n_atoms
    state.terms = acc
    return state
