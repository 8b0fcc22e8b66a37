"""Weyl-Heisenberg group machinery in both representations used by the package.

Two concrete representations are provided: the generic clock/shift form in
any dimension, and the special d=4 form (with its global phase factors fixed
so that X^4 = Z^4 = 1 exactly) in which the 64-state compound has a simple
analytic expression.  The module also builds the Klein-four unitaries U and V,
the symmetry group of the compound as a finite set of unitaries modulo
global phase, and the twin pair of generators that exposes the bipartite
(two-qubit) Heisenberg structure hiding inside the d=4 Clifford group.
"""

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .linalg import PAULI_X, PAULI_Y, PAULI_Z, dagger, tensor, TOL_STRUCT


class ClosureTooLarge(RuntimeError):
    """Group closure exceeded the safety cap (phase canonicalisation bug)."""


@dataclass(frozen=True)
class WHRep:
    """One representation of the Weyl-Heisenberg pair (X, Z) in dimension d.

    Satisfies X^d = Z^d = 1 (including global phases) and Z X = omega X Z
    with omega = exp(2 pi i / d).
    """
    dim: int
    X: np.ndarray
    Z: np.ndarray
    omega: complex

    def power_products(self):
        """All d*d operators X^a Z^b as an array of shape (d, d, dim, dim)."""
        d = self.dim
        xp = [np.linalg.matrix_power(self.X, a) for a in range(d)]
        zp = [np.linalg.matrix_power(self.Z, b) for b in range(d)]
        return np.array([[xp[a] @ zp[b] for b in range(d)] for a in range(d)])


def clock_shift_rep(d):
    """Standard shift/clock representation: X|k> = |k+1 mod d>, Z|k> = w^k |k>."""
    if d < 2:
        raise ValueError("dimension must be at least 2")
    omega = np.exp(2j * np.pi / d)
    X = np.zeros((d, d), dtype=complex)
    for k in range(d):
        X[(k + 1) % d, k] = 1.0
    Z = np.diag(omega ** np.arange(d))
    return WHRep(dim=d, X=X, Z=Z, omega=omega)


def compound_rep_d4():
    """The d=4 representation in which the compound fiducial is (t,i,i,i)/n.

    The e^{i pi/4} prefactors make X^4 = Z^4 = 1 hold exactly.
    """
    ph = np.exp(1j * np.pi / 4)
    X = ph * np.array([
        [0, 1j, 0, 0],
        [-1, 0, 0, 0],
        [0, 0, 0, 1],
        [0, 0, 1j, 0],
    ], dtype=complex)
    Z = ph * np.array([
        [0, 0, -1, 0],
        [0, 0, 0, 1],
        [1j, 0, 0, 0],
        [0, 1j, 0, 0],
    ], dtype=complex)
    return WHRep(dim=4, X=X, Z=Z, omega=1j)


def klein_unitaries():
    """The pair (U, V) generating a projective Klein four-group on C^4.

    U^2 = V^2 = 1 and U V = -V U; applied to the compound fiducial they
    generate an orthonormal basis of fiducials.
    """
    U = np.array([
        [0, 0, 1, 0],
        [0, 0, 0, 1j],
        [1, 0, 0, 0],
        [0, -1j, 0, 0],
    ], dtype=complex)
    V = np.array([
        [0, 1, 0, 0],
        [1, 0, 0, 0],
        [0, 0, 0, -1j],
        [0, 0, 1j, 0],
    ], dtype=complex)
    return U, V


def klein_commutation_phase():
    """The phase c with U V = c * V U; recorded rather than assumed."""
    U, V = klein_unitaries()
    uv = U @ V
    vu = V @ U
    nz = np.unravel_index(np.argmax(np.abs(vu)), vu.shape)
    return complex(uv[nz] / vu[nz])


def cyclic_last_three():
    """Permutation unitary fixing component 0 and cycling components 1->2->3->1."""
    W = np.zeros((4, 4), dtype=complex)
    W[0, 0] = 1
    W[2, 1] = 1
    W[3, 2] = 1
    W[1, 3] = 1
    return W


def twin_wh_generators():
    """The second (twin) Weyl-Heisenberg pair in the d=4 compound representation.

    Together with the pair from :func:`compound_rep_d4` these satisfy the four
    bipartite identities checked by :func:`bipartite_identities`.
    """
    ph = np.exp(1j * np.pi / 4)
    Xt = ph * np.array([
        [0, 0, 0, -1],
        [0, 0, -1, 0],
        [0, 1j, 0, 0],
        [-1j, 0, 0, 0],
    ], dtype=complex)
    Zt = ph * np.array([
        [0, 0, -1, 0],
        [0, 0, 0, 1j],
        [1j, 0, 0, 0],
        [0, 1, 0, 0],
    ], dtype=complex)
    return Xt, Zt


def bipartite_identities():
    """The four operator identities linking both WH pairs to two-qubit Paulis.

    Returns a list of (name, lhs, rhs) triples meant to agree entrywise.
    """
    rep = compound_rep_d4()
    X, Z = rep.X, rep.Z
    Xt, Zt = twin_wh_generators()
    I2 = np.eye(2, dtype=complex)
    return [
        ("X^2 = sigma_z (x) 1", X @ X, tensor(PAULI_Z, I2)),
        ("Z^2 = 1 (x) sigma_z", Z @ Z, tensor(I2, PAULI_Z)),
        ("-i X Zt = sigma_y (x) sigma_y", -1j * X @ Zt, tensor(PAULI_Y, PAULI_Y)),
        ("Z Xt = 1 (x) sigma_x", Z @ Xt, tensor(I2, PAULI_X)),
    ]


# ---------------------------------------------------------------------------
# finite unitary groups modulo global phase
# ---------------------------------------------------------------------------

def canonical_phase(m, tol=TOL_STRUCT):
    """Canonical global-phase representative of a unitary.

    The first entry of magnitude > tol in a column-major scan is rotated to
    the positive real axis.  Any consistent rule would do; this one is fixed
    for determinism.
    """
    m = np.asarray(m, dtype=complex)
    flat = m.flatten(order="F")
    nz = np.flatnonzero(np.abs(flat) > tol)
    pivot = flat[nz[0]]
    return m * (abs(pivot) / pivot)


def _phase_key(m, decimals=8):
    rounded = np.round(canonical_phase(m), decimals)
    rounded = rounded + 0.0  # normalise -0.0
    return rounded.tobytes()


class ProjectiveUnitarySet:
    """A finite set of unitaries, deduplicated modulo global phase."""

    def __init__(self, dim, elements):
        self.dim = dim
        self.elements = [canonical_phase(m) for m in elements]
        self._keys = {_phase_key(m) for m in self.elements}

    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def contains(self, m):
        return _phase_key(m) in self._keys

    def is_closed(self, sample=None, rng=None):
        """Check closure under multiplication modulo phase.

        With ``sample`` set, only that many random pairs are multiplied;
        otherwise all pairs are checked.
        """
        n = len(self.elements)
        if sample is None:
            pairs = ((i, j) for i in range(n) for j in range(n))
        else:
            rng = rng or np.random.default_rng(0)
            pairs = ((rng.integers(n), rng.integers(n)) for _ in range(sample))
        return all(self.contains(self.elements[i] @ self.elements[j])
                   for i, j in pairs)


def projective_closure(generators, cap=65536):
    """Breadth-first closure of a generator list modulo global phase.

    Raises
    ------
    ClosureTooLarge
        If more than ``cap`` distinct elements appear, which signals a
        phase-canonicalisation bug rather than a genuinely large group.
    """
    dim = np.asarray(generators[0]).shape[0]
    identity = canonical_phase(np.eye(dim, dtype=complex))
    seen = {_phase_key(identity): identity}
    frontier = [identity]
    gens = [canonical_phase(g) for g in generators]
    while frontier:
        nxt = []
        for m in frontier:
            for g in gens:
                p = canonical_phase(g @ m)
                k = _phase_key(p)
                if k not in seen:
                    seen[k] = p
                    nxt.append(p)
                    if len(seen) > cap:
                        raise ClosureTooLarge(f"closure exceeded {cap} elements")
        frontier = nxt
    return ProjectiveUnitarySet(dim, list(seen.values()))


@lru_cache(maxsize=1)
def automorphism_group():
    """Symmetry group of the d=4 compound, modulo phase (192 elements).

    Generated by X, Z, the Klein pair U, V and the cyclic permutation of the
    last three components; every element permutes the 64 compound states up
    to phase.
    """
    rep = compound_rep_d4()
    U, V = klein_unitaries()
    return projective_closure([rep.X, rep.Z, U, V, cyclic_last_three()])
