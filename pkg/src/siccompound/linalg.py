"""Dense complex linear algebra and entropy primitives shared by all modules.

Conventions used throughout the package:

* tensor products are row-major (``np.kron``): the composite index of a
  pair ``(i, j)`` is ``i * dim_b + j``,
* structural predicates (Hermiticity, unitarity, positivity, normalisation)
  are decided with the absolute tolerance ``TOL_STRUCT = 1e-10``,
* derived numerical equalities are checked against ``TOL_DERIVED = 1e-9``
  (one decade of slack for eigendecomposition noise),
* entropies are in bits (log base 2).
"""

import numpy as np

TOL_STRUCT = 1e-10
TOL_DERIVED = 1e-9


class NotPositive(ValueError):
    """Matrix has an eigenvalue below -tolerance where positivity is required."""


class NotDensityMatrix(ValueError):
    """Operator is not Hermitian, unit-trace and positive within tolerance."""


class DimensionMismatch(ValueError):
    """Array dimensions are inconsistent with the declared subsystem split."""


def dagger(m):
    """Conjugate transpose."""
    return np.asarray(m).conj().T


def projector(vec):
    """Rank-one projector |v><v| of a (not necessarily normalised) vector."""
    v = np.asarray(vec, dtype=complex)
    return np.outer(v, v.conj())


def is_hermitian(m, tol=TOL_STRUCT):
    m = np.asarray(m)
    return m.ndim == 2 and m.shape[0] == m.shape[1] and np.abs(m - dagger(m)).max() <= tol


def is_unitary(m, tol=TOL_STRUCT):
    m = np.asarray(m)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        return False
    return np.abs(m @ dagger(m) - np.eye(m.shape[0])).max() <= tol


def is_positive_semidefinite(m, tol=TOL_STRUCT):
    if not is_hermitian(m, tol):
        return False
    return np.linalg.eigvalsh(m).min() >= -tol


def is_density_matrix(m, tol=TOL_STRUCT):
    m = np.asarray(m)
    return (is_hermitian(m, tol)
            and abs(np.trace(m) - 1.0) <= tol
            and np.linalg.eigvalsh(m).min() >= -tol)


def is_normalized(vec, tol=TOL_STRUCT):
    return abs(np.linalg.norm(vec) - 1.0) <= tol


def tensor(*ops):
    """Kronecker product of one or more matrices, row-major index convention.

    ``tensor(a, b)[i*db + j, k*db + l] = a[i, k] * b[j, l]``.
    """
    out = np.asarray(ops[0], dtype=complex)
    for op in ops[1:]:
        out = np.kron(out, np.asarray(op, dtype=complex))
    return out


def matrix_inv_sqrt(m, tol=TOL_STRUCT):
    """Inverse square root of a Hermitian positive matrix via eigendecomposition.

    Eigenvalues below ``tol`` are treated as exactly zero, so the result is
    the pseudo-inverse square root on the support of ``m``.

    Raises
    ------
    NotPositive
        If any eigenvalue lies below ``-tol``.
    """
    m = np.asarray(m, dtype=complex)
    if not is_hermitian(m, tol):
        raise NotPositive("matrix is not Hermitian within tolerance")
    w, v = np.linalg.eigh(m)
    if w.min() < -tol:
        raise NotPositive(f"eigenvalue {w.min():.3e} below -{tol:.1e}")
    inv = np.where(w > tol, 1.0 / np.sqrt(np.maximum(w, tol)), 0.0)
    return (v * inv) @ dagger(v)


def support_projector(m, tol=TOL_STRUCT):
    """Projector onto the span of eigenvectors of ``m`` with eigenvalue > tol."""
    w, v = np.linalg.eigh(np.asarray(m, dtype=complex))
    keep = w > tol
    return (v[:, keep]) @ dagger(v[:, keep])


def entropy_of_spectrum(eigenvalues):
    """Shannon entropy (bits) of a nonnegative spectrum, with 0 log 0 := 0."""
    ev = np.clip(np.real(np.asarray(eigenvalues)), 0.0, 1.0)
    ev = ev[ev > 1e-15]
    return float(-(ev * np.log2(ev)).sum())


def von_neumann_entropy(rho, tol=TOL_STRUCT):
    """Von Neumann entropy -Tr[rho log2 rho] in bits.

    Eigenvalues are clamped to [0, 1] before taking logs.

    Raises
    ------
    NotDensityMatrix
        If ``rho`` violates Hermiticity, unit trace or positivity beyond
        ``tol``.
    """
    rho = np.asarray(rho, dtype=complex)
    if not is_hermitian(rho, tol):
        raise NotDensityMatrix("not Hermitian within tolerance")
    if abs(np.trace(rho).real - 1.0) > tol:
        raise NotDensityMatrix(f"trace {np.trace(rho).real!r} != 1")
    w = np.linalg.eigvalsh(rho)
    if w.min() < -tol:
        raise NotDensityMatrix(f"negative eigenvalue {w.min():.3e}")
    return entropy_of_spectrum(w)


def partial_trace(rho, dims, keep):
    """Partial trace of a multipartite operator.

    Parameters
    ----------
    rho : (D, D) array with D = prod(dims)
    dims : tuple of subsystem dimensions
    keep : iterable of subsystem indices to keep (in their original order)
    """
    dims = tuple(int(d) for d in dims)
    rho = np.asarray(rho, dtype=complex)
    D = int(np.prod(dims))
    if rho.shape != (D, D):
        raise DimensionMismatch(f"shape {rho.shape} incompatible with dims {dims}")
    n = len(dims)
    keep = sorted(keep)
    t = rho.reshape(dims + dims)
    # contract traced subsystems from the highest index down; each np.trace
    # removes one row axis and one column axis, shifting later column axes
    for count, i in enumerate(sorted((i for i in range(n) if i not in keep),
                                     reverse=True)):
        t = np.trace(t, axis1=i, axis2=i + n - count)
    d_keep = int(np.prod([dims[i] for i in keep])) if keep else 1
    return t.reshape(d_keep, d_keep)


def partial_transpose(rho, dims, subsystem=1):
    """Partial transpose of a bipartite operator over one subsystem.

    ``dims = (da, db)``; ``subsystem`` 0 transposes the first factor,
    1 the second.
    """
    da, db = dims
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (da * db, da * db):
        raise DimensionMismatch(f"shape {rho.shape} incompatible with dims {dims}")
    t = rho.reshape(da, db, da, db)
    if subsystem == 0:
        t = t.transpose(2, 1, 0, 3)
    else:
        t = t.transpose(0, 3, 2, 1)
    return t.reshape(da * db, da * db)


def trace_norm(m):
    """Sum of singular values; for Hermitian m, sum of |eigenvalues|."""
    m = np.asarray(m, dtype=complex)
    if is_hermitian(m):
        return float(np.abs(np.linalg.eigvalsh(m)).sum())
    return float(np.linalg.svd(m, compute_uv=False).sum())


def negativity(psi, dims):
    """Entanglement negativity (||rho^{T_B}||_1 - 1)/2 of a pure state.

    Parameters
    ----------
    psi : state vector of length dims[0] * dims[1]
    dims : (da, db) bipartition, row-major tensor convention
    """
    psi = np.asarray(psi, dtype=complex)
    da, db = dims
    if psi.shape != (da * db,):
        raise DimensionMismatch(f"vector length {psi.shape} != {da}*{db}")
    rho = projector(psi)
    return (trace_norm(partial_transpose(rho, dims)) - 1.0) / 2.0


def random_unitary(dim, rng):
    """Haar-random unitary via QR of a complex Ginibre matrix."""
    a = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    q, r = np.linalg.qr(a)
    return q * np.exp(-1j * np.angle(np.diag(r)))


def random_pure_state(dim, rng):
    """Haar-random unit vector."""
    v = rng.normal(size=dim) + 1j * rng.normal(size=dim)
    return v / np.linalg.norm(v)


def random_density_matrix(dim, rng):
    """Full-rank random density operator (normalised Wishart)."""
    a = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    rho = a @ dagger(a)
    return rho / np.trace(rho).real


PAULI_X = np.array([[0, 1], [1, 0]], dtype=complex)
PAULI_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
PAULI_Z = np.array([[1, 0], [0, -1]], dtype=complex)
