"""State discrimination on compound sub-ensembles and the emergent MUBs.

Discriminating the four equiprobable states of one Latin-square row block
(one orbit of {1, X^2, Z^2, X^2 Z^2} inside a defining SIC) with the
square-root ("pretty good") measurement yields an orthonormal basis.  The
four bases obtained from the four rows are pairwise mutually unbiased, do
not depend on the column k, are unbiased to the computational basis as
well, and every basis element carries entanglement negativity 1/sqrt(8):
a complete iso-entangled set of five MUBs in dimension four.

A second discrimination task recovers the fifth MUB directly: sample a
state from one column and guess its row; the optimal measurement is the
computational basis.
"""

import itertools

import numpy as np
from scipy.optimize import linear_sum_assignment

from .linalg import (TOL_DERIVED, TOL_STRUCT, dagger, matrix_inv_sqrt,
                     projector)

MUB_OVERLAP = 0.25  # |<a|b>|^2 across unbiased bases in d=4


class SingularGram(ValueError):
    """Ensemble Gram operator has a near-zero eigenvalue (states dependent)."""


class UnbiasednessViolation(ValueError):
    """A cross-basis overlap differs from 1/d beyond tolerance."""


def assert_orthonormal(basis, tol=TOL_DERIVED):
    basis = np.asarray(basis)
    gram = basis.conj() @ basis.T
    if np.abs(gram - np.eye(len(basis))).max() > tol:
        raise ValueError("basis is not orthonormal within tolerance")


def pretty_good_basis(c, row, k, tol=TOL_STRUCT):
    """Square-root-measurement basis for one row block of the compound.

    The ensemble is the four equiprobable states of Latin-square row ``row``
    in defining SIC ``k`` (the orbit of the subgroup {1, X^2, Z^2, X^2 Z^2}).
    With T the ensemble operator sum, the vectors T^{-1/2} |psi> are already
    orthonormal because four linearly independent rank-one terms resolve the
    identity; they are normalised once more to absorb roundoff.

    Returns a (4, 4) array whose rows are the basis vectors, ordered like the
    ensemble.
    """
    vecs = c.row_states(row, k)
    gram_op = sum(projector(v) for v in vecs)
    w = np.linalg.eigvalsh(gram_op)
    if w.min() < tol:
        raise SingularGram(f"ensemble Gram eigenvalue {w.min():.3e}")
    root = matrix_inv_sqrt(gram_op, tol)
    out = np.array([root @ v for v in vecs])
    out /= np.linalg.norm(out, axis=1, keepdims=True)
    assert_orthonormal(out)
    return out


def pgm_success_probability(c, row, k):
    """Success probability of the square-root measurement on its row ensemble."""
    vecs = c.row_states(row, k)
    basis = pretty_good_basis(c, row, k)
    return float(sum(0.25 * np.abs(b.conj() @ v) ** 2
                     for b, v in zip(basis, vecs)))


def bases_equal_mod_phase(b1, b2, tol=TOL_DERIVED):
    """Set equality of two orthonormal bases up to per-vector phases."""
    overlap = np.abs(np.asarray(b1).conj() @ np.asarray(b2).T)
    return (np.abs(overlap.max(axis=0) - 1.0).max() <= tol
            and np.abs(overlap.max(axis=1) - 1.0).max() <= tol)


def mutually_unbiased(b1, b2, tol=TOL_DERIVED):
    overlap = np.abs(np.asarray(b1).conj() @ np.asarray(b2).T) ** 2
    return np.abs(overlap - MUB_OVERLAP).max() <= tol


def extract_mubs(c, tol=TOL_DERIVED):
    """The complete five-MUB family: four row bases plus the computational one.

    Raises
    ------
    UnbiasednessViolation
        Naming the offending basis pair if any cross overlap is off 1/4.
    """
    bases = [pretty_good_basis(c, row, 0) for row in range(4)]
    bases.append(np.eye(4, dtype=complex))
    for i, j in itertools.combinations(range(len(bases)), 2):
        if not mutually_unbiased(bases[i], bases[j], tol):
            raise UnbiasednessViolation(f"bases {i} and {j} are not unbiased")
    return bases


# ---------------------------------------------------------------------------
# minimum-error optimality
# ---------------------------------------------------------------------------

def _as_density(op):
    op = np.asarray(op, dtype=complex)
    return projector(op) if op.ndim == 1 else op


def verify_min_error_optimality(states, priors, povm_basis,
                                herm_tol=TOL_STRUCT, eig_tol=1e-8):
    """Check the standard optimality conditions for minimum-error discrimination.

    With Gamma = sum_i p_i Pi_i rho_i, optimality of the projective
    measurement holds iff Gamma is Hermitian and Gamma - p_i rho_i >= 0 for
    every hypothesis i.  ``states`` may be vectors or density operators; the
    i-th POVM element is paired with the i-th state.
    """
    rhos = [_as_density(s) for s in states]
    priors = np.asarray(priors, dtype=float)
    basis = np.asarray(povm_basis, dtype=complex)
    if len(rhos) != len(basis) or basis.shape[1] != rhos[0].shape[0]:
        from .linalg import DimensionMismatch
        raise DimensionMismatch("states/POVM size mismatch")
    effects = [projector(b) for b in basis]
    gamma = sum(p * e @ r for p, e, r in zip(priors, effects, rhos))
    if np.abs(gamma - dagger(gamma)).max() > herm_tol:
        return False
    gamma = (gamma + dagger(gamma)) / 2
    for p, r in zip(priors, rhos):
        if np.linalg.eigvalsh(gamma - p * r).min() < -eig_tol:
            return False
    return True


def row_discrimination_ensemble(c, k):
    """Mixed-state hypotheses for guessing the row of a column-k state.

    Returns (states, priors): the four row mixtures (1/4) sum over the orbit,
    reordered by maximum-likelihood assignment so that hypothesis m pairs
    with computational outcome m.
    """
    mixtures = []
    for row in range(4):
        vecs = c.row_states(row, k)
        mixtures.append(sum(projector(v) for v in vecs) / 4.0)
    likelihood = np.array([[mix[m, m].real for m in range(4)] for mix in mixtures])
    rows, outcomes = linear_sum_assignment(-likelihood)
    order = np.empty(4, dtype=int)
    for r, m in zip(rows, outcomes):
        order[m] = r
    return [mixtures[order[m]] for m in range(4)], np.full(4, 0.25)
