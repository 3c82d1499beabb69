"""Independent reference constructions used only by the tests.

These rebuild the dynamics from the Lindblad operator form through
column-stacked superoperators, a route that shares no code with the
package's assembly loops.
"""
import numpy as np

S0 = np.eye(2, dtype=complex)
SX = np.array([[0, 1], [1, 0]], dtype=complex)
SY = np.array([[0, -1j], [1j, 0]], dtype=complex)
SZ = np.diag([1.0 + 0j, -1.0])
PAULIS = [S0, SX, SY, SZ]


def _spre(a):
    return np.kron(np.eye(a.shape[0]), a)


def _spost(a):
    return np.kron(a.T, np.eye(a.shape[0]))


def lindblad_superop(a, ops, ham=None):
    """Column-stacked superoperator of
    rho -> -i[H, rho] + sum a_ij (F_j rho F_i^dag - {F_i^dag F_j, rho}/2)."""
    d = ops[0].shape[0]
    sup = np.zeros((d * d, d * d), dtype=complex)
    if ham is not None:
        sup += -1j * (_spre(ham) - _spost(ham))
    for i, fi in enumerate(ops):
        for j, fj in enumerate(ops):
            fifj = fi.conj().T @ fj
            sup += a[i, j] * (_spre(fj) @ _spost(fi.conj().T) - 0.5 * (_spre(fifj) + _spost(fifj)))
    return sup


def pauli_affine_map(sup, basis):
    """Real matrix M with M[p, q] = Tr[P_p S(P_q)] / d for a Hermitian basis."""
    d = basis[0].shape[0]
    cols = []
    for q in basis:
        out = (sup @ q.reshape(-1, order="F")).reshape(d, d, order="F")
        cols.append([np.trace(p @ out).real / d for p in basis])
    return np.array(cols).T


def bloch_affine(a, omega_eff, n):
    """(G, d) with dr/dt = G r + d for a single qubit with H = omega_eff n.sigma / 2."""
    ham = 0.5 * omega_eff * sum(n[i] * PAULIS[i + 1] for i in range(3))
    sup = lindblad_superop(a, PAULIS[1:], ham)
    m = pauli_affine_map(sup, PAULIS)
    return m[1:, 1:], m[1:, 0]


def two_atom_generator(a):
    """16x16 generator on (1, v0i, vi0, vij) components."""
    coll = [np.kron(PAULIS[i], S0) + np.kron(S0, PAULIS[i]) for i in range(1, 4)]
    sup = lindblad_superop(a, coll)
    labels = ([(0, 0)] + [(0, i) for i in range(1, 4)] + [(i, 0) for i in range(1, 4)]
              + [(i, j) for i in range(1, 4) for j in range(1, 4)])
    basis = [np.kron(PAULIS[m], PAULIS[v]) for m, v in labels]
    return pauli_affine_map(sup, basis)


def random_state(rng, dim=4, rank=None):
    rank = rank or dim
    g = rng.normal(size=(dim, rank)) + 1j * rng.normal(size=(dim, rank))
    rho = g @ g.conj().T
    return rho / np.trace(rho).real


def concurrence_eig(rho):
    """Wootters concurrence from the non-Hermitian product rho rho~."""
    yy = np.kron(SY, SY)
    rt = yy @ rho.conj() @ yy
    ev = np.linalg.eigvals(rho @ rt)
    lam = np.sort(np.sqrt(np.abs(ev.real)))[::-1]
    return max(0.0, lam[0] - lam[1] - lam[2] - lam[3])
