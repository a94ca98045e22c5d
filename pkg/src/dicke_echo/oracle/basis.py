"""Truncated Fock x collective-spin basis and Dicke Hamiltonian assembly."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp

from ..exceptions import CutoffTooSmall, InvalidParameters
from ..model import DickeParams


@dataclass(frozen=True)
class FockSpinBasis:
    """Product basis |n> (x) |J, m> with ``0 <= n <= n_max`` and J = N/2.

    Flat index is ``n * (N + 1) + (m + J)``: the spin label varies fastest.
    """

    n_max: int
    n_atoms: int

    def __post_init__(self):
        if self.n_max < 0:
            raise CutoffTooSmall(f"n_max must be >= 0, got {self.n_max}")
        if self.n_atoms < 1:
            raise InvalidParameters(f"n_atoms must be >= 1, got {self.n_atoms}")

    @property
    def j(self) -> float:
        return self.n_atoms / 2.0

    @property
    def spin_dim(self) -> int:
        return self.n_atoms + 1

    @property
    def dim(self) -> int:
        return (self.n_max + 1) * (self.n_atoms + 1)

    def index(self, n: int, m: float) -> int:
        k = m + self.j
        if not (0 <= n <= self.n_max) or k != int(k) or not (0 <= k <= self.n_atoms):
            raise IndexError(f"(n={n}, m={m}) is outside the basis")
        return int(n) * self.spin_dim + int(k)

    def label(self, index: int) -> tuple:
        if not 0 <= index < self.dim:
            raise IndexError(f"index {index} outside basis of dimension {self.dim}")
        n, k = divmod(int(index), self.spin_dim)
        return n, k - self.j

    def photon_numbers(self) -> np.ndarray:
        """Photon number of every basis state, in flat order."""
        return np.repeat(np.arange(self.n_max + 1), self.spin_dim)

    def m_values(self) -> np.ndarray:
        return np.tile(np.arange(self.spin_dim) - self.j, self.n_max + 1)

    def parity(self) -> np.ndarray:
        """Eigenvalues of exp(i pi (a^dag a + J_z + J)) on the basis, as +-1."""
        k = np.tile(np.arange(self.spin_dim), self.n_max + 1)
        return np.where((self.photon_numbers() + k) % 2 == 0, 1, -1)

    def reshape(self, vector) -> np.ndarray:
        """View a flat state as an ``(n_max + 1, N + 1)`` amplitude array."""
        return np.asarray(vector).reshape(self.n_max + 1, self.spin_dim)


@dataclass(frozen=True)
class SparseHamiltonian:
    """Real symmetric Hamiltonian on a :class:`FockSpinBasis`.

    ``dropped_couplings`` counts matrix elements that would have connected
    the top Fock level to ``n_max + 1`` and were left out.
    """

    matrix: sp.csr_matrix
    basis: FockSpinBasis
    dropped_couplings: int = 0
    symmetric: bool = True
    metadata: dict = field(default_factory=dict)

    @property
    def dimension(self) -> int:
        return self.matrix.shape[0]

    def triplets(self):
        coo = self.matrix.tocoo()
        return list(zip(coo.row.tolist(), coo.col.tolist(), coo.data.tolist()))

    def dense(self) -> np.ndarray:
        return self.matrix.toarray()

    def shifted(self, constant: float) -> "SparseHamiltonian":
        """Same Hamiltonian plus ``constant`` times the identity."""
        eye = sp.identity(self.dimension, format="csr")
        return SparseHamiltonian(
            (self.matrix + constant * eye).tocsr(),
            self.basis,
            self.dropped_couplings,
            self.symmetric,
            dict(self.metadata, constant=self.metadata.get("constant", 0.0) + constant),
        )


def build_hamiltonian(p: DickeParams, basis: FockSpinBasis) -> SparseHamiltonian:
    """Assemble ``omega a^dag a + omega0 J_z + g/sqrt(N) (a + a^dag)(J_+ + J_-)``.

    Counter-rotating terms are kept. ``p.delta_tilde`` is ignored: pass
    :func:`~dicke_echo.model.shifted_params` output to build the
    conditional Hamiltonians.
    """
    if basis.n_atoms != p.n_atoms:
        raise InvalidParameters(
            f"basis built for N={basis.n_atoms} but params have N={p.n_atoms}"
        )
    if basis.n_max < 1 and p.g > 0:
        raise CutoffTooSmall("a coupled Hamiltonian needs n_max >= 1")

    d = basis.spin_dim
    j = basis.j
    n_photon = np.arange(basis.n_max + 1)
    k = np.arange(d)
    m = k - j

    diag = (p.omega * n_photon[:, None] + p.omega0 * m[None, :]).ravel()
    rows = [np.arange(basis.dim)]
    cols = [np.arange(basis.dim)]
    vals = [diag]

    if p.g > 0:
        scale = p.g / np.sqrt(p.n_atoms)
        # <n+1|a^dag|n> and <m+1|J_+|m>
        fock = np.sqrt(n_photon[:-1] + 1.0)
        ladder = np.sqrt(j * (j + 1.0) - m[:-1] * (m[:-1] + 1.0))
        n_lo = n_photon[:-1]
        for dk in (+1, -1):
            # (n, k) -> (n + 1, k + dk); J_+ for dk=+1 (rotating), J_- for dk=-1
            if dk == +1:
                k_from, spin = k[:-1], ladder
            else:
                k_from, spin = k[1:], ladder
            k_to = k_from + dk
            amp = scale * fock[:, None] * spin[None, :]
            r = (n_lo[:, None] * d + k_from[None, :]).ravel()
            c = ((n_lo[:, None] + 1) * d + k_to[None, :]).ravel()
            a = amp.ravel()
            rows += [r, c]
            cols += [c, r]
            vals += [a, a]
        dropped = 2 * (d - 1)
    else:
        dropped = 0

    matrix = sp.coo_matrix(
        (np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))),
        shape=(basis.dim, basis.dim),
    ).tocsr()
    matrix.sum_duplicates()
    matrix.eliminate_zeros()
    return SparseHamiltonian(
        matrix=matrix,
        basis=basis,
        dropped_couplings=dropped,
        metadata={"params": p.to_dict(), "n_max": basis.n_max},
    )
