"""
Sparse Hermitian operator stored as its upper triangle.
"""

from dataclasses import dataclass
from functools import cached_property
from typing import Iterator, Optional

import numpy as np
from scipy import sparse

from ..schemas.lattice import FluxRatio


@dataclass(frozen=True, eq=False)
class HermitianOperatorRep:
    """Hermitian matrix kept as upper-triangle COO entries (row <= col).

    Entries are sorted row-major with duplicates summed and exact zeros
    dropped. The full matrix is ``U + U^H - diag(U)``. Energies are in
    units of J.

    Attributes:
        dim: Matrix dimension.
        rows: Row index of every stored entry.
        cols: Column index of every stored entry.
        values: Complex amplitude of every stored entry.
        n_x: Lattice extent along x, 0 when the operator is not a lattice operator.
        n_y: Lattice extent along y.
        flux: Flux the operator was built with, if any.
        J: Hopping energy it was built with.
    """

    dim: int
    rows: np.ndarray
    cols: np.ndarray
    values: np.ndarray
    n_x: int = 0
    n_y: int = 0
    flux: Optional[FluxRatio] = None
    J: float = 0.0
    energy_unit: str = "J"

    @classmethod
    def from_upper(cls, dim: int, rows, cols, values, **kwargs) -> "HermitianOperatorRep":
        """Canonicalise raw upper-triangle triplets: sum duplicates, sort, drop zeros."""
        rows = np.asarray(rows, dtype=np.int64)
        cols = np.asarray(cols, dtype=np.int64)
        values = np.asarray(values, dtype=np.complex128)
        if np.any(rows > cols):
            raise ValueError("upper-triangle entries need row <= col")
        upper = sparse.coo_matrix((values, (rows, cols)), shape=(dim, dim)).tocsr()
        upper.sum_duplicates()
        upper.eliminate_zeros()
        coo = upper.tocoo()
        order = np.lexsort((coo.col, coo.row))
        diag = coo.row[order] == coo.col[order]
        vals = coo.data[order].copy()
        # diagonal of a Hermitian matrix is real
        vals[diag] = vals[diag].real
        return cls(
            dim=dim,
            rows=coo.row[order].astype(np.int64),
            cols=coo.col[order].astype(np.int64),
            values=vals,
            **kwargs,
        )

    @classmethod
    def from_dense(cls, matrix: np.ndarray, **kwargs) -> "HermitianOperatorRep":
        matrix = np.asarray(matrix, dtype=np.complex128)
        rows, cols = np.nonzero(np.triu(matrix))
        return cls.from_upper(matrix.shape[0], rows, cols, matrix[rows, cols], **kwargs)

    @property
    def nnz(self) -> int:
        return int(self.values.size)

    def entries(self) -> Iterator[tuple[int, int, complex]]:
        """Stored (row, col, amplitude) triplets in row-major order."""
        for row, col, value in zip(self.rows, self.cols, self.values):
            yield int(row), int(col), complex(value)

    @cached_property
    def matrix(self) -> sparse.csr_matrix:
        """Full Hermitian matrix in CSR form."""
        upper = sparse.coo_matrix((self.values, (self.rows, self.cols)), shape=(self.dim, self.dim))
        diag = sparse.diags(upper.diagonal())
        full = (upper + upper.conj().T - diag).tocsr()
        full.sort_indices()
        return full

    def to_dense(self) -> np.ndarray:
        return self.matrix.toarray()

    @cached_property
    def eigensystem(self) -> tuple[np.ndarray, np.ndarray]:
        """Ascending eigenvalues and orthonormal eigenvectors (columns)."""
        return np.linalg.eigh(self.to_dense())

    def eigenvalues(self) -> np.ndarray:
        if "eigensystem" in self.__dict__:
            return self.eigensystem[0]
        return np.linalg.eigvalsh(self.to_dense())

    def apply(self, psi: np.ndarray) -> np.ndarray:
        return self.matrix @ psi

    def expectation(self, psi: np.ndarray) -> float:
        """Real expectation value <psi|H|psi>."""
        return float(np.real(np.vdot(psi, self.matrix @ psi)))

    def spectral_interval(self) -> tuple[float, float]:
        """Gershgorin interval containing the whole spectrum."""
        full = self.matrix
        diag = full.diagonal().real
        radius = np.asarray(abs(full).sum(axis=1)).ravel() - np.abs(diag)
        if self.dim == 0:
            return 0.0, 0.0
        return float(np.min(diag - radius)), float(np.max(diag + radius))
