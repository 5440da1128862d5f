"""Dense complex linear algebra used by the simulators and learners.

Vectors are 1-D ``complex128`` arrays and matrices are 2-D ``complex128``
arrays acting on column vectors by left multiplication.
"""

from __future__ import annotations

import numpy as np

TOL_RANK = 1e-9
TOL_ISO = 1e-8
TOL_ORTHO = 1e-10


class DimensionError(ValueError):
    """Operands have incompatible shapes."""


class IsometryViolation(ValueError):
    """The requested partial map does not preserve inner products."""


def as_vector(v) -> np.ndarray:
    v = np.asarray(v, dtype=np.complex128)
    if v.ndim != 1 or v.shape[0] < 1:
        raise DimensionError(f"expected a non-empty 1-D vector, got shape {v.shape}")
    return v


def unitarity_defect(M) -> float:
    """Frobenius norm of ``M^dagger M - I``; zero iff ``M`` is unitary."""
    M = np.asarray(M, dtype=np.complex128)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise DimensionError(f"unitarity_defect needs a square matrix, got shape {M.shape}")
    return float(np.linalg.norm(M.conj().T @ M - np.eye(M.shape[0]), "fro"))


def haar_unitary(n: int, rng: np.random.Generator) -> np.ndarray:
    """Draw an ``n x n`` unitary from the Haar measure.

    QR of a complex Ginibre matrix, with the phases of ``diag(R)`` pushed
    into ``Q`` so the distribution is exactly Haar.
    """
    z = (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / np.sqrt(2.0)
    q, r = np.linalg.qr(z)
    d = np.diag(r)
    return q * (d / np.abs(d))


class OrthoFrame:
    """Growing orthonormal set of vectors in ``C^dim``.

    The frame is mutated in place by :func:`extend_frame` and must not be
    shared between concurrent callers.
    """

    def __init__(self, dim: int, vectors=()):
        if dim < 1:
            raise DimensionError("frame dimension must be positive")
        self.dim = int(dim)
        self.vectors: list[np.ndarray] = []
        for v in vectors:
            v = as_vector(v)
            if v.shape[0] != self.dim:
                raise DimensionError(f"frame vector has length {v.shape[0]}, expected {self.dim}")
            self.vectors.append(v.copy())

    def __len__(self) -> int:
        return len(self.vectors)

    def __iter__(self):
        return iter(self.vectors)

    def __getitem__(self, j: int) -> np.ndarray:
        return self.vectors[j]

    def matrix(self) -> np.ndarray:
        """Frame vectors as the columns of a ``dim x len(self)`` matrix."""
        if not self.vectors:
            return np.zeros((self.dim, 0), dtype=np.complex128)
        return np.column_stack(self.vectors)

    def gram_defect(self) -> float:
        """Largest entrywise deviation of the Gram matrix from the identity."""
        if not self.vectors:
            return 0.0
        F = self.matrix()
        return float(np.max(np.abs(F.conj().T @ F - np.eye(len(self)))))

    def copy(self) -> "OrthoFrame":
        return OrthoFrame(self.dim, self.vectors)

    def __repr__(self) -> str:
        return f"OrthoFrame(dim={self.dim}, size={len(self)})"


def residual(v, frame: OrthoFrame) -> tuple[np.ndarray, float, np.ndarray]:
    """Project ``v`` off the span of ``frame``.

    Modified Gram-Schmidt followed by one re-orthogonalization pass; the
    coefficients of both passes are accumulated.

    Returns
    -------
    r : ndarray
        ``v - sum_j <f_j, v> f_j``.
    norm : float
        ``||r||``.
    coeffs : ndarray
        The projection coefficients ``<f_j, v>``, one per frame vector.
    """
    v = as_vector(v)
    if v.shape[0] != frame.dim:
        raise DimensionError(f"vector has length {v.shape[0]}, frame dimension is {frame.dim}")
    r = v.copy()
    coeffs = np.zeros(len(frame), dtype=np.complex128)
    for _ in range(2):
        for j, f in enumerate(frame.vectors):
            c = np.vdot(f, r)
            coeffs[j] += c
            r -= c * f
    return r, float(np.linalg.norm(r)), coeffs


def extend_frame(frame: OrthoFrame, v, tol_rank: float = TOL_RANK) -> bool:
    """Append the normalized residual of ``v`` to ``frame`` if it exceeds ``tol_rank``.

    Returns True when the frame grew. The zero vector never extends a frame.
    """
    if tol_rank <= 0:
        raise ValueError("tol_rank must be positive")
    r, norm, _ = residual(v, frame)
    if norm <= tol_rank or len(frame) >= frame.dim:
        return False
    frame.vectors.append(r / norm)
    return True


def orthonormal_complement(frame: OrthoFrame, tol_rank: float = TOL_RANK) -> OrthoFrame:
    """Orthonormal basis of the complement of ``span(frame)``.

    Candidates are the standard basis vectors in index order; near-dependent
    ones are skipped, so the result is deterministic.
    """
    full = frame.copy()
    start = len(full)
    eye = np.eye(frame.dim, dtype=np.complex128)
    for i in range(frame.dim):
        if len(full) == frame.dim:
            break
        extend_frame(full, eye[:, i], tol_rank)
    if len(full) != frame.dim:
        raise ArithmeticError("failed to complete the frame to a basis")
    return OrthoFrame(frame.dim, full.vectors[start:])


def _orthonormalize(columns: np.ndarray) -> OrthoFrame:
    """MGS with re-orthogonalization of columns assumed to be nearly orthonormal."""
    out = OrthoFrame(columns.shape[0])
    for j in range(columns.shape[1]):
        r, norm, _ = residual(columns[:, j], out)
        if norm == 0.0:
            raise IsometryViolation(f"image vector {j} is dependent on the previous images")
        out.vectors.append(r / norm)
    return out


def complete_isometry(domain_frame: OrthoFrame, image_vectors, tol_iso: float = TOL_ISO,
                      tol_rank: float = TOL_RANK) -> np.ndarray:
    """Extend the map ``domain_frame[j] -> image_vectors[j]`` to a unitary.

    The images are re-orthonormalized (they may carry roundoff), then the
    orthonormal complements of domain and image, each seeded from the
    standard basis, are paired in order.

    Raises
    ------
    IsometryViolation
        If the Gram matrix of the images differs from that of the domain by
        more than ``tol_iso`` in any entry.
    """
    n = domain_frame.dim
    images = [as_vector(y) for y in image_vectors]
    if len(images) != len(domain_frame):
        raise DimensionError(f"{len(domain_frame)} frame vectors but {len(images)} images")
    for y in images:
        if y.shape[0] != n:
            raise DimensionError(f"image has length {y.shape[0]}, expected {n}")
    D = domain_frame.matrix()
    Y = np.column_stack(images) if images else np.zeros((n, 0), dtype=np.complex128)

    gap = np.abs(D.conj().T @ D - Y.conj().T @ Y)
    if gap.size and gap.max() > tol_iso:
        i, j = np.unravel_index(np.argmax(gap), gap.shape)
        raise IsometryViolation(
            f"inner products not preserved: |<d{i},d{j}> - <y{i},y{j}>| = {gap[i, j]:.3e} > {tol_iso:g}")

    image_frame = _orthonormalize(Y)
    domain_full = np.hstack([D, orthonormal_complement(domain_frame, tol_rank).matrix()])
    image_full = np.hstack([image_frame.matrix(), orthonormal_complement(image_frame, tol_rank).matrix()])
    return image_full @ domain_full.conj().T
