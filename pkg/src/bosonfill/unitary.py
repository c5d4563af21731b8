"""Haar-random interferometer matrices and their on-disk format."""
from __future__ import annotations

import hashlib

import numpy as np

UNITARITY_TOL = 1e-10


def haar_random_unitary(m: int, seed) -> np.ndarray:
    """Draw an m x m Haar-distributed unitary, deterministic for a seed.

    A complex Ginibre matrix is QR-factorised and the Q factor is rephased
    by the sign of R's diagonal; without that fix plain QR output is not
    Haar-distributed.
    """
    if m < 1:
        raise ValueError(f"dimension must be >= 1, got {m}")
    rng = np.random.default_rng(seed)
    z = (rng.standard_normal((m, m)) + 1j * rng.standard_normal((m, m))) / np.sqrt(2.0)
    q, r = np.linalg.qr(z)
    d = np.where(np.diagonal(r) == 0, 1.0, np.diagonal(r))  # zero diag has measure zero
    return q * (d / np.abs(d))


def unitarity_defect(lam: np.ndarray) -> float:
    """Max-norm deviation of lam @ lam^dagger from the identity."""
    lam = np.asarray(lam)
    eye = np.eye(lam.shape[0])
    return float(np.abs(lam @ lam.conj().T - eye).max())


def check_unitary(lam: np.ndarray, tol: float = UNITARITY_TOL) -> np.ndarray:
    lam = np.asarray(lam, dtype=np.complex128)
    if lam.ndim != 2 or lam.shape[0] != lam.shape[1]:
        raise ValueError(f"unitary must be square, got shape {lam.shape}")
    defect = unitarity_defect(lam)
    if defect >= tol:
        raise ValueError(f"matrix is not unitary: defect {defect:.3e} >= {tol:.1e}")
    return lam


def unitary_fingerprint(lam: np.ndarray) -> str:
    """Short stable hash identifying a matrix (used in sample provenance)."""
    arr = np.ascontiguousarray(np.asarray(lam, dtype=np.complex128))
    digest = hashlib.sha256(arr.tobytes()).hexdigest()
    return digest[:16]


def save_unitary(path, lam: np.ndarray, header_lines=()) -> None:
    """Write the text format: optional '#' comments, a line with m, then
    m rows of 2m floats alternating real/imag at full double precision."""
    lam = np.asarray(lam, dtype=np.complex128)
    m = lam.shape[0]
    with open(path, "w") as fh:
        for line in header_lines:
            fh.write(f"# {line}\n")
        fh.write(f"{m}\n")
        for row in lam:
            parts = []
            for v in row:
                parts.append(f"{v.real:.17g}")
                parts.append(f"{v.imag:.17g}")
            fh.write(" ".join(parts) + "\n")


def load_unitary(path) -> np.ndarray:
    with open(path) as fh:
        lines = [ln.strip() for ln in fh
                 if ln.strip() and not ln.lstrip().startswith("#")]
    if not lines:
        raise ValueError(f"{path}: empty unitary file")
    try:
        m = int(lines[0])
    except ValueError as exc:
        raise ValueError(f"{path}: first line must be the dimension m") from exc
    if len(lines) != m + 1:
        raise ValueError(f"{path}: expected {m} matrix rows, found {len(lines) - 1}")
    lam = np.empty((m, m), dtype=np.complex128)
    for i, line in enumerate(lines[1:]):
        vals = line.split()
        if len(vals) != 2 * m:
            raise ValueError(f"{path}: row {i} has {len(vals)} values, expected {2 * m}")
        floats = np.array([float(v) for v in vals])
        lam[i] = floats[0::2] + 1j * floats[1::2]
    return lam
