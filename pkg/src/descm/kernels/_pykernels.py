"""Pure numpy assembly kernels (fallback when the compiled module is absent)."""
import numpy as np
from scipy.linalg import toeplitz

PI2_3 = np.pi * np.pi / 3.0


def assemble(vtilde, s, h):
    """Build ``H`` and the reduced matrix ``A = S H S`` with ``S = diag(s)``.

    ``H[j, k] = -delta2(j - k) / h**2 + vtilde[k] * [j == k]``.  Entries
    depend on ``|j - k|`` only and ``A`` uses the commutative product
    ``s[j] * s[k]``, so both matrices are exactly symmetric.
    """
    vtilde = np.ascontiguousarray(vtilde, dtype=float)
    s = np.ascontiguousarray(s, dtype=float)
    size = vtilde.shape[0]
    inv_h2 = 1.0 / (h * h)
    m = np.arange(size, dtype=float)
    sign = np.where(np.arange(size) % 2 == 0, 1.0, -1.0)
    col = np.empty(size)
    col[0] = PI2_3 * inv_h2
    col[1:] = (2.0 * sign[1:] / (m[1:] * m[1:])) * inv_h2
    H = toeplitz(col)
    H[np.diag_indices(size)] = col[0] + vtilde
    A = H * np.multiply.outer(s, s)
    return H, A
