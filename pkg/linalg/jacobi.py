"""
eigenvalues, vectors = jacobi_eigh(a)

Cyclic Jacobi eigensolver for small dense symmetric matrices. Returns eigenvalues in
ascending order and the eigenvectors as the columns of `vectors`.
"""
import math

import numpy as np


def _off_norm(a):
    return math.sqrt(2.0 * float(np.sum(np.triu(a, 1) ** 2)))


def jacobi_eigh(a, tol=1.0e-14, max_sweeps=100):
    a = np.array(a, dtype=np.float64)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"Expected a square matrix, got shape {a.shape}.")
    n = a.shape[0]
    a = 0.5 * (a + a.T)
    p = np.identity(n)
    if n == 0:
        return np.zeros(0), p
    scale = float(np.linalg.norm(a))
    if scale == 0.0:
        return np.zeros(n), p

    for sweep in range(max_sweeps):
        if _off_norm(a) <= tol * scale:
            break
        for k in range(n - 1):
            for l in range(k + 1, n):
                if a[k, l] == 0.0:
                    continue
                # negligible against both diagonal entries
                g = 100.0 * abs(a[k, l])
                if sweep > 3 and abs(a[k, k]) + g == abs(a[k, k]) and abs(a[l, l]) + g == abs(a[l, l]):
                    a[k, l] = a[l, k] = 0.0
                    continue
                diff = a[l, l] - a[k, k]
                if abs(a[k, l]) < abs(diff) * 1.0e-36:
                    t = a[k, l] / diff
                else:
                    phi = diff / (2.0 * a[k, l])
                    t = 1.0 / (abs(phi) + math.sqrt(phi ** 2 + 1.0))
                    if phi < 0.0:
                        t = -t
                c = 1.0 / math.sqrt(t ** 2 + 1.0)
                s = t * c
                # rotate rows/columns k and l
                col_k = a[:, k].copy()
                col_l = a[:, l].copy()
                a[:, k] = c * col_k - s * col_l
                a[:, l] = s * col_k + c * col_l
                row_k = a[k, :].copy()
                row_l = a[l, :].copy()
                a[k, :] = c * row_k - s * row_l
                a[l, :] = s * row_k + c * row_l
                a[k, l] = a[l, k] = 0.0
                vec_k = p[:, k].copy()
                vec_l = p[:, l].copy()
                p[:, k] = c * vec_k - s * vec_l
                p[:, l] = s * vec_k + c * vec_l
    else:
        if _off_norm(a) > tol * scale:
            raise ArithmeticError(
                f"Jacobi iteration did not converge in {max_sweeps} sweeps."
            )

    eigenvalues = np.diag(a).copy()
    order = np.argsort(eigenvalues, kind="stable")
    return eigenvalues[order], p[:, order]
