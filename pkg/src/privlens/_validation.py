"""Input validation helpers used by the estimator classes."""

from __future__ import annotations

import numpy as np
import scipy.sparse as sp


def check_fitted(estimator, attribute: str) -> None:
    """Raise if ``estimator`` has not been fitted (``attribute`` missing)."""
    if getattr(estimator, attribute, None) is None:
        raise ValueError(
            f"{type(estimator).__name__} is not fitted; call fit() first"
        )


def as_csr_matrix(X) -> sp.csr_matrix:
    """Coerce a TermMatrix, sparse matrix, or dense array to CSR float64."""
    matrix = getattr(X, "matrix", X)
    if sp.issparse(matrix):
        return matrix.tocsr().astype(np.float64)
    arr = np.asarray(matrix, dtype=np.float64)
    if arr.ndim != 2:
        raise ValueError(f"expected a 2-D document-term matrix, got ndim={arr.ndim}")
    return sp.csr_matrix(arr)


def check_in_range(name: str, value, low, high, *, inclusive=(True, True)) -> None:
    lo_ok = value >= low if inclusive[0] else value > low
    hi_ok = value <= high if inclusive[1] else value < high
    if not (lo_ok and hi_ok):
        lo_b, hi_b = ("[" if inclusive[0] else "("), ("]" if inclusive[1] else ")")
        raise ValueError(f"{name} must be in {lo_b}{low}, {high}{hi_b}, got {value}")


def rng_from_seed(seed: int | None) -> np.random.Generator:
    """Deterministic generator; a fixed default keeps unseeded runs reproducible."""
    return np.random.default_rng(0 if seed is None else seed)
