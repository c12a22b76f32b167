"""Small adapter over python-flint ball matrices (arb/acb)."""
from __future__ import annotations

import contextlib

import flint
import numpy as np


@contextlib.contextmanager
def working_precision(bits: int):
    # flint.ctx is process global; callers run one precision at a time
    old = flint.ctx.prec
    flint.ctx.prec = int(bits)
    try:
        yield
    finally:
        flint.ctx.prec = old


def is_complex(m) -> bool:
    return isinstance(m, flint.acb_mat)


def from_numpy(a: np.ndarray, complex_: bool = False):
    a = np.asarray(a)
    if complex_ or np.iscomplexobj(a):
        return flint.acb_mat([[complex(v) for v in row] for row in a])
    return flint.arb_mat([[float(v) for v in row] for row in a])


def to_numpy(m) -> np.ndarray:
    rows = m.mid().tolist()
    if is_complex(m):
        return np.array([[complex(v) for v in row] for row in rows])
    return np.array([[float(v) for v in row] for row in rows])


def identity(n: int, complex_: bool = False):
    cls = flint.acb_mat if complex_ else flint.arb_mat
    return cls(n, n, [1 if i == j else 0 for i in range(n) for j in range(n)])


def block(m, rows: slice, cols: slice):
    data = m.tolist()
    sub = [row[cols] for row in data[rows]]
    cls = type(m)
    return cls(sub)


def column(values, complex_: bool = False):
    cls = flint.acb_mat if complex_ else flint.arb_mat
    return cls([[v] for v in values])


def adjoint(m):
    return m.conjugate().transpose() if is_complex(m) else m.transpose()


def symmetrize(m):
    return (m + adjoint(m)) * flint.arb(0.5)


def max_abs(m) -> float:
    return max(abs(float(abs(v).mid())) for row in m.mid().tolist() for v in row)


def two_pi():
    return 2 * flint.arb.pi()
