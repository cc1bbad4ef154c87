"""Group models: matrix Lie groups, additive vector groups and finite Cayley tables.

Elements and Lie algebra elements are bare numpy arrays. A matrix group element
is an ``(n, n)`` array, an additive element is an ``(n,)`` array and a finite
element is an integer index. Lie algebra elements are always coefficient
vectors of shape ``(dim,)`` in the model's basis. All operations broadcast over
leading axes, which is what the ODE solvers rely on.
"""
from __future__ import annotations

import csv
import itertools
import math
from pathlib import Path

import numpy as np

from .errors import DomainError, UnsupportedOperationError

__all__ = [
    "GroupModel",
    "MatrixGroup",
    "AdditiveGroup",
    "FiniteGroup",
    "expm",
    "logm_near_identity",
    "so2",
    "so3",
    "product_group",
    "special_euclidean",
    "cyclic",
    "klein",
    "quaternion",
    "symmetric",
    "direct_product",
    "group_axiom_report",
]


def expm(A: np.ndarray, degree: int = 18) -> np.ndarray:
    """Matrix exponential of a stack ``(..., n, n)`` by scaling and squaring.

    The scaled matrix has infinity norm at most 1/2, so the truncated Taylor
    series of the given degree is accurate to machine precision.
    """
    A = np.asarray(A, dtype=float)
    n = A.shape[-1]
    if A.size == 0:
        return np.broadcast_to(np.eye(n), A.shape).copy()
    norm = float(np.max(np.sum(np.abs(A), axis=-1)))
    s = max(0, int(math.ceil(math.log2(norm / 0.5)))) if norm > 0.5 else 0
    B = A / (2.0**s)
    eye = np.broadcast_to(np.eye(n), A.shape)
    E = eye.copy()
    for k in range(degree, 0, -1):
        E = eye + (B @ E) / k
    for _ in range(s):
        E = E @ E
    return E


def _sqrtm_db(A: np.ndarray, iters: int = 60) -> np.ndarray:
    # Denman-Beavers iteration, batched
    Y = A.copy()
    Z = np.broadcast_to(np.eye(A.shape[-1]), A.shape).copy()
    for _ in range(iters):
        Yi = np.linalg.inv(Y)
        Zi = np.linalg.inv(Z)
        Y, Z = 0.5 * (Y + Zi), 0.5 * (Z + Yi)
        if np.max(np.abs(Y @ Y - A)) < 1e-15 * max(1.0, float(np.max(np.abs(A)))):
            break
    return Y


def logm_near_identity(A: np.ndarray) -> np.ndarray:
    """Principal matrix logarithm of a stack ``(..., n, n)`` close to the identity.

    Square roots are taken until every matrix is within 1/4 of the identity,
    then the Gregory series for atanh is summed.
    """
    A = np.asarray(A, dtype=float)
    n = A.shape[-1]
    eye = np.broadcast_to(np.eye(n), A.shape)
    s = 0
    while np.max(np.abs(A - eye)) > 0.25:
        if s > 40:
            raise DomainError("matrix logarithm did not converge; element too far from identity")
        A = _sqrtm_db(A)
        s += 1
    Z = (A - eye) @ np.linalg.inv(A + eye)
    Z2 = Z @ Z
    term = Z.copy()
    L = Z.copy()
    for k in range(3, 61, 2):
        term = term @ Z2
        L = L + term / k
        if np.max(np.abs(term)) < 1e-18:
            break
    return 2.0 * L * (2.0**s)


class GroupModel:
    """Common interface. Subclasses set ``kind``, ``name``, ``dim`` and ``shape``."""

    kind: str = ""
    name: str = ""
    dim: int = 0
    shape: tuple = ()

    def identity(self):
        raise NotImplementedError

    def multiply(self, a, b):
        raise NotImplementedError

    def inverse(self, a):
        raise NotImplementedError

    def exp(self, X):
        raise UnsupportedOperationError(f"exp is not defined on {self.name}")

    def log_near_identity(self, g):
        raise UnsupportedOperationError(f"log is not defined on {self.name}")

    def Ad(self, g, X):
        raise UnsupportedOperationError(f"Ad is not defined on {self.name}")

    def bracket(self, X, Y):
        raise UnsupportedOperationError(f"bracket is not defined on {self.name}")

    def distance(self, a, b) -> float:
        raise NotImplementedError

    def random(self, rng, size=None, scale=1.0):
        raise NotImplementedError

    def random_algebra(self, rng, size=None, scale=1.0):
        size = () if size is None else (size if isinstance(size, tuple) else (size,))
        return scale * rng.standard_normal(size + (self.dim,))

    def check_element(self, a):
        a = np.asarray(a)
        if a.shape[a.ndim - len(self.shape):] != self.shape or a.ndim < len(self.shape):
            raise DomainError(f"element of shape {a.shape} does not belong to {self.name}")
        return a

    def check_algebra(self, X):
        X = np.asarray(X, dtype=float)
        if X.ndim < 1 or X.shape[-1] != self.dim:
            raise DomainError(f"algebra element of shape {X.shape} does not belong to L({self.name})")
        return X

    def __repr__(self):
        return f"{type(self).__name__}({self.name!r})"


class MatrixGroup(GroupModel):
    """A closed matrix group given by a basis of its Lie algebra."""

    kind = "matrix"

    def __init__(self, name: str, basis: np.ndarray, orthogonal: bool = False):
        basis = np.asarray(basis, dtype=float)
        self.name = name
        self.basis = basis
        self.dim = basis.shape[0]
        self.n = basis.shape[1]
        self.shape = (self.n, self.n)
        self.orthogonal = orthogonal
        flat = basis.reshape(self.dim, -1)
        gram = flat @ flat.T
        if np.array_equal(gram, np.diag(np.diag(gram))):
            # orthogonal basis: exact coordinate extraction, no pseudo-inverse round-off
            self._vee = flat.T / np.diag(gram)
        else:
            self._vee = np.linalg.pinv(flat)  # (n*n, dim)

    def hat(self, X):
        X = self.check_algebra(X)
        return np.einsum("...i,ijk->...jk", X, self.basis)

    def vee(self, M):
        M = np.asarray(M, dtype=float)
        return M.reshape(M.shape[:-2] + (-1,)) @ self._vee

    def identity(self):
        return np.eye(self.n)

    def multiply(self, a, b):
        return self.check_element(a) @ self.check_element(b)

    def inverse(self, a):
        a = self.check_element(a)
        if self.orthogonal:
            return np.swapaxes(a, -1, -2).copy()
        return np.linalg.inv(a)

    def exp(self, X):
        return expm(self.hat(X))

    def log_near_identity(self, g):
        return self.vee(logm_near_identity(self.check_element(g)))

    def Ad(self, g, X):
        g = self.check_element(g)
        return self.vee(g @ self.hat(X) @ self.inverse(g))

    def bracket(self, X, Y):
        A, B = self.hat(X), self.hat(Y)
        return self.vee(A @ B - B @ A)

    def distance(self, a, b) -> float:
        a, b = self.check_element(a), self.check_element(b)
        return float(np.max(np.abs(a - b))) if a.size or b.size else 0.0

    def random(self, rng, size=None, scale=1.0):
        return self.exp(self.random_algebra(rng, size, scale))


class AdditiveGroup(GroupModel):
    """The vector group R^n; exp is the identity map on coefficients."""

    kind = "additive_vector"

    def __init__(self, n: int):
        self.n = n
        self.dim = n
        self.shape = (n,)
        self.name = f"R{n}"

    def identity(self):
        return np.zeros(self.n)

    def multiply(self, a, b):
        return self.check_element(a) + self.check_element(b)

    def inverse(self, a):
        return -self.check_element(a)

    def exp(self, X):
        return self.check_algebra(X).copy()

    def log_near_identity(self, g):
        return self.check_element(g).astype(float).copy()

    def Ad(self, g, X):
        self.check_element(g)
        return self.check_algebra(X).copy()

    def bracket(self, X, Y):
        return np.zeros(np.broadcast_shapes(np.shape(X), np.shape(Y)))

    def distance(self, a, b) -> float:
        a, b = self.check_element(a), self.check_element(b)
        return float(np.max(np.abs(a - b))) if a.size or b.size else 0.0

    def random(self, rng, size=None, scale=1.0):
        return self.random_algebra(rng, size, scale)


class FiniteGroup(GroupModel):
    """A finite group given by its Cayley table; elements are indices ``0..order-1``.

    ``table[a, b]`` is the product ``a * b`` (row = left factor).
    """

    kind = "finite_table"
    shape = ()

    def __init__(self, table, name: str = "finite", labels=None):
        table = np.asarray(table, dtype=np.int64)
        n = table.shape[0]
        if table.shape != (n, n) or table.min() < 0 or table.max() >= n:
            raise DomainError("Cayley table must be a square array of element indices")
        for row in itertools.chain(table, table.T):
            if len(set(row.tolist())) != n:
                raise DomainError("Cayley table is not a Latin square")
        self.table = table
        self.order = n
        self.name = name
        self.labels = list(labels) if labels is not None else [str(i) for i in range(n)]
        units = [e for e in range(n) if all(table[e, x] == x and table[x, e] == x for x in range(n))]
        if len(units) != 1:
            raise DomainError("Cayley table has no two-sided identity")
        self.e = units[0]
        self._inv = np.array([int(np.flatnonzero(table[a] == self.e)[0]) for a in range(n)])
        # plain lists make scalar lookups cheap in exhaustive enumeration
        self._rows = table.tolist()
        self._inv_list = self._inv.tolist()

    @property
    def elements(self):
        return range(self.order)

    def check_element(self, a):
        arr = np.asarray(a)
        if arr.dtype.kind not in "iu" or np.any(arr < 0) or np.any(arr >= self.order):
            raise DomainError(f"{a!r} is not an element of {self.name}")
        return arr

    def identity(self):
        return self.e

    def multiply(self, a, b):
        if type(a) is int and type(b) is int and 0 <= a < self.order and 0 <= b < self.order:
            return self._rows[a][b]
        r = self.table[self.check_element(a), self.check_element(b)]
        return int(r) if np.ndim(r) == 0 else r

    def inverse(self, a):
        if type(a) is int and 0 <= a < self.order:
            return self._inv_list[a]
        r = self._inv[self.check_element(a)]
        return int(r) if np.ndim(r) == 0 else r

    def distance(self, a, b) -> float:
        a, b = self.check_element(a), self.check_element(b)
        return float(np.any(a != b))

    def random(self, rng, size=None, scale=1.0):
        r = rng.integers(0, self.order, size=size)
        return int(r) if size is None else r

    def is_subgroup(self, subset) -> bool:
        s = set(subset)
        return self.e in s and all(self.table[a, b] in s and self._inv[a] in s for a in s for b in s)

    def central_witness(self, subset):
        """First pair ``(z, x)`` with ``zx != xz``, or None if ``subset`` is central."""
        for z in subset:
            for x in self.elements:
                if self.table[z, x] != self.table[x, z]:
                    return (z, x)
        return None

    @classmethod
    def from_csv(cls, path, name=None):
        with open(path, newline="", encoding="utf-8") as fh:
            rows = [[int(v) for v in row] for row in csv.reader(fh) if row]
        return cls(rows, name=name or Path(path).stem)

    def to_csv(self, path):
        with open(path, "w", newline="", encoding="utf-8") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerows(self.table.tolist())


# -- matrix constructors ----------------------------------------------------

def _so3_basis():
    L = np.zeros((3, 3, 3))
    L[0, 2, 1], L[0, 1, 2] = 1.0, -1.0
    L[1, 0, 2], L[1, 2, 0] = 1.0, -1.0
    L[2, 1, 0], L[2, 0, 1] = 1.0, -1.0
    return L


def so2() -> MatrixGroup:
    return MatrixGroup("SO2", np.array([[[0.0, -1.0], [1.0, 0.0]]]), orthogonal=True)


def so3() -> MatrixGroup:
    return MatrixGroup("SO3", _so3_basis(), orthogonal=True)


def product_group(G1: MatrixGroup, G2: MatrixGroup, name=None) -> MatrixGroup:
    """Block-diagonal realization of ``G1 x G2``."""
    n1, n2 = G1.n, G2.n
    basis = np.zeros((G1.dim + G2.dim, n1 + n2, n1 + n2))
    basis[: G1.dim, :n1, :n1] = G1.basis
    basis[G1.dim :, n1:, n1:] = G2.basis
    return MatrixGroup(name or f"{G1.name}x{G2.name}", basis, orthogonal=G1.orthogonal and G2.orthogonal)


def special_euclidean(G: MatrixGroup, name=None) -> MatrixGroup:
    """``R^n x| G`` as affine ``(n+1) x (n+1)`` matrices ``[[g, v], [0, 1]]``."""
    n = G.n
    basis = np.zeros((G.dim + n, n + 1, n + 1))
    basis[: G.dim, :n, :n] = G.basis
    for i in range(n):
        basis[G.dim + i, i, n] = 1.0
    return MatrixGroup(name or f"R{n}x|{G.name}", basis, orthogonal=False)


# -- finite constructors ----------------------------------------------------

def cyclic(n: int) -> FiniteGroup:
    idx = np.arange(n)
    return FiniteGroup((idx[:, None] + idx[None, :]) % n, name=f"Z{n}")


def direct_product(A: FiniteGroup, B: FiniteGroup) -> FiniteGroup:
    """Element ``(a, b)`` has index ``a * |B| + b``."""
    nb = B.order
    pairs = [(a, b) for a in A.elements for b in B.elements]
    table = [[A.table[a, c] * nb + B.table[b, d] for (c, d) in pairs] for (a, b) in pairs]
    return FiniteGroup(table, name=f"{A.name}x{B.name}")


def klein() -> FiniteGroup:
    G = direct_product(cyclic(2), cyclic(2))
    G.name = "V4"
    return G


def quaternion() -> FiniteGroup:
    """Q8 with labels ``1, -1, i, -i, j, -j, k, -k`` (indices 0..7)."""
    labels = ["1", "-1", "i", "-i", "j", "-j", "k", "-k"]
    # unit quaternions as (w, x, y, z)
    q = np.array([[1, 0, 0, 0], [-1, 0, 0, 0], [0, 1, 0, 0], [0, -1, 0, 0],
                  [0, 0, 1, 0], [0, 0, -1, 0], [0, 0, 0, 1], [0, 0, 0, -1]])

    def qmul(a, b):
        w1, x1, y1, z1 = a
        w2, x2, y2, z2 = b
        return (w1 * w2 - x1 * x2 - y1 * y2 - z1 * z2,
                w1 * x2 + x1 * w2 + y1 * z2 - z1 * y2,
                w1 * y2 - x1 * z2 + y1 * w2 + z1 * x2,
                w1 * z2 + x1 * y2 - y1 * x2 + z1 * w2)

    index = {tuple(v): i for i, v in enumerate(q.tolist())}
    table = [[index[qmul(a, b)] for b in q.tolist()] for a in q.tolist()]
    return FiniteGroup(table, name="Q8", labels=labels)


def symmetric(n: int) -> FiniteGroup:
    """S_n; product is composition ``(p * q)(i) = p[q[i]]``."""
    perms = list(itertools.permutations(range(n)))
    index = {p: i for i, p in enumerate(perms)}
    table = [[index[tuple(p[q[i]] for i in range(n))] for q in perms] for p in perms]
    return FiniteGroup(table, name=f"S{n}", labels=["".join(map(str, p)) for p in perms])


def group_axiom_report(model: GroupModel, samples: int = 100, seed: int = 0) -> dict:
    """Residuals of associativity, identity and inverse laws.

    Finite models are checked exhaustively; other models on ``samples`` seeded
    draws. The seed is part of the report so runs can be reproduced.
    """
    if isinstance(model, FiniteGroup):
        E = np.arange(model.order)
        a, b, c = np.meshgrid(E, E, E, indexing="ij")
        a, b, c = a.ravel(), b.ravel(), c.ravel()
    else:
        rng = np.random.default_rng(seed)
        a, b, c = (model.random(rng, samples) for _ in range(3))
        if isinstance(model, AdditiveGroup):
            # dyadic samples keep floating-point addition exact and associative
            a, b, c = (np.round(x * 2**20) / 2**20 for x in (a, b, c))
    e = model.identity()
    ab = model.multiply(a, b)
    return {
        "associativity": model.distance(model.multiply(ab, c), model.multiply(a, model.multiply(b, c))),
        "identity": max(model.distance(model.multiply(e, a), a), model.distance(model.multiply(a, e), a)),
        "inverse": max(model.distance(model.multiply(a, model.inverse(a)), e),
                       model.distance(model.multiply(model.inverse(a), a), e)),
        "seed": seed,
        "samples": int(np.size(a) if isinstance(model, FiniteGroup) else samples),
    }
