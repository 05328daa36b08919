"""Exact formal linear combinations over class keys, their tensor powers, and kernels.

Coefficients are :class:`fractions.Fraction`; nothing here touches floats.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Callable, Hashable, Iterable, Iterator, Mapping, Sequence

Rational = Fraction


def _as_fraction(c) -> Fraction:
    if isinstance(c, Fraction):
        return c
    if isinstance(c, float):
        raise TypeError("float coefficients are not allowed; use Fraction or int")
    return Fraction(c)


class FormalSum(Mapping):
    """Finitely supported map from keys to nonzero rationals.

    Keys are class keys (or, for the tree oracle, canonical trees).  Zero
    coefficients are never stored, so two sums are equal iff their maps are.
    """

    __slots__ = ("_terms",)

    def __init__(self, terms: Mapping | Iterable[tuple[Hashable, object]] | None = None):
        acc: dict = {}
        if terms is not None:
            items = terms.items() if isinstance(terms, Mapping) else terms
            for k, c in items:
                c = _as_fraction(c)
                if c:
                    acc[k] = acc.get(k, 0) + c
        self._terms = {k: c for k, c in acc.items() if c}

    @classmethod
    def basis(cls, key: Hashable, coeff=1):
        return cls({key: coeff})

    @classmethod
    def _from_dict(cls, d: dict):
        out = cls.__new__(cls)
        out._terms = {k: c for k, c in d.items() if c}
        return out

    # Mapping protocol
    def __getitem__(self, key):
        return self._terms[key]

    def __iter__(self) -> Iterator:
        return iter(sorted(self._terms, key=_sort_key))

    def __len__(self) -> int:
        return len(self._terms)

    def coefficient(self, key) -> Fraction:
        return self._terms.get(key, Fraction(0))

    def items(self):
        return [(k, self._terms[k]) for k in self]

    # arithmetic
    def __add__(self, other: "FormalSum"):
        if not isinstance(other, FormalSum):
            return NotImplemented
        d = dict(self._terms)
        for k, c in other._terms.items():
            d[k] = d.get(k, 0) + c
        return type(self)._from_dict(d)

    def __neg__(self):
        return type(self)._from_dict({k: -c for k, c in self._terms.items()})

    def __sub__(self, other: "FormalSum"):
        if not isinstance(other, FormalSum):
            return NotImplemented
        return self + (-other)

    def __mul__(self, scalar):
        if isinstance(scalar, FormalSum):
            return NotImplemented
        s = _as_fraction(scalar)
        return type(self)._from_dict({k: c * s for k, c in self._terms.items()})

    __rmul__ = __mul__

    def __truediv__(self, scalar):
        return self * (1 / _as_fraction(scalar))

    def __eq__(self, other) -> bool:
        if isinstance(other, FormalSum):
            return self._terms == other._terms
        if other == 0:
            return not self._terms
        return NotImplemented

    def __hash__(self):
        return hash(frozenset(self._terms.items()))

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __repr__(self) -> str:
        if not self._terms:
            return f"{type(self).__name__}(0)"
        body = " + ".join(f"{c}*{k!r}" for k, c in self.items())
        return f"{type(self).__name__}({body})"

    def grade(self) -> int | None:
        """Common vertex count of the support, or ``None`` if mixed/empty."""
        grades = {_grade(k) for k in self._terms}
        return grades.pop() if len(grades) == 1 else None


class TensorSum(FormalSum):
    """Formal sum whose keys are tuples of class keys (tensor factors)."""

    __slots__ = ()

    @property
    def arity(self) -> int | None:
        for k in self._terms:
            return len(k)
        return None


TensorSum3 = TensorSum


def _grade(key) -> int:
    if isinstance(key, tuple) and not hasattr(key, "_fields"):
        return sum(_grade(k) for k in key)
    n = getattr(key, "n", None)
    if n is None:
        raise TypeError(f"key {key!r} carries no grade")
    return n


def _sort_key(key):
    if isinstance(key, tuple) and not hasattr(key, "_fields"):
        return (len(key), tuple(_sort_key(k) for k in key))
    return (0, key)


def add(x: FormalSum, y: FormalSum) -> FormalSum:
    return x + y


def scale(c, x: FormalSum) -> FormalSum:
    return x * c


def _factors(key) -> tuple:
    if isinstance(key, tuple) and not hasattr(key, "_fields"):
        return key
    return (key,)


def tensor(x: FormalSum, y: FormalSum) -> TensorSum:
    """Tensor product; tuple keys are flattened so arity adds."""
    out: dict = {}
    for kx, cx in x._terms.items():
        fx = _factors(kx)
        for ky, cy in y._terms.items():
            key = fx + _factors(ky)
            out[key] = out.get(key, 0) + cx * cy
    return TensorSum._from_dict(out)


def flip12(t: TensorSum) -> TensorSum:
    """Swap the first two tensor slots."""
    return TensorSum._from_dict({(k[1], k[0]) + tuple(k[2:]): c for k, c in t._terms.items()})


def extend_linear(op: Callable[[Hashable], FormalSum]) -> Callable[[FormalSum], FormalSum]:
    """Lift a map on basis keys to formal sums."""
    def lifted(x: FormalSum) -> FormalSum:
        acc: dict = {}
        cls = FormalSum
        for k, c in x._terms.items():
            r = op(k)
            cls = type(r)
            for kk, cc in r._terms.items():
                acc[kk] = acc.get(kk, 0) + c * cc
        return cls._from_dict(acc)
    return lifted


def extend_bilinear(op: Callable[[Hashable, Hashable], FormalSum]) -> Callable[[FormalSum, FormalSum], FormalSum]:
    """Lift a pairwise operation on basis keys to formal sums."""
    def lifted(x: FormalSum, y: FormalSum) -> FormalSum:
        acc: dict = {}
        cls = FormalSum
        for kx, cx in x._terms.items():
            for ky, cy in y._terms.items():
                r = op(kx, ky)
                cls = type(r)
                c = cx * cy
                for kk, cc in r._terms.items():
                    acc[kk] = acc.get(kk, 0) + c * cc
        return cls._from_dict(acc)
    return lifted


def map_slot(op: Callable[[Hashable], FormalSum], t: TensorSum, slot: int) -> TensorSum:
    """Apply a linear map to one tensor slot, expanding the result into that slot."""
    acc: dict = {}
    for key, c in t._terms.items():
        head, mid, tail = key[:slot], key[slot], key[slot + 1:]
        for kk, cc in op(mid)._terms.items():
            new = head + _factors(kk) + tail
            acc[new] = acc.get(new, 0) + c * cc
    return TensorSum._from_dict(acc)


# -- exact linear algebra -------------------------------------------------

def _bitlen(c: Fraction) -> int:
    return abs(c.numerator).bit_length() + c.denominator.bit_length()


def rref(rows: list[list[Fraction]], ncols: int) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form; pivot rows chosen by smallest coefficient bit length."""
    m = [list(r) for r in rows]
    pivots: list[int] = []
    r = 0
    for col in range(ncols):
        cand = [i for i in range(r, len(m)) if m[i][col]]
        if not cand:
            continue
        p = min(cand, key=lambda i: _bitlen(m[i][col]))
        m[r], m[p] = m[p], m[r]
        inv = 1 / m[r][col]
        m[r] = [x * inv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][col]:
                f = m[i][col]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(col)
        r += 1
        if r == len(m):
            break
    return m[:r], pivots


def nullspace(rows: list[list[Fraction]], ncols: int) -> list[list[Fraction]]:
    """Basis of {x : rows . x = 0}, one vector per free column."""
    red, pivots = rref(rows, ncols)
    free = [c for c in range(ncols) if c not in set(pivots)]
    basis = []
    for f in free:
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for row, pc in zip(red, pivots):
            v[pc] = -row[f]
        basis.append(v)
    return basis


def matrix_of(domain: Sequence[Hashable], linear_map: Callable[[Hashable], FormalSum]) -> tuple[list[list[Fraction]], list]:
    """Matrix of ``linear_map`` in the basis ``domain``; rows indexed by the codomain support."""
    images = [linear_map(k) for k in domain]
    codomain = sorted({kk for img in images for kk in img._terms}, key=_sort_key)
    index = {k: i for i, k in enumerate(codomain)}
    rows = [[Fraction(0)] * len(domain) for _ in codomain]
    for j, img in enumerate(images):
        for kk, c in img._terms.items():
            rows[index[kk]][j] = c
    return rows, codomain


def kernel_basis(domain: Sequence[Hashable], linear_map: Callable[[Hashable], FormalSum]) -> list[FormalSum]:
    """Basis over the rationals of the kernel of ``linear_map`` on ``span(domain)``."""
    domain = list(domain)
    rows, _ = matrix_of(domain, linear_map)
    out = []
    for v in nullspace(rows, len(domain)):
        out.append(FormalSum({domain[i]: c for i, c in enumerate(v) if c}))
    return out


def rank(domain: Sequence[Hashable], linear_map: Callable[[Hashable], FormalSum]) -> int:
    rows, _ = matrix_of(list(domain), linear_map)
    return len(rref(rows, len(domain))[1])


class Subspace:
    """Finite-dimensional subspace of formal sums, kept in reduced echelon form."""

    def __init__(self, vectors: Iterable[FormalSum] = ()):
        vectors = [v for v in vectors if v]
        keys = sorted({k for v in vectors for k in v._terms}, key=_sort_key)
        self._keys = keys
        idx = {k: i for i, k in enumerate(keys)}
        rows = []
        for v in vectors:
            row = [Fraction(0)] * len(keys)
            for k, c in v._terms.items():
                row[idx[k]] = c
            rows.append(row)
        self._rows, self._pivots = rref(rows, len(keys))

    @property
    def dim(self) -> int:
        return len(self._rows)

    def basis(self, cls=FormalSum) -> list[FormalSum]:
        return [cls({self._keys[i]: c for i, c in enumerate(r) if c}) for r in self._rows]

    def contains(self, v: FormalSum) -> bool:
        residual = dict(v._terms)
        idx = set(self._keys)
        if any(k not in idx for k in residual):
            return False
        for row, pc in zip(self._rows, self._pivots):
            f = residual.get(self._keys[pc], 0)
            if f:
                for i, c in enumerate(row):
                    if c:
                        k = self._keys[i]
                        residual[k] = residual.get(k, 0) - f * c
        return not any(residual.values())


def preimage(domain: Sequence[Hashable], linear_map: Callable[[Hashable], FormalSum],
             target: Subspace) -> list[FormalSum]:
    """Basis of {x in span(domain) : linear_map(x) in target}."""
    domain = list(domain)
    tb = target.basis(TensorSum)
    images = [linear_map(k) for k in domain]
    codomain = sorted({kk for v in images + tb for kk in v._terms}, key=_sort_key)
    index = {k: i for i, k in enumerate(codomain)}
    ncols = len(domain) + len(tb)
    rows = [[Fraction(0)] * ncols for _ in codomain]
    for j, img in enumerate(images):
        for kk, c in img._terms.items():
            rows[index[kk]][j] = c
    for j, w in enumerate(tb):
        for kk, c in w._terms.items():
            rows[index[kk]][len(domain) + j] = -c
    sols = nullspace(rows, ncols)
    xs = [FormalSum({domain[i]: c for i, c in enumerate(s[:len(domain)]) if c}) for s in sols]
    return Subspace(xs).basis()
