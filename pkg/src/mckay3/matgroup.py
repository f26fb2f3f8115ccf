"""Finite matrix groups over cyclotomic fields.

Groups are enumerated by breadth-first closure from generators.  Elements are
stored at a single common conductor so that equal matrices have equal keys.
"""

from __future__ import annotations

import itertools
from collections import Counter, deque
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Optional, Sequence


from .errors import InternalMismatch, NotSL, OrderExceeded, Singular
from .exactnum import CycNumber, _lcm, divisors, root_of_unity_sum

__all__ = [
    "SquareMatrix",
    "FiniteMatrixGroup",
    "ConjClass",
    "close_group",
    "conjugacy_classes",
    "fixed_dim",
    "fixed_dim_profile",
    "element_fixed_dims",
    "eigen_multiplicities",
    "sl_part",
    "age",
    "junior_class_count",
    "DEFAULT_MAX_ORDER",
]

DEFAULT_MAX_ORDER = 10000

_ONE = CycNumber.rational(1)
_ZERO = CycNumber.rational(0)


def _as_cyc(value) -> CycNumber:
    return value if isinstance(value, CycNumber) else CycNumber.rational(value)


class SquareMatrix:
    """Immutable square matrix of rank 1..3 with CycNumber entries."""

    __slots__ = ("rank", "rows")

    def __init__(self, rows: Iterable[Iterable]):
        rows = tuple(tuple(_as_cyc(v) for v in row) for row in rows)
        n = len(rows)
        if not 1 <= n <= 3 or any(len(r) != n for r in rows):
            raise ValueError("expected a square matrix of size 1, 2 or 3")
        self.rank = n
        self.rows = rows

    @classmethod
    def identity(cls, rank: int) -> "SquareMatrix":
        return cls([[1 if i == j else 0 for j in range(rank)] for i in range(rank)])

    @classmethod
    def diag(cls, *values) -> "SquareMatrix":
        n = len(values)
        return cls([[values[i] if i == j else 0 for j in range(n)] for i in range(n)])

    @property
    def conductor(self) -> int:
        return _lcm(*(v.N for row in self.rows for v in row))

    def promote(self, M: int) -> "SquareMatrix":
        return SquareMatrix([[v.promote(M) for v in row] for row in self.rows])

    def key(self):
        """Hashable key; only comparable between matrices at one conductor."""
        return tuple(v.raw for row in self.rows for v in row)

    def __matmul__(self, other: "SquareMatrix") -> "SquareMatrix":
        n = self.rank
        cols = list(zip(*other.rows))
        out = []
        for row in self.rows:
            new_row = []
            for col in cols:
                acc = None
                for a, b in zip(row, col):
                    if a.is_zero() or b.is_zero():
                        continue
                    p = a * b
                    acc = p if acc is None else acc + p
                new_row.append(acc if acc is not None else CycNumber.rational(0, row[0].N))
            out.append(new_row)
        m = SquareMatrix.__new__(SquareMatrix)
        m.rank = n
        m.rows = tuple(tuple(r) for r in out)
        return m

    def __pow__(self, k: int) -> "SquareMatrix":
        if k < 0:
            return self.inverse() ** (-k)
        result = SquareMatrix.identity(self.rank)
        base = self
        while k:
            if k & 1:
                result = result @ base
            base = base @ base
            k >>= 1
        return result

    def __sub__(self, other: "SquareMatrix") -> "SquareMatrix":
        return SquareMatrix([[a - b for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)])

    def __neg__(self) -> "SquareMatrix":
        return SquareMatrix([[-a for a in r] for r in self.rows])

    def __eq__(self, other):
        if not isinstance(other, SquareMatrix):
            return NotImplemented
        return self.rank == other.rank and all(
            a == b for r, s in zip(self.rows, other.rows) for a, b in zip(r, s)
        )

    def __hash__(self):
        return hash(tuple(v for row in self.rows for v in row))

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def trace(self) -> CycNumber:
        return sum((self.rows[i][i] for i in range(self.rank)), _ZERO)

    def minor_det(self, idx: Sequence[int]) -> CycNumber:
        """Determinant of the principal submatrix on the given indices."""
        if not idx:
            return _ONE
        if len(idx) == 1:
            return self.rows[idx[0]][idx[0]]
        first, rest = idx[0], idx[1:]
        total = _ZERO
        for pos, j in enumerate(idx):
            a = self.rows[first][j]
            if a.is_zero():
                continue
            cols = [c for c in idx if c != j]
            sub = _det_general([[self.rows[r][c] for c in cols] for r in rest])
            term = a * sub
            total = total + term if pos % 2 == 0 else total - term
        return total

    def det(self) -> CycNumber:
        return self.minor_det(tuple(range(self.rank)))

    def charpoly(self) -> tuple[CycNumber, ...]:
        """(e_1, ..., e_n) with det(tI - g) = t^n - e_1 t^(n-1) + e_2 t^(n-2) - ...

        e_k is the sum of the principal k x k minors.
        """
        n = self.rank
        return tuple(
            sum((self.minor_det(c) for c in itertools.combinations(range(n), k)), _ZERO)
            for k in range(1, n + 1)
        )

    def matrix_rank(self) -> int:
        """Rank by fraction-free Gaussian elimination over the cyclotomic field."""
        rows = [list(r) for r in self.rows]
        n = self.rank
        r = 0
        for col in range(n):
            piv = next((i for i in range(r, n) if not rows[i][col].is_zero()), None)
            if piv is None:
                continue
            rows[r], rows[piv] = rows[piv], rows[r]
            p = rows[r][col]
            for i in range(r + 1, n):
                f = rows[i][col]
                if f.is_zero():
                    continue
                rows[i] = [p * a - f * b for a, b in zip(rows[i], rows[r])]
            r += 1
        return r

    def inverse(self) -> "SquareMatrix":
        d = self.det()
        if d.is_zero():
            raise Singular("matrix is not invertible")
        n = self.rank
        dinv = d.inverse()
        if n == 1:
            return SquareMatrix([[dinv]])
        adj = [[None] * n for _ in range(n)]
        for i in range(n):
            for j in range(n):
                sub = [[self.rows[r][c] for c in range(n) if c != j] for r in range(n) if r != i]
                cof = _det_general(sub)
                adj[j][i] = cof * dinv if (i + j) % 2 == 0 else -(cof * dinv)
        return SquareMatrix(adj)

    def order(self, cap: int = DEFAULT_MAX_ORDER) -> int:
        ident = SquareMatrix.identity(self.rank)
        p = self
        for k in range(1, cap + 1):
            if p == ident:
                return k
            p = p @ self
        raise OrderExceeded(f"matrix order exceeds {cap}")

    def to_json(self) -> list:
        return [[v.to_json() for v in row] for row in self.rows]

    def __repr__(self):
        return "SquareMatrix([" + ", ".join("[" + ", ".join(str(v) for v in r) + "]" for r in self.rows) + "])"


def _det_general(m: list[list[CycNumber]]) -> CycNumber:
    n = len(m)
    if n == 0:
        return _ONE
    if n == 1:
        return m[0][0]
    if n == 2:
        return m[0][0] * m[1][1] - m[0][1] * m[1][0]
    total = _ZERO
    for j in range(n):
        a = m[0][j]
        if a.is_zero():
            continue
        sub = [[m[r][c] for c in range(n) if c != j] for r in range(1, n)]
        term = a * _det_general(sub)
        total = total + term if j % 2 == 0 else total - term
    return total


@dataclass(frozen=True)
class ConjClass:
    representative_index: int
    member_indices: tuple[int, ...]
    element_order: int
    fixed_dim: int
    determinant: CycNumber
    age: Optional[Fraction]

    @property
    def size(self) -> int:
        return len(self.member_indices)


class FiniteMatrixGroup:
    """A finite group of matrices, closed under products and inverses.

    ``elements[0]`` is the identity.  Elements are addressed by index; all
    elements share the conductor ``self.conductor``.
    """

    def __init__(self, elements: list[SquareMatrix], generator_indices: Sequence[int], rank: int):
        self.rank = rank
        self.elements = elements
        self.conductor = elements[0].conductor if elements else 1
        self.cayley_index = {m.key(): i for i, m in enumerate(elements)}
        self.generator_indices = tuple(generator_indices)
        self._orders: dict[int, int] = {}
        self._inverses: dict[int, int] = {}
        self._memo: dict = {}

    def __len__(self) -> int:
        return len(self.elements)

    @property
    def order(self) -> int:
        return len(self.elements)

    @property
    def generators(self) -> list[SquareMatrix]:
        return [self.elements[i] for i in self.generator_indices]

    def index_of(self, m: SquareMatrix) -> int:
        """Index of ``m`` in the group; ValueError if absent."""
        if m.rank != self.rank:
            raise ValueError("rank mismatch")
        c = m.conductor
        M = _lcm(c, self.conductor)
        if M != self.conductor:
            # promote then try to reduce back; entries outside Q(zeta_conductor) cannot belong
            try:
                m = SquareMatrix([[v.promote(M).reduce_conductor() for v in r] for r in m.rows])
                m = m.promote(self.conductor)
            except ValueError:
                raise ValueError("matrix is not in the group") from None
        else:
            m = m.promote(self.conductor)
        try:
            return self.cayley_index[m.key()]
        except KeyError:
            raise ValueError("matrix is not in the group") from None

    def __contains__(self, m: SquareMatrix) -> bool:
        try:
            self.index_of(m)
        except ValueError:
            return False
        return True

    def mul(self, i: int, j: int) -> int:
        return self.cayley_index[(self.elements[i] @ self.elements[j]).key()]

    def inverse(self, i: int) -> int:
        if i not in self._inverses:
            inv = self.elements[i].inverse().promote(self.conductor)
            j = self.cayley_index[inv.key()]
            self._inverses[i] = j
            self._inverses[j] = i
        return self._inverses[i]

    def power(self, i: int, k: int) -> SquareMatrix:
        return self.elements[i] ** k

    def element_order(self, i: int) -> int:
        """Smallest divisor d of |G| with g^d = 1, tested by repeated squaring."""
        if i not in self._orders:
            g = self.elements[i]
            ident_key = self.elements[0].key()
            for d in divisors(self.order):
                if (g**d).promote(self.conductor).key() == ident_key:
                    self._orders[i] = d
                    break
            else:
                raise InternalMismatch("element order does not divide the group order")
        return self._orders[i]

    @cached_property
    def exponent(self) -> int:
        return _lcm(*(c.element_order for c in self.classes))

    @cached_property
    def classes(self) -> list[ConjClass]:
        return _compute_classes(self)

    @cached_property
    def class_index(self) -> list[int]:
        """Map from element index to the position of its class in ``classes``."""
        out = [0] * self.order
        for k, c in enumerate(self.classes):
            for i in c.member_indices:
                out[i] = k
        return out

    def determinant(self, i: int) -> CycNumber:
        return self.elements[i].det()

    def subgroup(self, indices: Iterable[int]) -> "FiniteMatrixGroup":
        """Subgroup on a set of indices already known to be closed."""
        members = sorted(set(indices))
        if members[0] != 0:
            raise ValueError("subgroup must contain the identity")
        gens = _generating_set(self, members)
        elements = [self.elements[i] for i in members]
        pos = {g: k for k, g in enumerate(members)}
        return FiniteMatrixGroup(elements, [pos[g] for g in gens], self.rank)

    def closure_of(self, indices: Iterable[int]) -> list[int]:
        """Indices of the subgroup generated by the given elements.

        Candidates already inside the running closure are skipped, so the
        cost scales with the number of generators actually needed.
        """
        gens: list[int] = []
        seen = {0}
        members = [0]
        for s in indices:
            if s in seen:
                continue
            gens.append(s)
            queue = deque(members)
            while queue:
                x = queue.popleft()
                for t in gens:
                    y = self.mul(x, t)
                    if y not in seen:
                        seen.add(y)
                        members.append(y)
                        queue.append(y)
        return sorted(seen)

    def memo(self, key, compute):
        """Cache for derived data; the group itself never changes."""
        if key not in self._memo:
            self._memo[key] = compute()
        return self._memo[key]

    def __repr__(self):
        return f"FiniteMatrixGroup(order={self.order}, rank={self.rank})"


def _generating_set(G: FiniteMatrixGroup, members: list[int]) -> list[int]:
    gens: list[int] = []
    current = {0}
    for i in members:
        if i not in current:
            gens.append(i)
            current = set(G.closure_of(gens))
            if len(current) == len(members):
                break
    return gens


def close_group(
    generators: Sequence[SquareMatrix],
    max_order: int = DEFAULT_MAX_ORDER,
    rank: Optional[int] = None,
) -> FiniteMatrixGroup:
    """Enumerate the group generated by ``generators`` breadth-first.

    ``rank`` is only needed when the generator list is empty.
    """
    generators = list(generators)
    if max_order < 1:
        raise ValueError("max_order must be at least 1")
    if generators:
        ranks = {g.rank for g in generators}
        if len(ranks) != 1:
            raise ValueError(f"generators have mixed ranks {sorted(ranks)}")
        rank = ranks.pop()
    elif rank is None:
        raise ValueError("rank is required for an empty generator list")
    for g in generators:
        if g.det().is_zero():
            raise Singular(f"generator {g!r} is not invertible")
    N = _lcm(*(g.conductor for g in generators))
    gens = [g.promote(N) for g in generators]
    ident = SquareMatrix.identity(rank).promote(N)
    elements = [ident]
    index = {ident.key(): 0}
    gen_idx = []
    for g in gens:
        k = g.key()
        if k not in index:
            index[k] = len(elements)
            elements.append(g)
        gen_idx.append(index[k])
    # BFS from the identity by right multiplication; keeps discovery order stable
    order = [0]
    seen = {0}
    queue = deque([0])
    while queue:
        x = queue.popleft()
        for s in gens:
            y = elements[x] @ s
            k = y.key()
            j = index.get(k)
            if j is None:
                j = len(elements)
                index[k] = j
                elements.append(y)
                if len(elements) > max_order:
                    raise OrderExceeded(
                        f"closure exceeded max_order={max_order}; the generators may not generate a finite group"
                    )
            if j not in seen:
                seen.add(j)
                order.append(j)
                queue.append(j)
    # generators that are not reached from the identity cannot exist in a finite group
    if len(seen) != len(elements):
        raise InternalMismatch("closure did not reach every generator")
    relabel = {old: new for new, old in enumerate(order)}
    ordered = [elements[old] for old in order]
    return FiniteMatrixGroup(ordered, sorted({relabel[i] for i in gen_idx if relabel[i] != 0}), rank)


# -- eigenvalue data -------------------------------------------------------


def _power_sums(charpoly: Sequence[CycNumber], rank: int, count: int) -> list[CycNumber]:
    """tr(g^k) for k = 0..count-1 by Newton's identities."""
    p = [CycNumber.rational(rank)]
    for k in range(1, count):
        acc = _ZERO
        for i in range(1, min(k - 1, rank) + 1):
            term = charpoly[i - 1] * p[k - i]
            acc = acc + term if i % 2 == 1 else acc - term
        if k <= rank:
            term = charpoly[k - 1] * k
            acc = acc + term if k % 2 == 1 else acc - term
        p.append(acc)
    return p


def eigen_multiplicities(g: SquareMatrix, order: Optional[int] = None) -> list[int]:
    """Multiplicity m_a of the eigenvalue zeta_r^a, for a = 0..r-1.

    m_a = (1/r) sum_k zeta_r^(-a k) tr(g^k), with r the order of g.
    """
    r = order if order is not None else g.order()
    return _multiplicities_from_charpoly(g.charpoly(), g.rank, r)


def _multiplicities_from_charpoly(charpoly, rank: int, r: int) -> list[int]:
    p = _power_sums(charpoly, rank, r)
    mult = []
    for a in range(r):
        s = root_of_unity_sum((((-a * k) % r, p[k]) for k in range(r)), r)
        if not s.is_rational():
            raise InternalMismatch(f"eigenvalue multiplicity for exponent {a}/{r} is not rational")
        m = s.to_rational() / r
        if m.denominator != 1 or m < 0:
            raise InternalMismatch(f"eigenvalue multiplicity {m} for exponent {a}/{r} is not a non-negative integer")
        mult.append(int(m))
    if sum(mult) != rank:
        raise InternalMismatch(f"eigenvalue multiplicities {mult} do not sum to {rank}")
    return mult


def _fixed_dim_by_rank(g: SquareMatrix) -> int:
    return g.rank - (g - SquareMatrix.identity(g.rank)).matrix_rank()


def fixed_dim(g: SquareMatrix, order: Optional[int] = None) -> int:
    """dim ker(g - I), by elimination and by the trace average; both must agree."""
    by_rank = _fixed_dim_by_rank(g)
    r = order if order is not None else g.order()
    by_trace = _multiplicities_from_charpoly(g.charpoly(), g.rank, r)[0]
    if by_rank != by_trace:
        raise InternalMismatch(f"fixed_dim: elimination gives {by_rank}, trace average gives {by_trace}")
    return by_rank


def age(g: SquareMatrix, order: Optional[int] = None) -> Fraction:
    """Age sum_a (a/r) m_a of a finite-order element of SL."""
    if g.det() != 1:
        raise NotSL("age is only defined for determinant-one elements")
    r = order if order is not None else g.order()
    mult = eigen_multiplicities(g, r)
    return sum((Fraction(a, r) * m for a, m in enumerate(mult)), Fraction(0))


def _charpoly_key(cp) -> tuple:
    return tuple(v.reduce_conductor().raw for v in cp)


def _compute_classes(G: FiniteMatrixGroup) -> list[ConjClass]:
    n = G.order
    gens = list(G.generator_indices)
    gen_inv = [G.inverse(s) for s in gens]
    assigned = [False] * n
    classes = []
    for i in range(n):
        if assigned[i]:
            continue
        orbit = [i]
        assigned[i] = True
        k = 0
        while k < len(orbit):
            x = orbit[k]
            k += 1
            for s, si in zip(gens, gen_inv):
                y = G.mul(G.mul(s, x), si)
                if not assigned[y]:
                    assigned[y] = True
                    orbit.append(y)
        g = G.elements[i]
        r = G.element_order(i)
        det = g.det()
        is_sl = det == 1
        mult = _multiplicities_from_charpoly(g.charpoly(), G.rank, r)
        G._memo[("mult", i)] = mult
        fd = _fixed_dim_by_rank(g)
        if fd != mult[0]:
            raise InternalMismatch(f"fixed_dim mismatch on element {i}: {fd} vs {mult[0]}")
        a = sum((Fraction(e, r) * m for e, m in enumerate(mult)), Fraction(0)) if is_sl else None
        classes.append(ConjClass(i, tuple(sorted(orbit)), r, fd, det, a))
    return classes


def conjugacy_classes(G: FiniteMatrixGroup) -> list[ConjClass]:
    return G.classes


def element_fixed_dims(G: FiniteMatrixGroup) -> list[int]:
    """Cross-checked fixed_dim of every element of G.

    The trace route is memoised on the characteristic polynomial, which
    determines it completely.
    """
    cache: dict = {}
    out = []
    for i, g in enumerate(G.elements):
        r = G.classes[G.class_index[i]].element_order
        cp = g.charpoly()
        key = (_charpoly_key(cp), r)
        if key not in cache:
            cache[key] = _multiplicities_from_charpoly(cp, G.rank, r)[0]
        by_rank = _fixed_dim_by_rank(g)
        if by_rank != cache[key]:
            raise InternalMismatch(f"fixed_dim mismatch on element {i}: {by_rank} vs {cache[key]}")
        out.append(by_rank)
    return out


def fixed_dim_profile(G: FiniteMatrixGroup) -> tuple[int, ...]:
    counts = Counter(c.fixed_dim for c in G.classes)
    return tuple(counts.get(d, 0) for d in range(G.rank + 1))


def sl_part(G: FiniteMatrixGroup) -> FiniteMatrixGroup:
    """The subgroup of determinant-one elements."""
    members = [i for i in range(G.order) if G.determinant(i) == 1]
    if len(members) == G.order:
        return G
    return G.subgroup(members)


def junior_class_count(H: FiniteMatrixGroup) -> int:
    if any(c.age is None for c in H.classes):
        raise NotSL("junior classes are only defined for subgroups of SL")
    return sum(1 for c in H.classes if c.age == 1)


def class_eigen_exponents(G: FiniteMatrixGroup) -> list[tuple[int, list[int]]]:
    """(order r, exponent list) per class, eigenvalues being zeta_r^a."""
    out = []
    for c in G.classes:
        mult = G._memo[("mult", c.representative_index)]
        exps = [a for a, m in enumerate(mult) for _ in range(m)]
        out.append((c.element_order, exps))
    return out
