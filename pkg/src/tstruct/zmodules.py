"""Exact linear algebra over Z.

Smith normal form with unimodular transforms, bounded complexes of
finite free Z-modules, their homology in structure-theorem normal form,
supports, and the Hom/Ext/Tor tables for elementary modules.  All
arithmetic is exact (Python integers).
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd

from .elementary import ElementaryModule
from .spectrum import ZSubset, factorint

Matrix = list  # list of rows, each a list of ints; shape (rows, cols)

NEG_INF = float("-inf")


class UnsupportedPairError(ValueError):
    """Hom/Ext requested for a pair outside the supported tables."""


# ---------------------------------------------------------------------------
# matrix utilities


def mat_shape(M: Matrix) -> tuple[int, int]:
    return len(M), len(M[0]) if M else 0


def identity(n: int) -> Matrix:
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def zeros(rows: int, cols: int) -> Matrix:
    return [[0] * cols for _ in range(rows)]


def matmul(A: Matrix, B: Matrix) -> Matrix:
    ra, ca = mat_shape(A)
    rb, cb = mat_shape(B)
    if ca != rb:
        raise ValueError(f"shape mismatch {ra}x{ca} @ {rb}x{cb}")
    out = zeros(ra, cb)
    for i in range(ra):
        Ai = A[i]
        Oi = out[i]
        for k in range(ca):
            a = Ai[k]
            if a:
                Bk = B[k]
                for j in range(cb):
                    Oi[j] += a * Bk[j]
    return out


def mat_copy(M: Matrix) -> Matrix:
    return [row[:] for row in M]


def is_zero_matrix(M: Matrix) -> bool:
    return all(x == 0 for row in M for x in row)


def rank_mod_p(M: Matrix, p: int) -> int:
    """Rank of an integer matrix over the field Z/p."""
    rows = [[x % p for x in row] for row in M]
    m, n = mat_shape(rows)
    rank = 0
    col = 0
    for col in range(n):
        piv = next((i for i in range(rank, m) if rows[i][col] % p), None)
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        inv = pow(rows[rank][col], -1, p)
        rows[rank] = [(x * inv) % p for x in rows[rank]]
        for i in range(m):
            if i != rank and rows[i][col]:
                c = rows[i][col]
                rows[i] = [(x - c * y) % p for x, y in zip(rows[i], rows[rank])]
        rank += 1
        if rank == m:
            break
    return rank


def rank_rational(M: Matrix) -> int:
    """Rank over Q, by fraction-free (Bareiss) elimination."""
    A = mat_copy(M)
    m, n = mat_shape(A)
    rank = 0
    prev = 1
    for col in range(n):
        piv = next((i for i in range(rank, m) if A[i][col] != 0), None)
        if piv is None:
            continue
        A[rank], A[piv] = A[piv], A[rank]
        for i in range(rank + 1, m):
            for j in range(col + 1, n):
                A[i][j] = (A[rank][col] * A[i][j] - A[i][col] * A[rank][j]) // prev
            A[i][col] = 0
        prev = A[rank][col]
        rank += 1
        if rank == m:
            break
    return rank


# ---------------------------------------------------------------------------
# Smith normal form


def smith_normal_form(M: Matrix) -> tuple[Matrix, Matrix, Matrix]:
    """Exact Smith normal form: returns (D, U, V) with D = U @ M @ V.

    U and V are unimodular, D is diagonal with d1 | d2 | ... and zeros
    last; diagonal entries are nonnegative.

    >>> D, U, V = smith_normal_form([[2, 0], [0, 3]])
    >>> [D[i][i] for i in range(2)]
    [1, 6]
    >>> matmul(matmul(U, [[2, 0], [0, 3]]), V) == D
    True
    """
    m, n = mat_shape(M)
    D = mat_copy(M)
    U = identity(m)
    V = identity(n)

    def row_gcd_step(i, j, col):
        # unimodular transform on rows (i, j) making D[i][col] = gcd, D[j][col] = 0
        a, b = D[i][col], D[j][col]
        if b == 0:
            return
        if a == 0:
            D[i], D[j] = D[j], D[i]
            U[i], U[j] = U[j], U[i]
            return
        if b % a == 0:
            q = b // a  # plain elimination keeps the pivot row clean
            D[j] = [s - q * r for r, s in zip(D[i], D[j])]
            U[j] = [s - q * r for r, s in zip(U[i], U[j])]
            return
        g, x, y = _xgcd(a, b)
        a_, b_ = a // g, b // g
        Di, Dj = D[i], D[j]
        Ui, Uj = U[i], U[j]
        D[i] = [x * r + y * s for r, s in zip(Di, Dj)]
        D[j] = [-b_ * r + a_ * s for r, s in zip(Di, Dj)]
        U[i] = [x * r + y * s for r, s in zip(Ui, Uj)]
        U[j] = [-b_ * r + a_ * s for r, s in zip(Ui, Uj)]

    def col_gcd_step(j, k, row):
        a, b = D[row][j], D[row][k]
        if b == 0:
            return
        if a == 0:
            for r in range(m):
                D[r][j], D[r][k] = D[r][k], D[r][j]
            for r in range(n):
                V[r][j], V[r][k] = V[r][k], V[r][j]
            return
        if b % a == 0:
            q = b // a
            for r in range(m):
                D[r][k] -= q * D[r][j]
            for r in range(n):
                V[r][k] -= q * V[r][j]
            return
        g, x, y = _xgcd(a, b)
        a_, b_ = a // g, b // g
        for r in range(m):
            rj, rk = D[r][j], D[r][k]
            D[r][j] = x * rj + y * rk
            D[r][k] = -b_ * rj + a_ * rk
        for r in range(n):
            rj, rk = V[r][j], V[r][k]
            V[r][j] = x * rj + y * rk
            V[r][k] = -b_ * rj + a_ * rk

    t = 0
    while t < min(m, n):
        # choose a pivot of minimal absolute value in the lower-right block
        best = None
        for i in range(t, m):
            for j in range(t, n):
                if D[i][j] != 0 and (best is None or abs(D[i][j]) < best[0]):
                    best = (abs(D[i][j]), i, j)
        if best is None:
            break
        _, bi, bj = best
        if bi != t:
            D[t], D[bi] = D[bi], D[t]
            U[t], U[bi] = U[bi], U[t]
        if bj != t:
            for r in range(m):
                D[r][t], D[r][bj] = D[r][bj], D[r][t]
            for r in range(n):
                V[r][t], V[r][bj] = V[r][bj], V[r][t]
        while True:
            for i in range(t + 1, m):
                row_gcd_step(t, i, t)
            for j in range(t + 1, n):
                col_gcd_step(t, j, t)
            if any(D[i][t] for i in range(t + 1, m)):
                continue
            # pivot must divide the whole remaining block
            offender = None
            for i in range(t + 1, m):
                for j in range(t + 1, n):
                    if D[i][j] % D[t][t]:
                        offender = i
                        break
                if offender is not None:
                    break
            if offender is None:
                break
            D[t] = [r + s for r, s in zip(D[t], D[offender])]
            U[t] = [r + s for r, s in zip(U[t], U[offender])]
        if D[t][t] < 0:
            D[t] = [-x for x in D[t]]
            U[t] = [-x for x in U[t]]
        t += 1
    return D, U, V


def _xgcd(a: int, b: int) -> tuple[int, int, int]:
    """g, x, y with a*x + b*y = g = gcd(a, b)."""
    old_r, r = a, b
    old_x, x = 1, 0
    old_y, y = 0, 1
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_x, x = x, old_x - q * x
        old_y, y = y, old_y - q * y
    if old_r < 0:
        old_r, old_x, old_y = -old_r, -old_x, -old_y
    return old_r, old_x, old_y


def snf_invariants(M: Matrix) -> list[int]:
    """The diagonal of the Smith normal form, zeros included.

    >>> snf_invariants([[2, 0], [0, 3]])
    [1, 6]
    """
    D, _, _ = smith_normal_form(M)
    m, n = mat_shape(D)
    return [D[i][i] for i in range(min(m, n))]


# ---------------------------------------------------------------------------
# finitely generated modules


@dataclass(frozen=True)
class FgZModule:
    """A finitely generated Z-module in structure-theorem normal form.

    ``torsion`` lists (p, e, multiplicity) for the cyclic factors Z/p^e,
    sorted; equality of values is isomorphism of modules.

    >>> FgZModule.from_invariant_factors([2, 6]) == FgZModule(0, ((2, 1, 2), (3, 1, 1)))
    True
    """

    rank: int = 0
    torsion: tuple = ()  # ((p, e, mult), ...)

    def __post_init__(self):
        if self.rank < 0:
            raise ValueError("negative rank")
        acc: dict = {}
        for p, e, m in self.torsion:
            if e < 1 or m < 1:
                raise ValueError(f"bad torsion entry {(p, e, m)!r}")
            acc[(p, e)] = acc.get((p, e), 0) + m
        object.__setattr__(
            self, "torsion", tuple((p, e, m) for (p, e), m in sorted(acc.items()))
        )

    @staticmethod
    def zero() -> "FgZModule":
        return FgZModule()

    @staticmethod
    def free(rank: int) -> "FgZModule":
        return FgZModule(rank=rank)

    @staticmethod
    def cyclic(n: int) -> "FgZModule":
        """Z/n (Z itself for n = 0)."""
        if n == 0:
            return FgZModule(rank=1)
        n = abs(n)
        if n == 1:
            return FgZModule()
        return FgZModule(0, tuple((p, e, 1) for p, e in factorint(n).items()))

    @staticmethod
    def from_invariant_factors(factors) -> "FgZModule":
        rank = 0
        tors = []
        for d in factors:
            d = abs(d)
            if d == 0:
                rank += 1
            elif d > 1:
                tors.extend((p, e, 1) for p, e in factorint(d).items())
        return FgZModule(rank, tuple(tors))

    def direct_sum(self, other: "FgZModule") -> "FgZModule":
        return FgZModule(self.rank + other.rank, self.torsion + other.torsion)

    @property
    def is_zero(self) -> bool:
        return self.rank == 0 and not self.torsion

    def torsion_primes(self) -> frozenset[int]:
        return frozenset(p for p, _, _ in self.torsion)

    def torsion_order_exponent(self, p: int) -> int:
        """Largest e with Z/p^e a summand (0 if none)."""
        return max((e for q, e, _ in self.torsion if q == p), default=0)

    def mod(self, p: int, t: int) -> tuple:
        """Invariant factors of M/p^t M as a multiset of exponents of p."""
        out = [t] * self.rank
        for q, e, m in self.torsion:
            if q == p:
                out.extend([min(e, t)] * m)
        return tuple(sorted(x for x in out if x > 0))

    def part(self, p: int, t: int) -> tuple:
        """Invariant factors of the p^t-torsion subgroup M[p^t], as exponents."""
        out = []
        for q, e, m in self.torsion:
            if q == p:
                out.extend([min(e, t)] * m)
        return tuple(sorted(x for x in out if x > 0))

    def __str__(self):
        if self.is_zero:
            return "0"
        bits = []
        if self.rank:
            bits.append("Z" + (f"^{self.rank}" if self.rank > 1 else ""))
        for p, e, m in self.torsion:
            bits.append(f"Z/{p**e}" + (f"^{m}" if m > 1 else ""))
        return " + ".join(bits)


def support(M: FgZModule) -> ZSubset:
    """Support of a finitely generated module in Spec(Z).

    >>> support(FgZModule.cyclic(12))
    ZSubset.finite([2, 3])
    >>> support(FgZModule.free(1))
    ZSubset.whole()
    """
    if M.rank > 0:
        return ZSubset.whole()
    return ZSubset.finite(M.torsion_primes())


def ass_primes(M: FgZModule) -> tuple[bool, frozenset[int]]:
    """Associated primes over Z: (generic point present, maximal primes)."""
    return M.rank > 0, M.torsion_primes()


def tor(A: FgZModule, B: FgZModule) -> tuple[FgZModule, FgZModule]:
    """(Tor_0, Tor_1) = (A (x) B, Tor_1(A, B)) over the PID Z.

    Tor_0(Z/a, Z/b) = Tor_1(Z/a, Z/b) = Z/gcd(a, b), extended bilinearly;
    Tor_1 vanishes against free factors.

    >>> t0, t1 = tor(FgZModule.cyclic(4), FgZModule.cyclic(6))
    >>> str(t0), str(t1)
    ('Z/2', 'Z/2')
    """
    tor0 = [(p, e, m) for p, e, m in A.torsion for _ in range(B.rank)]
    tor0 += [(p, e, m) for p, e, m in B.torsion for _ in range(A.rank)]
    tor1 = []
    for p, e, m in A.torsion:
        for q, f, mm in B.torsion:
            if p == q:
                tor0.append((p, min(e, f), m * mm))
                tor1.append((p, min(e, f), m * mm))
    return (
        FgZModule(A.rank * B.rank, tuple(tor0)),
        FgZModule(0, tuple(tor1)),
    )


# ---------------------------------------------------------------------------
# free complexes


@dataclass(frozen=True)
class FreeComplex:
    """A bounded complex of finite free Z-modules, differentials upward.

    ``diffs[k]`` is the matrix of the map from degree ``min_degree + k``
    to ``min_degree + k + 1`` acting on column vectors, so its shape is
    (ranks[k+1], ranks[k]).  Composites must vanish.
    """

    min_degree: int = 0
    ranks: tuple = ()
    diffs: tuple = ()  # tuple of matrices as tuples of tuples

    def __post_init__(self):
        ranks = tuple(int(r) for r in self.ranks)
        if any(r < 0 for r in ranks):
            raise ValueError("negative rank")
        diffs = tuple(
            tuple(tuple(int(x) for x in row) for row in M) for M in self.diffs
        )
        object.__setattr__(self, "ranks", ranks)
        object.__setattr__(self, "diffs", diffs)
        if ranks and len(diffs) != len(ranks) - 1:
            raise ValueError("need exactly one differential between consecutive terms")
        for k, M in enumerate(diffs):
            rows = len(M)
            cols = len(M[0]) if M else 0
            if rows != ranks[k + 1] or (rows and cols != ranks[k]):
                raise ValueError(f"differential {k} has wrong shape")
        for k in range(len(diffs) - 1):
            A = [list(r) for r in diffs[k + 1]]
            B = [list(r) for r in diffs[k]]
            if A and B and A[0] and B and not is_zero_matrix(matmul(A, B)):
                raise ValueError("d o d != 0")

    # -- access ---------------------------------------------------------------

    @property
    def max_degree(self) -> int:
        return self.min_degree + len(self.ranks) - 1

    def degrees(self) -> range:
        return range(self.min_degree, self.min_degree + len(self.ranks))

    def rank_at(self, d: int) -> int:
        k = d - self.min_degree
        if 0 <= k < len(self.ranks):
            return self.ranks[k]
        return 0

    def diff_at(self, d: int) -> Matrix:
        """Matrix of the differential leaving degree d (target x source)."""
        k = d - self.min_degree
        if 0 <= k < len(self.diffs):
            return [list(row) for row in self.diffs[k]]
        return zeros(self.rank_at(d + 1), self.rank_at(d))

    @property
    def is_zero(self) -> bool:
        return all(r == 0 for r in self.ranks)

    # -- builders -------------------------------------------------------------

    @staticmethod
    def zero() -> "FreeComplex":
        return FreeComplex(0, (), ())

    @staticmethod
    def stalk_free(rank: int, degree: int = 0) -> "FreeComplex":
        return FreeComplex(degree, (rank,), ())

    @staticmethod
    def cyclic_resolution(n: int, degree: int = 0) -> "FreeComplex":
        """Two-term free resolution of Z/n sitting in homological degree
        ``degree`` (terms in degrees degree-1 and degree)."""
        return FreeComplex(degree - 1, (1, 1), (((n,),),))

    @staticmethod
    def from_module(M: FgZModule, degree: int = 0) -> "FreeComplex":
        """A free complex with homology M concentrated in one degree."""
        pieces = [FreeComplex.stalk_free(M.rank, degree)] if M.rank else []
        for p, e, m in M.torsion:
            for _ in range(m):
                pieces.append(FreeComplex.cyclic_resolution(p**e, degree))
        out = FreeComplex.zero()
        for piece in pieces:
            out = direct_sum(out, piece)
        return out

    @staticmethod
    def koszul(elements) -> "FreeComplex":
        """The Koszul complex on a sequence of integers, in degrees [-r, 0].

        Built as the tensor product of the two-term complexes Z --a--> Z;
        its degree-0 homology is Z/(a_1, ..., a_r).

        >>> homology(FreeComplex.koszul([2]))[0]
        FgZModule(rank=0, torsion=((2, 1, 1),))
        """
        out = FreeComplex.stalk_free(1, 0)
        for a in elements:
            out = tensor(out, FreeComplex(-1, (1, 1), (((int(a),),),)))
        return out

    def shift(self, k: int) -> "FreeComplex":
        """The translate X[k]; homology moves from degree d to d - k."""
        if k % 2:
            # odd translates negate the differential
            return FreeComplex(
                self.min_degree - k,
                self.ranks,
                tuple(tuple(tuple(-x for x in row) for row in M) for M in self.diffs),
            )
        return FreeComplex(self.min_degree - k, self.ranks, self.diffs)

    def to_json(self) -> dict:
        return {
            "minDeg": self.min_degree,
            "ranks": list(self.ranks),
            "diffs": [[list(row) for row in M] for M in self.diffs],
        }

    @staticmethod
    def from_json(obj: dict) -> "FreeComplex":
        return FreeComplex(
            obj.get("minDeg", 0),
            tuple(obj.get("ranks", ())),
            tuple(tuple(tuple(row) for row in M) for M in obj.get("diffs", ())),
        )


def direct_sum(X: FreeComplex, Y: FreeComplex) -> FreeComplex:
    if X.is_zero:
        return Y
    if Y.is_zero:
        return X
    lo = min(X.min_degree, Y.min_degree)
    hi = max(X.max_degree, Y.max_degree)
    ranks = [X.rank_at(d) + Y.rank_at(d) for d in range(lo, hi + 1)]
    diffs = []
    for d in range(lo, hi):
        A, B = X.diff_at(d), Y.diff_at(d)
        rows = X.rank_at(d + 1) + Y.rank_at(d + 1)
        cols = X.rank_at(d) + Y.rank_at(d)
        M = zeros(rows, cols)
        for i in range(X.rank_at(d + 1)):
            for j in range(X.rank_at(d)):
                M[i][j] = A[i][j]
        for i in range(Y.rank_at(d + 1)):
            for j in range(Y.rank_at(d)):
                M[X.rank_at(d + 1) + i][X.rank_at(d) + j] = B[i][j]
        diffs.append(M)
    return FreeComplex(lo, tuple(ranks), tuple(tuple(tuple(r) for r in M) for M in diffs))


def tensor(X: FreeComplex, Y: FreeComplex) -> FreeComplex:
    """Tensor product complex with the Koszul sign d(x@y) = dx@y + (-1)^i x@dy."""
    if X.is_zero or Y.is_zero:
        return FreeComplex.zero()
    lo = X.min_degree + Y.min_degree
    hi = X.max_degree + Y.max_degree

    def blocks(d):
        # ordered list of (i, j) with i + j = d contributing X^i (x) Y^j
        return [
            (i, d - i)
            for i in X.degrees()
            if Y.rank_at(d - i) and X.rank_at(i)
        ]

    def offset_table(d):
        offs = {}
        pos = 0
        for (i, j) in blocks(d):
            offs[(i, j)] = pos
            pos += X.rank_at(i) * Y.rank_at(j)
        return offs, pos

    ranks = []
    tables = []
    for d in range(lo, hi + 1):
        offs, total = offset_table(d)
        tables.append(offs)
        ranks.append(total)
    diffs = []
    for d in range(lo, hi):
        offs_s, total_s = tables[d - lo], ranks[d - lo]
        offs_t, total_t = tables[d + 1 - lo], ranks[d + 1 - lo]
        M = zeros(total_t, total_s)
        for (i, j), base_s in offs_s.items():
            rx, ry = X.rank_at(i), Y.rank_at(j)
            # dX (x) 1 : block (i, j) -> (i+1, j)
            if (i + 1, j) in offs_t:
                base_t = offs_t[(i + 1, j)]
                A = X.diff_at(i)
                for a in range(X.rank_at(i + 1)):
                    for b in range(rx):
                        if A[a][b]:
                            for c in range(ry):
                                M[base_t + a * ry + c][base_s + b * ry + c] += A[a][b]
            # (-1)^i 1 (x) dY : block (i, j) -> (i, j+1)
            if (i, j + 1) in offs_t:
                base_t = offs_t[(i, j + 1)]
                B = Y.diff_at(j)
                sgn = -1 if i % 2 else 1
                for b in range(rx):
                    for a in range(Y.rank_at(j + 1)):
                        for c in range(ry):
                            if B[a][c]:
                                M[base_t + b * Y.rank_at(j + 1) + a][
                                    base_s + b * ry + c
                                ] += sgn * B[a][c]
        diffs.append(M)
    return FreeComplex(lo, tuple(ranks), tuple(tuple(tuple(r) for r in M) for M in diffs))


# ---------------------------------------------------------------------------
# homology


def kernel_basis(A: Matrix, ncols: int) -> Matrix:
    """Columns spanning ker(A) inside Z^ncols (A acts on column vectors)."""
    if not A or not A[0]:
        return identity(ncols)
    D, _, V = smith_normal_form(A)
    m, n = mat_shape(A)
    r = sum(1 for i in range(min(m, n)) if D[i][i] != 0)
    return [[V[i][j] for j in range(r, n)] for i in range(n)]


def solve_columns(K: Matrix, B: Matrix) -> Matrix:
    """Solve K @ C = B exactly (raises if some column is not in the image)."""
    rows, k = mat_shape(K)
    if k == 0:
        if not is_zero_matrix(B):
            raise ArithmeticError("inconsistent system")
        return zeros(0, mat_shape(B)[1])
    D, U, V = smith_normal_form(K)
    UB = matmul(U, B)
    ncols = mat_shape(B)[1]
    Y = zeros(k, ncols)
    for i in range(rows):
        d = D[i][i] if i < k else 0
        for j in range(ncols):
            v = UB[i][j]
            if i < k and d != 0:
                if v % d:
                    raise ArithmeticError("inconsistent system")
                Y[i][j] = v // d
            elif v != 0:
                raise ArithmeticError("inconsistent system")
    return matmul(V, Y)


def homology(X: FreeComplex) -> dict[int, FgZModule]:
    """Degreewise homology ker d / im d in normal form.

    >>> H = homology(FreeComplex.koszul([2]))
    >>> str(H.get(0, FgZModule.zero())), str(H.get(-1, FgZModule.zero()))
    ('Z/2', '0')
    """
    out: dict[int, FgZModule] = {}
    for d in X.degrees():
        n = X.rank_at(d)
        if n == 0:
            continue
        A = X.diff_at(d)
        B = X.diff_at(d - 1)
        K = kernel_basis(A, n)
        kdim = mat_shape(K)[1]
        if kdim == 0:
            continue
        if X.rank_at(d - 1):
            C = solve_columns(K, B)
            facs = snf_invariants(C)
        else:
            facs = []
        rank = kdim - sum(1 for f in facs if f != 0)
        tors = []
        for f in facs:
            if f not in (0, 1):
                tors.extend((p, e, 1) for p, e in factorint(f).items())
        H = FgZModule(rank, tuple(tors))
        if not H.is_zero:
            out[d] = H
    return out


def top_indices(X: FreeComplex, p) -> tuple:
    """Top homological degree seen at a prime, two independent ways.

    ``m`` is the largest degree whose homology is supported at p (from
    the integral normal forms); ``h`` is the largest degree where the
    derived fiber at p is nonzero (ranks over Q for the generic point,
    ranks over F_p for a maximal ideal).  These always agree; a mismatch
    means a broken engine, so it raises.

    >>> K = FreeComplex.koszul([2])
    >>> top_indices(K, 2)
    (0, 0)
    >>> top_indices(K, 3)
    (-inf, -inf)
    """
    from .spectrum import zpoint

    pt = zpoint(p)
    H = homology(X)
    if pt.is_generic:
        m = max((d for d, M in H.items() if M.rank > 0), default=NEG_INF)
    else:
        m = max(
            (d for d, M in H.items() if M.rank > 0 or pt.p in M.torsion_primes()),
            default=NEG_INF,
        )
    h = NEG_INF
    for d in X.degrees():
        n = X.rank_at(d)
        if n == 0:
            continue
        if pt.is_generic:
            dim = n - rank_rational(X.diff_at(d)) - rank_rational(X.diff_at(d - 1))
        else:
            q = pt.p
            dim = n - rank_mod_p(X.diff_at(d), q) - rank_mod_p(X.diff_at(d - 1), q)
        if dim > 0:
            h = d
    if m != h:
        raise ArithmeticError(
            f"top-index disagreement at {pt}: homology says {m}, fibers say {h}"
        )
    return m, h


# ---------------------------------------------------------------------------
# Hom / Ext tables on elementary modules


def _hom_ext_atom(src_kind, src, tgt_kind, tgt):
    """Hom and Ext^1 for a single (source, target) atom pair.

    Sources must be finitely generated atoms (free or cyclic torsion);
    every elementary target is allowed.  Derived from the resolution
    0 -> Z -> Z -> Z/p^e -> 0 and divisibility of the targets.
    """
    zero = ElementaryModule.zero()
    if src_kind == "free":
        r = src
        if tgt_kind == "free":
            return ElementaryModule.free(tgt * r), zero
        if tgt_kind == "loc":
            s, rk = tgt
            return ElementaryModule.localized_free(s, rk * r), zero
        if tgt_kind == "tors":
            p, e, m = tgt
            return ElementaryModule.cyclic_torsion(p, e, m * r), zero
        s, m = tgt
        return ElementaryModule.prufer_sum(s, m * r), zero
    # torsion source Z/p^e with multiplicity m0
    p, e, m0 = src
    if tgt_kind == "free":
        return zero, ElementaryModule.cyclic_torsion(p, e, tgt * m0)
    if tgt_kind == "loc":
        s, rk = tgt
        if s.contains(p):
            return zero, zero  # p acts invertibly on the target
        return zero, ElementaryModule.cyclic_torsion(p, e, rk * m0)
    if tgt_kind == "tors":
        q, f, m1 = tgt
        if q != p:
            return zero, zero
        g = ElementaryModule.cyclic_torsion(p, min(e, f), m0 * m1)
        return g, g
    s, m1 = tgt
    if not s.contains(p):
        return zero, zero
    # Hom(Z/p^e, Z(p^oo)) = Z/p^e; Ext^1 into a divisible module vanishes
    return ElementaryModule.cyclic_torsion(p, e, m0 * m1), zero


def _atoms_of(E: ElementaryModule, as_source: bool):
    if E.free_rank:
        yield ("free", E.free_rank)
    for s, r in E.localized:
        if as_source:
            raise UnsupportedPairError("localized modules are not supported as Hom sources")
        yield ("loc", (s, r))
    for p, e, m in E.torsion:
        yield ("tors", (p, e, m))
    for s, m in E.prufer:
        if as_source:
            raise UnsupportedPairError("Pruefer modules are not supported as Hom sources")
        yield ("prufer", (s, m))


def hom_ext_tables(A: ElementaryModule, B: ElementaryModule):
    """(Hom(A, B), Ext^1(A, B)) as elementary modules.

    A must be finitely generated.  Hom and Ext^1 are additive in both
    arguments, so everything reduces to the atom table.

    >>> A = ElementaryModule.cyclic_torsion(2, 1)
    >>> L = ElementaryModule.localized_free(ZSubset.finite([2]), 1)
    >>> hom_ext_tables(A, L)
    (ElementaryModule.zero(), ElementaryModule.zero())
    >>> hom, ext = hom_ext_tables(ElementaryModule.cyclic_torsion(2, 3), ElementaryModule.free(1))
    >>> str(ext)
    'Z/8'
    """
    hom = ElementaryModule.zero()
    ext = ElementaryModule.zero()
    for sk, sd in _atoms_of(A, as_source=True):
        for tk, td in _atoms_of(B, as_source=False):
            h, x = _hom_ext_atom(sk, sd, tk, td)
            hom = hom + h
            ext = ext + x
    return hom, ext
