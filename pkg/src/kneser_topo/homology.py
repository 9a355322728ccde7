"""Reduced simplicial homology over the integers via Smith normal form.

Boundary matrices are kept sparse (one dict per column).  Ranks and
invariant factors come from an exact elimination: unit pivots are removed
sparsely first, and whatever is left is handed to a dense Smith normal form
that always pivots on the entry of smallest magnitude.  Python integers are
unbounded, so coefficient growth cannot overflow.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import gcd
from typing import Sequence

from .complexes import SimplicialComplex
from .errors import DEFAULT_CAPS, ResourceError

__all__ = [
    "SparseMatrix",
    "ChainComplex",
    "HomologyReport",
    "boundary_matrices",
    "smith_normal_form",
    "reduced_homology",
    "is_homology_sphere",
    "betti_numbers_mod_p",
]


@dataclass
class SparseMatrix:
    nrows: int
    ncols: int
    columns: list[dict[int, int]]

    @classmethod
    def from_dense(cls, rows: Sequence[Sequence[int]]) -> "SparseMatrix":
        nrows = len(rows)
        ncols = len(rows[0]) if nrows else 0
        cols = [dict() for _ in range(ncols)]
        for i, row in enumerate(rows):
            for j, v in enumerate(row):
                if v:
                    cols[j][i] = int(v)
        return cls(nrows, ncols, cols)

    def to_dense(self) -> list[list[int]]:
        out = [[0] * self.ncols for _ in range(self.nrows)]
        for j, col in enumerate(self.columns):
            for i, v in col.items():
                out[i][j] = v
        return out

    def nnz(self) -> int:
        return sum(len(c) for c in self.columns)

    def apply(self, vec: dict[int, int]) -> dict[int, int]:
        """Product with a sparse column vector."""
        out: dict[int, int] = {}
        for j, x in vec.items():
            for i, v in self.columns[j].items():
                out[i] = out.get(i, 0) + x * v
        return {i: v for i, v in out.items() if v}


@dataclass
class ChainComplex:
    """Simplices per dimension and the boundary maps between them.

    ``boundary[d]`` maps dimension d chains to dimension d-1 chains.  In the
    reduced (augmented) complex dimension -1 holds the single empty simplex.
    """

    simplices: dict[int, list[tuple]]
    boundary: dict[int, SparseMatrix]
    reduced: bool = True

    @property
    def dims(self) -> list[int]:
        return sorted(self.simplices)

    def rank_of_chain_group(self, d: int) -> int:
        return len(self.simplices.get(d, ()))

    def check_dd_zero(self, max_dim: int | None = None) -> bool:
        for d in self.dims:
            if max_dim is not None and d > max_dim:
                break
            if d not in self.boundary or d - 1 not in self.boundary:
                continue
            outer, inner = self.boundary[d - 1], self.boundary[d]
            for col in inner.columns:
                if outer.apply(col):
                    return False
        return True


def boundary_matrices(c: SimplicialComplex, reduced: bool = True, max_simplices: int | None = None) -> ChainComplex:
    """Integer boundary matrices with columns in lexicographic simplex order."""
    cap = DEFAULT_CAPS.max_simplices if max_simplices is None else max_simplices
    if len(c) > cap:
        raise ResourceError(f"complex has {len(c)} simplices, cap is {cap}")
    by_dim = c.by_dimension()
    simplices: dict[int, list[tuple]] = {}
    if reduced:
        simplices[-1] = [()]
    for d in sorted(by_dim):
        simplices[d] = by_dim[d]
    boundary: dict[int, SparseMatrix] = {}
    for d, cells in simplices.items():
        if d == -1:
            continue
        if d == 0 and not reduced:
            boundary[0] = SparseMatrix(0, len(cells), [dict() for _ in cells])
            continue
        row_index = {s: i for i, s in enumerate(simplices.get(d - 1, []))}
        cols = []
        for s in cells:
            col = {}
            for i in range(len(s)):
                col[row_index[s[:i] + s[i + 1:]]] = -1 if i % 2 else 1
            cols.append(col)
        boundary[d] = SparseMatrix(len(row_index), len(cells), cols)
    chain = ChainComplex(simplices, boundary, reduced)
    if not chain.check_dd_zero(max_dim=None if len(c) <= 200_000 else 3):
        raise AssertionError("boundary of boundary is not zero")
    return chain


def _normalise_diagonal(diag: list[int]) -> list[int]:
    """Turn a list of nonzero diagonal entries into invariant factors d1 | d2 | ..."""
    units = sum(1 for x in diag if abs(x) == 1)
    # units divide everything, so only the non-unit entries need the gcd/lcm pass
    d = sorted(abs(x) for x in diag if abs(x) != 1)
    for i in range(len(d)):
        for j in range(i + 1, len(d)):
            a, b = d[i], d[j]
            if b % a:
                g = gcd(a, b)
                d[i], d[j] = g, a // g * b
    return [1] * units + sorted(d)


def _dense_snf_diagonal(rows: list[list[int]]) -> list[int]:
    """Diagonal entries from a dense elimination pivoting on smallest magnitude."""
    a = [list(r) for r in rows]
    diag: list[int] = []
    while True:
        best = None
        for i, row in enumerate(a):
            for j, v in enumerate(row):
                if v and (best is None or abs(v) < best[0]):
                    best = (abs(v), i, j)
                    if best[0] == 1:
                        break
            if best is not None and best[0] == 1:
                break
        if best is None:
            return diag
        _, p, q = best
        while True:
            piv = a[p][q]
            changed = False
            for i in range(len(a)):
                if i != p and a[i][q]:
                    f = a[i][q] // piv
                    if f:
                        rp, ri = a[p], a[i]
                        for j in range(len(ri)):
                            if rp[j]:
                                ri[j] -= f * rp[j]
                    if a[i][q]:
                        changed = True
            for j in range(len(a[p])):
                if j != q and a[p][j]:
                    f = a[p][j] // piv
                    if f:
                        for row in a:
                            if row[q]:
                                row[j] -= f * row[q]
                    if a[p][j]:
                        changed = True
            if not changed:
                break
            # a smaller remainder appeared in the pivot row or column: move the pivot
            cand = [(abs(a[i][q]), i, q) for i in range(len(a)) if a[i][q]]
            cand += [(abs(a[p][j]), p, j) for j in range(len(a[p])) if a[p][j]]
            _, p, q = min(cand)
        diag.append(abs(a[p][q]))
        del a[p]
        for row in a:
            del row[q]
        if not a or not a[0]:
            return diag


def _eliminate(m: SparseMatrix) -> list[int]:
    """Nonzero invariant factors of ``m`` (unsorted diagonal before normalisation)."""
    rows: dict[int, dict[int, int]] = {}
    cols: dict[int, set[int]] = {}
    for j, col in enumerate(m.columns):
        if col:
            cols[j] = set(col)
            for i, v in col.items():
                rows.setdefault(i, {})[j] = v
    diag: list[int] = []
    progress = True
    while progress:
        progress = False
        for c in sorted(cols):
            if c not in cols:
                continue
            best = None
            for r in cols[c]:
                v = rows[r][c]
                if v in (1, -1) and (best is None or len(rows[r]) < len(rows[best])):
                    best = r
            if best is None:
                continue
            p = best
            prow = rows[p]
            u = prow[c]
            for t in list(cols[c]):
                if t == p:
                    continue
                trow = rows[t]
                f = trow[c] * u
                for j, v in prow.items():
                    nv = trow.get(j, 0) - f * v
                    if nv:
                        if j not in trow:
                            cols[j].add(t)
                        trow[j] = nv
                    elif j in trow:
                        del trow[j]
                        cols[j].discard(t)
                if not trow:
                    del rows[t]
            for j in prow:
                cols[j].discard(p)
                if not cols[j]:
                    del cols[j]
            del rows[p]
            diag.append(1)
            progress = True
    if rows:
        rlist = sorted(rows)
        clist = sorted(cols)
        cpos = {c: i for i, c in enumerate(clist)}
        dense = [[0] * len(clist) for _ in rlist]
        for ri, r in enumerate(rlist):
            for c, v in rows[r].items():
                dense[ri][cpos[c]] = v
        diag.extend(_dense_snf_diagonal(dense))
    return diag


def smith_normal_form(m) -> list[int]:
    """Nonzero invariant factors ``d1 | d2 | ...`` of an integer matrix.

    ``m`` is a :class:`SparseMatrix` or a dense list of rows.
    """
    if not isinstance(m, SparseMatrix):
        m = SparseMatrix.from_dense(m)
    return _normalise_diagonal(_eliminate(m))


@dataclass
class HomologyReport:
    reduced_betti: dict[int, int]
    torsion: dict[int, list[int]]
    euler_characteristic: int
    f_vector: list[int] = field(default_factory=list)
    reduced: bool = True

    def betti(self, d: int) -> int:
        return self.reduced_betti.get(d, 0)

    @property
    def torsion_free(self) -> bool:
        return not any(self.torsion.values())

    @property
    def is_acyclic(self) -> bool:
        """Trivial reduced homology (the homology of a point)."""
        return self.torsion_free and not any(self.reduced_betti.values())

    @property
    def sphere_dim(self) -> int | None:
        nonzero = [d for d, b in self.reduced_betti.items() if b]
        if len(nonzero) == 1 and self.reduced_betti[nonzero[0]] == 1 and self.torsion_free:
            return nonzero[0]
        return None

    def euler_from_betti(self) -> int:
        total = sum((-1) ** d * b for d, b in self.reduced_betti.items())
        return total + 1 if self.reduced else total

    def signature(self) -> tuple:
        """Hashable summary used to compare homology of different complexes."""
        betti = tuple(sorted((d, b) for d, b in self.reduced_betti.items() if b))
        tors = tuple(sorted((d, tuple(t)) for d, t in self.torsion.items() if t))
        return betti, tors

    def to_json(self) -> dict:
        return {
            "reduced_betti": {str(d): b for d, b in sorted(self.reduced_betti.items())},
            "torsion": {str(d): t for d, t in sorted(self.torsion.items()) if t},
            "euler": self.euler_characteristic,
            "sphere_dim": self.sphere_dim,
        }


def reduced_homology(c: SimplicialComplex, reduced: bool = True, max_simplices: int | None = None) -> HomologyReport:
    """Reduced (default) or ordinary integral homology of ``c``.

    The empty complex has reduced homology of the (-1)-sphere: rank one in
    dimension -1.
    """
    chain = boundary_matrices(c, reduced=reduced, max_simplices=max_simplices)
    ranks: dict[int, int] = {}
    factors: dict[int, list[int]] = {}
    for d, mat in chain.boundary.items():
        inv = smith_normal_form(mat)
        ranks[d] = len(inv)
        factors[d] = [x for x in inv if x > 1]
    betti: dict[int, int] = {}
    torsion: dict[int, list[int]] = {}
    for d in chain.dims:
        b = chain.rank_of_chain_group(d) - ranks.get(d, 0) - ranks.get(d + 1, 0)
        betti[d] = b
        torsion[d] = factors.get(d + 1, [])
    f = c.f_vector()
    euler = sum((-1) ** d * x for d, x in enumerate(f))
    report = HomologyReport(betti, torsion, euler, f, reduced)
    if report.euler_from_betti() != euler:
        raise AssertionError("Euler characteristic mismatch between f-vector and Betti numbers")
    return report


def is_homology_sphere(report: HomologyReport, d: int) -> bool:
    """Reduced Betti number 1 exactly in dimension d, 0 elsewhere, and no torsion."""
    return report.reduced and report.sphere_dim == d


def _rank_mod_p(m: SparseMatrix, p: int) -> int:
    pivots: dict[int, dict[int, int]] = {}
    rank = 0
    for col in m.columns:
        v = {i: x % p for i, x in col.items() if x % p}
        while v:
            lead = max(v)
            if lead not in pivots:
                inv = pow(v[lead], -1, p)
                pivots[lead] = {i: x * inv % p for i, x in v.items()}
                rank += 1
                break
            f = v[lead]
            for i, x in pivots[lead].items():
                nv = (v.get(i, 0) - f * x) % p
                if nv:
                    v[i] = nv
                else:
                    v.pop(i, None)
    return rank


def betti_numbers_mod_p(c: SimplicialComplex, p: int, reduced: bool = True) -> dict[int, int]:
    """Betti numbers with coefficients in GF(p), by column reduction."""
    chain = boundary_matrices(c, reduced=reduced)
    ranks = {d: _rank_mod_p(mat, p) for d, mat in chain.boundary.items()}
    return {d: chain.rank_of_chain_group(d) - ranks.get(d, 0) - ranks.get(d + 1, 0) for d in chain.dims}
