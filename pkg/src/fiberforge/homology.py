"""Exact integer linear algebra: Smith normal form, homology, abelianization.

All arithmetic is over Python integers (arbitrary precision).  The sparse
Smith routine eliminates unit pivots first (singleton rows/columns cost no
fill-in at all), choosing among the rest by Markowitz count, and hands any
unit-free residue to a dense textbook Smith reduction.
"""

from __future__ import annotations

import heapq
import re
from dataclasses import dataclass, field
from fractions import Fraction


# ---------------------------------------------------------------------------
# sparse matrices


class SparseIntMatrix:
    """Integer matrix stored as row dictionaries."""

    def __init__(self, nrows, ncols, entries=()):
        self.nrows = nrows
        self.ncols = ncols
        self.rows = {}
        for r, c, v in entries:
            if v:
                self.rows.setdefault(r, {})
                self.rows[r][c] = self.rows[r].get(c, 0) + v
                if self.rows[r][c] == 0:
                    del self.rows[r][c]
        for r in [r for r, d in self.rows.items() if not d]:
            del self.rows[r]

    def entry_count(self):
        return sum(len(d) for d in self.rows.values())

    def triples(self):
        for r, d in self.rows.items():
            for c, v in d.items():
                yield r, c, v

    def transpose(self):
        return SparseIntMatrix(
            self.ncols, self.nrows, ((c, r, v) for r, c, v in self.triples())
        )

    def to_dense(self):
        out = [[0] * self.ncols for _ in range(self.nrows)]
        for r, c, v in self.triples():
            out[r][c] = v
        return out

    def column_dict(self):
        cols = {}
        for r, c, v in self.triples():
            cols.setdefault(c, {})[r] = v
        return cols

    def multiply(self, other):
        assert self.ncols == other.nrows
        cols = other.rows
        entries = []
        for r, d in self.rows.items():
            acc = {}
            for k, v in d.items():
                for c, w in cols.get(k, {}).items():
                    acc[c] = acc.get(c, 0) + v * w
            entries.extend((r, c, v) for c, v in acc.items() if v)
        return SparseIntMatrix(self.nrows, other.ncols, entries)

    def is_zero(self):
        return not self.rows

    @classmethod
    def from_dense(cls, rows_list):
        nr = len(rows_list)
        nc = len(rows_list[0]) if rows_list else 0
        return cls(
            nr,
            nc,
            (
                (r, c, v)
                for r, row in enumerate(rows_list)
                for c, v in enumerate(row)
                if v
            ),
        )


# ---------------------------------------------------------------------------
# dense Smith normal form (textbook; also serves as the independent oracle)


def snf_dense(rows_list):
    """Diagonal divisors d1 | d2 | ... of a dense integer matrix."""
    m = [list(r) for r in rows_list]
    nr = len(m)
    nc = len(m[0]) if nr else 0
    t = 0
    divisors = []
    while True:
        pivot = None
        best = None
        for i in range(t, nr):
            for j in range(t, nc):
                if m[i][j] != 0 and (best is None or abs(m[i][j]) < best):
                    best = abs(m[i][j])
                    pivot = (i, j)
        if pivot is None:
            break
        i, j = pivot
        m[t], m[i] = m[i], m[t]
        for row in m:
            row[t], row[j] = row[j], row[t]
        # reduce row and column against the pivot until it divides evenly
        while True:
            redo = False
            for i in range(t + 1, nr):
                if m[i][t]:
                    q = m[i][t] // m[t][t]
                    for j in range(t, nc):
                        m[i][j] -= q * m[t][j]
                    if m[i][t]:
                        m[t], m[i] = m[i], m[t]
                        redo = True
                        break
            if redo:
                continue
            for j in range(t + 1, nc):
                if m[t][j]:
                    q = m[t][j] // m[t][t]
                    for i in range(t, nr):
                        m[i][j] -= q * m[i][t]
                    if m[t][j]:
                        for row in m:
                            row[t], row[j] = row[j], row[t]
                        redo = True
                        break
            if not redo:
                break
        # the pivot must divide every remaining entry
        offender = None
        for i in range(t + 1, nr):
            for j in range(t + 1, nc):
                if m[i][j] % m[t][t]:
                    offender = i
                    break
            if offender is not None:
                break
        if offender is not None:
            for j in range(t, nc):
                m[t][j] += m[offender][j]
            continue
        divisors.append(abs(m[t][t]))
        t += 1
        if t == nr or t == nc:
            break
    assert all(
        divisors[i + 1] % divisors[i] == 0 for i in range(len(divisors) - 1)
    )
    return divisors


def _dense_rank_fraction_free(rows_list):
    """Exact rank over Q by Bareiss elimination."""
    m = [list(r) for r in rows_list]
    nr = len(m)
    nc = len(m[0]) if nr else 0
    rank = 0
    prev = 1
    row = 0
    for col in range(nc):
        piv = None
        for i in range(row, nr):
            if m[i][col]:
                piv = i
                break
        if piv is None:
            continue
        m[row], m[piv] = m[piv], m[row]
        p = m[row][col]
        for i in range(row + 1, nr):
            if not m[i][col] and prev == 1:
                # still rescale lazily: full Bareiss update below
                pass
            a = m[i][col]
            for j in range(col, nc):
                m[i][j] = (p * m[i][j] - a * m[row][j]) // prev
        prev = p
        rank += 1
        row += 1
        if row == nr:
            break
    return rank


# ---------------------------------------------------------------------------
# sparse Smith normal form


def smith_normal_form(matrix, need_divisors=True):
    """(rank, divisors) of a SparseIntMatrix, exactly over the integers.

    divisors is the full chain d1 | d2 | ... | d_rank (ones included).
    """
    rows = {r: dict(d) for r, d in matrix.rows.items()}
    cols = {}
    for r, d in rows.items():
        for c in d:
            cols.setdefault(c, set()).add(r)

    rank = 0
    unit_pivots = 0

    def delete_row(r):
        for c in rows[r]:
            cols[c].discard(r)
            if not cols[c]:
                del cols[c]
        del rows[r]

    def eliminate(r0, c0):
        nonlocal rank, unit_pivots
        v = rows[r0][c0]
        assert abs(v) == 1
        for r in list(cols.get(c0, ())):
            if r == r0:
                continue
            a = rows[r][c0] * v  # a / v with v = +-1
            row0 = rows[r0]
            row = rows[r]
            for c, w in row0.items():
                nv = row.get(c, 0) - a * w
                if nv:
                    if c not in row:
                        cols.setdefault(c, set()).add(r)
                    row[c] = nv
                else:
                    if c in row:
                        del row[c]
                        cols[c].discard(r)
            if not row:
                delete_row(r)
        delete_row(r0)
        if c0 in cols:
            del cols[c0]
        rank += 1
        unit_pivots += 1

    heap = []

    def push_candidates_for_row(r):
        d = rows.get(r)
        if not d:
            return
        for c, v in d.items():
            if abs(v) == 1:
                cost = (len(d) - 1) * (len(cols[c]) - 1)
                heapq.heappush(heap, (cost, r, c))
                if cost == 0:
                    break

    for r in rows:
        push_candidates_for_row(r)

    while heap:
        cost, r, c = heapq.heappop(heap)
        if r not in rows or c not in rows[r] or abs(rows[r][c]) != 1:
            continue
        actual = (len(rows[r]) - 1) * (len(cols[c]) - 1)
        if actual > cost:
            heapq.heappush(heap, (actual, r, c))
            continue
        touched = [x for x in cols[c] if x != r]
        eliminate(r, c)
        for x in touched:
            push_candidates_for_row(x)

    # unit-free residue: finish densely
    divisors = [1] * unit_pivots
    if rows:
        live_rows = sorted(rows)
        live_cols = sorted({c for d in rows.values() for c in d})
        ci = {c: j for j, c in enumerate(live_cols)}
        dense = [[0] * len(live_cols) for _ in live_rows]
        for i, r in enumerate(live_rows):
            for c, v in rows[r].items():
                dense[i][ci[c]] = v
        if need_divisors:
            tail = snf_dense(dense)
        else:
            tail = [0] * _dense_rank_fraction_free(dense)
        rank += len(tail)
        divisors.extend(tail)
    return rank, divisors


def rank_mod_p(matrix, p):
    """Rank over the field F_p (p prime)."""
    rows = {}
    for r, d in matrix.rows.items():
        nd = {c: v % p for c, v in d.items() if v % p}
        if nd:
            rows[r] = nd
    cols = {}
    for r, d in rows.items():
        for c in d:
            cols.setdefault(c, set()).add(r)
    rank = 0
    while rows:
        # smallest column, then eliminate it
        r0 = min(rows, key=lambda r: len(rows[r]))
        c0 = min(rows[r0], key=lambda c: len(cols[c]))
        v = rows[r0][c0]
        inv = pow(v, -1, p)
        row0 = rows[r0]
        for r in list(cols.get(c0, ())):
            if r == r0:
                continue
            a = rows[r][c0] * inv % p
            row = rows[r]
            for c, w in row0.items():
                nv = (row.get(c, 0) - a * w) % p
                if nv:
                    if c not in row:
                        cols.setdefault(c, set()).add(r)
                    row[c] = nv
                elif c in row:
                    del row[c]
                    cols[c].discard(r)
            if not row:
                for c in ():
                    pass
                del rows[r]
        for c in row0:
            cols[c].discard(r0)
            if not cols[c]:
                del cols[c]
        del rows[r0]
        rank += 1
    return rank


def rank_over_q(matrix):
    """Exact rank over the rationals (unit pivots, then Bareiss)."""
    rank, _ = smith_normal_form(matrix, need_divisors=False)
    return rank


# ---------------------------------------------------------------------------
# abelian groups


@dataclass(frozen=True)
class AbelianGroup:
    """Finitely generated abelian group: free rank plus torsion divisors
    (each > 1, in divisibility order)."""

    rank: int
    torsion: tuple = ()

    def __post_init__(self):
        assert all(t > 1 for t in self.torsion)
        assert all(
            self.torsion[i + 1] % self.torsion[i] == 0
            for i in range(len(self.torsion) - 1)
        )

    def __str__(self):
        parts = []
        if self.rank == 1:
            parts.append("Z")
        elif self.rank > 1:
            parts.append("Z^%d" % self.rank)
        for t in self.torsion:
            parts.append("Z_%d" % t)
        return " + ".join(parts) if parts else "0"

    @property
    def is_trivial(self):
        return self.rank == 0 and not self.torsion

    @classmethod
    def from_snf(cls, ambient_rank, image_rank, divisors):
        torsion = tuple(d for d in divisors if d > 1)
        return cls(ambient_rank - image_rank, torsion)


# ---------------------------------------------------------------------------
# chain complexes


@dataclass
class ChainComplex:
    """Boundary maps d[k]: C_k -> C_{k-1} for k = 1..n over the integers."""

    dims: list  # chain group ranks, index 0..n
    boundaries: dict  # k -> SparseIntMatrix with shape (dims[k-1], dims[k])
    labels: dict = field(default_factory=dict)  # optional metadata

    def check_dd_zero(self):
        for k in sorted(self.boundaries):
            if k + 1 in self.boundaries:
                prod = self.boundaries[k].multiply(self.boundaries[k + 1])
                assert prod.is_zero(), "dd != 0 between degrees %d, %d" % (k + 1, k)
        return True

    def top_degree(self):
        return len(self.dims) - 1

    def euler_characteristic(self):
        return sum((-1) ** k * n for k, n in enumerate(self.dims))


def homology(complex_):
    """Integral homology of every degree, via Smith normal form."""
    n = complex_.top_degree()
    ranks = {}
    divisors = {}
    for k in range(1, n + 1):
        d = complex_.boundaries.get(k)
        if d is None or d.is_zero():
            ranks[k], divisors[k] = 0, []
        else:
            ranks[k], divisors[k] = smith_normal_form(d)
    out = []
    for k in range(0, n + 1):
        kernel = complex_.dims[k] - ranks.get(k, 0)
        image = ranks.get(k + 1, 0)
        out.append(AbelianGroup.from_snf(kernel, image, divisors.get(k + 1, [])))
    return out


def betti_over_field(complex_, p=0):
    """Betti numbers over Q (p = 0) or over F_p (p prime)."""
    n = complex_.top_degree()
    ranks = {}
    for k in range(1, n + 1):
        d = complex_.boundaries.get(k)
        if d is None or d.is_zero():
            ranks[k] = 0
        elif p == 0:
            ranks[k] = rank_over_q(d)
        else:
            ranks[k] = rank_mod_p(d, p)
    return [
        complex_.dims[k] - ranks.get(k, 0) - ranks.get(k + 1, 0)
        for k in range(0, n + 1)
    ]


# ---------------------------------------------------------------------------
# group presentations


@dataclass(frozen=True)
class GroupPresentation:
    generators: tuple  # names
    relators: tuple  # each a tuple of (generator index, exponent sign)

    @classmethod
    def parse(cls, text):
        """Parse a presentation file.

        First non-comment line: generator names.  Each following line is a
        relator word: letters with optional ^k exponents (k may be
        negative), uppercase letters as inverses of single-letter names.
        """
        lines = [
            ln.strip()
            for ln in text.splitlines()
            if ln.strip() and not ln.strip().startswith("#")
        ]
        if not lines:
            raise ValueError("empty presentation")
        gens = tuple(lines[0].replace(",", " ").split())
        gen_index = {g: i for i, g in enumerate(gens)}
        token = re.compile(r"([A-Za-z])(?:\^(-?\d+))?")
        relators = []
        for ln in lines[1:]:
            word = []
            pos = 0
            for m in token.finditer(ln.replace(" ", "")):
                assert m.start() == pos, "unparsed junk in relator %r" % ln
                pos = m.end()
                letter, exp = m.group(1), m.group(2)
                k = int(exp) if exp else 1
                if letter in gen_index:
                    gi = gen_index[letter]
                elif letter.lower() in gen_index and letter.isupper():
                    gi = gen_index[letter.lower()]
                    k = -k
                else:
                    raise ValueError("unknown generator %r" % letter)
                sign = 1 if k > 0 else -1
                word.extend((gi, sign) for _ in range(abs(k)))
            relators.append(tuple(word))
        return cls(gens, tuple(relators))

    def exponent_matrix(self):
        entries = []
        for r, word in enumerate(self.relators):
            acc = {}
            for gi, sign in word:
                acc[gi] = acc.get(gi, 0) + sign
            entries.extend((r, gi, v) for gi, v in acc.items() if v)
        return SparseIntMatrix(len(self.relators), len(self.generators), entries)


def abelianize(presentation):
    """The abelianization, from the Smith form of the exponent-sum matrix."""
    m = presentation.exponent_matrix()
    rank, divisors = smith_normal_form(m)
    return AbelianGroup.from_snf(len(presentation.generators), rank, divisors)
