"""Dictionary between closed proof-terms and exact linear algebra.

Propositions built from the unit and the additive conjunction alone play
the role of vector types; their closed irreducible proofs are canonical
vectors, read off entry by entry (left subtree stacked above the right).
Matrices compile to lambda-terms that project each input coordinate and
sum the scaled columns; naturals are Church-encoded and drive the matrix
iterator.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import syntax as s
from .errors import DimMismatch, IllTyped
from .rewrite import normalize
from .semiring import Scalar, SemiringSpec, scalar_add, scalar_mul


# ---------------------------------------------------------------------------
# vector types
# ---------------------------------------------------------------------------


class VShape:
    __slots__ = ()


@dataclass(frozen=True)
class VLeaf(VShape):
    pass


@dataclass(frozen=True)
class VNode(VShape):
    left: VShape
    right: VShape


def dim(shape: VShape) -> int:
    if isinstance(shape, VLeaf):
        return 1
    return dim(shape.left) + dim(shape.right)


def to_prop(shape: VShape) -> s.Prop:
    if isinstance(shape, VLeaf):
        return s.One()
    return s.With(to_prop(shape.left), to_prop(shape.right))


def is_v_type(p: s.Prop) -> VShape | None:
    if isinstance(p, s.One):
        return VLeaf()
    if isinstance(p, s.With):
        left = is_v_type(p.left)
        right = is_v_type(p.right)
        if left is not None and right is not None:
            return VNode(left, right)
    return None


def right_comb(n: int) -> VShape:
    """Default shape of a given dimension: 1 & (1 & (... & 1))."""
    if n < 1:
        raise DimMismatch("dimension must be at least 1")
    if n == 1:
        return VLeaf()
    return VNode(VLeaf(), right_comb(n - 1))


# ---------------------------------------------------------------------------
# dense vectors and matrices
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class DenseVec:
    entries: tuple[Scalar, ...]
    shape: VShape

    def __post_init__(self):
        if len(self.entries) != dim(self.shape):
            raise DimMismatch(
                f"{len(self.entries)} entries for a dim-{dim(self.shape)} shape")

    @staticmethod
    def of(entries, shape: VShape | None = None) -> "DenseVec":
        entries = tuple(entries)
        return DenseVec(entries, shape or right_comb(len(entries)))

    def __add__(self, other: "DenseVec") -> "DenseVec":
        if self.shape != other.shape:
            raise DimMismatch("vector shapes differ")
        return DenseVec(tuple(scalar_add(a, b)
                              for a, b in zip(self.entries, other.entries)),
                        self.shape)

    def scale(self, a: Scalar) -> "DenseVec":
        return DenseVec(tuple(scalar_mul(a, e) for e in self.entries),
                        self.shape)


@dataclass(frozen=True)
class DenseMat:
    rows: int
    cols: int
    entries: tuple[Scalar, ...]  # row-major
    domain: VShape
    codomain: VShape

    def __post_init__(self):
        if self.rows < 1 or self.cols < 1:
            raise DimMismatch("matrix dimensions must be at least 1")
        if len(self.entries) != self.rows * self.cols:
            raise DimMismatch("entry count does not match dimensions")
        if dim(self.domain) != self.cols or dim(self.codomain) != self.rows:
            raise DimMismatch("shapes do not match dimensions")

    @staticmethod
    def of(rows_of_entries, domain: VShape | None = None,
           codomain: VShape | None = None) -> "DenseMat":
        rows_of_entries = [tuple(r) for r in rows_of_entries]
        n = len(rows_of_entries)
        if n == 0 or len({len(r) for r in rows_of_entries}) != 1:
            raise DimMismatch("ragged or empty matrix literal")
        m = len(rows_of_entries[0])
        flat = tuple(x for row in rows_of_entries for x in row)
        return DenseMat(n, m, flat,
                        domain or right_comb(m), codomain or right_comb(n))

    def entry(self, i: int, j: int) -> Scalar:
        return self.entries[i * self.cols + j]

    def column(self, j: int) -> DenseVec:
        return DenseVec(tuple(self.entry(i, j) for i in range(self.rows)),
                        self.codomain)


def mat_vec(m: DenseMat, v: DenseVec) -> DenseVec:
    if dim(v.shape) != m.cols:
        raise DimMismatch(f"matrix has {m.cols} columns, vector dim {dim(v.shape)}")
    sr = m.entries[0].semiring
    out = []
    for i in range(m.rows):
        acc = sr.scalar(sr.zero)
        for j in range(m.cols):
            acc = scalar_add(acc, scalar_mul(m.entry(i, j), v.entries[j]))
        out.append(acc)
    return DenseVec(tuple(out), m.codomain)


def mat_mul(a: DenseMat, b: DenseMat) -> DenseMat:
    if a.cols != b.rows:
        raise DimMismatch("inner dimensions differ")
    sr = a.entries[0].semiring
    flat = []
    for i in range(a.rows):
        for j in range(b.cols):
            acc = sr.scalar(sr.zero)
            for k in range(a.cols):
                acc = scalar_add(acc, scalar_mul(a.entry(i, k), b.entry(k, j)))
            flat.append(acc)
    return DenseMat(a.rows, b.cols, tuple(flat), b.domain, a.codomain)


def mat_identity(shape: VShape, sr: SemiringSpec) -> DenseMat:
    n = dim(shape)
    flat = tuple(sr.scalar(sr.one if i == j else sr.zero)
                 for i in range(n) for j in range(n))
    return DenseMat(n, n, flat, shape, shape)


def mat_pow(m: DenseMat, n: int) -> DenseMat:
    if m.rows != m.cols:
        raise DimMismatch("only square matrices can be iterated")
    acc = mat_identity(m.domain, m.entries[0].semiring)
    for _ in range(n):
        acc = mat_mul(m, acc)
    return acc


# ---------------------------------------------------------------------------
# the term/vector correspondence
# ---------------------------------------------------------------------------


def zero_term(shape: VShape, sr: SemiringSpec) -> s.Term:
    if isinstance(shape, VLeaf):
        return s.Star(sr.scalar(sr.zero))
    return s.Pair(zero_term(shape.left, sr), zero_term(shape.right, sr))


def vec_to_term(v: DenseVec) -> s.Term:
    def build(shape: VShape, entries: tuple[Scalar, ...]) -> s.Term:
        if isinstance(shape, VLeaf):
            return s.Star(entries[0])
        n1 = dim(shape.left)
        return s.Pair(build(shape.left, entries[:n1]),
                      build(shape.right, entries[n1:]))
    return build(v.shape, v.entries)


def _read(t: s.Term, shape: VShape, out: list):
    if isinstance(shape, VLeaf):
        if not isinstance(t, s.Star):
            raise IllTyped(f"expected a scalar proof of the unit, got {t!r}")
        out.append(t.scalar)
    else:
        if not isinstance(t, s.Pair):
            raise IllTyped(f"expected a pair, got {t!r}")
        _read(t.left, shape.left, out)
        _read(t.right, shape.right, out)


def term_to_vec(t: s.Term, shape: VShape, max_steps: int = 100_000) -> DenseVec:
    """Normalise a closed term of the shape's type and read off its entries."""
    nf, _trace = normalize(t, max_steps)
    out: list[Scalar] = []
    _read(nf, shape, out)
    return DenseVec(tuple(out), shape)


# ---------------------------------------------------------------------------
# matrices as proof-terms
# ---------------------------------------------------------------------------


def _paths(shape: VShape, prefix=()) -> list[tuple[tuple[int, ...], VShape]]:
    if isinstance(shape, VLeaf):
        return [(prefix, shape)]
    return _paths(shape.left, prefix + (0,)) + _paths(shape.right, prefix + (1,))


def _summand(shape: VShape, path: tuple[int, ...], col_term: s.Term) -> s.Term:
    """Project the input down `path`, then convert the reached unit proof
    into the scaled column.  The hole at every level is the variable bound
    one binder up (the lambda variable at the top level)."""
    hole = s.BVar(0)
    if isinstance(shape, VLeaf):
        return s.ElimOne(hole, col_term)
    sub = shape.left if path[0] == 0 else shape.right
    elim = s.ElimWith1 if path[0] == 0 else s.ElimWith2
    return elim(hole, "y", to_prop(sub), _summand(sub, path[1:], col_term))


def matrix_to_term(m: DenseMat) -> s.Term:
    """Closed proof-term of domain -o codomain computing the matrix."""
    summands = []
    for j, (path, _leaf) in enumerate(_paths(m.domain)):
        summands.append(_summand(m.domain, path, vec_to_term(m.column(j))))
    body = summands[0]
    for extra in summands[1:]:
        body = s.Sum(body, extra)
    return s.Lam("x", to_prop(m.domain), body)


# ---------------------------------------------------------------------------
# Church naturals and the matrix iterator
# ---------------------------------------------------------------------------


def nat_type() -> s.Prop:
    x = s.PBound(0)
    return s.Forall("X", s.Lolli(x, s.Lolli(s.Bang(s.Lolli(x, x)), x)))


def _zero_term() -> s.Term:
    x = s.PBound(0)
    step_t = s.Lolli(x, x)
    return s.TLam("X", s.Lam("x", x, s.Lam("f", s.Bang(step_t),
                   s.ElimBang(s.BVar(0), "f'", step_t, s.BVar(2)))))


def succ_term() -> s.Term:
    x = s.PBound(0)
    step_t = s.Lolli(x, x)
    # f' (n X x (!f')) under binders n, X, x, f, f'
    inner = s.App(s.BVar(0),
                  s.App(s.App(s.TApp(s.BVar(3), x), s.BVar(2)),
                        s.BangI(s.BVar(0))))
    return s.Lam("n", nat_type(),
                 s.TLam("X", s.Lam("x", x, s.Lam("f", s.Bang(step_t),
                        s.ElimBang(s.BVar(0), "f'", step_t, inner)))))


_church_cache: dict[int, s.Term] = {}


def church(n: int) -> s.Term:
    """Numeral built by normalising successor applications of zero."""
    if n < 0:
        raise ValueError("naturals only")
    if n not in _church_cache:
        if n == 0:
            _church_cache[0] = _zero_term()
        else:
            t, _ = normalize(s.App(succ_term(), church(n - 1)))
            _church_cache[n] = t
    return _church_cache[n]


def miter_term(domain: VShape) -> s.Term:
    """Iterated application of a square matrix: n steps of m over v."""
    a = to_prop(domain)
    body = s.App(s.App(s.TApp(s.BVar(2), a), s.BVar(0)), s.BVar(1))
    return s.Lam("n", nat_type(),
                 s.Lam("m", s.Bang(s.Lolli(a, a)),
                       s.Lam("v", a, body)))
