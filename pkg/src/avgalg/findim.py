"""Finite-dimensional commutative unital algebras and their averaging operators.

Algebras are given by structure constants over an exact scalar ring.  On top
of the basic verification and averaging checks, this module carries the
induced Lie bracket and its structure theory: whether a bracket comes from a
module endomorphism, whether it comes from an averaging operator (with an
explicit inducing operator when it does), derived and lower central series,
nilpotency via image powers, the nilpotent radical over a domain, the
eigenstructure of inner derivations, and kernel-versus-bracket comparisons.

Identity checks quantified over the whole algebra reduce to basis pairs or
triples: every identity checked here is multilinear in its algebra
arguments, so holding on a basis is holding everywhere.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from typing import Optional, Union

from .exactlin import (
    Matrix,
    NoSolution,
    NotAFieldError,
    QQ,
    Ring,
    RingError,
    ShapeError,
    Solution,
    Submodule,
    Subspace,
    ZMod,
    char_poly,
    column_space,
    nullspace,
    rational_roots,
    ring_from_name,
    solve_linear,
    submodule_kernel,
    subspace_contains,
    vec_add,
    vec_is_zero,
    vec_scale,
    vec_sub,
    zero_vec,
)


class NotAveragingError(ValueError):
    pass


class NotLieError(ValueError):
    pass


class NotADomainError(ValueError):
    pass


class NotAnAveragingIdealError(ValueError):
    pass


class InternalInvariantError(RuntimeError):
    """A cross-check between two independent computation paths failed."""


@dataclass(frozen=True)
class Check:
    """Outcome of an exact identity check; witness locates the first failure."""

    ok: bool
    witness: Optional[tuple] = None

    def __bool__(self) -> bool:
        return self.ok


# ---------------------------------------------------------------------------
# structure algebras

@dataclass(frozen=True)
class StructureAlgebra:
    """Commutative unital algebra by structure constants.

    ``mul[i][j]`` is the coordinate vector of e_i * e_j; ``unit`` the
    coordinates of the identity element.
    """

    ring: Ring
    dim: int
    unit: tuple
    mul: tuple

    @staticmethod
    def make(ring: Ring, unit, mul) -> "StructureAlgebra":
        unit = tuple(ring.of(x) for x in unit)
        dim = len(unit)
        tab = tuple(tuple(tuple(ring.of(x) for x in cell) for cell in row) for row in mul)
        if len(tab) != dim or any(len(row) != dim for row in tab) or any(
                len(cell) != dim for row in tab for cell in row):
            raise ShapeError("structure constant table must be dim x dim x dim")
        return StructureAlgebra(ring, dim, unit, tab)

    def basis_vec(self, i: int) -> tuple:
        return tuple(self.ring.one if j == i else self.ring.zero for j in range(self.dim))

    def mul_vec(self, a, b) -> tuple:
        R = self.ring
        if len(a) != self.dim or len(b) != self.dim:
            raise ShapeError("vector length mismatch")
        out = [R.zero] * self.dim
        for i, ai in enumerate(a):
            if ai == R.zero:
                continue
            for j, bj in enumerate(b):
                if bj == R.zero:
                    continue
                c = R.mul(ai, bj)
                cell = self.mul[i][j]
                for k in range(self.dim):
                    if cell[k] != R.zero:
                        out[k] = R.add(out[k], R.mul(c, cell[k]))
        return tuple(out)

    def power_vec(self, a, n: int) -> tuple:
        out = tuple(self.unit)
        for _ in range(n):
            out = self.mul_vec(out, a)
        return out


@dataclass(frozen=True)
class AlgebraReport:
    commutative: bool
    associative: bool
    unital: bool
    failure: Optional[tuple] = None  # (law, indices) of the first failure

    @property
    def ok(self) -> bool:
        return self.commutative and self.associative and self.unital


def verify_algebra(A: StructureAlgebra) -> AlgebraReport:
    """Exact commutativity, associativity, and unit checks on all triples."""
    commutative = associative = unital = True
    failure = None
    for i in range(A.dim):
        for j in range(A.dim):
            if A.mul[i][j] != A.mul[j][i]:
                commutative, failure = False, ("commutativity", (i, j))
                break
        if not commutative:
            break
    for i in range(A.dim):
        if A.mul_vec(A.unit, A.basis_vec(i)) != A.basis_vec(i):
            unital = False
            if failure is None:
                failure = ("unit", (i,))
            break
    for i, j, k in itertools.product(range(A.dim), repeat=3):
        left = A.mul_vec(A.mul[i][j], A.basis_vec(k))
        right = A.mul_vec(A.basis_vec(i), A.mul[j][k])
        if left != right:
            associative = False
            if failure is None:
                failure = ("associativity", (i, j, k))
            break
    return AlgebraReport(commutative, associative, unital, failure)


def require_verified(A: StructureAlgebra):
    report = verify_algebra(A)
    if not report.ok:
        raise ValueError(f"not a commutative unital algebra: {report.failure}")


def _require_operator(A: StructureAlgebra, F: Matrix):
    if F.ring != A.ring:
        raise ShapeError("operator ring does not match the algebra")
    if F.rows != A.dim or F.cols != A.dim:
        raise ShapeError("operator must be a dim x dim matrix")


# ---------------------------------------------------------------------------
# averaging operator checks and calculus

def is_averaging(A: StructureAlgebra, F: Matrix) -> Check:
    """F(x*F(y)) = F(x)*F(y); both sides bilinear, so basis pairs decide."""
    _require_operator(A, F)
    cols = [F.col(j) for j in range(A.dim)]
    for i in range(A.dim):
        for j in range(A.dim):
            lhs = F.apply(A.mul_vec(A.basis_vec(i), cols[j]))
            rhs = A.mul_vec(cols[i], cols[j])
            if lhs != rhs:
                return Check(False, (i, j))
    return Check(True)


def is_unitary(A: StructureAlgebra, F: Matrix) -> bool:
    _require_operator(A, F)
    return F.apply(A.unit) == tuple(A.unit)


def is_reynolds_averaging(A: StructureAlgebra, F: Matrix) -> Check:
    """F(F(x)F(y)) = F(x)F(y) for an averaging F, on basis pairs."""
    avg = is_averaging(A, F)
    if not avg:
        raise NotAveragingError(f"operator is not averaging, witness pair {avg.witness}")
    cols = [F.col(j) for j in range(A.dim)]
    for i in range(A.dim):
        for j in range(A.dim):
            prod = A.mul_vec(cols[i], cols[j])
            if F.apply(prod) != prod:
                return Check(False, (i, j))
    return Check(True)


@dataclass(frozen=True)
class Certificate:
    """Which closure hypothesis was checked for an operator combination."""

    hypothesis: str
    holds: bool
    witness: Optional[tuple] = None


def op_scale(A: StructureAlgebra, r, F: Matrix):
    """r*F; averaging whenever F is."""
    avg = is_averaging(A, F)
    cert = Certificate("operand is averaging", avg.ok, avg.witness)
    return F.scale(A.ring.of(r)), cert


def op_compose(A: StructureAlgebra, F: Matrix, G: Matrix):
    """F∘G; averaging when both are averaging and they commute."""
    avg_f, avg_g = is_averaging(A, F), is_averaging(A, G)
    fg = F.mul(G)
    commute = fg == G.mul(F)
    holds = avg_f.ok and avg_g.ok and commute
    witness = avg_f.witness or avg_g.witness or (None if commute else ("commutator",))
    cert = Certificate("operands are averaging and commute", holds, witness)
    return fg, cert


def op_add(A: StructureAlgebra, F: Matrix, G: Matrix):
    """F+G; averaging under the cross compatibility identity."""
    avg_f, avg_g = is_averaging(A, F), is_averaging(A, G)
    compat_witness = None
    fc = [F.col(j) for j in range(A.dim)]
    gc = [G.col(j) for j in range(A.dim)]
    for i in range(A.dim):
        for j in range(A.dim):
            e_i = A.basis_vec(i)
            lhs = vec_add(A.ring,
                          F.apply(A.mul_vec(e_i, gc[j])),
                          G.apply(A.mul_vec(e_i, fc[j])))
            rhs = vec_add(A.ring,
                          A.mul_vec(fc[i], gc[j]),
                          A.mul_vec(gc[i], fc[j]))
            if lhs != rhs:
                compat_witness = (i, j)
                break
        if compat_witness:
            break
    holds = avg_f.ok and avg_g.ok and compat_witness is None
    cert = Certificate(
        "operands are averaging and satisfy the cross compatibility identity",
        holds, avg_f.witness or avg_g.witness or compat_witness)
    return F.add(G), cert


def op_poly_apply(A: StructureAlgebra, coeffs, F: Matrix):
    """P(F) for P with zero constant term, coefficients ascending."""
    R = A.ring
    coeffs = [R.of(c) for c in coeffs]
    if coeffs and coeffs[0] != R.zero:
        raise ValueError("polynomial must have zero constant term")
    avg = is_averaging(A, F)
    cert = Certificate("operand is averaging", avg.ok, avg.witness)
    acc = Matrix.zero(R, A.dim, A.dim)
    power = Matrix.identity(R, A.dim)
    for c in coeffs:
        if c != R.zero:
            acc = acc.add(power.scale(c))
        power = power.mul(F)
    return acc, cert


# ---------------------------------------------------------------------------
# brackets

@dataclass(frozen=True)
class BracketTable:
    """Bracket structure constants: table[i][j] = coordinates of [e_i, e_j]."""

    ring: Ring
    dim: int
    table: tuple

    @staticmethod
    def make(ring: Ring, table) -> "BracketTable":
        tab = tuple(tuple(tuple(ring.of(x) for x in cell) for cell in row) for row in table)
        dim = len(tab)
        if any(len(row) != dim for row in tab) or any(
                len(cell) != dim for row in tab for cell in row):
            raise ShapeError("bracket table must be dim x dim x dim")
        return BracketTable(ring, dim, tab)

    def bracket_vec(self, x, y) -> tuple:
        R = self.ring
        if len(x) != self.dim or len(y) != self.dim:
            raise ShapeError("vector length mismatch")
        out = [R.zero] * self.dim
        for i, xi in enumerate(x):
            if xi == R.zero:
                continue
            for j, yj in enumerate(y):
                if yj == R.zero:
                    continue
                c = R.mul(xi, yj)
                cell = self.table[i][j]
                for k in range(self.dim):
                    if cell[k] != R.zero:
                        out[k] = R.add(out[k], R.mul(c, cell[k]))
        return tuple(out)


def check_lie(A: StructureAlgebra, L: BracketTable) -> Check:
    """Alternating plus Jacobi on all basis triples."""
    if L.dim != A.dim or L.ring != A.ring:
        raise ShapeError("bracket does not match the algebra")
    R = A.ring
    for i in range(A.dim):
        if not vec_is_zero(R, L.table[i][i]):
            return Check(False, ("alternating", (i,)))
        for j in range(A.dim):
            if L.table[i][j] != tuple(R.neg(x) for x in L.table[j][i]):
                return Check(False, ("antisymmetry", (i, j)))
    for i, j, k in itertools.combinations(range(A.dim), 3):
        ei, ej, ek = A.basis_vec(i), A.basis_vec(j), A.basis_vec(k)
        total = vec_add(R, vec_add(R,
                        L.bracket_vec(L.table[i][j], ek),
                        L.bracket_vec(L.table[j][k], ei)),
                        L.bracket_vec(L.table[k][i], ej))
        if not vec_is_zero(R, total):
            return Check(False, ("jacobi", (i, j, k)))
    return Check(True)


def require_lie(A: StructureAlgebra, L: BracketTable):
    chk = check_lie(A, L)
    if not chk:
        raise NotLieError(f"not a Lie bracket: {chk.witness}")


def raw_bracket(A: StructureAlgebra, F: Matrix) -> BracketTable:
    """[x,y] = x*F(y) - y*F(x) for an arbitrary endomorphism F.

    No averaging requirement, but the result must still pass the Lie axioms
    or this raises.
    """
    _require_operator(A, F)
    cols = [F.col(j) for j in range(A.dim)]
    table = []
    for i in range(A.dim):
        row = []
        for j in range(A.dim):
            row.append(vec_sub(A.ring,
                               A.mul_vec(A.basis_vec(i), cols[j]),
                               A.mul_vec(A.basis_vec(j), cols[i])))
        table.append(tuple(row))
    L = BracketTable(A.ring, A.dim, tuple(table))
    require_lie(A, L)
    return L


def induced_bracket(A: StructureAlgebra, F: Matrix) -> BracketTable:
    """The bracket of an averaging operator; refuses non-averaging input."""
    avg = is_averaging(A, F)
    if not avg:
        raise NotAveragingError(
            f"operator is not averaging (witness pair {avg.witness}); "
            "use raw_bracket for arbitrary endomorphisms")
    return raw_bracket(A, F)


# ---------------------------------------------------------------------------
# endomorphism- and averaging-induced brackets

def endo_induced_check(A: StructureAlgebra, L: BracketTable) -> Check:
    """[x,y] = x[1,y] + y[x,1] on basis pairs; both sides bilinear."""
    require_lie(A, L)
    for i in range(A.dim):
        ei = A.basis_vec(i)
        for j in range(A.dim):
            ej = A.basis_vec(j)
            rhs = vec_add(A.ring,
                          A.mul_vec(ei, L.bracket_vec(A.unit, ej)),
                          A.mul_vec(ej, L.bracket_vec(ei, A.unit)))
            if L.table[i][j] != rhs:
                return Check(False, (i, j))
    return Check(True)


def gamma_subalgebra(A: StructureAlgebra, L: BracketTable) -> Subspace:
    """{a : [a*x, y] = a*[x, y]}, the linear conditions solved exactly."""
    require_lie(A, L)
    R = A.ring
    rows = []
    for i in range(A.dim):
        for j in range(A.dim):
            # coefficient of a_m in ([a e_i, e_j] - a [e_i, e_j])_k
            for k in range(A.dim):
                row = []
                for m in range(A.dim):
                    acc = R.zero
                    for s in range(A.dim):
                        acc = R.add(acc, R.mul(A.mul[m][i][s], L.table[s][j][k]))
                        acc = R.sub(acc, R.mul(L.table[i][j][s], A.mul[m][s][k]))
                    row.append(acc)
                rows.append(tuple(row))
    return nullspace(Matrix(R, len(rows), A.dim, tuple(rows)))


@dataclass(frozen=True)
class NotEndoInduced:
    witness: tuple


@dataclass(frozen=True)
class InduceNoSolution:
    pass


@dataclass(frozen=True)
class Induced:
    t: tuple
    operator: Matrix


@dataclass(frozen=True)
class InduceDiagnostic:
    """The linear system had a solution but the candidate operator failed
    re-verification; kept distinct so the gap stays visible."""

    t: tuple
    operator: Matrix
    reason: str


InduceResult = Union[NotEndoInduced, InduceNoSolution, Induced, InduceDiagnostic]


def _complete_basis(ring: Ring, vectors, dim: int):
    """Greedily append standard basis vectors until the span is everything."""
    chosen = []
    current = Subspace.span(ring, dim, vectors)
    for i in range(dim):
        if current.dim == dim:
            break
        e = tuple(ring.one if j == i else ring.zero for j in range(dim))
        grown = Subspace.span(ring, dim, list(vectors) + chosen + [e])
        if grown.dim > current.dim:
            chosen.append(e)
            current = grown
    return chosen


def induced_by_averaging(A: StructureAlgebra, L: BracketTable) -> InduceResult:
    """Decide whether L is the bracket of some averaging operator.

    Steps: the endomorphism criterion; the invariance subalgebra and a basis
    completion; the stacked linear system for the Gamma-coordinates of t;
    then a full re-verification of the candidate operator L_t.
    """
    if not A.ring.is_field:
        raise NotAFieldError("the averaging-induced decision needs field scalars")
    require_lie(A, L)
    endo = endo_induced_check(A, L)
    if not endo:
        return NotEndoInduced(endo.witness)
    R = A.ring
    n = A.dim
    gamma = gamma_subalgebra(A, L)
    eps = list(gamma.basis)
    p = len(eps)
    delta = _complete_basis(R, eps, n)
    q = len(delta)
    if p + q != n:
        raise InternalInvariantError("basis completion failed")
    if q == 0:
        x = ()
    else:
        basis_mtx = Matrix.from_cols(R, eps + delta)
        inv = _invert(basis_mtx)
        stacked_rows = []
        stacked_rhs = []
        for dj in delta:
            # delta-coordinates of eps_i * delta_j fill the system matrix
            bcols = []
            for ei in eps:
                coords = inv.apply(A.mul_vec(ei, dj))
                bcols.append(coords[p:])
            one_dj = inv.apply(L.bracket_vec(A.unit, dj))
            d_vec = tuple(R.neg(c) for c in one_dj[p:])
            for k in range(q):
                stacked_rows.append(tuple(bc[k] for bc in bcols))
                stacked_rhs.append(d_vec[k])
        res = solve_linear(Matrix(R, len(stacked_rows), p, tuple(stacked_rows)),
                           tuple(stacked_rhs))
        if isinstance(res, NoSolution):
            return InduceNoSolution()
        x = res.particular
    t = zero_vec(R, n)
    for xi, ei in zip(x, eps):
        t = vec_add(R, t, vec_scale(R, xi, ei))
    cols = [vec_add(R, L.bracket_vec(A.unit, A.basis_vec(i)),
                    A.mul_vec(A.basis_vec(i), t)) for i in range(n)]
    op = Matrix.from_cols(R, cols)
    avg = is_averaging(A, op)
    if not avg:
        return InduceDiagnostic(t, op, f"candidate not averaging at pair {avg.witness}")
    if raw_bracket(A, op).table != L.table:
        return InduceDiagnostic(t, op, "candidate does not reproduce the bracket")
    return Induced(t, op)


def _invert(m: Matrix) -> Matrix:
    from .exactlin import rref as _rref
    if m.rows != m.cols:
        raise ShapeError("only square matrices invert")
    n = m.rows
    aug = Matrix(m.ring, n, 2 * n,
                 tuple(row + Matrix.identity(m.ring, n).entries[i]
                       for i, row in enumerate(m.entries)))
    red, pivots = _rref(aug)
    if tuple(pivots) != tuple(range(n)):
        raise ShapeError("matrix is singular")
    return Matrix(m.ring, n, n, tuple(row[n:] for row in red.entries))


# ---------------------------------------------------------------------------
# series, nilpotency, radical

@dataclass(frozen=True)
class SeriesResult:
    stages: tuple  # Subspace chain, stage 0 first, truncated at stabilization
    reaches_zero: bool

    def stage(self, k: int) -> Subspace:
        return self.stages[min(k, len(self.stages) - 1)]


def _bracket_span(A: StructureAlgebra, L: BracketTable, u: Subspace, v: Subspace) -> Subspace:
    vecs = [L.bracket_vec(x, y) for x in u.basis for y in v.basis]
    return Subspace.span(A.ring, A.dim, vecs)


def derived_series(A: StructureAlgebra, L: BracketTable) -> SeriesResult:
    require_lie(A, L)
    stages = [Subspace.full(A.ring, A.dim)]
    while True:
        nxt = _bracket_span(A, L, stages[-1], stages[-1])
        if nxt == stages[-1]:
            break
        stages.append(nxt)
        if nxt.is_zero():
            break
    return SeriesResult(tuple(stages), stages[-1].is_zero())


def lower_central_series(A: StructureAlgebra, L: BracketTable) -> SeriesResult:
    require_lie(A, L)
    full = Subspace.full(A.ring, A.dim)
    stages = [full]
    while True:
        nxt = _bracket_span(A, L, stages[-1], full)
        if nxt == stages[-1]:
            break
        stages.append(nxt)
        if nxt.is_zero():
            break
    return SeriesResult(tuple(stages), stages[-1].is_zero())


@dataclass(frozen=True)
class Nilpotent:
    k: int  # least k with image^k inside the bracket annihilator


@dataclass(frozen=True)
class NotNilpotent:
    stable: object  # the stabilized image power (Subspace or Submodule)


def nilpotency_check(A: StructureAlgebra, F: Matrix):
    """Iterate powers of the operator image against the bracket annihilator.

    The image of an averaging operator is closed under multiplication, so
    the powers descend; the check returns the least power contained in
    {a : a*[x,y] = 0 for all x, y} or the stabilized power if none is.
    Works over fields via subspaces and over Z/n via canonical submodules.
    """
    avg = is_averaging(A, F)
    if not avg:
        raise NotAveragingError(f"operator is not averaging, witness pair {avg.witness}")
    R = A.ring
    brackets = []
    cols = [F.col(j) for j in range(A.dim)]
    for i in range(A.dim):
        for j in range(i + 1, A.dim):
            brackets.append(vec_sub(R, A.mul_vec(A.basis_vec(i), cols[j]),
                                    A.mul_vec(A.basis_vec(j), cols[i])))
    ann_rows = []
    for g in brackets:
        # condition a*g = 0, linear in a
        for k in range(A.dim):
            ann_rows.append(tuple(A.mul_vec(A.basis_vec(m), g)[k] for m in range(A.dim)))
    if isinstance(R, ZMod) and not R.is_field:
        if ann_rows:
            ann = submodule_kernel(R, Matrix(R, len(ann_rows), A.dim, tuple(ann_rows)))
        else:
            ann = Submodule.span(R, A.dim, [A.basis_vec(i) for i in range(A.dim)])
        power = Submodule.span(R, A.dim, cols)
        image = power
        k = 1
        while True:
            if all(ann.contains_vector(g) for g in power.basis):
                return Nilpotent(k)
            nxt = Submodule.span(R, A.dim,
                                 [A.mul_vec(u, v) for u in power.basis for v in image.basis])
            if nxt == power:
                return NotNilpotent(power)
            power = nxt
            k += 1
    if not R.is_field:
        raise NotAFieldError("nilpotency check needs a field or Z/n scalars")
    ann = nullspace(Matrix(R, len(ann_rows), A.dim, tuple(ann_rows))) \
        if ann_rows else Subspace.full(R, A.dim)
    image = column_space(F)
    power = image
    k = 1
    while True:
        if subspace_contains(ann, power):
            return Nilpotent(k)
        nxt = Subspace.span(R, A.dim,
                            [A.mul_vec(u, v) for u in power.basis for v in image.basis])
        if nxt == power:
            return NotNilpotent(power)
        power = nxt
        k += 1


def check_domain(A: StructureAlgebra, trials: int = 50, seed: int = 0x5eed):
    """Necessary zero-divisor check: multiplication by every basis element
    and by a sample of random nonzero elements must be injective.

    Conclusive for the shipped field-extension examples; in general a
    passing check does not prove the absence of zero divisors.
    """
    if not A.ring.is_field:
        raise NotAFieldError("domain check needs field scalars")
    R = A.ring

    def mult_matrix(a):
        return Matrix.from_cols(R, [A.mul_vec(a, A.basis_vec(i)) for i in range(A.dim)])

    for i in range(A.dim):
        if not nullspace(mult_matrix(A.basis_vec(i))).is_zero():
            raise NotADomainError(f"basis element {i} is a zero divisor")
    rng = random.Random(seed)
    done = 0
    while done < trials:
        a = tuple(R.of(rng.randint(-5, 5)) for _ in range(A.dim))
        if vec_is_zero(R, a):
            continue
        if not nullspace(mult_matrix(a)).is_zero():
            raise NotADomainError(f"element {a} is a zero divisor")
        done += 1


def nilpotent_radical_domain(A: StructureAlgebra, F: Matrix) -> Subspace:
    """Over a domain: the whole space when ker F = 0, else ker F."""
    check_domain(A)
    avg = is_averaging(A, F)
    if not avg:
        raise NotAveragingError(f"operator is not averaging, witness pair {avg.witness}")
    ker = nullspace(F)
    if ker.is_zero():
        return Subspace.full(A.ring, A.dim)
    return ker


def ad_eigen(A: StructureAlgebra, F: Matrix, a) -> tuple:
    """Eigenvalues with eigenspaces of x -> a*F(x) - x*F(a), over a domain.

    Two independent paths must agree: the structural case split on ker F and
    F(a), and the characteristic-polynomial route with nullspace
    eigenspaces.  Disagreement raises InternalInvariantError.
    """
    if A.ring != QQ:
        raise NotAFieldError("eigen analysis is implemented over Q")
    check_domain(A)
    avg = is_averaging(A, F)
    if not avg:
        raise NotAveragingError(f"operator is not averaging, witness pair {avg.witness}")
    R = A.ring
    a = tuple(R.of(x) for x in a)
    fa = F.apply(a)
    ad = Matrix.from_cols(R, [
        vec_sub(R, A.mul_vec(a, F.col(i)), A.mul_vec(A.basis_vec(i), fa))
        for i in range(A.dim)])
    # structural path: over a domain the only possible eigenvalues are 0 and,
    # when ker F is nonzero and F(a) is a nonzero scalar k, the value -k
    ker = nullspace(F)
    if vec_is_zero(R, a) or ker.is_zero():
        structural = {R.zero: nullspace(ad)}
    else:
        k = _proportionality(R, fa, A.unit)
        if k is None or k == R.zero:
            structural = {R.zero: nullspace(ad)}
        else:
            structural = {R.zero: nullspace(ad), R.neg(k): ker}
    # direct path
    roots = set(rational_roots(char_poly(ad)))
    direct = {}
    for r in roots:
        space = nullspace(ad.sub(Matrix.identity(R, A.dim).scale(r)))
        if not space.is_zero():
            direct[r] = space
    if structural != direct:
        raise InternalInvariantError(
            f"eigen paths disagree: structural {sorted(structural)} vs direct {sorted(direct)}")
    return tuple(sorted(direct.items()))


def _proportionality(R: Ring, v, w):
    """k with v = k*w, or None."""
    idx = next((i for i, x in enumerate(w) if x != R.zero), None)
    if idx is None:
        return None
    k = R.mul(v[idx], R.inv(w[idx]))
    if tuple(vec_scale(R, k, w)) == tuple(v):
        return k
    return None


@dataclass(frozen=True)
class KernelBracketResult:
    equal: bool
    kernel: object  # Subspace or Submodule
    brackets: object


def kernel_equals_brackets(A: StructureAlgebra, F: Matrix) -> KernelBracketResult:
    """Compare ker F with the span of all basis brackets, exactly.

    Over a field both sides are subspaces; over Z/n both sides are canonical
    submodules, so equality is equality of canonical forms.
    """
    avg = is_averaging(A, F)
    if not avg:
        raise NotAveragingError(f"operator is not averaging, witness pair {avg.witness}")
    R = A.ring
    cols = [F.col(j) for j in range(A.dim)]
    brackets = [vec_sub(R, A.mul_vec(A.basis_vec(i), cols[j]),
                        A.mul_vec(A.basis_vec(j), cols[i]))
                for i in range(A.dim) for j in range(i + 1, A.dim)]
    if isinstance(R, ZMod) and not R.is_field:
        ker = submodule_kernel(R, F)
        spn = Submodule.span(R, A.dim, brackets)
        return KernelBracketResult(ker == spn, ker, spn)
    if not R.is_field:
        raise NotAFieldError("kernel comparison needs a field or Z/n scalars")
    ker = nullspace(F)
    spn = Subspace.span(R, A.dim, brackets)
    return KernelBracketResult(ker == spn, ker, spn)


@dataclass(frozen=True)
class LieAnalysis:
    """Structure report for the bracket of one averaging operator."""

    bracket: BracketTable
    derived: Optional[SeriesResult]        # None over non-field scalars
    lower_central: Optional[SeriesResult]  # None over non-field scalars
    nilpotency: Union[Nilpotent, NotNilpotent]
    kernel_comparison: KernelBracketResult


def lie_analysis(A: StructureAlgebra, F: Matrix) -> LieAnalysis:
    """Bracket, series, nilpotency, and kernel comparison in one pass."""
    L = induced_bracket(A, F)
    if A.ring.is_field:
        ds = derived_series(A, L)
        lc = lower_central_series(A, L)
    else:
        ds = lc = None
    return LieAnalysis(L, ds, lc, nilpotency_check(A, F), kernel_equals_brackets(A, F))


# ---------------------------------------------------------------------------
# quotients and primary algebras

def quotient_by_averaging_ideal(A: StructureAlgebra, F: Matrix, ideal: Subspace):
    """Quotient algebra and induced operator by an F-invariant ideal."""
    if not A.ring.is_field:
        raise NotAFieldError("quotients are implemented over field scalars")
    _require_operator(A, F)
    if ideal.ambient_dim != A.dim or ideal.ring != A.ring:
        raise ShapeError("ideal does not live in this algebra")
    R = A.ring
    for u in ideal.basis:
        for i in range(A.dim):
            prod = A.mul_vec(u, A.basis_vec(i))
            if not ideal.contains_vector(prod):
                raise NotAnAveragingIdealError(
                    f"not an ideal: generator times basis element {i} escapes")
        if not ideal.contains_vector(F.apply(u)):
            raise NotAnAveragingIdealError("ideal is not invariant under the operator")
    if ideal.is_full():
        raise ValueError("quotient by the whole algebra is the zero ring, not unital")
    comp = _complete_basis(R, list(ideal.basis), A.dim)
    p = ideal.dim
    q = len(comp)
    basis_mtx = Matrix.from_cols(R, list(ideal.basis) + comp)
    inv = _invert(basis_mtx)

    def project(v):
        return inv.apply(v)[p:]

    unit2 = project(A.unit)
    mul2 = tuple(tuple(tuple(project(A.mul_vec(comp[i], comp[j])))
                       for j in range(q)) for i in range(q))
    A2 = StructureAlgebra.make(R, unit2, mul2)
    F2 = Matrix.from_cols(R, [project(F.apply(comp[j])) for j in range(q)])
    report = verify_algebra(A2)
    if not report.ok:
        raise InternalInvariantError(f"quotient failed verification: {report.failure}")
    if is_averaging(A, F) and not is_averaging(A2, F2):
        raise InternalInvariantError("quotient of an averaging operator is not averaging")
    return A2, F2


def primary_from_poly(coeffs) -> tuple:
    """Q[y]/(p) with the class-of-y multiplication operator, p monic.

    The operator realizes the generator action of the one-generator free
    object's quotients; instances have no proper averaging subalgebras and
    serve as a family of verified test algebras.
    """
    coeffs = [QQ.of(c) for c in coeffs]
    while len(coeffs) > 1 and coeffs[-1] == 0:
        coeffs.pop()
    if len(coeffs) < 2:
        raise ValueError("polynomial must have degree at least 1")
    if coeffs[-1] != 1:
        raise ValueError("polynomial must be monic")
    d = len(coeffs) - 1
    # powers of y modulo p; the multiplication table needs index 2d-2 and
    # the operator column for the top basis vector needs index d
    powers = [tuple(QQ.one if i == k else QQ.zero for i in range(d)) for k in range(d)]
    reduction = tuple(-c for c in coeffs[:-1])  # y^d = -(c_0 + ... + c_{d-1} y^{d-1})
    while len(powers) <= max(2 * d - 2, d):
        prev = powers[-1]
        shifted = [QQ.zero] + list(prev[:-1])
        lead = prev[-1]
        powers.append(tuple(QQ.add(s, QQ.mul(lead, r))
                            for s, r in zip(shifted, reduction)))
    mul = tuple(tuple(powers[i + j] for j in range(d)) for i in range(d))
    unit = tuple(QQ.one if i == 0 else QQ.zero for i in range(d))
    A = StructureAlgebra.make(QQ, unit, mul)
    F = Matrix.from_cols(QQ, [powers[j + 1] for j in range(d)])
    require_verified(A)
    avg = is_averaging(A, F)
    if not avg:
        raise InternalInvariantError("multiplication operator failed the averaging check")
    return A, F


# ---------------------------------------------------------------------------
# JSON wire formats

def algebra_to_json(A: StructureAlgebra) -> dict:
    R = A.ring
    return {
        "scalar": R.name,
        "dim": A.dim,
        "unit": [R.render(x) for x in A.unit],
        "mul": [[[R.render(x) for x in cell] for cell in row] for row in A.mul],
    }


def algebra_from_json(doc: dict) -> StructureAlgebra:
    try:
        ring = ring_from_name(doc["scalar"])
        dim = int(doc["dim"])
        unit = [ring.parse(s) for s in doc["unit"]]
        mul = [[[ring.parse(s) for s in cell] for cell in row] for row in doc["mul"]]
    except (KeyError, TypeError) as exc:
        raise ValueError(f"malformed algebra document: {exc}") from None
    if len(unit) != dim:
        raise ValueError("unit vector length does not match dim")
    A = StructureAlgebra.make(ring, unit, mul)
    return A


def operator_to_json(F: Matrix) -> dict:
    R = F.ring
    return {"matrix": [[R.render(x) for x in row] for row in F.entries]}


def operator_from_json(ring: Ring, doc: dict) -> Matrix:
    try:
        rows = [[ring.parse(s) for s in row] for row in doc["matrix"]]
    except (KeyError, TypeError) as exc:
        raise ValueError(f"malformed operator document: {exc}") from None
    return Matrix.from_rows(ring, rows)


def bracket_to_json(L: BracketTable) -> dict:
    R = L.ring
    return {"table": [[[R.render(x) for x in cell] for cell in row] for row in L.table]}


def bracket_from_json(ring: Ring, doc: dict) -> BracketTable:
    try:
        table = [[[ring.parse(s) for s in cell] for cell in row] for row in doc["table"]]
    except (KeyError, TypeError) as exc:
        raise ValueError(f"malformed bracket document: {exc}") from None
    return BracketTable.make(ring, table)
