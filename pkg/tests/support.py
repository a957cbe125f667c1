"""Shared random instance builders for the test suites.

Everything takes an explicit random.Random so suites stay reproducible;
the builders only produce verified instances (algebra axioms hold, the
operators are averaging by construction for the families that promise it).
"""

from fractions import Fraction

from avgalg.exactlin import Matrix, QQ
from avgalg.freeavg import FreePoly
from avgalg.findim import StructureAlgebra, primary_from_poly


def rand_fraction(rng, lo=-4, hi=4, max_den=3):
    return Fraction(rng.randint(lo, hi), rng.randint(1, max_den))


# ---------------------------------------------------------------------------
# free polynomials

def rand_xmono(rng, x_count=3, max_deg=2):
    exps = {}
    for _ in range(rng.randint(0, max_deg)):
        i = rng.randint(1, x_count)
        exps[i] = exps.get(i, 0) + 1
    return tuple(sorted(exps.items()))


def rand_free_monomial(rng, x_count=3, max_deg=2, y_factors=1):
    m = FreePoly.one(QQ)
    for i, e in rand_xmono(rng, x_count, max_deg):
        for _ in range(e):
            m = m.mul(FreePoly.x_var(i))
    for _ in range(rng.randint(0, y_factors)):
        m = m.mul(FreePoly.y_of(rand_xmono(rng, x_count, max_deg)))
    return m


def rand_free_poly(rng, x_count=3, max_terms=3, max_deg=2, y_factors=1):
    p = FreePoly.zero(QQ)
    for _ in range(rng.randint(1, max_terms)):
        c = rand_fraction(rng)
        if c == 0:
            c = Fraction(1)
        p = p.add(rand_free_monomial(rng, x_count, max_deg, y_factors).scale(c))
    return p


# ---------------------------------------------------------------------------
# finite-dimensional algebras

def dim2_algebra(alpha, beta):
    """Q[w]/(w^2 - beta*w - alpha); any alpha, beta give a commutative
    associative unital algebra in dimension 2."""
    return StructureAlgebra.make(QQ, (1, 0), [
        [[1, 0], [0, 1]],
        [[0, 1], [alpha, beta]],
    ])


def rand_dim2_algebra(rng):
    return dim2_algebra(rand_fraction(rng), rand_fraction(rng))


def rand_monic(rng, deg):
    return [rand_fraction(rng, -3, 3, 2) for _ in range(deg)] + [Fraction(1)]


def product_algebra(A, B):
    """Componentwise product on the direct sum of the underlying spaces."""
    R = A.ring
    n, m = A.dim, B.dim
    dim = n + m

    def embed_a(v):
        return tuple(v) + (R.zero,) * m

    def embed_b(v):
        return (R.zero,) * n + tuple(v)

    zero = (R.zero,) * dim
    mul = [[zero] * dim for _ in range(dim)]
    for i in range(n):
        for j in range(n):
            mul[i][j] = embed_a(A.mul[i][j])
    for i in range(m):
        for j in range(m):
            mul[n + i][n + j] = embed_b(B.mul[i][j])
    unit = tuple(A.unit) + tuple(B.unit)
    return StructureAlgebra.make(R, unit, mul)


def rand_algebra(rng, max_dim=4):
    """A verified commutative unital algebra of dimension at most max_dim."""
    roll = rng.randint(0, 2)
    if roll == 0:
        A, _ = primary_from_poly(rand_monic(rng, rng.randint(1, max_dim)))
        return A
    if roll == 1:
        return rand_dim2_algebra(rng)
    left, _ = primary_from_poly(rand_monic(rng, rng.randint(1, max_dim - 1)))
    right = dim2_algebra(rand_fraction(rng), rand_fraction(rng))
    if left.dim + right.dim > max_dim:
        right, _ = primary_from_poly(rand_monic(rng, max_dim - left.dim))
    return product_algebra(left, right)


# ---------------------------------------------------------------------------
# averaging operators

def mult_operator(A, a):
    """Multiplication by a fixed element; always averaging."""
    a = tuple(A.ring.of(x) for x in a)
    return Matrix.from_cols(A.ring, [A.mul_vec(a, A.basis_vec(i))
                                     for i in range(A.dim)])


def functional_operator(A, lam):
    """x maps to lam(x) times the unit; averaging for any linear lam."""
    R = A.ring
    lam = tuple(R.of(x) for x in lam)
    return Matrix.from_cols(R, [tuple(R.mul(lam[i], u) for u in A.unit)
                                for i in range(A.dim)])


def rand_element(rng, A):
    return tuple(rand_fraction(rng) for _ in range(A.dim))


def rand_averaging(rng, A):
    """A random operator from the two always-averaging families."""
    if rng.randint(0, 1):
        return mult_operator(A, rand_element(rng, A))
    return functional_operator(A, rand_element(rng, A))


def conjugation_hom(alpha, beta):
    """On Q[w]/(w^2 - beta*w - alpha): the algebra map w -> beta - w."""
    return Matrix.from_cols(QQ, [(1, 0), (beta, -1)])


def unitary_pair(rng):
    """(A, F) with A = B x B and F(b, c) = (b, phi(b)) for a hom phi of B.

    F is unitary averaging; its kernel is 0 x B and equals the bracket span.
    """
    alpha, beta = rand_fraction(rng), rand_fraction(rng)
    B = dim2_algebra(alpha, beta)
    phi = Matrix.identity(QQ, 2) if rng.randint(0, 1) else conjugation_hom(alpha, beta)
    A = product_algebra(B, B)
    cols = []
    for i in range(2):
        cols.append(tuple(QQ.of(1) if j == i else QQ.of(0) for j in range(2))
                    + tuple(phi.col(i)))
    cols += [(QQ.zero,) * 4, (QQ.zero,) * 4]
    F = Matrix.from_cols(QQ, cols)
    return A, F


# ---------------------------------------------------------------------------
# concrete term evaluation in a finite-dimensional averaging algebra

def eval_term_concrete(term, A, F, env):
    """Evaluate a syntax tree in A with operator F; env maps var index to
    a coordinate vector."""
    from avgalg import terms as T
    from avgalg.exactlin import vec_add, vec_scale, vec_sub, zero_vec

    R = A.ring
    if isinstance(term, T.Var):
        return env[term.index]
    if isinstance(term, T.One):
        return tuple(A.unit)
    if isinstance(term, T.Zero):
        return zero_vec(R, A.dim)
    if isinstance(term, T.Add):
        return vec_add(R, eval_term_concrete(term.left, A, F, env),
                       eval_term_concrete(term.right, A, F, env))
    if isinstance(term, T.Sub):
        return vec_sub(R, eval_term_concrete(term.left, A, F, env),
                       eval_term_concrete(term.right, A, F, env))
    if isinstance(term, T.Mul):
        return A.mul_vec(eval_term_concrete(term.left, A, F, env),
                         eval_term_concrete(term.right, A, F, env))
    if isinstance(term, T.ScalarMul):
        return vec_scale(R, R.of(term.coeff),
                         eval_term_concrete(term.arg, A, F, env))
    if isinstance(term, T.F):
        return F.apply(eval_term_concrete(term.arg, A, F, env))
    raise TypeError(f"not a term node: {term!r}")


# ---------------------------------------------------------------------------
# free-object sampling used by both the module suite and the acceptance gate

def mono_of_xmono(xm):
    p = FreePoly.one(QQ)
    for i, e in xm:
        for _ in range(e):
            p = p.mul(FreePoly.x_var(i))
    return p


def kernel_sample(rng, x_count=3):
    """Random kernel elements of total degree at most 4 in at most x_count
    variables: bracket combinations plus image-collision differences."""
    from avgalg.freeavg import bracket_free

    w = FreePoly.zero(QQ)
    for _ in range(rng.randint(1, 2)):
        w = w.add(bracket_free(
            rand_free_poly(rng, x_count=x_count, max_terms=2, max_deg=1, y_factors=1),
            rand_free_poly(rng, x_count=x_count, max_terms=2, max_deg=1, y_factors=1)))
    for _ in range(rng.randint(0, 2)):
        u = rand_xmono(rng, x_count, 2)
        s = rand_xmono(rng, x_count, 2)
        v = FreePoly.y_of(rand_xmono(rng, x_count, 1)) if rng.randint(0, 1) \
            else FreePoly.one(QQ)
        c = Fraction(rng.randint(1, 5))
        # u*y[s]*v and s*y[u]*v share the image y[u]*y[s]*v, so their
        # difference lies in the kernel without being literally a bracket
        left = mono_of_xmono(u).mul(FreePoly.y_of(s)).mul(v).scale(c)
        right = mono_of_xmono(s).mul(FreePoly.y_of(u)).mul(v).scale(c)
        w = w.add(left.sub(right))
    return w


def reynolds_step_at(p, which):
    """Apply one normal-form rewrite step to the which-th reducible term."""
    from avgalg.freeavg import y_gen

    terms = list(p.terms)
    reducible = []
    for idx, (m, _) in enumerate(terms):
        a = 0
        b = 0
        for g, e in m:
            if g == y_gen(()):
                a = e
            elif g[0] == "y":
                b += e
        if a >= 1 and a + b >= 3:
            reducible.append(idx)
    if not reducible:
        return None
    idx = reducible[which % len(reducible)]
    m, c = terms[idx]
    lowered = tuple((g, e - 1) if g == y_gen(()) else (g, e) for g, e in m)
    lowered = tuple((g, e) for g, e in lowered if e > 0)
    rest = FreePoly(p.ring, tuple(t for i, t in enumerate(terms) if i != idx))
    return rest.add(FreePoly.monomial(lowered, c, p.ring))
