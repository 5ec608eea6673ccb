import threading
from fractions import Fraction as F

import pytest

import oracles
from conftest import companion_system, cosine_density, lebesgue, reference_system
from mopuc import (
    FloatField,
    GaussRat,
    MeasureSystem,
    Mopuc,
    NotNormal,
    Poly,
    ZeroIndex,
    assemble_M,
    bernstein_szego,
    graded_indices,
    inner,
    is_normal,
    lebesgue_atoms,
    szego_oracle,
    trig_density,
    type1,
    type1star,
    type2,
    type2star,
)
from mopuc.core import box_indices, minus, plus

z = Poly.monomial(1)
one = Poly([1])


def P(*coeffs):
    return Poly([GaussRat(c) for c in coeffs])


def bs(a):
    return MeasureSystem([bernstein_szego(a)])


# -- inner products and the moment matrix --------------------------------------


def test_inner_examples(ref):
    assert inner(ref, 0, z, z) == 1
    assert inner(ref, 1, z, z) == 1
    assert inner(ref, 0, z * z, one) == F(1, 4)
    assert inner(ref, 0, z - P(F(1, 2)), one) == 0


def test_inner_is_sesquilinear(companion):
    f = P(1, 2, 3)
    g = Poly([GaussRat(F(1, 2), 1), GaussRat(0, -1)])
    c = GaussRat(F(2, 3), F(-1, 4))
    assert inner(companion, 1, f * c, g) == c * inner(companion, 1, f, g)
    assert inner(companion, 1, f, g * c) == c.conjugate() * inner(companion, 1, f, g)
    assert inner(companion, 1, g, f) == inner(companion, 1, f, g).conjugate()


def test_assemble_M_layout(ref):
    M = assemble_M(ref, (1, 1))
    assert [list(r) for r in M.rows] == [[1, F(1, 2)], [1, F(-1, 3)]]
    M = assemble_M(ref, (2, 1))
    assert M.row_labels == ((0, 0), (0, 1), (1, 0))
    assert list(M.rows[1]) == [F(1, 2), 1, F(1, 2)]  # nu^{c-1}, c = 0..2
    assert [list(r) for r in assemble_M(lebesgue(), (2,)).rows] == [[1, 0], [0, 1]]
    assert [list(r) for r in assemble_M(bs(F(1, 2)), (1,)).rows] == [[1]]


def test_assemble_M_rejects_zero_index(ref):
    with pytest.raises(ZeroIndex):
        assemble_M(ref, (0, 0))


def test_bad_index_shapes(ref):
    with pytest.raises(ValueError):
        type2(ref, (1,))
    with pytest.raises(ValueError):
        type2(ref, (1, -1))


# -- normality -----------------------------------------------------------------


def test_normality_examples(ref, dup):
    ok, diag = is_normal(ref, (0, 0))
    assert ok and diag.status == "normal"
    ok, diag = is_normal(ref, (1, 1))
    assert ok and diag.det == F(-5, 6)
    ok, diag = is_normal(dup, (1, 1))
    assert not ok and diag.det == 0 and diag.status == "singular"


def test_float_normality_reports_rcond(ref_float, dup):
    ok, diag = is_normal(ref_float, (1, 1))
    assert ok and diag.rcond > 0.1 and abs(diag.abs_det - 5 / 6) < 1e-14
    ok, diag = is_normal(dup.with_field(FloatField()), (1, 1))
    assert not ok and diag.status in ("singular", "indeterminate")


def test_reference_system_normality_pattern(ref):
    """Two single-zero Bernstein-Szegő measures are singular once both entries reach 2.

    z^{max(n)-1}(z - 1/2)(z + 1/3) meets every orthogonality condition with
    degree below |n|, so the moment matrix has a kernel. The exact determinant
    from an independent sympy computation agrees on every index.
    """
    for n in box_indices((4, 4)):
        expected = min(n) <= 1
        assert Mopuc.of(ref).is_normal(n) == expected, n
        if sum(n):
            det = oracles.moment_det(oracles.REFERENCE, n)
            assert (det != 0) == expected
            assert oracles.num(Mopuc.of(ref).normality(n).det) == det


def test_companion_is_normal_on_graded_box(companion):
    m = Mopuc.of(companion)
    assert all(m.is_normal(n) for n in graded_indices(2, 9))


def test_not_normal_error_names_index(dup):
    with pytest.raises(NotNormal) as err:
        type2(dup, (1, 1))
    assert err.value.index == (1, 1)
    with pytest.raises(NotNormal):
        type1(dup, (2, 1))


# -- the four families: worked examples ----------------------------------------


def test_type2_examples(ref):
    assert type2(lebesgue(), (3,)) == P(0, 0, 0, 1)
    assert type2(bs(F(1, 2)), (1,)) == P(F(-1, 2), 1)
    assert type2(ref, (1, 1)) == P(F(-1, 6), F(-1, 6), 1)


def test_type2star_examples(ref):
    assert type2star(lebesgue(), (3,)) == P(1)
    assert type2star(bs(F(1, 2)), (1,)) == P(1, F(-1, 2))
    assert type2star(ref, (1, 1)) == P(1, 0, -1)


def test_type1_examples(ref):
    assert type1(cosine_density(), (1,))[0] == P(1)
    assert type1(bs(F(1, 2)), (2,))[0] == P(F(-2, 3), F(4, 3))
    lam = type1(ref, (2, 0))
    assert lam[1].is_zero()
    assert type1(ref, (0, 0))[0].is_zero()


def test_type1star_examples():
    assert type1star(cosine_density(), (1,))[0] == P(1)
    assert type1star(lebesgue(), (2,))[0] == P(1, 0)
    assert all(p.is_zero() for p in type1star(reference_system(), (0, 0)))


def test_zero_index_conventions(ref):
    assert type2(ref, (0, 0)) == P(1)
    assert type2star(ref, (0, 0)) == P(1)


# -- the four families against the brute-force oracle ---------------------------

SYSTEMS = {
    "reference": (reference_system, oracles.REFERENCE),
    "companion": (companion_system, oracles.COMPANION),
}


@pytest.mark.parametrize("name", SYSTEMS)
def test_families_match_brute_force(name):
    build, desc = SYSTEMS[name]
    m = Mopuc.of(build())
    for n in graded_indices(2, 4):
        if not m.is_normal(n):
            continue
        assert oracles.poly_eq(oracles.type2(desc, n), m.type2(n)), n
        assert oracles.poly_eq(oracles.type2star(desc, n), m.type2star(n)), n
        if sum(n):
            for j in range(2):
                assert oracles.poly_eq(oracles.type1(desc, n)[j], m.type1(n)[j]), (n, j)
                assert oracles.poly_eq(oracles.type1star(desc, n)[j], m.type1star(n)[j]), (n, j)


def test_three_measure_system_matches_brute_force():
    atoms = ("atoms", "1/2", [(("3/5", "4/5"), "1/2")])
    desc = (("bs", ("1/4", "1/3")), ("trig", {1: ("1/5", "-1/7"), 2: "1/9"}), atoms)
    s = MeasureSystem(
        [
            bernstein_szego(GaussRat(F(1, 4), F(1, 3))),
            trig_density({1: GaussRat(F(1, 5), F(-1, 7)), 2: F(1, 9)}),
            lebesgue_atoms(F(1, 2), [(GaussRat(F(3, 5), F(4, 5)), F(1, 2))]),
        ]
    )
    m = Mopuc.of(s)
    checked = 0
    for n in graded_indices(3, 3):
        if sum(n) == 0 or not m.is_normal(n):
            continue
        checked += 1
        assert oracles.poly_eq(oracles.type2(desc, n), m.type2(n)), n
        assert oracles.poly_eq(oracles.type2star(desc, n), m.type2star(n)), n
        for j in range(3):
            assert oracles.poly_eq(oracles.type1(desc, n)[j], m.type1(n)[j]), (n, j)
    assert checked >= 10


# -- structural properties -----------------------------------------------------


def _orthogonality_residuals(m, n):
    r = m.r
    out = []
    phi, star = m.type2(n), m.type2star(n)
    for j in range(r):
        out += [m.inner_monomial(j, phi, p) for p in range(n[j])]
        out += [m.inner_monomial(j, star, p) for p in range(1, n[j] + 1)]
    if sum(n):
        lam, lam_star = m.type1(n), m.type1star(n)
        size = sum(n)
        for p in range(size):
            s = sum((m.inner_monomial(j, lam[j], p) for j in range(r)), m.field.zero)
            out.append(s - (1 if p == size - 1 else 0))
            s = sum((m.inner_monomial(j, lam_star[j], p) for j in range(r)), m.field.zero)
            out.append(s - (1 if p == 0 else 0))
    return out


@pytest.mark.parametrize("field", [None, FloatField()], ids=["exact", "float"])
def test_orthogonality_residuals(field):
    m = Mopuc.of(companion_system(field))
    for n in graded_indices(2, 7):
        res = _orthogonality_residuals(m, n)
        assert all(m.field.residual_ok(x) for x in res), n
        assert m.type2(n).degree(m.field.is_zero) == sum(n)
        assert m.type2star(n).coeff(0) == 1


def test_degree_caps_respected(companion):
    m = Mopuc.of(companion)
    for n in graded_indices(2, 6):
        if sum(n) == 0:
            continue
        for j in range(2):
            assert m.type1(n)[j].degree() <= n[j] - 1
            assert m.type1star(n)[j].degree() <= n[j] - 1


@pytest.mark.parametrize("build", [reference_system, companion_system], ids=["reference", "companion"])
def test_next_index_normal_iff_moment_nonzero(build):
    """For normal n: n + e_k is normal exactly when <Phi_n, z^{n_k}>_k != 0."""
    m = Mopuc.of(build())
    for n in graded_indices(2, 6):
        if not m.is_normal(n):
            continue
        for k in range(2):
            moment_k = m.inner_monomial(k, m.type2(n), n[k])
            assert (moment_k != 0) == m.is_normal(plus(n, k)), (n, k)


@pytest.mark.parametrize("build", [reference_system, companion_system], ids=["reference", "companion"])
def test_type1_leading_degree(build):
    m = Mopuc.of(build())
    for n in graded_indices(2, 6):
        for k in range(2):
            if n[k] and m.is_normal(n) and m.is_normal(minus(n, k)):
                assert m.type1(n)[k].degree() == n[k] - 1, (n, k)


@pytest.mark.parametrize("build", [reference_system, companion_system], ids=["reference", "companion"])
def test_biorthogonality_and_kappa(build):
    m = Mopuc.of(build())
    for n in graded_indices(2, 6):
        for k in range(2):
            up = plus(n, k)
            if not (m.is_normal(n) and m.is_normal(up)):
                continue
            phi, lam = m.type2(n), m.type1(up)
            assert m.inner(k, phi, lam[k]) == 1
            assert sum((m.inner(j, phi, lam[j]) for j in range(2)), m.field.zero) == 1
            kappa = lam[k].coeff(n[k])
            assert kappa.conjugate() * m.inner_monomial(k, phi, n[k]) == 1


@pytest.mark.parametrize(
    "spec",
    [bernstein_szego(GaussRat(F(1, 3), F(-1, 4))), trig_density({1: F(1, 4)})],
    ids=["bs", "cosine"],
)
def test_single_measure_star_is_reversal(spec):
    m = Mopuc.of(MeasureSystem([spec]))
    for deg in range(9):
        assert m.type2star((deg,)) == m.type2((deg,)).reversed(deg)


def test_marginals_are_classical_polynomials(companion):
    m = Mopuc.of(companion)
    for k in range(2):
        steps = szego_oracle([companion.moment(k, p) for p in range(11)], 10)
        for j in range(11):
            idx = tuple(j if i == k else 0 for i in range(2))
            assert m.type2(idx) == steps[j].phi
            assert m.type2star(idx) == steps[j].phistar


def test_cache_is_consistent_under_threads():
    s = companion_system()
    m = Mopuc.of(s)
    results = []

    def work():
        results.append(tuple(m.type2(n) for n in graded_indices(2, 5)))

    threads = [threading.Thread(target=work) for _ in range(6)]
    for t in threads:
        t.start()
    for t in threads:
        t.join()
    assert all(r == results[0] for r in results)
    assert Mopuc.of(s) is m


def test_float_solves_are_refined_to_a_few_ulps(ref, ref_float):
    """Coefficients as large as 3^7 still come back within a few ulps of the exact values."""
    e, f = Mopuc.of(ref), Mopuc.of(ref_float)
    worst = 0.0
    for n in graded_indices(2, 9):
        if not e.is_normal(n):
            continue
        for pe, pf in ((e.type2(n), f.type2(n)), (e.type2star(n), f.type2star(n))):
            for ce, cf in zip(pe.coeffs, pf.coeffs):
                worst = max(worst, abs(cf - complex(ce)) / max(abs(ce), 1))
    assert worst <= 8e-15
