import random
from fractions import Fraction as Q

import pytest

from voamodes.fock import FockModule, fock_intertwiner
from voamodes.heisenberg import (
    FockVector,
    Heisenberg,
    conformal_vector,
    vacuum,
)
from voamodes.matrices import (
    IndexedMatrix,
    ProbeFamily,
    diamond_vv,
    diamond_wv,
    identity_n,
    jacobi_kernel_element,
    left_entry,
    omega0_n,
    omega1_n,
    opposite_map,
    probe_equal,
    right_entry,
)

V = Heisenberg(weight_cap=12)
ONE = vacuum()
OM = conformal_vector()
A1 = FockVector.basis(0, (1,))
CHARGES = (Q(0), Q(1, 2), Q(1))


def module_probes(max_level=2):
    return ProbeFamily.modules(CHARGES, level_cap=8, max_level=max_level)


def test_matrix_container():
    m = IndexedMatrix.single(OM, 1, 2)
    assert m.entry(1, 2) == OM and m.entry(0, 0).is_zero()
    assert (m + m).entry(1, 2) == OM.scale(2)
    assert (m - m).is_zero()
    with pytest.raises(ValueError):
        IndexedMatrix(0, {(-1, 0): OM})
    with pytest.raises(ValueError):
        IndexedMatrix(Q(1, 2), {(0, 0): OM})


def test_canonical_matrices():
    ident = identity_n(2)
    assert len(ident.entries) == 3
    assert all(vec == ONE for vec in ident.entries.values())
    om1 = omega1_n(2)
    assert set(om1.entries) == {(1, 0), (2, 1)}
    om0 = omega0_n(2)
    assert set(om0.entries) == {(0, 0), (1, 1), (2, 2)}


def test_unit_entry():
    for n in range(3):
        for l in range(3):
            for v in [A1, OM, FockVector.basis(0, (2, 1))]:
                assert left_entry(ONE, v, n, n, l) == v


def test_index_mismatch_is_zero():
    a = IndexedMatrix.single(ONE, 0, 1)
    b = IndexedMatrix.single(A1, 0, 1)
    assert diamond_vv(a, b).is_zero()
    # matching index but vanishing residue: [1]_{01}.[v]_{10} at (0,0)
    c = IndexedMatrix.single(A1, 1, 0)
    got = diamond_vv(a, c)
    assert got.is_zero()


def test_omega_omega_product():
    # residue oracle: coefficient of x^0 in (1+x)^2 Y(om, x) om
    got = left_entry(OM, OM, 0, 0, 0)
    want = (V.mode(OM, -1, OM) + V.mode(OM, 0, OM).scale(2) + OM.scale(2))
    assert got == want


def test_identity_acts_as_identity():
    for lam in CHARGES:
        M = FockModule(lam, level_cap=8)
        ident = identity_n(2)
        for w in M.omega0_basis(2):
            img = M.zero()
            for (k, l), entry in ident.entries.items():
                img = img + M.theta(k, l, entry, w)
            assert img == w


def test_general_matrix_product():
    # two-entry matrices multiply through the shared middle index
    a = IndexedMatrix(0, {(0, 1): A1, (1, 1): OM})
    b = IndexedMatrix(0, {(1, 0): A1, (1, 2): ONE})
    prod = diamond_vv(a, b)
    assert set(prod.entries) <= {(0, 0), (0, 2), (1, 0), (1, 2)}
    assert prod.entry(0, 0) == left_entry(A1, A1, 0, 1, 0)
    assert prod.entry(1, 2) == left_entry(OM, ONE, 1, 1, 2)


def test_right_unit():
    # [w]_{kn} . [1]_{nl} = delta_{nl} [w]_{kl}: the delta comes out of the
    # residue, not out of index matching
    M = FockModule(Q(1, 2), level_cap=8)
    w = M.basis(2)[0]
    for form in ("conjugated", "direct", "right-op"):
        for n in range(3):
            for l in range(3):
                wm = IndexedMatrix.single(w, 0, n)
                um = IndexedMatrix.single(ONE, n, l)
                got = diamond_wv(wm, um, form=form)
                want = (IndexedMatrix.single(w, 0, l) if n == l
                        else IndexedMatrix.zero(w.charge))
                assert got == want, (form, n, l)


def test_three_forms_agree():
    rng = random.Random(5)
    pools = {lam: [b for lev in range(3)
                   for b in FockModule(lam, 8).basis(lev)] for lam in CHARGES}
    vs = V.basis_upto(3)
    for _ in range(20):
        lam = rng.choice(CHARGES)
        w = rng.choice(pools[lam])
        v = rng.choice(vs)
        k, n, l = rng.randrange(3), rng.randrange(3), rng.randrange(3)
        a = right_entry(w, v, k, n, l, "conjugated")
        b = right_entry(w, v, k, n, l, "direct")
        c = right_entry(w, v, k, n, l, "right-op")
        assert a == b == c, (lam, w, v, k, n, l)


def test_kernel_elements_nonzero_but_annihilated():
    W1 = FockModule(Q(1, 2), level_cap=14)
    Y = fock_intertwiner(Q(1, 2), Q(1, 2), level_cap=14)
    # this grid point produces a genuinely nonzero matrix
    km = jacobi_kernel_element(W1, 0, 2, 0, -2, A1, W1.highest())
    assert not km.is_zero()
    for (k, l), entry in km.entries.items():
        for w2 in Y.right_input.basis(l):
            assert Y.theta(k, l, entry, w2).is_zero()


def test_kernel_element_grid():
    W1 = FockModule(Q(1), level_cap=14)
    Y = fock_intertwiner(Q(1), Q(-1, 2), level_cap=14)
    vs = [ONE, A1, OM]
    for k in range(2):
        for l in range(2):
            for n in range(2):
                for p in (-2, -1, 0, 1, 2):
                    if l + p < 0:
                        continue
                    for v in vs:
                        km = jacobi_kernel_element(W1, k, l, n, p, v,
                                                   W1.basis(1)[0])
                        for (kk, ll), entry in km.entries.items():
                            for w2 in Y.right_input.basis(ll):
                                assert Y.theta(kk, ll, entry, w2).is_zero()


def test_kernel_element_precondition():
    from voamodes.errors import NonHomogeneous

    W1 = FockModule(Q(1, 2), level_cap=8)
    with pytest.raises(ValueError):
        jacobi_kernel_element(W1, 0, 0, 0, -1, OM, W1.highest())
    with pytest.raises(NonHomogeneous):
        jacobi_kernel_element(W1, 0, 1, 0, 0, ONE + OM, W1.highest())


def test_omega_specializations():
    # diagonal and subdiagonal kernel elements match their displayed forms
    from voamodes.heisenberg import sugawara_l

    M = FockModule(Q(1), level_cap=8)
    for n in range(2):
        for l in range(2):
            for w in M.basis(l):
                km = jacobi_kernel_element(M, n, l, n, 0, OM, w)
                direct = (left_entry(OM, w, n, n, l)
                          - right_entry(w, OM, n, l, l)
                          - (sugawara_l(-1, w) + M.l0(w)))
                assert km.entry(n, l) == direct
                km = jacobi_kernel_element(M, n + 1, l, n, 0, OM, w)
                direct = (left_entry(OM, w, n + 1, n, l)
                          - right_entry(w, OM, n + 1, l + 1, l)
                          - sugawara_l(-1, w))
                assert km.entry(n + 1, l) == direct


def test_opposite_map_fixed_points():
    for k in range(3):
        for l in range(3):
            got = opposite_map(IndexedMatrix.single(ONE, k, l), "plus")
            assert got == IndexedMatrix.single(ONE, l, k)
            got = opposite_map(IndexedMatrix.single(OM, k, l), "minus")
            assert got == IndexedMatrix.single(OM.scale(-1), l, k)
    with pytest.raises(ValueError):
        opposite_map(identity_n(1), "both")


def test_opposite_adjoint_calibration():
    M = FockModule(Q(1, 2), level_cap=6)
    verdict = {}
    for sign in ("plus", "minus"):
        ok = True
        for v in [A1, OM, FockVector.basis(0, (2, 1))]:
            for k in range(2):
                for l in range(2):
                    omat = opposite_map(IndexedMatrix.single(v, k, l), sign)
                    for w in M.omega0_basis(2):
                        for wp in M.omega0_basis(2):
                            lhs = M.inner(M.theta_dual(k, l, v, wp), w)
                            rhs = Q(0)
                            for (a, b), entry in omat.entries.items():
                                rhs += M.inner(wp, M.theta(a, b, entry, w))
                            ok = ok and lhs == rhs
        verdict[sign] = ok
    assert verdict == {"plus": True, "minus": False}


def test_opposite_anti_homomorphism():
    rng = random.Random(17)
    probes = module_probes()
    vs = V.basis_upto(3)
    for _ in range(30):
        a = IndexedMatrix.single(rng.choice(vs), rng.randrange(3), rng.randrange(3))
        b = IndexedMatrix.single(rng.choice(vs), rng.randrange(3), rng.randrange(3))
        lhs = opposite_map(diamond_vv(a, b), "plus")
        rhs = diamond_vv(opposite_map(b, "plus"), opposite_map(a, "plus"))
        assert probe_equal(lhs, rhs, probes)


def test_probe_equal_examples():
    probes = module_probes()
    for k in range(3):
        for l in range(3):
            lhs = IndexedMatrix.single(ONE, k, l)
            rhs = (IndexedMatrix.single(ONE, l, l) if k == l
                   else IndexedMatrix.zero(0))
            assert probe_equal(lhs, rhs, probes)
    a = IndexedMatrix.single(OM, 1, 1)
    assert probe_equal(a, a, probes)
    # the charge-1 probe separates [a(-1)1]_{00} from zero
    assert not probe_equal(IndexedMatrix.single(A1, 0, 0),
                           IndexedMatrix.zero(0), probes)


def test_probe_family_validation():
    with pytest.raises(ValueError):
        ProbeFamily([])


def series_route_left_entry(v, w, k, n, l):
    """Independent evaluation: assemble the whole integrand as one series
    (truncated Taylor polynomial times (1+x)^l times the dressed vertex
    series) and take its residue, instead of collecting engine
    coefficients by index arithmetic."""
    from voamodes.fock import FockModule
    from voamodes.heisenberg import weight_of, zero_vector
    from voamodes.series import LogLaurent, binom_series, truncated_taylor

    M = FockModule(w.charge, level_cap=40)
    out = zero_vector(w.charge)
    for hv in sorted({sum(nu) for nu in v.terms}):
        v_h = FockVector(0, {p: c for p, c in v.terms.items() if sum(p) == hv})
        # Y(v, x) w over a window wide enough for the residue
        lo = -int(max(w.levels(), default=0) + hv + 1)
        hi = k + l + 1
        modes = {}
        for t in range(lo, hi + 1):
            vec = M.mode(v_h, -t - 1, w)
            if not vec.is_zero():
                modes[(t, 0)] = vec
        ser = LogLaurent(modes)
        # order k+l+1 makes the Taylor polynomial stop at m = n
        scalar = truncated_taylor(-k + n - l - 1, k + l + 1).mul_scalar_series(
            binom_series(l + hv, l + hv))
        full = ser.mul_scalar_series(scalar)
        got = full.coeff(-1)
        if got is not None:
            out = out + got
    return out


def test_left_entry_series_route():
    M = FockModule(Q(1, 2), level_cap=12)
    vs = [ONE, A1, OM, FockVector.basis(0, (2, 1)), FockVector.basis(0, (3,))]
    ws = [M.highest(), M.basis(1)[0], M.basis(2)[1]]
    for v in vs:
        for w in ws:
            for k in range(3):
                for n in range(3):
                    for l in range(3):
                        assert left_entry(v, w, k, n, l) == \
                            series_route_left_entry(v, w, k, n, l)


def _vector_strategy(charge, max_level=3):
    from hypothesis import strategies as st
    from voamodes.heisenberg import partitions_of

    parts = [p for n in range(max_level + 1) for p in partitions_of(n)]
    coeff = st.fractions(min_value=-3, max_value=3, max_denominator=4)
    return st.dictionaries(st.sampled_from(parts), coeff, max_size=3).map(
        lambda d: FockVector(charge, d))


def test_entry_bilinearity():
    from hypothesis import given, settings

    @settings(deadline=None, max_examples=25)
    @given(_vector_strategy(0), _vector_strategy(0), _vector_strategy(Q(1, 2)))
    def check(u, v, w):
        k, n, l = 1, 2, 1
        assert left_entry(u + v, w, k, n, l) == \
            left_entry(u, w, k, n, l) + left_entry(v, w, k, n, l)
        assert right_entry(w, u + v, k, n, l) == \
            right_entry(w, u, k, n, l) + right_entry(w, v, k, n, l)
        assert left_entry(u.scale(Q(2, 3)), w, k, n, l) == \
            left_entry(u, w, k, n, l).scale(Q(2, 3))

    check()


def test_theta_linearity():
    from hypothesis import given, settings

    M = FockModule(Q(1), level_cap=8)

    @settings(deadline=None, max_examples=25)
    @given(_vector_strategy(0), _vector_strategy(Q(1)), _vector_strategy(Q(1)))
    def check(v, w1, w2):
        k, l = 2, 1
        assert M.theta(k, l, v, w1 + w2) == \
            M.theta(k, l, v, w1) + M.theta(k, l, v, w2)
        assert M.theta(k, l, v, w1.scale(-5)) == M.theta(k, l, v, w1).scale(-5)

    check()
