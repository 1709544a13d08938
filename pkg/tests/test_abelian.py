import numpy as np
import pytest

from zeroabel.abelian import (
    DOES_NOT_VANISH,
    UNDETERMINED,
    VANISHES_BALANCED,
    VANISHES_TRIVIAL,
    BranchSystem,
    default_epsilon,
    displacement,
    extract_psi_and_w,
    integral_samples,
    is_identically_zero,
    morse_generic_check,
    shifted_monomial,
    simple_cycle_solve,
    solve_tangential,
    theorem1_check,
)
from zeroabel.cycles import ZeroCycle, trivial_projection_space
from zeroabel.errors import InputError
from zeroabel.monodromy import monodromy_data
from zeroabel.poly import ExactPoly, compose
from zeroabel.puiseux import puiseux_branch, puiseux_of_g

Z = ExactPoly.z()


def test_evidence_for_z4():
    f = Z**4
    C = [1, -1, 1, -1]
    yes = is_identically_zero(f, Z**3, C)
    no = is_identically_zero(f, Z**2, C)
    assert yes.passed and yes.sample_residual < 1e-8 and yes.n_samples == 20
    assert not no.passed and no.worst_k == -2
    assert isinstance(yes.to_json()["passed"], bool)


def test_trivial_inputs_pass_exactly():
    assert is_identically_zero(Z**3, Z**2, [0, 0, 0]).exact
    assert is_identically_zero(Z**3, ExactPoly([5]), [1, -1, 0]).passed


def test_cycle_length_checked():
    with pytest.raises(InputError):
        is_identically_zero(Z**3, Z, [1, -1])


def test_composite_check():
    f = Z**3 - 3 * Z
    assert theorem1_check(f, compose(Z**2 + 1, f)) == Z**2 + 1
    assert theorem1_check(f, Z) is None
    assert theorem1_check(f, ExactPoly([4])) == ExactPoly([4])


def simple_cycles(m):
    return [ZeroCycle.simple(m, i, 0) for i in range(1, m)]


@pytest.mark.parametrize("fi", range(10))
def test_composite_equivalence_on_corpus(corpus, fi):
    f = corpus[fi]
    data = monodromy_data(f)
    for g in [compose(Z**2 - Z, f), compose(Z**2, f) + Z, Z**2]:
        composite = theorem1_check(f, g) is not None
        allpass = all(is_identically_zero(f, g, C, data).passed for C in simple_cycles(f.degree))
        assert composite == allpass


def test_simple_cycle_solve():
    f = Z**4
    sol = simple_cycle_solve(f, Z**2 + 1, 0, 2)
    assert sol is not None
    assert sol.h == Z**2 and compose(sol.g0, sol.h) == Z**2 + 1
    assert compose(sol.f0, sol.h) == f
    assert simple_cycle_solve(f, Z**2 + 1, 0, 1) is None


def test_morse_generic_check():
    assert morse_generic_check(Z**3 - 3 * Z)
    assert not morse_generic_check(Z**4 - Z**2)  # two critical points share a value
    assert not morse_generic_check(Z**4)


def test_sampling_is_deterministic():
    bs = BranchSystem(Z**3 - 3 * Z)
    assert bs.sample_points(5) == bs.sample_points(5)


CASES = [
    (Z**3 - 3 * Z, Z**2, [1, -1, 0]),
    (Z**4 + Z, Z**3 + Z, [1, 0, -1, 0]),
    (ExactPoly([1, 0, -8, 0, 8]), Z**2, [1, -1, 1, -1]),
    (Z**5 + Z**2 + 1, Z, [2, -1, 0, 0, -1]),
]


@pytest.mark.parametrize("f,g,C", CASES)
def test_displacement_first_order(f, g, C):
    bs = BranchSystem(f)
    ts = bs.sample_points(3, seed=5)
    I = np.array(integral_samples(f, g, C, ts, bs.data))
    eps = default_epsilon(f, g, bs.data)
    d1 = np.array(displacement(f, g, C, eps, ts, bs.data))
    d2 = np.array(displacement(f, g, C, eps / 2, ts, bs.data))
    ratio = np.abs(d1 + eps * I) / np.abs(d2 + eps / 2 * I)
    assert np.all((ratio > 3.5) & (ratio < 4.5))


def test_displacement_vanishes_for_composite():
    f = Z**3 - 3 * Z
    g = compose(Z**2 + 2, f)
    for C in simple_cycles(3):
        assert max(abs(x) for x in displacement(f, g, C)) < 1e-10


def test_extract_recovers_w():
    f = (Z**2 + Z) ** 3
    g = compose(Z**2 + 3 * Z, Z**2 + Z) + compose(Z**2, (Z**2 + Z) ** 3) + Z
    s = puiseux_of_g(f, g, 8, exact=True)
    w, g0, dec = extract_psi_and_w(f, s, 3, g.degree)
    assert dec.inner.degree == 2
    assert compose(g0, dec.inner) == w
    # w(z_1) agrees with psi_3 through the truncation order
    ws = puiseux_of_g(f, w, 8, exact=True)
    for k in range(s.kmin, s.kmax + 1):
        expected = s.coefficient(k) if k % 2 == 0 else 0
        assert ws.coefficient(k) == expected


def test_shifted_monomial():
    assert shifted_monomial(2 * (Z + 1) ** 3 + 5) == (2, 1, 5)
    assert shifted_monomial(Z**3 + Z) is None


def test_solve_z4_balanced_monomial_rule():
    cert = solve_tangential(Z**4, [1, -1, 1, -1], Z**3)
    assert cert.status == VANISHES_BALANCED
    assert cert.terms[0].resolution == "monomial-rule-pass"
    assert cert.reconstruct() == Z**3
    assert solve_tangential(Z**4, [1, -1, 1, -1], Z**2).status == DOES_NOT_VANISH


def test_solve_composite_with_f():
    f = Z**3 - 3 * Z
    cert = solve_tangential(f, [1, -1, 0], compose(Z**2, f))
    assert cert.status == VANISHES_TRIVIAL
    assert cert.reconstruct() == compose(Z**2, f)


def test_solve_multiple_periods():
    C = trivial_projection_space(6)[0]
    g = Z**2 + Z**3 + 4
    cert = solve_tangential(Z**6, C, g)
    assert cert.status == VANISHES_TRIVIAL
    assert cert.reconstruct() == g
    assert sorted(t.h.degree for t in cert.terms if t.g.degree > 0) == [2, 3]


def test_trivial_terms_integrate_to_zero():
    C = trivial_projection_space(6)[0]
    f = Z**6
    g = Z**2 + Z**3
    cert = solve_tangential(f, C, g)
    data = monodromy_data(f)
    ts = BranchSystem(f, data).sample_points(20)
    for t in cert.terms:
        if t.kind == "trivial":
            vals = integral_samples(f, compose(t.g, t.h), C, ts, data)
            assert max(abs(v) for v in vals) < 1e-8


def test_solve_nested_balanced_projection():
    f = (Z**2 + Z) ** 6
    C = [2, -1, -1, 2, -1, -1] + [0] * 6
    h3 = Z**2 + Z
    g = compose(Z**3, h3) + compose(Z, h3**3)
    cert = solve_tangential(f, C, g)
    assert cert.vanishes
    assert cert.reconstruct() == g
    kinds = sorted(t.kind for t in cert.terms)
    assert "balanced" in kinds
    bad = solve_tangential(f, C, compose(Z**2, h3))
    assert bad.status == DOES_NOT_VANISH


def test_certificate_json_roundtrip():
    import json

    cert = solve_tangential(Z**4, [1, -1, 1, -1], Z**3 + Z)
    text = json.dumps(cert.to_json(), sort_keys=True)
    assert json.loads(text)["reconstructs_g"] is True


def test_branch_series_basepoint_consistency():
    f = Z**4 + Z
    data = monodromy_data(f)
    s = puiseux_branch(f, 80)
    for b in range(4):
        assert abs(s.evaluate(data.basepoint, b) - data.fiber[b]) < 1e-8


def test_balanced_residual_without_monomial_rule_is_undetermined():
    cert = solve_tangential(Z**4 - Z**2, [1, -1, 1, -1], Z**3)
    assert cert.status == UNDETERMINED
    assert cert.evidence.passed
    assert cert.terms[0].resolution == "evidence-pass"
