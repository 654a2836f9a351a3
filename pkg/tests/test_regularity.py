import numpy as np
import pytest

import qcmap
from qcmap.domains import Disc, DiscMinusTwoDiscs, Square, ellipse, indicator, interior_mask
from qcmap.grid import Field, make_grid, sample
from qcmap.regularity import (
    bilipschitz_constants,
    cancellation_defect,
    cusp_pair_quotients,
    holder_seminorm,
    measured_holder_exponent,
    sample_pairs,
    theorem1_defect,
)
from qcmap.solve import BeltramiCoefficient, MapEvaluator, neumann_solve


def test_seminorm_identity_function(grid512):
    f = sample(lambda z: z, grid512)
    est = holder_seminorm(f, Disc(0, 1.0), 1.0, pairs=3000, seed=0)
    assert est.value == pytest.approx(1.0, rel=0.02)
    assert est.pairs_used >= 1000


def test_seminorm_constant_function(grid512):
    f = sample(lambda z: np.full(np.shape(z), 0.3 + 0.1j), grid512)
    est = holder_seminorm(f, Disc(0, 1.0), 0.5, pairs=2000, seed=0)
    assert est.value == 0.0


def test_seminorm_validation(grid512):
    f = sample(lambda z: z, grid512)
    with pytest.raises(ValueError):
        holder_seminorm(f, Disc(0, 1.0), 1.5, pairs=2000)
    with pytest.raises(ValueError):
        holder_seminorm(f, Disc(0, 1.0), 0.5, pairs=10)
    with pytest.raises(ValueError):
        holder_seminorm(f, Disc(0, 1.0), 0.5, pairs=2000, mode="hamming")


def test_seminorm_sup_monotone_under_more_pairs(grid512):
    # sup over a growing pair set never decreases
    f = sample(lambda z: np.abs(z) ** 0.5, grid512)
    dom = Disc(0, 1.0)
    za, zb = sample_pairs(dom, grid512, 4000, 4 * grid512.spacing, seed=3)
    from qcmap.regularity import _field_at_nodes

    q = np.abs(_field_at_nodes(f, za) - _field_at_nodes(f, zb)) / np.abs(za - zb) ** 0.5
    running = np.maximum.accumulate(q)
    assert np.all(np.diff(running) >= 0)


def test_seminorm_exponent_rescaling_bound(grid512):
    # doubling the exponent rescales by at most max(d0^-deps, D^deps), with
    # d0 the grid spacing (the shortest admissible pair distance)
    f = sample(lambda z: np.cos(2 * z.real) + 1j * np.sin(z.imag), grid512)
    dom = Disc(0, 1.0)
    e1, e2 = 0.4, 0.8
    a = holder_seminorm(f, dom, e1, pairs=3000, seed=5).value
    b = holder_seminorm(f, dom, e2, pairs=3000, seed=5).value
    factor = max(grid512.spacing ** (e1 - e2), (2.0) ** (e2 - e1))
    assert b <= a * factor * 1.0000001


def test_geodesic_mode_seminorm():
    g = make_grid(0.0, 1.5, 128)
    f = sample(lambda z: z.real, g)
    est = holder_seminorm(f, Disc(0, 1.0), 1.0, pairs=1000, mode="geodesic", seed=0)
    # |Re z - Re w| <= d_geo(z, w): quotient bounded by 1 (up to snap noise)
    assert est.value <= 1.05
    assert est.distance_mode == "geodesic"


def test_geodesic_mode_never_exceeds_euclidean_on_cusp_domain():
    # d_geo >= d_euclid, so geodesic-mode quotients can only shrink; on the
    # peach the gap is real because pairs straddle the notch
    from qcmap.domains import Peach

    g = make_grid(0.1, 0.6, 128)
    f = sample(lambda z: np.abs(z) ** 0.5, g)
    eu = holder_seminorm(f, Peach(), 0.5, pairs=1200, mode="euclidean", seed=4, band=2 * g.spacing)
    ge = holder_seminorm(f, Peach(), 0.5, pairs=1200, mode="geodesic", seed=4, band=2 * g.spacing)
    assert ge.value <= eu.value * 1.0000001


def test_bilipschitz_identity(grid512):
    mu = BeltramiCoefficient(((Disc(0, 1.0), 0.0),))
    ev = MapEvaluator(neumann_solve(mu, grid512))
    rep = bilipschitz_constants(ev, Disc(0, 1.0), pairs=2000, seed=0)
    assert rep.lower == pytest.approx(1.0, rel=0.01)
    assert rep.upper == pytest.approx(1.0, rel=0.01)


def test_bilipschitz_half_disc(disc_evaluator_half):
    rep = bilipschitz_constants(disc_evaluator_half, Disc(0, 1.0), pairs=3000, seed=0)
    assert rep.upper <= 1.5 * 1.03
    assert rep.lower >= 0.5 * 0.97
    assert rep.lower <= rep.upper


def test_bilipschitz_swapped_pairs_invert(disc_evaluator_half, grid512):
    # measuring quotients on image pairs inverts the ratios exactly
    dom = Disc(0, 1.0)
    za, zb = sample_pairs(dom, grid512, 2000, 4 * grid512.spacing, seed=7)
    fw = np.abs(disc_evaluator_half.map_values(za) - disc_evaluator_half.map_values(zb)) / np.abs(za - zb)
    inv = np.abs(za - zb) / np.abs(disc_evaluator_half.map_values(za) - disc_evaluator_half.map_values(zb))
    assert np.min(fw) * np.max(inv) == pytest.approx(1.0, rel=1e-12)


def test_measured_exponent_identity(grid512):
    mu = BeltramiCoefficient(((Disc(0, 1.0), 0.0),))
    ev = MapEvaluator(neumann_solve(mu, grid512))
    assert measured_holder_exponent(ev, Disc(0, 1.0), pairs=5000, seed=0) == pytest.approx(1.0, abs=0.05)


def test_measured_exponent_lipschitz_map(disc_evaluator_half):
    expo = measured_holder_exponent(disc_evaluator_half, Disc(0, 1.0), pairs=5000, seed=0)
    assert expo == pytest.approx(1.0, abs=0.05)


def test_theorem1_defect_zero_field(grid256):
    zero = Field(grid256, np.zeros((256, 256), dtype=complex))
    d = theorem1_defect(zero, Disc(0, 1.0), 2)
    assert np.all(d.values == 0)


def test_theorem1_defect_linear(grid256):
    disc = Disc(0, 1.0)
    f = indicator(disc, grid256, "spectral")
    g = Field(grid256, f.values * np.exp(1j * 0.3))
    a = theorem1_defect(f, disc, 2).values
    b = theorem1_defect(g, disc, 2).values
    assert np.allclose(b, a * np.exp(1j * 0.3), atol=1e-12)


def test_theorem1_disc_small_defect(grid256):
    disc = Disc(0, 1.0)
    f = indicator(disc, grid256, "spectral")
    mask = np.abs(grid256.nodes()) < 0.75
    for n in (2, 4):
        d = theorem1_defect(f, disc, n, pad=4)
        assert np.max(np.abs(d.values[mask])) <= 0.03


def test_theorem1_ellipse_nonzero_and_stable():
    # non-disc: K_2 is a genuine nonzero smoothing operator; its image has a
    # bounded Hoelder seminorm across refinements
    ell = ellipse(1.0, 0.35, m=512)
    sups, sems = [], []
    for n in (128, 256):
        g = make_grid(0.0, 4.0, n)
        f = indicator(ell, g, "spectral")
        d = theorem1_defect(f, ell, 2, pad=6)
        mask = interior_mask(ell, g, 4 * g.spacing)
        sups.append(float(np.max(np.abs(d.values[mask]))))
        sems.append(holder_seminorm(d, ell, 0.5, pairs=4000, seed=0).value)
    g = make_grid(0.0, 4.0, 256)
    fd = indicator(Disc(0, 0.592), g, "spectral")  # matched area
    dd = theorem1_defect(fd, Disc(0, 0.592), 2, pad=6)
    md = interior_mask(Disc(0, 0.592), g, 4 * g.spacing)
    disc_ref = float(np.max(np.abs(dd.values[md])))
    assert sups[1] >= 5.0 * disc_ref  # genuinely nonzero vs the disc identity
    assert 0.4 <= sems[1] / sems[0] <= 2.5  # seminorm bounded across refinement


def test_cancellation_defect_disc(grid256):
    assert cancellation_defect(Disc(0, 1.0), grid256, 1, pad=2) <= 0.03
    with pytest.raises(ValueError):
        cancellation_defect(Disc(0, 1.0), grid256, 0)


def test_cancellation_translation_invariance(grid256):
    a = cancellation_defect(Disc(0, 1.0), grid256, 1, pad=2)
    b = cancellation_defect(Disc(0.5 + 0.5j, 0.7), grid256, 1, pad=2)
    assert b <= 0.03
    assert abs(a - b) <= 0.03


def test_cancellation_scale_invariance(grid256):
    a = cancellation_defect(Disc(0, 1.0), grid256, 1, pad=2)
    b = cancellation_defect(Disc(0, 0.5), grid256, 1, pad=2)
    assert abs(a - b) <= 0.03


def test_cancellation_square_not_decaying():
    vals = []
    for n in (256, 512):
        g = make_grid(0.0, 8.0, n)
        vals.append(cancellation_defect(Square(0, 2.0), g, 1, pad=2))
    assert all(v > 0.1 for v in vals)
    assert vals[1] >= 0.9 * vals[0]  # corner singularity: no decay under refinement


def test_cusp_pair_quotients_linear():
    ys = [0.05, 0.1, 0.15, 0.2]
    quots = cusp_pair_quotients(ys)
    ratios = [q / y for y, q in quots]
    assert max(ratios) / min(ratios) <= 1.2
    # the absolute scale is the closed form's second derivative: ~ 12 y
    assert ratios[0] == pytest.approx(12.0, rel=0.1)


def test_cusp_seminorm_growth_small():
    # the sampled closed form is not in Lip(0.75) on the ambient disc: the
    # estimate grows at least 2x per refinement doubling
    dom = Disc(0, 2.0)
    vals = []
    for n in (128, 256, 512):
        g0 = make_grid(0.0, 4.0, n)
        g = make_grid(0.5 * g0.spacing * (1 + 1j), 4.0, n)
        f = sample(qcmap.drop_example_oracle, g)
        vals.append(holder_seminorm(f, dom, 0.75, pairs=max(1000, n * n // 8), seed=0).value)
    assert vals[1] >= 2.0 * vals[0]
    assert vals[2] >= 2.0 * vals[1]


def test_seminorm_quotient_bounded_on_true_domain():
    # restricted to the cusp domain itself the closed form is Lipschitz: the
    # 0.75-seminorm stays bounded under refinement (contrast with the ambient
    # disc where the removed-disc poles dominate)
    dom = DiscMinusTwoDiscs()
    vals = []
    for n in (256, 512):
        g0 = make_grid(0.0, 4.0, n)
        g = make_grid(0.5 * g0.spacing * (1 + 1j), 4.0, n)
        f = sample(qcmap.drop_example_oracle, g)
        vals.append(holder_seminorm(f, dom, 0.75, pairs=max(1000, n * n // 8), seed=0).value)
    assert vals[1] <= 1.5 * vals[0]
