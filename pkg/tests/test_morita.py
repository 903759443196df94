import numpy as np
import pytest

from discgrp import intertwiners, morita
from discgrp.disc_group import DiscAutomorphism, compose, random_automorphism
from discgrp.linalg import operator_norm
from discgrp.morita import (
    RankZeroError,
    build_morita,
    functor_F,
    functor_G,
    induced_rep,
    is_target_intertwiner,
    naturality_defect,
    target_space_basis,
    transport,
    untransport,
)

RANKS = {"v1": 2, "v2": 1}


def test_context_dimensions(two_ctx):
    m = build_morita(two_ctx, RANKS)
    assert m.dim_XH == 2 * 2 + 1 * 1
    # e1 block is k_v1 x m_v1 amplified, e2 block k_v2 x m_v1
    assert m.dim_EXH == 2 * 2 + 1 * 2
    assert m.w_permutation == list(range(m.w_dim))
    with pytest.raises(RankZeroError):
        build_morita(two_ctx, {"v1": 0, "v2": 1})


def test_induced_rep_is_homomorphism(two_ctx, rng):
    m = build_morita(two_ctx, RANKS)
    a = {"v1": 2.0 + 1j, "v2": -3.0}
    b = {"v1": 0.5, "v2": 4j}
    ab = {v: a[v] * b[v] for v in a}
    np.testing.assert_allclose(
        induced_rep(m, a) @ induced_rep(m, b), induced_rep(m, ab), atol=1e-12
    )


def test_transport_isometry_and_inverse(two_ctx, rng):
    m = build_morita(two_ctx, RANKS)
    for _ in range(100):
        eta = intertwiners.sample_disc(two_ctx, rng, 0.9)
        tr = transport(m, eta)
        assert abs(operator_norm(tr) - operator_norm(eta)) < 1e-10
        assert is_target_intertwiner(m, tr)
        np.testing.assert_allclose(untransport(m, tr), eta, atol=1e-12)


def test_trivial_ranks_transport_is_identity(two_ctx, rng):
    m = build_morita(two_ctx, {"v1": 1, "v2": 1})
    eta = intertwiners.sample_disc(two_ctx, rng, 0.8)
    np.testing.assert_allclose(transport(m, eta), eta, atol=1e-15)


def test_transported_basis_spans_target(two_ctx, cycle_ctx):
    for ctx in (two_ctx, cycle_ctx):
        m = build_morita(ctx, RANKS)
        src = intertwiners.basis(ctx)
        tgt = target_space_basis(m)
        assert len(tgt) == len(src)
        images = np.column_stack([transport(m, b).ravel() for b in src])
        assert np.linalg.matrix_rank(images, tol=1e-8) == len(tgt)
        for b in tgt:
            x, *_ = np.linalg.lstsq(images, b.ravel(), rcond=None)
            assert np.linalg.norm(images @ x - b.ravel()) < 1e-8


def test_is_target_intertwiner_negative(two_ctx):
    m = build_morita(two_ctx, RANKS)
    bad = np.zeros((m.dim_XH, m.dim_EXH), dtype=complex)
    # a lone matrix unit inside the amplified loop block breaks the
    # commutation with the full matrix algebra at v1
    bad[0, 0] = 1.0
    assert not is_target_intertwiner(m, bad)
    with pytest.raises(ValueError):
        is_target_intertwiner(m, np.zeros((2, 2)))


def test_functor_laws(two_ctx, rng):
    m = build_morita(two_ctx, RANKS)
    for _ in range(30):
        g = random_automorphism(two_ctx, rng, 0.5)
        h = random_automorphism(two_ctx, rng, 0.5)
        eta = intertwiners.sample_disc(two_ctx, rng, 0.5)
        teta = transport(m, eta)
        Fg, Fh = functor_F(m, g), functor_F(m, h)
        Fgh = functor_F(m, compose(g, h))
        ident = functor_F(m, DiscAutomorphism.identity(two_ctx))
        assert operator_norm(ident.apply(teta) - teta) < 1e-9
        assert operator_norm(Fgh.apply(teta) - Fg.apply(Fh.apply(teta))) < 1e-9
        # the reverse functor undoes the transport
        assert operator_norm(functor_G(m, Fg).apply(eta) - g.apply(eta)) < 1e-9


def test_naturality_squares(two_ctx, rng):
    m = build_morita(two_ctx, RANKS)
    for _ in range(30):
        g = random_automorphism(two_ctx, rng, 0.5)
        eta = intertwiners.sample_disc(two_ctx, rng, 0.5)
        eps_res, lam_res = naturality_defect(m, g, eta)
        assert eps_res < 1e-9
        assert lam_res < 1e-9
