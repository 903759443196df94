import numpy as np
import pytest

from discgrp import intertwiners
from discgrp.correspondence import commutant_basis, lift_commutant
from discgrp.intertwiners import (
    ShapeMismatchError,
    basis,
    center_basis,
    center_of_E,
    distance_to_span,
    from_blocks_json,
    is_intertwiner,
    pattern,
    sample_disc,
    to_blocks_json,
)
from discgrp.linalg import DEFAULT_TOL, operator_norm


def test_pattern_dimension(scalar_ctx, two_ctx, big_ctx):
    assert pattern(scalar_ctx).dim == 1
    # e1: 2*2, e2: 1*2
    assert pattern(two_ctx).dim == 6
    assert len(basis(two_ctx)) == 6
    assert pattern(big_ctx).dim == sum(
        big_ctx.mult[e.rng] * big_ctx.mult[e.src] for e in big_ctx.graph.edges
    )


def test_basis_members_intertwine(two_ctx, big_ctx):
    for ctx in (two_ctx, big_ctx):
        for b in basis(ctx):
            assert is_intertwiner(ctx, b)


def test_off_pattern_matrix_rejected(two_ctx):
    M = np.zeros((two_ctx.dim_H, two_ctx.dim_EH), dtype=complex)
    # the (v2, e1) block must vanish since r(e1) = v1
    M[2, 0] = 1.0
    assert not is_intertwiner(two_ctx, M)
    with pytest.raises(ShapeMismatchError):
        is_intertwiner(two_ctx, np.zeros((2, 2)))


def test_sample_disc_properties(two_ctx):
    a = sample_disc(two_ctx, 7, 0.6)
    b = sample_disc(two_ctx, 7, 0.6)
    np.testing.assert_allclose(a, b)
    assert operator_norm(a) <= 0.6 + 1e-12
    assert is_intertwiner(two_ctx, a)
    with pytest.raises(ValueError):
        sample_disc(two_ctx, 7, 0.99)


def test_center_dimension(scalar_ctx, two_ctx, cycle_ctx, big_ctx):
    assert len(center_basis(scalar_ctx)) == 1
    assert len(center_basis(two_ctx)) == 1
    assert len(center_basis(cycle_ctx)) == 0
    # loops at v1 and v2 each contribute one central direction
    assert len(center_basis(big_ctx)) == 2


def test_center_structure(two_ctx):
    (c,) = center_basis(two_ctx)
    blk = c[two_ctx.vertex_slice("v1"), two_ctx.edge_slice("e1")]
    scalar = np.trace(blk) / 2
    np.testing.assert_allclose(blk, scalar * np.eye(2), atol=1e-12)
    np.testing.assert_allclose(
        c[:, two_ctx.edge_slice("e2")], 0.0, atol=1e-12
    )


def test_center_commutes_brute_force(two_ctx, rng):
    # independent oracle: direct commutation with random commutant elements
    (c,) = center_basis(two_ctx)
    units = commutant_basis(two_ctx)
    for _ in range(20):
        x = sum(complex(*rng.standard_normal(2)) * u for u in units)
        np.testing.assert_allclose(
            x @ c, c @ lift_commutant(two_ctx, x), atol=1e-10
        )
    # a generic intertwiner is not central
    eta = sample_disc(two_ctx, 3, 0.5)
    worst = max(
        operator_norm(u @ eta - eta @ lift_commutant(two_ctx, u)) for u in units
    )
    assert worst > 1e-3


def test_center_of_E(two_ctx, cycle_ctx):
    vecs = center_of_E(two_ctx)
    assert len(vecs) == 1
    np.testing.assert_allclose(vecs[0], [1.0, 0.0])
    assert center_of_E(cycle_ctx) == []


def test_distance_to_span():
    e1 = np.array([[1.0, 0.0]])
    e2 = np.array([[0.0, 1.0]])
    assert distance_to_span(e2, [e1]) == pytest.approx(1.0)
    assert distance_to_span(3 * e1, [e1]) == pytest.approx(0.0, abs=1e-12)
    assert distance_to_span(e1, []) == pytest.approx(1.0)


def test_blocks_json_roundtrip(two_ctx):
    eta = sample_disc(two_ctx, 11, 0.8)
    obj = to_blocks_json(two_ctx, eta)
    assert set(obj["blocks"]) == {"v1,e1", "v2,e2"}
    np.testing.assert_allclose(from_blocks_json(two_ctx, obj), eta, atol=1e-15)
