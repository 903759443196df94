"""Seeded verification suites run by the CLI.

Each suite exercises one family of identities on a user-supplied instance
and reports the worst residual seen, together with reproducer data for any
failure.  Suites derive their randomness from the run seed and the suite
name, so equal configurations produce equal residual tables.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field

import numpy as np

from . import disc_group, hardy_eval, intertwiners, matrix_rep, morita
from .correspondence import CorrespondenceContext, algebra_basis
from .disc_group import (
    AdmissibleIsometry,
    DiscAutomorphism,
    HypothesesNotMetError,
    admissibility_defect,
    commutator_defect,
    compose,
    moebius_apply,
    noncommuting_witness,
    normality_witness,
    preservation_defect,
    random_automorphism,
)
from .linalg import DEFAULT_TOL, Tolerance, operator_norm


class SuiteHypothesesNotMetError(ValueError):
    pass


@dataclass
class SuiteResult:
    name: str
    checks: int = 0
    max_residual: float = 0.0
    passed: bool = True
    status: str = "pass"
    seconds: float = 0.0
    witnesses: dict = field(default_factory=dict)
    failures: list = field(default_factory=list)

    def record(self, label: str, residual: float, bound: float, reproducer=None):
        self.checks += 1
        self.max_residual = max(self.max_residual, residual)
        if residual > bound:
            self.passed = False
            self.status = "fail"
            self.failures.append(
                {
                    "check": label,
                    "residual": residual,
                    "bound": bound,
                    "reproducer": reproducer,
                }
            )

    def require(self, label: str, ok: bool, reproducer=None):
        self.checks += 1
        if not ok:
            self.passed = False
            self.status = "fail"
            self.failures.append({"check": label, "reproducer": reproducer})

    def to_json(self) -> dict:
        return {
            "suite": self.name,
            "checks": self.checks,
            "max_residual": self.max_residual,
            "status": self.status,
            "seconds": round(self.seconds, 4),
            "witnesses": self.witnesses,
            "failures": self.failures,
        }


def _rng(seed: int, tag: str) -> np.random.Generator:
    return np.random.default_rng([seed, sum(map(ord, tag))])


def _scalar_grid(n: int = 20, cap: float = 0.9) -> list[complex]:
    # deterministic complex grid filling the disc of radius cap
    return [
        cap * ((k + 1) / n) * np.exp(2j * np.pi * (7 * k / n)) for k in range(n)
    ]


def suite_moebius(
    ctx: CorrespondenceContext, seed: int, tol: Tolerance, trials: int
) -> SuiteResult:
    res = SuiteResult("moebius")
    t0 = time.perf_counter()
    rng = _rng(seed, "moebius")
    if not ctx.graph.edges:
        res.status = "hypotheses_not_met"
        res.passed = False
        res.seconds = time.perf_counter() - t0
        return res
    for k in range(trials):
        gs = intertwiners.sample_disc(ctx, rng, 0.6, tol)
        es = intertwiners.sample_disc(ctx, rng, 0.6, tol)
        out = moebius_apply(gs, es, tol)
        res.record(
            "involution",
            operator_norm(moebius_apply(gs, out, tol) - es),
            1e-9,
            {"trial": k},
        )
        res.record("fixes_zero_to_gamma", operator_norm(moebius_apply(gs, 0 * es, tol) - gs), 1e-9)
        res.record("fixes_gamma_to_zero", operator_norm(moebius_apply(gs, gs, tol)), 1e-9)
        # homogeneity: g_eta . g_gamma maps gamma* to eta*
        res.record(
            "homogeneity",
            operator_norm(moebius_apply(es, moebius_apply(gs, gs, tol), tol) - es),
            1e-9,
        )
        res.require(
            "closure_pattern", intertwiners.is_intertwiner(ctx, out, tol), {"trial": k}
        )
        res.require("closure_norm", operator_norm(out) < 1.0, {"trial": k})
    if ctx.dim_H == 1 and ctx.dim_EH == 1:
        for g in _scalar_grid():
            for z in _scalar_grid():
                got = moebius_apply(np.array([[g]]), np.array([[z]]), tol)[0, 0]
                want = (g - z) / (1 - z * np.conj(g))
                res.record("scalar_oracle", abs(got - want), 1e-12)
    res.seconds = time.perf_counter() - t0
    return res


def suite_matrixrep(
    ctx: CorrespondenceContext, seed: int, tol: Tolerance, trials: int
) -> SuiteResult:
    res = SuiteResult("matrixrep")
    t0 = time.perf_counter()
    rng = _rng(seed, "matrixrep")
    if not ctx.graph.edges:
        res.status = "hypotheses_not_met"
        res.passed = False
        res.seconds = time.perf_counter() - t0
        return res
    for k in range(trials):
        g = random_automorphism(ctx, rng, 0.6, tol)
        f = random_automorphism(ctx, rng, 0.6, tol)
        eta = intertwiners.sample_disc(ctx, rng, 0.6, tol)
        T = matrix_rep.rep_matrix(g, tol)
        p = matrix_rep.act(matrix_rep.homogeneous(ctx, eta), T, tol)
        res.record(
            "action_matches_map",
            operator_norm(p.eta_star - g.apply(eta, tol)),
            1e-9,
            {"trial": k},
        )
        # representative independence
        C = np.zeros((ctx.dim_H, ctx.dim_H), dtype=complex)
        for v in ctx.graph.vertices:
            s = ctx.vertex_slice(v)
            m = ctx.mult[v]
            blk = rng.standard_normal((m, m)) + 1j * rng.standard_normal((m, m))
            C[s, s] = blk + 2 * m * np.eye(m)
        q = matrix_rep.act(matrix_rep.PPoint(C, C @ eta), T, tol)
        res.record(
            "representative_independence", operator_norm(q.eta_star - p.eta_star), 1e-9
        )
        # homomorphism law, extensionally and as classes
        h = compose(g, f, tol)
        prod = matrix_rep.op_product(
            matrix_rep.rep_class(g, tol), matrix_rep.rep_class(f, tol)
        )
        res.record(
            "homomorphism_action",
            operator_norm(
                matrix_rep.act(matrix_rep.homogeneous(ctx, eta), prod.rep, tol).eta_star
                - h.apply(eta, tol)
            ),
            1e-9,
        )
        if k < 10:
            res.require(
                "homomorphism_class",
                matrix_rep.rep_equal(prod, matrix_rep.rep_class(h, tol), tol),
                {"trial": k},
            )
            res.require(
                "injectivity",
                not matrix_rep.rep_equal(
                    matrix_rep.rep_class(g, tol), matrix_rep.rep_class(f, tol), tol
                ),
                {"trial": k},
            )
            inv = matrix_rep.rep_inverse(matrix_rep.rep_class(g, tol), tol)
            res.require(
                "class_inverse",
                matrix_rep.rep_equal(
                    matrix_rep.op_product(matrix_rep.rep_class(g, tol), inv),
                    matrix_rep.identity_class(ctx),
                    tol,
                ),
                {"trial": k},
            )
        # decomposition round trip (unique decomposition)
        back = disc_group.canonical_from_blocks(ctx, T.matrix, tol)
        res.record(
            "decomposition_gamma",
            operator_norm(back.gamma_star - g.gamma_star),
            1e-9,
        )
        res.record(
            "decomposition_omega",
            disc_group.omega_distance(ctx, back.omega, g.omega),
            1e-9,
        )
    res.seconds = time.perf_counter() - t0
    return res


def suite_pseudo(
    ctx: CorrespondenceContext, seed: int, tol: Tolerance, trials: int
) -> SuiteResult:
    res = SuiteResult("pseudo")
    t0 = time.perf_counter()
    rng = _rng(seed, "pseudo")
    k = matrix_rep.kappa(ctx)
    res.record(
        "kappa_squared",
        operator_norm(k @ k - np.eye(ctx.dim_H + ctx.dim_EH)),
        1e-12,
    )
    if not ctx.graph.edges:
        res.seconds = time.perf_counter() - t0
        return res
    for i in range(trials):
        g = random_automorphism(ctx, rng, tol.radius_cap, tol)
        T = matrix_rep.rep_matrix(g, tol)
        res.record(
            "pseudo_unitary", matrix_rep.pseudo_unitary_defect(T), 1e-9, {"trial": i}
        )
        ids = matrix_rep.neumann_identities_defect(g.gamma_star, tol)
        for j, r in enumerate(ids):
            res.record(f"identity_{j + 1}", r, 1e-10, {"trial": i})
        if i == 0:
            bad = T.matrix.copy()
            bad[: ctx.dim_H, : ctx.dim_H] *= 2.0
            defect = matrix_rep.pseudo_unitary_defect(matrix_rep.RepMatrix(ctx, bad))
            res.require("corrupted_rejected", defect > 1e-3, {"trial": i})
            series = matrix_rep.neumann_series_cross_check(
                0.6 * g.gamma_star / max(operator_norm(g.gamma_star), 1e-15)
            )
            res.record("series_cross_check", max(series), 1e-8)
    res.seconds = time.perf_counter() - t0
    return res


def suite_center(
    ctx: CorrespondenceContext, seed: int, tol: Tolerance, trials: int
) -> SuiteResult:
    res = SuiteResult("center")
    t0 = time.perf_counter()
    rng = _rng(seed, "center")
    cb = intertwiners.center_basis(ctx, tol)
    res.witnesses["center_dimension"] = len(cb)
    loops = {e.name for e in ctx.graph.loops()}
    for b in cb:
        res.require("center_is_intertwiner", intertwiners.is_intertwiner(ctx, b, tol))
        # structural cross-check: support on loops, blocks multiples of I
        for e in ctx.graph.edges:
            blk = b[ctx.vertex_slice(e.rng), ctx.edge_slice(e.name)]
            if e.name not in loops:
                res.record("center_loop_support", operator_norm(blk), 1e-9)
            else:
                m = blk.shape[0]
                scalar = np.trace(blk) / m
                res.record(
                    "center_scalar_blocks",
                    operator_norm(blk - scalar * np.eye(m)),
                    1e-9,
                )
    if not loops:
        res.require("loop_free_center_trivial", len(cb) == 0)
    if ctx.graph.edges:
        for k in range(trials):
            g = random_automorphism(ctx, rng, 0.6, tol)
            try:
                h = noncommuting_witness(g, rng, tol)
            except disc_group.GIsIdentityError:
                res.require("witness_exists", False, {"trial": k})
                continue
            if operator_norm(g.gamma_star) > tol.abs_tol:
                point = g.gamma_star
            else:
                point = h.gamma_star
            res.require(
                "witness_certified",
                commutator_defect(g, h, point, tol) > 1e-6,
                {"trial": k},
            )
    res.seconds = time.perf_counter() - t0
    return res


def suite_isometry(
    ctx: CorrespondenceContext, seed: int, tol: Tolerance, trials: int
) -> SuiteResult:
    if ctx.graph.has_sources:
        raise SuiteHypothesesNotMetError(
            f"graph has source vertices {ctx.graph.source_vertices()}; the "
            "isometry structure theorem assumes a graph without sources"
        )
    res = SuiteResult("isometry")
    t0 = time.perf_counter()
    rng = _rng(seed, "isometry")
    for k in range(trials):
        w = AdmissibleIsometry.random(ctx, rng)
        res.record("admissibility", admissibility_defect(ctx, w.u, w.vstar), 1e-10)
        res.record("preserves_pattern", preservation_defect(ctx, w.u, w.vstar), 1e-10)
        eta = intertwiners.sample_disc(ctx, rng, 0.9, tol)
        res.record(
            "norm_preserved",
            abs(operator_norm(w.apply(eta)) - operator_norm(eta)),
            1e-10,
            {"trial": k},
        )
    # every single-block structure violation is detected
    w = AdmissibleIsometry.random(ctx, rng)
    edges = list(ctx.graph.edges)
    for i, ei in enumerate(edges):
        for ej in edges:
            bad = w.vstar.copy()
            si, sj = ctx.edge_slice(ei.name), ctx.edge_slice(ej.name)
            bad[si.start, sj.start] += 0.5
            detected = (
                admissibility_defect(ctx, w.u, bad) > 1e-3
                or preservation_defect(ctx, w.u, bad) > 1e-3
            )
            res.require("violation_detected", detected, {"blocks": [ei.name, ej.name]})
    res.seconds = time.perf_counter() - t0
    return res


def suite_normality(
    ctx: CorrespondenceContext, seed: int, tol: Tolerance, trials: int
) -> SuiteResult:
    res = SuiteResult("normality")
    t0 = time.perf_counter()
    rng = _rng(seed, "normality")
    try:
        w = normality_witness(ctx, rng, tol)
    except HypothesesNotMetError as exc:
        raise SuiteHypothesesNotMetError(str(exc)) from exc
    if w is None:
        res.require("witness_search", False, {"note": "inconclusive within cap"})
        res.seconds = time.perf_counter() - t0
        return res
    res.witnesses["kind"] = w.kind
    res.witnesses["certificate"] = w.certificate
    res.witnesses["gamma_star"] = intertwiners.to_blocks_json(ctx, w.gamma_star)
    res.require("certificate_margin", w.certificate > 1e-3)
    res.record(
        "omega_admissible", admissibility_defect(ctx, w.omega.u, w.omega.vstar), 1e-9
    )
    if w.kind == "center_breaking":
        cb = intertwiners.center_basis(ctx, tol)
        res.record(
            "gamma_central",
            intertwiners.distance_to_span(w.gamma_star, cb),
            1e-9,
        )
        res.require(
            "moved_off_center",
            intertwiners.distance_to_span(w.omega.apply(w.gamma_star), cb) > 1e-3,
        )
        # the conjugated Moebius map is no longer Hardy-implementing
        g = DiscAutomorphism.moebius(ctx, w.gamma_star)
        conj = disc_group.canonical_decomposition(
            ctx,
            [
                DiscAutomorphism.from_isometry(w.omega),
                g,
                DiscAutomorphism.from_isometry(w.omega.inverse()),
            ],
            tol,
        )
        res.require(
            "conjugate_escapes_subgroup",
            not disc_group.implements_hardy_automorphism(ctx, conj, tol),
        )
        res.require(
            "original_in_subgroup",
            disc_group.implements_hardy_automorphism(ctx, g, tol),
        )
    else:
        res.require(
            "moebius_conjugation_moves_zero",
            operator_norm(moebius_apply(w.gamma_star, -w.gamma_star, tol)) > 1e-3,
        )
    res.seconds = time.perf_counter() - t0
    return res


def _morita_checks(
    res: SuiteResult,
    ctx: CorrespondenceContext,
    ranks: dict,
    rng: np.random.Generator,
    tol: Tolerance,
    trials: int,
) -> None:
    mctx = morita.build_morita(ctx, ranks)
    tag = {"ranks": dict(ranks)}
    for k in range(trials):
        eta = intertwiners.sample_disc(ctx, rng, 0.9, tol)
        tr = morita.transport(mctx, eta)
        res.record(
            "transport_isometry",
            abs(operator_norm(tr) - operator_norm(eta)),
            1e-10,
            tag,
        )
        res.require(
            "transport_intertwines", morita.is_target_intertwiner(mctx, tr, tol), tag
        )
        res.record(
            "round_trip", operator_norm(morita.untransport(mctx, tr) - eta), 1e-10, tag
        )
    src_basis = intertwiners.basis(ctx)
    tgt_basis = morita.target_space_basis(mctx, tol)
    res.require("span_dimension", len(tgt_basis) == len(src_basis), tag)
    if src_basis:
        images = np.column_stack(
            [morita.transport(mctx, b).ravel() for b in src_basis]
        )
        rank = np.linalg.matrix_rank(images, tol=1e-8)
        res.require("transported_basis_rank", rank == len(tgt_basis), tag)
        for b in tgt_basis:
            x, *_ = np.linalg.lstsq(images, b.ravel(), rcond=None)
            res.record(
                "span_coverage",
                float(np.linalg.norm(images @ x - b.ravel())),
                1e-8,
                tag,
            )
    # functor laws and naturality, extensionally
    for k in range(max(1, trials // 2)):
        g = random_automorphism(ctx, rng, 0.5, tol)
        h = random_automorphism(ctx, rng, 0.5, tol)
        eta = intertwiners.sample_disc(ctx, rng, 0.5, tol)
        teta = morita.transport(mctx, eta)
        Fg, Fh = morita.functor_F(mctx, g), morita.functor_F(mctx, h)
        Fgh = morita.functor_F(mctx, compose(g, h, tol))
        res.record(
            "functor_identity",
            operator_norm(
                morita.functor_F(mctx, DiscAutomorphism.identity(ctx)).apply(teta, tol)
                - teta
            ),
            1e-9,
            tag,
        )
        res.record(
            "functor_composition",
            operator_norm(Fgh.apply(teta, tol) - Fg.apply(Fh.apply(teta, tol), tol)),
            1e-9,
            tag,
        )
        res.record(
            "inverse_functor",
            operator_norm(
                morita.functor_G(mctx, Fg).apply(eta, tol) - g.apply(eta, tol)
            ),
            1e-9,
            tag,
        )
        Gg = morita.functor_G(mctx, Fg)
        Gh = morita.functor_G(mctx, Fh)
        Ggh = morita.functor_G(mctx, Fgh)
        res.record(
            "reverse_functor_composition",
            operator_norm(
                Ggh.apply(eta, tol) - Gg.apply(Gh.apply(eta, tol), tol)
            ),
            1e-9,
            tag,
        )
        eps_res, lam_res = morita.naturality_defect(mctx, g, eta, tol)
        res.record("naturality_unit", eps_res, 1e-9, tag)
        res.record("naturality_counit", lam_res, 1e-9, tag)


def suite_morita(
    ctx: CorrespondenceContext,
    seed: int,
    tol: Tolerance,
    trials: int,
    ranks: dict | None = None,
) -> SuiteResult:
    res = SuiteResult("morita")
    t0 = time.perf_counter()
    rng = _rng(seed, "morita")
    if not ctx.graph.edges:
        res.status = "hypotheses_not_met"
        res.passed = False
        res.seconds = time.perf_counter() - t0
        return res
    trivial = {v: 1 for v in ctx.graph.vertices}
    _morita_checks(res, ctx, trivial, rng, tol, trials)
    if ranks is None:
        ranks = dict(trivial)
        ranks[ctx.graph.vertices[0]] = 2
    if ranks != trivial:
        _morita_checks(res, ctx, ranks, rng, tol, trials)
    res.seconds = time.perf_counter() - t0
    return res


def suite_eval(
    ctx: CorrespondenceContext, seed: int, tol: Tolerance, trials: int
) -> SuiteResult:
    res = SuiteResult("eval")
    t0 = time.perf_counter()
    rng = _rng(seed, "eval")

    def random_poly(max_deg: int) -> hardy_eval.TensorPolynomial:
        a = {
            v: complex(rng.standard_normal(), rng.standard_normal())
            for v in ctx.graph.vertices
        }
        p = hardy_eval.TensorPolynomial.algebra_term(ctx, a)
        edges = list(ctx.graph.edges)
        if edges:
            for _ in range(3):
                deg = int(rng.integers(1, max_deg + 1))
                word = tuple(
                    edges[int(rng.integers(len(edges)))].name for _ in range(deg)
                )
                c = complex(rng.standard_normal(), rng.standard_normal())
                p = p + hardy_eval.TensorPolynomial.word(ctx, word, c)
        return p

    for k in range(trials):
        p = random_poly(3)
        q = random_poly(3)
        if ctx.graph.edges:
            eta = intertwiners.sample_disc(ctx, rng, 0.9, tol)
        else:
            eta = np.zeros((ctx.dim_H, 0), dtype=complex)
        res.record(
            "multiplicative",
            operator_norm(
                hardy_eval.evaluate(p * q, eta)
                - hardy_eval.evaluate(p, eta) @ hardy_eval.evaluate(q, eta)
            ),
            1e-10,
            {"trial": k},
        )
        res.record(
            "linear",
            operator_norm(
                hardy_eval.evaluate(p + q, eta)
                - hardy_eval.evaluate(p, eta)
                - hardy_eval.evaluate(q, eta)
            ),
            1e-10,
        )
        # pullback along an automorphism stays a homomorphism
        if ctx.graph.edges and k < trials // 4:
            g = random_automorphism(ctx, rng, 0.5, tol)
            moved = g.apply(intertwiners.sample_disc(ctx, rng, 0.5, tol), tol)
            res.record(
                "pullback_multiplicative",
                operator_norm(
                    hardy_eval.evaluate(p * q, moved)
                    - hardy_eval.evaluate(p, moved) @ hardy_eval.evaluate(q, moved)
                ),
                1e-10,
            )
    if ctx.graph.edges:
        ft = hardy_eval.FockTruncation(ctx, 3)
        for k in range(5):
            a = {
                v: complex(rng.standard_normal(), rng.standard_normal())
                for v in ctx.graph.vertices
            }
            xi = {
                e.name: complex(rng.standard_normal(), rng.standard_normal())
                for e in ctx.graph.edges
            }
            phi_xi = {e: a[ctx.edge(e).rng] * c for e, c in xi.items()}
            res.record(
                "fock_covariance",
                operator_norm(
                    hardy_eval.phi_infty_matrix(ft, a)
                    @ hardy_eval.creation_matrix(ft, xi)
                    - hardy_eval.creation_matrix(ft, phi_xi)
                ),
                1e-12,
            )
    if ctx.dim_H == 1 and ctx.dim_EH == 1:
        e0 = ctx.graph.edges[0].name
        poly = hardy_eval.TensorPolynomial.word(ctx, (e0,))
        for z in _scalar_grid():
            got = hardy_eval.evaluate(poly, np.array([[z]]))[0, 0]
            res.record("scalar_multiplication", abs(got - z), 0.0)
    res.seconds = time.perf_counter() - t0
    return res


SUITES = {
    "moebius": suite_moebius,
    "matrixrep": suite_matrixrep,
    "pseudo": suite_pseudo,
    "center": suite_center,
    "isometry": suite_isometry,
    "normality": suite_normality,
    "morita": suite_morita,
    "eval": suite_eval,
}
