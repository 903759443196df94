"""Truncated Fock space, creation operators, and point evaluation of
tensor-algebra polynomials at points of the intertwiner ball.

A word of edge symbols is admissible when adjacent edges compose under the
left action, s(e_i) = r(e_{i+1}); non-composable words are the zero element
of the corresponding tensor power.  Evaluation at eta* sends a generator
T_xi to the operator h -> eta*(xi (x) h) on H and is defined directly on
words, so the Fock truncation matters only for the optional creation
matrices.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping

import numpy as np

from .correspondence import CorrespondenceContext, sigma_op
from .linalg import as_cmatrix


def _composable(ctx: CorrespondenceContext, word: tuple[str, ...]) -> bool:
    for a, b in zip(word, word[1:]):
        if ctx.edge(a).src != ctx.edge(b).rng:
            return False
    return True


class FockTruncation:
    """Tensor powers up to order N with edge-path bases.

    Level 0 is H itself; level n >= 1 decomposes over admissible paths
    (e_1, ..., e_n), each path carrying a copy of H_{s(e_n)}.
    """

    def __init__(self, ctx: CorrespondenceContext, order: int = 4):
        if order < 0:
            raise ValueError("truncation order must be nonnegative")
        self.ctx = ctx
        self.order = order
        self.level_paths: list[list[tuple[str, ...]]] = [[()]]
        for n in range(1, order + 1):
            prev = self.level_paths[n - 1]
            paths = []
            for e in ctx.graph.edges:
                for p in prev:
                    if not p or e.src == ctx.edge(p[0]).rng:
                        paths.append((e.name,) + p)
            self.level_paths.append(paths)

        self._offset: dict[tuple[int, tuple[str, ...]], int] = {}
        off = 0
        for n, paths in enumerate(self.level_paths):
            for p in paths:
                self._offset[(n, p)] = off
                off += self._block_dim(p)
        self.dim = off

    def _block_dim(self, path: tuple[str, ...]) -> int:
        if not path:
            return self.ctx.dim_H
        return self.ctx.mult[self.ctx.edge(path[-1]).src]

    def block_slice(self, n: int, path: tuple[str, ...]) -> slice:
        o = self._offset[(n, path)]
        return slice(o, o + self._block_dim(path))


def _edge_vector(ctx: CorrespondenceContext, xi) -> dict[str, complex]:
    if isinstance(xi, Mapping):
        return {e.name: complex(xi.get(e.name, 0)) for e in ctx.graph.edges}
    arr = np.asarray(xi, dtype=complex).ravel()
    return {e.name: arr[k] for k, e in enumerate(ctx.graph.edges)}


def creation_matrix(ft: FockTruncation, xi) -> np.ndarray:
    """Block shift T_xi on the truncated Fock space tensored with H.

    Sends the level-n summand into level n+1 by prepending an edge; the top
    level is truncated to zero.
    """
    ctx = ft.ctx
    coeffs = _edge_vector(ctx, xi)
    T = np.zeros((ft.dim, ft.dim), dtype=complex)
    for n in range(ft.order):
        for p in ft.level_paths[n]:
            src = ft.block_slice(n, p)
            for e in ctx.graph.edges:
                c = coeffs[e.name]
                if c == 0:
                    continue
                new = (e.name,) + p
                if not _composable(ctx, new[:2]) and p:
                    continue
                if p:
                    tgt = ft.block_slice(n + 1, new)
                    T[tgt, src] = c * np.eye(tgt.stop - tgt.start)
                else:
                    # level 0: H_v feeds the length-1 path (e,) iff s(e) = v
                    tgt = ft.block_slice(n + 1, (e.name,))
                    vs = ctx.vertex_slice(e.src)
                    T[tgt, vs] = c * np.eye(ctx.mult[e.src])
    return T


def phi_infty_matrix(ft: FockTruncation, a: Mapping[str, complex]) -> np.ndarray:
    """Left action of a on the truncated Fock space: sigma(a) on level 0 and
    a(r(e_1)) on each path block."""
    ctx = ft.ctx
    M = np.zeros((ft.dim, ft.dim), dtype=complex)
    M[ft.block_slice(0, ()), ft.block_slice(0, ())] = sigma_op(ctx, a)
    for n in range(1, ft.order + 1):
        for p in ft.level_paths[n]:
            s = ft.block_slice(n, p)
            M[s, s] = complex(a.get(ctx.edge(p[0]).rng, 0)) * np.eye(
                s.stop - s.start
            )
    return M


@dataclass
class TensorPolynomial:
    """Formal sum of an algebra term and coefficient-weighted edge words."""

    ctx: CorrespondenceContext
    algebra: dict[str, complex] = field(default_factory=dict)
    words: dict[tuple[str, ...], complex] = field(default_factory=dict)

    def __post_init__(self) -> None:
        cleaned = {}
        for w, c in self.words.items():
            for name in w:
                self.ctx.edge(name)
            if c != 0 and _composable(self.ctx, w):
                cleaned[w] = cleaned.get(w, 0) + complex(c)
        self.words = cleaned

    @property
    def degree(self) -> int:
        return max((len(w) for w in self.words), default=0)

    @classmethod
    def algebra_term(cls, ctx, a: Mapping[str, complex]) -> "TensorPolynomial":
        return cls(ctx, algebra=dict(a))

    @classmethod
    def word(cls, ctx, edges, coeff: complex = 1.0) -> "TensorPolynomial":
        return cls(ctx, words={tuple(edges): complex(coeff)})

    @classmethod
    def generator(cls, ctx, xi) -> "TensorPolynomial":
        """T_xi for an edge-coefficient vector xi."""
        coeffs = _edge_vector(ctx, xi)
        return cls(ctx, words={(e,): c for e, c in coeffs.items() if c != 0})

    def __add__(self, other: "TensorPolynomial") -> "TensorPolynomial":
        alg = dict(self.algebra)
        for v, c in other.algebra.items():
            alg[v] = alg.get(v, 0) + c
        words = dict(self.words)
        for w, c in other.words.items():
            words[w] = words.get(w, 0) + c
        return TensorPolynomial(self.ctx, alg, words)

    def __mul__(self, other: "TensorPolynomial") -> "TensorPolynomial":
        ctx = self.ctx
        alg: dict[str, complex] = {}
        words: dict[tuple[str, ...], complex] = {}

        def add_word(w, c):
            if c != 0:
                words[w] = words.get(w, 0) + c

        for v in ctx.graph.vertices:
            ca = self.algebra.get(v, 0)
            cb = other.algebra.get(v, 0)
            if ca and cb:
                alg[v] = complex(ca) * complex(cb)
        for w, c in other.words.items():
            # phi_infty(a) T_e1 ... = T_{phi(a) e1} ...
            a_val = self.algebra.get(ctx.edge(w[0]).rng, 0)
            add_word(w, complex(a_val) * c)
        for w, c in self.words.items():
            # ... T_en phi_infty(a) scales by a(s(e_n))
            a_val = other.algebra.get(ctx.edge(w[-1]).src, 0)
            add_word(w, c * complex(a_val))
        for w1, c1 in self.words.items():
            for w2, c2 in other.words.items():
                add_word(w1 + w2, c1 * c2)
        return TensorPolynomial(ctx, alg, words)

    def scaled(self, c: complex) -> "TensorPolynomial":
        return TensorPolynomial(
            self.ctx,
            {v: c * a for v, a in self.algebra.items()},
            {w: c * x for w, x in self.words.items()},
        )


def _edge_embedding(ctx: CorrespondenceContext, name: str) -> np.ndarray:
    """h -> delta_e (x) h as a matrix H -> E (x) H."""
    M = np.zeros((ctx.dim_EH, ctx.dim_H), dtype=complex)
    e = ctx.edge(name)
    M[ctx.edge_slice(name), ctx.vertex_slice(e.src)] = np.eye(ctx.mult[e.src])
    return M


def evaluate(poly: TensorPolynomial, eta_star) -> np.ndarray:
    """Homomorphic point evaluation at eta*: the algebra term maps to
    sigma(a) and each edge symbol to h -> eta*(delta_e (x) h)."""
    ctx = poly.ctx
    es = as_cmatrix(eta_star)
    ops = {e.name: es @ _edge_embedding(ctx, e.name) for e in ctx.graph.edges}
    out = sigma_op(ctx, poly.algebra)
    for w, c in poly.words.items():
        M = np.eye(ctx.dim_H, dtype=complex)
        for name in w:
            M = M @ ops[name]
        out = out + c * M
    return out


def parse_polynomial(ctx: CorrespondenceContext, text: str) -> TensorPolynomial:
    """Parse the term grammar, e.g. ``a{v1:1,v2:0} + (2+0i)*e1.e1.e2``.

    Terms are separated by top-level '+'.  An algebra term is
    ``a{vertex:value,...}``; a word term is edge names joined by '.', with an
    optional leading coefficient, parenthesized when complex (written with
    ``i``).
    """
    terms = []
    depth = 0
    cur = ""
    for ch in text:
        if ch in "({":
            depth += 1
        elif ch in ")}":
            depth -= 1
        if ch == "+" and depth == 0:
            terms.append(cur)
            cur = ""
        else:
            cur += ch
    terms.append(cur)

    poly = TensorPolynomial(ctx)
    for raw in terms:
        t = raw.strip()
        if not t:
            raise ValueError("empty term in polynomial")
        if t.startswith("a{"):
            if not t.endswith("}"):
                raise ValueError(f"malformed algebra term: {t!r}")
            a = {}
            body = t[2:-1].strip()
            if body:
                for pair in body.split(","):
                    v, val = pair.split(":")
                    a[v.strip()] = complex(val.strip().replace("i", "j"))
            poly = poly + TensorPolynomial.algebra_term(ctx, a)
            continue
        coeff = 1.0 + 0j
        if "*" in t:
            c_text, t = t.split("*", 1)
            c_text = c_text.strip()
            if c_text.startswith("(") and c_text.endswith(")"):
                c_text = c_text[1:-1]
            coeff = complex(c_text.replace("i", "j"))
        edges = tuple(part.strip() for part in t.strip().split("."))
        poly = poly + TensorPolynomial.word(ctx, edges, coeff)
    return poly
