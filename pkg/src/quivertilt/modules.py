"""Finite-dimensional left modules over a based algebra.

A module is stored by its total action: one dim-by-dim matrix per basis
element of the algebra.  Vertex-graded data (dimension vectors, arrow
matrices) is a front-end conversion on top of this.  All kernels,
images, quotients and pullbacks come with their structure maps and are
exact by construction.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Optional

from .algebras import Algebra, opposite_algebra
from .linalg import (
    Mat,
    Subspace,
    complement_in,
    image_basis,
    kernel_basis,
    quotient_maps,
    rank,
    solve,
)


class Module:
    __slots__ = ("algebra", "dim", "action", "_hash")

    def __init__(self, algebra: Algebra, dim: int, action: Iterable[Mat],
                 validate: bool = True):
        self.algebra = algebra
        self.dim = dim
        self.action = tuple(action)
        self._hash: Optional[int] = None
        if len(self.action) != algebra.dim:
            raise ValueError("need one action matrix per basis element")
        for m in self.action:
            if m.rows != dim or m.cols != dim or m.p != algebra.field.p:
                raise ValueError("action matrix has wrong shape or field")
        if validate:
            self.check()

    def check(self) -> None:
        alg = self.algebra
        p = alg.field.p
        ident = Mat.identity(p, self.dim)
        unit = Mat.zeros(p, self.dim, self.dim)
        for i, c in enumerate(alg.unit):
            if c:
                unit = unit + self.action[i].scale(c)
        if unit != ident:
            raise ValueError("unit does not act as the identity")
        for i in range(alg.dim):
            for j in range(alg.dim):
                prod = Mat.zeros(p, self.dim, self.dim)
                for k, c in alg.mult[i][j]:
                    prod = prod + self.action[k].scale(c)
                if self.action[i] @ self.action[j] != prod:
                    raise ValueError(
                        f"action is not multiplicative on "
                        f"({alg.labels[i]}, {alg.labels[j]})"
                    )

    @classmethod
    def zero(cls, algebra: Algebra) -> "Module":
        return cls(algebra, 0, [Mat.zeros(algebra.field.p, 0, 0)] * algebra.dim,
                   validate=False)

    def act(self, i: int) -> Mat:
        return self.action[i]

    def vertex_dims(self) -> tuple[int, ...]:
        """Rank of each designated idempotent on the module."""
        return tuple(rank(self.action[i]) for i in self.algebra.idem)

    def is_zero(self) -> bool:
        return self.dim == 0

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, Module)
            and self.algebra == other.algebra
            and self.dim == other.dim
            and self.action == other.action
        )

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.algebra, self.dim, self.action))
        return self._hash

    def __repr__(self) -> str:
        return f"Module(dim={self.dim}, vertex_dims={self.vertex_dims()})"


class ModuleMap:
    __slots__ = ("source", "target", "mat", "_hash")

    def __init__(self, source: Module, target: Module, mat: Mat,
                 validate: bool = True):
        if source.algebra != target.algebra:
            raise ValueError("maps need a common algebra")
        if mat.rows != target.dim or mat.cols != source.dim:
            raise ValueError("matrix shape does not match the modules")
        self.source = source
        self.target = target
        self.mat = mat
        self._hash: Optional[int] = None
        if validate:
            for i in range(source.algebra.dim):
                if mat @ source.action[i] != target.action[i] @ mat:
                    raise ValueError(
                        f"matrix does not intertwine "
                        f"{source.algebra.labels[i]}"
                    )

    @classmethod
    def zero(cls, source: Module, target: Module) -> "ModuleMap":
        return cls(source, target,
                   Mat.zeros(source.algebra.field.p, target.dim, source.dim),
                   validate=False)

    @classmethod
    def identity(cls, m: Module) -> "ModuleMap":
        return cls(m, m, Mat.identity(m.algebra.field.p, m.dim), validate=False)

    def compose(self, other: "ModuleMap") -> "ModuleMap":
        """self after other."""
        if other.target != self.source:
            raise ValueError("maps are not composable")
        return ModuleMap(other.source, self.target, self.mat @ other.mat,
                         validate=False)

    def __add__(self, other: "ModuleMap") -> "ModuleMap":
        if self.source != other.source or self.target != other.target:
            raise ValueError("maps with different ends")
        return ModuleMap(self.source, self.target, self.mat + other.mat,
                         validate=False)

    def scale(self, c: int) -> "ModuleMap":
        return ModuleMap(self.source, self.target, self.mat.scale(c),
                         validate=False)

    def is_zero(self) -> bool:
        return self.mat.is_zero()

    def is_injective(self) -> bool:
        return rank(self.mat) == self.source.dim

    def is_surjective(self) -> bool:
        return rank(self.mat) == self.target.dim

    def is_iso(self) -> bool:
        return (self.source.dim == self.target.dim
                and rank(self.mat) == self.source.dim)

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, ModuleMap)
            and self.source == other.source
            and self.target == other.target
            and self.mat == other.mat
        )

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.source, self.target, self.mat))
        return self._hash

    def __repr__(self) -> str:
        return f"ModuleMap({self.source.dim} -> {self.target.dim})"


# -- vertex-graded front end --

def presentation_arrows(alg: Algebra) -> tuple[int, ...]:
    """Radical basis elements that are not products of two radical ones."""
    composite = set()
    for i in alg.radical:
        for j in alg.radical:
            pairs = alg.mult[i][j]
            if not pairs:
                continue
            if len(pairs) != 1 or pairs[0][1] != 1:
                raise ValueError("enumeration needs a multiplicative basis")
            composite.add(pairs[0][0])
    return tuple(b for b in alg.radical if b not in composite)


@lru_cache(maxsize=None)
def _factorizations(alg: Algebra) -> dict[int, tuple[int, ...]]:
    """Unique factorization of each radical basis element into arrows."""
    arrows = presentation_arrows(alg)
    arrowset = set(arrows)

    def single(i: int, j: int) -> Optional[int]:
        pairs = alg.mult[i][j]
        if len(pairs) == 1 and pairs[0][1] == 1:
            return pairs[0][0]
        return None

    out: dict[int, tuple[int, ...]] = {}

    def ways(b: int) -> list[tuple[int, ...]]:
        if b in arrowset:
            return [(b,)]
        found = []
        for g in arrows:
            for b2 in alg.radical:
                if single(g, b2) == b:
                    found.extend((g,) + w for w in ways(b2))
        return found

    for b in alg.radical:
        w = ways(b)
        if len(w) != 1:
            raise ValueError(
                f"basis element {alg.labels[b]} has {len(w)} arrow "
                "factorizations; enumeration needs exactly one"
            )
        out[b] = w[0]
    return out


def module_from_vertex_data(alg: Algebra, dims: Iterable[int],
                            arrow_mats: dict[int, Mat],
                            validate: bool = True) -> Module:
    """Assemble a module from per-idempotent dimensions and arrow blocks.

    Args:
        alg: the algebra.
        dims: dimension at each designated idempotent, in order.
        arrow_mats: for each presentation arrow (basis index), the block
            matrix of shape dims[target] x dims[source].
    """
    dims = tuple(dims)
    if len(dims) != len(alg.idem):
        raise ValueError("need one dimension per idempotent")
    p = alg.field.p
    total = sum(dims)
    off = [0]
    for d in dims:
        off.append(off[-1] + d)

    def embed(b: int, block: Mat) -> Mat:
        s, t = alg.endpoints[b]
        data = [0] * (total * total)
        for i in range(block.rows):
            for j in range(block.cols):
                data[(off[t] + i) * total + (off[s] + j)] = block.entry(i, j)
        return Mat(p, total, total, data)

    action: list[Optional[Mat]] = [None] * alg.dim
    for pos, b in enumerate(alg.idem):
        data = [0] * (total * total)
        for i in range(off[pos], off[pos + 1]):
            data[i * total + i] = 1
        action[b] = Mat(p, total, total, data)
    arrows = presentation_arrows(alg)
    for b in arrows:
        s, t = alg.endpoints[b]
        block = arrow_mats.get(b)
        if block is None:
            block = Mat.zeros(p, dims[t], dims[s])
        if block.rows != dims[t] or block.cols != dims[s]:
            raise ValueError(f"arrow {alg.labels[b]} block has wrong shape")
        action[b] = embed(b, block)
    for b, word in _factorizations(alg).items():
        if action[b] is not None:
            continue
        m = action[word[0]]
        for g in word[1:]:
            m = m @ action[g]
        action[b] = m
    return Module(alg, total, action, validate=validate)


def arrow_blocks(m: Module) -> tuple[tuple[int, ...], dict[int, Mat]]:
    """Inverse of the front-end conversion, in idempotent-adapted
    coordinates; only valid for modules built by module_from_vertex_data."""
    alg = m.algebra
    dims = m.vertex_dims()
    off = [0]
    for d in dims:
        off.append(off[-1] + d)
    blocks = {}
    for b in presentation_arrows(alg):
        s, t = alg.endpoints[b]
        rows = []
        for i in range(off[t], off[t + 1]):
            rows.append(tuple(m.action[b].entry(i, j)
                              for j in range(off[s], off[s + 1])))
        blocks[b] = Mat.from_rows(alg.field.p, rows, cols=dims[s])
    return dims, blocks


# -- hom spaces --

@lru_cache(maxsize=None)
def _hom_basis_cached(m: Module, n: Module) -> tuple[ModuleMap, ...]:
    alg = m.algebra
    p = alg.field.p
    nm = n.dim * m.dim
    if nm == 0:
        return ()
    rows = []
    for t in range(alg.dim):
        rm = m.action[t]
        rn = n.action[t]
        # Entry (i, j) of X @ rm - rn @ X as a functional in X.
        for i in range(n.dim):
            for j in range(m.dim):
                row = [0] * nm
                for b in range(m.dim):
                    row[i * m.dim + b] = (row[i * m.dim + b]
                                          + rm.entry(b, j)) % p
                for a in range(n.dim):
                    row[a * m.dim + j] = (row[a * m.dim + j]
                                          - rn.entry(i, a)) % p
                rows.append(row)
    ker = kernel_basis(Mat.from_rows(p, rows, cols=nm))
    out = []
    for i in range(ker.dim):
        out.append(ModuleMap(m, n, Mat(p, n.dim, m.dim, ker.basis.row(i)),
                             validate=False))
    return tuple(out)


def hom_basis(m: Module, n: Module) -> list[ModuleMap]:
    """Basis of the space of module maps m -> n, in canonical order."""
    if m.algebra != n.algebra:
        raise ValueError("modules over different algebras")
    return list(_hom_basis_cached(m, n))


def hom_dim(m: Module, n: Module) -> int:
    return len(hom_basis(m, n))


# -- exact constructions --

def submodule_from_subspace(m: Module, s: Subspace) -> tuple[Module, ModuleMap]:
    """The submodule on an action-stable subspace, with its inclusion."""
    incl = s.basis.transpose()
    action = []
    for b in range(m.algebra.dim):
        restr = solve(incl, m.action[b] @ incl)
        if restr is None or incl @ restr != m.action[b] @ incl:
            raise ValueError("subspace is not action-stable")
        action.append(restr)
    sub = Module(m.algebra, s.dim, action, validate=False)
    return sub, ModuleMap(sub, m, incl, validate=False)


def quotient_by_subspace(m: Module, s: Subspace) -> tuple[Module, ModuleMap]:
    """The quotient module by an action-stable subspace, with projection."""
    proj, sect = quotient_maps(s)
    action = []
    for b in range(m.algebra.dim):
        action.append(proj @ m.action[b] @ sect)
    quo = Module(m.algebra, proj.rows, action, validate=False)
    out = ModuleMap(m, quo, proj, validate=True)
    return quo, out


def kernel(f: ModuleMap) -> tuple[Module, ModuleMap]:
    return submodule_from_subspace(f.source, kernel_basis(f.mat))


def image(f: ModuleMap) -> tuple[Module, ModuleMap, ModuleMap]:
    """Image submodule with inclusion into the target and the
    corestriction of f onto it."""
    sub, incl = submodule_from_subspace(f.target, image_basis(f.mat))
    core = solve(incl.mat, f.mat)
    assert core is not None
    return sub, incl, ModuleMap(f.source, sub, core, validate=False)


def cokernel(f: ModuleMap) -> tuple[Module, ModuleMap]:
    return quotient_by_subspace(f.target, image_basis(f.mat))


def direct_sum(alg: Algebra, parts: list[Module]) -> tuple[Module, list[ModuleMap], list[ModuleMap]]:
    """Direct sum with its inclusions and projections."""
    p = alg.field.p
    total = sum(m.dim for m in parts)
    off = [0]
    for m in parts:
        off.append(off[-1] + m.dim)
    action = []
    for b in range(alg.dim):
        data = [0] * (total * total)
        for t, m in enumerate(parts):
            a = m.action[b]
            for i in range(m.dim):
                for j in range(m.dim):
                    data[(off[t] + i) * total + (off[t] + j)] = a.entry(i, j)
        action.append(Mat(p, total, total, data))
    whole = Module(alg, total, action, validate=False)
    incls = []
    projs = []
    for t, m in enumerate(parts):
        idata = [0] * (total * m.dim)
        for i in range(m.dim):
            idata[(off[t] + i) * m.dim + i] = 1
        incls.append(ModuleMap(m, whole, Mat(p, total, m.dim, idata),
                               validate=False))
        pdata = [0] * (m.dim * total)
        for i in range(m.dim):
            pdata[i * total + (off[t] + i)] = 1
        projs.append(ModuleMap(whole, m, Mat(p, m.dim, total, pdata),
                               validate=False))
    return whole, incls, projs


def fiber_product(f: ModuleMap, g: ModuleMap) -> tuple[Module, ModuleMap, ModuleMap]:
    """The pullback {(a, b) : f(a) = g(b)} with its two projections."""
    if f.target != g.target:
        raise ValueError("pullback needs a common target")
    alg = f.source.algebra
    whole, _, projs = direct_sum(alg, [f.source, g.source])
    sub = kernel_basis(f.mat.hstack(-g.mat))
    x, incl = submodule_from_subspace(whole, sub)
    pa = projs[0].compose(incl)
    pb = projs[1].compose(incl)
    assert f.compose(pa).mat == g.compose(pb).mat
    return x, pa, pb


@dataclass(frozen=True)
class ShortExactSeq:
    mono: ModuleMap
    epi: ModuleMap

    @property
    def sub(self) -> Module:
        return self.mono.source

    @property
    def middle(self) -> Module:
        return self.mono.target

    @property
    def quot(self) -> Module:
        return self.epi.target

    def check(self) -> None:
        if self.mono.target != self.epi.source:
            raise ValueError("maps do not share the middle term")
        if not self.mono.is_injective():
            raise ValueError("left map is not injective")
        if not self.epi.is_surjective():
            raise ValueError("right map is not surjective")
        if image_basis(self.mono.mat) != kernel_basis(self.epi.mat):
            raise ValueError("sequence is not exact in the middle")


def ses_from_submodule(m: Module, s: Subspace) -> ShortExactSeq:
    _, incl = submodule_from_subspace(m, s)
    _, proj = quotient_by_subspace(m, s)
    return ShortExactSeq(incl, proj)


def ses_is_split(ses: ShortExactSeq) -> bool:
    """Whether the epi admits a module-map section."""
    q = ses.quot
    if q.dim == 0:
        return True
    p = q.algebra.field.p
    cols = [(ses.epi.mat @ h.mat).data for h in hom_basis(q, ses.middle)]
    nrows = q.dim * q.dim
    if cols:
        a = Mat(p, nrows, len(cols),
                [cols[j][i] for i in range(nrows) for j in range(len(cols))])
    else:
        a = Mat.zeros(p, nrows, 0)
    b = Mat(p, nrows, 1, Mat.identity(p, q.dim).data)
    return solve(a, b) is not None


# -- simples, projectives, injectives --

def simple_module(alg: Algebra, pos: int) -> Module:
    p = alg.field.p
    mats = []
    for b in range(alg.dim):
        val = 1 if b == alg.idem[pos] else 0
        mats.append(Mat(p, 1, 1, [val]))
    return Module(alg, 1, mats, validate=False)


def projective_module(alg: Algebra, pos: int) -> Module:
    """The indecomposable projective at an idempotent: the span of the
    basis elements whose source is that idempotent, under left
    multiplication."""
    basis = alg.basis_by_source(pos)
    back = {b: t for t, b in enumerate(basis)}
    p = alg.field.p
    d = len(basis)
    mats = []
    for a in range(alg.dim):
        data = [0] * (d * d)
        for t, b in enumerate(basis):
            for k, c in alg.mult[a][b]:
                data[back[k] * d + t] = c % p
        mats.append(Mat(p, d, d, data))
    return Module(alg, d, mats, validate=False)


def dual_module(m: Module) -> Module:
    """The linear dual as a module over the opposite algebra."""
    op = opposite_algebra(m.algebra)
    return Module(op, m.dim, [a.transpose() for a in m.action], validate=False)


def dual_map(f: ModuleMap) -> ModuleMap:
    return ModuleMap(dual_module(f.target), dual_module(f.source),
                     f.mat.transpose(), validate=False)


def injective_module(alg: Algebra, pos: int) -> Module:
    """The injective envelope of the simple at an idempotent, realized
    as the dual of the opposite projective."""
    op = opposite_algebra(alg)
    proj = projective_module(op, pos)
    # Dualizing an op-module gives back a module over the original algebra.
    return Module(alg, proj.dim, [a.transpose() for a in proj.action],
                  validate=False)


def radical_subspace(m: Module) -> Subspace:
    vecs = []
    for r in m.algebra.radical:
        a = m.action[r]
        for j in range(m.dim):
            vecs.append(a.col(j))
    return Subspace(m.algebra.field.p, m.dim, vecs)


def projective_cover(m: Module) -> tuple[Module, ModuleMap]:
    """A projective cover P(m) -> m built by lifting a basis of the top."""
    alg = m.algebra
    p = alg.field.p
    rad = radical_subspace(m)
    top, proj = quotient_by_subspace(m, rad)
    pieces: list[tuple[int, tuple[int, ...]]] = []
    ident = Mat.identity(p, m.dim)
    for pos in range(len(alg.idem)):
        part = image_basis(top.action[alg.idem[pos]])
        for i in range(part.dim):
            u = part.basis.row(i)
            system = proj.mat.vstack(ident - m.action[alg.idem[pos]])
            rhs = Mat(p, top.dim + m.dim, 1, list(u) + [0] * m.dim)
            sol = solve(system, rhs)
            assert sol is not None, "top basis vector has no homogeneous lift"
            pieces.append((pos, sol.col(0)))
    parts = [projective_module(alg, pos) for pos, _ in pieces]
    whole, _, _ = direct_sum(alg, parts)
    cols: list[tuple[int, ...]] = []
    for (pos, mvec), part in zip(pieces, parts):
        lift = Mat(p, m.dim, 1, mvec)
        for b in alg.basis_by_source(pos):
            cols.append((m.action[b] @ lift).col(0))
    if cols:
        data = [cols[j][i] for i in range(m.dim) for j in range(len(cols))]
        mat = Mat(p, m.dim, len(cols), data)
    else:
        mat = Mat.zeros(p, m.dim, 0)
    cover = ModuleMap(whole, m, mat, validate=True)
    if not cover.is_surjective():
        raise AssertionError("projective cover failed to be surjective")
    return whole, cover


def syzygy(m: Module) -> tuple[Module, ModuleMap, ModuleMap]:
    """(Omega, inclusion Omega -> P, cover P -> m)."""
    cover_src, cover = projective_cover(m)
    omega, incl = kernel(cover)
    return omega, incl, cover


def is_projective(m: Module) -> bool:
    cover_src, cover = projective_cover(m)
    return cover_src.dim == m.dim


def is_injective(m: Module) -> bool:
    return is_projective(dual_module(m))


# -- extensions --

@dataclass(frozen=True)
class Ext1:
    """The space Ext^1(m, n) presented by cocycles on a syzygy.

    cocycles is a basis of representatives, elements of Hom(Omega, n)
    modulo restrictions of Hom(P, n).
    """

    m: Module
    n: Module
    cover: ModuleMap
    incl: ModuleMap
    cocycles: tuple[ModuleMap, ...]

    @property
    def dim(self) -> int:
        return len(self.cocycles)

    def element(self, coeffs: Iterable[int]) -> ModuleMap:
        omega = self.incl.source
        out = ModuleMap.zero(omega, self.n)
        for c, rep in zip(coeffs, self.cocycles):
            if c:
                out = out + rep.scale(c)
        return out


def ext1_basis(m: Module, n: Module) -> Ext1:
    omega, incl, cover = syzygy(m)
    p = m.algebra.field.p
    amb = n.dim * omega.dim
    hom_o = hom_basis(omega, n)
    hom_p = hom_basis(cover.source, n)
    full = Subspace(p, amb, [h.mat.data for h in hom_o]) if amb else Subspace(p, 0, [])
    restricted = Subspace(p, amb, [(h.mat @ incl.mat).data for h in hom_p]) \
        if amb else Subspace(p, 0, [])
    reps = complement_in(full, restricted)
    cocycles = tuple(ModuleMap(omega, n, Mat(p, n.dim, omega.dim, v),
                               validate=False) for v in reps)
    return Ext1(m, n, cover, incl, cocycles)


def extension_realize(ext: Ext1, cocycle: ModuleMap) -> ShortExactSeq:
    """The extension 0 -> n -> E -> m -> 0 classified by a cocycle."""
    alg = ext.m.algebra
    omega = ext.incl.source
    whole, incls, projs = direct_sum(alg, [ext.n, ext.cover.source])
    vecs = []
    for t in range(omega.dim):
        v = [-x % alg.field.p for x in cocycle.mat.col(t)] + list(ext.incl.mat.col(t))
        vecs.append(v)
    w = Subspace(alg.field.p, whole.dim, vecs)
    quo, proj = quotient_by_subspace(whole, w)
    mono = proj.compose(incls[0])
    # The map E -> m descends from (n + P) -> P -> m through the quotient.
    onto_m = ext.cover.compose(projs[1])
    _, sect = quotient_maps(w)
    epi = ModuleMap(quo, ext.m, onto_m.mat @ sect, validate=True)
    assert epi.mat @ proj.mat == onto_m.mat, "cocycle relations not killed"
    ses = ShortExactSeq(mono, epi)
    ses.check()
    return ses
