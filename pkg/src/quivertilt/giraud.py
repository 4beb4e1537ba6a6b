"""Corner localizations and transport of torsion pairs across them.

For a corner idempotent e of an algebra A there are two recollement-style
situations between A-modules and eAe-modules:

* restriction l = e(-) with right adjoint i = Hom_eAe(eA, -), an exact
  localization whose kernel S consists of the modules killed by e;
* restriction r = e(-) with left adjoint j = Ae (x) -, the co-dual.

Torsion pairs are pulled back along l (the "hat" construction, with a
fiber-product or pushout decomposition witness) and pushed forward by
applying l to both classes; the compatible pairs on the two sides
biject, which verify_bijection and verify_co_bijection certify
exhaustively on bounded universes.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .algebras import CornerData
from .enumeration import ModuleUniverse
from .linalg import (
    Mat,
    Subspace,
    image_basis,
    kernel_basis,
    kron,
    quotient_maps,
    solve,
)
from .modules import (
    Module,
    ModuleMap,
    direct_sum,
    cokernel,
    fiber_product,
    quotient_by_subspace,
    ses_from_submodule,
    submodule_from_subspace,
    ShortExactSeq,
)
from .torsion import (
    ClassSpec,
    TorsionPair,
    free_indec_indices,
    is_torsion_pair,
    torsion_indec_indices,
    trace_subspace,
)


class CornerFunctor:
    """Restriction m -> e.m from parent modules to corner modules."""

    def __init__(self, corner: CornerData):
        self.corner = corner
        self.source_algebra = corner.parent
        self.target_algebra = corner.sub
        self._cache: dict[Module, tuple[Module, Mat]] = {}

    def data(self, m: Module) -> tuple[Module, Mat]:
        """The restricted module and the inclusion e.m -> m (columns)."""
        if m not in self._cache:
            cd = self.corner
            alg = cd.parent
            p = alg.field.p
            e_mat = Mat.zeros(p, m.dim, m.dim)
            for pos in cd.positions:
                e_mat = e_mat + m.action[alg.idem[pos]]
            sub = image_basis(e_mat)
            incl = sub.basis.transpose()
            action = []
            for t, b in enumerate(cd.kept):
                restr = solve(incl, m.action[b] @ incl)
                assert restr is not None, "corner action escapes e.m"
                action.append(restr)
            self._cache[m] = (Module(cd.sub, sub.dim, action), incl)
        return self._cache[m]

    def apply(self, m: Module) -> Module:
        return self.data(m)[0]

    def apply_map(self, f: ModuleMap) -> ModuleMap:
        src, incl_s = self.data(f.source)
        tgt, incl_t = self.data(f.target)
        mat = solve(incl_t, f.mat @ incl_s)
        assert mat is not None, "map does not preserve the corner part"
        return ModuleMap(src, tgt, mat, validate=False)


class HomSectionFunctor:
    """The right adjoint n -> Hom_eAe(eA, n) of corner restriction."""

    def __init__(self, corner: CornerData):
        self.corner = corner
        self.source_algebra = corner.sub
        self.target_algebra = corner.parent
        self._cache: dict[Module, tuple[Module, Subspace]] = {}

    def data(self, n: Module) -> tuple[Module, Subspace]:
        """The module Hom_eAe(eA, n) and its space of flat matrices."""
        if n not in self._cache:
            cd = self.corner
            p = cd.parent.field.p
            ea = cd.eA
            amb = n.dim * ea.dim
            if amb == 0:
                space = Subspace.zero(p, amb)
            else:
                blocks = []
                ident_n = Mat.identity(p, n.dim)
                ident_e = Mat.identity(p, ea.dim)
                for t in range(cd.sub.dim):
                    lhs = kron(ident_n, ea.left_act[t].transpose())
                    rhs = kron(n.action[t], ident_e)
                    blocks.append(lhs - rhs)
                stacked = blocks[0]
                for b in blocks[1:]:
                    stacked = stacked.vstack(b)
                space = kernel_basis(stacked)
            mats = [Mat(p, n.dim, ea.dim, space.basis.row(k))
                    for k in range(space.dim)]
            action = []
            for a in range(cd.parent.dim):
                cols = [space.coords((phi @ ea.right_act[a]).data)
                        for phi in mats]
                action.append(_mat_from_cols(p, space.dim, cols))
            self._cache[n] = (Module(cd.parent, space.dim, action), space)
        return self._cache[n]

    def apply(self, n: Module) -> Module:
        return self.data(n)[0]

    def apply_map(self, g: ModuleMap) -> ModuleMap:
        cd = self.corner
        p = cd.parent.field.p
        src, sspace = self.data(g.source)
        tgt, tspace = self.data(g.target)
        ea = cd.eA
        cols = []
        for k in range(sspace.dim):
            phi = Mat(p, g.source.dim, ea.dim, sspace.basis.row(k))
            cols.append(tspace.coords((g.mat @ phi).data))
        return ModuleMap(src, tgt, _mat_from_cols(p, tgt.dim, cols),
                         validate=False)


class TensorSectionFunctor:
    """The left adjoint n -> Ae (x)_eAe n of corner restriction."""

    def __init__(self, corner: CornerData):
        self.corner = corner
        self.source_algebra = corner.sub
        self.target_algebra = corner.parent
        self._cache: dict[Module, tuple[Module, Mat, Mat]] = {}

    def data(self, n: Module) -> tuple[Module, Mat, Mat]:
        """The module Ae (x) n with projection from and section into the
        plain tensor space of dimension dim(Ae) * dim(n)."""
        if n not in self._cache:
            cd = self.corner
            p = cd.parent.field.p
            ae = cd.Ae
            big = ae.dim * n.dim
            vecs = []
            ident_n = Mat.identity(p, n.dim)
            ident_a = Mat.identity(p, ae.dim)
            for t in range(cd.sub.dim):
                rel = kron(ae.right_act[t], ident_n) - kron(ident_a, n.action[t])
                vecs.extend(rel.transpose().row_list())
            w = Subspace(p, big, vecs)
            proj, sect = quotient_maps(w)
            action = []
            for a in range(cd.parent.dim):
                move = kron(ae.left_act[a], ident_n)
                for k in range(w.dim):
                    if not w.contains(move.apply(w.basis.row(k))):
                        raise AssertionError("tensor relations are not stable")
                action.append(proj @ move @ sect)
            self._cache[n] = (Module(cd.parent, big - w.dim, action), proj, sect)
        return self._cache[n]

    def apply(self, n: Module) -> Module:
        return self.data(n)[0]

    def apply_map(self, g: ModuleMap) -> ModuleMap:
        cd = self.corner
        p = cd.parent.field.p
        src, _, sect_s = self.data(g.source)
        tgt, proj_t, _ = self.data(g.target)
        move = kron(Mat.identity(p, cd.Ae.dim), g.mat)
        return ModuleMap(src, tgt, proj_t @ move @ sect_s, validate=False)


def _mat_from_cols(p: int, nrows: int, cols: list[tuple[int, ...]]) -> Mat:
    if not cols:
        return Mat.zeros(p, nrows, 0)
    data = [cols[j][i] for i in range(nrows) for j in range(len(cols))]
    return Mat(p, nrows, len(cols), data)


@dataclass
class GiraudContext:
    """Exact localization l with right adjoint section i."""

    corner: CornerData
    l: CornerFunctor
    i: HomSectionFunctor

    def unit(self, m: Module) -> ModuleMap:
        """m -> i(l(m)), sending x to the map (a |-> restriction of a.x)."""
        cd = self.corner
        p = cd.parent.field.p
        lm, incl = self.l.data(m)
        iln, space = self.i.data(lm)
        ea = cd.eA
        ea_idx = [b for b in range(cd.parent.dim)
                  if cd.parent.endpoints[b][1] in set(cd.positions)]
        cols = []
        for t in range(m.dim):
            flat = [0] * (lm.dim * ea.dim)
            for s, b in enumerate(ea_idx):
                vec = m.action[b].col(t)
                lvec = solve(incl, Mat(p, m.dim, 1, vec))
                assert lvec is not None
                for r in range(lm.dim):
                    flat[r * ea.dim + s] = lvec.entry(r, 0)
            cols.append(space.coords(flat))
        return ModuleMap(m, iln, _mat_from_cols(p, iln.dim, cols))

    def counit(self, n: Module) -> ModuleMap:
        """l(i(n)) -> n, evaluation of a homomorphism at e."""
        cd = self.corner
        p = cd.parent.field.p
        inn, space = self.i.data(n)
        lin, incl = self.l.data(inn)
        ea = cd.eA
        e_col = Mat(p, ea.dim, 1, cd.eA_e_coords)
        cols = []
        for t in range(lin.dim):
            w = incl.col(t)
            phi = Mat.zeros(p, n.dim, ea.dim)
            for k in range(space.dim):
                if w[k]:
                    phi = phi + Mat(p, n.dim, ea.dim,
                                    space.basis.row(k)).scale(w[k])
            cols.append((phi @ e_col).col(0))
        return ModuleMap(lin, n, _mat_from_cols(p, n.dim, cols))

    def in_s(self, m: Module) -> bool:
        """Whether m is killed by the localization."""
        return self.l.apply(m).dim == 0

    def in_s_perp(self, m: Module) -> bool:
        """Whether the unit at m is injective."""
        return self.unit(m).is_injective()


@dataclass
class CoGiraudContext:
    """Exact colocalization r with left adjoint section j."""

    corner: CornerData
    j: TensorSectionFunctor
    r: CornerFunctor

    def unit(self, n: Module) -> ModuleMap:
        """n -> r(j(n)), sending x to the class of e (x) x."""
        cd = self.corner
        p = cd.parent.field.p
        jn, proj, _ = self.j.data(n)
        rjn, incl = self.r.data(jn)
        e_row = cd.Ae_e_coords
        cols = []
        for u in range(n.dim):
            flat = [0] * (cd.Ae.dim * n.dim)
            for s, c in enumerate(e_row):
                if c:
                    flat[s * n.dim + u] = c
            big = proj.apply(flat)
            rvec = solve(incl, Mat(p, jn.dim, 1, big))
            assert rvec is not None, "e (x) n is not in the corner part"
            cols.append(rvec.col(0))
        return ModuleMap(n, rjn, _mat_from_cols(p, rjn.dim, cols))

    def counit(self, m: Module) -> ModuleMap:
        """j(r(m)) -> m, the action map a.e (x) x -> a.x."""
        cd = self.corner
        p = cd.parent.field.p
        rm, incl = self.r.data(m)
        jrm, proj, sect = self.j.data(rm)
        ae_idx = [b for b in range(cd.parent.dim)
                  if cd.parent.endpoints[b][0] in set(cd.positions)]
        cols = []
        for s, b in enumerate(ae_idx):
            for u in range(rm.dim):
                cols.append((m.action[b] @ incl).col(u))
        full = _mat_from_cols(p, m.dim, cols)
        out = ModuleMap(jrm, m, full @ sect)
        assert out.mat @ proj == full, "tensor relations are not killed"
        return out

    def in_perp_s(self, m: Module) -> bool:
        """Whether the counit at m is surjective."""
        return self.counit(m).is_surjective()


def giraud_context(corner: CornerData) -> GiraudContext:
    return GiraudContext(corner, CornerFunctor(corner), HomSectionFunctor(corner))


def co_giraud_context(corner: CornerData) -> CoGiraudContext:
    return CoGiraudContext(corner, TensorSectionFunctor(corner),
                           CornerFunctor(corner))


# -- transport of torsion pairs --

def hat_pair(ctx: GiraudContext, pair_c: TorsionPair,
             uni_d: ModuleUniverse) -> TorsionPair:
    """Pull a corner pair back: torsion class l^{-1}(T), free class
    l^{-1}(F) cut down to the modules with injective unit."""
    t_gens = tuple(d for d in uni_d.indecs if pair_c.in_torsion(ctx.l.apply(d)))
    f_gens = tuple(d for d in uni_d.indecs
                   if pair_c.in_free(ctx.l.apply(d)) and ctx.in_s_perp(d))
    return TorsionPair(ClassSpec(t_gens, "torsion"), ClassSpec(f_gens, "free"))


def hat_decompose(ctx: GiraudContext, pair_c: TorsionPair,
                  m: Module) -> ShortExactSeq:
    """Decomposition of m for the pulled-back pair, realized as the
    fiber product of i(t(l m)) -> i(l m) <- m."""
    lm = ctx.l.apply(m)
    t_sub = trace_subspace(pair_c.torsion.generators, lm)
    tmod, t_incl = submodule_from_subspace(lm, t_sub)
    it_incl = ctx.i.apply_map(t_incl)
    eta = ctx.unit(m)
    x, p_t, p_m = fiber_product(it_incl, eta)
    assert p_m.is_injective(), "fiber product failed to embed in m"
    return ses_from_submodule(m, image_basis(p_m.mat))


def co_hat_pair(co: CoGiraudContext, pair_c: TorsionPair,
                uni_d: ModuleUniverse) -> TorsionPair:
    """Pull a corner pair back along the colocalization: free class
    r^{-1}(F), torsion class r^{-1}(T) cut down by surjective counit."""
    t_gens = tuple(d for d in uni_d.indecs
                   if pair_c.in_torsion(co.r.apply(d)) and co.in_perp_s(d))
    f_gens = tuple(d for d in uni_d.indecs if pair_c.in_free(co.r.apply(d)))
    return TorsionPair(ClassSpec(t_gens, "torsion"), ClassSpec(f_gens, "free"))


def co_hat_decompose(co: CoGiraudContext, pair_c: TorsionPair,
                     m: Module) -> ShortExactSeq:
    """Decomposition of m for the co-pulled-back pair: the torsion part
    is the kernel of m -> pushout of j(r(m)/t) <- j(r(m)) -> m."""
    rm = co.r.apply(m)
    t_sub = trace_subspace(pair_c.torsion.generators, rm)
    fmod, fproj = quotient_by_subspace(rm, t_sub)
    jq = co.j.apply_map(fproj)
    eps = co.counit(m)
    whole, incls, _ = direct_sum(m.algebra, [jq.target, m])
    combined = incls[0].compose(jq) + incls[1].compose(eps).scale(-1)
    _, onto = cokernel(combined)
    to_pushout = onto.compose(incls[1])
    return ses_from_submodule(m, kernel_basis(to_pushout.mat))


def push_pair_classes(ctx_l: CornerFunctor, pair_d: TorsionPair,
                      uni_d: ModuleUniverse) -> TorsionPair:
    """(l(X), l(Y)) generated from the universe's indecomposables."""
    t_gens = tuple(ctx_l.apply(d) for d in uni_d.indecs if pair_d.in_torsion(d))
    f_gens = tuple(ctx_l.apply(d) for d in uni_d.indecs if pair_d.in_free(d))
    return TorsionPair(ClassSpec(t_gens, "torsion"), ClassSpec(f_gens, "free"))


@dataclass(frozen=True)
class PushResult:
    ok: bool
    closed_under_section: bool
    witness: Optional[str]
    pair: Optional[TorsionPair]
    pair_valid: bool
    preimage_matches: bool


def push_pair(ctx: GiraudContext, pair_d: TorsionPair, uni_d: ModuleUniverse,
              uni_c: ModuleUniverse) -> PushResult:
    """Push a parent pair down to the corner.

    Requires the free class to be closed under i . l on the enumerated
    universe; the free class of the image is then also the i-preimage
    of the free class upstairs, which is checked as well.
    """
    witness = None
    for d in uni_d.nonzero_members():
        if pair_d.in_free(d) and not pair_d.in_free(ctx.i.apply(ctx.l.apply(d))):
            witness = f"free class not closed under i(l(-)) at {uni_d.signature(d)}"
            break
    closed = witness is None
    if not closed:
        return PushResult(False, False, witness, None, False, False)
    pair_c = push_pair_classes(ctx.l, pair_d, uni_d)
    valid = is_torsion_pair(pair_c, uni_c).ok
    preimage = tuple(i for i, c in enumerate(uni_c.indecs)
                     if pair_d.in_free(ctx.i.apply(c)))
    matches = preimage == free_indec_indices(pair_c, uni_c)
    return PushResult(valid and matches, True, None, pair_c, valid, matches)


def co_push_pair(co: CoGiraudContext, pair_d: TorsionPair,
                 uni_d: ModuleUniverse, uni_c: ModuleUniverse) -> PushResult:
    """Dual push: requires the torsion class closed under j . r, and the
    torsion class of the image equals the j-preimage upstairs."""
    witness = None
    for d in uni_d.nonzero_members():
        if pair_d.in_torsion(d) and not pair_d.in_torsion(co.j.apply(co.r.apply(d))):
            witness = f"torsion class not closed under j(r(-)) at {uni_d.signature(d)}"
            break
    closed = witness is None
    if not closed:
        return PushResult(False, False, witness, None, False, False)
    pair_c = push_pair_classes(co.r, pair_d, uni_d)
    valid = is_torsion_pair(pair_c, uni_c).ok
    preimage = tuple(i for i, c in enumerate(uni_c.indecs)
                     if pair_d.in_torsion(co.j.apply(c)))
    matches = preimage == torsion_indec_indices(pair_c, uni_c)
    return PushResult(valid and matches, True, None, pair_c, valid, matches)


# -- exhaustive bijection certificates --

@dataclass(frozen=True)
class BijectionReport:
    ok: bool
    parent_pairs: int
    corner_pairs: int
    compatible: tuple[tuple[tuple[int, ...], tuple[int, ...]], ...]
    matching: tuple[tuple[int, int], ...]
    failures: tuple[str, ...]


def _pair_key(pair: TorsionPair, uni: ModuleUniverse):
    return (torsion_indec_indices(pair, uni), free_indec_indices(pair, uni))


def verify_bijection(ctx: GiraudContext, uni_d: ModuleUniverse,
                     uni_c: ModuleUniverse) -> BijectionReport:
    """Check that push and hat are mutually inverse bijections between
    corner pairs and the compatible parent pairs (free class between
    i(l(Y)) and the unit-injective modules)."""
    from .torsion import enumerate_torsion_pairs

    failures: list[str] = []
    d_pairs = enumerate_torsion_pairs(uni_d)
    c_pairs = enumerate_torsion_pairs(uni_c)
    d_keys = [_pair_key(pr, uni_d) for pr in d_pairs]
    c_keys = [_pair_key(pr, uni_c) for pr in c_pairs]

    compatible: list[int] = []
    for t, pr in enumerate(d_pairs):
        f_idx = d_keys[t][1]
        closed = all(pr.in_free(ctx.i.apply(ctx.l.apply(uni_d.indecs[i])))
                     for i in f_idx)
        perp = all(ctx.in_s_perp(uni_d.indecs[i]) for i in f_idx)
        if closed and perp:
            compatible.append(t)

    matching: list[tuple[int, int]] = []
    for t in compatible:
        res = push_pair(ctx, d_pairs[t], uni_d, uni_c)
        if not res.ok:
            failures.append(f"push fails on compatible pair {d_keys[t]}: "
                            f"{res.witness or 'axioms'}")
            continue
        key = _pair_key(res.pair, uni_c)
        if key not in c_keys:
            failures.append(f"pushed pair {key} not among corner pairs")
            continue
        u = c_keys.index(key)
        back = hat_pair(ctx, c_pairs[u], uni_d)
        if _pair_key(back, uni_d) != d_keys[t]:
            failures.append(f"hat(push) moved pair {d_keys[t]}")
        matching.append((t, u))

    for u, pc in enumerate(c_pairs):
        lifted = hat_pair(ctx, pc, uni_d)
        key = _pair_key(lifted, uni_d)
        if key not in d_keys or d_keys.index(key) not in compatible:
            failures.append(f"hat of corner pair {c_keys[u]} is not compatible")
            continue
        res = push_pair(ctx, lifted, uni_d, uni_c)
        if not res.ok or _pair_key(res.pair, uni_c) != c_keys[u]:
            failures.append(f"push(hat) moved corner pair {c_keys[u]}")

    hit_c = {u for _, u in matching}
    if len(matching) != len(compatible) or len(hit_c) != len(c_pairs):
        failures.append(
            f"counts differ: {len(compatible)} compatible vs {len(c_pairs)} corner")
    return BijectionReport(not failures, len(d_pairs), len(c_pairs),
                           tuple(d_keys[t] for t in compatible),
                           tuple(matching), tuple(failures))


def verify_co_bijection(co: CoGiraudContext, uni_d: ModuleUniverse,
                        uni_c: ModuleUniverse) -> BijectionReport:
    """Dual certificate: torsion class between j(r(X)) and the modules
    with surjective counit."""
    from .torsion import enumerate_torsion_pairs

    failures: list[str] = []
    d_pairs = enumerate_torsion_pairs(uni_d)
    c_pairs = enumerate_torsion_pairs(uni_c)
    d_keys = [_pair_key(pr, uni_d) for pr in d_pairs]
    c_keys = [_pair_key(pr, uni_c) for pr in c_pairs]

    compatible: list[int] = []
    for t, pr in enumerate(d_pairs):
        t_idx = d_keys[t][0]
        closed = all(pr.in_torsion(co.j.apply(co.r.apply(uni_d.indecs[i])))
                     for i in t_idx)
        perp = all(co.in_perp_s(uni_d.indecs[i]) for i in t_idx)
        if closed and perp:
            compatible.append(t)

    matching: list[tuple[int, int]] = []
    for t in compatible:
        res = co_push_pair(co, d_pairs[t], uni_d, uni_c)
        if not res.ok:
            failures.append(f"co-push fails on compatible pair {d_keys[t]}: "
                            f"{res.witness or 'axioms'}")
            continue
        key = _pair_key(res.pair, uni_c)
        if key not in c_keys:
            failures.append(f"co-pushed pair {key} not among corner pairs")
            continue
        u = c_keys.index(key)
        back = co_hat_pair(co, c_pairs[u], uni_d)
        if _pair_key(back, uni_d) != d_keys[t]:
            failures.append(f"co-hat(co-push) moved pair {d_keys[t]}")
        matching.append((t, u))

    for u, pc in enumerate(c_pairs):
        lifted = co_hat_pair(co, pc, uni_d)
        key = _pair_key(lifted, uni_d)
        if key not in d_keys or d_keys.index(key) not in compatible:
            failures.append(f"co-hat of corner pair {c_keys[u]} is not compatible")
            continue
        res = co_push_pair(co, lifted, uni_d, uni_c)
        if not res.ok or _pair_key(res.pair, uni_c) != c_keys[u]:
            failures.append(f"co-push(co-hat) moved corner pair {c_keys[u]}")

    hit_c = {u for _, u in matching}
    if len(matching) != len(compatible) or len(hit_c) != len(c_pairs):
        failures.append(
            f"counts differ: {len(compatible)} compatible vs {len(c_pairs)} corner")
    return BijectionReport(not failures, len(d_pairs), len(c_pairs),
                           tuple(d_keys[t] for t in compatible),
                           tuple(matching), tuple(failures))
