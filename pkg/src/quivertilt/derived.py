"""Resolutions and morphisms in the bounded derived category.

A morphism x -> y is represented by a chain map from the canonical
projective resolution of x to y; equality is equality up to homotopy,
composition lifts representatives through quasi-isomorphisms by solving
the corresponding linear systems, and isomorphy is quasi-isomorphy of
the representative.  Everything stays exact: a lift either exists and
is found, or an assertion fires.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Optional

from .complexes import (
    ChainMap,
    Complex,
    apply_functor,
    cohomology,
    cohomology_map,
    is_quasi_iso,
)
from .linalg import Mat, Subspace, complement_in, invert, kernel_basis, solve
from .modules import (
    Module,
    ModuleMap,
    dual_map,
    dual_module,
    fiber_product,
    hom_basis,
    is_projective,
    kernel,
    projective_cover,
)


# -- resolutions --

def _is_projective_complex(c: Complex) -> bool:
    return all(is_projective(m) for m in c.components)


@lru_cache(maxsize=None)
def projective_resolution(c: Complex, depth: int = 2) -> tuple[Complex, ChainMap]:
    """A bounded complex of projectives with a quasi-isomorphism onto c.

    Built from the top degree downwards: each term covers the fiber
    product of the incoming differential with the cycles constructed so
    far, and the bottom is capped by the kernel of the last
    differential.  The cap is projective precisely in the hereditary
    situations this package works in; anything else fails loudly.
    A complex that already consists of projectives is its own
    resolution.
    """
    if depth < 2:
        raise ValueError("resolution depth must be at least 2")
    if c.is_zero() or _is_projective_complex(c):
        return c, ChainMap.identity(c)
    alg = c.algebra
    hi = c.hi
    bottom = c.lo - depth
    comps: dict[int, Module] = {}
    dmaps: dict[int, ModuleMap] = {}
    smaps: dict[int, ModuleMap] = {}
    comps[hi], smaps[hi] = projective_cover(c.component(hi))
    dmaps[hi] = ModuleMap.zero(comps[hi], Module.zero(alg))
    for n in range(hi - 1, bottom, -1):
        cyc, kappa = kernel(dmaps[n + 1])
        u = smaps[n + 1].compose(kappa)
        fib, p_cyc, p_c = fiber_product(u, c.diff(n))
        comps[n], cover = projective_cover(fib)
        smaps[n] = p_c.compose(cover)
        dmaps[n] = kappa.compose(p_cyc).compose(cover)
    cap, kappa = kernel(dmaps[bottom + 1])
    if cap.dim and not is_projective(cap):
        raise ValueError("resolution cap is not projective; "
                         "the algebra is not hereditary at this depth")
    comps[bottom] = cap
    dmaps[bottom] = kappa
    smaps[bottom] = ModuleMap.zero(cap, c.component(bottom))
    res = Complex(alg, bottom, [comps[n] for n in range(bottom, hi + 1)],
                  [dmaps[n] for n in range(bottom, hi)])
    comparison = ChainMap(res, c, {n: smaps[n] for n in range(bottom, hi + 1)})
    assert is_quasi_iso(comparison), "resolution comparison map failed"
    return res, comparison


def dual_complex(c: Complex) -> Complex:
    """The linear dual over the opposite algebra, with degrees negated."""
    from .algebras import opposite_algebra

    op = opposite_algebra(c.algebra)
    if c.is_zero():
        return Complex.zero(op)
    comps = [dual_module(c.component(-i)) for i in range(-c.hi, -c.lo + 1)]
    diffs = [dual_map(c.diff(-i - 1)) for i in range(-c.hi, -c.lo)]
    return Complex(op, -c.hi, comps, diffs, validate=False)


def dual_chain_map(f: ChainMap) -> ChainMap:
    src = dual_complex(f.target)
    tgt = dual_complex(f.source)
    comps = {i: dual_map(f.component(-i))
             for i in range(min(src.lo, tgt.lo), max(src.hi, tgt.hi) + 1)}
    return ChainMap(src, tgt, comps, validate=False)


def _is_injective_complex(c: Complex) -> bool:
    from .modules import is_injective

    return all(is_injective(m) for m in c.components)


@lru_cache(maxsize=None)
def injective_coresolution(c: Complex, depth: int = 2) -> tuple[Complex, ChainMap]:
    """A bounded complex of injectives under c, by dualizing a
    projective resolution over the opposite algebra."""
    if c.is_zero() or _is_injective_complex(c):
        return c, ChainMap.identity(c)
    res, comparison = projective_resolution(dual_complex(c), depth)
    cores = dual_complex(res)
    into = dual_chain_map(comparison)
    assert into.source == c, "double dual failed to return to the source"
    assert is_quasi_iso(into), "coresolution comparison map failed"
    return cores, into


# -- graded map coordinates --

class _MapGrid:
    """Coordinates on the space of degree-shift graded module maps
    between two bounded complexes."""

    def __init__(self, x: Complex, y: Complex, shift: int):
        self.x = x
        self.y = y
        self.shift = shift
        self.p = x.algebra.field.p
        self.degrees: list[int] = []
        self.bases: dict[int, list[ModuleMap]] = {}
        self.spaces: dict[int, Subspace] = {}
        self.offsets: dict[int, int] = {}
        total = 0
        for i in range(x.lo, x.hi + 1):
            src = x.component(i)
            tgt = y.component(i + shift)
            if src.dim == 0 or tgt.dim == 0:
                continue
            hb = hom_basis(src, tgt)
            if not hb:
                continue
            self.degrees.append(i)
            self.bases[i] = hb
            self.spaces[i] = Subspace(self.p, tgt.dim * src.dim,
                                      [h.mat.data for h in hb])
            self.offsets[i] = total
            total += len(hb)
        self.dim = total

    def comps_from(self, vec) -> dict[int, ModuleMap]:
        comps = {}
        for i in self.degrees:
            base = self.offsets[i]
            out = None
            for k, h in enumerate(self.bases[i]):
                cf = vec[base + k]
                if cf:
                    out = h.scale(cf) if out is None else out + h.scale(cf)
            if out is not None:
                comps[i] = out
        return comps

    def coords_of(self, comps: dict[int, ModuleMap]) -> tuple[int, ...]:
        vec = [0] * self.dim
        for i, f in comps.items():
            if f.is_zero():
                continue
            if i not in self.offsets:
                raise ValueError(f"nonzero component at impossible degree {i}")
            for k, cf in enumerate(self.spaces[i].coords(f.mat.data)):
                vec[self.offsets[i] + k] = cf
        return tuple(vec)


def _add_equation(rows, rhs, width, nentries, terms, rhs_flat, p) -> None:
    """Append the rows of one matrix equation.

    terms is a list of (offset, flats): flats[k] is the flat coefficient
    vector multiplying unknown offset+k; rhs_flat is the flat right-hand
    side (None for zero).
    """
    for e in range(nentries):
        row = [0] * width
        for off, flats in terms:
            for k, fl in enumerate(flats):
                if fl[e]:
                    row[off + k] = (row[off + k] + fl[e]) % p
        rows.append(row)
        rhs.append(rhs_flat[e] if rhs_flat is not None else 0)


def _square_terms(grid: _MapGrid, rows, rhs, width: int, off: int) -> None:
    """Chain-map conditions d_y g - g d_x = 0 for a shift-0 grid whose
    unknowns start at column off of a width-column system."""
    x, y, p = grid.x, grid.y, grid.p
    for i in range(x.lo, x.hi + 1):
        n = x.component(i).dim * y.component(i + 1).dim
        if n == 0:
            continue
        terms = []
        if i in grid.offsets:
            flats = [(y.diff(i).mat @ h.mat).data for h in grid.bases[i]]
            terms.append((off + grid.offsets[i], flats))
        if i + 1 in grid.offsets:
            flats = [tuple(-v % p for v in (h.mat @ x.diff(i).mat).data)
                     for h in grid.bases[i + 1]]
            terms.append((off + grid.offsets[i + 1], flats))
        if terms:
            _add_equation(rows, rhs, width, n, terms, None, p)


def chain_map_space(x: Complex, y: Complex) -> tuple[_MapGrid, Subspace]:
    """All chain maps x -> y as a subspace of grid coordinates."""
    grid = _MapGrid(x, y, 0)
    rows: list[list[int]] = []
    rhs: list[int] = []
    _square_terms(grid, rows, rhs, grid.dim, 0)
    if not rows:
        return grid, Subspace.full(grid.p, grid.dim)
    return grid, kernel_basis(Mat.from_rows(grid.p, rows, cols=grid.dim))


def homotopy_boundaries(x: Complex, y: Complex, grid: _MapGrid) -> Subspace:
    """Coordinates of all null-homotopic chain maps x -> y."""
    hgrid = _MapGrid(x, y, -1)
    vecs = []
    for i in hgrid.degrees:
        for h in hgrid.bases[i]:
            comps: dict[int, ModuleMap] = {}
            upper = y.diff(i - 1).compose(h)
            if not upper.is_zero():
                comps[i] = upper
            lower = h.compose(x.diff(i - 1))
            if not lower.is_zero():
                comps[i - 1] = comps.get(i - 1, ModuleMap.zero(
                    x.component(i - 1), y.component(i - 1))) + lower
            vecs.append(grid.coords_of(comps))
    return Subspace(grid.p, grid.dim, vecs)


def is_null_homotopic(f: ChainMap) -> bool:
    """Whether f = d r + r d for some graded map r of degree -1."""
    x, y = f.source, f.target
    grid = _MapGrid(x, y, -1)
    rows: list[list[int]] = []
    rhs: list[int] = []
    p = grid.p
    for i in range(min(x.lo, y.lo), max(x.hi, y.hi) + 1):
        src = x.component(i)
        tgt = y.component(i)
        n = src.dim * tgt.dim
        if n == 0:
            continue
        terms = []
        if i in grid.offsets:
            flats = [(y.diff(i - 1).mat @ h.mat).data for h in grid.bases[i]]
            terms.append((grid.offsets[i], flats))
        if i + 1 in grid.offsets:
            flats = [(h.mat @ x.diff(i).mat).data for h in grid.bases[i + 1]]
            terms.append((grid.offsets[i + 1], flats))
        _add_equation(rows, rhs, grid.dim, n, terms, f.component(i).mat.data, p)
    if not rows:
        return True
    a = Mat.from_rows(p, rows, cols=grid.dim)
    b = Mat(p, len(rhs), 1, rhs)
    return solve(a, b) is not None


def lift_postcompose(q: ChainMap, f: ChainMap) -> ChainMap:
    """g with q . g homotopic to f, for f from a bounded complex of
    projectives and q a quasi-isomorphism."""
    if q.target != f.target:
        raise ValueError("lift needs a common target")
    src = f.source
    mid = q.source
    gridg = _MapGrid(src, mid, 0)
    gridr = _MapGrid(src, f.target, -1)
    p = gridg.p
    width = gridg.dim + gridr.dim
    rows: list[list[int]] = []
    rhs: list[int] = []
    _square_terms(gridg, rows, rhs, width, 0)
    # q g + d r + r d = f.
    for i in range(src.lo, src.hi + 1):
        tgt = f.target.component(i)
        n = src.component(i).dim * tgt.dim
        if n == 0:
            continue
        terms = []
        if i in gridg.offsets:
            flats = [(q.component(i).mat @ h.mat).data for h in gridg.bases[i]]
            terms.append((gridg.offsets[i], flats))
        if i in gridr.offsets:
            flats = [(f.target.diff(i - 1).mat @ h.mat).data
                     for h in gridr.bases[i]]
            terms.append((gridg.dim + gridr.offsets[i], flats))
        if i + 1 in gridr.offsets:
            flats = [(h.mat @ src.diff(i).mat).data for h in gridr.bases[i + 1]]
            terms.append((gridg.dim + gridr.offsets[i + 1], flats))
        _add_equation(rows, rhs, width, n, terms, f.component(i).mat.data, p)
    sol = _solve_rows(rows, rhs, width, p)
    assert sol is not None, "no lift through the quasi-isomorphism"
    return ChainMap(src, mid, gridg.comps_from(sol))


def lift_precompose(w: ChainMap, v: ChainMap) -> ChainMap:
    """g with g . w homotopic to v, for w a quasi-isomorphism out of a
    shared source and v into a bounded complex of injectives."""
    if w.source != v.source:
        raise ValueError("lift needs a common source")
    src = v.source
    mid = w.target
    tgt = v.target
    gridg = _MapGrid(mid, tgt, 0)
    gridr = _MapGrid(src, tgt, -1)
    p = gridg.p
    width = gridg.dim + gridr.dim
    rows: list[list[int]] = []
    rhs: list[int] = []
    _square_terms(gridg, rows, rhs, width, 0)
    # g w + d r + r d = v.
    for i in range(src.lo, src.hi + 1):
        n = src.component(i).dim * tgt.component(i).dim
        if n == 0:
            continue
        terms = []
        if i in gridg.offsets:
            flats = [(h.mat @ w.component(i).mat).data for h in gridg.bases[i]]
            terms.append((gridg.offsets[i], flats))
        if i in gridr.offsets:
            flats = [(tgt.diff(i - 1).mat @ h.mat).data for h in gridr.bases[i]]
            terms.append((gridg.dim + gridr.offsets[i], flats))
        if i + 1 in gridr.offsets:
            flats = [(h.mat @ src.diff(i).mat).data for h in gridr.bases[i + 1]]
            terms.append((gridg.dim + gridr.offsets[i + 1], flats))
        _add_equation(rows, rhs, width, n, terms, v.component(i).mat.data, p)
    sol = _solve_rows(rows, rhs, width, p)
    assert sol is not None, "no lift against the quasi-isomorphism"
    return ChainMap(mid, tgt, gridg.comps_from(sol))


def _solve_rows(rows, rhs, width, p) -> Optional[tuple[int, ...]]:
    if not rows:
        return (0,) * width
    a = Mat.from_rows(p, rows, cols=width)
    b = Mat(p, len(rhs), 1, rhs)
    sol = solve(a, b)
    if sol is None:
        return None
    return sol.col(0)


# -- derived morphisms --

class DerivedMorphism:
    """A derived-category morphism as a chain map from the canonical
    projective resolution of the source."""

    __slots__ = ("source", "target", "rep")

    def __init__(self, source: Complex, target: Complex, rep: ChainMap):
        res, _ = projective_resolution(source)
        if rep.source != res or rep.target != target:
            raise ValueError("representative has wrong endpoints")
        self.source = source
        self.target = target
        self.rep = rep

    @classmethod
    def from_chain_map(cls, u: ChainMap) -> "DerivedMorphism":
        res, comparison = projective_resolution(u.source)
        return cls(u.source, u.target, u.compose(comparison))

    @classmethod
    def zero(cls, source: Complex, target: Complex) -> "DerivedMorphism":
        res, _ = projective_resolution(source)
        return cls(source, target, ChainMap.zero(res, target))

    def compose(self, other: "DerivedMorphism") -> "DerivedMorphism":
        """self after other."""
        if other.target != self.source:
            raise ValueError("derived morphisms are not composable")
        _, comparison = projective_resolution(self.source)
        lifted = lift_postcompose(comparison, other.rep)
        return DerivedMorphism(other.source, self.target,
                               self.rep.compose(lifted))

    def add(self, other: "DerivedMorphism") -> "DerivedMorphism":
        return DerivedMorphism(self.source, self.target, self.rep + other.rep)

    def scale(self, c: int) -> "DerivedMorphism":
        return DerivedMorphism(self.source, self.target, self.rep.scale(c))

    def is_zero(self) -> bool:
        return is_null_homotopic(self.rep)

    def equals(self, other: "DerivedMorphism") -> bool:
        if self.source != other.source or self.target != other.target:
            return False
        return is_null_homotopic(self.rep + other.rep.scale(-1))

    def is_iso(self) -> bool:
        return is_quasi_iso(self.rep)

    def induced(self, i: int) -> ModuleMap:
        """The induced map on degree-i cohomology."""
        _, comparison = projective_resolution(self.source)
        hs = cohomology_map(comparison, i)
        inv = invert(hs.mat)
        assert inv is not None
        hr = cohomology_map(self.rep, i)
        return ModuleMap(cohomology(self.source, i),
                         cohomology(self.target, i),
                         hr.mat @ inv, validate=False)

    def __repr__(self) -> str:
        return f"DerivedMorphism({self.source!r} -> {self.target!r})"


@dataclass(frozen=True, eq=False)
class DerivedHom:
    """Hom in degree zero between two complexes: chain maps from the
    resolution modulo homotopy, with a chosen basis of class
    representatives."""

    source: Complex
    target: Complex
    resolution: Complex
    grid: _MapGrid
    chain_space: Subspace
    boundary_space: Subspace
    rep_coords: tuple[tuple[int, ...], ...]
    reps: tuple[ChainMap, ...]

    @property
    def dim(self) -> int:
        return len(self.reps)

    def basis(self) -> list[DerivedMorphism]:
        return [DerivedMorphism(self.source, self.target, r) for r in self.reps]

    def element(self, coeffs: Iterable[int]) -> DerivedMorphism:
        coeffs = tuple(coeffs)
        out = DerivedMorphism.zero(self.source, self.target)
        for cf, r in zip(coeffs, self.reps):
            if cf:
                out = out.add(DerivedMorphism(self.source, self.target,
                                              r.scale(cf)))
        return out

    def class_coords(self, m: DerivedMorphism) -> tuple[int, ...]:
        """Coefficients of m's class in the chosen representative basis."""
        vec = self.grid.coords_of(_comps_dict(m.rep))
        p = self.grid.p
        cols = list(self.rep_coords)
        cols += [self.boundary_space.basis.row(k)
                 for k in range(self.boundary_space.dim)]
        if not cols:
            assert all(v == 0 for v in vec)
            return ()
        a = Mat.from_rows(p, cols, cols=self.grid.dim).transpose()
        b = Mat(p, self.grid.dim, 1, vec)
        sol = solve(a, b)
        assert sol is not None, "morphism does not lie in the hom space"
        return tuple(sol.col(0)[: len(self.reps)])


def _comps_dict(f: ChainMap) -> dict[int, ModuleMap]:
    return {i: f.component(i)
            for i in range(f.lo, f.lo + len(f.comps))
            if not f.component(i).is_zero()}


@lru_cache(maxsize=None)
def derived_hom0(x: Complex, y: Complex) -> DerivedHom:
    """Degree-zero morphisms x -> y: chain maps from the resolution of x
    to y modulo homotopy."""
    res, _ = projective_resolution(x)
    grid, space = chain_map_space(res, y)
    bounds = homotopy_boundaries(res, y, grid)
    assert space.contains_space(bounds), "boundaries are not cycles"
    reps = tuple(complement_in(space, bounds))
    chain_reps = tuple(ChainMap(res, y, grid.comps_from(v)) for v in reps)
    return DerivedHom(x, y, res, grid, space, bounds, reps, chain_reps)


def derived_hom_dim(x: Complex, y: Complex) -> int:
    return derived_hom0(x, y).dim


def transport_exact(fun, m: DerivedMorphism) -> DerivedMorphism:
    """Image of a derived morphism under an exact additive functor."""
    from .complexes import apply_functor_map

    _, comparison = projective_resolution(m.source)
    fx = apply_functor(fun, m.source)
    f_rep = apply_functor_map(fun, m.rep)
    f_cmp = apply_functor_map(fun, comparison)
    assert is_quasi_iso(f_cmp), "functor failed to preserve the resolution"
    _, cmp2 = projective_resolution(fx)
    lifted = lift_postcompose(f_cmp, cmp2)
    return DerivedMorphism(fx, apply_functor(fun, m.target),
                           f_rep.compose(lifted))


@dataclass(frozen=True)
class DerivedApplication:
    """Result of a one-sided derived functor: the value together with
    the resolution witness and its comparison quasi-isomorphism."""

    value: Complex
    witness: Complex
    comparison: ChainMap


def apply_right_derived(fun, c: Complex, depth: int = 2) -> DerivedApplication:
    cores, into = injective_coresolution(c, depth)
    return DerivedApplication(apply_functor(fun, cores), cores, into)


def apply_left_derived(fun, c: Complex, depth: int = 2) -> DerivedApplication:
    res, onto = projective_resolution(c, depth)
    return DerivedApplication(apply_functor(fun, res), res, onto)
