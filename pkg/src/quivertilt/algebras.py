"""Finite-dimensional algebras presented by a multiplicative basis.

An Algebra here always comes with a distinguished complete set of
orthogonal idempotents and a basis adapted to the radical: every basis
element is either one of the idempotents or lies in the radical, and
the product of two basis elements is a scalar multiple of a basis
element.  Path algebras of acyclic quivers, their corner algebras eAe
and the opposite algebras all have this shape, and the constructors
below verify it.
"""

from __future__ import annotations

from dataclasses import dataclass

from .linalg import Field, Mat, Subspace
from .quivers import Path, Quiver


class Algebra:
    def __init__(self, field: Field, labels, mult, unit, idem, radical):
        """Args:
            field: coefficient field.
            labels: basis element names, one per dimension.
            mult: mult[i][j] is a tuple of (k, coeff) pairs expressing
                the product basis_i * basis_j in the basis.
            unit: coordinate tuple of the unit element.
            idem: indices of the distinguished orthogonal idempotents.
            radical: indices of the basis elements spanning the radical.
        """
        self.field = field
        self.labels = tuple(str(s) for s in labels)
        self.dim = len(self.labels)
        self.mult = tuple(tuple(tuple(pair) for pair in row) for row in mult)
        self.unit = tuple(x % field.p for x in unit)
        self.idem = tuple(idem)
        self.radical = tuple(radical)
        self._check_shape()
        self.endpoints = self._compute_endpoints()
        self._left_mats: dict[int, Mat] = {}

    # -- element arithmetic on coordinate tuples --

    def basis_vec(self, i: int) -> tuple[int, ...]:
        v = [0] * self.dim
        v[i] = 1
        return tuple(v)

    def mul_vecs(self, x, y) -> tuple[int, ...]:
        p = self.field.p
        out = [0] * self.dim
        for i, xi in enumerate(x):
            if xi == 0:
                continue
            for j, yj in enumerate(y):
                if yj == 0:
                    continue
                for k, c in self.mult[i][j]:
                    out[k] = (out[k] + xi * yj * c) % p
        return tuple(out)

    def left_mult_mat(self, i: int) -> Mat:
        """Matrix of x -> basis_i * x in the basis (column convention)."""
        if i not in self._left_mats:
            p = self.field.p
            data = [0] * (self.dim * self.dim)
            for j in range(self.dim):
                for k, c in self.mult[i][j]:
                    data[k * self.dim + j] = c % p
            self._left_mats[i] = Mat(p, self.dim, self.dim, data)
        return self._left_mats[i]

    # -- structure checks --

    def _check_shape(self) -> None:
        if sorted(self.idem + self.radical) != list(range(self.dim)):
            raise ValueError("idempotents and radical must partition the basis")
        for i in self.idem:
            for j in self.idem:
                want = self.basis_vec(i) if i == j else (0,) * self.dim
                if self.mul_vecs(self.basis_vec(i), self.basis_vec(j)) != want:
                    raise ValueError("designated idempotents are not orthogonal")
        total = [0] * self.dim
        for i in self.idem:
            total[i] += 1
        if tuple(x % self.field.p for x in total) != self.unit:
            raise ValueError("idempotents do not sum to the unit")

    def check(self) -> None:
        """Full axiom check: unit, associativity, radical ideal, nilpotency."""
        vecs = [self.basis_vec(i) for i in range(self.dim)]
        for v in vecs:
            if self.mul_vecs(self.unit, v) != v or self.mul_vecs(v, self.unit) != v:
                raise ValueError("unit axiom fails")
        for x in vecs:
            for y in vecs:
                xy = self.mul_vecs(x, y)
                for z in vecs:
                    if self.mul_vecs(xy, z) != self.mul_vecs(x, self.mul_vecs(y, z)):
                        raise ValueError("associativity fails")
        radset = set(self.radical)
        for r in self.radical:
            for j in range(self.dim):
                for vec in (self.mul_vecs(vecs[r], vecs[j]),
                            self.mul_vecs(vecs[j], vecs[r])):
                    if any(vec[k] and k not in radset for k in range(self.dim)):
                        raise ValueError("radical is not a two-sided ideal")
        # Nilpotency: powers of the radical must reach zero.
        p = self.field.p
        layer = [vecs[r] for r in self.radical]
        for _ in range(self.dim + 1):
            if not layer:
                break
            space = Subspace(p, self.dim, layer)
            nxt = []
            for i in range(space.dim):
                for r in self.radical:
                    w = self.mul_vecs(space.basis.row(i), vecs[r])
                    if any(w):
                        nxt.append(w)
            layer = nxt
        else:
            raise ValueError("radical is not nilpotent")

    def _compute_endpoints(self) -> tuple[tuple[int, int], ...]:
        """For each basis b, the unique (i, j) positions in the idempotent
        list with e_idem[j] * b * e_idem[i] = b."""
        out = []
        for b in range(self.dim):
            v = self.basis_vec(b)
            hits = []
            for ipos, i in enumerate(self.idem):
                for jpos, j in enumerate(self.idem):
                    w = self.mul_vecs(self.basis_vec(j),
                                      self.mul_vecs(v, self.basis_vec(i)))
                    if w == v:
                        hits.append((ipos, jpos))
            if len(hits) != 1:
                raise ValueError(f"basis element {self.labels[b]} is not "
                                 "homogeneous for the idempotents")
            out.append(hits[0])
        return tuple(out)

    def source_pos(self, b: int) -> int:
        return self.endpoints[b][0]

    def target_pos(self, b: int) -> int:
        return self.endpoints[b][1]

    def basis_by_source(self, ipos: int) -> list[int]:
        return [b for b in range(self.dim) if self.endpoints[b][0] == ipos]

    def basis_by_target(self, ipos: int) -> list[int]:
        return [b for b in range(self.dim) if self.endpoints[b][1] == ipos]

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, Algebra)
            and self.field == other.field
            and self.labels == other.labels
            and self.mult == other.mult
            and self.unit == other.unit
            and self.idem == other.idem
            and self.radical == other.radical
        )

    def __hash__(self) -> int:
        return hash((self.field, self.labels, self.mult, self.unit,
                     self.idem, self.radical))

    def __repr__(self) -> str:
        return f"Algebra(p={self.field.p}, dim={self.dim}, basis={list(self.labels)})"


class PathAlgebra(Algebra):
    """The path algebra of a finite acyclic quiver."""

    def __init__(self, field: Field, quiver: Quiver):
        self.quiver = quiver
        self.paths = tuple(quiver.all_paths())
        index = {p: i for i, p in enumerate(self.paths)}
        mult = []
        for pi in self.paths:
            row = []
            for pj in self.paths:
                if pi.source == pj.target:
                    comp = Path(pi.arrows + pj.arrows, pj.source, pi.target)
                    row.append(((index[comp], 1),))
                else:
                    row.append(())
            mult.append(row)
        trivial = [i for i, p in enumerate(self.paths) if p.length == 0]
        unit = [0] * len(self.paths)
        for i in trivial:
            unit[i] = 1
        super().__init__(
            field,
            [quiver.path_label(p) for p in self.paths],
            mult,
            unit,
            trivial,
            [i for i, p in enumerate(self.paths) if p.length > 0],
        )

    def vertex_pos(self, v) -> int:
        """Position of vertex v in the idempotent list."""
        for pos, i in enumerate(self.idem):
            if self.paths[i].source == v:
                return pos
        raise ValueError(f"unknown vertex {v!r}")


def path_algebra(field: Field, quiver: Quiver) -> PathAlgebra:
    alg = PathAlgebra(field, quiver)
    alg.check()
    return alg


def opposite_algebra(alg: Algebra) -> Algebra:
    """Same basis with reversed multiplication."""
    mult = [[alg.mult[j][i] for j in range(alg.dim)] for i in range(alg.dim)]
    return Algebra(alg.field, alg.labels, mult, alg.unit, alg.idem, alg.radical)


@dataclass(frozen=True)
class Bimodule:
    """A (B, A)-bimodule with both actions stored as matrices.

    left_act[c] is the matrix of x -> b_c . x for the basis of B;
    right_act[a] is the matrix of x -> x . b_a for the basis of A, an
    anti-homomorphism.
    """

    left_alg: Algebra
    right_alg: Algebra
    dim: int
    labels: tuple[str, ...]
    left_act: tuple[Mat, ...]
    right_act: tuple[Mat, ...]

    def check(self) -> None:
        p = self.left_alg.field.p
        ident = Mat.identity(p, self.dim)
        unit_l = _combine(self.left_act, self.left_alg.unit, p, self.dim)
        unit_r = _combine(self.right_act, self.right_alg.unit, p, self.dim)
        if unit_l != ident or unit_r != ident:
            raise ValueError("bimodule unit actions are not the identity")
        for i in range(self.left_alg.dim):
            for j in range(self.left_alg.dim):
                prod = _combine(self.left_act, _basis_product(self.left_alg, i, j),
                                p, self.dim)
                if self.left_act[i] @ self.left_act[j] != prod:
                    raise ValueError("left action is not a homomorphism")
        for i in range(self.right_alg.dim):
            for j in range(self.right_alg.dim):
                prod = _combine(self.right_act, _basis_product(self.right_alg, i, j),
                                p, self.dim)
                if self.right_act[j] @ self.right_act[i] != prod:
                    raise ValueError("right action is not an anti-homomorphism")
        for lm in self.left_act:
            for rm in self.right_act:
                if lm @ rm != rm @ lm:
                    raise ValueError("left and right actions do not commute")


def _basis_product(alg: Algebra, i: int, j: int) -> tuple[int, ...]:
    return alg.mul_vecs(alg.basis_vec(i), alg.basis_vec(j))


def _combine(mats, coords, p, dim) -> Mat:
    out = Mat.zeros(p, dim, dim)
    for i, c in enumerate(coords):
        if c:
            out = out + mats[i].scale(c)
    return out


@dataclass(frozen=True)
class CornerData:
    """The corner algebra eAe of a chosen idempotent e together with the
    bimodules eA and Ae that drive the section functors."""

    parent: Algebra
    positions: tuple[int, ...]
    e_vec: tuple[int, ...]
    sub: Algebra
    kept: tuple[int, ...]
    eA: Bimodule
    Ae: Bimodule
    eA_e_coords: tuple[int, ...]
    Ae_e_coords: tuple[int, ...]


def corner_algebra(alg: Algebra, positions) -> CornerData:
    """Build eAe for e the sum of the idempotents at the given positions.

    Requires every basis element b of the parent to satisfy
    e*b*e in {0, b}, which holds for any basis homogeneous under the
    idempotents (in particular for path algebras and their corners).
    """
    positions = tuple(sorted(set(positions)))
    if not positions:
        raise ValueError("corner needs at least one idempotent")
    for pos in positions:
        if not 0 <= pos < len(alg.idem):
            raise ValueError(f"idempotent position {pos} out of range")
    p = alg.field.p
    e = [0] * alg.dim
    for pos in positions:
        e[alg.idem[pos]] = 1
    e = tuple(e)
    posset = set(positions)
    kept = tuple(b for b in range(alg.dim)
                 if alg.endpoints[b][0] in posset and alg.endpoints[b][1] in posset)
    for b in range(alg.dim):
        ebe = alg.mul_vecs(e, alg.mul_vecs(alg.basis_vec(b), e))
        want = alg.basis_vec(b) if b in kept else (0,) * alg.dim
        if ebe != want:
            raise ValueError("basis is not compatible with the corner idempotent")
    back = {b: t for t, b in enumerate(kept)}

    def restrict(pairs):
        out = []
        for k, c in pairs:
            if k not in back:
                raise ValueError("corner multiplication escapes the corner")
            out.append((back[k], c))
        return tuple(out)

    mult = [[restrict(alg.mult[i][j]) for j in kept] for i in kept]
    unit = tuple(e[b] for b in kept)
    idem_sub = [back[alg.idem[pos]] for pos in positions]
    radical_sub = [back[b] for b in kept if b in set(alg.radical)]
    sub = Algebra(alg.field, [alg.labels[b] for b in kept], mult, unit,
                  idem_sub, radical_sub)
    sub.check()

    eA_basis = tuple(b for b in range(alg.dim) if alg.endpoints[b][1] in posset)
    Ae_basis = tuple(b for b in range(alg.dim) if alg.endpoints[b][0] in posset)

    def action_mats(space, acting_dim, product):
        pos_of = {b: t for t, b in enumerate(space)}
        mats = []
        for a in range(acting_dim):
            data = [0] * (len(space) * len(space))
            for t, b in enumerate(space):
                vec = product(a, b)
                for k in range(alg.dim):
                    if vec[k]:
                        if k not in pos_of:
                            raise ValueError("bimodule action escapes the basis")
                        data[pos_of[k] * len(space) + t] = vec[k]
            mats.append(Mat(p, len(space), len(space), data))
        return tuple(mats)

    eA = Bimodule(
        sub, alg, len(eA_basis), tuple(alg.labels[b] for b in eA_basis),
        action_mats(eA_basis, sub.dim,
                    lambda c, b: alg.mul_vecs(alg.basis_vec(kept[c]), alg.basis_vec(b))),
        action_mats(eA_basis, alg.dim,
                    lambda a, b: alg.mul_vecs(alg.basis_vec(b), alg.basis_vec(a))),
    )
    Ae = Bimodule(
        alg, sub, len(Ae_basis), tuple(alg.labels[b] for b in Ae_basis),
        action_mats(Ae_basis, alg.dim,
                    lambda a, b: alg.mul_vecs(alg.basis_vec(a), alg.basis_vec(b))),
        action_mats(Ae_basis, sub.dim,
                    lambda c, b: alg.mul_vecs(alg.basis_vec(b), alg.basis_vec(kept[c]))),
    )
    eA.check()
    Ae.check()

    def coords_in(space):
        return tuple(e[b] for b in space)

    return CornerData(alg, positions, e, sub, kept, eA, Ae,
                      coords_in(eA_basis), coords_in(Ae_basis))
