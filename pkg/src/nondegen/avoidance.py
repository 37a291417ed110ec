"""Shear-composition maps into the complement of an affine-subspace union.

Given a finite union Z of affine subspaces of codimension >= 2 avoiding
the origin, each coordinate axis gets a shear that adds to that
coordinate a polynomial vanishing on the axis projection of Z and equal
to 1 at the origin.  Composing the shears and tracking the origin yields
a polynomial map whose image misses Z, fixes every axis pointwise, and
has full Jacobian rank at 0 -- all certified exactly over the rationals.

When some projection of Z covers the origin of its hyperplane the build
retries under seeded random unimodular coordinate changes; certificates
are then stated in the changed coordinates and membership checks conjugate
back.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Sequence

from .errors import BudgetExhausted, CertificateError, PreconditionError
from .linalg import det, nullspace, rank, rref, solve
from .polynomials import MultiPoly, UniPoly
from .scalars import RAT, is_rational, rational

COORD_CHANGE_RETRIES = 32
_COORD_ENTRY_SPAN = 3  # unimodular retry matrices have entries in [-3, 3]


@dataclass(frozen=True)
class AffineSubspace:
    """{x : rows * x = rhs} with exactly independent rational rows."""

    rows: tuple
    rhs: tuple

    def __post_init__(self):
        rows = tuple(tuple(rational(x) for x in r) for r in self.rows)
        rhs = tuple(rational(x) for x in self.rhs)
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "rhs", rhs)
        if not rows:
            raise PreconditionError("a subspace needs at least one equation")
        if len({len(r) for r in rows}) != 1:
            raise PreconditionError("ragged constraint matrix")
        if len(rhs) != len(rows):
            raise PreconditionError("rhs length must match the row count")
        if rank(rows) != len(rows):
            raise PreconditionError("constraint rows must be independent")

    @property
    def ambient(self) -> int:
        return len(self.rows[0])

    @property
    def codim(self) -> int:
        return len(self.rows)

    def contains(self, point: Sequence) -> bool:
        """Exact membership test."""
        if len(point) != self.ambient:
            raise PreconditionError("point arity mismatch")
        for row, b in zip(self.rows, self.rhs):
            total = 0
            for a, x in zip(row, point):
                total = total + a * x
            if total != b:
                return False
        return True

    def contains_origin(self) -> bool:
        return all(not b for b in self.rhs)

    def frame(self) -> tuple[list, list]:
        """(base point, direction basis) parameterizing the subspace."""
        base = solve(self.rows, self.rhs)
        if base is None:
            raise PreconditionError("inconsistent subspace equations")
        return base, nullspace(self.rows, self.ambient)

    def canonical(self) -> tuple:
        """Hashable reduced form for deduplication."""
        reduced, _ = rref([list(r) + [b] for r, b in zip(self.rows, self.rhs)])
        return tuple(tuple(row) for row in reduced if any(row))

    def transformed(self, matrix: Sequence[Sequence]) -> "AffineSubspace":
        """The preimage under x = matrix * x' (rows become rows * matrix)."""
        n = self.ambient
        new_rows = []
        for row in self.rows:
            new_rows.append(
                tuple(
                    sum((row[i] * rational(matrix[i][j]) for i in range(n)), RAT(0))
                    for j in range(n)
                )
            )
        return AffineSubspace(tuple(new_rows), self.rhs)


@dataclass(frozen=True)
class AffineSubspaceSet:
    """Finite union of affine subspaces of codimension >= 2, avoiding 0."""

    ambient: int
    components: tuple

    def __post_init__(self):
        comps = tuple(self.components)
        object.__setattr__(self, "components", comps)
        for comp in comps:
            if not isinstance(comp, AffineSubspace):
                raise PreconditionError("components must be AffineSubspace")
            if comp.ambient != self.ambient:
                raise PreconditionError("component ambient dimension mismatch")
            if comp.codim < 2:
                raise PreconditionError("components must have codimension >= 2")
            if comp.contains_origin():
                raise PreconditionError("the origin must avoid every component")

    @classmethod
    def from_data(cls, ambient: int, data: Sequence) -> "AffineSubspaceSet":
        comps = tuple(AffineSubspace(tuple(m), tuple(b)) for m, b in data)
        return cls(ambient, comps)


def project_component(zset: AffineSubspaceSet, axis: int) -> tuple:
    """Coordinate-deletion images of the components along one axis.

    Eliminating variable `axis` from {Mx = b}: rows are combined so at
    most one keeps a nonzero entry in the deleted column; that row only
    fixes the deleted coordinate and is dropped.  The image is again an
    affine subspace, of codimension codim or codim-1.
    """
    if not 0 <= axis < zset.ambient:
        raise PreconditionError("axis out of range")
    out = []
    seen = set()
    for comp in zset.components:
        aug = [list(r) + [b] for r, b in zip(comp.rows, comp.rhs)]
        # move the deleted column to the front so rref leaves at most one
        # row touching it
        permuted = [[row[axis]] + row[:axis] + row[axis + 1 : -1] + [row[-1]] for row in aug]
        reduced, pivots = rref(permuted)
        kept_rows = []
        kept_rhs = []
        for i, row in enumerate(reduced):
            if row[0]:
                continue  # this row determines the deleted coordinate
            body = row[1:-1]
            if any(body):
                kept_rows.append(tuple(body))
                kept_rhs.append(row[-1])
        if not kept_rows:
            continue  # projects onto the whole hyperplane (cannot happen: codim >= 2)
        proj = AffineSubspace(tuple(kept_rows), tuple(kept_rhs))
        key = proj.canonical()
        if key not in seen:
            seen.add(key)
            out.append(proj)
    return tuple(out)


class OriginInProjection(PreconditionError):
    """A projected component passes through the origin of its hyperplane."""


def vanishing_poly(components: Sequence[AffineSubspace], nvars: int) -> MultiPoly:
    """Product of affine-linear forms: 1 at the origin, 0 on each component.

    Per component, the lowest-index equation with nonzero right-hand side
    contributes the factor 1 - (row . x)/b.  Raises OriginInProjection
    when some component contains the origin (no such equation exists).
    """
    poly = MultiPoly.constant(nvars, RAT(1))
    for comp in components:
        if comp.ambient != nvars:
            raise PreconditionError("component dimension mismatch")
        pick = next(
            ((row, b) for row, b in zip(comp.rows, comp.rhs) if b), None
        )
        if pick is None:
            raise OriginInProjection(
                "projected component passes through the origin"
            )
        row, b = pick
        factor = MultiPoly.affine([-a / b for a in row], RAT(1))
        poly = poly * factor
    return poly


@dataclass(frozen=True)
class ShearFamily:
    """Per-axis vanishing polynomials P_i on the hyperplanes H_i."""

    polys: tuple  # P_i in the n-1 variables of H_i, ordered by axis


@dataclass(frozen=True)
class AvoidanceMap:
    """Polynomial map t -> F(t) missing Z, in construction coordinates.

    ``coord_change`` is the unimodular matrix U with x = U x' relating
    original coordinates x to construction coordinates x'; it is the
    identity unless a retry was needed.  The axis identities
    F(z e_i) = z e_i hold in construction coordinates.
    """

    components: tuple  # MultiPoly in t_1..t_n
    coord_change: tuple

    @property
    def n(self) -> int:
        return len(self.components)

    def original_components(self) -> tuple:
        """The map composed back to original coordinates: U * F."""
        n = self.n
        out = []
        for i in range(n):
            acc = MultiPoly.zero(n)
            for j in range(n):
                u = rational(self.coord_change[i][j])
                if u:
                    acc = acc + self.components[j] * u
            out.append(acc)
        return tuple(out)


@dataclass(frozen=True)
class AvoidanceBuild:
    map: AvoidanceMap
    shears: ShearFamily
    coord_change: tuple
    zset_transformed: AffineSubspaceSet


def _identity_matrix(n: int) -> tuple:
    return tuple(
        tuple(RAT(1) if i == j else RAT(0) for j in range(n)) for i in range(n)
    )


def _random_unimodular(n: int, rng: random.Random) -> tuple:
    span = _COORD_ENTRY_SPAN
    for _ in range(1000):
        m = [[rng.randint(-span, span) for _ in range(n)] for _ in range(n)]
        d = det([[RAT(x) for x in row] for row in m])
        if d == 1 or d == -1:
            return tuple(tuple(RAT(x) for x in row) for row in m)
    raise BudgetExhausted("failed to sample a unimodular matrix")


def build_avoidance_map(zset: AffineSubspaceSet, seed: int = 0) -> AvoidanceBuild:
    """Shear-composition map into the complement of Z, tracked at the origin.

    Shear i adds t_i * P_i(remaining coordinates) to coordinate i, where
    P_i kills the axis-i projection of Z and is 1 at 0; the composed image
    of the origin is expanded symbolically into exact polynomials in t.
    Deterministic for a fixed (zset, seed): coordinate-change retries use
    seeded unimodular matrices.
    """
    n = zset.ambient
    if n < 1:
        raise PreconditionError("ambient dimension must be >= 1")
    rng = random.Random(seed)
    matrix = _identity_matrix(n)
    for attempt in range(COORD_CHANGE_RETRIES + 1):
        if attempt:
            matrix = _random_unimodular(n, rng)
        try:
            zt = AffineSubspaceSet(
                n, tuple(c.transformed(matrix) for c in zset.components)
            )
        except PreconditionError:
            continue  # the transform cannot re-create an origin hit, but be safe
        try:
            shear_polys = []
            for i in range(n):
                projected = project_component(zt, i)
                shear_polys.append(vanishing_poly(projected, n - 1))
        except OriginInProjection:
            continue
        # symbolic composition: v starts at 0, shear i adds t_i * P_i(pi_i(v))
        v = [MultiPoly.zero(n) for _ in range(n)]
        t = [MultiPoly.variable(n, i) for i in range(n)]
        for i in range(n):
            others = v[:i] + v[i + 1 :]
            v[i] = v[i] + t[i] * shear_polys[i].compose(others)
        return AvoidanceBuild(
            map=AvoidanceMap(components=tuple(v), coord_change=matrix),
            shears=ShearFamily(polys=tuple(shear_polys)),
            coord_change=matrix,
            zset_transformed=zt,
        )
    raise BudgetExhausted(
        f"no coordinate change avoided the origin in {COORD_CHANGE_RETRIES} retries"
    )


def evaluate_map(build: AvoidanceBuild, point: Sequence, original: bool = True):
    """F at a concrete parameter point via the shear sequence (exact).

    With ``original=True`` the value is returned in original coordinates
    (composed with the coordinate change).
    """
    n = build.map.n
    point = [rational(x) if is_rational(x) else x for x in point]
    if len(point) != n:
        raise PreconditionError("parameter arity mismatch")
    v = [0] * n
    for i in range(n):
        others = v[:i] + v[i + 1 :]
        v[i] = v[i] + point[i] * build.shears.polys[i](others)
    if not original:
        return v
    u = build.coord_change
    return [
        sum((u[i][j] * v[j] for j in range(n)), RAT(0)) for i in range(n)
    ]


@dataclass(frozen=True)
class AvoidanceCertificate:
    """Exact evidence that the built map behaves as constructed."""

    stabilizes_pointwise: bool
    axis_identities: bool
    jacobian_rank: int
    samples_checked: int
    sample_hits: int  # exact Z-membership violations among samples (must be 0)

    @property
    def ok(self) -> bool:
        return (
            self.stabilizes_pointwise
            and self.axis_identities
            and self.sample_hits == 0
        )


def certify_avoidance(
    build: AvoidanceBuild,
    zset: AffineSubspaceSet,
    samples: int = 1000,
    seed: int = 0,
) -> AvoidanceCertificate:
    """Three exact checks plus exact-membership sampling.

    (1) each shear fixes every component of (transformed) Z pointwise, as
    a polynomial identity on a symbolic affine frame; (2) F(z e_i) = z e_i
    as polynomial identities; (3) the Jacobian of F at 0 has full rank
    over the exact field.  Then `samples` seeded rational points t are
    checked exactly: F(t) must avoid Z.  Any failure raises
    CertificateError (a construction bug, surfaced loudly).
    """
    n = build.map.n
    zt = build.zset_transformed

    # (1) pointwise stabilization on symbolic frames
    for i in range(n):
        poly = build.shears.polys[i]
        for comp in zt.components:
            base, dirs = comp.frame()
            k = len(dirs)
            # q(s) = base + sum s_l dirs[l], as multivariate polynomials in s
            coords = []
            for c in range(n):
                coeffs = [dirs[l][c] for l in range(k)]
                coords.append(MultiPoly.affine(coeffs, base[c]))
            others = coords[:i] + coords[i + 1 :]
            if not poly.compose(others).is_zero:
                raise CertificateError(
                    f"shear {i} does not stabilize a component pointwise"
                )

    # (2) axis identities F(z e_i) = z e_i
    zeta = MultiPoly.variable(1, 0)
    zero1 = MultiPoly.zero(1)
    for i in range(n):
        args = [zeta if j == i else zero1 for j in range(n)]
        for j in range(n):
            image = build.map.components[j].compose(args)
            want = zeta if j == i else zero1
            if image != want:
                raise CertificateError(f"axis identity fails on axis {i}")

    # (3) Jacobian rank at the origin
    jac = []
    for j in range(n):
        row = []
        for i in range(n):
            exps = tuple(1 if x == i else 0 for x in range(n))
            row.append(build.map.components[j].terms.get(exps, RAT(0)))
        jac.append(row)
    jrank = rank(jac)
    if jrank != n:
        raise CertificateError(f"Jacobian rank {jrank} < {n} at the origin")

    # exact avoidance sampling in original coordinates
    rng = random.Random(seed)
    hits = 0
    for _ in range(samples):
        t = [RAT(rng.randint(-9, 9), rng.randint(1, 4)) for _ in range(n)]
        x = evaluate_map(build, t, original=True)
        if any(comp.contains(x) for comp in zset.components):
            hits += 1
    if hits:
        raise CertificateError(f"{hits} sampled parameters landed inside Z")

    return AvoidanceCertificate(
        stabilizes_pointwise=True,
        axis_identities=True,
        jacobian_rank=jrank,
        samples_checked=samples,
        sample_hits=0,
    )


@dataclass(frozen=True)
class ComposedCurve:
    """A polynomial curve h(phi(z)) with sampled image points."""

    components: tuple  # UniPoly
    samples: tuple  # image points at z = 0, 1, ..., sampled as complex


def compose_dense_curve(
    h: Sequence[MultiPoly], phi: Sequence[UniPoly], sample_count: int = 64
) -> ComposedCurve:
    """Symbolic composition z -> h(phi(z)) plus sampled image points."""
    h = tuple(h)
    phi = tuple(phi)
    if not h:
        raise PreconditionError("need at least one output component")
    nvars = h[0].nvars
    if any(comp.nvars != nvars for comp in h):
        raise PreconditionError("output components disagree on arity")
    if len(phi) != nvars:
        raise PreconditionError(
            f"curve has {len(phi)} components, map expects {nvars}"
        )
    composed = tuple(comp.subs_unipoly(list(phi)) for comp in h)
    samples = []
    for t in range(sample_count):
        samples.append(tuple(complex(c(float(t))) for c in composed))
    return ComposedCurve(components=composed, samples=tuple(samples))
