"""Univariate and multivariate polynomial arithmetic over both scalar modes.

``UniPoly`` is dense (coefficients lowest degree first, trailing zeros
trimmed, the zero polynomial is the empty tuple).  ``MultiPoly`` is sparse
(exponent tuple -> coefficient, zero coefficients never stored).

The module also provides the certified disk bound ``sup_norm_bound``: a
coefficient triangle-inequality estimate that is a guaranteed over-estimate
of sup |P| on |z| <= r.  In exact mode the returned value is rational,
using certified rational upper brackets for the coefficient moduli, so
"bound < eps" comparisons downstream are decided exactly.

All polynomial sizes are limited by ``DEGREE_CAP`` so runaway constructions
fail loudly instead of exhausting memory.
"""

from __future__ import annotations

from typing import Sequence

from .errors import CertificateError, DegreeCapExceeded, PreconditionError
from .scalars import (
    RAT,
    SQRT_SCALE,
    Qi,
    abs_upper,
    abs_upper_cheap,
    as_qi,
    int_lcm,
    is_exact,
    is_rational,
    rational,
)

DEGREE_CAP = 10_000


def _check_cap(degree: int) -> None:
    if degree > DEGREE_CAP:
        raise DegreeCapExceeded(
            f"polynomial degree {degree} exceeds cap {DEGREE_CAP}"
        )


def _exact_div(a, b):
    """Division that never leaves exact mode for exact operands."""
    if is_exact(a) and is_exact(b):
        if isinstance(a, Qi) or isinstance(b, Qi):
            return as_qi(a) / as_qi(b)
        return RAT(a) / RAT(b)
    return a / b


#: Length above which exact Horner switches to the common-denominator path.
_BIG_EVAL_CUTOFF = 64


def _scaled_integer_form(coeffs):
    """(common denominator, integer-scaled coefficients) of exact coeffs.

    Clearing denominators once lets Horner run on (Gaussian) integers,
    avoiding a giant gcd per step when denominators are large and
    unrelated.
    """
    den = 1
    for c in coeffs:
        if isinstance(c, Qi):
            den = int_lcm(den, int_lcm(c.re.denominator, c.im.denominator))
        elif c:
            den = int_lcm(den, rational(c).denominator)
    den = int(den)
    scaled = []
    for c in coeffs:
        if isinstance(c, Qi):
            scaled.append(
                Qi(
                    c.re.numerator * (den // c.re.denominator),
                    c.im.numerator * (den // c.im.denominator),
                )
            )
        elif c:
            cq = rational(c)
            scaled.append(cq.numerator * (den // cq.denominator))
        else:
            scaled.append(0)
    return den, tuple(scaled)


class UniPoly:
    """Dense univariate polynomial; immutable once constructed."""

    __slots__ = ("coeffs", "_scaled")

    def __init__(self, coeffs: Sequence = ()):
        coeffs = list(coeffs)
        while coeffs and not coeffs[-1]:
            coeffs.pop()
        _check_cap(len(coeffs) - 1)
        self.coeffs = tuple(coeffs)
        self._scaled = None  # lazy cache of the cleared-denominator form

    # -- constructors ------------------------------------------------

    @classmethod
    def zero(cls) -> "UniPoly":
        return cls(())

    @classmethod
    def constant(cls, c) -> "UniPoly":
        return cls((c,))

    @classmethod
    def monomial(cls, k: int, c=1) -> "UniPoly":
        _check_cap(k)
        return cls((0,) * k + (c,))

    @classmethod
    def variable(cls) -> "UniPoly":
        return cls((0, 1))

    # -- structure ---------------------------------------------------

    @property
    def degree(self) -> int:
        """Degree; -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def mode(self) -> str:
        return "exact" if all(is_exact(c) for c in self.coeffs) else "float"

    def as_float(self) -> "UniPoly":
        return UniPoly(tuple(complex(c) for c in self.coeffs))

    # -- arithmetic --------------------------------------------------

    def __add__(self, other):
        if not isinstance(other, UniPoly):
            return NotImplemented
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] = out[i] + c
        return UniPoly(out)

    def __sub__(self, other):
        if not isinstance(other, UniPoly):
            return NotImplemented
        return self + (-other)

    def __neg__(self):
        return UniPoly(tuple(-c for c in self.coeffs))

    def __mul__(self, other):
        if isinstance(other, UniPoly):
            if self.is_zero or other.is_zero:
                return UniPoly()
            _check_cap(self.degree + other.degree)
            out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
            for i, a in enumerate(self.coeffs):
                if not a:
                    continue
                for j, b in enumerate(other.coeffs):
                    if b:
                        out[i + j] = out[i + j] + a * b
            return UniPoly(out)
        return UniPoly(tuple(c * other for c in self.coeffs))

    def __rmul__(self, other):
        return UniPoly(tuple(other * c for c in self.coeffs))

    def __pow__(self, n: int):
        if not isinstance(n, int) or n < 0:
            return NotImplemented
        result = UniPoly.constant(1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base if n > 1 else base
            n >>= 1
        return result

    def __call__(self, z):
        """Horner evaluation; exact when self and z are exact."""
        if (
            len(self.coeffs) > _BIG_EVAL_CUTOFF
            and is_exact(z)
            and self.mode == "exact"
        ):
            if self._scaled is None:
                self._scaled = _scaled_integer_form(self.coeffs)
            den, scaled = self._scaled
            acc = 0
            for c in reversed(scaled):
                acc = acc * z + c
            return _exact_div(acc, RAT(den))
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * z + c
        return acc

    def derivative(self, k: int = 1) -> "UniPoly":
        if k < 0:
            raise PreconditionError("derivative order must be >= 0")
        coeffs = self.coeffs
        for _ in range(k):
            if len(coeffs) <= 1:
                return UniPoly()
            coeffs = tuple(j * coeffs[j] for j in range(1, len(coeffs)))
        return UniPoly(coeffs)

    # -- protocol ----------------------------------------------------

    def __eq__(self, other):
        if not isinstance(other, UniPoly):
            return NotImplemented
        if len(self.coeffs) != len(other.coeffs):
            return False
        return all(a == b for a, b in zip(self.coeffs, other.coeffs))

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        return f"UniPoly({list(self.coeffs)!r})"


# ---------------------------------------------------------------------
# spec-level operations
# ---------------------------------------------------------------------

def poly_eval(P: UniPoly, z):
    """Value of P at z by the Horner recurrence."""
    return P(z)


def poly_derivative(P: UniPoly, k: int = 1) -> UniPoly:
    """k-th formal derivative of P."""
    return P.derivative(k)


def sup_norm_bound(
    P: UniPoly, r, *, strictly_below=None, tight: bool = True, scale: int = SQRT_SCALE
):
    """Certified over-estimate of sup{|P(z)| : |z| <= r}: sum_k |a_k| r^k.

    Exact mode (all coefficients and r exact) returns a rational upper
    bound, replacing each |a_k| by a certified rational upper bracket.
    With ``tight=False`` the coefficient brackets use the isqrt-free
    estimate max+min/2 (within 6.1 percent); still a guaranteed
    over-estimate, just coarser.  When ``strictly_below`` is given (exact
    mode only) the cheap brackets are tried first and the tight ones are
    refined until the returned bound is < that threshold; this must be
    mathematically possible or a CertificateError is raised.
    """
    if isinstance(r, Qi):
        raise PreconditionError("radius must be a real scalar")
    if r <= 0:
        raise PreconditionError("radius must be positive")
    if P.mode != "exact" or not is_rational(r):
        rf = float(r)
        total = 0.0
        rk = 1.0
        for c in P.coeffs:
            total += abs(complex(c)) * rk
            rk *= rf
        return total

    rq = rational(r)
    if strictly_below is not None or not tight:
        total = RAT(0)
        rk = RAT(1)
        for c in P.coeffs:
            if c:
                total += abs_upper_cheap(c) * rk
            rk *= rq
        if strictly_below is None:
            return total
        if total < strictly_below:
            return total
    for _ in range(6):
        total = RAT(0)
        rk = RAT(1)
        for c in P.coeffs:
            if c:
                total += abs_upper(c, scale) * rk
            rk *= rq
        if strictly_below is None or total < strictly_below:
            return total
        scale = scale * scale
    raise CertificateError(
        "sup-norm bound does not refine below the requested threshold"
    )


def sampled_sup(P: UniPoly, r, m: int) -> float:
    """Max of |P| over m equispaced points on the circle |z| = r.

    A float lower estimate of the true sup norm (used empirically; the
    certified direction is sup_norm_bound).
    """
    if m < 1:
        raise PreconditionError("sample count must be >= 1")
    if r <= 0:
        raise PreconditionError("radius must be positive")
    if P.is_zero:
        return 0.0
    from ._kernels import max_abs_on_circle

    return max_abs_on_circle([complex(c) for c in P.coeffs], float(r), m)


def hermite_interpolate(sites: Sequence) -> UniPoly:
    """Minimal-degree polynomial matching prescribed jets at distinct points.

    ``sites`` is a sequence of (point, jet) pairs where jet is the vector
    (value, first derivative, ..., k-th derivative) to prescribe at that
    point.  Computed in confluent Newton form (repeated-node divided
    differences); exact in exact mode.  The result is the unique
    interpolant of degree < total number of conditions.
    """
    pts = [p for p, _ in sites]
    for i in range(len(pts)):
        for j in range(i + 1, len(pts)):
            if pts[i] == pts[j]:
                raise PreconditionError(f"duplicate site point {pts[i]!r}")

    nodes = []
    jets = []
    for p, jet in sites:
        jet = tuple(jet)
        if not jet:
            raise PreconditionError("each site needs a jet of length >= 1")
        for _ in range(len(jet)):
            nodes.append(p)
            jets.append(jet)
    n = len(nodes)
    if n == 0:
        return UniPoly()

    fact = [1] * n
    for j in range(1, n):
        fact[j] = fact[j - 1] * j

    # Divided-difference columns with repeated nodes: inside a constant node
    # block the entry is f^(j)(p)/j!, otherwise the usual quotient recurrence.
    col = [jets[i][0] for i in range(n)]
    newton = [col[0]]
    for j in range(1, n):
        new = []
        for i in range(n - j):
            if nodes[i] == nodes[i + j]:
                entry = _exact_div(jets[i][j], fact[j])
            else:
                entry = _exact_div(col[i + 1] - col[i], nodes[i + j] - nodes[i])
            new.append(entry)
        col = new
        newton.append(col[0])

    # Expand the Newton form into dense coefficients.
    result = UniPoly()
    basis = UniPoly.constant(1)
    for j, c in enumerate(newton):
        if c:
            result = result + basis * c
        if j + 1 < n:
            basis = basis * UniPoly((-nodes[j], 1))
    return result


# ---------------------------------------------------------------------
# sparse multivariate polynomials
# ---------------------------------------------------------------------

class MultiPoly:
    """Sparse multivariate polynomial with a fixed variable count."""

    __slots__ = ("nvars", "terms")

    def __init__(self, nvars: int, terms=None):
        if nvars < 0:
            raise PreconditionError("variable count must be >= 0")
        self.nvars = nvars
        clean = {}
        for exps, c in (terms or {}).items():
            exps = tuple(exps)
            if len(exps) != nvars:
                raise PreconditionError("exponent arity mismatch")
            if c:
                acc = clean.get(exps, 0) + c
                if acc:
                    clean[exps] = acc
                elif exps in clean:
                    del clean[exps]
        for exps in clean:
            _check_cap(sum(exps))
        self.terms = clean

    @classmethod
    def zero(cls, nvars: int) -> "MultiPoly":
        return cls(nvars, {})

    @classmethod
    def constant(cls, nvars: int, c) -> "MultiPoly":
        return cls(nvars, {(0,) * nvars: c})

    @classmethod
    def variable(cls, nvars: int, idx: int) -> "MultiPoly":
        if not 0 <= idx < nvars:
            raise PreconditionError(f"variable index {idx} out of range")
        exps = [0] * nvars
        exps[idx] = 1
        return cls(nvars, {tuple(exps): RAT(1)})

    @classmethod
    def affine(cls, coeffs: Sequence, const) -> "MultiPoly":
        """const + sum_i coeffs[i] * x_i."""
        nvars = len(coeffs)
        terms = {}
        if const:
            terms[(0,) * nvars] = const
        for i, c in enumerate(coeffs):
            if c:
                exps = [0] * nvars
                exps[i] = 1
                terms[tuple(exps)] = c
        return cls(nvars, terms)

    @property
    def is_zero(self) -> bool:
        return not self.terms

    @property
    def degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        return max((sum(e) for e in self.terms), default=-1)

    def _coerce(self, other) -> "MultiPoly":
        if not isinstance(other, MultiPoly):
            other = MultiPoly.constant(self.nvars, other)
        if other.nvars != self.nvars:
            raise PreconditionError("variable count mismatch")
        return other

    def __add__(self, other):
        other = self._coerce(other)
        out = dict(self.terms)
        for exps, c in other.terms.items():
            out[exps] = out.get(exps, 0) + c
        return MultiPoly(self.nvars, out)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        return self + (-other)

    def __rsub__(self, other):
        return self._coerce(other) + (-self)

    def __neg__(self):
        return MultiPoly(self.nvars, {e: -c for e, c in self.terms.items()})

    def __mul__(self, other):
        if not isinstance(other, MultiPoly):
            return MultiPoly(
                self.nvars, {e: c * other for e, c in self.terms.items()}
            )
        if other.nvars != self.nvars:
            raise PreconditionError("variable count mismatch")
        out = {}
        for ea, ca in self.terms.items():
            for eb, cb in other.terms.items():
                key = tuple(x + y for x, y in zip(ea, eb))
                out[key] = out.get(key, 0) + ca * cb
        return MultiPoly(self.nvars, out)

    def __rmul__(self, other):
        return self * other

    def __pow__(self, n: int):
        if not isinstance(n, int) or n < 0:
            return NotImplemented
        result = MultiPoly.constant(self.nvars, RAT(1))
        for _ in range(n):
            result = result * self
        return result

    def __call__(self, values: Sequence):
        """Evaluate at a point (exact when everything is exact)."""
        values = list(values)
        if len(values) != self.nvars:
            raise PreconditionError("point arity mismatch")
        total = 0
        for exps, c in self.terms.items():
            term = c
            for e, v in zip(exps, values):
                if e:
                    term = term * v**e
            total = total + term
        return total

    def partial(self, idx: int) -> "MultiPoly":
        """Partial derivative with respect to variable idx."""
        out = {}
        for exps, c in self.terms.items():
            e = exps[idx]
            if e:
                key = list(exps)
                key[idx] = e - 1
                key = tuple(key)
                out[key] = out.get(key, 0) + e * c
        return MultiPoly(self.nvars, out)

    def compose(self, args: Sequence["MultiPoly"]) -> "MultiPoly":
        """Substitute args[i] for variable i; args share one variable count."""
        if len(args) != self.nvars:
            raise PreconditionError("substitution arity mismatch")
        m = args[0].nvars if args else 0
        for a in args:
            if a.nvars != m:
                raise PreconditionError("substitution arity mismatch")
        powers = {}

        def arg_power(i, e):
            key = (i, e)
            if key not in powers:
                powers[key] = args[i] ** e
            return powers[key]

        result = MultiPoly.zero(m)
        for exps, c in self.terms.items():
            term = MultiPoly.constant(m, c)
            for i, e in enumerate(exps):
                if e:
                    term = term * arg_power(i, e)
            result = result + term
        return result

    def subs_unipoly(self, args: Sequence[UniPoly]) -> UniPoly:
        """Substitute a univariate polynomial for each variable."""
        if len(args) != self.nvars:
            raise PreconditionError("substitution arity mismatch")
        powers = {}

        def arg_power(i, e):
            key = (i, e)
            if key not in powers:
                powers[key] = args[i] ** e
            return powers[key]

        result = UniPoly()
        for exps, c in self.terms.items():
            term = UniPoly.constant(c)
            for i, e in enumerate(exps):
                if e:
                    term = term * arg_power(i, e)
            result = result + term
        return result

    def __eq__(self, other):
        if not isinstance(other, MultiPoly):
            return NotImplemented
        return self.nvars == other.nvars and self.terms == other.terms

    def __repr__(self):
        items = sorted(self.terms.items())
        return f"MultiPoly({self.nvars}, {items!r})"
