"""Exact rational polynomial arithmetic and sign certificates.

Everything in this module computes over Q (or Q + iQ); nothing falls back to
floating point.  Polynomials are dense, which is comfortable at the degrees
that occur here (at most ~14 per variable).
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from fractions import Fraction

from .errors import DomainError

RationalScalar = Fraction


class QComplex:
    """Complex scalar with exact rational parts."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        self.re = Fraction(re)
        self.im = Fraction(im)

    def __add__(self, other):
        o = _as_qcomplex(other)
        return QComplex(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __sub__(self, other):
        o = _as_qcomplex(other)
        return QComplex(self.re - o.re, self.im - o.im)

    def __rsub__(self, other):
        return _as_qcomplex(other) - self

    def __mul__(self, other):
        o = _as_qcomplex(other)
        return QComplex(self.re * o.re - self.im * o.im,
                        self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = _as_qcomplex(other)
        d = o.re * o.re + o.im * o.im
        if d == 0:
            raise ZeroDivisionError("division by zero QComplex")
        return QComplex((self.re * o.re + self.im * o.im) / d,
                        (o.re * self.im - self.re * o.im) / d)

    def __rtruediv__(self, other):
        return _as_qcomplex(other) / self

    def __neg__(self):
        return QComplex(-self.re, -self.im)

    def __eq__(self, other):
        try:
            o = _as_qcomplex(other)
        except (TypeError, ValueError):
            return NotImplemented
        return self.re == o.re and self.im == o.im

    def __hash__(self):
        return hash((self.re, self.im))

    def abs2(self) -> Fraction:
        return self.re * self.re + self.im * self.im

    def conjugate(self) -> "QComplex":
        return QComplex(self.re, -self.im)

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def __repr__(self):
        return f"QComplex({self.re!r}, {self.im!r})"


def _as_qcomplex(x) -> QComplex:
    if isinstance(x, QComplex):
        return x
    if isinstance(x, complex):
        raise TypeError("binary64 complex rejected; build a QComplex explicitly")
    return QComplex(Fraction(x))


def _coeff(x):
    """Coerce a scalar coefficient to Fraction (binary64 rejected)."""
    if isinstance(x, float):
        raise TypeError("float coefficient rejected; pass Fraction or int")
    return Fraction(x)


class UniPoly:
    """Dense univariate polynomial over Q, coefficients ascending in degree."""

    __slots__ = ("var", "c")

    def __init__(self, var: str, coeffs):
        c = [_coeff(x) for x in coeffs]
        while c and c[-1] == 0:
            c.pop()
        self.var = var
        self.c = tuple(c)

    @classmethod
    def constant(cls, var: str, value) -> "UniPoly":
        return cls(var, [value])

    @classmethod
    def x(cls, var: str) -> "UniPoly":
        return cls(var, [0, 1])

    @property
    def degree(self) -> int:
        # zero polynomial reports -1
        return len(self.c) - 1

    @property
    def lc(self) -> Fraction:
        if not self.c:
            raise DomainError("zero polynomial has no leading coefficient")
        return self.c[-1]

    def is_zero(self) -> bool:
        return not self.c

    def _check_var(self, other: "UniPoly") -> None:
        if self.var != other.var:
            raise DomainError(f"variable mismatch: {self.var} vs {other.var}")

    def __add__(self, other):
        if not isinstance(other, UniPoly):
            other = UniPoly.constant(self.var, other)
        self._check_var(other)
        n = max(len(self.c), len(other.c))
        a = list(self.c) + [Fraction(0)] * (n - len(self.c))
        for i, x in enumerate(other.c):
            a[i] += x
        return UniPoly(self.var, a)

    __radd__ = __add__

    def __sub__(self, other):
        return self + (-other if isinstance(other, UniPoly) else -Fraction(other))

    def __rsub__(self, other):
        return -self + other

    def __neg__(self):
        return UniPoly(self.var, [-x for x in self.c])

    def __mul__(self, other):
        if not isinstance(other, UniPoly):
            k = _coeff(other)
            return UniPoly(self.var, [k * x for x in self.c])
        self._check_var(other)
        if self.is_zero() or other.is_zero():
            return UniPoly(self.var, [])
        out = [Fraction(0)] * (len(self.c) + len(other.c) - 1)
        for i, a in enumerate(self.c):
            for j, b in enumerate(other.c):
                out[i + j] += a * b
        return UniPoly(self.var, out)

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, UniPoly):
            return self.c == UniPoly.constant(self.var, other).c
        return self.var == other.var and self.c == other.c

    def __hash__(self):
        return hash((self.var, self.c))

    def __call__(self, x):
        """Horner evaluation; exact for Fraction/int/QComplex arguments."""
        acc = x * 0
        for a in reversed(self.c):
            acc = acc * x + a
        return acc

    def derivative(self) -> "UniPoly":
        return UniPoly(self.var, [k * a for k, a in enumerate(self.c)][1:])

    def shift(self, offset) -> "UniPoly":
        """Exact composition p(var + offset), synthetic Horner."""
        off = _coeff(offset)
        out = UniPoly(self.var, [])
        xpo = UniPoly(self.var, [off, 1])
        for a in reversed(self.c):
            out = out * xpo + UniPoly.constant(self.var, a)
        return out

    def divmod(self, other: "UniPoly"):
        self._check_var(other)
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        q = [Fraction(0)] * max(0, len(self.c) - len(other.c) + 1)
        r = list(self.c)
        d = other.degree
        lc = other.lc
        while len(r) - 1 >= d and any(x != 0 for x in r):
            while r and r[-1] == 0:
                r.pop()
            if len(r) - 1 < d:
                break
            k = len(r) - 1 - d
            f = r[-1] / lc
            q[k] = f
            for i, b in enumerate(other.c):
                r[k + i] -= f * b
            r.pop()
        return UniPoly(self.var, q), UniPoly(self.var, r)

    def monic(self) -> "UniPoly":
        if self.is_zero():
            return self
        inv = 1 / self.lc
        return UniPoly(self.var, [inv * x for x in self.c])

    def __repr__(self):
        if self.is_zero():
            return "0"
        parts = []
        for k, a in enumerate(self.c):
            if a == 0:
                continue
            if k == 0:
                parts.append(str(a))
            elif k == 1:
                parts.append(f"{a}*{self.var}")
            else:
                parts.append(f"{a}*{self.var}^{k}")
        return " + ".join(parts)


def poly_gcd(a: UniPoly, b: UniPoly) -> UniPoly:
    """Monic gcd by the Euclidean algorithm (degrees here are small)."""
    while not b.is_zero():
        a, b = b, a.divmod(b)[1]
    return a.monic() if not a.is_zero() else a


def yun_squarefree(p: UniPoly):
    """Yun decomposition: list of (monic factor, multiplicity), factors coprime.

    The product of factor^multiplicity reproduces p up to its leading
    coefficient.
    """
    if p.is_zero():
        raise DomainError("zero polynomial has no square-free decomposition")
    p = p.monic()
    if p.degree == 0:
        return []
    d = p.derivative()
    g = poly_gcd(p, d)
    out = []
    if g.degree == 0:
        return [(p, 1)]
    w = p.divmod(g)[0]
    y = d.divmod(g)[0]
    z = y - w.derivative()
    i = 1
    while w.degree > 0:
        gi = poly_gcd(w, z)
        if gi.degree > 0:
            out.append((gi.monic(), i))
        w = w.divmod(gi)[0]
        y = z.divmod(gi)[0]
        z = y - w.derivative()
        i += 1
    return out


def odd_multiplicity_part(p: UniPoly) -> UniPoly:
    """Monic product of the factors of odd multiplicity; carries every sign change."""
    out = UniPoly.constant(p.var, 1)
    for f, m in yun_squarefree(p):
        if m % 2 == 1:
            out = out * f
    return out


def sturm_chain(p: UniPoly):
    chain = [p, p.derivative()]
    while not chain[-1].is_zero():
        chain.append(-chain[-2].divmod(chain[-1])[1])
    chain.pop()
    return chain


def _sign_changes(values) -> int:
    signs = [1 if v > 0 else -1 for v in values if v != 0]
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def sturm_root_count(p: UniPoly, lo: Fraction, hi) -> int:
    """Number of distinct real roots in (lo, hi]; hi=None means +infinity.

    Requires p(lo) != 0 (standard Sturm hypothesis).
    """
    chain = sturm_chain(p)
    if p(lo) == 0:
        raise DomainError(f"Sturm endpoint {lo} is a root")
    v_lo = _sign_changes([q(lo) for q in chain])
    if hi is None:
        v_hi = _sign_changes([q.lc for q in chain if not q.is_zero()])
    else:
        v_hi = _sign_changes([q(hi) for q in chain])
    return v_lo - v_hi


def cauchy_root_bound(p: UniPoly) -> Fraction:
    """All real roots lie in (-B, B)."""
    if p.degree < 1:
        return Fraction(1)
    lc = abs(p.lc)
    return 1 + max(abs(a) for a in p.c[:-1]) / lc


@dataclass(frozen=True)
class SignCertificate:
    """Outcome of one exact sign check.

    ``status`` is "proved" only when the stated check ran to completion in
    exact rational arithmetic; a failed check carries a witness (offending
    monomial, root interval, or evaluation point).
    """

    claim: str
    method: str  # MONOMIAL_SIGN | STURM | EXACT_IDENTITY
    status: str  # proved | failed
    witness: str | None = None
    wall_time_ms: int = 0

    @property
    def proved(self) -> bool:
        return self.status == "proved"

    def to_json(self) -> dict:
        out = {"claim": self.claim, "method": self.method, "status": self.status}
        if self.witness is not None:
            out["witness"] = self.witness
        out["wall_time_ms"] = self.wall_time_ms
        return out


def _elapsed_ms(t0: float) -> int:
    return int(round((time.perf_counter() - t0) * 1000))


def _required(required_sign: str):
    if required_sign not in ("<=0", ">=0"):
        raise DomainError(f"required_sign must be '<=0' or '>=0', got {required_sign!r}")
    return required_sign == ">=0"


def monomial_sign_certificate(p, required_sign: str, claim: str = "") -> SignCertificate:
    """Proved iff every nonzero coefficient has the required sign.

    Sufficient for the sign of p on the closed positive orthant; a failed
    certificate names the first offending monomial.
    """
    t0 = time.perf_counter()
    want_pos = _required(required_sign)
    for mono, a in _monomials(p):
        if a == 0:
            continue
        if (a > 0) != want_pos:
            return SignCertificate(claim, "MONOMIAL_SIGN", "failed",
                                   witness=f"{mono}: {a}",
                                   wall_time_ms=_elapsed_ms(t0))
    return SignCertificate(claim, "MONOMIAL_SIGN", "proved",
                           wall_time_ms=_elapsed_ms(t0))


def _monomials(p):
    if isinstance(p, UniPoly):
        for k, a in enumerate(p.c):
            yield (f"{p.var}^{k}", a)
        return
    if isinstance(p, BiPoly):
        v1, v2 = p.vars
        for i, row in enumerate(p.grid):
            for j, a in enumerate(row):
                yield (f"{v1}^{i}*{v2}^{j}", a)
        return
    raise DomainError(f"not a polynomial: {type(p).__name__}")


def sturm_nonnegative_on_halfline(p: UniPoly, sense: str, claim: str = "") -> SignCertificate:
    """Exact decision of sign(p) on the closed half-line u >= 0.

    Sign changes can only occur at roots of odd multiplicity, so it suffices
    that the odd-multiplicity part has no root in (0, inf) and that the
    leading coefficient points the right way.  Roots of even multiplicity
    (sign-touching) are allowed.
    """
    t0 = time.perf_counter()
    want_pos = _required(sense)
    q = p if want_pos else -p
    if q.is_zero():
        return SignCertificate(claim, "STURM", "proved", wall_time_ms=_elapsed_ms(t0))
    if q.lc < 0:
        return SignCertificate(claim, "STURM", "failed",
                               witness=f"leading coefficient {p.lc} at u=+inf",
                               wall_time_ms=_elapsed_ms(t0))
    odd = odd_multiplicity_part(q)
    # roots at u=0 are sign-touching for the half-line; strip them
    k = 0
    while odd.degree >= 1 and odd.c[0] == 0:
        odd = UniPoly(odd.var, odd.c[1:])
        k += 1
    if odd.degree >= 1 and sturm_root_count(odd, Fraction(0), None) > 0:
        lo, hi = _isolate_one_root(odd)
        return SignCertificate(claim, "STURM", "failed",
                               witness=f"sign change in u interval ({lo}, {hi})",
                               wall_time_ms=_elapsed_ms(t0))
    return SignCertificate(claim, "STURM", "proved", wall_time_ms=_elapsed_ms(t0))


def _isolate_one_root(p: UniPoly):
    """Shrink (0, bound] around some positive root of square-free p."""
    lo, hi = Fraction(0), cauchy_root_bound(p)
    while hi - lo > Fraction(1, 1024):
        mid = (lo + hi) / 2
        if p(mid) == 0:
            return mid - Fraction(1, 2048), mid + Fraction(1, 2048)
        if sturm_root_count(p, lo, mid) > 0:
            hi = mid
        else:
            lo = mid
    return lo, hi


class BiPoly:
    """Dense bivariate polynomial over Q.

    grid[i][j] is the coefficient of vars[0]^i * vars[1]^j; rows and columns
    are trimmed so the representation is canonical.
    """

    __slots__ = ("vars", "grid")

    def __init__(self, variables, grid):
        v1, v2 = variables
        if v1 == v2:
            raise DomainError("bivariate polynomial needs distinct variables")
        g = [[_coeff(x) for x in row] for row in grid]
        w = max((len(r) for r in g), default=0)
        for r in g:
            r.extend(Fraction(0) for _ in range(w - len(r)))
        while g and all(x == 0 for x in g[-1]):
            g.pop()
        while g and all(row[-1] == 0 for row in g):
            for row in g:
                row.pop()
        self.vars = (v1, v2)
        self.grid = tuple(tuple(r) for r in g)

    @classmethod
    def constant(cls, variables, value) -> "BiPoly":
        return cls(variables, [[value]])

    @classmethod
    def var(cls, variables, which: str) -> "BiPoly":
        v1, v2 = variables
        if which == v1:
            return cls(variables, [[0], [1]])
        if which == v2:
            return cls(variables, [[0, 1]])
        raise DomainError(f"unknown variable {which!r}")

    def is_zero(self) -> bool:
        return not self.grid

    def degree(self, which: str) -> int:
        if self.is_zero():
            return -1
        if which == self.vars[0]:
            return len(self.grid) - 1
        if which == self.vars[1]:
            return len(self.grid[0]) - 1
        raise DomainError(f"unknown variable {which!r}")

    def _check_vars(self, other: "BiPoly") -> None:
        if self.vars != other.vars:
            raise DomainError(f"variable mismatch: {self.vars} vs {other.vars}")

    def __add__(self, other):
        if not isinstance(other, BiPoly):
            other = BiPoly.constant(self.vars, other)
        self._check_vars(other)
        n = max(len(self.grid), len(other.grid))
        m = max(len(self.grid[0]) if self.grid else 0,
                len(other.grid[0]) if other.grid else 0)
        g = [[Fraction(0)] * m for _ in range(n)]
        for src in (self.grid, other.grid):
            for i, row in enumerate(src):
                for j, x in enumerate(row):
                    g[i][j] += x
        return BiPoly(self.vars, g)

    __radd__ = __add__

    def __neg__(self):
        return BiPoly(self.vars, [[-x for x in row] for row in self.grid])

    def __sub__(self, other):
        if not isinstance(other, BiPoly):
            other = BiPoly.constant(self.vars, other)
        return self + (-other)

    def __rsub__(self, other):
        return -self + other

    def __mul__(self, other):
        if not isinstance(other, BiPoly):
            k = _coeff(other)
            return BiPoly(self.vars, [[k * x for x in row] for row in self.grid])
        self._check_vars(other)
        if self.is_zero() or other.is_zero():
            return BiPoly(self.vars, [])
        n = len(self.grid) + len(other.grid) - 1
        m = len(self.grid[0]) + len(other.grid[0]) - 1
        g = [[Fraction(0)] * m for _ in range(n)]
        for i, ra in enumerate(self.grid):
            for j, a in enumerate(ra):
                if a == 0:
                    continue
                for k, rb in enumerate(other.grid):
                    for l, b in enumerate(rb):
                        g[i + k][j + l] += a * b
        return BiPoly(self.vars, g)

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, BiPoly):
            return self.grid == BiPoly.constant(self.vars, other).grid
        return self.vars == other.vars and self.grid == other.grid

    def __hash__(self):
        return hash((self.vars, self.grid))

    def __call__(self, x1, x2):
        acc = x1 * 0
        for row in reversed(self.grid):
            inner = x1 * 0
            for a in reversed(row):
                inner = inner * x2 + a
            acc = acc * x1 + inner
        return acc

    def substitute(self, which: str, value) -> UniPoly:
        """Fix one variable at an exact value, returning a UniPoly in the other."""
        val = _coeff(value)
        if which == self.vars[0]:
            out = UniPoly(self.vars[1], [])
            for i, row in enumerate(self.grid):
                out = out + UniPoly(self.vars[1], row) * (val ** i)
            return out
        if which == self.vars[1]:
            return UniPoly(self.vars[0],
                           [UniPoly(self.vars[1], row)(val) for row in self.grid])
        raise DomainError(f"unknown variable {which!r}")

    def coefficients_in(self, which: str):
        """Coefficient list of powers of ``which`` as UniPolys in the other variable."""
        if which == self.vars[1]:
            other = self.vars[0]
            m = len(self.grid[0]) if self.grid else 0
            return [UniPoly(other, [row[j] for row in self.grid]) for j in range(m)]
        if which == self.vars[0]:
            other = self.vars[1]
            return [UniPoly(other, row) for row in self.grid]
        raise DomainError(f"unknown variable {which!r}")

    def shift(self, which: str, offset) -> "BiPoly":
        """Exact composition p(..., which + offset, ...)."""
        off = _coeff(offset)
        if which == self.vars[0]:
            coeffs = self.coefficients_in(self.vars[0])
            out = BiPoly(self.vars, [])
            shifted = BiPoly(self.vars, [[off], [1]])
            power = BiPoly.constant(self.vars, 1)
            for cp in coeffs:
                term = BiPoly(self.vars, [list(cp.c)]) * power
                out = out + term
                power = power * shifted
            return out
        if which == self.vars[1]:
            coeffs = self.coefficients_in(self.vars[1])
            out = BiPoly(self.vars, [])
            shifted = BiPoly(self.vars, [[off, 1]])
            power = BiPoly.constant(self.vars, 1)
            for cp in coeffs:
                term = BiPoly(self.vars, [[x] for x in cp.c]) * power
                out = out + term
                power = power * shifted
            return out
        raise DomainError(f"unknown variable {which!r}")

    def __repr__(self):
        if self.is_zero():
            return "0"
        v1, v2 = self.vars
        parts = []
        for i, row in enumerate(self.grid):
            for j, a in enumerate(row):
                if a == 0:
                    continue
                mono = "*".join(filter(None, [
                    "" if i == 0 else (v1 if i == 1 else f"{v1}^{i}"),
                    "" if j == 0 else (v2 if j == 1 else f"{v2}^{j}"),
                ]))
                parts.append(f"{a}*{mono}" if mono else str(a))
        return " + ".join(parts)


def shift_variable(p, var: str, offset):
    """p with ``var`` replaced by ``var + offset``, exactly."""
    if isinstance(p, UniPoly):
        if var != p.var:
            raise DomainError(f"unknown variable {var!r}")
        return p.shift(offset)
    if isinstance(p, BiPoly):
        return p.shift(var, offset)
    raise DomainError(f"not a polynomial: {type(p).__name__}")


def evaluate_exact(p, *point):
    """Exact evaluation at rational (or QComplex) arguments."""
    return p(*[x if isinstance(x, QComplex) else Fraction(x) for x in point])


def modulus_square_on_imaginary_axis(p, lam_var: str = "lam", u_var: str = "u"):
    """|p(it)|^2 as an exact polynomial in u = t^2 (other variable carried along).

    Writing p(lam) = sum c_k lam^k with real coefficients,
    |p(it)|^2 = (sum_j c_{2j} (-1)^j u^j)^2 + u*(sum_j c_{2j+1} (-1)^j u^j)^2.
    """
    if isinstance(p, UniPoly):
        if p.var != lam_var:
            raise DomainError(f"expected polynomial in {lam_var!r}, got {p.var!r}")
        even = UniPoly(u_var, [(-1) ** j * a for j, a in enumerate(p.c[0::2])])
        odd = UniPoly(u_var, [(-1) ** j * a for j, a in enumerate(p.c[1::2])])
        return even * even + UniPoly.x(u_var) * (odd * odd)
    if isinstance(p, BiPoly):
        if lam_var not in p.vars:
            raise DomainError(f"no variable {lam_var!r} in {p.vars}")
        other = p.vars[0] if p.vars[1] == lam_var else p.vars[1]
        cs = p.coefficients_in(lam_var)
        out_vars = (other, u_var)
        even = BiPoly(out_vars, [])
        odd = BiPoly(out_vars, [])
        for j, cp in enumerate(cs[0::2]):
            even = even + BiPoly(out_vars, [[0] * j + [(-1) ** j * a] for a in cp.c])
        for j, cp in enumerate(cs[1::2]):
            odd = odd + BiPoly(out_vars, [[0] * j + [(-1) ** j * a] for a in cp.c])
        u = BiPoly.var(out_vars, u_var)
        return even * even + u * (odd * odd)
    raise DomainError(f"not a polynomial: {type(p).__name__}")
