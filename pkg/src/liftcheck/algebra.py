"""Exact scalar, polynomial and polynomial-matrix arithmetic.

Coefficients are arbitrary-precision rationals (``fractions.Fraction``).
Polynomials are sparse multivariate with a fixed, ordered variable list;
the canonical term order is graded lexicographic over that list, so two
equal polynomials always print and hash identically.  There is no floating
point anywhere: every verification downstream reduces to testing that a
polynomial in canonical form is literally zero.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Mapping, Sequence

Exponents = tuple[int, ...]


class AlgebraError(Exception):
    """Base class for exact-arithmetic failures."""


class VariableMismatch(AlgebraError):
    """Operands live over variable lists that cannot be aligned."""


class EpsilonMismatch(AlgebraError):
    """EpsComplex operands with different squaring conventions."""


class NotUnimodular(AlgebraError):
    """Matrix determinant is not the constant +1 or -1."""


class ExactDivisionError(AlgebraError):
    """Polynomial division that was assumed exact left a remainder."""


def as_fraction(value: int | Fraction) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    raise TypeError(f"expected int or Fraction, got {type(value).__name__}")


class EpsComplex:
    """Number a + b*i with i*i = epsilon (ordinary complex for -1, split for +1)."""

    __slots__ = ("re", "im", "epsilon")

    def __init__(self, re: int | Fraction, im: int | Fraction, epsilon: int):
        if epsilon not in (-1, 1):
            raise ValueError("epsilon must be -1 or +1")
        object.__setattr__(self, "re", as_fraction(re))
        object.__setattr__(self, "im", as_fraction(im))
        object.__setattr__(self, "epsilon", epsilon)

    def __setattr__(self, name, value):
        raise AttributeError("EpsComplex is immutable")

    @classmethod
    def unit(cls, epsilon: int) -> "EpsComplex":
        """The imaginary unit i for the given squaring convention."""
        return cls(0, 1, epsilon)

    def _check(self, other: "EpsComplex") -> None:
        if self.epsilon != other.epsilon:
            raise EpsilonMismatch(
                f"cannot combine epsilon={self.epsilon} with epsilon={other.epsilon}"
            )

    def __add__(self, other: "EpsComplex") -> "EpsComplex":
        self._check(other)
        return EpsComplex(self.re + other.re, self.im + other.im, self.epsilon)

    def __sub__(self, other: "EpsComplex") -> "EpsComplex":
        self._check(other)
        return EpsComplex(self.re - other.re, self.im - other.im, self.epsilon)

    def __neg__(self) -> "EpsComplex":
        return EpsComplex(-self.re, -self.im, self.epsilon)

    def __mul__(self, other: "EpsComplex") -> "EpsComplex":
        self._check(other)
        return EpsComplex(
            self.re * other.re + self.epsilon * self.im * other.im,
            self.re * other.im + self.im * other.re,
            self.epsilon,
        )

    def scale(self, value: int | Fraction) -> "EpsComplex":
        value = as_fraction(value)
        return EpsComplex(self.re * value, self.im * value, self.epsilon)

    def conjugate(self) -> "EpsComplex":
        return EpsComplex(self.re, -self.im, self.epsilon)

    def norm(self) -> Fraction:
        """z * conj(z): re^2 - epsilon * im^2.  Multiplicative for both epsilon."""
        return self.re * self.re - self.epsilon * self.im * self.im

    def is_zero(self) -> bool:
        return self.re == 0 and self.im == 0

    def __eq__(self, other) -> bool:
        if not isinstance(other, EpsComplex):
            return NotImplemented
        return (
            self.epsilon == other.epsilon
            and self.re == other.re
            and self.im == other.im
        )

    def __hash__(self) -> int:
        return hash((self.re, self.im, self.epsilon))

    def __repr__(self) -> str:
        sign = "-" if self.im < 0 else "+"
        return f"({self.re} {sign} {abs(self.im)}i|eps={self.epsilon})"


def _grlex_key(exps: Exponents) -> tuple:
    return (sum(exps), exps)


class Poly:
    """Sparse multivariate polynomial over an ordered variable list.

    Immutable after construction.  ``terms`` maps exponent tuples (aligned
    with ``variables``) to nonzero Fraction coefficients.
    """

    __slots__ = ("variables", "terms", "_hash")

    def __init__(
        self,
        variables: Sequence[str],
        terms: Mapping[Exponents, int | Fraction] | None = None,
    ):
        variables = tuple(variables)
        clean: dict[Exponents, Fraction] = {}
        if terms:
            width = len(variables)
            for exps, coeff in terms.items():
                coeff = as_fraction(coeff)
                if coeff == 0:
                    continue
                exps = tuple(exps)
                if len(exps) != width:
                    raise VariableMismatch(
                        f"exponent tuple {exps} does not match {width} variables"
                    )
                if any(e < 0 for e in exps):
                    raise ValueError(f"negative exponent in {exps}")
                clean[exps] = coeff
        object.__setattr__(self, "variables", variables)
        object.__setattr__(self, "terms", clean)
        object.__setattr__(self, "_hash", None)

    def __setattr__(self, name, value):
        raise AttributeError("Poly is immutable")

    # -- constructors -------------------------------------------------------

    @classmethod
    def zero(cls, variables: Sequence[str]) -> "Poly":
        return cls(variables)

    @classmethod
    def const(cls, value: int | Fraction, variables: Sequence[str]) -> "Poly":
        variables = tuple(variables)
        value = as_fraction(value)
        if value == 0:
            return cls(variables)
        return cls(variables, {(0,) * len(variables): value})

    @classmethod
    def variable(cls, name: str, variables: Sequence[str]) -> "Poly":
        variables = tuple(variables)
        if name not in variables:
            raise VariableMismatch(f"unknown variable {name!r}")
        exps = tuple(1 if v == name else 0 for v in variables)
        return cls(variables, {exps: Fraction(1)})

    # -- basic queries ------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return all(all(e == 0 for e in exps) for exps in self.terms)

    def constant_value(self) -> Fraction:
        if not self.terms:
            return Fraction(0)
        if not self.is_constant():
            raise AlgebraError("polynomial is not constant")
        return next(iter(self.terms.values()))

    def total_degree(self) -> int:
        if not self.terms:
            return 0
        return max(sum(exps) for exps in self.terms)

    def sorted_terms(self) -> list[tuple[Exponents, Fraction]]:
        """Terms in descending graded-lex order (canonical print order)."""
        return sorted(self.terms.items(), key=lambda kv: _grlex_key(kv[0]), reverse=True)

    def leading(self) -> tuple[Exponents, Fraction]:
        if not self.terms:
            raise AlgebraError("zero polynomial has no leading term")
        exps = max(self.terms, key=_grlex_key)
        return exps, self.terms[exps]

    # -- alignment ----------------------------------------------------------

    def _coerce(self, other) -> "Poly | None":
        if isinstance(other, Poly):
            if other.variables == self.variables:
                return other
            if other.is_constant():
                return Poly.const(other.constant_value(), self.variables)
            if self.is_constant():
                return other
            raise VariableMismatch(
                f"cannot align variables {self.variables} with {other.variables}"
            )
        if isinstance(other, (int, Fraction)):
            return Poly.const(other, self.variables)
        return None

    def extend(self, variables: Sequence[str]) -> "Poly":
        """Reinterpret over a longer variable list that starts with ours."""
        variables = tuple(variables)
        if variables == self.variables:
            return self
        if variables[: len(self.variables)] != self.variables:
            raise VariableMismatch(
                f"{variables} does not extend {self.variables}"
            )
        pad = (0,) * (len(variables) - len(self.variables))
        return Poly(variables, {exps + pad: c for exps, c in self.terms.items()})

    # -- arithmetic ---------------------------------------------------------

    def __add__(self, other) -> "Poly":
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        if self.is_constant() and self.variables != other.variables:
            return other + self.constant_value()
        out = dict(self.terms)
        for exps, coeff in other.terms.items():
            acc = out.get(exps)
            total = coeff if acc is None else acc + coeff
            if total == 0:
                out.pop(exps, None)
            else:
                out[exps] = total
        return Poly(self.variables, out)

    __radd__ = __add__

    def __neg__(self) -> "Poly":
        return Poly(self.variables, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other) -> "Poly":
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> "Poly":
        return (-self) + other

    def __mul__(self, other) -> "Poly":
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        if self.is_constant() and self.variables != other.variables:
            return other * self.constant_value()
        if not self.terms or not other.terms:
            return Poly(self.variables)
        out: dict[Exponents, Fraction] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                exps = tuple(a + b for a, b in zip(e1, e2))
                acc = out.get(exps)
                total = c1 * c2 if acc is None else acc + c1 * c2
                if total == 0:
                    out.pop(exps, None)
                else:
                    out[exps] = total
        return Poly(self.variables, out)

    __rmul__ = __mul__

    def __pow__(self, power: int) -> "Poly":
        if not isinstance(power, int) or power < 0:
            raise ValueError("polynomial powers must be nonnegative integers")
        result = Poly.const(1, self.variables)
        base = self
        while power:
            if power & 1:
                result = result * base
            base = base * base
            power >>= 1
        return result

    def diff(self, var: str) -> "Poly":
        """Exact partial derivative; zero when var does not occur."""
        if var not in self.variables:
            return Poly(self.variables)
        idx = self.variables.index(var)
        out: dict[Exponents, Fraction] = {}
        for exps, coeff in self.terms.items():
            e = exps[idx]
            if e == 0:
                continue
            dropped = exps[:idx] + (e - 1,) + exps[idx + 1 :]
            out[dropped] = out.get(dropped, Fraction(0)) + coeff * e
        return Poly(self.variables, out)

    def eval_at(self, point: Mapping[str, Fraction]) -> Fraction:
        missing = [v for v in self.variables if v not in point]
        if missing:
            raise AlgebraError(f"missing value for variable {missing[0]!r}")
        values = [as_fraction(point[v]) for v in self.variables]
        total = Fraction(0)
        for exps, coeff in self.terms.items():
            term = coeff
            for val, e in zip(values, exps):
                if e:
                    term *= val**e
            total += term
        return total

    def divide_exact(self, divisor: "Poly") -> "Poly":
        """Quotient self / divisor when the division is exact; raises otherwise.

        Used by fraction-free elimination, where exactness is guaranteed.
        """
        divisor = self._coerce(divisor)
        if divisor is None or not isinstance(divisor, Poly):
            raise TypeError("divisor must be a Poly")
        if divisor.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        if divisor.is_constant():
            inv = 1 / divisor.constant_value()
            return Poly(self.variables, {e: c * inv for e, c in self.terms.items()})
        lead_exps, lead_coeff = divisor.leading()
        remainder = dict(self.terms)
        quotient: dict[Exponents, Fraction] = {}
        while remainder:
            rexps = max(remainder, key=_grlex_key)
            rcoeff = remainder[rexps]
            qexps = tuple(a - b for a, b in zip(rexps, lead_exps))
            if any(e < 0 for e in qexps):
                raise ExactDivisionError("division is not exact")
            qcoeff = rcoeff / lead_coeff
            quotient[qexps] = quotient.get(qexps, Fraction(0)) + qcoeff
            for dexps, dcoeff in divisor.terms.items():
                exps = tuple(a + b for a, b in zip(qexps, dexps))
                acc = remainder.get(exps, Fraction(0)) - qcoeff * dcoeff
                if acc == 0:
                    remainder.pop(exps, None)
                else:
                    remainder[exps] = acc
        return Poly(self.variables, quotient)

    # -- equality and printing ---------------------------------------------

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = Poly.const(other, self.variables)
        if not isinstance(other, Poly):
            return NotImplemented
        return self.variables == other.variables and self.terms == other.terms

    def __hash__(self) -> int:
        h = self._hash
        if h is None:
            h = hash((self.variables, frozenset(self.terms.items())))
            object.__setattr__(self, "_hash", h)
        return h

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts: list[str] = []
        for exps, coeff in self.sorted_terms():
            factors = [
                name if e == 1 else f"{name}^{e}"
                for name, e in zip(self.variables, exps)
                if e
            ]
            mag = abs(coeff)
            if factors and mag == 1:
                body = "*".join(factors)
            elif factors:
                body = "*".join([str(mag)] + factors)
            else:
                body = str(mag)
            if not parts:
                parts.append(body if coeff > 0 else f"-{body}")
            else:
                parts.append(f" + {body}" if coeff > 0 else f" - {body}")
        return "".join(parts)

    def __repr__(self) -> str:
        return f"Poly({self})"


class PolyMatrix:
    """Rectangular matrix of Poly entries over one shared variable list."""

    __slots__ = ("rows", "cols", "entries", "variables")

    def __init__(self, entries: Sequence[Sequence[Poly]]):
        rows = tuple(tuple(row) for row in entries)
        if not rows or not rows[0]:
            raise ValueError("matrix must be nonempty")
        width = len(rows[0])
        variables = rows[0][0].variables
        for row in rows:
            if len(row) != width:
                raise ValueError("ragged matrix")
            for entry in row:
                if not isinstance(entry, Poly) or entry.variables != variables:
                    raise VariableMismatch("matrix entries over mixed variable lists")
        object.__setattr__(self, "entries", rows)
        object.__setattr__(self, "rows", len(rows))
        object.__setattr__(self, "cols", width)
        object.__setattr__(self, "variables", variables)

    def __setattr__(self, name, value):
        raise AttributeError("PolyMatrix is immutable")

    @classmethod
    def identity(cls, n: int, variables: Sequence[str]) -> "PolyMatrix":
        one = Poly.const(1, variables)
        zero = Poly.zero(variables)
        return cls([[one if i == j else zero for j in range(n)] for i in range(n)])

    @classmethod
    def from_values(
        cls, values: Sequence[Sequence[int | Fraction | Poly]], variables: Sequence[str]
    ) -> "PolyMatrix":
        rows = []
        for row in values:
            rows.append(
                [
                    v if isinstance(v, Poly) else Poly.const(v, variables)
                    for v in row
                ]
            )
        return cls(rows)

    def __getitem__(self, idx: tuple[int, int]) -> Poly:
        i, j = idx
        return self.entries[i][j]

    def __eq__(self, other) -> bool:
        if not isinstance(other, PolyMatrix):
            return NotImplemented
        return self.entries == other.entries

    def __hash__(self) -> int:
        return hash(self.entries)

    def __matmul__(self, other: "PolyMatrix") -> "PolyMatrix":
        if self.cols != other.rows:
            raise ValueError("matrix shape mismatch")
        zero = Poly.zero(self.variables)
        out = []
        for i in range(self.rows):
            row = []
            for j in range(other.cols):
                acc = zero
                for k in range(self.cols):
                    a = self.entries[i][k]
                    if a.is_zero():
                        continue
                    b = other.entries[k][j]
                    if b.is_zero():
                        continue
                    acc = acc + a * b
                row.append(acc)
            out.append(row)
        return PolyMatrix(out)

    def __sub__(self, other: "PolyMatrix") -> "PolyMatrix":
        if self.rows != other.rows or self.cols != other.cols:
            raise ValueError("matrix shape mismatch")
        return PolyMatrix(
            [
                [a - b for a, b in zip(r1, r2)]
                for r1, r2 in zip(self.entries, other.entries)
            ]
        )

    def is_zero(self) -> bool:
        return all(e.is_zero() for row in self.entries for e in row)

    def transpose(self) -> "PolyMatrix":
        return PolyMatrix(
            [[self.entries[i][j] for i in range(self.rows)] for j in range(self.cols)]
        )

    def det(self) -> Poly:
        """Exact determinant by fraction-free (Bareiss) elimination."""
        if self.rows != self.cols:
            raise ValueError("determinant of a non-square matrix")
        n = self.rows
        m = [list(row) for row in self.entries]
        sign = 1
        prev = Poly.const(1, self.variables)
        for k in range(n - 1):
            if m[k][k].is_zero():
                pivot_row = next(
                    (i for i in range(k + 1, n) if not m[i][k].is_zero()), None
                )
                if pivot_row is None:
                    return Poly.zero(self.variables)
                m[k], m[pivot_row] = m[pivot_row], m[k]
                sign = -sign
            for i in range(k + 1, n):
                for j in range(k + 1, n):
                    num = m[k][k] * m[i][j] - m[i][k] * m[k][j]
                    m[i][j] = num.divide_exact(prev)
                m[i][k] = Poly.zero(self.variables)
            prev = m[k][k]
        result = m[n - 1][n - 1]
        return result if sign == 1 else -result

    def minor(self, drop_row: int, drop_col: int) -> "PolyMatrix":
        return PolyMatrix(
            [
                [e for j, e in enumerate(row) if j != drop_col]
                for i, row in enumerate(self.entries)
                if i != drop_row
            ]
        )

    def unimodular_inverse(self) -> "PolyMatrix":
        """Polynomial inverse of a matrix with constant determinant +1 or -1.

        Computed as the adjugate divided by the determinant; requires and
        checks exact unimodularity, so every entry stays polynomial.
        """
        if self.rows != self.cols:
            raise NotUnimodular("matrix is not square")
        d = self.det()
        if not d.is_constant() or d.constant_value() not in (1, -1):
            raise NotUnimodular(f"determinant {d} is not the constant +1 or -1")
        d_value = d.constant_value()
        n = self.rows
        if n == 1:
            return PolyMatrix.from_values([[d_value]], self.variables)
        adj = []
        for i in range(n):
            row = []
            for j in range(n):
                cof = self.minor(j, i).det()
                if (i + j) % 2:
                    cof = -cof
                row.append(cof * d_value)
            adj.append(row)
        return PolyMatrix(adj)

    def __repr__(self) -> str:
        body = "; ".join(
            ", ".join(str(e) for e in row) for row in self.entries
        )
        return f"PolyMatrix[{body}]"
