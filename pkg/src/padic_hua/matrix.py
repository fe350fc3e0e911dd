"""Matrices over Q_p and their singular numbers.

A matrix is stored as p^-shift times an integral residue matrix known
modulo p^digits, so every entry is known modulo p^(digits - shift) and
row/column elimination stays in integer arithmetic.  The singular numbers
of M = B diag(p^-k_1, ..., p^-k_N) C with B, C in GL(N, Z_p) are recovered
as k_i = shift - a_i where a_1 <= ... <= a_N are the valuations of the
Smith divisors of the residue matrix.

Certification floor: a pivot valuation is trusted only strictly below
digits - guard; singular numbers at or below shift - digits + guard are
reported as markers, never as numbers.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .padic import (
    PadicScalar,
    PrecisionExhausted,
    check_prime,
    int_valuation,
)
from .qseries import pochhammer


@dataclass(frozen=True)
class SingularTuple:
    """Weakly decreasing singular numbers; None marks a value <= floor.

    Markers can only occupy a suffix.  ``floor`` is the certification
    floor of the producing matrix (None when no markers are possible,
    e.g. for sampler output that is exact by construction).
    """

    p: int
    values: tuple
    floor: int | None = None

    def __post_init__(self):
        seen_marker = False
        prev = None
        for v in self.values:
            if v is None:
                seen_marker = True
                if self.floor is None:
                    raise ValueError("marker present but no floor declared")
                continue
            if seen_marker:
                raise ValueError(f"marker before a certified value in {self.values}")
            if prev is not None and v > prev:
                raise ValueError(f"values not weakly decreasing: {self.values}")
            if self.floor is not None and v <= self.floor:
                raise ValueError(f"certified value {v} at or below floor {self.floor}")
            prev = v

    @property
    def n(self) -> int:
        return len(self.values)

    @property
    def is_exact(self) -> bool:
        return all(v is not None for v in self.values)

    def exact_values(self) -> tuple:
        if not self.is_exact:
            raise PrecisionExhausted(
                f"singular numbers not fully certified (floor {self.floor}): {self.values}")
        return self.values

    def positive_part(self) -> tuple:
        """The positive singular numbers; always certified when floor <= 0."""
        if self.floor is not None and self.floor > 0:
            raise PrecisionExhausted(f"floor {self.floor} > 0, positive part uncertain")
        return tuple(v for v in self.values if v is not None and v > 0)


def singular_values_of(k) -> tuple:
    """Coerce a SingularTuple or plain weakly-decreasing int sequence."""
    if isinstance(k, SingularTuple):
        return k.exact_values()
    vals = tuple(int(v) for v in k)
    if any(vals[i] < vals[i + 1] for i in range(len(vals) - 1)):
        raise ValueError(f"not weakly decreasing: {vals}")
    return vals


@dataclass(frozen=True)
class PadicMatrix:
    """N x N matrix equal to p^-shift * units, units known mod p^digits."""

    p: int
    n: int
    shift: int
    digits: int
    units: tuple
    guard: int = 0

    def __post_init__(self):
        check_prime(self.p)
        if self.digits < 1:
            raise ValueError(f"digits must be >= 1, got {self.digits}")
        if not 0 <= self.guard < self.digits:
            raise ValueError(f"need 0 <= guard < digits, got {self.guard}, {self.digits}")
        if len(self.units) != self.n or any(len(r) != self.n for r in self.units):
            raise ValueError("units must be an n x n grid")
        modulus = self.p**self.digits
        if any(not 0 <= e < modulus for row in self.units for e in row):
            raise ValueError("unit residues out of window")

    # -- constructors ------------------------------------------------------

    @classmethod
    def from_units(cls, units, p: int, shift: int = 0, digits: int = 24,
                   guard: int = 0) -> "PadicMatrix":
        modulus = p**digits
        grid = tuple(tuple(int(e) % modulus for e in row) for row in units)
        return cls(p, len(grid), shift, digits, grid, guard)

    @classmethod
    def from_rows(cls, rows, p: int, digits: int = 24, guard: int = 0) -> "PadicMatrix":
        """Exact rational entries -> matrix; shift is the max entry shift."""
        check_prime(p)
        entries = [[Fraction(e) for e in row] for row in rows]
        n = len(entries)
        if any(len(row) != n for row in entries):
            raise ValueError("matrix must be square")
        shift = 0
        for row in entries:
            for e in row:
                if e != 0:
                    v = int_valuation(e.numerator, p) - int_valuation(e.denominator, p)
                    shift = max(shift, -v)
        modulus = p**digits
        units = []
        for row in entries:
            scaled_row = []
            for e in row:
                scaled = e * Fraction(p) ** shift
                num, den = scaled.numerator, scaled.denominator
                scaled_row.append(num * pow(den, -1, modulus) % modulus)
            units.append(tuple(scaled_row))
        return cls(p, n, shift, digits, tuple(units), guard)

    @classmethod
    def from_scalars(cls, grid, guard: int = 0) -> "PadicMatrix":
        """Build from PadicScalar entries sharing one precision window.

        The window is the smallest absolute precision over all entries
        (floors of zero-to-precision entries included); exact zeros impose
        no constraint.
        """
        n = len(grid)
        p = grid[0][0].p
        shift = 0
        window = None
        for row in grid:
            for x in row:
                if x.p != p:
                    raise ValueError("mixed primes in matrix entries")
                if x.is_exact_zero:
                    continue
                m = x.abs_precision if x.is_certified else x.val
                window = m if window is None else min(window, m)
                if x.is_certified:
                    shift = max(shift, -x.val)
        if window is None:
            window = 1  # all entries exactly zero
        digits = window + shift
        if digits < 1:
            raise PrecisionExhausted("no shared certified window for these entries")
        modulus = p**digits
        units = tuple(
            tuple((x.unit * p ** (shift + x.val) if x.is_certified else 0) % modulus
                  for x in row)
            for row in grid)
        return cls(p, n, shift, digits, units, guard)

    # -- accessors ---------------------------------------------------------

    def entry(self, i: int, j: int) -> PadicScalar:
        u = self.units[i][j]
        window = self.digits - self.shift
        if u == 0:
            return PadicScalar.zero_to_precision(self.p, window)
        v = int_valuation(u, self.p)
        return PadicScalar(self.p, v - self.shift, u // self.p**v, self.digits - v)

    def __repr__(self):
        return (f"PadicMatrix(p={self.p}, n={self.n}, shift={self.shift}, "
                f"digits={self.digits})")


def corner(m: PadicMatrix, size: int) -> PadicMatrix:
    """Top-left size x size submatrix; shift and window preserved."""
    if not 1 <= size <= m.n:
        raise ValueError(f"corner size must be in [1, {m.n}], got {size}")
    units = tuple(row[:size] for row in m.units[:size])
    return PadicMatrix(m.p, size, m.shift, m.digits, units, m.guard)


def matmul(a: PadicMatrix, b: PadicMatrix) -> PadicMatrix:
    if a.p != b.p or a.n != b.n:
        raise ValueError("incompatible matrices")
    digits = min(a.digits, b.digits)
    modulus = a.p**digits
    n = a.n
    bu = b.units
    units = tuple(
        tuple(sum(arow[k] * bu[k][j] for k in range(n)) % modulus for j in range(n))
        for arow in a.units)
    return PadicMatrix(a.p, n, a.shift + b.shift, digits, units,
                       max(a.guard, b.guard))


def smith_valuations(rows, p: int, digits: int) -> list:
    """Valuations a_1 <= ... <= a_n of the Smith divisors of an integer
    matrix known modulo p^digits; a reported value of ``digits`` means the
    divisor's valuation is >= digits (uncertified).

    Min-valuation pivoting with full row+column elimination; every
    multiplier is integral because the pivot valuation is minimal, so the
    computation is exact modulo p^digits throughout.
    """
    a = [list(r) for r in rows]
    n = len(a)
    pe = p**digits
    out = []
    for step in range(n):
        best_v = None
        bi = bj = -1
        for i in range(step, n):
            row = a[i]
            for j in range(step, n):
                e = row[j]
                if e:
                    v = 0
                    while e % p == 0:
                        e //= p
                        v += 1
                    if best_v is None or v < best_v:
                        best_v, bi, bj = v, i, j
                        if v == 0:
                            break
            if best_v == 0:
                break
        if best_v is None:
            out.extend([digits] * (n - step))
            break
        if bi != step:
            a[bi], a[step] = a[step], a[bi]
        if bj != step:
            for row in a[step:]:
                row[bj], row[step] = row[step], row[bj]
        v = best_v
        pv = p**v
        row_s = a[step]
        uinv = pow(row_s[step] // pv, -1, pe)
        for j in range(step, n):
            row_s[j] = row_s[j] * uinv % pe
        for i in range(step + 1, n):
            e = a[i][step]
            if e:
                mult = e // pv
                row_i = a[i]
                for j in range(step, n):
                    row_i[j] = (row_i[j] - mult * row_s[j]) % pe
        for j in range(step + 1, n):
            e = row_s[j]
            if e:
                mult = e // pv
                for i in range(step, n):
                    a[i][j] = (a[i][j] - mult * a[i][step]) % pe
        out.append(v)
    return out


def singular_numbers(m: PadicMatrix, guard: int | None = None) -> SingularTuple:
    """Singular numbers of m, certified strictly above the precision floor
    shift - digits + guard; values at or below it come back as markers."""
    if guard is None:
        guard = m.guard
    if not 0 <= guard < m.digits:
        raise ValueError(f"need 0 <= guard < digits, got {guard}, {m.digits}")
    vals = smith_valuations(m.units, m.p, m.digits)
    cutoff = m.digits - guard
    floor = m.shift - cutoff
    values = tuple(m.shift - a if a < cutoff else None for a in vals)
    return SingularTuple(m.p, values, floor)


def _det_mod_p(units, p: int) -> int:
    """Determinant of the residue matrix mod p (Gaussian elimination)."""
    a = [[e % p for e in row] for row in units]
    n = len(a)
    det = 1
    for col in range(n):
        pivot = next((i for i in range(col, n) if a[i][col]), None)
        if pivot is None:
            return 0
        if pivot != col:
            a[pivot], a[col] = a[col], a[pivot]
            det = -det % p
        inv = pow(a[col][col], -1, p)
        det = det * a[col][col] % p
        for i in range(col + 1, n):
            f = a[i][col] * inv % p
            if f:
                a[i] = [(x - f * y) % p for x, y in zip(a[i], a[col])]
    return det % p


def _int_det(rows) -> int:
    """Exact integer determinant (Bareiss fraction-free elimination)."""
    a = [list(r) for r in rows]
    n = len(a)
    sign = 1
    prev = 1
    for col in range(n - 1):
        pivot = next((i for i in range(col, n) if a[i][col]), None)
        if pivot is None:
            return 0
        if pivot != col:
            a[pivot], a[col] = a[col], a[pivot]
            sign = -sign
        for i in range(col + 1, n):
            for j in range(col + 1, n):
                a[i][j] = (a[i][j] * a[col][col] - a[i][col] * a[col][j]) // prev
            a[i][col] = 0
        prev = a[col][col]
    return sign * a[-1][-1]


def determinant_valuation(m: PadicMatrix):
    """Certified valuation of det(m), or BELOW_PRECISION past the window.

    Computed from an exact integer determinant of the residue lift, which
    agrees with the true determinant modulo p^digits.
    """
    from .padic import BELOW_PRECISION

    d = _int_det(m.units) % m.p**m.digits
    if d == 0:
        return BELOW_PRECISION
    v = int_valuation(d, m.p)
    if v >= m.digits:
        return BELOW_PRECISION
    return v - m.n * m.shift


def sample_haar_gl(n: int, p: int, digits: int, rng, guard: int = 0) -> PadicMatrix:
    """Haar-distributed element of GL(n, Z_p) truncated to the window.

    Rejection sampler: uniform residues on Mat(n, Z/p^digits) accepted
    when the determinant is a unit mod p.  Acceptance probability is
    (p^-1; p^-1)_n, which stays above 0.28 for all n.
    """
    check_prime(p)
    modulus = p**digits
    bulk = modulus ** (n * n)
    while True:
        # One bulk draw per attempt: base-p^digits digits of a uniform
        # integer below p^(digits*n^2) are uniform independent residues.
        code = rng.randbelow(bulk)
        units = []
        for _ in range(n):
            row = []
            for _ in range(n):
                code, r = divmod(code, modulus)
                row.append(r)
            units.append(tuple(row))
        units = tuple(units)
        if _det_mod_p(units, p) != 0:
            return PadicMatrix(p, n, 0, digits, units, guard)


def assemble_orbit(k, b: PadicMatrix, c: PadicMatrix) -> PadicMatrix:
    """B * diag(p^-k_1, ..., p^-k_N) * C for exact singular numbers k.

    B and C must be invertible over Z_p (shift 0, unit determinant mod p).
    The result carries shift k_1; raises PrecisionExhausted when p^-k_1
    does not fit the window at all.
    """
    vals = singular_values_of(k)
    if b.p != c.p or b.n != c.n or len(vals) != b.n:
        raise ValueError("incompatible orbit factors")
    for factor in (b, c):
        if factor.shift != 0 or _det_mod_p(factor.units, factor.p) == 0:
            raise ValueError("orbit factors must lie in GL(n, Z_p)")
    p = b.p
    n = b.n
    digits = min(b.digits, c.digits)
    shift = vals[0]
    if shift >= digits:
        raise PrecisionExhausted(
            f"p^-{shift} overflows a {digits}-digit window")
    modulus = p**digits
    # Scale the columns of B by p^(shift - k_i), then multiply by C.
    scaled = [[b.units[i][j] * p ** (shift - vals[j]) % modulus for j in range(n)]
              for i in range(n)]
    cu = c.units
    units = tuple(
        tuple(sum(srow[t] * cu[t][j] for t in range(n)) % modulus for j in range(n))
        for srow in scaled)
    return PadicMatrix(p, n, shift, digits, units, max(b.guard, c.guard))


def gamma_exponent(k) -> int:
    """g with gamma = p^g: the sum of the positive singular numbers."""
    if isinstance(k, SingularTuple):
        if k.floor is not None and k.floor > 0:
            raise PrecisionExhausted("markers above 0; gamma exponent uncertain")
        vals = [v for v in k.values if v is not None]
    else:
        vals = list(singular_values_of(k))
    return sum(v for v in vals if v > 0)


def hua_normalization(p: int, t, n: int) -> Fraction:
    """Normalizing constant (tq; q)_n^2 / (tq; q)_2n at q = 1/p."""
    check_prime(p)
    t = Fraction(t)
    if not 0 < t < p:
        raise ValueError(f"need 0 < t < p, got t = {t}")
    a = t / p
    q = Fraction(1, p)
    return pochhammer(a, q, n) ** 2 / pochhammer(a, q, 2 * n)


def hua_density(p: int, k, t) -> tuple:
    """Density of the size-N bi-invariant matrix law at singular numbers k.

    Returned as (power, coeff) with density = coeff * p^power against the
    additive volume; coeff = normalization * t^g absorbs all t-dependence
    and power = -2*N*g the rest of the weight gamma^-(s+2N).
    """
    if isinstance(k, SingularTuple):
        p_check = k.p
        if p_check != p:
            raise ValueError(f"matrix prime {p_check} != {p}")
    vals = gamma_exponent(k)
    n = k.n if isinstance(k, SingularTuple) else len(singular_values_of(k))
    t = Fraction(t)
    coeff = hua_normalization(p, t, n) * t**vals
    return (-2 * n * vals, coeff)


# -- text format for matrix literals ---------------------------------------


def parse_entry(token: str, p: int) -> Fraction:
    """Parse one matrix entry: 'a', 'a*p^v' or 'p^v' with integer a, v."""
    token = token.strip()
    if "^" in token:
        mant, _, exp = token.partition("^")
        if "*" in mant:
            a_str, _, base_str = mant.partition("*")
        else:
            a_str, base_str = "1", mant
        base = int(base_str)
        if base != p:
            raise ValueError(f"entry base {base} does not match p = {p}")
        return Fraction(int(a_str)) * Fraction(p) ** int(exp)
    return Fraction(int(token))


def parse_matrix_text(text: str, p: int, digits: int = 24, guard: int = 0) -> PadicMatrix:
    """Matrix literal: one row per line, whitespace-separated entries."""
    rows = []
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        rows.append([parse_entry(tok, p) for tok in line.split()])
    if not rows:
        raise ValueError("empty matrix literal")
    return PadicMatrix.from_rows(rows, p, digits, guard)


def format_entry(x: PadicScalar) -> str:
    if x.is_exact_zero:
        return "0"
    if not x.is_certified:
        return f"O({x.p}^{x.val})"
    return f"{x.unit}*{x.p}^{x.val}"
