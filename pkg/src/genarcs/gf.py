"""Exact arithmetic in the finite field GF(q), q = p^r.

Elements are canonical integers in ``[0, q)``: the integer's base-p digits
are the coefficients of the residue polynomial, least-significant digit =
constant term.  With that encoding 0 and 1 are the field's zero and one for
every choice of modulus, and prime fields coincide with integers mod p.

Multiplication runs through log/exp tables built from a designated
primitive element alpha; addition is digitwise mod p.  For small orders the
full q x q add/mul tables are materialised (both as nested lists for scalar
hot loops and as numpy arrays for vectorised row operations).
"""

from __future__ import annotations

from typing import Iterable, Sequence

import numpy as np

# Hard cap on the field order: construction beyond this fails loudly
# rather than silently degrading to slow arithmetic.
MAX_ORDER = 1 << 14

# Full q x q tables are only materialised up to this order; log/exp and
# digitwise addition cover the rest up to MAX_ORDER.
FULL_TABLE_LIMIT = 1024


class FieldError(ValueError):
    """Invalid field construction or field operation."""


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def prime_factors(n: int) -> list[int]:
    """Distinct prime factors of n, ascending."""
    out = []
    f = 2
    while f * f <= n:
        if n % f == 0:
            out.append(f)
            while n % f == 0:
                n //= f
        f += 1 if f == 2 else 2
    if n > 1:
        out.append(n)
    return out


def factor_prime_power(q: int) -> tuple[int, int]:
    """Write q = p^r with p prime, or raise FieldError."""
    if q < 2:
        raise FieldError(f"{q} is not a prime power")
    fs = prime_factors(q)
    if len(fs) != 1:
        raise FieldError(f"{q} is not a prime power")
    p = fs[0]
    r = 0
    m = q
    while m > 1:
        m //= p
        r += 1
    if p**r != q:
        raise FieldError(f"{q} is not a prime power")
    return p, r


# ----------------------------------------------------------------------
# Polynomial helpers over GF(p).  Polynomials are coefficient lists,
# index i = coefficient of x^i, trailing zeros stripped.


def _poly_trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _poly_mul(a: Sequence[int], b: Sequence[int], p: int) -> list[int]:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] = (out[i + j] + ai * bj) % p
    return _poly_trim(out)


def _poly_mod(a: Sequence[int], m: Sequence[int], p: int) -> list[int]:
    """Remainder of a modulo the monic polynomial m."""
    a = list(a)
    dm = len(m) - 1
    while len(a) - 1 >= dm and a:
        lead = a[-1]
        shift = len(a) - 1 - dm
        if lead:
            for i in range(dm + 1):
                a[shift + i] = (a[shift + i] - lead * m[i]) % p
        a.pop()
        _poly_trim(a)
    return a


def _poly_divides(d: Sequence[int], a: Sequence[int], p: int) -> bool:
    """Does the monic polynomial d divide a?"""
    return not _poly_mod(a, d, p)


def _monic_polys(p: int, deg: int) -> Iterable[list[int]]:
    """All monic polynomials of exact degree ``deg`` over GF(p), in
    ascending integer encoding of the coefficient vector."""
    for v in range(p**deg):
        coeffs = []
        m = v
        for _ in range(deg):
            coeffs.append(m % p)
            m //= p
        coeffs.append(1)
        yield coeffs


def _irreducibles_up_to(p: int, max_deg: int) -> list[list[int]]:
    """Monic irreducible polynomials of degree 1..max_deg, by trial division."""
    irred: list[list[int]] = []
    for deg in range(1, max_deg + 1):
        lower = [f for f in irred if len(f) - 1 <= deg // 2]
        for cand in _monic_polys(p, deg):
            if deg == 1 or not any(_poly_divides(f, cand, p) for f in lower):
                irred.append(cand)
    return irred


def is_irreducible(modulus: Sequence[int], p: int) -> bool:
    """Trial factorization: no monic irreducible factor of degree <= r/2."""
    r = len(modulus) - 1
    if r < 1 or modulus[-1] != 1:
        return False
    if r == 1:
        return True
    for f in _irreducibles_up_to(p, r // 2):
        if _poly_divides(f, modulus, p):
            return False
    return True


def _encode(coeffs: Sequence[int], p: int) -> int:
    v = 0
    for c in reversed(list(coeffs)):
        v = v * p + c
    return v


def _decode(v: int, p: int, r: int) -> list[int]:
    out = []
    for _ in range(r):
        out.append(v % p)
        v //= p
    return out


class FieldSpec:
    """Immutable description of GF(q) with precomputed arithmetic tables.

    Attributes
    ----------
    p, r, q : characteristic, extension degree, order (q = p^r).
    modulus : coefficient tuple (c0..cr) of the monic irreducible used to
        build the residue ring (cr = 1; for r = 1 this is (-a mod p, 1)
        with root a = 0, i.e. (0, 1), and plays no arithmetic role).
    alpha : canonical encoding of the designated primitive element.
    """

    def __init__(self, p: int, r: int, modulus: tuple[int, ...], alpha: int | None = None):
        if not is_prime(p):
            raise FieldError(f"characteristic {p} is not prime")
        if r < 1:
            raise FieldError(f"extension degree must be >= 1, got {r}")
        q = p**r
        if q > MAX_ORDER:
            raise FieldError(f"field order {q} exceeds the table-driven cap {MAX_ORDER}")
        if len(modulus) != r + 1 or modulus[-1] % p != 1:
            raise FieldError(f"modulus must be monic of degree {r}")
        modulus = tuple(c % p for c in modulus[:-1]) + (1,)
        if not is_irreducible(modulus, p):
            raise FieldError(f"modulus {list(modulus)} is reducible over GF({p})")
        self.p = p
        self.r = r
        self.q = q
        self.modulus = modulus

        self._digits = [tuple(_decode(v, p, r)) for v in range(q)]
        self._build_mul_tables()
        if alpha is None:
            alpha = self._least_primitive()
        elif self.order(alpha) != q - 1:
            raise FieldError(f"element {alpha} does not generate the multiplicative group")
        self.alpha = alpha
        self._build_log_tables()
        self._build_full_tables()

    # -- construction internals ------------------------------------------

    def _mul_poly(self, a: int, b: int) -> int:
        prod = _poly_mul(self._digits[a], self._digits[b], self.p)
        return _encode(_poly_mod(prod, self.modulus, self.p), self.p)

    def _build_mul_tables(self) -> None:
        # inverse table via scalar products; q <= MAX_ORDER keeps this cheap
        self._inv = [0] * self.q
        for a in range(1, self.q):
            if self._inv[a]:
                continue
            for b in range(1, self.q):
                if self._mul_poly(a, b) == 1:
                    self._inv[a] = b
                    self._inv[b] = a
                    break

    def order(self, a: int) -> int:
        """Multiplicative order of a nonzero element."""
        if a == 0:
            raise FieldError("zero has no multiplicative order")
        n = 1
        x = a
        while x != 1:
            x = self._mul_poly(x, a)
            n += 1
        return n

    def _least_primitive(self) -> int:
        n = self.q - 1
        ls = prime_factors(n)
        for a in range(1, self.q):
            if a == 1 and n > 1:
                continue
            if all(self._pow_poly(a, n // l) != 1 for l in ls):
                return a
        raise FieldError("no primitive element found")  # pragma: no cover

    def _pow_poly(self, a: int, k: int) -> int:
        res = 1
        base = a
        while k:
            if k & 1:
                res = self._mul_poly(res, base)
            base = self._mul_poly(base, base)
            k >>= 1
        return res

    def _build_log_tables(self) -> None:
        q = self.q
        exp = [1] * (2 * q)
        log = [0] * q
        x = 1
        for i in range(q - 1):
            exp[i] = x
            log[x] = i
            x = self._mul_poly(x, self.alpha)
        for i in range(q - 1, 2 * (q - 1)):
            exp[i] = exp[i - (q - 1)]
        self._exp = exp
        self._log = log

    def _build_full_tables(self) -> None:
        p, q, r = self.p, self.q, self.r
        self._neg = [_encode([(-c) % p for c in self._digits[a]], p) for a in range(q)]
        if q <= FULL_TABLE_LIMIT:
            add = [[0] * q for _ in range(q)]
            mul = [[0] * q for _ in range(q)]
            for a in range(q):
                da = self._digits[a]
                row_a, row_m = add[a], mul[a]
                for b in range(q):
                    db = self._digits[b]
                    row_a[b] = _encode([(x + y) % p for x, y in zip(da, db)], p)
                    row_m[b] = 0 if a == 0 or b == 0 else self._exp[self._log[a] + self._log[b]]
            self._add_rows = add
            self._mul_rows = mul
            self.add_np = np.array(add, dtype=np.int64)
            self.mul_np = np.array(mul, dtype=np.int64)
        else:
            self._add_rows = None
            self._mul_rows = None
            self.add_np = None
            self.mul_np = None
        self.neg_np = np.array(self._neg, dtype=np.int64)

    # -- element arithmetic ------------------------------------------------

    def add(self, a: int, b: int) -> int:
        if self._add_rows is not None:
            return self._add_rows[a][b]
        p = self.p
        return _encode([(x + y) % p for x, y in zip(self._digits[a], self._digits[b])], p)

    def neg(self, a: int) -> int:
        return self._neg[a]

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self._neg[b])

    def mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        return self._exp[self._log[a] + self._log[b]]

    def inv(self, a: int) -> int:
        if a == 0:
            raise FieldError("inversion of zero")
        return self._exp[(self.q - 1) - self._log[a]]

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def pow(self, a: int, k: int) -> int:
        if a == 0:
            if k == 0:
                return 1
            if k < 0:
                raise FieldError("inversion of zero")
            return 0
        e = self._log[a] * k % (self.q - 1)
        return self._exp[e]

    def elements(self) -> list[int]:
        """All q elements in ascending canonical encoding."""
        return list(range(self.q))

    def units(self) -> list[int]:
        return list(range(1, self.q))

    # -- presentation and serialization -------------------------------------

    def log(self, a: int) -> int:
        if a == 0:
            raise FieldError("discrete log of zero")
        return self._log[a]

    def element_str(self, a: int) -> str:
        """Render an element; extension-field units print as powers of alpha."""
        if self.r == 1:
            return str(a)
        if a == 0:
            return "0"
        if a == 1:
            return "1"
        k = self._log[a]
        return "a" if k == 1 else f"a^{k}"

    def parse_element(self, text: str) -> int:
        """Parse "0", "7", "a", "a^5", or sums like "a+1" / "2a^3+a+2"."""
        text = text.strip().replace("α", "a").replace(" ", "")
        if not text:
            raise FieldError("empty element literal")
        total = 0
        for term in text.split("+"):
            total = self.add(total, self._parse_term(term))
        return total

    def _parse_term(self, term: str) -> int:
        if not term:
            raise FieldError("malformed element literal")
        if "a" not in term:
            v = int(term)
            if self.r == 1:
                return v % self.p
            if 0 <= v < self.q:
                return v
            raise FieldError(f"element encoding {v} out of range [0, {self.q})")
        coeff_s, _, rest = term.partition("a")
        coeff = int(coeff_s) % self.p if coeff_s else 1
        k = 1
        if rest:
            if not rest.startswith("^"):
                raise FieldError(f"malformed element literal {term!r}")
            k = int(rest[1:])
        return self.mul(coeff, self.pow(self.alpha, k))

    def to_dict(self) -> dict:
        return {"p": self.p, "r": self.r, "modulus": list(self.modulus), "alpha": self.alpha}

    @classmethod
    def from_dict(cls, d: dict) -> "FieldSpec":
        return cls(d["p"], d["r"], tuple(d["modulus"]), d.get("alpha"))

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, FieldSpec)
            and (self.p, self.r, self.modulus, self.alpha)
            == (other.p, other.r, other.modulus, other.alpha)
        )

    def __hash__(self) -> int:
        return hash((self.p, self.r, self.modulus, self.alpha))

    def __repr__(self) -> str:
        if self.r == 1:
            return f"GF({self.q})"
        return f"GF({self.q}; modulus={list(self.modulus)}, alpha={self.alpha})"


def default_modulus(p: int, r: int) -> tuple[int, ...]:
    """Least monic irreducible of degree r over GF(p), ordered by the
    integer encoding of the coefficient vector (eg GF(8) -> x^3+x+1)."""
    if r == 1:
        return (0, 1)
    for cand in _monic_polys(p, r):
        if is_irreducible(cand, p):
            return tuple(cand)
    raise FieldError(f"no irreducible polynomial of degree {r} over GF({p})")  # pragma: no cover


def make_field(p: int, r: int = 1, modulus: Sequence[int] | None = None,
               alpha: int | None = None) -> FieldSpec:
    """Construct GF(p^r).

    The modulus defaults to the least monic irreducible of degree r (by
    integer encoding); alpha defaults to the least element of full
    multiplicative order.  A supplied modulus is verified irreducible and a
    supplied alpha is verified primitive.
    """
    if not is_prime(p):
        raise FieldError(f"characteristic {p} is not prime")
    if r < 1:
        raise FieldError(f"extension degree must be >= 1, got {r}")
    if p**r > MAX_ORDER:
        raise FieldError(f"field order {p**r} exceeds the table-driven cap {MAX_ORDER}")
    if modulus is None:
        modulus = default_modulus(p, r)
    return FieldSpec(p, r, tuple(modulus), alpha)


def field_of_order(q: int) -> FieldSpec:
    """GF(q) with the default modulus and alpha."""
    p, r = factor_prime_power(q)
    return make_field(p, r)


# ----------------------------------------------------------------------
# Small dense linear algebra over GF(q): row reduction and nullspaces.
# Matrices are lists of equal-length lists of canonical elements.


def row_reduce(field: FieldSpec, rows: Sequence[Sequence[int]], ncols: int) -> tuple[list[list[int]], list[int]]:
    """Reduced row echelon form.  Returns (rref rows without zero rows, pivot columns)."""
    mat = [list(row) for row in rows]
    pivots: list[int] = []
    rank = 0
    for col in range(ncols):
        pivot_row = next((i for i in range(rank, len(mat)) if mat[i][col]), None)
        if pivot_row is None:
            continue
        mat[rank], mat[pivot_row] = mat[pivot_row], mat[rank]
        inv_lead = field.inv(mat[rank][col])
        mat[rank] = [field.mul(inv_lead, x) for x in mat[rank]]
        for i in range(len(mat)):
            if i != rank and mat[i][col]:
                f = mat[i][col]
                mat[i] = [field.sub(x, field.mul(f, y)) for x, y in zip(mat[i], mat[rank])]
        pivots.append(col)
        rank += 1
        if rank == len(mat):
            break
    return mat[:rank], pivots


def nullspace(field: FieldSpec, rows: Sequence[Sequence[int]], ncols: int) -> list[tuple[int, ...]]:
    """Basis of the right nullspace {v : M v = 0}, one vector per free column."""
    rref, pivots = row_reduce(field, rows, ncols)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fc in free:
        v = [0] * ncols
        v[fc] = 1
        for row, pc in zip(rref, pivots):
            v[pc] = field.neg(row[fc])
        basis.append(tuple(v))
    return basis


def matrix_rank(field: FieldSpec, rows: Sequence[Sequence[int]], ncols: int) -> int:
    return len(row_reduce(field, rows, ncols)[0])


def det(field: FieldSpec, rows: Sequence[Sequence[int]]) -> int:
    """Determinant of a square matrix by fraction-free elimination over GF(q)."""
    n = len(rows)
    mat = [list(r) for r in rows]
    d = 1
    for col in range(n):
        pivot_row = next((i for i in range(col, n) if mat[i][col]), None)
        if pivot_row is None:
            return 0
        if pivot_row != col:
            mat[col], mat[pivot_row] = mat[pivot_row], mat[col]
            d = field.neg(d)
        lead = mat[col][col]
        d = field.mul(d, lead)
        inv_lead = field.inv(lead)
        for i in range(col + 1, n):
            if mat[i][col]:
                f = field.mul(mat[i][col], inv_lead)
                mat[i] = [field.sub(x, field.mul(f, y)) for x, y in zip(mat[i], mat[col])]
    return d


def scale_to_canonical(field: FieldSpec, vec: Sequence[int]) -> tuple[int, ...]:
    """Scale a nonzero vector so its first nonzero entry is 1."""
    for x in vec:
        if x:
            inv = field.inv(x)
            return tuple(field.mul(inv, y) for y in vec)
    raise FieldError("cannot canonicalize the zero vector")
