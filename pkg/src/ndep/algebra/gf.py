"""Finite fields F_{p^k} with exact arithmetic.

Elements are encoded as integers ``sum(c_i * p**i)`` where ``c_i`` are the
coefficients of the residue class modulo the defining polynomial. The field
object does the integer-level arithmetic; :class:`GaloisFieldElement` is the
user-facing wrapper with operator overloading.
"""
from __future__ import annotations

from functools import lru_cache
from typing import Iterator, Sequence

_TABLE_LIMIT = 1 << 16
_ADD_TABLE_LIMIT = 729


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def _prime_factors(n: int) -> list[int]:
    out = []
    f = 2
    while f * f <= n:
        if n % f == 0:
            out.append(f)
            while n % f == 0:
                n //= f
        f += 1
    if n > 1:
        out.append(n)
    return out


# --- dense polynomials over F_p, coefficient lists low -> high -------------

def _trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _pmod(a: Sequence[int], m: Sequence[int], p: int) -> list[int]:
    a = _trim([x % p for x in a])
    dm = len(m) - 1
    inv_lead = pow(m[-1], p - 2, p)
    while len(a) - 1 >= dm and a:
        shift = len(a) - 1 - dm
        q = a[-1] * inv_lead % p
        for i, c in enumerate(m):
            a[shift + i] = (a[shift + i] - q * c) % p
        _trim(a)
    return a


def _pmul(a: Sequence[int], b: Sequence[int], p: int) -> list[int]:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = (out[i + j] + x * y) % p
    return _trim(out)


def _pgcd(a: list[int], b: list[int], p: int) -> list[int]:
    a, b = _trim(list(a)), _trim(list(b))
    while b:
        a, b = b, _pmod(a, b, p)
    return a


def _ppowmod(base: list[int], e: int, m: Sequence[int], p: int) -> list[int]:
    result = [1]
    base = _pmod(base, m, p)
    while e:
        if e & 1:
            result = _pmod(_pmul(result, base, p), m, p)
        base = _pmod(_pmul(base, base, p), m, p)
        e >>= 1
    return result


def is_irreducible(poly: Sequence[int], p: int) -> bool:
    """Ben-Or test for a monic polynomial over F_p (coefficients low -> high)."""
    f = _trim([c % p for c in poly])
    k = len(f) - 1
    if k < 1:
        return False
    if k == 1:
        return True
    xp = [0, 1]
    for _ in range(k // 2):
        xp = _ppowmod(xp, p, f, p)
        diff = list(xp) + [0] * max(0, 2 - len(xp))
        diff[1] = (diff[1] - 1) % p
        if len(_pgcd(f, _trim(diff), p)) != 1:
            return False
    return True


def has_factor_by_trial_division(poly: Sequence[int], p: int) -> bool:
    """Exhaustive check: does some monic polynomial of degree <= deg/2 divide ``poly``?"""
    f = _trim([c % p for c in poly])
    k = len(f) - 1
    for d in range(1, k // 2 + 1):
        for r in range(p**d):
            g = [(r // p**i) % p for i in range(d)] + [1]
            if not _pmod(f, g, p):
                return True
    return False


def smallest_irreducible(p: int, k: int) -> tuple[int, ...]:
    """Smallest monic irreducible of degree k, ordered by ``sum(c_i p^i)``."""
    for r in range(p**k):
        poly = [(r // p**i) % p for i in range(k)] + [1]
        if is_irreducible(poly, p):
            return tuple(poly)
    raise AssertionError("no irreducible polynomial found")  # unreachable for prime p


class GaloisField:
    """The field F_{p^k} = F_p[g] / (modulus(g))."""

    def __init__(self, p: int, k: int = 1, modulus: Sequence[int] | None = None, name: str = "g"):
        if not is_prime(p):
            raise ValueError(f"p={p} is not prime")
        if not 1 <= k <= 8:
            raise ValueError(f"extension degree k={k} outside 1..8")
        if modulus is None:
            modulus = smallest_irreducible(p, k)
        modulus = tuple(int(c) % p for c in modulus)
        if len(modulus) != k + 1 or modulus[-1] != 1:
            raise ValueError("modulus must be monic of degree k")
        if not is_irreducible(modulus, p):
            raise ValueError("modulus is reducible")
        self.p = p
        self.k = k
        self.q = p**k
        self.modulus = modulus
        self.name = name
        self._exp: list[int] | None = None
        self._log: list[int] | None = None
        self._add: list[list[int]] | None = None
        if k > 1 and self.q <= _TABLE_LIMIT:
            self._build_tables()
        if k > 1 and p > 2 and self.q <= _ADD_TABLE_LIMIT:
            q = self.q
            self._add = [[self._add_digits(a, b) for b in range(q)] for a in range(q)]

    # --- construction helpers ---------------------------------------------

    def __repr__(self) -> str:
        if self.k == 1:
            return f"GF({self.p})"
        return f"GF({self.p}^{self.k})"

    def __eq__(self, other: object) -> bool:
        return (isinstance(other, GaloisField) and self.p == other.p
                and self.modulus == other.modulus)

    def __hash__(self) -> int:
        return hash((self.p, self.modulus))

    def __call__(self, value) -> GaloisFieldElement:
        if isinstance(value, GaloisFieldElement):
            if value.field != self:
                raise ValueError("element from a different field")
            return value
        if isinstance(value, int):
            return GaloisFieldElement(self, value % self.p)
        return GaloisFieldElement(self, self.from_coeffs(value))

    def __iter__(self) -> Iterator[GaloisFieldElement]:
        for v in range(self.q):
            yield GaloisFieldElement(self, v)

    def __len__(self) -> int:
        return self.q

    def elements(self) -> list[GaloisFieldElement]:
        return list(self)

    def zero(self) -> GaloisFieldElement:
        return GaloisFieldElement(self, 0)

    def one(self) -> GaloisFieldElement:
        return GaloisFieldElement(self, 1)

    def gen(self) -> GaloisFieldElement:
        """The class of g (equal to the prime-field element 0 when k = 1)."""
        return GaloisFieldElement(self, self.p if self.k > 1 else 0)

    def element(self, value: int) -> GaloisFieldElement:
        if not 0 <= value < self.q:
            raise ValueError("encoding out of range")
        return GaloisFieldElement(self, value)

    def to_coeffs(self, v: int) -> list[int]:
        p = self.p
        out = []
        for _ in range(self.k):
            out.append(v % p)
            v //= p
        return out

    def from_coeffs(self, coeffs: Sequence[int]) -> int:
        coeffs = list(coeffs)
        if len(coeffs) > self.k:
            coeffs = _pmod(coeffs, self.modulus, self.p)
        v = 0
        for c in reversed(coeffs):
            v = v * self.p + (int(c) % self.p)
        return v

    # --- integer-level arithmetic -----------------------------------------

    def _add_digits(self, a: int, b: int) -> int:
        p = self.p
        v, place = 0, 1
        while a or b:
            v += ((a % p + b % p) % p) * place
            a //= p
            b //= p
            place *= p
        return v

    def add(self, a: int, b: int) -> int:
        if self.k == 1:
            return (a + b) % self.p
        if self.p == 2:
            return a ^ b
        if self._add is not None:
            return self._add[a][b]
        return self._add_digits(a, b)

    def neg(self, a: int) -> int:
        if self.p == 2:
            return a
        if self.k == 1:
            return (-a) % self.p
        p = self.p
        v, place = 0, 1
        while a:
            v += ((-(a % p)) % p) * place
            a //= p
            place *= p
        return v

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def _mul_poly(self, a: int, b: int) -> int:
        prod = _pmul(self.to_coeffs(a), self.to_coeffs(b), self.p)
        return self.from_coeffs(_pmod(prod, self.modulus, self.p))

    def mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        if self.k == 1:
            return a * b % self.p
        if self._log is not None:
            return self._exp[self._log[a] + self._log[b]]
        return self._mul_poly(a, b)

    def pow(self, a: int, e: int) -> int:
        if e < 0:
            a = self.inv(a)
            e = -e
        if a == 0:
            return 1 if e == 0 else 0
        if self.k == 1:
            return pow(a, e, self.p)
        if self._log is not None:
            return self._exp[(self._log[a] * e) % (self.q - 1)]
        result = 1
        while e:
            if e & 1:
                result = self._mul_poly(result, a)
            a = self._mul_poly(a, a)
            e >>= 1
        return result

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("inverse of zero in a finite field")
        if self.k == 1:
            return pow(a, self.p - 2, self.p)
        if self._log is not None:
            return self._exp[(self.q - 1 - self._log[a]) % (self.q - 1)]
        return self.pow(a, self.q - 2)

    def frob(self, a: int, i: int = 1) -> int:
        """a^(p^i); negative i is the inverse automorphism (computed as i mod k)."""
        i %= self.k
        if i == 0 or a == 0 or self.k == 1:
            return a
        return self.pow(a, self.p**i)

    def _build_tables(self) -> None:
        q = self.q
        factors = _prime_factors(q - 1)
        for cand in range(2, q):
            if all(self.pow(cand, (q - 1) // r) != 1 for r in factors):
                break
        exp = [0] * (2 * (q - 1))
        log = [0] * q
        x = 1
        for i in range(q - 1):
            exp[i] = x
            log[x] = i
            x = self._mul_poly(x, cand)
        for i in range(q - 1, 2 * (q - 1)):
            exp[i] = exp[i - (q - 1)]
        self._exp, self._log = exp, log

    def format(self, v: int) -> str:
        if self.k == 1:
            return str(v)
        coeffs = self.to_coeffs(v)
        parts = []
        for i in reversed(range(self.k)):
            c = coeffs[i]
            if not c:
                continue
            mono = "" if i == 0 else (self.name if i == 1 else f"{self.name}^{i}")
            if not mono:
                parts.append(str(c))
            elif c == 1:
                parts.append(mono)
            else:
                parts.append(f"{c}*{mono}")
        return "+".join(parts) if parts else "0"

    def parse(self, text: str) -> GaloisFieldElement:
        """Parse the output of :meth:`format` (e.g. ``"2*g^2+g+1"``)."""
        text = text.replace(" ", "")
        if not text:
            raise ValueError("empty field element")
        coeffs = [0] * max(self.k, 1)
        for term in text.split("+"):
            if not term:
                raise ValueError(f"bad field element {text!r}")
            if "*" in term:
                c, mono = term.split("*", 1)
            elif term.startswith(self.name):
                c, mono = "1", term
            else:
                c, mono = term, ""
            c = int(c)
            if not mono:
                deg = 0
            elif mono == self.name:
                deg = 1
            elif mono.startswith(self.name + "^"):
                deg = int(mono[len(self.name) + 1:])
            else:
                raise ValueError(f"bad monomial {mono!r}")
            if deg >= len(coeffs):
                coeffs.extend([0] * (deg + 1 - len(coeffs)))
            coeffs[deg] += c
        return GaloisFieldElement(self, self.from_coeffs(coeffs))


@lru_cache(maxsize=None)
def gf_make(p: int, k: int = 1) -> GaloisField:
    """F_{p^k} with the smallest monic irreducible modulus; cached per (p, k)."""
    return GaloisField(p, k)


class GaloisFieldElement:
    __slots__ = ("field", "value")

    def __init__(self, field: GaloisField, value: int):
        self.field = field
        self.value = value

    @property
    def p(self) -> int:
        return self.field.p

    @property
    def coeffs(self) -> list[int]:
        return self.field.to_coeffs(self.value)

    def _coerce(self, other) -> int | None:
        if isinstance(other, GaloisFieldElement):
            if other.field is not self.field and other.field != self.field:
                raise ValueError("elements from different fields")
            return other.value
        if isinstance(other, int):
            return other % self.field.p
        return None

    def __add__(self, other):
        v = self._coerce(other)
        if v is None:
            return NotImplemented
        return GaloisFieldElement(self.field, self.field.add(self.value, v))

    __radd__ = __add__

    def __sub__(self, other):
        v = self._coerce(other)
        if v is None:
            return NotImplemented
        return GaloisFieldElement(self.field, self.field.sub(self.value, v))

    def __rsub__(self, other):
        v = self._coerce(other)
        if v is None:
            return NotImplemented
        return GaloisFieldElement(self.field, self.field.sub(v, self.value))

    def __neg__(self):
        return GaloisFieldElement(self.field, self.field.neg(self.value))

    def __mul__(self, other):
        v = self._coerce(other)
        if v is None:
            return NotImplemented
        return GaloisFieldElement(self.field, self.field.mul(self.value, v))

    __rmul__ = __mul__

    def __truediv__(self, other):
        v = self._coerce(other)
        if v is None:
            return NotImplemented
        return GaloisFieldElement(self.field, self.field.mul(self.value, self.field.inv(v)))

    def __rtruediv__(self, other):
        v = self._coerce(other)
        if v is None:
            return NotImplemented
        return GaloisFieldElement(self.field, self.field.mul(v, self.field.inv(self.value)))

    def __pow__(self, e: int):
        return GaloisFieldElement(self.field, self.field.pow(self.value, e))

    def inverse(self) -> GaloisFieldElement:
        return GaloisFieldElement(self.field, self.field.inv(self.value))

    def frobenius(self, i: int = 1) -> GaloisFieldElement:
        return GaloisFieldElement(self.field, self.field.frob(self.value, i))

    def is_zero(self) -> bool:
        return self.value == 0

    def __bool__(self) -> bool:
        return self.value != 0

    def zero(self) -> GaloisFieldElement:
        return GaloisFieldElement(self.field, 0)

    def one(self) -> GaloisFieldElement:
        return GaloisFieldElement(self.field, 1)

    def __eq__(self, other) -> bool:
        if isinstance(other, GaloisFieldElement):
            return self.value == other.value and self.field == other.field
        if isinstance(other, int):
            return self.value == other % self.field.p
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.field.p, self.field.modulus, self.value))

    def __lt__(self, other: GaloisFieldElement) -> bool:
        # arbitrary but fixed total order (by encoding), for canonical sorting
        return self.value < other.value

    def __repr__(self) -> str:
        return self.field.format(self.value)

    def to_json(self) -> list[int]:
        return self.coeffs


def gf_frobenius(x: GaloisFieldElement, i: int = 1) -> GaloisFieldElement:
    return x.frobenius(i)
