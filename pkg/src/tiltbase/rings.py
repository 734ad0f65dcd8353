"""Coefficient rings: Z, Z/N and Z[1/c].

All three are elementary divisor rings, so Smith normal forms exist for
every matrix over them.  Elements are plain Python values (``int`` for Z
and Z/N, ``Fraction`` for Z[1/c]); each ring object supplies the
arithmetic, canonical representatives and divisibility tests that the
linear algebra layer needs.

Z[1/c] is normalized at construction to Z[1/rad(c)] where rad(c) is the
product of the distinct primes dividing c; the two rings are equal inside
Q and the normalization makes ring equality usable as "same subring of Q"
(e.g. Z[1/4] == Z[1/2]).
"""

from __future__ import annotations

import math
from fractions import Fraction


def radical(n: int) -> int:
    """Product of the distinct primes dividing |n| (rad(0) = 0, rad(±1) = 1)."""
    n = abs(n)
    if n == 0:
        return 0
    r = 1
    p = 2
    while p * p <= n:
        if n % p == 0:
            r *= p
            while n % p == 0:
                n //= p
        p += 1 if p == 2 else 2
    if n > 1:
        r *= n
    return r


def coprime_part(a: int, c: int) -> int:
    """The largest divisor of |a| coprime to c (0 for a = 0)."""
    a = abs(a)
    if a == 0:
        return 0
    g = math.gcd(a, abs(c))
    while g > 1:
        while a % g == 0:
            a //= g
        g = math.gcd(a, abs(c))
    return a


class BaseRing:
    """Common interface of the three coefficient rings."""

    kind: str

    # -- arithmetic ---------------------------------------------------
    def normalize(self, x):
        raise NotImplementedError

    def from_int(self, n: int):
        raise NotImplementedError

    def add(self, a, b):
        raise NotImplementedError

    def sub(self, a, b):
        raise NotImplementedError

    def mul(self, a, b):
        raise NotImplementedError

    def neg(self, a):
        raise NotImplementedError

    @property
    def zero(self):
        return self.from_int(0)

    @property
    def one(self):
        return self.from_int(1)

    def is_zero(self, a) -> bool:
        return a == self.zero

    # -- units and divisibility ---------------------------------------
    def is_unit(self, a) -> bool:
        raise NotImplementedError

    def unit_inverse(self, u):
        """Inverse of a unit (caller guarantees is_unit(u))."""
        raise NotImplementedError

    def try_divide(self, b, a):
        """Some q with a*q = b, or None.  a = 0 demands b = 0."""
        raise NotImplementedError

    def canonical_associate(self, a):
        """(g, u) with a = u*g, u a unit and g the canonical associate.

        Canonical associates: non-negative integers over Z; divisors of N
        in [0, N) over Z/N; non-negative integers coprime to c over Z[1/c].
        """
        raise NotImplementedError

    # -- formatting ----------------------------------------------------
    def format_element(self, a) -> str:
        return str(a)

    def parse_element(self, token: str):
        raise NotImplementedError

    def __repr__(self):
        return str(self)


class Integers(BaseRing):
    kind = "Z"

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def normalize(self, x):
        return x if type(x) is int else int(x)

    def from_int(self, n):
        return int(n)

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def mul(self, a, b):
        return a * b

    def neg(self, a):
        return -a

    def is_unit(self, a):
        return a in (1, -1)

    def unit_inverse(self, u):
        return u

    def try_divide(self, b, a):
        if a == 0:
            return 0 if b == 0 else None
        q, r = divmod(b, a)
        return q if r == 0 else None

    def canonical_associate(self, a):
        if a < 0:
            return -a, -1
        return a, 1

    def parse_element(self, token):
        return int(token)

    def __eq__(self, other):
        return isinstance(other, Integers)

    def __hash__(self):
        return hash("Z")

    def __str__(self):
        return "Z"


class IntegersMod(BaseRing):
    kind = "Zmod"

    def __init__(self, n: int):
        if n < 2:
            raise ValueError(f"modulus must be >= 2, got {n}")
        self.n = int(n)

    def normalize(self, x):
        return int(x) % self.n

    def from_int(self, n):
        return int(n) % self.n

    def add(self, a, b):
        return (a + b) % self.n

    def sub(self, a, b):
        return (a - b) % self.n

    def mul(self, a, b):
        return (a * b) % self.n

    def neg(self, a):
        return (-a) % self.n

    def is_unit(self, a):
        return math.gcd(a, self.n) == 1

    def unit_inverse(self, u):
        return pow(u, -1, self.n)

    def try_divide(self, b, a):
        # a*q = b mod n is solvable iff gcd(a, n) | b
        g = math.gcd(a, self.n)
        if g == 0:
            return 0 if b == 0 else None
        if b % g != 0:
            return None
        m = self.n // g
        if m == 1:
            return 0
        return ((b // g) * pow(a // g, -1, m)) % self.n

    def canonical_associate(self, a):
        a = a % self.n
        if a == 0:
            return 0, 1
        g = math.gcd(a, self.n)
        # find a unit u with a = u*g mod n: lift a/g (a unit mod n/g) to a
        # unit mod n by stepping through the residue class
        m = self.n // g
        u = (a // g) % self.n if m == 1 else (a // g) % m
        if u == 0:
            u = 1
        while math.gcd(u, self.n) != 1:
            u += m
        return g % self.n, u % self.n

    def parse_element(self, token):
        return int(token) % self.n

    def __eq__(self, other):
        return isinstance(other, IntegersMod) and other.n == self.n

    def __hash__(self):
        return hash(("Zmod", self.n))

    def __str__(self):
        return f"Z/{self.n}"


class IntegersLoc(BaseRing):
    """Z[1/c]: rationals whose denominators only involve primes dividing c."""

    kind = "Zloc"

    def __init__(self, c: int):
        if abs(c) < 2:
            raise ValueError(f"localization constant must have |c| >= 2, got {c}")
        self.c = radical(c)

    def normalize(self, x):
        if type(x) is Fraction:
            # produced by our own arithmetic, which stays inside Z[1/c]
            return x
        f = Fraction(x)
        if coprime_part(f.denominator, self.c) != 1:
            raise ValueError(f"{x} does not lie in {self}")
        return f

    def from_int(self, n):
        return Fraction(n)

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def mul(self, a, b):
        return a * b

    def neg(self, a):
        return -a

    def is_unit(self, a):
        return a != 0 and coprime_part(a.numerator, self.c) == 1

    def unit_inverse(self, u):
        return 1 / u

    def try_divide(self, b, a):
        if a == 0:
            return Fraction(0) if b == 0 else None
        q = b / a
        return q if coprime_part(q.denominator, self.c) == 1 else None

    def canonical_associate(self, a):
        if a == 0:
            return Fraction(0), Fraction(1)
        g = Fraction(coprime_part(a.numerator, self.c))
        return g, a / g

    def format_element(self, a):
        if a.denominator == 1:
            return str(a.numerator)
        return f"{a.numerator}/{a.denominator}"

    def parse_element(self, token):
        if "/" in token:
            num, den = token.split("/", 1)
            return self.normalize(Fraction(int(num), int(den)))
        return Fraction(int(token))

    def __eq__(self, other):
        return isinstance(other, IntegersLoc) and other.c == self.c

    def __hash__(self):
        return hash(("Zloc", self.c))

    def __str__(self):
        return f"Z[1/{self.c}]"


ZZ = Integers()
