"""Exact coefficient domains, sparse multivariate polynomials, monomial orders.

Polynomials are sparse distributed: a sorted tuple of (monomial, coefficient)
pairs with monomials packed into single integers so that comparing two packed
keys with ``<`` realizes the ring's monomial order.  Multiplication and
divisibility of monomials are a handful of integer operations on the keys.

Coefficients live in one of three exact domains: arbitrary-precision integers,
rationals (``fractions.Fraction``), or a prime field F_p with word-size p.
"""

from __future__ import annotations

import re
from fractions import Fraction

from . import linalg
from .errors import (
    CapacityError,
    DomainMismatchError,
    StructuralError,
)

_WIDTH = 16
_FIELD_CAP = (1 << (_WIDTH - 1)) - 1  # exponents must stay below this
_DEG_BITS = 32


def _is_probable_prime(n: int) -> bool:
    """Deterministic Miller-Rabin for word-size inputs."""
    if n < 2:
        return False
    for q in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % q == 0:
            return n == q
    d = n - 1
    s = 0
    while d % 2 == 0:
        d //= 2
        s += 1
    # this base set is deterministic for n < 3.3 * 10**24
    for a in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


class CoeffDomain:
    """One of ZZ, QQ, or F_p.  Immutable; compared by value."""

    __slots__ = ("kind", "modulus")

    def __init__(self, kind: str, modulus: int | None = None):
        if kind not in ("int", "rat", "fp"):
            raise StructuralError(f"unknown coefficient domain kind {kind!r}")
        if kind == "fp":
            if modulus is None or modulus >= 1 << 63 or not _is_probable_prime(modulus):
                raise StructuralError(f"modulus {modulus!r} is not a word-size prime")
        elif modulus is not None:
            raise StructuralError("modulus only makes sense for prime fields")
        self.kind = kind
        self.modulus = modulus

    @property
    def is_field(self) -> bool:
        return self.kind != "int"

    def normalize(self, c):
        if self.kind == "fp":
            return int(c) % self.modulus
        if self.kind == "rat":
            return Fraction(c)
        if isinstance(c, Fraction):
            if c.denominator != 1:
                raise StructuralError(f"{c} is not an integer")
            return c.numerator
        return int(c)

    def coerce(self, c):
        """Normalize, accepting Fractions into F_p via modular inverse."""
        if self.kind == "fp" and isinstance(c, Fraction):
            p = self.modulus
            den = c.denominator % p
            if den == 0:
                raise StructuralError(f"denominator of {c} vanishes mod {p}")
            return c.numerator % p * pow(den, p - 2, p) % p
        return self.normalize(c)

    def inv(self, c):
        if self.kind == "fp":
            return pow(c, self.modulus - 2, self.modulus)
        if self.kind == "rat":
            return 1 / c
        raise StructuralError("no inverses over the integers")

    def from_str(self, s: str):
        s = s.strip()
        if "/" in s:
            return self.coerce(Fraction(s))
        return self.normalize(int(s))

    def to_str(self, c) -> str:
        return str(c)

    def __eq__(self, other):
        return (
            isinstance(other, CoeffDomain)
            and self.kind == other.kind
            and self.modulus == other.modulus
        )

    def __hash__(self):
        return hash((self.kind, self.modulus))

    def __repr__(self):
        if self.kind == "fp":
            return f"F_{self.modulus}"
        return {"int": "ZZ", "rat": "QQ"}[self.kind]

    def tag(self) -> str:
        return f"fp:{self.modulus}" if self.kind == "fp" else self.kind

    @staticmethod
    def from_tag(tag: str) -> "CoeffDomain":
        if tag.startswith("fp:"):
            return CoeffDomain("fp", int(tag[3:]))
        return CoeffDomain(tag)


ZZ = CoeffDomain("int")
QQ = CoeffDomain("rat")


def GF(p: int) -> CoeffDomain:
    return CoeffDomain("fp", p)


class MonomialOrder:
    """degrevlex, lex, or block(m): a lex block on the first m variables
    followed by degrevlex on the rest."""

    __slots__ = ("kind", "elim_count")

    def __init__(self, kind: str, elim_count: int = 0):
        if kind not in ("degrevlex", "lex", "block"):
            raise StructuralError(f"unknown monomial order {kind!r}")
        if kind == "block" and elim_count <= 0:
            raise StructuralError("block order needs a positive elim_count")
        self.kind = kind
        self.elim_count = elim_count if kind == "block" else 0

    def __eq__(self, other):
        return (
            isinstance(other, MonomialOrder)
            and self.kind == other.kind
            and self.elim_count == other.elim_count
        )

    def __hash__(self):
        return hash((self.kind, self.elim_count))

    def __repr__(self):
        if self.kind == "block":
            return f"block({self.elim_count})"
        return self.kind

    def tag(self) -> str:
        return f"block:{self.elim_count}" if self.kind == "block" else self.kind

    @staticmethod
    def from_tag(tag: str) -> "MonomialOrder":
        if tag.startswith("block:"):
            return MonomialOrder("block", int(tag[6:]))
        return MonomialOrder(tag)


DEGREVLEX = MonomialOrder("degrevlex")
LEX = MonomialOrder("lex")


def block_order(elim_count: int) -> MonomialOrder:
    return MonomialOrder("block", elim_count)


class VarUniverse:
    """A fixed, ordered list of variable names.

    Shape-based universes name x_<i>_<j> in row-major order (1-based), with
    optional auxiliary names appended after (smaller than) the matrix
    variables.  Free-form universes take any name list.
    """

    __slots__ = ("shape", "names", "index")

    def __init__(self, names, shape=None):
        names = list(names)
        if len(set(names)) != len(names):
            raise StructuralError("duplicate variable names")
        for nm in names:
            if not re.fullmatch(r"[A-Za-z_][A-Za-z0-9_]*", nm):
                raise StructuralError(f"bad variable name {nm!r}")
        self.names = tuple(names)
        self.shape = shape
        self.index = {nm: i for i, nm in enumerate(names)}

    @staticmethod
    def matrix(k: int, n: int, aux=()) -> "VarUniverse":
        names = [f"x_{i}_{j}" for i in range(1, k + 1) for j in range(1, n + 1)]
        names.extend(aux)
        return VarUniverse(names, shape=(k, n))

    @staticmethod
    def free(names) -> "VarUniverse":
        return VarUniverse(names)

    def var_index(self, i: int, j: int) -> int:
        """Index of x_i_j (1-based matrix position)."""
        if self.shape is None:
            raise StructuralError("universe has no matrix shape")
        k, n = self.shape
        if not (1 <= i <= k and 1 <= j <= n):
            raise StructuralError(f"({i},{j}) outside shape {self.shape}")
        return (i - 1) * n + (j - 1)

    def __len__(self):
        return len(self.names)

    def __eq__(self, other):
        return isinstance(other, VarUniverse) and self.names == other.names

    def __hash__(self):
        return hash(self.names)

    def __repr__(self):
        return f"VarUniverse({len(self.names)} vars)"


class _Pack:
    """Packs exponent vectors into order-comparable integers.

    For every supported order the packed keys satisfy: key(a) < key(b) iff
    a < b in the monomial order, key(a*b) = key(a) + key(b) - offset, and
    divisibility is a masked subtraction.
    """

    def __init__(self, nvars: int, order: MonomialOrder):
        self.n = nvars
        self.order = order
        w = _WIDTH
        if order.kind == "block" and order.elim_count >= nvars:
            order = LEX  # block covering everything degenerates to lex
            self.order = MonomialOrder("block", self.n)
        kind = order.kind
        self.elim = order.elim_count if kind == "block" else 0
        m = self.elim
        tail = nvars - m
        # low part: degrevlex on variables m..n-1 (complement fields, deg on top)
        # high part (block/lex only): raw lex fields for variables 0..m-1
        if kind == "lex":
            m, tail = nvars, 0
        self._tail = tail
        self._low_bits = tail * w + (_DEG_BITS if tail else 0)
        self._low_mask = (1 << self._low_bits) - 1
        off = 0
        for i in range(tail):
            off |= _FIELD_CAP << (w * i)
        self.offset = off
        guard_low = 0
        for i in range(tail):
            guard_low |= 1 << (w * i + w - 1)
        self._guard_low = guard_low
        guard_high = 0
        for i in range(m):
            guard_high |= 1 << (self._low_bits + w * i + w - 1)
        self._guard_high = guard_high
        self.one = off  # key of the monomial 1

    def pack(self, exps) -> int:
        n, w = self.n, _WIDTH
        if len(exps) != n:
            raise StructuralError("exponent vector has wrong length")
        m = n - self._tail
        key = 0
        deg = 0
        for i in range(m):  # lex block, variable 0 most significant
            e = exps[i]
            if not 0 <= e <= _FIELD_CAP:
                raise CapacityError(f"exponent {e} out of range")
            key |= e << (self._low_bits + w * (m - 1 - i))
        if self._tail:
            for t, i in enumerate(range(m, n)):
                e = exps[i]
                if not 0 <= e <= _FIELD_CAP:
                    raise CapacityError(f"exponent {e} out of range")
                deg += e
                key |= (_FIELD_CAP - e) << (w * (i - m))
            key |= deg << (w * self._tail)
        return key

    def unpack(self, key: int):
        n, w = self.n, _WIDTH
        m = n - self._tail
        exps = [0] * n
        mask = (1 << w) - 1
        for i in range(m):
            exps[i] = (key >> (self._low_bits + w * (m - 1 - i))) & mask
        for i in range(m, n):
            exps[i] = _FIELD_CAP - ((key >> (w * (i - m))) & mask)
        return tuple(exps)

    def mul(self, ka: int, kb: int) -> int:
        return ka + kb - self.offset

    def quotient(self, kb: int, ka: int) -> int:
        """Key of b/a; caller guarantees divisibility."""
        return kb - ka + self.offset

    def divides(self, ka: int, kb: int) -> bool:
        gl, gh = self._guard_low, self._guard_high
        if gl:
            low = ((ka | gl) - (kb & self._low_mask)) & gl
            if low != gl:
                return False
        if gh:
            high = (((kb & ~self._low_mask) | gh) - (ka & ~self._low_mask)) & gh
            if high != gh:
                return False
        return True

    def lcm(self, ka: int, kb: int) -> int:
        ea, eb = self.unpack(ka), self.unpack(kb)
        return self.pack(tuple(max(x, y) for x, y in zip(ea, eb)))

    def gcd_is_one(self, ka: int, kb: int) -> bool:
        ea, eb = self.unpack(ka), self.unpack(kb)
        return all(x == 0 or y == 0 for x, y in zip(ea, eb))

    def degree(self, key: int) -> int:
        return sum(self.unpack(key))

    def front_free(self, key: int) -> bool:
        """True if the monomial avoids the first elim_count variables."""
        return key >> self._low_bits == 0


class PolyRing:
    """Bundle of universe + coefficient domain + monomial order."""

    _cache: dict = {}

    def __new__(cls, universe, domain, order=DEGREVLEX):
        sig = (universe, domain, order)
        ring = cls._cache.get(sig)
        if ring is not None:
            return ring
        ring = object.__new__(cls)
        ring.universe = universe
        ring.domain = domain
        ring.order = order
        ring.pack = _Pack(len(universe), order)
        ring.zero = MPoly(ring, ())
        ring.one = MPoly(ring, ((ring.pack.one, domain.normalize(1)),))
        cls._cache[sig] = ring
        return ring

    def gen(self, i) -> "MPoly":
        if isinstance(i, str):
            i = self.universe.index[i]
        exps = [0] * len(self.universe)
        exps[i] = 1
        return MPoly(self, ((self.pack.pack(exps), self.domain.normalize(1)),))

    def gens(self):
        return [self.gen(i) for i in range(len(self.universe))]

    def var(self, i: int, j: int) -> "MPoly":
        return self.gen(self.universe.var_index(i, j))

    def const(self, c) -> "MPoly":
        c = self.domain.coerce(c)
        if c == 0:
            return self.zero
        return MPoly(self, ((self.pack.one, c),))

    def from_terms(self, mapping) -> "MPoly":
        """Build from {packed key: coeff}, dropping zeros and sorting."""
        items = [(k, c) for k, c in mapping.items() if c != 0]
        items.sort(key=lambda t: t[0], reverse=True)
        return MPoly(self, tuple(items))

    def from_exp_dict(self, mapping) -> "MPoly":
        pk = self.pack.pack
        norm = self.domain.normalize
        out = {}
        for exps, c in mapping.items():
            c = norm(c)
            if c != 0:
                out[pk(exps)] = c
        return self.from_terms(out)

    def with_order(self, order: MonomialOrder) -> "PolyRing":
        return PolyRing(self.universe, self.domain, order)

    def with_domain(self, domain: CoeffDomain) -> "PolyRing":
        return PolyRing(self.universe, domain, self.order)

    def __repr__(self):
        return f"PolyRing({self.domain!r}, {len(self.universe)} vars, {self.order!r})"


class MPoly:
    """Immutable sparse polynomial; terms sorted descending in the order."""

    __slots__ = ("ring", "terms")

    def __init__(self, ring: PolyRing, terms: tuple):
        self.ring = ring
        self.terms = terms  # tuple of (packed key, nonzero coeff), descending

    # -- basic queries -------------------------------------------------

    @property
    def universe(self):
        return self.ring.universe

    @property
    def order(self):
        return self.ring.order

    @property
    def domain(self):
        return self.ring.domain

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __len__(self):
        return len(self.terms)

    def lead_key(self) -> int:
        if not self.terms:
            raise StructuralError("zero polynomial has no leading term")
        return self.terms[0][0]

    def lead_coeff(self):
        return self.terms[0][1]

    def lead_monomial(self) -> tuple:
        return self.ring.pack.unpack(self.terms[0][0])

    def total_degree(self) -> int:
        if not self.terms:
            return -1
        deg = self.ring.pack.degree
        return max(deg(k) for k, _ in self.terms)

    def is_homogeneous(self) -> bool:
        if not self.terms:
            return True
        deg = self.ring.pack.degree
        degs = {deg(k) for k, _ in self.terms}
        return len(degs) == 1

    def exp_terms(self):
        """Terms as [(exponent tuple, coeff)], descending in the order."""
        unpack = self.ring.pack.unpack
        return [(unpack(k), c) for k, c in self.terms]

    def constant_value(self):
        """Value as a scalar; raises if not constant."""
        if not self.terms:
            return self.ring.domain.normalize(0)
        if len(self.terms) == 1 and self.terms[0][0] == self.ring.pack.one:
            return self.terms[0][1]
        raise StructuralError("polynomial is not constant")

    def is_constant(self) -> bool:
        return not self.terms or (len(self.terms) == 1 and self.terms[0][0] == self.ring.pack.one)

    # -- arithmetic ----------------------------------------------------

    def _check_ring(self, other: "MPoly"):
        if self.ring is not other.ring:
            if (
                self.ring.universe != other.ring.universe
                or self.ring.domain != other.ring.domain
                or self.ring.order != other.ring.order
            ):
                raise DomainMismatchError(
                    f"operands in different rings: {self.ring!r} vs {other.ring!r}"
                )

    def _coerce(self, other):
        if isinstance(other, MPoly):
            self._check_ring(other)
            return other
        if isinstance(other, (int, Fraction)):
            return self.ring.const(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if self.ring.domain.kind == "fp":
            p = self.ring.domain.modulus
            acc = dict(self.terms)
            for k, c in other.terms:
                v = (acc.get(k, 0) + c) % p
                if v:
                    acc[k] = v
                elif k in acc:
                    del acc[k]
            return self.ring.from_terms(acc)
        acc = dict(self.terms)
        for k, c in other.terms:
            v = acc.get(k, 0) + c
            if v:
                acc[k] = v
            elif k in acc:
                del acc[k]
        return self.ring.from_terms(acc)

    __radd__ = __add__

    def __neg__(self):
        if self.ring.domain.kind == "fp":
            p = self.ring.domain.modulus
            return MPoly(self.ring, tuple((k, p - c) for k, c in self.terms))
        return MPoly(self.ring, tuple((k, -c) for k, c in self.terms))

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        a, b = self.terms, other.terms
        if not a or not b:
            return self.ring.zero
        if len(a) < len(b):
            a, b = b, a
        off = self.ring.pack.offset
        acc = {}
        if self.ring.domain.kind == "fp":
            p = self.ring.domain.modulus
            for kb, cb in b:
                shift = kb - off
                for ka, ca in a:
                    k = ka + shift
                    v = acc.get(k, 0) + ca * cb
                    acc[k] = v % p
        else:
            for kb, cb in b:
                shift = kb - off
                for ka, ca in a:
                    k = ka + shift
                    acc[k] = acc.get(k, 0) + ca * cb
        return self.ring.from_terms(acc)

    __rmul__ = __mul__

    def __pow__(self, e: int):
        if e < 0:
            raise StructuralError("negative power of a polynomial")
        result = self.ring.one
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base if e > 1 else base
            e >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = self.ring.const(other)
        if not isinstance(other, MPoly):
            return NotImplemented
        return self.ring is other.ring and self.terms == other.terms

    def __hash__(self):
        return hash((id(self.ring), self.terms))

    def monic(self) -> "MPoly":
        if not self.terms:
            return self
        dom = self.ring.domain
        if not dom.is_field:
            raise StructuralError("monic requires a field domain")
        lc = self.terms[0][1]
        if lc == dom.normalize(1):
            return self
        inv = dom.inv(lc)
        if dom.kind == "fp":
            p = dom.modulus
            return MPoly(self.ring, tuple((k, c * inv % p) for k, c in self.terms))
        return MPoly(self.ring, tuple((k, c * inv) for k, c in self.terms))

    def scale(self, c) -> "MPoly":
        c = self.ring.domain.coerce(c)
        if c == 0:
            return self.ring.zero
        if self.ring.domain.kind == "fp":
            p = self.ring.domain.modulus
            return MPoly(self.ring, tuple((k, cc * c % p) for k, cc in self.terms))
        return MPoly(self.ring, tuple((k, cc * c) for k, cc in self.terms))

    # -- calculus and substitution --------------------------------------

    def diff(self, var) -> "MPoly":
        """Formal partial derivative with respect to a variable (index or name)."""
        if isinstance(var, str):
            var = self.universe.index[var]
        n = len(self.universe)
        if not 0 <= var < n:
            raise StructuralError(f"variable index {var} out of range")
        pack = self.ring.pack
        dom = self.ring.domain
        acc = {}
        for k, c in self.terms:
            exps = pack.unpack(k)
            e = exps[var]
            if e == 0:
                continue
            newexps = list(exps)
            newexps[var] = e - 1
            cc = dom.coerce(c * e) if dom.kind != "fp" else c * e % dom.modulus
            if cc:
                acc[pack.pack(newexps)] = cc
        return self.ring.from_terms(acc)

    def substitute(self, mapping, target: PolyRing | None = None) -> "MPoly":
        """Substitute variables by polynomials.

        ``mapping`` sends variable indices or names to MPoly (or scalars) in
        ``target`` (defaults to this ring).  Unmapped variables must exist by
        name in the target universe.
        """
        ring = target or self.ring
        subs = {}
        for key, img in mapping.items():
            idx = self.universe.index[key] if isinstance(key, str) else key
            if not isinstance(img, MPoly):
                img = ring.const(img)
            elif img.ring is not ring:
                raise DomainMismatchError("substitution images must share one ring")
            subs[idx] = img
        id_cache = {}

        def image_of(i):
            if i in subs:
                return subs[i]
            if i not in id_cache:
                name = self.universe.names[i]
                if name not in ring.universe.index:
                    raise StructuralError(f"variable {name} has no image")
                id_cache[i] = ring.gen(name)
            return id_cache[i]

        pack = self.ring.pack
        powers: dict = {}
        acc_terms: dict = {}
        dom = ring.domain
        for k, c in self.terms:
            exps = pack.unpack(k)
            term = ring.const(c)
            for i, e in enumerate(exps):
                if e == 0:
                    continue
                cache = powers.setdefault(i, {0: ring.one})
                if e not in cache:
                    img = image_of(i)
                    emax = max(cache)
                    prod = cache[emax]
                    for ee in range(emax + 1, e + 1):
                        prod = prod * img
                        cache[ee] = prod
                term = term * cache[e]
            for kk, cc in term.terms:
                v = acc_terms.get(kk, 0) + cc
                if dom.kind == "fp":
                    v %= dom.modulus
                if v:
                    acc_terms[kk] = v
                elif kk in acc_terms:
                    del acc_terms[kk]
        return ring.from_terms(acc_terms)

    def linear_part(self) -> "MPoly":
        """Sum of the degree-1 terms."""
        deg = self.ring.pack.degree
        return self.ring.from_terms({k: c for k, c in self.terms if deg(k) == 1})

    def homogeneous_part(self, d: int) -> "MPoly":
        deg = self.ring.pack.degree
        return self.ring.from_terms({k: c for k, c in self.terms if deg(k) == d})

    def evaluate(self, point):
        """Exact evaluation at a full point (list of scalars)."""
        n = len(self.universe)
        if len(point) != n:
            raise StructuralError(f"point has length {len(point)}, expected {n}")
        dom = self.ring.domain
        point = [dom.coerce(x) for x in point]
        pack = self.ring.pack
        total = dom.normalize(0)
        if dom.kind == "fp":
            p = dom.modulus
            for k, c in self.terms:
                v = c
                for i, e in enumerate(pack.unpack(k)):
                    if e:
                        v = v * pow(point[i], e, p) % p
                total = (total + v) % p
            return total
        for k, c in self.terms:
            v = c
            for i, e in enumerate(pack.unpack(k)):
                if e:
                    v *= point[i] ** e
            total += v
        return total

    def max_coeff_bits(self) -> int:
        """Telemetry: largest numerator/denominator bit length."""
        best = 0
        for _, c in self.terms:
            if isinstance(c, Fraction):
                best = max(best, c.numerator.bit_length(), c.denominator.bit_length())
            else:
                best = max(best, abs(int(c)).bit_length())
        return best

    def convert(self, ring: PolyRing) -> "MPoly":
        """Map into another ring over the same universe (new order or domain)."""
        if ring.universe != self.universe:
            raise DomainMismatchError("convert requires the same universe")
        unpack = self.ring.pack.unpack
        out = {}
        for k, c in self.terms:
            cc = ring.domain.coerce(c)
            if cc:
                out[ring.pack.pack(unpack(k))] = cc
        return ring.from_terms(out)

    # -- text and JSON forms --------------------------------------------

    def text(self) -> str:
        """Canonical text form, e.g. ``3*x_1_2^2*x_2_1 - 7``."""
        if not self.terms:
            return "0"
        names = self.universe.names
        unpack = self.ring.pack.unpack
        chunks = []
        for pos, (k, c) in enumerate(self.terms):
            neg = c < 0 if not isinstance(c, Fraction) else c < 0
            mag = -c if neg else c
            factors = [
                (names[i] if e == 1 else f"{names[i]}^{e}")
                for i, e in enumerate(unpack(k))
                if e
            ]
            if not factors:
                body = str(mag)
            elif mag == 1:
                body = "*".join(factors)
            else:
                body = str(mag) + "*" + "*".join(factors)
            if pos == 0:
                chunks.append(("-" if neg else "") + body)
            else:
                chunks.append((" - " if neg else " + ") + body)
        return "".join(chunks)

    def __repr__(self):
        return f"<MPoly {self.text()}>"

    def to_json(self) -> dict:
        unpack = self.ring.pack.unpack
        return {
            "vars": list(self.universe.names),
            "order": self.ring.order.tag(),
            "domain": self.ring.domain.tag(),
            "terms": [[list(unpack(k)), str(c)] for k, c in self.terms],
        }

    @staticmethod
    def from_json(data: dict, ring: PolyRing | None = None) -> "MPoly":
        if ring is None:
            universe = VarUniverse(data["vars"])
            ring = PolyRing(
                universe,
                CoeffDomain.from_tag(data["domain"]),
                MonomialOrder.from_tag(data["order"]),
            )
        out = {}
        for exps, cs in data["terms"]:
            out[ring.pack.pack(exps)] = ring.domain.from_str(cs)
        return ring.from_terms(out)


_TERM_SPLIT = re.compile(r"(?=[+-])")
_NUM_RE = re.compile(r"-?\d+(?:/\d+)?$")


def poly_from_text(text: str, ring: PolyRing) -> MPoly:
    """Parse the canonical text form back into a polynomial."""
    s = text.replace(" ", "")
    if not s:
        raise StructuralError("empty polynomial text")
    if s == "0":
        return ring.zero
    acc: dict = {}
    pack = ring.pack
    dom = ring.domain
    n = len(ring.universe)
    for chunk in _TERM_SPLIT.split(s):
        if not chunk or chunk in "+-":
            if chunk:
                raise StructuralError(f"dangling sign in {text!r}")
            continue
        sign = 1
        if chunk[0] == "+":
            chunk = chunk[1:]
        elif chunk[0] == "-":
            sign = -1
            chunk = chunk[1:]
        coeff = Fraction(1)
        exps = [0] * n
        for factor in chunk.split("*"):
            if not factor:
                raise StructuralError(f"empty factor in {text!r}")
            if _NUM_RE.fullmatch(factor):
                coeff *= Fraction(factor)
                continue
            if "^" in factor:
                name, _, es = factor.partition("^")
                e = int(es)
            else:
                name, e = factor, 1
            if name not in ring.universe.index:
                raise StructuralError(f"unknown variable {name!r} in {text!r}")
            exps[ring.universe.index[name]] += e
        key = pack.pack(exps)
        c = dom.coerce(coeff * sign)
        v = acc.get(key, 0) + c
        if dom.kind == "fp":
            v %= dom.modulus
        if v:
            acc[key] = v
        elif key in acc:
            del acc[key]
    return ring.from_terms(acc)


# ---------------------------------------------------------------------------
# matrices of polynomials


class PolyMatrix:
    """Rectangular matrix of MPoly entries sharing one ring."""

    __slots__ = ("ring", "rows", "dims")

    def __init__(self, rows):
        rows = [list(r) for r in rows]
        if not rows or not rows[0]:
            raise StructuralError("empty matrix")
        width = len(rows[0])
        ring = None
        for r in rows:
            if len(r) != width:
                raise StructuralError("ragged matrix")
            for x in r:
                if not isinstance(x, MPoly):
                    raise StructuralError("PolyMatrix entries must be MPoly")
                if ring is None:
                    ring = x.ring
                elif x.ring is not ring:
                    raise DomainMismatchError("matrix entries in different rings")
        self.ring = ring
        self.rows = rows
        self.dims = (len(rows), width)

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def submatrix(self, row_idx, col_idx) -> "PolyMatrix":
        return PolyMatrix([[self.rows[i][j] for j in col_idx] for i in row_idx])

    def transpose(self) -> "PolyMatrix":
        m, n = self.dims
        return PolyMatrix([[self.rows[i][j] for i in range(m)] for j in range(n)])

    def map(self, fn) -> "PolyMatrix":
        return PolyMatrix([[fn(x) for x in r] for r in self.rows])

    def is_constant(self) -> bool:
        return all(x.is_constant() for r in self.rows for x in r)

    def constant_rows(self):
        return [[x.constant_value() for x in r] for r in self.rows]

    def __repr__(self):
        m, n = self.dims
        return f"<PolyMatrix {m}x{n} over {self.ring!r}>"


def matrix_det(M: PolyMatrix, symbolic_bound: int = 8) -> MPoly:
    """Exact determinant.

    Symbolic entries go through cofactor expansion with column-subset
    memoization (bounded size); constant matrices use fraction-free
    elimination and are unbounded.
    """
    m, n = M.dims
    if m != n:
        raise StructuralError(f"determinant of a {m}x{n} matrix")
    ring = M.ring
    if M.is_constant():
        vals = M.constant_rows()
        if ring.domain.kind == "fp":
            return ring.const(linalg.det_modp(vals, ring.domain.modulus))
        return ring.const(linalg.bareiss_det(vals))
    if n > symbolic_bound:
        raise CapacityError(
            f"symbolic determinant of size {n} exceeds bound {symbolic_bound}; "
            "raise symbolic_bound if the entries are sparse enough"
        )
    memo: dict = {}
    full = (1 << n) - 1

    def expand(row: int, colmask: int) -> MPoly:
        if row == n:
            return ring.one
        cached = memo.get(colmask)
        if cached is not None:
            return cached
        total = ring.zero
        sign = 1
        rest = colmask
        while rest:
            low = rest & -rest
            j = low.bit_length() - 1
            entry = M.rows[row][j]
            if entry:
                sub = expand(row + 1, colmask & ~low)
                term = entry * sub
                total = total + (term if sign > 0 else -term)
            sign = -sign
            rest &= rest - 1
        memo[colmask] = total
        return total

    return expand(0, full)


def matrix_minors(h: int, M: PolyMatrix, symbolic_bound: int = 8):
    """All h x h minors, column subsets outermost, both subsets in
    lexicographic order."""
    m, n = M.dims
    if h > min(m, n):
        raise StructuralError(f"{h}x{h} minors of a {m}x{n} matrix")
    from itertools import combinations

    out = []
    for cols in combinations(range(n), h):
        for rows in combinations(range(m), h):
            out.append(matrix_det(M.submatrix(rows, cols), symbolic_bound))
    return out


def poly_family_rank(fs) -> int:
    """Rank of the coefficient matrix of a polynomial family.

    Rows are polynomials, columns the monomials appearing anywhere in the
    family; rank is taken over the coefficient field (QQ for integer input).
    """
    fs = list(fs)
    if not fs:
        return 0
    ring = fs[0].ring
    for f in fs:
        if f.ring.universe != ring.universe:
            raise DomainMismatchError("family must share one universe")
    monomials = sorted({k for f in fs for k, _ in f.terms}, reverse=True)
    col = {k: i for i, k in enumerate(monomials)}
    rows = []
    for f in fs:
        row = [0] * len(monomials)
        for k, c in f.terms:
            row[col[k]] = c
        rows.append(row)
    if not monomials:
        return 0
    if ring.domain.kind == "fp":
        return linalg.rank_modp(rows, ring.domain.modulus)
    return linalg.rank(rows)
