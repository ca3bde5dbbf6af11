"""Exact arithmetic on ordinals below epsilon_0, in Cantor normal form.

An ordinal is a finite sum ``w^e0*c0 + ... + w^ek*ck`` with exponents
``e0 > ... > ek`` (themselves ordinals in normal form) and integer
coefficients ``ci >= 1``; the empty sum is 0.  Structural equality of
normalized terms coincides with equality of ordinal values, so instances
are hashable and usable as dict keys.

Everything here is immutable and pure: ordinary sum/product/power, the
natural (coefficient-merging) sum, the polynomial natural product, the
iterated-natural-sum product with finite-or-omega right argument, and the
tip/degree decomposition of a normal form.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple


class OrdinalError(ValueError):
    """Domain error for ordinal operations."""


class ParseError(OrdinalError):
    """Malformed ordinal expression; ``position`` is the failing offset."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


def _cmp(a: "Ordinal", b: "Ordinal") -> int:
    if a is b:
        return 0
    for (ea, ca), (eb, cb) in zip(a.terms, b.terms):
        c = _cmp(ea, eb)
        if c:
            return c
        if ca != cb:
            return -1 if ca < cb else 1
    na, nb = len(a.terms), len(b.terms)
    if na == nb:
        return 0
    return -1 if na < nb else 1


@dataclass(frozen=True)
class Ordinal:
    """Cantor normal form: tuple of (exponent, coefficient) pairs."""

    terms: tuple = ()

    def __post_init__(self):
        if not isinstance(self.terms, tuple):
            object.__setattr__(self, "terms", tuple(self.terms))
        for t in self.terms:
            exp, coeff = t
            if not isinstance(exp, Ordinal):
                raise OrdinalError("exponent must be an Ordinal")
            if not isinstance(coeff, int) or coeff < 1:
                raise OrdinalError("coefficient must be an integer >= 1")
        for (e1, _), (e2, _) in zip(self.terms, self.terms[1:]):
            if _cmp(e1, e2) <= 0:
                raise OrdinalError("exponents must strictly decrease")

    # -- constructors ------------------------------------------------

    @classmethod
    def from_int(cls, n: int) -> "Ordinal":
        if n < 0:
            raise OrdinalError("ordinals are non-negative")
        if n == 0:
            return ZERO
        return cls(((ZERO, n),))

    @classmethod
    def omega_power(cls, exponent: "Ordinal", coeff: int = 1) -> "Ordinal":
        return cls(((exponent, coeff),))

    # -- structure ---------------------------------------------------

    @property
    def is_zero(self) -> bool:
        return not self.terms

    @property
    def is_finite(self) -> bool:
        return not self.terms or self.terms[0][0].is_zero

    @property
    def is_successor(self) -> bool:
        return bool(self.terms) and self.terms[-1][0].is_zero

    @property
    def is_limit(self) -> bool:
        return bool(self.terms) and not self.terms[-1][0].is_zero

    def __int__(self) -> int:
        if self.is_zero:
            return 0
        if not self.is_finite:
            raise OrdinalError(f"{self} is not finite")
        return self.terms[0][1]

    @property
    def degree(self) -> "Ordinal":
        """Leading exponent; 0 for finite ordinals (including 0)."""
        return self.terms[0][0] if self.terms else ZERO

    @property
    def leading_coeff(self) -> int:
        return self.terms[0][1] if self.terms else 0

    # -- comparisons and operators -----------------------------------

    def __lt__(self, other):
        return _cmp(self, _coerce(other)) < 0

    def __le__(self, other):
        return _cmp(self, _coerce(other)) <= 0

    def __gt__(self, other):
        return _cmp(self, _coerce(other)) > 0

    def __ge__(self, other):
        return _cmp(self, _coerce(other)) >= 0

    def __add__(self, other):
        return ord_add(self, _coerce(other))

    def __radd__(self, other):
        return ord_add(_coerce(other), self)

    def __mul__(self, other):
        return ord_mul(self, _coerce(other))

    def __rmul__(self, other):
        return ord_mul(_coerce(other), self)

    def __pow__(self, other):
        return ord_pow(self, _coerce(other))

    def __str__(self) -> str:
        return format_ordinal(self)

    def __repr__(self) -> str:
        return f"Ord({format_ordinal(self)})"


def _coerce(x) -> Ordinal:
    if isinstance(x, Ordinal):
        return x
    if isinstance(x, int):
        return Ordinal.from_int(x)
    raise TypeError(f"cannot interpret {x!r} as an ordinal")


ZERO = Ordinal()
ONE = Ordinal(((ZERO, 1),))
OMEGA = Ordinal(((ONE, 1),))


@dataclass(frozen=True)
class NatOrOmega:
    """A natural number or omega (value None encodes omega)."""

    value: int | None = None

    def __post_init__(self):
        if self.value is not None and (not isinstance(self.value, int) or self.value < 0):
            raise OrdinalError("finite value must be a natural number")

    @classmethod
    def finite(cls, n: int) -> "NatOrOmega":
        return cls(n)

    @classmethod
    def omega(cls) -> "NatOrOmega":
        return cls(None)

    @classmethod
    def coerce(cls, x) -> "NatOrOmega":
        if isinstance(x, NatOrOmega):
            return x
        if isinstance(x, int):
            return cls(x)
        if isinstance(x, Ordinal):
            if x.is_finite:
                return cls(int(x))
            if x == OMEGA:
                return cls(None)
            raise OrdinalError(f"{x} is neither finite nor omega")
        raise TypeError(f"cannot interpret {x!r} as nat-or-omega")

    @property
    def is_omega(self) -> bool:
        return self.value is None

    def __str__(self) -> str:
        return "w" if self.value is None else str(self.value)


# -- comparison ------------------------------------------------------

def ord_cmp(a: Ordinal, b: Ordinal) -> int:
    """Total order on normal forms: -1 (LT), 0 (EQ) or 1 (GT)."""
    return _cmp(a, b)


# -- ordinary arithmetic ---------------------------------------------

def ord_add(a: Ordinal, b: Ordinal) -> Ordinal:
    """Ordinal sum: terms of ``a`` below the degree of ``b`` are absorbed."""
    if b.is_zero:
        return a
    if a.is_zero:
        return b
    e = b.terms[0][0]
    keep = []
    merge = 0
    for exp, coeff in a.terms:
        c = _cmp(exp, e)
        if c > 0:
            keep.append((exp, coeff))
        elif c == 0:
            merge = coeff
            break
        else:
            break
    if merge:
        head = (e, merge + b.terms[0][1])
        return Ordinal(tuple(keep) + (head,) + b.terms[1:])
    return Ordinal(tuple(keep) + b.terms)


def ord_mul(a: Ordinal, b: Ordinal) -> Ordinal:
    """Ordinal product, distributing ``a`` over the normal form of ``b``."""
    if a.is_zero or b.is_zero:
        return ZERO
    d = a.terms[0][0]
    out = ZERO
    for exp, coeff in b.terms:
        if exp.is_zero:
            # a * finite: scale the leading coefficient, keep the tail once
            piece = Ordinal(((d, a.terms[0][1] * coeff),) + a.terms[1:])
        else:
            piece = Ordinal(((ord_add(d, exp), coeff),))
        out = ord_add(out, piece)
    return out


def _pow_nat(a: Ordinal, n: int) -> Ordinal:
    result = ONE
    base = a
    while n:
        if n & 1:
            result = ord_mul(result, base)
        base = ord_mul(base, base)
        n >>= 1
    return result


def ord_pow(a: Ordinal, b: Ordinal) -> Ordinal:
    """Ordinal exponentiation (with 0^0 = 1)."""
    if b.is_zero:
        return ONE
    if a.is_zero:
        return ZERO
    if a == ONE:
        return ONE
    inf_part = tuple(t for t in b.terms if not t[0].is_zero)
    fin = b.terms[-1][1] if b.terms[-1][0].is_zero else 0
    if a.is_finite:
        k = int(a)
        if not inf_part:
            return Ordinal.from_int(k ** fin)
        # k^(w^e * q) = w^(w^d * q) where 1 + d = e
        exp_terms = tuple((one_plus_inverse(e), q) for e, q in inf_part)
        head = Ordinal.omega_power(Ordinal(exp_terms))
        return ord_mul(head, Ordinal.from_int(k ** fin))
    d = a.terms[0][0]
    limit_exp = Ordinal(inf_part)
    head = Ordinal.omega_power(ord_mul(d, limit_exp)) if inf_part else ONE
    return ord_mul(head, _pow_nat(a, fin))


# -- natural (Hessenberg) operations ---------------------------------

def nat_sum(a: Ordinal, b: Ordinal) -> Ordinal:
    """Natural sum: coefficient-wise addition over the merged exponents."""
    coeffs: dict[Ordinal, int] = {}
    for exp, coeff in a.terms:
        coeffs[exp] = coeffs.get(exp, 0) + coeff
    for exp, coeff in b.terms:
        coeffs[exp] = coeffs.get(exp, 0) + coeff
    merged = sorted(coeffs.items(), key=lambda t: _SortKey(t[0]), reverse=True)
    return Ordinal(tuple(merged))


def nat_prod(a: Ordinal, b: Ordinal) -> Ordinal:
    """Natural product: multiply normal forms as polynomials in w."""
    coeffs: dict[Ordinal, int] = {}
    for ea, ca in a.terms:
        for eb, cb in b.terms:
            e = nat_sum(ea, eb)
            coeffs[e] = coeffs.get(e, 0) + ca * cb
    merged = sorted(coeffs.items(), key=lambda t: _SortKey(t[0]), reverse=True)
    return Ordinal(tuple(merged))


class _SortKey:
    __slots__ = ("o",)

    def __init__(self, o: Ordinal):
        self.o = o

    def __lt__(self, other):
        return _cmp(self.o, other.o) < 0


def nat_sum_split_below(gamma: Ordinal, a: Ordinal, b: Ordinal):
    """Split gamma < a(+)b as gamma = a'(+)b' with a' <= a and b' <= b.

    Walks the merged normal form to the first exponent where gamma falls
    short, splits the coefficient there between the two sides, and hands
    gamma's free tail to whichever side was strictly reduced; the halves
    are re-verified before returning.
    """
    s = nat_sum(a, b)
    gi = 0
    diverge = None
    tail = ()
    for es, cs in s.terms:
        if gi < len(gamma.terms) and gamma.terms[gi][0] == es:
            cg = gamma.terms[gi][1]
            if cg == cs:
                gi += 1
                continue
            if cg > cs:
                raise OrdinalError("gamma is not below the natural sum")
            diverge = (es, cg)
            tail = gamma.terms[gi + 1:]
            break
        if gi < len(gamma.terms) and _cmp(gamma.terms[gi][0], es) > 0:
            raise OrdinalError("gamma is not below the natural sum")
        diverge = (es, 0)
        tail = gamma.terms[gi:]
        break
    if diverge is None:
        raise OrdinalError("gamma is not strictly below the natural sum")
    e, g = diverge
    pa = next((c for ex, c in a.terms if ex == e), 0)
    ga = min(pa, g)
    gb = g - ga
    a_gt = tuple(t for t in a.terms if _cmp(t[0], e) > 0)
    b_gt = tuple(t for t in b.terms if _cmp(t[0], e) > 0)
    if ga < pa:
        a_half = Ordinal(a_gt + (((e, ga),) if ga else ()) + tail)
        b_half = Ordinal(b_gt + (((e, gb),) if gb else ()))
    else:
        a_half = Ordinal(a_gt + (((e, ga),) if ga else ()))
        b_half = Ordinal(b_gt + (((e, gb),) if gb else ()) + tail)
    if nat_sum(a_half, b_half) != gamma or not (a_half <= a and b_half <= b):
        raise AssertionError("split verification failed")
    return a_half, b_half


def odot(a: Ordinal, b) -> Ordinal:
    """Iterated natural sum of ``a``: a(.)0 = 0, a(.)(n+1) = (a(.)n) (+) a,
    and a(.)w is the supremum of the a(.)n.

    The right argument must be a natural number or omega; anything between
    omega and epsilon_0 is rejected as unsupported.
    """
    n = NatOrOmega.coerce(b)
    if n.is_omega:
        if a.is_zero:
            return ZERO
        return Ordinal.omega_power(ord_add(a.degree, ONE))
    # n-fold natural sum = coefficient-wise scaling
    return nat_prod(a, Ordinal.from_int(n.value)) if n.value else ZERO


class TipInfo(NamedTuple):
    tip: Ordinal
    tip_exponent: Ordinal
    degree: Ordinal


def tip_deg(a: Ordinal) -> TipInfo:
    """Last block w^(e_last) of the normal form, its exponent, and the degree.

    The tip exponent is the Cantor-Bendixson rank of ``a`` as a point of any
    ordinal interval containing it.
    """
    if a.is_zero:
        raise OrdinalError("tip of 0 is undefined")
    last_exp = a.terms[-1][0]
    return TipInfo(Ordinal.omega_power(last_exp), last_exp, a.terms[0][0])


def one_plus_inverse(r: Ordinal) -> Ordinal:
    """The unique a with 1 + a = r (requires r >= 1)."""
    if r.is_zero:
        raise OrdinalError("no ordinal a satisfies 1 + a = 0")
    if r.is_finite:
        return Ordinal.from_int(int(r) - 1)
    return r


# -- parsing and formatting ------------------------------------------
#
# Grammar (whitespace insignificant):
#   expr := term ('+' term)*
#   term := atom ('*' nat)?
#   atom := '0' | nat | 'w' | 'w^' atom | 'w^(' expr ')'

def parse_ordinal(text: str) -> Ordinal:
    parser = _Parser(text)
    value = parser.parse_expr()
    parser.skip_ws()
    if parser.pos != len(parser.text):
        raise ParseError("unexpected trailing input", parser.pos)
    return value


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def skip_ws(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self) -> str:
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def parse_expr(self) -> Ordinal:
        value = self.parse_term()
        while True:
            self.skip_ws()
            if self.peek() == "+":
                self.pos += 1
                value = ord_add(value, self.parse_term())
            else:
                return value

    def parse_term(self) -> Ordinal:
        atom = self.parse_atom()
        self.skip_ws()
        if self.peek() == "*":
            self.pos += 1
            self.skip_ws()
            at = self.pos
            coeff = self.parse_nat()
            if coeff == 0:
                raise ParseError("coefficient 0 is not allowed", at)
            return ord_mul(atom, Ordinal.from_int(coeff))
        return atom

    def parse_atom(self) -> Ordinal:
        self.skip_ws()
        ch = self.peek()
        if ch == "w":
            self.pos += 1
            if self.peek() == "^":
                self.pos += 1
                self.skip_ws()
                if self.peek() == "(":
                    self.pos += 1
                    exp = self.parse_expr()
                    self.skip_ws()
                    if self.peek() != ")":
                        raise ParseError("expected ')'", self.pos)
                    self.pos += 1
                else:
                    exp = self.parse_atom()
                return Ordinal.omega_power(exp)
            return OMEGA
        if ch.isdigit():
            return Ordinal.from_int(self.parse_nat())
        raise ParseError("expected '0', a number, or 'w'", self.pos)

    def parse_nat(self) -> int:
        self.skip_ws()
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        if start == self.pos:
            raise ParseError("expected a number", self.pos)
        return int(self.text[start:self.pos])


def format_ordinal(a: Ordinal, compact: bool = False) -> str:
    """Canonical rendering; parse_ordinal(format_ordinal(a)) == a.

    Terms are joined with ' + ' at the top level and with a compact '+'
    inside parenthesized exponents; ``compact=True`` uses '+' throughout
    (for embedding in larger expressions).
    """
    return _format(a, compact=compact)


def _format(a: Ordinal, compact: bool) -> str:
    if a.is_zero:
        return "0"
    parts = []
    for exp, coeff in a.terms:
        if exp.is_zero:
            parts.append(str(coeff))
            continue
        if exp == ONE:
            base = "w"
        elif exp.is_finite:
            base = f"w^{int(exp)}"
        elif exp == OMEGA:
            base = "w^w"
        else:
            base = f"w^({_format(exp, compact=True)})"
        parts.append(base if coeff == 1 else f"{base}*{coeff}")
    return ("+" if compact else " + ").join(parts)


# -- seeded generation (for property suites and the CLI self test) ----

def random_ordinal(rng, *, max_terms: int = 4, depth: int = 1,
                   max_coeff: int = 9, max_finite_exp: int = 9) -> Ordinal:
    """Random normalized ordinal with at most ``max_terms`` terms.

    ``depth`` bounds the nesting of exponents: at depth 0 all exponents
    are finite.
    """
    k = rng.randint(0, max_terms)
    if k == 0:
        return ZERO
    exps: list[Ordinal] = []
    attempts = 0
    while len(exps) < k and attempts < 12 * k:
        attempts += 1
        if depth <= 0:
            e = Ordinal.from_int(rng.randint(0, max_finite_exp))
        else:
            e = random_ordinal(rng, max_terms=2, depth=depth - 1,
                               max_coeff=3, max_finite_exp=max_finite_exp)
        if e not in exps:
            exps.append(e)
    exps.sort(key=_SortKey, reverse=True)
    return Ordinal(tuple((e, rng.randint(1, max_coeff)) for e in exps))


def random_ordinal_below(rng, bound: Ordinal) -> Ordinal:
    """Random ordinal strictly below ``bound`` (which must be positive)."""
    if bound.is_zero:
        raise OrdinalError("no ordinal below 0")
    i = rng.randrange(len(bound.terms))
    prefix = bound.terms[:i]
    exp, coeff = bound.terms[i]
    new_coeff = rng.randint(0, coeff - 1)
    terms = list(prefix)
    if new_coeff:
        terms.append((exp, new_coeff))
    if not exp.is_zero:
        # any tail below w^exp keeps the value below bound
        tail = random_ordinal(rng, max_terms=2, depth=0, max_coeff=3)
        for te, tc in tail.terms:
            if _cmp(te, exp) < 0:
                terms.append((te, tc))
                break
    return Ordinal(tuple(terms))
