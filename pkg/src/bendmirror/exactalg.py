"""Exact rational arithmetic and sparse multivariate Laurent polynomials.

Rationals are :class:`fractions.Fraction` values; this module adds the
Laurent polynomial ring over them, rational functions whose denominators
are polynomials, and a few exact linear-algebra helpers used elsewhere.

A :class:`LaurentPoly` is an immutable map from integer exponent vectors to
nonzero rational coefficients, together with an ordered tuple of variable
names.  Binary operations between polynomials over different variable sets
merge the variable sets automatically unless asked not to.
"""

from __future__ import annotations

import re
from fractions import Fraction
from numbers import Number
from typing import Callable, Dict, Iterable, Mapping, Optional, Sequence, Tuple, Union

from .errors import (
    DivisionNotExact,
    ExponentOverflow,
    NotLaurent,
    PoleAtZero,
    UnknownVariable,
    ValidationError,
    VariableMismatch,
)

Rational = Fraction
Exponent = Tuple[int, ...]
Scalar = Union[int, Fraction]

_EXP_LIMIT = 2**63 - 1
_CHUNK = re.compile(r"(\d+)")


# ---------------------------------------------------------------------------
# rationals
# ---------------------------------------------------------------------------

def as_fraction(value) -> Fraction:
    """Convert ints, Fractions, decimal floats and ``"p/q"`` strings.

    Floats go through their shortest decimal representation, so ``0.1``
    becomes ``1/10`` rather than the binary expansion.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise ValidationError(f"not a rational number: {value!r}")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, float):
        return Fraction(repr(value))
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise ValidationError(f"not a rational number: {value!r}") from exc
    raise ValidationError(f"not a rational number: {value!r}")


def fraction_str(q: Fraction) -> str:
    """Serialize a rational as ``"num/den"`` (denominator always present)."""
    q = Fraction(q)
    return f"{q.numerator}/{q.denominator}"


def natural_key(name: str):
    """Sort key comparing digit runs numerically, so ``z2 < z10``."""
    return tuple(int(c) if c.isdigit() else c for c in _CHUNK.split(name) if c != "")


def sort_variables(names: Iterable[str]) -> Tuple[str, ...]:
    return tuple(sorted(set(names), key=natural_key))


def _check_exp(e: int) -> int:
    if e > _EXP_LIMIT or e < -_EXP_LIMIT:
        raise ExponentOverflow(f"exponent {e} does not fit in 64 bits")
    return e


# ---------------------------------------------------------------------------
# Laurent polynomials
# ---------------------------------------------------------------------------

class LaurentPoly:
    """Sparse Laurent polynomial with rational coefficients."""

    __slots__ = ("_vars", "_terms", "_hash")

    def __init__(self, variables: Iterable[str] = (), terms: Optional[Mapping] = None):
        names = tuple(variables)
        canon = sort_variables(names)
        if len(canon) != len(names):
            raise ValidationError(f"duplicate variable names in {names!r}")
        perm = [names.index(v) for v in canon]
        clean: Dict[Exponent, Fraction] = {}
        for exp, coeff in (terms or {}).items():
            exp = tuple(int(e) for e in exp)
            if len(exp) != len(names):
                raise ValidationError(
                    f"exponent {exp} has length {len(exp)}, expected {len(names)}"
                )
            for e in exp:
                _check_exp(e)
            key = tuple(exp[p] for p in perm)
            c = clean.get(key, Fraction(0)) + as_fraction(coeff)
            if c:
                clean[key] = c
            else:
                clean.pop(key, None)
        self._vars = canon
        self._terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, variables: Tuple[str, ...], terms: Dict[Exponent, Fraction]) -> "LaurentPoly":
        # trusted constructor: variables already canonical, terms nonzero
        obj = cls.__new__(cls)
        obj._vars = variables
        obj._terms = terms
        obj._hash = None
        return obj

    # -- constructors ------------------------------------------------------
    @classmethod
    def zero(cls, variables: Iterable[str] = ()) -> "LaurentPoly":
        return cls._raw(sort_variables(variables), {})

    @classmethod
    def constant(cls, c: Scalar, variables: Iterable[str] = ()) -> "LaurentPoly":
        vs = sort_variables(variables)
        c = as_fraction(c)
        return cls._raw(vs, {(0,) * len(vs): c} if c else {})

    @classmethod
    def var(cls, name: str, variables: Iterable[str] = ()) -> "LaurentPoly":
        return cls.monomial({name: 1}, 1, variables)

    @classmethod
    def monomial(cls, exps: Mapping[str, int], coeff: Scalar = 1,
                 variables: Iterable[str] = ()) -> "LaurentPoly":
        vs = sort_variables(list(variables) + list(exps))
        e = tuple(_check_exp(int(exps.get(v, 0))) for v in vs)
        c = as_fraction(coeff)
        return cls._raw(vs, {e: c} if c else {})

    # -- basic accessors ---------------------------------------------------
    @property
    def variables(self) -> Tuple[str, ...]:
        return self._vars

    @property
    def terms(self) -> Dict[Exponent, Fraction]:
        return dict(self._terms)

    def items(self):
        return sorted(self._terms.items())

    def __len__(self) -> int:
        return len(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def is_monomial(self) -> bool:
        return len(self._terms) == 1

    def is_constant(self) -> bool:
        return not self._terms or (len(self._terms) == 1 and not any(next(iter(self._terms))))

    def constant_term(self) -> Fraction:
        return self._terms.get((0,) * len(self._vars), Fraction(0))

    def coefficient(self, exps: Mapping[str, int]) -> Fraction:
        for v in exps:
            if v not in self._vars and exps[v] != 0:
                return Fraction(0)
        key = tuple(int(exps.get(v, 0)) for v in self._vars)
        return self._terms.get(key, Fraction(0))

    def used_variables(self) -> Tuple[str, ...]:
        used = set()
        for exp in self._terms:
            used.update(v for v, e in zip(self._vars, exp) if e)
        return sort_variables(used)

    def exponent_dicts(self):
        """Yield ``({var: exp}, coeff)`` pairs, dropping zero exponents."""
        for exp, c in self.items():
            yield {v: e for v, e in zip(self._vars, exp) if e}, c

    # -- variable management ----------------------------------------------
    def with_variables(self, variables: Iterable[str]) -> "LaurentPoly":
        """Re-express over a superset (or equal set) of the used variables."""
        vs = sort_variables(variables)
        if vs == self._vars:
            return self
        index = {v: i for i, v in enumerate(vs)}
        for exp in self._terms:
            for v, e in zip(self._vars, exp):
                if e and v not in index:
                    raise VariableMismatch(f"variable {v} is used but missing in {vs}")
        pos = [index.get(v) for v in self._vars]
        new: Dict[Exponent, Fraction] = {}
        for exp, c in self._terms.items():
            key = [0] * len(vs)
            for p, e in zip(pos, exp):
                if p is not None:
                    key[p] = e
            new[tuple(key)] = c
        return LaurentPoly._raw(vs, new)

    def trimmed(self) -> "LaurentPoly":
        return self.with_variables(self.used_variables())

    def rename(self, mapping: Mapping[str, str]) -> "LaurentPoly":
        names = [mapping.get(v, v) for v in self._vars]
        if len(set(names)) != len(names):
            raise ValidationError("renaming would merge variables")
        return LaurentPoly(names, self._terms)

    def _align(self, other: "LaurentPoly", auto_merge: bool = True):
        if self._vars == other._vars:
            return self, other
        if not auto_merge:
            raise VariableMismatch(f"{self._vars} vs {other._vars}")
        vs = sort_variables(self._vars + other._vars)
        return self.with_variables(vs), other.with_variables(vs)

    @staticmethod
    def _coerce(x) -> "LaurentPoly":
        if isinstance(x, LaurentPoly):
            return x
        if isinstance(x, (int, Fraction)) and not isinstance(x, bool):
            return LaurentPoly.constant(x)
        return NotImplemented

    # -- ring operations ---------------------------------------------------
    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        a, b = self._align(other)
        out = dict(a._terms)
        for exp, c in b._terms.items():
            s = out.get(exp, 0) + c
            if s:
                out[exp] = s
            else:
                out.pop(exp, None)
        return LaurentPoly._raw(a._vars, out)

    __radd__ = __add__

    def __neg__(self):
        return LaurentPoly._raw(self._vars, {e: -c for e, c in self._terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other + (-self)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            c = Fraction(other)
            if not c:
                return LaurentPoly.zero(self._vars)
            return LaurentPoly._raw(self._vars, {e: v * c for e, v in self._terms.items()})
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        a, b = self._align(other)
        out: Dict[Exponent, Fraction] = {}
        for e1, c1 in a._terms.items():
            for e2, c2 in b._terms.items():
                key = tuple(_check_exp(x + y) for x, y in zip(e1, e2))
                s = out.get(key, 0) + c1 * c2
                if s:
                    out[key] = s
                else:
                    out.pop(key, None)
        return LaurentPoly._raw(a._vars, out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            if not self.is_monomial():
                raise DivisionNotExact("negative power of a non-monomial")
            (exp, c), = self._terms.items()
            return LaurentPoly._raw(
                self._vars, {tuple(_check_exp(e * k) for e in exp): Fraction(1) / c**-k}
            )
        result = LaurentPoly.constant(1, self._vars)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            if not other:
                raise ZeroDivisionError("division of a Laurent polynomial by zero")
            return self * (Fraction(1) / Fraction(other))
        if isinstance(other, LaurentPoly):
            return exact_div(self, other)
        return NotImplemented

    # -- comparison --------------------------------------------------------
    def _canonical(self):
        return frozenset(
            (tuple((v, e) for v, e in zip(self._vars, exp) if e), c)
            for exp, c in self._terms.items()
        )

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            other = LaurentPoly.constant(other)
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return self._canonical() == other._canonical()

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(self._canonical())
        return self._hash

    # -- calculus and evaluation --------------------------------------------
    def partial_derivative(self, var: str) -> "LaurentPoly":
        if var not in self._vars:
            raise UnknownVariable(f"{var} is not a variable of this polynomial")
        i = self._vars.index(var)
        out: Dict[Exponent, Fraction] = {}
        for exp, c in self._terms.items():
            e = exp[i]
            if e:
                key = exp[:i] + (e - 1,) + exp[i + 1:]
                out[key] = c * e
        return LaurentPoly._raw(self._vars, out)

    def log_derivative(self, var: str) -> "LaurentPoly":
        """``var * d/dvar`` applied term by term (keeps exponents)."""
        if var not in self._vars:
            raise UnknownVariable(f"{var} is not a variable of this polynomial")
        i = self._vars.index(var)
        return LaurentPoly._raw(
            self._vars, {exp: c * exp[i] for exp, c in self._terms.items() if exp[i]}
        )

    def evaluate(self, point) -> complex:
        return evaluate_complex(self, point)

    def evaluate_exact(self, point: Mapping[str, Scalar]) -> Fraction:
        vals = [as_fraction(point[v]) for v in self._vars]
        total = Fraction(0)
        for exp, c in self._terms.items():
            term = c
            for x, e in zip(vals, exp):
                if e:
                    if x == 0 and e < 0:
                        raise PoleAtZero("negative power of zero")
                    term *= x**e
            total += term
        return total

    def monomial_transform(self, matrix: Sequence[Sequence[int]],
                           new_variables: Sequence[str]) -> "LaurentPoly":
        """Send each exponent vector ``e`` to ``matrix @ e`` in new variables."""
        rows = [list(map(int, r)) for r in matrix]
        if any(len(r) != len(self._vars) for r in rows) or len(rows) != len(new_variables):
            raise ValidationError("matrix shape does not match the variable counts")
        out: Dict[Exponent, Fraction] = {}
        for exp, c in self._terms.items():
            key = tuple(sum(a * e for a, e in zip(r, exp)) for r in rows)
            s = out.get(key, 0) + c
            if s:
                out[key] = s
            else:
                out.pop(key, None)
        return LaurentPoly(list(new_variables), out)

    # -- output ------------------------------------------------------------
    def to_json(self) -> dict:
        return {
            "vars": list(self._vars),
            "terms": [{"exp": list(e), "coeff": fraction_str(c)} for e, c in self.items()],
        }

    @classmethod
    def from_json(cls, data: Mapping) -> "LaurentPoly":
        return cls(data["vars"], {tuple(t["exp"]): as_fraction(t["coeff"]) for t in data["terms"]})

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        pieces = []
        for exp, c in sorted(self._terms.items(), reverse=True):
            mono = "*".join(
                v if e == 1 else f"{v}^{e}" for v, e in zip(self._vars, exp) if e
            )
            if not mono:
                pieces.append(str(c))
            elif c == 1:
                pieces.append(mono)
            elif c == -1:
                pieces.append("-" + mono)
            else:
                pieces.append(f"{c}*{mono}")
        return " + ".join(pieces).replace("+ -", "- ")

    def __repr__(self) -> str:
        return f"LaurentPoly({self})"


def variables(*names: str):
    """Convenience: ``z1, z2 = variables("z1", "z2")``."""
    return tuple(LaurentPoly.var(n) for n in names)


_TOKEN = re.compile(r"\s*(?:(\d+(?:/\d+)?)|([A-Za-z_][A-Za-z_0-9]*)|(\^-?\d+)|(.))")


def parse_laurent(text: str) -> LaurentPoly:
    """Parse a sum of monomial terms such as ``"z1 + 2/z1 - z1*z2^-1 + 1/(z1*z2)"``.

    Each term is a product and quotient of rational numbers, variables with
    optional integer powers, and parenthesised products.  General rational
    expressions are not accepted.
    """
    tokens = []
    for num, name, power, other in _TOKEN.findall(text):
        if num:
            tokens.append(("num", Fraction(num)))
        elif name:
            tokens.append(("var", name))
        elif power:
            tokens.append(("pow", int(power[1:])))
        elif other.strip():
            tokens.append(("op", other))
    pos = 0

    def peek(kind=None, value=None):
        if pos >= len(tokens):
            return None
        tok = tokens[pos]
        if (kind and tok[0] != kind) or (value and tok[1] != value):
            return None
        return tok

    def take():
        nonlocal pos
        pos += 1
        return tokens[pos - 1]

    def factor():
        # returns (coefficient, exponent dict)
        tok = peek()
        if tok is None:
            raise ValidationError(f"unexpected end of expression in {text!r}")
        if tok[0] == "num":
            take()
            coeff, exps = tok[1], {}
        elif tok[0] == "var":
            take()
            coeff, exps = Fraction(1), {tok[1]: 1}
        elif tok == ("op", "("):
            take()
            coeff, exps = product()
            if not peek("op", ")"):
                raise ValidationError(f"missing ')' in {text!r}")
            take()
        else:
            raise ValidationError(f"unexpected {tok[1]!r} in {text!r}")
        if peek("pow"):
            k = take()[1]
            if k < 0 and coeff != 1 and exps:
                raise ValidationError(f"negative power of a scaled monomial in {text!r}")
            coeff = coeff**k
            exps = {v: e * k for v, e in exps.items()}
        return coeff, exps

    def product():
        coeff, exps = factor()
        while peek("op", "*") or peek("op", "/"):
            op = take()[1]
            c2, e2 = factor()
            sign = 1 if op == "*" else -1
            if op == "/" and c2 == 0:
                raise ValidationError(f"division by zero in {text!r}")
            coeff = coeff * c2 if op == "*" else coeff / c2
            for v, e in e2.items():
                exps[v] = exps.get(v, 0) + sign * e
        return coeff, exps

    total = LaurentPoly.zero()
    sign = 1
    if peek("op", "-"):
        take()
        sign = -1
    elif peek("op", "+"):
        take()
    while True:
        coeff, exps = product()
        total = total + LaurentPoly.monomial(exps, sign * coeff)
        if pos >= len(tokens):
            break
        tok = take()
        if tok == ("op", "+"):
            sign = 1
        elif tok == ("op", "-"):
            sign = -1
        else:
            raise ValidationError(f"unexpected {tok[1]!r} in {text!r}")
    return total


# ---------------------------------------------------------------------------
# division
# ---------------------------------------------------------------------------

def _content_split(p: LaurentPoly) -> Tuple[Exponent, Dict[Exponent, Fraction]]:
    """Return (gcd monomial exponent, polynomial part without monomial content)."""
    n = len(p._vars)
    mins = [min(exp[i] for exp in p._terms) for i in range(n)]
    shifted = {tuple(e - m for e, m in zip(exp, mins)): c for exp, c in p._terms.items()}
    return tuple(mins), shifted


def _poly_divide(a: Dict[Exponent, Fraction], b: Dict[Exponent, Fraction]):
    """Exact division of polynomials (nonnegative exponents), lex order.

    Returns the quotient or ``None`` when ``b`` does not divide ``a``.
    """
    rem = dict(a)
    lead_b = max(b)
    lc_b = b[lead_b]
    quot: Dict[Exponent, Fraction] = {}
    while rem:
        lead = max(rem)
        if any(x < y for x, y in zip(lead, lead_b)):
            return None
        c = rem[lead] / lc_b
        shift = tuple(x - y for x, y in zip(lead, lead_b))
        quot[shift] = quot.get(shift, 0) + c
        for eb, cb in b.items():
            key = tuple(x + y for x, y in zip(eb, shift))
            s = rem.get(key, 0) - c * cb
            if s:
                rem[key] = s
            else:
                rem.pop(key, None)
    return {e: c for e, c in quot.items() if c}


def exact_div(a: LaurentPoly, b: LaurentPoly, auto_merge: bool = True) -> LaurentPoly:
    """Return ``q`` with ``q * b == a`` or raise :class:`DivisionNotExact`."""
    a, b = a._align(b, auto_merge)
    if b.is_zero():
        raise DivisionNotExact("division by the zero polynomial")
    if a.is_zero():
        return a
    if b.is_monomial():
        (eb, cb), = b._terms.items()
        return LaurentPoly._raw(
            a._vars,
            {tuple(_check_exp(x - y) for x, y in zip(e, eb)): c / cb for e, c in a._terms.items()},
        )
    ma, pa = _content_split(a)
    mb, pb = _content_split(b)
    q = _poly_divide(pa, pb)
    if q is None:
        raise DivisionNotExact(f"({b}) does not divide ({a}) in the Laurent ring")
    shift = tuple(x - y for x, y in zip(ma, mb))
    return LaurentPoly._raw(
        a._vars, {tuple(_check_exp(x + s) for x, s in zip(e, shift)): c for e, c in q.items()}
    )


def divides(b: LaurentPoly, a: LaurentPoly) -> Optional[LaurentPoly]:
    try:
        return exact_div(a, b)
    except DivisionNotExact:
        return None


_OPS: Dict[str, Callable] = {
    "add": lambda a, b: a + b,
    "sub": lambda a, b: a - b,
    "mul": lambda a, b: a * b,
}


def laurent_arith(a: LaurentPoly, b: LaurentPoly, op: str, auto_merge: bool = True) -> LaurentPoly:
    """Dispatch ``add``, ``sub``, ``mul`` or ``exact_div`` on two polynomials."""
    if op == "exact_div":
        return exact_div(a, b, auto_merge=auto_merge)
    if op not in _OPS:
        raise ValidationError(f"unknown operation {op!r}")
    a, b = a._align(b, auto_merge)
    return _OPS[op](a, b)


# ---------------------------------------------------------------------------
# rational functions with polynomial denominators
# ---------------------------------------------------------------------------

class LaurentFraction:
    """Quotient of two Laurent polynomials, kept in a light normal form.

    The monomial content of the denominator is moved into the numerator and
    the denominator's leading coefficient is scaled to one, so denominators
    that agree up to a unit compare equal.
    """

    __slots__ = ("numer", "denom")

    def __init__(self, numer, denom=None):
        numer = LaurentPoly._coerce(numer)
        denom = LaurentPoly.constant(1) if denom is None else LaurentPoly._coerce(denom)
        if numer is NotImplemented or denom is NotImplemented:
            raise ValidationError("LaurentFraction needs Laurent polynomial parts")
        if denom.is_zero():
            raise ZeroDivisionError("LaurentFraction with zero denominator")
        numer, denom = numer._align(denom)
        m, dpoly = _content_split(denom)
        lead = max(dpoly)
        lc = dpoly[lead]
        d = LaurentPoly._raw(denom._vars, {e: c / lc for e, c in dpoly.items()})
        mono = LaurentPoly._raw(denom._vars, {tuple(-x for x in m): Fraction(1) / lc})
        self.numer = numer * mono
        self.denom = d

    @classmethod
    def of(cls, x) -> "LaurentFraction":
        return x if isinstance(x, LaurentFraction) else cls(x)

    def is_laurent(self) -> bool:
        return self.denom.is_constant()

    def __add__(self, other):
        other = LaurentFraction.of(other)
        if self.numer.is_zero():
            return other
        if other.numer.is_zero():
            return self
        if self.denom == other.denom:
            return LaurentFraction(self.numer + other.numer, self.denom)
        k = divides(self.denom, other.denom)
        if k is not None:
            return LaurentFraction(self.numer * k + other.numer, other.denom)
        k = divides(other.denom, self.denom)
        if k is not None:
            return LaurentFraction(self.numer + other.numer * k, self.denom)
        return LaurentFraction(
            self.numer * other.denom + other.numer * self.denom, self.denom * other.denom
        )

    __radd__ = __add__

    def __neg__(self):
        return LaurentFraction(-self.numer, self.denom)

    def __sub__(self, other):
        return self + (-LaurentFraction.of(other))

    def __mul__(self, other):
        other = LaurentFraction.of(other)
        return LaurentFraction(self.numer * other.numer, self.denom * other.denom)

    __rmul__ = __mul__

    def inverse(self) -> "LaurentFraction":
        if self.numer.is_zero():
            raise ZeroDivisionError("inverse of zero")
        return LaurentFraction(self.denom, self.numer)

    def __truediv__(self, other):
        return self * LaurentFraction.of(other).inverse()

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        return LaurentFraction(self.numer**k, self.denom**k)

    def to_laurent(self) -> LaurentPoly:
        """Cancel the denominator or raise :class:`NotLaurent`."""
        try:
            return exact_div(self.numer, self.denom)
        except DivisionNotExact as exc:
            raise NotLaurent(
                f"({self.numer}) / ({self.denom}) is not a Laurent polynomial"
            ) from exc

    def evaluate(self, point: Mapping[str, complex]) -> complex:
        return evaluate_complex(self.numer, point) / evaluate_complex(self.denom, point)

    def __repr__(self):
        return f"LaurentFraction(({self.numer}) / ({self.denom}))"


Binding = Union[LaurentPoly, LaurentFraction, int, Fraction]


def substitute(w: LaurentPoly, bindings: Mapping[str, Binding]) -> LaurentPoly:
    """Substitute variables by Laurent polynomials or fractions and expand.

    Unbound variables stay.  The expanded result must be a genuine Laurent
    polynomial; otherwise :class:`NotLaurent` is raised.
    """
    fracs = {v: LaurentFraction.of(b) for v, b in bindings.items() if v in w._vars}
    if not fracs:
        return w
    keep = tuple(v for v in w._vars if v not in fracs)
    target_vars = sort_variables(
        keep + tuple(x for f in fracs.values() for x in f.numer._vars + f.denom._vars)
    )
    keep_pos = [w._vars.index(v) for v in keep]
    bound_pos = [(w._vars.index(v), fracs[v]) for v in fracs]
    keep_index = [target_vars.index(v) for v in keep]

    power_cache: Dict[Tuple[int, int], LaurentFraction] = {}

    def power(pos: int, f: LaurentFraction, e: int) -> LaurentFraction:
        key = (pos, e)
        if key not in power_cache:
            power_cache[key] = f**e
        return power_cache[key]

    groups: Dict[LaurentPoly, LaurentPoly] = {}
    for exp, c in w._terms.items():
        mono_exp = [0] * len(target_vars)
        for p, idx in zip(keep_pos, keep_index):
            mono_exp[idx] = exp[p]
        term = LaurentFraction(LaurentPoly._raw(target_vars, {tuple(mono_exp): c}))
        for p, f in bound_pos:
            if exp[p]:
                term = term * power(p, f, exp[p])
        d = term.denom.with_variables(target_vars)
        groups[d] = groups.get(d, LaurentPoly.zero(target_vars)) + term.numer
    total = LaurentFraction(LaurentPoly.zero(target_vars))
    for d in sorted(groups, key=len):
        total = total + LaurentFraction(groups[d], d)
    return total.to_laurent().with_variables(target_vars)


def partial_derivative(w: LaurentPoly, var: str) -> LaurentPoly:
    return w.partial_derivative(var)


def evaluate_complex(w: LaurentPoly, point) -> complex:
    """Evaluate in double precision.

    ``point`` is either a sequence aligned with ``w.variables`` or a mapping
    from variable names to values.
    """
    if isinstance(point, Mapping):
        try:
            vals = [complex(point[v]) for v in w.variables]
        except KeyError as exc:
            raise UnknownVariable(f"no value supplied for {exc.args[0]}") from exc
    else:
        vals = [complex(x) for x in point]
        if len(vals) != len(w.variables):
            raise ValidationError(
                f"expected {len(w.variables)} coordinates, got {len(vals)}"
            )
    total = 0j
    for exp, c in w._terms.items():
        term = complex(float(c))
        for x, e in zip(vals, exp):
            if e:
                if x == 0:
                    if e < 0:
                        raise PoleAtZero("evaluation at a pole of the Laurent polynomial")
                    term = 0j
                    break
                term *= x**e
        total += term
    return total


# ---------------------------------------------------------------------------
# exact linear algebra over Q
# ---------------------------------------------------------------------------

def row_reduce(rows: Sequence[Sequence[Scalar]]):
    """Reduced row echelon form; returns (matrix, pivot columns)."""
    m = [[Fraction(x) for x in r] for r in rows]
    pivots = []
    r = 0
    ncols = len(m[0]) if m else 0
    for col in range(ncols):
        piv = next((i for i in range(r, len(m)) if m[i][col] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = 1 / m[r][col]
        m[r] = [x * inv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][col] != 0:
                f = m[i][col]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        pivots.append(col)
        r += 1
        if r == len(m):
            break
    return m, pivots


def rank(rows: Sequence[Sequence[Scalar]]) -> int:
    if not rows:
        return 0
    return len(row_reduce(rows)[1])


def solve_linear(a: Sequence[Sequence[Scalar]], b: Sequence[Scalar]):
    """Solve ``a x = b`` exactly.

    Returns the unique solution, or ``None`` if the system is inconsistent
    or underdetermined.
    """
    n = len(a[0]) if a else 0
    aug = [list(r) + [bb] for r, bb in zip(a, b)]
    m, piv = row_reduce(aug)
    if n in piv or len(piv) < n:
        return None
    x = [Fraction(0)] * n
    for i, col in enumerate(piv):
        x[col] = m[i][n]
    return x


def is_number(x) -> bool:
    return isinstance(x, Number) and not isinstance(x, bool)


__all__ = [
    "Rational",
    "parse_laurent",
    "LaurentPoly",
    "LaurentFraction",
    "as_fraction",
    "fraction_str",
    "natural_key",
    "sort_variables",
    "variables",
    "exact_div",
    "divides",
    "laurent_arith",
    "substitute",
    "partial_derivative",
    "evaluate_complex",
    "row_reduce",
    "rank",
    "solve_linear",
]
