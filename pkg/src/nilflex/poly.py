"""Sparse multivariate polynomials with rational coefficients.

A :class:`MultiPoly` stores a tuple of variable names and a mapping from
exponent vectors to :class:`~fractions.Fraction` coefficients.  Zero
coefficients are never stored.  Terms are ordered graded-lexicographically
with the variables in the order given (``A > B > C ...``).
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Iterable, Mapping, Union

Scalar = Union[int, Fraction]


class PolyError(ValueError):
    pass


def _as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    raise TypeError(f"not an exact scalar: {x!r}")


def _merge_vars(a: tuple[str, ...], b: tuple[str, ...]) -> tuple[str, ...]:
    if a == b:
        return a
    out = list(a)
    out.extend(v for v in b if v not in a)
    return tuple(out)


class MultiPoly:
    __slots__ = ("variables", "terms", "_hash")

    def __init__(self, variables: Iterable[str], terms: Mapping[tuple, Scalar] | None = None):
        self.variables = tuple(variables)
        n = len(self.variables)
        clean: dict[tuple, Fraction] = {}
        for exp, c in (terms or {}).items():
            if len(exp) != n:
                raise PolyError(f"exponent {exp} does not match variables {self.variables}")
            c = _as_fraction(c)
            if c:
                clean[tuple(exp)] = clean.get(tuple(exp), Fraction(0)) + c
                if not clean[tuple(exp)]:
                    del clean[tuple(exp)]
        self.terms = clean
        self._hash = None

    # -- constructors -------------------------------------------------
    @classmethod
    def constant(cls, variables: Iterable[str], c: Scalar) -> "MultiPoly":
        variables = tuple(variables)
        return cls(variables, {(0,) * len(variables): c})

    @classmethod
    def var(cls, variables: Iterable[str], name: str) -> "MultiPoly":
        variables = tuple(variables)
        exp = tuple(1 if v == name else 0 for v in variables)
        if sum(exp) != 1:
            raise PolyError(f"unknown variable {name!r}")
        return cls(variables, {exp: 1})

    @classmethod
    def gens(cls, variables: Iterable[str]) -> list["MultiPoly"]:
        variables = tuple(variables)
        return [cls.var(variables, v) for v in variables]

    @classmethod
    def parse(cls, text: str, variables: Iterable[str] | None = None) -> "MultiPoly":
        """Parse expressions such as ``"A*C*D - B*(C^2+D^2)"`` or ``"ACD-BC^2"``.

        Single capital letters are variables; juxtaposition means product.
        """
        return _Parser(text, variables).parse()

    # -- basic queries ------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def degree(self) -> int:
        return max((sum(e) for e in self.terms), default=-1)

    def is_homogeneous(self) -> bool:
        return len({sum(e) for e in self.terms}) <= 1

    def is_constant(self) -> bool:
        return all(not any(e) for e in self.terms)

    def constant_value(self) -> Fraction:
        if not self.is_constant():
            raise PolyError("polynomial is not constant")
        return self.terms.get((0,) * len(self.variables), Fraction(0))

    def used_variables(self) -> tuple[str, ...]:
        used = set()
        for e in self.terms:
            used.update(v for v, k in zip(self.variables, e) if k)
        return tuple(v for v in self.variables if v in used)

    def sorted_terms(self) -> list[tuple[tuple, Fraction]]:
        # grlex: higher total degree first, then lexicographic on exponents
        return sorted(self.terms.items(), key=lambda t: (-sum(t[0]), tuple(-k for k in t[0])))

    def leading(self) -> tuple[tuple, Fraction]:
        if not self.terms:
            raise PolyError("zero polynomial has no leading term")
        return self.sorted_terms()[0]

    # -- ring structure -----------------------------------------------
    def extend(self, variables: Iterable[str]) -> "MultiPoly":
        variables = tuple(variables)
        if variables == self.variables:
            return self
        pos = [variables.index(v) for v in self.variables]
        n = len(variables)
        terms = {}
        for e, c in self.terms.items():
            new = [0] * n
            for i, k in zip(pos, e):
                new[i] = k
            terms[tuple(new)] = c
        return MultiPoly(variables, terms)

    def restrict(self, variables: Iterable[str]) -> "MultiPoly":
        """Re-express over ``variables``, which must contain every used variable."""
        variables = tuple(variables)
        missing = [v for v in self.used_variables() if v not in variables]
        if missing:
            raise PolyError(f"variables {missing} not available")
        pos = {v: i for i, v in enumerate(variables)}
        terms = {}
        for e, c in self.terms.items():
            new = [0] * len(variables)
            for v, k in zip(self.variables, e):
                if k:
                    new[pos[v]] = k
            terms[tuple(new)] = c
        return MultiPoly(variables, terms)

    def _coerce(self, other) -> tuple["MultiPoly", "MultiPoly"]:
        if isinstance(other, MultiPoly):
            vs = _merge_vars(self.variables, other.variables)
            return self.extend(vs), other.extend(vs)
        return self, MultiPoly.constant(self.variables, _as_fraction(other))

    def __add__(self, other):
        try:
            a, b = self._coerce(other)
        except TypeError:
            return NotImplemented
        terms = dict(a.terms)
        for e, c in b.terms.items():
            s = terms.get(e, 0) + c
            if s:
                terms[e] = s
            else:
                terms.pop(e, None)
        return MultiPoly(a.variables, terms)

    __radd__ = __add__

    def __neg__(self):
        return MultiPoly(self.variables, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            if not other:
                return MultiPoly(self.variables)
            return MultiPoly(self.variables, {e: c * other for e, c in self.terms.items()})
        if not isinstance(other, MultiPoly):
            return NotImplemented
        a, b = self._coerce(other)
        terms: dict[tuple, Fraction] = {}
        for e1, c1 in a.terms.items():
            for e2, c2 in b.terms.items():
                e = tuple(x + y for x, y in zip(e1, e2))
                terms[e] = terms.get(e, 0) + c1 * c2
        return MultiPoly(a.variables, terms)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            if not other:
                raise ZeroDivisionError("polynomial divided by zero")
            return self * (Fraction(1) / _as_fraction(other))
        return NotImplemented

    def __pow__(self, k: int):
        if k < 0:
            raise PolyError("negative power")
        out = MultiPoly.constant(self.variables, 1)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = MultiPoly.constant(self.variables, other)
        if not isinstance(other, MultiPoly):
            return NotImplemented
        a, b = self._coerce(other)
        return a.terms == b.terms

    def __hash__(self):
        if self._hash is None:
            used = self.used_variables()
            self._hash = hash(frozenset(
                (tuple(k for v, k in zip(self.variables, e) if v in used), c)
                for e, c in self.terms.items()
            ) | {used})
        return self._hash

    # -- evaluation / substitution --------------------------------------
    def __call__(self, point: Mapping[str, Scalar]) -> Fraction:
        return poly_eval(self, point)

    def scalar_multiple_of(self, other: "MultiPoly") -> Fraction | None:
        """Return ``c`` with ``self == c * other`` (``c != 0``), or ``None``."""
        a, b = self._coerce(other)
        if a.is_zero() or b.is_zero():
            return None
        e, c = b.leading()
        if e not in a.terms:
            return None
        ratio = a.terms[e] / c
        return ratio if a == b * ratio else None

    def __repr__(self):
        return f"MultiPoly({self})"

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for e, c in self.sorted_terms():
            mono = "*".join(
                v if k == 1 else f"{v}^{k}" for v, k in zip(self.variables, e) if k
            )
            mag = abs(c)
            if mono:
                body = mono if mag == 1 else f"{mag}*{mono}"
            else:
                body = str(mag)
            parts.append(("-" if c < 0 else "+", body))
        first_sign, first = parts[0]
        out = ("-" if first_sign == "-" else "") + first
        for sign, body in parts[1:]:
            out += f" {sign} {body}"
        return out


def poly_eval(p: MultiPoly, point: Mapping[str, Scalar]) -> Fraction:
    """Exact value of ``p`` at ``point``; every used variable must be assigned."""
    missing = [v for v in p.used_variables() if v not in point]
    if missing:
        raise PolyError(f"no value assigned to {', '.join(missing)}")
    vals = [_as_fraction(point[v]) if v in point else Fraction(0) for v in p.variables]
    total = Fraction(0)
    for e, c in p.terms.items():
        t = c
        for x, k in zip(vals, e):
            if k:
                t *= x**k
        total += t
    return total


def _is_identity_rule(name, expr) -> bool:
    return isinstance(expr, MultiPoly) and expr.used_variables() == (name,) \
        and expr == MultiPoly.var(expr.variables, name)


def _resolve(constraints: Mapping[str, MultiPoly | Scalar]) -> dict[str, MultiPoly | Fraction]:
    """Eliminate chains like ``{A: B+1, B: C}`` and reject cycles."""
    rules = {k: v for k, v in constraints.items() if not _is_identity_rule(k, v)}
    resolved: dict[str, MultiPoly | Fraction] = {}
    visiting: set[str] = set()

    def visit(name):
        if name in resolved:
            return resolved[name]
        if name in visiting:
            raise PolyError(f"circular substitution through {name!r}")
        visiting.add(name)
        expr = rules[name]
        if isinstance(expr, MultiPoly):
            inner = {v: visit(v) for v in expr.used_variables() if v in rules}
            if inner:
                expr = _substitute_once(expr, inner)
        else:
            expr = _as_fraction(expr)
        visiting.discard(name)
        resolved[name] = expr
        return expr

    for name in rules:
        visit(name)
    return resolved


def _substitute_once(p: MultiPoly, rules: Mapping[str, MultiPoly | Fraction]) -> MultiPoly:
    rules = {v: r for v, r in rules.items() if v in p.variables}
    keep = [v for v in p.variables if v not in rules]
    extra: list[str] = []
    for r in rules.values():
        if isinstance(r, MultiPoly):
            extra.extend(v for v in r.used_variables() if v not in keep and v not in extra)
    out_vars = tuple(keep + extra)
    images = []
    for v in p.variables:
        if v in rules:
            r = rules[v]
            images.append(r.restrict(out_vars) if isinstance(r, MultiPoly)
                          else MultiPoly.constant(out_vars, r))
        else:
            images.append(MultiPoly.var(out_vars, v))
    total = MultiPoly(out_vars)
    cache: dict[tuple[int, int], MultiPoly] = {}
    for e, c in p.terms.items():
        t = MultiPoly.constant(out_vars, c)
        for i, k in enumerate(e):
            if k:
                if (i, k) not in cache:
                    cache[i, k] = images[i] ** k
                t = t * cache[i, k]
        total = total + t
    return total


def substitute(obj, constraints: Mapping[str, MultiPoly | Scalar]):
    """Apply ``variable -> expression`` rules to a polynomial, a matrix or a form.

    Rules may refer to each other (they are resolved first); a cycle raises
    :class:`PolyError`.  Right-hand sides are polynomials, possibly in fresh
    variables, so curved strata can be handled by a polynomial parametrisation.
    """
    rules = _resolve(constraints)
    return _map_polys(obj, lambda p: _substitute_once(p, rules) if isinstance(p, MultiPoly) else p)


def _map_polys(obj, fn):
    if isinstance(obj, MultiPoly):
        return fn(obj)
    if hasattr(obj, "map_entries"):
        return obj.map_entries(fn)
    if isinstance(obj, (list, tuple)):
        return type(obj)(_map_polys(x, fn) for x in obj)
    return obj


def parse_constraints(text: str | Mapping, variables: Iterable[str] | None = None) -> dict[str, MultiPoly]:
    """``"C=D, A=-2*B"`` -> ``{"C": D, "A": -2B}``."""
    if isinstance(text, Mapping):
        return {k: (v if isinstance(v, MultiPoly) else MultiPoly.parse(str(v), variables))
                for k, v in text.items()}
    out = {}
    for chunk in filter(None, (c.strip() for c in text.split(","))):
        lhs, sep, rhs = chunk.partition("=")
        lhs = lhs.strip()
        if not sep or not re.fullmatch(r"[A-Z][A-Za-z0-9_]*", lhs):
            raise PolyError(f"bad constraint {chunk!r}; expected NAME=expression")
        out[lhs] = MultiPoly.parse(rhs, variables)
    return out


class _Parser:
    # expr := term (('+'|'-') term)* ; term := factor ('*'? factor)* ; factor := atom ('^' int)?
    _tok = re.compile(r"\s*(?:(\d+(?:/\d+)?)|([A-Z][a-z0-9_]*)|(.))")

    def __init__(self, text: str, variables):
        self.tokens = []
        for num, name, op in self._tok.findall(text):
            if num:
                self.tokens.append(("num", Fraction(num)))
            elif name:
                self.tokens.append(("var", name))
            elif op.strip():
                self.tokens.append(("op", op))
        names = [t[1] for t in self.tokens if t[0] == "var"]
        if variables is None:
            variables = sorted(set(names))
        else:
            variables = _merge_vars(tuple(variables), tuple(sorted(set(names))))
        self.vars = tuple(variables)
        self.i = 0

    def peek(self):
        return self.tokens[self.i] if self.i < len(self.tokens) else (None, None)

    def take(self):
        t = self.peek()
        self.i += 1
        return t

    def parse(self) -> MultiPoly:
        if not self.tokens:
            raise PolyError("empty expression")
        p = self.expr()
        if self.i != len(self.tokens):
            raise PolyError(f"unexpected token {self.peek()[1]!r}")
        return p

    def expr(self):
        sign = 1
        if self.peek() == ("op", "-"):
            self.take()
            sign = -1
        elif self.peek() == ("op", "+"):
            self.take()
        p = self.term() * sign
        while self.peek() in (("op", "+"), ("op", "-")):
            op = self.take()[1]
            t = self.term()
            p = p + t if op == "+" else p - t
        return p

    def term(self):
        p = self.factor()
        while True:
            kind, val = self.peek()
            if kind == "op" and val == "*":
                self.take()
                p = p * self.factor()
            elif kind in ("num", "var") or (kind == "op" and val == "("):
                p = p * self.factor()
            else:
                return p

    def factor(self):
        kind, val = self.take()
        if kind == "num":
            base = MultiPoly.constant(self.vars, val)
        elif kind == "var":
            base = MultiPoly.var(self.vars, val)
        elif (kind, val) == ("op", "("):
            base = self.expr()
            if self.take() != ("op", ")"):
                raise PolyError("missing ')'")
        else:
            raise PolyError(f"unexpected token {val!r}")
        if self.peek() == ("op", "^"):
            self.take()
            k, e = self.take()
            if k != "num" or e.denominator != 1:
                raise PolyError("exponent must be a natural number")
            base = base ** int(e)
        return base
