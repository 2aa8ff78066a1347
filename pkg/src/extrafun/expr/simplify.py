"""Canonicalising simplifier.

Every expression is brought to a sum of terms ``c * prod(base_j ^ exp_j)`` with
an exact rational coefficient ``c``.  Like terms are collected, powers of the
same base merge, and positive constant bases sharing a symbolic exponent are
multiplied together (``(1/2)^n * 2^n -> 1``).  Products of sums are never
expanded.  The output is rebuilt deterministically, so simplification is
idempotent.

Rewrites only ever preserve the value at points where the input evaluates;
a power of a power is flattened only for integer-valued outer exponents
(``(x^2)^(1/2)`` is left alone).
"""
from fractions import Fraction

from .nodes import (Abs, Add, Bernstein, Const, Cos, Div, Exp, Expr, Func, Log,
                    Mul, Neg, Pow, Sin, Sub, VarN)
from .printer import to_source

ZERO = Const(0)
ONE = Const(1)


def simplify(e: Expr) -> Expr:
    coeff, factors = _term(e)
    return _build_term(coeff, factors) if not isinstance(factors, _SumMarker) else factors.expr


# A term is (coefficient, tuple of (base, exponent)).  Sums that cannot be a
# single term are wrapped in _SumMarker while they travel through _term.

class _SumMarker:
    __slots__ = ("expr",)

    def __init__(self, expr):
        self.expr = expr


def _numeric(e):
    return isinstance(e, Const) and e.name is None


def _is_int_const(e):
    return _numeric(e) and e.value.denominator == 1


def integer_valued(e) -> bool:
    """True if ``e`` takes integer values for every natural n (syntactic test)."""
    if _is_int_const(e) or isinstance(e, VarN):
        return True
    if isinstance(e, Neg):
        return integer_valued(e.arg)
    if isinstance(e, (Add, Sub, Mul)):
        return integer_valued(e.left) and integer_valued(e.right)
    if isinstance(e, Pow):
        return integer_valued(e.left) and _is_int_const(e.right) and e.right.value >= 0
    return False


def _term(e):
    """Simplify ``e`` and return it as (coeff, factors), or (1, _SumMarker)."""
    if _numeric(e):
        return e.value, ()
    if isinstance(e, (Add, Sub)) or (isinstance(e, Neg) and isinstance(e.arg, (Add, Sub))):
        terms = _collect_sum(e)
        if len(terms) == 0:
            return Fraction(0), ()
        if len(terms) == 1:
            (factors, coeff), = terms.items()
            return coeff, factors
        return Fraction(1), _SumMarker(_build_sum(terms))
    if isinstance(e, Neg):
        c, f = _term(e.arg)
        if isinstance(f, _SumMarker):
            return Fraction(1), _SumMarker(_build_sum(_negate(_collect_sum(f.expr))))
        return -c, f
    if isinstance(e, Mul):
        return _product([_term(e.left), _term(e.right)])
    if isinstance(e, Div):
        den = _power(_term(e.right), Const(-1))
        return _product([_term(e.left), den])
    if isinstance(e, Pow):
        exponent = simplify(e.right)
        return _power(_term(e.left), exponent)
    if isinstance(e, Func):
        return _function(e)
    return Fraction(1), ((e, ONE),)


def _negate(terms):
    return {k: -v for k, v in terms.items()}


def _collect_sum(e):
    """Flatten a sum into {factors: coeff}, combining like terms."""
    out = {}

    def walk(node, sign):
        if isinstance(node, Add):
            walk(node.left, sign)
            walk(node.right, sign)
        elif isinstance(node, Sub):
            walk(node.left, sign)
            walk(node.right, -sign)
        elif isinstance(node, Neg) and isinstance(node.arg, (Add, Sub, Neg)):
            walk(node.arg, -sign)
        else:
            c, f = _term(node)
            if isinstance(f, _SumMarker):
                walk(f.expr, sign * c)
                return
            if len(f) == 1 and f[0][1] == ONE and isinstance(f[0][0], (Add, Sub)):
                # c * (a + b) inside a sum: distribute so sums stay flat
                walk(f[0][0], sign * c)
                return
            if c == 0:
                return
            out[f] = out.get(f, Fraction(0)) + sign * c

    walk(e, Fraction(1))
    return {k: v for k, v in out.items() if v != 0}


def _product(parts):
    coeff = Fraction(1)
    factors = []
    for c, f in parts:
        if c == 0:
            return Fraction(0), ()
        coeff *= c
        if isinstance(f, _SumMarker):
            factors.append((f.expr, ONE))
        else:
            factors.extend(f)
    extra, merged = _merge(factors)
    coeff *= extra
    if len(merged) == 1 and merged[0][1] == ONE and isinstance(merged[0][0], (Add, Sub)):
        # c * (a + b) is itself a sum; distribute so sums stay flat
        terms = {k: coeff * v for k, v in _collect_sum(merged[0][0]).items()}
        if len(terms) == 0:
            return Fraction(0), ()
        if len(terms) == 1:
            (f, c), = terms.items()
            return c, f
        return Fraction(1), _SumMarker(_build_sum(terms))
    return coeff, merged


def _power(term, exponent):
    if _numeric(exponent) and exponent.value == 0:
        return Fraction(1), ()
    if _numeric(exponent) and exponent.value == 1:
        return term
    coeff, factors = term
    if isinstance(factors, _SumMarker):
        factors = ((factors.expr, ONE),)
    if not factors:
        return _const_power(coeff, exponent)
    if integer_valued(exponent):
        parts = [_const_power(coeff, exponent)]
        parts.extend((Fraction(1), ((b, simplify(Mul(p, exponent))),)) for b, p in factors)
        return _product(parts)
    # non-integer exponent: keep the base whole
    return _merge([(_build_term(coeff, factors), exponent)])


def _const_power(c, exponent):
    """c ** exponent for rational c, folding when exact."""
    if c == 1:
        return Fraction(1), ()
    if _is_int_const(exponent):
        k = exponent.value.numerator
        if c == 0 and k < 0:
            # keep the offending power so evaluation still reports the domain error
            return Fraction(1), ((Const(c), exponent),)
        return c ** k, ()
    return Fraction(1), ((Const(c), exponent),)


def _merge(factors):
    """Combine equal bases and positive constant bases with equal exponents."""
    by_base = {}
    for b, p in factors:
        by_base.setdefault(b, []).append(p)
    coeff = Fraction(1)
    merged = []
    for b, ps in by_base.items():
        p = ps[0] if len(ps) == 1 else simplify(_sum_exprs(ps))
        if _numeric(p) and p.value == 0:
            continue
        if _numeric(b):
            c, f = _const_power(b.value, p)
            coeff *= c
            merged.extend(f)
            continue
        merged.append((b, p))

    # positive constant bases sharing one exponent: a^p * b^p = (ab)^p
    const_groups = {}
    rest = []
    for b, p in merged:
        if _numeric(b) and b.value > 0:
            const_groups.setdefault(p, []).append(b.value)
        else:
            rest.append((b, p))
    for p, bases in const_groups.items():
        prod = Fraction(1)
        for v in bases:
            prod *= v
        if prod != 1:
            rest.append((Const(prod), p))
    return coeff, tuple(sorted(rest, key=_factor_key))


def _sum_exprs(exprs):
    out = exprs[0]
    for e in exprs[1:]:
        out = Add(out, e)
    return out


def _factor_key(item):
    b, p = item
    rank = 0 if _numeric(b) else 1
    tie = b._hash if isinstance(b, Bernstein) else 0
    return (rank, to_source(b), to_source(p), tie)


def _function(e):
    arg = simplify(e.arg)
    if _numeric(arg):
        v = arg.value
        if v == 0 and isinstance(e, (Sin,)):
            return Fraction(0), ()
        if v == 0 and isinstance(e, (Cos, Exp)):
            return Fraction(1), ()
        if v == 1 and isinstance(e, Log):
            return Fraction(0), ()
        if isinstance(e, Abs):
            return abs(v), ()
    if isinstance(e, Abs) and isinstance(arg, Abs):
        return Fraction(1), ((arg, ONE),)
    return Fraction(1), ((type(e)(arg), ONE),)


# ------------------------------------------------------------------ rebuild

def _build_power(b, p):
    if _numeric(p) and p.value == 1:
        return b
    return Pow(b, p)


def _build_term(coeff, factors):
    if isinstance(factors, _SumMarker):
        if coeff == 1:
            return factors.expr
        return _build_term(coeff, ((factors.expr, ONE),))
    if coeff == 0:
        return ZERO
    num, den = [], []
    for b, p in factors:
        if _numeric(p) and p.value < 0 and not (_numeric(b) and b.value == 0):
            den.append(_build_power(b, Const(-p.value)))
        else:
            num.append(_build_power(b, p))
    if not num and not den:
        return Const(coeff)
    has_sum = any(isinstance(b, (Add, Sub)) for b, p in factors if not (_numeric(p) and p.value < 0))
    if has_sum and coeff != 1 and (len(num) > 1 or den):
        # keep c * (a + b) from appearing as a subterm: it would distribute
        body = _left_product(num)
        if den:
            body = Div(body, _left_product(den))
        return Neg(body) if coeff == -1 else Mul(Const(coeff), body)
    if num:
        if coeff == 1 or coeff == -1:
            expr, rest = num[0], num[1:]
        else:
            expr, rest = Const(coeff), num
        for f in rest:
            expr = Mul(expr, f)
        if coeff == -1:
            expr = Neg(expr)
    else:
        expr = Const(coeff)
    if den:
        expr = Div(expr, _left_product(den))
    return expr


def _left_product(parts):
    expr = parts[0]
    for f in parts[1:]:
        expr = Mul(expr, f)
    return expr


def _build_sum(terms):
    items = sorted(terms.items(), key=lambda kv: _sum_key(kv[0]))
    expr = None
    for factors, coeff in items:
        if expr is None:
            expr = _build_term(coeff, factors)
        elif coeff < 0:
            expr = Sub(expr, _build_term(-coeff, factors))
        else:
            expr = Add(expr, _build_term(coeff, factors))
    return expr if expr is not None else ZERO


def _sum_key(factors):
    if not factors:
        return (1, "")
    return (0, "*".join(to_source(b) + "^" + to_source(p) for b, p in factors))

