"""Render expressions back to parseable source.

The grammar binds unary minus tighter than ``^`` (``-x^2`` is ``(-x)^2``), so
negations and negative constants are parenthesised whenever they sit under a
power or inside a product.
"""
from fractions import Fraction

from .nodes import (Add, Bernstein, Const, Div, Func, Mul, Neg, Pow, Sub,
                    VarN, VarX)

# binding strength of the printed form
_SUM, _PRODUCT, _UNARY, _POWER, _ATOM = 1, 2, 3, 4, 5


def _const_text(value: Fraction) -> str:
    if value.denominator == 1:
        return str(value.numerator)
    text = f"{value.numerator}/{value.denominator}"
    if len(text) > 24:
        # long binary fractions come from float scalars; print the shortest
        # decimal that reads back to the same double
        return repr(float(value))
    return text


def _prec(e) -> int:
    if isinstance(e, Const):
        if e.name:
            return _ATOM
        if e.value < 0:
            return _UNARY
        return _ATOM if e.value.denominator == 1 and "e" not in _const_text(e.value) else _PRODUCT
    if isinstance(e, (VarX, VarN, Func, Bernstein)):
        return _ATOM
    if isinstance(e, Neg):
        return _UNARY
    if isinstance(e, Pow):
        return _POWER
    if isinstance(e, (Mul, Div)):
        return _PRODUCT
    return _SUM


def to_source(e) -> str:
    if isinstance(e, Const):
        if e.name:
            return e.name
        if e.value < 0:
            return "-" + _wrap_const(-e.value)
        return _const_text(e.value)
    if isinstance(e, VarX):
        return "x"
    if isinstance(e, VarN):
        return "n"
    if isinstance(e, Bernstein):
        return f"bernstein[{e.degree}; {e.a:g}, {e.b:g}](x)"
    if isinstance(e, Func):
        return f"{e.name}({to_source(e.arg)})"
    if isinstance(e, Neg):
        return "-" + _paren(e.arg, _ATOM)
    if isinstance(e, Pow):
        return f"{_paren(e.left, _ATOM)}^{_paren(e.right, _ATOM)}"
    if isinstance(e, Mul):
        return f"{_paren(e.left, _PRODUCT, strict_unary=True)}*{_paren(e.right, _POWER)}"
    if isinstance(e, Div):
        return f"{_paren(e.left, _PRODUCT, strict_unary=True)}/{_paren(e.right, _POWER)}"
    if isinstance(e, Add):
        return f"{to_source(e.left)} + {_paren(e.right, _PRODUCT)}"
    if isinstance(e, Sub):
        return f"{to_source(e.left)} - {_paren(e.right, _PRODUCT)}"
    raise TypeError(f"unknown node {type(e).__name__}")


def _wrap_const(value):
    text = _const_text(value)
    return text if value.denominator == 1 else f"({text})"


def _paren(e, needed, strict_unary=False):
    p = _prec(e)
    if strict_unary and p == _UNARY:
        # a leading minus is fine on the left of a product
        return to_source(e)
    text = to_source(e)
    return text if p >= needed and not (p == _UNARY and needed > _UNARY) else f"({text})"


def to_tree(e, indent=0) -> str:
    """Indented debugging dump of the node structure."""
    pad = "  " * indent
    kids = e.children()
    if not kids:
        return pad + repr(e)
    lines = [pad + type(e).__name__]
    lines.extend(to_tree(k, indent + 1) for k in kids)
    return "\n".join(lines)

