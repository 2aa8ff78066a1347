"""Symbolic d/dx with ``n`` treated as a parameter.

The operator is partial: ``abs`` of an x-dependent argument is the one
construct outside its domain, reported with a :class:`NonDifferentiable`
marker instead of an exception.
"""
from dataclasses import dataclass

from .nodes import (Abs, Add, Bernstein, Const, Cos, Div, Exp, Expr, Log, Mul,
                    Neg, Pow, Sin, Sub, VarN, VarX, depends_on_x)
from .simplify import simplify


@dataclass(frozen=True)
class NonDifferentiable:
    """Marker for expressions outside the domain of d/dx."""

    subterm: Expr

    def __bool__(self):
        return False

    def __str__(self):
        return f"not differentiable: {self.subterm}"


class _Kink(Exception):
    def __init__(self, subterm):
        self.subterm = subterm


def differentiate(e: Expr):
    """Return the simplified derivative of ``e`` in x, or NonDifferentiable."""
    try:
        return simplify(_d(e))
    except _Kink as k:
        return NonDifferentiable(k.subterm)


def is_differentiable(e: Expr) -> bool:
    return not isinstance(differentiate(e), NonDifferentiable)


def _d(e):
    if not depends_on_x(e):
        return Const(0)
    if isinstance(e, VarX):
        return Const(1)
    if isinstance(e, Bernstein):
        return e.derivative()
    if isinstance(e, Neg):
        return Neg(_d(e.arg))
    if isinstance(e, Add):
        return Add(_d(e.left), _d(e.right))
    if isinstance(e, Sub):
        return Sub(_d(e.left), _d(e.right))
    if isinstance(e, Mul):
        u, v = e.left, e.right
        return Add(Mul(_d(u), v), Mul(u, _d(v)))
    if isinstance(e, Div):
        u, v = e.left, e.right
        return Div(Sub(Mul(_d(u), v), Mul(u, _d(v))), Pow(v, Const(2)))
    if isinstance(e, Pow):
        u, v = e.left, e.right
        if not depends_on_x(v):
            return Mul(Mul(v, Pow(u, Sub(v, Const(1)))), _d(u))
        if not depends_on_x(u):
            return Mul(Mul(e, Log(u)), _d(v))
        return Mul(e, Add(Mul(_d(v), Log(u)), Div(Mul(v, _d(u)), u)))
    if isinstance(e, Sin):
        return Mul(Cos(e.arg), _d(e.arg))
    if isinstance(e, Cos):
        return Neg(Mul(Sin(e.arg), _d(e.arg)))
    if isinstance(e, Exp):
        return Mul(e, _d(e.arg))
    if isinstance(e, Log):
        return Div(_d(e.arg), e.arg)
    if isinstance(e, Abs):
        raise _Kink(e)
    if isinstance(e, VarN):
        return Const(0)
    raise TypeError(f"unknown node {type(e).__name__}")
