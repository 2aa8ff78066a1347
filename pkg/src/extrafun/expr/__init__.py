"""Expressions in the point variable x and the sequence index n."""
from .bernstein import bernstein_approx, to_monomial
from .diff import NonDifferentiable, differentiate, is_differentiable
from .nodes import (PI, Abs, Add, Bernstein, Const, Cos, Div, Exp, Expr, Log,
                    Mul, N, Neg, Pow, Sin, Sub, VarN, VarX, X, as_expr,
                    depends_on_n, depends_on_x, eval_expr, evaluate,
                    substitute_n)
from .parser import parse
from .printer import to_source
from .simplify import simplify

__all__ = [
    "Expr", "Const", "VarX", "VarN", "Neg", "Add", "Sub", "Mul", "Div", "Pow",
    "Sin", "Cos", "Exp", "Log", "Abs", "Bernstein", "X", "N", "PI",
    "parse", "to_source", "as_expr", "evaluate", "eval_expr", "simplify",
    "differentiate", "is_differentiable", "NonDifferentiable",
    "bernstein_approx", "to_monomial", "depends_on_x", "depends_on_n",
    "substitute_n",
]
