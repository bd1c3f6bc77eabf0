"""Parse human-written polynomial expressions such as ``"x*(x-y)"`` or ``"2u^3"``.

Expressions are parsed with the standard ``ast`` module and evaluated over a
whitelist of node types, so nothing is ever executed.
"""

import ast
import re
from fractions import Fraction

from .polynomial import MultiPolynomial


def _segment(name, variables):
    """Split "xyz" into ["x", "y", "z"] when it is a concatenation of variable names."""
    if name in variables:
        return [name]
    for v in sorted(variables, key=len, reverse=True):
        if name.startswith(v):
            rest = _segment(name[len(v):], variables) if len(name) > len(v) else []
            if rest is not None:
                return [v] + rest
    return None


def _insert_products(text: str, variables=()) -> str:
    # "2u^3" -> "2 * u ** 3", "(x)(y)" -> "(x) * (y)", "yz" -> "y * z"
    out = []
    tokens = []
    for tok in re.findall(r"[A-Za-z_][A-Za-z_0-9]*|\d+|\*\*|\S", text):
        parts = _segment(tok, variables) if tok[0].isalpha() else None
        tokens.extend(parts or [tok])
    for tok in tokens:
        if out:
            prev = out[-1]
            prev_ends_value = prev[-1].isalnum() or prev[-1] in "_)"
            starts_value = tok[0].isalpha() or tok[0] in "_("
            if prev_ends_value and starts_value:
                out.append("*")
        out.append(tok)
    return " ".join(out)


def parse_polynomial(text, variables) -> MultiPolynomial:
    """Parse ``text`` as a polynomial over ``variables``.

    Integers and fractions like ``1/2`` are allowed as coefficients; ``^`` and
    ``**`` both mean exponentiation.  Juxtaposed variables such as ``xz`` are
    read as products when the name is not itself a declared variable.  Division is only allowed by constants.
    """
    variables = tuple(variables)
    if isinstance(text, int) and not isinstance(text, bool):
        return MultiPolynomial.constant(variables, text)
    source = _insert_products(str(text).replace("^", "**"), variables)
    try:
        tree = ast.parse(source, mode="eval")
    except SyntaxError as exc:
        raise ValueError(f"cannot parse polynomial {text!r}") from exc
    return _eval(tree.body, variables, text)


def _eval(node, variables, text):
    if isinstance(node, ast.Constant) and isinstance(node.value, int) and not isinstance(node.value, bool):
        return MultiPolynomial.constant(variables, node.value)
    if isinstance(node, ast.Name):
        if node.id not in variables:
            raise ValueError(f"unknown variable {node.id!r} in {text!r}; expected one of {variables}")
        return MultiPolynomial.variable(variables, node.id)
    if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.UAdd, ast.USub)):
        val = _eval(node.operand, variables, text)
        return -val if isinstance(node.op, ast.USub) else val
    if isinstance(node, ast.BinOp):
        left = _eval(node.left, variables, text)
        if isinstance(node.op, ast.Pow):
            right = _eval(node.right, variables, text)
            if right.total_degree() not in (0, None):
                raise ValueError(f"non-constant exponent in {text!r}")
            k = right.coefficient((0,) * len(variables))
            if k.denominator != 1 or k < 0:
                raise ValueError(f"exponent must be a non-negative integer in {text!r}")
            return left ** int(k)
        right = _eval(node.right, variables, text)
        if isinstance(node.op, ast.Add):
            return left + right
        if isinstance(node.op, ast.Sub):
            return left - right
        if isinstance(node.op, ast.Mult):
            return left * right
        if isinstance(node.op, ast.Div):
            if right.total_degree() != 0:
                raise ValueError(f"division by a non-constant in {text!r}")
            return left * (1 / Fraction(right.coefficient((0,) * len(variables))))
    raise ValueError(f"unsupported syntax in polynomial {text!r}")
