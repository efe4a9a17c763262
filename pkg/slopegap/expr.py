"""Evaluate constant expressions such as "1/(2*sin(pi/14))" exactly in a RealField.

Grammar: integer literals, + - * / and integer powers, parentheses, names of
previously defined constants, and cos/sin/tan/cot/sec/csc of rational
multiples of pi.
"""

import ast
import logging
from fractions import Fraction
from typing import Dict, Mapping, Optional, Union

from slopegap.realfield import FieldElement, FieldError, RealField

log = logging.getLogger(__name__)

Value = Union[Fraction, FieldElement]

TRIG_FUNCTIONS = ("cos", "sin", "tan", "cot", "sec", "csc")


class ExpressionError(Exception):
    pass


class UnknownConstantError(ExpressionError):
    def __init__(self, message: str, name: str):
        super().__init__(message)
        self.name = name


def evaluate(field: RealField, text: str, names: Optional[Mapping[str, FieldElement]] = None) -> FieldElement:
    """Exact value of `text` in `field`; bare names resolve through `names` then field.constants."""
    source = str(text).strip()
    try:
        tree = ast.parse(source, mode="eval")
    except SyntaxError as e:
        raise ExpressionError(f"cannot parse {source!r}: {e.msg}") from None
    scope: Dict[str, FieldElement] = dict(field.constants)
    if names:
        scope.update(names)
    try:
        value = _Evaluator(field, scope, source).value(tree.body)
    except FieldError as e:
        raise ExpressionError(f"{source!r}: {e}") from None
    return field(value) if isinstance(value, Fraction) else value


def evaluate_rational(text) -> Fraction:
    """A rational written as an int, "num/den" string, or rational expression."""
    if isinstance(text, int):
        return Fraction(text)
    source = str(text).strip()
    try:
        tree = ast.parse(source, mode="eval")
    except SyntaxError as e:
        raise ExpressionError(f"cannot parse {source!r}: {e.msg}") from None
    return _Evaluator(None, {}, source).rational(tree.body)


class _Evaluator:
    def __init__(self, field: Optional[RealField], scope: Mapping[str, FieldElement], source: str):
        self.field = field
        self.scope = scope
        self.source = source

    def fail(self, message: str) -> ExpressionError:
        return ExpressionError(f"{self.source!r}: {message}")

    def value(self, node: ast.AST) -> Value:
        if isinstance(node, ast.Constant) and isinstance(node.value, int) and not isinstance(node.value, bool):
            return Fraction(node.value)
        if isinstance(node, ast.Name):
            if node.id == "pi":
                raise self.fail("pi may only appear inside a trigonometric function")
            if node.id not in self.scope:
                known = ", ".join(sorted(self.scope)) or "none"
                raise UnknownConstantError(
                    f"{self.source!r}: unknown constant {node.id!r} (available: {known})", node.id
                )
            return self.scope[node.id]
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
            operand = self.value(node.operand)
            return -operand if isinstance(node.op, ast.USub) else operand
        if isinstance(node, ast.BinOp):
            if isinstance(node.op, ast.Pow):
                exponent = self.rational(node.right)
                if exponent.denominator != 1:
                    raise self.fail("only integer powers are supported")
                base = self.value(node.left)
                return base ** int(exponent)
            left, right = self.value(node.left), self.value(node.right)
            if isinstance(node.op, ast.Add):
                return left + right
            if isinstance(node.op, ast.Sub):
                return left - right
            if isinstance(node.op, ast.Mult):
                return left * right
            if isinstance(node.op, ast.Div):
                if right == 0:
                    raise self.fail("division by zero")
                return left / right
        if isinstance(node, ast.Call):
            return self.trig(node)
        raise self.fail(f"unsupported syntax {type(node).__name__}")

    def rational(self, node: ast.AST) -> Fraction:
        if isinstance(node, ast.Constant) and isinstance(node.value, int) and not isinstance(node.value, bool):
            return Fraction(node.value)
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
            operand = self.rational(node.operand)
            return -operand if isinstance(node.op, ast.USub) else operand
        if isinstance(node, ast.BinOp) and isinstance(node.op, (ast.Add, ast.Sub, ast.Mult, ast.Div)):
            left, right = self.rational(node.left), self.rational(node.right)
            if isinstance(node.op, ast.Add):
                return left + right
            if isinstance(node.op, ast.Sub):
                return left - right
            if isinstance(node.op, ast.Mult):
                return left * right
            if right == 0:
                raise self.fail("division by zero")
            return left / right
        raise self.fail("expected a rational number")

    def angle(self, node: ast.AST) -> Fraction:
        """r such that the node equals r·pi."""
        if isinstance(node, ast.Name) and node.id == "pi":
            return Fraction(1)
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
            r = self.angle(node.operand)
            return -r if isinstance(node.op, ast.USub) else r
        if isinstance(node, ast.BinOp):
            if isinstance(node.op, (ast.Add, ast.Sub)):
                left, right = self.angle(node.left), self.angle(node.right)
                return left + right if isinstance(node.op, ast.Add) else left - right
            if isinstance(node.op, ast.Mult):
                if _mentions_pi(node.left):
                    return self.angle(node.left) * self.rational(node.right)
                return self.rational(node.left) * self.angle(node.right)
            if isinstance(node.op, ast.Div):
                divisor = self.rational(node.right)
                if divisor == 0:
                    raise self.fail("division by zero")
                return self.angle(node.left) / divisor
        raise self.fail("trigonometric arguments must be rational multiples of pi")

    def trig(self, node: ast.Call) -> FieldElement:
        if not isinstance(node.func, ast.Name) or node.func.id not in TRIG_FUNCTIONS:
            raise self.fail(f"unsupported function (allowed: {', '.join(TRIG_FUNCTIONS)})")
        if len(node.args) != 1 or node.keywords:
            raise self.fail(f"{node.func.id}() takes exactly one argument")
        if self.field is None:
            raise self.fail("trigonometric values are not rational")
        r = self.angle(node.args[0])
        name = node.func.id
        if name == "cos":
            return self.field.cos_pi(r)
        if name == "sin":
            return self.field.sin_pi(r)
        c, s = self.field.cos_pi(r), self.field.sin_pi(r)
        if name == "tan":
            return s / c
        if name == "cot":
            return c / s
        if name == "sec":
            return 1 / c
        return 1 / s


def _mentions_pi(node: ast.AST) -> bool:
    return any(isinstance(n, ast.Name) and n.id == "pi" for n in ast.walk(node))
