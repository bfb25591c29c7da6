"""Small exact-rational expression language shared by the structure-equation
parser, the catalog data file and the CLI input documents.

Expressions are built from integer literals, parameter names, ``+ - * /``,
parentheses and ``sqrt(...)`` (which only succeeds on perfect rational
squares).  ``×`` and the unicode minus are accepted as synonyms of ``*`` and
``-``.  Everything evaluates to ``fractions.Fraction``; there is no floating
point anywhere.
"""

from fractions import Fraction
import math


class ExpressionError(ValueError):
    """Syntax or evaluation error; carries the offending position when known."""

    def __init__(self, message, position=None):
        if position is not None:
            message = f"{message} (at position {position})"
        super().__init__(message)
        self.position = position


class UnboundParameterError(ExpressionError):
    pass


class NotAPerfectSquareError(ExpressionError):
    pass


def normalize(text):
    """Map unicode operator synonyms onto their ASCII spellings."""
    return text.replace("×", "*").replace("−", "-").replace("⋅", "*")


# ---------------------------------------------------------------------------
# tokenizer
# ---------------------------------------------------------------------------

def _tokenize(text):
    """Yield (kind, value, pos) triples; kinds: num, ident, op."""
    tokens = []
    i, n = 0, len(text)
    while i < n:
        ch = text[i]
        if ch.isspace():
            i += 1
            continue
        if ch.isdigit():
            j = i
            while j < n and text[j].isdigit():
                j += 1
            if j < n and text[j] == ".":
                raise ExpressionError("decimal literals are not supported, use p/q", i)
            tokens.append(("num", int(text[i:j]), i))
            i = j
        elif ch.isalpha() or ch == "_":
            j = i
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            tokens.append(("ident", text[i:j], i))
            i = j
        elif ch in "+-*/(),":
            tokens.append(("op", ch, i))
            i += 1
        else:
            raise ExpressionError(f"unexpected character {ch!r}", i)
    return tokens


# ---------------------------------------------------------------------------
# recursive-descent parser -> AST
#   nodes: ('num', Fraction) ('param', name) ('neg', a)
#          ('+',a,b) ('-',a,b) ('*',a,b) ('/',a,b) ('sqrt', a)
# ---------------------------------------------------------------------------

class _Parser:
    def __init__(self, text):
        self.text = text
        self.tokens = _tokenize(text)
        self.k = 0

    def peek(self):
        return self.tokens[self.k] if self.k < len(self.tokens) else ("end", None, len(self.text))

    def next(self):
        tok = self.peek()
        self.k += 1
        return tok

    def expect_op(self, op):
        kind, value, pos = self.next()
        if kind != "op" or value != op:
            raise ExpressionError(f"expected {op!r}", pos)

    def parse(self):
        node = self.sum_()
        kind, value, pos = self.peek()
        if kind != "end":
            raise ExpressionError(f"unexpected trailing {value!r}", pos)
        return node

    def sum_(self):
        node = self.product()
        while True:
            kind, value, _ = self.peek()
            if kind == "op" and value in "+-":
                self.next()
                rhs = self.product()
                node = (value, node, rhs)
            else:
                return node

    def product(self):
        node = self.unary()
        while True:
            kind, value, _ = self.peek()
            if kind == "op" and value in "*/":
                self.next()
                rhs = self.unary()
                node = (value, node, rhs)
            else:
                return node

    def unary(self):
        kind, value, _ = self.peek()
        if kind == "op" and value == "-":
            self.next()
            return ("neg", self.unary())
        if kind == "op" and value == "+":
            self.next()
            return self.unary()
        return self.atom()

    def atom(self):
        kind, value, pos = self.next()
        if kind == "num":
            return ("num", Fraction(value))
        if kind == "ident":
            nkind, nvalue, _ = self.peek()
            if nkind == "op" and nvalue == "(":
                if value != "sqrt":
                    raise ExpressionError(f"unknown function {value!r}", pos)
                self.next()
                inner = self.sum_()
                self.expect_op(")")
                return ("sqrt", inner)
            return ("param", value)
        if kind == "op" and value == "(":
            inner = self.sum_()
            self.expect_op(")")
            return inner
        raise ExpressionError(f"expected a value, found {value!r}", pos)


def parse_ast(text):
    return _Parser(normalize(text)).parse()


def sqrt_fraction(x):
    """Exact square root of a perfect-square rational; raises otherwise."""
    if x < 0:
        raise NotAPerfectSquareError(f"sqrt of negative value {x}")
    p, q = x.numerator, x.denominator
    rp, rq = math.isqrt(p), math.isqrt(q)
    if rp * rp != p or rq * rq != q:
        raise NotAPerfectSquareError(f"{x} is not the square of a rational")
    return Fraction(rp, rq)


def eval_ast(node, binding):
    op = node[0]
    if op == "num":
        return node[1]
    if op == "param":
        try:
            return Fraction(binding[node[1]])
        except KeyError:
            raise UnboundParameterError(f"unbound parameter {node[1]!r}") from None
    if op == "neg":
        return -eval_ast(node[1], binding)
    if op == "sqrt":
        return sqrt_fraction(eval_ast(node[1], binding))
    a = eval_ast(node[1], binding)
    b = eval_ast(node[2], binding)
    if op == "+":
        return a + b
    if op == "-":
        return a - b
    if op == "*":
        return a * b
    if op == "/":
        if b == 0:
            raise ExpressionError("division by zero after substitution")
        return a / b
    raise AssertionError(f"bad node {node!r}")


def ast_params(node, out=None):
    """Collect the parameter names occurring in an AST."""
    if out is None:
        out = set()
    if node[0] == "param":
        out.add(node[1])
    elif node[0] in ("neg", "sqrt"):
        ast_params(node[1], out)
    elif node[0] in "+-*/":
        ast_params(node[1], out)
        ast_params(node[2], out)
    return out


def evaluate(text, binding=None):
    return eval_ast(parse_ast(text), binding or {})


# ---------------------------------------------------------------------------
# signed top-level term splitting (shared by slot / 2-form / lin-comb parsing)
# ---------------------------------------------------------------------------

def split_signed_terms(text):
    """Split ``a - b + c`` at top level into [(+1,'a'), (-1,'b'), (+1,'c')].

    Respects parentheses.  A ``+``/``-`` separates terms only when the text
    before it already ends in a value (so ``2*-3`` stays one term); leading
    signs fold into the first term's sign.
    """
    text = normalize(text)
    terms = []
    depth = 0
    buf = []
    buf_start = 0
    sign = 1
    ends_value = False  # last non-space char of buf completes a value
    for i, ch in enumerate(text):
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
            if depth < 0:
                raise ExpressionError("unbalanced parentheses", i)
        if depth == 0 and ch in "+-":
            content = "".join(buf).strip()
            if content and ends_value:
                terms.append((sign, content, buf_start))
                sign = 1 if ch == "+" else -1
                buf = []
                buf_start = i + 1
                ends_value = False
                continue
            if not content:
                if ch == "-":
                    sign = -sign
                buf = []
                buf_start = i + 1
                continue
            # embedded unary sign, e.g. "2*-3": keep inside the term
        buf.append(ch)
        if not ch.isspace():
            ends_value = ch.isalnum() or ch in ")_"
    if depth != 0:
        raise ExpressionError("unbalanced parentheses", len(text))
    content = "".join(buf).strip()
    if not content:
        raise ExpressionError("empty term", len(text))
    terms.append((sign, content, buf_start))
    return terms


def _strip_two_form_monomial(term, pos):
    """Split a term into (coefficient text, digit pair); raises if malformed."""
    t = term.rstrip()
    if not (len(t) >= 2 and t[-1].isdigit() and t[-2].isdigit()):
        raise ExpressionError(f"term {term!r} does not end with a 2-form monomial", pos)
    digits = t[-2:]
    rest = t[:-2]
    if rest and rest[-1].isdigit():
        raise ExpressionError(
            f"ambiguous juxtaposition in {term!r}; separate the coefficient with '*'", pos
        )
    if rest.endswith("e") and (len(rest) == 1 or not (rest[-2].isalnum() or rest[-2] == "_")):
        rest = rest[:-1]
    return rest.strip(), digits


def parse_two_form_terms(text, dim, binding=None):
    """Parse a sum of 2-form monomial terms into {(i,j) i<j: Fraction}.

    A term is ``[coeff ['*']] M`` where the monomial M is two juxtaposed
    digits, optionally prefixed by ``e`` (``36``, ``e36``, ``2*34``,
    ``sigma*e45``, paper-style juxtaposition ``x23``).  ``ji`` with j>i folds
    in by antisymmetry.  The whole text may be ``0``.
    """
    binding = binding or {}
    text = normalize(text).strip()
    if text in ("0", ""):
        return {}
    coeffs = {}
    for sign, term, pos in split_signed_terms(text):
        if term == "0":
            continue
        rest, digits = _strip_two_form_monomial(term, pos)
        i, j = int(digits[0]), int(digits[1])
        if i == 0 or j == 0 or i > dim or j > dim:
            raise ExpressionError(f"basis index out of range in monomial {digits!r}", pos)
        if i == j:
            raise ExpressionError(f"repeated index in monomial {digits!r}", pos)
        if rest == "":
            coeff = Fraction(1)
        else:
            if rest.endswith("*"):
                rest = rest[:-1]
            if rest.strip() == "":
                raise ExpressionError(f"missing coefficient in term {term!r}", pos)
            coeff = evaluate(rest, binding)
        if i > j:
            i, j = j, i
            coeff = -coeff
        key = (i, j)
        coeffs[key] = coeffs.get(key, Fraction(0)) + sign * coeff
    return {k: v for k, v in coeffs.items() if v != 0}


def parse_linear_combination(text, dim, binding=None):
    """Parse ``-1/2 e4 + e5`` style sums into a coefficient dict {k: Fraction}.

    Basis symbols are ``e1`` .. ``e9``; a coefficient expression may precede a
    basis symbol with an explicit ``*`` or a space.
    """
    binding = binding or {}
    text = normalize(text).strip()
    out = {}
    if text == "0":
        return out
    for sign, term, pos in split_signed_terms(text):
        if term == "0":
            continue
        t = term.rstrip()
        if len(t) >= 2 and t[-1].isdigit() and t[-2] == "e" and (
            len(t) == 2 or not (t[-3].isalnum() or t[-3] == "_")
        ):
            k = int(t[-1])
            rest = t[:-2].strip()
        else:
            raise ExpressionError(f"term {term!r} does not end with a basis symbol e1..e9", pos)
        if k == 0 or k > dim:
            raise ExpressionError(f"basis index out of range in {term!r}", pos)
        if rest == "":
            coeff = Fraction(1)
        else:
            if rest.endswith("*"):
                rest = rest[:-1].strip()
            if rest == "":
                raise ExpressionError(f"missing coefficient in term {term!r}", pos)
            coeff = evaluate(rest, binding)
        out[k] = out.get(k, Fraction(0)) + sign * coeff
    return {k: v for k, v in out.items() if v != 0}


# ---------------------------------------------------------------------------
# constraint mini-language:  expr > 0 | expr >= 0 | expr < 0 | expr <= 0 |
#                            expr != 0 | square(expr)
# ---------------------------------------------------------------------------

_RELATIONS = (">=", "<=", "!=", ">", "<")


class Constraint:
    """One predicate over a parameter binding."""

    def __init__(self, kind, ast, text):
        self.kind = kind  # '>', '>=', '<', '<=', '!=', 'square'
        self.ast = ast
        self.text = text

    def __repr__(self):
        return f"Constraint({self.text!r})"

    def params(self):
        return ast_params(self.ast)

    def holds(self, binding):
        if self.kind == "square":
            try:
                sqrt_fraction(eval_ast(self.ast, binding))
                return True
            except NotAPerfectSquareError:
                return False
        value = eval_ast(self.ast, binding)
        if self.kind == ">":
            return value > 0
        if self.kind == ">=":
            return value >= 0
        if self.kind == "<":
            return value < 0
        if self.kind == "<=":
            return value <= 0
        if self.kind == "!=":
            return value != 0
        raise AssertionError(self.kind)


def parse_constraint(text):
    raw = normalize(text).strip()
    if raw.startswith("square(") and raw.endswith(")"):
        inner = raw[len("square("):-1]
        return Constraint("square", parse_ast(inner), raw)
    for rel in _RELATIONS:
        if rel in raw:
            lhs, rhs = raw.split(rel, 1)
            if rhs.strip() != "0":
                raise ExpressionError(f"constraint right-hand side must be 0: {raw!r}")
            return Constraint(rel, parse_ast(lhs), raw)
    raise ExpressionError(f"unrecognised constraint {raw!r}")
