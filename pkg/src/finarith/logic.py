"""The formula language of finite arithmetic.

Terms over {+, *, 0, 1, N} with S(.) as successor sugar; atoms for equality,
order, definedness, and the operation graphs; bounded and unbounded
quantifiers; modal operators dia/box.  Includes a recursive-descent parser
for the ASCII grammar, a precedence-aware printer, and a two-valued
evaluator over any PartialStructure using the negative convention: an atom
with an undefined term is false, with Def(.) as the explicit definedness
atom.
"""
from __future__ import annotations

import re
from dataclasses import dataclass

from .errors import EvalError, ParseError, WrongEvaluatorError


# --- Terms ---

@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Const0:
    pass


@dataclass(frozen=True)
class Const1:
    pass


@dataclass(frozen=True)
class ConstN:
    pass


@dataclass(frozen=True)
class Succ:
    arg: "Term"


@dataclass(frozen=True)
class Sum:
    left: "Term"
    right: "Term"


@dataclass(frozen=True)
class Prod:
    left: "Term"
    right: "Term"


Term = Var | Const0 | Const1 | ConstN | Succ | Sum | Prod


# --- Formulas ---

@dataclass(frozen=True)
class Eq:
    left: Term
    right: Term


@dataclass(frozen=True)
class Lt:
    left: Term
    right: Term


@dataclass(frozen=True)
class Defined:
    arg: Term


@dataclass(frozen=True)
class PlusAtom:
    a: Term
    b: Term
    c: Term


@dataclass(frozen=True)
class TimesAtom:
    a: Term
    b: Term
    c: Term


@dataclass(frozen=True)
class Not:
    body: "Formula"


@dataclass(frozen=True)
class And:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Or:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Implies:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Forall:
    var: str
    bound: Term | None
    body: "Formula"


@dataclass(frozen=True)
class Exists:
    var: str
    bound: Term | None
    body: "Formula"


@dataclass(frozen=True)
class Possibly:
    body: "Formula"


@dataclass(frozen=True)
class Necessarily:
    body: "Formula"


Formula = (
    Eq | Lt | Defined | PlusAtom | TimesAtom
    | Not | And | Or | Implies | Forall | Exists | Possibly | Necessarily
)

_ATOMS = (Eq, Lt, Defined, PlusAtom, TimesAtom)
_QUANTIFIERS = (Forall, Exists)
_MODALS = (Possibly, Necessarily)


def numeral_term(n):
    """The canonical closed term S(S(...S(0)...)) denoting n."""
    t: Term = Const0()
    for _ in range(n):
        t = Succ(t)
    return t


# --- Structural helpers ---

def term_variables(t):
    match t:
        case Var(name):
            return {name}
        case Succ(arg):
            return term_variables(arg)
        case Sum(l, r) | Prod(l, r):
            return term_variables(l) | term_variables(r)
        case _:
            return set()


def free_variables(f):
    match f:
        case Eq(l, r) | Lt(l, r):
            return term_variables(l) | term_variables(r)
        case Defined(arg):
            return term_variables(arg)
        case PlusAtom(a, b, c) | TimesAtom(a, b, c):
            return term_variables(a) | term_variables(b) | term_variables(c)
        case Not(body) | Possibly(body) | Necessarily(body):
            return free_variables(body)
        case And(l, r) | Or(l, r) | Implies(l, r):
            return free_variables(l) | free_variables(r)
        case Forall(v, bound, body) | Exists(v, bound, body):
            out = free_variables(body) - {v}
            if bound is not None:
                out |= term_variables(bound)
            return out
    raise TypeError(f"not a formula: {f!r}")


def is_first_order(f):
    match f:
        case Possibly(_) | Necessarily(_):
            return False
        case Not(body):
            return is_first_order(body)
        case And(l, r) | Or(l, r) | Implies(l, r):
            return is_first_order(l) and is_first_order(r)
        case Forall(_, _, body) | Exists(_, _, body):
            return is_first_order(body)
        case _:
            return True


def is_delta0(f):
    """First-order with every quantifier carrying a bound."""
    match f:
        case Possibly(_) | Necessarily(_):
            return False
        case Not(body):
            return is_delta0(body)
        case And(l, r) | Or(l, r) | Implies(l, r):
            return is_delta0(l) and is_delta0(r)
        case Forall(_, bound, body) | Exists(_, bound, body):
            return bound is not None and is_delta0(body)
        case _:
            return True


def contains_constN(f):
    def in_term(t):
        match t:
            case ConstN():
                return True
            case Succ(arg):
                return in_term(arg)
            case Sum(l, r) | Prod(l, r):
                return in_term(l) or in_term(r)
            case _:
                return False

    match f:
        case Eq(l, r) | Lt(l, r):
            return in_term(l) or in_term(r)
        case Defined(arg):
            return in_term(arg)
        case PlusAtom(a, b, c) | TimesAtom(a, b, c):
            return in_term(a) or in_term(b) or in_term(c)
        case Not(body) | Possibly(body) | Necessarily(body):
            return contains_constN(body)
        case And(l, r) | Or(l, r) | Implies(l, r):
            return contains_constN(l) or contains_constN(r)
        case Forall(_, bound, body) | Exists(_, bound, body):
            return (bound is not None and in_term(bound)) or contains_constN(body)
    raise TypeError(f"not a formula: {f!r}")


def _fresh(name, taken):
    i = 1
    while f"{name}_{i}" in taken:
        i += 1
    return f"{name}_{i}"


def substitute_term(t, var, repl):
    match t:
        case Var(name):
            return repl if name == var else t
        case Succ(arg):
            return Succ(substitute_term(arg, var, repl))
        case Sum(l, r):
            return Sum(substitute_term(l, var, repl), substitute_term(r, var, repl))
        case Prod(l, r):
            return Prod(substitute_term(l, var, repl), substitute_term(r, var, repl))
        case _:
            return t


def substitute(f, var, repl):
    """Capture-avoiding substitution of the term repl for the variable var."""
    repl_vars = term_variables(repl)

    def go(g):
        match g:
            case Eq(l, r):
                return Eq(substitute_term(l, var, repl), substitute_term(r, var, repl))
            case Lt(l, r):
                return Lt(substitute_term(l, var, repl), substitute_term(r, var, repl))
            case Defined(arg):
                return Defined(substitute_term(arg, var, repl))
            case PlusAtom(a, b, c):
                return PlusAtom(*(substitute_term(x, var, repl) for x in (a, b, c)))
            case TimesAtom(a, b, c):
                return TimesAtom(*(substitute_term(x, var, repl) for x in (a, b, c)))
            case Not(body):
                return Not(go(body))
            case And(l, r):
                return And(go(l), go(r))
            case Or(l, r):
                return Or(go(l), go(r))
            case Implies(l, r):
                return Implies(go(l), go(r))
            case Forall(v, bound, body) | Exists(v, bound, body):
                cls = type(g)
                nb = None if bound is None else substitute_term(bound, var, repl)
                if v == var:
                    return cls(v, nb, body)
                if v in repl_vars and var in free_variables(body):
                    w = _fresh(v, repl_vars | free_variables(body))
                    body = substitute(body, v, Var(w))
                    v = w
                return cls(v, nb, go(body))
        raise TypeError(f"not a formula: {g!r}")

    return go(f)


def induction_instance(f, var):
    """[phi(0) and A var < N. (phi -> phi(var+1))] -> A var. phi"""
    if var not in free_variables(f):
        raise EvalError(f"variable {var!r} is not free in the formula")
    base = substitute(f, var, Const0())
    step = Forall(var, ConstN(), Implies(f, substitute(f, var, Sum(Var(var), Const1()))))
    return Implies(And(base, step), Forall(var, None, f))


# --- Parser ---

_TOKEN_RE = re.compile(r"\s*(->|[()+*=<!&|.,]|[A-Za-z][A-Za-z0-9_]*|[01])")
_VAR_RE = re.compile(r"[a-z][a-z0-9_]*\Z")
_KEYWORDS = {"dia", "box"}


def _tokenize(text):
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            rest = text[pos:].lstrip()
            if not rest:
                break
            raise ParseError(f"unexpected character {rest[0]!r}", pos)
        tokens.append((m.group(1), m.start(1)))
        pos = m.end()
    return tokens


class _Parser:
    def __init__(self, text):
        self.text = text
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i][0] if self.i < len(self.tokens) else None

    def pos(self):
        return self.tokens[self.i][1] if self.i < len(self.tokens) else len(self.text)

    def next(self):
        tok = self.peek()
        if tok is None:
            raise ParseError("unexpected end of input", self.pos())
        self.i += 1
        return tok

    def expect(self, tok):
        if self.peek() != tok:
            raise ParseError(f"expected {tok!r}, found {self.peek()!r}", self.pos())
        self.i += 1

    # formulas
    def formula(self):
        left = self.or_formula()
        if self.peek() == "->":
            self.next()
            return Implies(left, self.formula())
        return left

    def or_formula(self):
        left = self.and_formula()
        while self.peek() == "|":
            self.next()
            left = Or(left, self.and_formula())
        return left

    def and_formula(self):
        left = self.unary()
        while self.peek() == "&":
            self.next()
            left = And(left, self.unary())
        return left

    def unary(self):
        tok = self.peek()
        if tok == "!":
            self.next()
            return Not(self.unary())
        if tok == "dia":
            self.next()
            return Possibly(self.unary())
        if tok == "box":
            self.next()
            return Necessarily(self.unary())
        if tok in ("A", "E"):
            self.next()
            name = self.next()
            if not _VAR_RE.match(name) or name in _KEYWORDS:
                raise ParseError(f"invalid variable name {name!r}", self.pos())
            bound = None
            if self.peek() == "<":
                self.next()
                bound = self.term()
            self.expect(".")
            body = self.formula()  # quantifier scope extends maximally right
            return (Forall if tok == "A" else Exists)(name, bound, body)
        return self.primary()

    def primary(self):
        tok = self.peek()
        if tok == "Def":
            self.next()
            self.expect("(")
            t = self.term()
            self.expect(")")
            return Defined(t)
        if tok in ("Plus", "Times"):
            self.next()
            self.expect("(")
            a = self.term()
            self.expect(",")
            b = self.term()
            self.expect(",")
            c = self.term()
            self.expect(")")
            return (PlusAtom if tok == "Plus" else TimesAtom)(a, b, c)
        if tok == "(":
            # Ambiguous: a parenthesized term opening an atom, or a
            # parenthesized formula.  Try the atom reading first.
            save = self.i
            try:
                return self.relational_atom()
            except ParseError:
                self.i = save
            self.next()
            f = self.formula()
            self.expect(")")
            return f
        return self.relational_atom()

    def relational_atom(self):
        left = self.term()
        tok = self.peek()
        if tok == "=":
            self.next()
            return Eq(left, self.term())
        if tok == "<":
            self.next()
            return Lt(left, self.term())
        raise ParseError(f"expected '=' or '<', found {tok!r}", self.pos())

    # terms
    def term(self):
        left = self.prod_term()
        while self.peek() == "+":
            self.next()
            left = Sum(left, self.prod_term())
        return left

    def prod_term(self):
        left = self.factor()
        while self.peek() == "*":
            self.next()
            left = Prod(left, self.factor())
        return left

    def factor(self):
        tok = self.peek()
        if tok == "0":
            self.next()
            return Const0()
        if tok == "1":
            self.next()
            return Const1()
        if tok == "N":
            self.next()
            return ConstN()
        if tok == "S":
            self.next()
            self.expect("(")
            t = self.term()
            self.expect(")")
            return Succ(t)
        if tok == "(":
            self.next()
            t = self.term()
            self.expect(")")
            return t
        if tok is not None and _VAR_RE.match(tok) and tok not in _KEYWORDS:
            self.next()
            return Var(tok)
        raise ParseError(f"expected a term, found {tok!r}", self.pos())


def parse_formula(text):
    p = _Parser(text)
    f = p.formula()
    if p.peek() is not None:
        raise ParseError(f"trailing input {p.peek()!r}", p.pos())
    return f


def parse_term(text):
    p = _Parser(text)
    t = p.term()
    if p.peek() is not None:
        raise ParseError(f"trailing input {p.peek()!r}", p.pos())
    return t


# --- Printer ---

def print_term(t, _level=1):
    # levels: 1 sum, 2 product, 3 atomic
    match t:
        case Var(name):
            return name
        case Const0():
            return "0"
        case Const1():
            return "1"
        case ConstN():
            return "N"
        case Succ(arg):
            return f"S({print_term(arg)})"
        case Sum(l, r):
            s = f"{print_term(l, 1)} + {print_term(r, 2)}"
            return f"({s})" if _level > 1 else s
        case Prod(l, r):
            s = f"{print_term(l, 2)} * {print_term(r, 3)}"
            return f"({s})" if _level > 2 else s
    raise TypeError(f"not a term: {t!r}")


def _prefix_level(body, level):
    # A quantifier after a prefix operator keeps its maximal-right scope, so
    # it only needs parentheses the surrounding context would demand anyway.
    return level if isinstance(body, (Forall, Exists)) else 4


def print_formula(f, _level=1):
    # levels: 1 implies (right assoc), 2 or, 3 and, 4 unary prefixes.
    # Quantifiers scope maximally right, so they take parentheses in any
    # context tighter than a whole implication.
    match f:
        case Eq(l, r):
            return f"{print_term(l)} = {print_term(r)}"
        case Lt(l, r):
            return f"{print_term(l)} < {print_term(r)}"
        case Defined(arg):
            return f"Def({print_term(arg)})"
        case PlusAtom(a, b, c):
            return f"Plus({print_term(a)}, {print_term(b)}, {print_term(c)})"
        case TimesAtom(a, b, c):
            return f"Times({print_term(a)}, {print_term(b)}, {print_term(c)})"
        case Not(body):
            if isinstance(body, (Eq, Lt)):
                return f"!({print_formula(body, 1)})"
            return f"!{print_formula(body, _prefix_level(body, _level))}"
        case Possibly(body):
            return f"dia {print_formula(body, _prefix_level(body, _level))}"
        case Necessarily(body):
            return f"box {print_formula(body, _prefix_level(body, _level))}"
        case And(l, r):
            s = f"{print_formula(l, 3)} & {print_formula(r, 4)}"
            return f"({s})" if _level > 3 else s
        case Or(l, r):
            s = f"{print_formula(l, 2)} | {print_formula(r, 3)}"
            return f"({s})" if _level > 2 else s
        case Implies(l, r):
            s = f"{print_formula(l, 2)} -> {print_formula(r, 1)}"
            return f"({s})" if _level > 1 else s
        case Forall(v, bound, body) | Exists(v, bound, body):
            q = "A" if isinstance(f, Forall) else "E"
            b = "" if bound is None else f" < {print_term(bound)}"
            s = f"{q} {v}{b}. {print_formula(body, 1)}"
            return f"({s})" if _level > 1 else s
    raise TypeError(f"not a formula: {f!r}")


# --- Evaluation ---

_MISSING = object()


def eval_term(m, t, assignment):
    """Strict partial evaluation: defined iff every subterm is defined and
    the structure's graph provides a value."""
    match t:
        case Var(name):
            val = assignment.get(name, _MISSING)
            if val is _MISSING:
                raise EvalError(f"unassigned variable {name!r}")
            return val
        case Const0():
            return m.zero
        case Const1():
            return m.one
        case ConstN():
            return m.largest  # None unless the structure is an FA model
        case Succ(arg):
            v = eval_term(m, arg, assignment)
            return None if v is None else m.succ(v)
        case Sum(l, r):
            a = eval_term(m, l, assignment)
            if a is None:
                return None
            b = eval_term(m, r, assignment)
            return None if b is None else m.plus(a, b)
        case Prod(l, r):
            a = eval_term(m, l, assignment)
            if a is None:
                return None
            b = eval_term(m, r, assignment)
            return None if b is None else m.times(a, b)
    raise TypeError(f"not a term: {t!r}")


def eval_formula(m, f, assignment=None):
    """Classical two-valued semantics with the negative convention.

    eq/lt atoms are true only when both terms are defined; Def(t) is true
    iff t evaluates; graph atoms need all three terms defined and the graph
    triple to hold.  A bounded quantifier with an undefined bound has a
    vacuous range (A true, E false).  Modal nodes are rejected.
    """
    if assignment is None:
        assignment = {}
    match f:
        case Eq(l, r):
            a = eval_term(m, l, assignment)
            if a is None:
                return False
            b = eval_term(m, r, assignment)
            return b is not None and a == b
        case Lt(l, r):
            a = eval_term(m, l, assignment)
            if a is None:
                return False
            b = eval_term(m, r, assignment)
            return b is not None and m.less(a, b)
        case Defined(arg):
            return eval_term(m, arg, assignment) is not None
        case PlusAtom(ta, tb, tc):
            a = eval_term(m, ta, assignment)
            b = eval_term(m, tb, assignment)
            c = eval_term(m, tc, assignment)
            return a is not None and b is not None and c is not None and m.plus(a, b) == c
        case TimesAtom(ta, tb, tc):
            a = eval_term(m, ta, assignment)
            b = eval_term(m, tb, assignment)
            c = eval_term(m, tc, assignment)
            return a is not None and b is not None and c is not None and m.times(a, b) == c
        case Not(body):
            return not eval_formula(m, body, assignment)
        case And(l, r):
            return eval_formula(m, l, assignment) and eval_formula(m, r, assignment)
        case Or(l, r):
            return eval_formula(m, l, assignment) or eval_formula(m, r, assignment)
        case Implies(l, r):
            return (not eval_formula(m, l, assignment)) or eval_formula(m, r, assignment)
        case Forall(v, bound, body):
            saved = assignment.get(v, _MISSING)
            try:
                for x in _quantifier_range(m, bound, assignment):
                    assignment[v] = x
                    if not eval_formula(m, body, assignment):
                        return False
                return True
            finally:
                if saved is _MISSING:
                    assignment.pop(v, None)
                else:
                    assignment[v] = saved
        case Exists(v, bound, body):
            saved = assignment.get(v, _MISSING)
            try:
                for x in _quantifier_range(m, bound, assignment):
                    assignment[v] = x
                    if eval_formula(m, body, assignment):
                        return True
                return False
            finally:
                if saved is _MISSING:
                    assignment.pop(v, None)
                else:
                    assignment[v] = saved
        case Possibly(_) | Necessarily(_):
            raise WrongEvaluatorError(
                "modal operator in first-order evaluation; use finarith.modal.eval_modal"
            )
    raise TypeError(f"not a formula: {f!r}")


def _quantifier_range(m, bound, assignment):
    if bound is None:
        return iter(m)
    bv = eval_term(m, bound, assignment)
    if bv is None:
        return iter(())  # vacuous range: A true, E false
    return m.iter_below(bv)
