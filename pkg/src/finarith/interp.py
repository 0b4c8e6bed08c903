"""Interpreting a strictly taller model inside a model of finite arithmetic.

Elements of the lifted model are fixed-width base-b digit strings over the
ground model, where b is the largest ground element whose square is defined.
Order is lexical; successor, addition, and multiplication run the
grade-school algorithms column by column, consulting the ground model only
for arithmetic on individual digits (all below b).  Decomposing a digit sum
or product into carry and digit uses bookkeeping on digit positions, which
never touches a quantity as large as b*b.
"""
from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass, field

from .core import PartialStructure, largest_square_base
from .errors import AdmissibilityError, DomainError, EvalError


@dataclass(frozen=True)
class InterpParams:
    base: object  # ground element b
    base_value: int  # its numeric value (oracle bookkeeping)
    width: int

    def __post_init__(self):
        if self.base_value < 2:
            raise AdmissibilityError("digit base must be at least 2")
        if self.width < 2:
            raise AdmissibilityError("digit width must be at least 2")


class DigitString:
    """A width-k base-b digit sequence, most significant digit first.

    Internally digits are stored by position index (0 .. b-1); the ground
    elements themselves are available through ``digits``.
    """

    __slots__ = ("model", "idx")

    def __init__(self, model, idx):
        self.model = model
        self.idx = idx

    @property
    def digits(self):
        kit = self.model.arith
        return tuple(kit.digits[i] for i in self.idx)

    def value(self):
        return self.model.valuation(self)

    def __eq__(self, other):
        return (
            isinstance(other, DigitString)
            and other.model is self.model
            and other.idx == self.idx
        )

    def __hash__(self):
        return hash(self.idx) ^ id(self.model)

    def as_string(self):
        b = self.model.arith.base_value
        if b <= 36:
            alphabet = "0123456789abcdefghijklmnopqrstuvwxyz"
            return "".join(alphabet[i] for i in self.idx)
        return "[" + ",".join(str(i) for i in self.idx) + "]"

    def __repr__(self):
        return f"<{self.as_string()} base {self.model.arith.base_value}>"


class DigitArithmetic:
    """Digit-level machinery over a ground model: the digit roster below b,
    and memoized carry/digit tables fed by genuine ground-model operations
    on digits."""

    def __init__(self, ground, base, width):
        self.ground = ground
        self.base = base
        self.width = width
        if ground.zero is None or ground.one is None:
            raise DomainError("ground model must interpret 0 and 1")
        digits = [ground.zero]
        cur = ground.zero
        while True:
            nxt = ground.succ(cur)
            if nxt is None:
                raise AdmissibilityError("ground model ends before the base")
            if nxt == base:
                break
            digits.append(nxt)
            cur = nxt
        self.digits = digits
        self.base_value = len(digits)
        self.index = {d: i for i, d in enumerate(digits)}
        self._add3 = {}
        self._mul = {}

    def add3(self, i, j, c):
        """(carry, digit) of digits[i] + digits[j] + c, with c in {0, 1}.

        Ground additions only ever see operands below b; the carry/digit
        split of the (sub-b*b) result is positional bookkeeping.
        """
        key = (i, j, c)
        hit = self._add3.get(key)
        if hit is not None:
            return hit
        g = self.ground
        b = self.base_value
        if c:
            if i == b - 1:
                # (b-1) + 1 overflows the digit range: total is b + j.
                out = (1, j)
                self._add3[key] = out
                return out
            bumped = g.plus(self.digits[i], g.one)
            i2 = self.index[bumped]
        else:
            i2 = i
        s = g.plus(self.digits[i2], self.digits[j])
        si = self.index.get(s)
        if si is not None:
            out = (0, si)
        else:
            out = (1, i2 + j - b)
        self._add3[key] = out
        return out

    def mul2(self, i, j):
        """(high, low) digits of digits[i] * digits[j]."""
        key = (i, j)
        hit = self._mul.get(key)
        if hit is not None:
            return hit
        p = self.ground.times(self.digits[i], self.digits[j])
        if p is None:
            raise DomainError("digit product undefined; base exceeds the square bound")
        out = divmod(i * j, self.base_value)
        self._mul[key] = out
        return out

    # --- string algorithms on index tuples ---

    def add_idx(self, s, t):
        memo = self._add3
        add3 = self.add3
        k = self.width
        out = [0] * k
        c = 0
        for i in range(k - 1, -1, -1):
            key = (s[i], t[i], c)
            hit = memo.get(key)
            if hit is None:
                hit = add3(*key)
            c, out[i] = hit
        if c:
            return None  # final carry out of the leading column
        return tuple(out)

    def succ_idx(self, s):
        memo = self._add3
        add3 = self.add3
        out = list(s)
        c = 1
        i = self.width - 1
        while c and i >= 0:
            key = (s[i], 0, c)
            hit = memo.get(key)
            if hit is None:
                hit = add3(*key)
            c, out[i] = hit
            i -= 1
        if c:
            return None  # s was the all-(b-1) string
        return tuple(out)

    def mul_idx(self, s, t):
        k = self.width
        amemo = self._add3
        mmemo = self._mul
        add3 = self.add3
        mul2 = self.mul2
        res = [0] * (2 * k)
        for j in range(k - 1, -1, -1):
            tj = t[j]
            if tj == 0:
                continue
            # One schoolbook row: s times the digit tj, with eager carries.
            row = [0] * (k + 1)
            carry = 0
            for i in range(k - 1, -1, -1):
                si = s[i]
                if si == 0:
                    row[i + 1] = carry
                    carry = 0
                    continue
                hit = mmemo.get((si, tj))
                if hit is None:
                    hit = mul2(si, tj)
                hi, lo = hit
                key = (lo, carry, 0)
                hit = amemo.get(key)
                if hit is None:
                    hit = add3(*key)
                c1, row[i + 1] = hit
                carry = hi + c1
            row[0] = carry
            # Shifted addition of the row into the double-width result.
            shift = (k - 1) - j
            pos = 2 * k - 1 - shift
            c = 0
            for r in range(k, -1, -1):
                rr = row[r]
                if rr == 0 and c == 0:
                    pos -= 1
                    continue
                key = (res[pos], rr, c)
                hit = amemo.get(key)
                if hit is None:
                    hit = add3(*key)
                c, res[pos] = hit
                pos -= 1
            while c:
                key = (res[pos], 0, c)
                hit = amemo.get(key)
                if hit is None:
                    hit = add3(*key)
                c, res[pos] = hit
                pos -= 1
        if any(res[:k]):
            return None  # true product needs more than k digits
        return tuple(res[k:])


class InterpretedModel(PartialStructure):
    """The taller model built from width-k base-b digit strings over a
    ground FA model.  Satisfies FA with the all-(b-1) string on top."""

    def __init__(self, ground, params):
        self.ground = ground
        self.params = params
        self.arith = DigitArithmetic(ground, params.base, params.width)
        k = params.width
        self.zero = DigitString(self, (0,) * k)
        self.one = DigitString(self, (0,) * (k - 1) + (1,))
        top = self.arith.base_value - 1
        self.largest = DigitString(self, (top,) * k)

    def __iter__(self):
        b, k = self.arith.base_value, self.params.width
        for idx in itertools.product(range(b), repeat=k):
            yield DigitString(self, idx)

    def __contains__(self, x):
        return isinstance(x, DigitString) and x.model is self

    def size(self):
        return self.arith.base_value ** self.params.width

    def less(self, a, b):
        self._require(a, b)
        return a.idx < b.idx  # lexical comparison, most significant first

    def _plus(self, a, b):
        idx = self.arith.add_idx(a.idx, b.idx)
        return None if idx is None else DigitString(self, idx)

    def _times(self, a, b):
        idx = self.arith.mul_idx(a.idx, b.idx)
        return None if idx is None else DigitString(self, idx)

    def succ(self, a):
        self._require(a)
        idx = self.arith.succ_idx(a.idx)
        return None if idx is None else DigitString(self, idx)

    def iter_below(self, x):
        self._require(x)
        b, k = self.arith.base_value, self.params.width
        target = x.idx
        for idx in itertools.product(range(b), repeat=k):
            if idx >= target:
                return
            yield DigitString(self, idx)

    def valuation(self, x):
        self._require(x)
        b = self.arith.base_value
        v = 0
        for i in x.idx:
            v = v * b + i
        return v

    def element(self, value):
        b, k = self.arith.base_value, self.params.width
        if not 0 <= value < b**k:
            raise DomainError(f"value {value} outside the width-{k} base-{b} range")
        idx = []
        for _ in range(k):
            value, r = divmod(value, b)
            idx.append(r)
        return DigitString(self, tuple(reversed(idx)))

    def __repr__(self):
        return f"InterpretedModel(base={self.arith.base_value}, width={self.params.width})"


# --- module-level digit operations (spec surface) ---

def _require_same(s, t):
    if not isinstance(s, DigitString) or not isinstance(t, DigitString):
        raise DomainError("digit-string operation on non-digit-string")
    if s.model is not t.model:
        raise DomainError("digit strings come from different parameterizations")


def digit_less(s, t):
    _require_same(s, t)
    return s.model.less(s, t)


def digit_succ(s):
    return s.model.succ(s)


def digit_plus(s, t):
    _require_same(s, t)
    return s.model.plus(s, t)


def digit_times(s, t):
    _require_same(s, t)
    return s.model.times(s, t)


# --- model construction ---

def minimal_admissible_width(base_value, top_value):
    k = 2
    while base_value**k - 1 < top_value * top_value:
        k += 1
    return k


def build_plus_model(m, width=5, base=None):
    """The taller model over m: width-k digit strings in the largest base
    whose square exists in m.  Requires b**k - 1 >= N**2 so that N**2 exists
    upstairs and all ground sums and products become defined."""
    if base is None:
        base = largest_square_base(m)
    bv = m.valuation(base)
    top = m.valuation(m.order_max())
    if bv < 2:
        raise AdmissibilityError(f"largest square base {bv} is below 2; the model is too short")
    if bv**width - 1 < top * top:
        k_min = minimal_admissible_width(bv, top)
        raise AdmissibilityError(
            f"width {width} in base {bv} cannot reach N^2 = {top * top}; "
            f"minimal admissible width is {k_min}",
            minimal_width=k_min,
        )
    return InterpretedModel(m, InterpParams(base, bv, width))


class Embedding:
    """An initial-segment embedding of a ground model into its lifted model."""

    def __init__(self, ground, target, func):
        self.ground = ground
        self.target = target
        self._func = func

    def __call__(self, x):
        if x not in self.ground:
            raise DomainError(f"{x!r} is not in the embedded model")
        return self._func(x)


def embed_initial(m, m_plus):
    """x below b*b maps to the two-digit string (x div b, x mod b); the at
    most 2b elements above get a 1 in the third-lowest digit.  Order- and
    operation-preserving with downward-closed image."""
    if m_plus.ground is not m:
        raise DomainError("lifted model was not built from this ground model")
    bv = m_plus.arith.base_value
    k = m_plus.params.width

    def func(x):
        v = m.valuation(x)
        if v < bv * bv:
            c, (d, e) = 0, divmod(v, bv)
        else:
            c, (d, e) = 1, divmod(v - bv * bv, bv)
        idx = (0,) * (k - 3) + (c, d, e)
        return DigitString(m_plus, idx)

    return Embedding(m, m_plus, func)


# --- verification ---

@dataclass
class BiinterpReport:
    passed: bool
    checks: dict
    failures: list = field(default_factory=list)


def verify_biinterpretation(m, m_plus, budget=10**6, seed=0, embedding=None):
    """Desk-scale evidence for the bi-interpretation of m with its lift:
    (i) the embedded copy of m is an isomorphic substructure, (ii) every
    lifted element is reassembled by its own digit representation over the
    copy of b, (iii) round trips through the digit representation are the
    identity on ground elements."""
    rng = random.Random(seed)
    e = embedding if embedding is not None else embed_initial(m, m_plus)
    checks = {}
    failures = []
    top = m.valuation(m.order_max())

    ground_elems = list(m) if m.size() * m.size() <= budget else [
        m.element(v) for v in sorted({0, top, *(rng.randrange(top + 1) for _ in range(256))})
    ]
    images = {m.valuation(x): e(x) for x in ground_elems}

    ok = True
    for x in ground_elems:
        for y in ground_elems:
            ex, ey = images[m.valuation(x)], images[m.valuation(y)]
            if m.less(x, y) != m_plus.less(ex, ey):
                ok = False
                failures.append(f"order not preserved at ({x!r}, {y!r})")
                break
            s = m.plus(x, y)
            su = m_plus.plus(ex, ey)
            if s is not None and (su is None or m_plus.valuation(su) != m.valuation(s)):
                ok = False
                failures.append(f"plus not preserved at ({x!r}, {y!r})")
                break
            if s is None and su is not None and m_plus.valuation(su) <= top:
                ok = False
                failures.append(f"plus image not faithful at ({x!r}, {y!r})")
                break
            p = m.times(x, y)
            pu = m_plus.times(ex, ey)
            if p is not None and (pu is None or m_plus.valuation(pu) != m.valuation(p)):
                ok = False
                failures.append(f"times not preserved at ({x!r}, {y!r})")
                break
        if not ok:
            break
    checks["embedded_copy_isomorphic"] = ok

    # (ii) each lifted element is rebuilt, inside the lifted model, from its
    # digit images and the image of b: fold acc -> acc * e(b) + e(digit).
    eb = e(m_plus.params.base)
    if m_plus.size() <= 4096:
        strings = list(m_plus)
    else:
        strings = [m_plus.element(rng.randrange(m_plus.size())) for _ in range(256)]
        strings += [m_plus.zero, m_plus.largest]
    ok = True
    for s in strings:
        acc = e(m.zero)
        for d in s.digits:
            acc = m_plus.times(acc, eb)
            acc = None if acc is None else m_plus.plus(acc, e(d))
            if acc is None:
                break
        if acc != s:
            ok = False
            failures.append(f"digit representation does not rebuild {s!r}")
            break
    checks["representation_identity"] = ok

    # (iii) round trip: the digits of e(x) recombine to x inside the ground
    # model itself.
    b = m_plus.params.base
    ok = True
    for x in ground_elems:
        ds = images[m.valuation(x)].digits
        c, d, e_dig = ds[-3], ds[-2], ds[-1]
        if any(m.valuation(z) != 0 for z in ds[:-3]):
            ok = False
            failures.append(f"embedding of {x!r} uses more than three digits")
            break
        low = m.times(d, b)
        low = None if low is None else m.plus(low, e_dig)
        if m.valuation(c) == 1:
            sq = m.times(b, b)
            low = None if low is None or sq is None else m.plus(sq, low)
        if low != x:
            ok = False
            failures.append(f"round trip fails at {x!r}")
            break
    checks["round_trip_identity"] = ok

    return BiinterpReport(passed=all(checks.values()), checks=checks, failures=failures)


def verify_induction_lex(m_plus, phi):
    """Digitwise minimization, most significant digit first: returns the
    lexically least string falsifying phi, or None when phi holds
    everywhere.  Performs one ground-level minimization per digit."""
    from .logic import eval_formula, free_variables

    fv = sorted(free_variables(phi))
    if len(fv) != 1:
        raise EvalError(f"formula must have exactly one free variable, got {fv}")
    v = fv[0]
    b, k = m_plus.arith.base_value, m_plus.params.width

    def exists_counterexample(prefix):
        for suffix in itertools.product(range(b), repeat=k - len(prefix)):
            s = DigitString(m_plus, prefix + suffix)
            if not eval_formula(m_plus, phi, {v: s}):
                return True
        return False

    prefix = ()
    for _pos in range(k):
        found = None
        for d in range(b):
            if exists_counterexample(prefix + (d,)):
                found = d
                break
        if found is None:
            if not prefix:
                return None
            raise AssertionError("minimization lost a counterexample")
        prefix = prefix + (found,)
    return DigitString(m_plus, prefix)


# --- towers ---

@dataclass
class Tower:
    stages: list
    embeddings: list  # embeddings[i] maps stage i into stage i+1
    heights: list

    def to_stage(self, x, i):
        """Carry a stage-0 element to its copy at stage i."""
        for e in self.embeddings[:i]:
            x = e(x)
        return x


def build_tower(m, stage_count, width=5):
    """Iterate the lifting: stages m = T0, T1, ..., with each stage the
    digit-string model over the previous and initial-segment embeddings
    composing ground elements upward."""
    stages = [m]
    embeddings = []
    for _ in range(stage_count):
        cur = stages[-1]
        nxt = build_plus_model(cur, width=width)
        embeddings.append(embed_initial(cur, nxt))
        stages.append(nxt)
    heights = [s.valuation(s.order_max()) for s in stages]
    return Tower(stages=stages, embeddings=embeddings, heights=heights)


@dataclass
class LimitValue:
    value: int
    stage: int
    element: object


def limit_eval(tower, op, x, y):
    """Evaluate x op y (ground elements) at the least tower stage where it
    is defined."""
    if op not in ("plus", "times"):
        raise EvalError(f"unknown operation {op!r}")
    for i, stage in enumerate(tower.stages):
        xi = tower.to_stage(x, i)
        yi = tower.to_stage(y, i)
        r = stage.plus(xi, yi) if op == "plus" else stage.times(xi, yi)
        if r is not None:
            return LimitValue(value=stage.valuation(r), stage=i, element=r)
    raise EvalError(
        f"{op} of {x!r} and {y!r} is undefined at every materialized stage"
    )


@dataclass
class BoundedInductionReport:
    passed: bool
    induction: list  # (stage, formula-text, ok)
    absoluteness: list  # (stage, formula-text, truth_i, truth_next, in_range, ok)
    failures: list = field(default_factory=list)


def check_bounded_induction(tower, corpus, budget=4096, seed=0):
    """Induction instances of bounded formulas at every stage, plus truth
    agreement of closed bounded sentences between consecutive stages."""
    from .core import check_fa_axioms
    from .logic import (
        eval_formula, eval_term, free_variables, induction_instance, is_delta0,
        print_formula,
    )

    induction = []
    absoluteness = []
    failures = []
    rng = random.Random(seed)

    for phi in corpus:
        if not is_delta0(phi):
            raise EvalError(f"corpus formula is not Delta_0: {print_formula(phi)}")

    for phi in corpus:
        fv = sorted(free_variables(phi))
        text = print_formula(phi)
        if len(fv) == 1:
            v = fv[0]
            for i, stage in enumerate(tower.stages):
                if stage.size() <= budget:
                    ok = eval_formula(stage, induction_instance(phi, v), {})
                else:
                    ok = _sampled_induction(stage, phi, v, rng)
                induction.append((i, text, ok))
                if not ok:
                    failures.append(f"induction instance of {text} fails at stage {i}")
        elif len(fv) == 0:
            truths = []
            for i, stage in enumerate(tower.stages):
                in_range = _outer_bounds_defined(stage, phi)
                truths.append((i, in_range, eval_formula(stage, phi, {}) if in_range else None))
            for (i, ri, ti), (j, rj, tj) in zip(truths, truths[1:]):
                if not (ri and rj):
                    absoluteness.append((i, text, ti, tj, False, True))
                    continue
                ok = ti == tj
                absoluteness.append((i, text, ti, tj, True, ok))
                if not ok:
                    failures.append(
                        f"{text} changes truth between stages {i} ({ti}) and {j} ({tj})"
                    )
        else:
            raise EvalError(
                f"corpus formula must be closed or have one free variable: {text}"
            )

    return BoundedInductionReport(
        passed=not failures,
        induction=induction,
        absoluteness=absoluteness,
        failures=failures,
    )


def _sampled_induction(stage, phi, v, rng, samples=48):
    from .logic import eval_formula

    size = stage.size()
    vals = sorted({0, size - 1, *(rng.randrange(size) for _ in range(samples))})
    elems = [stage.element(x) for x in vals]
    base = eval_formula(stage, phi, {v: stage.zero})
    step_ok = True
    concl_ok = True
    for a in elems:
        holds = eval_formula(stage, phi, {v: a})
        if not holds:
            concl_ok = False
        s = stage.succ(a)
        if s is not None and holds and not eval_formula(stage, phi, {v: s}):
            step_ok = False
    return (not base) or (not step_ok) or concl_ok


def _outer_bounds_defined(stage, phi):
    """Every closed outermost quantifier bound of phi evaluates in stage."""
    from .logic import (
        And, Exists, Forall, Implies, Not, Or, eval_term, term_variables,
    )

    def walk(g):
        match g:
            case Forall(_, bound, body) | Exists(_, bound, body):
                if bound is not None and not term_variables(bound):
                    if eval_term(stage, bound, {}) is None:
                        return False
                return walk(body)
            case Not(body):
                return walk(body)
            case And(l, r) | Or(l, r) | Implies(l, r):
                return walk(l) and walk(r)
            case _:
                return True

    return walk(phi)


# --- purity instrumentation ---

class InstrumentedStructure(PartialStructure):
    """Pass-through wrapper recording every operand pair handed to the
    wrapped structure's plus and times."""

    def __init__(self, base):
        self.base = base
        self.requests = []
        self.zero = base.zero
        self.one = base.one
        self.largest = base.largest

    def reset(self):
        self.requests = []

    def __iter__(self):
        return iter(self.base)

    def __contains__(self, x):
        return x in self.base

    def size(self):
        return self.base.size()

    def less(self, a, b):
        return self.base.less(a, b)

    def plus(self, a, b):
        self.requests.append(("plus", a, b))
        return self.base.plus(a, b)

    def times(self, a, b):
        self.requests.append(("times", a, b))
        return self.base.times(a, b)

    def succ(self, a):
        if self.one is None:
            return None
        return self.plus(a, self.one)

    def iter_below(self, x):
        return self.base.iter_below(x)

    def valuation(self, x):
        return self.base.valuation(x)

    def element(self, v):
        return self.base.element(v)

    def all_operands_below(self, bound):
        return all(
            self.base.less(a, bound) and self.base.less(b, bound)
            for _, a, b in self.requests
        )
