"""Finite potentialist systems and Kripke semantics for the modal operators.

A system is a finite family of partial structures (worlds) with a reflexive,
transitive accessibility relation along which domains and operation graphs
grow.  dia phi holds at a world when phi holds at some accessible world;
box phi when it holds at all of them.  Quantifiers range over the current
world; individuals are rigid, so a witness found here still exists in every
larger world.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .core import SubsetWorld, Truncation
from .errors import DomainError, EvalError
from .logic import (
    And, Const0, Const1, Defined, Eq, Exists, Forall, Implies, Lt,
    Necessarily, Not, Or, Possibly, _quantifier_range, eval_formula,
    free_variables, is_first_order, print_formula,
)


class PotentialistSystem:
    """Worlds, accessibility, and an optional designated limit structure.

    ``access[i]`` is the frozenset of indices reachable from world i
    (including i itself once validated reflexive).  Worlds are addressed by
    index or by their string id.
    """

    def __init__(self, worlds, ids, access, limit=None, annotations=None, validate=True):
        if len(worlds) != len(ids):
            raise ValueError("one id per world required")
        self.worlds = list(worlds)
        self.ids = list(ids)
        self._id_index = {wid: i for i, wid in enumerate(self.ids)}
        if len(self._id_index) != len(self.ids):
            raise ValueError("world ids must be distinct")
        self.access = [frozenset(s) for s in access]
        self.limit = limit
        self.annotations = dict(annotations or {})
        if validate:
            self.validate()
        self._evaluator = None

    def resolve(self, world):
        """Accept an index or an id; return the index."""
        if isinstance(world, int) and not isinstance(world, bool):
            if not 0 <= world < len(self.worlds):
                raise DomainError(f"world index {world} out of range")
            return world
        i = self._id_index.get(world)
        if i is None:
            raise DomainError(f"unknown world id {world!r}")
        return i

    def validate(self):
        n = len(self.worlds)
        for i, s in enumerate(self.access):
            if any(not 0 <= j < n for j in s):
                raise ValueError(f"access set of world {self.ids[i]} out of range")
            if i not in s:
                raise ValueError(f"accessibility is not reflexive at {self.ids[i]}")
            for j in s:
                if not self.access[j] <= s:
                    raise ValueError(
                        f"accessibility is not transitive at {self.ids[i]} -> {self.ids[j]}"
                    )
        for i, s in enumerate(self.access):
            u = self.worlds[i]
            for j in s:
                if j == i:
                    continue
                v = self.worlds[j]
                for x in u:
                    if x not in v:
                        raise ValueError(
                            f"world {self.ids[j]} does not extend {self.ids[i]}: lost {x!r}"
                        )
                for a in u:
                    for b in u:
                        s_u = u.plus(a, b)
                        if s_u is not None and v.plus(a, b) != s_u:
                            raise ValueError(
                                f"plus graph not preserved from {self.ids[i]} to {self.ids[j]}"
                            )
                        p_u = u.times(a, b)
                        if p_u is not None and v.times(a, b) != p_u:
                            raise ValueError(
                                f"times graph not preserved from {self.ids[i]} to {self.ids[j]}"
                            )
        if self.limit is not None:
            self._validate_convergence()

    def _validate_convergence(self):
        lim = self.limit
        for i, u in enumerate(self.worlds):
            for x in u:
                if x not in lim:
                    raise ValueError(
                        f"world {self.ids[i]} is not included in the limit structure"
                    )
            for w in lim:
                if not any(w in self.worlds[j] for j in self.access[i]):
                    raise ValueError(
                        f"no world accessible from {self.ids[i]} accommodates {w!r}"
                    )

    def is_convergent(self):
        if self.limit is None:
            return False
        try:
            self._validate_convergence()
        except ValueError:
            return False
        return True

    def evaluator(self):
        if self._evaluator is None:
            self._evaluator = ModalEvaluator(self)
        return self._evaluator

    def __repr__(self):
        return f"PotentialistSystem({len(self.worlds)} worlds, limit={self.limit!r})"


def aristotelian_system(h):
    """Initial-segment potentialism: worlds are the truncations at 1..h,
    accessible along end-extension (numeric <=), converging to the
    truncation at h."""
    if h < 1:
        raise ValueError("height must be at least 1")
    worlds = [Truncation(n) for n in range(1, h + 1)]
    ids = [str(n) for n in range(1, h + 1)]
    access = [frozenset(range(i, h)) for i in range(h)]
    return PotentialistSystem(
        worlds, ids, access, limit=Truncation(h),
        annotations={"kind": "aristotelian", "height": h},
        validate=False,  # guaranteed by construction
    )


def _subset_id(elems):
    return "empty" if not elems else ",".join(str(x) for x in elems)


def arbitrary_set_system(h, world_budget=4096):
    """Arbitrary-set potentialism: one world per subset of {0, ..., h},
    ordered by inclusion, converging to the truncation at h.  The empty
    world is included; its id is "empty"."""
    if h < 0:
        raise ValueError("height must be at least 0")
    count = 1 << (h + 1)
    if count > world_budget:
        raise DomainError(
            f"{count} worlds exceed the configured budget of {world_budget}"
        )
    subsets = []
    for mask in range(count):
        subsets.append(tuple(x for x in range(h + 1) if mask >> x & 1))
    worlds = [SubsetWorld(s) for s in subsets]
    ids = [_subset_id(s) for s in subsets]
    masks = list(range(count))
    access = [
        frozenset(j for j in masks if mask & masks[j] == mask)
        for mask in masks
    ]
    return PotentialistSystem(
        worlds, ids, access, limit=Truncation(h) if h >= 1 else SubsetWorld(range(h + 1)),
        annotations={"kind": "arbitrary_set", "height": h, "empty_world": "empty"},
        validate=False,
    )


def fork_system():
    """A three-world fork: a root extending into two incomparable leaves.
    Reflexive-transitive but neither directed nor linear; classifies as S4
    only."""
    worlds = [SubsetWorld({0}), SubsetWorld({0, 1}), SubsetWorld({0, 2})]
    ids = ["root", "left", "right"]
    pairs = [(0, 0), (1, 1), (2, 2), (0, 1), (0, 2)]
    return load_system(worlds, ids, pairs, annotations={"kind": "fork"})


def load_system(worlds, ids, access_pairs, limit=None, annotations=None):
    """Build a system from an explicit edge list; the preorder, extension,
    and (when a limit is given) convergence conditions are validated."""
    n = len(worlds)
    access = [set() for _ in range(n)]
    for i, j in access_pairs:
        access[i].add(j)
    return PotentialistSystem(
        worlds, ids, access, limit=limit, annotations=annotations, validate=True
    )


# --- evaluation ---

class ModalEvaluator:
    """Kripke evaluation over a fixed system, memoized by (subformula,
    world, restriction of the assignment to the subformula's free
    variables)."""

    def __init__(self, sys):
        self.sys = sys
        self._memo = {}
        self._fo = {}
        self._fv = {}

    def _first_order(self, f):
        r = self._fo.get(f)
        if r is None:
            r = is_first_order(f)
            self._fo[f] = r
        return r

    def _free(self, f):
        r = self._fv.get(f)
        if r is None:
            r = tuple(sorted(free_variables(f)))
            self._fv[f] = r
        return r

    def eval(self, world, f, assignment=None):
        i = self.sys.resolve(world)
        a = dict(assignment) if assignment else {}
        for v in self._free(f):
            if v not in a:
                raise EvalError(f"unassigned variable {v!r}")
        return self._eval(i, f, a)

    def _eval(self, i, f, assignment):
        if self._first_order(f):
            return eval_formula(self.sys.worlds[i], f, dict(assignment))
        key = (f, i, tuple((v, assignment[v]) for v in self._free(f)))
        hit = self._memo.get(key)
        if hit is not None:
            return hit
        match f:
            case Possibly(body):
                out = any(self._eval(j, body, assignment) for j in self.sys.access[i])
            case Necessarily(body):
                out = all(self._eval(j, body, assignment) for j in self.sys.access[i])
            case Not(body):
                out = not self._eval(i, body, assignment)
            case And(l, r):
                out = self._eval(i, l, assignment) and self._eval(i, r, assignment)
            case Or(l, r):
                out = self._eval(i, l, assignment) or self._eval(i, r, assignment)
            case Implies(l, r):
                out = (not self._eval(i, l, assignment)) or self._eval(i, r, assignment)
            case Forall(v, bound, body):
                world = self.sys.worlds[i]
                out = True
                for x in _quantifier_range(world, bound, dict(assignment)):
                    if not self._eval(i, body, {**assignment, v: x}):
                        out = False
                        break
            case Exists(v, bound, body):
                world = self.sys.worlds[i]
                out = False
                for x in _quantifier_range(world, bound, dict(assignment)):
                    if self._eval(i, body, {**assignment, v: x}):
                        out = True
                        break
            case _:
                # Atoms are first-order and never reach this point.
                raise TypeError(f"not a formula: {f!r}")
        self._memo[key] = out
        return out


def eval_modal(sys, world, f, assignment=None):
    """phi at a world of the system, treating the system as the entire
    universe of worlds."""
    return sys.evaluator().eval(world, f, assignment)


# --- potentialist translation ---

def potentialist_translation(f):
    """Replace every unbounded E with dia E and every unbounded A with
    box A.  Bounded quantifiers already have a local range and are left in
    place (their bodies are still translated)."""
    match f:
        case Possibly(_) | Necessarily(_):
            raise EvalError("potentialist translation applies to first-order formulas only")
        case Not(body):
            return Not(potentialist_translation(body))
        case And(l, r):
            return And(potentialist_translation(l), potentialist_translation(r))
        case Or(l, r):
            return Or(potentialist_translation(l), potentialist_translation(r))
        case Implies(l, r):
            return Implies(potentialist_translation(l), potentialist_translation(r))
        case Forall(v, bound, body):
            inner = Forall(v, bound, potentialist_translation(body))
            return inner if bound is not None else Necessarily(inner)
        case Exists(v, bound, body):
            inner = Exists(v, bound, potentialist_translation(body))
            return inner if bound is not None else Possibly(inner)
        case _:
            return f


@dataclass
class TranslationReport:
    passed: bool
    results: list  # (formula text, limit truth, {world id: modal truth})
    violations: list
    skipped: list  # formulas containing the constant N (not rigid)


def check_translation_theorem(sys, corpus):
    """Compare limit-structure truth of each closed sentence with the truth
    of its potentialist translation at every world.  Requires a convergent
    system; sentences mentioning N are skipped (N is read de dicto per
    world, so it is not a rigid designator)."""
    from .logic import contains_constN

    if sys.limit is None:
        raise EvalError("translation theorem requires a system with a limit structure")
    if not sys.is_convergent():
        raise EvalError("translation theorem requires the convergence condition")

    results = []
    violations = []
    skipped = []
    ev = sys.evaluator()
    for psi in corpus:
        text = print_formula(psi)
        if not is_first_order(psi):
            raise EvalError(f"corpus sentence is not first-order: {text}")
        if free_variables(psi):
            raise EvalError(f"corpus sentence is not closed: {text}")
        if contains_constN(psi):
            skipped.append(text)
            continue
        limit_truth = eval_formula(sys.limit, psi, {})
        translated = potentialist_translation(psi)
        per_world = {}
        for i, wid in enumerate(sys.ids):
            t = ev.eval(i, translated)
            per_world[wid] = t
            if t != limit_truth:
                violations.append(
                    f"{text}: limit says {limit_truth}, world {wid} says {t}"
                )
        results.append((text, limit_truth, per_world))
    return TranslationReport(
        passed=not violations, results=results, violations=violations, skipped=skipped
    )


# --- frame classification ---

@dataclass
class FrameReport:
    reflexive: bool
    transitive: bool
    directed: bool
    linear: bool
    classification: str


def frame_properties(sys):
    """Decide the frame class of the accessibility relation and name the
    strongest matching modal logic."""
    access = sys.access
    n = len(access)
    reflexive = all(i in access[i] for i in range(n))
    transitive = all(access[j] <= access[i] for i in range(n) for j in access[i])
    directed = True
    linear = True
    for i in range(n):
        for v, w in itertools.combinations(access[i], 2):
            if not (access[v] & access[w]):
                directed = False
            if v not in access[w] and w not in access[v]:
                linear = False
        if not directed and not linear:
            break
    if reflexive and transitive and linear:
        classification = "linear/S4.3"
    elif reflexive and transitive and directed:
        classification = "directed/S4.2"
    elif reflexive and transitive:
        classification = "preorder/S4"
    else:
        classification = "not-a-preorder"
    return FrameReport(
        reflexive=reflexive,
        transitive=transitive,
        directed=directed,
        linear=linear,
        classification=classification,
    )


# --- schemas ---

@dataclass(frozen=True)
class ModalSchema:
    name: str
    arity: int  # number of metavariables used

    def instantiate(self, phi, psi=None):
        if self.arity == 2 and psi is None:
            raise EvalError(f"schema {self.name} needs two formulas")
        match self.name:
            case "K":
                return Implies(
                    Necessarily(Implies(phi, psi)),
                    Implies(Necessarily(phi), Necessarily(psi)),
                )
            case "T":
                return Implies(Necessarily(phi), phi)
            case "Four":
                return Implies(Necessarily(phi), Necessarily(Necessarily(phi)))
            case "Dot2":
                return Implies(Possibly(Necessarily(phi)), Necessarily(Possibly(phi)))
            case "Dot3":
                return Implies(
                    And(Possibly(phi), Possibly(psi)),
                    Or(
                        Possibly(And(phi, Possibly(psi))),
                        Possibly(And(psi, Possibly(phi))),
                    ),
                )
        raise EvalError(f"unknown schema {self.name!r}")


SCHEMAS = {
    "K": ModalSchema("K", 2),
    "T": ModalSchema("T", 1),
    "Four": ModalSchema("Four", 1),
    "Dot2": ModalSchema("Dot2", 1),
    "Dot3": ModalSchema("Dot3", 2),
}


def schema_by_name(name):
    key = {"k": "K", "t": "T", "four": "Four", "dot2": "Dot2", "dot3": "Dot3"}.get(
        name.lower()
    )
    if key is None:
        raise EvalError(f"unknown schema {name!r}; choose from {sorted(SCHEMAS)}")
    return SCHEMAS[key]


@dataclass
class SchemaCounterexample:
    world_id: str
    phi: object
    psi: object

    def describe(self):
        parts = [f"world {self.world_id}", f"phi = {print_formula(self.phi)}"]
        if self.psi is not None:
            parts.append(f"psi = {print_formula(self.psi)}")
        return "; ".join(parts)


def check_schema(sys, schema, instances):
    """Evaluate each instantiated schema at every world; return all
    failures.  Instances are (phi, psi) pairs; psi is ignored by one-variable
    schemas."""
    ev = sys.evaluator()
    out = []
    for phi, psi in instances:
        for g in (phi, psi):
            if g is not None and free_variables(g):
                raise EvalError(
                    f"schema instances must be closed: {print_formula(g)}"
                )
        inst = schema.instantiate(phi, psi if schema.arity == 2 else phi)
        for i, wid in enumerate(sys.ids):
            if not ev.eval(i, inst):
                out.append(
                    SchemaCounterexample(wid, phi, psi if schema.arity == 2 else None)
                )
    return out


# --- counterexample search ---

def _generated_formulas(max_depth=3):
    """Deterministic closed-formula pool over the constants, by depth."""
    atoms = [
        Defined(Const0()),
        Defined(Const1()),
        Lt(Const0(), Const1()),
        Eq(Const0(), Const0()),
        Eq(Const1(), Const1()),
    ]
    if max_depth <= 1:
        return list(atoms)
    level2 = atoms + [Not(a) for a in atoms]
    if max_depth <= 2:
        return level2
    out = list(level2)
    for a, b in itertools.permutations(level2, 2):
        out.append(And(a, b))
    for a, b in itertools.combinations(level2, 2):
        out.append(Or(a, b))
    return out


def search_dot3_counterexample(sys, generator_budget=5000, max_depth=3):
    """Enumerate small instance pairs and return the first (world, phi, psi)
    falsifying the Dot3 schema, or None when the budget is exhausted."""
    schema = SCHEMAS["Dot3"]
    ev = sys.evaluator()
    pool = _generated_formulas(max_depth)
    n = len(pool)
    tested = 0
    # Diagonal order: pairs with small combined index come first, so a
    # witness built from two mid-pool formulas is reached early.
    for s in range(2 * n - 1):
        for a in range(min(s + 1, n)):
            b = s - a
            if b >= n or a == b:
                continue
            if tested >= generator_budget:
                return None
            tested += 1
            phi, psi = pool[a], pool[b]
            inst = schema.instantiate(phi, psi)
            for i, wid in enumerate(sys.ids):
                if not ev.eval(i, inst):
                    return SchemaCounterexample(wid, phi, psi)
    return None
