"""Parser, printer, and first-order evaluation of the formula language."""
import pytest

from finarith.core import make_subset_world, make_truncation
from finarith.errors import EvalError, ParseError, WrongEvaluatorError
from finarith.logic import (
    And, Const0, Const1, ConstN, Defined, Eq, Exists, Forall, Implies, Lt,
    Necessarily, Not, Or, PlusAtom, Possibly, Prod, Succ, Sum, TimesAtom, Var,
    eval_formula, eval_term, free_variables, induction_instance, is_delta0,
    is_first_order, parse_formula, parse_term, print_formula, print_term,
    substitute,
)


class TestParser:
    def test_successor_sentence(self):
        f = parse_formula("A a. E b. b = a + 1")
        assert f == Forall("a", None, Exists("b", None, Eq(Var("b"), Sum(Var("a"), Const1()))))

    def test_modal_sentence(self):
        f = parse_formula("box A a. dia E b. b = a + 1")
        assert isinstance(f, Necessarily)
        assert isinstance(f.body, Forall)
        assert isinstance(f.body.body, Possibly)

    def test_bounded_quantifier(self):
        f = parse_formula("E x < y. x * x = y")
        assert f == Exists("x", Var("y"), Eq(Prod(Var("x"), Var("x")), Var("y")))

    def test_precedence_product_over_sum(self):
        assert parse_term("a + b * c") == Sum(Var("a"), Prod(Var("b"), Var("c")))
        assert parse_term("(a + b) * c") == Prod(Sum(Var("a"), Var("b")), Var("c"))

    def test_connective_precedence(self):
        f = parse_formula("x = 0 | y = 0 & z = 0 -> w = 0")
        assert isinstance(f, Implies)
        assert isinstance(f.left, Or)
        assert isinstance(f.left.right, And)

    def test_implies_right_associative(self):
        f = parse_formula("x = 0 -> y = 0 -> z = 0")
        assert isinstance(f, Implies)
        assert isinstance(f.right, Implies)

    def test_quantifier_scope_maximal(self):
        f = parse_formula("A x. x = 0 | x = 1")
        assert isinstance(f, Forall)
        assert isinstance(f.body, Or)

    def test_graph_atoms(self):
        f = parse_formula("Plus(x, y, z) & Times(x, 1, x)")
        assert f.left == PlusAtom(Var("x"), Var("y"), Var("z"))
        assert f.right == TimesAtom(Var("x"), Const1(), Var("x"))

    def test_parenthesized_term_opening_atom(self):
        f = parse_formula("(x + y) * z = w")
        assert f == Eq(Prod(Sum(Var("x"), Var("y")), Var("z")), Var("w"))

    def test_succ_and_constants(self):
        assert parse_term("S(S(0))") == Succ(Succ(Const0()))
        assert parse_term("N") == ConstN()

    @pytest.mark.parametrize("bad", [
        "A . x = 0",
        "x =",
        "(x = 0",
        "Def(x",
        "Plus(x, y)",
        "x ? y",
        "dia",
        "E box. box = 0",
    ])
    def test_syntax_errors(self, bad):
        with pytest.raises(ParseError):
            parse_formula(bad)

    def test_trailing_input_rejected(self):
        with pytest.raises(ParseError):
            parse_formula("x = 0 )")

    def test_error_position(self):
        with pytest.raises(ParseError) as exc:
            parse_formula("x = $")
        assert exc.value.position is not None


class TestPrinter:
    @pytest.mark.parametrize("text", [
        "A a. E b. b = a + 1",
        "box A a. dia E b. b = a + 1",
        "E x < y. x * x = y",
        "x + y * z = w",
        "(x + y) * z = w",
        "!(x = y)",
        "!Def(x + x)",
        "x = 0 & y = 0 | z = 0",
        "x = 0 -> y = 0 -> z = 0",
        "Plus(x, y, z)",
        "Times(S(0), 1 + 1, x)",
        "A x < N. (x = 0 | 0 < x)",
        "dia (Def(1) & !Def(0))",
        "(x = 0 | y = 0) & z = 0",
    ])
    def test_round_trip_is_identity_on_asts(self, text):
        f = parse_formula(text)
        assert parse_formula(print_formula(f)) == f

    def test_canonical_text_stable(self):
        # print o parse o print is the identity on printed text.
        f = parse_formula("box A a. dia E b. b = a+1")
        once = print_formula(f)
        assert print_formula(parse_formula(once)) == once

    def test_term_printing(self):
        assert print_term(parse_term("a + b * c")) == "a + b * c"
        assert print_term(parse_term("(a + b) * c")) == "(a + b) * c"


class TestClassification:
    def test_delta0(self):
        assert is_delta0(parse_formula("A x < y. x + 0 = x"))
        assert not is_delta0(parse_formula("A x. E y. y = x + 1"))
        assert not is_delta0(parse_formula("box A a. dia E b. b = a + 1"))

    def test_first_order(self):
        assert is_first_order(parse_formula("A x. x = x"))
        assert not is_first_order(parse_formula("dia Def(0)"))

    def test_free_variables(self):
        f = parse_formula("A x < y. Plus(x, z, w)")
        assert free_variables(f) == {"y", "z", "w"}


class TestEvalTerm:
    def test_sum_chain(self):
        m = make_truncation(10)
        assert eval_term(m, parse_term("1 + 1 + 1"), {}) == 3

    def test_undefined_constant_poisons(self):
        w = make_subset_world({3})
        assert eval_term(w, parse_term("1 + 1 + 1"), {}) is None

    def test_succ_of_largest(self):
        m = make_truncation(10)
        assert eval_term(m, parse_term("N + 1"), {}) is None
        assert eval_term(m, parse_term("N"), {}) == 10

    def test_unassigned_variable(self):
        with pytest.raises(EvalError):
            eval_term(make_truncation(3), parse_term("x"), {})


class TestEvalFormula:
    def test_successor_sentence_false_in_truncation(self):
        m = make_truncation(10)
        assert not eval_formula(m, parse_formula("A a. E b. b = a + 1"), {})

    def test_square_witness(self):
        m = make_truncation(10)
        assert eval_formula(m, parse_formula("E a. (a * a = 1 + 1 + 1 + 1 + 1 + 1 + 1 + 1 + 1 & 1 + 1 < a)"), {})

    def test_negative_semantics_for_definedness(self):
        w = make_subset_world({0})
        assert not eval_formula(w, parse_formula("Def(1)"), {})
        assert eval_formula(w, parse_formula("!Def(1)"), {})

    def test_atoms_with_undefined_terms_are_false(self):
        m = make_truncation(10)
        assert not eval_formula(m, parse_formula("N + 1 = N + 1"), {})
        assert not eval_formula(m, parse_formula("N < N + 1"), {})

    def test_bounded_quantifier(self):
        m = make_truncation(10)
        assert eval_formula(m, parse_formula("A x < N. Def(x + 1)"), {})
        assert not eval_formula(m, parse_formula("E x < 0. x = x"), {})

    def test_undefined_bound_gives_vacuous_range(self):
        m = make_truncation(10)
        assert eval_formula(m, parse_formula("A x < N + 1. !(x = x)"), {})
        assert not eval_formula(m, parse_formula("E x < N + 1. x = x"), {})

    def test_graph_atom(self):
        m = make_truncation(10)
        assert eval_formula(m, parse_formula("Plus(1, 1, 1 + 1)"), {})
        assert not eval_formula(m, parse_formula("Times(N, N, N)"), {})

    def test_shadowed_variable_restored(self):
        m = make_truncation(3)
        f = parse_formula("E x. (x = 1 & E x. x = 0 & x = 1)")
        # The inner quantifier rebinds x; the trailing conjunct sees the
        # inner binding, so the sentence is false, and evaluation must not
        # corrupt the outer binding along the way.
        assert not eval_formula(m, f, {})
        g = parse_formula("E x. (E y. y = x + 1 & x = 0)")
        assert eval_formula(m, g, {})

    def test_modal_rejected(self):
        with pytest.raises(WrongEvaluatorError):
            eval_formula(make_truncation(3), parse_formula("dia Def(0)"), {})


class TestSubstitutionAndInduction:
    def test_substitute_simple(self):
        f = parse_formula("x = y")
        assert substitute(f, "x", Const0()) == parse_formula("0 = y")

    def test_substitute_capture_avoiding(self):
        f = parse_formula("E y. y = x + 1")
        g = substitute(f, "x", Var("y"))
        # The bound y must be renamed so the substituted y stays free.
        assert isinstance(g, Exists)
        assert g.var != "y"
        assert "y" in free_variables(g)

    def test_induction_instance_tautology(self):
        m = make_truncation(10)
        inst = induction_instance(parse_formula("x = x"), "x")
        assert eval_formula(m, inst, {})

    def test_induction_instance_failure_shape(self):
        # Def(x + x) holds at 0, the step fails at 5 in the truncation at
        # 10, so the instance antecedent is false and the instance is true;
        # the conclusion alone is false.
        m = make_truncation(10)
        phi = parse_formula("Def(x + x)")
        inst = induction_instance(phi, "x")
        assert not eval_formula(m, Forall("x", None, phi), {})
        antecedent = inst.left
        assert not eval_formula(m, antecedent, {})

    def test_induction_instance_largest_disjunct(self):
        m = make_truncation(5)
        inst = induction_instance(parse_formula("x < N | x = N"), "x")
        assert eval_formula(m, inst, {})

    def test_var_must_be_free(self):
        with pytest.raises(EvalError):
            induction_instance(parse_formula("y = y"), "x")
