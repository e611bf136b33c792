import pytest

from rechml import formulas as fm
from rechml import testterms as tm
from rechml.formulas import FormulaError, bekic_eliminate
from rechml.lts import TAU, visible
from rechml.semantics import interpret_states
from rechml.testterms import reachable_lts
from rechml.translate import formula_to_may_test, formula_to_must_test
from rechml.translate import test_lts_to_may_system as lts_to_may_system
from rechml.translate import test_lts_to_must_system as lts_to_must_system
from rechml.translate import test_to_may_formula as to_may_formula
from rechml.translate import test_to_must_formula as to_must_formula

A = visible("a")
B = visible("b")

W = tm.Success()


def test_must_compiler_frozen():
    assert formula_to_must_test(fm.Tt()) == W
    assert formula_to_must_test(fm.Ff()) == tm.Nil()
    assert formula_to_must_test(fm.Acc(set())) == tm.Nil()
    assert formula_to_must_test(fm.Acc({"b", "a"})) == \
        tm.Sum(tm.Prefix(A, W), tm.Prefix(B, W))
    assert formula_to_must_test(fm.Box(TAU, fm.Ff())) == tm.Prefix(TAU, tm.Nil())
    # refusing the action must remain a way to pass
    assert formula_to_must_test(fm.Box(A, fm.Ff())) == \
        tm.Sum(tm.Prefix(A, tm.Nil()), tm.Prefix(TAU, W))


def test_must_conjunction_of_truths_succeeds_immediately():
    # tau.w.0 + tau.w.0 would strand divergent processes; the compiler must
    # notice the conjunction cannot fail
    phi = fm.And(fm.Tt(), fm.Min("X", fm.Tt()))
    assert formula_to_must_test(phi) == W
    mixed = fm.And(fm.Tt(), fm.Box(A, fm.Tt()))
    assert mixed and formula_to_must_test(mixed) == tm.Sum(
        tm.Prefix(TAU, W),
        tm.Prefix(TAU, tm.Sum(tm.Prefix(A, W), tm.Prefix(TAU, W))),
    )


def test_must_min_unwraps_when_body_is_closed():
    phi = fm.Min("X", fm.Box(TAU, fm.Tt()))
    assert formula_to_must_test(phi) == tm.Prefix(TAU, W)
    looping = fm.Min("X", fm.Box(A, fm.Var("X")))
    assert formula_to_must_test(looping) == tm.Mu(
        "X", tm.Sum(tm.Prefix(A, tm.Var("X")), tm.Prefix(TAU, W)))


def test_may_compiler_frozen():
    assert formula_to_may_test(fm.Tt()) == W
    assert formula_to_may_test(fm.Ff()) == tm.Nil()
    assert formula_to_may_test(fm.Dia(A, fm.Tt())) == tm.Prefix(A, W)
    assert formula_to_may_test(fm.Or(fm.Tt(), fm.Ff())) == \
        tm.Sum(tm.Prefix(TAU, W), tm.Prefix(TAU, tm.Nil()))
    # min compiles to recursion even with a closed body
    phi = fm.Min("X", fm.Tt())
    assert formula_to_may_test(phi) == tm.Mu("X", W)


def test_compilers_reject_wrong_fragment_and_open_formulas():
    with pytest.raises(FormulaError):
        formula_to_must_test(fm.Or(fm.Tt(), fm.Tt()))
    with pytest.raises(FormulaError):
        formula_to_may_test(fm.Box(A, fm.Tt()))
    with pytest.raises(FormulaError):
        formula_to_may_test(fm.Max("X", fm.Var("X")))
    with pytest.raises(FormulaError):
        formula_to_must_test(fm.Box(A, fm.Var("X")))


def test_must_system_equations_frozen():
    # a.w.0: one stable state with a single visible move, then success
    t = tm.Prefix(A, W)
    lts, root, terms = tm.explore(t)
    sim = lts_to_must_system(lts, root, terms)
    assert sim.index == 0
    x0, x1, x2 = sim.variables
    assert sim.bodies[0] == fm.And(fm.Box(A, fm.Var(x1)), fm.Acc({"a"}))
    assert sim.bodies[1] == fm.Tt()
    assert sim.bodies[2] == fm.Ff()


def test_must_system_unstable_state():
    t = tm.Sum(tm.Prefix(A, W), tm.Prefix(TAU, tm.Nil()))
    lts, root, terms = tm.explore(t)
    sim = lts_to_must_system(lts, root, terms)
    body = sim.bodies[lts.state_index(root)]
    # an unstable state contributes boxes for every move and no Acc
    boxes = []
    cursor = body
    while isinstance(cursor, fm.And):
        boxes.append(cursor.left)
        cursor = cursor.right
    boxes.append(cursor)
    kinds = sorted(b.action.kind for b in boxes)
    assert kinds == ["tau", "visible"]
    assert not any(isinstance(b, fm.Acc) for b in boxes)


def test_may_system_equations_frozen():
    t = tm.Sum(tm.Prefix(A, W), tm.Prefix(TAU, tm.Nil()))
    lts, root, terms = tm.explore(t)
    sim = lts_to_may_system(lts, root, terms)
    body = sim.bodies[lts.state_index(root)]
    assert isinstance(body, fm.Or)
    produced = to_may_formula(t)
    assert fm.is_mayhml(produced)


def test_variable_names_are_stable():
    t = tm.Prefix(A, W)
    lts, root, terms = tm.explore(t)
    once = lts_to_must_system(lts, root, terms).variables
    again = lts_to_must_system(lts, root, terms).variables
    assert once == again
    assert all(v.startswith("X_") for v in once)


def test_round_trip_formula_test_formula_semantics():
    from rechml.generators import TrialConfig, generate_formula, generate_lts, spawn_rng

    cfg = TrialConfig(max_states=6, max_formula_depth=4)
    for trial in range(25):
        rng = spawn_rng(31, "round_trip", trial)
        lts = generate_lts(cfg, rng)
        phi = generate_formula(cfg, rng, "must")
        back = to_must_formula(formula_to_must_test(phi))
        assert fm.is_musthml(back)
        assert interpret_states(lts, phi) == interpret_states(lts, back)


def test_round_trip_may_semantics():
    from rechml.generators import TrialConfig, generate_formula, generate_lts, spawn_rng

    cfg = TrialConfig(max_states=6, max_formula_depth=4)
    for trial in range(25):
        rng = spawn_rng(37, "round_trip_may", trial)
        lts = generate_lts(cfg, rng)
        phi = generate_formula(cfg, rng, "may")
        back = to_may_formula(formula_to_may_test(phi))
        assert fm.is_mayhml(back)
        assert interpret_states(lts, phi) == interpret_states(lts, back)
