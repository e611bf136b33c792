"""Translations between formulas and tests.

Formula to test: a must formula compiles to a test that a process must
pass exactly when it satisfies the formula, and dually for may.  The one
delicate case is conjunction on the must side: a conjunction that already
denotes the full state set (recognized syntactically by tt_shape) must
compile to immediate success rather than to a tau-choice, because a
divergent process must-fails any test that cannot succeed at once.

Test to formula: the reachable states of the test induce one equation per
state; packaging them as a simultaneous least fixpoint and eliminating it
yields a single formula in the corresponding fragment.
"""

import hashlib

from . import formulas as fm
from . import testterms as tm
from .formulas import Formula, FormulaError, SimFormula, bekic_eliminate
from .lts import OMEGA, TAU, Lts, visible
from .testterms import Test


def _sum(parts: list[Test]) -> Test:
    if not parts:
        return tm.Nil()
    out = parts[0]
    for part in parts[1:]:
        out = tm.Sum(out, part)
    return out


def _conj(parts: list[Formula]) -> Formula:
    if not parts:
        return fm.Tt()
    out = parts[0]
    for part in parts[1:]:
        out = fm.And(out, part)
    return out


def _disj(parts: list[Formula]) -> Formula:
    if not parts:
        return fm.Ff()
    out = parts[0]
    for part in parts[1:]:
        out = fm.Or(out, part)
    return out


def _require_fragment(formula, fragment: str, who: str):
    if fm.free_vars(formula):
        raise FormulaError(f"{who} expects a closed formula")
    bad = fm.fragment_offender(formula, fragment)
    if bad is not None:
        raise FormulaError(f"{who}: subformula outside the {fragment} fragment: {bad}")


def formula_to_must_test(formula: Formula) -> Test:
    """Compile a closed must formula to a test characterizing it under
    must-passing."""
    _require_fragment(formula, "must", "formula_to_must_test")

    def conv(node) -> Test:
        match node:
            case fm.Tt():
                return tm.Success()
            case fm.Ff():
                return tm.Nil()
            case fm.Acc(actions):
                return _sum([tm.Prefix(visible(a), tm.Success()) for a in sorted(actions)])
            case fm.Var(name):
                return tm.Var(name)
            case fm.Box(action, body):
                if action.kind == "tau":
                    return tm.Prefix(TAU, conv(body))
                return tm.Sum(tm.Prefix(action, conv(body)), tm.Prefix(TAU, tm.Success()))
            case fm.And(left, right):
                if fm.tt_shape(node):
                    return tm.Success()
                return tm.Sum(tm.Prefix(TAU, conv(left)), tm.Prefix(TAU, conv(right)))
            case fm.Min(var, body):
                if not fm.free_vars(body):
                    return conv(body)
                return tm.Mu(var, conv(body))
            case _:
                raise FormulaError(f"not in the must fragment: {node}")

    return conv(formula)


def formula_to_may_test(formula: Formula) -> Test:
    """Compile a closed may formula to a test characterizing it under
    may-passing."""
    _require_fragment(formula, "may", "formula_to_may_test")

    def conv(node) -> Test:
        match node:
            case fm.Tt():
                return tm.Success()
            case fm.Ff():
                return tm.Nil()
            case fm.Var(name):
                return tm.Var(name)
            case fm.Dia(action, body):
                return tm.Prefix(action, conv(body))
            case fm.Or(left, right):
                return tm.Sum(tm.Prefix(TAU, conv(left)), tm.Prefix(TAU, conv(right)))
            case fm.Min(var, body):
                return tm.Mu(var, conv(body))
            case _:
                raise FormulaError(f"not in the may fragment: {node}")

    return conv(formula)


def _state_variables(lts: Lts, terms=None) -> dict[str, str]:
    """One formula variable per test state, named from a digest of the
    canonical term (or the state name for external systems) plus the state
    name itself as a readable suffix."""
    out = {}
    for state in lts.states:
        basis = str(terms[state]) if terms else state
        digest = hashlib.sha1(basis.encode()).hexdigest()[:6]
        out[state] = f"X_{digest}_{state}"
    return out


def _grouped(lts: Lts, state: str):
    omega = []
    taus = []
    vis = []
    for _, action, dst in lts.outgoing(state):
        if action == OMEGA:
            omega.append(dst)
        elif action == TAU:
            taus.append(dst)
        else:
            vis.append((action, dst))
    return omega, taus, vis


def test_lts_to_must_system(lts: Lts, root: str, terms=None) -> SimFormula:
    """The simultaneous system of must equations for a test system.

    Per state: success now gives tt; no moves gives ff; a stable state
    gives boxes over its visible moves plus acceptance of their actions;
    an unstable state gives boxes over all its tau and visible moves.
    """
    var_of = _state_variables(lts, terms)
    bodies = []
    for state in lts.states:
        omega, taus, vis = _grouped(lts, state)
        if omega:
            bodies.append(fm.Tt())
        elif not taus and not vis:
            bodies.append(fm.Ff())
        elif not taus:
            parts: list[Formula] = [fm.Box(a, fm.Var(var_of[d])) for a, d in vis]
            parts.append(fm.Acc(frozenset(a.name for a, _ in vis)))
            bodies.append(_conj(parts))
        else:
            parts = [fm.Box(TAU, fm.Var(var_of[d])) for d in taus]
            parts.extend(fm.Box(a, fm.Var(var_of[d])) for a, d in vis)
            bodies.append(_conj(parts))
    return SimFormula(
        tuple(var_of[s] for s in lts.states),
        tuple(bodies),
        lts.state_index(root),
    )


def test_lts_to_may_system(lts: Lts, root: str, terms=None) -> SimFormula:
    """The simultaneous system of may equations for a test system: success
    gives tt, deadlock gives ff, anything else the disjunction of diamonds
    over all moves."""
    var_of = _state_variables(lts, terms)
    bodies = []
    for state in lts.states:
        omega, taus, vis = _grouped(lts, state)
        if omega:
            bodies.append(fm.Tt())
        elif not taus and not vis:
            bodies.append(fm.Ff())
        else:
            parts: list[Formula] = [fm.Dia(TAU, fm.Var(var_of[d])) for d in taus]
            parts.extend(fm.Dia(a, fm.Var(var_of[d])) for a, d in vis)
            bodies.append(_disj(parts))
    return SimFormula(
        tuple(var_of[s] for s in lts.states),
        tuple(bodies),
        lts.state_index(root),
    )


def test_lts_to_must_formula(lts: Lts, root: str) -> Formula:
    return bekic_eliminate(test_lts_to_must_system(lts, root))


def test_lts_to_may_formula(lts: Lts, root: str) -> Formula:
    return bekic_eliminate(test_lts_to_may_system(lts, root))


def test_to_must_formula(test: Test) -> Formula:
    """Formula satisfied exactly by the processes that must pass the test."""
    lts, root, terms = tm.explore(test)
    return bekic_eliminate(test_lts_to_must_system(lts, root, terms))


def test_to_may_formula(test: Test) -> Formula:
    """Formula satisfied exactly by the processes that may pass the test."""
    lts, root, terms = tm.explore(test)
    return bekic_eliminate(test_lts_to_may_system(lts, root, terms))
