"""Syntax of recursive Hennessy-Milner logic.

Formula nodes are frozen dataclasses compared structurally.  Functions here
are purely syntactic: free variables, capture-avoiding substitution,
canonical renaming of bound variables, fragment membership, finite
approximants and elimination of simultaneous fixpoints.  Interpretation
over an Lts lives in rechml.semantics.

Large formulas produced by substitution share subterm objects, so the
traversals below memoize on object identity to stay linear in the size of
the shared graph rather than the unfolded tree.
"""

from dataclasses import dataclass

from .lts import Action


class FormulaError(Exception):
    """Raised for open formulas, fragment violations and bad indices."""


class Formula:
    __slots__ = ()

    def __str__(self):
        from .textio import format_formula

        return format_formula(self)


@dataclass(frozen=True)
class Tt(Formula):
    pass


@dataclass(frozen=True)
class Ff(Formula):
    pass


@dataclass(frozen=True)
class Var(Formula):
    name: str


@dataclass(frozen=True)
class Acc(Formula):
    """Acceptance: convergent, and every stable tau-derivative can perform
    one of the given visible actions (weakly)."""

    actions: frozenset[str]

    def __post_init__(self):
        object.__setattr__(self, "actions", frozenset(self.actions))
        for a in self.actions:
            if not isinstance(a, str) or not a or a in ("tau", "omega"):
                raise FormulaError(f"bad action name in Acc: {a!r}")


@dataclass(frozen=True)
class Or(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class And(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Dia(Formula):
    action: Action
    body: Formula

    def __post_init__(self):
        if self.action.kind == "omega":
            raise FormulaError("omega cannot appear in a modality")


@dataclass(frozen=True)
class Box(Formula):
    action: Action
    body: Formula

    def __post_init__(self):
        if self.action.kind == "omega":
            raise FormulaError("omega cannot appear in a modality")


@dataclass(frozen=True)
class Min(Formula):
    var: str
    body: Formula


@dataclass(frozen=True)
class Max(Formula):
    var: str
    body: Formula


@dataclass(frozen=True)
class SimFormula:
    """A simultaneous least fixpoint: variables, one body per variable and
    the projected component (0-based)."""

    variables: tuple[str, ...]
    bodies: tuple[Formula, ...]
    index: int

    def __post_init__(self):
        object.__setattr__(self, "variables", tuple(self.variables))
        object.__setattr__(self, "bodies", tuple(self.bodies))
        if len(self.variables) != len(self.bodies):
            raise FormulaError("variable/body count mismatch")
        if not self.variables:
            raise FormulaError("empty simultaneous formula")
        if len(set(self.variables)) != len(self.variables):
            raise FormulaError("duplicate variables in simultaneous formula")
        if not 0 <= self.index < len(self.variables):
            raise FormulaError(f"projection index {self.index} out of range")


def _children(formula):
    match formula:
        case Or(l, r) | And(l, r):
            return (l, r)
        case Dia(_, b) | Box(_, b) | Min(_, b) | Max(_, b):
            return (b,)
        case _:
            return ()


def free_var_map(formula) -> dict[int, frozenset[str]]:
    """Free variables of every subterm, keyed by object identity.

    Valid only while the formula object is alive; callers use it to make
    traversals over shared structure linear.
    """
    memo: dict[int, frozenset[str]] = {}

    def walk(node):
        got = memo.get(id(node))
        if got is not None:
            return got
        match node:
            case Var(name):
                out = frozenset((name,))
            case Min(x, b) | Max(x, b):
                out = walk(b) - {x}
            case _:
                out = frozenset()
                for child in _children(node):
                    out |= walk(child)
        memo[id(node)] = out
        return out

    walk(formula)
    return memo


def free_vars(formula) -> frozenset[str]:
    return free_var_map(formula)[id(formula)]


def fresh_name(base: str, avoid) -> str:
    """First name of the shape base, base1, base2, ... not in avoid."""
    if base not in avoid:
        return base
    k = 1
    while f"{base}{k}" in avoid:
        k += 1
    return f"{base}{k}"


def _substitute_many(formula, mapping: dict[str, Formula]) -> Formula:
    fmap = free_var_map(formula)
    memo: dict[tuple, Formula] = {}

    def node_free(node):
        fv = fmap.get(id(node))
        if fv is None:
            fv = free_vars(node)
            fmap[id(node)] = fv
        return fv

    def sub(node, mapping):
        fv = node_free(node)
        live = {v: r for v, r in mapping.items() if v in fv}
        if not live:
            return node
        key = (id(node), tuple(sorted((v, id(r)) for v, r in live.items())))
        got = memo.get(key)
        if got is not None:
            return got
        match node:
            case Var(name):
                out = live.get(name, node)
            case Or(l, r):
                out = Or(sub(l, live), sub(r, live))
            case And(l, r):
                out = And(sub(l, live), sub(r, live))
            case Dia(a, b):
                out = Dia(a, sub(b, live))
            case Box(a, b):
                out = Box(a, sub(b, live))
            case Min(x, b) | Max(x, b):
                binder = type(node)
                inner = {v: r for v, r in live.items() if v != x}
                if not inner:
                    out = node
                else:
                    incoming = frozenset()
                    for r in inner.values():
                        incoming |= node_free(r)
                    if x in incoming:
                        x2 = fresh_name(x, set(fv) | incoming | {x})
                        inner = dict(inner)
                        inner[x] = Var(x2)
                        out = binder(x2, sub(b, inner))
                    else:
                        out = binder(x, sub(b, inner))
            case _:
                out = node
        memo[key] = out
        return out

    return sub(formula, dict(mapping))


def substitute(formula, var: str, replacement) -> Formula:
    """Capture-avoiding substitution of replacement for free occurrences of
    var.  Bound variables are renamed (with a numeric suffix) only when a
    free variable of the replacement would otherwise be captured."""
    return _substitute_many(formula, {var: replacement})


def canonical(formula) -> Formula:
    """Rename bound variables to V0, V1, ... in traversal order; two
    formulas are alpha-equivalent exactly when their canonical forms are
    structurally equal."""
    counter = [0]

    def walk(node, env):
        match node:
            case Var(name):
                return Var(env.get(name, name))
            case Or(l, r):
                return Or(walk(l, env), walk(r, env))
            case And(l, r):
                return And(walk(l, env), walk(r, env))
            case Dia(a, b):
                return Dia(a, walk(b, env))
            case Box(a, b):
                return Box(a, walk(b, env))
            case Min(x, b) | Max(x, b):
                name = f"V{counter[0]}"
                counter[0] += 1
                env2 = dict(env)
                env2[x] = name
                return type(node)(name, walk(b, env2))
            case _:
                return node

    return walk(formula, {})


def _shape_ok(formula, allowed) -> bool:
    memo: dict[int, bool] = {}

    def walk(node):
        got = memo.get(id(node))
        if got is not None:
            return got
        out = isinstance(node, allowed) and all(walk(c) for c in _children(node))
        memo[id(node)] = out
        return out

    return walk(formula)


_MAY_NODES = (Tt, Ff, Var, Dia, Or, Min)
_MUST_NODES = (Tt, Ff, Var, Acc, Box, And, Min)


def _require_closed(formula, what):
    fv = free_vars(formula)
    if fv:
        names = ", ".join(sorted(fv))
        raise FormulaError(f"{what} expects a closed formula; free: {names}")


def is_mayhml(formula) -> bool:
    """Membership in the may fragment: tt, ff, variables, diamonds,
    disjunction and least fixpoints.  The formula must be closed."""
    _require_closed(formula, "is_mayhml")
    return _shape_ok(formula, _MAY_NODES)


def is_musthml(formula) -> bool:
    """Membership in the must fragment: tt, ff, Acc, variables, boxes,
    conjunction and least fixpoints.  The formula must be closed."""
    _require_closed(formula, "is_musthml")
    return _shape_ok(formula, _MUST_NODES)


def fragment_offender(formula, fragment: str):
    """First subterm (preorder) outside the given fragment, or None."""
    allowed = _MAY_NODES if fragment == "may" else _MUST_NODES

    def walk(node):
        if not isinstance(node, allowed):
            return node
        for child in _children(node):
            bad = walk(child)
            if bad is not None:
                return bad
        return None

    return walk(formula)


def is_tt_grammar(formula) -> bool:
    """True for formulas built only from tt, conjunction and min binders.

    Such formulas denote the full state set on every system; within the
    closed must fragment the converse holds as well, which is what the
    translation to tests relies on.  Input must be in the must fragment.
    """
    if not is_musthml(formula):
        raise FormulaError("is_tt_grammar expects a formula in the must fragment")
    return _shape_ok(formula, (Tt, And, Min))


def tt_shape(formula) -> bool:
    """Shape test behind is_tt_grammar, usable on open subterms during
    translation (a formula of this shape is necessarily closed)."""
    return _shape_ok(formula, (Tt, And, Min))


def nesting_depth(formula) -> int:
    """Maximum number of nested fixpoint binders."""
    memo: dict[int, int] = {}

    def walk(node):
        got = memo.get(id(node))
        if got is not None:
            return got
        kids = [walk(c) for c in _children(node)]
        out = max(kids, default=0)
        if isinstance(node, (Min, Max)):
            out += 1
        memo[id(node)] = out
        return out

    return walk(formula)


def approximant(formula, k: int) -> Formula:
    """The k-th finite approximant of a closed must formula.

    Level 0 is ff; tt, ff and Acc are their own approximants at every
    positive level; boxes and conjunctions approximate componentwise at the
    same level; a least fixpoint unfolds once and drops one level.  The
    result contains no binders.
    """
    if k < 0:
        raise FormulaError("approximant level must be nonnegative")
    if not is_musthml(formula):
        raise FormulaError("approximant is defined on the closed must fragment")
    memo: dict[tuple[int, int], Formula] = {}

    def appr(node, k):
        if k == 0:
            return Ff()
        key = (id(node), k)
        got = memo.get(key)
        if got is not None:
            return got
        match node:
            case Tt() | Ff() | Acc():
                out = node
            case Box(a, b):
                out = Box(a, appr(b, k))
            case And(l, r):
                out = And(appr(l, k), appr(r, k))
            case Min(x, b):
                out = appr(substitute(b, x, node), k - 1)
            case _:
                raise FormulaError(f"approximant hit unexpected node {node!r}")
        memo[key] = out
        return out

    return appr(formula, k)


def sim_free_vars(sim: SimFormula) -> frozenset[str]:
    out = frozenset()
    for body in sim.bodies:
        out |= free_vars(body)
    return out - set(sim.variables)


def bekic_eliminate(sim: SimFormula) -> Formula:
    """Collapse a simultaneous least fixpoint to a single-variable formula.

    The projected variable is moved to the front, then the remaining
    variables are eliminated last-first: close the final equation with its
    own min binder and substitute it into every earlier body.  The result
    is semantically the requested projection.
    """
    leftover = sim_free_vars(sim)
    if leftover:
        names = ", ".join(sorted(leftover))
        raise FormulaError(f"open simultaneous formula; free: {names}")
    variables = list(sim.variables)
    bodies = list(sim.bodies)
    variables.insert(0, variables.pop(sim.index))
    bodies.insert(0, bodies.pop(sim.index))
    while len(variables) > 1:
        x = variables.pop()
        closed = Min(x, bodies.pop())
        bodies = [substitute(b, x, closed) for b in bodies]
    return Min(variables[0], bodies[0])
