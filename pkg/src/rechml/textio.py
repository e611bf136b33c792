"""Text formats: LTS files, formula syntax, test syntax.

LTS files are line based: `lts <name>`, `init <state>`, `state <name>`,
`<src> <label> <dst>`, with `#` comments.  Labels are tau, omega, or a
lowercase-initial identifier.

Formulas: tt, ff, Acc{a,b}, <a>phi, [tau]phi, phi \\/ phi, phi /\\ phi,
min X. phi, max X. phi.  Disjunction binds loosest, then conjunction, then
modalities; a binder's body extends as far right as possible.

Tests: 0, w.0, a.t, tau.t, t + t, mu X. t.  Prefixing binds tighter than
sum; a recursion's body extends as far right as possible.

Both pretty-printers emit text the corresponding parser reads back to an
equal term.
"""

import re

from . import formulas as fm
from . import testterms as tm
from .lts import OMEGA, TAU, Action, Lts, LtsError, visible


class ParseError(Exception):
    pass


_WORD = re.compile(r"[A-Za-z_][A-Za-z0-9_]*|0")
_STATE_NAME = re.compile(r"[A-Za-z_][A-Za-z0-9_]*$")
_VISIBLE = re.compile(r"[a-z][a-zA-Z0-9_]*$")


def _scan(text: str, symbols) -> list[str]:
    tokens = []
    i = 0
    n = len(text)
    while i < n:
        c = text[i]
        if c.isspace():
            i += 1
            continue
        for sym in symbols:
            if text.startswith(sym, i):
                tokens.append(sym)
                i += len(sym)
                break
        else:
            m = _WORD.match(text, i)
            if not m:
                raise ParseError(f"unexpected character {c!r} at offset {i}")
            tokens.append(m.group())
            i = m.end()
    return tokens


class _Tokens:
    def __init__(self, tokens):
        self.tokens = tokens
        self.at = 0

    def peek(self):
        return self.tokens[self.at] if self.at < len(self.tokens) else None

    def take(self, expected=None):
        tok = self.peek()
        if tok is None:
            raise ParseError(f"unexpected end of input (wanted {expected or 'more'})")
        if expected is not None and tok != expected:
            raise ParseError(f"expected {expected!r}, found {tok!r}")
        self.at += 1
        return tok

    def done(self):
        if self.at < len(self.tokens):
            raise ParseError(f"trailing input from {self.tokens[self.at]!r}")


# -- formulas ---------------------------------------------------------------

_FORMULA_SYMBOLS = ("\\/", "/\\", "<", ">", "[", "]", "{", "}", "(", ")", ".", ",")
_FORMULA_KEYWORDS = {"tt", "ff", "min", "max", "Acc", "tau"}


def _action_token(tok, allow_tau=True) -> Action:
    if tok == "tau":
        if not allow_tau:
            raise ParseError("tau not allowed here")
        return TAU
    if tok is None or not _VISIBLE.match(tok) or tok in ("tt", "ff", "min", "max", "mu", "w", "omega"):
        raise ParseError(f"bad action name {tok!r}")
    return visible(tok)


def _var_token(tok) -> str:
    if tok is None or not tok[0].isupper() or not _STATE_NAME.match(tok) or tok == "Acc":
        raise ParseError(f"bad variable name {tok!r}")
    return tok


def parse_formula(text: str):
    ts = _Tokens(_scan(text, _FORMULA_SYMBOLS))

    def p_or():
        left = p_and()
        while ts.peek() == "\\/":
            ts.take()
            left = fm.Or(left, p_and())
        return left

    def p_and():
        left = p_unary()
        while ts.peek() == "/\\":
            ts.take()
            left = fm.And(left, p_unary())
        return left

    def p_unary():
        tok = ts.peek()
        if tok == "<":
            ts.take()
            action = _action_token(ts.take())
            ts.take(">")
            return fm.Dia(action, p_unary())
        if tok == "[":
            ts.take()
            action = _action_token(ts.take())
            ts.take("]")
            return fm.Box(action, p_unary())
        if tok in ("min", "max"):
            ts.take()
            var = _var_token(ts.take())
            ts.take(".")
            body = p_or()
            return fm.Min(var, body) if tok == "min" else fm.Max(var, body)
        return p_atom()

    def p_atom():
        tok = ts.take()
        if tok == "tt":
            return fm.Tt()
        if tok == "ff":
            return fm.Ff()
        if tok == "Acc":
            ts.take("{")
            names = []
            if ts.peek() != "}":
                names.append(_action_token(ts.take(), allow_tau=False).name)
                while ts.peek() == ",":
                    ts.take()
                    names.append(_action_token(ts.take(), allow_tau=False).name)
            ts.take("}")
            return fm.Acc(frozenset(names))
        if tok == "(":
            out = p_or()
            ts.take(")")
            return out
        if tok[0].isupper():
            return fm.Var(_var_token(tok))
        raise ParseError(f"unexpected token {tok!r}")

    out = p_or()
    ts.done()
    return out


def format_formula(formula) -> str:
    # precedence levels: 0 disjunction, 1 conjunction, 2 modalities, 3 atoms.
    # A binder's body runs to the end of the enclosing expression, so a
    # binder prints bare only in tail position.
    def go(node, level, tail):
        match node:
            case fm.Tt():
                return "tt"
            case fm.Ff():
                return "ff"
            case fm.Var(name):
                return name
            case fm.Acc(actions):
                return "Acc{" + ",".join(sorted(actions)) + "}"
            case fm.Or(l, r):
                text = f"{go(l, 0, False)} \\/ {go(r, 1, tail)}"
                return f"({text})" if level > 0 else text
            case fm.And(l, r):
                text = f"{go(l, 1, False)} /\\ {go(r, 2, tail)}"
                return f"({text})" if level > 1 else text
            case fm.Dia(a, b):
                return f"<{a}>{go(b, 2, tail)}"
            case fm.Box(a, b):
                return f"[{a}]{go(b, 2, tail)}"
            case fm.Min(x, b) | fm.Max(x, b):
                word = "min" if isinstance(node, fm.Min) else "max"
                text = f"{word} {x}. {go(b, 0, True)}"
                return text if tail else f"({text})"
            case _:
                raise ValueError(f"cannot format {node!r}")

    return go(formula, 0, True)


# -- tests ------------------------------------------------------------------

_TEST_SYMBOLS = ("+", ".", "(", ")")


def parse_test(text: str):
    ts = _Tokens(_scan(text, _TEST_SYMBOLS))

    def p_sum():
        left = p_item()
        while ts.peek() == "+":
            ts.take()
            left = tm.Sum(left, p_item())
        return left

    def p_item():
        if ts.peek() == "mu":
            ts.take()
            var = _var_token(ts.take())
            ts.take(".")
            return tm.Mu(var, p_sum())
        return p_prefix()

    def p_prefix():
        tok = ts.take()
        if tok == "0":
            return tm.Nil()
        if tok == "w":
            ts.take(".")
            ts.take("0")
            return tm.Success()
        if tok == "(":
            out = p_sum()
            ts.take(")")
            return out
        if tok[0].isupper():
            return tm.Var(_var_token(tok))
        action = _action_token(tok)
        ts.take(".")
        return tm.Prefix(action, p_item())

    out = p_sum()
    ts.done()
    return out


def format_test(term) -> str:
    # precedence levels: 0 sum, 1 prefix, 2 atoms; mu prints bare only in
    # tail position, like the formula binders.
    def go(node, level, tail):
        match node:
            case tm.Nil():
                return "0"
            case tm.Success():
                return "w.0"
            case tm.Var(name):
                return name
            case tm.Prefix(action, body):
                text = f"{action}.{go(body, 1, tail)}"
                return f"({text})" if level > 1 else text
            case tm.Sum(l, r):
                text = f"{go(l, 0, False)} + {go(r, 1, tail)}"
                return f"({text})" if level > 0 else text
            case tm.Mu(x, b):
                text = f"mu {x}. {go(b, 0, True)}"
                return text if tail else f"({text})"
            case _:
                raise ValueError(f"cannot format {node!r}")

    return go(term, 0, True)


# -- transition systems -------------------------------------------------------


def parse_lts(text: str) -> tuple[Lts, str | None]:
    """Parse the line format; returns the system and its init state (None
    when the file has no init line)."""
    name = "lts"
    init = None
    order: list[str] = []
    seen: set[str] = set()
    transitions = []
    alphabet: list[str] = []

    def intern(state, where):
        if not _STATE_NAME.match(state):
            raise ParseError(f"line {where}: bad state name {state!r}")
        if state not in seen:
            seen.add(state)
            order.append(state)

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tokens = line.split()
        if tokens[0] == "lts" and len(tokens) == 2:
            name = tokens[1]
        elif tokens[0] == "init" and len(tokens) == 2:
            intern(tokens[1], lineno)
            init = tokens[1]
        elif tokens[0] == "state" and len(tokens) == 2:
            intern(tokens[1], lineno)
        elif tokens[0] == "alphabet":
            for letter in tokens[1:]:
                if not _VISIBLE.match(letter):
                    raise ParseError(f"line {lineno}: bad letter {letter!r}")
                try:
                    visible(letter)
                except LtsError as err:
                    raise ParseError(f"line {lineno}: {err}") from None
                alphabet.append(letter)
        elif len(tokens) == 3:
            src, label, dst = tokens
            intern(src, lineno)
            intern(dst, lineno)
            if label == "tau":
                action = TAU
            elif label == "omega":
                action = OMEGA
            else:
                if not _VISIBLE.match(label):
                    raise ParseError(f"line {lineno}: bad label {label!r}")
                try:
                    action = visible(label)
                except LtsError as err:
                    raise ParseError(f"line {lineno}: {err}") from None
            transitions.append((src, action, dst))
        else:
            raise ParseError(f"line {lineno}: cannot parse {raw.strip()!r}")
    return Lts(states=order, transitions=transitions, alphabet=alphabet,
               name=name), init


def format_lts(lts: Lts, init: str | None = None) -> str:
    """Serialize; every state is declared explicitly so that reparsing
    reproduces the interned order."""
    lines = [f"lts {lts.name}"]
    if init is not None:
        lines.append(f"init {init}")
    if lts.alphabet:
        lines.append("alphabet " + " ".join(lts.alphabet))
    for state in lts.states:
        lines.append(f"state {state}")
    for src, action, dst in lts.transitions:
        label = action.name if action.kind == "visible" else action.kind
        lines.append(f"{src} {label} {dst}")
    return "\n".join(lines) + "\n"
