"""Randomized machine-checking of the representation theorems.

Each check draws its own per-trial generator by seed splitting, so a
report is reproducible trial by trial and byte-identical across runs.
Known awkward shapes (deadlock, a tau self-loop, the a/b fork and a
divergent fork) are seeded into every run as trial 0 fixtures alongside
the random instances.

The mutation flag swaps in a deliberately corrupted compiler (the visible
box loses its tau escape to success) and is expected to produce failures;
it exists so a silent-green harness can be told apart from one that cannot
see anything.
"""

import json
from dataclasses import dataclass, field, replace

from . import formulas as fm
from . import testterms as tm
from .experiments import must_satisfy, may_satisfy, must_unfold_law, parallel_compose
from .formulas import bekic_eliminate
from .generators import TrialConfig, generate_formula, generate_lts, generate_sim_system, generate_test, spawn_rng
from .lts import TAU, Lts, visible
from .semantics import EvalStats, interpret, interpret_simultaneous_vector
from .testterms import reachable_lts
from .textio import format_formula, format_lts, format_test
from .translate import formula_to_may_test, formula_to_must_test, test_to_may_formula, test_to_must_formula


@dataclass
class CheckResult:
    name: str
    trials: int
    failures: int
    counterexample: dict | None
    fixpoint_iterations: int
    max_fixpoint_iterations: int
    divergent_trials: int = 0

    @property
    def passed(self) -> bool:
        return self.failures == 0


@dataclass
class TrialReport:
    config: TrialConfig
    mutation: bool
    checks: list[CheckResult] = field(default_factory=list)

    @property
    def failures(self) -> int:
        return sum(c.failures for c in self.checks)

    @property
    def passed(self) -> bool:
        return self.failures == 0


def fixture_lts(cfg: TrialConfig, name: str = "fixture") -> Lts:
    """Deadlock, an a/b fork, the two one-armed processes and two divergent
    states, over the configured alphabet."""
    letters = cfg.alphabet()
    a = visible(letters[0])
    b = visible(letters[1]) if len(letters) > 1 else a
    transitions = [
        ("fork", a, "dead"),
        ("fork", b, "dead"),
        ("pa", a, "dead"),
        ("pb", b, "dead"),
        ("div", TAU, "div"),
        ("divfork", TAU, "divfork"),
        ("divfork", a, "dead"),
        ("divfork", b, "dead"),
    ]
    return Lts(states=["dead", "fork", "pa", "pb", "div", "divfork"],
               transitions=transitions, alphabet=letters, name=name)


def _deadlock_lts(cfg) -> Lts:
    return Lts(states=["dead"], alphabet=cfg.alphabet(), name="deadlock")


def _tauloop_lts(cfg) -> Lts:
    return Lts(states=["loop"], transitions=[("loop", TAU, "loop")],
               alphabet=cfg.alphabet(), name="tauloop")


def _corrupted_must_test(formula):
    """Wrong on purpose: the visible box forgets that refusing the action
    is acceptable, so deadlocked processes are misjudged."""
    def conv(node):
        match node:
            case fm.Tt():
                return tm.Success()
            case fm.Ff():
                return tm.Nil()
            case fm.Acc(actions):
                out = tm.Nil()
                for x in sorted(actions):
                    arm = tm.Prefix(visible(x), tm.Success())
                    out = arm if isinstance(out, tm.Nil) else tm.Sum(out, arm)
                return out
            case fm.Var(name):
                return tm.Var(name)
            case fm.Box(action, body):
                if action.kind == "tau":
                    return tm.Prefix(TAU, conv(body))
                return tm.Prefix(action, conv(body))
            case fm.And(left, right):
                if fm.tt_shape(node):
                    return tm.Success()
                return tm.Sum(tm.Prefix(TAU, conv(left)), tm.Prefix(TAU, conv(right)))
            case fm.Min(var, body):
                if not fm.free_vars(body):
                    return conv(body)
                return tm.Mu(var, conv(body))
            case _:
                raise fm.FormulaError(f"not in the must fragment: {node}")

    return conv(formula)


def _bool(value) -> str:
    return "true" if value else "false"


class _Harness:
    def __init__(self, cfg: TrialConfig, mutate: bool):
        self.cfg = cfg
        self.mutate = mutate
        self.fixture = fixture_lts(cfg)
        self.report = TrialReport(cfg, mutate)
        self._divergent = 0

    def run(self, only=None) -> TrialReport:
        table = [
            ("must_formula_agreement", self.cfg.trials, self.check_must_formula),
            ("must_test_agreement", self.cfg.trials, self.check_must_test),
            ("may_formula_agreement", self.cfg.trials, self.check_may_formula),
            ("may_test_agreement", self.cfg.trials, self.check_may_test),
            ("bekic_equivalence", self.cfg.property_trials, self.check_bekic),
            ("fixpoint_prefix_property", self.cfg.property_trials, self.check_prefix_property),
            ("fixpoint_unfolding", self.cfg.property_trials, self.check_unfolding),
            ("approximant_chain", self.cfg.property_trials, self.check_approximants),
            ("divergence_collapse", self.cfg.property_trials, self.check_divergence_collapse),
            ("open_min_not_full", self.cfg.property_trials, self.check_open_min),
            ("acc_equivalence", self.cfg.property_trials, self.check_acc_equivalence),
            ("unfold_law", self.cfg.property_trials, self.check_unfold_law),
            ("must_implies_may", self.cfg.property_trials, self.check_must_implies_may),
            ("tt_grammar_semantic", self.cfg.property_trials, self.check_tt_grammar),
        ]
        for name, count, fn in table:
            if only is not None and name not in only:
                continue
            stats = EvalStats()
            failures = 0
            first = None
            self._divergent = 0
            for trial in range(count):
                rng = spawn_rng(self.cfg.seed, name, trial)
                found = fn(trial, rng, stats)
                if found is not None:
                    failures += 1
                    if first is None:
                        found = {"check": name, "trial": trial, **found}
                        first = found
            self.report.checks.append(CheckResult(
                name, count, failures, first,
                stats.fixpoint_iterations, stats.max_fixpoint_iterations,
                self._divergent,
            ))
        return self.report

    # -- shared pieces -----------------------------------------------------

    def trial_lts(self, trial, rng, name="g") -> Lts:
        lts = self.fixture if trial == 0 else generate_lts(self.cfg, rng, name)
        if lts.divergent_mask:
            self._divergent += 1
        return lts

    def _compare(self, lts, formula, test, mode, stats, extra=None):
        sat = interpret(lts, formula, stats=stats)
        tlts, troot = reachable_lts(test)
        for i, state in enumerate(lts.states):
            graph = parallel_compose(lts, tlts, state, troot)
            verdict = must_satisfy(graph) if mode == "must" else may_satisfy(graph)
            expected = bool(sat & (1 << i))
            if verdict != expected:
                out = {
                    "state": state,
                    "formula": format_formula(formula),
                    "test": format_test(test),
                    "formula_verdict": expected,
                    "test_verdict": verdict,
                    "mode": mode,
                    "lts": format_lts(lts, state),
                }
                if extra:
                    out.update(extra)
                return out
        return None

    # -- representation theorems --------------------------------------------

    def check_must_formula(self, trial, rng, stats):
        lts = self.trial_lts(trial, rng)
        formula = generate_formula(self.cfg, rng, "must")
        compiler = _corrupted_must_test if self.mutate else formula_to_must_test
        return self._compare(lts, formula, compiler(formula), "must", stats)

    def check_may_formula(self, trial, rng, stats):
        lts = self.trial_lts(trial, rng)
        formula = generate_formula(self.cfg, rng, "may")
        return self._compare(lts, formula, formula_to_may_test(formula), "may", stats)

    def check_must_test(self, trial, rng, stats):
        lts = self.trial_lts(trial, rng)
        test = generate_test(self.cfg, rng)
        formula = test_to_must_formula(test)
        if not fm.is_musthml(formula):
            return {"test": format_test(test), "error": "compiled formula outside must fragment"}
        return self._compare(lts, formula, test, "must", stats)

    def check_may_test(self, trial, rng, stats):
        lts = self.trial_lts(trial, rng)
        test = generate_test(self.cfg, rng)
        formula = test_to_may_formula(test)
        if not fm.is_mayhml(formula):
            return {"test": format_test(test), "error": "compiled formula outside may fragment"}
        return self._compare(lts, formula, test, "may", stats)

    # -- fixpoint machinery ---------------------------------------------------

    def check_bekic(self, trial, rng, stats):
        sim = generate_sim_system(self.cfg, rng)
        eliminated = bekic_eliminate(sim)
        for member in range(20):
            pool_rng = spawn_rng(self.cfg.seed, "bekic_pool", member)
            lts = generate_lts(self.cfg, pool_rng)
            vector = interpret_simultaneous_vector(lts, sim, stats=stats)
            single = interpret(lts, eliminated, stats=stats)
            if single != vector[sim.index]:
                return {
                    "lts": format_lts(lts),
                    "system": _format_system(sim),
                    "index": sim.index,
                    "simultaneous": list(lts.names_of(vector[sim.index])),
                    "eliminated": list(lts.names_of(single)),
                }
        return None

    def check_prefix_property(self, trial, rng, stats):
        lts = self.trial_lts(trial, rng)
        sim = generate_sim_system(self.cfg, rng)
        least = interpret_simultaneous_vector(lts, sim, stats=stats)

        def bodies_at(vector):
            env = dict(zip(sim.variables, vector))
            return tuple(interpret(lts, b, env, stats=stats) for b in sim.bodies)

        # downward iterates from the full vector are prefixed points
        candidate = tuple(lts.full_mask for _ in sim.variables)
        for _ in range(rng.randint(0, 3)):
            candidate = bodies_at(candidate)
        # plus an arbitrary vector, kept only when the premise holds
        arbitrary = tuple(rng.randrange(lts.full_mask + 1) for _ in sim.variables)
        samples = [candidate]
        if all(v & ~p == 0 for v, p in zip(bodies_at(arbitrary), arbitrary)):
            samples.append(arbitrary)
        for sample in samples:
            applied = bodies_at(sample)
            if not all(v & ~p == 0 for v, p in zip(applied, sample)):
                continue
            if any(l & ~p != 0 for l, p in zip(least, sample)):
                return {
                    "lts": format_lts(lts),
                    "system": _format_system(sim),
                    "prefixed_point": [list(lts.names_of(p)) for p in sample],
                }
        return None

    def check_unfolding(self, trial, rng, stats):
        lts = self.trial_lts(trial, rng)
        sim = generate_sim_system(self.cfg, rng)
        least = interpret_simultaneous_vector(lts, sim, stats=stats)
        env = dict(zip(sim.variables, least))
        for k, body in enumerate(sim.bodies):
            if interpret(lts, body, env, stats=stats) != least[k]:
                return {"lts": format_lts(lts), "system": _format_system(sim), "component": k}
        # single-variable corollary: min X.phi equals its own unfolding
        body = generate_formula(self.cfg, rng, "full", scope=("X0",))
        phi = fm.Min("X0", body)
        unfolded = fm.substitute(body, "X0", phi)
        if interpret(lts, phi, stats=stats) != interpret(lts, unfolded, stats=stats):
            return {"lts": format_lts(lts), "formula": format_formula(phi)}
        return None

    def check_approximants(self, trial, rng, stats):
        small = replace(self.cfg, max_states=min(self.cfg.max_states, 6))
        lts = generate_lts(small, rng) if trial else _deadlock_lts(small)
        formula = generate_formula(self.cfg, rng, "must")
        target = interpret(lts, formula, stats=stats)
        bound = len(lts.states) * fm.nesting_depth(formula) + 2
        previous = 0
        for k in range(bound + 1):
            current = interpret(lts, fm.approximant(formula, k), stats=stats)
            if previous & ~current:
                return {"lts": format_lts(lts), "formula": format_formula(formula),
                        "level": k, "error": "approximant chain not monotone"}
            if current & ~target:
                return {"lts": format_lts(lts), "formula": format_formula(formula),
                        "level": k, "error": "approximant exceeds the fixpoint"}
            if current == target:
                return None
            previous = current
        return {"lts": format_lts(lts), "formula": format_formula(formula),
                "bound": bound, "error": "approximants did not stabilize within bound"}

    # -- logic lemmas ---------------------------------------------------------

    def check_divergence_collapse(self, trial, rng, stats):
        base = generate_lts(self.cfg, rng)
        looper = base.states[rng.randrange(len(base.states))]
        lts = Lts(base.states, list(base.transitions) + [(looper, TAU, looper)],
                  alphabet=base.alphabet, name=base.name)
        formula = generate_formula(self.cfg, rng, "must")
        sat = interpret(lts, formula, stats=stats)
        if sat & lts.divergent_mask and sat != lts.full_mask:
            return {"lts": format_lts(lts), "formula": format_formula(formula),
                    "satisfied": list(lts.names_of(sat))}
        return None

    def check_open_min(self, trial, rng, stats):
        body = generate_formula(self.cfg, rng, "must", scope=("X0",))
        if "X0" not in fm.free_vars(body):
            body = fm.And(fm.Var("X0"), body)
        formula = fm.Min("X0", body)
        base = generate_lts(self.cfg, rng)
        looper = base.states[rng.randrange(len(base.states))]
        lts = Lts(base.states, list(base.transitions) + [(looper, TAU, looper)],
                  alphabet=base.alphabet, name=base.name)
        if interpret(lts, formula, stats=stats) == lts.full_mask:
            return {"lts": format_lts(lts), "formula": format_formula(formula)}
        return None

    def check_acc_equivalence(self, trial, rng, stats):
        lts = self.trial_lts(trial, rng)
        letters = [] if trial % 10 == 1 else [a for a in self.cfg.alphabet() if rng.random() < 0.5]
        acc = fm.Acc(frozenset(letters))
        spelled: fm.Formula = fm.Ff()
        for k, a in enumerate(sorted(letters)):
            dia = fm.Dia(visible(a), fm.Tt())
            spelled = dia if k == 0 else fm.Or(spelled, dia)
        boxed = fm.Box(TAU, spelled)
        if interpret(lts, acc, stats=stats) != interpret(lts, boxed, stats=stats):
            return {"lts": format_lts(lts), "acc": format_formula(acc),
                    "spelled": format_formula(boxed)}
        return None

    # -- testing engine ---------------------------------------------------------

    def check_unfold_law(self, trial, rng, stats):
        lts = self.trial_lts(trial, rng)
        body = generate_test(self.cfg, rng, scope=("X0",))
        test = tm.Mu("X0", body)
        for state in lts.states:
            verdicts = must_unfold_law(lts, state, test)
            if not verdicts.forward_ok or not verdicts.converse_ok:
                return {"lts": format_lts(lts, state), "state": state,
                        "test": format_test(test),
                        "recursive": verdicts.recursive,
                        "unfolded": verdicts.unfolded,
                        "converges": verdicts.process_converges}
        return None

    def check_must_implies_may(self, trial, rng, stats):
        lts = self.trial_lts(trial, rng)
        test = generate_test(self.cfg, rng)
        tlts, troot = reachable_lts(test)
        for state in lts.states:
            graph = parallel_compose(lts, tlts, state, troot)
            if len(graph) > len(lts.states) * len(tlts.states):
                return {"lts": format_lts(lts, state), "test": format_test(test),
                        "error": "experiment larger than the product bound"}
            if must_satisfy(graph) and not may_satisfy(graph):
                return {"lts": format_lts(lts, state), "state": state,
                        "test": format_test(test)}
        return None

    def check_tt_grammar(self, trial, rng, stats):
        formula = generate_formula(self.cfg, rng, "must")
        family = [_deadlock_lts(self.cfg), _tauloop_lts(self.cfg), self.fixture,
                  generate_lts(self.cfg, rng)]
        full_everywhere = all(
            interpret(member, formula, stats=stats) == member.full_mask
            for member in family
        )
        if fm.is_tt_grammar(formula) != full_everywhere:
            return {"formula": format_formula(formula),
                    "is_tt_grammar": fm.is_tt_grammar(formula),
                    "full_everywhere": full_everywhere}
        return None


def _format_system(sim: fm.SimFormula) -> str:
    parts = [f"{v} = {format_formula(b)}" for v, b in zip(sim.variables, sim.bodies)]
    return f"min[{sim.index}] {{ " + " ; ".join(parts) + " }"


def verify_theorems(cfg: TrialConfig, mutate: bool = False, only=None) -> TrialReport:
    """Run every registered check; only (a set of names) restricts them."""
    return _Harness(cfg, mutate).run(only)


def report_text(report: TrialReport) -> str:
    cfg = report.config
    lines = [
        "verify"
        f" seed={cfg.seed} trials={cfg.trials} property_trials={cfg.property_trials}"
        f" max_states={cfg.max_states} alphabet_size={cfg.alphabet_size}"
        f" max_formula_depth={cfg.max_formula_depth} max_test_depth={cfg.max_test_depth}"
        f" max_sim_vars={cfg.max_sim_vars} tau_density={cfg.tau_density}"
        f" divergence_bias={cfg.divergence_bias}"
        f" mutation={'on' if report.mutation else 'off'}"
    ]
    for check in report.checks:
        lines.append(
            f"check name={check.name} trials={check.trials} failures={check.failures}"
            f" divergent_trials={check.divergent_trials}"
            f" fixpoint_iterations={check.fixpoint_iterations}"
            f" max_fixpoint_iterations={check.max_fixpoint_iterations}"
        )
        if check.counterexample is not None:
            parts = []
            for key, value in check.counterexample.items():
                if isinstance(value, bool):
                    parts.append(f"{key}={_bool(value)}")
                elif isinstance(value, (int, float)):
                    parts.append(f"{key}={value}")
                else:
                    parts.append(f"{key}={json.dumps(str(value))}")
            lines.append("counterexample " + " ".join(parts))
    lines.append(
        f"summary checks={len(report.checks)} failures={report.failures}"
        f" verdict={'pass' if report.passed else 'fail'}"
    )
    return "\n".join(lines) + "\n"


def report_json(report: TrialReport) -> str:
    cfg = report.config
    payload = {
        "config": {
            "seed": cfg.seed,
            "trials": cfg.trials,
            "property_trials": cfg.property_trials,
            "max_states": cfg.max_states,
            "alphabet_size": cfg.alphabet_size,
            "max_formula_depth": cfg.max_formula_depth,
            "max_test_depth": cfg.max_test_depth,
            "max_sim_vars": cfg.max_sim_vars,
            "tau_density": cfg.tau_density,
            "divergence_bias": cfg.divergence_bias,
        },
        "mutation": report.mutation,
        "checks": [
            {
                "name": c.name,
                "trials": c.trials,
                "failures": c.failures,
                "divergent_trials": c.divergent_trials,
                "fixpoint_iterations": c.fixpoint_iterations,
                "max_fixpoint_iterations": c.max_fixpoint_iterations,
                "counterexample": c.counterexample,
            }
            for c in report.checks
        ],
        "summary": {
            "checks": len(report.checks),
            "failures": report.failures,
            "verdict": "pass" if report.passed else "fail",
        },
    }
    return json.dumps(payload, sort_keys=True, indent=2) + "\n"
