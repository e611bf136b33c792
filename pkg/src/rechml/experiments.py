"""Experiments: a process running in parallel with a test.

A configuration pairs a process state with a test state.  Every edge of the
experiment graph is silent: the process moves on its own taus, the test on
its own taus, and the two synchronize on shared visible actions.  Success
is a predicate on configurations (the test component offers omega); omega
transitions are never taken.

A process may pass the test when some success configuration is reachable;
it must pass when every maximal computation visits a success configuration.
The must set is the least fixpoint of "successful now, or at least one move
and all moves lead into the set", computed backwards with a worklist.
"""

from collections import deque
from dataclasses import dataclass

from .lts import OMEGA, TAU, Lts, LtsError, visible
from .testterms import Mu, Test, TestError, reachable_lts


@dataclass
class ExperimentGraph:
    """Reachable configurations of a process paired with a test.  The root
    is configuration 0; edges[i] lists successor indices in deterministic
    order; success[i] marks configurations whose test component offers
    omega."""

    proc: Lts
    test: Lts
    configs: list[tuple[str, str]]
    edges: list[list[int]]
    success: list[bool]

    @property
    def root(self) -> int:
        return 0

    def __len__(self):
        return len(self.configs)


def parallel_compose(proc: Lts, test: Lts, p: str, t: str) -> ExperimentGraph:
    """Experiment graph of process state p against test state t.

    The process must not mention omega; the test may.  Only configurations
    reachable from (p, t) are materialized.
    """
    if proc.has_omega:
        raise LtsError("process side of an experiment cannot use omega")
    ip = proc.state_index(p)
    it = test.state_index(t)

    index: dict[tuple[int, int], int] = {(ip, it): 0}
    configs = [(ip, it)]
    edges: list[list[int]] = []
    queue = deque(((ip, it),))
    shared = [visible(a) for a in sorted(set(proc.alphabet) & set(test.alphabet))]

    def config_id(pair):
        got = index.get(pair)
        if got is None:
            got = len(configs)
            index[pair] = got
            configs.append(pair)
            queue.append(pair)
        return got

    while queue:
        cp, ct = queue.popleft()
        out: list[int] = []
        seen: set[int] = set()

        def push(pair):
            cid = config_id(pair)
            if cid not in seen:
                seen.add(cid)
                out.append(cid)

        for j in proc.iter_mask(proc.strong_mask(TAU, cp)):
            push((j, ct))
        for j in test.iter_mask(test.strong_mask(TAU, ct)):
            push((cp, j))
        for action in shared:
            pmask = proc.strong_mask(action, cp)
            if not pmask:
                continue
            tmask = test.strong_mask(action, ct)
            if not tmask:
                continue
            for jp in proc.iter_mask(pmask):
                for jt in test.iter_mask(tmask):
                    push((jp, jt))
        edges.append(out)

    success = [bool(test.omega_mask & (1 << ct)) for _, ct in configs]
    named = [(proc.states[i], test.states[j]) for i, j in configs]
    return ExperimentGraph(proc, test, named, edges, success)


def _must_set(graph: ExperimentGraph) -> list[bool]:
    n = len(graph.configs)
    preds: list[list[int]] = [[] for _ in range(n)]
    remaining = [0] * n
    for src, targets in enumerate(graph.edges):
        remaining[src] = len(targets)
        for dst in targets:
            preds[dst].append(src)
    inside = [False] * n
    queue = deque()
    for c in range(n):
        if graph.success[c]:
            inside[c] = True
            queue.append(c)
    while queue:
        c = queue.popleft()
        for p in preds[c]:
            remaining[p] -= 1
            if not inside[p] and remaining[p] == 0:
                inside[p] = True
                queue.append(p)
    return inside


def may_satisfy(graph: ExperimentGraph) -> bool:
    """Some computation from the root reaches a success configuration."""
    n = len(graph.configs)
    seen = [False] * n
    seen[0] = True
    queue = deque((0,))
    while queue:
        c = queue.popleft()
        if graph.success[c]:
            return True
        for d in graph.edges[c]:
            if not seen[d]:
                seen[d] = True
                queue.append(d)
    return False


def must_satisfy(graph: ExperimentGraph) -> bool:
    """Every maximal computation from the root visits a success
    configuration."""
    return _must_set(graph)[0]


def may_witness(graph: ExperimentGraph):
    """A successful computation as a list of configurations, or None."""
    parent = {0: None}
    queue = deque((0,))
    goal = None
    while queue:
        c = queue.popleft()
        if graph.success[c]:
            goal = c
            break
        for d in graph.edges[c]:
            if d not in parent:
                parent[d] = c
                queue.append(d)
    if goal is None:
        return None
    path = []
    at = goal
    while at is not None:
        path.append(graph.configs[at])
        at = parent[at]
    path.reverse()
    return path


def must_counterexample(graph: ExperimentGraph):
    """An unsuccessful maximal computation when the root must-fails.

    Returns (path, loop_index) where path is a list of configurations and
    loop_index is the position the final configuration loops back to, or
    None when the path ends in a deadlocked configuration.  Returns None
    when the root must-passes.
    """
    inside = _must_set(graph)
    if inside[0]:
        return None
    path_ids = [0]
    position = {0: 0}
    at = 0
    while True:
        nxt = None
        for d in graph.edges[at]:
            if not inside[d]:
                nxt = d
                break
        if nxt is None:
            return [graph.configs[i] for i in path_ids], None
        if nxt in position:
            path_ids.append(nxt)
            return [graph.configs[i] for i in path_ids], position[nxt]
        position[nxt] = len(path_ids)
        path_ids.append(nxt)
        at = nxt


@dataclass
class UnfoldVerdicts:
    """Must verdicts for a recursive test and its one-step unfolding,
    together with the two directions of the unfolding law."""

    recursive: bool
    unfolded: bool
    process_converges: bool

    @property
    def forward_ok(self) -> bool:
        # must for mu X.t implies must for the unfolding, unconditionally
        return (not self.recursive) or self.unfolded

    @property
    def converse_ok(self) -> bool:
        # the converse needs convergence of the process
        if not self.process_converges:
            return True
        return (not self.unfolded) or self.recursive


def must_unfold_law(proc: Lts, p: str, test: Test) -> UnfoldVerdicts:
    """Check both directions of the recursion unfolding law for must."""
    from .testterms import substitute

    if not isinstance(test, Mu):
        raise TestError("must_unfold_law expects a recursive test mu X.t")
    unfolded = substitute(test.body, test.var, test)
    rec_lts, rec_root = reachable_lts(test)
    unf_lts, unf_root = reachable_lts(unfolded)
    rec = must_satisfy(parallel_compose(proc, rec_lts, p, rec_root))
    unf = must_satisfy(parallel_compose(proc, unf_lts, p, unf_root))
    return UnfoldVerdicts(rec, unf, proc.converges(p))
