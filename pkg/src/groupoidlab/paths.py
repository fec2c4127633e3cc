"""Directed paths, path equivalence by probe folding, and the quotient groupoid.

An n-step directed path alternates objects and Y-elements.  Two paths with
shared endpoints are equivalent when folding them against a probe (a fresh
object with a Y-element into the start) yields the same terminal; the
relation does not depend on the probe, which the suites verify by iterating
every valid probe.  Two-step classes form the morphisms of the extended
groupoid; composition is concatenation followed by reduction.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterator, Optional

from .errors import AxiomViolation, ClaimFailure, InvalidInput, NoProbeAvailable
from .groupoids import FiniteGroupoid, validate_groupoid
from .structures import MultiSortedStructure, morphisms_between, objects_of
from .witness import YSystem, YTuple, raw_morphism, tuple_endpoints, x_tuples

Probe = tuple[int, YTuple]


@dataclass(frozen=True)
class DirectedPath:
    objects: tuple[int, ...]
    steps: tuple[YTuple, ...]

    @property
    def start(self) -> int:
        return self.objects[0]

    @property
    def end(self) -> int:
        return self.objects[-1]

    @property
    def n_steps(self) -> int:
        return len(self.steps)


def make_path(ys: YSystem, objects: tuple[int, ...], steps: tuple[YTuple, ...]) -> DirectedPath:
    if len(objects) != len(steps) + 1 or not steps:
        raise InvalidInput("path needs k+1 objects for k >= 1 steps")
    s = ys.structure
    for i, g in enumerate(steps):
        a, b = objects[i], objects[i + 1]
        if a == b:
            raise InvalidInput(f"consecutive path objects coincide at {i}")
        if tuple_endpoints(s, g) != (a, b):
            raise InvalidInput(f"step {i} does not go {a} -> {b}")
        ys.y_set(a, b).index_of(g)
    return DirectedPath(objects=tuple(objects), steps=tuple(steps))


def probe_candidates(ys: YSystem, *paths: DirectedPath) -> Iterator[Probe]:
    used = set().union(*(p.objects for p in paths))
    start = paths[0].start
    for c_star in objects_of(ys.structure):
        if c_star in used:
            continue
        for g_star in ys.y_set(c_star, start).members:
            yield (c_star, g_star)


def fold(ys: YSystem, path: DirectedPath, probe: Probe) -> YTuple:
    """Push the probe element along the path; the terminal names the class."""
    c_star, g_star = probe
    if c_star in path.objects:
        raise InvalidInput("probe object meets the path")
    if tuple_endpoints(ys.structure, g_star) != (c_star, path.start):
        raise InvalidInput("probe element does not reach the path start")
    acc = g_star
    for g in path.steps:
        acc = ys.compose(g, acc)
    return acc


def path_equivalent(
    ys: YSystem,
    q: DirectedPath,
    r: DirectedPath,
    probe: Optional[Probe] = None,
) -> bool:
    """Terminal comparison after folding both paths against a common probe.

    Without an explicit probe, every valid probe is folded and unanimity is
    demanded; disagreement would mean the instance is mismodelled.
    """
    if (q.start, q.end) != (r.start, r.end):
        return False
    if probe is not None:
        return fold(ys, q, probe) == fold(ys, r, probe)
    answers = {
        fold(ys, q, p) == fold(ys, r, p) for p in probe_candidates(ys, q, r)
    }
    if not answers:
        raise NoProbeAvailable(f"no probe disjoint from objects {set(q.objects) | set(r.objects)}")
    if len(answers) != 1:
        raise ClaimFailure("probe-independence", (q, r))
    return answers.pop()


def contract_path(ys: YSystem, path: DirectedPath, i: int) -> DirectedPath:
    """Replace steps i, i+1 by their composite (the three objects are distinct)."""
    if len({path.objects[i], path.objects[i + 1], path.objects[i + 2]}) != 3:
        raise InvalidInput(f"objects around step {i} are not pairwise distinct")
    composite = ys.compose(path.steps[i + 1], path.steps[i])
    return DirectedPath(
        objects=path.objects[: i + 1] + path.objects[i + 2:],
        steps=path.steps[:i] + (composite,) + path.steps[i + 2:],
    )


def contraction_positions(path: DirectedPath) -> list[int]:
    return [
        i
        for i in range(path.n_steps - 1)
        if len({path.objects[i], path.objects[i + 1], path.objects[i + 2]}) == 3
    ]


def contract_to_two_steps(ys: YSystem, path: DirectedPath) -> DirectedPath:
    """Reduce to a 2-step path by contractions, introducing a fresh object
    only when the path alternates between two objects."""
    q = path
    while q.n_steps > 2:
        positions = contraction_positions(q)
        if positions:
            q = contract_path(ys, q, positions[0])
            continue
        c, d = q.start, q.end
        c1 = _fresh(ys, set(q.objects))
        g1 = ys.y_set(c1, c).members[0]
        t1 = fold(ys, q, (c1, g1))
        e = _fresh(ys, {c, d, c1})
        h1 = ys.y_set(c, e).members[0]
        u = ys.compose(h1, g1)
        h2 = ys.divisor(t1, u)
        q = DirectedPath(objects=(c, e, d), steps=(h1, h2))
    return q


def _fresh(ys: YSystem, banned: set[int]) -> int:
    for o in objects_of(ys.structure):
        if o not in banned:
            return o
    raise NoProbeAvailable(f"all objects meet {sorted(banned)}")


def _expand_edge(ys: YSystem, c: int, d: int, y: YTuple) -> DirectedPath:
    """Canonical 2-step representative of the class of the 1-step (c, y, d)."""
    c_star = _fresh(ys, {c, d})
    e = _fresh(ys, {c, d, c_star})
    g_star = ys.y_set(c_star, c).members[0]
    h1 = ys.y_set(c, e).members[0]
    u = ys.compose(h1, g_star)
    t = ys.compose(y, g_star)
    h2 = ys.divisor(t, u)
    return DirectedPath(objects=(c, e, d), steps=(h1, h2))


def _vertex_terminal(ys: YSystem, path: DirectedPath) -> YTuple:
    """Fold a vertex path against the canonical probe, translating first when
    the path runs through the canonical probe object."""
    c = path.start
    c0v = _fresh(ys, {c})
    gv = ys.y_set(c0v, c).members[0]
    if c0v not in path.objects:
        return fold(ys, path, (c0v, gv))
    e_can = _fresh(ys, {c, c0v})
    p = _fresh(ys, set(path.objects) | {e_can})
    gp = ys.y_set(p, c).members[0]
    t_p = fold(ys, path, (p, gp))
    h1 = ys.y_set(c, e_can).members[0]
    u = ys.compose(h1, gp)
    h2 = ys.divisor(t_p, u)
    detour = DirectedPath(objects=(c, e_can, c), steps=(h1, h2))
    return fold(ys, detour, (c0v, gv))


def _vertex_rep(ys: YSystem, c: int, terminal: YTuple) -> DirectedPath:
    c0v = _fresh(ys, {c})
    gv = ys.y_set(c0v, c).members[0]
    e_can = _fresh(ys, {c, c0v})
    h1 = ys.y_set(c, e_can).members[0]
    u = ys.compose(h1, gv)
    h2 = ys.divisor(terminal, u)
    return DirectedPath(objects=(c, e_can, c), steps=(h1, h2))


def class_key(ys: YSystem, path: DirectedPath) -> tuple:
    """Canonical identifier of the equivalence class of a path.

    Edge classes (distinct endpoints) are named by their composite Y-element;
    vertex classes by the fold terminal at the canonical probe.
    """
    q = contract_to_two_steps(ys, path) if path.n_steps > 2 else path
    c, d = q.start, q.end
    if c != d:
        y = q.steps[0] if q.n_steps == 1 else ys.compose(q.steps[1], q.steps[0])
        return ("edge", c, d, ys.y_set(c, d).index_of(y))
    terminal = _vertex_terminal(ys, q)
    c0v = _fresh(ys, {c})
    return ("vertex", c, d, ys.y_set(c0v, c).index_of(terminal))


def canonical_rep(ys: YSystem, key: tuple) -> DirectedPath:
    kind, c, d, idx = key
    if kind == "edge":
        return _expand_edge(ys, c, d, ys.y_set(c, d).members[idx])
    c0v = _fresh(ys, {c})
    return _vertex_rep(ys, c, ys.y_set(c0v, c).members[idx])


def reduce_path(ys: YSystem, q: DirectedPath) -> DirectedPath:
    """The canonical 2-step path equivalent to q."""
    return canonical_rep(ys, class_key(ys, q))


@dataclass(frozen=True)
class PathClass:
    """An equivalence class of directed paths, carried by its canonical
    two-step representative."""

    start: int
    end: int
    key: tuple
    representative: DirectedPath

    def contains(self, ys: YSystem, q: DirectedPath) -> bool:
        return (q.start, q.end) == (self.start, self.end) and class_key(ys, q) == self.key


def path_class(ys: YSystem, q: DirectedPath) -> PathClass:
    key = class_key(ys, q)
    return PathClass(
        start=q.start, end=q.end, key=key, representative=canonical_rep(ys, key)
    )


def verify_reduction(ys: YSystem, q: DirectedPath, r: DirectedPath) -> bool:
    """Certify q ~ r as strongly as the object supply allows.

    Preferred: fold both against every common probe.  When the paths jointly
    exhaust too many objects, go through a contraction-only intermediate that
    stays inside q's own objects.  When even q admits no probe, fall back to
    contraction-order confluence: every first contraction leads to the same
    class.
    """
    if (q.start, q.end) != (r.start, r.end):
        return False
    if any(True for _ in probe_candidates(ys, q, r)):
        return path_equivalent(ys, q, r)
    q_sub = contract_to_two_steps(ys, q)
    if any(True for _ in probe_candidates(ys, q, q_sub)) and any(
        True for _ in probe_candidates(ys, q_sub, r)
    ):
        return path_equivalent(ys, q, q_sub) and path_equivalent(ys, q_sub, r)
    key = class_key(ys, q)
    return class_key(ys, r) == key and all(
        class_key(ys, contract_path(ys, q, i)) == key
        for i in contraction_positions(q)
    )


def all_paths(ys: YSystem, c: int, d: int, n_steps: int) -> Iterator[DirectedPath]:
    """Every n-step directed path from c to d (consecutive objects distinct)."""
    objs = list(objects_of(ys.structure))

    def chains(prefix: list[int]) -> Iterator[list[int]]:
        if len(prefix) == n_steps:
            if d != prefix[-1]:
                yield prefix + [d]
            return
        for o in objs:
            if o != prefix[-1]:
                yield from chains(prefix + [o])

    for chain in chains([c]):
        member_lists = [
            ys.y_set(chain[i], chain[i + 1]).members for i in range(n_steps)
        ]
        for steps in itertools.product(*member_lists):
            yield DirectedPath(objects=tuple(chain), steps=steps)


@dataclass
class ExtendedGroupoid:
    """The quotient groupoid built from 2-step path classes, plus the maps
    connecting it back to Y-sets and to the standard groupoid."""

    ys: YSystem
    groupoid: FiniteGroupoid
    keys: tuple[tuple, ...]  # morphism id -> class key

    def morphism_of_key(self, key: tuple) -> int:
        return self.keys.index(key)

    def class_of_path(self, path: DirectedPath) -> int:
        return self.morphism_of_key(class_key(self.ys, path))

    def y_to_morphism(self, a: int, b: int, y: YTuple) -> int:
        """The canonical correspondence Y(a,b) -> Mor(a,b) for distinct a, b."""
        return self.morphism_of_key(("edge", a, b, self.ys.y_set(a, b).index_of(y)))

    def inject_standard(self, m: int) -> int:
        """The canonical injection of a standard morphism into the quotient."""
        s = self.ys.structure
        gpd = self.ys.gpd
        c, d = gpd.init[m], gpd.ter[m]
        if c != d:
            head = x_tuples(s, c, d)
            t = next(t for t in head if raw_morphism(t) == m)
            return self.y_to_morphism(c, d, t)
        e = _fresh(self.ys, {c})
        k = min(morphisms_between(s, c, e))
        k2 = gpd.compose(gpd.inverse[k], m)
        t1 = next(t for t in x_tuples(s, c, e) if raw_morphism(t) == k)
        t2 = next(t for t in x_tuples(s, e, c) if raw_morphism(t) == k2)
        return self.class_of_path(
            DirectedPath(objects=(c, e, c), steps=(t1, t2))
        )


def build_extended_groupoid(
    s_or_ys: MultiSortedStructure | YSystem,
) -> ExtendedGroupoid:
    """Assemble the quotient groupoid: objects are the structure's objects,
    morphisms are 2-step path classes, composition is concatenation followed
    by reduction.  The result passes full groupoid validation."""
    ys = s_or_ys if isinstance(s_or_ys, YSystem) else YSystem(s_or_ys)
    s = ys.structure
    n = s.sort_size("O")
    if n < 4:
        raise NoProbeAvailable("path machinery needs at least four objects")

    keys: list[tuple] = []
    reps: list[DirectedPath] = []
    for c in objects_of(s):
        for d in objects_of(s):
            if c != d:
                size = ys.y_set(c, d).size
                kind = "edge"
            else:
                c0v = _fresh(ys, {c})
                size = ys.y_set(c0v, c).size
                kind = "vertex"
            for idx in range(size):
                key = (kind, c, d, idx)
                keys.append(key)
                reps.append(canonical_rep(ys, key))

    index = {k: i for i, k in enumerate(keys)}
    init = tuple(k[1] for k in keys)
    ter = tuple(k[2] for k in keys)

    composition = []
    for m1, k1 in enumerate(keys):
        for m2, k2 in enumerate(keys):
            if k1[2] != k2[1]:
                continue
            joined = DirectedPath(
                objects=reps[m1].objects + reps[m2].objects[1:],
                steps=reps[m1].steps + reps[m2].steps,
            )
            composition.append((m1, m2, index[class_key(ys, joined)]))

    comp = {(f, g): h for f, g, h in composition}
    identities = []
    for c in objects_of(s):
        own = [m for m, k in enumerate(keys) if k[1] == c and k[2] == c]
        neutral = [
            e
            for e in own
            if all(comp[(e, m)] == m for m, k in enumerate(keys) if k[1] == c)
            and all(comp[(m, e)] == m for m, k in enumerate(keys) if k[2] == c)
        ]
        if len(neutral) != 1:
            raise AxiomViolation("identity", ("quotient", c, neutral))
        identities.append(neutral[0])

    inverse = []
    for m, k in enumerate(keys):
        cands = [
            m2
            for m2, k2 in enumerate(keys)
            if k2[1] == k[2] and k2[2] == k[1]
            and comp[(m, m2)] == identities[k[1]]
            and comp[(m2, m)] == identities[k2[1]]
        ]
        if len(cands) != 1:
            raise AxiomViolation("inverse", ("quotient", m, cands))
        inverse.append(cands[0])

    gpd = FiniteGroupoid(
        n_objects=n,
        init=init,
        ter=ter,
        inverse=tuple(inverse),
        identities=tuple(identities),
        composition=tuple(sorted(composition)),
    )
    validate_groupoid(gpd)
    return ExtendedGroupoid(ys=ys, groupoid=gpd, keys=tuple(keys))
