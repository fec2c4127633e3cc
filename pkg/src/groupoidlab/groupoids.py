"""Finite groupoids with exhaustively checked axioms.

Composition is stored diagrammatically: ``compose(f, g)`` is defined exactly
when ``ter(f) == init(g)`` and means "f, then g".  In the standard model on
labelled triples this reads ``(a,x,b) then (b,y,c) = (a, y*x, c)``.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import AxiomViolation, InvalidInput, NonAbelianVertex, TransportAmbiguity
from .groups import FiniteGroup, group_from_json, group_from_spec, validate_group


@dataclass(frozen=True)
class FiniteGroupoid:
    n_objects: int
    init: tuple[int, ...]
    ter: tuple[int, ...]
    inverse: tuple[int, ...]
    identities: tuple[int, ...]
    composition: tuple[tuple[int, int, int], ...]  # (f, g, f-then-g)

    def __post_init__(self) -> None:
        object.__setattr__(self, "_comp", {(f, g): h for f, g, h in self.composition})

    @property
    def n_morphisms(self) -> int:
        return len(self.init)

    def compose(self, f: int, g: int) -> int:
        """f then g; defined iff ter(f) == init(g)."""
        try:
            return self._comp[(f, g)]
        except KeyError:
            raise AxiomViolation("composability", (f, g)) from None

    def composable(self, f: int, g: int) -> bool:
        return (f, g) in self._comp

    def morphisms_between(self, a: int, b: int) -> tuple[int, ...]:
        return tuple(
            m for m in range(self.n_morphisms)
            if self.init[m] == a and self.ter[m] == b
        )

    def is_connected(self) -> bool:
        return all(
            self.morphisms_between(a, b)
            for a in range(self.n_objects) for b in range(self.n_objects)
        )


@dataclass(frozen=True)
class VertexGroup:
    """Mor(a, a) under composition, re-indexed as a FiniteGroup."""

    groupoid: FiniteGroupoid
    obj: int
    group: FiniteGroup
    members: tuple[int, ...]  # members[i] is the morphism for group element i

    def element_of(self, morphism: int) -> int:
        return self.members.index(morphism)


@dataclass(frozen=True)
class BindingGroup:
    """Transport-equivalence classes of vertex morphisms of an abelian groupoid.

    Class k corresponds to group element k; ``reps[k][a]`` is the unique
    morphism of class k in the vertex group at object a.
    """

    groupoid: FiniteGroupoid
    group: FiniteGroup
    classes: tuple[frozenset[int], ...]
    reps: tuple[tuple[int, ...], ...]

    def class_of(self, vertex_morphism: int) -> int:
        for k, cls in enumerate(self.classes):
            if vertex_morphism in cls:
                return k
        raise InvalidInput(f"morphism {vertex_morphism} is not a vertex morphism")


def build_standard_groupoid(group: FiniteGroup, n: int) -> FiniteGroupoid:
    """Connected groupoid on n objects whose every vertex group is the given group.

    Morphism (a, x, b) gets id ((a*n)+b)*|G| + x; |M| = n^2 * |G|.
    """
    if n < 1:
        raise InvalidInput(f"object count {n} must be >= 1")
    order = group.order

    def mid(a: int, x: int, b: int) -> int:
        return (a * n + b) * order + x

    count = n * n * order
    init = [0] * count
    ter = [0] * count
    inverse = [0] * count
    for a in range(n):
        for b in range(n):
            for x in range(order):
                m = mid(a, x, b)
                init[m] = a
                ter[m] = b
                inverse[m] = mid(b, group.inv(x), a)
    identities = tuple(mid(a, group.identity, a) for a in range(n))
    composition = []
    for a in range(n):
        for b in range(n):
            for c in range(n):
                for x in range(order):
                    for y in range(order):
                        composition.append(
                            (mid(a, x, b), mid(b, y, c), mid(a, group.mul(y, x), c))
                        )
    return FiniteGroupoid(
        n_objects=n,
        init=tuple(init),
        ter=tuple(ter),
        inverse=tuple(inverse),
        identities=identities,
        composition=tuple(sorted(composition)),
    )


def standard_triple(group: FiniteGroup, n: int, m: int) -> tuple[int, int, int]:
    """Inverse of the standard morphism numbering: id -> (a, x, b)."""
    pair, x = divmod(m, group.order)
    a, b = divmod(pair, n)
    return a, x, b


def validate_groupoid(gpd: FiniteGroupoid) -> FiniteGroupoid:
    """Exhaustively check every groupoid axiom; raise AxiomViolation otherwise."""
    n_obj, n_mor = gpd.n_objects, gpd.n_morphisms
    for name, arr, bound in (
        ("init", gpd.init, n_obj),
        ("ter", gpd.ter, n_obj),
        ("inverse", gpd.inverse, n_mor),
    ):
        if len(arr) != n_mor:
            raise AxiomViolation("shape", (name, len(arr)))
        if any(not 0 <= v < bound for v in arr):
            raise AxiomViolation("entry-range", name)
    if len(gpd.identities) != n_obj:
        raise AxiomViolation("shape", ("identities", len(gpd.identities)))

    comp = gpd._comp
    if len(comp) != len(gpd.composition):
        raise AxiomViolation("composability", "duplicate composition pair")
    for (f, g), h in comp.items():
        if gpd.ter[f] != gpd.init[g]:
            raise AxiomViolation("composability", (f, g))
        if gpd.init[h] != gpd.init[f] or gpd.ter[h] != gpd.ter[g]:
            raise AxiomViolation("endpoint", (f, g, h))
    for f in range(n_mor):
        for g in range(n_mor):
            if gpd.ter[f] == gpd.init[g] and (f, g) not in comp:
                raise AxiomViolation("composability", ("missing pair", f, g))

    by_init: list[list[int]] = [[] for _ in range(n_obj)]
    for m in range(n_mor):
        by_init[gpd.init[m]].append(m)
    for f in range(n_mor):
        for g in by_init[gpd.ter[f]]:
            fg = comp[(f, g)]
            for h in by_init[gpd.ter[g]]:
                if comp[(fg, h)] != comp[(f, comp[(g, h)])]:
                    raise AxiomViolation("associativity", (f, g, h))

    for a in range(n_obj):
        e = gpd.identities[a]
        if gpd.init[e] != a or gpd.ter[e] != a:
            raise AxiomViolation("identity", ("endpoints", a))
        for m in range(n_mor):
            if gpd.init[m] == a and comp[(e, m)] != m:
                raise AxiomViolation("identity", ("left", a, m))
            if gpd.ter[m] == a and comp[(m, e)] != m:
                raise AxiomViolation("identity", ("right", a, m))

    for m in range(n_mor):
        mi = gpd.inverse[m]
        if gpd.init[mi] != gpd.ter[m] or gpd.ter[mi] != gpd.init[m]:
            raise AxiomViolation("inverse", ("endpoints", m))
        if comp[(mi, m)] != gpd.identities[gpd.init[mi]]:
            raise AxiomViolation("inverse", ("left", m))
        if comp[(m, mi)] != gpd.identities[gpd.init[m]]:
            raise AxiomViolation("inverse", ("right", m))
    return gpd


def vertex_group(gpd: FiniteGroupoid, a: int) -> VertexGroup:
    if not 0 <= a < gpd.n_objects:
        raise InvalidInput(f"object {a} out of range")
    members = gpd.morphisms_between(a, a)
    pos = {m: i for i, m in enumerate(members)}
    table = tuple(
        tuple(pos[gpd.compose(f, g)] for g in members) for f in members
    )
    group = validate_group(table, pos[gpd.identities[a]])
    return VertexGroup(groupoid=gpd, obj=a, group=group, members=members)


def binding_group(gpd: FiniteGroupoid) -> BindingGroup:
    """Quotient of the union of vertex groups by conjugation transport.

    Only defined when every vertex group is abelian; transport independence
    of the connecting morphism is checked, not assumed.
    """
    if not gpd.is_connected():
        raise AxiomViolation("connectedness", None)
    vgroups = [vertex_group(gpd, a) for a in range(gpd.n_objects)]
    for vg in vgroups:
        if not vg.group.is_abelian():
            raise NonAbelianVertex(vg.obj)

    def transport(sigma: int, f: int) -> int:
        # sigma at init(f) conjugated along f to a vertex morphism at ter(f)
        return gpd.compose(gpd.compose(gpd.inverse[f], sigma), f)

    n = gpd.n_objects
    reps: list[tuple[int, ...]] = []
    classes: list[frozenset[int]] = []
    for sigma in vgroups[0].members:
        row = [0] * n
        for b in range(n):
            images = {transport(sigma, f) for f in gpd.morphisms_between(0, b)}
            if len(images) != 1:
                raise TransportAmbiguity((sigma, b, sorted(images)))
            row[b] = images.pop()
        reps.append(tuple(row))
        classes.append(frozenset(row))
    # transport between arbitrary objects must stay inside these classes
    for a in range(n):
        for b in range(n):
            for f in gpd.morphisms_between(a, b):
                for sigma in vgroups[a].members:
                    k = next(i for i, c in enumerate(classes) if sigma in c)
                    if transport(sigma, f) not in classes[k]:
                        raise TransportAmbiguity((sigma, f))
    for k, cls in enumerate(classes):
        for vg in vgroups:
            if len(cls.intersection(vg.members)) != 1:
                raise TransportAmbiguity(("class-vertex-meet", k, vg.obj))
    return BindingGroup(
        groupoid=gpd,
        group=vgroups[0].group,
        classes=tuple(classes),
        reps=tuple(reps),
    )


def bind_act(b: BindingGroup, klass: int, f: int) -> int:
    """The action of binding class ``klass`` on morphism f.

    Composes f with the class representative at ter(f); the same morphism
    must arise from the representative at init(f) acting first.
    """
    gpd = b.groupoid
    left = gpd.compose(f, b.reps[klass][gpd.ter[f]])
    right = gpd.compose(b.reps[klass][gpd.init[f]], f)
    if left != right:
        raise TransportAmbiguity(("left/right action mismatch", klass, f))
    return left


def bracket(b: BindingGroup, f: int, g: int) -> int:
    """The unique binding class moving f to g inside one Mor(a, b)."""
    gpd = b.groupoid
    if gpd.init[f] != gpd.init[g] or gpd.ter[f] != gpd.ter[g]:
        raise InvalidInput(f"morphisms {f}, {g} do not share endpoints")
    hits = [k for k in range(b.group.order) if bind_act(b, k, f) == g]
    if len(hits) != 1:
        raise TransportAmbiguity(("bracket", f, g, hits))
    return hits[0]


def groupoid_to_json(gpd: FiniteGroupoid) -> dict:
    return {
        "objects": gpd.n_objects,
        "morphisms": [
            {"id": m, "init": gpd.init[m], "ter": gpd.ter[m], "inverse": gpd.inverse[m]}
            for m in range(gpd.n_morphisms)
        ],
        "identities": list(gpd.identities),
        "composition": [list(t) for t in gpd.composition],
    }


def groupoid_from_json(data: dict) -> FiniteGroupoid:
    if "standard" in data:
        inner = data["standard"]
        if "group" not in inner or "objects" not in inner:
            raise InvalidInput("standard shorthand needs 'group' and 'objects'")
        spec = inner["group"]
        group = group_from_spec(spec) if isinstance(spec, str) else group_from_json(spec)
        return build_standard_groupoid(group, int(inner["objects"]))
    try:
        mors = data["morphisms"]
        gpd = FiniteGroupoid(
            n_objects=int(data["objects"]),
            init=tuple(m["init"] for m in mors),
            ter=tuple(m["ter"] for m in mors),
            inverse=tuple(m["inverse"] for m in mors),
            identities=tuple(data["identities"]),
            composition=tuple(tuple(t) for t in data["composition"]),
        )
    except (KeyError, TypeError) as exc:
        raise InvalidInput(f"groupoid JSON missing field: {exc}") from exc
    return validate_groupoid(gpd)
