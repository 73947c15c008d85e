"""The category of irreducible partitions of a fixed excess.

Objects are canonical representatives, one per isomorphism class
(block-size multisets), morphisms are strict fusions stored as raw set
maps.  Morphism enumeration walks block-to-class assignments that
respect the excess budget and then fills in injective block images
whose union never closes a cycle; that is exactly strictness.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .errors import CapExceededError, ValidationError
from .fusion import PartitionMorphism
from .partitions import (
    Partition,
    SetMap,
    compose,
    image_partition,
    make_partition,
)

EN_CAP = 5
HOM_MATERIALIZE_CAP = 4  # full hom sets above this get impractically large


def shapes_of_excess(n):
    """Block-size tuples of irreducible partitions with the given excess,
    weakly decreasing; one per isomorphism class."""

    def parts(total, most):
        if total == 0:
            yield ()
            return
        for first in range(min(total, most), 0, -1):
            for rest in parts(total - first, first):
                yield (first,) + rest

    # each block of size s contributes s - 1 to the excess
    shapes = [tuple(p + 1 for p in pat) for pat in parts(n, n)]
    return sorted(shapes, key=lambda s: (sum(s), s))


def canonical_object(shape):
    """The canonical partition with consecutive blocks of the given sizes."""
    blocks = []
    at = 0
    for size in shape:
        blocks.append(range(at, at + size))
        at += size
    return make_partition(at, blocks)


# ---------------------------------------------------------------------------
# morphism enumeration


def strict_fusions(source, target):
    """All strict fusions from source to target, as SetMaps.

    A fusion is strict exactly when each block maps injectively and the
    block images form a spanning hypertree in every target class; the
    search enumerates block-to-class assignments filtered by the excess
    budget, then injective images pruned by a cycle check.
    """
    if source.excess != target.excess:
        return ()
    sblocks = source.blocks
    tclasses = target.blocks
    budgets = [len(c) - 1 for c in tclasses]
    weights = [len(b) - 1 for b in sblocks]
    out = []
    assign = [0] * len(sblocks)
    used = [0] * len(tclasses)

    def assignments(b):
        if b == len(sblocks):
            if used == budgets:
                yield tuple(assign)
            return
        for c in range(len(tclasses)):
            if used[c] + weights[b] <= budgets[c]:
                used[c] += weights[b]
                assign[b] = c
                yield from assignments(b + 1)
                used[c] -= weights[b]

    for h in assignments(0):
        per_class = []
        feasible = True
        for c, cls in enumerate(tclasses):
            blocks_here = [sblocks[b] for b in range(len(sblocks)) if h[b] == c]
            choices = _spanning_fills(blocks_here, cls)
            if not choices:
                feasible = False
                break
            per_class.append(choices)
        if not feasible:
            continue
        for combo in itertools.product(*per_class):
            values = [0] * source.support_size
            for choice in combo:
                for pairs in choice:
                    for x, y in pairs:
                        values[x] = y
            out.append(SetMap(source.support_size, target.support_size, tuple(values)))
    out.sort(key=lambda f: f.values)
    return tuple(out)


def _spanning_fills(blocks, cls):
    """Injective images of each block inside cls whose union is a
    spanning hypertree: every image merge joins distinct components."""
    results = []
    parent = {x: x for x in cls}

    def find(p, x):
        while p[x] != x:
            x = p[x]
        return x

    def rec(bi, p):
        if bi == len(blocks):
            roots = {find(p, x) for x in cls}
            if len(roots) == 1:
                results.append(tuple(fills))
            return
        blk = blocks[bi]
        for image in itertools.permutations(cls, len(blk)):
            q = dict(p)
            ok = True
            head = find(q, image[0])
            for y in image[1:]:
                r = find(q, y)
                if r == head:
                    ok = False
                    break
                q[r] = head
            if ok:
                fills.append(tuple(zip(blk, image)))
                rec(bi + 1, q)
                fills.pop()

    fills = []
    if not blocks:
        return [()] if len(cls) == 1 else []
    rec(0, parent)
    return results


def brute_force_fusions(source, target):
    """Every map filtered by image partition; oracle for small supports."""
    m, mp = source.support_size, target.support_size
    out = []
    for values in itertools.product(range(mp), repeat=m):
        f = SetMap(m, mp, values)
        if image_partition(f, source) == target:
            if source.excess == target.excess:
                out.append(f)
    out.sort(key=lambda f: f.values)
    return tuple(out)


# ---------------------------------------------------------------------------
# automorphism groups


@dataclass(frozen=True)
class GroupPresentation:
    """A permutation group on the support, with its exact order."""

    degree: int
    generators: tuple  # tuple of value tuples
    order: int

    def to_json(self):
        return {
            "degree": self.degree,
            "generators": [list(g) for g in self.generators],
            "order": self.order,
        }


def _perm_compose(a, b):
    # apply b first, then a
    return tuple(a[b[i]] for i in range(len(a)))


def _group_order(degree, generators):
    """Orbit-stabilizer, recursing on the first moved point."""
    gens = [g for g in generators if any(g[i] != i for i in range(degree))]
    if not gens:
        return 1
    point = min(i for g in gens for i in range(degree) if g[i] != i)
    orbit = {point: tuple(range(degree))}
    frontier = [point]
    while frontier:
        x = frontier.pop()
        witness = orbit[x]
        for g in gens:
            y = g[x]
            if y not in orbit:
                orbit[y] = _perm_compose(g, witness)
                frontier.append(y)
    stab = set()
    for x, witness in orbit.items():
        for g in gens:
            y = g[x]
            rep = orbit[y]
            inv = [0] * degree
            for i, v in enumerate(rep):
                inv[v] = i
            stab.add(_perm_compose(tuple(inv), _perm_compose(g, witness)))
    return len(orbit) * _group_order(degree, tuple(stab))


def automorphism_group(p):
    """Support permutations preserving the partition.

    Generators: a transposition inside every block of size >= 2 plus a
    cyclic shuffle inside larger blocks, and swaps of adjacent
    equal-size blocks.
    """
    m = p.support_size
    gens = []
    for block in p.blocks:
        if len(block) >= 2:
            values = list(range(m))
            values[block[0]], values[block[1]] = values[block[1]], values[block[0]]
            gens.append(tuple(values))
        if len(block) >= 3:
            values = list(range(m))
            for i in range(len(block)):
                values[block[i]] = block[(i + 1) % len(block)]
            gens.append(tuple(values))
    for b1, b2 in zip(p.blocks, p.blocks[1:]):
        if len(b1) == len(b2):
            values = list(range(m))
            for x, y in zip(b1, b2):
                values[x], values[y] = y, x
            gens.append(tuple(values))
    order = _group_order(m, tuple(gens))
    return GroupPresentation(degree=m, generators=tuple(gens), order=order)


def aut_order_formula(p):
    """Closed form: product over sizes of (size!)^mult * mult!."""
    from math import factorial

    mult = {}
    for block in p.blocks:
        mult[len(block)] = mult.get(len(block), 0) + 1
    order = 1
    for size, k in mult.items():
        order *= factorial(size) ** k * factorial(k)
    return order


# ---------------------------------------------------------------------------
# the category table


@dataclass
class CategoryTable:
    """Skeletal table: canonical objects, strata, hom sets, groups.

    homs may be None when materializing them was skipped (large n);
    every accessor that needs them raises then.
    """

    n: int
    objects: tuple
    strata: tuple  # per object: its block count i
    groups: tuple  # per object: GroupPresentation
    homs: dict | None  # (i, j) -> tuple of SetMap

    def object_index(self, p):
        target = p.shape()
        for i, q in enumerate(self.objects):
            if q.shape() == target:
                return i
        raise ValidationError(f"no object of shape {target} in the table")

    def hom(self, i, j):
        if self.homs is None:
            raise ValidationError("hom sets were not materialized for this table")
        return self.homs[(i, j)]

    def identity_of(self, i):
        m = self.objects[i].support_size
        return SetMap(m, m, tuple(range(m)))

    def glue_pattern_count(self, i, j):
        """Orbits of hom(i, j) under post-composition with target
        automorphisms; the classical way these morphisms get counted."""
        maps = self.hom(i, j)
        if not maps:
            return 0
        index = {f.values: k for k, f in enumerate(maps)}
        parent = list(range(len(maps)))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for g in self.groups[j].generators:
            m = self.objects[j].support_size
            gmap = SetMap(m, m, g)
            for k, f in enumerate(maps):
                gf = compose(gmap, f)
                other = index[gf.values]
                rk, ro = find(k), find(other)
                if rk != ro:
                    parent[ro] = rk
        return len({find(k) for k in range(len(maps))})

    def validate(self):
        for i, p in enumerate(self.objects):
            if not p.is_irreducible:
                raise ValidationError(f"object {p} has a singleton block")
            if p.excess != self.n:
                raise ValidationError(f"object {p} has wrong excess")
            if self.strata[i] != p.components:
                raise ValidationError(f"stratum index wrong at {p}")
        if self.homs is None:
            return True
        for (i, j), maps in self.homs.items():
            src, tgt = self.objects[i], self.objects[j]
            for f in maps:
                if image_partition(f, src) != tgt:
                    raise ValidationError(f"listed map {f.values} is not a fusion")
                PartitionMorphism(src, tgt, f)  # validates
        for i in range(len(self.objects)):
            ident = self.identity_of(i)
            if ident not in self.homs[(i, i)]:
                raise ValidationError(f"identity missing at object {i}")
        return True

    def check_composition_closure(self):
        """Compose every composable pair and look it up; returns the
        number of compositions checked."""
        checked = 0
        nobj = len(self.objects)
        lookup = {
            key: frozenset(f.values for f in maps) for key, maps in self.homs.items()
        }
        for i in range(nobj):
            for j in range(nobj):
                first = self.homs[(i, j)]
                if not first:
                    continue
                for k in range(nobj):
                    second = self.homs[(j, k)]
                    if not second:
                        continue
                    allowed = lookup[(i, k)]
                    for f in first:
                        for g in second:
                            gf = compose(g, f)
                            checked += 1
                            if gf.values not in allowed:
                                raise ValidationError(
                                    f"composite {gf.values} of {f.values} then "
                                    f"{g.values} is not listed"
                                )
        return checked

    def hom_size_matrix(self):
        nobj = len(self.objects)
        return [
            [len(self.hom(i, j)) for j in range(nobj)] for i in range(nobj)
        ]

    def to_json(self):
        data = {
            "n": self.n,
            "objects": [p.to_json() for p in self.objects],
            "strata": list(self.strata),
            "automorphisms": [g.to_json() for g in self.groups],
        }
        if self.homs is not None:
            data["homs"] = {
                f"{i}->{j}": [list(f.values) for f in maps]
                for (i, j), maps in sorted(self.homs.items())
            }
            data["hom_counts"] = self.hom_size_matrix()
            data["glue_pattern_counts"] = [
                [self.glue_pattern_count(i, j) for j in range(len(self.objects))]
                for i in range(len(self.objects))
            ]
        return data


def enumerate_en(n, cap=EN_CAP, include_homs=None):
    """The table for excess n: canonical objects and all strict fusions.

    Hom sets are materialized by default only for n small enough that
    their total size stays sane; objects, strata and automorphism
    groups are always present.
    """
    if n < 1:
        raise ValidationError("excess must be at least 1")
    if n > cap:
        raise CapExceededError(f"n={n} exceeds cap {cap}")
    if include_homs is None:
        include_homs = n <= HOM_MATERIALIZE_CAP
    objects = tuple(canonical_object(s) for s in shapes_of_excess(n))
    strata = tuple(p.components for p in objects)
    groups = tuple(automorphism_group(p) for p in objects)
    homs = None
    if include_homs:
        homs = {}
        for i, src in enumerate(objects):
            for j, tgt in enumerate(objects):
                homs[(i, j)] = strict_fusions(src, tgt)
    return CategoryTable(n=n, objects=objects, strata=strata, groups=groups, homs=homs)


def filtration(table, i):
    """Full subcategory of objects with at most i components."""
    if not 1 <= i <= table.n:
        raise ValidationError(f"filtration index {i} out of range 1..{table.n}")
    keep = [k for k in range(len(table.objects)) if table.strata[k] <= i]
    reindex = {old: new for new, old in enumerate(keep)}
    homs = None
    if table.homs is not None:
        homs = {
            (reindex[a], reindex[b]): maps
            for (a, b), maps in table.homs.items()
            if a in reindex and b in reindex
        }
    return CategoryTable(
        n=table.n,
        objects=tuple(table.objects[k] for k in keep),
        strata=tuple(table.strata[k] for k in keep),
        groups=tuple(table.groups[k] for k in keep),
        homs=homs,
    )


def verify_nice_filtration(table):
    """Stratum discipline: nothing maps from fewer components into
    more, and within a stratum every morphism is an isomorphism.

    Returns a certificate dict; violations are reported, not raised.
    """
    for i in range(len(table.objects)):
        for j in range(len(table.objects)):
            maps = table.hom(i, j)
            if table.strata[j] > table.strata[i] and maps:
                return {
                    "passed": False,
                    "reason": "morphism into a deeper stratum",
                    "source": str(table.objects[i]),
                    "target": str(table.objects[j]),
                    "map": list(maps[0].values),
                }
            if table.strata[j] == table.strata[i]:
                for f in maps:
                    if not f.is_bijective():
                        return {
                            "passed": False,
                            "reason": "non-isomorphism within a stratum",
                            "source": str(table.objects[i]),
                            "target": str(table.objects[j]),
                            "map": list(f.values),
                        }
    return {"passed": True, "strata": sorted(set(table.strata))}


# ---------------------------------------------------------------------------
# essential cofibrancy


def verify_essentially_cofibrant(n, model, dim_cap=None):
    """Checks that lower-stratum images glued with the bad diagonal
    cover the fat diagonal bijectively, stratum by stratum.

    For each object: the colimit of powers over arrows into lower
    strata, pushed out along its overlap with the bad diagonal, must
    map one-to-one onto the fat diagonal of the full power; the
    automorphisms must act freely off the fat diagonal.
    """
    from .powers import (
        bad_diagonal_cells,
        coincidence_partition,
        fat_diagonal_cells,
        induced_power_map,
    )
    from .simplicial import PRODUCT_DIM_CAP, power

    if n > 3:
        raise CapExceededError("cofibrancy check is capped at excess 3")
    cap = dim_cap or PRODUCT_DIM_CAP
    table = enumerate_en(n)
    powers = {}

    def power_of(m):
        if m not in powers:
            powers[m] = power(model, m, dim_cap=cap)
        return powers[m]

    strata_reports = []
    for idx, lam in enumerate(table.objects):
        m = lam.support_size
        big = power_of(m)
        fat = fat_diagonal_cells(big)
        bad = bad_diagonal_cells(big, lam)
        lower = [j for j in range(len(table.objects)) if table.strata[j] < table.strata[idx]]
        arrows = []
        for j in lower:
            for f in table.hom(idx, j):
                arrows.append((j, f))
        arrow_id = {(j, f.values): a for a, (j, f) in enumerate(arrows)}
        # disjoint simplices of the lower powers, glued over commuting triangles
        nodes = {}
        for a, (j, _) in enumerate(arrows):
            for cell in power_of(table.objects[j].support_size).all_cells():
                nodes[(a, cell)] = (a, cell)
        parent = {k: k for k in nodes}

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        def union(x, y):
            rx, ry = find(x), find(y)
            if rx != ry:
                parent[ry] = rx

        for a, (j, f) in enumerate(arrows):
            pj = power_of(table.objects[j].support_size)
            for k in lower:
                pk = power_of(table.objects[k].support_size)
                for g in table.hom(j, k):
                    gf = compose(g, f)
                    b = arrow_id[(k, gf.values)]
                    gmap = induced_power_map(g, pk, pj)
                    for cell in pk.all_cells():
                        image_ref = gmap.cell_image(cell)
                        union((a, image_ref[0]), (b, cell))
        # image of each class inside the big power
        image_of_class = {}
        conflict = None
        for a, (j, f) in enumerate(arrows):
            pj = power_of(table.objects[j].support_size)
            fmap = induced_power_map(f, pj, big)
            for cell in pj.all_cells():
                root = find((a, cell))
                img = fmap.cell_image(cell)[0]
                if root in image_of_class and image_of_class[root] != img:
                    conflict = (root, image_of_class[root], img)
                image_of_class[root] = img
        off_bad = {}
        double = None
        for root, img in image_of_class.items():
            if img in bad:
                continue
            if img in off_bad:
                double = img
            off_bad[img] = root
        covered = set(off_bad) | bad
        report = {
            "object": str(lam),
            "stratum": table.strata[idx],
            "arrows": len(arrows),
            "colimit_classes": len(set(map(find, nodes))) if nodes else 0,
            "fat_cells": len(fat),
            "bad_cells": len(bad),
            "glued_cells": len(covered),
            "passed": covered == fat and double is None and conflict is None,
        }
        if conflict is not None:
            report["conflict"] = "a colimit class maps to two different cells"
        if double is not None:
            report["overlap_cell"] = repr(double)
        if covered != fat:
            sample = sorted(covered.symmetric_difference(fat), key=repr)[:2]
            report["mismatch_sample"] = [repr(c) for c in sample]
        # freeness of the automorphisms off the fat diagonal
        group = table.groups[idx]
        stuck = None
        for cell in big.all_cells():
            if cell in fat:
                continue
            for g in group.generators:
                moved = tuple(cell[g[t]] for t in range(m))
                if moved == cell:
                    k_part = coincidence_partition(cell)
                    stuck = (repr(cell), list(g), str(k_part))
                    break
            if stuck:
                break
        report["free_off_fat"] = stuck is None
        if stuck:
            report["fixed_cell"] = stuck
        strata_reports.append(report)
    return {
        "n": n,
        "passed": all(r["passed"] and r["free_off_fat"] for r in strata_reports),
        "strata": strata_reports,
    }
