"""Brute-force oracle for the derived example values, independent of partglob.

Everything here is plain Python over explicit tables. The output is frozen
in tests/oracles/derived.json and compared against the package in
tests/test_oracles.py. Rerun only if an example definition changes.
"""
import itertools
import json
from pathlib import Path

OUT = Path(__file__).resolve().parents[1] / "tests" / "oracles" / "derived.json"

# order-2 group {1, x}; None = undefined
G = ["1", "x"]
GMUL = {("1", "1"): "1", ("1", "x"): "x", ("x", "1"): "x", ("x", "x"): "1"}
INV = {"1": "1", "x": "x"}

S = ["0", "u", "v", "t"]
SMUL = {(a, b): "0" for a in S for b in S}
SMUL[("v", "t")] = SMUL[("t", "v")] = "u"
THETA = {"1": {a: a for a in S}, "x": {"0": "0", "u": "v", "v": "u", "t": None}}


def classes(group, inv, gmul, carrier, theta):
    """Blocks of (x,a) ~ (y,b) iff (y^-1 x) a = b, by a double loop."""
    pairs = [(x, a) for x in group for a in carrier]
    rel = lambda p, q: theta[gmul[(inv[q[0]], p[0])]][p[1]] == q[1]  # noqa: E731
    blocks = []
    for p in pairs:
        for b in blocks:
            if rel(p, b[0]):
                b.append(p)
                break
        else:
            blocks.append([p])
    return sorted(sorted(b, key=lambda p: (group.index(p[0]), carrier.index(p[1]))) for b in blocks)


def order_key(group, carrier):
    return lambda b: (group.index(b[0][0]), carrier.index(b[0][1]))


def example_classes():
    bl = classes(G, INV, GMUL, S, THETA)
    bl.sort(key=order_key(G, S))
    return [[list(p) for p in b] for b in bl]


def example_violations():
    """All (x,u,s,t) with x(x^-1(su)t) != s x(x^-1(u)t), u in D_x."""
    out = []
    for x in G:
        dom = [THETA[x][a] for a in S if THETA[x][a] is not None]
        for u in S:
            if u not in dom:
                continue
            for s, t in itertools.product(S, S):
                xi = INV[x]
                lhs = THETA[x][SMUL[(THETA[xi][SMUL[(s, u)]], t)]]
                rhs = SMUL[(s, THETA[x][SMUL[(THETA[xi][u], t)]])]
                if lhs != rhs:
                    out.append({"x": x, "u": u, "s": s, "t": t, "lhs": lhs, "rhs": rhs})
    return out


def least_congruence(n, ops, pairs):
    """Smallest partition containing ``pairs`` with the substitution property (exhaustive)."""

    def partitions(i, blocks):
        if i == n:
            yield [list(b) for b in blocks]
            return
        for b in blocks:
            b.append(i)
            yield from partitions(i + 1, blocks)
            b.pop()
        blocks.append([i])
        yield from partitions(i + 1, blocks)
        blocks.pop()

    best = None
    for blocks in partitions(0, []):
        lab = {a: min(b) for b in blocks for a in b}
        if any(lab[a] != lab[b] for a, b in pairs):
            continue
        good = all(
            lab[f(*x)] == lab[f(*y)]
            for f, arity in ops
            for x in itertools.product(range(n), repeat=arity)
            for y in itertools.product(range(n), repeat=arity)
            if all(lab[p] == lab[q] for p, q in zip(x, y))
        )
        if good and (best is None or len(blocks) > len(best)):
            best = blocks
    return sorted(sorted(b) for b in best)


def unital01_table():
    """(S^U, *) for S = {0,1}, D_x = {0}, 1_1 = 1, 1_x = 0, straight from the product formula."""
    s = ["0", "1"]
    mul = lambda a, b: "1" if a == b == "1" else "0"  # noqa: E731
    theta = {"1": {"0": "0", "1": "1"}, "x": {"0": "0", "1": None}}
    one = {"1": "1", "x": "0"}
    bl = classes(G, INV, GMUL, s, theta)
    bl.sort(key=order_key(G, s))
    name = lambda b: f"[{b[0][0]},{b[0][1]}]"  # noqa: E731
    cls_of = {p: name(b) for b in bl for p in b}

    def star(x, a, y, b):
        z = GMUL[(INV[x], y)]
        inner = theta[z][mul(one[INV[z]], b)]
        return cls_of[(x, mul(a, inner))]

    table = {}
    for b1 in bl:
        for b2 in bl:
            vals = {star(x, a, y, b) for x, a in b1 for y, b in b2}
            assert len(vals) == 1
            table[f"{name(b1)}*{name(b2)}"] = vals.pop()
    return {"classes": [name(b) for b in bl], "table": table}


def z4_restriction():
    """Z4 acting on itself by addition, restricted to {1,2}: D_g for each g."""
    sub = [1, 2]
    return {str(g): sorted((a + g) % 4 for a in sub if (a + g) % 4 in sub) for g in range(4)}


def main():
    add4 = (lambda a, b: (a + b) % 4, 2)
    ex_mul = (lambda a, b: S.index(SMUL[(S[a], S[b])]), 2)
    data = {
        "example_classes": example_classes(),
        "example_violations": example_violations(),
        "closure_example_u0": least_congruence(4, [ex_mul], [(1, 0)]),
        "closure_z4_02": least_congruence(4, [add4], [(0, 2)]),
        "z4_restriction_domains": z4_restriction(),
        "unital01": unital01_table(),
    }
    OUT.parent.mkdir(parents=True, exist_ok=True)
    OUT.write_text(json.dumps(data, indent=2) + "\n")
    print(f"wrote {OUT}")


if __name__ == "__main__":
    main()
