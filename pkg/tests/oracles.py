"""Reference computations that never touch the engine's backward pass.

A DAG is described as a list of ops; entry ``i`` is one of
``("leaf", value)``, ``("add", j, k)``, ``("mul", j, k)``, ``("relu", j)``
with ``j, k < i``. The last entry is the root.
"""
import random

KINK = 1e-3


def evaluate(desc, leaf_values=None):
    vals = []
    for i, op in enumerate(desc):
        kind = op[0]
        if kind == "leaf":
            vals.append(op[1] if leaf_values is None else leaf_values.get(i, op[1]))
        elif kind == "add":
            vals.append(vals[op[1]] + vals[op[2]])
        elif kind == "mul":
            vals.append(vals[op[1]] * vals[op[2]])
        elif kind == "relu":
            vals.append(max(0.0, vals[op[1]]))
        else:
            raise ValueError(kind)
    return vals


def leaves(desc):
    return [i for i, op in enumerate(desc) if op[0] == "leaf"]


def kink_free(desc):
    vals = evaluate(desc)
    return all(abs(vals[op[1]]) > KINK for op in desc if op[0] == "relu")


def random_dag(rng, max_nodes=50):
    """Random DAG with ops drawn uniformly; operands may be shared."""
    n_leaves = rng.randint(1, 8)
    n_total = rng.randint(n_leaves + 1, max_nodes)
    desc = [("leaf", rng.uniform(-2.0, 2.0)) for _ in range(n_leaves)]
    while len(desc) < n_total:
        kind = rng.choice(("add", "mul", "relu"))
        if kind == "relu":
            desc.append(("relu", rng.randrange(len(desc))))
        else:
            desc.append((kind, rng.randrange(len(desc)), rng.randrange(len(desc))))
    return desc


def random_tree(rng, max_nodes=50):
    """Random expression tree: every node feeds at most one consumer."""
    budget = rng.randint(1, max_nodes)
    desc = []

    def grow(budget):
        # returns index of the subtree root; uses at most `budget` nodes
        if budget <= 2:
            desc.append(("leaf", rng.uniform(-2.0, 2.0)))
            return len(desc) - 1
        kind = rng.choice(("add", "mul", "relu"))
        if kind == "relu":
            j = grow(budget - 1)
            desc.append(("relu", j))
        else:
            left = rng.randint(1, budget - 2)
            j = grow(left)
            k = grow(budget - 1 - left)
            desc.append((kind, j, k))
        return len(desc) - 1

    grow(budget)
    return desc


def kink_free_sample(make, rng, tries=1000):
    for _ in range(tries):
        desc = make(rng)
        if kink_free(desc):
            return desc
    raise RuntimeError("no kink-free sample found")


def finite_difference(desc, leaf, h=1e-6):
    base = desc[leaf][1]
    up = evaluate(desc, {leaf: base + h})[-1]
    down = evaluate(desc, {leaf: base - h})[-1]
    return (up - down) / (2 * h)


def chain_rule(desc, leaf):
    """d(root)/d(leaf) by recursive symbolic differentiation (trees only)."""
    vals = evaluate(desc)

    def d(i):
        op = desc[i]
        kind = op[0]
        if kind == "leaf":
            return 1.0 if i == leaf else 0.0
        if kind == "add":
            return d(op[1]) + d(op[2])
        if kind == "mul":
            return d(op[1]) * vals[op[2]] + vals[op[1]] * d(op[2])
        return d(op[1]) if vals[op[1]] > 0.0 else 0.0

    return d(len(desc) - 1)


def build(store, desc):
    """Materialise ``desc`` in an engine store; returns the node ids."""
    ids = []
    for op in desc:
        kind = op[0]
        if kind == "leaf":
            ids.append(store.create_value(op[1]))
        elif kind == "add":
            ids.append(store.add(ids[op[1]], ids[op[2]]))
        elif kind == "mul":
            ids.append(store.multiply(ids[op[1]], ids[op[2]]))
        else:
            ids.append(store.relu(ids[op[1]]))
    return ids


def rel_err(a, b):
    scale = max(abs(a), abs(b))
    return 0.0 if scale == 0.0 else abs(a - b) / scale


def seeded(seed):
    return random.Random(seed)
