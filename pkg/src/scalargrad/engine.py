"""Scalar reverse-mode autodiff over a DAG of value nodes addressed by integer id.

Nodes live in a :class:`GraphStore`. Operations create new nodes and never
mutate existing structure, so ids grow monotonically and operands always have
smaller ids than their consumers.
"""
from collections import deque

NONE = ""
ADD = "+"
MUL = "*"
RELU = "relu"


class ValueNode:
    __slots__ = ("id", "data", "grad", "prev", "next", "op", "isparam", "gc", "args")

    def __init__(self, id, data, op=NONE, prev=(), isparam=False):
        self.id = id
        self.data = float(data)
        self.grad = 0.0
        self.prev = list(prev)
        self.next = []
        self.op = op
        self.isparam = bool(isparam)
        self.gc = 0
        # operand node objects, parallel to prev; avoids dict lookups in hot loops
        self.args = ()

    def __repr__(self):
        return f"ValueNode(id={self.id}, data={self.data!r}, op={self.op!r})"


class GraphStore:
    def __init__(self):
        self.nodes = {}
        self.next_id = 1
        self.version = 0
        # root id -> (order, version when computed)
        self.topo_cache = {}
        self._node_cache = {}

    def __len__(self):
        return len(self.nodes)

    def node(self, id):
        try:
            return self.nodes[id]
        except KeyError:
            raise KeyError(f"unknown node id {id}") from None

    def _new(self, data, op, args, isparam=False):
        n = ValueNode(self.next_id, data, op, [a.id for a in args], isparam)
        n.args = tuple(args)
        for a in args:
            a.next.append(n.id)
        self.nodes[n.id] = n
        self.next_id += 1
        self.version += 1
        return n.id

    # -- construction -------------------------------------------------------

    def create_value(self, data, isparam=False):
        return self._new(data, NONE, (), isparam)

    def add(self, a, b):
        na, nb = self.node(a), self.node(b)
        return self._new(na.data + nb.data, ADD, (na, nb))

    def multiply(self, a, b):
        na, nb = self.node(a), self.node(b)
        return self._new(na.data * nb.data, MUL, (na, nb))

    def relu(self, a):
        na = self.node(a)
        # NaN passes through rather than being clamped to 0
        return self._new(0.0 if na.data <= 0.0 else na.data, RELU, (na,))

    def get_data(self, id):
        return self.node(id).data

    def set_data(self, id, x):
        # data edits leave the structure (and so every cached order) intact
        self.node(id).data = float(x)

    def get_grad(self, id):
        return self.node(id).grad

    # -- traversal ----------------------------------------------------------

    def _compute_order(self, root):
        """Breadth-first walk from ``root`` that defers a node until every
        consumer lying on a path to ``root`` has been emitted.

        The grad counter ``gc`` of a node counts how many of those consumer
        edges have been processed so far.
        """
        reachable = {root.id: root}
        frontier = [root]
        while frontier:
            n = frontier.pop()
            for a in n.args:
                if a.id not in reachable:
                    reachable[a.id] = a
                    frontier.append(a)

        # edges counted with multiplicity, so add(a, a) contributes two
        needed = dict.fromkeys(reachable, 0)
        for n in reachable.values():
            for a in n.args:
                needed[a.id] += 1

        order = []
        queue = deque([root])
        queued = {root.id}
        while queue:
            n = queue.popleft()
            if n.gc < needed[n.id]:
                queue.append(n)
                continue
            order.append(n)
            for a in n.args:
                a.gc += 1
                if a.id not in queued:
                    queued.add(a.id)
                    queue.append(a)

        for n in order:
            n.gc = 0
        return order

    def _order_nodes(self, root):
        hit = self._node_cache.get(root)
        if hit is not None and hit[1] == self.version:
            return hit[0]
        nodes = self._compute_order(self.node(root))
        self._node_cache[root] = (nodes, self.version)
        self.topo_cache[root] = ([n.id for n in nodes], self.version)
        return nodes

    def backward_order(self, root):
        self._order_nodes(root)
        return self.topo_cache[root][0]

    # -- gradients ----------------------------------------------------------

    def backward(self, root):
        nodes = self._order_nodes(root)
        nodes[0].grad += 1.0
        for n in nodes:
            op = n.op
            if op == NONE:
                continue
            g = n.grad
            if op == ADD:
                a, b = n.args
                a.grad += g
                b.grad += g
            elif op == MUL:
                a, b = n.args
                a.grad += g * b.data
                b.grad += g * a.data
            else:
                a = n.args[0]
                if a.data > 0.0:
                    a.grad += g

    def step(self, root, lr):
        for n in self._order_nodes(root):
            if n.isparam:
                n.data -= lr * n.grad

    def zero_grads(self, root):
        for n in self._order_nodes(root):
            n.grad = 0.0
            n.gc = 0

    def zero_nonparam_grads(self, root):
        for n in self._order_nodes(root):
            if not n.isparam:
                n.grad = 0.0
                n.gc = 0

    # -- display ------------------------------------------------------------

    def show(self, id):
        n = self.node(id)
        op = "''" if n.op == NONE else n.op
        return (
            f"Value(self: {n.id}, data: {n.data!r}, grad: {n.grad!r}, "
            f"prev: {','.join(map(str, n.prev))}, next: {','.join(map(str, n.next))}, "
            f"op: {op}, isparam: {int(n.isparam)}, GC: {float(n.gc)!r})"
        )


def reevaluate(nodes):
    """Recompute ``data`` for derived nodes listed operands-first."""
    for n in nodes:
        op = n.op
        if op == ADD:
            a, b = n.args
            n.data = a.data + b.data
        elif op == MUL:
            a, b = n.args
            n.data = a.data * b.data
        elif op == RELU:
            d = n.args[0].data
            n.data = 0.0 if d <= 0.0 else d
