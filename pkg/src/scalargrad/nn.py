"""Neurons, layers and MLPs wired into a :class:`~scalargrad.engine.GraphStore`.

The forward graph is built once per set of input nodes. Later calls with the
returned binding only recompute node data, so ids and cached backward orders
stay valid across training iterations.
"""
from dataclasses import dataclass, field

from .engine import NONE, reevaluate


@dataclass
class NeuronSpec:
    weight_ids: list
    bias_id: int
    nonlin: bool = True


@dataclass
class LayerSpec:
    neurons: list
    nin: int


@dataclass
class MlpSpec:
    nin: int
    layers: list
    layer_sizes: list

    @property
    def nout(self):
        return self.layer_sizes[-1]


@dataclass
class ForwardBinding:
    input_ids: list
    output_id: object  # int, or list of ints for multi-output final layers
    eval_order: list
    store: object = field(default=None, repr=False, compare=False)
    _nodes: list = field(default_factory=list, repr=False, compare=False)

    def reevaluate(self):
        reevaluate(self._nodes)


def param_count(nin, sizes):
    total, fan_in = 0, nin
    for n in sizes:
        total += (fan_in + 1) * n
        fan_in = n
    return total


def new_mlp(store, nin, sizes, rng):
    """Create parameter leaves for an MLP with ``nin`` inputs and layer widths
    ``sizes``; every layer except the last applies ReLU.

    Weights and biases are drawn uniformly on [-1, 1], layer by layer and
    neuron by neuron, weights in input order followed by the bias.
    """
    sizes = list(sizes)
    if not sizes:
        raise ValueError("MLP needs at least one layer")
    if nin < 1 or any(s < 1 for s in sizes):
        raise ValueError(f"layer sizes must be positive, got nin={nin}, sizes={sizes}")
    layers = []
    fan_in = nin
    for k, nout in enumerate(sizes):
        nonlin = k < len(sizes) - 1
        neurons = []
        for _ in range(nout):
            w = [store.create_value(rng.uniform(-1.0, 1.0), isparam=True) for _ in range(fan_in)]
            b = store.create_value(rng.uniform(-1.0, 1.0), isparam=True)
            neurons.append(NeuronSpec(w, b, nonlin))
        layers.append(LayerSpec(neurons, fan_in))
        fan_in = nout
    return MlpSpec(nin, layers, sizes)


def get_parameters(mlp):
    ids = []
    for layer in mlp.layers:
        for neuron in layer.neurons:
            ids.extend(neuron.weight_ids)
            ids.append(neuron.bias_id)
    return ids


def _wire_neuron(store, neuron, xs):
    # ((w1*x1 + w2*x2) + ...) + b, left to right
    acc = store.multiply(neuron.weight_ids[0], xs[0])
    for w, x in zip(neuron.weight_ids[1:], xs[1:]):
        acc = store.add(acc, store.multiply(w, x))
    acc = store.add(acc, neuron.bias_id)
    return store.relu(acc) if neuron.nonlin else acc


def derived_order(store, output_ids):
    """Derived nodes feeding ``output_ids``, each listed after its operands."""
    seen = set()
    nodes = []
    for out in output_ids:
        for nid in store.backward_order(out):
            if nid not in seen:
                seen.add(nid)
                nodes.append(nid)
    # ids increase along every edge, so sorting gives an operands-first order
    return sorted(nid for nid in nodes if store.node(nid).op != NONE)


def make_binding(store, input_ids, output_id):
    outs = output_id if isinstance(output_id, list) else [output_id]
    order = derived_order(store, outs)
    return ForwardBinding(
        list(input_ids), output_id, order, store, [store.node(i) for i in order]
    )


def forward(store, mlp, input_ids, binding=None):
    """Return ``(output, binding)`` for the MLP applied to ``input_ids``.

    Without a binding the graph is wired from scratch. With one, node data is
    recomputed from the current leaf values and no nodes are created.
    ``output`` is a node id, or a list of ids when the last layer is wider
    than one.
    """
    input_ids = list(input_ids)
    if len(input_ids) != mlp.nin:
        raise ValueError(f"MLP expects {mlp.nin} inputs, got {len(input_ids)}")
    if binding is not None:
        if binding.store is not store:
            raise ValueError("binding belongs to a different GraphStore")
        if binding.input_ids != input_ids:
            raise ValueError("binding was wired for different input nodes")
        binding.reevaluate()
        return binding.output_id, binding

    xs = input_ids
    for layer in mlp.layers:
        xs = [_wire_neuron(store, neuron, xs) for neuron in layer.neurons]
    out = xs[0] if len(xs) == 1 else xs
    return out, make_binding(store, input_ids, out)
