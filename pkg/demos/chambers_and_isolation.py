"""The geometry under the hood: neuron classes, kink groups, chambers and
isolation points for a small two-dimensional network.

    python demos/chambers_and_isolation.py
"""
import numpy as np

from reluparam import BoxDomain, ShallowNet, classify_neurons, distinct_kinks, enumerate_chambers
from reluparam.geometry import check_isolation, isolation_points

# neurons 0 and 2 share a kink (x + y = 1) with opposite orientation,
# neuron 3 never fires on the box, neuron 4 always does
net = ShallowNet(
    w=[[1.0, 1.0], [1.0, -2.0], [-2.0, -2.0], [0.0, 1.0], [1.0, 0.0]],
    b=[-1.0, 0.5, 2.0, -5.0, 3.0],
    v=[1.0, -0.5, 2.0, 4.0, 0.25],
    c=0.1,
)
box = BoxDomain(0.0, 1.0, 2)

cls = classify_neurons(net, box)
print("always active:", cls.A1, " kinked:", cls.A2, " never active:", cls.A3)
for g in cls.groups:
    print(f"kink group rep {g.representative}: members {g.members}, orientations {g.orientations}")

print("\nchambers:")
for ch in enumerate_chambers(net, box):
    print(f"  pattern {ch.pattern}  interior point {np.round(ch.interior_point, 3)}  "
          f"slack {ch.slack:.3f}  gradient {np.round(ch.gradient, 3)}")

kinks = distinct_kinks(net, box)
wit = isolation_points(kinks, box)
print("\nisolation points:", np.round(wit.points, 3).tolist(), " radius", np.round(wit.radius, 3).tolist())
print("isolation verified:", check_isolation(wit, box))
