"""Take a network with wildly unbalanced neurons, find a parameter vector with
the same realization whose entries are controlled by the Lipschitz-type norm,
and check the certificate.

    python demos/bounded_reparameterization.py
"""
import numpy as np

from reluparam import (
    BoxDomain,
    certify,
    flatten,
    lipnorm,
    max_norm,
    neuron_scale,
    random_net,
    reparameterize,
    verify_equivalence,
)

rng = np.random.default_rng(7)
box = BoxDomain(-1.0, 2.0, 2)
net = random_net(rng, 2, 5)

# Blow up two neurons.  The realization does not change, the parameters do.
inflated = neuron_scale(neuron_scale(net, 0, 1e5), 3, 1e-5)
print(f"max |theta| before inflation: {max_norm(flatten(net)):.3g}")
print(f"max |theta| after inflation:  {max_norm(flatten(inflated)):.3g}")

rep = lipnorm(inflated, box)
print(f"Lipschitz seminorm {rep.lip_seminorm:.4f}, inf |f| {rep.inf_abs:.4f}, "
      f"norm {rep.lipnorm_A:.4f}")

res = reparameterize(inflated, box)
print(f"construction case: {res.case}")
print(f"max |theta'| = {max_norm(flatten(res.net)):.4f} <= bound {res.bound_rhs:.4f}")
print(f"largest realization difference: {verify_equivalence(inflated, res.net, box):.2e}")

cert = certify(inflated, box)
for name, ok in cert.passes.items():
    print(f"  {name:15s} {'ok' if ok else 'FAILED'}")
