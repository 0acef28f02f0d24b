"""Fibers of the desingularization over a fixed point, over GF(2).

Enumerates every submodule dimension vector of the cokernel module CK and
lifts one witness back to an explicit stable representation.
"""
import random

from stratakit import Window, a_n_quiver, fiber, phi, restrict, validate
from stratakit.quiver_core import parse_vertex
from stratakit.randrep import random_window_rep

q = a_n_quiver(2)
w = Window(0, 4)
rng = random.Random(7)

rep = random_window_rep(q, w, rng, dim_choices=(0, 1, 1), support=Window(0, 1))
M = restrict(rep)
res = phi(M, w)
print("point with w =", {u.key(): d for u, d in sorted(M.w_vector().items())})
print("intermediate extension v0 =", {x.key(): d for x, d in sorted(res.v.items())})

base = fiber(M, dict(res.v), 2, w)
print("\nsubmodule dimension vectors of CK over GF(2):")
for vec in base.attained:
    print("  ", vec if vec else "0 (the distinguished point)")

for uvec in base.attained:
    v_target = dict(base.v0)
    for key, d in uvec.items():
        x = parse_vertex(key)
        v_target[x] = v_target.get(x, 0) + d
    out = fiber(M, v_target, 2, w)
    tag = "nonempty" if out.nonempty else "empty"
    print(f"\nfiber at v = {({x.key(): d for x, d in sorted(v_target.items())})}: {tag}")
    if out.witness is not None:
        wit = out.witness
        print("  witness dims:", {x.key(): d for x, d in sorted(wit.dims.items())})
        print("  witness valid:", validate(wit) == [])
