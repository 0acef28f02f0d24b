"""From a random point of the affine variety to its stratum.

Generates a valid window representation, restricts it to the singular
category, computes the intermediate extension and the stratifying
decomposition, and locates the stratum in the degeneration order.
"""
import random

from stratakit import (
    SModulePoint,
    Window,
    a_n_quiver,
    degeneration_leq,
    is_costable,
    is_stable,
    kan_intermediate,
    phi,
    restrict,
    same_stratum,
)
from stratakit.randrep import random_window_rep

q = a_n_quiver(2)
w = Window(0, 3)
rng = random.Random(2024)

rep = random_window_rep(q, w, rng, dim_choices=(0, 1, 1, 2))
print("dimension vector of the sampled representation:")
print("  ", {v.key(): d for v, d in sorted(rep.dims.items())})

M = restrict(rep)
print("\nfrozen part w:", {u.key(): d for u, d in sorted(M.w_vector().items())})

ki = kan_intermediate(M, w)
print("intermediate extension dimensions:",
      {v.key(): d for v, d in sorted(ki.rep.dims.items())})
print("stable:", is_stable(ki.rep), " co-stable:", is_costable(ki.rep))

res = phi(M, w)
print("\ndecomposition of the value of the stratifying functor:")
for x, m in sorted(res.mult.items()):
    print(f"  indecomposable at {x.key()}  x{m}")
print("stratum id (v, w):", res.stratum_id())

semis = SModulePoint.semisimple(q, w, M.w_vector())
print("\nsame stratum as the semisimple point with equal w?",
      same_stratum(M, semis, w))
print("semisimple stratum inside the closure of this one?",
      degeneration_leq(M, semis, w))
print("and conversely?", degeneration_leq(semis, M, w))
