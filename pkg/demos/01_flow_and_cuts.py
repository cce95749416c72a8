"""Computation flow, shadow prices and the three kinds of cut."""

# %%
# A three-node cycle: traffic enters at s, must be processed at v, and can
# only reach v by first passing through t.  The unit that leaves s therefore
# uses link (s, t) twice, once before and once after processing.
from compnet import ComputingNetwork, Link, Node, decompose, max_flow
from compnet.cuts import (approx_joint_cut, min_comm_cut_exact, min_comp_cut_exact,
                          min_joint_cut_exact)
from compnet.testkit.fixtures import fixture

net = ComputingNetwork(
    [Node("s"), Node("t"), Node("v", 2.0)],
    [Link("s", "t", 2.0), Link("t", "v", 2.0), Link("v", "s", 2.0)],
)
sol = max_flow(net, "s", "t")
print(f"max flow: {sol.value:.3f}")
for path in decompose(sol):
    print("  ", path)

# %%
# The dual of each capacity row says how fast the max flow drops per unit of
# capacity removed.  Only (s, t) is binding, and at rate 1/2 because every
# unit of flow consumes two units of its capacity.
for (u, v), q in sorted(sol.link_duals.items()):
    print(f"  link {u}->{v}: {q:.3f}")

# %%
# Cuts.  A communication cut removes links, a computation cut removes
# processing, a joint cut may mix both.  The two gadget networks below show
# that neither pure cut approximates the joint one.
for name in ("fig3", "fig4", "fig3_4", "fig5"):
    fx = fixture(name)
    args = (fx.network, fx.source, fx.target)
    print(f"{name:7s} flow {max_flow(*args).value:5.2f}  "
          f"comm {min_comm_cut_exact(*args).value:5.2f}  "
          f"comp {min_comp_cut_exact(*args).value:5.2f}  "
          f"joint {min_joint_cut_exact(*args).value:5.2f}  "
          f"joint (2-approx) {approx_joint_cut(*args).value:5.2f}")
