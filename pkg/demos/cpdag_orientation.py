"""Effects on a CPDAG: amenability, orienting edges at the treatment, and GAC."""
from cavs import (
    OrientationChoice,
    enumerate_equivalence_class,
    enumerate_minimal_backdoor_sets,
    is_amenable,
    orient_and_restrict,
    satisfies_gac,
)
from cavs.cpdag import amenability_witness
from cavs.datasets import chain_cpdag

g = chain_cpdag()
print("directed:  ", g.directed_edges())
print("undirected:", g.undirected_edges())

members = enumerate_equivalence_class(g)
print(f"\n{len(members)} DAGs in the class")
for k, m in enumerate(members):
    sets = enumerate_minimal_backdoor_sets(m, "X", "Y")
    print(f"  [{k}]", ", ".join(f"{a}->{b}" for a, b in m.directed_edges()),
          "| back-door sets:", " ".join(str(c) for c in sets))

# The class members disagree about X, so the effect of X is not determined.
print("\nX amenable:", is_amenable(g, "X", "Y"), " witness:", amenability_witness(g, "X", "Y"))
print("V amenable:", is_amenable(g, "V", "Y"), " {Z2} satisfies GAC:", satisfies_gac(g, "V", "Y", ["Z2"]))

# Background knowledge about the X - Z1 edge narrows the class.
for text in ("X->Z1", "Z1->X"):
    restricted = orient_and_restrict(g, "X", OrientationChoice.parse(text))
    print(f"orient {text}: {len(restricted)} DAG(s) remain")
