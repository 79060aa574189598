"""Sample-based max-cut testing, parameter estimation and a certified parameter."""
from graphonlab.graphs import SimpleGraph
from graphonlab.sampling import RngSpec, erdos_renyi
from graphonlab.testers import (acceptance_probability, certified_parameter, estimate_parameter,
                                maxcut_density, tester_for_maxcut)

graphs = {"K50,50": SimpleGraph.complete_bipartite(50, 50), "empty": SimpleGraph.empty(100),
          "G(100, 0.3)": erdos_renyi(100, 0.3, 1)}
for r in (12, 16, 20):
    spec = tester_for_maxcut(0.2, r, 1000)
    accs = {name: acceptance_probability(G, spec, RngSpec(r)).probability for name, G in graphs.items()}
    print(f"r={r}: " + ", ".join(f"{k} {v:.3f}" for k, v in accs.items()))

rep = estimate_parameter(SimpleGraph.complete_bipartite(10, 10), "maxcut", 8, 300, RngSpec(2))
print(f"\nmax-cut density of K10,10: true {rep.true_value}, sampled estimate {rep.point_estimate:.3f}")

C5 = SimpleGraph.cycle(5)
g = certified_parameter(C5, "normalized-2-colored-edges", 2, 1)
print(f"C5: certified value {g.value:.2f} = 2 x max-cut density {maxcut_density(C5).value:.2f}")
