// Relabel vertices to flip a logistic classifier on adjacency features.
#include <cstdio>

#include "synadv/synadv.hpp"

using namespace synadv;

int main() {
  const GraphParams params{200, 20, 0.3, 0.3, 8, 0.7};
  const auto graphs = gen_graph_dataset(params, 1);
  const auto model = train_logistic(graphs);
  std::printf("clean accuracy %.3f\n", accuracy(model.linear, graphs));

  AttackConfig cfg;
  cfg.tau = 0.9;
  cfg.delta_max = 0.5;
  for (std::size_t i = 0; i < 3; ++i) {
    const auto& g = graphs[i];
    const auto r = graph_attack(g.graph, model, ObjectiveSpec::untargeted(g.label), cfg);
    std::printf("graph %zu label %zu -> %zu after %zu transpositions, degrees %s\n", i, r.label_before,
                r.label_after, r.moves.size(),
                r.adv.graph.degree_multiset() == g.graph.degree_multiset() ? "preserved" : "CHANGED");
  }
}
