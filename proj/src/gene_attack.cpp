// Attack a naive Bayes gene classifier with synonymous codon swaps.
#include <cstdio>

#include "synadv/synadv.hpp"

using namespace synadv;

int main() {
  const GeneParams params{800, 800, 100, 0.2};
  const auto data = gen_gene_dataset(params, 1).data;
  const auto nb = train_naive_bayes(data, Featurizer::kmer(4));
  std::printf("clean accuracy %.3f\n", accuracy(nb.linear, data));

  const CodonProposer proposer;
  SequenceConstraints cs;
  cs.add(codon_synonymy_component());
  AttackConfig cfg;
  cfg.tau = 0.9;
  cfg.beam = 1;
  cfg.delta_max = 0.5;

  std::size_t shown = 0;
  for (const auto& e : data.examples) {
    if (shown == 3) break;
    if (nb.predict(e.tokens) != e.label) continue;
    const auto r = beam_search_attack(e.tokens, nb, ObjectiveSpec::untargeted(e.label), proposer, cs, cfg);
    std::printf("%s label %zu -> %zu, J %.3f -> %.3f, %zu codons changed (%.1f%% of nucleotides), protein %s\n",
                e.id.c_str(), r.label_before, r.label_after, r.J_initial, r.J_final, r.edits.size(),
                100.0 * r.fraction_replaced, translate(r.x_adv) == translate(e.tokens) ? "unchanged" : "CHANGED");
    ++shown;
  }
}
