#pragma once

#include <cstdint>
#include <set>
#include <string>
#include <vector>

namespace tarlab {

// Score for one unreviewed document. A ScoredPool is just a vector of these;
// both batch policies treat it as an unordered set.
struct ScoredDoc {
  std::string id;
  double score = 0.0;
};

// Uniform draw from the positive set. Deterministic given rng_seed.
std::string select_seed(const std::set<std::string>& positives, std::uint64_t rng_seed);

// Top-b by (score desc, doc_id asc).
std::vector<std::string> relevance_feedback_batch(std::vector<ScoredDoc> pool, long b);

// b closest to the decision boundary, by (|score - 0.5| asc, doc_id asc).
std::vector<std::string> uncertainty_batch(std::vector<ScoredDoc> pool, long b);

}  // namespace tarlab
