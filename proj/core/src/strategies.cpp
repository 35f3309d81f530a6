#include "tarlab/strategies.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

namespace tarlab {

std::string select_seed(const std::set<std::string>& positives, std::uint64_t rng_seed) {
  if (positives.empty()) throw std::runtime_error("select_seed: empty positive set");
  const std::uint64_t n = positives.size();
  std::mt19937_64 rng(rng_seed);
  // Unbiased bounded draw via rejection; avoids stdlib distribution variance.
  const std::uint64_t limit = std::mt19937_64::max() - std::mt19937_64::max() % n;
  std::uint64_t v;
  do {
    v = rng();
  } while (v >= limit);
  auto it = positives.begin();
  std::advance(it, static_cast<long>(v % n));
  return *it;
}

std::vector<std::string> relevance_feedback_batch(std::vector<ScoredDoc> pool, long b) {
  if (b < 1) throw std::invalid_argument("relevance_feedback_batch: b must be >= 1");
  std::sort(pool.begin(), pool.end(), [](const ScoredDoc& x, const ScoredDoc& y) {
    if (x.score != y.score) return x.score > y.score;
    return x.id < y.id;
  });
  const long take = std::min<long>(b, static_cast<long>(pool.size()));
  std::vector<std::string> batch;
  batch.reserve(take);
  for (long i = 0; i < take; ++i) batch.push_back(std::move(pool[i].id));
  return batch;
}

std::vector<std::string> uncertainty_batch(std::vector<ScoredDoc> pool, long b) {
  if (b < 1) throw std::invalid_argument("uncertainty_batch: b must be >= 1");
  std::sort(pool.begin(), pool.end(), [](const ScoredDoc& x, const ScoredDoc& y) {
    const double dx = std::abs(x.score - 0.5);
    const double dy = std::abs(y.score - 0.5);
    if (dx != dy) return dx < dy;
    return x.id < y.id;
  });
  const long take = std::min<long>(b, static_cast<long>(pool.size()));
  std::vector<std::string> batch;
  batch.reserve(take);
  for (long i = 0; i < take; ++i) batch.push_back(std::move(pool[i].id));
  return batch;
}

}  // namespace tarlab
