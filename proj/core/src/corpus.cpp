#include "tarlab/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <random>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace tarlab {

namespace {

using nlohmann::ordered_json;

// Assigns dense feature indices in order of first appearance across the
// document list and recomputes avdl. Categories are restricted to known ids.
void finalize(Corpus& corpus) {
  corpus.terms.clear();
  corpus.vocabulary.clear();
  long total_length = 0;
  for (const auto& doc : corpus.documents) {
    total_length += doc.length;
    for (const auto& [term, count] : doc.term_counts) {
      (void)count;
      if (corpus.vocabulary.emplace(term, static_cast<int>(corpus.terms.size())).second) {
        corpus.terms.push_back(term);
      }
    }
  }
  corpus.avg_doc_length =
      corpus.documents.empty() ? 0.0
                               : static_cast<double>(total_length) /
                                     static_cast<double>(corpus.documents.size());
}

Document make_document(std::string id, const std::vector<std::string>& tokens) {
  Document doc;
  doc.id = std::move(id);
  std::map<std::string, int> counts;
  for (const auto& tok : tokens) ++counts[tok];
  doc.term_counts.assign(counts.begin(), counts.end());
  doc.length = static_cast<long>(tokens.size());
  return doc;
}

}  // namespace

const Document* Corpus::find(const std::string& doc_id) const {
  for (const auto& doc : documents) {
    if (doc.id == doc_id) return &doc;
  }
  return nullptr;
}

std::vector<std::string> tokenize(const std::string& text) {
  std::vector<std::string> tokens;
  std::string current;
  for (unsigned char c : text) {
    if (std::isalnum(c)) {
      current.push_back(static_cast<char>(std::tolower(c)));
    } else if (!current.empty()) {
      if (current.size() >= 2) tokens.push_back(current);
      current.clear();
    }
  }
  if (current.size() >= 2) tokens.push_back(current);
  return tokens;
}

double bm25_tf_weight(long tf, long dl, double avdl, double k1, double b) {
  if (avdl <= 0.0) throw std::invalid_argument("bm25_tf_weight: avdl must be positive");
  if (tf < 0 || dl < 0) throw std::invalid_argument("bm25_tf_weight: negative count");
  if (k1 <= 0.0 || b < 0.0 || b > 1.0)
    throw std::invalid_argument("bm25_tf_weight: k1 > 0 and 0 <= b <= 1 required");
  if (tf == 0) return 0.0;
  const double norm = 1.0 - b + b * static_cast<double>(dl) / avdl;
  return static_cast<double>(tf) / (static_cast<double>(tf) + k1 * norm);
}

FeatureVector vectorize(const Document& doc, const Corpus& corpus, double k1, double b) {
  FeatureVector vec;
  for (const auto& [term, tf] : doc.term_counts) {
    auto it = corpus.vocabulary.find(term);
    if (it == corpus.vocabulary.end()) continue;  // unknown terms dropped
    vec.entries.emplace_back(it->second,
                             bm25_tf_weight(tf, doc.length, corpus.avg_doc_length, k1, b));
  }
  std::sort(vec.entries.begin(), vec.entries.end());
  return vec;
}

Corpus ingest_jsonl(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("ingest_jsonl: cannot open " + path);

  Corpus corpus;
  std::set<std::string> seen_ids;
  std::string line;
  long line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    ordered_json rec;
    try {
      rec = ordered_json::parse(line);
    } catch (const std::exception& e) {
      throw std::runtime_error("ingest_jsonl: parse error at line " +
                               std::to_string(line_no) + ": " + e.what());
    }
    if (!rec.is_object() || !rec.contains("id") || !rec.contains("labels") ||
        !(rec.contains("text") || rec.contains("tokens"))) {
      throw std::runtime_error("ingest_jsonl: line " + std::to_string(line_no) +
                               " missing id/text-or-tokens/labels");
    }
    std::string id = rec["id"].get<std::string>();
    if (!seen_ids.insert(id).second) {
      throw std::runtime_error("ingest_jsonl: duplicate doc_id \"" + id +
                               "\" at line " + std::to_string(line_no));
    }
    std::vector<std::string> tokens;
    if (rec.contains("tokens")) {
      tokens = rec["tokens"].get<std::vector<std::string>>();
    } else {
      tokens = tokenize(rec["text"].get<std::string>());
    }
    for (const auto& label : rec["labels"]) {
      corpus.categories[label.get<std::string>()].insert(id);
    }
    corpus.documents.push_back(make_document(std::move(id), tokens));
  }
  finalize(corpus);
  return corpus;
}

Corpus subsample(const Corpus& corpus, double fraction, std::uint64_t rng_seed) {
  if (fraction <= 0.0 || fraction > 1.0)
    throw std::invalid_argument("subsample: fraction must be in (0,1]");
  const long n = corpus.size();
  const long keep = static_cast<long>(fraction * static_cast<double>(n));
  std::vector<long> indices(n);
  for (long i = 0; i < n; ++i) indices[i] = i;
  std::mt19937_64 rng(rng_seed);
  for (long i = n - 1; i > 0; --i) {
    const long j = static_cast<long>(rng() % static_cast<std::uint64_t>(i + 1));
    std::swap(indices[i], indices[j]);
  }
  indices.resize(keep);
  std::sort(indices.begin(), indices.end());  // keep original document order

  Corpus out;
  std::set<std::string> kept_ids;
  for (long idx : indices) {
    out.documents.push_back(corpus.documents[idx]);
    kept_ids.insert(corpus.documents[idx].id);
  }
  for (const auto& [name, positives] : corpus.categories) {
    std::set<std::string> restricted;
    for (const auto& id : positives) {
      if (kept_ids.count(id)) restricted.insert(id);
    }
    out.categories[name] = std::move(restricted);
  }
  finalize(out);
  return out;
}

void save_corpus(const Corpus& corpus, const std::string& path) {
  ordered_json root;
  ordered_json docs = ordered_json::array();
  for (const auto& doc : corpus.documents) {
    ordered_json counts = ordered_json::array();
    for (const auto& [term, count] : doc.term_counts) {
      counts.push_back(ordered_json::array({term, count}));
    }
    docs.push_back({{"id", doc.id}, {"terms", counts}, {"length", doc.length}});
  }
  root["documents"] = std::move(docs);
  ordered_json cats = ordered_json::object();
  for (const auto& [name, positives] : corpus.categories) {
    cats[name] = std::vector<std::string>(positives.begin(), positives.end());
  }
  root["categories"] = std::move(cats);

  std::ofstream out(path);
  if (!out) throw std::runtime_error("save_corpus: cannot open " + path);
  out << root.dump() << "\n";
}

Corpus load_corpus(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("load_corpus: cannot open " + path);
  ordered_json root;
  try {
    in >> root;
  } catch (const std::exception& e) {
    throw std::runtime_error("load_corpus: parse error in " + path + ": " + e.what());
  }
  Corpus corpus;
  for (const auto& rec : root.at("documents")) {
    Document doc;
    doc.id = rec.at("id").get<std::string>();
    for (const auto& entry : rec.at("terms")) {
      doc.term_counts.emplace_back(entry[0].get<std::string>(), entry[1].get<int>());
    }
    doc.length = rec.at("length").get<long>();
    corpus.documents.push_back(std::move(doc));
  }
  for (const auto& [name, ids] : root.at("categories").items()) {
    auto& positives = corpus.categories[name];
    for (const auto& id : ids) positives.insert(id.get<std::string>());
  }
  finalize(corpus);
  return corpus;
}

}  // namespace tarlab
