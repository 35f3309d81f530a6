// Command-line front end for the TAR cost-simulation library: corpus
// ingestion, active-learning run grids, cost dynamics, stopping studies,
// workflow comparisons, and category binning.
//
// Exit codes: 0 success, 1 usage/config error, 2 data error,
// 3 partial failure (the run manifest has error entries).

#include <atomic>
#include <charconv>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "tarlab/corpus.hpp"
#include "tarlab/costmodel.hpp"
#include "tarlab/simulator.hpp"
#include "tarlab/stats.hpp"

namespace fs = std::filesystem;
using nlohmann::ordered_json;
using namespace tarlab;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitPartial = 3;

// Shortest round-trip decimal form; keeps CSV output byte-stable.
std::string format_number(double value) {
  char buf[32];
  const auto result = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, result.ptr);
}

Corpus load_any_corpus(const std::string& path) {
  if (path.ends_with(".jsonl")) return ingest_jsonl(path);
  return load_corpus(path);
}

struct RunSpec {
  std::string category;
  Strategy strategy;
  std::uint64_t seed;
  std::string path;  // relative to the output dir
};

struct ExperimentConfig {
  std::string corpus_path;
  std::vector<std::string> categories;
  std::vector<std::uint64_t> seeds;
  std::vector<Strategy> strategies;
  long batch_size = 200;
  double recall_target = 0.8;
  long extension_batches = 0;
  double bm25_k1 = 1.2;
  double bm25_b = 0.75;
  TrainConfig train;
  std::string output_dir;
  int jobs = 1;
};

ExperimentConfig parse_experiment_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config " + path);
  ordered_json root;
  in >> root;

  ExperimentConfig config;
  config.corpus_path = root.at("corpus").get<std::string>();
  config.output_dir = root.at("output_dir").get<std::string>();
  for (const auto& name : root.at("categories"))
    config.categories.push_back(name.get<std::string>());

  if (root.contains("seeds")) {
    const auto& seeds = root["seeds"];
    if (seeds.is_number()) {
      for (std::uint64_t k = 0; k < seeds.get<std::uint64_t>(); ++k)
        config.seeds.push_back(k);
    } else {
      for (const auto& s : seeds) config.seeds.push_back(s.get<std::uint64_t>());
    }
  } else {
    for (std::uint64_t k = 0; k < 10; ++k) config.seeds.push_back(k);
  }

  if (root.contains("strategies")) {
    for (const auto& s : root["strategies"])
      config.strategies.push_back(strategy_from_name(s.get<std::string>()));
  } else {
    config.strategies = {Strategy::kRelevanceFeedback, Strategy::kUncertainty};
  }

  config.batch_size = root.value("batch_size", 200L);
  config.recall_target = root.value("recall_target", 0.8);
  config.extension_batches = root.value("extension_batches", 0L);
  config.bm25_k1 = root.value("bm25_k1", 1.2);
  config.bm25_b = root.value("bm25_b", 0.75);
  config.train.l2_weight = root.value("l2_weight", 1.0);
  config.train.max_epochs = root.value("max_epochs", 500);
  config.train.tolerance = root.value("tolerance", 1e-8);
  config.jobs = root.value("jobs", 1);

  if (config.seeds.empty() || config.strategies.empty() || config.categories.empty())
    throw std::runtime_error("config needs at least one category, seed, and strategy");
  return config;
}

int cmd_ingest(const std::string& corpus_path, const std::string& cache_path) {
  Corpus corpus;
  try {
    corpus = ingest_jsonl(corpus_path);
  } catch (const std::exception& e) {
    std::cerr << "ingest failed: " << e.what() << "\n";
    return kExitData;
  }
  save_corpus(corpus, cache_path);
  std::cout << "documents=" << corpus.size() << " vocabulary=" << corpus.terms.size()
            << " categories=" << corpus.categories.size() << "\n";
  return kExitOk;
}

int cmd_run(const std::string& config_path) {
  ExperimentConfig config;
  try {
    config = parse_experiment_config(config_path);
  } catch (const std::exception& e) {
    std::cerr << "bad config: " << e.what() << "\n";
    return kExitUsage;
  }

  Corpus corpus;
  try {
    corpus = load_any_corpus(config.corpus_path);
  } catch (const std::exception& e) {
    std::cerr << "corpus load failed: " << e.what() << "\n";
    return kExitData;
  }

  std::vector<RunSpec> specs;
  for (const auto& category : config.categories) {
    for (const auto strategy : config.strategies) {
      for (const auto seed : config.seeds) {
        RunSpec spec;
        spec.category = category;
        spec.strategy = strategy;
        spec.seed = seed;
        spec.path = category + "/" + strategy_name(strategy) + "/seed" +
                    std::to_string(seed) + ".json";
        specs.push_back(std::move(spec));
      }
    }
  }

  std::vector<std::string> errors(specs.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= specs.size()) return;
      const auto& spec = specs[i];
      try {
        RunConfig run_config;
        run_config.category = spec.category;
        run_config.rng_seed = spec.seed;
        run_config.batch_size = config.batch_size;
        run_config.recall_target = config.recall_target;
        run_config.strategy = spec.strategy;
        run_config.extension_batches = config.extension_batches;
        run_config.bm25_k1 = config.bm25_k1;
        run_config.bm25_b = config.bm25_b;
        run_config.train = config.train;
        const RunTrace trace = run(corpus, run_config);
        const fs::path out_path = fs::path(config.output_dir) / spec.path;
        fs::create_directories(out_path.parent_path());
        save_trace(trace, out_path.string());
      } catch (const std::exception& e) {
        errors[i] = e.what();
      }
    }
  };

  const int jobs = std::max(1, config.jobs);
  std::vector<std::thread> threads;
  for (int j = 1; j < jobs; ++j) threads.emplace_back(worker);
  worker();
  for (auto& thread : threads) thread.join();

  bool any_error = false;
  ordered_json manifest;
  manifest["corpus"] = config.corpus_path;
  manifest["recall_target"] = config.recall_target;
  ordered_json runs = ordered_json::array();
  for (std::size_t i = 0; i < specs.size(); ++i) {
    ordered_json entry = {{"category", specs[i].category},
                          {"strategy", strategy_name(specs[i].strategy)},
                          {"seed", specs[i].seed},
                          {"path", specs[i].path},
                          {"status", errors[i].empty() ? "ok" : "error"}};
    if (!errors[i].empty()) {
      entry["error"] = errors[i];
      any_error = true;
    }
    runs.push_back(std::move(entry));
  }
  manifest["runs"] = std::move(runs);

  fs::create_directories(config.output_dir);
  std::ofstream out(fs::path(config.output_dir) / "manifest.json");
  out << manifest.dump(2) << "\n";

  std::cout << "runs=" << specs.size() << " failed="
            << std::count_if(errors.begin(), errors.end(),
                             [](const std::string& e) { return !e.empty(); })
            << "\n";
  return any_error ? kExitPartial : kExitOk;
}

void write_dynamics_csv(std::ostream& out, const CostDynamics& dyn) {
  out << "iteration,phase1_pos,phase1_neg,phase2_pos,phase2_neg,total\n";
  for (const auto& point : dyn.points) {
    out << point.t << "," << format_number(point.breakdown.phase1_pos) << ","
        << format_number(point.breakdown.phase1_neg) << ","
        << format_number(point.breakdown.phase2_pos) << ","
        << format_number(point.breakdown.phase2_neg) << ","
        << format_number(point.breakdown.total()) << "\n";
  }
}

int cmd_dynamics(const std::string& trace_path, const std::string& structure_spec,
                 double target, const std::string& output) {
  CostStructure structure;
  try {
    structure = parse_structure_spec(structure_spec);
  } catch (const std::exception& e) {
    std::cerr << "bad structure spec: " << e.what() << "\n";
    return kExitUsage;
  }
  RunTrace trace;
  try {
    trace = load_trace(trace_path);
  } catch (const std::exception& e) {
    std::cerr << e.what() << "\n";
    return kExitData;
  }
  const double g = target > 0.0 ? target : trace.config.recall_target;
  const CostDynamics dyn = dynamics(trace, structure, g);
  if (output.empty()) {
    write_dynamics_csv(std::cout, dyn);
  } else {
    std::ofstream out(output);
    write_dynamics_csv(out, dyn);
  }
  const StoppingAnalysis analysis = optimal_stop(dyn);
  std::cout << "optimal_t=" << analysis.optimal_t
            << " min_cost=" << format_number(analysis.min_cost) << "\n";
  return kExitOk;
}

std::vector<std::string> collect_trace_files(const std::vector<std::string>& paths) {
  std::vector<std::string> files;
  for (const auto& path : paths) {
    if (fs::is_directory(path)) {
      for (const auto& entry : fs::recursive_directory_iterator(path)) {
        if (entry.is_regular_file() && entry.path().extension() == ".json" &&
            entry.path().filename() != "manifest.json") {
          files.push_back(entry.path().string());
        }
      }
    } else {
      files.push_back(path);
    }
  }
  std::sort(files.begin(), files.end());
  return files;
}

int cmd_stopping(const std::vector<std::string>& trace_paths, const std::string& family,
                 const std::string& x_grid, double tolerance, double target,
                 const std::string& output) {
  CostFamily cost_family;
  if (family == "expensive_training") {
    cost_family = CostFamily::kAxisExpensiveTraining;
  } else if (family == "additive_positives") {
    cost_family = CostFamily::kAxisAdditivePositives;
  } else if (family == "expensive_p1_positives") {
    cost_family = CostFamily::kAxisExpensivePhaseOnePositives;
  } else {
    std::cerr << "unknown family " << family
              << " (expected expensive_training, additive_positives,"
                 " expensive_p1_positives)\n";
    return kExitUsage;
  }

  std::vector<double> xs;
  {
    std::stringstream ss(x_grid);
    std::string item;
    while (std::getline(ss, item, ',')) {
      try {
        xs.push_back(std::stod(item));
      } catch (const std::exception&) {
        std::cerr << "bad x grid value: " << item << "\n";
        return kExitUsage;
      }
    }
  }
  if (xs.empty()) {
    std::cerr << "empty x grid\n";
    return kExitUsage;
  }

  std::vector<RunTrace> traces;
  try {
    for (const auto& file : collect_trace_files(trace_paths))
      traces.push_back(load_trace(file));
  } catch (const std::exception& e) {
    std::cerr << e.what() << "\n";
    return kExitData;
  }
  if (traces.empty()) {
    std::cerr << "no traces found\n";
    return kExitData;
  }

  std::ostringstream csv;
  csv << "x,mean_optimal_t,mean_acceptable_count,truncated_runs\n";
  for (const double x : xs) {
    FamilyParams params;
    params.family = cost_family;
    params.x = x;
    const CostStructure structure = make_family(params);
    double sum_opt = 0.0, sum_count = 0.0;
    long truncated = 0;
    for (const auto& trace : traces) {
      const double g = target > 0.0 ? target : trace.config.recall_target;
      const StoppingAnalysis analysis =
          acceptable_range(dynamics(trace, structure, g), tolerance);
      sum_opt += static_cast<double>(analysis.optimal_t);
      sum_count += static_cast<double>(analysis.acceptable_count());
      if (analysis.truncated) ++truncated;
    }
    const double n = static_cast<double>(traces.size());
    csv << format_number(x) << "," << format_number(sum_opt / n) << ","
        << format_number(sum_count / n) << "," << truncated << "\n";
  }

  if (output.empty()) {
    std::cout << csv.str();
  } else {
    std::ofstream out(output);
    out << csv.str();
  }
  return kExitOk;
}

struct Workflow {
  bool two_phase = false;
  Strategy strategy = Strategy::kRelevanceFeedback;
};

Workflow parse_workflow(const std::string& label) {
  Workflow wf;
  if (label.size() < 5 || label[2] != '-' ||
      (label.substr(0, 2) != "1p" && label.substr(0, 2) != "2p"))
    throw std::invalid_argument("bad workflow label " + label +
                                " (expected 1p-rel, 1p-unc, 2p-rel, 2p-unc)");
  wf.two_phase = label.substr(0, 2) == "2p";
  wf.strategy = strategy_from_name(label.substr(3));
  return wf;
}

int cmd_compare(const std::string& manifest_path, const std::vector<std::string>& pairs,
                const std::vector<std::string>& structure_specs, long correction_m,
                double level, double target, const std::string& output) {
  std::vector<std::pair<Workflow, Workflow>> parsed_pairs;
  std::vector<std::string> pair_labels;
  std::vector<CostStructure> structures;
  try {
    for (const auto& pair : pairs) {
      const auto sep = pair.find(':');
      if (sep == std::string::npos)
        throw std::invalid_argument("pair must be A:B, got " + pair);
      parsed_pairs.emplace_back(parse_workflow(pair.substr(0, sep)),
                                parse_workflow(pair.substr(sep + 1)));
      pair_labels.push_back(pair);
    }
    for (const auto& spec : structure_specs)
      structures.push_back(parse_structure_spec(spec));
  } catch (const std::exception& e) {
    std::cerr << e.what() << "\n";
    return kExitUsage;
  }
  if (parsed_pairs.empty() || structures.empty()) {
    std::cerr << "need at least one --pair and one --structure\n";
    return kExitUsage;
  }

  // task (category, seed) -> strategy -> trace
  std::map<std::pair<std::string, std::uint64_t>, std::map<std::string, RunTrace>> tasks;
  double manifest_target = 0.0;
  try {
    std::ifstream in(manifest_path);
    if (!in) throw std::runtime_error("cannot open manifest " + manifest_path);
    ordered_json manifest;
    in >> manifest;
    manifest_target = manifest.value("recall_target", 0.8);
    const fs::path base = fs::path(manifest_path).parent_path();
    for (const auto& entry : manifest.at("runs")) {
      if (entry.at("status").get<std::string>() != "ok") continue;
      const auto key = std::make_pair(entry.at("category").get<std::string>(),
                                      entry.at("seed").get<std::uint64_t>());
      tasks[key][entry.at("strategy").get<std::string>()] =
          load_trace((base / entry.at("path").get<std::string>()).string());
    }
  } catch (const std::exception& e) {
    std::cerr << e.what() << "\n";
    return kExitData;
  }

  const double g = target > 0.0 ? target : manifest_target;

  // Every pair needs both strategies on every task; report what is missing.
  std::set<std::string> needed;
  for (const auto& [a, b] : parsed_pairs) {
    needed.insert(strategy_name(a.strategy));
    needed.insert(strategy_name(b.strategy));
  }
  std::vector<std::string> missing;
  for (const auto& [key, by_strategy] : tasks) {
    for (const auto& name : needed) {
      if (!by_strategy.count(name))
        missing.push_back(key.first + "/seed" + std::to_string(key.second) + "/" + name);
    }
  }
  if (!missing.empty()) {
    std::cerr << "unpaired tasks:\n";
    for (const auto& m : missing) std::cerr << "  " << m << "\n";
    return kExitData;
  }
  if (tasks.empty()) {
    std::cerr << "manifest has no completed runs\n";
    return kExitData;
  }

  auto workflow_cost = [&](const Workflow& wf, const std::map<std::string, RunTrace>& traces,
                           const CostStructure& structure) {
    const RunTrace& trace = traces.at(strategy_name(wf.strategy));
    if (wf.two_phase) return optimal_stop(dynamics(trace, structure, g)).min_cost;
    return one_phase_cost(trace, structure, g);
  };

  std::ostringstream csv;
  csv << "comparison";
  for (const auto& spec : structure_specs) csv << ",\"" << spec << "\"";
  csv << "\n";
  try {
    for (std::size_t p = 0; p < parsed_pairs.size(); ++p) {
      csv << pair_labels[p];
      for (const auto& structure : structures) {
        std::vector<double> costs_a, costs_b;
        for (const auto& [key, by_strategy] : tasks) {
          costs_a.push_back(workflow_cost(parsed_pairs[p].first, by_strategy, structure));
          costs_b.push_back(workflow_cost(parsed_pairs[p].second, by_strategy, structure));
        }
        const ComparisonResult result =
            compare_workflows(costs_a, costs_b, correction_m, level);
        csv << "," << format_number(result.mean_reduction)
            << (result.significant_at ? "*" : "");
      }
      csv << "\n";
    }
  } catch (const std::exception& e) {
    std::cerr << e.what() << "\n";
    return kExitData;
  }

  if (output.empty()) {
    std::cout << csv.str();
  } else {
    std::ofstream out(output);
    out << csv.str();
  }
  return kExitOk;
}

int cmd_bins(const std::string& corpus_path, std::uint64_t split_seed,
             const std::string& output) {
  Corpus corpus;
  try {
    corpus = load_any_corpus(corpus_path);
  } catch (const std::exception& e) {
    std::cerr << e.what() << "\n";
    return kExitData;
  }

  std::ostringstream csv;
  csv << "category,positive_count,prevalence_bin,r_precision,difficulty_bin\n";
  std::map<std::pair<std::string, std::string>, long> bin_counts;
  for (const auto& [category, positives] : corpus.categories) {
    (void)positives;
    try {
      const BinAssignment assignment = assign_bins(corpus, category, split_seed);
      csv << assignment.category << "," << assignment.positive_count << ","
          << prevalence_bin_name(assignment.prevalence_bin) << ","
          << format_number(assignment.r_precision) << ","
          << difficulty_bin_name(assignment.difficulty_bin) << "\n";
      ++bin_counts[{prevalence_bin_name(assignment.prevalence_bin),
                    difficulty_bin_name(assignment.difficulty_bin)}];
    } catch (const std::exception& e) {
      std::cerr << "skipping " << category << ": " << e.what() << "\n";
    }
  }

  if (output.empty()) {
    std::cout << csv.str();
  } else {
    std::ofstream out(output);
    out << csv.str();
  }
  for (const auto& [key, count] : bin_counts) {
    std::cout << key.first << "/" << key.second << "=" << count << "\n";
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"TAR workflow cost simulation laboratory"};
  app.require_subcommand(1);

  std::string corpus_path, cache_path, config_path, trace_path, structure_spec;
  std::string manifest_path, family, x_grid = "0,1,5,10,20", output;
  std::vector<std::string> trace_paths, pairs, structure_specs;
  double target = 0.0, tolerance = 0.1, level = 0.05;
  long correction_m = 1;
  std::uint64_t split_seed = 0;

  auto* ingest = app.add_subcommand("ingest", "Parse a JSONL corpus into a cache file");
  ingest->add_option("corpus", corpus_path, "JSONL corpus path")->required();
  ingest->add_option("cache", cache_path, "output cache path")->required();

  auto* run_cmd = app.add_subcommand("run", "Execute a grid of active-learning runs");
  run_cmd->add_option("config", config_path, "experiment config (JSON)")->required();

  auto* dyn_cmd = app.add_subcommand("dynamics", "Cost dynamics CSV for one trace");
  dyn_cmd->add_option("trace", trace_path, "trace file")->required();
  dyn_cmd->add_option("--structure", structure_spec, "cost structure spec")->required();
  dyn_cmd->add_option("--target", target, "recall target (default: from trace)");
  dyn_cmd->add_option("--output", output, "CSV output path (default: stdout)");

  auto* stop_cmd = app.add_subcommand("stopping", "Optimal-stopping sweep over a family");
  stop_cmd->add_option("--traces", trace_paths, "trace files or directories")->required();
  stop_cmd->add_option("--family", family, "expensive_training | additive_positives | expensive_p1_positives")->required();
  stop_cmd->add_option("--x-grid", x_grid, "comma-separated x values");
  stop_cmd->add_option("--tolerance", tolerance, "near-optimal cost tolerance");
  stop_cmd->add_option("--target", target, "recall target (default: from traces)");
  stop_cmd->add_option("--output", output, "CSV output path (default: stdout)");

  auto* compare_cmd = app.add_subcommand("compare", "Workflow comparison table");
  compare_cmd->add_option("--manifest", manifest_path, "run manifest")->required();
  compare_cmd->add_option("--pair", pairs, "workflow pair A:B, e.g. 2p-unc:1p-rel")->required();
  compare_cmd->add_option("--structure", structure_specs, "cost structure spec")->required();
  compare_cmd->add_option("--correction-m", correction_m, "Bonferroni test count");
  compare_cmd->add_option("--level", level, "significance level");
  compare_cmd->add_option("--target", target, "recall target (default: from manifest)");
  compare_cmd->add_option("--output", output, "CSV output path (default: stdout)");

  auto* bins_cmd = app.add_subcommand("bins", "Prevalence/difficulty bin assignments");
  bins_cmd->add_option("corpus", corpus_path, "corpus path")->required();
  bins_cmd->add_option("--split-seed", split_seed, "train/holdout split seed");
  bins_cmd->add_option("--output", output, "CSV output path (default: stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*ingest) return cmd_ingest(corpus_path, cache_path);
    if (*run_cmd) return cmd_run(config_path);
    if (*dyn_cmd) return cmd_dynamics(trace_path, structure_spec, target, output);
    if (*stop_cmd)
      return cmd_stopping(trace_paths, family, x_grid, tolerance, target, output);
    if (*compare_cmd)
      return cmd_compare(manifest_path, pairs, structure_specs, correction_m, level,
                         target, output);
    if (*bins_cmd) return cmd_bins(corpus_path, split_seed, output);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  }
  return kExitUsage;
}
