// Command-line front end: instance generation, solving (with or without a
// known matching), coreset construction, streaming compression, benchmark
// sweeps, and cost evaluation.
//
// Exit codes: 0 ok, 2 invalid input, 3 numerical failure.

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "ptl/baselines.hpp"
#include "ptl/bench.hpp"
#include "ptl/coreset.hpp"
#include "ptl/generator.hpp"
#include "ptl/io.hpp"
#include "ptl/matching.hpp"

namespace {

struct NumericalFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

ptl::CostSpec load_cost_spec(const std::string& path_or_empty) {
  if (path_or_empty.empty()) return ptl::fast_approx_default_spec();
  return ptl::cost_spec_from_json(ptl::read_text_file(path_or_empty));
}

void emit(const std::string& out_path, const std::string& text) {
  if (out_path.empty() || out_path == "-")
    std::cout << text << '\n';
  else
    ptl::write_text_file(out_path, text + "\n");
}

void maybe_manifest(const std::string& out_path, const std::string& command,
                    const nlohmann::json& config, std::uint64_t seed) {
  if (out_path.empty() || out_path == "-") return;
  ptl::write_manifest(out_path + ".manifest.json", command, config.dump(), seed);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Planar points-to-lines alignment toolkit"};
  app.require_subcommand(1);

  std::uint64_t seed = 0;
  int threads = 1;
  std::string format = "csv";
  app.add_option("--seed", seed, "root RNG seed")->capture_default_str();
  app.add_option("--threads", threads, "worker threads")->capture_default_str();
  app.add_option("--format", format, "output format: csv|json")->check(CLI::IsMember({"csv", "json"}));

  // gen
  auto* gen = app.add_subcommand("gen", "generate a synthetic instance");
  ptl::GenConfig gen_cfg;
  std::string gen_out = "-";
  gen->add_option("-n,--n", gen_cfg.n, "number of pairs")->required();
  gen->add_option("-k,--outlier-frac", gen_cfg.outlier_frac, "outlier fraction")->capture_default_str();
  gen->add_option("--outlier-range", gen_cfg.outlier_range)->capture_default_str();
  gen->add_option("--noise-mean", gen_cfg.noise.mean)->capture_default_str();
  gen->add_option("--noise-sigma", gen_cfg.noise.sigma)->capture_default_str();
  bool gen_shuffle = false;
  gen->add_flag("--shuffle", gen_shuffle, "shuffle the line order (unknown matching)");
  gen->add_option("-o,--output", gen_out, "output file (csv or json; - for stdout)");

  // solve
  auto* solve = app.add_subcommand("solve", "solve an instance with a known matching");
  std::string solve_in, solve_spec, solve_out = "-", solver_tag = "exact", dump_candidates;
  solve->add_option("-i,--instance", solve_in, "instance file")->required();
  solve->add_option("--cost-spec", solve_spec, "cost spec json file (default: min{dist,10} sum)");
  solve->add_option("--solver", solver_tag, "lms|ransac-lms|ransac-approx|approx|exact")
      ->capture_default_str();
  solve->add_option("--dump-candidates", dump_candidates, "write the candidate set as json");
  solve->add_option("-o,--output", solve_out, "alignment json output");

  // solve-unmatched
  auto* unmatched = app.add_subcommand("solve-unmatched", "solve with unknown point-line matching");
  std::string um_in, um_spec, um_out = "-", um_mode = "exact";
  std::uint64_t um_budget = 1000;
  int um_cap = 8;
  unmatched->add_option("-i,--instance", um_in)->required();
  unmatched->add_option("--cost-spec", um_spec);
  unmatched->add_option("--mode", um_mode, "exact|sampled")->check(CLI::IsMember({"exact", "sampled"}));
  unmatched->add_option("--budget", um_budget, "sampled mode: number of random tuples");
  unmatched->add_option("--exact-cap", um_cap, "largest n allowed in exact mode");
  unmatched->add_option("-o,--output", um_out);

  // coreset
  auto* coreset = app.add_subcommand("coreset", "compress an instance by sensitivity sampling");
  std::string cs_in, cs_out = "-";
  double cs_eps = 0.1, cs_delta = 0.1, cs_c = 1e-4;
  coreset->add_option("-i,--instance", cs_in)->required();
  coreset->add_option("--eps", cs_eps)->capture_default_str();
  coreset->add_option("--delta", cs_delta)->capture_default_str();
  coreset->add_option("-c,--constant", cs_c, "sampling constant")->capture_default_str();
  coreset->add_option("-o,--output", cs_out, "weighted instance output");

  // stream
  auto* stream = app.add_subcommand("stream", "stdin px,py,vx,vy,b,w records -> coreset");
  std::size_t st_leaf = 512;
  double st_eps = 0.1;
  stream->add_option("--leaf-size", st_leaf)->capture_default_str();
  stream->add_option("--eps-level", st_eps)->capture_default_str();

  // bench
  auto* bench = app.add_subcommand("bench", "error / time sweeps to csv");
  std::string bench_kind, bench_out = "-";
  std::vector<std::string> bench_solvers{"lms", "approx"};
  std::vector<int> bench_ns{50};
  std::vector<double> bench_ks{0.0};
  int bench_repeats = 10;
  bench->add_option("kind", bench_kind, "error|time")->required()->check(CLI::IsMember({"error", "time"}));
  bench->add_option("--solvers", bench_solvers, "solver tags (time sweep also accepts 'enumerate')")
      ->capture_default_str();
  bench->add_option("--n", bench_ns, "instance sizes")->capture_default_str();
  bench->add_option("--k", bench_ks, "outlier fractions")->capture_default_str();
  bench->add_option("--repeats", bench_repeats)->capture_default_str();
  bench->add_option("-o,--output", bench_out);

  // eval
  auto* eval = app.add_subcommand("eval", "cost of an alignment on an instance");
  std::string ev_in, ev_align, ev_spec;
  eval->add_option("-i,--instance", ev_in)->required();
  eval->add_option("-a,--alignment", ev_align, "alignment json file")->required();
  eval->add_option("--cost-spec", ev_spec);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    app.exit(e);
    return 2;
  }

  try {
    if (*gen) {
      gen_cfg.shuffle = gen_shuffle;
      gen_cfg.seed = seed;
      const ptl::Instance inst = ptl::gen_instance(gen_cfg);
      std::ostringstream ss;
      if (format == "json" || (gen_out.size() >= 5 && gen_out.substr(gen_out.size() - 5) == ".json"))
        ss << ptl::instance_to_json(inst.pairs);
      else
        ptl::write_instance_csv(ss, inst.pairs);
      emit(gen_out, ss.str());
      nlohmann::json cfg{{"n", gen_cfg.n},
                         {"outlier_frac", gen_cfg.outlier_frac},
                         {"outlier_range", gen_cfg.outlier_range},
                         {"noise_mean", gen_cfg.noise.mean},
                         {"noise_sigma", gen_cfg.noise.sigma},
                         {"shuffle", gen_cfg.shuffle},
                         {"planted", nlohmann::json::parse(ptl::alignment_to_json(inst.planted))},
                         {"planted_perm", inst.planted_perm}};
      maybe_manifest(gen_out, "gen", cfg, seed);
    } else if (*solve) {
      const auto inst = ptl::load_instance_file(solve_in);
      const auto spec = load_cost_spec(solve_spec);
      if (!ptl::is_solver_tag(solver_tag)) throw std::invalid_argument("unknown solver tag");
      const ptl::Alignment a = ptl::solve_with_tag(solver_tag, inst.pairs, spec, seed, threads);
      if (!dump_candidates.empty()) {
        const auto C = ptl::align_candidates(inst.pairs, threads);
        nlohmann::json arr = nlohmann::json::array();
        for (std::size_t i = 0; i < C.size(); ++i) {
          const auto& info = C.provenance[i];
          const char* branch = info.branch == ptl::Branch::Parallel
                                   ? "parallel"
                                   : (info.branch == ptl::Branch::NonParallel ? "non-parallel"
                                                                              : "coincident");
          arr.push_back({{"theta", C.alignments[i].angle()},
                         {"tx", C.alignments[i].translation.x()},
                         {"ty", C.alignments[i].translation.y()},
                         {"j", info.j},
                         {"k", info.k},
                         {"l", info.l},
                         {"branch", branch}});
        }
        ptl::write_text_file(dump_candidates, arr.dump() + "\n");
      }
      nlohmann::json out = nlohmann::json::parse(ptl::alignment_to_json(a));
      out["cost"] = ptl::evaluate_cost(inst.pairs, a, spec);
      out["solver"] = solver_tag;
      emit(solve_out, out.dump());
      maybe_manifest(solve_out, "solve",
                     nlohmann::json{{"instance", solve_in},
                                    {"solver", solver_tag},
                                    {"cost_spec", nlohmann::json::parse(ptl::cost_spec_to_json(spec))},
                                    {"threads", threads}},
                     seed);
    } else if (*unmatched) {
      const auto inst = ptl::load_instance_file(um_in);
      const auto spec = load_cost_spec(um_spec);
      ptl::MatchOptions opt;
      opt.mode = um_mode == "exact" ? ptl::MatchMode::Exact : ptl::MatchMode::Sampled;
      opt.budget = um_budget;
      opt.seed = seed;
      opt.exact_cap = um_cap;
      const auto res = ptl::align_and_match(inst.pairs, spec, opt);
      emit(um_out, ptl::match_result_to_json(res));
      maybe_manifest(um_out, "solve-unmatched",
                     nlohmann::json{{"instance", um_in}, {"mode", um_mode}, {"budget", um_budget}},
                     seed);
    } else if (*coreset) {
      const auto inst = ptl::load_instance_file(cs_in);
      ptl::WeightedPairSet weighted{inst.pairs, inst.weights.value_or(std::vector<double>(
                                                    inst.pairs.size(), 1.0))};
      const ptl::SparseWeights sw =
          ptl::build_coreset(weighted, ptl::CoresetParams{cs_eps, cs_delta, cs_c, 7, seed});
      std::ostringstream ss;
      ptl::write_weighted_csv(ss, weighted, &sw.u);
      emit(cs_out, ss.str());
      nlohmann::json cfg{{"eps", cs_eps}, {"delta", cs_delta},          {"c", cs_c},
                         {"draws", sw.draws}, {"nonzeros", sw.nonzeros()}, {"input", cs_in}};
      maybe_manifest(cs_out, "coreset", cfg, seed);
      std::cerr << "coreset: " << sw.nonzeros() << " of " << weighted.size() << " pairs kept\n";
    } else if (*stream) {
      ptl::StreamConfig cfg;
      cfg.leaf_size = st_leaf;
      cfg.eps_level = st_eps;
      cfg.seed = seed;
      ptl::StreamState state(cfg);
      std::string line;
      while (std::getline(std::cin, line)) {
        const auto rec = ptl::parse_stream_record(line);
        if (rec) state.insert(std::get<0>(*rec), std::get<1>(*rec), std::get<2>(*rec));
      }
      const auto summary = state.coreset();
      ptl::write_weighted_csv(std::cout, summary);
      std::cerr << "stream: " << state.pairs_seen() << " pairs in, " << summary.size()
                << " resident, depth " << state.depth() << "\n";
    } else if (*bench) {
      ptl::SweepConfig cfg;
      cfg.solvers = bench_solvers;
      cfg.ns = bench_ns;
      cfg.ks = bench_ks;
      cfg.repeats = bench_repeats;
      cfg.base_seed = seed;
      cfg.threads = threads;
      const auto rows = bench_kind == "error" ? ptl::run_error_sweep(cfg) : ptl::run_time_sweep(cfg);
      std::ostringstream ss;
      ptl::write_sweep_csv(ss, rows);
      std::string text = ss.str();
      if (!text.empty() && text.back() == '\n') text.pop_back();
      emit(bench_out, text);
      maybe_manifest(bench_out, "bench",
                     nlohmann::json{{"kind", bench_kind},
                                    {"solvers", bench_solvers},
                                    {"n", bench_ns},
                                    {"k", bench_ks},
                                    {"repeats", bench_repeats}},
                     seed);
      for (const auto& c : ptl::summarize(rows))
        std::cerr << c.solver << " n=" << c.n << " k=" << c.k << " mean=" << c.mean
                  << " sd=" << c.stddev << "\n";
    } else if (*eval) {
      const auto inst = ptl::load_instance_file(ev_in);
      const auto a = ptl::alignment_from_json(ptl::read_text_file(ev_align));
      const auto spec = load_cost_spec(ev_spec);
      const double cost = ptl::evaluate_cost(inst.pairs, a, spec);
      std::cout << nlohmann::json{{"cost", cost}}.dump() << '\n';
    }
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  }
  return 0;
}
