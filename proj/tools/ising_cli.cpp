#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "ising/exact.hpp"
#include "ising/factoring.hpp"
#include "ising/io.hpp"
#include "ising/kernels.hpp"
#include "ising/lattice.hpp"
#include "ising/local_search.hpp"
#include "ising/rng.hpp"
#include "ising/spin_system.hpp"

namespace {

using nlohmann::json;

constexpr std::uint64_t kDefaultSeed = 1;  // fixed, never wall-clock

std::vector<int> parse_int_list(const std::string& s) {
  std::vector<int> out;
  std::size_t pos = 0;
  while (pos < s.size()) {
    std::size_t comma = s.find(',', pos);
    if (comma == std::string::npos) comma = s.size();
    out.push_back(std::stoi(s.substr(pos, comma - pos)));
    pos = comma + 1;
  }
  if (out.empty()) throw std::invalid_argument("empty list");
  return out;
}

// --workers flag, overridden by ISING_WORKERS when set.
int effective_workers(int flag_value) {
  if (const char* env = std::getenv("ISING_WORKERS")) {
    const int v = std::atoi(env);
    if (v >= 1) return v;
  }
  return flag_value;
}

int run_generate(const std::string& dims_str, int periodic, const std::string& dist,
                 const std::string& field, std::uint64_t seed, const std::string& out_path) {
  const auto dims = parse_int_list(dims_str);
  const auto coupling =
      dist == "gaussian" ? ising::CouplingDist::gaussian : ising::CouplingDist::bimodal;
  const auto field_dist =
      field == "gaussian" ? ising::FieldDist::gaussian : ising::FieldDist::zero;
  const auto system = ising::generate_lattice(dims, periodic, coupling, field_dist, seed);
  ising::save_instance(system, out_path);
  json summary{{"run_config",
                {{"subcommand", "generate"},
                 {"dims", dims},
                 {"periodic", periodic},
                 {"coupling", dist},
                 {"field", field},
                 {"seed", seed}}},
               {"num_spins", system.num_spins()},
               {"num_edges", system.edges().size()},
               {"path", out_path}};
  std::cout << summary.dump(2) << "\n";
  return 0;
}

int run_solve(const std::string& instance_path, const std::string& solver, int starts,
              std::uint64_t seed, int workers, bool no_dominance, const std::string& branching,
              std::optional<std::uint64_t> node_limit, std::optional<double> time_limit_ms,
              const std::string& report_path, const std::string& samples_path) {
  const ising::SpinSystem system = ising::load_instance(instance_path);
  json run_config{{"subcommand", "solve"},
                  {"instance", instance_path},
                  {"solver", solver},
                  {"starts", starts},
                  {"seed", seed},
                  {"workers", workers},
                  {"dominance", !no_dominance},
                  {"branching", branching},
                  {"kernel", std::string(ising::kernels::name(ising::kernels::active()))}};

  ising::SolveReport report;
  std::vector<ising::StartSample> samples;
  if (solver == "exhaustive") {
    report = ising::exhaustive_ground_state(system);
  } else if (solver == "bnb") {
    ising::BnbOptions options;
    options.use_dominance = !no_dominance;
    options.branching = branching == "index" ? ising::BnbOptions::Branching::index
                                             : ising::BnbOptions::Branching::degree_desc;
    options.node_limit = node_limit;
    options.time_limit_ms = time_limit_ms;
    if (node_limit) run_config["node_limit"] = *node_limit;
    if (time_limit_ms) run_config["time_limit_ms"] = *time_limit_ms;
    report = ising::branch_and_bound(system, options);
  } else if (solver == "local") {
    auto result = ising::multi_start(system, starts, seed, workers);
    report = std::move(result.best);
    samples = std::move(result.samples);
  } else {
    throw std::invalid_argument("unknown solver: " + solver);
  }

  json out = ising::report_to_json(report);
  out["solver"] = solver;
  out["energy_lower_bound"] = system.energy_lower_bound();
  out["run_config"] = run_config;
  if (!samples_path.empty()) {
    ising::export_samples(samples, samples_path);
    out["samples_path"] = samples_path;
  }
  if (!report_path.empty()) ising::write_json(out, report_path);
  std::cout << out.dump(2) << "\n";
  return 0;
}

json factor_one(std::int64_t n, ising::FactorEncoder encoder, int truncate_arity, int n_x,
                int n_y, int starts, std::uint64_t seed, int workers,
                const std::string& csv_path) {
  const auto encoding = ising::make_factoring_encoding(n, encoder, truncate_arity, n_x, n_y);
  const auto dist = ising::factoring_experiment(encoding, starts, seed, workers);
  if (!csv_path.empty()) ising::export_distribution(dist, n, csv_path);
  json j = ising::distribution_to_json(dist, encoding);
  if (!csv_path.empty()) j["csv_path"] = csv_path;
  return j;
}

int run_factor(std::int64_t n, const std::string& encoder, int truncate_arity, int n_x, int n_y,
               int starts, std::uint64_t seed, int workers, const std::string& csv_path,
               const std::string& summary_path) {
  json run_config{{"subcommand", "factor"}, {"n", n},       {"encoder", encoder},
                  {"starts", starts},       {"seed", seed}, {"workers", workers}};
  if (truncate_arity > 0) run_config["truncate"] = truncate_arity;

  json out{{"run_config", run_config}};
  if (encoder == "both") {
    out["direct"] = factor_one(n, ising::FactorEncoder::direct, 0, n_x, n_y, starts, seed,
                               workers, csv_path.empty() ? "" : csv_path + ".direct.csv");
    out["ancilla"] = factor_one(n, ising::FactorEncoder::ancilla, 0, n_x, n_y, starts, seed,
                                workers, csv_path.empty() ? "" : csv_path + ".ancilla.csv");
  } else {
    ising::FactorEncoder enc;
    if (truncate_arity > 0)
      enc = ising::FactorEncoder::truncated;
    else if (encoder == "direct")
      enc = ising::FactorEncoder::direct;
    else if (encoder == "ancilla")
      enc = ising::FactorEncoder::ancilla;
    else
      throw std::invalid_argument("unknown encoder: " + encoder);
    if (truncate_arity > 0 && encoder != "direct")
      throw std::invalid_argument("--truncate applies to the direct encoder only");
    out[encoder] = factor_one(n, enc, truncate_arity, n_x, n_y, starts, seed, workers, csv_path);
  }
  if (!summary_path.empty()) ising::write_json(out, summary_path);
  std::cout << out.dump(2) << "\n";
  return 0;
}

int run_bench(const std::string& sizes_str, int passes, std::uint64_t seed,
              const std::string& csv_path) {
  const auto sizes = parse_int_list(sizes_str);
  std::string csv = "n,passes,mean_pass_ms\n";
  json rows = json::array();
  for (int n : sizes) {
    // Near-square 2-D torus with exactly n sites.
    int a = 1;
    for (int d = 1; static_cast<std::int64_t>(d) * d <= n; ++d)
      if (n % d == 0) a = d;
    const int b = n / a;
    const auto system = ising::generate_lattice({a, b}, 2, ising::CouplingDist::bimodal,
                                                ising::FieldDist::zero, seed);
    const auto times = ising::pass_times_ms(system, ising::derive_seed(seed, 0), passes);
    double mean = 0.0;
    for (double t : times) mean += t;
    mean /= static_cast<double>(times.size());
    csv += std::to_string(n) + ',' + std::to_string(passes) + ',' + ising::format_double(mean) +
           '\n';
    json row;
    row["n"] = n;
    row["dims"] = {a, b};
    row["mean_pass_ms"] = mean;
    row["pass_ms"] = times;
    rows.push_back(std::move(row));
  }
  if (!csv_path.empty()) ising::write_text_file(csv_path, csv);
  json out{{"run_config",
            {{"subcommand", "bench"}, {"sizes", sizes}, {"passes", passes}, {"seed", seed}}},
           {"rows", rows}};
  std::cout << out.dump(2) << "\n";
  return 0;
}

int run_classify(int dim, int bc, bool field, const std::string& signs) {
  ising::InstanceClass ic;
  ic.dimensions = dim;
  ic.boundary_conditions = bc;
  ic.has_magnetization = field;
  ic.coupling_signs =
      signs == "nonnegative" ? ising::CouplingSigns::nonnegative : ising::CouplingSigns::mixed;
  const auto hardness = ising::classify_hardness(ic);
  json out{{"run_config",
            {{"subcommand", "classify"},
             {"dimensions", dim},
             {"boundary_conditions", bc},
             {"magnetization", field},
             {"signs", signs}}},
           {"class", std::string(ising::hardness_name(hardness))},
           {"np_hard", hardness == ising::HardnessClass::np_hard}};
  std::cout << out.dump(2) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Ising spin-glass ground-state toolkit"};
  app.require_subcommand(1);

  std::string kernel = "auto";
  app.add_option("--kernel", kernel, "Arithmetic kernel backend: auto|scalar|avx2")
      ->capture_default_str();

  auto* gen = app.add_subcommand("generate", "Generate a random lattice instance");
  std::string dims = "16,16", dist = "gaussian", field = "zero", out_path = "instance.ising";
  int periodic = 0;
  std::uint64_t seed = kDefaultSeed;
  gen->add_option("--dims", dims, "Lattice extents, comma separated")->capture_default_str();
  gen->add_option("--periodic", periodic, "Number of periodic dimensions")
      ->capture_default_str();
  gen->add_option("--dist", dist, "Coupling distribution: gaussian|bimodal")
      ->check(CLI::IsMember({"gaussian", "bimodal"}))
      ->capture_default_str();
  gen->add_option("--field", field, "Magnetization distribution: zero|gaussian")
      ->check(CLI::IsMember({"zero", "gaussian"}))
      ->capture_default_str();
  gen->add_option("--seed", seed, "RNG seed")->capture_default_str();
  gen->add_option("--out,-o", out_path, "Output instance path")->capture_default_str();

  auto* solve = app.add_subcommand("solve", "Solve an instance file");
  std::string instance_path, solver = "bnb", branching = "degree", report_path, samples_path;
  int starts = 1, workers = 1;
  bool no_dominance = false;
  std::uint64_t solve_seed = kDefaultSeed;
  std::uint64_t node_limit_raw = 0;
  double time_limit_ms = 0.0;
  solve->add_option("--instance,-i", instance_path, "Instance file (.ising)")->required();
  solve->add_option("--solver", solver, "exhaustive|bnb|local")
      ->check(CLI::IsMember({"exhaustive", "bnb", "local"}))
      ->capture_default_str();
  solve->add_option("--starts", starts, "Random starts for the local solver")
      ->capture_default_str();
  solve->add_option("--seed", solve_seed, "RNG seed")->capture_default_str();
  solve->add_option("--workers", workers, "Worker threads for multi-start")
      ->capture_default_str();
  solve->add_flag("--no-dominance", no_dominance, "Disable prune-by-dominance in B&B");
  solve->add_option("--branching", branching, "B&B branching order: degree|index")
      ->check(CLI::IsMember({"degree", "index"}))
      ->capture_default_str();
  solve->add_option("--node-limit", node_limit_raw, "B&B node limit (0 = none)");
  solve->add_option("--time-limit-ms", time_limit_ms, "B&B time limit (0 = none)");
  solve->add_option("--report", report_path, "Write the report JSON here");
  solve->add_option("--samples", samples_path, "Write per-start samples CSV here");

  auto* factor = app.add_subcommand("factor", "Compile and run a factoring experiment");
  std::int64_t n = 0;
  std::string encoder = "direct", csv_path, summary_path;
  int truncate_arity = 0, n_x = 0, n_y = 0, f_starts = 100, f_workers = 1;
  std::uint64_t f_seed = kDefaultSeed;
  factor->add_option("--n", n, "Odd integer to factor")->required();
  factor->add_option("--encoder", encoder, "direct|ancilla|both")
      ->check(CLI::IsMember({"direct", "ancilla", "both"}))
      ->capture_default_str();
  factor->add_option("--truncate", truncate_arity,
                     "Drop hyper-couplings above this arity (direct encoder)");
  factor->add_option("--nx", n_x, "x bit width (0 = default)");
  factor->add_option("--ny", n_y, "y bit width (0 = default)");
  factor->add_option("--starts", f_starts, "Random starts")->capture_default_str();
  factor->add_option("--seed", f_seed, "RNG seed")->capture_default_str();
  factor->add_option("--workers", f_workers, "Worker threads")->capture_default_str();
  factor->add_option("--csv", csv_path, "Write distribution CSV here");
  factor->add_option("--summary", summary_path, "Write summary JSON here");

  auto* bench = app.add_subcommand("bench", "Per-pass timing on 2-D bimodal lattices");
  std::string sizes = "10000,100000,1000000", bench_csv;
  int bench_passes = 3;
  std::uint64_t bench_seed = kDefaultSeed;
  bench->add_option("--sizes", sizes, "Lattice sizes (composite site counts), comma separated")
      ->capture_default_str();
  bench->add_option("--passes", bench_passes, "Passes timed per size")->capture_default_str();
  bench->add_option("--seed", bench_seed, "RNG seed")->capture_default_str();
  bench->add_option("--csv", bench_csv, "Write timing CSV here");

  auto* classify = app.add_subcommand("classify", "Hardness class of a lattice family");
  int c_dim = 2, c_bc = 0;
  bool c_field = false;
  std::string c_signs = "mixed";
  classify->add_option("--dim", c_dim, "Lattice dimensions")->capture_default_str();
  classify->add_option("--bc", c_bc, "Periodic boundary conditions")->capture_default_str();
  classify->add_flag("--field", c_field, "External magnetization present");
  classify->add_option("--signs", c_signs, "Coupling signs: mixed|nonnegative")
      ->check(CLI::IsMember({"mixed", "nonnegative"}))
      ->capture_default_str();

  try {
    app.parse(argc, argv);
    ising::kernels::select(ising::kernels::parse_backend(kernel));
    if (gen->parsed()) return run_generate(dims, periodic, dist, field, seed, out_path);
    if (solve->parsed()) {
      std::optional<std::uint64_t> nl;
      if (node_limit_raw > 0) nl = node_limit_raw;
      std::optional<double> tl;
      if (time_limit_ms > 0) tl = time_limit_ms;
      return run_solve(instance_path, solver, starts, solve_seed, effective_workers(workers),
                       no_dominance, branching, nl, tl, report_path, samples_path);
    }
    if (factor->parsed())
      return run_factor(n, encoder, truncate_arity, n_x, n_y, f_starts, f_seed,
                        effective_workers(f_workers), csv_path, summary_path);
    if (bench->parsed()) return run_bench(sizes, bench_passes, bench_seed, bench_csv);
    if (classify->parsed()) return run_classify(c_dim, c_bc, c_field, c_signs);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help and friends
    std::cerr << json{{"error", e.what()}}.dump() << "\n";
    return e.get_exit_code();
  } catch (const std::exception& e) {
    std::cerr << json{{"error", e.what()}}.dump() << "\n";
    return 1;
  }
  return 0;
}
