#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "ising/factoring.hpp"
#include "ising/local_search.hpp"
#include "ising/solve_report.hpp"
#include "ising/spin_system.hpp"

namespace ising {

class ParseError : public std::runtime_error {
 public:
  ParseError(int line, const std::string& message)
      : std::runtime_error("line " + std::to_string(line) + ": " + message), line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

// Shortest decimal representation that round-trips the value.
std::string format_double(double v);

// Versioned text instance format (.ising):
//   ising 1 <num_spins> <num_edges>
//   h <i> <value>            one line per nonzero field
//   e <k> <i1..ik> <value>   k >= 2 member spins
//   c <i> <+1|-1>            clamped spins
//   offset <value>
// Malformed input raises ParseError carrying the line number.
SpinSystem parse_instance(std::string_view text);
SpinSystem load_instance(const std::string& path);

// Canonical form: fields ascending by spin, edges sorted by member set,
// clamps ascending, offset last. serialize(parse(serialize(x))) is
// byte-identical to serialize(x).
std::string serialize_instance(const SpinSystem& system);
void save_instance(const SpinSystem& system, const std::string& path);

// Per-start sample CSV: start_index,seed,energy,passes,wall_ms
std::string samples_to_csv(const std::vector<StartSample>& samples);
void export_samples(const std::vector<StartSample>& samples, const std::string& path);
std::vector<StartSample> import_samples(const std::string& path);

// Factoring distribution CSV: product,count,probability,is_correct
std::string distribution_to_csv(const FactoringDistribution& dist, std::int64_t n);
void export_distribution(const FactoringDistribution& dist, std::int64_t n,
                         const std::string& path);
std::vector<FactoringDistribution::Bin> import_distribution(const std::string& path);

nlohmann::json report_to_json(const SolveReport& report);
nlohmann::json distribution_to_json(const FactoringDistribution& dist,
                                    const FactoringEncoding& encoding);
void write_json(const nlohmann::json& j, const std::string& path);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, std::string_view text);

}  // namespace ising
