#include "ising/io.hpp"

#include <algorithm>
#include <charconv>
#include <cstdint>
#include <fstream>
#include <sstream>

namespace ising {

namespace {

std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
    std::size_t j = i;
    while (j < line.size() && line[j] != ' ' && line[j] != '\t') ++j;
    if (j > i) out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

double parse_double_tok(std::string_view tok, int line) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc{} || ptr != tok.data() + tok.size())
    throw ParseError(line, "expected a number, got '" + std::string(tok) + "'");
  return v;
}

std::int64_t parse_int_tok(std::string_view tok, int line) {
  if (!tok.empty() && tok.front() == '+') tok.remove_prefix(1);
  std::int64_t v = 0;
  const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc{} || ptr != tok.data() + tok.size())
    throw ParseError(line, "expected an integer, got '" + std::string(tok) + "'");
  return v;
}

}  // namespace

std::string format_double(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  (void)ec;
  return std::string(buf, ptr);
}

SpinSystem parse_instance(std::string_view text) {
  std::int64_t n = -1, declared_edges = -1;
  std::vector<double> h;
  std::vector<Edge> edges;
  std::vector<std::pair<SpinIndex, int>> clamps;
  std::vector<std::uint8_t> h_seen, c_seen;
  double offset = 0.0;
  bool offset_seen = false;

  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t eol = text.find('\n', pos);
    std::string_view line = text.substr(pos, eol == std::string_view::npos ? text.size() - pos
                                                                           : eol - pos);
    pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;
    ++line_no;
    const auto tok = split_ws(line);
    if (tok.empty()) continue;

    if (n < 0) {
      if (tok.size() != 4 || tok[0] != "ising")
        throw ParseError(line_no, "expected header 'ising <version> <n> <num_edges>'");
      if (parse_int_tok(tok[1], line_no) != 1)
        throw ParseError(line_no, "unsupported format version");
      n = parse_int_tok(tok[2], line_no);
      declared_edges = parse_int_tok(tok[3], line_no);
      if (n < 0 || declared_edges < 0) throw ParseError(line_no, "negative count in header");
      h.assign(static_cast<std::size_t>(n), 0.0);
      h_seen.assign(static_cast<std::size_t>(n), 0);
      c_seen.assign(static_cast<std::size_t>(n), 0);
      continue;
    }

    if (tok[0] == "h") {
      if (tok.size() != 3) throw ParseError(line_no, "expected 'h <i> <value>'");
      const std::int64_t i = parse_int_tok(tok[1], line_no);
      if (i < 0 || i >= n) throw ParseError(line_no, "spin index out of range");
      if (h_seen[static_cast<std::size_t>(i)]++)
        throw ParseError(line_no, "duplicate field line for spin " + std::to_string(i));
      h[static_cast<std::size_t>(i)] = parse_double_tok(tok[2], line_no);
    } else if (tok[0] == "e") {
      if (tok.size() < 2) throw ParseError(line_no, "expected 'e <k> <i1..ik> <value>'");
      const std::int64_t k = parse_int_tok(tok[1], line_no);
      if (k < 2) throw ParseError(line_no, "edge arity must be >= 2");
      if (static_cast<std::int64_t>(tok.size()) != k + 3)
        throw ParseError(line_no, "edge line expects " + std::to_string(k) +
                                      " spin indices and one weight");
      Edge e;
      for (std::int64_t t = 0; t < k; ++t) {
        const std::int64_t i = parse_int_tok(tok[static_cast<std::size_t>(2 + t)], line_no);
        if (i < 0 || i >= n) throw ParseError(line_no, "spin index out of range");
        e.members.push_back(static_cast<SpinIndex>(i));
      }
      auto sorted = e.members;
      std::sort(sorted.begin(), sorted.end());
      if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
        throw ParseError(line_no, "duplicate spin index within edge");
      e.weight = parse_double_tok(tok.back(), line_no);
      edges.push_back(std::move(e));
    } else if (tok[0] == "c") {
      if (tok.size() != 3) throw ParseError(line_no, "expected 'c <i> <+1|-1>'");
      const std::int64_t i = parse_int_tok(tok[1], line_no);
      if (i < 0 || i >= n) throw ParseError(line_no, "spin index out of range");
      const std::int64_t v = parse_int_tok(tok[2], line_no);
      if (v != 1 && v != -1) throw ParseError(line_no, "clamp value must be +1 or -1");
      if (c_seen[static_cast<std::size_t>(i)]++)
        throw ParseError(line_no, "duplicate clamp line for spin " + std::to_string(i));
      clamps.emplace_back(static_cast<SpinIndex>(i), static_cast<int>(v));
    } else if (tok[0] == "offset") {
      if (tok.size() != 2) throw ParseError(line_no, "expected 'offset <value>'");
      if (offset_seen) throw ParseError(line_no, "duplicate offset line");
      offset = parse_double_tok(tok[1], line_no);
      offset_seen = true;
    } else {
      throw ParseError(line_no, "unknown line type '" + std::string(tok[0]) + "'");
    }
  }

  if (n < 0) throw ParseError(1, "missing header");
  if (static_cast<std::int64_t>(edges.size()) != declared_edges)
    throw ParseError(line_no, "header declares " + std::to_string(declared_edges) +
                                  " edges, file has " + std::to_string(edges.size()));
  return SpinSystem(static_cast<SpinIndex>(n), std::move(h), std::move(edges), offset,
                    std::move(clamps));
}

SpinSystem load_instance(const std::string& path) { return parse_instance(read_text_file(path)); }

std::string serialize_instance(const SpinSystem& system) {
  std::string out;
  out += "ising 1 " + std::to_string(system.num_spins()) + ' ' +
         std::to_string(system.edges().size()) + '\n';
  const auto h = system.magnetizations();
  for (SpinIndex i = 0; i < system.num_spins(); ++i)
    if (h[static_cast<std::size_t>(i)] != 0.0)
      out += "h " + std::to_string(i) + ' ' + format_double(h[static_cast<std::size_t>(i)]) + '\n';

  std::vector<const Edge*> sorted;
  sorted.reserve(system.edges().size());
  for (const auto& e : system.edges()) sorted.push_back(&e);
  std::sort(sorted.begin(), sorted.end(),
            [](const Edge* a, const Edge* b) { return a->members < b->members; });
  for (const Edge* e : sorted) {
    out += "e " + std::to_string(e->members.size());
    for (SpinIndex m : e->members) out += ' ' + std::to_string(m);
    out += ' ' + format_double(e->weight) + '\n';
  }
  for (SpinIndex i = 0; i < system.num_spins(); ++i)
    if (system.is_clamped(i))
      out += "c " + std::to_string(i) + ' ' + (system.clamp_value(i) > 0 ? "+1" : "-1") + '\n';
  out += "offset " + format_double(system.constant_offset()) + '\n';
  return out;
}

void save_instance(const SpinSystem& system, const std::string& path) {
  write_text_file(path, serialize_instance(system));
}

std::string samples_to_csv(const std::vector<StartSample>& samples) {
  std::string out = "start_index,seed,energy,passes,wall_ms\n";
  for (const auto& s : samples) {
    out += std::to_string(s.start_index) + ',' + std::to_string(s.seed) + ',' +
           format_double(s.energy) + ',' + std::to_string(s.passes) + ',' +
           format_double(s.wall_ms) + '\n';
  }
  return out;
}

void export_samples(const std::vector<StartSample>& samples, const std::string& path) {
  write_text_file(path, samples_to_csv(samples));
}

std::vector<StartSample> import_samples(const std::string& path) {
  const std::string text = read_text_file(path);
  std::vector<StartSample> out;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line_no == 1 || line.empty()) continue;
    StartSample s;
    std::replace(line.begin(), line.end(), ',', ' ');
    const auto tok = split_ws(line);
    if (tok.size() != 5) throw ParseError(line_no, "expected 5 CSV fields");
    s.start_index = static_cast<int>(parse_int_tok(tok[0], line_no));
    s.seed = static_cast<std::uint64_t>(parse_int_tok(tok[1], line_no));
    s.energy = parse_double_tok(tok[2], line_no);
    s.passes = static_cast<std::uint64_t>(parse_int_tok(tok[3], line_no));
    s.wall_ms = parse_double_tok(tok[4], line_no);
    out.push_back(s);
  }
  return out;
}

std::string distribution_to_csv(const FactoringDistribution& dist, std::int64_t n) {
  std::string out = "product,count,probability,is_correct\n";
  for (const auto& b : dist.bins) {
    const double p = static_cast<double>(b.count) / static_cast<double>(dist.num_starts);
    out += std::to_string(b.product) + ',' + std::to_string(b.count) + ',' + format_double(p) +
           ',' + (b.product == n ? "1" : "0") + '\n';
  }
  return out;
}

void export_distribution(const FactoringDistribution& dist, std::int64_t n,
                         const std::string& path) {
  write_text_file(path, distribution_to_csv(dist, n));
}

std::vector<FactoringDistribution::Bin> import_distribution(const std::string& path) {
  const std::string text = read_text_file(path);
  std::vector<FactoringDistribution::Bin> out;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line_no == 1 || line.empty()) continue;
    std::replace(line.begin(), line.end(), ',', ' ');
    const auto tok = split_ws(line);
    if (tok.size() != 4) throw ParseError(line_no, "expected 4 CSV fields");
    out.push_back({parse_int_tok(tok[0], line_no),
                   static_cast<std::uint64_t>(parse_int_tok(tok[1], line_no))});
  }
  return out;
}

nlohmann::json report_to_json(const SolveReport& report) {
  nlohmann::json config = nlohmann::json::array();
  for (double v : report.best_config.values) config.push_back(static_cast<int>(v));
  return nlohmann::json{{"best_energy", report.best_energy},
                        {"best_config", std::move(config)},
                        {"nodes_explored", report.nodes_explored},
                        {"bound_prunes", report.bound_prunes},
                        {"dominance_prunes", report.dominance_prunes},
                        {"passes", report.passes},
                        {"moves", report.moves},
                        {"proven_optimal", report.proven_optimal},
                        {"incumbent_energies", report.incumbent_energies},
                        {"wall_ms", report.wall_ms}};
}

nlohmann::json distribution_to_json(const FactoringDistribution& dist,
                                    const FactoringEncoding& encoding) {
  return nlohmann::json{{"n", encoding.n},
                        {"n_x", encoding.n_x},
                        {"n_y", encoding.n_y},
                        {"num_spins", encoding.system.num_spins()},
                        {"free_spins", encoding.system.num_free()},
                        {"num_starts", dist.num_starts},
                        {"success_probability", dist.success_probability},
                        {"entropy_bits", dist.entropy_bits},
                        {"distinct_products", dist.bins.size()},
                        {"best",
                         {{"x", dist.best.x},
                          {"y", dist.best.y},
                          {"product", dist.best.product},
                          {"penalty", dist.best.penalty},
                          {"start_index", dist.best.start_index}}}};
}

void write_json(const nlohmann::json& j, const std::string& path) {
  write_text_file(path, j.dump(2) + "\n");
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::string& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open file for writing: " + path);
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace ising
