#include "ising/polynomial.hpp"

#include <algorithm>
#include <stdexcept>

namespace ising {

SpinPolynomial SpinPolynomial::constant(double c) {
  SpinPolynomial p;
  if (c != 0.0) p.terms_[{}] = c;
  return p;
}

SpinPolynomial SpinPolynomial::spin(SpinIndex i) {
  SpinPolynomial p;
  p.terms_[{i}] = 1.0;
  return p;
}

double SpinPolynomial::coefficient(const Monomial& m) const {
  const auto it = terms_.find(m);
  return it == terms_.end() ? 0.0 : it->second;
}

void SpinPolynomial::add_term(Monomial m, double c) {
  if (!std::is_sorted(m.begin(), m.end()) ||
      std::adjacent_find(m.begin(), m.end()) != m.end())
    throw std::invalid_argument("monomial must be sorted and duplicate-free");
  auto [it, inserted] = terms_.emplace(std::move(m), c);
  if (!inserted) it->second += c;
  if (it->second == 0.0) terms_.erase(it);
}

SpinPolynomial& SpinPolynomial::operator+=(const SpinPolynomial& other) {
  for (const auto& [m, c] : other.terms_) {
    auto [it, inserted] = terms_.emplace(m, c);
    if (!inserted) it->second += c;
    if (it->second == 0.0) terms_.erase(it);
  }
  return *this;
}

SpinPolynomial& SpinPolynomial::operator-=(const SpinPolynomial& other) {
  for (const auto& [m, c] : other.terms_) {
    auto [it, inserted] = terms_.emplace(m, -c);
    if (!inserted) it->second -= c;
    if (it->second == 0.0) terms_.erase(it);
  }
  return *this;
}

SpinPolynomial& SpinPolynomial::operator*=(double scalar) {
  if (scalar == 0.0) {
    terms_.clear();
    return *this;
  }
  for (auto& [m, c] : terms_) c *= scalar;
  return *this;
}

SpinPolynomial operator*(const SpinPolynomial& a, const SpinPolynomial& b) {
  SpinPolynomial out;
  SpinPolynomial::Monomial prod;
  for (const auto& [ma, ca] : a.terms_) {
    for (const auto& [mb, cb] : b.terms_) {
      prod.clear();
      std::set_symmetric_difference(ma.begin(), ma.end(), mb.begin(), mb.end(),
                                    std::back_inserter(prod));
      auto [it, inserted] = out.terms_.emplace(prod, ca * cb);
      if (!inserted) it->second += ca * cb;
    }
  }
  std::erase_if(out.terms_, [](const auto& kv) { return kv.second == 0.0; });
  return out;
}

double SpinPolynomial::evaluate(const SpinConfiguration& config) const {
  double acc = 0.0;
  for (const auto& [m, c] : terms_) {
    double p = c;
    for (SpinIndex i : m) p *= config.values[static_cast<std::size_t>(i)];
    acc += p;
  }
  return acc;
}

SpinSystem SpinPolynomial::to_spin_system(SpinIndex num_spins,
                                          std::vector<std::pair<SpinIndex, int>> clamped) const {
  double offset = 0.0;
  std::vector<double> h(static_cast<std::size_t>(num_spins), 0.0);
  std::vector<Edge> edges;
  for (const auto& [m, c] : terms_) {
    if (m.empty()) {
      offset = c;
    } else if (m.size() == 1) {
      if (m[0] >= num_spins) throw std::invalid_argument("polynomial references unknown spin");
      h[static_cast<std::size_t>(m[0])] = -c;
    } else {
      edges.push_back({m, -c});
    }
  }
  return SpinSystem(num_spins, std::move(h), std::move(edges), offset, std::move(clamped));
}

}  // namespace ising
