#pragma once

#include <map>
#include <utility>
#include <vector>

#include "ising/spin_system.hpp"

namespace ising {

// Multilinear polynomial over +-1 spin variables: sorted index set -> real
// coefficient, the empty set being the constant term. S^2 = 1 is applied
// eagerly, so a monomial product is the symmetric difference of index sets.
// Zero coefficients are dropped.
class SpinPolynomial {
 public:
  using Monomial = std::vector<SpinIndex>;
  using TermMap = std::map<Monomial, double>;

  SpinPolynomial() = default;

  static SpinPolynomial constant(double c);
  static SpinPolynomial spin(SpinIndex i);

  const TermMap& terms() const { return terms_; }
  std::size_t num_terms() const { return terms_.size(); }
  double coefficient(const Monomial& m) const;
  double constant_term() const { return coefficient({}); }

  void add_term(Monomial m, double c);  // m must be sorted, duplicate-free

  SpinPolynomial& operator+=(const SpinPolynomial& other);
  SpinPolynomial& operator-=(const SpinPolynomial& other);
  SpinPolynomial& operator*=(double scalar);

  friend SpinPolynomial operator+(SpinPolynomial a, const SpinPolynomial& b) { return a += b; }
  friend SpinPolynomial operator-(SpinPolynomial a, const SpinPolynomial& b) { return a -= b; }
  friend SpinPolynomial operator*(SpinPolynomial a, double s) { return a *= s; }
  friend SpinPolynomial operator*(double s, SpinPolynomial a) { return a *= s; }
  friend SpinPolynomial operator*(const SpinPolynomial& a, const SpinPolynomial& b);

  SpinPolynomial squared() const { return *this * *this; }

  double evaluate(const SpinConfiguration& config) const;

  // Spin system whose energy function equals this polynomial: constant ->
  // offset, c*S_i -> h_i = -c, c*S_i..S_k -> J_e = -c (one central sign flip).
  SpinSystem to_spin_system(SpinIndex num_spins,
                            std::vector<std::pair<SpinIndex, int>> clamped = {}) const;

 private:
  TermMap terms_;
};

}  // namespace ising
