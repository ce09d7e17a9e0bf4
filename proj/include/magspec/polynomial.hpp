#pragma once

#include "magspec/core.hpp"

#include <string>
#include <vector>

namespace magspec {

/// Multivariate polynomial in x1..xd with real coefficients.
///
/// Text form (used by config files): a sum of monomials such as
/// `1 + x1^2 - 0.5*x1*x2^3`. Variables are 1-based.
class Polynomial {
 public:
  struct Term {
    double coef = 0.0;
    std::vector<int> exponents;  // one entry per variable
  };

  Polynomial() = default;
  explicit Polynomial(int dim) : dim_(dim) {}

  static Polynomial constant(int dim, double c);
  /// Throws PreconditionError on malformed text or out-of-range variables.
  static Polynomial parse(const std::string& text, int dim);

  int dim() const { return dim_; }
  const std::vector<Term>& terms() const { return terms_; }
  int degree() const;
  bool is_zero() const { return terms_.empty(); }

  void add_term(double coef, std::vector<int> exponents);

  double operator()(const Point& x) const;
  Polynomial derivative(int axis) const;
  Eigen::VectorXd gradient(const Point& x) const;

 private:
  int dim_ = 0;
  std::vector<Term> terms_;
};

}  // namespace magspec
