#include "magspec/polynomial.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>

namespace magspec {

namespace {

class Parser {
 public:
  Parser(const std::string& text, int dim) : s_(text), dim_(dim) {}

  Polynomial run() {
    Polynomial p(dim_);
    skip();
    if (pos_ == s_.size()) fail("empty polynomial");
    double sign = 1.0;
    if (peek() == '+' || peek() == '-') sign = take() == '-' ? -1.0 : 1.0;
    term(p, sign);
    while (skip(), pos_ < s_.size()) {
      const char op = take();
      if (op != '+' && op != '-') fail(std::string("unexpected '") + op + "'");
      term(p, op == '-' ? -1.0 : 1.0);
    }
    return p;
  }

 private:
  void term(Polynomial& p, double sign) {
    skip();
    double coef = sign;
    std::vector<int> exps(dim_, 0);
    bool have_factor = false;
    if (pos_ < s_.size() && (std::isdigit(static_cast<unsigned char>(peek())) || peek() == '.')) {
      coef *= number();
      have_factor = true;
      skip();
      if (pos_ < s_.size() && peek() == '*') {
        take();
        factor(exps);
      }
    } else {
      factor(exps);
      have_factor = true;
    }
    while (skip(), pos_ < s_.size() && peek() == '*') {
      take();
      factor(exps);
    }
    if (!have_factor) fail("empty term");
    p.add_term(coef, std::move(exps));
  }

  void factor(std::vector<int>& exps) {
    skip();
    if (pos_ >= s_.size() || peek() != 'x') fail("expected variable x<i>");
    take();
    const int var = integer();
    if (var < 1 || var > dim_) fail("variable x" + std::to_string(var) + " out of range");
    int power = 1;
    skip();
    if (pos_ < s_.size() && peek() == '^') {
      take();
      skip();
      power = integer();
    }
    exps[var - 1] += power;
  }

  double number() {
    const char* begin = s_.c_str() + pos_;
    char* end = nullptr;
    const double v = std::strtod(begin, &end);
    if (end == begin) fail("expected number");
    pos_ += static_cast<std::size_t>(end - begin);
    return v;
  }

  int integer() {
    std::size_t start = pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    if (start == pos_) fail("expected integer");
    return std::stoi(s_.substr(start, pos_ - start));
  }

  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  char peek() const { return s_[pos_]; }
  char take() { return s_[pos_++]; }
  [[noreturn]] void fail(const std::string& what) const {
    throw PreconditionError("polynomial '" + s_ + "': " + what + " at column " + std::to_string(pos_ + 1));
  }

  const std::string& s_;
  int dim_;
  std::size_t pos_ = 0;
};

}  // namespace

Polynomial Polynomial::constant(int dim, double c) {
  Polynomial p(dim);
  if (c != 0.0) p.add_term(c, std::vector<int>(dim, 0));
  return p;
}

Polynomial Polynomial::parse(const std::string& text, int dim) {
  if (dim < 1) throw PreconditionError("polynomial: dimension must be positive");
  return Parser(text, dim).run();
}

int Polynomial::degree() const {
  int deg = 0;
  for (const auto& t : terms_) {
    int d = 0;
    for (int e : t.exponents) d += e;
    deg = std::max(deg, d);
  }
  return deg;
}

void Polynomial::add_term(double coef, std::vector<int> exponents) {
  if (static_cast<int>(exponents.size()) != dim_) throw PreconditionError("polynomial: exponent arity mismatch");
  for (auto& t : terms_) {
    if (t.exponents == exponents) {
      t.coef += coef;
      return;
    }
  }
  if (coef != 0.0) terms_.push_back({coef, std::move(exponents)});
}

double Polynomial::operator()(const Point& x) const {
  double sum = 0.0;
  for (const auto& t : terms_) {
    double m = t.coef;
    for (int i = 0; i < dim_; ++i)
      for (int k = 0; k < t.exponents[i]; ++k) m *= x[i];
    sum += m;
  }
  return sum;
}

Polynomial Polynomial::derivative(int axis) const {
  Polynomial d(dim_);
  for (const auto& t : terms_) {
    const int e = t.exponents[axis];
    if (e == 0) continue;
    auto ex = t.exponents;
    ex[axis] = e - 1;
    d.add_term(t.coef * e, std::move(ex));
  }
  return d;
}

Eigen::VectorXd Polynomial::gradient(const Point& x) const {
  Eigen::VectorXd g(dim_);
  for (int i = 0; i < dim_; ++i) g[i] = derivative(i)(x);
  return g;
}

}  // namespace magspec
