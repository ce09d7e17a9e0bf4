#include "magspec/core.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <limits>
#include <thread>

namespace magspec {

namespace {
std::atomic<int> g_threads{1};
}

Box::Box(Eigen::VectorXd lo_, Eigen::VectorXd hi_) : lo(std::move(lo_)), hi(std::move(hi_)) {
  if (lo.size() != hi.size()) throw PreconditionError("box: lo/hi dimension mismatch");
  for (int i = 0; i < lo.size(); ++i)
    if (!(hi[i] > lo[i])) throw PreconditionError("box: empty extent on axis " + std::to_string(i));
}

Box Box::centered(int dim, double half_width) {
  return Box(Eigen::VectorXd::Constant(dim, -half_width), Eigen::VectorXd::Constant(dim, half_width));
}

bool Box::contains(const Point& x, double slack) const {
  if (x.size() != lo.size()) return false;
  for (int i = 0; i < lo.size(); ++i)
    if (x[i] < lo[i] - slack || x[i] > hi[i] + slack) return false;
  return true;
}

double Box::distance_to_boundary(const Point& x) const {
  double d = std::numeric_limits<double>::infinity();
  for (int i = 0; i < lo.size(); ++i) d = std::min({d, x[i] - lo[i], hi[i] - x[i]});
  return d;
}

Box Box::inflated(double margin) const {
  return Box(lo.array() - margin, hi.array() + margin);
}

Box Box::scaled(double factor) const {
  const Point c = center();
  return Box(c + factor * (lo - c), c + factor * (hi - c));
}

bool Box::contains(const Box& other, double slack) const {
  return contains(other.lo, slack) && contains(other.hi, slack);
}

void set_num_threads(int n) { g_threads = std::max(1, n); }
int num_threads() { return g_threads; }

void parallel_for(std::ptrdiff_t begin, std::ptrdiff_t end,
                  const std::function<void(std::ptrdiff_t)>& fn) {
  const std::ptrdiff_t count = end - begin;
  if (count <= 0) return;
  const int workers = static_cast<int>(std::min<std::ptrdiff_t>(num_threads(), count));
  if (workers <= 1) {
    for (std::ptrdiff_t i = begin; i < end; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(workers);
  std::vector<std::exception_ptr> errors(workers);
  const std::ptrdiff_t chunk = (count + workers - 1) / workers;
  for (int w = 0; w < workers; ++w) {
    const std::ptrdiff_t b = begin + w * chunk;
    const std::ptrdiff_t e = std::min(end, b + chunk);
    if (b >= e) break;
    pool.emplace_back([b, e, &fn, &err = errors[w]] {
      try {
        for (std::ptrdiff_t i = b; i < e; ++i) fn(i);
      } catch (...) {
        err = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  // the lowest chunk's error wins, matching the serial order
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace magspec
