#include "cqed/g2_estimate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace cqed {

namespace {

constexpr double nan = std::numeric_limits<double>::quiet_NaN();

double jackknife_error(const std::vector<double>& leave_one_out) {
  const std::size_t b = leave_one_out.size();
  if (b < 2) return nan;
  double mean = 0.0;
  for (double v : leave_one_out) mean += v;
  mean /= static_cast<double>(b);
  double ss = 0.0;
  for (double v : leave_one_out) ss += (v - mean) * (v - mean);
  return std::sqrt(ss * static_cast<double>(b - 1) / static_cast<double>(b));
}

}  // namespace

G2Curve make_curve(std::vector<double> tau_kappa, double kappa) {
  G2Curve c;
  c.tau_ns.reserve(tau_kappa.size());
  for (double t : tau_kappa) c.tau_ns.push_back(t / kappa * 1e9);
  c.tau_kappa = std::move(tau_kappa);
  c.g2.assign(c.tau_kappa.size(), nan);
  c.std_error.assign(c.tau_kappa.size(), nan);
  c.n.assign(c.tau_kappa.size(), 0);
  return c;
}

std::vector<double> uniform_grid(double tau_max, std::size_t points) {
  if (points < 2) throw std::invalid_argument("uniform_grid: need at least 2 points");
  std::vector<double> grid(points);
  for (std::size_t i = 0; i < points; ++i) {
    grid[i] = tau_max * static_cast<double>(i) / static_cast<double>(points - 1);
  }
  return grid;
}

G2Accumulator::G2Accumulator(std::size_t tau_points, std::size_t batch_size, std::uint64_t shard)
    : tau_points_(tau_points), batch_size_(batch_size == 0 ? 1 : batch_size), shard_(shard) {}

G2Accumulator::Batch& G2Accumulator::current() {
  const std::uint64_t index = sample_count_ == 0 ? 0 : (sample_count_ - 1) / batch_size_;
  Batch& b = batches_[{shard_, index}];
  if (b.num.empty()) {
    b.num.assign(tau_points_, 0.0);
    b.num_count.assign(tau_points_, 0);
  }
  return b;
}

void G2Accumulator::begin_sample(double n_before) {
  ++sample_count_;
  n_before_ = n_before;
  ++current().samples;
}

void G2Accumulator::record(std::size_t i, double n_after) {
  Batch& b = current();
  b.num.at(i) += n_before_ * n_after;
  ++b.num_count[i];
}

void G2Accumulator::add_denominator(double n) {
  Batch& b = current();
  b.den += n;
  ++b.den_count;
}

std::uint64_t G2Accumulator::samples() const {
  std::uint64_t s = 0;
  for (const auto& [key, b] : batches_) s += b.samples;
  return s;
}

std::uint64_t G2Accumulator::denominator_count() const {
  std::uint64_t s = 0;
  for (const auto& [key, b] : batches_) s += b.den_count;
  return s;
}

void G2Accumulator::merge(const G2Accumulator& other) {
  if (tau_points_ == 0) tau_points_ = other.tau_points_;
  if (other.tau_points_ != tau_points_ && other.tau_points_ != 0) {
    throw std::invalid_argument("G2Accumulator::merge: tau grids differ");
  }
  for (const auto& [key, b] : other.batches_) {
    if (!batches_.emplace(key, b).second) throw std::invalid_argument("G2Accumulator::merge: duplicate batch key");
  }
}

void G2Accumulator::finish(G2Curve& curve) const {
  if (curve.size() != tau_points_) throw std::invalid_argument("G2Accumulator::finish: grid size mismatch");
  // Sums in key order keep the result independent of merge order.
  std::vector<double> num(tau_points_, 0.0);
  std::vector<std::uint64_t> cnt(tau_points_, 0);
  double den = 0.0;
  std::uint64_t den_cnt = 0;
  for (const auto& [key, b] : batches_) {
    for (std::size_t i = 0; i < tau_points_; ++i) {
      num[i] += b.num[i];
      cnt[i] += b.num_count[i];
    }
    den += b.den;
    den_cnt += b.den_count;
  }
  auto ratio = [](double nsum, double ncount, double dsum, double dcount) {
    if (ncount <= 0.0 || dcount <= 0.0 || dsum == 0.0) return nan;
    const double d = dsum / dcount;
    return nsum / ncount / (d * d);
  };
  std::vector<double> loo;
  loo.reserve(batches_.size());
  for (std::size_t i = 0; i < tau_points_; ++i) {
    curve.g2[i] = ratio(num[i], static_cast<double>(cnt[i]), den, static_cast<double>(den_cnt));
    curve.n[i] = cnt[i];
    loo.clear();
    for (const auto& [key, b] : batches_) {
      loo.push_back(ratio(num[i] - b.num[i], static_cast<double>(cnt[i] - b.num_count[i]), den - b.den,
                          static_cast<double>(den_cnt - b.den_count)));
    }
    curve.std_error[i] = jackknife_error(loo);
  }
}

}  // namespace cqed
