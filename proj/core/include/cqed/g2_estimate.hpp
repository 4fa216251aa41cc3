#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <utility>
#include <vector>

namespace cqed {

struct G2Curve {
  std::vector<double> tau_kappa;
  std::vector<double> tau_ns;
  std::vector<double> g2;
  std::vector<double> std_error;  // NaN where not estimated
  std::vector<std::uint64_t> n;

  std::size_t size() const { return g2.size(); }
};

/// tau grid with the ns axis filled in from kappa (rad/s).
G2Curve make_curve(std::vector<double> tau_kappa, double kappa);

/// Uniform grid of `points` values on [0, tau_max].
std::vector<double> uniform_grid(double tau_max, std::size_t points);

/// Ratio-of-averages estimator num(tau) = mean n_k n(t_k + tau), den = mean n_l,
/// g2 = num / den^2. Sums are kept per batch so that the merge is exact and the
/// standard error can be taken as a delete-one-batch jackknife.
class G2Accumulator {
 public:
  G2Accumulator() = default;
  G2Accumulator(std::size_t tau_points, std::size_t batch_size, std::uint64_t shard = 0);

  std::size_t tau_points() const { return tau_points_; }

  /// Starts a new enforced-jump sample whose pre-jump photon number is `n_before`.
  void begin_sample(double n_before);
  /// Records the post-jump photon number at tau index `i` of the current sample.
  void record(std::size_t i, double n_after);
  void add_denominator(double n);

  std::uint64_t samples() const;
  std::uint64_t denominator_count() const;

  /// Union of batches; shard keys must be disjoint.
  void merge(const G2Accumulator& other);

  /// g2, standard error and per-point sample counts.
  void finish(G2Curve& curve) const;

 private:
  struct Batch {
    std::vector<double> num;
    std::vector<std::uint64_t> num_count;
    double den{0.0};
    std::uint64_t den_count{0};
    std::uint64_t samples{0};
  };
  using Key = std::pair<std::uint64_t, std::uint64_t>;

  Batch& current();

  std::size_t tau_points_{0};
  std::size_t batch_size_{1};
  std::uint64_t shard_{0};
  std::uint64_t sample_count_{0};
  double n_before_{0.0};
  std::map<Key, Batch> batches_;
};

}  // namespace cqed
