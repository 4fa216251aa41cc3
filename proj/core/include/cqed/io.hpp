#pragma once

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "cqed/analytics.hpp"
#include "cqed/config.hpp"
#include "cqed/g2_estimate.hpp"
#include "cqed/trajectory.hpp"

namespace cqed {

/// tau_kappa,tau_ns,g2,stderr,n
void write_g2_csv(std::ostream& out, const G2Curve& curve);
G2Curve read_g2_csv(std::istream& in);

/// t_kappa,photon_number
void write_series_csv(std::ostream& out, std::span<const SemiclassicalSeries> series);
/// bin_lo,bin_hi,prob
void write_hist_csv(std::ostream& out, const Histogram& hist);
/// time_kappa,kind,atom,vetoed
void write_jumps_csv(std::ostream& out, std::span<const JumpEvent> jumps);

using Summary = std::vector<std::pair<std::string, std::string>>;
/// key,value
void write_summary_csv(std::ostream& out, const Summary& summary);

/// Output directory with one file per artifact.
class OutputDir {
 public:
  explicit OutputDir(std::filesystem::path dir);
  const std::filesystem::path& path() const { return dir_; }
  std::filesystem::path file(const std::string& name) const { return dir_ / name; }

  void g2(const G2Curve& curve, const std::string& name = "g2.csv") const;
  void series(std::span<const SemiclassicalSeries> series) const;
  void hist(const Histogram& hist) const;
  void jumps(std::span<const JumpEvent> jumps) const;
  void beam(const std::vector<BeamEvent>& events) const;
  void summary(const Summary& summary) const;
  void manifest(const RunConfig& cfg, const std::string& comment = {}) const;

 private:
  std::filesystem::path dir_;
};

}  // namespace cqed
