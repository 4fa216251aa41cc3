#include "cqed/io.hpp"

#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace cqed {

namespace {

std::ofstream open(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  return out;
}

std::string_view to_string(JumpKind k) {
  switch (k) {
    case JumpKind::forwards: return "forwards";
    case JumpKind::side: return "side";
    case JumpKind::enforced: return "enforced";
  }
  return "?";
}

}  // namespace

void write_g2_csv(std::ostream& out, const G2Curve& c) {
  out << "tau_kappa,tau_ns,g2,stderr,n\n";
  for (std::size_t i = 0; i < c.size(); ++i) {
    out << format_double(c.tau_kappa[i]) << ',' << format_double(c.tau_ns[i]) << ',' << format_double(c.g2[i]) << ','
        << format_double(c.std_error[i]) << ',' << (i < c.n.size() ? c.n[i] : 0) << '\n';
  }
}

G2Curve read_g2_csv(std::istream& in) {
  G2Curve c;
  std::string line;
  if (!std::getline(in, line) || line.rfind("tau_kappa,tau_ns,g2,stderr,n", 0) != 0) {
    throw std::runtime_error("read_g2_csv: unexpected header");
  }
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream row(line);
    std::string cell[5];
    for (auto& s : cell) std::getline(row, s, ',');
    c.tau_kappa.push_back(std::stod(cell[0]));
    c.tau_ns.push_back(std::stod(cell[1]));
    c.g2.push_back(std::stod(cell[2]));
    c.std_error.push_back(std::stod(cell[3]));
    c.n.push_back(std::stoull(cell[4]));
  }
  return c;
}

void write_series_csv(std::ostream& out, std::span<const SemiclassicalSeries> series) {
  out << "t_kappa,photon_number\n";
  for (const auto& s : series) {
    for (std::size_t i = 0; i < s.photon_number.size(); ++i) {
      out << format_double(s.t_kappa[i]) << ',' << format_double(s.photon_number[i]) << '\n';
    }
  }
}

void write_hist_csv(std::ostream& out, const Histogram& h) {
  out << "bin_lo,bin_hi,prob\n";
  for (std::size_t i = 0; i < h.prob.size(); ++i) {
    out << format_double(h.bin_lo[i]) << ',' << format_double(h.bin_hi[i]) << ',' << format_double(h.prob[i]) << '\n';
  }
}

void write_jumps_csv(std::ostream& out, std::span<const JumpEvent> jumps) {
  out << "time_kappa,kind,atom,vetoed\n";
  for (const auto& j : jumps) {
    out << format_double(j.time) << ',' << to_string(j.kind) << ',' << j.atom << ',' << (j.vetoed ? 1 : 0) << '\n';
  }
}

void write_summary_csv(std::ostream& out, const Summary& summary) {
  out << "key,value\n";
  for (const auto& [k, v] : summary) out << k << ',' << v << '\n';
}

OutputDir::OutputDir(std::filesystem::path dir) : dir_(std::move(dir)) {
  std::error_code ec;
  std::filesystem::create_directories(dir_, ec);
  if (ec) throw std::runtime_error("cannot create output directory " + dir_.string() + ": " + ec.message());
}

void OutputDir::g2(const G2Curve& curve, const std::string& name) const {
  auto out = open(file(name));
  write_g2_csv(out, curve);
}

void OutputDir::series(std::span<const SemiclassicalSeries> s) const {
  auto out = open(file("series.csv"));
  write_series_csv(out, s);
}

void OutputDir::hist(const Histogram& h) const {
  auto out = open(file("hist.csv"));
  write_hist_csv(out, h);
}

void OutputDir::jumps(std::span<const JumpEvent> j) const {
  auto out = open(file("jumps.csv"));
  write_jumps_csv(out, j);
}

void OutputDir::beam(const std::vector<BeamEvent>& events) const {
  auto out = open(file("beam.csv"));
  write_beam_events(out, events);
}

void OutputDir::summary(const Summary& s) const {
  auto out = open(file("summary.csv"));
  write_summary_csv(out, s);
}

void OutputDir::manifest(const RunConfig& cfg, const std::string& comment) const {
  auto out = open(file("manifest.txt"));
  if (!comment.empty()) out << "# " << comment << '\n';
  out << manifest_text(cfg);
}

}  // namespace cqed
