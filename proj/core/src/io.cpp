#include "lgp/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace lgp::io {

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (v == 0.0) return "0";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return {buf, res.ptr};
}

namespace {

class CsvFile {
 public:
  explicit CsvFile(const std::filesystem::path& path) : path_(path), out_(path, std::ios::binary | std::ios::trunc) {
    if (!out_) throw std::runtime_error("cannot open " + path.string() + " for writing");
  }
  ~CsvFile() noexcept(false) {
    out_.flush();
    if (!out_ && std::uncaught_exceptions() == 0) throw std::runtime_error("failed writing " + path_.string());
  }
  CsvFile& field(const std::string& s) {
    if (!first_) out_ << ',';
    out_ << s;
    first_ = false;
    return *this;
  }
  CsvFile& num(double v) { return field(format_double(v)); }
  CsvFile& count(std::size_t v) { return field(std::to_string(v)); }
  void end() {
    out_ << '\n';
    first_ = true;
  }

 private:
  std::filesystem::path path_;
  std::ofstream out_;
  bool first_ = true;
};

void coord_header(CsvFile& f, int n) {
  for (int k = 1; k <= n; ++k) f.field("x" + std::to_string(k));
}

}  // namespace

void write_points_csv(const std::filesystem::path& path, const DiscreteDomain& domain) {
  CsvFile f(path);
  f.field("index");
  coord_header(f, domain.dimension());
  f.field("tag").field("active").field("measure");
  f.end();
  for (std::size_t i = 0; i < domain.size(); ++i) {
    f.count(i);
    for (double c : domain.coords(i)) f.num(c);
    f.field(domain.is_interior(i) ? "interior" : "halo").count(domain.is_active(i) ? 1 : 0).num(domain.cell_measure());
    f.end();
  }
}

void write_edges_csv(const std::filesystem::path& path, const WalkKernel& kernel) {
  CsvFile f(path);
  f.field("src").field("dst").field("weight");
  f.end();
  for (const auto& e : kernel.edges()) {
    f.count(e.a).count(e.b).num(e.weight);
    f.end();
  }
  for (std::size_t i = 0; i < kernel.num_points(); ++i) {
    if (!kernel.has_row(i)) continue;
    f.count(i).count(i).num(kernel.self_weight(i));
    f.end();
  }
}

void write_solution_csv(const std::filesystem::path& path, const DiscreteDomain& domain, std::span<const double> u_psi) {
  if (u_psi.size() != domain.size()) throw std::invalid_argument("solution length differs from domain size");
  CsvFile f(path);
  f.field("index");
  coord_header(f, domain.dimension());
  f.field("tag").field("u");
  f.end();
  for (std::size_t i = 0; i < domain.size(); ++i) {
    f.count(i);
    for (double c : domain.coords(i)) f.num(c);
    f.field(domain.is_interior(i) ? "interior" : "halo").num(u_psi[i]);
    f.end();
  }
}

void write_dual_csv(const std::filesystem::path& path, const WalkKernel& kernel, const DualField& g) {
  const auto edges = kernel.edges();
  if (g.g.size() != edges.size()) throw std::invalid_argument("dual field does not match the kernel");
  CsvFile f(path);
  f.field("src").field("dst").field("g");
  f.end();
  for (std::size_t e = 0; e < edges.size(); ++e) {
    f.count(edges[e].a).count(edges[e].b).num(g.g[e]);
    f.end();
  }
}

void write_zeta_csv(const std::filesystem::path& path, const DiscreteDomain& domain, const ZetaField& zeta) {
  CsvFile f(path);
  f.field("index");
  coord_header(f, domain.dimension());
  for (int j = 1; j <= zeta.m; ++j) f.field("zeta" + std::to_string(j));
  f.field("bulk");
  f.end();
  const auto interior = domain.interior();
  for (std::size_t s = 0; s < interior.size(); ++s) {
    f.count(interior[s]);
    for (double c : domain.coords(interior[s])) f.num(c);
    for (double z : zeta.at(s)) f.num(z);
    f.count(zeta.bulk[s] ? 1 : 0);
    f.end();
  }
}

void write_sweep_csv(const std::filesystem::path& path, std::span<const SweepEntry> entries) {
  CsvFile f(path);
  for (const char* h : {"eps", "h", "points", "interior", "edges", "energy", "rescaled_energy",
                        "interior_energy", "rescaled_interior_energy", "uniform_estimate",
                        "l1_distance", "mass_ratio_min", "mass_ratio_max", "iterations", "relative_gap",
                        "row_residual", "sign_residual", "converged"})
    f.field(h);
  f.end();
  for (const auto& e : entries) {
    f.num(e.eps).num(e.h).count(e.points).count(e.interior).count(e.edges).num(e.energy).num(e.rescaled_energy);
    f.num(e.interior_energy).num(e.rescaled_interior_energy);
    f.num(e.uniform_estimate).num(e.l1_distance).num(e.mass_ratio_min).num(e.mass_ratio_max);
    f.count(e.solve.iterations).num(e.solve.relative_gap).num(e.certificate.row_residual);
    f.num(e.certificate.sign_defect).count(e.solve.converged ? 1 : 0);
    f.end();
  }
}

}  // namespace lgp::io
