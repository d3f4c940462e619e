#include "mscale/cli/output.hpp"

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <ostream>

#include "mscale/errors.hpp"
#include "mscale/minkowski.hpp"

namespace mscale::cli {

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, p);
}

namespace {

void header_block(std::ostream& os, const char* name, int d) {
  for (int mu = 0; mu < d; ++mu) os << ',' << name << mu;
}

void row_block(std::ostream& os, const std::vector<double>& v) {
  for (double x : v) os << ',' << format_double(x);
}

}  // namespace

void write_trajectory_csv(std::ostream& os, const Trajectory& tr, const std::vector<double>* eom) {
  const int d = tr.samples.empty() ? 0 : tr.samples.front().dimension();
  os << 's';
  header_block(os, "x", d);
  header_block(os, "u", d);
  os << ",constraint_residual,shell_residual,oracle_deviation";
  if (eom) os << ",eom_residual";
  os << '\n';
  for (std::size_t k = 0; k < tr.samples.size(); ++k) {
    const auto& st = tr.samples[k];
    const auto& dg = tr.diagnostics[k];
    os << format_double(st.s);
    row_block(os, st.x);
    row_block(os, st.u);
    os << ',' << format_double(dg.constraint_residual) << ',' << format_double(dg.shell_residual) << ','
       << format_double(dg.oracle_deviation);
    if (eom) os << ',' << format_double((*eom)[k]);
    os << '\n';
  }
}

void write_q_csv(std::ostream& os, const QTrajectory& tr, std::span<const double> affinity_error, double mass) {
  const int d = tr.samples.empty() ? 0 : static_cast<int>(tr.samples.front().x.size());
  os << 's';
  header_block(os, "x", d);
  header_block(os, "u", d);
  header_block(os, "rho", d);
  header_block(os, "drho", d);
  os << ",constraint_residual,shell_residual,oracle_deviation\n";
  for (std::size_t k = 0; k < tr.samples.size(); ++k) {
    const auto& q = tr.samples[k];
    const double norm = minkowski_dot(q.drho_ds, q.drho_ds);
    os << format_double(q.s);
    row_block(os, q.x);
    row_block(os, q.dx_ds);
    row_block(os, q.rho);
    row_block(os, q.drho_ds);
    os << ',' << format_double(norm + 1.0) << ',' << format_double(mass * mass * norm + mass * mass) << ','
       << format_double(affinity_error[k]) << '\n';
  }
}

void write_convergence_csv(std::ostream& os, const ConvergenceReport& rep, std::span<const int> nodes) {
  os << "level,nodes,h,norm,pairwise_order\n";
  for (std::size_t k = 0; k < rep.h.size(); ++k) {
    os << k << ',' << (k < nodes.size() ? nodes[k] : 0) << ',' << format_double(rep.h[k]) << ','
       << format_double(rep.norm[k]) << ','
       << (k == 0 ? std::string("nan") : format_double(rep.pairwise_order[k - 1])) << '\n';
  }
}

nlohmann::json number_or_null(double v) {
  if (!std::isfinite(v)) return nullptr;
  return v;
}

nlohmann::json convergence_json(const ConvergenceReport& rep) {
  nlohmann::json j;
  j["norm"] = rep.norm;
  j["order_estimate"] = number_or_null(rep.order_estimate);
  j["refinement_levels"] = rep.h.size();
  j["h"] = rep.h;
  return j;
}

void write_file(const std::string& path, const std::string& content) {
  const std::filesystem::path p(path);
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  std::ofstream out(p, std::ios::binary);
  if (!out) throw Error("cannot write '" + path + "'");
  out << content;
  if (!out) throw Error("write failed for '" + path + "'");
}

}  // namespace mscale::cli
