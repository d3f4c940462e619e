#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "mscale/emtensor.hpp"
#include "mscale/free_particle.hpp"
#include "mscale/qtheory.hpp"

namespace mscale::cli {

inline constexpr int kSchemaVersion = 1;

/// Shortest round-trip decimal form; "nan"/"inf"/"-inf" for non-finite values.
std::string format_double(double v);

/// Columns: s, x0..x{D-1}, u0..u{D-1}, constraint_residual, shell_residual,
/// oracle_deviation, and eom_residual when `eom` is given.
void write_trajectory_csv(std::ostream& os, const Trajectory& tr, const std::vector<double>* eom = nullptr);

/// Columns: s, x*, u* (= dx/ds), rho*, drho*, constraint_residual (dϱ·dϱ + 1),
/// shell_residual (m²(dϱ·dϱ) + m²), oracle_deviation (affinity error).
void write_q_csv(std::ostream& os, const QTrajectory& tr, std::span<const double> affinity_error, double mass);

/// Columns: level, nodes, h, norm, pairwise_order.
void write_convergence_csv(std::ostream& os, const ConvergenceReport& rep, std::span<const int> nodes);

/// {norm, order_estimate, refinement_levels}
nlohmann::json convergence_json(const ConvergenceReport& rep);

/// NaN and infinities become null.
nlohmann::json number_or_null(double v);

void write_file(const std::string& path, const std::string& content);

}  // namespace mscale::cli
