#pragma once

#include <filesystem>
#include <ostream>
#include <string>

#include "tad/simulation.hpp"
#include "tad/zones.hpp"

namespace tad {

// Shortest decimal representation that round-trips the double exactly.
std::string format_double(double v);

// Per-step trajectory log with the fixed column set
//   t,x_T,y_T,x_A,y_A,x_D,y_D,u_x,u_y,alpha_dot_D,a_A,R,r,
//   est_x_A,est_y_A,est_alpha_A,est_a_A,sigma_x,sigma_y,sigma_alpha,sigma_a
void write_trajectory_csv(std::ostream& out, const SimResult& result);
void write_trajectory_csv(const std::filesystem::path& path,
                          const SimResult& result);

// Outcome and metrics of one run as JSON.
void write_metrics_json(const std::filesystem::path& path,
                        const SimResult& result);

// Side-by-side controller metrics as JSON and as a printable table.
void write_comparison_json(const std::filesystem::path& path,
                           const std::string& scenario,
                           const std::vector<ComparisonRow>& rows);
std::string comparison_table(const std::vector<ComparisonRow>& rows);

// Zone map samples as x,y,label rows.
void write_zone_csv(const std::filesystem::path& path, const ZoneMap& map);

// Zone map rendering: coloured sample points, traced boundary polylines and
// the attacker/defender positions.
void write_zone_svg(const std::filesystem::path& path, const ZoneMap& map,
                    const ZoneParams& params);

// Sweep agreement report as JSON and a one-line summary.
void write_sweep_json(const std::filesystem::path& path,
                      const SweepReport& report);
std::string sweep_summary(const SweepReport& report);

const char* zone_label_name(ZoneLabel label);

}  // namespace tad
