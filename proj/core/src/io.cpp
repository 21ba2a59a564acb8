#include "tad/io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "tad/errors.hpp"

namespace tad {

namespace {

using nlohmann::json;

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) {
    throw Error("cannot open output file '" + path.string() + "'");
  }
  return out;
}

json metrics_to_json(const MetricsRecord& m) {
  json j;
  j["outcome"] = outcome_name(m.outcome);
  if (m.interception_time) {
    j["interception_time"] = *m.interception_time;
  } else {
    j["interception_time"] = nullptr;
  }
  j["defender_effort"] = m.defender_effort;
  j["combined_effort"] = m.combined_effort;
  j["solver_time"] = m.solver_time;
  return j;
}

}  // namespace

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

const char* zone_label_name(ZoneLabel label) {
  switch (label) {
    case ZoneLabel::Escape:
      return "escape";
    case ZoneLabel::Capture:
      return "capture";
    case ZoneLabel::Boundary:
      return "boundary";
  }
  return "unknown";
}

void write_trajectory_csv(std::ostream& out, const SimResult& result) {
  out << "t,x_T,y_T,x_A,y_A,x_D,y_D,u_x,u_y,alpha_dot_D,a_A,R,r,"
         "est_x_A,est_y_A,est_alpha_A,est_a_A,sigma_x,sigma_y,sigma_alpha,"
         "sigma_a\n";
  for (const StepLog& s : result.log) {
    const double cols[] = {s.t,        s.x_T,        s.y_T,
                           s.x_A,      s.y_A,        s.x_D,
                           s.y_D,      s.u_x,        s.u_y,
                           s.alpha_dot_D, s.a_A,     s.R,
                           s.r,        s.est_x_A,    s.est_y_A,
                           s.est_alpha_A, s.est_a_A, s.sigma_x,
                           s.sigma_y,  s.sigma_alpha, s.sigma_a};
    bool sep = false;
    for (double c : cols) {
      if (sep) out << ',';
      out << format_double(c);
      sep = true;
    }
    out << '\n';
  }
}

void write_trajectory_csv(const std::filesystem::path& path,
                          const SimResult& result) {
  std::ofstream out = open_out(path);
  write_trajectory_csv(out, result);
}

void write_metrics_json(const std::filesystem::path& path,
                        const SimResult& result) {
  json j;
  j["scenario"] = result.scenario;
  j["seed"] = result.seed;
  j["outcome"] = outcome_name(result.outcome);
  j["event_time"] = result.event_time;
  j["steps"] = result.log.size();
  j["metrics"] = metrics_to_json(result.metrics);
  std::ofstream out = open_out(path);
  out << j.dump(2) << '\n';
}

void write_comparison_json(const std::filesystem::path& path,
                           const std::string& scenario,
                           const std::vector<ComparisonRow>& rows) {
  json j;
  j["scenario"] = scenario;
  j["controllers"] = json::array();
  for (const ComparisonRow& r : rows) {
    json row = metrics_to_json(r.metrics);
    row["controller"] = controller_name(r.controller);
    j["controllers"].push_back(row);
  }
  std::ofstream out = open_out(path);
  out << j.dump(2) << '\n';
}

std::string comparison_table(const std::vector<ComparisonRow>& rows) {
  std::ostringstream out;
  out << "controller  outcome                time        defender_effort  "
         "combined_effort  solver_time\n";
  for (const ComparisonRow& r : rows) {
    char line[256];
    std::snprintf(
        line, sizeof(line), "%-10s  %-20s  %-10s  %-15.6g  %-15.6g  %.3g\n",
        controller_name(r.controller), outcome_name(r.metrics.outcome),
        r.metrics.interception_time
            ? format_double(*r.metrics.interception_time).c_str()
            : "-",
        r.metrics.defender_effort, r.metrics.combined_effort,
        r.metrics.solver_time);
    out << line;
  }
  return out.str();
}

void write_zone_csv(const std::filesystem::path& path, const ZoneMap& map) {
  std::ofstream out = open_out(path);
  out << "x,y,label\n";
  for (int iy = 0; iy < map.grid.ny; ++iy) {
    for (int ix = 0; ix < map.grid.nx; ++ix) {
      out << format_double(map.grid.x_at(ix)) << ','
          << format_double(map.grid.y_at(iy)) << ','
          << zone_label_name(map.at(ix, iy)) << '\n';
    }
  }
}

void write_zone_svg(const std::filesystem::path& path, const ZoneMap& map,
                    const ZoneParams& params) {
  const GridSpec& g = map.grid;
  const double margin = 0.06 * std::max(g.x_max - g.x_min, g.y_max - g.y_min);
  const double x0 = g.x_min - margin;
  const double y0 = g.y_min - margin;
  const double w = (g.x_max - g.x_min) + 2 * margin;
  const double h = (g.y_max - g.y_min) + 2 * margin;
  const double px = 720.0;
  const double sc = px / std::max(w, h);

  const auto X = [&](double x) { return (x - x0) * sc; };
  // SVG y grows downward; flip so the map reads like a plot.
  const auto Y = [&](double y) { return (y0 + h - y) * sc; };

  std::ofstream out = open_out(path);
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w * sc
      << "\" height=\"" << h * sc << "\" viewBox=\"0 0 " << w * sc << ' '
      << h * sc << "\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

  const double dot =
      0.35 * sc *
      std::min(g.nx > 1 ? (g.x_max - g.x_min) / (g.nx - 1) : w,
               g.ny > 1 ? (g.y_max - g.y_min) / (g.ny - 1) : h);
  for (int iy = 0; iy < g.ny; ++iy) {
    for (int ix = 0; ix < g.nx; ++ix) {
      const char* fill = "#9a9a9a";
      switch (map.at(ix, iy)) {
        case ZoneLabel::Escape:
          fill = "#7fb8e6";
          break;
        case ZoneLabel::Capture:
          fill = "#e89a8a";
          break;
        case ZoneLabel::Boundary:
          break;
      }
      out << "<circle cx=\"" << X(g.x_at(ix)) << "\" cy=\"" << Y(g.y_at(iy))
          << "\" r=\"" << dot << "\" fill=\"" << fill << "\"/>\n";
    }
  }

  for (const std::vector<Vec2>& line : map.boundary) {
    if (line.size() < 2) continue;
    out << "<polyline fill=\"none\" stroke=\"#222222\" stroke-width=\"2\" "
           "points=\"";
    for (const Vec2& p : line) out << X(p.x) << ',' << Y(p.y) << ' ';
    out << "\"/>\n";
  }

  // Agent positions in the canonical frame.
  out << "<circle cx=\"" << X(params.x_A) << "\" cy=\"" << Y(0.0)
      << "\" r=\"5\" fill=\"#b00000\"/>\n";
  out << "<circle cx=\"" << X(-params.x_A) << "\" cy=\"" << Y(0.0)
      << "\" r=\"5\" fill=\"#006000\"/>\n";
  out << "</svg>\n";
}

void write_sweep_json(const std::filesystem::path& path,
                      const SweepReport& report) {
  json j;
  j["grid"] = {{"x_min", report.grid.x_min}, {"x_max", report.grid.x_max},
               {"y_min", report.grid.y_min}, {"y_max", report.grid.y_max},
               {"nx", report.grid.nx},       {"ny", report.grid.ny}};
  j["params"] = {{"x_A", report.params.x_A},
                 {"gamma_AT", report.params.gamma_AT},
                 {"gamma_AD", report.params.gamma_AD}};
  j["compared"] = report.compared;
  j["agreed"] = report.agreed;
  j["agreement"] = report.agreement;
  j["cells"] = json::array();
  for (const SweepCell& c : report.cells) {
    j["cells"].push_back({{"ix", c.ix},
                          {"iy", c.iy},
                          {"x", c.target.x},
                          {"y", c.target.y},
                          {"predicted", zone_label_name(c.predicted)},
                          {"outcome", outcome_name(c.sim_outcome)},
                          {"simulated", zone_label_name(c.simulated)},
                          {"excluded", c.excluded},
                          {"agree", c.agree}});
  }
  std::ofstream out = open_out(path);
  out << j.dump(2) << '\n';
}

std::string sweep_summary(const SweepReport& report) {
  std::ostringstream out;
  out << "sweep: " << report.agreed << '/' << report.compared
      << " interior cells agree ("
      << (report.compared > 0 ? 100.0 * report.agreement : 0.0)
      << "%), " << report.cells.size() - report.compared
      << " cells excluded near the boundary\n";
  return out.str();
}

}  // namespace tad
