#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <omp.h>

#include "kgl/config.hpp"
#include "kgl/error.hpp"
#include "kgl/experiments.hpp"

#ifndef KGL_VERSION
#define KGL_VERSION "unknown"
#endif

namespace kgl {

namespace {

std::string g17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(line);
  while (std::getline(in, cur, sep)) out.push_back(cur);
  if (!line.empty() && line.back() == sep) out.emplace_back();
  return out;
}

double to_double(const std::string& s) {
  std::size_t used = 0;
  const double v = std::stod(s, &used);
  if (used != s.size()) throw std::invalid_argument("bad number '" + s + "'");
  return v;
}

int to_int(const std::string& s) {
  std::size_t used = 0;
  const int v = std::stoi(s, &used);
  if (used != s.size()) throw std::invalid_argument("bad integer '" + s + "'");
  return v;
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << text;
  out.flush();
  if (!out) throw IoError("write failed for " + path.string());
}

// Log–log SVG, one polyline per leg (error or ‖W₁‖ against t).
std::string render_svg(const SweepResult& result) {
  constexpr double W = 640, H = 420, M = 50;
  struct Series {
    std::string label;
    std::vector<std::pair<double, double>> pts;
  };
  std::vector<Series> series;
  for (const auto& leg : result.legs) {
    Series s{"eps=" + g17(leg.epsilon), {}};
    for (const auto& row : result.rows) {
      if (row.epsilon != leg.epsilon) continue;
      const double y = row.err_l2 > 0.0 ? row.err_l2 : row.w1_l2;
      if (row.t > 0.0 && y > 0.0) s.pts.emplace_back(std::log10(row.t), std::log10(y));
    }
    if (!s.pts.empty()) series.push_back(std::move(s));
  }
  double x0 = INFINITY, x1 = -INFINITY, y0 = INFINITY, y1 = -INFINITY;
  for (const auto& s : series) {
    for (const auto& [x, y] : s.pts) {
      x0 = std::min(x0, x);
      x1 = std::max(x1, x);
      y0 = std::min(y0, y);
      y1 = std::max(y1, y);
    }
  }
  if (!(x1 > x0)) x1 = x0 + 1.0;
  if (!(y1 > y0)) y1 = y0 + 1.0;
  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\">\n";
  svg << "<rect x=\"" << M << "\" y=\"" << M / 2 << "\" width=\"" << W - 1.5 * M << "\" height=\""
      << H - 1.5 * M << "\" fill=\"none\" stroke=\"black\"/>\n";
  svg << "<text x=\"" << W / 2 << "\" y=\"" << H - 8 << "\" text-anchor=\"middle\">log10 t</text>\n";
  svg << "<text x=\"12\" y=\"" << H / 2 << "\" transform=\"rotate(-90 12 " << H / 2
      << ")\" text-anchor=\"middle\">log10 error</text>\n";
  const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};
  for (std::size_t i = 0; i < series.size(); ++i) {
    svg << "<polyline fill=\"none\" stroke=\"" << colors[i % 6] << "\" points=\"";
    for (const auto& [x, y] : series[i].pts) {
      const double px = M + (x - x0) / (x1 - x0) * (W - 1.5 * M);
      const double py = M / 2 + (1.0 - (y - y0) / (y1 - y0)) * (H - 1.5 * M);
      svg << px << "," << py << " ";
    }
    svg << "\"/>\n<text x=\"" << W - M << "\" y=\"" << M + 16 * i << "\" fill=\"" << colors[i % 6]
        << "\" text-anchor=\"end\">" << series[i].label << "</text>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

}  // namespace

void RunManifest::add(const std::string& key, double value) { add(key, g17(value)); }

RunManifest make_manifest(const SweepConfig& config, const SweepResult& result, double wall_seconds) {
  RunManifest m;
  m.add("code.version", KGL_VERSION);
  m.add("study", to_string(result.study));
  for (const auto& [k, v] : config_echo(config)) m.add("config." + k, v);
  m.add("grid.spacing", config.extent / config.points);
  m.add("grid.cells", std::pow(static_cast<double>(config.points), config.dim));
  double worst_outside = 0.0;
  for (std::size_t i = 0; i < result.legs.size(); ++i) {
    const LegSummary& leg = result.legs[i];
    const std::string p = "leg." + std::to_string(i) + ".";
    m.add(p + "epsilon", leg.epsilon);
    m.add(p + "value", leg.value);
    m.add(p + "secondary", leg.secondary);
    m.add(p + "energy_drift", leg.energy_drift);
    m.add(p + "mass_drift", leg.mass_drift);
    m.add(p + "mass_outside_half_box", leg.mass_outside);
    m.add(p + "converged", leg.converged ? "true" : "false");
    worst_outside = std::max(worst_outside, leg.mass_outside);
  }
  m.add("mass_guard.max_outside_half_box", worst_outside);
  m.add("mass_guard.passed", worst_outside < 1e-10 ? "true" : "false");
  for (const auto& [k, v] : result.summary) m.add("summary." + k, v);
  if (result.fit) {
    m.add("fit.slope", result.fit->slope);
    m.add("fit.intercept", result.fit->intercept);
    m.add("fit.residual", result.fit->residual);
    m.add("fit.points", static_cast<double>(result.fit->points));
  }
  for (std::size_t i = 0; i < result.warnings.size(); ++i) {
    m.add("warning." + std::to_string(i), result.warnings[i]);
  }
  m.add("environment.omp_max_threads", static_cast<double>(omp_get_max_threads()));
  m.add("wall_seconds", wall_seconds);
  return m;
}

std::string csv_header() {
  return "study,d,epsilon,t,err_l2,err_sobolev_gamma,w1_l2,w2_l2,energy_drift,mass_drift,scheme,h0,"
         "grid_points,box_extent";
}

std::string format_csv_row(const ResultRow& r) {
  std::ostringstream o;
  o << r.study << ',' << r.d << ',' << g17(r.epsilon) << ',' << g17(r.t) << ',' << g17(r.err_l2) << ','
    << g17(r.err_sobolev_gamma) << ',' << g17(r.w1_l2) << ',' << g17(r.w2_l2) << ','
    << g17(r.energy_drift) << ',' << g17(r.mass_drift) << ',' << r.scheme << ',' << g17(r.h0) << ','
    << r.grid_points << ',' << g17(r.box_extent);
  return o.str();
}

std::vector<ResultRow> parse_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != csv_header()) {
    throw std::invalid_argument("CSV header does not match the result schema");
  }
  std::vector<ResultRow> rows;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const auto f = split(line, ',');
    if (f.size() != 14) throw std::invalid_argument("CSV line " + std::to_string(lineno) + ": expected 14 fields");
    try {
      ResultRow r;
      r.study = f[0];
      r.d = to_int(f[1]);
      r.epsilon = to_double(f[2]);
      r.t = to_double(f[3]);
      r.err_l2 = to_double(f[4]);
      r.err_sobolev_gamma = to_double(f[5]);
      r.w1_l2 = to_double(f[6]);
      r.w2_l2 = to_double(f[7]);
      r.energy_drift = to_double(f[8]);
      r.mass_drift = to_double(f[9]);
      r.scheme = f[10];
      r.h0 = to_double(f[11]);
      r.grid_points = to_int(f[12]);
      r.box_extent = to_double(f[13]);
      rows.push_back(std::move(r));
    } catch (const std::logic_error& e) {
      throw std::invalid_argument("CSV line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  return rows;
}

std::vector<ResultRow> read_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_csv(buf.str());
}

EmittedFiles emit_results(const SweepResult& result, const RunManifest& manifest,
                          const std::filesystem::path& out_dir, const std::string& stem, bool plot) {
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw IoError("cannot create " + out_dir.string() + ": " + ec.message());

  EmittedFiles files{out_dir / (stem + ".csv"), out_dir / (stem + ".manifest.txt"), std::nullopt};
  std::string csv = csv_header() + "\n";
  for (const auto& row : result.rows) csv += format_csv_row(row) + "\n";
  write_file(files.csv, csv);

  std::string text;
  for (const auto& [k, v] : manifest.entries) text += k + " = " + v + "\n";
  write_file(files.manifest, text);

  if (plot) {
    files.plot = out_dir / (stem + ".svg");
    write_file(*files.plot, render_svg(result));
  }
  return files;
}

}  // namespace kgl
