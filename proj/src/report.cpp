#include "pdef/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <map>
#include <ostream>
#include <set>
#include <sstream>

namespace pdef {

namespace {

constexpr const char* kRowColumns = "algorithm,N,trial,seed,captures,intrusions,terminal_time,pct_caught";

std::string fmt(const char* f, double v) {
  char b[64];
  std::snprintf(b, sizeof b, f, v);
  return b;
}

void put_row(std::ostream& out, const MetricsRow& r) {
  out << r.algorithm << ',' << r.n << ',' << r.trial << ',' << r.seed << ',' << r.captures << ',' << r.intrusions
      << ',' << fmt("%.6f", r.terminal_time) << ',' << fmt("%.6f", r.pct_caught);
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  return out;
}

MetricsRow parse_row(const std::vector<std::string>& c, std::size_t at) {
  if (c.size() < at + 8) throw std::runtime_error("metrics row has too few columns");
  MetricsRow r;
  r.algorithm = c[at];
  r.n = std::stoi(c[at + 1]);
  r.trial = std::stoi(c[at + 2]);
  r.seed = std::stoull(c[at + 3]);
  r.captures = std::stoi(c[at + 4]);
  r.intrusions = std::stoi(c[at + 5]);
  r.terminal_time = std::stod(c[at + 6]);
  r.pct_caught = std::stod(c[at + 7]);
  return r;
}

template <class F>
void read_lines(std::istream& in, const char* schema, F&& on_row) {
  std::string line;
  bool header = false;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      if (line.rfind("# pdef-", 0) == 0 && line != schema) throw std::runtime_error("unsupported schema: " + line);
      continue;
    }
    if (!header) {
      header = true;
      continue;
    }
    on_row(split_csv(line));
  }
}

std::vector<std::string> algorithms_in_order(const std::vector<MetricsRow>& rows) {
  std::vector<std::string> algs;
  for (const auto& r : rows)
    if (std::find(algs.begin(), algs.end(), r.algorithm) == algs.end()) algs.push_back(r.algorithm);
  return algs;
}

std::string xml_escape(const std::string& s) {
  std::string o;
  for (char c : s) {
    switch (c) {
      case '<': o += "&lt;"; break;
      case '>': o += "&gt;"; break;
      case '&': o += "&amp;"; break;
      case '"': o += "&quot;"; break;
      default: o += c;
    }
  }
  return o;
}

}  // namespace

void write_metrics_csv(std::ostream& out, const std::vector<MetricsRow>& rows) {
  out << kMetricsSchema << '\n' << kRowColumns << '\n';
  for (const auto& r : rows) {
    put_row(out, r);
    out << '\n';
  }
}

std::vector<MetricsRow> read_metrics_csv(std::istream& in) {
  std::vector<MetricsRow> rows;
  read_lines(in, kMetricsSchema, [&](const std::vector<std::string>& c) { rows.push_back(parse_row(c, 0)); });
  return rows;
}

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows) {
  out << kSweepSchema << '\n' << "parameter,value," << kRowColumns << '\n';
  for (const auto& r : rows) {
    out << r.parameter << ',' << fmt("%.6g", r.value) << ',';
    put_row(out, r.row);
    out << '\n';
  }
}

std::vector<SweepRow> read_sweep_csv(std::istream& in) {
  std::vector<SweepRow> rows;
  read_lines(in, kSweepSchema, [&](const std::vector<std::string>& c) {
    if (c.size() < 10) throw std::runtime_error("sweep row has too few columns");
    rows.push_back({c[0], std::stod(c[1]), parse_row(c, 2)});
  });
  return rows;
}

void write_summary(std::ostream& out, const std::vector<MetricsRow>& rows) {
  const auto algs = algorithms_in_order(rows);
  std::set<int> sizes;
  for (const auto& r : rows) sizes.insert(r.n);

  out << "# absolute accuracy: mean (stddev) of captures / N\nN";
  for (const auto& a : algs) out << ',' << a << ',' << a << "_sd";
  out << '\n';
  for (int n : sizes) {
    out << n;
    for (const auto& a : algs) {
      const auto acc = absolute_accuracy(select(rows, a, n));
      if (acc.trials == 0)
        out << ",,";
      else
        out << ',' << fmt("%.4f", acc.mean) << ',' << fmt("%.4f", acc.stddev);
    }
    out << '\n';
  }
  if (std::find(algs.begin(), algs.end(), "gnn") == algs.end()) return;
  out << "# comparative accuracy: gnn captures / other captures\nN";
  for (const auto& a : algs)
    if (a != "gnn") out << ",gnn/" << a;
  out << '\n';
  for (int n : sizes) {
    out << n;
    const auto g = select(rows, "gnn", n);
    for (const auto& a : algs) {
      if (a == "gnn") continue;
      const auto other = select(rows, a, n);
      if (g.empty() || other.empty()) {
        out << ',';
        continue;
      }
      const auto r = comparative_accuracy(g, other);
      out << ',' << (r.division_domain ? std::string("nan") : fmt("%.4f", r.value));
    }
    out << '\n';
  }
}

std::vector<Series> accuracy_series(const std::vector<MetricsRow>& rows) {
  std::vector<Series> out;
  for (const auto& a : algorithms_in_order(rows)) {
    Series s{a, {}, {}, {}};
    std::set<int> sizes;
    for (const auto& r : rows)
      if (r.algorithm == a) sizes.insert(r.n);
    for (int n : sizes) {
      const auto acc = absolute_accuracy(select(rows, a, n));
      s.x.push_back(n);
      s.y.push_back(acc.mean);
      s.err.push_back(acc.stddev);
    }
    out.push_back(std::move(s));
  }
  return out;
}

std::vector<Series> sweep_series(const std::vector<SweepRow>& rows) {
  std::vector<MetricsRow> flat;
  for (const auto& r : rows) flat.push_back(r.row);
  std::vector<Series> out;
  for (const auto& a : algorithms_in_order(flat)) {
    std::map<double, std::vector<MetricsRow>> by_value;
    for (const auto& r : rows)
      if (r.row.algorithm == a) by_value[r.value].push_back(r.row);
    Series s{a, {}, {}, {}};
    for (const auto& [v, rs] : by_value) {
      const auto acc = absolute_accuracy(rs);
      s.x.push_back(v);
      s.y.push_back(acc.mean);
      s.err.push_back(acc.stddev);
    }
    out.push_back(std::move(s));
  }
  return out;
}

void write_svg_plot(std::ostream& out, const PlotSpec& plot, const std::vector<Series>& series) {
  const double w = 640, h = 420, left = 70, right = 150, top = 40, bottom = 60;
  const double pw = w - left - right, ph = h - top - bottom;
  double x0 = std::numeric_limits<double>::infinity(), x1 = -x0;
  for (const auto& s : series)
    for (double x : s.x) {
      x0 = std::min(x0, x);
      x1 = std::max(x1, x);
    }
  if (!std::isfinite(x0)) x0 = 0, x1 = 1;
  if (x1 == x0) x1 = x0 + 1;
  const double y0 = plot.y_min, y1 = plot.y_max > plot.y_min ? plot.y_max : plot.y_min + 1;
  auto px = [&](double x) { return left + (x - x0) / (x1 - x0) * pw; };
  auto py = [&](double y) { return top + (1.0 - (std::clamp(y, y0, y1) - y0) / (y1 - y0)) * ph; };
  static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#17becf"};

  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w << "\" height=\"" << h
      << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "<text x=\"" << w / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"15\">" << xml_escape(plot.title)
      << "</text>\n";
  out << "<line x1=\"" << left << "\" y1=\"" << top + ph << "\" x2=\"" << left + pw << "\" y2=\"" << top + ph
      << "\" stroke=\"black\"/>\n";
  out << "<line x1=\"" << left << "\" y1=\"" << top << "\" x2=\"" << left << "\" y2=\"" << top + ph
      << "\" stroke=\"black\"/>\n";
  for (int k = 0; k <= 5; ++k) {
    const double xv = x0 + (x1 - x0) * k / 5.0, yv = y0 + (y1 - y0) * k / 5.0;
    out << "<text x=\"" << fmt("%.1f", px(xv)) << "\" y=\"" << top + ph + 18 << "\" text-anchor=\"middle\">"
        << fmt("%g", std::round(xv * 100) / 100) << "</text>\n";
    out << "<text x=\"" << left - 8 << "\" y=\"" << fmt("%.1f", py(yv) + 4) << "\" text-anchor=\"end\">"
        << fmt("%.2f", yv) << "</text>\n";
    out << "<line x1=\"" << left << "\" y1=\"" << fmt("%.1f", py(yv)) << "\" x2=\"" << left + pw << "\" y2=\""
        << fmt("%.1f", py(yv)) << "\" stroke=\"#ddd\"/>\n";
  }
  out << "<text x=\"" << left + pw / 2 << "\" y=\"" << h - 15 << "\" text-anchor=\"middle\">"
      << xml_escape(plot.x_label) << "</text>\n";
  out << "<text transform=\"translate(18," << top + ph / 2 << ") rotate(-90)\" text-anchor=\"middle\">"
      << xml_escape(plot.y_label) << "</text>\n";
  for (std::size_t i = 0; i < series.size(); ++i) {
    const auto& s = series[i];
    const char* c = colors[i % 7];
    out << "<polyline fill=\"none\" stroke=\"" << c << "\" stroke-width=\"2\" points=\"";
    for (std::size_t k = 0; k < s.x.size(); ++k) out << (k ? " " : "") << fmt("%.1f", px(s.x[k])) << ',' << fmt("%.1f", py(s.y[k]));
    out << "\"/>\n";
    for (std::size_t k = 0; k < s.x.size(); ++k) {
      out << "<circle cx=\"" << fmt("%.1f", px(s.x[k])) << "\" cy=\"" << fmt("%.1f", py(s.y[k])) << "\" r=\"3\" fill=\""
          << c << "\"/>\n";
      if (k < s.err.size() && s.err[k] > 0) {
        out << "<line x1=\"" << fmt("%.1f", px(s.x[k])) << "\" y1=\"" << fmt("%.1f", py(s.y[k] - s.err[k]))
            << "\" x2=\"" << fmt("%.1f", px(s.x[k])) << "\" y2=\"" << fmt("%.1f", py(s.y[k] + s.err[k]))
            << "\" stroke=\"" << c << "\"/>\n";
      }
    }
    const double ly = top + 10 + 20 * i;
    out << "<line x1=\"" << left + pw + 15 << "\" y1=\"" << ly << "\" x2=\"" << left + pw + 40 << "\" y2=\"" << ly
        << "\" stroke=\"" << c << "\" stroke-width=\"2\"/>\n";
    out << "<text x=\"" << left + pw + 46 << "\" y=\"" << ly + 4 << "\">" << xml_escape(s.name) << "</text>\n";
  }
  out << "</svg>\n";
}

}  // namespace pdef
