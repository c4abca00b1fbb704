#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "diffunet/error.hpp"
#include "diffunet/harness.hpp"

namespace diffunet {
namespace {

std::string fixed(double v, int decimals) {
  if (std::isnan(v)) return "nan";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
  return buf;
}

std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  return out;
}

void finish(std::ofstream& out, const std::filesystem::path& path) {
  out.flush();
  if (!out) throw IoError("write failed: " + path.string());
}

std::string xml_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&':
        out += "&amp;";
        break;
      case '<':
        out += "&lt;";
        break;
      case '>':
        out += "&gt;";
        break;
      case '"':
        out += "&quot;";
        break;
      default:
        out += c;
    }
  }
  return out;
}

constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                                    "#9467bd", "#8c564b", "#e377c2", "#17becf"};

}  // namespace

void write_csv(std::ostream& out, const std::vector<MsdTrace>& traces) {
  if (traces.empty()) throw InvalidParameter("no traces to write");
  const std::size_t rows = traces.front().msd_db.size();
  for (const auto& t : traces)
    if (t.msd_db.size() != rows) throw DimensionMismatch("traces differ in length");

  out << "iteration";
  for (const auto& t : traces) out << ',' << t.label;
  out << '\n';
  for (std::size_t r = 0; r < rows; ++r) {
    out << r + 1;
    for (const auto& t : traces) out << ',' << fixed(t.msd_db[r], 6);
    out << '\n';
  }
}

void emit_csv(const std::vector<MsdTrace>& traces, const std::filesystem::path& path) {
  auto out = open_output(path);
  write_csv(out, traces);
  finish(out, path);
}

std::vector<MsdTrace> read_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw ParseError("<csv>", 1, "missing header");
  std::vector<MsdTrace> traces;
  {
    std::istringstream header(line);
    std::string cell;
    std::getline(header, cell, ',');
    if (cell != "iteration") throw ParseError("<csv>", 1, "header must start with 'iteration'");
    while (std::getline(header, cell, ',')) traces.push_back(MsdTrace{cell, {}, {}, {}, 0});
  }
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::istringstream row(line);
    std::string cell;
    std::getline(row, cell, ',');
    for (auto& t : traces) {
      if (!std::getline(row, cell, ',')) throw ParseError("<csv>", line_no, "short row");
      try {
        t.msd_db.push_back(cell == "nan" ? std::nan("") : std::stod(cell));
      } catch (const std::exception&) {
        throw ParseError("<csv>", line_no, "bad number '" + cell + "'");
      }
    }
  }
  return traces;
}

void write_svg(std::ostream& out, const std::vector<MsdTrace>& traces) {
  if (traces.empty()) throw InvalidParameter("no traces to plot");
  constexpr double kWidth = 800, kHeight = 500;
  constexpr double kLeft = 70, kRight = 20, kTop = 20, kBottom = 55;
  const double plot_w = kWidth - kLeft - kRight;
  const double plot_h = kHeight - kTop - kBottom;

  std::size_t length = 1;
  double lo = INFINITY, hi = -INFINITY;
  for (const auto& t : traces) {
    length = std::max(length, t.msd_db.size());
    for (double v : t.msd_db) {
      if (!std::isfinite(v)) continue;
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
  }
  if (!std::isfinite(lo)) lo = -10, hi = 0;
  double y_lo = 5.0 * std::floor(lo / 5.0);
  double y_hi = 5.0 * std::ceil(hi / 5.0);
  if (y_hi <= y_lo) y_hi = y_lo + 5.0;
  const double y_step = (y_hi - y_lo) > 60 ? 20.0 : ((y_hi - y_lo) > 25 ? 10.0 : 5.0);
  const double x_max = static_cast<double>(length);

  auto px = [&](double it) { return kLeft + (length > 1 ? (it - 1.0) / (x_max - 1.0) : 0.5) * plot_w; };
  auto py = [&](double db) { return kTop + (y_hi - db) / (y_hi - y_lo) * plot_h; };

  out << "<?xml version=\"1.0\" encoding=\"UTF-8\" standalone=\"no\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << kWidth
      << "\" height=\"" << kHeight << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight << "\">\n"
      << "<rect x=\"0\" y=\"0\" width=\"" << kWidth << "\" height=\"" << kHeight
      << "\" fill=\"white\"/>\n";

  out << "<g font-family=\"sans-serif\" font-size=\"12\" stroke=\"#cccccc\">\n";
  for (double v = y_lo; v <= y_hi + 1e-9; v += y_step) {
    out << "<line x1=\"" << fixed(kLeft, 2) << "\" y1=\"" << fixed(py(v), 2) << "\" x2=\""
        << fixed(kLeft + plot_w, 2) << "\" y2=\"" << fixed(py(v), 2) << "\"/>\n"
        << "<text x=\"" << fixed(kLeft - 8, 2) << "\" y=\"" << fixed(py(v) + 4, 2)
        << "\" text-anchor=\"end\" stroke=\"none\" fill=\"black\">" << fixed(v, 0) << "</text>\n";
  }
  const int x_ticks = 5;
  for (int i = 0; i <= x_ticks; ++i) {
    const double it = 1.0 + (x_max - 1.0) * i / x_ticks;
    out << "<text x=\"" << fixed(px(it), 2) << "\" y=\"" << fixed(kTop + plot_h + 18, 2)
        << "\" text-anchor=\"middle\" stroke=\"none\" fill=\"black\">" << fixed(std::round(it), 0)
        << "</text>\n";
  }
  out << "</g>\n";

  out << "<rect x=\"" << fixed(kLeft, 2) << "\" y=\"" << fixed(kTop, 2) << "\" width=\""
      << fixed(plot_w, 2) << "\" height=\"" << fixed(plot_h, 2)
      << "\" fill=\"none\" stroke=\"black\"/>\n"
      << "<text x=\"" << fixed(kLeft + plot_w / 2, 2) << "\" y=\"" << fixed(kHeight - 12, 2)
      << "\" font-family=\"sans-serif\" font-size=\"14\" text-anchor=\"middle\">iteration</text>\n"
      << "<text x=\"18\" y=\"" << fixed(kTop + plot_h / 2, 2)
      << "\" font-family=\"sans-serif\" font-size=\"14\" text-anchor=\"middle\" transform=\"rotate(-90 18 "
      << fixed(kTop + plot_h / 2, 2) << ")\">MSD (dB)</text>\n";

  for (std::size_t a = 0; a < traces.size(); ++a) {
    const auto& t = traces[a];
    const char* color = kPalette[a % std::size(kPalette)];
    out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
    bool first = true;
    for (std::size_t r = 0; r < t.msd_db.size(); ++r) {
      if (!std::isfinite(t.msd_db[r])) continue;
      out << (first ? "" : " ") << fixed(px(static_cast<double>(r + 1)), 2) << ','
          << fixed(py(std::clamp(t.msd_db[r], y_lo, y_hi)), 2);
      first = false;
    }
    out << "\"/>\n";
  }

  const double lx = kLeft + plot_w - 150, ly = kTop + 10;
  out << "<g font-family=\"sans-serif\" font-size=\"12\">\n"
      << "<rect x=\"" << fixed(lx, 2) << "\" y=\"" << fixed(ly, 2) << "\" width=\"140\" height=\""
      << fixed(18.0 * traces.size() + 8, 2) << "\" fill=\"white\" stroke=\"#888888\"/>\n";
  for (std::size_t a = 0; a < traces.size(); ++a) {
    const double y = ly + 16 + 18.0 * a;
    out << "<line x1=\"" << fixed(lx + 8, 2) << "\" y1=\"" << fixed(y - 4, 2) << "\" x2=\""
        << fixed(lx + 32, 2) << "\" y2=\"" << fixed(y - 4, 2) << "\" stroke=\""
        << kPalette[a % std::size(kPalette)] << "\" stroke-width=\"2\"/>\n"
        << "<text x=\"" << fixed(lx + 40, 2) << "\" y=\"" << fixed(y, 2) << "\">"
        << xml_escape(traces[a].label) << "</text>\n";
  }
  out << "</g>\n</svg>\n";
}

void emit_plot(const std::vector<MsdTrace>& traces, const std::filesystem::path& path) {
  auto out = open_output(path);
  write_svg(out, traces);
  finish(out, path);
}

void dump_data(const ExperimentConfig& cfg, std::ostream& out) {
  cfg.validate();
  char buf[64];
  auto num = [&](double v) {
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return std::string(buf);
  };
  for (int t = 0; t < cfg.trials; ++t) {
    const TrialData td = generate_trial(cfg, t);
    for (Eigen::Index m = 0; m < td.truth.size(); ++m)
      out << "w_o," << t + 1 << ',' << m + 1 << ',' << num(td.truth.w[m]) << '\n';
    for (const auto& s : td.data) {
      for (Eigen::Index i = 0; i < s.samples(); ++i) {
        out << "obs," << t + 1 << ',' << s.node + 1 << ',' << i + 1 << ',' << (s.d[i] > 0 ? "1" : "-1")
            << ',' << num(s.y[i]);
        for (Eigen::Index m = 0; m < s.dim(); ++m) out << ',' << num(s.U(i, m));
        out << '\n';
      }
    }
  }
}

}  // namespace diffunet
