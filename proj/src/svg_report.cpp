#include "spendnet/svg_report.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

namespace spendnet {

namespace {

std::string rho_color(double rho) {
  // log scale: rho > 1 red, rho < 1 blue
  double v = std::log(std::max(rho, 1e-6));
  double t = std::clamp(v / std::log(10.0), -1.0, 1.0);
  int r = 255, g = 255, b = 255;
  if (t > 0) {
    g = b = static_cast<int>(255 * (1.0 - t));
  } else {
    r = g = static_cast<int>(255 * (1.0 + t));
  }
  char buf[16];
  std::snprintf(buf, sizeof(buf), "#%02x%02x%02x", r, g, b);
  return buf;
}

const char* kPalette[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b",
                          "#e377c2", "#7f7f7f", "#bcbd22", "#17becf", "#aec7e8", "#ffbb78",
                          "#98df8a", "#ff9896", "#c5b0d5", "#c49c94", "#f7b6d2", "#dbdb8d"};

}  // namespace

void write_rho_heatmap_svg(const CorrelationMatrix& m, const CategoryCorrelationGraph& labeled,
                           const std::string& path) {
  if (labeled.community.empty()) throw Error("heatmap needs community labels");
  // graph nodes ordered by (community, mcc)
  std::vector<std::size_t> order(labeled.mccs.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (labeled.community[a] != labeled.community[b])
      return labeled.community[a] < labeled.community[b];
    return labeled.mccs[a] < labeled.mccs[b];
  });
  // map graph mccs back into the matrix index space
  std::map<int, std::size_t> matrix_index;
  for (std::size_t i = 0; i < m.mccs.size(); ++i) matrix_index.emplace(m.mccs[i], i);

  const int cell = 4, margin = 10;
  const int size = margin * 2 + cell * static_cast<int>(order.size());
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path);
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << size << "\" height=\"" << size
      << "\">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  for (std::size_t a = 0; a < order.size(); ++a) {
    for (std::size_t b = 0; b < order.size(); ++b) {
      auto i = matrix_index.at(labeled.mccs[order[a]]);
      auto j = matrix_index.at(labeled.mccs[order[b]]);
      double rho = m.rho_at(i, j);
      if (std::isnan(rho) || rho <= 0) continue;
      out << "<rect x=\"" << margin + cell * b << "\" y=\"" << margin + cell * a << "\" width=\""
          << cell << "\" height=\"" << cell << "\" fill=\"" << rho_color(rho) << "\"/>\n";
    }
  }
  // community frames along the diagonal
  std::size_t start = 0;
  for (std::size_t a = 1; a <= order.size(); ++a) {
    if (a == order.size() || labeled.community[order[a]] != labeled.community[order[start]]) {
      int comm = labeled.community[order[start]];
      const char* color = kPalette[(comm - 1) % (sizeof(kPalette) / sizeof(kPalette[0]))];
      out << "<rect x=\"" << margin + cell * start << "\" y=\"" << margin + cell * start
          << "\" width=\"" << cell * (a - start) << "\" height=\"" << cell * (a - start)
          << "\" fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\"/>\n";
      start = a;
    }
  }
  out << "</svg>\n";
}

void write_afs_scatter_svg(const CategoryFeatureSet& f, const std::string& path) {
  if (f.rows.empty()) throw Error("afs scatter: no rows");
  double age_lo = 1e18, age_hi = -1e18, seg_lo = 1e18, seg_hi = -1e18;
  for (const auto& r : f.rows) {
    age_lo = std::min(age_lo, r.age);
    age_hi = std::max(age_hi, r.age);
    seg_lo = std::min(seg_lo, r.seg);
    seg_hi = std::max(seg_hi, r.seg);
  }
  const int w = 640, h = 480, margin = 40;
  auto sx = [&](double age) {
    return margin + (w - 2 * margin) * (age_hi > age_lo ? (age - age_lo) / (age_hi - age_lo) : 0.5);
  };
  auto sy = [&](double seg) {
    return h - margin -
           (h - 2 * margin) * (seg_hi > seg_lo ? (seg - seg_lo) / (seg_hi - seg_lo) : 0.5);
  };
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path);
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w << "\" height=\"" << h
      << "\">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
      << "<line x1=\"" << margin << "\" y1=\"" << h - margin << "\" x2=\"" << w - margin
      << "\" y2=\"" << h - margin << "\" stroke=\"black\"/>\n"
      << "<line x1=\"" << margin << "\" y1=\"" << margin << "\" x2=\"" << margin << "\" y2=\""
      << h - margin << "\" stroke=\"black\"/>\n"
      << "<text x=\"" << w / 2 << "\" y=\"" << h - 8 << "\" font-size=\"12\">average age</text>\n"
      << "<text x=\"12\" y=\"" << h / 2 << "\" font-size=\"12\" transform=\"rotate(-90 12 "
      << h / 2 << ")\">average SEG</text>\n";
  for (const auto& r : f.rows) {
    bool male = !std::isnan(r.gender) && r.gender > 0.5;
    double balance = std::isnan(r.gender) ? 0.0 : std::abs(r.gender - 0.5) * 2.0;
    double radius = 2.5 + 4.0 * balance;
    if (male) {
      out << "<rect x=\"" << sx(r.age) - radius << "\" y=\"" << sy(r.seg) - radius
          << "\" width=\"" << 2 * radius << "\" height=\"" << 2 * radius
          << "\" fill=\"#4477aa\" fill-opacity=\"0.6\"/>\n";
    } else {
      out << "<circle cx=\"" << sx(r.age) << "\" cy=\"" << sy(r.seg) << "\" r=\"" << radius
          << "\" fill=\"#cc6677\" fill-opacity=\"0.6\"/>\n";
    }
  }
  out << "</svg>\n";
}

}  // namespace spendnet
