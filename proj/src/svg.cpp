#include "suropt/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace suropt {

namespace {

constexpr double kWidth = 640.0;
constexpr double kHeight = 420.0;
constexpr double kMargin = 60.0;

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

std::string header(const std::string& title) {
  std::string out;
  out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(kWidth) +
         "\" height=\"" + num(kHeight) + "\" viewBox=\"0 0 " + num(kWidth) + " " +
         num(kHeight) + "\">\n";
  out += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out += "<text x=\"" + num(kWidth / 2) +
         "\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" "
         "font-size=\"15\">" +
         title + "</text>\n";
  return out;
}

std::string line(double x1, double y1, double x2, double y2, const char* stroke,
                 double width = 1.0, const char* dash = nullptr) {
  std::string out = "<line x1=\"" + num(x1) + "\" y1=\"" + num(y1) + "\" x2=\"" +
                    num(x2) + "\" y2=\"" + num(y2) + "\" stroke=\"" + stroke +
                    "\" stroke-width=\"" + num(width) + "\"";
  if (dash) out += std::string(" stroke-dasharray=\"") + dash + "\"";
  out += "/>\n";
  return out;
}

std::string rect(double x, double y, double w, double h, const char* fill,
                 const char* stroke = "black") {
  return "<rect x=\"" + num(x) + "\" y=\"" + num(y) + "\" width=\"" + num(w) +
         "\" height=\"" + num(h) + "\" fill=\"" + fill + "\" stroke=\"" + stroke +
         "\"/>\n";
}

std::string text(double x, double y, const std::string& s, const char* anchor = "middle",
                 int size = 12) {
  return "<text x=\"" + num(x) + "\" y=\"" + num(y) + "\" text-anchor=\"" + anchor +
         "\" font-family=\"sans-serif\" font-size=\"" + std::to_string(size) + "\">" +
         s + "</text>\n";
}

struct YScale {
  double lo, hi;
  double y(double v) const {
    const double t = (v - lo) / (hi - lo);
    return kHeight - kMargin - t * (kHeight - 2 * kMargin);
  }
};

}  // namespace

std::string svg_boxplot(const std::map<MachineId, BoxplotStats>& stats,
                        const std::string& title) {
  double lo = 0.0, hi = 1.0;
  bool first = true;
  for (const auto& [m, s] : stats) {
    double smin = s.min, smax = s.max;
    for (double o : s.outliers) {
      smin = std::min(smin, o);
      smax = std::max(smax, o);
    }
    if (first) {
      lo = smin;
      hi = smax;
      first = false;
    } else {
      lo = std::min(lo, smin);
      hi = std::max(hi, smax);
    }
  }
  if (hi <= lo) hi = lo + 1.0;
  const double pad = 0.05 * (hi - lo);
  const YScale scale{lo - pad, hi + pad};

  std::string out = header(title);
  out += line(kMargin, kMargin, kMargin, kHeight - kMargin, "black");
  out += text(kMargin - 8, scale.y(lo) + 4, num(lo), "end", 11);
  out += text(kMargin - 8, scale.y(hi) + 4, num(hi), "end", 11);

  const double slot = (kWidth - 2 * kMargin) / static_cast<double>(stats.size());
  double cx = kMargin + slot / 2;
  for (const auto& [m, s] : stats) {
    const double half = slot * 0.18;
    out += line(cx, scale.y(s.min), cx, scale.y(s.q1), "black");
    out += line(cx, scale.y(s.q3), cx, scale.y(s.max), "black");
    out += line(cx - half, scale.y(s.min), cx + half, scale.y(s.min), "black");
    out += line(cx - half, scale.y(s.max), cx + half, scale.y(s.max), "black");
    out += rect(cx - half, scale.y(s.q3), 2 * half, scale.y(s.q1) - scale.y(s.q3),
                "#cfe3f7");
    out += line(cx - half, scale.y(s.median), cx + half, scale.y(s.median), "black", 2.0);
    for (double o : s.outliers) {
      out += "<circle cx=\"" + num(cx) + "\" cy=\"" + num(scale.y(o)) +
             "\" r=\"2.5\" fill=\"none\" stroke=\"black\"/>\n";
    }
    out += text(cx, kHeight - kMargin + 20, std::string("machine ") + machine_tag(m));
    cx += slot;
  }
  out += "</svg>\n";
  return out;
}

std::string svg_histogram(const Histogram& hist, const HdiInterval& hdi,
                          std::optional<double> observed, const std::string& title) {
  const double lo = hist.edges.front();
  const double hi = hist.edges.back();
  std::int64_t peak = 1;
  for (auto c : hist.counts) peak = std::max(peak, c);
  const double span = hi > lo ? hi - lo : 1.0;
  const auto sx = [&](double v) {
    return kMargin + (v - lo) / span * (kWidth - 2 * kMargin);
  };
  const auto sy = [&](double count) {
    return kHeight - kMargin - count / static_cast<double>(peak) * (kHeight - 2 * kMargin);
  };

  std::string out = header(title);
  // HDI band under the bars
  out += rect(sx(hdi.lower), kMargin, sx(hdi.upper) - sx(hdi.lower),
              kHeight - 2 * kMargin, "#fdebc8", "none");
  for (std::size_t i = 0; i < hist.counts.size(); ++i) {
    const double x0 = sx(hist.edges[i]);
    const double x1 = sx(hist.edges[i + 1]);
    const double y = sy(static_cast<double>(hist.counts[i]));
    out += rect(x0, y, std::max(x1 - x0, 0.5), kHeight - kMargin - y, "#7aa6d6", "none");
  }
  if (observed) {
    out += line(sx(*observed), kMargin, sx(*observed), kHeight - kMargin, "black", 1.5,
                "6,4");
  }
  out += line(kMargin, kHeight - kMargin, kWidth - kMargin, kHeight - kMargin, "black");
  out += text(kMargin, kHeight - kMargin + 20, num(lo), "start", 11);
  out += text(kWidth - kMargin, kHeight - kMargin + 20, num(hi), "end", 11);
  out += text(kWidth / 2, kHeight - kMargin + 34,
              "95% HDI [" + num(hdi.lower) + ", " + num(hdi.upper) + "]");
  out += "</svg>\n";
  return out;
}

std::string svg_heatmap(const std::vector<SurfacePoint>& grid, int resolution,
                        ResponseSelector response, const std::string& title,
                        const std::string& label_a, const std::string& label_b) {
  const auto value = [&](const SurfacePoint& p) {
    return response == ResponseSelector::roughness ? p.response.roughness
                                                   : p.response.power;
  };
  double lo = value(grid.front()), hi = lo;
  for (const auto& p : grid) {
    lo = std::min(lo, value(p));
    hi = std::max(hi, value(p));
  }
  if (hi <= lo) hi = lo + 1.0;

  const double cell_w = (kWidth - 2 * kMargin) / resolution;
  const double cell_h = (kHeight - 2 * kMargin) / resolution;
  std::string out = header(title);
  for (int ia = 0; ia < resolution; ++ia) {
    for (int ib = 0; ib < resolution; ++ib) {
      const auto& p = grid[static_cast<std::size_t>(ia * resolution + ib)];
      const double t = (value(p) - lo) / (hi - lo);
      const int shade = static_cast<int>(std::lround(235.0 - t * 200.0));
      char color[8];
      std::snprintf(color, sizeof(color), "#%02x%02x%02x", shade, shade, 235);
      out += rect(kMargin + ia * cell_w, kHeight - kMargin - (ib + 1) * cell_h, cell_w,
                  cell_h, color, "none");
    }
  }
  out += rect(kMargin, kMargin, kWidth - 2 * kMargin, kHeight - 2 * kMargin, "none");
  out += text(kWidth / 2, kHeight - kMargin + 24, label_a);
  out += text(kMargin - 30, kHeight / 2, label_b, "middle", 12);
  out += text(kWidth / 2, kHeight - 8,
              "range [" + num(lo) + ", " + num(hi) + "]", "middle", 11);
  out += "</svg>\n";
  return out;
}

}  // namespace suropt
