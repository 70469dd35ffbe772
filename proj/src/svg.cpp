#include "sdsbm/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace sdsbm {

namespace {

constexpr double kWidth = 720.0;
constexpr double kHeight = 480.0;
constexpr double kLeft = 64.0;
constexpr double kRight = 24.0;
constexpr double kTop = 44.0;
constexpr double kBottom = 56.0;

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

std::string fmt_tick(double v) {
  char buf[32];
  if (std::abs(v - std::round(v)) < 1e-9) {
    std::snprintf(buf, sizeof(buf), "%.0f", v);
  } else {
    std::snprintf(buf, sizeof(buf), "%.2f", v);
  }
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace

std::string render_line_chart(const std::string& title, const std::string& x_label,
                              const std::string& y_label, double y_min, double y_max,
                              const std::vector<ChartSeries>& series) {
  double x_min = 0.0, x_max = 1.0;
  bool have_x = false;
  for (const auto& s : series) {
    for (double x : s.x) {
      if (!have_x) {
        x_min = x_max = x;
        have_x = true;
      } else {
        x_min = std::min(x_min, x);
        x_max = std::max(x_max, x);
      }
    }
  }
  if (!have_x || x_max == x_min) {
    x_max = x_min + 1.0;
  }

  const double plot_w = kWidth - kLeft - kRight;
  const double plot_h = kHeight - kTop - kBottom;
  auto sx = [&](double x) { return kLeft + (x - x_min) / (x_max - x_min) * plot_w; };
  auto sy = [&](double y) {
    double clipped = std::clamp(y, y_min, y_max);
    return kTop + (y_max - clipped) / (y_max - y_min) * plot_h;
  };

  std::ostringstream out;
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\""
      << kHeight << "\" viewBox=\"0 0 " << kWidth << " " << kHeight << "\">\n";
  out << "<rect x=\"0\" y=\"0\" width=\"" << kWidth << "\" height=\"" << kHeight
      << "\" fill=\"white\"/>\n";
  out << "<text x=\"" << kWidth / 2 << "\" y=\"24\" text-anchor=\"middle\" "
      << "font-family=\"sans-serif\" font-size=\"16\">" << escape(title) << "</text>\n";

  // frame
  out << "<rect x=\"" << kLeft << "\" y=\"" << kTop << "\" width=\"" << plot_w
      << "\" height=\"" << plot_h << "\" fill=\"none\" stroke=\"#444444\" "
      << "stroke-width=\"1\"/>\n";

  // y ticks at fixed fractions of the range
  for (double ty : {0.0, 0.2, 0.4, 0.6, 0.8, 1.0}) {
    if (ty < y_min || ty > y_max) {
      continue;
    }
    const double py = sy(ty);
    out << "<line x1=\"" << kLeft - 5 << "\" y1=\"" << fmt(py) << "\" x2=\"" << kLeft
        << "\" y2=\"" << fmt(py) << "\" stroke=\"#444444\"/>\n";
    out << "<line x1=\"" << kLeft << "\" y1=\"" << fmt(py) << "\" x2=\""
        << kLeft + plot_w << "\" y2=\"" << fmt(py)
        << "\" stroke=\"#dddddd\" stroke-width=\"1\"/>\n";
    out << "<text x=\"" << kLeft - 9 << "\" y=\"" << fmt(py + 4)
        << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">"
        << fmt_tick(ty) << "</text>\n";
  }

  // x ticks at the union of series x positions
  std::vector<double> ticks;
  for (const auto& s : series) {
    ticks.insert(ticks.end(), s.x.begin(), s.x.end());
  }
  std::sort(ticks.begin(), ticks.end());
  ticks.erase(std::unique(ticks.begin(), ticks.end()), ticks.end());
  for (double tx : ticks) {
    const double px = sx(tx);
    out << "<line x1=\"" << fmt(px) << "\" y1=\"" << kTop + plot_h << "\" x2=\""
        << fmt(px) << "\" y2=\"" << kTop + plot_h + 5 << "\" stroke=\"#444444\"/>\n";
    out << "<text x=\"" << fmt(px) << "\" y=\"" << kTop + plot_h + 18
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">"
        << fmt_tick(tx) << "</text>\n";
  }

  out << "<text x=\"" << kLeft + plot_w / 2 << "\" y=\"" << kHeight - 14
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">"
      << escape(x_label) << "</text>\n";
  out << "<text x=\"18\" y=\"" << kTop + plot_h / 2
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\" "
      << "transform=\"rotate(-90 18 " << kTop + plot_h / 2 << ")\">" << escape(y_label)
      << "</text>\n";

  for (const auto& s : series) {
    if (s.x.empty()) {
      continue;
    }
    // sd band: forward along mean+sd, back along mean-sd
    out << "<polygon fill=\"" << s.color << "\" fill-opacity=\"0.15\" stroke=\"none\" "
        << "points=\"";
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      out << fmt(sx(s.x[i])) << ',' << fmt(sy(s.mean[i] + s.sd[i])) << ' ';
    }
    for (std::size_t i = s.x.size(); i-- > 0;) {
      out << fmt(sx(s.x[i])) << ',' << fmt(sy(s.mean[i] - s.sd[i]));
      if (i != 0) {
        out << ' ';
      }
    }
    out << "\"/>\n";
    out << "<polyline fill=\"none\" stroke=\"" << s.color << "\" stroke-width=\"2\" "
        << "points=\"";
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (i > 0) {
        out << ' ';
      }
      out << fmt(sx(s.x[i])) << ',' << fmt(sy(s.mean[i]));
    }
    out << "\"/>\n";
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      out << "<circle cx=\"" << fmt(sx(s.x[i])) << "\" cy=\"" << fmt(sy(s.mean[i]))
          << "\" r=\"3\" fill=\"" << s.color << "\"/>\n";
    }
  }

  // legend, top-right corner of the plot area
  const double lx = kLeft + plot_w - 130.0;
  double ly = kTop + 12.0;
  for (const auto& s : series) {
    out << "<line x1=\"" << lx << "\" y1=\"" << fmt(ly) << "\" x2=\"" << lx + 24
        << "\" y2=\"" << fmt(ly) << "\" stroke=\"" << s.color
        << "\" stroke-width=\"2\"/>\n";
    out << "<text x=\"" << lx + 30 << "\" y=\"" << fmt(ly + 4)
        << "\" font-family=\"sans-serif\" font-size=\"12\">" << escape(s.label)
        << "</text>\n";
    ly += 18.0;
  }

  out << "</svg>\n";
  return out.str();
}

}  // namespace sdsbm
