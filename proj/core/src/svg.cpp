#include "flexfor/svg.hpp"

#include <algorithm>
#include <cstdio>
#include <limits>

namespace flexfor {

namespace {

constexpr double kWidth = 640.0;
constexpr double kHeight = 640.0;
constexpr double kMargin = 60.0;

const char* point_color(PointLabel l) {
  switch (l) {
    case PointLabel::feasible: return "#2a9d3a";
    case PointLabel::voltage: return "#d62728";
    case PointLabel::current: return "#1f5fbf";
    case PointLabel::both: return "#8c3fb0";
    case PointLabel::non_converged: return "#7f7f7f";
  }
  return "#000000";
}

const char* const kHullColors[] = {"#000000", "#ff7f0e", "#17becf", "#e377c2", "#bcbd22", "#8c564b"};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
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

std::string render_svg(const LabelledCloud& cloud, const std::vector<LabelledHull>& hulls, const std::string& title) {
  double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin;
  double ymin = xmin, ymax = -xmin;
  auto grow = [&](double x, double y) {
    xmin = std::min(xmin, x);
    xmax = std::max(xmax, x);
    ymin = std::min(ymin, y);
    ymax = std::max(ymax, y);
  };
  for (const auto& p : cloud.points) grow(p.p_kw, p.q_kvar);
  for (const auto& h : hulls)
    for (const auto& v : h.polygon.vertices()) grow(v.x, v.y);
  if (!(xmin <= xmax)) xmin = -1, xmax = 1, ymin = -1, ymax = 1;
  if (xmax - xmin < 1e-9) xmin -= 1, xmax += 1;
  if (ymax - ymin < 1e-9) ymin -= 1, ymax += 1;

  const double sx = (kWidth - 2 * kMargin) / (xmax - xmin);
  const double sy = (kHeight - 2 * kMargin) / (ymax - ymin);
  auto X = [&](double x) { return kMargin + (x - xmin) * sx; };
  auto Y = [&](double y) { return kHeight - kMargin - (y - ymin) * sy; };

  std::string out;
  out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(kWidth) + "\" height=\"" + num(kHeight) +
         "\" viewBox=\"0 0 " + num(kWidth) + " " + num(kHeight) + "\">\n";
  out += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  if (!title.empty())
    out += "<text x=\"" + num(kWidth / 2) + "\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"16\">" +
           escape(title) + "</text>\n";

  // axes through the origin if visible, else along the frame
  const double ax = (xmin <= 0 && xmax >= 0) ? X(0) : kMargin;
  const double ay = (ymin <= 0 && ymax >= 0) ? Y(0) : kHeight - kMargin;
  out += "<g stroke=\"#999999\" stroke-width=\"1\">\n";
  out += "<line x1=\"" + num(kMargin) + "\" y1=\"" + num(ay) + "\" x2=\"" + num(kWidth - kMargin) + "\" y2=\"" + num(ay) + "\"/>\n";
  out += "<line x1=\"" + num(ax) + "\" y1=\"" + num(kMargin) + "\" x2=\"" + num(ax) + "\" y2=\"" + num(kHeight - kMargin) + "\"/>\n";
  out += "</g>\n";
  out += "<text x=\"" + num(kWidth - kMargin) + "\" y=\"" + num(kHeight - 20) +
         "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"12\">P [kW] " + num(xmin) + " .. " + num(xmax) +
         "</text>\n";
  out += "<text x=\"12\" y=\"" + num(kMargin - 10) + "\" font-family=\"sans-serif\" font-size=\"12\">Q [kvar] " +
         num(ymin) + " .. " + num(ymax) + "</text>\n";

  out += "<g stroke=\"none\" fill-opacity=\"0.6\">\n";
  for (const auto& p : cloud.points) {
    out += "<circle cx=\"" + num(X(p.p_kw)) + "\" cy=\"" + num(Y(p.q_kvar)) + "\" r=\"1.5\" fill=\"" +
           point_color(p.label) + "\"/>\n";
  }
  out += "</g>\n";

  for (std::size_t i = 0; i < hulls.size(); ++i) {
    const char* color = kHullColors[i % std::size(kHullColors)];
    const auto& verts = hulls[i].polygon.vertices();
    if (!verts.empty()) {
      out += "<polygon fill=\"none\" stroke=\"" + std::string(color) + "\" stroke-width=\"2\" points=\"";
      for (std::size_t k = 0; k < verts.size(); ++k) {
        if (k) out += ' ';
        out += num(X(verts[k].x)) + "," + num(Y(verts[k].y));
      }
      out += "\"/>\n";
    }
    out += "<text x=\"" + num(kWidth - kMargin) + "\" y=\"" + num(kMargin + 16.0 * static_cast<double>(i)) +
           "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"12\" fill=\"" + color + "\">" +
           escape(hulls[i].label) + "</text>\n";
  }
  out += "</svg>\n";
  return out;
}

}  // namespace flexfor
