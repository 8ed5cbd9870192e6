#include "hyperdon/plot.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "hyperdon/errors.hpp"

namespace hyperdon::plot {

namespace {

std::string num(double x, const char* fmt = "%.6g") {
  char buf[64];
  std::snprintf(buf, sizeof buf, fmt, x);
  return buf;
}

// Piecewise-linear viridis approximation on [0, 1].
std::string color(double s) {
  static const std::array<std::array<double, 3>, 5> stops{{{68, 1, 84}, {59, 82, 139}, {33, 145, 140},
                                                           {94, 201, 98}, {253, 231, 37}}};
  s = std::clamp(s, 0.0, 1.0) * 4.0;
  const int i = std::min(3, static_cast<int>(s));
  const double a = s - i;
  char buf[16];
  std::snprintf(buf, sizeof buf, "#%02x%02x%02x", int(std::lround((1 - a) * stops[i][0] + a * stops[i + 1][0])),
                int(std::lround((1 - a) * stops[i][1] + a * stops[i + 1][1])),
                int(std::lround((1 - a) * stops[i][2] + a * stops[i + 1][2])));
  return buf;
}

std::string escape(const std::string& s) {
  std::string o;
  for (char c : s) {
    if (c == '<') o += "&lt;";
    else if (c == '>') o += "&gt;";
    else if (c == '&') o += "&amp;";
    else o += c;
  }
  return o;
}

}  // namespace

std::optional<FieldPlot> field_svg(const geometry::HyperbolicMesh& mesh, const Eigen::VectorXd& values,
                                   const std::string& title) {
  if (mesh.disk.empty()) return std::nullopt;
  Eigen::VectorXd face;
  if (values.size() == mesh.n_vertices) face = geometry::face_mean(mesh, values);
  else if (values.size() == mesh.n_faces()) face = values;
  else throw DomainError("field length matches neither vertices nor faces");

  FieldPlot p;
  p.lo = face.minCoeff();
  p.hi = face.maxCoeff();
  const double span = p.hi - p.lo;
  const double R = 300.0, cx = 320.0, cy = 340.0;
  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"760\" height=\"700\" viewBox=\"0 0 760 700\">\n";
  os << "<text x=\"20\" y=\"24\" font-family=\"sans-serif\" font-size=\"16\">" << escape(title) << "</text>\n";
  os << "<circle cx=\"" << cx << "\" cy=\"" << cy << "\" r=\"" << R << "\" fill=\"none\" stroke=\"#999\"/>\n";
  os << "<g stroke-width=\"0.3\">\n";
  for (int f = 0; f < mesh.n_faces(); ++f) {
    const std::string c = color(span > 0 ? (face[f] - p.lo) / span : 0.5);
    os << "<polygon points=\"";
    for (int i = 0; i < 3; ++i)
      os << num(cx + R * mesh.disk[f][i].real(), "%.2f") << ',' << num(cy - R * mesh.disk[f][i].imag(), "%.2f")
         << (i < 2 ? " " : "");
    os << "\" fill=\"" << c << "\" stroke=\"" << c << "\"/>\n";
  }
  os << "</g>\n";
  for (int i = 0; i < 50; ++i)
    os << "<rect x=\"670\" y=\"" << 590 - 10 * i << "\" width=\"24\" height=\"10\" fill=\"" << color(i / 49.0)
       << "\"/>\n";
  os << "<text x=\"700\" y=\"600\" font-family=\"sans-serif\" font-size=\"12\">" << num(p.lo) << "</text>\n";
  os << "<text x=\"700\" y=\"104\" font-family=\"sans-serif\" font-size=\"12\">" << num(p.hi) << "</text>\n";
  os << "<text id=\"legend\" x=\"620\" y=\"630\" font-family=\"sans-serif\" font-size=\"12\">[" << num(p.lo) << ", "
     << num(p.hi) << "]</text>\n";
  os << "</svg>\n";
  p.svg = os.str();
  return p;
}

std::string line_svg(const std::vector<double>& x, const std::vector<double>& y, const std::string& title,
                     const std::string& xlabel, const std::string& ylabel) {
  if (x.size() != y.size()) throw DomainError("line plot needs equal-length x and y");
  const double W = 640, H = 420, L = 80, B = 60, T = 40, Rm = 20;
  double x0 = 0, x1 = 1, y0 = 0, y1 = 1;
  if (!x.empty()) {
    x0 = *std::min_element(x.begin(), x.end());
    x1 = *std::max_element(x.begin(), x.end());
    y0 = *std::min_element(y.begin(), y.end());
    y1 = *std::max_element(y.begin(), y.end());
  }
  if (x1 == x0) x1 = x0 + 1;
  if (y1 == y0) {
    y0 -= 0.5;
    y1 += 0.5;
  }
  auto px = [&](double v) { return L + (v - x0) / (x1 - x0) * (W - L - Rm); };
  auto py = [&](double v) { return H - B - (v - y0) / (y1 - y0) * (H - B - T); };
  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\">\n";
  os << "<text x=\"" << L << "\" y=\"24\" font-family=\"sans-serif\" font-size=\"16\">" << escape(title)
     << "</text>\n";
  os << "<rect x=\"" << L << "\" y=\"" << T << "\" width=\"" << W - L - Rm << "\" height=\"" << H - B - T
     << "\" fill=\"none\" stroke=\"#444\"/>\n";
  for (int i = 0; i <= 4; ++i) {
    const double xv = x0 + (x1 - x0) * i / 4, yv = y0 + (y1 - y0) * i / 4;
    os << "<text x=\"" << num(px(xv), "%.1f") << "\" y=\"" << H - B + 18
       << "\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"middle\">" << num(xv, "%.4g") << "</text>\n";
    os << "<text x=\"" << L - 6 << "\" y=\"" << num(py(yv) + 4, "%.1f")
       << "\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"end\">" << num(yv, "%.4g") << "</text>\n";
  }
  os << "<text x=\"" << (W + L) / 2 << "\" y=\"" << H - 14
     << "\" font-family=\"sans-serif\" font-size=\"13\" text-anchor=\"middle\">" << escape(xlabel) << "</text>\n";
  os << "<text x=\"16\" y=\"" << (H - B + T) / 2 << "\" font-family=\"sans-serif\" font-size=\"13\" transform=\"rotate(-90 16 "
     << (H - B + T) / 2 << ")\" text-anchor=\"middle\">" << escape(ylabel) << "</text>\n";
  os << "<polyline fill=\"none\" stroke=\"#1f5fa8\" stroke-width=\"2\" points=\"";
  for (size_t i = 0; i < x.size(); ++i) os << num(px(x[i]), "%.2f") << ',' << num(py(y[i]), "%.2f") << ' ';
  os << "\"/>\n";
  for (size_t i = 0; i < x.size(); ++i)
    os << "<circle cx=\"" << num(px(x[i]), "%.2f") << "\" cy=\"" << num(py(y[i]), "%.2f")
       << "\" r=\"3\" fill=\"#1f5fa8\"/>\n";
  os << "</svg>\n";
  return os.str();
}

}  // namespace hyperdon::plot
