#include "pants/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace pants {

namespace {
constexpr double kPi = 3.14159265358979323846264338328;
}

std::string fmt17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

SvgCanvas::SvgCanvas(double width, double height) : width_(width), height_(height) {}

void SvgCanvas::rect(double x, double y, double w, double h, const std::string& fill) {
  char buf[256];
  std::snprintf(buf, sizeof(buf),
                "<rect x=\"%.3f\" y=\"%.3f\" width=\"%.3f\" height=\"%.3f\" fill=\"%s\"/>",
                x, y, w, h, fill.c_str());
  body_.push_back(buf);
}

void SvgCanvas::circle(double cx, double cy, double r, const std::string& fill,
                       const std::string& stroke) {
  char buf[256];
  std::snprintf(buf, sizeof(buf),
                "<circle cx=\"%.3f\" cy=\"%.3f\" r=\"%.3f\" fill=\"%s\" stroke=\"%s\"/>",
                cx, cy, r, fill.c_str(), stroke.c_str());
  body_.push_back(buf);
}

void SvgCanvas::line(double x1, double y1, double x2, double y2,
                     const std::string& stroke, double width) {
  char buf[256];
  std::snprintf(buf, sizeof(buf),
                "<line x1=\"%.3f\" y1=\"%.3f\" x2=\"%.3f\" y2=\"%.3f\" "
                "stroke=\"%s\" stroke-width=\"%.2f\"/>",
                x1, y1, x2, y2, stroke.c_str(), width);
  body_.push_back(buf);
}

void SvgCanvas::polyline(const std::vector<std::pair<double, double>>& pts,
                         const std::string& stroke, double width) {
  std::string s = "<polyline fill=\"none\" stroke=\"" + stroke + "\" stroke-width=\"" +
                  std::to_string(width) + "\" points=\"";
  char buf[64];
  for (const auto& [x, y] : pts) {
    std::snprintf(buf, sizeof(buf), "%.3f,%.3f ", x, y);
    s += buf;
  }
  s += "\"/>";
  body_.push_back(s);
}

void SvgCanvas::text(double x, double y, const std::string& t, double size) {
  char buf[512];
  std::snprintf(buf, sizeof(buf),
                "<text x=\"%.3f\" y=\"%.3f\" font-size=\"%.1f\" "
                "font-family=\"monospace\">%s</text>",
                x, y, size, t.c_str());
  body_.push_back(buf);
}

void SvgCanvas::write(const std::string& path) const {
  std::ofstream out(path);
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width_
      << "\" height=\"" << height_ << "\" viewBox=\"0 0 " << width_ << " " << height_
      << "\">\n";
  for (const auto& s : body_) out << s << "\n";
  out << "</svg>\n";
}

std::string diverging_color(double v) {
  v = std::clamp(v, -1.0, 1.0);
  int r, g, b;
  if (v < 0.0) {  // blue side
    const double t = -v;
    r = static_cast<int>(255 * (1.0 - t));
    g = static_cast<int>(255 * (1.0 - t));
    b = 255;
  } else {
    const double t = v;
    r = 255;
    g = static_cast<int>(255 * (1.0 - t));
    b = static_cast<int>(255 * (1.0 - t));
  }
  char buf[16];
  std::snprintf(buf, sizeof(buf), "#%02x%02x%02x", r, g, b);
  return buf;
}

void write_curvature_svg(const std::string& path, const std::vector<ScanRow>& rows,
                         int n_phi, int n_theta) {
  const double W = 720.0, H = 380.0;
  SvgCanvas svg(W, H + 20.0);
  if (rows.empty()) {
    svg.write(path);
    return;
  }
  double max_abs = 0.0;
  for (const auto& r : rows) max_abs = std::max(max_abs, std::abs(r.curvature));
  if (max_abs == 0.0) max_abs = 1.0;
  const double cw = W / n_theta, ch = H / n_phi;
  for (const auto& r : rows) {
    // signed log scaling keeps the near-zero structure visible
    const double v = std::copysign(
        std::log1p(std::abs(r.curvature) / max_abs * 99.0) / std::log(100.0),
        r.curvature);
    const double x = r.theta / (2.0 * kPi) * W;
    const double y = (0.5 - r.phi / kPi) * H;
    svg.rect(x - 0.5 * cw, y - 0.5 * ch, cw + 0.5, ch + 0.5, diverging_color(v));
  }
  svg.line(0.0, 0.5 * H, W, 0.5 * H, "#000000", 0.8);
  for (int k = 1; k <= 3; ++k) {
    const double t = collision_angle(k);
    svg.circle(t / (2.0 * kPi) * W, 0.5 * H, 4.0, "#000000");
  }
  svg.text(4.0, H + 14.0, "phi in [-pi/2, pi/2] (vertical), theta in [0, 2pi); max|K|=" +
                            fmt17(max_abs));
  svg.write(path);
}

namespace {

void draw_sphere_frame(SvgCanvas* svg, double W, double H) {
  svg->line(0.0, 0.5 * H, W, 0.5 * H, "#888888", 0.8);
  for (int k = 1; k <= 3; ++k) {
    const double t = collision_angle(k);
    svg->circle(t / (2.0 * kPi) * W, 0.5 * H, 4.0, "#cc0000");
  }
}

std::pair<double, double> chart_xy(const ShapePoint& p, double W, double H) {
  return {p.theta / (2.0 * kPi) * W, (0.5 - p.phi / kPi) * H};
}

void draw_path(SvgCanvas* svg, const std::vector<ShapePoint>& pts, double W, double H,
               const std::string& color) {
  std::vector<std::pair<double, double>> seg;
  double prev_theta = pts.empty() ? 0.0 : pts.front().theta;
  for (const auto& p : pts) {
    if (std::abs(p.theta - prev_theta) > kPi) {  // wrapped around
      svg->polyline(seg, color, 1.2);
      seg.clear();
    }
    seg.push_back(chart_xy(p, W, H));
    prev_theta = p.theta;
  }
  svg->polyline(seg, color, 1.2);
}

}  // namespace

void write_trajectory_svg(const std::string& path, const Trajectory& traj) {
  const double W = 720.0, H = 380.0;
  SvgCanvas svg(W, H);
  draw_sphere_frame(&svg, W, H);
  std::vector<ShapePoint> pts;
  pts.reserve(traj.samples.size());
  for (const auto& s : traj.samples) pts.push_back(s.point);
  draw_path(&svg, pts, W, H, "#1f4f9f");
  for (const auto& ev : traj.events) {
    const auto [x, y] = chart_xy(ShapePoint{0.0, ev.theta_at}, W, H);
    svg.circle(x, y, 2.5, ev.sign > 0 ? "#007700" : "#770077");
  }
  svg.write(path);
}

void write_loop_svg(const std::string& path, const std::vector<ShapePoint>& loop) {
  const double W = 720.0, H = 380.0;
  SvgCanvas svg(W, H);
  draw_sphere_frame(&svg, W, H);
  std::vector<ShapePoint> closed = loop;
  if (!loop.empty()) closed.push_back(loop.front());
  draw_path(&svg, closed, W, H, "#1f4f9f");
  svg.write(path);
}

void write_scan_csv(const std::string& path, const std::vector<ScanRow>& rows) {
  std::ofstream out(path);
  out << "phi,theta,s1,s2,s3,conformal_factor,curvature,kappa\n";
  for (const auto& r : rows) {
    out << fmt17(r.phi) << ',' << fmt17(r.theta) << ',' << fmt17(r.s1) << ','
        << fmt17(r.s2) << ',' << fmt17(r.s3) << ',' << fmt17(r.conformal) << ','
        << fmt17(r.curvature) << ',' << fmt17(r.kappa) << '\n';
  }
}

void write_trajectory_csv(const std::string& path, const Trajectory& traj) {
  std::ofstream out(path);
  out << "s,t_newton,phi,theta,v_phi,v_theta,s1,s2,s3\n";
  for (std::size_t i = 0; i < traj.samples.size(); ++i) {
    const auto& st = traj.samples[i];
    const SideTriple sd = squared_sides(st.point);
    out << fmt17(st.s) << ',' << fmt17(traj.newton_time[i]) << ',' << fmt17(st.point.phi)
        << ',' << fmt17(st.point.theta) << ',' << fmt17(st.v_phi) << ','
        << fmt17(st.v_theta) << ',' << fmt17(sd.s1) << ',' << fmt17(sd.s2) << ','
        << fmt17(sd.s3) << '\n';
  }
}

}  // namespace pants
