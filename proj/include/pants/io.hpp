#pragma once

#include <fstream>
#include <string>
#include <vector>

#include "pants/geodesic.hpp"
#include "pants/metric.hpp"

namespace pants {

// Fixed 17-significant-digit formatting so identical runs produce
// byte-identical outputs.
std::string fmt17(double x);

// Minimal SVG canvas for the heatmaps and traces.
class SvgCanvas {
 public:
  SvgCanvas(double width, double height);
  void rect(double x, double y, double w, double h, const std::string& fill);
  void circle(double cx, double cy, double r, const std::string& fill,
              const std::string& stroke = "none");
  void line(double x1, double y1, double x2, double y2, const std::string& stroke,
            double width = 1.0);
  void polyline(const std::vector<std::pair<double, double>>& pts,
                const std::string& stroke, double width = 1.0);
  void text(double x, double y, const std::string& s, double size = 12.0);
  void write(const std::string& path) const;

 private:
  double width_, height_;
  std::vector<std::string> body_;
};

// Diverging blue-white-red color for v in [-1, 1].
std::string diverging_color(double v);

// Heatmap of the scan rows over the (theta, phi) rectangle, with the equator
// and collision points marked.
void write_curvature_svg(const std::string& path, const std::vector<ScanRow>& rows,
                         int n_phi, int n_theta);

// (phi, theta) trace of a trajectory with equator and collision points.
void write_trajectory_svg(const std::string& path, const Trajectory& traj);
void write_loop_svg(const std::string& path, const std::vector<ShapePoint>& loop);

void write_scan_csv(const std::string& path, const std::vector<ScanRow>& rows);
void write_trajectory_csv(const std::string& path, const Trajectory& traj);

}  // namespace pants
