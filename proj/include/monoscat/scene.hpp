#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

namespace monoscat {

using Point = Eigen::Vector2d;

enum class ShapeKind { Disc, Ellipse, Kite, Nut, Raster };

// One penetrable scatterer with constant contrast. The kite follows the
// standard benchmark parametrization
//   t -> (cos t + 0.65 cos 2t - 0.65, 1.5 sin t),
// the nut is the polar curve r(t) = sqrt(0.75 + 0.25 cos 2t); both are
// scaled, rotated and translated per shape.
struct Shape {
  ShapeKind kind = ShapeKind::Disc;
  Point center{0.0, 0.0};
  double radius = 1.0;      // disc
  double semi_a = 1.0;      // ellipse semi-axes
  double semi_b = 1.0;
  double scale = 1.0;       // kite / nut
  double rotation = 0.0;    // radians
  double contrast = 0.0;    // q on the shape, must be >= -1
  std::string raster_file;  // raster: CSV grid, row-major M x M
  double raster_halfwidth = 1.0;

  // Samples of the raster grid (loaded on demand by rasterize).
  Eigen::MatrixXd raster_values;

  void validate() const;  // throws std::invalid_argument on bad parameters
  // Conservative radius of a circle around `center` containing the shape.
  double bounding_radius() const;
  std::string describe() const;
};

struct Scene {
  std::vector<Shape> shapes;
  double k = 1.0;                // wave number
  double bounding_radius = 1.0;  // all supports inside B_R(0)

  void validate() const;
};

// Cell-centered samples of the contrast q on [-L,L]^2, M x M cells.
struct ContrastField {
  double box_halfwidth = 1.0;
  int resolution = 2;
  Eigen::MatrixXd values;  // values(row=i, col=j) ~ q(x_j, y_i)

  double cell_size() const { return 2.0 * box_halfwidth / resolution; }
  double cell_area() const { return cell_size() * cell_size(); }
  // Center of cell (row i, col j); x varies with the column index.
  Point cell_center(int i, int j) const {
    const double h = cell_size();
    return {-box_halfwidth + (j + 0.5) * h, -box_halfwidth + (i + 0.5) * h};
  }
};

// Uniform pixel partition of the region of interest [-R,R]^2.
struct PixelGrid {
  double roi_halfwidth = 1.0;
  int pixels_per_axis = 1;

  int count() const { return pixels_per_axis * pixels_per_axis; }
  double pixel_side() const { return 2.0 * roi_halfwidth / pixels_per_axis; }
  double pixel_area() const { return pixel_side() * pixel_side(); }
  Point center(int j) const {  // row-major index, row 0 at y = -R
    const int row = j / pixels_per_axis, col = j % pixels_per_axis;
    const double h = pixel_side();
    return {-roi_halfwidth + (col + 0.5) * h, -roi_halfwidth + (row + 0.5) * h};
  }
};

// Strict interior test against the shape's boundary curve. Kite and nut
// use a winding-number test on the sampled parametric curve behind a
// bounding-box prefilter.
bool shape_contains(const Shape& shape, const Point& p);

// Points on the shape's boundary curve (parametric sampling; raster shapes
// return their bounding square).
std::vector<Point> shape_boundary(const Shape& shape, int samples = 256);

// Midpoint rasterization, last shape in list order wins on overlap.
// Throws std::invalid_argument if a shape extends beyond the box.
ContrastField rasterize(const Scene& scene, double box_halfwidth, int resolution);

PixelGrid make_pixel_grid(double roi_halfwidth, int pixels_per_axis);

// Scene file I/O (JSON, see README for the schema).
Scene load_scene(const std::string& path);
void save_scene(const Scene& scene, const std::string& path);

} // namespace monoscat
