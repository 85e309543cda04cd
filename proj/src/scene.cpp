#include "monoscat/scene.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace monoscat {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr int kCurveSamples = 1024;

Point kite_point(double t) {
  return {std::cos(t) + 0.65 * std::cos(2.0 * t) - 0.65, 1.5 * std::sin(t)};
}

Point nut_point(double t) {
  const double r = std::sqrt(0.75 + 0.25 * std::cos(2.0 * t));
  return {r * std::cos(t), r * std::sin(t)};
}

Point curve_point(const Shape& s, double t) {
  Point p = (s.kind == ShapeKind::Kite) ? kite_point(t) : nut_point(t);
  p *= s.scale;
  const double c = std::cos(s.rotation), sn = std::sin(s.rotation);
  return {s.center.x() + c * p.x() - sn * p.y(),
          s.center.y() + sn * p.x() + c * p.y()};
}

// Winding number of the sampled closed curve around p (crossing rule).
bool winding_contains(const Shape& s, const Point& p) {
  int winding = 0;
  Point a = curve_point(s, 0.0);
  for (int i = 1; i <= kCurveSamples; ++i) {
    const double t = 2.0 * kPi * i / kCurveSamples;
    Point b = curve_point(s, t);
    if (a.y() <= p.y()) {
      if (b.y() > p.y() &&
          (b.x() - a.x()) * (p.y() - a.y()) - (p.x() - a.x()) * (b.y() - a.y()) > 0)
        ++winding;
    } else {
      if (b.y() <= p.y() &&
          (b.x() - a.x()) * (p.y() - a.y()) - (p.x() - a.x()) * (b.y() - a.y()) < 0)
        --winding;
    }
    a = b;
  }
  return winding != 0;
}

Eigen::MatrixXd load_csv_grid(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("raster grid file not readable: " + path);
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<double> row;
    std::stringstream ss(line);
    std::string tok;
    while (std::getline(ss, tok, ',')) row.push_back(std::stod(tok));
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw std::invalid_argument("raster grid file is empty: " + path);
  const size_t m = rows.size();
  Eigen::MatrixXd g(m, m);
  for (size_t i = 0; i < m; ++i) {
    if (rows[i].size() != m)
      throw std::invalid_argument("raster grid must be square (M rows of M values): " + path);
    for (size_t j = 0; j < m; ++j) g(i, j) = rows[i][j];
  }
  return g;
}

double raster_sample(const Shape& s, const Point& p) {
  const int m = static_cast<int>(s.raster_values.rows());
  const double h = 2.0 * s.raster_halfwidth / m;
  const double x = p.x() - s.center.x(), y = p.y() - s.center.y();
  const int j = static_cast<int>(std::floor((x + s.raster_halfwidth) / h));
  const int i = static_cast<int>(std::floor((y + s.raster_halfwidth) / h));
  if (i < 0 || j < 0 || i >= m || j >= m) return 0.0;
  return s.raster_values(i, j);
}

} // namespace

void Shape::validate() const {
  auto positive = [&](double v, const char* what) {
    if (!(v > 0.0))
      throw std::invalid_argument(describe() + ": " + what + " must be > 0");
  };
  switch (kind) {
    case ShapeKind::Disc: positive(radius, "radius"); break;
    case ShapeKind::Ellipse:
      positive(semi_a, "semi-axis a");
      positive(semi_b, "semi-axis b");
      break;
    case ShapeKind::Kite:
    case ShapeKind::Nut: positive(scale, "scale"); break;
    case ShapeKind::Raster:
      positive(raster_halfwidth, "raster halfwidth");
      if (raster_file.empty() && raster_values.size() == 0)
        throw std::invalid_argument(describe() + ": raster shape needs a grid file");
      break;
  }
  if (kind != ShapeKind::Raster && contrast < -1.0)
    throw std::invalid_argument(describe() + ": contrast must be >= -1");
}

double Shape::bounding_radius() const {
  double r = 0.0;
  switch (kind) {
    case ShapeKind::Disc: r = radius; break;
    case ShapeKind::Ellipse: r = std::max(semi_a, semi_b); break;
    case ShapeKind::Kite: r = 2.1 * scale; break;  // curve stays within 2.1*scale
    case ShapeKind::Nut: r = scale; break;
    case ShapeKind::Raster: r = std::sqrt(2.0) * raster_halfwidth; break;
  }
  return center.norm() + r;
}

std::string Shape::describe() const {
  const char* name = "shape";
  switch (kind) {
    case ShapeKind::Disc: name = "disc"; break;
    case ShapeKind::Ellipse: name = "ellipse"; break;
    case ShapeKind::Kite: name = "kite"; break;
    case ShapeKind::Nut: name = "nut"; break;
    case ShapeKind::Raster: name = "raster"; break;
  }
  std::ostringstream os;
  os << name << " at (" << center.x() << "," << center.y() << ")";
  return os.str();
}

void Scene::validate() const {
  if (!(k > 0.0)) throw std::invalid_argument("scene: wave number k must be > 0");
  if (!(bounding_radius > 0.0))
    throw std::invalid_argument("scene: bounding radius R must be > 0");
  for (const auto& s : shapes) {
    s.validate();
    if (s.bounding_radius() > bounding_radius + 1e-12)
      throw std::invalid_argument(s.describe() + " extends beyond the scene bounding radius");
  }
}

bool shape_contains(const Shape& shape, const Point& p) {
  switch (shape.kind) {
    case ShapeKind::Disc:
      return (p - shape.center).norm() < shape.radius;
    case ShapeKind::Ellipse: {
      const double c = std::cos(shape.rotation), s = std::sin(shape.rotation);
      const Point d = p - shape.center;
      const double u = c * d.x() + s * d.y();
      const double v = -s * d.x() + c * d.y();
      const double ua = u / shape.semi_a, vb = v / shape.semi_b;
      return ua * ua + vb * vb < 1.0;
    }
    case ShapeKind::Kite:
    case ShapeKind::Nut: {
      const double r = (shape.kind == ShapeKind::Kite ? 2.1 : 1.0) * shape.scale;
      const Point d = p - shape.center;
      if (std::abs(d.x()) > r || std::abs(d.y()) > r) return false;
      return winding_contains(shape, p);
    }
    case ShapeKind::Raster:
      return raster_sample(shape, p) != 0.0;
  }
  return false;
}

std::vector<Point> shape_boundary(const Shape& shape, int samples) {
  std::vector<Point> pts;
  pts.reserve(samples);
  const double c = std::cos(shape.rotation), sn = std::sin(shape.rotation);
  for (int i = 0; i < samples; ++i) {
    const double t = 2.0 * kPi * i / samples;
    Point p;
    switch (shape.kind) {
      case ShapeKind::Disc:
        p = shape.center + shape.radius * Point{std::cos(t), std::sin(t)};
        pts.push_back(p);
        continue;
      case ShapeKind::Ellipse:
        p = {shape.semi_a * std::cos(t), shape.semi_b * std::sin(t)};
        break;
      case ShapeKind::Kite:
      case ShapeKind::Nut:
        pts.push_back(curve_point(shape, t));
        continue;
      case ShapeKind::Raster: {
        const double hw = shape.raster_halfwidth;
        const double s = 8.0 * static_cast<double>(i) / samples;  // perimeter walk
        const int side = static_cast<int>(s / 2.0);
        const double f = s / 2.0 - side;
        switch (side) {
          case 0: p = {-hw + 2.0 * hw * f, -hw}; break;
          case 1: p = {hw, -hw + 2.0 * hw * f}; break;
          case 2: p = {hw - 2.0 * hw * f, hw}; break;
          default: p = {-hw, hw - 2.0 * hw * f}; break;
        }
        break;
      }
    }
    pts.push_back(Point{shape.center.x() + c * p.x() - sn * p.y(),
                        shape.center.y() + sn * p.x() + c * p.y()});
  }
  return pts;
}

ContrastField rasterize(const Scene& scene, double box_halfwidth, int resolution) {
  if (resolution < 2) throw std::invalid_argument("rasterize: resolution must be >= 2");
  std::vector<Shape> shapes = scene.shapes;
  for (auto& s : shapes) {
    s.validate();
    if (s.kind == ShapeKind::Raster && s.raster_values.size() == 0)
      s.raster_values = load_csv_grid(s.raster_file);
    const double reach = s.bounding_radius() - s.center.norm();
    if (std::abs(s.center.x()) + reach > box_halfwidth + 1e-12 ||
        std::abs(s.center.y()) + reach > box_halfwidth + 1e-12)
      throw std::invalid_argument(s.describe() + " extends beyond the computational box");
  }
  if (box_halfwidth < scene.bounding_radius - 1e-12)
    throw std::invalid_argument("rasterize: box does not cover the scene bounding radius");

  ContrastField field;
  field.box_halfwidth = box_halfwidth;
  field.resolution = resolution;
  field.values = Eigen::MatrixXd::Zero(resolution, resolution);
  for (int i = 0; i < resolution; ++i) {
    for (int j = 0; j < resolution; ++j) {
      const Point p = field.cell_center(i, j);
      // Last shape in list order wins.
      for (auto it = shapes.rbegin(); it != shapes.rend(); ++it) {
        if (shape_contains(*it, p)) {
          field.values(i, j) = (it->kind == ShapeKind::Raster)
                                   ? raster_sample(*it, p)
                                   : it->contrast;
          break;
        }
      }
    }
  }
  return field;
}

PixelGrid make_pixel_grid(double roi_halfwidth, int pixels_per_axis) {
  if (!(roi_halfwidth > 0.0)) throw std::invalid_argument("pixel grid: R must be > 0");
  if (pixels_per_axis < 1) throw std::invalid_argument("pixel grid: need >= 1 pixel per axis");
  return PixelGrid{roi_halfwidth, pixels_per_axis};
}

Scene load_scene(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("scene file not readable: " + path);
  nlohmann::json j;
  in >> j;

  Scene scene;
  scene.k = j.at("k").get<double>();
  scene.bounding_radius = j.at("R").get<double>();
  for (const auto& js : j.value("shapes", nlohmann::json::array())) {
    Shape s;
    const std::string kind = js.at("kind").get<std::string>();
    if (kind == "disc") s.kind = ShapeKind::Disc;
    else if (kind == "ellipse") s.kind = ShapeKind::Ellipse;
    else if (kind == "kite") s.kind = ShapeKind::Kite;
    else if (kind == "nut") s.kind = ShapeKind::Nut;
    else if (kind == "raster") s.kind = ShapeKind::Raster;
    else throw std::invalid_argument("scene file: unknown shape kind '" + kind + "'");
    if (js.contains("center")) {
      s.center = {js["center"].at(0).get<double>(), js["center"].at(1).get<double>()};
    }
    s.radius = js.value("radius", 1.0);
    if (js.contains("semi_axes")) {
      s.semi_a = js["semi_axes"].at(0).get<double>();
      s.semi_b = js["semi_axes"].at(1).get<double>();
    }
    s.scale = js.value("scale", 1.0);
    s.rotation = js.value("rotation", 0.0);
    s.contrast = js.value("q", 0.0);
    s.raster_file = js.value("file", std::string{});
    s.raster_halfwidth = js.value("halfwidth", 1.0);
    scene.shapes.push_back(std::move(s));
  }
  scene.validate();
  return scene;
}

void save_scene(const Scene& scene, const std::string& path) {
  nlohmann::json j;
  j["k"] = scene.k;
  j["R"] = scene.bounding_radius;
  j["shapes"] = nlohmann::json::array();
  for (const auto& s : scene.shapes) {
    nlohmann::json js;
    switch (s.kind) {
      case ShapeKind::Disc: js["kind"] = "disc"; js["radius"] = s.radius; break;
      case ShapeKind::Ellipse:
        js["kind"] = "ellipse";
        js["semi_axes"] = {s.semi_a, s.semi_b};
        break;
      case ShapeKind::Kite: js["kind"] = "kite"; js["scale"] = s.scale; break;
      case ShapeKind::Nut: js["kind"] = "nut"; js["scale"] = s.scale; break;
      case ShapeKind::Raster:
        js["kind"] = "raster";
        js["file"] = s.raster_file;
        js["halfwidth"] = s.raster_halfwidth;
        break;
    }
    js["center"] = {s.center.x(), s.center.y()};
    if (s.rotation != 0.0) js["rotation"] = s.rotation;
    js["q"] = s.contrast;
    j["shapes"].push_back(std::move(js));
  }
  std::ofstream out(path);
  if (!out) throw std::invalid_argument("cannot write scene file: " + path);
  out << j.dump(2) << "\n";
}

} // namespace monoscat
