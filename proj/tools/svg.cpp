#include "svg.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>

#include "fnb/cover_homotopy.hpp"

namespace fnb::cli {

namespace {

constexpr double kPanel = 420.0;
constexpr double kMargin = 20.0;

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  return buf;
}

// Maps a planar bounding box into one panel, y up.
struct Frame {
  double x0, y0, scale, offset;
  double px(double x) const { return offset + kMargin + (x - x0) * scale; }
  double py(double y) const { return kPanel - kMargin - (y - y0) * scale; }
};

Frame frame_for(const Eigen::MatrixXd& pts, double offset, double pad_radius = 0.0) {
  Eigen::Vector2d lo = pts.rowwise().minCoeff(), hi = pts.rowwise().maxCoeff();
  lo.array() -= pad_radius;
  hi.array() += pad_radius;
  const double span = std::max({hi(0) - lo(0), hi(1) - lo(1), 1e-12});
  const double scale = (kPanel - 2 * kMargin) / span;
  const Eigen::Vector2d mid = 0.5 * (lo + hi);
  return {mid(0) - span / 2, mid(1) - span / 2, scale, offset};
}

void draw_points(std::ostringstream& os, const Eigen::MatrixXd& pts, const Frame& f, const std::vector<std::size_t>& loop) {
  if (!loop.empty()) {
    os << "<polyline fill=\"none\" stroke=\"#333\" stroke-width=\"1\" points=\"";
    for (std::size_t k = 0; k <= loop.size(); ++k) {
      const auto i = static_cast<Eigen::Index>(loop[k % loop.size()]);
      os << fmt(f.px(pts(0, i))) << ',' << fmt(f.py(pts(1, i))) << ' ';
    }
    os << "\"/>\n";
    return;
  }
  for (Eigen::Index i = 0; i < pts.cols(); ++i)
    os << "<circle cx=\"" << fmt(f.px(pts(0, i))) << "\" cy=\"" << fmt(f.py(pts(1, i))) << "\" r=\"1\" fill=\"#333\"/>\n";
}

void draw_pair(std::ostringstream& os, const Eigen::MatrixXd& pts, const Frame& f, std::pair<std::size_t, std::size_t> p) {
  const auto a = static_cast<Eigen::Index>(p.first), b = static_cast<Eigen::Index>(p.second);
  os << "<line x1=\"" << fmt(f.px(pts(0, a))) << "\" y1=\"" << fmt(f.py(pts(1, a))) << "\" x2=\"" << fmt(f.px(pts(0, b)))
     << "\" y2=\"" << fmt(f.py(pts(1, b))) << "\" stroke=\"#c00\" stroke-dasharray=\"4 3\"/>\n";
  for (auto i : {a, b})
    os << "<circle cx=\"" << fmt(f.px(pts(0, i))) << "\" cy=\"" << fmt(f.py(pts(1, i))) << "\" r=\"4\" fill=\"#c00\"/>\n";
}

}  // namespace

std::string neighbors_svg(const SampledDomain& domain, const ImageSet& images, const NeighborCertificate* extremal,
                          std::pair<std::size_t, std::size_t> pair) {
  const bool image_planar = images.dim() == 2;
  const bool domain_planar = domain.ambient_dim() == 2;
  const std::vector<std::size_t> loop = domain.intrinsic_dim() == 1 ? domain_loop(domain) : std::vector<std::size_t>{};
  std::ostringstream os;
  const int panels = (image_planar ? 1 : 0) + (domain_planar ? 1 : 0);
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fmt(kPanel * std::max(panels, 1)) << "\" height=\""
     << fmt(kPanel) << "\">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  double offset = 0.0;
  if (image_planar) {
    const auto& Y = images.matrix();
    // Witness circles far larger than the curve are half-planes in practice; skip them.
    const bool circle = extremal && extremal->kind == WitnessKind::sphere &&
                        extremal->witness.radius < 2.0 * std::max(images.diameter(), 1e-12);
    Eigen::MatrixXd box = Y;
    if (circle) {
      box.conservativeResize(2, Y.cols() + 2);
      const auto& c = extremal->witness.center;
      const double r = extremal->witness.radius;
      box.col(Y.cols()) = Eigen::Vector2d(c(0) - r, c(1) - r);
      box.col(Y.cols() + 1) = Eigen::Vector2d(c(0) + r, c(1) + r);
    }
    const Frame f = frame_for(box, offset);
    os << "<text x=\"" << fmt(offset + 8) << "\" y=\"14\" font-size=\"12\">image f(X)</text>\n";
    draw_points(os, Y, f, loop);
    if (circle) {
      const auto& c = extremal->witness.center;
      os << "<circle cx=\"" << fmt(f.px(c(0))) << "\" cy=\"" << fmt(f.py(c(1))) << "\" r=\""
         << fmt(extremal->witness.radius * f.scale) << "\" fill=\"none\" stroke=\"#06c\"/>\n";
    }
    draw_pair(os, Y, f, pair);
    offset += kPanel;
  }
  if (domain_planar) {
    const auto& X = domain.samples.matrix();
    const Frame f = frame_for(X, offset);
    os << "<text x=\"" << fmt(offset + 8) << "\" y=\"14\" font-size=\"12\">domain X</text>\n";
    draw_points(os, X, f, loop);
    draw_pair(os, X, f, pair);
  }
  os << "</svg>\n";
  return os.str();
}

}  // namespace fnb::cli
