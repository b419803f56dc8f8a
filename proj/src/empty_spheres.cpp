#include "fnb/empty_spheres.hpp"

#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>
#include <unordered_set>

#include "fnb/parallel.hpp"

namespace fnb {
namespace {

// Tight constraints of a cell vertex: ids >= 0 are bisectors with that point,
// ids < 0 are faces of the bounding box. Unsorted; a vertex through the common
// center of a cocircular set can collect thousands of them.
using Ids = std::vector<int>;

struct KeyHash {
  std::size_t operator()(const std::vector<std::size_t>& v) const noexcept {
    std::size_t h = v.size();
    for (std::size_t x : v) h ^= x + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    return h;
  }
};

std::size_t shared_count(const Ids& a, const Ids& b, std::size_t enough) {
  std::size_t n = 0;
  if (a.size() * b.size() <= 256) {
    for (int x : a)
      for (int y : b)
        if (x == y && ++n >= enough) return n;
    return n;
  }
  Ids sa = a, sb = b;
  std::sort(sa.begin(), sa.end());
  std::sort(sb.begin(), sb.end());
  for (auto i = sa.begin(), j = sb.begin(); i != sa.end() && j != sb.end();) {
    if (*i < *j) ++i;
    else if (*j < *i) ++j;
    else {
      if (++n >= enough) return n;
      ++i, ++j;
    }
  }
  return n;
}

Ids intersection(const Ids& a, const Ids& b) {
  Ids out;
  if (a.size() * b.size() <= 256) {
    for (int x : a)
      if (std::find(b.begin(), b.end(), x) != b.end()) out.push_back(x);
    return out;
  }
  Ids sa = a, sb = b;
  std::sort(sa.begin(), sa.end());
  std::sort(sb.begin(), sb.end());
  std::set_intersection(sa.begin(), sa.end(), sb.begin(), sb.end(), std::back_inserter(out));
  return out;
}

template <int K>
using Vec = Eigen::Matrix<double, K, 1>;

template <int K>
struct Vertex {
  Vec<K> x;
  Ids tight;
};

struct Candidate {
  Eigen::VectorXd center;  // local coordinates
  std::vector<std::size_t> key;
};

// Clipped Voronoi cell of point a in R^K.
template <int K>
class Cell {
 public:
  Cell(const Vec<K>& a, double half_width, double tol) : a_(a), tol_(tol) {
    for (int corner = 0; corner < (1 << K); ++corner) {
      Vertex<K> v;
      v.x = a;
      for (int d = 0; d < K; ++d) {
        const bool plus = (corner >> d) & 1;
        v.x(d) += plus ? half_width : -half_width;
        v.tight.push_back(-(2 * d + (plus ? 1 : 2)));
      }
      verts_.push_back(std::move(v));
    }
    update_radius();
  }

  double radius() const { return r_max_; }
  const std::vector<Vertex<K>>& vertices() const { return verts_; }

  // Intersects the cell with {x : n.x <= off}.
  void cut(int id, const Vec<K>& n, double off) {
    const std::size_t V = verts_.size();
    std::vector<double> s(V);
    bool any_out = false;
    for (std::size_t i = 0; i < V; ++i) {
      s[i] = n.dot(verts_[i].x) - off;
      any_out = any_out || s[i] > tol_;
    }
    if (!any_out) {
      for (std::size_t i = 0; i < V; ++i)
        if (s[i] >= -tol_) verts_[i].tight.push_back(id);
      return;
    }
    std::vector<Vertex<K>> next;
    next.reserve(V + 4);
    for (std::size_t i = 0; i < V; ++i) {
      if (s[i] > tol_) continue;
      next.push_back(verts_[i]);
      if (s[i] >= -tol_) next.back().tight.push_back(id);
    }
    const std::size_t kept = next.size();
    for (std::size_t i = 0; i < V; ++i) {
      if (s[i] >= -tol_) continue;
      for (std::size_t j = 0; j < V; ++j) {
        if (s[j] <= tol_) continue;
        // In a simple polytope an edge is a pair sharing K-1 facets.
        if (shared_count(verts_[i].tight, verts_[j].tight, K - 1) < K - 1) continue;
        const double t = s[i] / (s[i] - s[j]);
        Vertex<K> v{verts_[i].x + t * (verts_[j].x - verts_[i].x), intersection(verts_[i].tight, verts_[j].tight)};
        v.tight.push_back(id);
        merge_into(next, kept, std::move(v));
      }
    }
    verts_ = std::move(next);
    update_radius();
  }

 private:
  void merge_into(std::vector<Vertex<K>>& list, std::size_t from, Vertex<K>&& v) const {
    for (std::size_t k = from; k < list.size(); ++k) {
      if ((list[k].x - v.x).norm() > tol_) continue;
      for (int id : v.tight)
        if (std::find(list[k].tight.begin(), list[k].tight.end(), id) == list[k].tight.end())
          list[k].tight.push_back(id);
      return;
    }
    list.push_back(std::move(v));
  }

  void update_radius() {
    r_max_ = 0.0;
    for (const auto& v : verts_) r_max_ = std::max(r_max_, (v.x - a_).norm());
  }

  Vec<K> a_;
  double tol_;
  double r_max_ = 0.0;
  std::vector<Vertex<K>> verts_;
};

template <int K>
std::vector<Candidate> cell_candidates(const std::vector<Vec<K>>& Y, std::size_t a, double half_width, double tol,
                                       double eps_coincide) {
  const std::size_t N = Y.size();
  std::vector<std::pair<double, std::size_t>> order;
  order.reserve(N - 1);
  for (std::size_t j = 0; j < N; ++j)
    if (j != a) order.emplace_back((Y[j] - Y[a]).squaredNorm(), j);

  Cell<K> cell(Y[a], half_width, tol);
  std::vector<std::size_t> coincident;
  // Most cells are settled by their nearest few dozen points; sort the rest lazily.
  const std::size_t head = std::min<std::size_t>(order.size(), 48);
  std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(head), order.end());
  bool sorted_all = head == order.size();
  for (std::size_t k = 0; k < order.size(); ++k) {
    if (k == head && !sorted_all) {
      std::sort(order.begin() + static_cast<std::ptrdiff_t>(head), order.end());
      sorted_all = true;
    }
    const auto [d2, j] = order[k];
    const double d = std::sqrt(d2);
    if (d <= eps_coincide) {
      coincident.push_back(j);
      continue;
    }
    if (d / 2 > cell.radius() + tol) break;
    const Vec<K> n = (Y[j] - Y[a]) / d;
    cell.cut(static_cast<int>(j), n, n.dot(0.5 * (Y[a] + Y[j])));
  }

  std::vector<Candidate> out;
  auto base_key = [&] {
    std::vector<std::size_t> key{a};
    key.insert(key.end(), coincident.begin(), coincident.end());
    return key;
  };
  if (!coincident.empty()) {
    auto key = base_key();
    std::sort(key.begin(), key.end());
    out.push_back({Eigen::VectorXd(Y[a]), std::move(key)});
  }
  for (const auto& v : cell.vertices()) {
    auto key = base_key();
    for (int id : v.tight)
      if (id >= 0) key.push_back(static_cast<std::size_t>(id));
    if (key.size() < 2) continue;
    std::sort(key.begin(), key.end());
    out.push_back({Eigen::VectorXd(v.x), std::move(key)});
  }
  return out;
}

template <int K>
std::vector<Candidate> all_candidates(const Eigen::MatrixXd& local, double half_width, double tol,
                                      const EmptySphereOptions& o) {
  const auto N = static_cast<std::size_t>(local.cols());
  std::vector<Vec<K>> Y(N);
  for (std::size_t i = 0; i < N; ++i) Y[i] = local.col(static_cast<Eigen::Index>(i));
  std::vector<std::vector<Candidate>> per_cell(N);
  parallel_for(N, o.threads,
               [&](std::size_t a) { per_cell[a] = cell_candidates<K>(Y, a, half_width, tol, o.eps_coincide); });
  std::vector<Candidate> merged;
  std::unordered_set<std::vector<std::size_t>, KeyHash> seen;
  for (auto& cands : per_cell)
    for (auto& c : cands)
      if (seen.insert(c.key).second) merged.push_back(std::move(c));
  return merged;
}

// Points on a line: consecutive distinct values span an empty interval.
std::vector<Candidate> line_candidates(const Eigen::MatrixXd& local, double eps_coincide) {
  const auto N = static_cast<std::size_t>(local.cols());
  std::vector<std::size_t> order(N);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t i, std::size_t j) { return local(0, static_cast<Eigen::Index>(i)) < local(0, static_cast<Eigen::Index>(j)); });
  auto t = [&](std::size_t i) { return local(0, static_cast<Eigen::Index>(i)); };
  std::vector<std::vector<std::size_t>> groups;
  for (std::size_t k = 0; k < N; ++k) {
    if (k == 0 || t(order[k]) - t(order[k - 1]) > eps_coincide) groups.emplace_back();
    groups.back().push_back(order[k]);
  }
  std::vector<Candidate> out;
  for (std::size_t g = 0; g < groups.size(); ++g) {
    if (groups[g].size() > 1) {
      auto key = groups[g];
      std::sort(key.begin(), key.end());
      out.push_back({Eigen::VectorXd::Constant(1, t(groups[g].front())), std::move(key)});
    }
    if (g + 1 < groups.size()) {
      std::vector<std::size_t> key = groups[g];
      key.insert(key.end(), groups[g + 1].begin(), groups[g + 1].end());
      std::sort(key.begin(), key.end());
      const double mid = 0.5 * (t(groups[g].back()) + t(groups[g + 1].front()));
      out.push_back({Eigen::VectorXd::Constant(1, mid), std::move(key)});
    }
  }
  return out;
}

}  // namespace

EmptySphereComplex empty_spheres(const PointSet& points, const EmptySphereOptions& o) {
  EmptySphereComplex result;
  const std::size_t N = points.size();
  if (N < 2) {
    result.complete = true;
    return result;
  }
  if (!points.all_finite()) throw InvalidArgument("empty_spheres: non-finite point");
  const Eigen::MatrixXd& X = points.matrix();
  const Eigen::VectorXd centroid = points.centroid();
  const Eigen::MatrixXd Xc = X.colwise() - centroid;
  const double spread = Xc.colwise().norm().maxCoeff();

  if (2 * spread <= o.eps_coincide) {
    EmptySphere s{X.col(0), 0.0, {}, std::numeric_limits<double>::infinity()};
    s.members.resize(N);
    std::iota(s.members.begin(), s.members.end(), 0);
    result.spheres.push_back(std::move(s));
    result.complete = true;
    return result;
  }

  // Smallest affine dimension whose projection moves no point by more than a
  // fraction of tau_on; verification below happens in the original coordinates.
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(Xc, Eigen::ComputeThinU);
  const Eigen::MatrixXd& U = svd.matrixU();
  int k = 1;
  for (; k < U.cols(); ++k) {
    const Eigen::MatrixXd Uk = U.leftCols(k);
    const double dev = (Xc - Uk * (Uk.transpose() * Xc)).colwise().norm().maxCoeff();
    if (dev <= 0.1 * o.tau_on) break;
  }
  k = std::min<int>(k, static_cast<int>(U.cols()));
  result.affine_dim = k;
  if (k > 3) return result;

  const Eigen::MatrixXd Uk = U.leftCols(k);
  const Eigen::MatrixXd local = Uk.transpose() * Xc;
  const double half_width = o.box_factor * std::max(2 * spread, o.eps_coincide);
  const double tol = 0.1 * o.tau_on;

  std::vector<Candidate> cands;
  if (k == 1) cands = line_candidates(local, o.eps_coincide);
  else if (k == 2) cands = all_candidates<2>(local, half_width, tol, o);
  else cands = all_candidates<3>(local, half_width, tol, o);

  // Verify each candidate against every point.
  std::vector<std::optional<EmptySphere>> verified(cands.size());
  parallel_for(cands.size(), o.threads, [&](std::size_t c) {
    const Eigen::VectorXd center = centroid + Uk * cands[c].center;
    double r = std::numeric_limits<double>::infinity();
    for (std::size_t j : cands[c].key) r = std::min(r, (X.col(static_cast<Eigen::Index>(j)) - center).norm());
    EmptySphere s{center, r, {}, std::numeric_limits<double>::infinity()};
    for (std::size_t j = 0; j < N; ++j) {
      const double d = (X.col(static_cast<Eigen::Index>(j)) - center).norm() - r;
      if (d < -o.eps_inside) return;
      if (d <= o.tau_on) s.members.push_back(j);
      else s.slack = std::min(s.slack, d);
    }
    if (s.members.size() >= 2) verified[c] = std::move(s);
  });

  std::unordered_set<std::vector<std::size_t>, KeyHash> seen;
  for (auto& v : verified)
    if (v && seen.insert(v->members).second) result.spheres.push_back(std::move(*v));
  result.complete = true;
  return result;
}

}  // namespace fnb
