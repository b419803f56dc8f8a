#include "fnb/maps.hpp"

#include <cmath>
#include <limits>

#include "fnb/rng.hpp"

namespace fnb {

std::string to_string(Family family) {
  switch (family) {
    case Family::constant: return "constant";
    case Family::affine: return "affine";
    case Family::identity_embed: return "identity_embed";
    case Family::circle_fourier: return "circle_fourier";
    case Family::sphere_harmonic: return "sphere_harmonic";
    case Family::radial_warp: return "radial_warp";
    case Family::ambient_poly: return "ambient_poly";
  }
  return "unknown";
}

Family parse_family(const std::string& name) {
  for (Family f : {Family::constant, Family::affine, Family::identity_embed, Family::circle_fourier,
                   Family::sphere_harmonic, Family::radial_warp, Family::ambient_poly})
    if (to_string(f) == name) return f;
  throw InvalidArgument("unknown map family: " + name);
}

namespace {

std::size_t monomial_count(int vars, int degree) {
  double r = 1.0;
  for (int i = 0; i < vars; ++i) r = r * (degree + i + 1) / (i + 1);
  return static_cast<std::size_t>(std::llround(r));
}

// Exponent vectors of total degree <= D in `vars` variables, in the documented order.
std::vector<std::vector<int>> monomials(int vars, int degree) {
  std::vector<std::vector<int>> out;
  std::vector<int> e(static_cast<std::size_t>(vars), 0);
  for (int total = 0; total <= degree; ++total) {
    auto fill = [&](auto&& self, int pos, int remaining) -> void {
      if (pos == vars - 1) {
        e[static_cast<std::size_t>(pos)] = remaining;
        out.push_back(e);
        return;
      }
      for (int v = remaining; v >= 0; --v) {
        e[static_cast<std::size_t>(pos)] = v;
        self(self, pos + 1, remaining - v);
      }
    };
    fill(fill, 0, total);
  }
  return out;
}

int infer_poly_degree(std::size_t per_output, int vars) {
  for (int D = 0; D <= 12; ++D) {
    const std::size_t c = monomial_count(vars, D);
    if (c == per_output) return D;
    if (c > per_output) break;
  }
  return -1;
}

double angle_of(const Eigen::Ref<const Eigen::VectorXd>& p) { return std::atan2(p(1), p(0)); }

double trig_poly(const double* coeffs, int K, double t) {
  double v = coeffs[0];
  for (int k = 1; k <= K; ++k) v += coeffs[2 * k - 1] * std::cos(k * t) + coeffs[2 * k] * std::sin(k * t);
  return v;
}

bool is_circle(const SampledDomain& d) { return d.kind == DomainKind::sphere && d.param == 1; }

}  // namespace

std::size_t family_arity(Family family, int m_out, const FamilyShape& shape) {
  const auto m = static_cast<std::size_t>(m_out);
  switch (family) {
    case Family::constant: return m;
    case Family::affine: return m * static_cast<std::size_t>(shape.in_dim) + m;
    case Family::identity_embed: return 0;
    case Family::circle_fourier: return m * static_cast<std::size_t>(2 * shape.degree + 1);
    case Family::sphere_harmonic: return m * monomial_count(3, shape.degree);
    case Family::ambient_poly: return m * monomial_count(shape.in_dim, shape.degree);
    case Family::radial_warp: return 2 * m + static_cast<std::size_t>(2 * shape.degree + 1);
  }
  return 0;
}

int family_degree(const MapSpec& map, int in_dim) {
  const std::size_t len = map.params.size();
  const auto m = static_cast<std::size_t>(map.m_out);
  switch (map.family) {
    case Family::circle_fourier:
      return (len % m == 0 && (len / m) % 2 == 1) ? static_cast<int>((len / m - 1) / 2) : -1;
    case Family::radial_warp:
      return (len > 2 * m && (len - 2 * m) % 2 == 1) ? static_cast<int>((len - 2 * m - 1) / 2) : -1;
    case Family::sphere_harmonic: return len % m == 0 ? infer_poly_degree(len / m, 3) : -1;
    case Family::ambient_poly: return len % m == 0 ? infer_poly_degree(len / m, in_dim) : -1;
    default: return 0;
  }
}

bool family_supports(Family family, const SampledDomain& domain) {
  switch (family) {
    case Family::circle_fourier:
    case Family::radial_warp: return is_circle(domain);
    case Family::sphere_harmonic: return domain.kind == DomainKind::sphere && domain.param == 2;
    default: return true;
  }
}

ImageSet evaluate(const MapSpec& map, const SampledDomain& domain) {
  if (map.m_out < 1) throw InvalidArgument("evaluate: m_out must be >= 1");
  if (!family_supports(map.family, domain))
    throw InvalidArgument("evaluate: family " + to_string(map.family) + " is not defined on " +
                          to_string(domain.kind) + "(" + std::to_string(domain.param) + ")");
  const auto in_dim = static_cast<int>(domain.ambient_dim());
  const int degree = family_degree(map, in_dim);
  if (degree < 0 || map.params.size() != family_arity(map.family, map.m_out, {in_dim, degree}))
    throw InvalidArgument("evaluate: parameter count does not match the arity of " + to_string(map.family));
  if (map.family == Family::identity_embed && map.m_out < in_dim)
    throw InvalidArgument("evaluate: identity_embed needs m_out >= ambient dimension");

  const Eigen::Index m = map.m_out;
  const std::size_t N = domain.size();
  ImageSet out(m, N);
  const double* p = map.params.data();

  switch (map.family) {
    case Family::constant: {
      const Eigen::Map<const Eigen::VectorXd> c(p, m);
      for (std::size_t i = 0; i < N; ++i) out[i] = c;
      break;
    }
    case Family::affine: {
      const Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> A(p, m, in_dim);
      const Eigen::Map<const Eigen::VectorXd> offset(p + m * in_dim, m);
      for (std::size_t i = 0; i < N; ++i) out[i] = A * domain.samples[i] + offset;
      break;
    }
    case Family::identity_embed: {
      for (std::size_t i = 0; i < N; ++i) {
        out[i].setZero();
        out[i].head(in_dim) = domain.samples[i];
      }
      break;
    }
    case Family::circle_fourier: {
      const int stride = 2 * degree + 1;
      for (std::size_t i = 0; i < N; ++i) {
        const double t = angle_of(domain.samples[i]);
        for (Eigen::Index r = 0; r < m; ++r) out[i](r) = trig_poly(p + r * stride, degree, t);
      }
      break;
    }
    case Family::radial_warp: {
      const Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, 2, Eigen::RowMajor>> A(p, m, 2);
      for (std::size_t i = 0; i < N; ++i) {
        const double t = angle_of(domain.samples[i]);
        out[i] = std::exp(trig_poly(p + 2 * m, degree, t)) * (A * domain.samples[i]);
      }
      break;
    }
    case Family::sphere_harmonic:
    case Family::ambient_poly: {
      const auto mons = monomials(in_dim, degree);
      const auto count = static_cast<Eigen::Index>(mons.size());
      const Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> C(p, m, count);
      Eigen::VectorXd basis(count);
      for (std::size_t i = 0; i < N; ++i) {
        const auto x = domain.samples[i];
        for (Eigen::Index k = 0; k < count; ++k) {
          double v = 1.0;
          for (int c = 0; c < in_dim; ++c)
            for (int e = 0; e < mons[static_cast<std::size_t>(k)][static_cast<std::size_t>(c)]; ++e) v *= x(c);
          basis(k) = v;
        }
        out[i] = C * basis;
      }
      break;
    }
  }
  return out;
}

MapSpec random_map(Family family, int m_out, std::uint64_t seed, double scale, const FamilyShape& shape) {
  if (m_out < 1) throw InvalidArgument("random_map: m_out must be >= 1");
  MapSpec spec{family, m_out, {}};
  Rng rng(seed);
  spec.params.resize(family_arity(family, m_out, shape));
  for (double& v : spec.params) v = rng.uniform(-scale, scale);
  return spec;
}

MapSpec circle_fourier_identity(int K, int m_out) {
  if (K < 1 || m_out < 2) throw InvalidArgument("circle_fourier_identity: need K >= 1 and m_out >= 2");
  MapSpec spec{Family::circle_fourier, m_out, std::vector<double>(static_cast<std::size_t>(m_out * (2 * K + 1)), 0.0)};
  spec.params[1] = 1.0;                                        // x = cos t
  spec.params[static_cast<std::size_t>(2 * K + 1) + 2] = 1.0;  // y = sin t
  return spec;
}

double modulus_of_continuity(const SampledDomain& domain, const ImageSet& images) {
  const auto& X = domain.samples.matrix();
  double best = 0.0;
  for (Eigen::Index i = 0; i < X.cols(); ++i) {
    Eigen::Index nn = -1;
    double d2 = std::numeric_limits<double>::infinity();
    for (Eigen::Index j = 0; j < X.cols(); ++j) {
      if (j == i) continue;
      const double s = (X.col(i) - X.col(j)).squaredNorm();
      if (s < d2 && s > 0.0) {
        d2 = s;
        nn = j;
      }
    }
    if (nn < 0) continue;
    const double ratio = (images[static_cast<std::size_t>(i)] - images[static_cast<std::size_t>(nn)]).norm() / std::sqrt(d2);
    best = std::max(best, ratio);
  }
  return best;
}

}  // namespace fnb
