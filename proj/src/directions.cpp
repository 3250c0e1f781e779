#include "phtess/directions.hpp"

#include "json.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <functional>
#include <numeric>
#include <regex>
#include <sstream>
#include <stdexcept>

namespace phtess {
namespace {

using json = nlohmann::json;

Vec read_vector(const json& j, int d, const char* what) {
  if (!j.is_array() || static_cast<int>(j.size()) != d)
    throw std::invalid_argument(std::string("model spec: ") + what + " must be an array of " + std::to_string(d) +
                                " numbers");
  Vec v(d);
  for (int i = 0; i < d; ++i) v[i] = j[i].get<double>();
  const double n = v.norm();
  if (!(n > 0.0) || !std::isfinite(n)) throw std::invalid_argument(std::string("model spec: zero ") + what);
  return v / n;
}

double read_weight(const json& j) {
  const double w = j.contains("w") ? j["w"].get<double>() : 1.0;
  if (!(w > 0.0) || !std::isfinite(w)) throw std::invalid_argument("model spec: weights must be positive");
  return w;
}

template <class T>
void normalize_weights(std::vector<T>& items) {
  double sum = 0.0;
  for (const auto& it : items) sum += it.weight;
  for (auto& it : items) it.weight /= sum;
}

template <class T>
std::size_t pick(const std::vector<T>& items, Rng& rng) {
  double u = rng.uniform();
  for (std::size_t i = 0; i + 1 < items.size(); ++i) {
    if (u < items[i].weight) return i;
    u -= items[i].weight;
  }
  return items.size() - 1;
}

Vec random_unit(int d, Rng& rng) {
  Vec v(d);
  double n = 0.0;
  do {
    for (int i = 0; i < d; ++i) v[i] = rng.normal();
    n = v.norm();
  } while (n < 1e-12);
  return v / n;
}

// Wood (1994) rejection sampler for von Mises-Fisher on S^{d-1}.
Vec sample_vmf(const Vec& mu, double kappa, Rng& rng) {
  const int d = static_cast<int>(mu.size());
  if (kappa <= 0.0) return random_unit(d, rng);
  const double m = d - 1.0;
  const double b = m / (2.0 * kappa + std::sqrt(4.0 * kappa * kappa + m * m));
  const double x0 = (1.0 - b) / (1.0 + b);
  const double c = kappa * x0 + m * std::log(1.0 - x0 * x0);
  double w = 0.0;
  while (true) {
    const double g1 = rng.gamma(0.5 * m), g2 = rng.gamma(0.5 * m);
    const double z = g1 / (g1 + g2);
    w = (1.0 - (1.0 + b) * z) / (1.0 - (1.0 - b) * z);
    const double u = rng.uniform();
    if (kappa * w + m * std::log(1.0 - x0 * w) - c >= std::log(u)) break;
  }
  Vec v(d);
  double n = 0.0;
  do {
    for (int i = 0; i < d; ++i) v[i] = rng.normal();
    v -= v.dot(mu) * mu;
    n = v.norm();
  } while (n < 1e-12);
  return w * mu + std::sqrt(std::max(0.0, 1.0 - w * w)) * (v / n);
}

// Unit vector whose angle in [0, pi) is Cantor distributed.
Vec sample_cantor(Rng& rng) {
  double x = 0.0, scale = 1.0;
  for (int i = 0; i < 32; ++i) {
    scale /= 3.0;
    if (rng.coin()) x += 2.0 * scale;
  }
  const double theta = M_PI * x;
  Vec v(2);
  v << std::cos(theta), std::sin(theta);
  return v;
}

// Orthonormal basis of axis^perp (d x (d-1)).
Mat axis_complement(const Vec& axis) {
  Mat a(axis.size(), 1);
  a.col(0) = axis;
  return orthogonal_complement(a, static_cast<int>(axis.size()));
}

double support(const std::vector<Vec>& vertices, const Vec& u) {
  double h = -std::numeric_limits<double>::infinity();
  for (const auto& v : vertices) h = std::max(h, v.dot(u));
  return h;
}

struct UnitCircle {
  std::array<double, kQuadratureNodes> c, s;
  UnitCircle() {
    for (int i = 0; i < kQuadratureNodes; ++i) {
      const double t = 2.0 * M_PI * i / kQuadratureNodes;
      c[i] = std::cos(t);
      s[i] = std::sin(t);
    }
  }
};

const UnitCircle& circle() {
  static const UnitCircle table;
  return table;
}

// Periodic trapezoid rule over the circle parametrisation u(theta); the error
// estimate is the difference to the rule on every other node.
template <class Fn>
HittingEstimate circle_quadrature(Fn&& g) {
  const auto& t = circle();
  double full = 0.0, half = 0.0;
  for (int i = 0; i < kQuadratureNodes; ++i) {
    const double v = g(t.c[i], t.s[i]);
    full += v;
    if (i % 2 == 0) half += v;
  }
  full /= kQuadratureNodes;
  half /= kQuadratureNodes / 2;
  HittingEstimate e;
  e.value = full;
  e.std_error = std::max(std::abs(full - half), 1e-15 * std::abs(full));
  e.method = EstimateMethod::quadrature;
  e.draws = kQuadratureNodes;
  return e;
}

HittingEstimate monte_carlo(const DirectionalModel& model, int budget, Rng& rng,
                            const std::function<double(const Vec&)>& even_integrand) {
  if (budget < 100) throw std::invalid_argument("phi budget must be >= 100 for Monte Carlo estimation");
  double mean = 0.0, m2 = 0.0;
  for (int i = 0; i < budget; ++i) {
    const double x = even_integrand(sample_direction(model, rng));
    const double delta = x - mean;
    mean += delta / (i + 1);
    m2 += delta * (x - mean);
  }
  HittingEstimate e;
  e.value = mean;
  e.std_error = std::sqrt(m2 / (budget - 1) / budget);
  e.method = EstimateMethod::monte_carlo;
  e.draws = budget;
  return e;
}

// kappa_{d-1} / (d kappa_d): Phi(K) = this * V_1(K) for the isotropic law.
double isotropic_v1_factor(int d) { return unit_ball_volume(d - 1) / (d * unit_ball_volume(d)); }

HittingEstimate closed(double v) {
  HittingEstimate e;
  e.value = v;
  return e;
}

}  // namespace

DirectionalModel DirectionalModel::isotropic(int d) {
  DirectionalModel m;
  m.kind = ModelKind::isotropic;
  m.dim = d;
  return m;
}

DirectionalModel DirectionalModel::parse(const std::string& spec_in, int d) {
  if (d < 2 || d > 4) throw std::invalid_argument("model spec: dimension must be in [2, 4]");
  std::string spec = spec_in;
  spec.erase(std::remove_if(spec.begin(), spec.end(), [](unsigned char ch) { return std::isspace(ch); }),
             spec.end());
  const auto colon = spec.find(':');
  const std::string head = spec.substr(0, colon);
  const std::string body = colon == std::string::npos ? "" : spec.substr(colon + 1);

  DirectionalModel m;
  m.dim = d;
  if (head == "isotropic" || head == "cantor") {
    if (!body.empty()) throw std::invalid_argument("model spec: '" + head + "' takes no parameters");
    m.kind = head == "isotropic" ? ModelKind::isotropic : ModelKind::cantor;
    if (m.kind == ModelKind::cantor && d != 2) throw std::invalid_argument("model spec: cantor requires d = 2");
    return m;
  }
  if (body.empty()) throw std::invalid_argument("model spec: unknown or incomplete model '" + spec_in + "'");

  // the grammar uses bare keys; quote them for the JSON parser
  static const std::regex bare_key(R"(([\{,])([A-Za-z_][A-Za-z0-9_]*):)");
  const std::string quoted = std::regex_replace(body, bare_key, "$1\"$2\":");
  json j;
  try {
    j = json::parse(quoted);
  } catch (const json::exception& e) {
    throw std::invalid_argument("model spec: cannot parse parameters of '" + head + "': " + e.what());
  }

  try {
    if (head == "vmf") {
      m.kind = ModelKind::vmf_mixture;
      if (!j.is_array() || j.empty()) throw std::invalid_argument("model spec: vmf needs a nonempty list");
      for (const auto& c : j) {
        VmfComponent comp{read_vector(c.at("mu"), d, "mu"), c.at("kappa").get<double>(), read_weight(c)};
        if (!(comp.kappa >= 0.0) || !std::isfinite(comp.kappa))
          throw std::invalid_argument("model spec: kappa must be >= 0");
        m.vmf.push_back(comp);
      }
      normalize_weights(m.vmf);
    } else if (head == "atoms") {
      m.kind = ModelKind::atoms;
      if (!j.is_array() || j.empty()) throw std::invalid_argument("model spec: atoms needs a nonempty list");
      for (const auto& a : j) m.atoms.push_back({read_vector(a.at("u"), d, "u"), read_weight(a)});
      normalize_weights(m.atoms);
    } else if (head == "smallcircle") {
      m.kind = ModelKind::small_circle;
      if (d < 3)
        throw std::invalid_argument("model spec: smallcircle needs d >= 3 (in the plane it is a pair of atoms)");
      m.axis = read_vector(j.at("axis"), d, "axis");
      m.height = j.at("c").get<double>();
      if (!(std::abs(m.height) < 1.0) || m.height == 0.0)
        throw std::invalid_argument("model spec: smallcircle height c must lie in (-1, 1) \\ {0}");
    } else {
      throw std::invalid_argument("model spec: unknown model '" + head + "'");
    }
  } catch (const json::exception& e) {
    throw std::invalid_argument("model spec: " + std::string(e.what()));
  }
  return m;
}

std::string DirectionalModel::to_spec() const {
  auto vec = [](const Vec& v) {
    std::ostringstream os;
    os.precision(17);
    os << '[';
    for (int i = 0; i < v.size(); ++i) os << (i ? "," : "") << v[i];
    os << ']';
    return os.str();
  };
  std::ostringstream os;
  os.precision(17);
  switch (kind) {
    case ModelKind::isotropic:
      return "isotropic";
    case ModelKind::cantor:
      return "cantor";
    case ModelKind::vmf_mixture:
      os << "vmf:[";
      for (std::size_t i = 0; i < vmf.size(); ++i)
        os << (i ? "," : "") << "{mu:" << vec(vmf[i].mean) << ",kappa:" << vmf[i].kappa << ",w:" << vmf[i].weight
           << '}';
      os << ']';
      return os.str();
    case ModelKind::atoms:
      os << "atoms:[";
      for (std::size_t i = 0; i < atoms.size(); ++i)
        os << (i ? "," : "") << "{u:" << vec(atoms[i].u) << ",w:" << atoms[i].weight << '}';
      os << ']';
      return os.str();
    case ModelKind::small_circle:
      os << "smallcircle:{axis:" << vec(axis) << ",c:" << height << '}';
      return os.str();
  }
  return {};
}

Vec sample_direction(const DirectionalModel& model, Rng& rng) {
  Vec u;
  switch (model.kind) {
    case ModelKind::isotropic:
      u = random_unit(model.dim, rng);
      break;
    case ModelKind::vmf_mixture: {
      const auto& c = model.vmf[pick(model.vmf, rng)];
      u = sample_vmf(c.mean, c.kappa, rng);
      break;
    }
    case ModelKind::atoms:
      u = model.atoms[pick(model.atoms, rng)].u;
      break;
    case ModelKind::small_circle: {
      const Mat perp = axis_complement(model.axis);
      const Vec w = random_unit(model.dim - 1, rng);
      u = model.height * model.axis + std::sqrt(1.0 - model.height * model.height) * (perp * w);
      break;
    }
    case ModelKind::cantor:
      u = sample_cantor(rng);
      break;
  }
  if (rng.coin()) u = -u;
  return u;
}

HittingEstimate phi_functional(const PolytopeK& k, const DirectionalModel& model, int budget, Rng& rng) {
  if (k.empty()) throw GeometryError("degenerate input: empty polytope");
  const auto& verts = k.vertices;
  auto even_h = [&](const Vec& u) { return 0.5 * (support(verts, u) + support(verts, -u)); };
  const int d = model.dim;
  switch (model.kind) {
    case ModelKind::atoms: {
      double v = 0.0;
      for (const auto& a : model.atoms) v += a.weight * even_h(a.u);
      return closed(v);
    }
    case ModelKind::isotropic:
      if (d == 2) {
        Vec u(2);
        return circle_quadrature([&](double c, double s) {
          u << c, s;
          return support(verts, u);
        });
      }
      if (k.dim() <= 3) return closed(isotropic_v1_factor(d) * intrinsic_volume_1(k));
      break;
    case ModelKind::small_circle:
      if (d == 3) {
        const Mat perp = axis_complement(model.axis);
        const double r = std::sqrt(1.0 - model.height * model.height);
        return circle_quadrature([&](double c, double s) {
          const Vec u = model.height * model.axis + r * (c * perp.col(0) + s * perp.col(1));
          return even_h(u);
        });
      }
      break;
    default:
      break;
  }
  return monte_carlo(model, budget, rng, even_h);
}

HittingEstimate phi_of_flat_ball(const Flat& frame, const DirectionalModel& model, int budget, Rng& rng) {
  const int d = model.dim;
  const int k = frame.dim();
  if (k < 1) throw std::invalid_argument("flat ball needs dimension >= 1");
  if (k == d) return closed(1.0);
  const Mat& b = frame.basis;
  auto proj = [&](const Vec& u) { return (b.transpose() * u).norm(); };
  switch (model.kind) {
    case ModelKind::atoms: {
      double v = 0.0;
      for (const auto& a : model.atoms) v += a.weight * proj(a.u);
      return closed(v);
    }
    case ModelKind::isotropic:
      if (d == 2) {
        Vec u(2);
        return circle_quadrature([&](double c, double s) {
          u << c, s;
          return proj(u);
        });
      }
      // E ||P_k u|| for u uniform on S^{d-1}: ||P_k u||^2 ~ Beta(k/2, (d-k)/2)
      return closed(std::tgamma(0.5 * d) * std::tgamma(0.5 * (k + 1)) /
                    (std::tgamma(0.5 * k) * std::tgamma(0.5 * (d + 1))));
    case ModelKind::small_circle:
      if (d == 3) {
        const Mat perp = axis_complement(model.axis);
        const double r = std::sqrt(1.0 - model.height * model.height);
        return circle_quadrature([&](double c, double s) {
          return proj(Vec(model.height * model.axis + r * (c * perp.col(0) + s * perp.col(1))));
        });
      }
      break;
    default:
      break;
  }
  return monte_carlo(model, budget, rng, proj);
}

}  // namespace phtess
