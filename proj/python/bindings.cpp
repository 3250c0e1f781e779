#include "phtess/arrangement.hpp"
#include "phtess/io.hpp"
#include "phtess/limitshape.hpp"
#include "phtess/parallel.hpp"
#include "phtess/stats.hpp"

#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace phtess;

namespace {

py::object to_py(const io::Json& j) {
  if (j.is_object()) {
    py::dict d;
    for (const auto& [key, value] : j.items()) d[py::str(key)] = to_py(value);
    return std::move(d);
  }
  if (j.is_array()) {
    py::list l;
    for (const auto& v : j) l.append(to_py(v));
    return std::move(l);
  }
  if (j.is_boolean()) return py::bool_(j.get<bool>());
  if (j.is_number_integer()) return py::int_(j.get<long>());
  if (j.is_number()) return py::float_(j.get<double>());
  if (j.is_string()) return py::str(j.get<std::string>());
  return py::none();
}

TupleOptions tuple_options(int k, const std::string& sigma, long n, std::uint64_t seed, int budget, int workers) {
  TupleOptions opt;
  opt.k = k;
  opt.sigma = parse_size_kind(sigma);
  opt.n = n;
  opt.seed = seed;
  opt.phi_budget = budget;
  opt.workers = workers;
  return opt;
}

py::dict counters_dict(const TupleCounters& c) {
  py::dict d;
  d["drawn"] = c.drawn;
  d["accepted"] = c.accepted;
  d["negative_det"] = c.negative_det;
  d["acceptance"] = c.acceptance();
  return d;
}

std::vector<Halfspace> halfspaces_from(py::array_t<double> a, py::array_t<double> b) {
  auto A = a.unchecked<2>();
  auto B = b.unchecked<1>();
  if (A.shape(0) != B.shape(0)) throw std::invalid_argument("A and b disagree in length");
  std::vector<Halfspace> hs;
  for (py::ssize_t i = 0; i < A.shape(0); ++i) {
    Vec n(A.shape(1));
    for (py::ssize_t j = 0; j < A.shape(1); ++j) n[j] = A(i, j);
    const double len = n.norm();
    if (len <= 0) throw std::invalid_argument("zero normal");
    hs.push_back({n / len, B(i) / len});
  }
  return hs;
}

PolytopeK full_polytope(py::array_t<double> a, py::array_t<double> b) {
  const auto hs = halfspaces_from(a, b);
  if (hs.empty()) throw std::invalid_argument("no halfspaces");
  const int d = static_cast<int>(hs.front().normal.size());
  auto p = halfspace_intersection(hs, Flat::whole_space(d), 1e6);
  if (!p) throw std::invalid_argument("empty or lower-dimensional polytope");
  if (p->truncated) throw std::invalid_argument("unbounded polytope");
  return *p;
}

}  // namespace

PYBIND11_MODULE(_phtess, m) {
  m.doc() = "Poisson hyperplane tessellations: typical faces and small-face shapes";

  py::register_exception<SamplerAbort>(m, "SamplerAbort", PyExc_RuntimeError);
  py::register_exception<StatsError>(m, "StatsError", PyExc_ValueError);

  m.def("canonical_phi", [](const std::string& spec, int d) { return DirectionalModel::parse(spec, d).to_spec(); },
        py::arg("phi"), py::arg("dim"));

  m.def(
      "sample_directions",
      [](const std::string& phi, int d, long n, std::uint64_t seed) {
        const auto model = DirectionalModel::parse(phi, d);
        Rng rng(seed);
        py::array_t<double> out({n, static_cast<long>(d)});
        auto o = out.mutable_unchecked<2>();
        for (long i = 0; i < n; ++i) {
          const Vec u = sample_direction(model, rng);
          for (int j = 0; j < d; ++j) o(i, j) = u[j];
        }
        return out;
      },
      py::arg("phi"), py::arg("dim"), py::arg("n"), py::arg("seed") = 0);

  m.def(
      "sample_hyperplanes",
      [](double gamma, const std::string& phi, int d, double radius, std::uint64_t seed) {
        const ProcessConfig pc(gamma, DirectionalModel::parse(phi, d));
        const auto s = sample_in_ball(pc, radius, seed);
        const auto n = static_cast<long>(s.hyperplanes.size());
        py::array_t<double> normals({n, static_cast<long>(d)});
        py::array_t<double> offsets(n);
        auto u = normals.mutable_unchecked<2>();
        auto t = offsets.mutable_unchecked<1>();
        for (long i = 0; i < n; ++i) {
          for (int j = 0; j < d; ++j) u(i, j) = s.hyperplanes[i].normal[j];
          t(i) = s.hyperplanes[i].offset;
        }
        return py::make_tuple(normals, offsets);
      },
      "Hyperplanes meeting the ball of the given radius: (normals, offsets).", py::arg("gamma"), py::arg("phi"),
      py::arg("dim"), py::arg("radius"), py::arg("seed") = 0);

  m.def(
      "phi_functional",
      [](py::array_t<double> a, py::array_t<double> b, const std::string& phi, int budget, std::uint64_t seed) {
        const auto p = full_polytope(a, b);
        Rng rng(seed);
        const auto e = phi_functional(p, DirectionalModel::parse(phi, p.dim()), budget, rng);
        return py::make_tuple(e.value, e.std_error);
      },
      "Phi of the polytope {x : A x <= b}: (value, standard error).", py::arg("A"), py::arg("b"),
      py::arg("phi") = "isotropic", py::arg("budget") = 4096, py::arg("seed") = 0);

  m.def(
      "count_k_faces",
      [](py::array_t<double> normals, py::array_t<double> offsets, int k) {
        auto u = normals.unchecked<2>();
        auto t = offsets.unchecked<1>();
        std::vector<Hyperplane> hs;
        for (py::ssize_t i = 0; i < u.shape(0); ++i) {
          Vec n(u.shape(1));
          for (py::ssize_t j = 0; j < u.shape(1); ++j) n[j] = u(i, j);
          hs.push_back(Hyperplane::canonical(n, t(i)));
        }
        return count_k_faces_full(hs, k);
      },
      py::arg("normals"), py::arg("offsets"), py::arg("k"));

  m.def(
      "simulate",
      [](int d, int k, double gamma, const std::string& phi, double window_radius, double obs_radius, long reps,
         std::uint64_t seed, const std::string& sigma, int budget, int workers) {
        const auto model = DirectionalModel::parse(phi, d);
        const ProcessConfig pc(gamma, model);
        EnumerationOptions opt;
        opt.k = k;
        opt.obs_radius = obs_radius;
        opt.sigma = parse_size_kind(sigma);
        opt.phi_budget = budget;
        std::vector<std::vector<FaceRecord>> per_rep(reps);
        std::vector<EnumerationStats> stats(reps);
        {
          py::gil_scoped_release release;
          parallel_for(static_cast<std::size_t>(reps), workers, [&](std::size_t i) {
            const auto s = sample_in_ball(pc, window_radius, derive_seed(seed, i));
            per_rep[i] = enumerate_k_faces(s, model, opt, &stats[i], static_cast<long>(i));
          });
        }
        py::list records;
        EnumerationStats total;
        for (long i = 0; i < reps; ++i) {
          total.merge(stats[i]);
          for (const auto& r : per_rep[i]) records.append(to_py(io::face_to_json(r)));
        }
        py::dict st;
        st["cells_in_window"] = total.cells;
        st["faces_admitted"] = total.admitted;
        st["discarded_ties"] = total.discarded_ties;
        st["rejected_samples"] = total.rejected_samples;
        return py::make_tuple(records, st);
      },
      "Face records of `reps` independent windows (same streams as `phtess simulate`).", py::arg("dim"),
      py::arg("k"), py::arg("gamma") = 1.0, py::arg("phi") = "isotropic", py::arg("window_radius") = 20.0,
      py::arg("obs_radius") = 10.0, py::arg("reps") = 100, py::arg("seed") = 0, py::arg("sigma") = "diameter",
      py::arg("budget") = 4096, py::arg("workers") = 1);

  m.def(
      "sample_xi",
      [](int d, int k, const std::string& phi, long n, std::uint64_t seed, const std::string& sigma, int budget,
         int workers) {
        const auto model = DirectionalModel::parse(phi, d);
        const auto opt = tuple_options(k, sigma, n, seed, budget, workers);
        XiRun run;
        {
          py::gil_scoped_release release;
          run = sample_xi(model, opt);
        }
        py::list out;
        for (const auto& s : run.samples) out.append(to_py(io::xi_to_json(s)));
        return py::make_tuple(out, counters_dict(run.counters));
      },
      "Weighted samples of the limit shape law.", py::arg("dim"), py::arg("k"), py::arg("phi") = "isotropic",
      py::arg("n") = 10000, py::arg("seed") = 0, py::arg("sigma") = "diameter", py::arg("budget") = 4096,
      py::arg("workers") = 1);

  m.def(
      "sample_typical",
      [](int d, int k, double gamma, const std::string& phi, long n, std::uint64_t seed, const std::string& sigma,
         int budget, int workers) {
        const auto model = DirectionalModel::parse(phi, d);
        const auto opt = tuple_options(k, sigma, n, seed, budget, workers);
        DirectRun run;
        {
          py::gil_scoped_release release;
          run = sample_typical_face_direct(model, opt, gamma);
        }
        py::list out;
        for (const auto& r : run.records) out.append(to_py(io::face_to_json(r)));
        auto c = counters_dict(run.counters);
        c["zero_residual"] = run.zero_residual;
        return py::make_tuple(out, c);
      },
      "Weighted typical k-faces from the direct sampler.", py::arg("dim"), py::arg("k"), py::arg("gamma") = 1.0,
      py::arg("phi") = "isotropic", py::arg("n") = 10000, py::arg("seed") = 0, py::arg("sigma") = "diameter",
      py::arg("budget") = 4096, py::arg("workers") = 1);

  m.def(
      "simplex_of_tuple",
      [](py::array_t<double> dirs, int k) {
        auto u = dirs.unchecked<2>();
        std::vector<Vec> v;
        for (py::ssize_t i = 0; i < u.shape(0); ++i) {
          Vec x(u.shape(1));
          for (py::ssize_t j = 0; j < u.shape(1); ++j) x[j] = u(i, j);
          v.push_back(x);
        }
        const auto t = build_tuple(v, k);
        py::dict d;
        d["in_Pk"] = t.in_Pk;
        if (t.in_Pk) {
          py::list verts;
          for (const auto& x : t.simplex.vertices) verts.append(std::vector<double>(x.data(), x.data() + x.size()));
          d["vertices"] = verts;
          d["jacobian"] = t.jacobian;
          d["signed_jacobian"] = t.signed_jacobian;
        }
        return d;
      },
      "The simplex T_k(u) and |det| of a (d+1)-tuple of unit vectors (rows).", py::arg("dirs"), py::arg("k"));

  m.def(
      "weighted_ks",
      [](std::vector<double> x, std::optional<std::vector<double>> wx, std::vector<double> y,
         std::optional<std::vector<double>> wy, double min_ess) {
        const auto make = [](std::vector<double> v, std::optional<std::vector<double>> w) {
          return w ? WeightedECDF(std::move(v), std::move(*w)) : WeightedECDF(std::move(v));
        };
        return weighted_ks(make(std::move(x), std::move(wx)), make(std::move(y), std::move(wy)), min_ess);
      },
      py::arg("x"), py::arg("wx") = py::none(), py::arg("y"), py::arg("wy") = py::none(), py::arg("min_ess") = 50.0);

  m.def(
      "poisson_gof",
      [](std::vector<long> counts, double mean) { return poisson_gof(counts, mean); }, py::arg("counts"),
      py::arg("mean"));

  m.def(
      "change_of_variables_check",
      [](int d, int k, double gamma, const std::string& phi, const std::string& f, long n, std::uint64_t seed,
         int workers) {
        const auto model = DirectionalModel::parse(phi, d);
        Lemma33Result r;
        {
          py::gil_scoped_release release;
          r = lemma33_consistency(model, k, gamma, parse_test_function(f), n, seed, workers);
        }
        py::dict out;
        out["lhs"] = r.lhs;
        out["lhs_se"] = r.lhs_se;
        out["rhs"] = r.rhs;
        out["rhs_se"] = r.rhs_se;
        out["z"] = r.z;
        out["n"] = r.n;
        return out;
      },
      "Both sides of the tuple <-> (u, z, r) change of variables for a test function.", py::arg("dim"), py::arg("k"),
      py::arg("gamma") = 1.0, py::arg("phi") = "isotropic", py::arg("f") = "gauss_bump", py::arg("n") = 100000,
      py::arg("seed") = 0, py::arg("workers") = 1);
}
