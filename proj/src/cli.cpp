#include "phtess/cli.hpp"

#include "phtess/arrangement.hpp"
#include "phtess/io.hpp"
#include "phtess/limitshape.hpp"
#include "phtess/parallel.hpp"
#include "phtess/stats.hpp"

#include "CLI11.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#ifndef PHTESS_VERSION
#define PHTESS_VERSION "unknown"
#endif

namespace phtess::cli {

namespace fs = std::filesystem;
using io::Json;

namespace {

constexpr double kMaxDiscardRate = 1e-4;
constexpr long kFewFaces = 100;

class Manifest {
 public:
  Manifest(Command cmd, const RunConfig& cfg) : start_(std::chrono::steady_clock::now()) {
    doc_["command"] = command_name(cmd);
    doc_["version"] = PHTESS_VERSION;
    doc_["config"] = config_to_json(cfg, cmd);
    doc_["workers"] = cfg.workers;
    doc_["counters"] = Json::object();
    doc_["inputs"] = Json::array();
    doc_["outputs"] = Json::array();
    doc_["status"] = "ok";
  }

  Json& counters() { return doc_["counters"]; }
  void set_status(const std::string& s) { doc_["status"] = s; }

  void add_input(const fs::path& p) {
    Json e;
    e["file"] = p.string();
    e["sha256"] = sha256_file(p);
    doc_["inputs"].push_back(e);
  }

  void add_output(const fs::path& p, long records) {
    Json e;
    e["file"] = p.filename().string();
    e["sha256"] = sha256_file(p);
    e["bytes"] = static_cast<long>(fs::file_size(p));
    e["records"] = records;
    doc_["outputs"].push_back(e);
  }

  void write(const fs::path& path) {
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    doc_["wall_time_s"] = secs;
    std::ofstream os(path, std::ios::binary);
    os << doc_.dump(2) << '\n';
    if (!os) throw std::runtime_error("cannot write " + path.string());
  }

 private:
  std::chrono::steady_clock::time_point start_;
  Json doc_;
};

fs::path prepare_out(const RunConfig& cfg) {
  const fs::path dir(cfg.out);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw std::runtime_error("cannot create output directory " + dir.string() + ": " + ec.message());
  return dir;
}

template <class Fn>
void write_file(const fs::path& path, Fn&& fn) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot write " + path.string());
  fn(os);
  os.flush();
  if (!os) throw std::runtime_error("write failed: " + path.string());
}

void warn_if_not_subspace_free(const DirectionalModel& model, std::ostream& err) {
  if (!model.subspace_free())
    err << "warning: directional model '" << model.to_spec()
        << "' is not subspace-free; general position fails with positive probability\n";
}

Json counters_json(const TupleCounters& c) {
  Json j;
  j["tuples_drawn"] = c.drawn;
  j["tuples_accepted"] = c.accepted;
  j["acceptance_rate"] = c.acceptance();
  j["negative_det"] = c.negative_det;
  return j;
}

TupleOptions tuple_options(const RunConfig& cfg) {
  TupleOptions opt;
  opt.k = cfg.k;
  opt.sigma = cfg.sigma;
  opt.n = cfg.samples;
  opt.seed = cfg.seed;
  opt.phi_budget = cfg.phi_budget;
  opt.workers = cfg.workers;
  return opt;
}

int cmd_simulate(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  Manifest m(Command::simulate, cfg);
  const auto model = DirectionalModel::parse(cfg.phi, cfg.dim);
  warn_if_not_subspace_free(model, err);
  const ProcessConfig pc(cfg.gamma, model);
  EnumerationOptions opt;
  opt.k = cfg.k;
  opt.obs_radius = cfg.obs_radius;
  opt.sigma = cfg.sigma;
  opt.phi_budget = cfg.phi_budget;

  const auto reps = static_cast<std::size_t>(cfg.reps);
  std::vector<std::vector<FaceRecord>> per_rep(reps);
  std::vector<EnumerationStats> per_stats(reps);
  std::vector<long> hyperplanes(reps);
  parallel_for(reps, cfg.workers, [&](std::size_t i) {
    const auto sample = sample_in_ball(pc, cfg.window_radius, derive_seed(cfg.seed, i));
    hyperplanes[i] = static_cast<long>(sample.hyperplanes.size());
    per_rep[i] = enumerate_k_faces(sample, model, opt, &per_stats[i], static_cast<long>(i));
  });
  EnumerationStats st;
  long total_planes = 0;
  for (std::size_t i = 0; i < reps; ++i) {
    st.merge(per_stats[i]);
    total_planes += hyperplanes[i];
  }

  const fs::path dir = prepare_out(cfg);
  const fs::path faces = dir / "faces.jsonl";
  write_file(faces, [&](std::ostream& os) {
    for (const auto& recs : per_rep) io::write_faces(os, recs);
  });

  auto& c = m.counters();
  c["replicates"] = cfg.reps;
  c["hyperplanes"] = total_planes;
  c["cells_in_window"] = st.cells;
  c["faces_admitted"] = st.admitted;
  c["discarded_ties"] = st.discarded_ties;
  c["discard_rate"] = st.discard_rate();
  c["rejected_samples"] = st.rejected_samples;
  if (!st.general_position_report.empty()) c["general_position"] = st.general_position_report;
  const double obs_volume = unit_ball_volume(cfg.dim) * std::pow(cfg.obs_radius, cfg.dim);
  c["face_intensity"] = obs_volume > 0 ? st.admitted / (cfg.reps * obs_volume) : 0.0;
  m.add_output(faces, st.admitted);

  int code = kExitOk;
  if (st.discard_rate() > kMaxDiscardRate) {
    std::ostringstream os;
    os << "discard rate " << st.discard_rate() << " exceeds " << kMaxDiscardRate;
    m.set_status("failed: " + os.str());
    err << "error: " << os.str() << " (non-unique inballs)\n";
    code = kExitRuntime;
  }
  if (st.rejected_samples > 0)
    err << "warning: " << st.rejected_samples << " of " << cfg.reps
        << " windows failed the general position check and produced no faces\n";
  if (st.admitted < kFewFaces) {
    const double suggest = cfg.window_radius * std::pow(static_cast<double>(kFewFaces) / std::max<long>(st.admitted, 1),
                                                        1.0 / cfg.dim);
    err << "warning: only " << st.admitted << " faces admitted; consider --window-radius "
        << std::setprecision(3) << suggest << " (with --obs-radius scaled alike)\n";
  }
  m.write(manifest_path_for(faces));
  out << "simulate: " << st.admitted << " faces from " << cfg.reps << " windows -> " << faces.string() << '\n';
  return code;
}

int cmd_limit(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  Manifest m(Command::limit, cfg);
  const auto model = DirectionalModel::parse(cfg.phi, cfg.dim);
  warn_if_not_subspace_free(model, err);
  const auto run = sample_xi(model, tuple_options(cfg));
  const fs::path dir = prepare_out(cfg);
  const fs::path path = dir / "xi.jsonl";
  write_file(path, [&](std::ostream& os) { io::write_xi(os, run.samples); });
  m.counters() = counters_json(run.counters);
  m.add_output(path, static_cast<long>(run.samples.size()));
  m.write(manifest_path_for(path));
  out << "limit: " << run.samples.size() << " weighted shapes (acceptance " << run.counters.acceptance() << ") -> "
      << path.string() << '\n';
  return kExitOk;
}

int cmd_direct(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  Manifest m(Command::direct, cfg);
  const auto model = DirectionalModel::parse(cfg.phi, cfg.dim);
  warn_if_not_subspace_free(model, err);
  const auto run = sample_typical_face_direct(model, tuple_options(cfg), cfg.gamma);
  const fs::path dir = prepare_out(cfg);
  const fs::path path = dir / "typical.jsonl";
  write_file(path, [&](std::ostream& os) { io::write_faces(os, run.records); });
  m.counters() = counters_json(run.counters);
  m.counters()["zero_residual"] = run.zero_residual;
  m.add_output(path, static_cast<long>(run.records.size()));
  m.write(manifest_path_for(path));
  out << "direct: " << run.records.size() << " typical faces -> " << path.string() << '\n';
  return kExitOk;
}

Json read_manifest(const fs::path& data) {
  const fs::path mp = manifest_path_for(data);
  std::ifstream in(mp);
  if (!in) throw ValidationError("no manifest for " + data.string() + " (expected " + mp.string() + ")");
  try {
    return Json::parse(in);
  } catch (const Json::exception& e) {
    throw ValidationError("unreadable manifest " + mp.string() + ": " + e.what());
  }
}

void write_plotdata(std::ostream& os, const std::vector<double>& thresholds, const WeightedSample& sim,
                    const XiWeights& xi, double gamma) {
  double lo = INFINITY, hi = -INFINITY;
  for (double v : sim.value) lo = std::min(lo, v), hi = std::max(hi, v);
  for (double v : xi.value) lo = std::min(lo, v), hi = std::max(hi, v);
  constexpr int kGrid = 200;
  const WeightedECDF xi_ecdf(xi.value, xi.w);
  os << "a,curve,x,ecdf\n";
  auto emit = [&](double a, const char* curve, const WeightedECDF& e) {
    if (e.empty()) return;
    for (int g = 0; g <= kGrid; ++g) {
      const double x = lo + (hi - lo) * g / kGrid;
      os << io::format_real(a) << ',' << curve << ',' << io::format_real(x) << ',' << io::format_real(e(x)) << '\n';
    }
  };
  for (double a : thresholds) {
    std::vector<double> v, w;
    for (std::size_t i = 0; i < sim.value.size(); ++i) {
      if (!(sim.sigma[i] < a)) continue;
      v.push_back(sim.value[i]);
      w.push_back(sim.weight[i]);
    }
    emit(a, "sim", WeightedECDF(v, w));
    std::vector<double> sw(xi.w.size());
    for (std::size_t i = 0; i < sw.size(); ++i) sw[i] = semianalytic_weight(xi.w[i], xi.sigma[i], xi.phi[i], gamma, a);
    emit(a, "semi", WeightedECDF(xi.value, sw));
    emit(a, "xi", xi_ecdf);
  }
}

int cmd_compare(const RunConfig& cfg, std::ostream& out, std::ostream&) {
  Manifest m(Command::compare, cfg);
  const fs::path sim_path(cfg.sim), xi_path(cfg.xi);
  const Descriptor desc = parse_descriptor(cfg.descriptor);
  const Json sim_m = read_manifest(sim_path), xi_m = read_manifest(xi_path);
  if (io::detect_kind(xi_path) != io::RecordKind::xi)
    throw ValidationError("--xi: " + xi_path.string() + " does not hold limit-shape samples");

  // the xi law does not involve the intensity, so gamma only has to agree
  // between runs that do
  std::vector<std::string> keys{"dim", "k", "phi", "sigma"};
  const bool sim_uses_gamma = sim_m.at("command") != "limit";
  const bool xi_uses_gamma = xi_m.at("command") != "limit";
  if (sim_uses_gamma && xi_uses_gamma) keys.push_back("gamma");
  std::vector<std::string> diff;
  for (const auto& key : keys) {
    if (sim_m.at("config").at(key) != xi_m.at("config").at(key))
      diff.push_back(key + " (" + sim_m["config"][key].dump() + " vs " + xi_m["config"][key].dump() + ")");
  }
  if (!diff.empty()) {
    std::string msg = "incompatible inputs, differing fields:";
    for (const auto& d : diff) msg += "\n  " + d;
    throw ValidationError(msg);
  }
  const double gamma = (sim_uses_gamma ? sim_m : xi_m).at("config").at("gamma").get<double>();
  const int k = sim_m.at("config").at("k").get<int>();

  WeightedSample sim;
  if (io::detect_kind(sim_path) == io::RecordKind::xi) {
    // a limit-shape sample stands for faces of vanishing size
    for (const auto& s : io::read_xi(sim_path)) {
      sim.value.push_back(descriptor_of(s, desc));
      sim.sigma.push_back(0.0);
      sim.weight.push_back(s.w);
      sim.simplex.push_back(s.shape.vertex_count == k + 1 ? 1.0 : 0.0);
    }
  } else {
    for (const auto& r : io::read_faces(sim_path)) {
      sim.value.push_back(descriptor_of(r, desc));
      sim.sigma.push_back(r.sigma);
      sim.weight.push_back(r.weight());
      sim.simplex.push_back(r.is_simplex() ? 1.0 : 0.0);
    }
  }
  XiWeights xi;
  for (const auto& s : io::read_xi(xi_path)) {
    xi.value.push_back(descriptor_of(s, desc));
    xi.w.push_back(s.w);
    xi.sigma.push_back(s.sigma);
    xi.phi.push_back(s.phiT);
  }

  SweepOptions opt;
  opt.gamma_hat = gamma;
  opt.seed = cfg.seed;
  const auto rows = convergence_sweep(sim, xi, cfg.thresholds, opt);

  const fs::path dir = prepare_out(cfg);
  const fs::path summary = dir / "summary.csv", plot = dir / "plotdata.csv";
  write_file(summary, [&](std::ostream& os) { io::write_summary_csv(os, rows); });
  write_file(plot, [&](std::ostream& os) { write_plotdata(os, cfg.thresholds, sim, xi, gamma); });

  m.add_input(sim_path);
  m.add_input(xi_path);
  m.counters()["gamma"] = gamma;
  m.counters()["sim_records"] = static_cast<long>(sim.value.size());
  m.counters()["xi_records"] = static_cast<long>(xi.value.size());
  Json notes = Json::array();
  for (const auto& r : rows)
    if (!r.note.empty()) notes.push_back(io::format_real(r.a) + ": " + r.note);
  m.counters()["notes"] = notes;
  m.add_output(summary, static_cast<long>(rows.size()));
  m.add_output(plot, -1);
  m.write(dir / "compare.manifest.json");

  io::write_summary_csv(out, rows);
  for (const auto& r : rows)
    if (!r.note.empty()) out << "# a=" << io::format_real(r.a) << ": " << r.note << '\n';
  return kExitOk;
}

int cmd_report(const RunConfig& cfg, const std::vector<std::string>& paths, std::ostream& out, std::ostream& err) {
  std::vector<fs::path> manifests;
  auto collect_dir = [&](const fs::path& d) {
    for (const auto& e : fs::directory_iterator(d)) {
      const auto name = e.path().filename().string();
      if (e.is_regular_file() && name.size() > 14 && name.ends_with(".manifest.json")) manifests.push_back(e.path());
    }
  };
  if (paths.empty()) {
    if (!fs::is_directory(cfg.out)) throw ValidationError("report: no such directory " + cfg.out);
    collect_dir(cfg.out);
  }
  for (const auto& p : paths) {
    if (fs::is_directory(p)) collect_dir(p);
    else if (fs::exists(p)) manifests.emplace_back(p);
    else throw ValidationError("report: no such file " + p);
  }
  std::sort(manifests.begin(), manifests.end());
  if (manifests.empty()) throw ValidationError("report: no manifests found");

  int bad = 0;
  for (const auto& mp : manifests) {
    Json m;
    try {
      std::ifstream in(mp);
      m = Json::parse(in);
    } catch (const Json::exception& e) {
      err << mp.string() << ": unreadable manifest: " << e.what() << '\n';
      ++bad;
      continue;
    }
    out << mp.string() << ": " << m.value("command", "?") << " [" << m.value("status", "?") << "]";
    if (m.contains("wall_time_s")) out << " " << std::setprecision(4) << m["wall_time_s"].get<double>() << " s";
    out << '\n';
    out << "  config " << m["config"].dump() << '\n';
    for (const auto& [key, value] : m["counters"].items()) out << "  " << key << " = " << value.dump() << '\n';
    for (const auto& o : m["outputs"]) {
      const fs::path f = mp.parent_path() / o.at("file").get<std::string>();
      std::string verdict;
      if (!fs::exists(f)) verdict = "MISSING";
      else verdict = sha256_file(f) == o.at("sha256").get<std::string>() ? "ok" : "CHECKSUM MISMATCH";
      if (verdict != "ok") ++bad;
      out << "  output " << f.string() << ": " << verdict << '\n';
    }
  }
  return bad == 0 ? kExitOk : kExitRuntime;
}

}  // namespace

std::string sha256_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  EVP_MD_CTX* ctx = EVP_MD_CTX_new();
  EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr);
  char buf[1 << 16];
  while (in) {
    in.read(buf, sizeof buf);
    if (in.gcount() > 0) EVP_DigestUpdate(ctx, buf, static_cast<std::size_t>(in.gcount()));
  }
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_DigestFinal_ex(ctx, md, &len);
  EVP_MD_CTX_free(ctx);
  std::ostringstream os;
  for (unsigned int i = 0; i < len; ++i) os << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(md[i]);
  return os.str();
}

fs::path manifest_path_for(const fs::path& output) {
  return output.parent_path() / (output.stem().string() + ".manifest.json");
}

int run_command(Command cmd, const RunConfig& cfg, std::ostream& out, std::ostream& err,
                const std::vector<std::string>& paths) {
  try {
    validate(cfg, cmd);
    switch (cmd) {
      case Command::simulate: return cmd_simulate(cfg, out, err);
      case Command::limit: return cmd_limit(cfg, out, err);
      case Command::direct: return cmd_direct(cfg, out, err);
      case Command::compare: return cmd_compare(cfg, out, err);
      case Command::report: return cmd_report(cfg, paths, out, err);
    }
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const io::FormatError& e) {
    err << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const SamplerAbort& e) {
    err << "aborted: " << e.what() << '\n';
    return kExitRuntime;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  return kExitRuntime;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Poisson hyperplane tessellations: typical faces and small-face shapes"};
  app.require_subcommand(1);
  app.set_version_flag("--version", PHTESS_VERSION);

  // flag name -> raw text, applied after the config file
  std::vector<std::pair<std::string, std::string>> flags;
  std::string config_path;
  std::vector<std::string> report_paths;
  static const std::vector<std::pair<const char*, const char*>> kFlags{
      {"dim", "ambient dimension d (2..4)"},
      {"k", "face dimension"},
      {"gamma", "hyperplane intensity"},
      {"phi", "directional model: isotropic | vmf:[..] | atoms:[..] | smallcircle:{..} | cantor"},
      {"sigma", "size functional: vkroot | diameter | circumradius"},
      {"window-radius", "simulation window radius"},
      {"obs-radius", "observation radius for incenters"},
      {"reps", "number of windows"},
      {"samples", "number of accepted tuples"},
      {"thresholds", "decreasing size thresholds a1,a2,..."},
      {"seed", "master seed"},
      {"out", "output directory"},
      {"phi-budget", "Monte Carlo draws per hitting-functional estimate"},
      {"workers", "worker threads (outputs do not depend on it)"},
  };
  std::vector<std::string> values(kFlags.size());

  struct Sub {
    Command cmd;
    CLI::App* app;
  };
  std::vector<Sub> subs{
      {Command::simulate, app.add_subcommand("simulate", "enumerate k-faces of simulated tessellations")},
      {Command::limit, app.add_subcommand("limit", "sample the small-face limit shape law")},
      {Command::direct, app.add_subcommand("direct", "sample typical k-faces directly")},
      {Command::compare, app.add_subcommand("compare", "convergence sweep of simulated faces against the limit law")},
      {Command::report, app.add_subcommand("report", "summarise manifests and verify output checksums")},
  };
  std::vector<std::vector<CLI::Option*>> opts(subs.size());
  std::string sim, xi, descriptor;
  for (std::size_t s = 0; s < subs.size(); ++s) {
    auto* sub = subs[s].app;
    for (std::size_t f = 0; f < kFlags.size(); ++f)
      opts[s].push_back(sub->add_option(std::string("--") + kFlags[f].first, values[f], kFlags[f].second));
    sub->add_option("--config", config_path, "key = value settings file; flags win");
  }
  auto* compare = subs[3].app;
  auto* sim_opt = compare->add_option("--sim", sim, "faces.jsonl or typical.jsonl (or xi.jsonl)");
  auto* xi_opt = compare->add_option("--xi", xi, "xi.jsonl from the limit subcommand");
  auto* desc_opt = compare->add_option("--descriptor", descriptor, "norm_inradius | norm_volume | norm_diameter | fcount");
  subs[4].app->add_option("paths", report_paths, "manifest files or directories");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      app.exit(e, out, err);
      return kExitOk;
    }
    err << "error: " << e.what() << "\n" << "run with --help for usage\n";
    return kExitValidation;
  }

  for (std::size_t s = 0; s < subs.size(); ++s) {
    if (!subs[s].app->parsed()) continue;
    RunConfig cfg;
    try {
      if (!config_path.empty())
        for (const auto& [key, value] : read_config_file(config_path)) apply_setting(cfg, key, value);
      for (std::size_t f = 0; f < kFlags.size(); ++f)
        if (opts[s][f]->count() > 0) apply_setting(cfg, kFlags[f].first, values[f]);
      if (sim_opt->count() > 0) cfg.sim = sim;
      if (xi_opt->count() > 0) cfg.xi = xi;
      if (desc_opt->count() > 0) cfg.descriptor = descriptor;
    } catch (const ValidationError& e) {
      err << "error: " << e.what() << '\n';
      return kExitValidation;
    }
    return run_command(subs[s].cmd, cfg, out, err, report_paths);
  }
  return kExitValidation;
}

}  // namespace phtess::cli
