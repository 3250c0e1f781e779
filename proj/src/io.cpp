#include "phtess/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <ostream>

namespace phtess::io {

namespace {

Json vec_json(const Vec& v) {
  Json a = Json::array();
  for (int i = 0; i < v.size(); ++i) a.push_back(v[i]);
  return a;
}

// NaN is written as null by the JSON layer
double real_of(const Json& j, const char* key) {
  const auto it = j.find(key);
  if (it == j.end()) throw FormatError(std::string("missing field \"") + key + "\"");
  if (it->is_null()) return std::nan("");
  if (!it->is_number()) throw FormatError(std::string("field \"") + key + "\" is not a number");
  return it->get<double>();
}

long integer_of(const Json& j, const char* key) {
  const auto it = j.find(key);
  if (it == j.end()) throw FormatError(std::string("missing field \"") + key + "\"");
  if (!it->is_number_integer()) throw FormatError(std::string("field \"") + key + "\" is not an integer");
  return it->get<long>();
}

template <class Fn>
void for_each_line(const std::filesystem::path& path, Fn&& fn) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open " + path.string());
  std::string line;
  long lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    try {
      fn(Json::parse(line));
    } catch (const Json::exception& e) {
      throw FormatError(path.string() + ":" + std::to_string(lineno) + ": " + e.what());
    } catch (const FormatError& e) {
      throw FormatError(path.string() + ":" + std::to_string(lineno) + ": " + e.what());
    }
  }
}

}  // namespace

Json face_to_json(const FaceRecord& rec) {
  Json j;
  j["rep"] = rec.rep;
  j["k"] = rec.k;
  j["z"] = vec_json(rec.z);
  j["r"] = rec.r;
  j["sigma"] = rec.sigma;
  j["fcount"] = rec.fcount;
  j["vcount"] = rec.vcount;
  j["norm_inradius"] = rec.shape.norm_inradius;
  j["norm_volume"] = rec.shape.norm_volume;
  j["norm_diameter"] = rec.shape.norm_diameter;
  j["defining"] = rec.defining;
  if (rec.w) j["w"] = *rec.w;
  return j;
}

FaceRecord face_from_json(const Json& j) {
  FaceRecord rec;
  rec.rep = integer_of(j, "rep");
  rec.k = static_cast<int>(integer_of(j, "k"));
  const auto& z = j.at("z");
  rec.z.resize(static_cast<int>(z.size()));
  for (std::size_t i = 0; i < z.size(); ++i) rec.z[static_cast<int>(i)] = z[i].get<double>();
  rec.r = real_of(j, "r");
  rec.sigma = real_of(j, "sigma");
  rec.fcount = static_cast<int>(integer_of(j, "fcount"));
  rec.vcount = static_cast<int>(integer_of(j, "vcount"));
  rec.shape.norm_inradius = real_of(j, "norm_inradius");
  rec.shape.norm_volume = real_of(j, "norm_volume");
  rec.shape.norm_diameter = real_of(j, "norm_diameter");
  rec.shape.vertex_count = rec.vcount;
  rec.defining = j.at("defining").get<std::vector<int>>();
  rec.phi = rec.shape.norm_inradius > 0 ? rec.r / rec.shape.norm_inradius : 0.0;
  if (j.contains("w")) rec.w = real_of(j, "w");
  return rec;
}

Json xi_to_json(const XiSample& s) {
  Json j;
  j["w"] = s.w;
  j["norm_inradius"] = s.shape.norm_inradius;
  j["norm_volume"] = s.shape.norm_volume;
  j["norm_diameter"] = s.shape.norm_diameter;
  j["vcount"] = s.shape.vertex_count;
  j["phiT"] = s.phiT;
  j["phiB"] = s.phiB;
  j["sigma"] = s.sigma;
  return j;
}

XiSample xi_from_json(const Json& j) {
  XiSample s;
  s.w = real_of(j, "w");
  s.shape.norm_inradius = real_of(j, "norm_inradius");
  s.shape.norm_volume = real_of(j, "norm_volume");
  s.shape.norm_diameter = real_of(j, "norm_diameter");
  s.shape.vertex_count = static_cast<int>(integer_of(j, "vcount"));
  s.phiT = real_of(j, "phiT");
  s.phiB = real_of(j, "phiB");
  s.sigma = j.contains("sigma") ? real_of(j, "sigma") : std::nan("");
  return s;
}

void write_faces(std::ostream& os, std::span<const FaceRecord> records) {
  for (const auto& r : records) os << face_to_json(r).dump() << '\n';
}

void write_xi(std::ostream& os, std::span<const XiSample> samples) {
  for (const auto& s : samples) os << xi_to_json(s).dump() << '\n';
}

RecordKind detect_kind(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open " + path.string());
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    try {
      return Json::parse(line).contains("phiT") ? RecordKind::xi : RecordKind::faces;
    } catch (const Json::exception& e) {
      throw FormatError(path.string() + ": " + e.what());
    }
  }
  throw FormatError(path.string() + ": no records");
}

std::vector<FaceRecord> read_faces(const std::filesystem::path& path) {
  std::vector<FaceRecord> out;
  for_each_line(path, [&](const Json& j) { out.push_back(face_from_json(j)); });
  return out;
}

std::vector<XiSample> read_xi(const std::filesystem::path& path) {
  std::vector<XiSample> out;
  for_each_line(path, [&](const Json& j) { out.push_back(xi_from_json(j)); });
  return out;
}

std::string format_real(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

void write_summary_csv(std::ostream& os, std::span<const SweepRow> rows) {
  os << "a,n,ess,simplex_frac,simplex_frac_lo,simplex_frac_hi,ks_sim_semi,ks_sim_xi,ks_semi_xi,ks_ci_width\n";
  for (const auto& r : rows) {
    os << format_real(r.a) << ',' << r.n << ',' << format_real(r.ess) << ',' << format_real(r.simplex_frac) << ','
       << format_real(r.simplex_frac_lo) << ',' << format_real(r.simplex_frac_hi) << ','
       << format_real(r.ks_sim_semi) << ',' << format_real(r.ks_sim_xi) << ',' << format_real(r.ks_semi_xi) << ','
       << format_real(r.ks_ci_width) << '\n';
  }
}

}  // namespace phtess::io
