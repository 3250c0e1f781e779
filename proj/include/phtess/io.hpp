#pragma once

#include "phtess/records.hpp"
#include "phtess/stats.hpp"

#include "json.hpp"

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace phtess::io {

using Json = nlohmann::ordered_json;

class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// {rep, k, z, r, sigma, fcount, vcount, norm_inradius, norm_volume,
/// norm_diameter, defining} plus "w" when the record carries a weight.
Json face_to_json(const FaceRecord& rec);
FaceRecord face_from_json(const Json& j);

/// {w, norm_inradius, norm_volume, norm_diameter, vcount, phiT, phiB, sigma}
Json xi_to_json(const XiSample& s);
XiSample xi_from_json(const Json& j);

void write_faces(std::ostream& os, std::span<const FaceRecord> records);
void write_xi(std::ostream& os, std::span<const XiSample> samples);

enum class RecordKind { faces, xi };

/// Sniffs the first record: xi lines carry "phiT".
RecordKind detect_kind(const std::filesystem::path& path);
std::vector<FaceRecord> read_faces(const std::filesystem::path& path);
std::vector<XiSample> read_xi(const std::filesystem::path& path);

/// Shortest round-trip decimal; "nan" and "inf" for non-finite values.
std::string format_real(double x);

void write_summary_csv(std::ostream& os, std::span<const SweepRow> rows);

}  // namespace phtess::io
