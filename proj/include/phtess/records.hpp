#pragma once

#include "phtess/linalg.hpp"

#include <optional>
#include <string>
#include <vector>

namespace phtess {

enum class SizeKind { vkroot, diameter, circumradius };

SizeKind parse_size_kind(const std::string& name);
const char* size_kind_name(SizeKind kind);

/// Scalar summaries of the normalized shape (P - c(P)) / Phi(P).
struct ShapeDescriptor {
  double norm_inradius = 0.0;
  double norm_volume = 0.0;    // V_k^{1/k}
  double norm_diameter = 0.0;
  int vertex_count = 0;
};

struct FaceRecord {
  long rep = 0;
  int k = 0;
  Vec z;  // incenter
  double r = 0.0;
  double sigma = 0.0;
  int fcount = 0;
  int vcount = 0;
  ShapeDescriptor shape;
  std::vector<int> defining;
  bool truncated = false;
  double phi = 0.0;
  std::optional<double> w;  // importance weight (direct sampler only)

  double weight() const { return w.value_or(1.0); }
  bool is_simplex() const { return fcount == k + 1; }
};

/// One accepted direction tuple of the limit-shape sampler.
struct XiSample {
  double w = 0.0;  // D_k(u) / Sigma(T_k(u))
  ShapeDescriptor shape;
  double phiT = 0.0;
  double phiB = 0.0;
  double sigma = 0.0;  // Sigma(T_k(u)); needed to reweight towards finite thresholds
};

enum class Descriptor { norm_inradius, norm_volume, norm_diameter, fcount };

Descriptor parse_descriptor(const std::string& name);
const char* descriptor_name(Descriptor d);
double descriptor_of(const FaceRecord& rec, Descriptor d);
double descriptor_of(const XiSample& s, Descriptor d);

}  // namespace phtess
