#pragma once

#include "phtess/directions.hpp"
#include "phtess/process.hpp"
#include "phtess/records.hpp"
#include "phtess/stats.hpp"

#include <span>
#include <string>
#include <vector>

namespace phtess {

double size_of(const PolytopeK& p, SizeKind kind);

class DiscardedTies : public GeometryError {
 public:
  DiscardedTies() : GeometryError("discarded: ties") {}
};

/// Descriptors of s_c(p) given the inradius of p and Phi(p).
ShapeDescriptor describe_shape(const PolytopeK& p, double inradius, double phi);

/// Throws DiscardedTies when the inball of p is not unique.
ShapeDescriptor shape_of(const PolytopeK& p, const DirectionalModel& model, int budget, Rng& rng);

/// A bounded k-face lying strictly inside the window ball.
struct WindowFace {
  PolytopeK polytope;
  std::vector<int> defining;  // indices of the d - k hyperplanes carrying it
};

/// All k-faces (1 <= k <= min(d, 3)) of the tessellation that lie inside the
/// open ball of radius `window_radius`. Faces touching the window boundary
/// are dropped.
std::vector<WindowFace> window_faces(std::span<const Hyperplane> hyperplanes, int k, double window_radius);

/// Number of k-faces, bounded or not, of the whole arrangement (0 <= k <= d,
/// k <= 3). Assumes general position.
long count_k_faces_full(std::span<const Hyperplane> hyperplanes, int k);

struct EnumerationOptions {
  int k = 2;
  double obs_radius = 0.0;
  SizeKind sigma = SizeKind::diameter;
  int phi_budget = 4096;
  bool require_general_position = true;
};

struct EnumerationStats {
  long cells = 0;           // faces inside the window
  long admitted = 0;        // incenter in the observation ball, unique inball
  long discarded_ties = 0;  // incenter in the observation ball, inball not unique
  long rejected_samples = 0;
  std::string general_position_report;

  void merge(const EnumerationStats& o);
  double discard_rate() const {
    const long seen = admitted + discarded_ties;
    return seen > 0 ? static_cast<double>(discarded_ties) / seen : 0.0;
  }
};

/// FaceRecords of one window (minus sampling: incenter within obs_radius).
/// A sample failing the general-position check yields no records and is
/// counted in stats->rejected_samples.
std::vector<FaceRecord> enumerate_k_faces(const HyperplaneSample& sample, const DirectionalModel& model,
                                          const EnumerationOptions& opt, EnumerationStats* stats = nullptr,
                                          long rep = 0);

struct IntensityEstimate {
  double value = 0.0;
  double lo = 0.0;
  double hi = 0.0;
};

/// Admitted faces per unit observation volume and replicate, with a
/// bootstrap interval over replicates. Needs >= 30 replicates.
IntensityEstimate estimate_face_intensity(std::span<const long> admitted_per_rep, double obs_volume,
                                          int resamples = 1000, std::uint64_t seed = 0);

struct ConditionalShapeLaw {
  WeightedECDF ecdf;
  double simplex_fraction = 0.0;
  long count = 0;
};

/// Law of the descriptor over records with sigma < a (weights honoured).
/// Throws StatsError when fewer than `min_records` qualify.
ConditionalShapeLaw empirical_conditional_shape_law(std::span<const FaceRecord> records, double a,
                                                    Descriptor descriptor, long min_records = 100);

}  // namespace phtess
