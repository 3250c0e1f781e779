#include "phtess/records.hpp"

#include <stdexcept>

namespace phtess {

SizeKind parse_size_kind(const std::string& name) {
  if (name == "vkroot" || name == "vk_root") return SizeKind::vkroot;
  if (name == "diameter") return SizeKind::diameter;
  if (name == "circumradius") return SizeKind::circumradius;
  throw std::invalid_argument("unknown size functional '" + name + "' (expected vkroot|diameter|circumradius)");
}

const char* size_kind_name(SizeKind kind) {
  switch (kind) {
    case SizeKind::vkroot:
      return "vkroot";
    case SizeKind::diameter:
      return "diameter";
    case SizeKind::circumradius:
      return "circumradius";
  }
  return "?";
}

Descriptor parse_descriptor(const std::string& name) {
  if (name == "norm_inradius") return Descriptor::norm_inradius;
  if (name == "norm_volume") return Descriptor::norm_volume;
  if (name == "norm_diameter") return Descriptor::norm_diameter;
  if (name == "fcount") return Descriptor::fcount;
  throw std::invalid_argument("unknown descriptor '" + name +
                              "' (expected norm_inradius|norm_volume|norm_diameter|fcount)");
}

const char* descriptor_name(Descriptor d) {
  switch (d) {
    case Descriptor::norm_inradius:
      return "norm_inradius";
    case Descriptor::norm_volume:
      return "norm_volume";
    case Descriptor::norm_diameter:
      return "norm_diameter";
    case Descriptor::fcount:
      return "fcount";
  }
  return "?";
}

double descriptor_of(const FaceRecord& rec, Descriptor d) {
  switch (d) {
    case Descriptor::norm_inradius:
      return rec.shape.norm_inradius;
    case Descriptor::norm_volume:
      return rec.shape.norm_volume;
    case Descriptor::norm_diameter:
      return rec.shape.norm_diameter;
    case Descriptor::fcount:
      return rec.fcount;
  }
  return 0.0;
}

double descriptor_of(const XiSample& s, Descriptor d) {
  switch (d) {
    case Descriptor::norm_inradius:
      return s.shape.norm_inradius;
    case Descriptor::norm_volume:
      return s.shape.norm_volume;
    case Descriptor::norm_diameter:
      return s.shape.norm_diameter;
    case Descriptor::fcount:
      return s.shape.vertex_count;  // xi shapes are simplices: facets = vertices
  }
  return 0.0;
}

}  // namespace phtess
