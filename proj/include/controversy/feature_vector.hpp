#ifndef CONTROVERSY_FEATURE_VECTOR_HPP
#define CONTROVERSY_FEATURE_VECTOR_HPP

#include <array>
#include <numeric>
#include <string>
#include <vector>

#include "controversy/baseline_features.hpp"
#include "controversy/errors.hpp"
#include "controversy/motifs.hpp"

namespace controversy {

// Fixed slot layout; the order is part of the on-disk formats.
//   0..3   tree/reply-graph sizes
//   4..5   average degrees
//   6      avg_cascade_depth
//   7      max_relative_degree
//   8      avg_inter_reply_time
//   9      frac_replies_first_hour
//   10..16 dyad frequencies A..G
//   17..36 triad group frequencies (canonical code order)
//   37     triangle_ratio
inline constexpr int kNumFeatureSlots = 38;
inline constexpr int kFirstDyadSlot = 10;
inline constexpr int kFirstTriadSlot = 17;
inline constexpr int kTriangleRatioSlot = 37;

inline const std::array<std::string, kNumFeatureSlots>& feature_slot_names() {
  static const std::array<std::string, kNumFeatureSlots> names = [] {
    std::array<std::string, kNumFeatureSlots> n;
    n[0] = "tree_nodes";
    n[1] = "tree_edges";
    n[2] = "reply_nodes";
    n[3] = "reply_edges";
    n[4] = "tree_avg_degree";
    n[5] = "reply_avg_degree";
    n[6] = "avg_cascade_depth";
    n[7] = "max_relative_degree";
    n[8] = "avg_inter_reply_time";
    n[9] = "frac_replies_first_hour";
    for (int d = 0; d < kNumDyadClasses; ++d)
      n[static_cast<std::size_t>(kFirstDyadSlot + d)] =
          std::string("dyad_") + static_cast<char>('A' + d);
    for (int g = 0; g < kNumTriadGroups; ++g) {
      std::string code = triad_group_codes()[static_cast<std::size_t>(g)];
      for (char& c : code)
        if (c == '|') c = '_';
      n[static_cast<std::size_t>(kFirstTriadSlot + g)] = "triad_" + code;
    }
    n[kTriangleRatioSlot] = "triangle_ratio";
    return n;
  }();
  return names;
}

struct FeatureVector {
  std::array<double, kNumFeatureSlots> values{};

  double operator[](int slot) const { return values[static_cast<std::size_t>(slot)]; }
  bool operator==(const FeatureVector&) const = default;
};

enum class MaskName {
  baseline,
  baseline_dyadic,
  baseline_dyadic_triadic,
  dyadic_only,
  all,
};

inline const char* to_string(MaskName m) {
  switch (m) {
    case MaskName::baseline: return "baseline";
    case MaskName::baseline_dyadic: return "baseline+dyadic";
    case MaskName::baseline_dyadic_triadic: return "baseline+dyadic+triadic";
    case MaskName::dyadic_only: return "dyadic-only";
    case MaskName::all: return "all";
  }
  return "?";
}

inline MaskName parse_mask(const std::string& s) {
  if (s == "baseline") return MaskName::baseline;
  if (s == "baseline+dyadic") return MaskName::baseline_dyadic;
  if (s == "baseline+dyadic+triadic") return MaskName::baseline_dyadic_triadic;
  if (s == "dyadic-only") return MaskName::dyadic_only;
  if (s == "all") return MaskName::all;
  fail(ErrorCode::invalid_params,
       "unknown mask '" + s +
           "' (expected baseline, baseline+dyadic, baseline+dyadic+triadic, dyadic-only or all)");
}

inline std::vector<int> mask_slots(MaskName m) {
  std::vector<int> slots;
  switch (m) {
    case MaskName::baseline:
      slots.resize(10);
      std::iota(slots.begin(), slots.end(), 0);
      break;
    case MaskName::baseline_dyadic:
      slots.resize(17);
      std::iota(slots.begin(), slots.end(), 0);
      break;
    case MaskName::baseline_dyadic_triadic:
    case MaskName::all:
      slots.resize(kNumFeatureSlots);
      std::iota(slots.begin(), slots.end(), 0);
      break;
    case MaskName::dyadic_only:
      slots.resize(7);
      std::iota(slots.begin(), slots.end(), kFirstDyadSlot);
      break;
  }
  return slots;
}

inline FeatureVector assemble_feature_vector(const StructuralFeatures& s,
                                             const PropagationFeatures& p,
                                             const TemporalFeatures& t, const MotifFeatures& m) {
  FeatureVector fv;
  fv.values[0] = static_cast<double>(s.tree_nodes);
  fv.values[1] = static_cast<double>(s.tree_edges);
  fv.values[2] = static_cast<double>(s.reply_nodes);
  fv.values[3] = static_cast<double>(s.reply_edges);
  fv.values[4] = s.tree_avg_degree;
  fv.values[5] = s.reply_avg_degree;
  fv.values[6] = p.avg_cascade_depth;
  fv.values[7] = p.max_relative_degree;
  fv.values[8] = t.avg_inter_reply_time;
  fv.values[9] = t.frac_replies_first_hour;
  for (int d = 0; d < kNumDyadClasses; ++d)
    fv.values[static_cast<std::size_t>(kFirstDyadSlot + d)] = m.dyad_freq[static_cast<std::size_t>(d)];
  for (int g = 0; g < kNumTriadGroups; ++g)
    fv.values[static_cast<std::size_t>(kFirstTriadSlot + g)] = m.triad_freq[static_cast<std::size_t>(g)];
  fv.values[kTriangleRatioSlot] = m.triangle_ratio;
  return fv;
}

// Full per-thread extraction: project the reply graph and evaluate every
// feature family against the shared follow graph.
inline FeatureVector extract_features(const ReplyTree& tree, const FollowGraph& fg) {
  ReplyGraph rg = project_reply_graph(tree);
  return assemble_feature_vector(structural_features(tree, rg), propagation_features(tree),
                                 temporal_features(tree), motif_features(rg, fg));
}

}  // namespace controversy

#endif  // CONTROVERSY_FEATURE_VECTOR_HPP
