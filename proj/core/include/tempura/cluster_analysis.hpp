#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace tempura {

struct Cluster {
  std::vector<std::string> member_titles;
  std::string summary;

  friend bool operator==(const Cluster&, const Cluster&) = default;
};

// Ordered partition of a history into clusters of temporally-proximate,
// feature-similar items, each with a one-line summary.
struct ClusterAnalysis {
  std::vector<Cluster> clusters;
  std::size_t dropped_members = 0;  // member lines that matched no history item

  friend bool operator==(const ClusterAnalysis&,
                         const ClusterAnalysis&) = default;
};

}  // namespace tempura
