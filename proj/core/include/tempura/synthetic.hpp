#pragma once

#include <cstdint>

#include "tempura/corpus.hpp"

namespace tempura::synthetic {

// Generic random dataset: fixed-width distinct titles, per-user event walks
// without repeats. Useful for pipeline tests where only the protocol
// mechanics matter.
struct UniformSpec {
  std::size_t num_users = 1000;
  std::size_t catalog_size = 400;
  std::size_t events_per_user = 8;
  std::uint64_t seed = 7;
};

corpus::IngestResult make_uniform_dataset(const UniformSpec& spec);

// Temporal-signal dataset: every user interacts with a block of "vintage"
// pool items first and then starts a short user-specific series drawn from
// the other cohort's vocabulary; the held-out target continues that series.
// A ranker that weights recent history correctly identifies the target; one
// that sees a shuffled history is pulled toward same-pool distractors.
struct CohortSpec {
  std::size_t num_users = 200;
  std::size_t pool_size = 300;  // items per cohort pool
  std::size_t old_events = 12;
  std::size_t recent_events = 3;
  std::uint64_t seed = 7;
};

corpus::IngestResult make_cohort_dataset(const CohortSpec& spec);

}  // namespace tempura::synthetic
