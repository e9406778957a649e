#include "tempura/synthetic.hpp"

#include <cstdio>
#include <string>

#include "tempura/rng.hpp"

namespace tempura::synthetic {
namespace {

std::string padded(std::size_t value, int width) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%0*zu", width, value);
  return buf;
}

const char* kWords[] = {"amber", "basalt", "cedar",  "dune",   "ember",
                        "fjord", "garnet", "harbor", "island", "juniper",
                        "kiln",  "lagoon", "meadow", "nickel", "onyx",
                        "pine"};

}  // namespace

corpus::IngestResult make_uniform_dataset(const UniformSpec& spec) {
  if (spec.catalog_size < spec.events_per_user) {
    throw std::invalid_argument(
        "make_uniform_dataset: catalog smaller than events per user");
  }
  corpus::IngestResult out;
  rng::Sampler catalog_sampler(rng::derive_seed(spec.seed, "catalog"));
  for (std::size_t i = 0; i < spec.catalog_size; ++i) {
    corpus::ItemRecord item;
    item.item_id = "u" + padded(i, 6);
    const char* w1 = kWords[catalog_sampler.uniform_below(16)];
    const char* w2 = kWords[catalog_sampler.uniform_below(16)];
    item.title = "Item " + padded(i, 6) + " " + w1 + " " + w2;
    out.catalog.add(std::move(item));
  }
  for (std::size_t u = 0; u < spec.num_users; ++u) {
    rng::Sampler sampler(rng::derive_seed(spec.seed, "user-events", u));
    const std::vector<std::size_t> picks =
        sampler.sample_indices(spec.catalog_size, spec.events_per_user);
    const std::string user_id = "user" + padded(u, 6);
    for (std::size_t j = 0; j < picks.size(); ++j) {
      out.interactions.push_back({user_id, out.catalog.at(picks[j]).item_id,
                                  static_cast<std::int64_t>(1000 + j)});
    }
  }
  return out;
}

corpus::IngestResult make_cohort_dataset(const CohortSpec& spec) {
  if (spec.pool_size < spec.old_events) {
    throw std::invalid_argument(
        "make_cohort_dataset: pool smaller than old_events");
  }
  corpus::IngestResult out;

  // Two cohort pools. Every pool title shares exactly one pool token; the
  // remaining tokens are unique per item.
  const char* pool_token[2] = {"vintage", "modern"};
  for (int cohort = 0; cohort < 2; ++cohort) {
    for (std::size_t j = 0; j < spec.pool_size; ++j) {
      corpus::ItemRecord item;
      item.item_id = std::string(1, 'a' + cohort) + padded(j, 5);
      item.title = std::string(pool_token[cohort]) + " reel" +
                   padded(j + spec.pool_size * cohort, 5) + " tape" +
                   padded(j + spec.pool_size * cohort, 5);
      out.catalog.add(std::move(item));
    }
  }

  // User-specific series items: the other cohort's pool token plus a series
  // token shared by that user's recent items and target.
  const std::size_t series_len = spec.recent_events + 1;
  for (std::size_t u = 0; u < spec.num_users; ++u) {
    const int old_cohort = static_cast<int>(u % 2);
    const int new_cohort = 1 - old_cohort;
    for (std::size_t i = 0; i < series_len; ++i) {
      corpus::ItemRecord item;
      item.item_id = "s" + padded(u, 5) + "x" + padded(i, 2);
      item.title = std::string(pool_token[new_cohort]) + " series" +
                   padded(u, 5) + " episode" + padded(i, 2);
      out.catalog.add(std::move(item));
    }
  }

  for (std::size_t u = 0; u < spec.num_users; ++u) {
    const int old_cohort = static_cast<int>(u % 2);
    rng::Sampler sampler(rng::derive_seed(spec.seed, "cohort-user", u));
    const std::vector<std::size_t> old_picks =
        sampler.sample_indices(spec.pool_size, spec.old_events);
    const std::string user_id = "user" + padded(u, 5);
    std::int64_t ts = 100;
    for (const std::size_t pick : old_picks) {
      const std::size_t idx =
          static_cast<std::size_t>(old_cohort) * spec.pool_size + pick;
      out.interactions.push_back({user_id, out.catalog.at(idx).item_id, ts++});
    }
    for (std::size_t i = 0; i < series_len; ++i) {
      out.interactions.push_back(
          {user_id, "s" + padded(u, 5) + "x" + padded(i, 2), ts++});
    }
  }
  return out;
}

}  // namespace tempura::synthetic
