#include "tempura/promptkit.hpp"

#include <algorithm>
#include <map>
#include <sstream>
#include <unordered_set>

#include "tempura/rank_parser.hpp"
#include "tempura/rng.hpp"
#include "tempura/templates.hpp"

namespace tempura::promptkit {
namespace {

std::string fill(std::string_view tpl,
                 const std::map<std::string, std::string>& slots) {
  std::string out;
  out.reserve(tpl.size());
  std::size_t pos = 0;
  while (pos < tpl.size()) {
    const std::size_t open = tpl.find('{', pos);
    if (open == std::string_view::npos) {
      out.append(tpl.substr(pos));
      break;
    }
    out.append(tpl.substr(pos, open - pos));
    const std::size_t close = tpl.find('}', open);
    if (close == std::string_view::npos) {
      throw std::logic_error("template: unterminated placeholder");
    }
    const std::string name(tpl.substr(open + 1, close - open - 1));
    const auto it = slots.find(name);
    if (it == slots.end()) {
      throw std::logic_error("template: unknown placeholder {" + name + "}");
    }
    out.append(it->second);
    pos = close + 1;
  }
  return out;
}

std::string numbered_block(const std::vector<corpus::ItemRecord>& items) {
  std::ostringstream out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i > 0) out << '\n';
    out << (i + 1) << ". " << items[i].title;
  }
  return out.str();
}

std::string numbered_block(const std::vector<corpus::ItemRecord>& items,
                           const std::vector<std::size_t>& indices) {
  std::ostringstream out;
  for (std::size_t i = 0; i < indices.size(); ++i) {
    if (i > 0) out << '\n';
    out << (i + 1) << ". " << items[indices[i]].title;
  }
  return out.str();
}

std::string format_instruction(std::size_t num_candidates) {
  return fill(tpl::kFormatInstruction,
              {{"num_candidates", std::to_string(num_candidates)}});
}

RenderedPrompt finish(std::string strategy,
                      const protocol::EvalInstance& instance,
                      std::string user_text,
                      std::vector<std::string> warnings = {}) {
  RenderedPrompt prompt;
  prompt.strategy = std::move(strategy);
  prompt.messages.push_back({Role::System, std::string(tpl::kSystem)});
  prompt.messages.push_back({Role::User, std::move(user_text)});
  prompt.candidate_order.resize(instance.candidates.size());
  for (std::size_t i = 0; i < prompt.candidate_order.size(); ++i) {
    prompt.candidate_order[i] = i;
  }
  prompt.token_estimate = estimate_tokens(prompt.messages);
  prompt.warnings = std::move(warnings);
  return prompt;
}

std::string sequential_text(const protocol::EvalInstance& instance,
                            const std::string& extras) {
  return fill(tpl::kSequential,
              {{"history_block", numbered_block(instance.history)},
               {"extras", extras},
               {"num_candidates", std::to_string(instance.candidates.size())},
               {"candidate_block", numbered_block(instance.candidates)},
               {"format_instruction",
                format_instruction(instance.candidates.size())}});
}

std::string demo_chain(const std::vector<corpus::ItemRecord>& items,
                       const std::vector<std::size_t>& demo_indices) {
  std::ostringstream out;
  for (std::size_t i = 0; i < demo_indices.size(); ++i) {
    if (i > 0) out << '\n';
    out << fill(tpl::kDemoStep,
                {{"demo_title", items[demo_indices[i]].title}});
  }
  return out.str();
}

void require_window(const protocol::EvalInstance& instance,
                    const char* where) {
  if (instance.history.size() < 2) {
    throw std::invalid_argument(std::string(where) +
                                ": history must have at least 2 items");
  }
}

}  // namespace

const std::string& RenderedPrompt::user_text() const {
  for (auto it = messages.rbegin(); it != messages.rend(); ++it) {
    if (it->role == Role::User) return it->text;
  }
  throw std::logic_error("rendered prompt has no user message");
}

std::string strategy_tag(const PromptStrategy& strategy) {
  switch (strategy.kind) {
    case StrategyKind::Sequential:
      return "sequential";
    case StrategyKind::RecencyFocused:
      return "recency-focused";
    case StrategyKind::IclLastItem:
      return "icl";
    case StrategyKind::Pcl:
      return "pcl";
    case StrategyKind::Gcl:
      return "gcl";
    case StrategyKind::ClusterRequest:
      return "cluster-request";
    case StrategyKind::ClusterAugmented:
      return "cluster-augmented";
  }
  throw std::logic_error("unknown strategy kind");
}

PromptStrategy strategy_from_tag(std::string_view tag, int k,
                                 int sample_size) {
  PromptStrategy s;
  s.k = k;
  s.sample_size = sample_size;
  if (tag == "sequential") {
    s.kind = StrategyKind::Sequential;
  } else if (tag == "recency-focused" || tag == "rf") {
    s.kind = StrategyKind::RecencyFocused;
  } else if (tag == "icl") {
    s.kind = StrategyKind::IclLastItem;
  } else if (tag == "pcl") {
    s.kind = StrategyKind::Pcl;
  } else if (tag == "gcl") {
    s.kind = StrategyKind::Gcl;
  } else if (tag == "cluster-request") {
    s.kind = StrategyKind::ClusterRequest;
  } else if (tag == "cluster-augmented" || tag == "cluster") {
    s.kind = StrategyKind::ClusterAugmented;
  } else {
    throw std::invalid_argument("unknown strategy tag: " + std::string(tag));
  }
  return s;
}

std::size_t estimate_tokens(const std::vector<Message>& messages) {
  std::size_t chars = 0;
  for (const Message& m : messages) chars += m.text.size();
  return (chars + 3) / 4;
}

DemoPlan plan_pcl(const protocol::EvalInstance& instance, int k) {
  require_window(instance, "plan_pcl");
  if (k < 1) throw std::invalid_argument("plan_pcl: k must be >= 1");
  DemoPlan plan;
  const std::size_t n = instance.history.size();
  std::size_t kk = static_cast<std::size_t>(k);
  if (kk > n - 1) {
    kk = n - 1;
    plan.clamped = true;
  }
  plan.effective_k = static_cast<int>(kk);
  for (std::size_t i = 0; i < n - kk; ++i) plan.context.push_back(i);
  for (std::size_t i = n - kk; i < n; ++i) plan.demos.push_back(i);
  return plan;
}

DemoPlan plan_gcl(const protocol::EvalInstance& instance, int k,
                  int sample_size, std::uint64_t seed) {
  require_window(instance, "plan_gcl");
  if (k < 1) throw std::invalid_argument("plan_gcl: k must be >= 1");
  if (sample_size < 1) {
    throw std::invalid_argument("plan_gcl: sample_size must be >= 1");
  }
  DemoPlan plan;
  const std::size_t full = instance.full_history.size();
  std::size_t kk = static_cast<std::size_t>(k);
  if (kk > instance.history.size() - 1) {
    kk = instance.history.size() - 1;
    plan.clamped = true;
  }
  plan.effective_k = static_cast<int>(kk);

  // Global-interest context: a seeded uniform sample from the full history,
  // excluding the most recent k items, presented chronologically.
  const std::size_t pool = full - kk;
  const std::size_t take =
      std::min<std::size_t>(static_cast<std::size_t>(sample_size), pool);
  rng::Sampler sampler(seed);
  plan.context = sampler.sample_indices(pool, take);
  std::sort(plan.context.begin(), plan.context.end());

  for (std::size_t i = full - kk; i < full; ++i) plan.demos.push_back(i);
  return plan;
}

RenderedPrompt render_sequential(const protocol::EvalInstance& instance) {
  return finish("sequential", instance, sequential_text(instance, ""));
}

RenderedPrompt render_recency_focused(const protocol::EvalInstance& instance) {
  if (instance.history.empty()) {
    throw std::invalid_argument("render_recency_focused: empty history");
  }
  const std::string emphasis =
      fill(tpl::kRecencyEmphasis,
           {{"recent_title", instance.history.back().title}});
  return finish("recency-focused", instance,
                sequential_text(instance, emphasis + "\n\n"));
}

namespace {

RenderedPrompt render_demo_prompt(const char* tag, std::string_view tpl_text,
                                  const protocol::EvalInstance& instance,
                                  const std::vector<corpus::ItemRecord>& base,
                                  const DemoPlan& plan, int requested_k) {
  std::vector<std::string> warnings;
  if (plan.clamped) {
    warnings.push_back(std::string(tag) + ": k clamped from " +
                       std::to_string(requested_k) + " to " +
                       std::to_string(plan.effective_k) +
                       " (history too short)");
  }
  const std::string text =
      fill(tpl_text,
           {{"context_block", numbered_block(base, plan.context)},
            {"demo_blocks", demo_chain(base, plan.demos)},
            {"num_candidates", std::to_string(instance.candidates.size())},
            {"candidate_block", numbered_block(instance.candidates)},
            {"format_instruction",
             format_instruction(instance.candidates.size())}});
  return finish(tag, instance, text, std::move(warnings));
}

}  // namespace

RenderedPrompt render_icl(const protocol::EvalInstance& instance) {
  const DemoPlan plan = plan_pcl(instance, 1);
  RenderedPrompt prompt = render_demo_prompt("icl", tpl::kPcl, instance,
                                             instance.history, plan, 1);
  return prompt;
}

RenderedPrompt render_pcl(const protocol::EvalInstance& instance, int k) {
  const DemoPlan plan = plan_pcl(instance, k);
  return render_demo_prompt("pcl", tpl::kPcl, instance, instance.history,
                            plan, k);
}

RenderedPrompt render_gcl(const protocol::EvalInstance& instance, int k,
                          int sample_size, std::uint64_t seed) {
  const DemoPlan plan = plan_gcl(instance, k, sample_size, seed);
  return render_demo_prompt("gcl", tpl::kGcl, instance, instance.full_history,
                            plan, k);
}

RenderedPrompt render_cluster_request(const protocol::EvalInstance& instance) {
  const std::string text =
      fill(tpl::kClusterRequest,
           {{"history_block", numbered_block(instance.history)}});
  RenderedPrompt prompt = finish("cluster-request", instance, text);
  return prompt;
}

RenderedPrompt render_cluster_augmented(const protocol::EvalInstance& instance,
                                        const ClusterAnalysis& analysis) {
  std::ostringstream lines;
  for (std::size_t i = 0; i < analysis.clusters.size(); ++i) {
    const Cluster& cluster = analysis.clusters[i];
    if (i > 0) lines << '\n';
    lines << "Cluster " << (i + 1) << ": [";
    for (std::size_t j = 0; j < cluster.member_titles.size(); ++j) {
      if (j > 0) lines << ", ";
      lines << cluster.member_titles[j];
    }
    lines << "]. Cluster summary: "
          << (cluster.summary.empty() ? "(no summary)" : cluster.summary);
  }
  const std::string block =
      fill(tpl::kClusterBlock, {{"cluster_lines", lines.str()}});
  return finish("cluster-augmented", instance,
                sequential_text(instance, block + "\n\n"));
}

RenderedPrompt render(const PromptStrategy& strategy,
                      const protocol::EvalInstance& instance,
                      std::uint64_t seed) {
  switch (strategy.kind) {
    case StrategyKind::Sequential:
      return render_sequential(instance);
    case StrategyKind::RecencyFocused:
      return render_recency_focused(instance);
    case StrategyKind::IclLastItem:
      return render_icl(instance);
    case StrategyKind::Pcl:
      return render_pcl(instance, strategy.k);
    case StrategyKind::Gcl:
      return render_gcl(instance, strategy.k, strategy.sample_size, seed);
    case StrategyKind::ClusterRequest:
      return render_cluster_request(instance);
    case StrategyKind::ClusterAugmented:
      break;  // two-stage flow, driven by the harness
  }
  throw std::invalid_argument(
      "render: cluster strategies need the two-stage flow");
}

namespace {

std::string to_lower_ascii(std::string_view s) {
  std::string out(s);
  for (char& c : out) {
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  }
  return out;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' ||
                        s.front() == '\n' || s.front() == '\r')) {
    s.remove_prefix(1);
  }
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' ||
                        s.back() == '\n' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

// Finds "cluster <digits> :" headers in lowercased text; returns start
// offsets and the offset just past the colon.
std::vector<std::pair<std::size_t, std::size_t>> find_cluster_headers(
    const std::string& lower) {
  std::vector<std::pair<std::size_t, std::size_t>> headers;
  std::size_t pos = 0;
  while ((pos = lower.find("cluster", pos)) != std::string::npos) {
    std::size_t i = pos + 7;
    while (i < lower.size() && (lower[i] == ' ' || lower[i] == '\t')) ++i;
    std::size_t digits = 0;
    while (i < lower.size() && lower[i] >= '0' && lower[i] <= '9') {
      ++i;
      ++digits;
    }
    while (i < lower.size() && (lower[i] == ' ' || lower[i] == '\t')) ++i;
    if (digits > 0 && i < lower.size() && lower[i] == ':') {
      headers.emplace_back(pos, i + 1);
      pos = i + 1;
    } else {
      pos += 7;
    }
  }
  return headers;
}

}  // namespace

ClusterAnalysis parse_clusters(const std::string& text,
                               const protocol::EvalInstance& instance) {
  if (trim(text).empty()) {
    throw ClusterParseError("cluster parse: empty response");
  }
  const std::string lower = to_lower_ascii(text);
  const auto headers = find_cluster_headers(lower);
  if (headers.empty()) {
    throw ClusterParseError("cluster parse: no cluster headers found");
  }

  std::vector<std::string> normalized_history;
  normalized_history.reserve(instance.history.size());
  for (const auto& item : instance.history) {
    normalized_history.push_back(rankparse::normalize_title(item.title));
  }

  ClusterAnalysis analysis;
  std::vector<bool> claimed(instance.history.size(), false);

  for (std::size_t h = 0; h < headers.size(); ++h) {
    const std::size_t begin = headers[h].second;
    const std::size_t end =
        h + 1 < headers.size() ? headers[h + 1].first : text.size();
    const std::string_view segment(text.data() + begin, end - begin);
    const std::string_view segment_lower(lower.data() + begin, end - begin);

    // Summary marker: "cluster summary:" or bare "summary:".
    std::size_t summary_pos = segment_lower.find("summary");
    std::size_t summary_text_start = std::string_view::npos;
    if (summary_pos != std::string_view::npos) {
      std::size_t i = summary_pos + 7;
      while (i < segment_lower.size() &&
             (segment_lower[i] == ' ' || segment_lower[i] == '\t')) {
        ++i;
      }
      if (i < segment_lower.size() && segment_lower[i] == ':') {
        summary_text_start = i + 1;
      }
    }

    // Member list: bracketed if present, else everything before the summary.
    std::size_t members_begin = 0;
    std::size_t members_end =
        summary_pos == std::string_view::npos ? segment.size() : summary_pos;
    const std::size_t open = segment.find('[');
    if (open != std::string_view::npos && open < members_end) {
      members_begin = open + 1;
      const std::size_t close = segment.find(']', open);
      if (close != std::string_view::npos && close <= members_end) {
        members_end = close;
      }
    }
    std::string_view member_text =
        segment.substr(members_begin, members_end - members_begin);

    Cluster cluster;
    std::size_t pos = 0;
    while (pos <= member_text.size()) {
      const std::size_t comma =
          std::min(member_text.find(',', pos), member_text.size());
      std::string_view member = trim(member_text.substr(pos, comma - pos));
      pos = comma + 1;
      while (!member.empty() &&
             (member.back() == '.' || member.back() == ';')) {
        member.remove_suffix(1);
        member = trim(member);
      }
      if (member.empty()) continue;
      const auto hit = rankparse::match_title(member, normalized_history);
      if (!hit || claimed[*hit]) {
        ++analysis.dropped_members;
        continue;
      }
      claimed[*hit] = true;
      cluster.member_titles.push_back(instance.history[*hit].title);
    }

    if (summary_text_start != std::string_view::npos) {
      std::string_view summary = segment.substr(summary_text_start);
      // Stop the summary at the end of its line; later lines belong to
      // whatever follows.
      const std::size_t eol = summary.find('\n');
      if (eol != std::string_view::npos) summary = summary.substr(0, eol);
      cluster.summary = std::string(trim(summary));
    }

    if (!cluster.member_titles.empty()) {
      analysis.clusters.push_back(std::move(cluster));
    }
  }

  if (analysis.clusters.empty()) {
    throw ClusterParseError("cluster parse: no usable clusters");
  }

  // History items missing from every cluster become trailing singletons.
  for (std::size_t i = 0; i < instance.history.size(); ++i) {
    if (!claimed[i]) {
      analysis.clusters.push_back(
          {{instance.history[i].title}, instance.history[i].title});
    }
  }
  return analysis;
}

ClusterAnalysis fallback_single_cluster(
    const protocol::EvalInstance& instance) {
  Cluster cluster;
  for (const auto& item : instance.history) {
    cluster.member_titles.push_back(item.title);
  }
  cluster.summary = "Items the user has interacted with.";
  return {{std::move(cluster)}, 0};
}

}  // namespace tempura::promptkit
