#include "refgeo/citegraph.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace refgeo {

CitationCounts invert_citations(const Corpus& corpus, CitingWindow window) {
  CitationCounts counts;
  counts.inbound.assign(corpus.articles.size(), 0);
  auto ids = corpus.id_index();

  const std::int64_t n = static_cast<std::int64_t>(corpus.articles.size());
#pragma omp parallel
  {
    std::vector<std::uint32_t> targets;
#pragma omp for schedule(dynamic, 512)
    for (std::int64_t i = 0; i < n; ++i) {
      const auto& citing = corpus.articles[i];
      if (!window.contains(citing.publication_year)) continue;
      targets.clear();
      for (const auto& ref : citing.references) {
        if (!ref.resolved()) continue;
        auto it = ids.find(ref.resolved_id);
        if (it == ids.end()) continue;  // dangling
        targets.push_back(it->second);
      }
      std::sort(targets.begin(), targets.end());
      targets.erase(std::unique(targets.begin(), targets.end()), targets.end());
      for (std::uint32_t t : targets) {
#pragma omp atomic
        counts.inbound[t]++;
      }
    }
  }
  return counts;
}

std::string cell_key_label(const CellKey& k) {
  return k.first + ":" + std::to_string(k.second);
}

CellPartition cell_partition(const Corpus& corpus) {
  std::map<CellKey, std::vector<std::uint32_t>> cells;
  for (std::uint32_t i = 0; i < corpus.articles.size(); ++i) {
    const auto& a = corpus.articles[i];
    if (a.document_type != DocType::Article) continue;
    for (const auto& cat : a.subject_categories)
      cells[{cat, a.publication_year}].push_back(i);
  }
  CellPartition out;
  out.cells.reserve(cells.size());
  for (auto& [key, members] : cells)
    out.cells.push_back({key, std::move(members)});
  return out;
}

EliteSet elite_select(const CellPartition& cells, const CitationCounts& counts,
                      const Corpus& corpus, double fraction,
                      TiePolicy tie_policy) {
  if (!(fraction > 0.0) || fraction > 1.0)
    throw std::invalid_argument("elite fraction must be in (0, 1]");

  EliteSet out;
  out.fraction = fraction;
  out.tie_policy = tie_policy;
  out.is_elite.assign(corpus.articles.size(), 0);

  struct CellResult {
    std::vector<std::uint32_t> admitted;
    std::uint32_t threshold = 0;
  };
  std::vector<CellResult> results(cells.cells.size());

  const std::int64_t nc = static_cast<std::int64_t>(cells.cells.size());
#pragma omp parallel for schedule(dynamic)
  for (std::int64_t c = 0; c < nc; ++c) {
    const auto& members = cells.cells[c].members;
    if (members.empty()) continue;
    std::vector<std::uint32_t> order(members);
    std::sort(order.begin(), order.end(),
              [&](std::uint32_t a, std::uint32_t b) {
                if (counts.inbound[a] != counts.inbound[b])
                  return counts.inbound[a] > counts.inbound[b];
                return corpus.articles[a].id < corpus.articles[b].id;
              });
    const std::size_t n = order.size();
    // k = ceil(fraction * N) in IEEE double; every non-empty cell admits at
    // least one article.
    std::size_t k = static_cast<std::size_t>(
        std::ceil(fraction * static_cast<double>(n)));
    k = std::min(std::max<std::size_t>(k, 1), n);
    const std::uint32_t kth = counts.inbound[order[k - 1]];
    std::size_t take = k;
    if (tie_policy == TiePolicy::IncludeTies) {
      while (take < n && counts.inbound[order[take]] >= kth) ++take;
    }
    results[c].admitted.assign(order.begin(), order.begin() + take);
    results[c].threshold = kth;
  }

  for (std::size_t c = 0; c < results.size(); ++c) {
    const auto& r = results[c];
    if (cells.cells[c].members.empty()) continue;
    out.cell_thresholds[cells.cells[c].key] = r.threshold;
    out.cell_sizes[cells.cells[c].key] =
        static_cast<std::uint32_t>(cells.cells[c].members.size());
    for (std::uint32_t idx : r.admitted) {
      out.is_elite[idx] = 1;
      out.qualifying_cells[idx].push_back(cells.cells[c].key);
    }
  }
  for (std::uint32_t i = 0; i < out.is_elite.size(); ++i)
    if (out.is_elite[i]) out.elite_indices.push_back(i);
  return out;
}

std::string elite_table(const EliteSet& elite, const Corpus& corpus) {
  std::vector<std::pair<std::string, const std::vector<CellKey>*>> rows;
  rows.reserve(elite.qualifying_cells.size());
  for (const auto& [idx, cells] : elite.qualifying_cells)
    rows.emplace_back(corpus.articles[idx].id, &cells);
  std::sort(rows.begin(), rows.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  std::string out;
  for (const auto& [id, cells] : rows) {
    out += id;
    out += '\t';
    for (std::size_t i = 0; i < cells->size(); ++i) {
      if (i) out += ',';
      out += cell_key_label((*cells)[i]);
    }
    out += '\n';
  }
  return out;
}

std::vector<std::string> parse_elite_table_ids(const std::string& table) {
  std::vector<std::string> ids;
  std::istringstream in(table);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto tab = line.find('\t');
    ids.push_back(tab == std::string::npos ? line : line.substr(0, tab));
  }
  return ids;
}

}  // namespace refgeo
